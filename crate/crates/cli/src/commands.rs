//! One function per subcommand, each producing a [`Report`].

use std::collections::BTreeMap;
use std::path::Path;

use cext_core::cohomology::exhaustive;
use cext_core::group::GroupTable;
use cext_core::{
    build_extension, fingerprint, period_battery, run_battery, second_cohomology, Cochain, CyclicCoefficients,
    Error, FiniteGroup, GroupFingerprint, LoopSurface, SurfaceFamily, Tolerances, VerifyConfig,
};
use cext_core::CheckRecord;
use serde_json::{json, Value};

use crate::report::{read_input, CliError, InputDigest, Report};
use crate::{ExtendArgs, FiniteArgs, PeriodArgs, VerifyArgs};

/// Largest `|H²| · |Ĝ|³` for which every class is turned into a table.
pub const EXTENSION_BUDGET: u128 = 1 << 32;

fn load_group(path: &Path) -> Result<(FiniteGroup, InputDigest), CliError> {
    let (text, digest) = read_input("group", path)?;
    let group = FiniteGroup::parse(&text).map_err(|e| CliError::Input(path.to_path_buf(), e))?;
    Ok((group, digest))
}

struct Classes {
    group: FiniteGroup,
    digest: InputDigest,
    modulus: u32,
    counts: cext_core::CohomologyCounts,
    representatives: Vec<Cochain>,
    fingerprints: Option<Vec<GroupFingerprint>>,
    checks: Vec<CheckRecord>,
    oracle: Value,
}

fn count_record(name: &str, failures: usize) -> CheckRecord {
    CheckRecord::new(name, failures as f64, 0.0)
}

fn classes(args: &FiniteArgs, require_fingerprints: bool) -> Result<Classes, CliError> {
    let (group, digest) = load_group(&args.group)?;
    let coeffs = CyclicCoefficients::new(args.modulus)?;
    let h2 = second_cohomology(&group, coeffs)?;
    let counts = h2.counts();
    let mut checks = Vec::new();

    let not_cocycles = h2
        .representatives
        .iter()
        .filter(|r| !h2.cocycles.contains(r))
        .count();
    checks.push(count_record("representatives_are_cocycles", not_cocycles));
    let expected = counts.cocycles / counts.coboundaries;
    checks.push(CheckRecord::new(
        "class_count_is_quotient",
        (counts.classes as f64 - expected as f64).abs(),
        0.0,
    ));

    let ext_order = (group.order() as u128) * u128::from(args.modulus);
    let fingerprints = if counts.classes * ext_order.pow(3) <= EXTENSION_BUDGET {
        let mut prints = Vec::with_capacity(h2.representatives.len());
        let mut failures = 0;
        for r in &h2.representatives {
            match build_extension(&group, r) {
                Ok(ext) => prints.push(fingerprint(&ext)),
                Err(Error::NotCocycle { .. } | Error::NotAGroup(_)) => failures += 1,
                Err(e) => return Err(e.into()),
            }
        }
        checks.push(count_record("extensions_are_groups", failures));
        (failures == 0).then_some(prints)
    } else if require_fingerprints {
        return Err(Error::Capacity(format!(
            "{} classes of extensions of order {ext_order} exceed the table budget",
            counts.classes
        ))
        .into());
    } else {
        None
    };

    let oracle = if exhaustive::feasible(group.order(), args.modulus) {
        let o = exhaustive::run(&group, args.modulus)?;
        let agrees = o.agrees_with(&h2)?;
        checks.push(count_record("exhaustive_oracle_concordance", usize::from(!agrees)));
        json!({
            "cocycles": o.cocycles.len(),
            "coboundaries": o.coboundaries.len(),
            "classes": o.class_count,
            "agrees": agrees,
        })
    } else {
        Value::Null
    };

    Ok(Classes {
        group,
        digest,
        modulus: args.modulus,
        counts,
        representatives: h2.representatives,
        fingerprints,
        checks,
        oracle,
    })
}

fn finite_config(args: &FiniteArgs) -> Value {
    json!({ "group": args.group.display().to_string(), "modulus": args.modulus })
}

/// Distinct fingerprints with the classes realizing each, in fingerprint order.
fn by_fingerprint(prints: &[GroupFingerprint]) -> Vec<(GroupFingerprint, Vec<usize>)> {
    let mut map: BTreeMap<&GroupFingerprint, Vec<usize>> = BTreeMap::new();
    for (i, f) in prints.iter().enumerate() {
        map.entry(f).or_default().push(i);
    }
    map.into_iter().map(|(f, v)| (f.clone(), v)).collect()
}

pub fn h2(args: &FiniteArgs) -> Result<Report, CliError> {
    let c = classes(args, false)?;
    let reps: Vec<Value> = c
        .representatives
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "class": i,
                "values": r.values(),
                "fingerprint": c.fingerprints.as_ref().map(|f| &f[i]),
            })
        })
        .collect();
    let distinct = c.fingerprints.as_ref().map(|f| by_fingerprint(f).len());
    let result = json!({
        "group_order": c.group.order(),
        "modulus": c.modulus,
        "counts": c.counts,
        "distinct_fingerprints": distinct,
        "representatives": reps,
        "exhaustive_oracle": c.oracle,
    });
    Ok(Report::new("h2", finite_config(args), vec![c.digest], c.checks, result))
}

pub fn classify(args: &FiniteArgs) -> Result<Report, CliError> {
    let c = classes(args, true)?;
    let prints = c.fingerprints.unwrap_or_default();
    let groups: Vec<Value> = by_fingerprint(&prints)
        .into_iter()
        .map(|(f, members)| {
            json!({
                "fingerprint": f,
                "class_count": members.len(),
                "classes": members,
                "representative": c.representatives[members[0]].values(),
            })
        })
        .collect();
    let result = json!({
        "group_order": c.group.order(),
        "modulus": c.modulus,
        "counts": c.counts,
        "distinct_fingerprints": groups.len(),
        "isomorphism_types": groups,
        "exhaustive_oracle": c.oracle,
    });
    Ok(Report::new("classify", finite_config(args), vec![c.digest], c.checks, result))
}

pub fn extend(args: &ExtendArgs) -> Result<Report, CliError> {
    let (group, group_digest) = load_group(&args.group)?;
    let (text, cochain_digest) = read_input("cochain", &args.cochain)?;
    let c = Cochain::parse(&text, group.order()).map_err(|e| CliError::Input(args.cochain.clone(), e))?;
    if c.degree() != 2 {
        return Err(CliError::Usage(format!("cochain has degree {}, need 2", c.degree())));
    }
    if let Some(n) = args.modulus.filter(|&n| n != c.coeffs().modulus()) {
        return Err(CliError::Usage(format!(
            "--modulus {n} disagrees with the cochain file's modulus {}",
            c.coeffs().modulus()
        )));
    }
    let config = json!({
        "group": args.group.display().to_string(),
        "cochain": args.cochain.display().to_string(),
        "modulus": c.coeffs().modulus(),
    });
    let inputs = vec![group_digest, cochain_digest];
    let ext = match build_extension(&group, &c) {
        Ok(ext) => ext,
        Err(Error::NotCocycle { g, h, k }) => {
            let checks = vec![CheckRecord::new("cocycle_condition", 1.0, 0.0)];
            let result = json!({ "cocycle": false, "violation": { "g": g, "h": h, "k": k } });
            return Ok(Report::new("extend", config, inputs, checks, result));
        }
        Err(e) => return Err(e.into()),
    };

    let order = ext.order();
    let projection_failures = (0..order)
        .flat_map(|x| (0..order).map(move |y| (x, y)))
        .filter(|&(x, y)| ext.projection(ext.mul(x, y)) != group.mul(ext.projection(x), ext.projection(y)))
        .count();
    let n = c.coeffs().modulus();
    let central_failures = (0..n)
        .map(|a| ext.inclusion(a))
        .filter(|&z| ext.projection(z) != 0 || (0..order).any(|x| ext.mul(z, x) != ext.mul(x, z)))
        .count();
    let checks = vec![
        CheckRecord::new("cocycle_condition", 0.0, 0.0),
        count_record("projection_is_homomorphism", projection_failures),
        count_record("kernel_is_central", central_failures),
    ];
    let table: Vec<&[usize]> = ext.table().chunks(order).collect();
    let result = json!({
        "cocycle": true,
        "order": order,
        "identity": ext.identity(),
        "element_encoding": "index = g * n + a",
        "fingerprint": fingerprint(&ext),
        "table": table,
    });
    Ok(Report::new("extend", config, inputs, checks, result))
}

fn apply_tolerances(tol: &mut Tolerances, overrides: &[String]) -> Result<(), CliError> {
    for entry in overrides {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("tolerance override {entry:?} is not NAME=VALUE")))?;
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| *v >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("tolerance {value:?} is not a nonnegative number")))?;
        let slot = match name {
            "antisymmetry" => &mut tol.antisymmetry,
            "bilinearity" => &mut tol.bilinearity,
            "delta_alpha" => &mut tol.delta_alpha,
            "delta_r" => &mut tol.delta_r,
            "convergence" => &mut tol.convergence,
            "closedness" => &mut tol.closedness,
            "pushforward" => &mut tol.pushforward,
            "doubling" => &mut tol.doubling,
            "left_invariance" => &mut tol.left_invariance,
            "left_invariance_fd" => &mut tol.left_invariance_fd,
            "ad_invariance" => &mut tol.ad_invariance,
            "integrality" => &mut tol.integrality,
            _ => return Err(CliError::Usage(format!("unknown tolerance {name:?}"))),
        };
        *slot = value;
    }
    Ok(())
}

fn residual(checks: &[CheckRecord], name: &str) -> Option<f64> {
    checks.iter().find(|c| c.name == name).map(|c| c.residual)
}

pub fn verify(args: &VerifyArgs) -> Result<Report, CliError> {
    let mut tolerances = Tolerances::default();
    apply_tolerances(&mut tolerances, &args.tolerances)?;
    let cfg = VerifyConfig {
        dim: args.dim,
        samples: args.samples,
        modes: args.modes,
        seed: args.seed,
        step: args.step,
        trials: args.trials,
        negate_alpha: args.negate_alpha,
        tolerances,
    };
    let checks = run_battery(&cfg)?;
    let result = json!({
        "trials": cfg.trials,
        "residual_dalpha": residual(&checks, "delta_r_equals_d_alpha"),
        "residual_deltaalpha": residual(&checks, "delta_alpha"),
        "residual_dR": residual(&checks, "d_r_closedness"),
        "residual_antisym": residual(&checks, "r_antisymmetry"),
    });
    let config = serde_json::to_value(&cfg).expect("config serializes");
    Ok(Report::new("verify", config, Vec::new(), checks, result))
}

fn parse_grid(grid: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("grid {grid:?} is not of the form UxPHI"));
    let (u, phi) = grid.split_once(['x', 'X', '×']).ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, phi.trim().parse().map_err(|_| bad())?))
}

pub fn period(args: &PeriodArgs) -> Result<Report, CliError> {
    if args.dim != 2 {
        return Err(Error::Unsupported(format!(
            "the sphere of loops lives in SU(2), got --dim {}",
            args.dim
        ))
        .into());
    }
    let mut tolerances = Tolerances::default();
    apply_tolerances(&mut tolerances, &args.tolerances)?;
    let (u, phi) = parse_grid(&args.grid)?;
    let family = if args.degenerate {
        SurfaceFamily::Degenerate
    } else {
        SurfaceFamily::Standard
    };
    let mut surface = LoopSurface::new(family, u, phi, args.samples)?;
    if args.reverse_orientation {
        surface = surface.reversed();
    }
    let outcome = period_battery(&surface, tolerances.integrality)?;
    let config = json!({
        "dim": args.dim,
        "samples": args.samples,
        "grid": [u, phi],
        "family": if args.degenerate { "degenerate" } else { "standard" },
        "reverse_orientation": args.reverse_orientation,
        "integrality_tolerance": tolerances.integrality,
    });
    let result = json!({
        "period_over_2pi_i": outcome.period_over_2pi_i,
        "doubled_period_over_2pi_i": outcome.doubled_period_over_2pi_i,
        "nearest_integer": outcome.nearest_integer,
        "doubled_nearest_integer": outcome.doubled_nearest_integer,
        "deviation": (outcome.period_over_2pi_i - outcome.nearest_integer as f64).abs(),
        "integral_of_r_over_2pi": outcome.raw_over_2pi,
        "grid": outcome.grid,
        "doubled_grid": outcome.doubled_grid,
        "convention": "curvature 2πi·R; the period over 2πi equals the integral of R",
    });
    Ok(Report::new("period", config, Vec::new(), outcome.checks, result))
}
