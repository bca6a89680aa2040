//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use cext_core::cohomology::exhaustive;
use cext_core::forms::{left_invariance_fd_check, r_left_invariance_check};
use cext_core::loops::{derive_seed, seeded_rng};
use cext_core::{
    build_extension, coboundary_isomorphism, cocycle_space, cohomologous, d_alpha_numeric, d_r_numeric,
    delta_cochain, delta_form_alpha, delta_form_r, delta_squared, eval_alpha, eval_r, fingerprint,
    left_invariance_check, random_smooth_loop, random_tangent, second_cohomology, Cochain, CyclicCoefficients,
    DiscreteLoop, FiniteGroup, GroupTable, LoopTangent,
};
use rand::Rng;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn zn(n: u32) -> CyclicCoefficients {
    CyclicCoefficients::new(n).unwrap()
}

fn klein() -> FiniteGroup {
    FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2))
}

fn catalog() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z2", FiniteGroup::cyclic(2)),
        ("Z3", FiniteGroup::cyclic(3)),
        ("Z4", FiniteGroup::cyclic(4)),
        ("Z2xZ2", klein()),
        ("S3", FiniteGroup::symmetric(3)),
    ]
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn all_cochains(degree: usize, m: usize, n: u32) -> impl Iterator<Item = Cochain> {
    let len = m.pow(degree as u32);
    let total = u64::from(n).pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut values = vec![0u32; len];
        for v in values.iter_mut() {
            *v = (idx % u64::from(n)) as u32;
            idx /= u64::from(n);
        }
        Cochain::new(degree, m, zn(n), values).unwrap()
    })
}

fn random_cochain<R: Rng>(rng: &mut R, degree: usize, m: usize, n: u32) -> Cochain {
    let values = (0..m.pow(degree as u32)).map(|_| rng.gen_range(0..n)).collect();
    Cochain::new(degree, m, zn(n), values).unwrap()
}

fn delta_squared_vanishes() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(1, 0);
    let mut checked = 0usize;
    let mut failures = 0usize;
    for (_, g) in catalog() {
        let m = g.order();
        for n in [2, 3, 4] {
            for degree in 0..=1 {
                for c in all_cochains(degree, m, n) {
                    checked += 1;
                    failures += usize::from(!delta_squared(&g, &c).unwrap().is_zero());
                }
            }
            for _ in 0..200 {
                let c = random_cochain(&mut rng, 2, m, n);
                checked += 1;
                failures += usize::from(!delta_squared(&g, &c).unwrap().is_zero());
            }
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && within(t, 5),
        format!("{checked} cochains, {failures} nonzero δ², {:.2} s (limit 5 s)", t.as_secs_f64()),
    )
}

fn cocycle_iff_associative() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, g) in [("Z2", FiniteGroup::cyclic(2)), ("Z2xZ2", klein())] {
        let (mut cocycles, mut mismatches, mut total) = (0, 0, 0);
        for c in all_cochains(2, g.order(), 2) {
            total += 1;
            let is_cocycle = delta_cochain(&g, &c).unwrap().is_zero();
            let builds = build_extension(&g, &c).is_ok();
            cocycles += usize::from(is_cocycle);
            mismatches += usize::from(is_cocycle != builds);
        }
        pass &= mismatches == 0;
        detail.push(format!("{name}: {total} cochains, {cocycles} cocycles, {mismatches} mismatches"));
    }
    let t = start.elapsed();
    pass &= within(t, 60);
    outcome(pass, format!("{}; {:.2} s (limit 60 s)", detail.join("; "), t.as_secs_f64()))
}

fn classification_concordance() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    let z4 = fingerprint(&FiniteGroup::cyclic(4));
    let v4 = fingerprint(&klein());
    let q8 = fingerprint(&FiniteGroup::quaternion());
    let d4 = fingerprint(&FiniteGroup::dihedral(4));
    for (name, g, n) in [
        ("Z2/2", FiniteGroup::cyclic(2), 2),
        ("Z3/3", FiniteGroup::cyclic(3), 3),
        ("Z2xZ2/2", klein(), 2),
    ] {
        let h2 = second_cohomology(&g, zn(n)).unwrap();
        let oracle = exhaustive::run(&g, n).unwrap();
        let agrees = oracle.agrees_with(&h2).unwrap();
        let c = h2.counts();
        pass &= agrees;
        let prints: Vec<_> = h2
            .representatives
            .iter()
            .map(|r| fingerprint(&build_extension(&g, r).unwrap()))
            .collect();
        let mut extra = String::new();
        if name == "Z2/2" {
            let ok = prints.contains(&z4) && prints.contains(&v4);
            pass &= ok;
            extra = format!(", realizes Z4 and Z2xZ2: {ok}");
        }
        if name == "Z2xZ2/2" {
            let q = prints.iter().filter(|f| **f == q8).count();
            let d = prints.iter().filter(|f| **f == d4).count();
            pass &= q == 1 && d >= 1;
            extra = format!(", Q8 classes {q}, D4 classes {d}");
        }
        detail.push(format!(
            "{name}: |Z²|={} |B²|={} |H²|={} oracle agrees: {agrees}{extra}",
            c.cocycles, c.coboundaries, c.classes
        ));
    }
    outcome(pass, detail.join("; "))
}

fn cohomologous_tables_isomorphic() -> Outcome {
    let groups = [
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
        FiniteGroup::symmetric(3),
        klein(),
        FiniteGroup::cyclic(4),
    ];
    let mut failures = 0;
    for trial in 0..50u64 {
        let mut rng = seeded_rng(4, trial);
        let g = &groups[trial as usize % groups.len()];
        let n = rng.gen_range(2..=4);
        let coeffs = zn(n);
        let gens = cocycle_space(g, coeffs).unwrap().generators();
        let mut c = Cochain::zero(2, g.order(), coeffs);
        for gen in &gens {
            for _ in 0..rng.gen_range(0..n) {
                c = c.add(gen).unwrap();
            }
        }
        let d = random_cochain(&mut rng, 1, g.order(), n);
        let shifted = c.add(&delta_cochain(g, &d).unwrap()).unwrap();
        let (e1, e2) = (build_extension(g, &shifted).unwrap(), build_extension(g, &c).unwrap());
        // witness recovered by linear algebra, independently of d
        let Some(w) = cohomologous(g, &shifted, &c).unwrap() else {
            failures += 1;
            continue;
        };
        for map in [coboundary_isomorphism(&e1, &d), coboundary_isomorphism(&e1, &w)] {
            let order = e1.order();
            let bijective = {
                let mut seen = vec![false; order];
                map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            };
            let entries_match =
                (0..order).all(|x| (0..order).all(|y| map[e1.mul(x, y)] == e2.mul(map[x], map[y])));
            failures += usize::from(!(bijective && entries_match));
        }
    }
    outcome(failures == 0, format!("50 pairs, 100 witness maps, {failures} mismatched tables"))
}

const N: usize = 128;
const K: usize = 3;

fn loops(seed: u64, n: usize, count: u64) -> Vec<DiscreteLoop> {
    (0..count)
        .map(|k| random_smooth_loop(derive_seed(seed, k), n, N, K).unwrap())
        .collect()
}

fn tangents(seed: u64, n: usize, count: u64) -> Vec<LoopTangent> {
    (0..count)
        .map(|k| random_tangent(derive_seed(seed, 100 + k), n, N, K).unwrap())
        .collect()
}

fn delta_alpha_vanishes() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        for trial in 0..100 {
            let seed = derive_seed(5, trial * 10 + n as u64);
            let g = loops(seed, n, 3);
            let x = tangents(seed, n, 3);
            let v = delta_form_alpha(
                &[g[0].clone(), g[1].clone(), g[2].clone()],
                &[x[0].clone(), x[1].clone(), x[2].clone()],
            )
            .unwrap();
            worst = worst.max(v.abs());
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-9 && within(t, 30),
        format!("200 triples (n = 2, 3), max |δα| = {worst:.3e} (tol 1e-9), {:.2} s (limit 30 s)", t.as_secs_f64()),
    )
}

fn delta_r_equals_d_alpha() -> Outcome {
    let start = Instant::now();
    let h = 1e-3;
    let (mut worst, mut worst_abs, mut worst_abs_half): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut within_tol = true;
    for trial in 0..100 {
        let seed = derive_seed(6, trial);
        let n = 2 + (trial as usize % 2);
        let g = loops(seed, n, 2);
        let t = tangents(seed, n, 4);
        let point = [g[0].clone(), g[1].clone()];
        let xi = [t[0].clone(), t[1].clone()];
        let eta = [t[2].clone(), t[3].clone()];
        let dr = delta_form_r(&point, &xi, &eta).unwrap();
        let r1 = (dr - d_alpha_numeric(&point, &xi, &eta, h).unwrap()).abs();
        let r2 = (dr - d_alpha_numeric(&point, &xi, &eta, h / 2.0).unwrap()).abs();
        within_tol &= r1 <= 5e-5 * (1.0 + dr.abs());
        worst = worst.max(r1 / (1.0 + dr.abs()));
        worst_abs = worst_abs.max(r1);
        worst_abs_half = worst_abs_half.max(r2);
    }
    let shrink = worst_abs / worst_abs_half;
    let t = start.elapsed();
    outcome(
        within_tol && shrink >= 3.0 && within(t, 120),
        format!(
            "100 configs, max |δR − dα|/(1+|δR|) = {worst:.3e} (tol 5e-5), shrink at h/2 = {shrink:.2}x (need ≥ 3), {:.2} s (limit 120 s)",
            t.as_secs_f64()
        ),
    )
}

fn closedness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for trial in 0..50 {
        let seed = derive_seed(7, trial);
        let g = loops(seed, 2, 1);
        let t = tangents(seed, 2, 3);
        let v = d_r_numeric(&g[0], &[t[0].clone(), t[1].clone(), t[2].clone()], 1e-3).unwrap();
        worst = worst.max(v.abs());
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-5 && within(t, 60),
        format!("50 trials, max |dR| = {worst:.3e} (tol 1e-5), {:.2} s (limit 60 s)", t.as_secs_f64()),
    )
}

fn antisymmetry_linearity_invariance() -> Outcome {
    let (mut anti, mut lin, mut exact, mut fd): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for trial in 0..100 {
        let seed = derive_seed(8, trial);
        let n = 2 + (trial as usize % 2);
        let g = loops(seed, n, 3);
        let t = tangents(seed, n, 3);
        let mut rng = seeded_rng(seed, 9);
        let (a, b): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        anti = anti.max((eval_r(&t[0], &t[1]).unwrap() + eval_r(&t[1], &t[0]).unwrap()).abs());
        let combo = t[0].linear_combination(a, &t[2], b).unwrap();
        let r = |x: &LoopTangent, y: &LoopTangent| eval_r(x, y).unwrap();
        let al = |x: &LoopTangent| eval_alpha(&g[1], x).unwrap();
        lin = lin
            .max((r(&combo, &t[1]) - a * r(&t[0], &t[1]) - b * r(&t[2], &t[1])).abs())
            .max((r(&t[1], &combo) - a * r(&t[1], &t[0]) - b * r(&t[1], &t[2])).abs())
            .max((al(&combo) - a * al(&t[0]) - b * al(&t[2])).abs());
        exact = exact
            .max(left_invariance_check(&g[2], &g[0], &g[1], &t[0]).unwrap())
            .max(r_left_invariance_check(&g[2], &g[0], &t[0], &t[1]).unwrap());
        fd = fd.max(left_invariance_fd_check(&g[2], &g[0], &g[1], &t[0], &t[1], 1e-3).unwrap());
    }
    outcome(
        anti <= 1e-11 && lin <= 1e-12 && exact == 0.0 && fd <= 1e-9,
        format!(
            "100 trials: antisymmetry {anti:.3e} (tol 1e-11), linearity {lin:.3e} (tol 1e-12), left invariance {exact:e} (exact 0), chart cross-check {fd:.3e} (tol 1e-9)"
        ),
    )
}

fn cext(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cext")).args(args).output().expect("cext runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn integrality() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("period.json");
    let start = Instant::now();
    let (code, _) = cext(&["period", "--grid", "64x64", "--samples", "128", "--out", path.to_str().unwrap()]);
    let t = start.elapsed();
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let r = &report["result"];
    let (p1, p2) = (r["period_over_2pi_i"].as_f64().unwrap(), r["doubled_period_over_2pi_i"].as_f64().unwrap());
    let (k1, k2) = (r["nearest_integer"].as_i64().unwrap(), r["doubled_nearest_integer"].as_i64().unwrap());
    let raw = r["integral_of_r_over_2pi"].as_f64().unwrap();
    let pass = code == 0
        && k1 == k2
        && k1 != 0
        && (p1 - k1 as f64).abs() <= 1e-3
        && (p2 - k2 as f64).abs() <= 1e-3
        && within(t, 120);
    outcome(
        pass,
        format!(
            "period/2πi = {p1:.9} (64x64), {p2:.9} (128x128), integer {k1} recorded; ∫R/2π = {raw:.6}; exit {code}; {:.2} s (limit 120 s)",
            t.as_secs_f64()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let args = ["verify", "--trials", "20", "--seed", "11", "--out", path.to_str().unwrap()];
    let (c1, _) = cext(&args);
    let first = std::fs::read(&path).unwrap();
    let (c2, _) = cext(&args);
    let second = std::fs::read(&path).unwrap();
    outcome(
        c1 == 0 && c2 == 0 && first == second,
        format!("two verify runs: exits {c1}/{c2}, {} bytes, identical: {}", first.len(), first == second),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("δ² = 0", delta_squared_vanishes),
        ("cocycle ⇔ associativity", cocycle_iff_associative),
        ("classification concordance", classification_concordance),
        ("cohomologous ⇒ isomorphic tables", cohomologous_tables_isomorphic),
        ("δα = 0", delta_alpha_vanishes),
        ("δR = dα", delta_r_equals_d_alpha),
        ("closedness of R", closedness),
        ("antisymmetry, bilinearity, invariance", antisymmetry_linearity_invariance),
        ("integrality of the sphere period", integrality),
        ("deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "[{}] criterion {}: {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
