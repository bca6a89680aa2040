//! Seeded batteries that certify the loop-group pair `(α, R)`: every check
//! reports its worst residual next to the tolerance it is judged against.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{
    d_one_form_numeric, d_r_numeric, delta_form_alpha, delta_form_r, eval_alpha, eval_r,
    left_invariance_check, left_invariance_fd_check, pushforward_fd_check, r_left_invariance_check,
    ConnectionForm,
};
use crate::lie::{ad_invariance_check, random_algebra, random_group};
use crate::loops::{derive_seed, random_smooth_loop, random_tangent, seeded_rng, DiscreteLoop, LoopTangent};
use crate::period::{sphere_period, LoopSurface};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// Passes when `residual ≤ tolerance`; a NaN residual fails.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub antisymmetry: f64,
    pub bilinearity: f64,
    pub delta_alpha: f64,
    /// Bound on `|δR − dα| / (1 + |δR|)`.
    pub delta_r: f64,
    /// Bound on `residual(h/2) / residual(h)`.
    pub convergence: f64,
    pub closedness: f64,
    pub pushforward: f64,
    pub doubling: f64,
    pub left_invariance: f64,
    pub left_invariance_fd: f64,
    pub ad_invariance: f64,
    pub integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            antisymmetry: 1e-11,
            bilinearity: 1e-12,
            delta_alpha: 1e-9,
            delta_r: 5e-5,
            convergence: 1.0 / 3.0,
            closedness: 1e-5,
            pushforward: 1e-7,
            doubling: 1e-10,
            left_invariance: 0.0,
            left_invariance_fd: 1e-9,
            ad_invariance: 1e-10,
            integrality: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub dim: usize,
    pub samples: usize,
    pub modes: usize,
    pub seed: u64,
    pub step: f64,
    pub trials: usize,
    /// Test hook: replaces `α` by `−α` in the `dα` evaluation.
    pub negate_alpha: bool,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            dim: 2,
            samples: 128,
            modes: 3,
            seed: 0,
            step: 1e-3,
            trials: 100,
            negate_alpha: false,
            tolerances: Tolerances::default(),
        }
    }
}

/// Step used for the product-curve derivative in the pushforward check.
const PUSHFORWARD_STEP: f64 = 1e-3;

/// Worst residuals of one seeded configuration.
#[derive(Debug, Clone, Copy, Default)]
struct Trial {
    antisymmetry: f64,
    bilinearity: f64,
    delta_alpha: f64,
    delta_r: f64,
    delta_r_half: f64,
    closedness: f64,
    pushforward: f64,
    doubling: f64,
    left_invariance: f64,
    left_invariance_fd: f64,
    ad_invariance: f64,
}

impl Trial {
    fn max(self, o: Trial) -> Trial {
        Trial {
            antisymmetry: self.antisymmetry.max(o.antisymmetry),
            bilinearity: self.bilinearity.max(o.bilinearity),
            delta_alpha: self.delta_alpha.max(o.delta_alpha),
            delta_r: self.delta_r.max(o.delta_r),
            delta_r_half: self.delta_r_half.max(o.delta_r_half),
            closedness: self.closedness.max(o.closedness),
            pushforward: self.pushforward.max(o.pushforward),
            doubling: self.doubling.max(o.doubling),
            left_invariance: self.left_invariance.max(o.left_invariance),
            left_invariance_fd: self.left_invariance_fd.max(o.left_invariance_fd),
            ad_invariance: self.ad_invariance.max(o.ad_invariance),
        }
    }
}

/// NaN-propagating maximum, so a broken trial cannot hide.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

struct Inputs {
    loops: Vec<DiscreteLoop>,
    tangents: Vec<LoopTangent>,
}

fn inputs(cfg: &VerifyConfig, seed: u64, samples: usize) -> Result<Inputs> {
    let loops = (0..3)
        .map(|k| random_smooth_loop(derive_seed(seed, k), cfg.dim, samples, cfg.modes))
        .collect::<Result<_>>()?;
    let tangents = (0..6)
        .map(|k| random_tangent(derive_seed(seed, 10 + k), cfg.dim, samples, cfg.modes))
        .collect::<Result<_>>()?;
    Ok(Inputs { loops, tangents })
}

/// `|δR − dα| / (1 + |δR|)` at step `h`.
fn delta_r_residual(cfg: &VerifyConfig, inp: &Inputs, h: f64) -> Result<f64> {
    let (g, t) = (&inp.loops, &inp.tangents);
    let point = [g[0].clone(), g[1].clone()];
    let xi = [t[0].clone(), t[1].clone()];
    let eta = [t[2].clone(), t[3].clone()];
    let dr = delta_form_r(&point, &xi, &eta)?;
    let alpha = ConnectionForm {
        sign: if cfg.negate_alpha { -1.0 } else { 1.0 },
    };
    let da = d_one_form_numeric(&alpha, &point, &xi, &eta, h)?;
    Ok((dr - da).abs() / (1.0 + dr.abs()))
}

fn run_trial(cfg: &VerifyConfig, index: usize) -> Result<Trial> {
    let seed = derive_seed(cfg.seed, index as u64);
    let inp = inputs(cfg, seed, cfg.samples)?;
    let (g, t) = (&inp.loops, &inp.tangents);
    let mut rng = seeded_rng(seed, 2);
    let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));

    let antisymmetry = (eval_r(&t[0], &t[1])? + eval_r(&t[1], &t[0])?).abs();

    let combo = t[0].linear_combination(a, &t[2], b)?;
    let first = (eval_r(&combo, &t[1])? - a * eval_r(&t[0], &t[1])? - b * eval_r(&t[2], &t[1])?).abs();
    let second = (eval_r(&t[1], &combo)? - a * eval_r(&t[1], &t[0])? - b * eval_r(&t[1], &t[2])?).abs();
    let alpha = (eval_alpha(&g[1], &combo)? - a * eval_alpha(&g[1], &t[0])? - b * eval_alpha(&g[1], &t[2])?).abs();
    let bilinearity = worst(worst(first, second), alpha);

    let delta_alpha = delta_form_alpha(
        &[g[0].clone(), g[1].clone(), g[2].clone()],
        &[t[0].clone(), t[1].clone(), t[2].clone()],
    )?
    .abs();

    let delta_r = delta_r_residual(cfg, &inp, cfg.step)?;
    let delta_r_half = delta_r_residual(cfg, &inp, cfg.step / 2.0)?;

    let closedness = d_r_numeric(&g[0], &[t[3].clone(), t[4].clone(), t[5].clone()], cfg.step)?.abs();

    let pushforward = pushforward_fd_check(&g[0], &g[1], &t[0], &t[1], PUSHFORWARD_STEP)?;

    let fine = inputs(cfg, seed, 2 * cfg.samples)?;
    let doubling = worst(
        (eval_r(&fine.tangents[0], &fine.tangents[1])? - eval_r(&t[0], &t[1])?).abs(),
        (eval_alpha(&fine.loops[1], &fine.tangents[0])? - eval_alpha(&g[1], &t[0])?).abs(),
    );

    let left_invariance = worst(
        left_invariance_check(&g[2], &g[0], &g[1], &t[0])?,
        r_left_invariance_check(&g[2], &g[0], &t[0], &t[1])?,
    );
    let left_invariance_fd = left_invariance_fd_check(&g[2], &g[0], &g[1], &t[0], &t[1], cfg.step)?;

    let k = random_group(&mut rng, cfg.dim);
    let (x, y) = (random_algebra(&mut rng, cfg.dim), random_algebra(&mut rng, cfg.dim));
    let ad_invariance = ad_invariance_check(&k, &x, &y)?;

    Ok(Trial {
        antisymmetry,
        bilinearity,
        delta_alpha,
        delta_r,
        delta_r_half,
        closedness,
        pushforward,
        doubling,
        left_invariance,
        left_invariance_fd,
        ad_invariance,
    })
}

fn check_config(cfg: &VerifyConfig) -> Result<()> {
    if cfg.dim < 2 {
        return Err(Error::Argument(format!("matrix dimension {} < 2", cfg.dim)));
    }
    if !(crate::forms::STEP_RANGE.0..=crate::forms::STEP_RANGE.1).contains(&(cfg.step / 2.0))
        || cfg.step > crate::forms::STEP_RANGE.1
    {
        return Err(Error::Argument(format!(
            "step {:e} and its half must lie in [{:e}, {:e}]",
            cfg.step,
            crate::forms::STEP_RANGE.0,
            crate::forms::STEP_RANGE.1
        )));
    }
    // shape guards (sample count, mode limit) live in the loop synthesis
    random_smooth_loop(0, cfg.dim, cfg.samples, cfg.modes)?;
    Ok(())
}

/// Runs `cfg.trials` seeded configurations in parallel and reports the worst
/// residual of each check. Zero trials give an empty list.
pub fn run_battery(cfg: &VerifyConfig) -> Result<Vec<CheckRecord>> {
    check_config(cfg)?;
    if cfg.trials == 0 {
        return Ok(Vec::new());
    }
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_>>()?;
    let w = trials
        .iter()
        .fold(Trial::default(), |acc, t| acc.max(*t));
    let nan = trials.iter().any(|t| {
        [
            t.antisymmetry,
            t.bilinearity,
            t.delta_alpha,
            t.delta_r,
            t.delta_r_half,
            t.closedness,
            t.pushforward,
            t.doubling,
            t.left_invariance,
            t.left_invariance_fd,
            t.ad_invariance,
        ]
        .iter()
        .any(|v| v.is_nan())
    });
    if nan {
        return Err(Error::Numerical("a trial produced NaN".into()));
    }
    let tol = &cfg.tolerances;
    Ok(vec![
        CheckRecord::new("r_antisymmetry", w.antisymmetry, tol.antisymmetry),
        CheckRecord::new("bilinearity", w.bilinearity, tol.bilinearity),
        CheckRecord::new("delta_alpha", w.delta_alpha, tol.delta_alpha),
        CheckRecord::new("delta_r_equals_d_alpha", w.delta_r, tol.delta_r),
        CheckRecord::new(
            "delta_r_convergence_ratio",
            w.delta_r_half / w.delta_r,
            tol.convergence,
        ),
        CheckRecord::new("d_r_closedness", w.closedness, tol.closedness),
        CheckRecord::new("pushforward_vs_product_curve", w.pushforward, tol.pushforward),
        CheckRecord::new("sample_doubling_stability", w.doubling, tol.doubling),
        CheckRecord::new("left_invariance", w.left_invariance, tol.left_invariance),
        CheckRecord::new("left_invariance_charts", w.left_invariance_fd, tol.left_invariance_fd),
        CheckRecord::new("ad_invariance", w.ad_invariance, tol.ad_invariance),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodOutcome {
    pub grid: (usize, usize),
    pub doubled_grid: (usize, usize),
    /// `∫R`, the period of `2πi R` over `2πi`.
    pub period_over_2pi_i: f64,
    pub doubled_period_over_2pi_i: f64,
    /// `∫R / 2π`, kept for reference.
    pub raw_over_2pi: f64,
    pub nearest_integer: i64,
    pub doubled_nearest_integer: i64,
    pub checks: Vec<CheckRecord>,
}

/// Computes the period at the surface's grid and at the doubled grid and
/// checks that both are within tolerance of the same nonzero integer.
pub fn period_battery(surface: &LoopSurface, tolerance: f64) -> Result<PeriodOutcome> {
    let fine_surface = surface.doubled();
    let coarse = sphere_period(surface)?;
    let fine = sphere_period(&fine_surface)?;
    let (k1, k2) = (coarse.round() as i64, fine.round() as i64);
    let checks = vec![
        CheckRecord::new("period_integrality", (coarse - k1 as f64).abs(), tolerance),
        CheckRecord::new("period_integrality_doubled", (fine - k2 as f64).abs(), tolerance),
        CheckRecord::new("period_same_integer", (k1 - k2).abs() as f64, 0.0),
        CheckRecord::new("period_nonzero", if k1 != 0 { 0.0 } else { 1.0 }, 0.0),
    ];
    Ok(PeriodOutcome {
        grid: surface.grid(),
        doubled_grid: fine_surface.grid(),
        period_over_2pi_i: coarse,
        doubled_period_over_2pi_i: fine,
        raw_over_2pi: coarse / (2.0 * std::f64::consts::PI),
        nearest_integer: k1,
        doubled_nearest_integer: k2,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: usize) -> VerifyConfig {
        VerifyConfig {
            trials,
            samples: 64,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn battery_passes() {
        let checks = run_battery(&small(4)).unwrap();
        assert_eq!(checks.len(), 11);
        for c in &checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn zero_trials_is_empty() {
        assert!(run_battery(&small(0)).unwrap().is_empty());
    }

    #[test]
    fn negated_alpha_fails() {
        let cfg = VerifyConfig {
            negate_alpha: true,
            ..small(2)
        };
        let checks = run_battery(&cfg).unwrap();
        let c = checks.iter().find(|c| c.name == "delta_r_equals_d_alpha").unwrap();
        assert!(!c.pass);
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_battery(&small(3)).unwrap(), run_battery(&small(3)).unwrap());
    }

    #[test]
    fn rejects_bad_step() {
        let cfg = VerifyConfig {
            step: 1e-1,
            ..small(1)
        };
        assert!(matches!(run_battery(&cfg), Err(Error::Argument(_))));
    }

    #[test]
    fn degenerate_period_fails_nonzero() {
        let s = LoopSurface::new(crate::period::SurfaceFamily::Degenerate, 4, 4, 16).unwrap();
        let out = period_battery(&s, 1e-3).unwrap();
        assert_eq!(out.nearest_integer, 0);
        assert!(!out.checks.iter().all(|c| c.pass));
    }
}
