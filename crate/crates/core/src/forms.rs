//! The left-invariant 2-form `R` on the loop group, the 1-form `α` on pairs
//! of loops, the simplicial coboundary `δ = Σ (−1)^i d_i^*` on forms, and
//! finite-difference exterior derivatives used to check
//! `δR = dα`, `δα = 0` and `dR = 0`.
//!
//! Tangent vectors are always left-trivialized: a tangent `gX` at `g` is
//! stored as the `su(n)`-valued loop `X`.
//!
//! ```text
//! R(g)(gX, gY)                 = 1/(4π²) ∫ ⟨X, ∂_θ Y⟩ dθ
//! α(g₁, g₂)(g₁X₁, g₂X₂)        = 1/(4π²) ∫ ⟨X₁, (∂_θ g₂) g₂⁻¹⟩ dθ
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{project_algebra, trace_product, CMatrix};
use crate::loops::{
    circle_integral, right_log_derivative, tangent_derivative, DiscreteLoop, LoopTangent,
};

/// `1/(4π²)`.
pub const FORM_NORMALIZATION: f64 = 1.0 / (4.0 * PI * PI);

/// Accepted step range for the finite-difference derivatives.
pub const STEP_RANGE: (f64, f64) = (1e-4, 1e-2);

fn check_pair(x: &LoopTangent, y: &LoopTangent) -> Result<()> {
    if x.dim() != y.dim() || x.len() != y.len() {
        return Err(Error::Mismatch(format!(
            "tangents of (n, N) = ({}, {}) and ({}, {})",
            x.dim(),
            x.len(),
            y.dim(),
            y.len()
        )));
    }
    Ok(())
}

fn check_at(g: &DiscreteLoop, x: &LoopTangent) -> Result<()> {
    if g.dim() != x.dim() || g.len() != x.len() {
        return Err(Error::Mismatch(format!(
            "tangent of (n, N) = ({}, {}) at a loop of ({}, {})",
            x.dim(),
            x.len(),
            g.dim(),
            g.len()
        )));
    }
    Ok(())
}

fn check_step(h: f64) -> Result<()> {
    if !(STEP_RANGE.0..=STEP_RANGE.1).contains(&h) {
        return Err(Error::Argument(format!(
            "step {h:e} outside [{:e}, {:e}]",
            STEP_RANGE.0, STEP_RANGE.1
        )));
    }
    Ok(())
}

/// `R(gX, gY)`. The base loop does not enter, which is left invariance.
pub fn eval_r(x: &LoopTangent, y: &LoopTangent) -> Result<f64> {
    check_pair(x, y)?;
    let dy = tangent_derivative(y);
    let integrand: Vec<f64> = x
        .samples()
        .iter()
        .zip(&dy)
        .map(|(x, dy)| trace_product(x.matrix(), dy))
        .collect();
    Ok(FORM_NORMALIZATION * circle_integral(&integrand))
}

/// `α(g₁, g₂)(g₁X₁, g₂X₂)`, which depends only on `g₂` and `X₁`.
pub fn eval_alpha(g2: &DiscreteLoop, x1: &LoopTangent) -> Result<f64> {
    check_at(g2, x1)?;
    let v = right_log_derivative(g2);
    let integrand: Vec<f64> = x1
        .samples()
        .iter()
        .zip(&v)
        .map(|(x, v)| trace_product(x.matrix(), v))
        .collect();
    Ok(FORM_NORMALIZATION * circle_integral(&integrand))
}

/// A 1-form on `G^p`: value at a point on one tangent tuple.
pub trait OneForm: Sync {
    fn eval(&self, point: &[DiscreteLoop], tangent: &[LoopTangent]) -> Result<f64>;
}

/// A 2-form on `G^p`.
pub trait TwoForm: Sync {
    fn eval(&self, point: &[DiscreteLoop], xi: &[LoopTangent], eta: &[LoopTangent]) -> Result<f64>;
}

/// `R` as a 2-form on `G`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CurvatureForm;

impl TwoForm for CurvatureForm {
    fn eval(&self, point: &[DiscreteLoop], xi: &[LoopTangent], eta: &[LoopTangent]) -> Result<f64> {
        let ([g], [x], [y]) = (point, xi, eta) else {
            return Err(Error::Argument("R is a form on G, expected one loop".into()));
        };
        check_at(g, x)?;
        eval_r(x, y)
    }
}

/// `α` (times `sign`) as a 1-form on `G × G`. A negative sign is the
/// corrupted form used to check that the harness can fail.
#[derive(Debug, Clone, Copy)]
pub struct ConnectionForm {
    pub sign: f64,
}

impl Default for ConnectionForm {
    fn default() -> Self {
        ConnectionForm { sign: 1.0 }
    }
}

impl OneForm for ConnectionForm {
    fn eval(&self, point: &[DiscreteLoop], tangent: &[LoopTangent]) -> Result<f64> {
        let ([g1, g2], [x1, x2]) = (point, tangent) else {
            return Err(Error::Argument("α is a form on G × G, expected two loops".into()));
        };
        check_at(g1, x1)?;
        check_at(g2, x2)?;
        Ok(self.sign * eval_alpha(g2, x1)?)
    }
}

/// The face `d_i : G^{L} → G^{L−1}` and its differential on one tangent
/// tuple, for `0 ≤ i ≤ L`.
///
/// The merge face `i` sends `(…, g_i, g_{i+1}, …)` to `(…, g_i g_{i+1}, …)`;
/// in left trivialization the tangent becomes `Ad(g_{i+1}⁻¹) X_i + X_{i+1}`.
pub fn face_pushforward(
    i: usize,
    loops: &[DiscreteLoop],
    tangents: &[LoopTangent],
) -> Result<(Vec<DiscreteLoop>, Vec<LoopTangent>)> {
    let len = loops.len();
    if len == 0 || tangents.len() != len {
        return Err(Error::Argument(format!(
            "{len} loops with {} tangents",
            tangents.len()
        )));
    }
    if i > len {
        return Err(Error::Argument(format!("face index {i} out of range 0..={len}")));
    }
    for (g, x) in loops.iter().zip(tangents) {
        check_at(g, x)?;
    }
    if i == 0 {
        return Ok((loops[1..].to_vec(), tangents[1..].to_vec()));
    }
    if i == len {
        return Ok((loops[..len - 1].to_vec(), tangents[..len - 1].to_vec()));
    }
    let (a, b) = (i - 1, i);
    let mut out_loops = loops[..a].to_vec();
    let mut out_tangents = tangents[..a].to_vec();
    out_loops.push(loops[a].mul(&loops[b])?);
    out_tangents.push(tangents[a].adjoint_by(&loops[b].inverse())?.add(&tangents[b])?);
    out_loops.extend_from_slice(&loops[b + 1..]);
    out_tangents.extend_from_slice(&tangents[b + 1..]);
    Ok((out_loops, out_tangents))
}

/// `(δω)(ξ) = Σ_i (−1)^i ω(d_i ξ)` for a 1-form `ω` on `G^{L−1}`.
pub fn delta_one_form(form: &dyn OneForm, point: &[DiscreteLoop], xi: &[LoopTangent]) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..=point.len() {
        let (p, x) = face_pushforward(i, point, xi)?;
        let v = form.eval(&p, &x)?;
        acc += if i % 2 == 0 { v } else { -v };
    }
    Ok(acc)
}

/// `(δω)(ξ, η) = Σ_i (−1)^i ω(d_i ξ, d_i η)` for a 2-form `ω` on `G^{L−1}`.
pub fn delta_two_form(
    form: &dyn TwoForm,
    point: &[DiscreteLoop],
    xi: &[LoopTangent],
    eta: &[LoopTangent],
) -> Result<f64> {
    let mut acc = 0.0;
    for i in 0..=point.len() {
        let (p, x) = face_pushforward(i, point, xi)?;
        let (_, y) = face_pushforward(i, point, eta)?;
        let v = form.eval(&p, &x, &y)?;
        acc += if i % 2 == 0 { v } else { -v };
    }
    Ok(acc)
}

/// `δR` at `(g₁, g₂)`:
/// `R(X₂, Y₂) − R(Ad(g₂⁻¹)X₁ + X₂, Ad(g₂⁻¹)Y₁ + Y₂) + R(X₁, Y₁)`.
pub fn delta_form_r(point: &[DiscreteLoop; 2], xi: &[LoopTangent; 2], eta: &[LoopTangent; 2]) -> Result<f64> {
    delta_two_form(&CurvatureForm, point, xi, eta)
}

/// `δα` at `(g₁, g₂, g₃)`; zero for the genuine `α`.
pub fn delta_form_alpha(point: &[DiscreteLoop; 3], xi: &[LoopTangent; 3]) -> Result<f64> {
    delta_one_form(&ConnectionForm::default(), point, xi)
}

/// Left-trivialized central difference `center⁻¹ (plus − minus) / 2h`,
/// projected back onto `su(n)`.
pub(crate) fn left_difference(center: &DiscreteLoop, plus: &DiscreteLoop, minus: &DiscreteLoop, h: f64) -> LoopTangent {
    let scale = Complex64::new(0.5 / h, 0.0);
    LoopTangent::from_samples_unchecked(
        center
            .samples()
            .iter()
            .zip(plus.samples().iter().zip(minus.samples()))
            .map(|(c, (p, m))| {
                let diff: CMatrix = (p.matrix() - m.matrix()) * scale;
                project_algebra(&(c.matrix().adjoint() * diff))
            })
            .collect(),
    )
}

/// Point of the surface `(s, t) ↦ (gₖ · exp(s Xₖ + t Yₖ))ₖ`.
fn surface_point(
    point: &[DiscreteLoop],
    xi: &[LoopTangent],
    eta: &[LoopTangent],
    s: f64,
    t: f64,
) -> Result<Vec<DiscreteLoop>> {
    point
        .iter()
        .zip(xi.iter().zip(eta))
        .map(|(g, (x, y))| g.right_exp(&x.linear_combination(s, y, t)?))
        .collect()
}

/// `d(σ*ω)(∂_s, ∂_t)` at `0` for `σ(s, t) = (gₖ exp(s Xₖ + t Yₖ))ₖ`, by
/// nested central differences with step `h`.
pub fn d_one_form_numeric(
    form: &dyn OneForm,
    point: &[DiscreteLoop],
    xi: &[LoopTangent],
    eta: &[LoopTangent],
    h: f64,
) -> Result<f64> {
    check_step(h)?;
    if xi.len() != point.len() || eta.len() != point.len() {
        return Err(Error::Argument("tangent tuples do not match the point".into()));
    }
    for (g, (x, y)) in point.iter().zip(xi.iter().zip(eta)) {
        check_at(g, x)?;
        check_at(g, y)?;
    }
    let at = |s: f64, t: f64| surface_point(point, xi, eta, s, t);
    let tangent = |s: f64, t: f64, ds: f64, dt: f64| -> Result<(Vec<DiscreteLoop>, Vec<LoopTangent>)> {
        let center = at(s, t)?;
        let plus = at(s + ds, t + dt)?;
        let minus = at(s - ds, t - dt)?;
        let tangents = center
            .iter()
            .zip(plus.iter().zip(&minus))
            .map(|(c, (p, m))| left_difference(c, p, m, h))
            .collect();
        Ok((center, tangents))
    };
    // ω(∂_t σ) at (±h, 0) and ω(∂_s σ) at (0, ±h)
    let mut omega_t = [0.0; 2];
    let mut omega_s = [0.0; 2];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let (p, x) = tangent(sign * h, 0.0, 0.0, h)?;
        omega_t[k] = form.eval(&p, &x)?;
        let (p, x) = tangent(0.0, sign * h, h, 0.0)?;
        omega_s[k] = form.eval(&p, &x)?;
    }
    Ok((omega_t[0] - omega_t[1]) / (2.0 * h) - (omega_s[0] - omega_s[1]) / (2.0 * h))
}

/// `dα(ξ, η)` at `(g₁, g₂)` by finite differences.
pub fn d_alpha_numeric(
    point: &[DiscreteLoop; 2],
    xi: &[LoopTangent; 2],
    eta: &[LoopTangent; 2],
    h: f64,
) -> Result<f64> {
    d_one_form_numeric(&ConnectionForm::default(), point, xi, eta, h)
}

/// `dR(X, Y, Z)` at `g` by finite differences on the family
/// `s ↦ g · exp(s₁X + s₂Y + s₃Z)`.
pub fn d_r_numeric(g: &DiscreteLoop, tangents: &[LoopTangent; 3], h: f64) -> Result<f64> {
    check_step(h)?;
    for x in tangents {
        check_at(g, x)?;
    }
    let at = |s: [f64; 3]| -> Result<DiscreteLoop> {
        let mut acc = tangents[0].scale(s[0]);
        acc = acc.add(&tangents[1].scale(s[1]))?;
        acc = acc.add(&tangents[2].scale(s[2]))?;
        g.right_exp(&acc)
    };
    let coordinate_tangent = |s: [f64; 3], axis: usize| -> Result<LoopTangent> {
        let (mut plus, mut minus) = (s, s);
        plus[axis] += h;
        minus[axis] -= h;
        Ok(left_difference(&at(s)?, &at(plus)?, &at(minus)?, h))
    };
    // R(∂_a, ∂_b) at s₀ ± h e_c, differenced along c.
    let term = |a: usize, b: usize, c: usize| -> Result<f64> {
        let mut values = [0.0; 2];
        for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
            let mut s = [0.0; 3];
            s[c] = sign * h;
            values[k] = eval_r(&coordinate_tangent(s, a)?, &coordinate_tangent(s, b)?)?;
        }
        Ok((values[0] - values[1]) / (2.0 * h))
    };
    Ok(term(1, 2, 0)? - term(0, 2, 1)? + term(0, 1, 2)?)
}

/// `|α at (k·g₁, g₂) − α at (g₁, g₂)|` on the tangent `X₁` (with zero in the
/// second slot). Exactly zero because `α` never reads `g₁`.
pub fn left_invariance_check(
    k: &DiscreteLoop,
    g1: &DiscreteLoop,
    g2: &DiscreteLoop,
    x1: &LoopTangent,
) -> Result<f64> {
    let alpha = ConnectionForm::default();
    let zero = LoopTangent::zero(g2.dim(), g2.len())?;
    let tangent = [x1.clone(), zero];
    let moved = alpha.eval(&[k.mul(g1)?, g2.clone()], &tangent)?;
    let fixed = alpha.eval(&[g1.clone(), g2.clone()], &tangent)?;
    Ok((moved - fixed).abs())
}

/// `|R at k·g − R at g|` on `(X, Y)`; exactly zero for the same reason.
pub fn r_left_invariance_check(k: &DiscreteLoop, g: &DiscreteLoop, x: &LoopTangent, y: &LoopTangent) -> Result<f64> {
    let moved = CurvatureForm.eval(&[k.mul(g)?], std::slice::from_ref(x), std::slice::from_ref(y))?;
    let fixed = CurvatureForm.eval(std::slice::from_ref(g), std::slice::from_ref(x), std::slice::from_ref(y))?;
    Ok((moved - fixed).abs())
}

/// Transport check through charts: the tangents of `t ↦ g₁ exp(tX₁)` and of
/// its left translate `t ↦ k g₁ exp(tX₁)` are both recovered by central
/// differences of group samples and fed to `α` (and, with a second curve in
/// direction `Y`, to `R`). Returns the larger of the two discrepancies.
pub fn left_invariance_fd_check(
    k: &DiscreteLoop,
    g1: &DiscreteLoop,
    g2: &DiscreteLoop,
    x1: &LoopTangent,
    y1: &LoopTangent,
    h: f64,
) -> Result<f64> {
    check_step(h)?;
    let chart_tangent = |base: &DiscreteLoop, x: &LoopTangent| -> Result<LoopTangent> {
        let plus = base.right_exp(&x.scale(h))?;
        let minus = base.right_exp(&x.scale(-h))?;
        Ok(left_difference(base, &plus, &minus, h))
    };
    let moved_base = k.mul(g1)?;
    let (tx, ty) = (chart_tangent(g1, x1)?, chart_tangent(g1, y1)?);
    let (mx, my) = (chart_tangent(&moved_base, x1)?, chart_tangent(&moved_base, y1)?);
    let alpha = (eval_alpha(g2, &mx)? - eval_alpha(g2, &tx)?).abs();
    let r = (eval_r(&mx, &my)? - eval_r(&tx, &ty)?).abs();
    Ok(alpha.max(r))
}

/// Largest entry of `(g₁g₂)⁻¹ ∂_t[g₁e^{tX₁}g₂e^{tX₂}]|₀ − (Ad(g₂⁻¹)X₁ + X₂)`,
/// the derivative taken by a fourth-order central difference with step `h`.
pub fn pushforward_fd_check(
    g1: &DiscreteLoop,
    g2: &DiscreteLoop,
    x1: &LoopTangent,
    x2: &LoopTangent,
    h: f64,
) -> Result<f64> {
    let (_, merged) = face_pushforward(1, &[g1.clone(), g2.clone()], &[x1.clone(), x2.clone()])?;
    let curve = |t: f64| -> Result<DiscreteLoop> { g1.right_exp(&x1.scale(t))?.mul(&g2.right_exp(&x2.scale(t))?) };
    let (p1, m1, p2, m2) = (curve(h)?, curve(-h)?, curve(2.0 * h)?, curve(-2.0 * h)?);
    let base = g1.mul(g2)?;
    let mut worst: f64 = 0.0;
    for j in 0..base.len() {
        let d = (p1.samples()[j].matrix() - m1.samples()[j].matrix()) * Complex64::new(8.0, 0.0)
            - (p2.samples()[j].matrix() - m2.samples()[j].matrix());
        let d = d * Complex64::new(1.0 / (12.0 * h), 0.0);
        let lt = base.samples()[j].matrix().adjoint() * d;
        let diff = lt - merged[0].samples()[j].matrix();
        worst = diff.iter().map(|z| z.norm()).fold(worst, f64::max);
    }
    Ok(worst)
}
