//! Uniformly sampled loops in `SU(n)` and left-trivialized tangent loops in
//! `su(n)`, with spectral differentiation in `θ` and trapezoidal quadrature.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::lie::{exponential_unchecked, random_algebra, AlgebraElement, CMatrix, GroupElement, GROUP_TOL};
use crate::text::Tokens;

pub const MIN_SAMPLES: usize = 16;

fn check_sample_count(len: usize) -> Result<()> {
    if len < MIN_SAMPLES || !len.is_power_of_two() {
        return Err(Error::Argument(format!(
            "sample count {len} must be a power of two ≥ {MIN_SAMPLES}"
        )));
    }
    Ok(())
}

/// `θ_j = 2πj/N`.
pub fn theta(j: usize, samples: usize) -> f64 {
    2.0 * PI * j as f64 / samples as f64
}

/// A loop `S¹ → SU(n)` sampled at `θ_j = 2πj/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLoop {
    samples: Vec<GroupElement>,
}

impl DiscreteLoop {
    pub fn new(samples: Vec<GroupElement>) -> Result<Self> {
        check_sample_count(samples.len())?;
        let n = samples[0].dim();
        if samples.iter().any(|g| g.dim() != n) {
            return Err(Error::Mismatch("loop samples of different dimensions".into()));
        }
        if let Some((j, d)) = samples
            .iter()
            .map(GroupElement::defect)
            .enumerate()
            .find(|&(_, d)| !(d <= GROUP_TOL))
        {
            return Err(Error::Argument(format!("sample {j} leaves SU(n) by {d:e}")));
        }
        Ok(DiscreteLoop { samples })
    }

    pub fn constant(g: GroupElement, samples: usize) -> Result<Self> {
        check_sample_count(samples)?;
        Ok(DiscreteLoop {
            samples: vec![g; samples],
        })
    }

    pub fn identity(n: usize, samples: usize) -> Result<Self> {
        Self::constant(GroupElement::identity(n), samples)
    }

    /// Samples `θ ↦ exp(f(θ))`.
    pub fn exp_of(samples: usize, f: impl Fn(f64) -> AlgebraElement) -> Result<Self> {
        check_sample_count(samples)?;
        Ok(DiscreteLoop {
            samples: (0..samples)
                .map(|j| exponential_unchecked(&f(theta(j, samples))))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[GroupElement] {
        &self.samples
    }

    /// Pointwise product.
    pub fn mul(&self, other: &DiscreteLoop) -> Result<DiscreteLoop> {
        check_shapes(self.dim(), self.len(), other.dim(), other.len())?;
        Ok(DiscreteLoop {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a.mul(b)).collect(),
        })
    }

    pub fn inverse(&self) -> DiscreteLoop {
        DiscreteLoop {
            samples: self.samples.iter().map(GroupElement::inverse).collect(),
        }
    }

    /// `θ ↦ g(θ) · exp(X(θ))`.
    pub fn right_exp(&self, x: &LoopTangent) -> Result<DiscreteLoop> {
        check_shapes(self.dim(), self.len(), x.dim(), x.len())?;
        Ok(DiscreteLoop {
            samples: self
                .samples
                .iter()
                .zip(&x.samples)
                .map(|(g, x)| g.mul(&exponential_unchecked(x)))
                .collect(),
        })
    }

    /// Parses the loop text format: header `n N`, then `N` blocks of `n×n`
    /// complex entries written as `re im` pairs in row-major order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = Tokens::new(text);
        let (_, _, n) = tokens.next_usize("matrix dimension")?;
        let (line, column, count) = tokens.next_usize("sample count")?;
        if n == 0 {
            return Err(Error::parse(1, 1, "matrix dimension must be positive"));
        }
        check_sample_count(count).map_err(|e| Error::parse(line, column, e.to_string()))?;
        let mut samples = Vec::with_capacity(count);
        for j in 0..count {
            let mut entries = Vec::with_capacity(n * n);
            let start_line = tokens.peek_line();
            for k in 0..n * n {
                let (_, _, re) = tokens.next_value::<f64>(&format!("real part of sample {j} entry {k}"))?;
                let (_, _, im) = tokens.next_value::<f64>(&format!("imaginary part of sample {j} entry {k}"))?;
                entries.push(Complex64::new(re, im));
            }
            let m = CMatrix::from_row_slice(n, n, &entries);
            let g = GroupElement::new(m)
                .map_err(|e| Error::parse(start_line, 1, format!("sample {j}: {e}")))?;
            samples.push(g);
        }
        tokens.expect_end()?;
        DiscreteLoop::new(samples)
    }

    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("{n} {}\n", self.len());
        for g in &self.samples {
            for r in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|c| {
                        let z = g.matrix()[(r, c)];
                        format!("{:e} {:e}", z.re, z.im)
                    })
                    .collect();
                out.push_str(&row.join("  "));
                out.push('\n');
            }
        }
        out
    }
}

fn check_shapes(n1: usize, len1: usize, n2: usize, len2: usize) -> Result<()> {
    if n1 != n2 || len1 != len2 {
        return Err(Error::Mismatch(format!(
            "loops of (n, N) = ({n1}, {len1}) and ({n2}, {len2})"
        )));
    }
    Ok(())
}

/// A tangent vector `gX` at a loop `g`, stored as the loop `X` in `su(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopTangent {
    samples: Vec<AlgebraElement>,
}

impl LoopTangent {
    pub fn new(samples: Vec<AlgebraElement>) -> Result<Self> {
        check_sample_count(samples.len())?;
        let n = samples[0].dim();
        if samples.iter().any(|x| x.dim() != n) {
            return Err(Error::Mismatch("tangent samples of different dimensions".into()));
        }
        Ok(LoopTangent { samples })
    }

    pub(crate) fn from_samples_unchecked(samples: Vec<AlgebraElement>) -> Self {
        LoopTangent { samples }
    }

    pub fn from_fn(samples: usize, f: impl Fn(f64) -> AlgebraElement) -> Result<Self> {
        check_sample_count(samples)?;
        Self::new((0..samples).map(|j| f(theta(j, samples))).collect())
    }

    pub fn zero(n: usize, samples: usize) -> Result<Self> {
        check_sample_count(samples)?;
        Ok(LoopTangent {
            samples: vec![AlgebraElement::zero(n); samples],
        })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].dim()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[AlgebraElement] {
        &self.samples
    }

    pub fn add(&self, other: &LoopTangent) -> Result<LoopTangent> {
        check_shapes(self.dim(), self.len(), other.dim(), other.len())?;
        Ok(LoopTangent {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> LoopTangent {
        LoopTangent {
            samples: self.samples.iter().map(|x| x.scale(s)).collect(),
        }
    }

    pub fn linear_combination(&self, a: f64, other: &LoopTangent, b: f64) -> Result<LoopTangent> {
        self.scale(a).add(&other.scale(b))
    }

    /// Samplewise `Ad(g(θ)) X(θ)`.
    pub fn adjoint_by(&self, g: &DiscreteLoop) -> Result<LoopTangent> {
        check_shapes(self.dim(), self.len(), g.dim(), g.len())?;
        Ok(LoopTangent {
            samples: g.samples.iter().zip(&self.samples).map(|(g, x)| g.adjoint(x)).collect(),
        })
    }
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>> =
        RefCell::new(HashMap::new());
}

fn plans(len: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(len)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                (planner.plan_fft_forward(len), planner.plan_fft_inverse(len))
            })
            .clone()
    })
}

/// Entrywise Fourier differentiation of an `N`-periodic matrix sequence.
/// Mode `k` (in the centered range) is multiplied by `ik`; the Nyquist mode
/// is dropped.
pub fn spectral_derivative(samples: &[CMatrix]) -> Vec<CMatrix> {
    let len = samples.len();
    let (rows, cols) = samples[0].shape();
    let (forward, inverse) = plans(len);
    let mut out = vec![CMatrix::zeros(rows, cols); len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for r in 0..rows {
        for c in 0..cols {
            for (b, m) in buf.iter_mut().zip(samples) {
                *b = m[(r, c)];
            }
            forward.process(&mut buf);
            for (k, b) in buf.iter_mut().enumerate() {
                let wave = if 2 * k < len {
                    k as f64
                } else if 2 * k == len {
                    0.0
                } else {
                    k as f64 - len as f64
                };
                *b *= Complex64::new(0.0, wave / len as f64);
            }
            inverse.process(&mut buf);
            for (m, b) in out.iter_mut().zip(&buf) {
                m[(r, c)] = *b;
            }
        }
    }
    out
}

/// `∂_θ g` at every sample.
pub fn theta_derivative(g: &DiscreteLoop) -> Vec<CMatrix> {
    let mats: Vec<CMatrix> = g.samples.iter().map(|s| s.matrix().clone()).collect();
    spectral_derivative(&mats)
}

/// `∂_θ X` at every sample.
pub fn tangent_derivative(x: &LoopTangent) -> Vec<CMatrix> {
    let mats: Vec<CMatrix> = x.samples.iter().map(|s| s.matrix().clone()).collect();
    spectral_derivative(&mats)
}

/// The right logarithmic derivative `(∂_θ g) g⁻¹` at every sample.
pub fn right_log_derivative(g: &DiscreteLoop) -> Vec<CMatrix> {
    theta_derivative(g)
        .into_iter()
        .zip(&g.samples)
        .map(|(dg, g)| dg * g.matrix().adjoint())
        .collect()
}

/// Periodic trapezoidal rule `(2π/N) Σ f_j` for `∫_{S¹} f dθ`.
pub fn circle_integral(f: &[f64]) -> f64 {
    2.0 * PI / f.len() as f64 * f.iter().sum::<f64>()
}

/// A band-limited `su(n)`-valued trigonometric polynomial
/// `C + Σ_{k=1}^{K} A_k cos kθ + B_k sin kθ`.
#[derive(Debug, Clone)]
pub struct FourierAlgebraLoop {
    constant: AlgebraElement,
    cos: Vec<AlgebraElement>,
    sin: Vec<AlgebraElement>,
}

impl FourierAlgebraLoop {
    /// Coefficients drawn with [`random_algebra`] and scaled by `1/k²`; the
    /// constant term is drawn only when `with_constant` is set.
    pub fn random(rng: &mut ChaCha8Rng, n: usize, modes: usize, with_constant: bool) -> Self {
        let constant = if with_constant {
            random_algebra(rng, n)
        } else {
            AlgebraElement::zero(n)
        };
        let mut cos = Vec::with_capacity(modes);
        let mut sin = Vec::with_capacity(modes);
        for k in 1..=modes {
            let s = 1.0 / (k * k) as f64;
            cos.push(random_algebra(rng, n).scale(s));
            sin.push(random_algebra(rng, n).scale(s));
        }
        FourierAlgebraLoop { constant, cos, sin }
    }

    pub fn modes(&self) -> usize {
        self.cos.len()
    }

    pub fn eval(&self, theta: f64) -> AlgebraElement {
        let mut acc = self.constant.matrix().clone();
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kt = (k + 1) as f64 * theta;
            acc += a.matrix() * Complex64::new(kt.cos(), 0.0) + b.matrix() * Complex64::new(kt.sin(), 0.0);
        }
        AlgebraElement::from_matrix_unchecked(acc)
    }

    pub fn tangent(&self, samples: usize) -> Result<LoopTangent> {
        check_modes(self.modes(), samples)?;
        LoopTangent::from_fn(samples, |t| self.eval(t))
    }

    pub fn exp_loop(&self, samples: usize) -> Result<DiscreteLoop> {
        check_modes(self.modes(), samples)?;
        DiscreteLoop::exp_of(samples, |t| self.eval(t))
    }
}

fn check_modes(modes: usize, samples: usize) -> Result<()> {
    check_sample_count(samples)?;
    if modes > samples / 8 {
        return Err(Error::Argument(format!(
            "{modes} modes exceed N/8 = {} for N = {samples}",
            samples / 8
        )));
    }
    Ok(())
}

/// Seeded generator for everything random. ChaCha8 is counter based, so a
/// `(seed, stream)` pair names an independent reproducible sequence.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a child seed, so nested draws stay independent of draw order.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    seeded_rng(seed, stream).next_u64()
}

/// `θ ↦ exp(Σ_{k=1}^{K} A_k cos kθ + B_k sin kθ)` with seeded `A_k, B_k`
/// scaled by `1/k²`. `K = 0` gives the constant identity loop.
pub fn random_smooth_loop(seed: u64, n: usize, samples: usize, modes: usize) -> Result<DiscreteLoop> {
    FourierAlgebraLoop::random(&mut seeded_rng(seed, 0), n, modes, false).exp_loop(samples)
}

/// A seeded band-limited tangent loop, constant term included.
pub fn random_tangent(seed: u64, n: usize, samples: usize, modes: usize) -> Result<LoopTangent> {
    FourierAlgebraLoop::random(&mut seeded_rng(seed, 1), n, modes, true).tangent(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::pauli_generators;

    fn max_entry(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn h() -> AlgebraElement {
        pauli_generators()[2].clone() // diag(i, −i)
    }

    #[test]
    fn constant_loop_has_zero_derivative() {
        let mut rng = seeded_rng(9, 0);
        let g = crate::lie::random_group(&mut rng, 3);
        let lp = DiscreteLoop::constant(g, 32).unwrap();
        for d in theta_derivative(&lp) {
            assert!(max_entry(&d) <= 1e-13);
        }
    }

    #[test]
    fn one_parameter_subgroup_derivative() {
        let lp = DiscreteLoop::exp_of(64, |t| h().scale(t)).unwrap();
        let d = theta_derivative(&lp);
        assert!(max_entry(&(&d[0] - h().matrix())) <= 1e-10);
    }

    #[test]
    fn leibniz_rule() {
        let g = random_smooth_loop(1, 2, 128, 3).unwrap();
        let k = random_smooth_loop(2, 2, 128, 3).unwrap();
        let gk = g.mul(&k).unwrap();
        let (dg, dk, dgk) = (theta_derivative(&g), theta_derivative(&k), theta_derivative(&gk));
        for j in 0..128 {
            let rhs = &dg[j] * k.samples()[j].matrix() + g.samples()[j].matrix() * &dk[j];
            assert!(max_entry(&(&dgk[j] - rhs)) <= 1e-9);
        }
    }

    #[test]
    fn trapezoid_values() {
        let n = 64;
        let ones = vec![1.0; n];
        assert!((circle_integral(&ones) - 2.0 * PI).abs() <= 1e-14);
        let cos: Vec<f64> = (0..n).map(|j| theta(j, n).cos()).collect();
        assert!(circle_integral(&cos).abs() <= 1e-13);
        let cos2: Vec<f64> = (0..n).map(|j| theta(j, n).cos().powi(2)).collect();
        assert!((circle_integral(&cos2) - PI).abs() <= 1e-12);
    }

    #[test]
    fn zero_modes_is_identity() {
        let lp = random_smooth_loop(4, 3, 32, 0).unwrap();
        assert_eq!(lp, DiscreteLoop::identity(3, 32).unwrap());
    }

    #[test]
    fn seeded_loops_are_deterministic() {
        let a = random_smooth_loop(77, 2, 64, 3).unwrap();
        let b = random_smooth_loop(77, 2, 64, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_smooth_loop(78, 2, 64, 3).unwrap());
    }

    #[test]
    fn mode_guard_and_sample_guard() {
        assert!(random_smooth_loop(0, 2, 16, 3).is_err());
        assert!(random_smooth_loop(0, 2, 16, 2).is_ok());
        assert!(DiscreteLoop::identity(2, 8).is_err());
        assert!(DiscreteLoop::identity(2, 48).is_err());
    }

    /// Eighth-order central difference in θ, as an independent derivative.
    fn fd8(lp: &DiscreteLoop, j: usize) -> CMatrix {
        const W: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
        let n = lp.len();
        let step = 2.0 * PI / n as f64;
        let mut acc = CMatrix::zeros(lp.dim(), lp.dim());
        for (s, w) in W.iter().enumerate() {
            let k = s + 1;
            let plus = lp.samples()[(j + k) % n].matrix();
            let minus = lp.samples()[(j + n - k) % n].matrix();
            acc += (plus - minus) * Complex64::new(*w / step, 0.0);
        }
        acc
    }

    #[test]
    fn spectral_matches_high_order_finite_difference() {
        // Sample densely so that the eighth-order stencil is itself accurate.
        for seed in 0..4 {
            let lp = random_smooth_loop(seed, 2, 1024, 3).unwrap();
            let d = theta_derivative(&lp);
            for j in (0..1024).step_by(37) {
                assert!(max_entry(&(&d[j] - fd8(&lp, j))) <= 1e-8);
            }
        }
    }

    #[test]
    fn loop_file_round_trip() {
        let lp = random_smooth_loop(5, 2, 16, 1).unwrap();
        let parsed = DiscreteLoop::parse(&lp.to_text()).unwrap();
        for (a, b) in parsed.samples().iter().zip(lp.samples()) {
            assert!(max_entry(&(a.matrix() - b.matrix())) <= 1e-15);
        }
        assert!(matches!(DiscreteLoop::parse("2 16\n1 0 0 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(DiscreteLoop::parse("2 12\n"), Err(Error::Parse { line: 1, column: 3, .. })));
    }
}
