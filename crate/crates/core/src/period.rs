//! Periods of `R` over a 2-sphere of loops in `SU(2)`.
//!
//! The standard family sends `(u, φ)` to the one-parameter subgroup
//! `θ ↦ exp(θ · i ν·σ)` with `ν = (sin u cos φ, sin u sin φ, cos u)`.
//! Its pullback of `R` is `−sin u / 2π du∧dφ`, so the period is `−2`; as a
//! `2πi`-integral class (curvature `2πi R`) this is the integer `−2`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{eval_r, left_difference};
use crate::lie::{exponential, pauli_generators, AlgebraElement};
use crate::loops::DiscreteLoop;

/// Step of the central differences that recover `∂_u` and `∂_φ`.
pub const TANGENT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceFamily {
    /// `θ ↦ exp(θ · i ν(u, φ)·σ)`.
    Standard,
    /// `θ ↦ exp(i ν(u, φ)·σ)`, constant in `θ`.
    Degenerate,
}

/// A sphere of loops sampled on `[0, π] × [0, 2π)`: `u_intervals + 1`
/// Simpson nodes in `u` and `phi_nodes` trapezoid nodes in `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSurface {
    family: SurfaceFamily,
    u_intervals: usize,
    phi_nodes: usize,
    samples: usize,
    reversed: bool,
}

impl LoopSurface {
    pub fn new(family: SurfaceFamily, u_intervals: usize, phi_nodes: usize, samples: usize) -> Result<Self> {
        if u_intervals < 2 || u_intervals % 2 != 0 {
            return Err(Error::Argument(format!(
                "u grid needs an even number of intervals ≥ 2, got {u_intervals}"
            )));
        }
        if phi_nodes < 4 {
            return Err(Error::Argument(format!("φ grid needs at least 4 nodes, got {phi_nodes}")));
        }
        // validates the sample count
        DiscreteLoop::identity(2, samples)?;
        Ok(LoopSurface {
            family,
            u_intervals,
            phi_nodes,
            samples,
            reversed: false,
        })
    }

    pub fn standard(u_intervals: usize, phi_nodes: usize, samples: usize) -> Result<Self> {
        Self::new(SurfaceFamily::Standard, u_intervals, phi_nodes, samples)
    }

    /// The same family traversed with `φ → −φ`.
    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    /// Both grid resolutions doubled; the loop sampling is unchanged.
    pub fn doubled(&self) -> Self {
        LoopSurface {
            u_intervals: 2 * self.u_intervals,
            phi_nodes: 2 * self.phi_nodes,
            ..self.clone()
        }
    }

    pub fn family(&self) -> SurfaceFamily {
        self.family
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.u_intervals, self.phi_nodes)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    fn generator(&self, u: f64, phi: f64) -> AlgebraElement {
        let phi = if self.reversed { -phi } else { phi };
        let nu = [u.sin() * phi.cos(), u.sin() * phi.sin(), u.cos()];
        let [s1, s2, s3] = pauli_generators();
        s1.scale(nu[0]).add(&s2.scale(nu[1])).add(&s3.scale(nu[2]))
    }

    pub fn loop_at(&self, u: f64, phi: f64) -> Result<DiscreteLoop> {
        let a = self.generator(u, phi);
        match self.family {
            SurfaceFamily::Standard => DiscreteLoop::exp_of(self.samples, |t| a.scale(t)),
            SurfaceFamily::Degenerate => DiscreteLoop::constant(exponential(&a)?, self.samples),
        }
    }
}

/// `∫ R` over the surface: `R(∂_u, ∂_φ)` at every node, trapezoid in `φ`,
/// Simpson in `u`. Rows are evaluated concurrently and summed in order.
///
/// The value is the period of the curvature `2πi R` divided by `2πi`.
pub fn sphere_period(surface: &LoopSurface) -> Result<f64> {
    let (nu, nphi) = surface.grid();
    let du = std::f64::consts::PI / nu as f64;
    let dphi = 2.0 * std::f64::consts::PI / nphi as f64;
    let h = TANGENT_STEP;
    let rows: Vec<f64> = (0..=nu)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let u = i as f64 * du;
            let mut row = 0.0;
            for j in 0..nphi {
                let phi = j as f64 * dphi;
                let center = surface.loop_at(u, phi)?;
                let tu = left_difference(&center, &surface.loop_at(u + h, phi)?, &surface.loop_at(u - h, phi)?, h);
                let tp = left_difference(&center, &surface.loop_at(u, phi + h)?, &surface.loop_at(u, phi - h)?, h);
                row += eval_r(&tu, &tp)?;
            }
            Ok(row * dphi)
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let w = if i == 0 || i == nu {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        total += w * row;
    }
    Ok(total * du / 3.0)
}
