//! Gauge transformation between the original and gauged equations.
//!
//! `v = exp(-(3/4) i G) u` with `G(x) = ∫_{-∞}^{x} |u|²`. On the periodic box
//! the lower limit is the left box edge, which is only meaningful for data
//! that has decayed at the edges: across the period the phase jumps by
//! `(3/4) mass`. Every public transform therefore checks the support
//! condition first.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::functionals::FieldMoments;
use crate::spectral::{ComplexField, Grid};

const PHASE_COEFF: f64 = 0.75;

/// Where and how strictly the support condition is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportPolicy {
    /// Fraction of grid points (split evenly between both edges) forming the edge band.
    pub edge_fraction: f64,
    /// Largest admissible `|u|` inside the edge band.
    pub tolerance: f64,
}

impl Default for SupportPolicy {
    fn default() -> Self {
        SupportPolicy {
            edge_fraction: 0.1,
            tolerance: 1e-7,
        }
    }
}

impl SupportPolicy {
    /// Number of grid points in the band at each edge.
    pub fn band_width(&self, n: usize) -> usize {
        ((self.edge_fraction * n as f64 / 2.0).round() as usize).max(1)
    }

    pub fn max_edge_modulus(&self, f: &ComplexField) -> f64 {
        let n = f.len();
        let w = self.band_width(n);
        f.samples()[..w]
            .iter()
            .chain(&f.samples()[n - w..])
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn check(&self, f: &ComplexField) -> Result<()> {
        let max_edge = self.max_edge_modulus(f);
        if max_edge > self.tolerance {
            Err(LabError::BoundaryContamination {
                max_edge,
                tolerance: self.tolerance,
            })
        } else {
            Ok(())
        }
    }
}

/// Phase primitive `G(x) = ∫_{x_0}^{x} |f|²`.
///
/// Uses the spectral primitive rather than the trapezoid running sum: the
/// gauge identities involve `d/dx` of the phase, and the running sum's
/// O(dx²) interior error would dominate them.
fn phase_primitive(f: &ComplexField) -> Vec<f64> {
    f.grid().spectral_primitive(&f.modulus_sq())
}

fn apply_phase(grid: &Grid, f: &[Complex64], primitive: &[f64], sign: f64) -> ComplexField {
    let samples = f
        .iter()
        .zip(primitive)
        .map(|(z, g)| z * Complex64::from_polar(1.0, sign * PHASE_COEFF * g))
        .collect();
    ComplexField::from_trusted(grid, samples)
}

/// `v = exp(-(3/4) i G) u`, without the support check.
///
/// Used by diagnostics that evaluate unconditional inequalities on the
/// gauged image of a state that may have reached the box edge.
pub fn gauge_forward_unchecked(u: &ComplexField) -> ComplexField {
    apply_phase(u.grid(), u.samples(), &phase_primitive(u), -1.0)
}

pub fn gauge_forward_with(u: &ComplexField, policy: &SupportPolicy) -> Result<ComplexField> {
    policy.check(u)?;
    Ok(gauge_forward_unchecked(u))
}

/// `v = exp(-(3/4) i G) u` with `G` the primitive of `|u|²` from the left edge.
pub fn gauge_forward(u: &ComplexField) -> Result<ComplexField> {
    gauge_forward_with(u, &SupportPolicy::default())
}

pub fn gauge_inverse_with(v: &ComplexField, policy: &SupportPolicy) -> Result<ComplexField> {
    policy.check(v)?;
    Ok(apply_phase(v.grid(), v.samples(), &phase_primitive(v), 1.0))
}

/// `u = exp(+(3/4) i G) v`; valid because `|u| = |v|`.
pub fn gauge_inverse(v: &ComplexField) -> Result<ComplexField> {
    gauge_inverse_with(v, &SupportPolicy::default())
}

/// `u_x` expressed through `v`: `exp(i (3/4) G) (i (3/4)|v|² v + v_x)`.
pub fn ux_from_v(v: &ComplexField) -> Result<ComplexField> {
    SupportPolicy::default().check(v)?;
    let grid = v.grid();
    let vx = grid.derivative_samples(v.samples());
    let inner: Vec<Complex64> = v
        .samples()
        .iter()
        .zip(&vx)
        .map(|(z, zx)| Complex64::new(0.0, PHASE_COEFF * z.norm_sqr()) * z + zx)
        .collect();
    Ok(apply_phase(grid, &inner, &phase_primitive(v), 1.0))
}

/// `(E_D(u) - E(v), P_D(u) - P(v))` with `v = gauge_forward(u)`.
pub fn correspondence_check(u: &ComplexField) -> Result<(f64, f64)> {
    let v = gauge_forward(u)?;
    let mu = FieldMoments::of(u);
    let mv = FieldMoments::of(&v);
    Ok((
        mu.energy_original() - mv.energy_gauged(),
        mu.momentum_original() - mv.momentum_gauged(),
    ))
}
