//! Ground-state profiles and the two sharp Gagliardo–Nirenberg inequalities.
//!
//! ```text
//! gn1:  ‖f‖₆⁶ ≤ (4/π²) ‖f‖₂⁴ ‖f_x‖₂²            equality at Q = 2 sech^{1/2}(2x)
//! gn2:  ‖f‖₆  ≤ C_GN ‖f‖₄^{8/9} ‖f_x‖₂^{1/9}     equality at Ψ = (1 + x²)^{-1/2}
//! ```
//!
//! with `C_GN = 3^{1/6} (2π)^{-1/9}`.

mod search;
mod shooting;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::functionals::FieldMoments;
use crate::gauge::SupportPolicy;
use crate::spectral::{ComplexField, Grid};

pub use search::{estimate_sharp_constant, SearchOptions, ShapeFamilyFit, SharpConstantEstimate};
pub use shooting::{ground_state_q_shooting, ShootingReport};

/// The sharp constant `C_GN = 3^{1/6} (2π)^{-1/9}` of gn2.
pub fn cgn_constant() -> f64 {
    3f64.powf(1.0 / 6.0) * (2.0 * PI).powf(-1.0 / 9.0)
}

/// `C_GN^{-9} = 2π / (3√3)`.
pub fn cgn_pow_neg9() -> f64 {
    2.0 * PI / (3.0 * 3f64.sqrt())
}

/// `C_GN^{-18} = 4π² / 27`.
pub fn cgn_pow_neg18() -> f64 {
    4.0 * PI * PI / 27.0
}

/// `C_GN^{-9/2}`.
pub fn cgn_pow_neg9_half() -> f64 {
    cgn_pow_neg9().sqrt()
}

/// `C_GN^{-27}`.
pub fn cgn_pow_neg27() -> f64 {
    cgn_pow_neg9().powi(3)
}

/// The sharp constant `4/π²` of gn1.
pub fn gn1_constant() -> f64 {
    4.0 / (PI * PI)
}

/// `Q(x) = 2 sech^{1/2}(2x)`, the positive solution of `-Q'' + Q - (3/16)Q⁵ = 0`.
pub fn ground_state_value(x: f64) -> f64 {
    // sech(2x) = 2 e^{-2|x|} / (1 + e^{-4|x|}) avoids overflow of cosh
    let e = (-2.0 * x.abs()).exp();
    2.0 * (2.0 * e / (1.0 + e * e)).sqrt()
}

/// Samples of `Q`; fails when the box is too small for the profile to have
/// decayed below the gauge support tolerance at the edges.
pub fn ground_state_q(grid: &Grid) -> Result<ComplexField> {
    let q = ComplexField::from_real_fn(grid, ground_state_value)?;
    check_box(&q)?;
    Ok(q)
}

fn check_box(profile: &ComplexField) -> Result<()> {
    let policy = SupportPolicy::default();
    let edge_value = policy.max_edge_modulus(profile);
    if edge_value > policy.tolerance {
        return Err(LabError::BoxTooSmall {
            edge_value,
            tolerance: policy.tolerance,
        });
    }
    Ok(())
}

pub fn psi_value(x: f64) -> f64 {
    1.0 / (x * x + 1.0).sqrt()
}

/// Samples of `Ψ(x) = (x² + 1)^{-1/2}`. Ψ decays only like `1/|x|`; use a
/// wide box (L ≥ 200) when quadrature accuracy matters.
pub fn psi_optimizer(grid: &Grid) -> ComplexField {
    ComplexField::from_trusted(
        grid,
        (0..grid.n_points())
            .map(|j| Complex64::new(psi_value(grid.x(j)), 0.0))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticEquation {
    /// `-f'' + f - (3/16) f⁵ = 0`
    DnlsGroundState,
    /// `f'' - f³ + (3/4) f⁵ = 0`
    QuarticQuintic,
}

/// Pointwise residual of the elliptic equation, derivatives spectral.
pub fn elliptic_residual_field(f: &ComplexField, equation: EllipticEquation) -> Result<Vec<f64>> {
    let max_imag = f.max_imag();
    if max_imag > 1e-12 {
        return Err(LabError::ComplexInput { max_imag });
    }
    let fxx = f.derivative().derivative();
    Ok(f.samples()
        .iter()
        .zip(fxx.samples())
        .map(|(z, zxx)| {
            let (v, vxx) = (z.re, zxx.re);
            match equation {
                EllipticEquation::DnlsGroundState => -vxx + v - 3.0 / 16.0 * v.powi(5),
                EllipticEquation::QuarticQuintic => vxx - v.powi(3) + 0.75 * v.powi(5),
            }
        })
        .collect())
}

/// Sup norm of the elliptic residual away from the box edges.
///
/// The band excluded is the support-check band ([`SupportPolicy`] default:
/// the outer 10% of points). At the edges the periodic extension of a
/// decaying profile has a derivative kink, whose spectral second derivative
/// dominates the residual without saying anything about the profile.
pub fn elliptic_residual(f: &ComplexField, equation: EllipticEquation) -> Result<f64> {
    elliptic_residual_interior(f, equation, SupportPolicy::default().edge_fraction)
}

/// Sup norm of the elliptic residual over the whole grid, edges included.
pub fn elliptic_residual_full(f: &ComplexField, equation: EllipticEquation) -> Result<f64> {
    Ok(elliptic_residual_field(f, equation)?
        .iter()
        .fold(0.0, |m, r| m.max(r.abs())))
}

/// Sup norm of the elliptic residual with the outer `edge_fraction` of grid
/// points (split evenly between the edges) excluded.
pub fn elliptic_residual_interior(
    f: &ComplexField,
    equation: EllipticEquation,
    edge_fraction: f64,
) -> Result<f64> {
    let r = elliptic_residual_field(f, equation)?;
    let band = ((edge_fraction * r.len() as f64 / 2.0).round() as usize).min(r.len() / 2);
    Ok(r[band..r.len() - band]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GnInequality {
    /// `‖f‖₆⁶ ≤ (4/π²) ‖f‖₂⁴ ‖f_x‖₂²`
    Gn1,
    /// `‖f‖₆ ≤ C_GN ‖f‖₄^{8/9} ‖f_x‖₂^{1/9}`
    Gn2,
}

impl GnInequality {
    pub fn sharp_constant(self) -> f64 {
        match self {
            GnInequality::Gn1 => gn1_constant(),
            GnInequality::Gn2 => cgn_constant(),
        }
    }

    /// Ratio `lhs / (rhs without the constant)`; its supremum is the sharp constant.
    pub(crate) fn weinstein_ratio(self, m: &FieldMoments) -> f64 {
        match self {
            GnInequality::Gn1 => m.l6_pow6 / (m.mass * m.mass * m.grad_sq),
            GnInequality::Gn2 => m.l6() / (m.l4_pow4.powf(2.0 / 9.0) * m.grad_sq.powf(1.0 / 18.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnReport {
    pub inequality_id: GnInequality,
    pub test_field_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub sharp_constant_used: f64,
}

fn nondegenerate_moments(f: &ComplexField) -> Result<FieldMoments> {
    let m = FieldMoments::of(f);
    if m.mass == 0.0 {
        return Err(LabError::DegenerateField("zero field"));
    }
    if m.grad_sq <= 1e-300 {
        return Err(LabError::DegenerateField("constant field has no gradient"));
    }
    Ok(m)
}

/// gn1 with `lhs = ‖f‖₆⁶`, `rhs = (4/π²)‖f‖₂⁴‖f_x‖₂²`.
pub fn gn1_check(f: &ComplexField, test_field_id: &str) -> Result<GnReport> {
    let m = nondegenerate_moments(f)?;
    let c = gn1_constant();
    let lhs = m.l6_pow6;
    let rhs = c * m.mass * m.mass * m.grad_sq;
    Ok(GnReport {
        inequality_id: GnInequality::Gn1,
        test_field_id: test_field_id.to_string(),
        lhs,
        rhs,
        ratio: lhs / rhs,
        sharp_constant_used: c,
    })
}

/// gn2 with `lhs = ‖f‖₆`, `rhs = C_GN ‖f‖₄^{8/9} ‖f_x‖₂^{1/9}`.
pub fn gn2_check(f: &ComplexField, test_field_id: &str) -> Result<GnReport> {
    let m = nondegenerate_moments(f)?;
    let c = cgn_constant();
    let lhs = m.l6();
    let rhs = c * m.l4().powf(8.0 / 9.0) * m.l2_grad().powf(1.0 / 9.0);
    Ok(GnReport {
        inequality_id: GnInequality::Gn2,
        test_field_id: test_field_id.to_string(),
        lhs,
        rhs,
        ratio: lhs / rhs,
        sharp_constant_used: c,
    })
}

pub fn gn_check(
    inequality: GnInequality,
    f: &ComplexField,
    test_field_id: &str,
) -> Result<GnReport> {
    match inequality {
        GnInequality::Gn1 => gn1_check(f, test_field_id),
        GnInequality::Gn2 => gn2_check(f, test_field_id),
    }
}
