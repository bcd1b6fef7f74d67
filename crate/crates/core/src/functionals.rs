//! Conserved functionals and diagnostic scalars evaluated on a field.
//!
//! Original form (the equation for `u`):
//!
//! ```text
//! M(u) = ∫ |u|²
//! E_D(u) = ∫ |u_x|² + (3/2) Im(|u|² u conj(u_x)) + (1/2)|u|⁶
//! P_D(u) = Im ∫ conj(u) u_x − (1/2) ∫ |u|⁴
//! ```
//!
//! Gauged form (the equation for `v`):
//!
//! ```text
//! E(v) = ‖v_x‖² − (1/16)‖v‖₆⁶
//! P(v) = Im ∫ conj(v) v_x + (1/4)‖v‖₄⁴
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::ComplexField;

/// Integral moments of a field, computed with a single spectral derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMoments {
    /// `∫|f|²`
    pub mass: f64,
    /// `∫|f|⁴`
    pub l4_pow4: f64,
    /// `∫|f|⁶`
    pub l6_pow6: f64,
    /// `∫|f_x|²`
    pub grad_sq: f64,
    /// `Im ∫ conj(f) f_x`
    pub im_phase_flux: f64,
    /// `∫ Im(|f|² f conj(f_x))`
    pub im_cubic_flux: f64,
}

impl FieldMoments {
    pub fn of(f: &ComplexField) -> Self {
        let grid = f.grid();
        let fx = grid.derivative_samples(f.samples());
        let dx = grid.dx();
        let mut m = FieldMoments {
            mass: 0.0,
            l4_pow4: 0.0,
            l6_pow6: 0.0,
            grad_sq: 0.0,
            im_phase_flux: 0.0,
            im_cubic_flux: 0.0,
        };
        for (z, zx) in f.samples().iter().zip(&fx) {
            let r2 = z.norm_sqr();
            m.mass += r2;
            m.l4_pow4 += r2 * r2;
            m.l6_pow6 += r2 * r2 * r2;
            m.grad_sq += zx.norm_sqr();
            let flux = z.conj() * zx;
            m.im_phase_flux += flux.im;
            // Im(|f|² f conj(f_x)) = -|f|² Im(conj(f) f_x)
            m.im_cubic_flux -= r2 * flux.im;
        }
        m.mass *= dx;
        m.l4_pow4 *= dx;
        m.l6_pow6 *= dx;
        m.grad_sq *= dx;
        m.im_phase_flux *= dx;
        m.im_cubic_flux *= dx;
        m
    }

    pub fn energy_original(&self) -> f64 {
        self.grad_sq + 1.5 * self.im_cubic_flux + 0.5 * self.l6_pow6
    }

    pub fn momentum_original(&self) -> f64 {
        self.im_phase_flux - 0.5 * self.l4_pow4
    }

    pub fn energy_gauged(&self) -> f64 {
        self.grad_sq - self.l6_pow6 / 16.0
    }

    pub fn momentum_gauged(&self) -> f64 {
        self.im_phase_flux + 0.25 * self.l4_pow4
    }

    pub fn l4(&self) -> f64 {
        self.l4_pow4.powf(0.25)
    }

    pub fn l6(&self) -> f64 {
        self.l6_pow6.powf(1.0 / 6.0)
    }

    pub fn l2_grad(&self) -> f64 {
        self.grad_sq.sqrt()
    }

    /// `‖f‖₄⁴ / ‖f‖₆³`; `None` for the zero field.
    pub fn f_value(&self) -> Option<f64> {
        if self.l6_pow6 > 0.0 {
            Some(self.l4_pow4 / self.l6_pow6.sqrt())
        } else {
            None
        }
    }
}

/// Which family of functionals an [`InvariantSet`] was evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantForm {
    Original,
    Gauged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub form: InvariantForm,
    pub mass: f64,
    pub energy: f64,
    pub momentum: f64,
    pub time_tag: f64,
}

impl InvariantSet {
    pub fn evaluate(f: &ComplexField, form: InvariantForm, time_tag: f64) -> Self {
        Self::from_moments(&FieldMoments::of(f), form, time_tag)
    }

    pub fn from_moments(m: &FieldMoments, form: InvariantForm, time_tag: f64) -> Self {
        let (energy, momentum) = match form {
            InvariantForm::Original => (m.energy_original(), m.momentum_original()),
            InvariantForm::Gauged => (m.energy_gauged(), m.momentum_gauged()),
        };
        InvariantSet {
            form,
            mass: m.mass,
            energy,
            momentum,
            time_tag,
        }
    }
}

pub fn mass(f: &ComplexField) -> f64 {
    f.grid().integrate(&f.modulus_sq())
}

pub fn energy_original(u: &ComplexField) -> f64 {
    FieldMoments::of(u).energy_original()
}

pub fn momentum_original(u: &ComplexField) -> f64 {
    FieldMoments::of(u).momentum_original()
}

pub fn energy_gauged(v: &ComplexField) -> f64 {
    FieldMoments::of(v).energy_gauged()
}

pub fn momentum_gauged(v: &ComplexField) -> f64 {
    FieldMoments::of(v).momentum_gauged()
}

/// `(∫|f|^p)^{1/p}` for `p ∈ {2, 4, 6}`.
pub fn lp_norm(f: &ComplexField, p: u32) -> Result<f64> {
    if !matches!(p, 2 | 4 | 6) {
        return Err(LabError::UnsupportedExponent(p));
    }
    let half = (p / 2) as i32;
    let integrand: Vec<f64> = f
        .samples()
        .iter()
        .map(|z| z.norm_sqr().powi(half))
        .collect();
    Ok(f.grid().integrate(&integrand).powf(1.0 / p as f64))
}

/// `‖v‖₄⁴ / ‖v‖₆³`, homogeneous of degree one.
pub fn f_functional(v: &ComplexField) -> Result<f64> {
    FieldMoments::of(v)
        .f_value()
        .ok_or(LabError::UndefinedDiagnostic(
            "f-functional of the zero field",
        ))
}

/// Residual of `‖v‖₄⁸ = 16 f(v)² (‖v_x‖² − E0)`.
///
/// Vanishes to roundoff when `e0` is the field's own gauged energy, because
/// then `16(‖v_x‖² − E0) = ‖v‖₆⁶` and `f² ‖v‖₆⁶ = ‖v‖₄⁸`.
pub fn quartic_norm_identity_residual(v: &ComplexField, e0: f64) -> Result<f64> {
    let m = FieldMoments::of(v);
    let f = m.f_value().ok_or(LabError::UndefinedDiagnostic(
        "f-functional of the zero field",
    ))?;
    Ok(m.l4_pow4 * m.l4_pow4 - 16.0 * f * f * (m.grad_sq - e0))
}

/// `1 + (3/(2π)) ‖u0‖²`, the factor bounding `‖u_x‖` by `‖v_x‖`.
pub fn h1_equivalence_constant(u0_mass: f64) -> Result<f64> {
    if !(u0_mass >= 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "mass must be nonnegative, got {u0_mass}"
        )));
    }
    Ok(1.0 + 3.0 / (2.0 * PI) * u0_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::variational::ground_state_q;
    use num_complex::Complex64;

    fn gaussian(grid: &Grid) -> ComplexField {
        ComplexField::from_real_fn(grid, |x| (-x * x / 2.0).exp()).unwrap()
    }

    #[test]
    fn zero_field_functionals() {
        let g = Grid::new(40.0, 256).unwrap();
        let z = ComplexField::zeros(&g);
        assert_eq!(mass(&z), 0.0);
        assert_eq!(energy_original(&z), 0.0);
        assert_eq!(momentum_original(&z), 0.0);
        assert_eq!(energy_gauged(&z), 0.0);
        assert_eq!(momentum_gauged(&z), 0.0);
        assert_eq!(lp_norm(&z, 4).unwrap(), 0.0);
        assert!(matches!(
            f_functional(&z),
            Err(LabError::UndefinedDiagnostic(_))
        ));
    }

    #[test]
    fn gaussian_values() {
        let g = Grid::new(40.0, 1024).unwrap();
        let f = gaussian(&g);
        let sp = PI.sqrt();
        assert!((mass(&f) - sp).abs() < 1e-10);
        let e_orig = sp / 2.0 + 0.5 * (PI / 3.0).sqrt();
        assert!((energy_original(&f) - e_orig).abs() < 1e-8);
        assert!((momentum_original(&f) + 0.5 * (PI / 2.0).sqrt()).abs() < 1e-10);
        let e_g = sp / 2.0 - (PI / 3.0).sqrt() / 16.0;
        assert!((energy_gauged(&f) - e_g).abs() < 1e-10);
        assert!((momentum_gauged(&f) - 0.25 * (PI / 2.0).sqrt()).abs() < 1e-10);
        let fv = (PI / 2.0).sqrt() / (PI / 3.0).powf(0.25);
        assert!((f_functional(&f).unwrap() - fv).abs() < 1e-10);
    }

    #[test]
    fn modulated_gaussian_momentum() {
        let g = Grid::new(40.0, 1024).unwrap();
        let f =
            ComplexField::from_fn(&g, |x| Complex64::from_polar((-x * x / 2.0).exp(), x)).unwrap();
        let expected = PI.sqrt() - 0.5 * (PI / 2.0).sqrt();
        assert!((momentum_original(&f) - expected).abs() < 1e-10);
    }

    #[test]
    fn ground_state_values() {
        let g = Grid::new(40.0, 1024).unwrap();
        let q = ground_state_q(&g).unwrap();
        assert!((mass(&q) - 2.0 * PI).abs() < 1e-8);
        assert!(energy_gauged(&q).abs() < 1e-8);
        assert!((momentum_gauged(&q) - 4.0).abs() < 1e-8);
        assert!((lp_norm(&q, 4).unwrap() - 2.0).abs() < 1e-9);
        assert!((f_functional(&q).unwrap() - 4.0 / PI.sqrt()).abs() < 1e-8);
        let twice = q.scaled(Complex64::new(2.0, 0.0));
        let ratio = f_functional(&twice).unwrap() / f_functional(&q).unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quartic_identity_on_ground_state() {
        let g = Grid::new(40.0, 1024).unwrap();
        let q = ground_state_q(&g).unwrap();
        let r0 = quartic_norm_identity_residual(&q, 0.0).unwrap();
        assert!(r0.abs() <= 1e-6 * 256.0);
        let r1 = quartic_norm_identity_residual(&q, 1.0).unwrap();
        assert!((r1 - 256.0 / PI).abs() < 1e-6, "r1 = {r1}");
    }

    #[test]
    fn h1_constant_values() {
        assert_eq!(h1_equivalence_constant(0.0).unwrap(), 1.0);
        assert!((h1_equivalence_constant(2.0 * PI).unwrap() - 4.0).abs() < 1e-14);
        assert!((h1_equivalence_constant(4.0 * PI).unwrap() - 7.0).abs() < 1e-14);
        assert!(h1_equivalence_constant(-1.0).is_err());
    }

    #[test]
    fn lp_norm_rejects_odd_exponent() {
        let g = Grid::new(40.0, 64).unwrap();
        assert!(matches!(
            lp_norm(&gaussian(&g), 3),
            Err(LabError::UnsupportedExponent(3))
        ));
    }
}
