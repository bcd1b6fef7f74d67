//! Momentum bounds, f-bounds and the cubic mass-threshold analysis.
//!
//! Everything here is evaluated on a single gauged field `v` and its own
//! invariants `m0 = M(v)`, `E0 = E(v)`, `P0 = P(v)`. The boost `e^{iαx} v`
//! together with the sharp quartic-sextic inequality gives
//!
//! ```text
//! -Im ∫ conj(v) v_x ≤ (1/16 − C^{-18} f^{-4}) ‖v‖₆⁶ / (2α) + α m0 / 2 + E0 / (2α)
//! ```
//!
//! for every `α > 0`, which is what [`momentum_bound`] checks.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::evolution::{
    simulate_observed, DriftSummary, Equation, InitialData, SimConfig, TimeSeries,
};
use crate::functionals::{quartic_norm_identity_residual, FieldMoments};
use crate::spectral::ComplexField;
use crate::variational::{cgn_pow_neg18, cgn_pow_neg9, cgn_pow_neg9_half};

/// Radicands within this of zero are treated as the regime boundary.
const BOUNDARY_TOL: f64 = 1e-12;

fn moments_nonzero(v: &ComplexField) -> Result<FieldMoments> {
    let m = FieldMoments::of(v);
    if m.l6_pow6 > 0.0 {
        Ok(m)
    } else {
        Err(LabError::DegenerateField("zero field"))
    }
}

/// `E(e^{iαx} v) − [E(v) + 2α Im∫conj(v) v_x + α² M(v)]`.
///
/// The boost is applied to the samples and differentiated spectrally, so
/// `α` should be well inside the resolved band.
pub fn boosted_energy_identity(v: &ComplexField, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    let m = FieldMoments::of(v);
    let boosted = FieldMoments::of(&v.boosted(alpha)).energy_gauged();
    boosted - (m.energy_gauged() + 2.0 * alpha * m.im_phase_flux + alpha * alpha * m.mass)
}

/// `(1/4)‖v‖₄⁴ + Im∫conj(v) v_x − P0`.
pub fn momentum_identity_residual(v: &ComplexField, p0: f64) -> f64 {
    let m = FieldMoments::of(v);
    0.25 * m.l4_pow4 + m.im_phase_flux - p0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRegime {
    /// `1/16 − C^{-18} f^{-4} < 0`: the sextic term helps; α = 1 is used.
    SubcriticalBracket,
    /// `1/16 − C^{-18} f^{-4} ≥ 0`: α is optimized.
    BoostRegime,
}

/// `1 − 16 C^{-18} f^{-4}`, positive in the boost regime.
fn boost_radicand(f: f64) -> f64 {
    1.0 - 16.0 * cgn_pow_neg18() / f.powi(4)
}

fn regime_of(radicand: f64) -> BoundRegime {
    if radicand < -BOUNDARY_TOL {
        BoundRegime::SubcriticalBracket
    } else {
        BoundRegime::BoostRegime
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub time_tag: f64,
    /// `-Im ∫ conj(v) v_x`
    pub lhs: f64,
    pub rhs: f64,
    pub alpha_used: f64,
    /// `rhs - lhs`
    pub slack: f64,
    pub f_value: f64,
    pub f_lower: f64,
    pub f_upper: f64,
    pub regime: BoundRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FBounds {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl FBounds {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower - tol <= self.value && self.value <= self.upper + tol
    }
}

fn f_bounds_of(m: &FieldMoments) -> Result<FBounds> {
    let value = m.f_value().ok_or(LabError::DegenerateField("zero field"))?;
    let e0 = m.energy_gauged();
    let kinetic = m.l6_pow6 + 16.0 * e0;
    if !(kinetic > 0.0) {
        return Err(LabError::KineticDegenerate { value: kinetic });
    }
    Ok(FBounds {
        lower: 2.0 * cgn_pow_neg9_half() * m.l6().powf(1.5) / kinetic.powf(0.25),
        value,
        upper: m.mass.sqrt(),
    })
}

/// Lower and upper bounds on `f(v)`: `2 C^{-9/2} ‖v‖₆^{3/2} / (‖v‖₆⁶ + 16 E0)^{1/4}`
/// and `√M(v)`.
pub fn f_bounds(v: &ComplexField) -> Result<FBounds> {
    f_bounds_of(&moments_nonzero(v)?)
}

fn bound_report(m: &FieldMoments, alpha: f64, time_tag: f64) -> Result<BoundReport> {
    // A field with vanishing kinetic term (a constant) has no lower f-bound;
    // the trivial bound 0 is reported so the momentum bound itself stays available.
    let fb = match f_bounds_of(m) {
        Err(LabError::KineticDegenerate { .. }) => FBounds {
            lower: 0.0,
            value: m.f_value().ok_or(LabError::DegenerateField("zero field"))?,
            upper: m.mass.sqrt(),
        },
        other => other?,
    };
    let f = fb.value;
    let coeff = 1.0 / 16.0 - cgn_pow_neg18() / f.powi(4);
    let rhs = coeff * m.l6_pow6 / (2.0 * alpha)
        + 0.5 * alpha * m.mass
        + m.energy_gauged() / (2.0 * alpha);
    let lhs = -m.im_phase_flux;
    Ok(BoundReport {
        time_tag,
        lhs,
        rhs,
        alpha_used: alpha,
        slack: rhs - lhs,
        f_value: f,
        f_lower: fb.lower,
        f_upper: fb.upper,
        regime: regime_of(boost_radicand(f)),
    })
}

/// Boosted momentum bound at a given `α > 0`.
pub fn momentum_bound(v: &ComplexField, alpha: f64) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(LabError::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    bound_report(&moments_nonzero(v)?, alpha, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaChoice {
    pub alpha: f64,
    /// The radicand vanishes; `alpha` is 0.
    pub at_boundary: bool,
}

fn optimal_alpha_of(m: &FieldMoments) -> Result<AlphaChoice> {
    let f = m.f_value().ok_or(LabError::DegenerateField("zero field"))?;
    let radicand = boost_radicand(f);
    match regime_of(radicand) {
        BoundRegime::SubcriticalBracket => Err(LabError::SubcriticalRegime { radicand }),
        BoundRegime::BoostRegime if radicand.abs() <= BOUNDARY_TOL => Ok(AlphaChoice {
            alpha: 0.0,
            at_boundary: true,
        }),
        BoundRegime::BoostRegime => Ok(AlphaChoice {
            alpha: 0.25 * (radicand / m.mass).sqrt() * m.l6_pow6.sqrt(),
            at_boundary: false,
        }),
    }
}

/// `α = (1/4) √((1 − 16 C^{-18} f^{-4}) / m0) ‖v‖₆³`, which balances the first
/// two terms of the bound.
pub fn optimal_alpha(v: &ComplexField) -> Result<AlphaChoice> {
    optimal_alpha_of(&moments_nonzero(v)?)
}

/// The bound at the regime's α: optimal in the boost regime, 1 in the
/// subcritical bracket or when the optimal α degenerates to 0.
pub fn regime_bound(v: &ComplexField, time_tag: f64) -> Result<BoundReport> {
    let m = moments_nonzero(v)?;
    let alpha = match optimal_alpha_of(&m) {
        Ok(AlphaChoice { alpha, .. }) if alpha > 0.0 => alpha,
        Ok(_) | Err(LabError::SubcriticalRegime { .. }) => 1.0,
        Err(e) => return Err(e),
    };
    bound_report(&m, alpha, time_tag)
}

/// Remainder `2√(m0 r)(2E0/α + 4P0)‖v‖₆^{-3} + (2E0/α + 4P0)² ‖v‖₆^{-6}`,
/// `r = 1 − 16 C^{-18} f^{-4}`, with the field's own invariants.
pub fn remainder(v: &ComplexField) -> Result<f64> {
    let m = moments_nonzero(v)?;
    remainder_of(&m, m.mass, m.energy_gauged(), m.momentum_gauged())
}

/// Remainder with `m0`, `E0`, `P0` supplied, as along a trajectory whose
/// invariants are fixed by the initial datum.
pub fn remainder_with_invariants(v: &ComplexField, m0: f64, e0: f64, p0: f64) -> Result<f64> {
    if !(m0 > 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "m0 must be positive, got {m0}"
        )));
    }
    remainder_of(&moments_nonzero(v)?, m0, e0, p0)
}

fn remainder_of(m: &FieldMoments, m0: f64, e0: f64, p0: f64) -> Result<f64> {
    let f = m.f_value().ok_or(LabError::DegenerateField("zero field"))?;
    let r = boost_radicand(f);
    if regime_of(r) == BoundRegime::SubcriticalBracket {
        return Err(LabError::SubcriticalRegime { radicand: r });
    }
    let r = r.max(0.0);
    let l6_cubed = m.l6_pow6.sqrt();
    let energy_term = if e0 == 0.0 {
        0.0
    } else {
        let alpha = 0.25 * (r / m0).sqrt() * l6_cubed;
        if alpha == 0.0 {
            return Err(LabError::SubcriticalRegime { radicand: r });
        }
        2.0 * e0 / alpha
    };
    let s = energy_term + 4.0 * p0;
    Ok(2.0 * (m0 * r).sqrt() * s / l6_cubed + s * s / m.l6_pow6)
}

/// `F(X) = X³ − m0 X² + b`.
pub fn cubic_f(x: f64, m0: f64, b: f64) -> f64 {
    x * x * (x - m0) + b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GwpVerdict {
    BelowThreshold,
    AtOrAbove,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubicReport {
    pub m0: f64,
    pub epsilon: f64,
    pub b: f64,
    #[serde(rename = "F_at_two_thirds")]
    pub f_at_two_thirds: f64,
    /// Simple roots `X1 < 2m0/3 < X2`, present iff `F(2m0/3) < 0`.
    pub roots: Option<(f64, f64)>,
    /// Set when `F(2m0/3)` vanishes to roundoff: the double root `2m0/3`.
    pub double_root: Option<f64>,
    /// `4 C^{-9} < X1` and `X2 < m0`.
    pub bracket_ok: Option<bool>,
    pub gwp_verdict: GwpVerdict,
}

fn bisect(m0: f64, b: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo_positive = cubic_f(lo, m0, b) > 0.0;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (cubic_f(mid, m0, b) > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign analysis and roots of `F(X) = X³ − m0 X² + b`, `b = 16 m0 C^{-18} − ε`.
pub fn cubic_analyze(m0: f64, epsilon: f64) -> Result<CubicReport> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(LabError::InvalidArgument(format!(
            "m0 must be positive, got {m0}"
        )));
    }
    if !(epsilon >= 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "epsilon must be nonnegative, got {epsilon}"
        )));
    }
    let b = 16.0 * m0 * cgn_pow_neg18() - epsilon;
    if !(b > 0.0) {
        return Err(LabError::CubicPrecondition { b });
    }
    let x_min = 2.0 * m0 / 3.0;
    let mut f_min = cubic_f(x_min, m0, b);
    // the minimum value is a difference of terms of size b; snap roundoff to 0
    let snapped = f_min.abs() <= 4.0 * f64::EPSILON * b.max(x_min.powi(3));
    if snapped {
        f_min = 0.0;
    }
    let (roots, double_root, bracket_ok) = if f_min < 0.0 {
        let x1 = bisect(m0, b, 0.0, x_min);
        let x2 = bisect(m0, b, x_min, m0 + b.cbrt() + 1.0);
        let ok = 4.0 * cgn_pow_neg9() < x1 && x2 < m0;
        (Some((x1, x2)), None, Some(ok))
    } else if snapped {
        (None, Some(x_min), None)
    } else {
        (None, None, None)
    };
    Ok(CubicReport {
        m0,
        epsilon,
        b,
        f_at_two_thirds: f_min,
        roots,
        double_root,
        bracket_ok,
        gwp_verdict: if m0 < 4.0 * PI {
            GwpVerdict::BelowThreshold
        } else {
            GwpVerdict::AtOrAbove
        },
    })
}

/// `6√3 C^{-9}`, equal to `4π`.
pub fn threshold_constant() -> f64 {
    6.0 * 3f64.sqrt() * cgn_pow_neg9()
}

/// `4 C^{-9} = 8π/(3√3)`, the lower edge of the root bracket.
pub fn lower_bracket_edge() -> f64 {
    4.0 * cgn_pow_neg9()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassPosition {
    Below2Pi,
    At2Pi,
    Between2PiAnd4Pi,
    At4Pi,
    Above4Pi,
}

impl MassPosition {
    /// Classify `a²` (mass in units of `2π` for `a·Q`).
    fn of_amplitude(a: f64) -> Self {
        let s = a * a;
        let near = |x: f64| (s - x).abs() <= 1e-12 * x;
        if near(1.0) {
            MassPosition::At2Pi
        } else if near(2.0) {
            MassPosition::At4Pi
        } else if s < 1.0 {
            MassPosition::Below2Pi
        } else if s < 2.0 {
            MassPosition::Between2PiAnd4Pi
        } else {
            MassPosition::Above4Pi
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRun {
    pub amplitude: f64,
    pub mass: f64,
    pub position: MassPosition,
    pub config: SimConfig,
    pub completed: bool,
    /// Time of numerical blow-up, if the run stopped early.
    pub blow_up_time: Option<f64>,
    /// Non-numerical failure message.
    pub error: Option<String>,
    pub samples: usize,
    pub max_grad_norm: f64,
    pub min_slack: f64,
    pub bracket_violations: usize,
    /// Largest `|‖v‖₄⁸ − 16 f²(‖v_x‖² − E0)|` with `E0` the initial energy.
    pub max_quartic_identity_residual: f64,
    /// Largest momentum identity residual with `P0` the initial momentum.
    pub max_momentum_identity_residual: f64,
    pub drift: Option<DriftSummary>,
    #[serde(skip)]
    pub series: Option<TimeSeries>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub runs: Vec<SweepRun>,
    pub min_slack: f64,
    pub bracket_violations: usize,
}

#[derive(Default)]
struct SweepAccumulator {
    e0: Option<f64>,
    p0: Option<f64>,
    samples: usize,
    max_grad_norm: f64,
    min_slack: f64,
    bracket_violations: usize,
    max_quartic: f64,
    max_momentum: f64,
}

impl SweepAccumulator {
    fn observe(&mut self, t: f64, v: &ComplexField) -> Result<()> {
        let m = FieldMoments::of(v);
        let e0 = *self.e0.get_or_insert(m.energy_gauged());
        let p0 = *self.p0.get_or_insert(m.momentum_gauged());
        if self.samples == 0 {
            self.min_slack = f64::INFINITY;
        }
        self.samples += 1;
        self.max_grad_norm = self.max_grad_norm.max(m.l2_grad());
        if m.l6_pow6 > 0.0 {
            let report = regime_bound(v, t)?;
            self.min_slack = self.min_slack.min(report.slack);
            let fb = f_bounds_of(&m)?;
            if !fb.holds(1e-9) {
                self.bracket_violations += 1;
            }
            self.max_quartic = self
                .max_quartic
                .max(quartic_norm_identity_residual(v, e0)?.abs());
            self.max_momentum = self
                .max_momentum
                .max(momentum_identity_residual(v, p0).abs());
        }
        Ok(())
    }
}

fn sweep_one(base: &SimConfig, a: f64) -> SweepRun {
    let mut config = base.clone();
    config.initial = InitialData::ScaledGroundState { a };
    let mut acc = SweepAccumulator::default();
    let outcome = simulate_observed(&config, &mut |t, v| acc.observe(t, v));
    let (completed, blow_up_time, error, series) = match outcome {
        Ok(ts) => (true, None, None, Some(ts)),
        Err(LabError::NumericalBlowUp { t, partial }) => (false, Some(t), None, Some(*partial)),
        Err(e) => (false, None, Some(e.to_string()), None),
    };
    SweepRun {
        amplitude: a,
        mass: 2.0 * PI * a * a,
        position: MassPosition::of_amplitude(a),
        config,
        completed,
        blow_up_time,
        error,
        samples: acc.samples,
        max_grad_norm: acc.max_grad_norm,
        min_slack: if acc.samples == 0 {
            f64::NAN
        } else {
            acc.min_slack
        },
        bracket_violations: acc.bracket_violations,
        max_quartic_identity_residual: acc.max_quartic,
        max_momentum_identity_residual: acc.max_momentum,
        drift: series.as_ref().map(|s| s.drift),
        series,
    }
}

/// Simulate `a·Q` under the gauged equation for each amplitude, in parallel,
/// and collect bound diagnostics at every sampled time. Failures of single
/// runs are recorded on the run, not propagated.
pub fn mass_sweep(base: &SimConfig, amplitudes: &[f64]) -> Result<SweepReport> {
    if base.equation != Equation::Gauged {
        return Err(LabError::InvalidArgument(
            "mass sweep runs the gauged equation".into(),
        ));
    }
    if amplitudes.is_empty() {
        return Err(LabError::InvalidArgument("no amplitudes given".into()));
    }
    if amplitudes.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(LabError::InvalidArgument(
            "amplitudes must be sorted".into(),
        ));
    }
    if amplitudes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(LabError::InvalidArgument(
            "amplitudes must be positive".into(),
        ));
    }
    base.validate()?;
    let runs: Vec<SweepRun> = amplitudes.par_iter().map(|&a| sweep_one(base, a)).collect();
    let min_slack = runs
        .iter()
        .map(|r| r.min_slack)
        .filter(|s| !s.is_nan())
        .fold(f64::INFINITY, f64::min);
    let bracket_violations = runs.iter().map(|r| r.bracket_violations).sum();
    Ok(SweepReport {
        runs,
        min_slack,
        bracket_violations,
    })
}
