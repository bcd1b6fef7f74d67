//! Shooting construction of the ground state, an independent route to `Q`.
//!
//! Integrates `Q'' = Q - (3/16) Q⁵` outward from `x = 0` with `Q'(0) = 0`
//! and bisects on the amplitude `Q(0)`: too large and the orbit crosses zero,
//! too small and it turns back up. Once the profile is small the orbit is
//! continued with its decaying linear mode, which removes the exponentially
//! growing shooting error.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::spectral::{ComplexField, Grid};

use super::check_box;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShootingReport {
    /// Amplitude `Q(0)` found by bisection.
    pub amplitude: f64,
    pub bisection_steps: usize,
    /// Where the orbit was handed over to the decaying linear tail.
    pub tail_start: f64,
}

#[derive(Debug, PartialEq)]
enum Outcome {
    Overshoot,
    Undershoot,
    Undecided,
}

fn accel(q: f64) -> f64 {
    q - 3.0 / 16.0 * q.powi(5)
}

fn rk4(q: f64, p: f64, h: f64) -> (f64, f64) {
    let (k1q, k1p) = (p, accel(q));
    let (k2q, k2p) = (p + 0.5 * h * k1p, accel(q + 0.5 * h * k1q));
    let (k3q, k3p) = (p + 0.5 * h * k2p, accel(q + 0.5 * h * k2q));
    let (k4q, k4p) = (p + h * k3p, accel(q + h * k3q));
    (
        q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

fn classify(amplitude: f64, h: f64, x_end: f64) -> Outcome {
    let (mut q, mut p) = (amplitude, 0.0);
    let steps = (x_end / h).ceil() as usize;
    for _ in 0..steps {
        (q, p) = rk4(q, p, h);
        if q < 0.0 {
            return Outcome::Overshoot;
        }
        if p > 0.0 {
            return Outcome::Undershoot;
        }
    }
    Outcome::Undecided
}

/// Ground state by shooting plus decaying-tail continuation, sampled on `grid`.
pub fn ground_state_q_shooting(grid: &Grid) -> Result<(ComplexField, ShootingReport)> {
    let dx = grid.dx();
    let substeps = (dx / 2e-3).ceil().max(1.0) as usize;
    let h = dx / substeps as f64;
    let x_end = 0.5 * grid.length();

    let (mut lo, mut hi) = (1.0_f64, 3.0_f64);
    if classify(lo, h, x_end) != Outcome::Undershoot || classify(hi, h, x_end) != Outcome::Overshoot
    {
        return Err(LabError::NonConvergence {
            iterations: 0,
            reason: "shooting bracket [1, 3] does not straddle the ground state".into(),
        });
    }
    let mut bisection_steps = 0;
    while bisection_steps < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(mid, h, x_end) {
            Outcome::Overshoot => hi = mid,
            Outcome::Undershoot => lo = mid,
            Outcome::Undecided => {
                lo = mid;
                hi = mid;
            }
        }
        bisection_steps += 1;
    }
    let amplitude = 0.5 * (lo + hi);

    // Sample |x| = m dx, m = 0..=n/2, switching to the decaying mode once Q is small.
    const TAIL_SWITCH: f64 = 1e-5;
    let half = grid.n_points() / 2;
    let mut profile = Vec::with_capacity(half + 1);
    let (mut q, mut p) = (amplitude, 0.0);
    profile.push(q);
    let mut tail: Option<(f64, f64)> = None;
    for m in 1..=half {
        if let Some((x_c, a_c)) = tail {
            profile.push(a_c * (-(m as f64 * dx - x_c)).exp());
            continue;
        }
        for _ in 0..substeps {
            (q, p) = rk4(q, p, h);
        }
        let x = m as f64 * dx;
        if q < TAIL_SWITCH {
            // decaying component of (q, p) under the linearized flow q'' = q
            let a_c = 0.5 * (q - p);
            tail = Some((x, a_c));
            profile.push(a_c);
        } else {
            profile.push(q);
        }
    }
    let tail_start = tail.map_or(x_end, |(x, _)| x);

    let samples = (0..grid.n_points())
        .map(|j| {
            let m = (j as i64 - half as i64).unsigned_abs() as usize;
            Complex64::new(profile[m], 0.0)
        })
        .collect();
    let field = ComplexField::new(grid, samples)?;
    check_box(&field)?;
    Ok((
        field,
        ShootingReport {
            amplitude,
            bisection_steps,
            tail_start,
        },
    ))
}
