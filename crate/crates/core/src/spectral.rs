//! Periodic-grid substrate: grids, complex fields, spectral differentiation,
//! quadrature, running primitives and two-thirds dealiasing.
//!
//! Whole-line problems are approximated on the box `[-L/2, L/2)` sampled at
//! `x_j = -L/2 + j dx`, `j = 0..n`. Transforms follow one fixed convention:
//! the forward transform is unscaled and the inverse carries the `1/n`
//! factor, so `f_j = (1/n) sum_m fhat_m exp(i k_m x_j)` up to the phase from
//! the left edge offset, which cancels in every operation here.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Serializable description of a grid, used in configs and manifests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub length: f64,
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            length: 40.0,
            n_points: 1024,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.length, self.n_points)
    }
}

struct GridInner {
    length: f64,
    n: usize,
    dx: f64,
    /// Wavenumbers in FFT storage order: 0, 1, .., n/2-1, -n/2, .., -1 (times 2π/L).
    k: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// A uniform periodic grid on `[-L/2, L/2)` with `n` points, `n` a power of two
/// and at least 16. Cheap to clone; the FFT plans are shared.
#[derive(Clone)]
pub struct Grid(Arc<GridInner>);

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("length", &self.0.length)
            .field("n_points", &self.0.n)
            .field("dx", &self.0.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.n == other.0.n && self.0.length == other.0.length)
    }
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Grid> {
        if !(length.is_finite() && length > 0.0) {
            return Err(LabError::InvalidGrid(format!(
                "box length must be positive and finite, got {length}"
            )));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "n_points must be a power of two >= 16, got {n}"
            )));
        }
        let dx = length / n as f64;
        let dk = 2.0 * std::f64::consts::PI / length;
        let k = (0..n).map(|j| mode_index(j, n) as f64 * dk).collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Grid(Arc::new(GridInner {
            length,
            n,
            dx,
            k,
            forward,
            inverse,
        })))
    }

    pub fn length(&self) -> f64 {
        self.0.length
    }

    pub fn n_points(&self) -> usize {
        self.0.n
    }

    pub fn dx(&self) -> f64 {
        self.0.dx
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            length: self.0.length,
            n_points: self.0.n,
        }
    }

    /// Wavenumbers in FFT storage order (`0, 1, .., n/2-1, -n/2, .., -1` times `2π/L`).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.0.k
    }

    /// Wavenumbers sorted as `k_j = 2πj/L`, `j = -n/2 .. n/2-1`.
    pub fn wavenumbers_centered(&self) -> Vec<f64> {
        let n = self.0.n as i64;
        let dk = 2.0 * std::f64::consts::PI / self.0.length;
        (-n / 2..n / 2).map(|j| j as f64 * dk).collect()
    }

    /// Largest wavenumber magnitude, the Nyquist wavenumber `π/dx`.
    pub fn k_max(&self) -> f64 {
        std::f64::consts::PI / self.0.dx
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.0.length + j as f64 * self.0.dx
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.0.n).map(|j| self.x(j)).collect()
    }

    /// Unscaled forward transform in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.0.forward.process(buf);
    }

    /// Inverse transform in place, scaled by `1/n`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.0.inverse.process(buf);
        let scale = 1.0 / self.0.n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    /// Periodic trapezoid (rectangle) rule: `dx * sum(samples)`.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        self.0.dx * samples.iter().sum::<f64>()
    }

    pub fn integrate_complex(&self, samples: &[Complex64]) -> Complex64 {
        samples.iter().sum::<Complex64>() * self.0.dx
    }

    /// Composite-trapezoid running sum from the left box edge:
    /// `G_0 = 0`, `G_{j+1} = G_j + dx (g_j + g_{j+1}) / 2`.
    pub fn cumulative_primitive(&self, g: &[f64]) -> Vec<f64> {
        let dx = self.0.dx;
        let mut out = Vec::with_capacity(g.len());
        let mut acc = 0.0;
        out.push(acc);
        for w in g.windows(2) {
            acc += 0.5 * dx * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }

    /// Spectrally accurate running primitive from the left box edge.
    ///
    /// The mean of `g` contributes the linear ramp `mean * (x - x_0)`; the
    /// zero-mean remainder is integrated by dividing its modes by `i k`.
    /// For data that vanishes near the box edges this matches
    /// `∫_{x_0}^{x} g` to spectral accuracy at every grid point, which the
    /// trapezoid running sum only achieves at the endpoints.
    pub fn spectral_primitive(&self, g: &[f64]) -> Vec<f64> {
        let n = self.0.n;
        let mean = g.iter().sum::<f64>() / n as f64;
        let mut buf: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v - mean, 0.0)).collect();
        self.forward(&mut buf);
        for (j, z) in buf.iter_mut().enumerate() {
            let k = self.0.k[j];
            if j == 0 || j == n / 2 {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z /= I * k;
            }
        }
        self.inverse(&mut buf);
        let offset = buf[0].re;
        buf.iter()
            .enumerate()
            .map(|(j, z)| mean * j as f64 * self.0.dx + z.re - offset)
            .collect()
    }

    /// Spectral derivative of raw samples: modes multiplied by `i k`, Nyquist zeroed.
    pub fn derivative_samples(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let mut buf = samples.to_vec();
        self.forward(&mut buf);
        self.apply_derivative_multiplier(&mut buf);
        self.inverse(&mut buf);
        buf
    }

    /// Multiply spectral coefficients by `i k` and zero the Nyquist mode.
    pub(crate) fn apply_derivative_multiplier(&self, spectrum: &mut [Complex64]) {
        let n = self.0.n;
        for (j, z) in spectrum.iter_mut().enumerate() {
            if j == n / 2 {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= I * self.0.k[j];
            }
        }
    }

    /// Zero the modes outside the two-thirds ball in place (spectral coefficients).
    pub(crate) fn apply_dealias_mask(&self, spectrum: &mut [Complex64]) {
        let n = self.0.n;
        for (j, z) in spectrum.iter_mut().enumerate() {
            if !self.keeps_mode(j) {
                *z = Complex64::new(0.0, 0.0);
            }
            debug_assert!(j < n);
        }
    }

    /// Whether storage-order mode `j` survives the two-thirds rule,
    /// i.e. `|k_j| <= (2/3) k_max`.
    pub fn keeps_mode(&self, j: usize) -> bool {
        let m = mode_index(j, self.0.n).unsigned_abs() as usize;
        3 * m <= self.0.n
    }
}

/// Signed mode index of storage slot `j`.
pub(crate) fn mode_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Complex samples of a whole-line field on a [`Grid`].
#[derive(Clone, Debug)]
pub struct ComplexField {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: &Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(LabError::LengthMismatch {
                expected: grid.n_points(),
                got: samples.len(),
            });
        }
        if samples.iter().any(|z| !z.is_finite()) {
            return Err(LabError::NonFinite);
        }
        Ok(ComplexField {
            grid: grid.clone(),
            samples,
        })
    }

    /// Wraps samples produced by an operation that cannot introduce
    /// non-finite values from finite input.
    pub(crate) fn from_trusted(grid: &Grid, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_points());
        ComplexField {
            grid: grid.clone(),
            samples,
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::from_trusted(grid, vec![Complex64::new(0.0, 0.0); grid.n_points()])
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid.n_points()).map(|j| f(grid.x(j))).collect();
        Self::new(grid, samples)
    }

    pub fn from_real_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn modulus_sq(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Sup-norm distance to another field on the same grid.
    pub fn sup_distance(&self, other: &ComplexField) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_trusted(&self.grid, self.samples.iter().map(|z| z * c).collect())
    }

    /// Pointwise map; fails if the map produces non-finite samples.
    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &z)| f(self.grid.x(j), z))
            .collect();
        Self::new(&self.grid, samples)
    }

    /// `e^{i alpha x} f(x)`.
    pub fn boosted(&self, alpha: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &z)| z * Complex64::from_polar(1.0, alpha * self.grid.x(j)))
            .collect();
        Self::from_trusted(&self.grid, samples)
    }

    /// Cyclic shift of the samples by `shift` grid points.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut samples = self.samples.clone();
        samples.rotate_right(shift % self.len());
        Self::from_trusted(&self.grid, samples)
    }

    /// `x -> conj(f(-x))` on the grid (index `j -> n - j mod n`).
    pub fn reflected_conjugate(&self) -> Self {
        let n = self.len();
        let samples = (0..n).map(|j| self.samples[(n - j) % n].conj()).collect();
        Self::from_trusted(&self.grid, samples)
    }

    /// Spectral coefficients (unscaled forward transform).
    pub fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        self.grid.forward(&mut buf);
        buf
    }

    /// Exact derivative of the trigonometric interpolant, Nyquist mode zeroed.
    pub fn derivative(&self) -> ComplexField {
        Self::from_trusted(&self.grid, self.grid.derivative_samples(&self.samples))
    }

    /// Two-thirds rule: zero every mode with `|k| > (2/3) k_max`.
    pub fn dealias(&self) -> ComplexField {
        let mut buf = self.spectrum();
        self.grid.apply_dealias_mask(&mut buf);
        self.grid.inverse(&mut buf);
        Self::from_trusted(&self.grid, buf)
    }

    pub fn integrate(&self) -> Complex64 {
        self.grid.integrate_complex(&self.samples)
    }

    /// Largest imaginary part magnitude.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Samples as `[re, im]` pairs, the on-disk form.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(grid: &Grid, pairs: &[[f64; 2]]) -> Result<Self> {
        Self::new(
            grid,
            pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_definitions() {
        let g = Grid::new(2.0 * PI, 16).unwrap();
        assert!((g.dx() - PI / 8.0).abs() < 1e-15);
        let k = g.wavenumbers_centered();
        assert_eq!(k.len(), 16);
        for (i, kv) in k.iter().enumerate() {
            assert!((kv - (i as f64 - 8.0)).abs() < 1e-12);
        }
        let g = Grid::new(40.0, 1024).unwrap();
        assert_eq!(g.dx(), 0.0390625);
        assert!((g.dx() * 1024.0 - 40.0).abs() < 1e-12);
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        assert!(matches!(
            Grid::new(40.0, 1000),
            Err(LabError::InvalidGrid(_))
        ));
        assert!(matches!(Grid::new(40.0, 8), Err(LabError::InvalidGrid(_))));
        assert!(matches!(Grid::new(0.0, 64), Err(LabError::InvalidGrid(_))));
        assert!(matches!(Grid::new(-1.0, 64), Err(LabError::InvalidGrid(_))));
    }

    #[test]
    fn wavenumbers_odd_symmetric_except_nyquist() {
        let g = Grid::new(40.0, 64).unwrap();
        let k = g.wavenumbers();
        for j in 1..32 {
            assert_eq!(k[j], -k[64 - j]);
        }
        assert!(k[32] < 0.0);
        assert!((k[32].abs() - g.k_max()).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_sine() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        let f = ComplexField::from_real_fn(&g, f64::sin).unwrap();
        let d = f.derivative();
        for j in 0..64 {
            assert!((d.samples()[j] - Complex64::new(g.x(j).cos(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Grid::new(40.0, 64).unwrap();
        let f = ComplexField::from_real_fn(&g, |_| 3.5).unwrap();
        assert!(f.derivative().sup_norm() < 1e-13);
    }

    #[test]
    fn derivative_of_gaussian() {
        let g = Grid::new(40.0, 512).unwrap();
        let f = ComplexField::from_real_fn(&g, |x| (-x * x / 2.0).exp()).unwrap();
        let d = f.derivative();
        let err = (0..512)
            .map(|j| {
                let x = g.x(j);
                (d.samples()[j].re + x * (-x * x / 2.0).exp()).abs()
            })
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "err = {err}");
    }

    #[test]
    fn integrate_examples() {
        let g = Grid::new(40.0, 512).unwrap();
        assert!((g.integrate(&vec![1.0; 512]) - 40.0).abs() < 1e-12);
        let gauss: Vec<f64> = g.coordinates().iter().map(|x| (-x * x).exp()).collect();
        assert!((g.integrate(&gauss) - PI.sqrt()).abs() <= 1e-12);
        let g2 = Grid::new(2.0 * PI, 64).unwrap();
        let s: Vec<f64> = g2.coordinates().iter().map(|x| x.sin()).collect();
        assert!(g2.integrate(&s).abs() < 1e-14);
    }

    #[test]
    fn cumulative_primitive_examples() {
        let g = Grid::new(40.0, 256).unwrap();
        assert!(g
            .cumulative_primitive(&vec![0.0; 256])
            .iter()
            .all(|&v| v == 0.0));
        let ramp = g.cumulative_primitive(&vec![1.0; 256]);
        for (j, v) in ramp.iter().enumerate() {
            assert!((v - (g.x(j) + 20.0)).abs() < 1e-12);
        }
        // final value plus one closing panel equals the periodic integral
        let gauss: Vec<f64> = g.coordinates().iter().map(|x| (-x * x).exp()).collect();
        let prim = g.cumulative_primitive(&gauss);
        let closed = prim[255] + 0.5 * g.dx() * (gauss[255] + gauss[0]);
        assert!((closed - g.integrate(&gauss)).abs() <= 1e-12 * g.integrate(&gauss));
    }

    #[test]
    fn spectral_primitive_matches_erf_profile() {
        // d/dx of the primitive reproduces g; compare to a fine trapezoid primitive
        let g = Grid::new(40.0, 512).unwrap();
        let gauss: Vec<f64> = g.coordinates().iter().map(|x| (-x * x).exp()).collect();
        let prim = g.spectral_primitive(&gauss);
        let ramp = g.spectral_primitive(&vec![1.0; 512]);
        for (j, v) in ramp.iter().enumerate() {
            assert!((v - (g.x(j) + 20.0)).abs() < 1e-11);
        }
        // Richardson-extrapolated trapezoid running sums as the reference
        let running = |n: usize| {
            let fine = Grid::new(40.0, n).unwrap();
            let vals: Vec<f64> = fine.coordinates().iter().map(|x| (-x * x).exp()).collect();
            fine.cumulative_primitive(&vals)
        };
        let (h, h2) = (running(1 << 15), running(1 << 16));
        for j in (0..512).step_by(7) {
            let reference = (4.0 * h2[j * 128] - h[j * 64]) / 3.0;
            assert!((prim[j] - reference).abs() < 1e-9, "j={j}");
        }
    }

    #[test]
    fn dealias_examples() {
        let g = Grid::new(2.0 * PI, 64).unwrap();
        let f = ComplexField::from_fn(&g, |x| {
            Complex64::new((3.0 * x).cos(), 0.0) + Complex64::from_polar(0.5, -10.0 * x)
        })
        .unwrap();
        assert!(f.dealias().sup_distance(&f) < 1e-14);
        let nyq = ComplexField::from_fn(&g, |x| Complex64::new((32.0 * x).cos(), 0.0)).unwrap();
        assert!(nyq.dealias().sup_norm() < 1e-14);
        assert!(!g.keeps_mode(22));
        assert!(g.keeps_mode(21));
    }
}
