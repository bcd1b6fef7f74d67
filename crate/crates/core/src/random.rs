//! Seeded smooth test fields that decay well inside the default box.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{ComplexField, Grid};

/// A Gaussian window `exp(-x²/(2s²))`, `s ∈ [1, 2.2]`, times a random
/// trigonometric polynomial with at most four modes of frequency `|κ| ≤ 3`,
/// scaled so that the peak modulus lies in `[0.1, 2]`.
pub fn smooth_field<R: Rng + ?Sized>(grid: &Grid, rng: &mut R) -> ComplexField {
    let s: f64 = rng.gen_range(1.0..2.2);
    let center: f64 = rng.gen_range(-1.0..1.0);
    let modes: usize = rng.gen_range(1..=4);
    let terms: Vec<(f64, Complex64)> = (0..modes)
        .map(|_| {
            let kappa = rng.gen_range(-3.0..3.0);
            let coeff = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (kappa, coeff)
        })
        .collect();
    let peak: f64 = rng.gen_range(0.1..2.0);
    let raw: Vec<Complex64> = grid
        .coordinates()
        .iter()
        .map(|&x| {
            let y = x - center;
            let window = (-y * y / (2.0 * s * s)).exp();
            let poly: Complex64 = terms
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, k * y))
                .sum::<Complex64>()
                + Complex64::new(0.5, 0.0);
            window * poly
        })
        .collect();
    let sup = raw.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = if sup > 0.0 { peak / sup } else { 0.0 };
    let samples = raw.into_iter().map(|z| z * scale).collect();
    ComplexField::new(grid, samples).expect("finite by construction")
}

/// `count` fields from a ChaCha stream seeded with `seed`.
pub fn smooth_fields(grid: &Grid, seed: u64, count: usize) -> Vec<ComplexField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| smooth_field(grid, &mut rng)).collect()
}
