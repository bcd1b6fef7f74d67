use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dnls_core::functionals::{
    energy_gauged, h1_equivalence_constant, lp_norm, mass, momentum_gauged, FieldMoments,
};
use dnls_core::gauge::{gauge_forward, gauge_inverse, ux_from_v};
use dnls_core::random::smooth_field;
use dnls_core::threshold::{
    boosted_energy_identity, cubic_analyze, cubic_f, f_bounds, momentum_bound, optimal_alpha,
};
use dnls_core::variational::{gn1_check, gn2_check};
use dnls_core::{ComplexField, Grid};

fn grid() -> Grid {
    Grid::new(40.0, 1024).unwrap()
}

fn field(seed: u64) -> ComplexField {
    smooth_field(&grid(), &mut ChaCha8Rng::seed_from_u64(seed))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivative_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let (f, g) = (field(s1), field(s2));
        let combo = ComplexField::new(
            &grid(),
            f.samples().iter().zip(g.samples()).map(|(x, y)| a * x + b * y).collect(),
        ).unwrap();
        let lhs = combo.derivative();
        let (df, dg) = (f.derivative(), g.derivative());
        let scale = 1.0 + df.sup_norm() + dg.sup_norm();
        for j in 0..lhs.len() {
            let rhs = a * df.samples()[j] + b * dg.samples()[j];
            prop_assert!((lhs.samples()[j] - rhs).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn parseval(seed in any::<u64>()) {
        let f = field(seed);
        let g = f.grid();
        let modes: f64 = f.spectrum().iter().map(|z| z.norm_sqr()).sum();
        let from_modes = g.dx() * modes / g.n_points() as f64;
        prop_assert!(rel(mass(&f), from_modes) <= 1e-12);
    }

    #[test]
    fn derivative_has_zero_mean(seed in any::<u64>()) {
        let f = field(seed);
        let m = f.derivative().integrate().norm();
        prop_assert!(m <= 1e-12 * (1.0 + f.sup_norm()));
    }

    #[test]
    fn cumulative_primitive_is_monotone(seed in any::<u64>()) {
        let f = field(seed);
        let prim = f.grid().cumulative_primitive(&f.modulus_sq());
        prop_assert!(prim.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn phase_and_translation_invariance(seed in any::<u64>(), theta in 0.0..(2.0 * PI), shift in 0usize..1024) {
        let f = field(seed);
        let rotated = f.scaled(Complex64::from_polar(1.0, theta));
        let shifted = f.rotated(shift);
        for g in [&rotated, &shifted] {
            prop_assert!(rel(mass(&f), mass(g)) <= 1e-12);
            prop_assert!((energy_gauged(&f) - energy_gauged(g)).abs() <= 1e-12 * (1.0 + energy_gauged(&f).abs()));
            prop_assert!((momentum_gauged(&f) - momentum_gauged(g)).abs() <= 1e-12 * (1.0 + momentum_gauged(&f).abs()));
            for p in [2, 4, 6] {
                prop_assert!(rel(lp_norm(&f, p).unwrap(), lp_norm(g, p).unwrap()) <= 1e-12);
            }
        }
    }

    #[test]
    fn boost_preserves_mass_and_l6(seed in any::<u64>(), alpha in -3.0..3.0f64) {
        let f = field(seed);
        let b = f.boosted(alpha);
        prop_assert!(rel(mass(&f), mass(&b)) <= 1e-12);
        prop_assert!(rel(lp_norm(&f, 6).unwrap(), lp_norm(&b, 6).unwrap()) <= 1e-12);
        prop_assert!(boosted_energy_identity(&f, alpha).abs() <= 1e-10 * (1.0 + energy_gauged(&f).abs()));
    }

    #[test]
    fn gn_inequalities_hold(seed in any::<u64>()) {
        let f = field(seed);
        prop_assert!(gn1_check(&f, "random").unwrap().ratio <= 1.0 + 1e-9);
        prop_assert!(gn2_check(&f, "random").unwrap().ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn gn_ratios_are_scale_invariant(seed in any::<u64>(), c in 0.1..10.0f64) {
        let f = field(seed);
        let g = f.scaled(Complex64::new(c, 0.0));
        prop_assert!(rel(gn1_check(&f, "f").unwrap().ratio, gn1_check(&g, "g").unwrap().ratio) <= 1e-12);
        prop_assert!(rel(gn2_check(&f, "f").unwrap().ratio, gn2_check(&g, "g").unwrap().ratio) <= 1e-12);
    }

    #[test]
    fn gauge_round_trip_and_modulus(seed in any::<u64>()) {
        let u = field(seed);
        let v = gauge_forward(&u).unwrap();
        prop_assert!(gauge_inverse(&v).unwrap().sup_distance(&u) <= 1e-12);
        for (a, b) in u.samples().iter().zip(v.samples()) {
            prop_assert!((a.norm() - b.norm()).abs() <= 1e-14);
        }
    }

    #[test]
    fn h1_equivalence_bound(seed in any::<u64>()) {
        let v = field(seed);
        let ux = mass(&ux_from_v(&v).unwrap()).sqrt();
        let vx = FieldMoments::of(&v).l2_grad();
        prop_assert!(ux <= h1_equivalence_constant(mass(&v)).unwrap() * vx * (1.0 + 1e-12));
    }

    #[test]
    fn bounds_hold_on_random_fields(seed in any::<u64>()) {
        let v = field(seed);
        let fb = f_bounds(&v).unwrap();
        prop_assert!(fb.holds(1e-9));
        prop_assert!(momentum_bound(&v, 1.0).unwrap().slack >= -1e-9);
        if let Ok(a) = optimal_alpha(&v) {
            if a.alpha > 0.0 {
                prop_assert!(momentum_bound(&v, a.alpha).unwrap().slack >= -1e-9);
            }
        }
    }

    #[test]
    fn reflection_is_an_involution(seed in any::<u64>()) {
        let f = field(seed);
        let back = f.reflected_conjugate().reflected_conjugate();
        prop_assert_eq!(back.samples(), f.samples());
    }

    #[test]
    fn cubic_roots_above_threshold(k in 4.0001..20.0f64) {
        let m0 = k * PI;
        let r = cubic_analyze(m0, 0.0).unwrap();
        let (x1, x2) = r.roots.unwrap();
        for x in [x1, x2] {
            prop_assert!(cubic_f(x, m0, r.b).abs() <= 1e-9 * r.b.max(1.0));
        }
        prop_assert_eq!(r.bracket_ok, Some(true));
        // 2m0/3 is the interior minimum
        let xm = 2.0 * m0 / 3.0;
        prop_assert!(cubic_f(xm * 0.999, m0, r.b) >= r.f_at_two_thirds);
        prop_assert!(cubic_f(xm * 1.001, m0, r.b) >= r.f_at_two_thirds);
    }
}
