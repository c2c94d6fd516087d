use std::f64::consts::{PI, TAU};

use landau_paraxial::config::RunConfig;
use landau_paraxial::gouy::unwrap_phase;
use landau_paraxial::grid::{
    apply_transverse_operator, make_radial_grid, norm, ComplexRadialField, TransverseOperatorParams,
};
use landau_paraxial::modes::{landau_energy, q_factor, Carrier, QuantumNumbers};
use landau_paraxial::propagator::{cn_step, PropagationParams};
use landau_paraxial::special::laguerre;
use landau_paraxial::units::{make_context, ParticleSpec, Species, Spin};
use landau_paraxial::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn spin() -> impl Strategy<Value = Spin> {
    prop_oneof![Just(Spin::UP), Just(Spin::DOWN)]
}

fn species() -> impl Strategy<Value = Species> {
    prop_oneof![Just(Species::Electron), Just(Species::Positron)]
}

fn field(grid_n: usize, ell: i32, seed: Vec<(f64, f64)>) -> ComplexRadialField {
    let g = make_radial_grid(40.0, grid_n).unwrap();
    let values = seed
        .into_iter()
        .map(|(a, b)| Complex64::new(a, b))
        .collect();
    ComplexRadialField::new(g, ell, values, Carrier::Paraxial).unwrap()
}

const N: usize = 64;

proptest! {
    #[test]
    fn unwrap_steps_are_bounded(raw in prop::collection::vec(-10.0f64..10.0, 0..60)) {
        let u = unwrap_phase(&raw);
        prop_assert_eq!(u.len(), raw.len());
        for w in u.windows(2) {
            let d = w[1] - w[0];
            prop_assert!((-PI - 1e-9..=PI + 1e-9).contains(&d));
        }
        for (a, b) in u.iter().zip(&raw) {
            let turns = (a - b) / TAU;
            prop_assert!((turns - turns.round()).abs() < 1e-9);
        }
        let again = unwrap_phase(&u);
        for (a, b) in again.iter().zip(&u) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn q_factor_is_even(n in 0u32..50, ell in -30i32..30, s in spin(), sp in species()) {
        let q = q_factor(QuantumNumbers::new(n, ell), ParticleSpec::new(sp, s));
        prop_assert_eq!(q % 2, 0);
    }

    #[test]
    fn energy_increases_with_n(n in 0u32..40, ell in -5i32..5, s in spin(), b in 1e-4f64..2.0, pz in -1.0f64..1.0) {
        let p = ParticleSpec::electron(s);
        let e0 = landau_energy(QuantumNumbers::new(n, ell), p, pz, b).unwrap();
        let e1 = landau_energy(QuantumNumbers::new(n + 1, ell), p, pz, b).unwrap();
        prop_assert!(e1 > e0 && e0 >= 1.0);
    }

    #[test]
    fn laguerre_at_origin_is_binomial(n in 0i64..15, alpha in 0i64..10) {
        let mut binom = 1.0;
        for i in 0..n {
            binom *= (alpha + n - i) as f64 / (i + 1) as f64;
        }
        let got = laguerre(n, alpha, 0.0).unwrap();
        prop_assert!((got - binom).abs() <= 1e-12 * binom);
    }

    #[test]
    fn operator_is_linear(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), N),
        c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), N),
        alpha in (-2.0f64..2.0, -2.0f64..2.0),
        ell in -3i32..3,
        s in spin(),
    ) {
        let ctx = make_context(Species::Electron, s.value(), 0.05, 1.0).unwrap();
        let op = TransverseOperatorParams::from_context(&ctx, ell);
        let fa = field(N, ell, a);
        let fc = field(N, ell, c);
        let alpha = Complex64::new(alpha.0, alpha.1);
        let one = Complex64::new(1.0, 0.0);
        let lhs = apply_transverse_operator(&fa.combine(alpha, &fc, one).unwrap(), &op).unwrap();
        let ta = apply_transverse_operator(&fa, &op).unwrap();
        let tc = apply_transverse_operator(&fc, &op).unwrap();
        let rhs = ta.combine(alpha, &tc, one).unwrap();
        let scale = lhs.max_amplitude().max(1.0);
        for (x, y) in lhs.values.iter().zip(&rhs.values) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn crank_nicolson_is_unitary(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), N),
        ell in -3i32..3,
        dz in 1e-3f64..10.0,
    ) {
        let f = field(N, ell, a);
        let ctx = make_context(Species::Positron, 0.5, 0.05, 1.0).unwrap();
        let params = PropagationParams::magnetic(ctx, ell, 1.0, 1, 1);
        let before = norm(&f);
        let after = norm(&cn_step(&f, &params, dz).unwrap());
        prop_assert!(((after - before) / before.max(1e-300)).abs() < 1e-12);
    }

    #[test]
    fn config_parsing_is_total(text in "[a-z._=# 0-9\\-\n]{0,80}") {
        match RunConfig::parse(&text) {
            Ok(_) | Err(Error::Config { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error kind {other:?}"),
        }
    }
}
