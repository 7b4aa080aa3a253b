//! Property-based invariants: ranges, symmetry, ordering, and structural
//! identities that must hold on every valid input, not just on the
//! hand-picked cases of the unit suites.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use qgeo::bloch_geometry::{
    f_sjoqvist, f_zhsl, geodesic_length, mc_line_element, volume_density,
    GeodesicEndpoints, MCFunction,
};
use qgeo::channels::sample_cptp;
use qgeo::metrics::{
    bures_angle, bures_distance_sq, fidelity, generalized_sjoqvist_distance_sq,
    sjoqvist_distance_sq, MetricKind,
};
use qgeo::states::{bloch_to_density, sample_zhsl, BlochState};
use qgeo::DensityOperator;

const TOL_DEG: f64 = 1e-10;

fn qubit_state() -> impl Strategy<Value = DensityOperator> {
    (
        0.0..0.98f64,
        0.0..std::f64::consts::PI,
        0.0..std::f64::consts::TAU,
    )
        .prop_map(|(r, theta, phi)| {
            bloch_to_density(&BlochState::new(r, theta, phi).unwrap()).unwrap()
        })
}

fn state_pair(dim: usize) -> impl Strategy<Value = (DensityOperator, DensityOperator)> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        (
            sample_zhsl(dim, &mut rng).unwrap(),
            sample_zhsl(dim, &mut rng).unwrap(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fidelity_is_bounded_symmetric_and_reflexive((a, b) in state_pair(3)) {
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&fab));
        prop_assert!((fab - fba).abs() <= 1e-9);
        prop_assert!(fidelity(&a, &a).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn bures_distance_is_bounded_and_symmetric((a, b) in state_pair(3)) {
        let dab = bures_distance_sq(&a, &b).unwrap();
        let dba = bures_distance_sq(&b, &a).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&dab));
        prop_assert!((dab - dba).abs() <= 1e-9);
        let angle = bures_angle(&a, &b).unwrap();
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&angle));
    }

    #[test]
    fn generalized_matches_bures_and_bounds_interferometric(
        (a, b) in state_pair(2)
    ) {
        let gen = generalized_sjoqvist_distance_sq(&a, &b).unwrap();
        let bures = bures_distance_sq(&a, &b).unwrap();
        prop_assert!((gen - bures).abs() < 1e-9);
        if let Ok(sj) = sjoqvist_distance_sq(&a, &b, TOL_DEG) {
            prop_assert!((0.0..=4.0 + 1e-12).contains(&sj));
            prop_assert!(gen <= sj + 1e-10);
        }
    }

    #[test]
    fn interferometric_distance_vanishes_reflexively(a in qubit_state()) {
        prop_assert_eq!(sjoqvist_distance_sq(&a, &a, TOL_DEG).unwrap(), 0.0);
        prop_assert_eq!(bures_distance_sq(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn channels_preserve_state_validity(seed in any::<u64>()) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let rho = sample_zhsl(2, &mut rng).unwrap();
        let ch = sample_cptp(2, 2, &mut rng).unwrap();
        // apply() revalidates internally; reaching Ok is the property.
        let out = ch.apply(&rho).unwrap();
        prop_assert!(out.purity() <= 1.0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mc_functions_are_self_inversive_pointwise(
        nu in 0.05..6.0f64,
        log_t in -2.5..2.5f64
    ) {
        let t = 10f64.powf(log_t);
        let lhs = f_zhsl(1.0 / t, nu).unwrap();
        let rhs = f_zhsl(t, nu).unwrap() / t;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1.0));
    }

    #[test]
    fn interferometric_mc_function_is_positive_off_one(
        log_t in -3.0..3.0f64
    ) {
        let t = 10f64.powf(log_t);
        let v = f_sjoqvist(t).unwrap();
        if (t - 1.0).abs() > 1e-9 {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn geodesic_lengths_are_ordered_and_nonnegative(
        r_a in 0.0..=1.0f64,
        r_b in 0.0..=1.0f64,
        theta in 0.0..=std::f64::consts::PI
    ) {
        let e = GeodesicEndpoints::new(r_a, r_b, theta).unwrap();
        let sj = geodesic_length(MetricKind::Sjoqvist, &e);
        let bu = geodesic_length(MetricKind::Bures, &e);
        prop_assert!(sj >= 0.0 && bu >= 0.0);
        // The Bures metric is pointwise dominated by the interferometric
        // one (equal radial part, angular weight sin^2 <= 1), so its
        // geodesic distance can never exceed the interferometric length.
        prop_assert!(bu <= sj + 1e-12);
        // Swapping endpoints is a symmetry of both.
        let swapped = GeodesicEndpoints::new(r_b, r_a, theta).unwrap();
        prop_assert_eq!(geodesic_length(MetricKind::Sjoqvist, &swapped), sj);
        prop_assert!((geodesic_length(MetricKind::Bures, &swapped) - bu).abs() <= 1e-15);
    }

    #[test]
    fn volume_densities_are_nonnegative(
        r in 0.0..0.999f64,
        theta in 0.0..=std::f64::consts::PI,
        nu in 0.05..5.0f64
    ) {
        for f in [
            MCFunction::Bures,
            MCFunction::Sjoqvist,
            MCFunction::zhsl(nu).unwrap(),
        ] {
            prop_assert!(volume_density(&f, r, theta).unwrap() >= 0.0);
        }
    }

    #[test]
    fn chart_line_elements_are_positive_semidefinite_forms(
        r in 0.01..0.99f64,
        theta in 0.0..=std::f64::consts::PI,
        dr in -1e-2..1e-2f64,
        dtheta in -1e-2..1e-2f64,
        dphi in -1e-2..1e-2f64
    ) {
        for f in [MCFunction::Bures, MCFunction::Sjoqvist] {
            let ds2 = mc_line_element(&f, r, theta, dr, dtheta, dphi).unwrap();
            prop_assert!(ds2 >= 0.0);
        }
    }
}
