//! Property tests over random phase shifts and failure probabilities.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use phaseshift::analytics::{self, Classification, FailureProb, PhaseAngle};
use phaseshift::simulator;

fn angle(radians: f64) -> PhaseAngle {
    PhaseAngle::from_radians(radians).unwrap()
}

fn prob(value: f64) -> FailureProb {
    FailureProb::new(value).unwrap()
}

proptest! {
    /// The complex-modulus deviation equals the reduced real form at
    /// eps = 1 - |u|^2.
    #[test]
    fn reduction_identity(
        theta in 0.0..=PI,
        modulus in 0.0..=1.0f64,
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let uts = Complex64::from_polar(modulus, phase);
        let raw = analytics::deviation_raw(angle(theta), uts).unwrap().value();
        let reduced = analytics::deviation(angle(theta), prob(1.0 - uts.norm_sqr())).value();
        prop_assert!((raw - reduced).abs() <= 1e-12);
    }

    /// deviation_raw sees only the modulus of the amplitude.
    #[test]
    fn raw_deviation_is_phase_blind(
        theta in 0.0..=PI,
        modulus in 0.0..=1.0f64,
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let plain = analytics::deviation_raw(angle(theta), Complex64::new(modulus, 0.0))
            .unwrap()
            .value();
        let rotated = analytics::deviation_raw(
            angle(theta),
            Complex64::from_polar(modulus, phase),
        )
        .unwrap()
        .value();
        prop_assert!((plain - rotated).abs() <= 1e-12);
    }

    /// eps d^2 stays a probability over the whole closed domain.
    #[test]
    fn deviation_stays_in_unit_interval(theta in 0.0..=PI, eps in 0.0..=1.0f64) {
        let d = analytics::amplitude_factor(angle(theta), prob(eps));
        let raw = eps * d * d;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&raw));
        let value = analytics::deviation(angle(theta), prob(eps)).value();
        prop_assert!((0.0..=1.0).contains(&value));
    }

    /// The factored gap agrees with the direct difference D - eps^3.
    #[test]
    fn gap_matches_direct_difference(theta in 0.0..=PI, eps in 0.0..=1.0f64) {
        let direct = analytics::deviation(angle(theta), prob(eps)).value() - eps * eps * eps;
        let factored = analytics::deviation_gap(angle(theta), prob(eps));
        prop_assert!((factored - direct).abs() <= 1e-12);
    }

    /// Classification tags agree with the sign of the gap.
    #[test]
    fn classification_matches_gap_sign(
        theta in 0.0..=PI,
        eps in 0.001..=0.999f64,
    ) {
        let gap = analytics::deviation_gap(angle(theta), prob(eps));
        let tag = analytics::classify(angle(theta), prob(eps)).unwrap();
        match tag {
            Classification::BelowCube => prop_assert!(gap < 0.0),
            Classification::AboveCube => prop_assert!(gap > 0.0),
            Classification::EqualCube => prop_assert!(gap.abs() <= 1e-12),
        }
    }

    /// The threshold never leaves [-1, 3/5].
    #[test]
    fn threshold_range(theta in 0.0..=PI) {
        let tau = analytics::epsilon_threshold(angle(theta));
        prop_assert!((-1.0..=0.6 + 1e-15).contains(&tau));
    }

    /// The rational success ratio equals the probability quotient away from
    /// the eps = 1 degeneracy.
    #[test]
    fn ratio_matches_quotient(theta in 0.0..=PI, eps in 1e-6..=(1.0 - 1e-4)) {
        let rational = analytics::success_ratio(angle(theta), prob(eps));
        let quotient = analytics::success_probability(angle(theta), prob(eps))
            / analytics::success_probability(angle(PI / 3.0), prob(eps));
        prop_assert!((rational - quotient).abs() <= 1e-12);
    }

    /// Zero-deviation points cancel the deviation throughout (0, 3/4].
    #[test]
    fn zero_points_cancel(eps in 0.001..=0.75f64) {
        let star = analytics::zero_deviation_point(prob(eps)).unwrap();
        prop_assert!(star.radians() > PI / 3.0 && star.radians() <= PI);
        prop_assert!(analytics::deviation(star, prob(eps)).value() < 1e-12);
    }

    /// Simulated single-iteration failure tracks the closed form for any
    /// grid point, not just the verification lattice.
    #[test]
    fn simulator_tracks_closed_form(theta in 0.0..=PI, eps in 0.0..=1.0f64) {
        let instance = simulator::crafted_instance(8, prob(eps), 0, 1).unwrap();
        let simulated = simulator::measured_failure(
            &simulator::one_iteration(&instance, angle(theta)),
            1,
        )
        .unwrap()
        .value();
        let analytic = analytics::deviation(angle(theta), prob(eps)).value();
        prop_assert!((simulated - analytic).abs() <= 1e-10);
    }

    /// Recursion traces stay inside [0, 1] and flag underflow only after
    /// genuinely positive values.
    #[test]
    fn recursion_traces_are_probabilities(
        theta in 0.0..=PI,
        eps in 0.001..=0.999f64,
        depth in 0usize..=10,
    ) {
        let trace = analytics::recurrence_trace(angle(theta), prob(eps), depth).unwrap();
        prop_assert_eq!(trace.epsilons().len(), depth + 1);
        for value in trace.epsilons() {
            prop_assert!((0.0..=1.0).contains(&value.value()));
        }
        if let Some(level) = trace.first_underflow() {
            prop_assert!(level >= 1 && level <= depth);
            prop_assert!(trace.epsilons()[level - 1].value() > 0.0);
            prop_assert_eq!(trace.epsilons()[level].value(), 0.0);
        }
    }
}
