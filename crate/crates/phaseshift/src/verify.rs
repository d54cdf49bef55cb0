//! The crate's invariant suite: every documented property of the closed
//! forms, the simulator, and the sweep harness, runnable as one batch.
//!
//! Each check reports a pass/fail flag plus a short measurement (worst error
//! observed, grid size). The suite is deterministic: randomized checks use a
//! fixed seed.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analytics::{self, EpsilonRange, FailureProb, PhaseAngle};
use crate::harness::{self, eps_grid, theta_grid, Quantity, SweepMode, SweepSpec};
use crate::simulator::{self, StateVector, UnitaryMatrix};

/// Result of one invariant check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<36} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// All check outcomes from one run of the suite.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            writeln!(f, "{check}")?;
        }
        Ok(())
    }
}

/// Runs every invariant check of all modules.
pub fn run_all() -> VerificationReport {
    let checks = vec![
        deviation_bounds(),
        reduction_identity(),
        phase_invariance(),
        gap_consistency(),
        lemma1_positive_gap(),
        lemma2_sign_characterization(),
        threshold_monotonicity(),
        zero_deviation_points(),
        average_zero_point_quadrature(),
        kappa_threshold(),
        large_eps_monotonicity(),
        large_eps_lower_bound(),
        table3_identities(),
        small_eps_asymptotics(),
        rho_limit(),
        recursion_closed_form(),
        unitarity_preservation(),
        oracle_equivalence(),
        iteration_decomposition(),
        recursion_consistency(),
        amplitude_amplification_reduction(),
        sweep_determinism(),
        crosscheck_discrepancy(),
        tables_reproduction(),
    ];
    VerificationReport { checks }
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn angle(radians: f64) -> PhaseAngle {
    PhaseAngle::from_radians(radians).expect("check angles stay in [0, pi]")
}

fn prob(value: f64) -> FailureProb {
    FailureProb::new(value).expect("check probabilities stay in [0, 1]")
}

/// ε d² stays inside [0, 1] over the full closed domain, evaluated through
/// the public amplitude factor so no internal clamping can mask a violation.
fn deviation_bounds() -> CheckOutcome {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for theta in theta_grid(101) {
        for i in 0..=100 {
            let eps = prob(i as f64 / 100.0);
            let d = analytics::amplitude_factor(theta, eps);
            let raw = eps.value() * d * d;
            lo = lo.min(raw);
            hi = hi.max(raw);
        }
    }
    outcome(
        "deviation-bounds",
        (-1e-12..=1.0 + 1e-12).contains(&lo) && hi <= 1.0 + 1e-12,
        format!("range [{lo:.3e}, {hi}] over a 101x101 grid"),
    )
}

/// The complex-modulus form of the deviation equals the reduced real form at
/// ε = 1 − |u|² for 1000 seeded random amplitudes.
fn reduction_identity() -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(0x0ead_beef);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let theta = angle(rng.gen_range(0.0..=PI));
        let modulus: f64 = rng.gen_range(0.0..=1.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let uts = Complex64::from_polar(modulus, phase);
        let raw = analytics::deviation_raw(theta, uts)
            .expect("|u| <= 1 by construction")
            .value();
        let reduced = analytics::deviation(theta, prob(1.0 - uts.norm_sqr())).value();
        worst = worst.max((raw - reduced).abs());
    }
    outcome(
        "reduction-identity",
        worst <= 1e-12,
        format!("max |raw - reduced| = {worst:.3e} over 1000 samples"),
    )
}

/// deviation_raw depends on the amplitude only through its modulus.
fn phase_invariance() -> CheckOutcome {
    let mut rng = StdRng::seed_from_u64(0x00ac_e0fb_a5e5);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let theta = angle(rng.gen_range(0.0..=PI));
        let modulus: f64 = rng.gen_range(0.0..=1.0);
        let base = Complex64::new(modulus, 0.0);
        let rotated = Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU));
        let a = analytics::deviation_raw(theta, base).unwrap().value();
        let b = analytics::deviation_raw(theta, rotated).unwrap().value();
        worst = worst.max((a - b).abs());
    }
    outcome(
        "phase-invariance",
        worst <= 1e-12,
        format!("max phase sensitivity = {worst:.3e} over 500 samples"),
    )
}

/// The factored gap equals D(θ) − ε³ on a 200×200 grid.
fn gap_consistency() -> CheckOutcome {
    let mut worst = 0.0f64;
    for theta in theta_grid(200) {
        for j in 0..200 {
            let eps = prob(j as f64 / 199.0);
            let e = eps.value();
            let direct = analytics::deviation(theta, eps).value() - e * e * e;
            let factored = analytics::deviation_gap(theta, eps);
            worst = worst.max((factored - direct).abs());
        }
    }
    outcome(
        "gap-consistency",
        worst <= 1e-12,
        format!("max |factored - direct| = {worst:.3e} over a 200x200 grid"),
    )
}

/// For θ ∈ [0, π/3) and interior ε the gap is strictly positive.
fn lemma1_positive_gap() -> CheckOutcome {
    let mut min_gap = f64::INFINITY;
    for i in 0..60 {
        let theta = angle((PI / 3.0) * i as f64 / 60.0);
        for j in 1..100 {
            let gap = analytics::deviation_gap(theta, prob(j as f64 / 100.0));
            min_gap = min_gap.min(gap);
        }
    }
    outcome(
        "lemma1-positive-gap",
        min_gap > 0.0,
        format!("min gap = {min_gap:.3e} over [0, pi/3) x (0, 1)"),
    )
}

/// The gap is negative exactly when θ > π/3 and ε exceeds the threshold,
/// away from a 1e−9 band around both boundaries.
fn lemma2_sign_characterization() -> CheckOutcome {
    let mut checked = 0usize;
    let mut violations = 0usize;
    for theta in theta_grid(181) {
        if (theta.radians() - PI / 3.0).abs() < 1e-9 {
            continue;
        }
        let tau = analytics::epsilon_threshold(theta);
        for j in 1..200 {
            let e = j as f64 / 200.0;
            if (e - tau).abs() < 1e-9 {
                continue;
            }
            checked += 1;
            let negative = analytics::deviation_gap(theta, prob(e)) < 0.0;
            let characterized = theta.radians() > PI / 3.0 && e > tau;
            if negative != characterized {
                violations += 1;
            }
        }
    }
    outcome(
        "lemma2-sign-characterization",
        violations == 0,
        format!("{violations} sign violations over {checked} grid points"),
    )
}

/// The threshold is nondecreasing in θ with exact endpoint values −1, 3/5.
fn threshold_monotonicity() -> CheckOutcome {
    let grid = theta_grid(2001);
    let values: Vec<f64> = grid
        .iter()
        .map(|t| analytics::epsilon_threshold(*t))
        .collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    let start_err = (values[0] + 1.0).abs();
    let end_err = (values[values.len() - 1] - 0.6).abs();
    outcome(
        "threshold-monotonicity",
        monotone && start_err <= 1e-15 && end_err <= 1e-15,
        format!(
            "monotone over 2001 points; endpoint errors {start_err:.3e}, {end_err:.3e}"
        ),
    )
}

/// Choosing the zero-deviation point as the phase shift cancels the
/// deviation for every ε in (0, 3/4].
fn zero_deviation_points() -> CheckOutcome {
    let mut worst = 0.0f64;
    for i in 1..=750 {
        let eps = prob(i as f64 / 1000.0);
        let star = analytics::zero_deviation_point(eps).expect("grid stays in (0, 3/4]");
        worst = worst.max(analytics::deviation(star, eps).value());
    }
    outcome(
        "zero-deviation-points",
        worst < 1e-12,
        format!("max residual deviation = {worst:.3e} over 750 eps values"),
    )
}

/// The closed-form arccos argument of the averaged zero point equals the
/// numerically integrated mean of 1 − 1/(2(1−ε)) over the range.
fn average_zero_point_quadrature() -> CheckOutcome {
    let ranges = [
        (0.0, 0.5),
        (0.0, 0.75),
        (0.1, 0.6),
        (0.25, 0.7),
        (0.4, 0.55),
    ];
    let mut worst = 0.0f64;
    for (beta, alpha) in ranges {
        let range = EpsilonRange::from_values(beta, alpha).expect("ranges are valid");
        let closed = analytics::average_zero_point(range).radians().cos();
        let integral = adaptive_simpson(
            &|e: f64| 1.0 - 1.0 / (2.0 * (1.0 - e)),
            beta,
            alpha,
            1e-13,
        );
        let quadrature = integral / (alpha - beta);
        worst = worst.max((closed - quadrature).abs());
    }
    outcome(
        "average-zero-point-quadrature",
        worst <= 1e-9,
        format!("max |closed - quadrature| = {worst:.3e} over 5 ranges"),
    )
}

/// κ lies in (0, 1) and for every ε above it the averaged phase choice has
/// deviation below ε³. Below κ the direction is not asserted.
fn kappa_threshold() -> CheckOutcome {
    let ranges = [(0.0, 0.5), (0.0, 0.75), (0.1, 0.6), (0.25, 0.7)];
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    for (beta, alpha) in ranges {
        let range = EpsilonRange::from_values(beta, alpha).expect("ranges are valid");
        let k = analytics::kappa(range);
        ok &= k > 0.0 && k < 1.0;
        for step in 0..200 {
            let e = k + 1e-6 + (0.9999 - k - 1e-6) * step as f64 / 199.0;
            let averaged = analytics::average_zero_point_deviation(prob(e), range)
                .expect("interior eps")
                .value();
            let margin = e * e * e - averaged;
            worst_margin = worst_margin.min(margin);
            ok &= margin > 0.0;
        }
    }
    outcome(
        "kappa-threshold",
        ok,
        format!("min (eps^3 - D) margin above kappa = {worst_margin:.3e}"),
    )
}

/// For ε ≥ 3/4 the deviation decreases monotonically from ε at θ = 0 down
/// to ε(4ε−3)² at θ = π.
fn large_eps_monotonicity() -> CheckOutcome {
    let mut ok = true;
    let mut worst_rise = 0.0f64;
    for &e in &[0.75, 0.8, 0.9, 0.99] {
        let eps = prob(e);
        let values: Vec<f64> = theta_grid(1000)
            .into_iter()
            .map(|t| analytics::deviation(t, eps).value())
            .collect();
        for w in values.windows(2) {
            worst_rise = worst_rise.max(w[1] - w[0]);
        }
        ok &= values.windows(2).all(|w| w[1] - w[0] <= 1e-14);
        ok &= (values[0] - e).abs() <= 1e-15;
        let floor = e * (4.0 * e - 3.0) * (4.0 * e - 3.0);
        ok &= (values[values.len() - 1] - floor).abs() <= 1e-12;
    }
    outcome(
        "large-eps-monotonicity",
        ok,
        format!("worst ascending step = {worst_rise:.3e} over 1000-point grids"),
    )
}

/// ε(4ε−3)² lower-bounds the deviation over all phase shifts once ε ≥ 3/4.
fn large_eps_lower_bound() -> CheckOutcome {
    let mut worst = f64::INFINITY;
    for &e in &[0.75, 0.8, 0.85, 0.9, 0.95, 0.99, 1.0] {
        let eps = prob(e);
        let floor = analytics::min_deviation_large_eps(eps)
            .expect("eps >= 3/4")
            .value();
        for theta in theta_grid(500) {
            worst = worst.min(analytics::deviation(theta, eps).value() - floor);
        }
    }
    outcome(
        "large-eps-lower-bound",
        worst >= -1e-12,
        format!("min D - floor = {worst:.3e} over 500-point grids"),
    )
}

/// The tabulated closed forms coincide with the deviation for every ε.
fn table3_identities() -> CheckOutcome {
    let angles = [PI / 2.0, 2.0 * PI / 3.0, 3.0 * PI / 4.0, 5.0 * PI / 6.0];
    let mut worst = 0.0f64;
    for &t in &angles {
        let theta = angle(t);
        for i in 0..=100 {
            let eps = prob(i as f64 / 100.0);
            let diff = (analytics::table3_deviation(theta, eps)
                .expect("angle is tabulated")
                .value()
                - analytics::deviation(theta, eps).value())
            .abs();
            worst = worst.max(diff);
        }
    }
    outcome(
        "table3-identities",
        worst <= 1e-12,
        format!("max |closed form - deviation| = {worst:.3e}"),
    )
}

/// ε³ is negligible against D(θ) for small ε once θ is bounded away from
/// π/3: at ε = 10⁻³ the ratio stays below 10⁻³.
fn small_eps_asymptotics() -> CheckOutcome {
    let eps = prob(1e-3);
    let cube = 1e-9f64;
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for theta in theta_grid(181) {
        if (2.0 * theta.radians().cos() - 1.0).abs() <= 0.1 {
            continue;
        }
        checked += 1;
        let ratio = cube / analytics::deviation(theta, eps).value();
        worst = worst.max(ratio);
    }
    outcome(
        "small-eps-asymptotics",
        worst < 1e-3,
        format!("max eps^3/D = {worst:.3e} over {checked} angles"),
    )
}

/// The rational success ratio at ε = 1 − 10⁻⁴ approximates its ε → 1 limit
/// within 10⁻³.
fn rho_limit() -> CheckOutcome {
    let eps = prob(1.0 - 1e-4);
    let mut worst = 0.0f64;
    for theta in theta_grid(181) {
        let diff = (analytics::success_ratio(theta, eps) - analytics::rho(theta)).abs();
        worst = worst.max(diff);
    }
    outcome(
        "rho-limit",
        worst < 1e-3,
        format!("max |ratio - rho| = {worst:.3e} at eps = 1 - 1e-4"),
    )
}

/// At θ = π/3 the recursion trace follows ε^(3^m).
fn recursion_closed_form() -> CheckOutcome {
    let mut worst = 0.0f64;
    for &e in &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let trace = analytics::recurrence_trace(angle(PI / 3.0), prob(e), 5)
            .expect("interior eps");
        for (m, value) in trace.epsilons().iter().enumerate() {
            let expected = e.powf(3f64.powi(m as i32));
            let rel = (value.value() - expected).abs() / expected;
            worst = worst.max(rel);
        }
    }
    outcome(
        "recursion-closed-form",
        worst <= 1e-9,
        format!("max relative error vs eps^(3^m) = {worst:.3e}, m <= 5"),
    )
}

/// Constructed and recursed matrices stay unitary; state operations
/// preserve the norm.
fn unitarity_preservation() -> CheckOutcome {
    let mut worst_defect = 0.0f64;
    let mut worst_norm = 0.0f64;

    let hadamard = simulator::hadamard_instance(3, 5).expect("3 qubits fit the cap");
    worst_defect = worst_defect.max(hadamard.unitary().unitarity_defect());

    for &e in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let instance = simulator::crafted_instance(8, prob(e), 0, 1).expect("valid instance");
        worst_defect = worst_defect.max(instance.unitary().unitarity_defect());
        for &t in &[0.0, PI / 3.0, PI / 2.0, PI] {
            let state = simulator::one_iteration(&instance, angle(t));
            worst_norm = worst_norm.max((state.norm() - 1.0).abs());
        }
    }

    let instance = simulator::crafted_instance(8, prob(0.85), 0, 1).expect("valid instance");
    for depth in [1, 2, 4] {
        let recursed = simulator::recursion_unitary(&instance, angle(2.0), depth)
            .expect("within caps");
        worst_defect = worst_defect.max(recursed.unitarity_defect());
    }

    outcome(
        "unitarity-preservation",
        worst_defect <= 1e-8 && worst_norm <= 1e-10,
        format!("max unitarity defect = {worst_defect:.3e}, max norm drift = {worst_norm:.3e}"),
    )
}

/// The keystone: simulated single-iteration failure equals the closed-form
/// deviation over a 25×25 (θ, ε) grid on dimension-8 crafted instances.
fn oracle_equivalence() -> CheckOutcome {
    let mut worst = 0.0f64;
    for theta in theta_grid(25) {
        for eps in eps_grid(0.02, 0.98, 25).expect("valid grid") {
            let instance =
                simulator::crafted_instance(8, eps, 0, 1).expect("valid instance");
            let simulated = simulator::measured_failure(
                &simulator::one_iteration(&instance, theta),
                1,
            )
            .expect("valid index")
            .value();
            let analytic = analytics::deviation(theta, eps).value();
            worst = worst.max((simulated - analytic).abs());
        }
    }
    outcome(
        "oracle-equivalence",
        worst <= 1e-10,
        format!("max |simulated - analytic| = {worst:.3e} over 625 grid points"),
    )
}

/// The simulated final state decomposes as
/// [e^{iθ} + |U_ts|²(e^{iθ}−1)²]·U|s⟩ + U_ts(e^{iθ}−1)|t⟩.
fn iteration_decomposition() -> CheckOutcome {
    let mut instances = vec![
        simulator::hadamard_instance(2, 3).expect("valid"),
        simulator::hadamard_instance(3, 5).expect("valid"),
    ];
    for &e in &[0.1, 0.5, 0.9] {
        instances.push(simulator::crafted_instance(5, prob(e), 0, 3).expect("valid"));
        instances.push(simulator::crafted_instance(8, prob(e), 2, 7).expect("valid"));
    }
    let mut worst = 0.0f64;
    for instance in &instances {
        let u = instance.unitary();
        let queried = u.apply(
            &StateVector::basis(u.dim(), instance.source_index()).expect("valid index"),
        );
        let uts = u.entry(instance.target_index(), instance.source_index());
        for &t in &[0.0, 0.7, PI / 3.0, PI / 2.0, 2.5, PI] {
            let z = Complex64::from_polar(1.0, t);
            let coeff = z + (z - 1.0) * (z - 1.0) * uts.norm_sqr();
            let final_state = simulator::one_iteration(instance, angle(t));
            let mut max_component = 0.0f64;
            for (i, amp) in final_state.amplitudes().iter().enumerate() {
                let mut expected = coeff * queried.amplitude(i);
                if i == instance.target_index() {
                    expected += uts * (z - 1.0);
                }
                max_component = max_component.max((amp - expected).norm());
            }
            worst = worst.max(max_component);
        }
    }
    outcome(
        "iteration-decomposition",
        worst <= 1e-10,
        format!("max component residual = {worst:.3e} over {} instances", instances.len()),
    )
}

/// The matrix recursion's failure sequence equals the scalar recurrence for
/// m ≤ 6 across three phase shifts and three starting probabilities.
fn recursion_consistency() -> CheckOutcome {
    let mut worst = 0.0f64;
    for &t in &[PI / 3.0, PI / 2.0, 5.0 * PI / 6.0] {
        let theta = angle(t);
        for &e in &[0.3, 0.75, 0.9] {
            let instance = simulator::crafted_instance(8, prob(e), 0, 1).expect("valid");
            let trace =
                analytics::recurrence_trace(theta, prob(e), 6).expect("interior eps");
            for (level, expected) in trace.epsilons().iter().enumerate() {
                let u_m = simulator::recursion_unitary(&instance, theta, level)
                    .expect("within caps");
                let state = u_m.apply(&StateVector::basis(8, 0).expect("valid index"));
                let failure = simulator::measured_failure(&state, 1)
                    .expect("valid index")
                    .value();
                worst = worst.max((failure - expected.value()).abs());
            }
        }
    }
    outcome(
        "recursion-consistency",
        worst <= 1e-8,
        format!("max |matrix - scalar| = {worst:.3e} for m <= 6"),
    )
}

/// At θ = π the iteration operator equals the selective-inversion
/// amplitude-amplification iteration as a matrix.
fn amplitude_amplification_reduction() -> CheckOutcome {
    let mut worst = 0.0f64;
    let instances = [
        simulator::crafted_instance(8, prob(0.6), 0, 1).expect("valid"),
        simulator::hadamard_instance(2, 3).expect("valid"),
    ];
    for instance in &instances {
        let dim = instance.dim();
        let u = instance.unitary();
        let phase_iteration =
            simulator::recursion_unitary(instance, angle(PI), 1).expect("within caps");
        let classical = u
            .multiply(&reflection_about(dim, instance.source_index()))
            .multiply(&u.adjoint())
            .multiply(&reflection_about(dim, instance.target_index()))
            .multiply(u);
        worst = worst.max(phase_iteration.max_entry_distance(&classical));
    }
    outcome(
        "amplitude-amplification-reduction",
        worst <= 1e-12,
        format!("max entry distance from inversion iteration = {worst:.3e}"),
    )
}

/// I − 2|x⟩⟨x| as a dense matrix.
fn reflection_about(dim: usize, index: usize) -> UnitaryMatrix {
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        entries[i * dim + i] = if i == index {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
    }
    UnitaryMatrix::from_entries(dim, entries).expect("reflections are unitary")
}

/// Identical sweep specs serialize byte-identically regardless of the rayon
/// pool they run under.
fn sweep_determinism() -> CheckOutcome {
    let spec = SweepSpec::new(
        theta_grid(19),
        eps_grid(0.05, 0.95, 7).expect("valid grid"),
        SweepMode::CrossChecked { dim: 5 },
        &[Quantity::Deviation, Quantity::Gap, Quantity::Ratio],
    )
    .expect("valid spec");
    let baseline = harness::run_sweep(&spec).to_csv();
    let mut consistent = true;
    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("local pool");
        let rerun = pool.install(|| harness::run_sweep(&spec).to_csv());
        consistent &= rerun == baseline;
    }
    consistent &= harness::run_sweep(&spec).to_csv() == baseline;
    outcome(
        "sweep-determinism",
        consistent,
        format!(
            "{} bytes identical across reruns and pools of 1 and 4 threads",
            baseline.len()
        ),
    )
}

/// A full cross-checked sweep on the default grids stays within the
/// single-iteration tolerance for 0.02 ≤ ε ≤ 0.98.
fn crosscheck_discrepancy() -> CheckOutcome {
    let spec = SweepSpec::new(
        SweepSpec::default_theta_grid(),
        SweepSpec::default_eps_grid(),
        SweepMode::CrossChecked { dim: 8 },
        &[Quantity::Deviation],
    )
    .expect("valid spec");
    let result = harness::run_sweep(&spec);
    let mut worst = 0.0f64;
    let mut counted = 0usize;
    for record in result.records() {
        if (0.02..=0.98).contains(&record.eps) {
            counted += 1;
            worst = worst.max(record.abs_discrepancy.expect("cross-checked"));
        }
    }
    outcome(
        "crosscheck-discrepancy",
        worst <= 1e-10,
        format!("max discrepancy = {worst:.3e} over {counted} in-band records"),
    )
}

/// The table reproduction reports all rows passing.
fn tables_reproduction() -> CheckOutcome {
    let report = harness::reproduce_tables();
    let failed: Vec<&str> = report
        .tables
        .iter()
        .filter(|t| !t.passed)
        .map(|t| t.name.as_str())
        .collect();
    outcome(
        "tables-reproduction",
        report.all_passed,
        if failed.is_empty() {
            format!("{} tables reproduced", report.tables.len())
        } else {
            format!("failing tables: {}", failed.join(", "))
        },
    )
}

/// One evaluated interval endpoint for the adaptive Simpson recursion.
#[derive(Clone, Copy)]
struct SimpsonNode {
    x: f64,
    fx: f64,
}

/// Adaptive Simpson quadrature with error control by Richardson halving.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(left: SimpsonNode, mid: SimpsonNode, right: SimpsonNode) -> f64 {
        (right.x - left.x) / 6.0 * (left.fx + 4.0 * mid.fx + right.fx)
    }

    fn step(
        f: &dyn Fn(f64) -> f64,
        left: SimpsonNode,
        mid: SimpsonNode,
        right: SimpsonNode,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let lm = node(f, 0.5 * (left.x + mid.x));
        let rm = node(f, 0.5 * (mid.x + right.x));
        let left_half = simpson(left, lm, mid);
        let right_half = simpson(mid, rm, right);
        let delta = left_half + right_half - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left_half + right_half + delta / 15.0
        } else {
            step(f, left, lm, mid, left_half, tol / 2.0, depth - 1)
                + step(f, mid, rm, right, right_half, tol / 2.0, depth - 1)
        }
    }

    fn node(f: &dyn Fn(f64) -> f64, x: f64) -> SimpsonNode {
        SimpsonNode { x, fx: f(x) }
    }

    let left = node(f, a);
    let right = node(f, b);
    let mid = node(f, 0.5 * (a + b));
    let whole = simpson(left, mid, right);
    step(f, left, mid, right, whole, tol, 40)
}
