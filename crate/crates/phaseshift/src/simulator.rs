//! Dense complex-matrix realization of the phase-shift search iteration.
//!
//! The simulator builds explicit N×N unitaries, applies the iteration
//! `U R_s U† R_t U` to the start state `|s⟩` amplitude by amplitude, and
//! reads the failure probability off the target component. It makes no use
//! of the closed forms in [`crate::analytics`]; agreement between the two
//! routes is the crate's keystone check.
//!
//! Matrices and instances are immutable after construction; state operations
//! return new values. Sizes are capped at dense desk scale.

use num_complex::Complex64;

use crate::analytics::{DeviationValue, FailureProb, PhaseAngle};
use crate::error::{Error, Result};

/// Largest qubit count for the Hadamard tensor-power family (dim 4096).
pub const MAX_QUBITS: usize = 12;
/// Largest dimension accepted by the matrix recursion.
pub const MAX_RECURSION_DIM: usize = 256;
/// Deepest supported recursion level.
pub const MAX_RECURSION_DEPTH: usize = 20;

/// States must be unit vectors within this Euclidean-norm tolerance.
const STATE_NORM_TOL: f64 = 1e-10;
/// Freshly constructed unitaries must satisfy max|U†U − I| below this.
const UNITARITY_TOL: f64 = 1e-10;

/// A unit-norm complex state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |index⟩ in the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps raw amplitudes, validating unit norm.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Construction("states need at least one amplitude"));
        }
        let state = Self { amps };
        if (state.norm() - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Construction("state norm is not 1 within 1e-10"));
        }
        Ok(state)
    }

    fn from_amps_unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// A dense N×N matrix that is unitary (validated at public construction).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>, // row-major
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, entries }
    }

    /// Wraps row-major entries, validating shape and unitarity.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Construction("entry count must equal dim * dim"));
        }
        let matrix = Self { dim, entries };
        if matrix.unitarity_defect() > UNITARITY_TOL {
            return Err(Error::Construction("matrix is not unitary within 1e-10"));
        }
        Ok(matrix)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Matrix-vector product. Panics on dimension mismatch.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(self.dim, state.dim(), "matrix/state dimension mismatch");
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim];
        for (row, amp) in amps.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..self.dim {
                acc += self.entries[row * self.dim + col] * state.amps[col];
            }
            *amp = acc;
        }
        StateVector::from_amps_unchecked(amps)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> UnitaryMatrix {
        let mut entries = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for row in 0..self.dim {
            for col in 0..self.dim {
                entries[col * self.dim + row] = self.entries[row * self.dim + col].conj();
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// Matrix product `self · rhs`. Panics on dimension mismatch.
    pub fn multiply(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for row in 0..n {
            for k in 0..n {
                let left = self.entries[row * n + k];
                if left == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..n {
                    entries[row * n + col] += left * rhs.entries[k * n + col];
                }
            }
        }
        Self { dim: n, entries }
    }

    /// max-entry magnitude of U†U − I.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // (U†U)_{ij} = sum_k conj(U_{ki}) U_{kj}
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.entries[k * n + i].conj() * self.entries[k * n + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// max-entry magnitude of the difference from another matrix.
    pub fn max_entry_distance(&self, other: &UnitaryMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Left-multiplies by a selective phase: scales one row by the factor.
    fn scale_row(&mut self, row: usize, factor: Complex64) {
        for col in 0..self.dim {
            self.entries[row * self.dim + col] *= factor;
        }
    }
}

/// A concrete search problem: the query unitary plus source and target
/// basis indices. Its ε is read straight off the matrix element.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchInstance {
    unitary: UnitaryMatrix,
    s_index: usize,
    t_index: usize,
}

impl SearchInstance {
    pub fn new(unitary: UnitaryMatrix, s_index: usize, t_index: usize) -> Result<Self> {
        let dim = unitary.dim();
        if s_index >= dim {
            return Err(Error::IndexOutOfRange {
                index: s_index,
                dim,
            });
        }
        if t_index >= dim {
            return Err(Error::IndexOutOfRange {
                index: t_index,
                dim,
            });
        }
        Ok(Self {
            unitary,
            s_index,
            t_index,
        })
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }

    pub fn source_index(&self) -> usize {
        self.s_index
    }

    pub fn target_index(&self) -> usize {
        self.t_index
    }

    /// ε = 1 − |⟨t|U|s⟩|².
    pub fn failure_probability(&self) -> f64 {
        let overlap = self.unitary.entry(self.t_index, self.s_index).norm_sqr();
        (1.0 - overlap).clamp(0.0, 1.0)
    }
}

/// The n-qubit Hadamard tensor power as a search unitary with source |0⟩.
///
/// Every entry has modulus 1/√N, so the instance realizes the unstructured
/// database regime ε = 1 − 1/N.
pub fn hadamard_instance(n_qubits: usize, t_index: usize) -> Result<SearchInstance> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::SizeCap {
            name: "n_qubits",
            value: n_qubits,
            cap: MAX_QUBITS,
        });
    }
    let dim = 1usize << n_qubits;
    if t_index >= dim {
        return Err(Error::IndexOutOfRange { index: t_index, dim });
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let mut entries = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        for col in 0..dim {
            let sign = if (row & col).count_ones() % 2 == 0 {
                scale
            } else {
                -scale
            };
            entries.push(Complex64::new(sign, 0.0));
        }
    }
    SearchInstance::new(UnitaryMatrix::from_entries(dim, entries)?, 0, t_index)
}

/// A real reflection unitary with |⟨t|U|s⟩|² = 1 − ε exactly, for sweeping
/// arbitrary failure probabilities.
///
/// The reflection I − 2uu†/(u·u) with u = |s⟩ − v maps |s⟩ to
/// v = √(1−ε)|t⟩ + √ε|w⟩, where w is the uniform real unit vector supported
/// off t. Degenerate u (|s⟩ already equals v) yields the identity.
pub fn crafted_instance(
    dim: usize,
    eps: FailureProb,
    s_index: usize,
    t_index: usize,
) -> Result<SearchInstance> {
    if dim < 2 {
        return Err(Error::Construction("crafted instances need dim >= 2"));
    }
    if s_index >= dim {
        return Err(Error::IndexOutOfRange { index: s_index, dim });
    }
    if t_index >= dim {
        return Err(Error::IndexOutOfRange { index: t_index, dim });
    }
    let e = eps.value();
    if s_index == t_index && e != 0.0 {
        return Err(Error::Domain {
            name: "eps",
            value: e,
            rule: "source and target must differ unless eps = 0",
        });
    }

    let w_coeff = e.sqrt() / ((dim - 1) as f64).sqrt();
    let mut target_image = vec![0.0f64; dim];
    for (i, x) in target_image.iter_mut().enumerate() {
        if i != t_index {
            *x = w_coeff;
        }
    }
    target_image[t_index] = (1.0 - e).sqrt();

    // u = |s> - v; the Householder reflection through u's hyperplane maps
    // |s> onto v because both are real unit vectors.
    let mut u = target_image;
    for (i, x) in u.iter_mut().enumerate() {
        *x = if i == s_index { 1.0 - *x } else { -*x };
    }
    let norm_sqr: f64 = u.iter().map(|x| x * x).sum();
    let unitary = if norm_sqr < 1e-28 {
        UnitaryMatrix::identity(dim)
    } else {
        let scale = 2.0 / norm_sqr;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                let mut value = -scale * u[row] * u[col];
                if row == col {
                    value += 1.0;
                }
                entries.push(Complex64::new(value, 0.0));
            }
        }
        UnitaryMatrix::from_entries(dim, entries)?
    };
    SearchInstance::new(unitary, s_index, t_index)
}

/// Multiplies the indexed amplitude by e^{iθ}, leaving all others unchanged.
pub fn selective_phase(
    state: &StateVector,
    index: usize,
    theta: PhaseAngle,
) -> Result<StateVector> {
    if index >= state.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            dim: state.dim(),
        });
    }
    let mut amps = state.amps.clone();
    amps[index] *= Complex64::from_polar(1.0, theta.radians());
    Ok(StateVector::from_amps_unchecked(amps))
}

/// Applies one iteration `U R_s U† R_t U` to the instance's start state |s⟩.
pub fn one_iteration(instance: &SearchInstance, theta: PhaseAngle) -> StateVector {
    let u = instance.unitary();
    let start = StateVector::basis(u.dim(), instance.source_index())
        .expect("instance indices are validated");
    let state = u.apply(&start);
    let state = selective_phase(&state, instance.target_index(), theta)
        .expect("instance indices are validated");
    let state = u.adjoint().apply(&state);
    let state = selective_phase(&state, instance.source_index(), theta)
        .expect("instance indices are validated");
    u.apply(&state)
}

/// The failure probability 1 − |⟨t|state⟩|² of a measurement at the target.
pub fn measured_failure(state: &StateVector, t_index: usize) -> Result<DeviationValue> {
    if t_index >= state.dim() {
        return Err(Error::IndexOutOfRange {
            index: t_index,
            dim: state.dim(),
        });
    }
    Ok(DeviationValue::new(
        1.0 - state.amplitude(t_index).norm_sqr(),
    ))
}

/// Builds U_m by the recursion U_{m+1} = U_m R_s U_m† R_t U_m with U_0 = U.
///
/// Each level costs two dense products plus two diagonal row scalings, so the
/// 3^m-long operator word collapses to O(m·N³) work.
pub fn recursion_unitary(
    instance: &SearchInstance,
    theta: PhaseAngle,
    depth: usize,
) -> Result<UnitaryMatrix> {
    if depth > MAX_RECURSION_DEPTH {
        return Err(Error::SizeCap {
            name: "depth",
            value: depth,
            cap: MAX_RECURSION_DEPTH,
        });
    }
    if instance.dim() > MAX_RECURSION_DIM {
        return Err(Error::SizeCap {
            name: "dim",
            value: instance.dim(),
            cap: MAX_RECURSION_DIM,
        });
    }
    let phase = Complex64::from_polar(1.0, theta.radians());
    let mut current = instance.unitary().clone();
    for _ in 0..depth {
        // R_t U_m, then U_m† (R_t U_m), then R_s (...), then U_m (...)
        let mut inner = current.clone();
        inner.scale_row(instance.target_index(), phase);
        let mut inner = current.adjoint().multiply(&inner);
        inner.scale_row(instance.source_index(), phase);
        current = current.multiply(&inner);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn angle(radians: f64) -> PhaseAngle {
        PhaseAngle::from_radians(radians).unwrap()
    }

    fn prob(value: f64) -> FailureProb {
        FailureProb::new(value).unwrap()
    }

    #[test]
    fn basis_states_and_norms() {
        let state = StateVector::basis(4, 2).unwrap();
        assert_eq!(state.amplitude(2), Complex64::new(1.0, 0.0));
        assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-15);
        assert!(StateVector::basis(4, 4).is_err());
        assert!(StateVector::new(vec![Complex64::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn hadamard_instance_failure_probabilities() {
        let two_qubits = hadamard_instance(2, 3).unwrap();
        assert_abs_diff_eq!(two_qubits.failure_probability(), 0.75, epsilon = 1e-15);
        let one_qubit = hadamard_instance(1, 1).unwrap();
        assert_abs_diff_eq!(one_qubit.failure_probability(), 0.5, epsilon = 1e-15);
        // 1 - 1/8 read from |U[5][0]|^2
        let three_qubits = hadamard_instance(3, 5).unwrap();
        let overlap = three_qubits.unitary().entry(5, 0).norm_sqr();
        assert_abs_diff_eq!(overlap, 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(three_qubits.failure_probability(), 0.875, epsilon = 1e-15);
        assert!(hadamard_instance(13, 0).is_err());
        assert!(hadamard_instance(0, 0).is_err());
        assert!(hadamard_instance(2, 4).is_err());
    }

    #[test]
    fn crafted_instance_hits_requested_eps() {
        for &e in &[0.0, 0.1, 0.5, 0.9, 1.0] {
            let instance = crafted_instance(8, prob(e), 0, 1).unwrap();
            assert_abs_diff_eq!(instance.failure_probability(), e, epsilon = 1e-12);
            assert!(instance.unitary().unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn crafted_instance_edge_cases() {
        // eps = 0 swaps source onto target exactly
        let perfect = crafted_instance(4, prob(0.0), 0, 2).unwrap();
        let image = perfect
            .unitary()
            .apply(&StateVector::basis(4, 0).unwrap());
        assert_abs_diff_eq!(
            (image.amplitude(2) - Complex64::new(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
        // eps = 1 leaves no target overlap
        let hopeless = crafted_instance(8, prob(1.0), 0, 1).unwrap();
        assert_abs_diff_eq!(
            hopeless.unitary().entry(1, 0).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert!(crafted_instance(1, prob(0.5), 0, 0).is_err());
        assert!(crafted_instance(4, prob(0.5), 2, 2).is_err());
        assert!(crafted_instance(4, prob(0.0), 2, 2).is_ok());
    }

    #[test]
    fn selective_phase_behaviour() {
        let state = hadamard_instance(2, 0)
            .unwrap()
            .unitary()
            .apply(&StateVector::basis(4, 0).unwrap());
        // theta = 0 is the identity
        let unchanged = selective_phase(&state, 2, angle(0.0)).unwrap();
        assert_eq!(unchanged.amplitudes(), state.amplitudes());
        // theta = pi negates the indexed amplitude
        let negated = selective_phase(&state, 2, angle(PI)).unwrap();
        assert_abs_diff_eq!(
            (negated.amplitude(2) + state.amplitude(2)).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(negated.norm(), 1.0, epsilon = 1e-12);
        // a basis state picks up a global phase
        let basis = StateVector::basis(4, 1).unwrap();
        let shifted = selective_phase(&basis, 1, angle(PI / 3.0)).unwrap();
        let expected = Complex64::from_polar(1.0, PI / 3.0);
        assert_abs_diff_eq!((shifted.amplitude(1) - expected).norm(), 0.0, epsilon = 1e-15);
        assert!(selective_phase(&basis, 4, angle(0.5)).is_err());
    }

    #[test]
    fn one_iteration_matches_grover_on_four_items() {
        // N = 4 single-shot search: theta = pi sends |0> to the target exactly
        for target in 0..4 {
            let instance = hadamard_instance(2, target).unwrap();
            let final_state = one_iteration(&instance, angle(PI));
            let failure = measured_failure(&final_state, target).unwrap().value();
            assert!(failure < 1e-12, "target {target}: failure {failure}");
        }
    }

    #[test]
    fn one_iteration_at_zero_phase_is_a_plain_query() {
        let instance = crafted_instance(6, prob(0.35), 0, 3).unwrap();
        let plain = instance
            .unitary()
            .apply(&StateVector::basis(6, 0).unwrap());
        let iterated = one_iteration(&instance, angle(0.0));
        let distance: f64 = plain
            .amplitudes()
            .iter()
            .zip(iterated.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(distance < 1e-12);
    }

    #[test]
    fn zero_deviation_phase_reaches_target_exactly() {
        let e = prob(0.5);
        let instance = crafted_instance(8, e, 0, 1).unwrap();
        let star = analytics::zero_deviation_point(e).unwrap();
        assert_abs_diff_eq!(star.radians(), PI / 2.0, epsilon = 1e-15);
        let final_state = one_iteration(&instance, star);
        assert!(measured_failure(&final_state, 1).unwrap().value() < 1e-10);
    }

    #[test]
    fn measured_failure_basics() {
        let basis = StateVector::basis(4, 1).unwrap();
        assert_eq!(measured_failure(&basis, 1).unwrap().value(), 0.0);
        let uniform = hadamard_instance(2, 0)
            .unwrap()
            .unitary()
            .apply(&StateVector::basis(4, 0).unwrap());
        assert_abs_diff_eq!(
            measured_failure(&uniform, 3).unwrap().value(),
            0.75,
            epsilon = 1e-12
        );
        assert!(measured_failure(&basis, 4).is_err());
    }

    #[test]
    fn simulated_failure_tracks_closed_form() {
        for &t in &[0.0, PI / 3.0, 1.1, PI / 2.0, 2.4, PI] {
            for &e in &[0.02, 0.3, 0.5, 0.75, 0.98] {
                let instance = crafted_instance(8, prob(e), 0, 1).unwrap();
                let simulated =
                    measured_failure(&one_iteration(&instance, angle(t)), 1)
                        .unwrap()
                        .value();
                let analytic = analytics::deviation(angle(t), prob(e)).value();
                assert_abs_diff_eq!(simulated, analytic, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn recursion_depth_zero_returns_the_query() {
        let instance = crafted_instance(8, prob(0.4), 0, 1).unwrap();
        let u0 = recursion_unitary(&instance, angle(PI / 3.0), 0).unwrap();
        assert_eq!(instance.unitary().max_entry_distance(&u0), 0.0);
    }

    #[test]
    fn recursion_matches_scalar_trace() {
        let instance = crafted_instance(8, prob(0.9), 0, 1).unwrap();
        let theta = angle(PI / 3.0);
        let trace = analytics::recurrence_trace(theta, prob(0.9), 2).unwrap();
        for (level, expected) in trace.epsilons().iter().enumerate() {
            let u_m = recursion_unitary(&instance, theta, level).unwrap();
            let state = u_m.apply(&StateVector::basis(8, 0).unwrap());
            let failure = measured_failure(&state, 1).unwrap().value();
            assert_abs_diff_eq!(failure, expected.value(), epsilon = 1e-8);
        }
    }

    #[test]
    fn recursion_respects_caps() {
        let instance = crafted_instance(8, prob(0.5), 0, 1).unwrap();
        assert!(recursion_unitary(&instance, angle(1.0), 21).is_err());
        assert!(recursion_unitary(&instance, angle(1.0), 20).is_ok());
    }

    #[test]
    fn recursed_matrices_stay_unitary() {
        let instance = crafted_instance(8, prob(0.75), 0, 1).unwrap();
        let u6 = recursion_unitary(&instance, angle(5.0 * PI / 6.0), 6).unwrap();
        assert!(u6.unitarity_defect() < 1e-8);
        let state = u6.apply(&StateVector::basis(8, 0).unwrap());
        assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn pi_phase_equals_selective_inversion_iteration() {
        let instance = crafted_instance(8, prob(0.6), 0, 1).unwrap();
        let u = instance.unitary();
        let phase_iteration = recursion_unitary(&instance, angle(PI), 1).unwrap();

        let mut invert_t = UnitaryMatrix::identity(8);
        invert_t.scale_row(1, Complex64::new(-1.0, 0.0));
        let mut invert_s = UnitaryMatrix::identity(8);
        invert_s.scale_row(0, Complex64::new(-1.0, 0.0));
        let classical = u
            .multiply(&invert_s)
            .multiply(&u.adjoint())
            .multiply(&invert_t)
            .multiply(u);

        assert!(phase_iteration.max_entry_distance(&classical) < 1e-12);
    }
}
