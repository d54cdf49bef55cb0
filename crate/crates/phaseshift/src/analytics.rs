//! Closed-form quantities for one equal phase-shift search iteration.
//!
//! Everything in this module is a pure function of its arguments. The central
//! object is the deviation `D(θ) = ε d²` with amplitude factor
//! `d = 1 + 2(cos θ − 1)(1 − ε)`: the probability that one iteration of
//! `U R_s U† R_t U` fails to land on the target state when a single query
//! succeeds with probability `1 − ε`. All other operations (thresholds,
//! classifications, zero-deviation points, success ratios, recursion traces)
//! are algebraic consequences of that expression.
//!
//! Angles are radians throughout; degree conversion belongs to callers.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arguments to `acos` may fall outside [-1, 1] by at most this much before
/// the call is rejected instead of clamped.
const ACOS_CLAMP: f64 = 1e-12;

/// Gap magnitudes at or below this classify as [`Classification::EqualCube`].
const EQUAL_CUBE_TOL: f64 = 1e-12;

/// Recursion values below this are flushed to exact zero and flagged;
/// `ε^(3^m)` underflows f64 around m = 7 for moderate ε.
const UNDERFLOW_FLUSH: f64 = 1e-300;

/// Angles this close to a canonical multiple of π take its exact cosine.
const CANONICAL_SNAP: f64 = 1e-12;

/// fl(√3/2), the cosine of π/6.
const SQRT3_OVER_2: f64 = 0.8660254037844386;

/// Canonical angles paired with their exact cosines. The special-angle
/// identities (the π/3 cube law, the tabulated closed forms, the threshold
/// values) hold bit-exactly only if these cosines are hit exactly, which
/// `cos` cannot deliver at the nearest-double angles: the representable
/// "π/3" truly has cosine 0.5 + 1e−16.
const CANONICAL_COSINES: [(f64, f64); 9] = [
    (0.0, 1.0),
    (std::f64::consts::FRAC_PI_6, SQRT3_OVER_2),
    (std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_1_SQRT_2),
    (std::f64::consts::FRAC_PI_3, 0.5),
    (std::f64::consts::FRAC_PI_2, 0.0),
    (2.0 * std::f64::consts::FRAC_PI_3, -0.5),
    (3.0 * std::f64::consts::FRAC_PI_4, -std::f64::consts::FRAC_1_SQRT_2),
    (5.0 * std::f64::consts::FRAC_PI_6, -SQRT3_OVER_2),
    (PI, -1.0),
];

fn snapped_cos(radians: f64) -> f64 {
    for (canonical, cosine) in CANONICAL_COSINES {
        if (radians - canonical).abs() <= CANONICAL_SNAP {
            return cosine;
        }
    }
    radians.cos()
}

/// A phase shift θ in radians, restricted to [0, π].
///
/// The iteration is 2π-periodic and symmetric under θ ↦ −θ, so this interval
/// covers every distinct behaviour. The cosine is cached at construction and
/// snapped to its exact value within 1e−12 of the canonical angles
/// {0, π/6, π/4, π/3, π/2, 2π/3, 3π/4, 5π/6, π}, so identities stated at
/// those angles hold to the last bit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PhaseAngle {
    radians: f64,
    cosine: f64,
}

impl PhaseAngle {
    /// Validates 0 ≤ radians ≤ π.
    pub fn from_radians(radians: f64) -> Result<Self> {
        if !radians.is_finite() || !(0.0..=PI).contains(&radians) {
            return Err(Error::Domain {
                name: "theta",
                value: radians,
                rule: "phase shifts must lie in [0, pi] radians",
            });
        }
        Ok(Self::trusted(radians))
    }

    /// For values already known to lie in [0, π] (arccos output).
    fn trusted(radians: f64) -> Self {
        Self {
            radians,
            cosine: snapped_cos(radians),
        }
    }

    /// Converts from degrees, absorbing the rounding slack of the conversion
    /// at both interval ends.
    pub fn from_degrees(degrees: f64) -> Result<Self> {
        let mut radians = degrees * (PI / 180.0);
        if radians < 0.0 && radians > -1e-12 {
            radians = 0.0;
        }
        if radians > PI && radians < PI + 1e-12 {
            radians = PI;
        }
        Self::from_radians(radians)
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    pub fn degrees(self) -> f64 {
        self.radians.to_degrees()
    }

    /// The cached (canonically snapped) cosine.
    pub fn cos(self) -> f64 {
        self.cosine
    }
}

impl fmt::Display for PhaseAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.radians)
    }
}

/// The per-query failure probability ε = 1 − |U_ts|², in [0, 1].
///
/// Operations whose statements need an open interval (for example
/// classification, which is stated for 0 < ε < 1) reject the endpoints
/// themselves with a domain error.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FailureProb {
    value: f64,
}

impl FailureProb {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(Error::Domain {
                name: "eps",
                value,
                rule: "failure probabilities must lie in [0, 1]",
            });
        }
        Ok(Self { value })
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

impl fmt::Display for FailureProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A range (β, α) of failure probabilities with 0 ≤ β < α ≤ 3/4.
///
/// Zero-deviation points exist exactly for ε ≤ 3/4, so averaging them only
/// makes sense over ranges inside (0, 3/4]. α ≤ 3/4 < 1 keeps ln(1 − α)
/// finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonRange {
    beta: FailureProb,
    alpha: FailureProb,
}

impl EpsilonRange {
    pub fn new(beta: FailureProb, alpha: FailureProb) -> Result<Self> {
        if beta.value() >= alpha.value() {
            return Err(Error::Domain {
                name: "beta",
                value: beta.value(),
                rule: "epsilon ranges need beta < alpha",
            });
        }
        if alpha.value() > 0.75 {
            return Err(Error::Domain {
                name: "alpha",
                value: alpha.value(),
                rule: "epsilon ranges are confined to (0, 3/4]",
            });
        }
        Ok(Self { beta, alpha })
    }

    /// Convenience constructor from raw probabilities.
    pub fn from_values(beta: f64, alpha: f64) -> Result<Self> {
        Self::new(FailureProb::new(beta)?, FailureProb::new(alpha)?)
    }

    pub fn beta(self) -> FailureProb {
        self.beta
    }

    pub fn alpha(self) -> FailureProb {
        self.alpha
    }

    /// ln((1−α)/(1−β)) / (α−β), the slope term shared by the averaged
    /// zero-point, its deviation, and κ. Always in [−4, −1) on valid ranges.
    fn log_slope(self) -> f64 {
        let (b, a) = (self.beta.value(), self.alpha.value());
        ((1.0 - a) / (1.0 - b)).ln() / (a - b)
    }
}

impl fmt::Display for EpsilonRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.beta, self.alpha)
    }
}

/// A deviation (failure probability of one iteration), clamped into [0, 1]
/// against sub-ulp rounding overshoot.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeviationValue {
    value: f64,
}

impl DeviationValue {
    pub(crate) fn new(value: f64) -> Self {
        debug_assert!(
            value > -1e-9 && value < 1.0 + 1e-9,
            "deviation {value} far outside [0, 1]"
        );
        Self {
            value: value.clamp(0.0, 1.0),
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

impl fmt::Display for DeviationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Sign of D(θ) − ε³ relative to the phase-π/3 baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// D(θ) < ε³: the phase shift beats the π/3 iteration at this ε.
    BelowCube,
    /// |D(θ) − ε³| within tolerance of zero.
    EqualCube,
    /// D(θ) > ε³.
    AboveCube,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Classification::BelowCube => "below-cube",
            Classification::EqualCube => "equal-cube",
            Classification::AboveCube => "above-cube",
        };
        f.write_str(tag)
    }
}

/// Failure probabilities along the recursion U_{m+1} = U_m R_s U_m† R_t U_m.
///
/// `epsilons[0]` is the initial ε and `epsilons[m+1] = deviation(θ, epsilons[m])`
/// by construction. Values that underflow below 1e−300 are flushed to exact
/// zero; `first_underflow` records where that first happened.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTrace {
    theta: PhaseAngle,
    epsilons: Vec<FailureProb>,
    first_underflow: Option<usize>,
}

impl RecurrenceTrace {
    pub fn theta(&self) -> PhaseAngle {
        self.theta
    }

    pub fn epsilons(&self) -> &[FailureProb] {
        &self.epsilons
    }

    /// Recursion depth m (one less than the number of stored values).
    pub fn depth(&self) -> usize {
        self.epsilons.len() - 1
    }

    /// Index of the first value flushed to zero by underflow, if any.
    pub fn first_underflow(&self) -> Option<usize> {
        self.first_underflow
    }
}

/// The amplitude factor d = 1 + 2(cos θ − 1)(1 − ε).
///
/// One iteration scales every non-target amplitude of `U|s⟩` by `e^{iθ} d`,
/// so the deviation is ε d². Evaluated in the expanded form
/// (2c − 1) + 2(1 − c)ε, whose coefficients are exact at the canonical
/// angles: at π/3 this gives d = ε with no rounding at all, which the deep
/// recursion trace relies on.
pub fn amplitude_factor(theta: PhaseAngle, eps: FailureProb) -> f64 {
    let c = theta.cos();
    (2.0 * c - 1.0) + 2.0 * (1.0 - c) * eps.value()
}

/// The deviation D(θ) = ε [1 + 2(cos θ − 1)(1 − ε)]².
///
/// At θ = π/3 this reduces to ε³; at θ = π it is the amplitude-amplification
/// value ε(4ε − 3)².
pub fn deviation(theta: PhaseAngle, eps: FailureProb) -> DeviationValue {
    let d = amplitude_factor(theta, eps);
    DeviationValue::new(eps.value() * d * d)
}

/// The un-reduced deviation (1 − |U_ts|²) |e^{iθ} + |U_ts|² (e^{iθ} − 1)²|²,
/// evaluated directly in complex arithmetic from the transition amplitude.
///
/// Agrees with [`deviation`] at ε = 1 − |U_ts|² and depends on `uts` only
/// through its modulus.
pub fn deviation_raw(theta: PhaseAngle, uts: Complex64) -> Result<DeviationValue> {
    let mag2 = uts.norm_sqr();
    if mag2 > 1.0 + ACOS_CLAMP {
        return Err(Error::Domain {
            name: "|uts|^2",
            value: mag2,
            rule: "transition amplitudes have modulus at most 1",
        });
    }
    let mag2 = mag2.min(1.0);
    let z = Complex64::from_polar(1.0, theta.radians());
    let inner = z + (z - 1.0) * (z - 1.0) * mag2;
    Ok(DeviationValue::new((1.0 - mag2) * inner.norm_sqr()))
}

/// D(θ) − ε³ in the factored form ε(1−ε)(2cos θ − 1)[2 + (2cos θ − 3)(1−ε)].
///
/// The factoring makes the sign analysis exact: the first three factors are
/// positive for θ < π/3 and interior ε, and the bracket changes sign at the
/// threshold of [`epsilon_threshold`].
pub fn deviation_gap(theta: PhaseAngle, eps: FailureProb) -> f64 {
    let two_cos = 2.0 * theta.cos();
    let e = eps.value();
    e * (1.0 - e) * (two_cos - 1.0) * (2.0 + (two_cos - 3.0) * (1.0 - e))
}

/// The threshold τ(θ) = 1 − 2/(3 − 2cos θ) above which D(θ) < ε³ for
/// θ > π/3.
///
/// Increases from −1 at θ = 0 to 3/5 at θ = π and crosses zero at θ = π/3.
pub fn epsilon_threshold(theta: PhaseAngle) -> f64 {
    1.0 - 2.0 / (3.0 - 2.0 * theta.cos())
}

/// Classifies D(θ) against ε³ by the sign of [`deviation_gap`].
///
/// Rejects ε ∈ {0, 1}, where the gap vanishes identically. Gap magnitudes
/// within 1e−12 of zero classify as [`Classification::EqualCube`].
pub fn classify(theta: PhaseAngle, eps: FailureProb) -> Result<Classification> {
    let e = eps.value();
    if e == 0.0 || e == 1.0 {
        return Err(Error::Domain {
            name: "eps",
            value: e,
            rule: "classification is stated for 0 < eps < 1",
        });
    }
    let gap = deviation_gap(theta, eps);
    let tol = EQUAL_CUBE_TOL * 1.0f64.max(e * e * e);
    Ok(if gap.abs() <= tol {
        Classification::EqualCube
    } else if gap < 0.0 {
        Classification::BelowCube
    } else {
        Classification::AboveCube
    })
}

/// The largest phase shift arccos[(1 − 3δ)/(2(1 − δ))] such that every
/// θ in (π/3, bound] has D(θ) < ε³ whenever ε > δ.
///
/// The arccos argument leaves [−1, 1] for δ > 3/5, where the bound is π for
/// every admissible δ anyway; such inputs are rejected.
pub fn phase_bound_for_delta(delta: FailureProb) -> Result<PhaseAngle> {
    let d = delta.value();
    let arg = (1.0 - 3.0 * d) / (2.0 * (1.0 - d));
    let radians = checked_acos(arg, "delta", d, "the arccos argument (1-3*delta)/(2(1-delta)) must lie in [-1, 1]; delta <= 3/5 is required")?;
    Ok(PhaseAngle::trusted(radians))
}

/// The zero-deviation point θ* = arccos[1 − 1/(2(1 − ε))], defined for
/// 0 < ε ≤ 3/4 and lying in (π/3, π].
///
/// Choosing θ* as the phase shift makes the amplitude factor vanish, so one
/// iteration reaches the target with certainty.
pub fn zero_deviation_point(eps: FailureProb) -> Result<PhaseAngle> {
    let e = eps.value();
    if e <= 0.0 || e > 0.75 {
        return Err(Error::Domain {
            name: "eps",
            value: e,
            rule: "zero-deviation points exist for 0 < eps <= 3/4",
        });
    }
    let arg = 1.0 - 1.0 / (2.0 * (1.0 - e));
    let radians = checked_acos(arg, "eps", e, "cos(theta*) left [-1, 1]")?;
    Ok(PhaseAngle::trusted(radians))
}

/// The average zero-deviation point θ̄ for ε uniform on (β, α]:
/// arccos of the mean of 1 − 1/(2(1 − ε)) over the range, which integrates
/// to 1 + ln((1−α)/(1−β)) / (2(α−β)). Lies in (π/3, π].
pub fn average_zero_point(range: EpsilonRange) -> PhaseAngle {
    let arg = 1.0 + 0.5 * range.log_slope();
    PhaseAngle::trusted(arg.clamp(-1.0, 1.0).acos())
}

/// The deviation ε[1 + (1−ε) ln((1−α)/(1−β)) / (α−β)]² incurred at the
/// average zero-deviation point, in closed form.
///
/// Equals `deviation(average_zero_point(range), eps)` up to rounding.
pub fn average_zero_point_deviation(
    eps: FailureProb,
    range: EpsilonRange,
) -> Result<DeviationValue> {
    let e = eps.value();
    if e == 0.0 || e == 1.0 {
        return Err(Error::Domain {
            name: "eps",
            value: e,
            rule: "the averaged deviation is stated for 0 < eps < 1",
        });
    }
    let d = 1.0 + (1.0 - e) * range.log_slope();
    Ok(DeviationValue::new(e * d * d))
}

/// κ = 1 − 2/(1 − ln((1−α)/(1−β))/(α−β)), strictly inside (0, 1): for every
/// ε > κ the averaged phase choice beats the π/3 baseline,
/// D(θ̄) < ε³.
pub fn kappa(range: EpsilonRange) -> f64 {
    1.0 - 2.0 / (1.0 - range.log_slope())
}

/// The minimum ε(4ε − 3)² that the deviation attains (at θ = π) once
/// ε ≥ 3/4, where no phase shift can cancel it entirely.
pub fn min_deviation_large_eps(eps: FailureProb) -> Result<DeviationValue> {
    let e = eps.value();
    if e < 0.75 {
        return Err(Error::Domain {
            name: "eps",
            value: e,
            rule: "the lower bound eps(4eps-3)^2 is stated for eps >= 3/4",
        });
    }
    let d = 4.0 * e - 3.0;
    Ok(DeviationValue::new(e * d * d))
}

/// Tabulated closed forms of the deviation at θ = π/2, 2π/3, 3π/4, 5π/6.
///
/// The identities hold for every ε, not just the large-ε regime they were
/// tabulated for. Angles are matched within 1e−12 radians.
pub fn table3_deviation(theta: PhaseAngle, eps: FailureProb) -> Result<DeviationValue> {
    const ANGLE_MATCH: f64 = 1e-12;
    let t = theta.radians();
    let e = eps.value();
    let sqrt2 = std::f64::consts::SQRT_2;
    let sqrt3 = 3.0f64.sqrt();
    let value = if (t - PI / 2.0).abs() <= ANGLE_MATCH {
        e * (2.0 * e - 1.0).powi(2)
    } else if (t - 2.0 * PI / 3.0).abs() <= ANGLE_MATCH {
        e * (3.0 * e - 2.0).powi(2)
    } else if (t - 3.0 * PI / 4.0).abs() <= ANGLE_MATCH {
        e * ((sqrt2 + 2.0) * e - (sqrt2 + 1.0)).powi(2)
    } else if (t - 5.0 * PI / 6.0).abs() <= ANGLE_MATCH {
        e * ((sqrt3 + 2.0) * e - (sqrt3 + 1.0)).powi(2)
    } else {
        return Err(Error::NotTabulated(t));
    };
    Ok(DeviationValue::new(value))
}

/// The success probability Δ(θ) = 1 − D(θ) of a single iteration.
pub fn success_probability(theta: PhaseAngle, eps: FailureProb) -> f64 {
    1.0 - deviation(theta, eps).value()
}

/// The ratio Δ(θ)/Δ(π/3) in its rational form
/// (4cos²θ ε² − 8cos θ ε² + 4ε² + 4cos θ ε − 4cos²θ ε + 1)/(ε² + ε + 1).
///
/// The rational form stays finite at ε = 1, where the probability quotient
/// degenerates to 0/0 and the ratio tends to [`rho`].
pub fn success_ratio(theta: PhaseAngle, eps: FailureProb) -> f64 {
    let c = theta.cos();
    let e = eps.value();
    let numerator = 4.0 * c * c * e * e - 8.0 * c * e * e + 4.0 * e * e + 4.0 * c * e
        - 4.0 * c * c * e
        + 1.0;
    numerator / (e * e + e + 1.0)
}

/// ρ(θ) = (5 − 4cos θ)/3, the ε → 1 limit of [`success_ratio`].
///
/// Increases from 1/3 at θ = 0 to 3 at θ = π; an ε-free figure of merit for
/// large databases.
pub fn rho(theta: PhaseAngle) -> f64 {
    (5.0 - 4.0 * theta.cos()) / 3.0
}

/// Iterates ε ↦ D(θ, ε) for `depth` steps from `eps0`, the failure
/// probabilities of the recursion U_{m+1} = U_m R_s U_m† R_t U_m read from
/// the start state.
///
/// At θ = π/3 the trace follows ε^(3^m) exactly.
pub fn recurrence_trace(
    theta: PhaseAngle,
    eps0: FailureProb,
    depth: usize,
) -> Result<RecurrenceTrace> {
    let e0 = eps0.value();
    if e0 == 0.0 || e0 == 1.0 {
        return Err(Error::Domain {
            name: "eps",
            value: e0,
            rule: "the recursion is stated for 0 < eps < 1",
        });
    }
    let mut epsilons = Vec::with_capacity(depth + 1);
    let mut first_underflow = None;
    let mut current = eps0;
    epsilons.push(current);
    for step in 0..depth {
        let factor = amplitude_factor(theta, current);
        let mut next = deviation(theta, current).value();
        // A vanishing value is an underflow only if neither factor of eps d^2
        // is itself exactly zero; a zero-deviation phase is a genuine zero.
        if next < UNDERFLOW_FLUSH && current.value() > 0.0 && factor != 0.0 {
            next = 0.0;
            first_underflow.get_or_insert(step + 1);
        }
        current = FailureProb::new(next).expect("deviation is a probability");
        epsilons.push(current);
    }
    Ok(RecurrenceTrace {
        theta,
        epsilons,
        first_underflow,
    })
}

/// acos with a 1e−12 clamp band; arguments further outside [−1, 1] are a
/// domain error rather than NaN.
fn checked_acos(arg: f64, name: &'static str, value: f64, rule: &'static str) -> Result<f64> {
    if !arg.is_finite() || arg.abs() > 1.0 + ACOS_CLAMP {
        return Err(Error::Domain { name, value, rule });
    }
    Ok(arg.clamp(-1.0, 1.0).acos())
}
