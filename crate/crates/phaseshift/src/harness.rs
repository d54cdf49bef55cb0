//! Parameter sweeps, table reproduction, and figure-data generation.
//!
//! Sweeps walk a (θ, ε) grid in row-major order (θ outer) and evaluate the
//! requested closed-form quantities per point; cross-checked sweeps also run
//! the dense simulator on a crafted instance at each point and record the
//! absolute discrepancy. Records may be computed in parallel, but output
//! ordering and content are deterministic: identical specs produce
//! byte-identical CSV/JSON regardless of thread count.
//!
//! Numbers are emitted in shortest round-trip form, so golden files are
//! stable and lossless.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{self, FailureProb, PhaseAngle};
use crate::error::{Error, Result};
use crate::simulator::{self, MAX_RECURSION_DIM};

/// A closed-form quantity a sweep can emit per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Deviation,
    Gap,
    Threshold,
    Success,
    Ratio,
    Rho,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Deviation,
        Quantity::Gap,
        Quantity::Threshold,
        Quantity::Success,
        Quantity::Ratio,
        Quantity::Rho,
    ];

    /// Column name used in CSV headers and JSON keys.
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Deviation => "deviation",
            Quantity::Gap => "gap",
            Quantity::Threshold => "threshold",
            Quantity::Success => "success",
            Quantity::Ratio => "ratio",
            Quantity::Rho => "rho",
        }
    }

    fn evaluate(self, theta: PhaseAngle, eps: FailureProb) -> f64 {
        match self {
            Quantity::Deviation => analytics::deviation(theta, eps).value(),
            Quantity::Gap => analytics::deviation_gap(theta, eps),
            Quantity::Threshold => analytics::epsilon_threshold(theta),
            Quantity::Success => analytics::success_probability(theta, eps),
            Quantity::Ratio => analytics::success_ratio(theta, eps),
            Quantity::Rho => analytics::rho(theta),
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or(Error::Construction(
                "unknown quantity: expected one of deviation, gap, threshold, success, ratio, rho",
            ))
    }
}

/// Whether a sweep is closed-form only or cross-checked against the
/// simulator on crafted instances of the given dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    AnalyticOnly,
    CrossChecked { dim: usize },
}

/// A validated sweep request: strictly increasing nonempty grids, a mode,
/// and a deduplicated quantity list in canonical column order.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    theta_grid: Vec<PhaseAngle>,
    eps_grid: Vec<FailureProb>,
    mode: SweepMode,
    quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn new(
        theta_grid: Vec<PhaseAngle>,
        eps_grid: Vec<FailureProb>,
        mode: SweepMode,
        quantities: &[Quantity],
    ) -> Result<Self> {
        if theta_grid.is_empty() || eps_grid.is_empty() {
            return Err(Error::Construction("sweep grids must be nonempty"));
        }
        if !theta_grid.windows(2).all(|w| w[0].radians() < w[1].radians()) {
            return Err(Error::Construction(
                "theta grid must be strictly increasing",
            ));
        }
        if !eps_grid.windows(2).all(|w| w[0].value() < w[1].value()) {
            return Err(Error::Construction("eps grid must be strictly increasing"));
        }
        if let SweepMode::CrossChecked { dim } = mode {
            if dim < 2 {
                return Err(Error::Construction("cross-check dimension must be >= 2"));
            }
            if dim > MAX_RECURSION_DIM {
                return Err(Error::SizeCap {
                    name: "dim",
                    value: dim,
                    cap: MAX_RECURSION_DIM,
                });
            }
        }
        let mut quantities = quantities.to_vec();
        quantities.sort();
        quantities.dedup();
        Ok(Self {
            theta_grid,
            eps_grid,
            mode,
            quantities,
        })
    }

    /// 181 evenly spaced angles over [0, π] (degree resolution).
    pub fn default_theta_grid() -> Vec<PhaseAngle> {
        theta_grid(181)
    }

    /// 99 failure probabilities 0.01, 0.02, …, 0.99.
    pub fn default_eps_grid() -> Vec<FailureProb> {
        (1..=99)
            .map(|i| FailureProb::new(i as f64 / 100.0).expect("grid values are probabilities"))
            .collect()
    }

    pub fn theta_grid(&self) -> &[PhaseAngle] {
        &self.theta_grid
    }

    pub fn eps_grid(&self) -> &[FailureProb] {
        &self.eps_grid
    }

    pub fn mode(&self) -> SweepMode {
        self.mode
    }

    pub fn quantities(&self) -> &[Quantity] {
        &self.quantities
    }
}

/// Shortest round-trip rendering of a double, identical to the JSON
/// serialization (so CSV and JSON mirror each other digit for digit).
pub fn format_f64(value: f64) -> String {
    ryu::Buffer::new().format(value).to_string()
}

/// `points` evenly spaced angles over [0, π] with exact endpoints.
pub fn theta_grid(points: usize) -> Vec<PhaseAngle> {
    assert!(points >= 2, "theta grids need at least two points");
    let last = points - 1;
    (0..=last)
        .map(|i| {
            let radians = if i == last {
                PI
            } else {
                PI * i as f64 / last as f64
            };
            PhaseAngle::from_radians(radians).expect("grid angles stay in [0, pi]")
        })
        .collect()
}

/// `points` evenly spaced failure probabilities over [lo, hi].
pub fn eps_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<FailureProb>> {
    if points < 2 || lo >= hi {
        return Err(Error::Construction(
            "eps grids need at least two points and lo < hi",
        ));
    }
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| FailureProb::new(lo + (hi - lo) * i as f64 / last))
        .collect()
}

/// One evaluated grid point. `values` parallels the spec's quantity list;
/// the simulator fields are present exactly in cross-checked mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub theta_rad: f64,
    pub eps: f64,
    pub values: Vec<f64>,
    pub sim_deviation: Option<f64>,
    pub abs_discrepancy: Option<f64>,
}

/// A sweep's records bundled with the column layout they were computed
/// under, ready for CSV/JSON emission.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    quantities: Vec<Quantity>,
    cross_checked: bool,
    records: Vec<SweepRecord>,
}

impl SweepResult {
    pub fn quantities(&self) -> &[Quantity] {
        &self.quantities
    }

    pub fn cross_checked(&self) -> bool {
        self.cross_checked
    }

    pub fn records(&self) -> &[SweepRecord] {
        &self.records
    }

    /// CSV with header `theta_rad,eps,<quantity...>[,sim_deviation,abs_discrepancy]`,
    /// LF line endings, shortest round-trip numbers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta_rad,eps");
        for q in &self.quantities {
            out.push(',');
            out.push_str(q.name());
        }
        if self.cross_checked {
            out.push_str(",sim_deviation,abs_discrepancy");
        }
        out.push('\n');
        let mut buffer = ryu::Buffer::new();
        for record in &self.records {
            out.push_str(buffer.format(record.theta_rad));
            out.push(',');
            out.push_str(buffer.format(record.eps));
            for &v in &record.values {
                out.push(',');
                out.push_str(buffer.format(v));
            }
            if self.cross_checked {
                out.push(',');
                out.push_str(buffer.format(record.sim_deviation.expect("cross-checked record")));
                out.push(',');
                out.push_str(
                    buffer.format(record.abs_discrepancy.expect("cross-checked record")),
                );
            }
            out.push('\n');
        }
        out
    }

    /// JSON array of objects mirroring the CSV columns.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .records
            .iter()
            .map(|record| {
                let mut row = serde_json::Map::new();
                row.insert("theta_rad".into(), record.theta_rad.into());
                row.insert("eps".into(), record.eps.into());
                for (q, v) in self.quantities.iter().zip(&record.values) {
                    row.insert(q.name().into(), (*v).into());
                }
                if self.cross_checked {
                    row.insert(
                        "sim_deviation".into(),
                        record.sim_deviation.expect("cross-checked record").into(),
                    );
                    row.insert(
                        "abs_discrepancy".into(),
                        record.abs_discrepancy.expect("cross-checked record").into(),
                    );
                }
                serde_json::Value::Object(row)
            })
            .collect();
        serde_json::to_string(&rows).expect("plain numeric rows serialize")
    }
}

/// Runs the sweep: one record per (θ, ε) pair in row-major order (θ outer).
///
/// Records are computed in parallel; order and content do not depend on the
/// thread count because every record is a pure function of its grid point.
pub fn run_sweep(spec: &SweepSpec) -> SweepResult {
    let pairs: Vec<(PhaseAngle, FailureProb)> = spec
        .theta_grid
        .iter()
        .flat_map(|t| spec.eps_grid.iter().map(move |e| (*t, *e)))
        .collect();
    let records: Vec<SweepRecord> = pairs
        .par_iter()
        .map(|&(theta, eps)| evaluate_point(spec, theta, eps))
        .collect();
    SweepResult {
        quantities: spec.quantities.clone(),
        cross_checked: matches!(spec.mode, SweepMode::CrossChecked { .. }),
        records,
    }
}

fn evaluate_point(spec: &SweepSpec, theta: PhaseAngle, eps: FailureProb) -> SweepRecord {
    let values = spec
        .quantities
        .iter()
        .map(|q| q.evaluate(theta, eps))
        .collect();
    let (sim_deviation, abs_discrepancy) = match spec.mode {
        SweepMode::AnalyticOnly => (None, None),
        SweepMode::CrossChecked { dim } => {
            let instance = simulator::crafted_instance(dim, eps, 0, 1)
                .expect("cross-check instances are valid for any eps");
            let simulated = simulator::measured_failure(
                &simulator::one_iteration(&instance, theta),
                instance.target_index(),
            )
            .expect("target index is valid")
            .value();
            let analytic = analytics::deviation(theta, eps).value();
            (Some(simulated), Some((analytic - simulated).abs()))
        }
    };
    SweepRecord {
        theta_rad: theta.radians(),
        eps: eps.value(),
        values,
        sim_deviation,
        abs_discrepancy,
    }
}

/// One verified row of a reproduced table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl TableRow {
    fn checked(label: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        Self {
            label: label.into(),
            expected: format_f64(expected),
            computed: format_f64(computed),
            passed: (expected - computed).abs() <= tol,
        }
    }
}

/// A reproduced table with its per-row checks.
#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub name: String,
    pub rows: Vec<TableRow>,
    pub passed: bool,
}

impl TableCheck {
    fn new(name: impl Into<String>, rows: Vec<TableRow>) -> Self {
        let passed = rows.iter().all(|r| r.passed);
        Self {
            name: name.into(),
            rows,
            passed,
        }
    }
}

/// All four reproduced tables plus an overall flag.
#[derive(Debug, Clone, Serialize)]
pub struct TablesReport {
    pub tables: Vec<TableCheck>,
    pub all_passed: bool,
}

impl fmt::Display for TablesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for table in &self.tables {
            writeln!(
                f,
                "{} [{}]",
                table.name,
                if table.passed { "pass" } else { "FAIL" }
            )?;
            for row in &table.rows {
                writeln!(
                    f,
                    "  {:<44} expected {:<22} computed {:<22} {}",
                    row.label,
                    row.expected,
                    row.computed,
                    if row.passed { "ok" } else { "MISMATCH" }
                )?;
            }
        }
        writeln!(
            f,
            "overall: {}",
            if self.all_passed {
                "all tables reproduced"
            } else {
                "MISMATCHES FOUND"
            }
        )
    }
}

fn angle(radians: f64) -> PhaseAngle {
    PhaseAngle::from_radians(radians).expect("tabulated angles are in [0, pi]")
}

fn prob(value: f64) -> FailureProb {
    FailureProb::new(value).expect("tabulated probabilities are in [0, 1]")
}

/// Recomputes the four summary tables (deviation regimes, thresholds,
/// large-ε closed forms, ρ values) and flags each row against the expected
/// constants.
pub fn reproduce_tables() -> TablesReport {
    let mut tables = Vec::new();

    // Regime classification by sign of D(theta) - eps^3.
    let mut regime_rows = Vec::new();
    {
        use analytics::Classification;
        let eps_samples: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();

        let small_angles = [0.0, 0.5, 0.9, 1.0];
        let all_above = small_angles.iter().all(|&t| {
            eps_samples.iter().all(|&e| {
                analytics::classify(angle(t), prob(e)).unwrap() == Classification::AboveCube
            })
        });
        regime_rows.push(TableRow {
            label: "theta < pi/3: D > eps^3 for every eps".into(),
            expected: "above-cube".into(),
            computed: if all_above { "above-cube" } else { "violated" }.into(),
            passed: all_above,
        });

        let large_angles = [1.2, PI / 2.0, 2.0, 2.5, PI];
        let below_when_past_threshold = large_angles.iter().all(|&t| {
            let tau = analytics::epsilon_threshold(angle(t));
            eps_samples
                .iter()
                .filter(|&&e| e > tau + 1e-6)
                .all(|&e| {
                    analytics::classify(angle(t), prob(e)).unwrap()
                        == Classification::BelowCube
                })
        });
        regime_rows.push(TableRow {
            label: "theta > pi/3, eps > 1-2/(3-2cos theta): D < eps^3".into(),
            expected: "below-cube".into(),
            computed: if below_when_past_threshold {
                "below-cube"
            } else {
                "violated"
            }
            .into(),
            passed: below_when_past_threshold,
        });

        let above_when_under_threshold = large_angles.iter().all(|&t| {
            let tau = analytics::epsilon_threshold(angle(t));
            eps_samples
                .iter()
                .filter(|&&e| e < tau - 1e-6)
                .all(|&e| {
                    analytics::classify(angle(t), prob(e)).unwrap()
                        == Classification::AboveCube
                })
        });
        regime_rows.push(TableRow {
            label: "theta > pi/3, eps < 1-2/(3-2cos theta): D > eps^3".into(),
            expected: "above-cube".into(),
            computed: if above_when_under_threshold {
                "above-cube"
            } else {
                "violated"
            }
            .into(),
            passed: above_when_under_threshold,
        });
    }
    tables.push(TableCheck::new("deviation regimes", regime_rows));

    // Threshold values at the tabulated angle ranges.
    let threshold_rows = vec![
        TableRow::checked(
            "theta > pi/3 (up to pi): eps > 3/5",
            0.6,
            analytics::epsilon_threshold(angle(PI)),
            1e-15,
        ),
        TableRow::checked(
            "pi/3 < theta <= 2pi/3: eps > 1/2",
            0.5,
            analytics::epsilon_threshold(angle(2.0 * PI / 3.0)),
            1e-15,
        ),
        TableRow::checked(
            "pi/3 < theta <= pi/2: eps > 1/3",
            1.0 / 3.0,
            analytics::epsilon_threshold(angle(PI / 2.0)),
            1e-15,
        ),
    ];
    tables.push(TableCheck::new("improvement thresholds", threshold_rows));

    // Large-eps closed forms, checked as identities over 20 eps samples.
    let closed_form_rows = [
        (PI / 2.0, "theta = pi/2: eps(2eps-1)^2"),
        (2.0 * PI / 3.0, "theta = 2pi/3: eps(3eps-2)^2"),
        (3.0 * PI / 4.0, "theta = 3pi/4: eps((sqrt2+2)eps-(sqrt2+1))^2"),
        (5.0 * PI / 6.0, "theta = 5pi/6: eps((sqrt3+2)eps-(sqrt3+1))^2"),
    ]
    .into_iter()
    .map(|(t, label)| {
        let theta = angle(t);
        let max_diff = (0..20)
            .map(|i| {
                let e = prob(i as f64 / 19.0);
                (analytics::table3_deviation(theta, e).unwrap().value()
                    - analytics::deviation(theta, e).value())
                .abs()
            })
            .fold(0.0, f64::max);
        TableRow {
            label: label.into(),
            expected: "identity within 1e-12".into(),
            computed: format!("max |diff| = {max_diff:.3e}"),
            passed: max_diff <= 1e-12,
        }
    })
    .collect();
    tables.push(TableCheck::new("large-eps deviation forms", closed_form_rows));

    // rho values.
    let sqrt2 = std::f64::consts::SQRT_2;
    let sqrt3 = 3.0f64.sqrt();
    let rho_rows = vec![
        TableRow::checked("theta = pi/2", 5.0 / 3.0, analytics::rho(angle(PI / 2.0)), 1e-12),
        TableRow::checked(
            "theta = 2pi/3",
            7.0 / 3.0,
            analytics::rho(angle(2.0 * PI / 3.0)),
            1e-12,
        ),
        TableRow::checked(
            "theta = 3pi/4",
            (5.0 + 2.0 * sqrt2) / 3.0,
            analytics::rho(angle(3.0 * PI / 4.0)),
            1e-12,
        ),
        TableRow::checked(
            "theta = 5pi/6",
            (5.0 + 2.0 * sqrt3) / 3.0,
            analytics::rho(angle(5.0 * PI / 6.0)),
            1e-12,
        ),
        TableRow::checked("theta = pi", 3.0, analytics::rho(angle(PI)), 1e-12),
    ];
    tables.push(TableCheck::new("limiting success ratios", rho_rows));

    let all_passed = tables.iter().all(|t| t.passed);
    TablesReport { tables, all_passed }
}

/// The regenerable data sets behind the paper-style plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// D(θ) against θ for ε ∈ {0.75, 0.8, 0.9, 0.99}: the large-ε
    /// monotone-decrease picture.
    DevVsTheta,
    /// D(θ) − ε³ over the full (θ, ε) grid.
    GapSurface,
    /// The curve (ε, θ*(ε)) of zero-deviation points over (0, 3/4].
    ZeroLocus,
    /// ρ(θ) over [0, π].
    RhoCurve,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [
        FigureId::DevVsTheta,
        FigureId::GapSurface,
        FigureId::ZeroLocus,
        FigureId::RhoCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::DevVsTheta => "dev_vs_theta",
            FigureId::GapSurface => "gap_surface",
            FigureId::ZeroLocus => "zero_locus",
            FigureId::RhoCurve => "rho_curve",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or(Error::Construction(
                "unknown figure id: expected one of dev_vs_theta, gap_surface, zero_locus, rho_curve",
            ))
    }
}

/// Regenerates the curve data for one figure on its canonical grid.
///
/// `dev_vs_theta`: 181-point θ grid × ε ∈ {0.75, 0.8, 0.9, 0.99}.
/// `gap_surface`: default 181 × 99 grid. `zero_locus`: ε = 0.01…0.75 with the
/// zero point in the `theta_rad` column and its (vanishing) deviation as the
/// value. `rho_curve`: 181-point θ grid at the ε → 1 limit column ε = 1.
pub fn figure_data(id: FigureId) -> SweepResult {
    match id {
        FigureId::DevVsTheta => {
            let eps = [0.75, 0.8, 0.9, 0.99].into_iter().map(prob).collect();
            let spec = SweepSpec::new(
                SweepSpec::default_theta_grid(),
                eps,
                SweepMode::AnalyticOnly,
                &[Quantity::Deviation],
            )
            .expect("canonical figure grid is valid");
            run_sweep(&spec)
        }
        FigureId::GapSurface => {
            let spec = SweepSpec::new(
                SweepSpec::default_theta_grid(),
                SweepSpec::default_eps_grid(),
                SweepMode::AnalyticOnly,
                &[Quantity::Gap],
            )
            .expect("canonical figure grid is valid");
            run_sweep(&spec)
        }
        FigureId::ZeroLocus => {
            let records = (1..=75)
                .map(|i| {
                    let eps = prob(i as f64 / 100.0);
                    let star = analytics::zero_deviation_point(eps)
                        .expect("locus grid stays within (0, 3/4]");
                    SweepRecord {
                        theta_rad: star.radians(),
                        eps: eps.value(),
                        values: vec![analytics::deviation(star, eps).value()],
                        sim_deviation: None,
                        abs_discrepancy: None,
                    }
                })
                .collect();
            SweepResult {
                quantities: vec![Quantity::Deviation],
                cross_checked: false,
                records,
            }
        }
        FigureId::RhoCurve => {
            let spec = SweepSpec::new(
                SweepSpec::default_theta_grid(),
                vec![prob(1.0)],
                SweepMode::AnalyticOnly,
                &[Quantity::Rho],
            )
            .expect("canonical figure grid is valid");
            run_sweep(&spec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_point_sweep_matches_cube_law() {
        let spec = SweepSpec::new(
            vec![angle(PI / 3.0)],
            vec![prob(0.5)],
            SweepMode::AnalyticOnly,
            &[Quantity::Deviation],
        )
        .unwrap();
        let result = run_sweep(&spec);
        assert_eq!(result.records().len(), 1);
        assert_abs_diff_eq!(result.records()[0].values[0], 0.125, epsilon = 1e-15);
    }

    #[test]
    fn zero_phase_sweep_copies_eps_column() {
        let spec = SweepSpec::new(
            vec![angle(0.0)],
            SweepSpec::default_eps_grid(),
            SweepMode::AnalyticOnly,
            &[Quantity::Deviation],
        )
        .unwrap();
        for record in run_sweep(&spec).records() {
            assert_eq!(record.values[0], record.eps);
        }
    }

    #[test]
    fn cross_checked_sweep_has_tiny_discrepancy() {
        let spec = SweepSpec::new(
            theta_grid(5),
            eps_grid(0.1, 0.9, 5).unwrap(),
            SweepMode::CrossChecked { dim: 8 },
            &[Quantity::Deviation],
        )
        .unwrap();
        let result = run_sweep(&spec);
        assert_eq!(result.records().len(), 25);
        for record in result.records() {
            assert!(record.abs_discrepancy.unwrap() <= 1e-10);
        }
    }

    #[test]
    fn records_come_out_row_major() {
        let spec = SweepSpec::new(
            theta_grid(3),
            eps_grid(0.2, 0.8, 2).unwrap(),
            SweepMode::AnalyticOnly,
            &[Quantity::Threshold],
        )
        .unwrap();
        let result = run_sweep(&spec);
        let pairs: Vec<(f64, f64)> = result
            .records()
            .iter()
            .map(|r| (r.theta_rad, r.eps))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (0.0, 0.2),
                (0.0, 0.8),
                (PI / 2.0, 0.2),
                (PI / 2.0, 0.8),
                (PI, 0.2),
                (PI, 0.8),
            ]
        );
    }

    #[test]
    fn quantities_are_deduplicated_and_ordered() {
        let spec = SweepSpec::new(
            theta_grid(2),
            eps_grid(0.2, 0.8, 2).unwrap(),
            SweepMode::AnalyticOnly,
            &[Quantity::Rho, Quantity::Deviation, Quantity::Rho, Quantity::Gap],
        )
        .unwrap();
        assert_eq!(
            spec.quantities(),
            &[Quantity::Deviation, Quantity::Gap, Quantity::Rho]
        );
    }

    #[test]
    fn spec_validation_rejects_bad_grids() {
        assert!(SweepSpec::new(
            vec![],
            vec![prob(0.5)],
            SweepMode::AnalyticOnly,
            &[Quantity::Deviation]
        )
        .is_err());
        assert!(SweepSpec::new(
            vec![angle(1.0), angle(1.0)],
            vec![prob(0.5)],
            SweepMode::AnalyticOnly,
            &[Quantity::Deviation]
        )
        .is_err());
        assert!(SweepSpec::new(
            vec![angle(1.0)],
            vec![prob(0.5)],
            SweepMode::CrossChecked { dim: 1 },
            &[Quantity::Deviation]
        )
        .is_err());
    }

    #[test]
    fn csv_layout_is_stable() {
        let spec = SweepSpec::new(
            vec![angle(0.0)],
            vec![prob(0.25)],
            SweepMode::AnalyticOnly,
            &[Quantity::Deviation, Quantity::Rho],
        )
        .unwrap();
        let csv = run_sweep(&spec).to_csv();
        assert_eq!(
            csv,
            "theta_rad,eps,deviation,rho\n0.0,0.25,0.25,0.3333333333333333\n"
        );
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let spec = SweepSpec::new(
            vec![angle(0.0)],
            vec![prob(0.25)],
            SweepMode::CrossChecked { dim: 4 },
            &[Quantity::Deviation],
        )
        .unwrap();
        let json = run_sweep(&spec).to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let row = &parsed.as_array().unwrap()[0];
        assert_eq!(row["theta_rad"], 0.0);
        assert_eq!(row["eps"], 0.25);
        assert_eq!(row["deviation"], 0.25);
        assert!(row["abs_discrepancy"].as_f64().unwrap() <= 1e-10);
        // key order mirrors the CSV column order
        let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["theta_rad", "eps", "deviation", "sim_deviation", "abs_discrepancy"]
        );
    }

    #[test]
    fn identical_specs_serialize_identically() {
        let spec = SweepSpec::new(
            theta_grid(13),
            eps_grid(0.05, 0.95, 7).unwrap(),
            SweepMode::CrossChecked { dim: 6 },
            &[Quantity::Deviation, Quantity::Gap],
        )
        .unwrap();
        let first = run_sweep(&spec).to_csv();
        let second = run_sweep(&spec).to_csv();
        assert_eq!(first, second);
    }

    #[test]
    fn tables_reproduce_cleanly() {
        let report = reproduce_tables();
        for table in &report.tables {
            assert!(table.passed, "table '{}' failed", table.name);
        }
        assert!(report.all_passed);
    }

    #[test]
    fn figure_grids_have_expected_shape() {
        let dev = figure_data(FigureId::DevVsTheta);
        assert_eq!(dev.records().len(), 181 * 4);
        // first theta block starts at D = eps, last ends at eps(4eps-3)^2
        let first = &dev.records()[0];
        assert_eq!(first.theta_rad, 0.0);
        assert_eq!(first.values[0], first.eps);

        let locus = figure_data(FigureId::ZeroLocus);
        assert_eq!(locus.records().len(), 75);
        let halfway = locus.records().iter().find(|r| r.eps == 0.5).unwrap();
        assert_abs_diff_eq!(halfway.theta_rad, PI / 2.0, epsilon = 1e-12);
        for record in locus.records() {
            assert!(record.values[0] < 1e-12);
        }

        let rho_curve = figure_data(FigureId::RhoCurve);
        assert_eq!(rho_curve.records().len(), 181);
        assert_abs_diff_eq!(rho_curve.records()[0].values[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rho_curve.records().last().unwrap().values[0],
            3.0,
            epsilon = 1e-12
        );
    }
}
