//! Subcommand implementations and the records they emit.
//!
//! Every command resolves its inputs up front, computes through the `qgeo`
//! library, and renders one record (or one record per grid cell / trial
//! batch) in the requested format. Field order in the JSON output follows
//! the struct declarations here; the CSV column order is fixed by the
//! header slices and documented in the README. Stochastic commands are
//! deterministic functions of their seed: rerunning the same command line
//! must reproduce the output byte for byte.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use qgeo::bloch_geometry::{
    check_operator_monotone, check_self_inversive, f_sjoqvist, f_zhsl, fubini_study_length,
    geodesic_length, pinned_counterexample_min_eig, GeodesicEndpoints, MCFunction,
    MonotoneViolation,
};
use qgeo::channels::{check_contractivity, ContractivityReport, MonotoneQuantity};
use qgeo::fileio::{parse_state_json, MatrixFile};
use qgeo::metrics::{
    bures_angle, bures_distance_sq, fidelity, generalized_sjoqvist_distance_sq,
    sjoqvist_distance_sq,
};
use qgeo::spin_qubit::{analytic_metric, diagnose_degeneracy, FieldParams};
use qgeo::states::{sample_zhsl, DensityOperator};
use qgeo::{Error, MetricKind};

use crate::output::{fmt_f64, fmt_opt_f64, to_json_pretty, Csv, OutputFormat};
use crate::CliError;

/// Schema tag stamped on every record so downstream consumers can detect
/// layout changes.
pub const SCHEMA: &str = "qgeo.v1";

/// A pinned-pair eigenvalue below this floor counts as a demonstrated
/// operator-monotonicity failure. The interferometric function lands at
/// exactly -1/12, eight orders of magnitude past the floor; roundoff on a
/// genuinely monotone function stays far above it.
pub const PINNED_FAILURE_FLOOR: f64 = -1e-9;

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// An inclusive linear grid with `steps` points from `start` to `stop`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    /// Validates endpoints and step count. A single-point grid is allowed
    /// only when both endpoints coincide, so `steps = 1` cannot silently
    /// drop the `stop` value.
    pub fn new(name: &str, start: f64, stop: f64, steps: usize) -> Result<Self, CliError> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Validation(format!(
                "grid `{name}`: endpoints must be finite, got {start} and {stop}"
            )));
        }
        if steps == 0 {
            return Err(CliError::Validation(format!(
                "grid `{name}`: steps must be at least 1"
            )));
        }
        if steps == 1 && start != stop {
            return Err(CliError::Validation(format!(
                "grid `{name}`: a single-point grid requires start == stop, got {start} and {stop}"
            )));
        }
        Ok(Self { start, stop, steps })
    }

    /// Grid points, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let d = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + d * i as f64).collect()
    }
}

// ---------------------------------------------------------------------------
// distance
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct DistanceParams {
    pub state_a: PathBuf,
    pub state_b: PathBuf,
    pub tol_degeneracy: f64,
    pub format: OutputFormat,
}

/// All pairwise distinguishability quantities between two states.
///
/// The interferometric distance is the only entry that can fail on valid
/// input (degenerate spectrum or ambiguous eigenbranch matching); in that
/// case it is reported as `null` with a status string and the process exits
/// with the spectral-configuration code while every other entry is still
/// emitted.
#[derive(Debug, Serialize)]
pub struct DistanceRecord {
    pub schema: &'static str,
    pub command: &'static str,
    pub dim: usize,
    pub fidelity: f64,
    pub bures_sq: f64,
    pub bures_angle: f64,
    pub generalized_sjoqvist_sq: f64,
    pub sjoqvist_sq: Option<f64>,
    /// `"ok"`, `"degenerate"`, or `"ambiguous"`.
    pub sjoqvist_status: &'static str,
    /// `|generalized_sjoqvist_sq - bures_sq|`; the two are equal
    /// identically, so this is a live cross-check of both code paths.
    pub consistency_residual: f64,
    pub tol_degeneracy: f64,
}

fn load_state(path: &Path) -> Result<DensityOperator, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read `{}`: {e}", path.display())))?;
    parse_state_json(&text)
        .map_err(|e| CliError::Validation(format!("`{}`: {e}", path.display())))
}

pub fn run_distance(p: &DistanceParams) -> Result<(String, i32), CliError> {
    let a = load_state(&p.state_a)?;
    let b = load_state(&p.state_b)?;
    let fid = fidelity(&a, &b)?;
    let bures_sq = bures_distance_sq(&a, &b)?;
    let angle = bures_angle(&a, &b)?;
    let generalized = generalized_sjoqvist_distance_sq(&a, &b)?;
    let (sjoqvist_sq, sjoqvist_status, exit_code) =
        match sjoqvist_distance_sq(&a, &b, p.tol_degeneracy) {
            Ok(v) => (Some(v), "ok", 0),
            Err(Error::DegenerateSpectrum { .. }) => (None, "degenerate", 3),
            Err(Error::AmbiguousBranchMatching { .. }) => (None, "ambiguous", 3),
            Err(e) => return Err(e.into()),
        };
    let record = DistanceRecord {
        schema: SCHEMA,
        command: "distance",
        dim: a.dim(),
        fidelity: fid,
        bures_sq,
        bures_angle: angle,
        generalized_sjoqvist_sq: generalized,
        sjoqvist_sq,
        sjoqvist_status,
        consistency_residual: (generalized - bures_sq).abs(),
        tol_degeneracy: p.tol_degeneracy,
    };
    let payload = match p.format {
        OutputFormat::Json => to_json_pretty(&record)?,
        OutputFormat::Csv => {
            let mut csv = Csv::new(&[
                "schema",
                "command",
                "dim",
                "fidelity",
                "bures_sq",
                "bures_angle",
                "generalized_sjoqvist_sq",
                "sjoqvist_sq",
                "sjoqvist_status",
                "consistency_residual",
                "tol_degeneracy",
            ]);
            csv.row(&[
                record.schema.to_string(),
                record.command.to_string(),
                record.dim.to_string(),
                fmt_f64(record.fidelity),
                fmt_f64(record.bures_sq),
                fmt_f64(record.bures_angle),
                fmt_f64(record.generalized_sjoqvist_sq),
                fmt_opt_f64(record.sjoqvist_sq),
                record.sjoqvist_status.to_string(),
                fmt_f64(record.consistency_residual),
                fmt_f64(record.tol_degeneracy),
            ]);
            csv.finish()
        }
    };
    Ok((payload, exit_code))
}

// ---------------------------------------------------------------------------
// thermal-sweep
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct ThermalSweepParams {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: GridSpec,
    pub beta: GridSpec,
    pub hbar: f64,
    pub kb: f64,
    pub format: OutputFormat,
}

/// One metric tensor in the `(beta, omega_z)` chart.
#[derive(Debug, Serialize)]
pub struct TensorCell {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub nonclassical_g22: f64,
    pub eig_min: f64,
    pub eig_max: f64,
    pub det: f64,
    pub degenerate: bool,
}

/// One `(beta, omega_z)` grid cell with both metric tensors.
#[derive(Debug, Serialize)]
pub struct SweepCell {
    pub index_beta: usize,
    pub index_omega_z: usize,
    /// Inverse temperature as supplied (units of 1/temperature).
    pub beta: f64,
    /// `beta / kb`: the energy-conjugate inverse temperature that enters
    /// the Gibbs weights.
    pub beta_energy: f64,
    pub omega_z: f64,
    /// Field magnitude `sqrt(omega_x^2 + omega_y^2 + omega_z^2)`.
    pub omega: f64,
    /// `beta_energy * hbar * omega / 2`, the argument of tanh/sech.
    pub thermal_argument: f64,
    /// `true` when the field vanishes: the Gibbs family is constant there
    /// and both tensors are exactly zero.
    pub zero_field: bool,
    pub sjoqvist: TensorCell,
    pub bures: TensorCell,
    /// `bures.nonclassical_g22 / sjoqvist.nonclassical_g22`; equals
    /// `tanh_sq_expected` identically. Absent when the interferometric
    /// part vanishes (purely longitudinal field).
    pub nonclassical_ratio: Option<f64>,
    pub tanh_sq_expected: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepRecord {
    pub schema: &'static str,
    pub command: &'static str,
    pub omega_x: f64,
    pub omega_y: f64,
    pub hbar: f64,
    pub kb: f64,
    pub beta_grid: GridSpec,
    pub omega_z_grid: GridSpec,
    /// Cells in row-major order: `beta` outer, `omega_z` inner.
    pub cells: Vec<SweepCell>,
}

fn tensor_cell(params: &FieldParams, kind: MetricKind) -> (TensorCell, bool) {
    let (tensor, warned) = analytic_metric(params, kind);
    let report = diagnose_degeneracy(&tensor);
    (
        TensorCell {
            g11: tensor.g[0][0],
            g12: tensor.g[0][1],
            g22: tensor.g[1][1],
            nonclassical_g22: tensor.nonclassical_g22,
            eig_min: report.eigenvalues[0],
            eig_max: report.eigenvalues[1],
            det: report.determinant,
            degenerate: report.degenerate,
        },
        warned,
    )
}

const SWEEP_HEADER: &[&str] = &[
    "index_beta",
    "index_omega_z",
    "beta",
    "beta_energy",
    "omega_z",
    "omega",
    "thermal_argument",
    "zero_field",
    "sj_g11",
    "sj_g12",
    "sj_g22",
    "sj_nonclassical_g22",
    "sj_eig_min",
    "sj_eig_max",
    "sj_det",
    "sj_degenerate",
    "bures_g11",
    "bures_g12",
    "bures_g22",
    "bures_nonclassical_g22",
    "bures_eig_min",
    "bures_eig_max",
    "bures_det",
    "bures_degenerate",
    "nonclassical_ratio",
    "tanh_sq_expected",
];

fn tensor_cells_csv(cell: &TensorCell) -> [String; 8] {
    [
        fmt_f64(cell.g11),
        fmt_f64(cell.g12),
        fmt_f64(cell.g22),
        fmt_f64(cell.nonclassical_g22),
        fmt_f64(cell.eig_min),
        fmt_f64(cell.eig_max),
        fmt_f64(cell.det),
        cell.degenerate.to_string(),
    ]
}

pub fn run_thermal_sweep(p: &ThermalSweepParams) -> Result<(String, i32), CliError> {
    let betas = p.beta.values();
    let omega_zs = p.omega_z.values();
    let mut cells = Vec::with_capacity(betas.len() * omega_zs.len());
    for (index_beta, &beta) in betas.iter().enumerate() {
        for (index_omega_z, &omega_z) in omega_zs.iter().enumerate() {
            let beta_energy = beta / p.kb;
            let params =
                FieldParams::with_hbar(p.omega_x, p.omega_y, omega_z, beta_energy, p.hbar)?;
            let (sjoqvist, warned_sj) = tensor_cell(&params, MetricKind::Sjoqvist);
            let (bures, warned_bu) = tensor_cell(&params, MetricKind::Bures);
            let x = params.thermal_argument();
            let th = x.tanh();
            let nonclassical_ratio = if sjoqvist.nonclassical_g22 > 0.0 {
                Some(bures.nonclassical_g22 / sjoqvist.nonclassical_g22)
            } else {
                None
            };
            cells.push(SweepCell {
                index_beta,
                index_omega_z,
                beta,
                beta_energy,
                omega_z,
                omega: params.magnitude(),
                thermal_argument: x,
                zero_field: warned_sj || warned_bu,
                sjoqvist,
                bures,
                nonclassical_ratio,
                tanh_sq_expected: th * th,
            });
        }
    }
    let record = SweepRecord {
        schema: SCHEMA,
        command: "thermal-sweep",
        omega_x: p.omega_x,
        omega_y: p.omega_y,
        hbar: p.hbar,
        kb: p.kb,
        beta_grid: p.beta,
        omega_z_grid: p.omega_z,
        cells,
    };
    let payload = match p.format {
        OutputFormat::Json => to_json_pretty(&record)?,
        OutputFormat::Csv => {
            let mut csv = Csv::new(SWEEP_HEADER);
            for cell in &record.cells {
                let mut row = vec![
                    cell.index_beta.to_string(),
                    cell.index_omega_z.to_string(),
                    fmt_f64(cell.beta),
                    fmt_f64(cell.beta_energy),
                    fmt_f64(cell.omega_z),
                    fmt_f64(cell.omega),
                    fmt_f64(cell.thermal_argument),
                    cell.zero_field.to_string(),
                ];
                row.extend(tensor_cells_csv(&cell.sjoqvist));
                row.extend(tensor_cells_csv(&cell.bures));
                row.push(fmt_opt_f64(cell.nonclassical_ratio));
                row.push(fmt_f64(cell.tanh_sq_expected));
                csv.row(&row);
            }
            csv.finish()
        }
    };
    Ok((payload, 0))
}

// ---------------------------------------------------------------------------
// mc-analyze
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct McParams {
    pub nu: f64,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

/// Diagnostics for one Morozova-Chentsov candidate function.
#[derive(Debug, Serialize)]
pub struct FunctionVerdict {
    pub name: String,
    /// `lim_{t->1} f(t)`; must equal 1 for a normalized metric-generating
    /// function.
    pub value_at_one: f64,
    pub normalized_at_one: bool,
    pub vanishes_at_one: bool,
    pub self_inversive_max_defect: f64,
    pub self_inversive_passed: bool,
    pub monotone_trials: usize,
    /// Most negative eigenvalue of `f(B) - f(A)` seen across all trials.
    pub monotone_min_eigenvalue: f64,
    pub monotone_violation_count: usize,
    /// `true` when the randomized search found no violation — evidence,
    /// never proof.
    pub monotone_passed: bool,
    /// Smallest eigenvalue of `f(B) - f(A)` for the pinned deterministic
    /// pair `A = I/2 <= B = I`; exactly -1/12 for the interferometric
    /// function.
    pub pinned_min_eigenvalue: f64,
    pub pinned_detects_failure: bool,
    /// First violating pair for reproduction (JSON output only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<MonotoneViolation>,
}

/// Pointwise comparison of the one-parameter family member at `nu = 1/2`
/// against the interferometric function; the two coincide identically.
#[derive(Debug, Serialize)]
pub struct CoincidenceRecord {
    pub samples: usize,
    pub max_abs_difference: f64,
    pub matches: bool,
}

#[derive(Debug, Serialize)]
pub struct McRecord {
    pub schema: &'static str,
    pub command: &'static str,
    pub nu: f64,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub functions: Vec<FunctionVerdict>,
    pub nu_half_vs_interferometric: CoincidenceRecord,
}

fn function_verdict(
    func: &MCFunction,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<FunctionVerdict, CliError> {
    let name = func.name();
    let value_at_one = func.limit_at_one();
    let inversive = check_self_inversive(&name, |t| func.evaluate(t))?;
    let monotone = check_operator_monotone(&name, |t| func.evaluate(t), dim, trials, seed)?;
    let pinned = pinned_counterexample_min_eig(|t| func.evaluate(t))?;
    Ok(FunctionVerdict {
        name,
        value_at_one,
        normalized_at_one: (value_at_one - 1.0).abs() < 1e-12,
        vanishes_at_one: func.vanishes_at_one(),
        self_inversive_max_defect: inversive.max_defect,
        self_inversive_passed: inversive.passed,
        monotone_trials: monotone.trials,
        monotone_min_eigenvalue: monotone.min_eigenvalue_seen,
        monotone_violation_count: monotone.violations.len(),
        monotone_passed: monotone.passed(),
        pinned_min_eigenvalue: pinned,
        pinned_detects_failure: pinned < PINNED_FAILURE_FLOOR,
        first_violation: monotone.violations.into_iter().next(),
    })
}

fn nu_half_coincidence() -> Result<CoincidenceRecord, CliError> {
    let samples = 1000;
    let mut max_abs = 0.0_f64;
    for i in 0..samples {
        let t = 10f64.powf(-3.0 + 6.0 * i as f64 / (samples - 1) as f64);
        max_abs = max_abs.max((f_zhsl(t, 0.5)? - f_sjoqvist(t)?).abs());
    }
    Ok(CoincidenceRecord {
        samples,
        max_abs_difference: max_abs,
        matches: max_abs < 1e-12,
    })
}

pub fn run_mc_analyze(p: &McParams) -> Result<(String, i32), CliError> {
    let functions = [
        MCFunction::Bures,
        MCFunction::Sjoqvist,
        MCFunction::zhsl(p.nu)?,
    ];
    let verdicts = functions
        .iter()
        .map(|f| function_verdict(f, p.dim, p.trials, p.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let record = McRecord {
        schema: SCHEMA,
        command: "mc-analyze",
        nu: p.nu,
        dim: p.dim,
        trials: p.trials,
        seed: p.seed,
        functions: verdicts,
        nu_half_vs_interferometric: nu_half_coincidence()?,
    };
    let payload = match p.format {
        OutputFormat::Json => to_json_pretty(&record)?,
        OutputFormat::Csv => {
            let mut csv = Csv::new(&[
                "schema",
                "command",
                "nu",
                "dim",
                "trials",
                "seed",
                "name",
                "value_at_one",
                "normalized_at_one",
                "vanishes_at_one",
                "self_inversive_max_defect",
                "self_inversive_passed",
                "monotone_trials",
                "monotone_min_eigenvalue",
                "monotone_violation_count",
                "monotone_passed",
                "pinned_min_eigenvalue",
                "pinned_detects_failure",
                "coincidence_max_abs_difference",
                "coincidence_matches",
            ]);
            let c = &record.nu_half_vs_interferometric;
            for v in &record.functions {
                csv.row(&[
                    record.schema.to_string(),
                    record.command.to_string(),
                    fmt_f64(record.nu),
                    record.dim.to_string(),
                    record.trials.to_string(),
                    record.seed.to_string(),
                    v.name.clone(),
                    fmt_f64(v.value_at_one),
                    v.normalized_at_one.to_string(),
                    v.vanishes_at_one.to_string(),
                    fmt_f64(v.self_inversive_max_defect),
                    v.self_inversive_passed.to_string(),
                    v.monotone_trials.to_string(),
                    fmt_f64(v.monotone_min_eigenvalue),
                    v.monotone_violation_count.to_string(),
                    v.monotone_passed.to_string(),
                    fmt_f64(v.pinned_min_eigenvalue),
                    v.pinned_detects_failure.to_string(),
                    fmt_f64(c.max_abs_difference),
                    c.matches.to_string(),
                ]);
            }
            csv.finish()
        }
    };
    Ok((payload, 0))
}

// ---------------------------------------------------------------------------
// monotonicity
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct MonotonicityParams {
    pub quantity: MonotoneQuantity,
    pub dim: usize,
    pub env_dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
pub struct MonotonicityRecord {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(flatten)]
    pub report: ContractivityReport,
    /// `true` when no violation exceeded the contractivity margin. For the
    /// unprotected interferometric distance this is an empirical outcome,
    /// not a theorem check.
    pub passed: bool,
}

/// Parses a quantity name as written on the command line.
pub fn parse_quantity(s: &str) -> Result<MonotoneQuantity, CliError> {
    match s {
        "bures-distance" => Ok(MonotoneQuantity::BuresDistance),
        "bures-angle" => Ok(MonotoneQuantity::BuresAngle),
        "interferometric-distance" | "sjoqvist-distance" => Ok(MonotoneQuantity::SjoqvistDistance),
        "fidelity" => Ok(MonotoneQuantity::Fidelity),
        other => Err(CliError::Validation(format!(
            "unknown quantity `{other}` (expected bures-distance, bures-angle, \
             interferometric-distance, or fidelity)"
        ))),
    }
}

pub fn run_monotonicity(p: &MonotonicityParams) -> Result<(String, i32), CliError> {
    let report = check_contractivity(p.quantity, p.dim, p.env_dim, p.trials, p.seed)?;
    let passed = report.passed();
    let record = MonotonicityRecord {
        schema: SCHEMA,
        command: "monotonicity",
        report,
        passed,
    };
    let payload = match p.format {
        OutputFormat::Json => to_json_pretty(&record)?,
        OutputFormat::Csv => {
            let mut csv = Csv::new(&[
                "schema",
                "command",
                "quantity",
                "dim",
                "env_dim",
                "trials",
                "master_seed",
                "expected_monotone",
                "resamples",
                "max_excess",
                "violation_count",
                "passed",
            ]);
            let r = &record.report;
            csv.row(&[
                record.schema.to_string(),
                record.command.to_string(),
                r.quantity.name().to_string(),
                r.dim.to_string(),
                r.env_dim.to_string(),
                r.trials.to_string(),
                r.master_seed.to_string(),
                r.expected_monotone.to_string(),
                r.resamples.to_string(),
                fmt_f64(r.max_excess),
                r.violations.len().to_string(),
                record.passed.to_string(),
            ]);
            csv.finish()
        }
    };
    Ok((payload, 0))
}

// ---------------------------------------------------------------------------
// geodesic
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct GeodesicParams {
    pub r_a: f64,
    pub r_b: f64,
    pub theta_b: f64,
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
pub struct GeodesicRecord {
    pub schema: &'static str,
    pub command: &'static str,
    pub r_a: f64,
    pub r_b: f64,
    pub theta_b: f64,
    pub sjoqvist_length: f64,
    pub bures_length: f64,
    /// Fubini-Study arc between the pure states under the endpoint polar
    /// angles; lower bound for both mixed-state lengths on the sphere.
    pub fubini_study_length: f64,
    /// Live cross-check: the Bures length never exceeds the
    /// interferometric length between the same endpoints.
    pub ordering_ok: bool,
}

pub fn run_geodesic(p: &GeodesicParams) -> Result<(String, i32), CliError> {
    let endpoints = GeodesicEndpoints::new(p.r_a, p.r_b, p.theta_b)?;
    let sjoqvist_length = geodesic_length(MetricKind::Sjoqvist, &endpoints);
    let bures_length = geodesic_length(MetricKind::Bures, &endpoints);
    let record = GeodesicRecord {
        schema: SCHEMA,
        command: "geodesic",
        r_a: p.r_a,
        r_b: p.r_b,
        theta_b: p.theta_b,
        sjoqvist_length,
        bures_length,
        fubini_study_length: fubini_study_length(p.theta_b),
        ordering_ok: bures_length <= sjoqvist_length + 1e-12,
    };
    let payload = match p.format {
        OutputFormat::Json => to_json_pretty(&record)?,
        OutputFormat::Csv => {
            let mut csv = Csv::new(&[
                "schema",
                "command",
                "r_a",
                "r_b",
                "theta_b",
                "sjoqvist_length",
                "bures_length",
                "fubini_study_length",
                "ordering_ok",
            ]);
            csv.row(&[
                record.schema.to_string(),
                record.command.to_string(),
                fmt_f64(record.r_a),
                fmt_f64(record.r_b),
                fmt_f64(record.theta_b),
                fmt_f64(record.sjoqvist_length),
                fmt_f64(record.bures_length),
                fmt_f64(record.fubini_study_length),
                record.ordering_ok.to_string(),
            ]);
            csv.finish()
        }
    };
    Ok((payload, 0))
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct SampleParams {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Debug, Serialize)]
pub struct SampleRecord {
    pub schema: &'static str,
    pub command: &'static str,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    /// Density matrices in the on-disk state-file layout, ready to be
    /// split into individual files and fed back to `distance`.
    pub states: Vec<MatrixFile>,
}

pub fn run_sample(p: &SampleParams) -> Result<(String, i32), CliError> {
    if p.format == OutputFormat::Csv {
        return Err(CliError::Validation(
            "`sample` emits full matrices and supports only json output".to_string(),
        ));
    }
    if p.count == 0 {
        return Err(CliError::Validation("count must be at least 1".to_string()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(p.seed);
    let mut states = Vec::with_capacity(p.count);
    for _ in 0..p.count {
        let rho = sample_zhsl(p.dim, &mut rng)?;
        states.push(MatrixFile::from_matrix(rho.matrix(), false));
    }
    let record = SampleRecord {
        schema: SCHEMA,
        command: "sample",
        dim: p.dim,
        count: p.count,
        seed: p.seed,
        states,
    };
    Ok((to_json_pretty(&record)?, 0))
}
