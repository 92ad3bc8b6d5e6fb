//! Command-line experiments.
//!
//! Each subcommand turns a [`RunConfig`] into a [`Report`]. Reports contain
//! no wall-clock data unless `--timing` is given, so identical flags give
//! byte-identical output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::clone_engine::{
    amplification_factor, apply_clone_map, attenuation_factor, build_generator, exponentiate,
    verify_overlap_preservation, CloneGenerator,
};
use crate::error::{Error, Result};
use crate::estimation::{control_expected_std, run_control_trials, run_trials, HETERODYNE_STD};
use crate::fock::{
    build_unitary, coherent_vector, commutator_residuals, fidelity, truncation_warnings, FockSpace,
};
use crate::report::{complex, format_float, labels, number, numbers, Object, Report, Table};
use crate::states::{
    product_overlap_sq, scaling_overlap_discrepancy, ComplexAmplitude, ProductCoherentState,
};
use crate::CLOSED_FORM_TOL;

pub const DEFAULT_CUTOFF: usize = 24;
pub const DEFAULT_TRIALS: usize = 100_000;
pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-5;
pub const DEFAULT_ESTIMATE_TOLERANCE: f64 = 0.02;
pub const DEFAULT_MODULI: [f64; 7] = [0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0];
pub const DEFAULT_PHASES: [f64; 3] = [0.0, FRAC_PI_4, FRAC_PI_2];
pub const DEFAULT_SWEEP: [usize; 4] = [1, 4, 16, 64];
/// Below this many trials the estimate report carries a warning flag.
pub const LOW_SAMPLE_TRIALS: usize = 1000;
/// Discrepancies below this count as zero in the no-amplification grid.
pub const NOAMP_ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Parser)]
#[command(
    name = "infoclone",
    version,
    about = "Information cloning of coherent states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the cloning map to |α⟩|β⟩^N in label space.
    Clone(RunArgs),
    /// Rebuild the unitary in a truncated Fock space and compare.
    OracleCheck(RunArgs),
    /// Monte Carlo statistics of the label estimator.
    Estimate(RunArgs),
    /// Tabulate the overlap discrepancy of universal rescalings.
    Noamp(RunArgs),
    /// Squared overlaps of two product states before and after the map.
    Overlap(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Unknown label α, e.g. `1+2i`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    /// Ancilla label β.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub beta: String,
    /// Comparison-state unknown label α′.
    #[arg(long = "alpha-prime", default_value = "0", allow_hyphen_values = true)]
    pub alpha_prime: String,
    /// Comparison-state ancilla label β′.
    #[arg(long = "beta-prime", default_value = "0", allow_hyphen_values = true)]
    pub beta_prime: String,
    /// Number of clones N.
    #[arg(long = "n", default_value_t = 1)]
    pub n_clones: usize,
    /// Comma-separated ancilla weights r_j (default all 1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub weights: Option<Vec<f64>>,
    /// Explicit product state, comma-separated labels (overlap only).
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// Explicit comparison product state (overlap only).
    #[arg(long = "psi-prime", allow_hyphen_values = true)]
    pub psi_prime: Option<String>,
    /// Fock cutoff D per mode.
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    pub cutoff: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated N values for the estimation sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<usize>>,
    /// Comma-separated |λ| grid for noamp.
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<f64>>,
    /// Pass/fail tolerance (oracle-check: infidelity; estimate: relative std error).
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock duration in the report (breaks byte-reproducibility).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Clone,
    OracleCheck,
    Estimate,
    Noamp,
    Overlap,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Clone => "clone",
            CommandKind::OracleCheck => "oracle-check",
            CommandKind::Estimate => "estimate",
            CommandKind::Noamp => "noamp",
            CommandKind::Overlap => "overlap",
        }
    }
}

/// Fully parsed and defaulted configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub alpha: ComplexAmplitude,
    pub beta: ComplexAmplitude,
    pub alpha_prime: ComplexAmplitude,
    pub beta_prime: ComplexAmplitude,
    pub n_clones: usize,
    pub weights: Option<Vec<f64>>,
    pub psi: Option<Vec<ComplexAmplitude>>,
    pub psi_prime: Option<Vec<ComplexAmplitude>>,
    pub cutoff: usize,
    pub n_trials: usize,
    pub seed: u64,
    pub sweep: Vec<usize>,
    pub moduli: Vec<f64>,
    pub tolerance: Option<f64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub timing: bool,
}

fn parse_list(s: &str) -> Result<Vec<ComplexAmplitude>> {
    s.split(',').map(str::parse).collect()
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, args) = match cli.command {
            Command::Clone(a) => (CommandKind::Clone, a),
            Command::OracleCheck(a) => (CommandKind::OracleCheck, a),
            Command::Estimate(a) => (CommandKind::Estimate, a),
            Command::Noamp(a) => (CommandKind::Noamp, a),
            Command::Overlap(a) => (CommandKind::Overlap, a),
        };
        Self::from_args(command, args)
    }

    pub fn from_args(command: CommandKind, a: RunArgs) -> Result<Self> {
        if a.n_clones == 0 {
            return Err(Error::Usage("--n must be at least 1".into()));
        }
        if let Some(t) = a.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Usage(format!(
                    "--tolerance must be positive, got {t}"
                )));
            }
        }
        let sweep = a.sweep.unwrap_or_else(|| DEFAULT_SWEEP.to_vec());
        if sweep.contains(&0) {
            return Err(Error::Usage("--sweep entries must be at least 1".into()));
        }
        let moduli = a.moduli.unwrap_or_else(|| DEFAULT_MODULI.to_vec());
        if moduli.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::Usage(
                "--moduli entries must be finite and non-negative".into(),
            ));
        }
        Ok(RunConfig {
            command,
            alpha: a.alpha.parse()?,
            beta: a.beta.parse()?,
            alpha_prime: a.alpha_prime.parse()?,
            beta_prime: a.beta_prime.parse()?,
            n_clones: a.n_clones,
            weights: a.weights,
            psi: a.psi.as_deref().map(parse_list).transpose()?,
            psi_prime: a.psi_prime.as_deref().map(parse_list).transpose()?,
            cutoff: a.cutoff,
            n_trials: a.trials,
            seed: a.seed,
            sweep,
            moduli,
            tolerance: a.tolerance,
            output_format: a.output,
            output_path: a.out,
            timing: a.timing,
        })
    }

    /// Config echo, including every defaulted value.
    pub fn to_value(&self) -> Value {
        let opt_labels = |xs: &Option<Vec<ComplexAmplitude>>| match xs {
            Some(v) => Value::Array(v.iter().map(|&z| complex(z)).collect()),
            None => Value::Null,
        };
        Object::new()
            .with("command", self.command.name())
            .complex("alpha", self.alpha)
            .complex("beta", self.beta)
            .complex("alpha_prime", self.alpha_prime)
            .complex("beta_prime", self.beta_prime)
            .with("n_clones", self.n_clones)
            .with(
                "weights",
                self.weights.as_deref().map_or(Value::Null, numbers),
            )
            .with("psi", opt_labels(&self.psi))
            .with("psi_prime", opt_labels(&self.psi_prime))
            .with("cutoff", self.cutoff)
            .with("n_trials", self.n_trials)
            .with("seed", self.seed)
            .with("sweep", self.sweep.clone())
            .with("moduli", numbers(&self.moduli))
            .with("tolerance", self.tolerance.map_or(Value::Null, number))
            .with("output_format", self.output_format.name())
            .with(
                "output_path",
                self.output_path
                    .as_ref()
                    .map_or(Value::Null, |p| Value::from(p.display().to_string())),
            )
            .with("timing", self.timing)
            .into()
    }

    fn generator(&self) -> Result<CloneGenerator> {
        build_generator(self.n_clones, self.weights.as_deref())
    }
}

/// Closed forms of the squared overlap for `|α⟩|β⟩^N` against
/// `|α′⟩|β′⟩^N`, before the map and after it under two readings of the
/// mode-0 output label.
fn closed_forms(c: &RunConfig) -> Value {
    let n = c.n_clones as f64;
    let da = (c.alpha.value() - c.alpha_prime.value()).norm_sqr();
    let db = (c.beta.value() - c.beta_prime.value()).norm_sqr();
    Object::new()
        .float("input", (-da).exp() * (-n * db).exp())
        .float("output_mode0_sqrt_n_beta", (-n * db).exp() * (-da).exp())
        .float("output_mode0_n_beta", (-n * n * db).exp() * (-da).exp())
        .into()
}

pub fn cmd_clone(c: &RunConfig) -> Result<Report> {
    let gen = c.generator()?;
    let rotation = exponentiate(&gen);
    let psi = ProductCoherentState::with_ancillas(c.alpha, c.beta, c.n_clones)?;
    let psi_prime = ProductCoherentState::with_ancillas(c.alpha_prime, c.beta_prime, c.n_clones)?;
    let out = apply_clone_map(&psi, &rotation)?;
    let check = verify_overlap_preservation(&psi, &psi_prime, &rotation)?;

    let result = Object::new()
        .with("n_clones", c.n_clones)
        .with("weights", numbers(gen.weights()))
        .with("input_labels", labels(&psi))
        .with("output_labels", labels(&out))
        .float("attenuation_factor", attenuation_factor(c.n_clones)?)
        .float("amplification_factor", amplification_factor(c.n_clones)?)
        .float("input_excitation", psi.total_excitation())
        .float("output_excitation", out.total_excitation())
        .float("orthogonality_residual", rotation.orthogonality_residual())
        .with("comparison_labels", labels(&psi_prime))
        .with(
            "overlap",
            Object::new()
                .float("before", check.before)
                .float("after", check.after)
                .float("abs_diff", check.abs_diff),
        )
        .with("closed_forms", closed_forms(c))
        .into();
    Ok(Report::new(c.to_value(), result))
}

pub fn cmd_oracle_check(c: &RunConfig) -> Result<Report> {
    let gen = c.generator()?;
    let space = FockSpace::new(c.cutoff, gen.n_modes())?;
    let tolerance = c.tolerance.unwrap_or(DEFAULT_ORACLE_TOLERANCE);

    let input = ProductCoherentState::with_ancillas(c.alpha, c.beta, c.n_clones)?;
    let predicted = apply_clone_map(&input, &exponentiate(&gen))?;

    let residuals = commutator_residuals(&space)?;
    let unitary = build_unitary(&space, &gen)?;
    let initial = coherent_vector(&space, input.labels())?;
    let evolved = unitary.apply(&initial)?;
    let target = coherent_vector(&space, predicted.labels())?;
    let f = fidelity(&evolved, &target)?;
    let passed = f >= 1.0 - tolerance;

    let mut warned: Vec<usize> = truncation_warnings(&space, input.labels());
    warned.extend(
        truncation_warnings(&space, predicted.labels())
            .iter()
            .map(|k| k + space.n_modes()),
    );

    let result = Object::new()
        .with("n_clones", c.n_clones)
        .with("n_modes", space.n_modes())
        .with("cutoff", space.cutoff())
        .with("dimension", space.dim())
        .with(
            "commutators",
            Object::new()
                .float("canonical_residual", residuals.canonical)
                .float("cross_residual", residuals.cross),
        )
        .float("unitarity_residual", unitary.unitarity_residual())
        .float("norm_change", (evolved.norm() - initial.norm()).abs())
        .with("input_labels", labels(&input))
        .with("predicted_labels", labels(&predicted))
        .float("fidelity", f)
        .float("infidelity", 1.0 - f)
        .float("threshold", tolerance)
        // Indices 0..M refer to input modes, M..2M to predicted output modes.
        .with("truncation_warnings", warned)
        .with("passed", passed)
        .into();
    let mut report = Report::new(c.to_value(), result);
    report.passed = Some(passed);
    Ok(report)
}

pub fn cmd_estimate(c: &RunConfig) -> Result<Report> {
    if c.n_trials < 2 {
        return Err(Error::Usage(format!(
            "--trials must be at least 2, got {}",
            c.n_trials
        )));
    }
    let tolerance = c.tolerance.unwrap_or(DEFAULT_ESTIMATE_TOLERANCE);
    let stats = run_trials(c.alpha, c.n_clones, c.n_trials, c.seed)?;
    let standard_error = HETERODYNE_STD / (c.n_trials as f64).sqrt();
    let bias_re = stats.mean_est.re() - c.alpha.re();
    let bias_im = stats.mean_est.im() - c.alpha.im();
    let unbiased = bias_re.abs() < 5.0 * standard_error && bias_im.abs() < 5.0 * standard_error;
    let rel_re = stats.std_re / HETERODYNE_STD - 1.0;
    let rel_im = stats.std_im / HETERODYNE_STD - 1.0;
    let std_ok = rel_re.abs() <= tolerance && rel_im.abs() <= tolerance;
    let passed = unbiased && std_ok;

    let mut table = Table::new(&[
        "n_clones",
        "clone_mean_re",
        "clone_mean_im",
        "clone_std_re",
        "clone_std_im",
        "clone_expected_std",
        "control_std_re",
        "control_std_im",
        "control_expected_std",
    ]);
    let mut sweep = Vec::with_capacity(c.sweep.len());
    for &n in &c.sweep {
        let clone = run_trials(c.alpha, n, c.n_trials, c.seed)?;
        let control = run_control_trials(c.alpha, n, c.n_trials, c.seed)?;
        let expected = control_expected_std(n);
        table.push(vec![
            n.to_string(),
            format_float(clone.mean_est.re()),
            format_float(clone.mean_est.im()),
            format_float(clone.std_re),
            format_float(clone.std_im),
            format_float(HETERODYNE_STD),
            format_float(control.std_re),
            format_float(control.std_im),
            format_float(expected),
        ]);
        sweep.push(Value::from(
            Object::new()
                .with("n_clones", n)
                .complex("clone_mean_est", clone.mean_est)
                .float("clone_std_re", clone.std_re)
                .float("clone_std_im", clone.std_im)
                .float("clone_expected_std", HETERODYNE_STD)
                .float("control_std_re", control.std_re)
                .float("control_std_im", control.std_im)
                .float("control_expected_std", expected),
        ));
    }

    let result = Object::new()
        .with("n_clones", c.n_clones)
        .with("n_trials", stats.n_trials)
        .with(
            "reading",
            "spread over repeated protocol runs; Δ read as a standard deviation",
        )
        .complex("mean_est", stats.mean_est)
        .float("bias_re", bias_re)
        .float("bias_im", bias_im)
        .float("standard_error", standard_error)
        .float("std_re", stats.std_re)
        .float("std_im", stats.std_im)
        .float("target_std", HETERODYNE_STD)
        .float("tolerance", tolerance)
        .with("unbiased", unbiased)
        .with("std_within_tolerance", std_ok)
        .with("low_sample_warning", c.n_trials < LOW_SAMPLE_TRIALS)
        .with("sweep", Value::Array(sweep))
        .with("passed", passed)
        .into();
    let mut report = Report::new(c.to_value(), result);
    report.table = Some(table);
    report.passed = Some(passed);
    Ok(report)
}

pub fn cmd_noamp(c: &RunConfig) -> Result<Report> {
    let degenerate = c.alpha == c.beta;
    let mut table = Table::new(&[
        "modulus",
        "phase",
        "lambda_re",
        "lambda_im",
        "discrepancy",
        "unit_modulus",
    ]);
    let mut rows = Vec::new();
    let mut consistent = true;
    for &modulus in &c.moduli {
        for &phase in &DEFAULT_PHASES {
            let lambda = ComplexAmplitude::from_polar(modulus, phase)?;
            let d = scaling_overlap_discrepancy(lambda, c.alpha, c.beta);
            let unit = modulus == 1.0;
            if !degenerate {
                consistent &= if unit { d < NOAMP_ZERO_TOL } else { d > 0.0 };
            }
            table.push(vec![
                format_float(modulus),
                format_float(phase),
                format_float(lambda.re()),
                format_float(lambda.im()),
                format_float(d),
                unit.to_string(),
            ]);
            rows.push(Value::from(
                Object::new()
                    .float("modulus", modulus)
                    .float("phase", phase)
                    .complex("lambda", lambda)
                    .float("discrepancy", d)
                    .with("unit_modulus", unit),
            ));
        }
    }
    let mut result = Object::new()
        .float("base_overlap", crate::states::overlap_sq(c.alpha, c.beta))
        .with("degenerate", degenerate);
    if degenerate {
        result = result.with(
            "warning",
            "alpha equals beta: the discrepancy vanishes identically and constrains nothing",
        );
    }
    let result = result
        .with("grid", Value::Array(rows))
        .with("zero_only_at_unit_modulus", !degenerate && consistent)
        .into();
    let mut report = Report::new(c.to_value(), result);
    report.table = Some(table);
    Ok(report)
}

pub fn cmd_overlap(c: &RunConfig) -> Result<Report> {
    let explicit = match (&c.psi, &c.psi_prime) {
        (Some(a), Some(b)) => {
            if a.len() != b.len() {
                return Err(Error::Usage(format!(
                    "--psi has {} modes but --psi-prime has {}",
                    a.len(),
                    b.len()
                )));
            }
            if a.len() < 2 {
                return Err(Error::Usage("product states need at least 2 modes".into()));
            }
            Some((
                ProductCoherentState::new(a.clone())?,
                ProductCoherentState::new(b.clone())?,
            ))
        }
        (None, None) => None,
        _ => {
            return Err(Error::Usage(
                "--psi and --psi-prime must be given together".into(),
            ))
        }
    };
    let (psi, psi_prime) = match &explicit {
        Some(pair) => pair.clone(),
        None => (
            ProductCoherentState::with_ancillas(c.alpha, c.beta, c.n_clones)?,
            ProductCoherentState::with_ancillas(c.alpha_prime, c.beta_prime, c.n_clones)?,
        ),
    };
    let n_clones = psi.n_ancillas();
    let gen = build_generator(n_clones, c.weights.as_deref())?;
    let rotation = exponentiate(&gen);
    let check = verify_overlap_preservation(&psi, &psi_prime, &rotation)?;
    let out = apply_clone_map(&psi, &rotation)?;
    let out_prime = apply_clone_map(&psi_prime, &rotation)?;

    let mut result = Object::new()
        .with("n_clones", n_clones)
        .with("psi", labels(&psi))
        .with("psi_prime", labels(&psi_prime))
        .with("u_psi", labels(&out))
        .with("u_psi_prime", labels(&out_prime))
        .float("before", check.before)
        .float("after", check.after)
        .float("abs_diff", check.abs_diff)
        .with("preserved", check.abs_diff < CLOSED_FORM_TOL)
        .float("direct_overlap", product_overlap_sq(&psi, &psi_prime)?);
    if explicit.is_none() {
        result = result.with("closed_forms", closed_forms(c));
    }
    Ok(Report::new(c.to_value(), result.into()))
}

/// Runs the configured command, stamping the duration when requested.
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let mut report = match config.command {
        CommandKind::Clone => cmd_clone(config),
        CommandKind::OracleCheck => cmd_oracle_check(config),
        CommandKind::Estimate => cmd_estimate(config),
        CommandKind::Noamp => cmd_noamp(config),
        CommandKind::Overlap => cmd_overlap(config),
    }?;
    if config.timing {
        report.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

pub fn render(config: &RunConfig, report: &Report) -> Result<String> {
    match config.output_format {
        OutputFormat::Json => Ok(report.to_json()),
        OutputFormat::Csv => report.to_csv(),
    }
}
