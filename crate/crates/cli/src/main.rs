//! `hil` — command-line front end for the hil-core probes.
//!
//! Every run parses a job from JSON arguments, executes the requested
//! probe, and emits a deterministic report (JSON by default, CSV for the
//! sequence-producing commands). Exit codes: `0` when a verdict was
//! computed (holds *and* fails both count), `2` for invalid input, `3`
//! when the numerics stayed inconclusive at the configured precision.
//! Wall-clock time goes to stderr so that identical jobs produce
//! byte-identical reports on stdout.

use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hil_core::checkers;
use hil_core::compop::CompositionOperator;
use hil_core::deddens::{self, ProbeOperator};
use hil_core::maps::{orbit, Summability};
use hil_core::{
    DiskGrid, Error, HardyExponent, Leg, ProbeOptions, TaylorSeries, Truncation, Verdict,
    DEFAULT_SEED,
};

use hil_cli::report::{Report, VerdictJson};
use hil_cli::schema::{
    self, complex_to_json, inner_to_json, map_to_json, pair_to_json, SchemaError,
};

const EXIT_INVALID: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

// ----------------------------------------------------------------------
// Command line
// ----------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "hil",
    about = "Numerical probes for composition operators and their invariant subspaces",
    version
)]
struct Cli {
    #[command(flatten)]
    tuning: Tuning,

    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<String>,

    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tuning {
    /// Truncation order for series arithmetic.
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,

    /// Sampling radii, strictly increasing inside (0, 1).
    #[arg(long, global = true, value_name = "R1,R2,...", value_delimiter = ',')]
    grid: Option<Vec<f64>>,

    /// Angular sample count per circle (at least 16).
    #[arg(long, global = true, value_name = "M")]
    angles: Option<usize>,

    /// Equality tolerance for exact identities.
    #[arg(long = "tol-eq", global = true, value_name = "T")]
    tol_eq: Option<f64>,

    /// Sup-norm tolerance for boundedness checks.
    #[arg(long = "tol-sup", global = true, value_name = "T")]
    tol_sup: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Invariance checks for weighted, shifted, and inner-divisor subspaces.
    #[command(subcommand)]
    Check(CheckCommand),

    /// Power-series quotient (theta ∘ phi) / theta and its boundedness verdict.
    SchurQuotient {
        /// Inner function as JSON.
        #[arg(long)]
        theta: String,
        /// Disk self-map as JSON.
        #[arg(long)]
        phi: String,
    },

    /// Forward orbit of a point with boundary-gap summability classification.
    Orbit {
        /// Disk self-map as JSON.
        #[arg(long)]
        phi: String,
        /// Starting point as JSON [re, im].
        #[arg(long)]
        z0: String,
        /// Number of forward iterates to record.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },

    /// Composition-operator norm-ratio battery against the closed-form bound.
    Norms {
        /// Disk self-map as JSON.
        #[arg(long)]
        phi: String,
        /// Hardy exponent.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },

    /// Ratio-boundedness probe for operators against iterated composition.
    Deddens {
        /// Disk self-map as JSON (must fix the origin).
        #[arg(long)]
        phi: String,
        /// Operator family to probe.
        #[arg(long, value_enum)]
        op: DeddensOp,
        /// Multiplier coefficients as JSON [[re,im],...] (for --op multiply).
        #[arg(long)]
        h: Option<String>,
        /// Inner map as JSON (for --op compose; defaults to phi itself).
        #[arg(long)]
        psi: Option<String>,
        /// Number of composition iterates.
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: usize,
        /// Hardy exponent.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Monomial battery degree.
        #[arg(long = "battery-degree", default_value_t = 6)]
        battery_degree: usize,
    },

    /// Drive generator words through the chain z^n H^p and report leaks.
    LatticeScan {
        /// Disk self-map as JSON (must fix the origin, strictly contracting).
        #[arg(long)]
        phi: String,
        /// Deepest lattice level to scan.
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Invariance of the inner-divisor subspace theta·H^p under composition.
    Beurling {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        phi: String,
    },
    /// Invariance of the weighted subspace for an admissible pair.
    Pair {
        /// Pair as JSON {"alpha": [re,im], "beta": [re,im]}.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        phi: String,
    },
    /// Whether z^n times the weighted subspace is invariant under z^k.
    MonomialImage {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        pair: String,
    },
    /// Invariance of an inner multiple of the weighted subspace.
    Shifted {
        /// Inner function J as JSON.
        #[arg(long)]
        j: String,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        phi: String,
    },
    /// Invariance of the atomic-inner multiple tied to the pair's weight ratio.
    Atomic {
        /// Positive atom weight.
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        pair: String,
        #[arg(long)]
        phi: String,
    },
    /// Fixed-point multiplier identity for the quotient of an elliptic symbol.
    Elliptic {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        phi: String,
    },
    /// Orbit-generated subspace for a parabolic automorphism.
    ParabolicOrbit {
        #[arg(long)]
        phi: String,
        /// Starting point as JSON [re, im].
        #[arg(long)]
        z0: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DeddensOp {
    Compose,
    Multiply,
    Antiderivative,
}

// ----------------------------------------------------------------------
// Error plumbing
// ----------------------------------------------------------------------

/// Anything that should end the process with a structured message.
enum CliError {
    /// Bad input: schema violations, constructor rejections, unusable flags.
    Invalid(String),
    /// Valid input, but the numerics could not reach a verdict.
    Inconclusive(String),
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive(msg) => CliError::Inconclusive(msg),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ----------------------------------------------------------------------
// Option assembly
// ----------------------------------------------------------------------

fn build_options(tuning: &Tuning) -> CliResult<ProbeOptions> {
    let mut opts = ProbeOptions::default();
    if let Some(order) = tuning.order {
        if order == 0 {
            return Err(CliError::Invalid(
                "at --order: the truncation order must be at least 1".into(),
            ));
        }
        opts.order = order;
    }
    let radii_given = tuning.grid.is_some();
    let angles_given = tuning.angles.is_some();
    if radii_given || angles_given {
        let radii = tuning
            .grid
            .clone()
            .unwrap_or_else(|| opts.grid.radii().to_vec());
        let angles = tuning.angles.unwrap_or_else(|| opts.grid.angles());
        let flag = if radii_given { "--grid" } else { "--angles" };
        opts.grid = DiskGrid::new(radii, angles)
            .map_err(|e| CliError::Invalid(format!("at {flag}: {e}")))?;
    }
    if let Some(t) = tuning.tol_eq {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Invalid(
                "at --tol-eq: the tolerance must be positive and finite".into(),
            ));
        }
        opts.tol_eq = t;
    }
    if let Some(t) = tuning.tol_sup {
        if !(t > 0.0) || !t.is_finite() {
            return Err(CliError::Invalid(
                "at --tol-sup: the tolerance must be positive and finite".into(),
            ));
        }
        opts.tol_sup = t;
    }
    match std::env::var("HIL_SEED") {
        Ok(raw) => {
            let seed = raw.trim().parse::<u64>().map_err(|_| {
                CliError::Invalid(format!(
                    "at HIL_SEED: expected an unsigned 64-bit integer, got {raw:?}"
                ))
            })?;
            opts.seed = seed;
        }
        Err(_) => opts.seed = DEFAULT_SEED,
    }
    Ok(opts)
}

fn exponent(p: f64, flag: &str) -> CliResult<HardyExponent> {
    HardyExponent::new(p).map_err(|e| CliError::Invalid(format!("at {flag}: {e}")))
}

// ----------------------------------------------------------------------
// Job execution
// ----------------------------------------------------------------------

/// Leg for orbit summability: the verdict mirrors the classification.
fn orbit_leg(rec: &hil_core::maps::OrbitRecord) -> Leg {
    let base = match rec.classification {
        Summability::Summable => Leg::holds(),
        Summability::Divergent => {
            Leg::fails("the trailing gaps carry a fixed share of the total; the series diverges")
        }
        Summability::Inconclusive => Leg::inconclusive(
            "the trailing chunk is neither negligible nor a fixed share; extend the orbit",
        ),
    };
    base.with("partial_sum", rec.partial_sum)
        .with("chunk_sum", rec.chunk_sum)
        .with("chunk_len", rec.chunk_len as f64)
        .with("points", rec.points.len() as f64)
}

fn run(cli: &Cli, opts: &ProbeOptions) -> CliResult<Report> {
    match &cli.command {
        Command::Check(check) => run_check(check, opts),
        Command::SchurQuotient { theta, phi } => {
            let theta = schema::parse_inner(&schema::parse_json_arg(theta, "--theta")?, "--theta")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let verdict = checkers::check_beurling(&theta, &phi, opts)?;
            let job = json!({
                "command": "schur-quotient",
                "theta": inner_to_json(&theta),
                "phi": map_to_json(&phi),
            });
            let mut report = Report::new(job, vec![VerdictJson::from(&verdict)], opts);
            // Best effort: the quotient's coefficient moduli, when the
            // series division is well posed.
            if let Ok(q) = theta.quotient_series(&phi, opts.order.min(64)) {
                let rows: Vec<(usize, f64)> = (0..=q.order())
                    .map(|n| (n, q.coeff(n).norm()))
                    .collect();
                report = report.with_sequence("quotient_coeff_modulus", rows);
            }
            Ok(report)
        }
        Command::Orbit { phi, z0, steps } => {
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let z0 = schema::parse_complex(&schema::parse_json_arg(z0, "--z0")?, "--z0")?;
            let rec = orbit(&phi, z0, *steps)?;
            let verdict = Verdict {
                claim: "the boundary-gap series of the forward orbit is summable".into(),
                criterion: orbit_leg(&rec),
                direct: None,
                truncation: Truncation::from_options(opts),
            };
            let job = json!({
                "command": "orbit",
                "phi": map_to_json(&phi),
                "z0": complex_to_json(z0),
                "steps": steps,
            });
            let rows: Vec<(usize, f64)> = rec.gaps.iter().copied().enumerate().collect();
            Ok(Report::new(job, vec![VerdictJson::from(&verdict)], opts)
                .with_sequence("boundary_gap", rows))
        }
        Command::Norms { phi, p } => {
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let p = exponent(*p, "--p")?;
            let op = CompositionOperator::new(phi.clone());
            let verdict = op.norm_bound_check(p, opts)?;
            let job = json!({
                "command": "norms",
                "phi": map_to_json(&phi),
                "p": p.value(),
            });
            Ok(Report::new(job, vec![VerdictJson::from(&verdict)], opts))
        }
        Command::Deddens {
            phi,
            op,
            h,
            psi,
            n_max,
            p,
            battery_degree,
        } => {
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let p = exponent(*p, "--p")?;
            if *battery_degree == 0 {
                return Err(CliError::Invalid(
                    "at --battery-degree: need at least one battery function".into(),
                ));
            }
            let (operator, job_op) = match op {
                DeddensOp::Compose => {
                    let inner = match psi {
                        Some(raw) => {
                            schema::parse_map(&schema::parse_json_arg(raw, "--psi")?, "--psi")?
                        }
                        None => phi.clone(),
                    };
                    let job = json!({"compose": map_to_json(&inner)});
                    (ProbeOperator::Compose(inner), job)
                }
                DeddensOp::Multiply => {
                    let raw = h.as_ref().ok_or_else(|| {
                        CliError::Invalid(
                            "at --h: --op multiply needs multiplier coefficients".into(),
                        )
                    })?;
                    let v = schema::parse_json_arg(raw, "--h")?;
                    let coeffs = schema::parse_coeffs(&v, "--h")?;
                    let series = TaylorSeries::polynomial(&coeffs);
                    let job = json!({
                        "multiply": coeffs.iter().map(|c| complex_to_json(*c)).collect::<Vec<_>>(),
                    });
                    (ProbeOperator::Multiply(series), job)
                }
                DeddensOp::Antiderivative => {
                    (ProbeOperator::Antiderivative, json!("antiderivative"))
                }
            };
            let battery = deddens::monomial_battery(*battery_degree);
            let result = deddens::deddens_ratio_probe(&operator, &phi, &battery, *n_max, p, opts)?;
            let verdict = Verdict {
                claim: format!(
                    "the operator {} is ratio-bounded against iterated composition",
                    result.operator_id
                ),
                criterion: result.bounded.clone(),
                direct: None,
                truncation: Truncation::from_options(opts),
            };
            let job = json!({
                "command": "deddens",
                "phi": map_to_json(&phi),
                "op": job_op,
                "n_max": n_max,
                "p": p.value(),
                "battery_degree": battery_degree,
            });
            let rows: Vec<(usize, f64)> = result
                .ratios
                .iter()
                .copied()
                .enumerate()
                .map(|(i, r)| (i + 1, r))
                .collect();
            Ok(Report::new(job, vec![VerdictJson::from(&verdict)], opts)
                .with_sequence("norm_ratio", rows))
        }
        Command::LatticeScan { phi, n_max } => {
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let scan = deddens::lattice_scan(&phi, *n_max, opts)?;
            let worst = scan
                .per_n
                .iter()
                .map(|l| l.max_low_coeff)
                .fold(0.0f64, f64::max);
            let criterion = if scan.all_pass() {
                Leg::holds()
                    .with("levels_scanned", scan.per_n.len() as f64)
                    .with("worst_low_order_mass", worst)
            } else {
                let mut leg = Leg::fails("a generator word left its lattice level")
                    .with("levels_scanned", scan.per_n.len() as f64)
                    .with("worst_low_order_mass", worst);
                leg.witness = scan.witnesses.first().cloned();
                leg
            };
            let verdict = Verdict {
                claim: format!(
                    "every generator word preserves the chain of shifted subspaces up to level {n_max}"
                ),
                criterion,
                direct: None,
                truncation: Truncation::from_options(opts),
            };
            let job = json!({
                "command": "lattice-scan",
                "phi": map_to_json(&phi),
                "n_max": n_max,
            });
            let rows: Vec<(usize, f64)> = scan
                .per_n
                .iter()
                .map(|l| (l.n, l.max_low_coeff))
                .collect();
            Ok(Report::new(job, vec![VerdictJson::from(&verdict)], opts)
                .with_sequence("max_low_coeff", rows))
        }
    }
}

fn run_check(check: &CheckCommand, opts: &ProbeOptions) -> CliResult<Report> {
    let (verdict, job): (Verdict, Value) = match check {
        CheckCommand::Beurling { theta, phi } => {
            let theta = schema::parse_inner(&schema::parse_json_arg(theta, "--theta")?, "--theta")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let v = checkers::check_beurling(&theta, &phi, opts)?;
            let job = json!({
                "command": "check",
                "claim": "beurling",
                "theta": inner_to_json(&theta),
                "phi": map_to_json(&phi),
            });
            (v, job)
        }
        CheckCommand::Pair { pair, phi } => {
            let pair = schema::parse_pair(&schema::parse_json_arg(pair, "--pair")?, "--pair")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let v = checkers::check_hab(&pair, &phi, opts)?;
            let job = json!({
                "command": "check",
                "claim": "pair",
                "pair": pair_to_json(&pair),
                "phi": map_to_json(&phi),
            });
            (v, job)
        }
        CheckCommand::MonomialImage { n, k, pair } => {
            let pair = schema::parse_pair(&schema::parse_json_arg(pair, "--pair")?, "--pair")?;
            let v = checkers::check_zn_hab_monomial(*n, *k, &pair, opts)?;
            let job = json!({
                "command": "check",
                "claim": "monomial-image",
                "n": n,
                "k": k,
                "pair": pair_to_json(&pair),
            });
            (v, job)
        }
        CheckCommand::Shifted { j, pair, phi } => {
            let j_inner = schema::parse_inner(&schema::parse_json_arg(j, "--j")?, "--j")?;
            let pair = schema::parse_pair(&schema::parse_json_arg(pair, "--pair")?, "--pair")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let v = checkers::check_j_hab(&j_inner, &pair, &phi, opts)?;
            let job = json!({
                "command": "check",
                "claim": "shifted",
                "j": inner_to_json(&j_inner),
                "pair": pair_to_json(&pair),
                "phi": map_to_json(&phi),
            });
            (v, job)
        }
        CheckCommand::Atomic { lambda, pair, phi } => {
            let pair = schema::parse_pair(&schema::parse_json_arg(pair, "--pair")?, "--pair")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let v = checkers::check_atomic_singular_hab(*lambda, &pair, &phi, opts)?;
            let job = json!({
                "command": "check",
                "claim": "atomic",
                "lambda": lambda,
                "pair": pair_to_json(&pair),
                "phi": map_to_json(&phi),
            });
            (v, job)
        }
        CheckCommand::Elliptic { theta, phi } => {
            let theta = schema::parse_inner(&schema::parse_json_arg(theta, "--theta")?, "--theta")?;
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let v = checkers::elliptic_constant(&theta, &phi, opts)?;
            let job = json!({
                "command": "check",
                "claim": "elliptic",
                "theta": inner_to_json(&theta),
                "phi": map_to_json(&phi),
            });
            (v, job)
        }
        CheckCommand::ParabolicOrbit { phi, z0, steps } => {
            let phi = schema::parse_map(&schema::parse_json_arg(phi, "--phi")?, "--phi")?;
            let z0 = schema::parse_complex(&schema::parse_json_arg(z0, "--z0")?, "--z0")?;
            let v = checkers::parabolic_orbit_subspace(&phi, z0, *steps, opts)?;
            let job = json!({
                "command": "check",
                "claim": "parabolic-orbit",
                "phi": map_to_json(&phi),
                "z0": complex_to_json(z0),
                "steps": steps,
            });
            (v, job)
        }
    };
    Ok(Report::new(job, vec![VerdictJson::from(&verdict)], opts))
}

// ----------------------------------------------------------------------
// Entry point
// ----------------------------------------------------------------------

fn emit(report: &Report, format: Format, out: &Option<String>) -> CliResult<u8> {
    let body = match format {
        Format::Json => report.render_json(),
        Format::Csv => report.render_csv().ok_or_else(|| {
            CliError::Invalid(
                "at --format: this command produces no sequence; csv output is undefined".into(),
            )
        })?,
    };
    match out {
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| f.write_all(body.as_bytes()))
            .map_err(|e| CliError::Invalid(format!("at --out: {e}")))?,
        None => print!("{body}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();

    let outcome = build_options(&cli.tuning)
        .and_then(|opts| run(&cli, &opts))
        .and_then(|report| emit(&report, cli.format, &cli.out));

    // Timing never lands in the report: identical jobs must stay
    // byte-identical, so the only nondeterministic datum goes to stderr.
    eprintln!("wall_time_ms={}", started.elapsed().as_millis());

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(CliError::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}
