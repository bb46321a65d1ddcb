//! Command-line surface: construct / analyze / mse / optimal-dim / simulate.
//!
//! Reports are canonical JSON documents (sorted keys, 17-digit floats) so a
//! given argv and input file always produce byte-identical output. Exit
//! codes: 0 success, 1 invalid input, 2 not a frame, 3 construction
//! certification failure, 4 model-contract violation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::constructions::{
    e8_frame, eisenstein_e6_frame, partition_frame, quadratic_residue_frame, random_frame,
    BuiltFrame, QrParams,
};
use crate::error::Error;
use crate::estimation::{
    mse_report, optimal_dimension, ErasurePattern, NoiseModel, SignalModel,
};
use crate::frames::{certify_equidistance_tight, frame_bounds, DistanceTable, FusionFrame};
use crate::jsonio::{format_f64, frame_from_json, to_canonical_string};
use crate::matcore::{Matrix, Tolerances};
use crate::simulation::{run_monte_carlo, SimConfig};

/// Failed command: message for stderr plus the process exit code.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

fn fail(code: i32, message: impl Into<String>) -> CliFailure {
    CliFailure {
        code,
        message: message.into(),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotAFrame { .. } => 2,
        Error::ConstructionFailed(_) => 3,
        Error::NotTight { .. } | Error::NotWhiteSignal => 4,
        _ => 1,
    }
}

fn from_error(e: Error) -> CliFailure {
    fail(exit_code(&e), format!("error: {e}"))
}

#[derive(Parser)]
#[command(name = "ffkit", version, about = "Fusion-frame toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a frame and write it to a canonical JSON file.
    Construct(ConstructArgs),
    /// Frame bounds, pairwise chordal distances, and the packing certificate.
    Analyze(AnalyzeArgs),
    /// Analytic MSE report, optionally under erasures.
    Mse(MseArgs),
    /// Scan the one-erasure MSE over subspace dimensions.
    OptimalDim(OptimalDimArgs),
    /// Monte Carlo validation of the analytic MSE.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Construction type: qr | e6 | e8 | partition | random.
    #[arg(long = "type")]
    kind: String,
    /// Prime for the quadratic-residue construction (3 or 7 mod 8).
    #[arg(long)]
    p: Option<u64>,
    /// Scaling constant override for qr (decimal or rational like "3/2").
    #[arg(long)]
    c: Option<String>,
    /// Residue-to-nonresidue multiplier override for qr.
    #[arg(long)]
    k: Option<u64>,
    /// Ambient dimension M (partition, random).
    #[arg(long = "M")]
    ambient: Option<usize>,
    /// Subspace dimension m (partition).
    #[arg(long = "m")]
    subspace_dim: Option<usize>,
    /// Number of copies of the partition.
    #[arg(long)]
    copies: Option<usize>,
    /// Rotate each partition copy by a seeded orthogonal matrix.
    #[arg(long)]
    rotate_seed: Option<u64>,
    /// Comma-separated subspace dimensions (random).
    #[arg(long)]
    dims: Option<String>,
    /// Seed for the random construction.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path for the frame file.
    #[arg(long, default_value = "frame.json")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    frame: PathBuf,
    /// json (full report) or csv (pairwise distance table only).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct MseArgs {
    frame: PathBuf,
    /// White signal variance (decimal or rational).
    #[arg(long = "sigma-x2")]
    sigma_x2: Option<String>,
    /// Noise variance (decimal or rational).
    #[arg(long = "sigma-n2")]
    sigma_n2: String,
    /// General signal covariance file: {"matrix": [[...]]}.
    #[arg(long)]
    rxx: Option<PathBuf>,
    /// Comma-separated erased subspace indices.
    #[arg(long)]
    erase: Option<String>,
}

#[derive(Args)]
struct OptimalDimArgs {
    #[arg(long = "M")]
    ambient: usize,
    #[arg(long = "N")]
    n_subspaces: usize,
    #[arg(long = "sigma-x2")]
    sigma_x2: String,
    #[arg(long = "sigma-n2")]
    sigma_n2: String,
    #[arg(long = "m-max")]
    m_max: usize,
}

#[derive(Args)]
struct SimulateArgs {
    frame: PathBuf,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Comma-separated erased subspace indices.
    #[arg(long)]
    erase: Option<String>,
    #[arg(long = "sigma-x2", default_value = "1")]
    sigma_x2: String,
    #[arg(long = "sigma-n2", default_value = "1")]
    sigma_n2: String,
    /// Worker cap. Reports are byte-identical for any value: the flag is
    /// scrubbed from the command echo.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

/// Decimal or simple rational ("16/9") literal.
fn parse_ratio(s: &str) -> Result<f64, CliFailure> {
    let parse = |t: &str| -> Result<f64, CliFailure> {
        t.trim()
            .parse::<f64>()
            .map_err(|_| fail(1, format!("error: cannot parse number '{s}'")))
    };
    if let Some((num, den)) = s.split_once('/') {
        let d = parse(den)?;
        if d == 0.0 {
            return Err(fail(1, format!("error: zero denominator in '{s}'")));
        }
        Ok(parse(num)? / d)
    } else {
        parse(s)
    }
}

fn parse_index_list(s: &str) -> Result<Vec<usize>, CliFailure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| fail(1, format!("error: cannot parse index '{t}'")))
        })
        .collect()
}

fn tolerances_from_env() -> Result<Tolerances, CliFailure> {
    let mut tol = Tolerances::default();
    if let Ok(text) = std::env::var("FFKIT_TOLERANCE_TIGHT") {
        let v: f64 = text
            .trim()
            .parse()
            .map_err(|_| fail(1, format!("error: bad FFKIT_TOLERANCE_TIGHT '{text}'")))?;
        if !v.is_finite() || v <= 0.0 {
            return Err(fail(1, "error: FFKIT_TOLERANCE_TIGHT must be positive"));
        }
        tol.tight = v;
    }
    Ok(tol)
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_file(path: &Path) -> Result<(String, String), CliFailure> {
    let bytes = std::fs::read(path)
        .map_err(|e| fail(1, format!("error: cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| fail(1, format!("error: {} is not UTF-8", path.display())))?;
    Ok((text, digest))
}

fn load_frame_file(
    path: &Path,
    tol: &Tolerances,
) -> Result<(FusionFrame, BTreeMap<String, String>, String), CliFailure> {
    let (text, digest) = read_file(path)?;
    let (frame, meta) = frame_from_json(&text, tol).map_err(from_error)?;
    Ok((frame, meta, digest))
}

fn report_document(command_echo: &str, inputs: Value, payload: Value) -> String {
    to_canonical_string(&json!({
        "command": command_echo,
        "inputs": inputs,
        "payload": payload,
        "version": env!("CARGO_PKG_VERSION"),
    }))
}

fn dims_label(frame: &FusionFrame) -> String {
    match frame.common_dim() {
        Some(d) => d.to_string(),
        None => frame
            .dims()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
    }
}

fn cmd_construct(a: &ConstructArgs, tol: &Tolerances) -> Result<String, CliFailure> {
    let need = |opt: Option<u64>, name: &str| {
        opt.ok_or_else(|| fail(1, format!("error: --{name} is required for --type {}", a.kind)))
    };
    let need_usize = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| fail(1, format!("error: --{name} is required for --type {}", a.kind)))
    };
    let built: BuiltFrame = match a.kind.as_str() {
        "qr" => {
            let p = need(a.p, "p")?;
            let mut params = QrParams::new(p).map_err(from_error)?;
            if let Some(c) = &a.c {
                params = params.with_scale(parse_ratio(c)?);
            }
            if let Some(k) = a.k {
                params = params.with_multiplier(k);
            }
            quadratic_residue_frame(&params, tol).map_err(from_error)?
        }
        "e6" => eisenstein_e6_frame(tol).map_err(from_error)?,
        "e8" => e8_frame(tol).map_err(from_error)?,
        "partition" => partition_frame(
            need_usize(a.ambient, "M")?,
            need_usize(a.subspace_dim, "m")?,
            need_usize(a.copies, "copies")?,
            a.rotate_seed,
            tol,
        )
        .map_err(from_error)?,
        "random" => {
            let dims_text = a
                .dims
                .as_ref()
                .ok_or_else(|| fail(1, "error: --dims is required for --type random"))?;
            random_frame(
                need_usize(a.ambient, "M")?,
                &parse_index_list(dims_text)?,
                need(a.seed, "seed")?,
                tol,
            )
            .map_err(from_error)?
        }
        other => return Err(fail(1, format!("error: unknown construction type '{other}'"))),
    };

    std::fs::write(&a.out, crate::jsonio::frame_to_json(&built.frame, &built.metadata))
        .map_err(|e| fail(1, format!("error: cannot write {}: {e}", a.out.display())))?;

    let bounds = frame_bounds(&built.frame, tol.tight, tol);
    let summary = if bounds.tight {
        format!(
            "N={} m={} A=B={:.9}\n",
            built.frame.len(),
            dims_label(&built.frame),
            0.5 * (bounds.lower + bounds.upper)
        )
    } else {
        format!(
            "N={} m={} A={:.9} B={:.9} tight=no\n",
            built.frame.len(),
            dims_label(&built.frame),
            bounds.lower,
            bounds.upper
        )
    };
    Ok(summary)
}

fn distance_histogram(table: &DistanceTable) -> BTreeMap<String, u64> {
    let mut values: Vec<f64> = table.pair_distances().map(|(_, _, d)| d).collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut hist: BTreeMap<String, u64> = BTreeMap::new();
    let mut rep = f64::NEG_INFINITY;
    for v in values {
        if v - rep > 1e-9 {
            rep = v;
        }
        *hist.entry(format_f64(rep)).or_insert(0) += 1;
    }
    hist
}

fn cmd_analyze(a: &AnalyzeArgs, echo: &str, tol: &Tolerances) -> Result<String, CliFailure> {
    let (frame, _meta, digest) = load_frame_file(&a.frame, tol)?;
    let bounds = frame_bounds(&frame, tol.tight, tol);
    if !bounds.is_frame {
        return Err(from_error(Error::NotAFrame {
            lower: bounds.lower,
        }));
    }
    let table = DistanceTable::compute(&frame, tol).map_err(from_error)?;
    let cert = certify_equidistance_tight(&frame, tol.tight, tol).map_err(from_error)?;

    if a.format == "csv" {
        let mut out = String::from("i,j,dc_squared\n");
        for (i, j, d) in table.pair_distances() {
            out.push_str(&format!("{i},{j},{}\n", format_f64(d)));
        }
        return Ok(out);
    }
    if a.format != "json" {
        return Err(fail(1, format!("error: unknown format '{}'", a.format)));
    }

    let n = frame.len();
    let matrix: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| Value::from(table.get(i, j))).collect()))
        .collect();
    let opt = |v: Option<f64>| v.map(Value::from).unwrap_or(Value::Null);
    let payload = json!({
        "ambient_dim": frame.ambient_dim() as u64,
        "num_subspaces": n as u64,
        "dimensions": frame.dims().iter().map(|&d| d as u64).collect::<Vec<_>>(),
        "bounds": {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "tight": bounds.tight,
            "is_frame": bounds.is_frame,
        },
        "distances_sq": matrix,
        "distance_histogram": distance_histogram(&table),
        "simplex_bound": opt(cert.simplex_bound),
        "gap": opt(cert.gap),
        "certificate": {
            "equi_dimensional": cert.equi_dimensional,
            "equi_distance": cert.equi_distance,
            "tight": cert.tight,
            "spread": cert.spread,
            "mean_distance_sq": opt(cert.mean_distance_sq),
            "simplex_bound": opt(cert.simplex_bound),
            "gap": opt(cert.gap),
            "positive": cert.positive,
        },
    });
    let inputs = json!({"frame": {"path": a.frame.display().to_string(), "sha256": digest}});
    Ok(report_document(echo, inputs, payload))
}

fn signal_from_args(
    sigma_x2: &Option<String>,
    rxx: &Option<PathBuf>,
    ambient: usize,
    tol: &Tolerances,
) -> Result<(SignalModel, Option<(String, String)>), CliFailure> {
    match (sigma_x2, rxx) {
        (Some(_), Some(_)) => Err(fail(1, "error: give either --sigma-x2 or --rxx, not both")),
        (None, None) => Err(fail(1, "error: one of --sigma-x2 or --rxx is required")),
        (Some(s), None) => {
            let v = parse_ratio(s)?;
            Ok((
                SignalModel::white(ambient, v).map_err(from_error)?,
                None,
            ))
        }
        (None, Some(path)) => {
            let (text, digest) = read_file(path)?;
            #[derive(serde::Deserialize)]
            struct RxxDoc {
                matrix: Vec<Vec<f64>>,
            }
            let doc: RxxDoc = serde_json::from_str(&text)
                .map_err(|e| fail(1, format!("error: bad covariance file: {e}")))?;
            let m = Matrix::from_rows(&doc.matrix).map_err(from_error)?;
            if m.rows() != ambient || m.cols() != ambient {
                return Err(fail(
                    1,
                    format!(
                        "error: covariance is {}x{} but the frame lives in dimension {ambient}",
                        m.rows(),
                        m.cols()
                    ),
                ));
            }
            let model = SignalModel::general(m, tol).map_err(from_error)?;
            Ok((model, Some((path.display().to_string(), digest))))
        }
    }
}

fn cmd_mse(a: &MseArgs, echo: &str, tol: &Tolerances) -> Result<String, CliFailure> {
    let (frame, _meta, digest) = load_frame_file(&a.frame, tol)?;
    let (signal, rxx_input) = signal_from_args(&a.sigma_x2, &a.rxx, frame.ambient_dim(), tol)?;
    let noise = NoiseModel::new(parse_ratio(&a.sigma_n2)?).map_err(from_error)?;
    let erased = match &a.erase {
        Some(list) => ErasurePattern::new(&parse_index_list(list)?, frame.len())
            .map_err(from_error)?,
        None => ErasurePattern::none(),
    };
    let report = mse_report(&frame, &signal, &noise, &erased, tol).map_err(from_error)?;

    let mut inputs = serde_json::Map::new();
    inputs.insert(
        "frame".into(),
        json!({"path": a.frame.display().to_string(), "sha256": digest}),
    );
    if let Some((path, rxx_digest)) = rxx_input {
        inputs.insert("rxx".into(), json!({"path": path, "sha256": rxx_digest}));
    }
    let payload = json!({
        "mse_no_erasure": report.mse_no_erasure,
        "extra_mse": report.extra_mse,
        "total_mse": report.total_mse,
        "lower_bound": report.lower_bound,
        "upper_bound": report.upper_bound,
        "alpha": report.alpha.map(Value::from).unwrap_or(Value::Null),
        "erased": erased.indices().iter().map(|&i| i as u64).collect::<Vec<_>>(),
        "sigma_n2": noise.variance(),
        "sigma_x2": signal.white_variance().map(Value::from).unwrap_or(Value::Null),
    });
    Ok(report_document(echo, Value::Object(inputs), payload))
}

fn cmd_optimal_dim(a: &OptimalDimArgs, echo: &str) -> Result<String, CliFailure> {
    let sx2 = parse_ratio(&a.sigma_x2)?;
    let sn2 = parse_ratio(&a.sigma_n2)?;
    let od = optimal_dimension(a.ambient, a.n_subspaces, sx2, sn2, a.m_max)
        .map_err(from_error)?;
    let table: Vec<Value> = od
        .table
        .iter()
        .map(|&(m, mse)| json!({"m": m as u64, "mse": mse}))
        .collect();
    let payload = json!({
        "m_min": od.m_min as u64,
        "m_star": od.m_star as u64,
        "endpoint_choice": od.endpoint_choice as u64,
        "endpoint_agrees": od.endpoint_agrees,
        "table": table,
    });
    Ok(report_document(echo, json!({}), payload))
}

fn cmd_simulate(a: &SimulateArgs, echo: &str, tol: &Tolerances) -> Result<String, CliFailure> {
    let (frame, _meta, digest) = load_frame_file(&a.frame, tol)?;
    let signal = SignalModel::white(frame.ambient_dim(), parse_ratio(&a.sigma_x2)?)
        .map_err(from_error)?;
    let noise = NoiseModel::new(parse_ratio(&a.sigma_n2)?).map_err(from_error)?;
    let erased = match &a.erase {
        Some(list) => ErasurePattern::new(&parse_index_list(list)?, frame.len())
            .map_err(from_error)?,
        None => ErasurePattern::none(),
    };
    let result = run_monte_carlo(&SimConfig {
        frame: &frame,
        signal: &signal,
        noise: &noise,
        erasures: &erased,
        trials: a.trials,
        seed: a.seed,
        threads: a.threads,
    })
    .map_err(from_error)?;
    let z = if result.stderr > 0.0 {
        (result.empirical_mse - result.analytic_mse) / result.stderr
    } else {
        0.0
    };
    let payload = json!({
        "empirical_mse": result.empirical_mse,
        "stderr": result.stderr,
        "analytic_mse": result.analytic_mse,
        "z_score": z,
        "trials": result.trials,
        "seed": a.seed,
        "erased": erased.indices().iter().map(|&i| i as u64).collect::<Vec<_>>(),
        "rng": result.rng,
    });
    let inputs = json!({"frame": {"path": a.frame.display().to_string(), "sha256": digest}});
    Ok(report_document(echo, inputs, payload))
}

/// The command echo for reports: argv without the binary name and without
/// the worker-count flag, so simulation reports stay thread-count-invariant.
fn command_echo(argv: &[String]) -> String {
    let mut parts: Vec<&str> = Vec::new();
    let mut skip_next = false;
    for arg in &argv[1..] {
        if skip_next {
            skip_next = false;
            continue;
        }
        if arg == "--threads" {
            skip_next = true;
            continue;
        }
        if arg.starts_with("--threads=") {
            continue;
        }
        parts.push(arg);
    }
    parts.join(" ")
}

/// Parse argv (including the binary name) and run the command, returning the
/// text for stdout.
pub fn run(argv: &[String]) -> Result<String, CliFailure> {
    let cli = Cli::try_parse_from(argv).map_err(|e| fail(1, e.to_string()))?;
    let tol = tolerances_from_env()?;
    let echo = command_echo(argv);
    match &cli.command {
        Cmd::Construct(a) => cmd_construct(a, &tol),
        Cmd::Analyze(a) => cmd_analyze(a, &echo, &tol),
        Cmd::Mse(a) => cmd_mse(a, &echo, &tol),
        Cmd::OptimalDim(a) => cmd_optimal_dim(a, &echo),
        Cmd::Simulate(a) => cmd_simulate(a, &echo, &tol),
    }
}
