//! `mirrorstate` command line: one binary, several subcommands, a shared
//! state-file format and a single `--seed`.

mod bundle;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

pub use bundle::{bundle_files, write_bundle, BundleFile};

use crate::decoherence::{critical_gamma, negativity_table, DephasingParams, DEFAULT_NEGATIVITY_TOL};
use crate::metrics::{
    max_bipartite_entropy, negativity, numerical_rank, qecc_alpha, subset_entropy, DEFAULT_RANK_TOL,
};
use crate::protocols::{
    qis_feasibility, qis_split, superdense_send, teleport, PartyLayout,
};
use crate::qcore::{partial_trace_pure, MeasureMode, QubitSet, StateVector};
use crate::states::{build, Family, Method};
use crate::Error;

/// Default `--seed`.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Mirror,
    BellRearranged,
    Cluster,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Mirror => Family::Mirror,
            FamilyArg::BellRearranged => Family::BellRearranged,
            FamilyArg::Cluster => Family::Cluster,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Direct,
    Circuit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Enumerate,
    Sample,
}

#[derive(Debug, Parser)]
#[command(name = "mirrorstate", version, about = "Mirror-state construction, protocols and entanglement diagnostics")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (directory for reproduce-paper); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
struct StateSource {
    /// State file in the shared JSON format.
    #[arg(long, conflicts_with = "family")]
    state: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Half-size N (qubit count for cluster states).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
    method: MethodArg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Construct a state and print it in the shared JSON format.
    Build {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Direct)]
        method: MethodArg,
    },
    /// Entanglement diagnostics of a pure state.
    Analyze {
        #[command(flatten)]
        source: StateSource,
        /// Entropy of the first k qubits and the best k-subset.
        #[arg(long)]
        entropy: Vec<usize>,
        /// Negativity across a split, e.g. 1,4.
        #[arg(long)]
        negativity: Vec<String>,
        /// Alpha matrix over Pauli words on these qubits.
        #[arg(long)]
        qecc: Vec<String>,
        /// Rank of the reduced state of a qubit pair.
        #[arg(long)]
        rank: Vec<String>,
    },
    /// Teleport an N-qubit state through the 2N-qubit mirror state.
    Teleport {
        #[arg(long)]
        n: usize,
        /// Input state file.
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Seed of a random input state.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Enumerate)]
        mode: ModeArg,
    },
    /// Superdense coding of 2N bits.
    Sdc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        message: String,
    },
    /// Split a two-qubit secret over a six-qubit channel.
    Qis {
        #[arg(long, value_enum, default_value_t = FamilyArg::Mirror)]
        channel: FamilyArg,
        /// Alice/Bob/Charlie channel qubits.
        #[arg(long, default_value = "1,2,3/4/5,6")]
        layout: String,
        /// Secret state file; random from --seed when omitted.
        #[arg(long)]
        secret: Option<PathBuf>,
    },
    /// Negativity table of a dephased four-qubit state (CSV by default).
    Decohere {
        #[arg(long, value_enum, default_value_t = FamilyArg::Mirror)]
        state: FamilyArg,
        #[arg(long, default_value = "1,1,1,1")]
        gamma: String,
        #[arg(long, default_value = "0,0,0,0")]
        phi: String,
    },
    /// Smallest uniform dephasing strength with negativity across a split.
    CriticalGamma {
        #[arg(long, value_enum, default_value_t = FamilyArg::Mirror)]
        state: FamilyArg,
        #[arg(long, default_value = "1,4")]
        split: String,
        #[arg(long, default_value_t = DEFAULT_NEGATIVITY_TOL)]
        tol: f64,
    },
    /// Write the full deterministic report bundle.
    ReproducePaper,
}

/// Echo of the resolved configuration.
#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub seed: u64,
    pub out: Option<String>,
    pub format: Format,
    pub arguments: serde_json::Value,
}

/// Metadata plus payload. Payload bytes depend only on the configuration.
#[derive(Debug, Serialize)]
pub struct ReportBundle<T: Serialize> {
    pub metadata: serde_json::Value,
    pub payload: T,
}

enum CliError {
    Usage(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch { .. }
            | Error::DuplicateQubit(_)
            | Error::QubitOutOfRange { .. }
            | Error::EmptyQubitSet
            | Error::TooManyQubits { .. }
            | Error::NotNormalized(_)
            | Error::IndexOutOfRange { .. }
            | Error::Unsupported(_)
            | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line; `args[0]` is the program name. Returns the exit
/// code: 0 on success, 2 on usage errors, 1 on internal failures.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            1
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| CliError::Usage(format!("bad {what} entry '{s}'"))))
        .collect()
}

fn read_state(path: &Path) -> CliResult<StateVector> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    StateVector::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Direct => Method::Direct,
        MethodArg::Circuit => Method::Circuit,
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn pretty<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value).map_err(Error::from)? + "\n")
}

#[derive(Serialize)]
struct AmplitudeRow {
    index: usize,
    ket: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct MetricRecord {
    metric: String,
    input: String,
    value: f64,
    subset: Option<QubitSet>,
}

fn execute(cli: Cli) -> CliResult<()> {
    let out = cli.out.as_deref();
    let seed = cli.seed;
    match cli.command {
        Command::Build { family, n, method: m } => {
            let state = build(family.into(), n, method(m))?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => emit(out, &(state.to_json()? + "\n")),
                Format::Csv => {
                    let nq = state.num_qubits();
                    let rows: Vec<AmplitudeRow> = state
                        .amplitudes()
                        .iter()
                        .enumerate()
                        .map(|(i, a)| AmplitudeRow { index: i, ket: format!("{i:0nq$b}"), re: a.re, im: a.im })
                        .collect();
                    emit(out, &to_csv(&rows)?)
                }
            }
        }
        Command::Analyze { source, entropy, negativity: splits, qecc, rank } => {
            let state = match (&source.state, source.family, source.n) {
                (Some(p), _, _) => read_state(p)?,
                (None, Some(f), Some(n)) => build(f.into(), n, method(source.method))?,
                _ => return Err(CliError::Usage("analyze needs --state FILE or --family F --n N".into())),
            };
            let nq = state.num_qubits();
            let mut records = Vec::new();
            let ks = if entropy.is_empty() && splits.is_empty() && qecc.is_empty() && rank.is_empty() {
                (1..nq).collect()
            } else {
                entropy
            };
            for k in ks {
                let first = QubitSet::range(1, k);
                records.push(MetricRecord {
                    metric: "entropy_first_k_bits".into(),
                    input: k.to_string(),
                    value: subset_entropy(&state, &first)?,
                    subset: Some(first),
                });
                let (v, s) = max_bipartite_entropy(&state, k)?;
                records.push(MetricRecord { metric: "max_bipartite_entropy_bits".into(), input: k.to_string(), value: v, subset: Some(s) });
            }
            for text in splits {
                let split = QubitSet::parse(&text)?;
                let r = negativity(&state.to_density(), &split)?;
                records.push(MetricRecord { metric: "negativity".into(), input: text, value: r.value, subset: Some(split) });
            }
            for text in qecc {
                let qubits = QubitSet::parse(&text)?;
                let a = qecc_alpha(&state, &qubits)?;
                records.push(MetricRecord {
                    metric: "qecc_alpha_identity_deviation".into(),
                    input: text,
                    value: a.identity_deviation(),
                    subset: Some(qubits),
                });
            }
            for text in rank {
                let pair = QubitSet::parse(&text)?;
                let r = numerical_rank(&partial_trace_pure(&state, &pair)?, DEFAULT_RANK_TOL)?;
                records.push(MetricRecord { metric: "numerical_rank".into(), input: text, value: r as f64, subset: Some(pair) });
            }
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => emit(out, &pretty(&records)?),
                Format::Csv => {
                    let flat: Vec<_> = records
                        .iter()
                        .map(|r| (&r.metric, &r.input, r.value, r.subset.as_ref().map(|q| q.to_string())))
                        .collect();
                    emit(out, &("metric,input,value,subset\n".to_string() + &to_csv(&flat)?))
                }
            }
        }
        Command::Teleport { n, input, random, mode } => {
            let state = match (&input, random) {
                (Some(p), _) => read_state(p)?,
                (None, r) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(r.unwrap_or(seed));
                    StateVector::random(n, &mut rng)?
                }
            };
            let mode = match mode {
                ModeArg::Enumerate => MeasureMode::Enumerate,
                ModeArg::Sample => MeasureMode::Sample(seed),
            };
            let run = teleport(&state, n, mode)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut text = run.transcript.to_json_lines()?;
                    let summary = json!({ "summary": {
                        "protocol": "teleport",
                        "n": n,
                        "branches": run.branches.len(),
                        "min_fidelity": run.min_fidelity(),
                        "max_probability_deviation": run.max_probability_deviation(),
                    }});
                    text.push_str(&(serde_json::to_string(&summary).map_err(Error::from)? + "\n"));
                    emit(out, &text)
                }
                Format::Csv => emit(out, &to_csv(&run.branches)?),
            }
        }
        Command::Sdc { n, message } => {
            let run = superdense_send(&message, n)?;
            let mut text = run.transcript.to_json_lines()?;
            let summary = json!({ "summary": {
                "protocol": "superdense",
                "n": n,
                "message": run.message,
                "decoded": run.decoded,
                "qubits_sent": run.transcript.qubits_sent(0),
            }});
            text.push_str(&(serde_json::to_string(&summary).map_err(Error::from)? + "\n"));
            emit(out, &text)
        }
        Command::Qis { channel, layout, secret } => {
            let channel_state = build(channel.into(), 3, Method::Direct)?;
            let layout = PartyLayout::parse(&layout, channel_state.num_qubits())?;
            let secret = match secret {
                Some(p) => read_state(&p)?,
                None => StateVector::random(2, &mut ChaCha8Rng::seed_from_u64(seed))?,
            };
            let feasibility = qis_feasibility(&channel_state, &layout, secret.num_qubits())?;
            let (mut text, summary) = match qis_split(&secret, &channel_state, &layout) {
                Ok(run) => (
                    run.transcript.to_json_lines()?,
                    json!({
                        "protocol": "qis",
                        "layout": run.layout,
                        "success": true,
                        "bob_required": run.bob_required,
                        "max_single_party_purity_after_alice": run.max_single_party_purity,
                        "branches": run.branches.len(),
                        "min_fidelity": run.min_fidelity(),
                        "feasibility_bits": feasibility,
                    }),
                ),
                Err(Error::Construction(reason)) => (
                    String::new(),
                    json!({
                        "protocol": "qis",
                        "layout": layout.to_string(),
                        "success": false,
                        "reason": reason,
                        "feasibility_bits": feasibility,
                    }),
                ),
                Err(e) => return Err(e.into()),
            };
            text.push_str(&(serde_json::to_string(&json!({ "summary": summary })).map_err(Error::from)? + "\n"));
            emit(out, &text)
        }
        Command::Decohere { state, gamma, phi } => {
            let family: Family = state.into();
            let psi = build(family, 2, Method::Direct)?;
            let params = DephasingParams::new(parse_list(&gamma, "gamma")?, parse_list(&phi, "phi")?)?;
            let table = negativity_table(&psi, &params)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => emit(out, &table.to_csv()?),
                Format::Json => emit(out, &pretty(&table)?),
            }
        }
        Command::CriticalGamma { state, split, tol } => {
            let psi = build(state.into(), 2, Method::Direct)?;
            let split = QubitSet::parse(&split)?;
            let r = critical_gamma(&psi, &split, tol)?;
            emit(out, &pretty(&r)?)
        }
        Command::ReproducePaper => {
            let dir = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("bundle"));
            let config = RunConfig {
                subcommand: "reproduce-paper".into(),
                seed,
                out: Some(dir.display().to_string()),
                format: Format::Json,
                arguments: json!({}),
            };
            let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let metadata = json!({
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "timestamp_unix": timestamp,
            });
            let files = write_bundle(&dir, seed, metadata).map_err(|e| match e {
                Error::Io(io) => CliError::Usage(format!("cannot write bundle to {}: {io}", dir.display())),
                other => other.into(),
            })?;
            eprintln!("wrote {} payload files and manifest.json to {}", files.len(), dir.display());
            Ok(())
        }
    }
}
