//! Command-line entry point for the veto-protocol experiment harness.
//!
//! Exit codes: 0 success, 1 verification or execution failure, 2 invalid
//! input. Identical invocations with the same seed produce byte-identical
//! outputs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use qudit_veto::adversary::{AttackSpec, BasisStrategy, CancelPower};
use qudit_veto::protocol::Mode;

use qudit_veto_cli::experiment::{run_attack_experiment, run_protocol_experiment};
use qudit_veto_cli::report::{persist, table_report_to_csv, table_report_to_json};
use qudit_veto_cli::spec::{AttackSection, ExperimentKind, ExperimentSpec, OutputFormat, ProtocolSection};
use qudit_veto_cli::tables::{load_manifest, reproduce_table, BUILTIN_MANIFEST};
use qudit_veto_cli::verify::{verify_apparatus, verify_mub_dimension, CheckResult};

#[derive(Parser)]
#[command(
    name = "qudit-veto",
    about = "Single-qudit anonymous veto protocol: tables, protocol runs, attacks, verification",
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Master seed; all randomness derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo trials per setting.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: usize,
    /// Interferometric visibility in \[0,1\]; defaults to 0.94 for tables
    /// and 1.0 (ideal) elsewhere.
    #[arg(long, global = true)]
    visibility: Option<f64>,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify MUB families and their cycling generators.
    Mub {
        /// Dimension to verify, or "all" for every supported one.
        #[arg(long, default_value = "all")]
        dim: String,
        /// Also print the basis states.
        #[arg(long)]
        list: bool,
    },
    /// Execute a protocol experiment and persist its transcript.
    Run {
        #[arg(long, value_enum, default_value_t = ModeArg::Trusted)]
        mode: ModeArg,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        voters: usize,
        /// Comma-separated veto flags, e.g. "1,0,0".
        #[arg(long, default_value = "0,0,0")]
        votes: String,
        /// Untrusted mode: total runs to execute.
        #[arg(long)]
        runs: Option<usize>,
        /// Disclose the veto count instead of only its presence.
        #[arg(long)]
        disclose_count: bool,
        /// Untrusted mode: receiver announces uniform random outcomes.
        #[arg(long)]
        lying_receiver: bool,
        /// Untrusted mode: sender prepares states shifted by this amount.
        #[arg(long)]
        sender_shift: Option<usize>,
        /// Write the JSON-lines transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Reproduce the detector probability tables.
    Tables {
        /// Table number (1, 2, 3) or "all".
        #[arg(long, default_value = "all")]
        table: String,
        /// Override the builtin row manifest.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Simulate an attack and report detection/success statistics.
    Attack {
        #[arg(long, value_enum)]
        kind: AttackKindArg,
        /// Intercept link: 0 = before the first voter, N = after the last.
        #[arg(long, default_value_t = 1)]
        position: usize,
        /// Eavesdropper basis strategy: "uniform", "true", or a basis index.
        #[arg(long, default_value = "uniform")]
        eve_basis: String,
        /// Cancellation guess: "uniform" or a fixed count.
        #[arg(long, default_value = "uniform")]
        cancel_guess: String,
        #[arg(long, default_value_t = 0)]
        dishonest_party: usize,
        /// Honest veto flags for cancellation, e.g. "1,0"; default uniform counts.
        #[arg(long)]
        honest_vetoes: Option<String>,
        /// All-zero-trit check runs per trial for lying endpoints.
        #[arg(long, default_value_t = 1)]
        zero_runs: usize,
        /// Sender-lie preparation shift.
        #[arg(long, default_value_t = 1)]
        sender_shift: usize,
        /// Lift the single-veto hardware limitation.
        #[arg(long)]
        allow_multi_veto: bool,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        voters: usize,
    },
    /// Verify the wave-plate settings against the abstract algebra.
    Apparatus,
    /// Run an experiment described by a JSON config file.
    Exec {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ModeArg {
    Trusted,
    Untrusted,
    Qubit,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Trusted => Mode::Trusted,
            ModeArg::Untrusted => Mode::Untrusted,
            ModeArg::Qubit => Mode::QubitSimple,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum AttackKindArg {
    InterceptResend,
    VoterCancel,
    SenderLie,
    ReceiverLie,
}

fn parse_votes(text: &str) -> Result<Vec<bool>> {
    text.split(',')
        .map(|t| match t.trim() {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            other => Err(qudit_veto_cli::invalid_input(format!(
                "cannot parse vote {other:?} (use 1/0 or true/false)"
            ))),
        })
        .collect()
}

fn emit(content: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => persist(content, path),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn render_checks(results: &[CheckResult], format: FormatArg) -> Result<String> {
    match format {
        FormatArg::Json => {
            let mut text = serde_json::to_string_pretty(results)?;
            text.push('\n');
            Ok(text)
        }
        FormatArg::Csv => {
            let mut text = String::from("name,passed,detail\n");
            for r in results {
                text.push_str(&format!("{},{},{}\n", r.name, r.passed, r.detail));
            }
            Ok(text)
        }
    }
}

fn cmd_mub(global: &GlobalOpts, dim: &str, list: bool) -> Result<u8> {
    let dims: Vec<usize> = if dim == "all" {
        vec![2, 3, 4, 5, 7, 11, 13]
    } else {
        vec![dim.parse().context("parsing --dim")?]
    };
    let mut results = Vec::new();
    let mut listing = String::new();
    for &d in &dims {
        results.extend(verify_mub_dimension(d)?);
        if list {
            let family = qudit_veto::build_mub_family(d)?;
            for (j, basis) in family.bases().iter().enumerate() {
                for (l, state) in basis.states().iter().enumerate() {
                    let amps: Vec<String> = state
                        .amplitudes()
                        .iter()
                        .map(|a| format!("{:+.4}{:+.4}i", a.re, a.im))
                        .collect();
                    listing.push_str(&format!("d={d} basis={j} vector={l}: {}\n", amps.join(" ")));
                }
            }
        }
    }
    let mut content = render_checks(&results, global.format)?;
    if list {
        content.push_str(&listing);
    }
    emit(&content, global.out.as_ref())?;
    Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn cmd_apparatus(global: &GlobalOpts) -> Result<u8> {
    let results = verify_apparatus()?;
    let content = render_checks(&results, global.format)?;
    emit(&content, global.out.as_ref())?;
    Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn cmd_tables(global: &GlobalOpts, table: &str, manifest: Option<&PathBuf>) -> Result<u8> {
    let manifest_text = match manifest {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?,
        None => BUILTIN_MANIFEST.to_string(),
    };
    let rows = load_manifest(&manifest_text)?;
    let numbers: Vec<u8> = if table == "all" {
        vec![1, 2, 3]
    } else {
        vec![table.parse().context("parsing --table")?]
    };
    let mut content = String::new();
    for number in numbers {
        if !(1..=3).contains(&number) {
            return Err(qudit_veto_cli::invalid_input("table must be 1, 2, or 3"));
        }
        let mut spec = ExperimentSpec::table(number);
        spec.trials = global.trials;
        spec.master_seed = global.seed;
        if let Some(v) = global.visibility {
            spec.visibility = v;
        }
        let report = reproduce_table(&spec, &rows)?;
        match global.format {
            FormatArg::Csv => content.push_str(&table_report_to_csv(&report)),
            FormatArg::Json => content.push_str(&table_report_to_json(&report)?),
        }
    }
    emit(&content, global.out.as_ref())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    global: &GlobalOpts,
    mode: ModeArg,
    dim: usize,
    voters: usize,
    votes: &str,
    runs: Option<usize>,
    disclose_count: bool,
    lying_receiver: bool,
    sender_shift: Option<usize>,
    transcript_path: Option<&PathBuf>,
) -> Result<u8> {
    let votes = parse_votes(votes)?;
    let mode: Mode = mode.into();
    let dim = if mode == Mode::QubitSimple { 2 } else { dim };
    let spec = ExperimentSpec {
        kind: ExperimentKind::Protocol,
        dim,
        n_voters: voters,
        visibility: global.visibility.unwrap_or(1.0),
        background: 0.0,
        trials: global.trials,
        master_seed: global.seed,
        format: global.format.into(),
        out: global.out.clone(),
        protocol: Some(ProtocolSection {
            mode,
            votes,
            runs,
            disclose_count,
            lying_receiver,
            sender_shift,
        }),
        attack: None,
    };
    let (report, transcript) = run_protocol_experiment(&spec)?;
    if let Some(path) = transcript_path {
        persist(&transcript.to_jsonl()?, path)?;
    }
    let mut content = serde_json::to_string_pretty(&report)?;
    content.push('\n');
    emit(&content, global.out.as_ref())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_attack(
    global: &GlobalOpts,
    kind: AttackKindArg,
    position: usize,
    eve_basis: &str,
    cancel_guess: &str,
    dishonest_party: usize,
    honest_vetoes: Option<&String>,
    zero_runs: usize,
    sender_shift: usize,
    allow_multi_veto: bool,
    dim: usize,
    voters: usize,
) -> Result<u8> {
    let attack_spec = match kind {
        AttackKindArg::InterceptResend => AttackSpec::InterceptResend {
            position,
            basis_strategy: match eve_basis {
                "uniform" => BasisStrategy::UniformRandom,
                "true" => BasisStrategy::TrueBasis,
                idx => BasisStrategy::Fixed(idx.parse().context("parsing --eve-basis")?),
            },
        },
        AttackKindArg::VoterCancel => AttackSpec::VoterCancel {
            dishonest_party,
            cancel_power: match cancel_guess {
                "uniform" => CancelPower::UniformRandom,
                t => CancelPower::Fixed(t.parse().context("parsing --cancel-guess")?),
            },
        },
        AttackKindArg::SenderLie => AttackSpec::SenderLie { shift: sender_shift },
        AttackKindArg::ReceiverLie => AttackSpec::ReceiverLie,
    };
    let spec = ExperimentSpec {
        kind: ExperimentKind::Attack,
        dim,
        n_voters: voters,
        visibility: global.visibility.unwrap_or(1.0),
        background: 0.0,
        trials: global.trials,
        master_seed: global.seed,
        format: global.format.into(),
        out: global.out.clone(),
        protocol: None,
        attack: Some(AttackSection {
            spec: attack_spec,
            honest_vetoes: honest_vetoes.map(|t| parse_votes(t)).transpose()?,
            zero_runs,
            disable_single_veto_limit: allow_multi_veto,
        }),
    };
    let report = run_attack_experiment(&spec)?;
    let content = match global.format {
        FormatArg::Json => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            text
        }
        FormatArg::Csv => {
            let spec_echo = serde_json::to_string(&report.spec)?;
            format!(
                "trials,detection_probability,detection_std_error,attack_success_probability,attack_success_std_error,leakage_bits,leakage_std_error,master_seed,spec\n\
                 {},{},{},{},{},{},{},{},\"{}\"\n",
                report.trials,
                report.detection_probability,
                report.detection_std_error,
                report.attack_success_probability,
                report.attack_success_std_error,
                report.leakage_bits.map_or(String::new(), |v| v.to_string()),
                report.leakage_std_error.map_or(String::new(), |v| v.to_string()),
                report.master_seed,
                spec_echo.replace('"', "\"\""),
            )
        }
    };
    emit(&content, global.out.as_ref())?;
    Ok(0)
}

fn cmd_exec(global: &GlobalOpts, config: &PathBuf) -> Result<u8> {
    let text = std::fs::read_to_string(config)
        .with_context(|| format!("reading config {}", config.display()))?;
    let mut spec = ExperimentSpec::from_json(&text)?;
    if spec.out.is_none() {
        spec.out = global.out.clone();
    }
    match spec.kind {
        ExperimentKind::Table1 | ExperimentKind::Table2 | ExperimentKind::Table3 => {
            let rows = load_manifest(BUILTIN_MANIFEST)?;
            let report = reproduce_table(&spec, &rows)?;
            let content = match spec.format {
                OutputFormat::Csv => table_report_to_csv(&report),
                OutputFormat::Json => table_report_to_json(&report)?,
            };
            emit(&content, spec.out.as_ref())?;
        }
        ExperimentKind::Protocol => {
            let (report, _) = run_protocol_experiment(&spec)?;
            let mut content = serde_json::to_string_pretty(&report)?;
            content.push('\n');
            emit(&content, spec.out.as_ref())?;
        }
        ExperimentKind::Attack => {
            let report = run_attack_experiment(&spec)?;
            let mut content = serde_json::to_string_pretty(&report)?;
            content.push('\n');
            emit(&content, spec.out.as_ref())?;
        }
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Mub { dim, list } => cmd_mub(&cli.global, dim, *list),
        Command::Apparatus => cmd_apparatus(&cli.global),
        Command::Tables { table, manifest } => cmd_tables(&cli.global, table, manifest.as_ref()),
        Command::Run {
            mode,
            dim,
            voters,
            votes,
            runs,
            disclose_count,
            lying_receiver,
            sender_shift,
            transcript,
        } => cmd_run(
            &cli.global,
            *mode,
            *dim,
            *voters,
            votes,
            *runs,
            *disclose_count,
            *lying_receiver,
            *sender_shift,
            transcript.as_ref(),
        ),
        Command::Attack {
            kind,
            position,
            eve_basis,
            cancel_guess,
            dishonest_party,
            honest_vetoes,
            zero_runs,
            sender_shift,
            allow_multi_veto,
            dim,
            voters,
        } => cmd_attack(
            &cli.global,
            *kind,
            *position,
            eve_basis,
            cancel_guess,
            *dishonest_party,
            honest_vetoes.as_ref(),
            *zero_runs,
            *sender_shift,
            *allow_multi_veto,
            *dim,
            *voters,
        ),
        Command::Exec { config } => cmd_exec(&cli.global, config),
    }
}

/// Input-shaped failures exit 2; execution and verification failures exit 1.
fn classify_error(err: &anyhow::Error) -> u8 {
    use qudit_veto::Error as CoreError;
    if err.downcast_ref::<qudit_veto_cli::InvalidInputError>().is_some() {
        return 2;
    }
    if let Some(core) = err.downcast_ref::<CoreError>() {
        return match core {
            CoreError::InvalidInput(_)
            | CoreError::UnsupportedDimension { .. }
            | CoreError::DimensionMismatch { .. }
            | CoreError::InvalidValue(_) => 2,
            _ => 1,
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some()
        || err.downcast_ref::<std::num::ParseIntError>().is_some()
        || err.downcast_ref::<std::num::ParseFloatError>().is_some()
    {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify_error(&err))
        }
    }
}
