//! Command-line front end: catalog browsing, channel analysis, operator
//! printing, protocol simulation, and invariant verification.
//!
//! Exit codes: 0 success, 1 parse error, 2 validation error, 3 verification
//! failure, 4 internal error.

mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use teleport4::channel::{
    catalog, parse_channel, random_channel, CatalogName, Channel, ChannelError,
};
use teleport4::protocol::{
    oracle_equivalence_defect, reconstruction_defect, run_deterministic, run_sampled, InputState,
    ProtocolError,
};
use teleport4::qmath::{c64, Complex64, QmathError};
use teleport4::transform::{
    analyze_with_tolerance, classify, completeness_defect, extract_all, extract_sigma,
    verify_pauli_relation, DEFAULT_TOLERANCE,
};
use teleport4::BellIndex;

use report::VerifyCheck;

/// Environment variable overriding the default classification tolerance.
const TOLERANCE_ENV: &str = "TELEPORT4_TOL";

#[derive(Parser)]
#[command(
    name = "teleport4",
    version,
    about = "Classify four-qubit teleportation channels and simulate the protocol",
    after_help = "Channels are builtin names (see `teleport4 catalog`) or `@path` files.\n\
                  Set TELEPORT4_TOL to override the classification tolerance."
)]
struct Cli {
    /// Emit a machine-readable JSON report
    #[arg(long, global = true)]
    json: bool,
    /// Rescale file channels to unit norm instead of rejecting them
    #[arg(long, global = true)]
    normalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the builtin channels
    Catalog,
    /// Classify a channel and report its diagnostics
    Analyze {
        /// Builtin name or @file
        channel: String,
    },
    /// Print transformation operators, 12 significant digits
    Operators {
        /// Builtin name or @file
        channel: String,
        /// Print all sixteen operators instead of sigma(1,1)
        #[arg(long)]
        all: bool,
    },
    /// Simulate teleportation of a two-qubit state over a channel
    Teleport {
        /// Builtin name or @file
        channel: String,
        /// Input amplitudes as re,im pairs (8 reals), or random:SEED
        #[arg(long)]
        state: String,
        /// Enumerate all sixteen measurement branches deterministically
        #[arg(long)]
        enumerate: bool,
        /// Monte Carlo trials (ignored with --enumerate)
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Monte Carlo seed (ignored with --enumerate)
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the invariant checks on a channel or on random:N seeded channels
    Verify {
        /// Builtin name, @file, or random:N
        target: String,
    },
}

enum CliError {
    Parse(String),
    Validation(String),
    /// Verification failure; carries the full report to print before exit.
    Verification(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<ChannelError> for CliError {
    fn from(err: ChannelError) -> Self {
        match err {
            ChannelError::UnknownName(_)
            | ChannelError::Malformed { .. }
            | ChannelError::DuplicateBasis { .. }
            | ChannelError::WrongCount { .. } => CliError::Parse(err.to_string()),
            ChannelError::BadParameter(_)
            | ChannelError::NotNormalized { .. }
            | ChannelError::ZeroNorm
            | ChannelError::WrongLabels => CliError::Validation(err.to_string()),
        }
    }
}

impl From<QmathError> for CliError {
    fn from(err: QmathError) -> Self {
        CliError::Internal(err.to_string())
    }
}

impl From<ProtocolError> for CliError {
    fn from(err: ProtocolError) -> Self {
        match err {
            ProtocolError::NotNormalized { .. } | ProtocolError::ZeroNorm => {
                CliError::Validation(err.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = err.code();
            match err {
                CliError::Verification(report) => print!("{report}"),
                CliError::Parse(msg)
                | CliError::Validation(msg)
                | CliError::Internal(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn classification_tolerance() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(DEFAULT_TOLERANCE),
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| {
                CliError::Validation(format!("{TOLERANCE_ENV}=`{raw}` is not a positive real"))
            }),
    }
}

fn resolve_channel(reference: &str, normalize: bool) -> Result<Channel, CliError> {
    if let Some(path) = reference.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|err| CliError::Parse(format!("cannot read `{path}`: {err}")))?;
        let channel = parse_channel(&text, normalize)?;
        Ok(channel.with_name(format!("@{path}")))
    } else {
        let name: CatalogName = reference.parse()?;
        Ok(catalog(&name)?)
    }
}

fn resolve_state(reference: &str) -> Result<InputState, CliError> {
    if let Some(seed) = reference.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::Parse(format!("random state seed `{seed}` is not an integer")))?;
        return Ok(InputState::random(seed));
    }
    let fields: Vec<f64> = reference
        .split(',')
        .map(|field| {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("state component `{field}` is not a real")))
        })
        .collect::<Result<_, _>>()?;
    if fields.len() != 8 {
        return Err(CliError::Parse(format!(
            "expected 8 comma-separated reals (4 re,im pairs), found {}",
            fields.len()
        )));
    }
    let amps: [Complex64; 4] = [
        c64(fields[0], fields[1]),
        c64(fields[2], fields[3]),
        c64(fields[4], fields[5]),
        c64(fields[6], fields[7]),
    ];
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::Parse("state components must be finite".into()));
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(CliError::Validation(format!(
            "state norm {norm} is not 1 (tolerance 1e-6)"
        )));
    }
    Ok(InputState::normalizing(amps)?)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let echo = command_echo();
    match &cli.command {
        Command::Catalog => {
            if cli.json {
                Ok(to_json(&report::catalog_json(echo)))
            } else {
                Ok(report::catalog_text())
            }
        }
        Command::Analyze { channel } => {
            let channel = resolve_channel(channel, cli.normalize)?;
            let analysis = analyze_with_tolerance(&channel, classification_tolerance()?)?;
            if cli.json {
                Ok(to_json(&report::analyze_json(echo, &channel, &analysis)))
            } else {
                Ok(report::analyze_text(&channel, &analysis))
            }
        }
        Command::Operators { channel, all } => {
            let channel = resolve_channel(channel, cli.normalize)?;
            let one = BellIndex::ALL[0];
            let sigma11 = extract_sigma(&channel, one, one).matrix;
            let ops: Option<Vec<(u8, u8, teleport4::qmath::Matrix)>> = all.then(|| {
                extract_all(&channel)
                    .into_iter()
                    .map(|op| (op.i.value(), op.j.value(), op.matrix))
                    .collect()
            });
            if cli.json {
                Ok(to_json(&report::operators_json(
                    echo,
                    &channel,
                    &sigma11,
                    ops.as_deref(),
                )))
            } else {
                Ok(report::operators_text(&channel, &sigma11, ops.as_deref()))
            }
        }
        Command::Teleport {
            channel,
            state,
            enumerate,
            trials,
            seed,
        } => {
            let channel = resolve_channel(channel, cli.normalize)?;
            let chi = resolve_state(state)?;
            let classification = classify(&channel, classification_tolerance()?)?;
            if *enumerate {
                let records = run_deterministic(&chi, &channel)?;
                if cli.json {
                    Ok(to_json(&report::teleport_enumerate_json(
                        echo,
                        &channel,
                        chi.amps(),
                        classification.verdict,
                        classification.success_probability,
                        &records,
                    )))
                } else {
                    Ok(report::teleport_enumerate_text(
                        &channel,
                        chi.amps(),
                        classification.verdict,
                        classification.success_probability,
                        &records,
                    ))
                }
            } else {
                if *trials == 0 {
                    return Err(CliError::Validation("at least one trial required".into()));
                }
                let stats = run_sampled(&chi, &channel, *seed, *trials)?;
                if cli.json {
                    Ok(to_json(&report::teleport_stats_json(
                        echo,
                        &channel,
                        chi.amps(),
                        classification.verdict,
                        classification.success_probability,
                        &stats,
                    )))
                } else {
                    Ok(report::teleport_stats_text(
                        &channel,
                        chi.amps(),
                        classification.verdict,
                        classification.success_probability,
                        &stats,
                    ))
                }
            }
        }
        Command::Verify { target } => cmd_verify(cli, target, echo),
    }
}

/// Runs completeness, Pauli-relation, reconstruction, and oracle-equivalence
/// checks over one channel or a batch of seeded random ones.
fn cmd_verify(cli: &Cli, target: &str, echo: String) -> Result<String, CliError> {
    let channels: Vec<Channel> = if let Some(count) = target.strip_prefix("random:") {
        let count: usize = count
            .parse()
            .map_err(|_| CliError::Parse(format!("random channel count `{count}` is invalid")))?;
        if count == 0 {
            return Err(CliError::Validation("need at least one random channel".into()));
        }
        (0..count as u64).map(random_channel).collect()
    } else {
        vec![resolve_channel(target, cli.normalize)?]
    };

    let mut completeness = 0.0f64;
    let mut pauli = 0.0f64;
    let mut reconstruction = 0.0f64;
    let mut oracle = 0.0f64;
    for (slot, channel) in channels.iter().enumerate() {
        completeness = completeness.max(completeness_defect(channel));
        pauli = pauli.max(verify_pauli_relation(channel));
        // A few seeded inputs per channel exercise the state-dependent checks.
        for offset in 0..3u64 {
            let chi = InputState::random(slot as u64 * 17 + offset);
            reconstruction = reconstruction.max(reconstruction_defect(&chi, channel));
            oracle = oracle.max(oracle_equivalence_defect(&chi, channel));
        }
    }
    let checks = [
        VerifyCheck {
            name: "completeness",
            defect: completeness,
            tolerance: 1e-9,
        },
        VerifyCheck {
            name: "pauli relation",
            defect: pauli,
            tolerance: 1e-10,
        },
        VerifyCheck {
            name: "reconstruction",
            defect: reconstruction,
            tolerance: 1e-10,
        },
        VerifyCheck {
            name: "oracle equivalence",
            defect: oracle,
            tolerance: 1e-10,
        },
    ];
    let output = if cli.json {
        to_json(&report::verify_json(
            echo,
            target.to_string(),
            channels.len(),
            &checks,
        ))
    } else {
        report::verify_text(target, channels.len(), &checks)
    };
    if checks.iter().all(VerifyCheck::passed) {
        Ok(output)
    } else {
        Err(CliError::Verification(output))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}
