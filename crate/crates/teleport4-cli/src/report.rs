//! Text and JSON rendering. Text output uses signed fixed-point with 12
//! decimals (exact zeros render as `+0.000000000000`) so that reports diff
//! cleanly; JSON carries full-precision numbers under stable keys.

use serde::Serialize;
use std::fmt::Write as _;

use teleport4::protocol::{CorrectionOutcome, OutcomeRecord, RunStats};
use teleport4::qmath::{Complex64, Matrix};
use teleport4::transform::{AnalysisReport, Verdict};
use teleport4::Channel;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Signed fixed-point with 12 decimals; anything rounding to zero prints
/// as `+0.000000000000`.
pub fn fixed(value: f64) -> String {
    if value.abs() < 0.5e-12 {
        "+0.000000000000".to_string()
    } else {
        format!("{value:+.12}")
    }
}

pub fn sci(value: f64) -> String {
    format!("{value:.3e}")
}

pub fn complex(z: Complex64) -> String {
    format!("{}{}i", fixed(z.re), fixed(z.im))
}

pub fn matrix_block(m: &Matrix, out: &mut String) {
    for i in 0..m.rows() {
        out.push_str("  [");
        for j in 0..m.cols() {
            out.push(' ');
            out.push_str(&complex(m.get(i, j)));
        }
        out.push_str(" ]\n");
    }
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn matrix_json(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| pair(&m.get(i, j))).collect())
        .collect()
}

fn amps_json(amps: &[Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(pair).collect()
}

#[derive(Serialize)]
pub struct ChannelEcho {
    pub name: String,
    pub amplitudes: Vec<[f64; 2]>,
}

impl ChannelEcho {
    pub fn from_channel(channel: &Channel) -> Self {
        Self {
            name: channel.name().unwrap_or("custom").to_string(),
            amplitudes: amps_json(channel.amps()),
        }
    }
}

#[derive(Serialize)]
pub struct DefectsJson {
    pub completeness: f64,
    pub pauli_relation: f64,
}

#[derive(Serialize)]
pub struct AnalyzeJson {
    pub version: &'static str,
    pub command: String,
    pub channel: ChannelEcho,
    pub verdict: String,
    pub success_probability: f64,
    pub det_magnitude: f64,
    pub singular_values: [f64; 4],
    pub borderline: bool,
    pub sigma11: Vec<Vec<[f64; 2]>>,
    pub defects: DefectsJson,
}

pub fn analyze_json(command: String, channel: &Channel, report: &AnalysisReport) -> AnalyzeJson {
    AnalyzeJson {
        version: VERSION,
        command,
        channel: ChannelEcho::from_channel(channel),
        verdict: report.classification.verdict.to_string(),
        success_probability: report.classification.success_probability,
        det_magnitude: report.classification.det_magnitude,
        singular_values: report.classification.singular_values,
        borderline: report.classification.borderline,
        sigma11: matrix_json(&report.sigma11),
        defects: DefectsJson {
            completeness: report.completeness_defect,
            pauli_relation: report.pauli_relation_defect,
        },
    }
}

pub fn analyze_text(channel: &Channel, report: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", channel.name().unwrap_or("custom"));
    let _ = writeln!(out, "verdict: {}", report.classification.verdict);
    let _ = writeln!(
        out,
        "success probability: {}",
        fixed(report.classification.success_probability)
    );
    if report.classification.borderline {
        out.push_str("note: spectrum sits exactly on the classification boundary\n");
    }
    let _ = writeln!(
        out,
        "|det sigma11|: {}",
        fixed(report.classification.det_magnitude)
    );
    let values = report
        .classification
        .singular_values
        .iter()
        .map(|&v| fixed(v))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, "singular values: {values}");
    out.push_str("sigma11:\n");
    matrix_block(&report.sigma11, &mut out);
    let _ = writeln!(
        out,
        "completeness defect: {}",
        sci(report.completeness_defect)
    );
    let _ = writeln!(
        out,
        "pauli relation defect: {}",
        sci(report.pauli_relation_defect)
    );
    out
}

#[derive(Serialize)]
pub struct OperatorJson {
    pub i: u8,
    pub j: u8,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
pub struct OperatorsJson {
    pub version: &'static str,
    pub command: String,
    pub channel: ChannelEcho,
    pub sigma11: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operators: Option<Vec<OperatorJson>>,
}

pub fn operators_json(
    command: String,
    channel: &Channel,
    sigma11: &Matrix,
    all: Option<&[(u8, u8, Matrix)]>,
) -> OperatorsJson {
    OperatorsJson {
        version: VERSION,
        command,
        channel: ChannelEcho::from_channel(channel),
        sigma11: matrix_json(sigma11),
        operators: all.map(|ops| {
            ops.iter()
                .map(|(i, j, m)| OperatorJson {
                    i: *i,
                    j: *j,
                    matrix: matrix_json(m),
                })
                .collect()
        }),
    }
}

pub fn operators_text(
    channel: &Channel,
    sigma11: &Matrix,
    all: Option<&[(u8, u8, Matrix)]>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", channel.name().unwrap_or("custom"));
    match all {
        None => {
            out.push_str("sigma(1,1):\n");
            matrix_block(sigma11, &mut out);
        }
        Some(ops) => {
            for (i, j, m) in ops {
                let _ = writeln!(out, "sigma({i},{j}):");
                matrix_block(m, &mut out);
            }
        }
    }
    out
}

#[derive(Serialize)]
pub struct OutcomeJson {
    pub i: u8,
    pub j: u8,
    pub probability: f64,
    pub bob_state_raw: Vec<[f64; 2]>,
    pub correction: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected: Option<Vec<[f64; 2]>>,
    pub fidelity: f64,
    pub filter_success_probability: f64,
}

#[derive(Serialize)]
pub struct TeleportEnumerateJson {
    pub version: &'static str,
    pub command: String,
    pub channel: ChannelEcho,
    pub state: Vec<[f64; 2]>,
    pub verdict: String,
    pub success_probability: f64,
    pub outcomes: Vec<OutcomeJson>,
}

fn correction_label(record: &OutcomeRecord, verdict: Verdict) -> &'static str {
    match (&record.corrected, verdict) {
        (CorrectionOutcome::Skipped, _) => "skipped",
        (CorrectionOutcome::Corrected(_), Verdict::Perfect) => "inverse",
        (CorrectionOutcome::Corrected(_), _) => "filter",
    }
}

pub fn teleport_enumerate_json(
    command: String,
    channel: &Channel,
    state: &[Complex64; 4],
    verdict: Verdict,
    success_probability: f64,
    records: &[OutcomeRecord],
) -> TeleportEnumerateJson {
    TeleportEnumerateJson {
        version: VERSION,
        command,
        channel: ChannelEcho::from_channel(channel),
        state: amps_json(state),
        verdict: verdict.to_string(),
        success_probability,
        outcomes: records
            .iter()
            .map(|record| OutcomeJson {
                i: record.i.value(),
                j: record.j.value(),
                probability: record.probability,
                bob_state_raw: amps_json(&record.bob_state_raw),
                correction: correction_label(record, verdict),
                corrected: match &record.corrected {
                    CorrectionOutcome::Corrected(state) => Some(amps_json(state)),
                    CorrectionOutcome::Skipped => None,
                },
                fidelity: record.fidelity,
                filter_success_probability: record.filter_success_probability,
            })
            .collect(),
    }
}

pub fn teleport_enumerate_text(
    channel: &Channel,
    state: &[Complex64; 4],
    verdict: Verdict,
    success_probability: f64,
    records: &[OutcomeRecord],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", channel.name().unwrap_or("custom"));
    let state_line = state.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "state: {state_line}");
    let _ = writeln!(out, "verdict: {verdict}");
    let _ = writeln!(out, "success probability: {}", fixed(success_probability));
    out.push_str("outcomes:\n");
    for record in records {
        let _ = writeln!(
            out,
            "  ({},{}) p={} fidelity={} filter={} correction={}",
            record.i,
            record.j,
            fixed(record.probability),
            fixed(record.fidelity),
            fixed(record.filter_success_probability),
            correction_label(record, verdict),
        );
    }
    out
}

#[derive(Serialize)]
pub struct StatsJson {
    pub trials: u64,
    pub seed: u64,
    pub outcome_counts: Vec<u64>,
    pub empirical_success_rate: f64,
    pub mean_fidelity_on_success: f64,
}

#[derive(Serialize)]
pub struct TeleportStatsJson {
    pub version: &'static str,
    pub command: String,
    pub channel: ChannelEcho,
    pub state: Vec<[f64; 2]>,
    pub verdict: String,
    pub success_probability: f64,
    pub stats: StatsJson,
}

pub fn teleport_stats_json(
    command: String,
    channel: &Channel,
    state: &[Complex64; 4],
    verdict: Verdict,
    success_probability: f64,
    stats: &RunStats,
) -> TeleportStatsJson {
    TeleportStatsJson {
        version: VERSION,
        command,
        channel: ChannelEcho::from_channel(channel),
        state: amps_json(state),
        verdict: verdict.to_string(),
        success_probability,
        stats: StatsJson {
            trials: stats.trials,
            seed: stats.seed,
            outcome_counts: stats.outcome_counts.to_vec(),
            empirical_success_rate: stats.empirical_success_rate,
            mean_fidelity_on_success: stats.mean_fidelity_on_success,
        },
    }
}

pub fn teleport_stats_text(
    channel: &Channel,
    state: &[Complex64; 4],
    verdict: Verdict,
    success_probability: f64,
    stats: &RunStats,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", channel.name().unwrap_or("custom"));
    let state_line = state.iter().map(|z| complex(*z)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "state: {state_line}");
    let _ = writeln!(out, "verdict: {verdict}");
    let _ = writeln!(out, "success probability: {}", fixed(success_probability));
    let _ = writeln!(out, "trials: {}", stats.trials);
    let _ = writeln!(out, "seed: {}", stats.seed);
    let counts = stats
        .outcome_counts
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, "outcome counts: {counts}");
    let _ = writeln!(
        out,
        "empirical success rate: {}",
        fixed(stats.empirical_success_rate)
    );
    let _ = writeln!(
        out,
        "mean fidelity on success: {}",
        fixed(stats.mean_fidelity_on_success)
    );
    out
}

pub struct VerifyCheck {
    pub name: &'static str,
    pub defect: f64,
    pub tolerance: f64,
}

impl VerifyCheck {
    pub fn passed(&self) -> bool {
        self.defect <= self.tolerance
    }
}

#[derive(Serialize)]
pub struct VerifyCheckJson {
    pub defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub version: &'static str,
    pub command: String,
    pub target: String,
    pub channels_checked: usize,
    pub defects: serde_json::Map<String, serde_json::Value>,
    pub passed: bool,
}

pub fn verify_json(
    command: String,
    target: String,
    channels_checked: usize,
    checks: &[VerifyCheck],
) -> VerifyJson {
    let mut defects = serde_json::Map::new();
    for check in checks {
        defects.insert(
            check.name.replace(' ', "_"),
            serde_json::to_value(VerifyCheckJson {
                defect: check.defect,
                tolerance: check.tolerance,
                passed: check.passed(),
            })
            .expect("plain struct"),
        );
    }
    VerifyJson {
        version: VERSION,
        command,
        target,
        channels_checked,
        passed: checks.iter().all(VerifyCheck::passed),
        defects,
    }
}

pub fn verify_text(
    target: &str,
    channels_checked: usize,
    checks: &[VerifyCheck],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "target: {target}");
    let _ = writeln!(out, "channels checked: {channels_checked}");
    for check in checks {
        let _ = writeln!(
            out,
            "{} defect: {} (tolerance {:e}) {}",
            check.name,
            sci(check.defect),
            check.tolerance,
            if check.passed() { "ok" } else { "FAILED" }
        );
    }
    let _ = writeln!(
        out,
        "result: {}",
        if checks.iter().all(VerifyCheck::passed) {
            "ok"
        } else {
            "FAILED"
        }
    );
    out
}

#[derive(Serialize)]
pub struct CatalogEntryJson {
    pub name: &'static str,
    pub example: &'static str,
    pub description: &'static str,
}

#[derive(Serialize)]
pub struct CatalogJson {
    pub version: &'static str,
    pub command: String,
    pub entries: Vec<CatalogEntryJson>,
}

/// Builtin listing: display name, a resolvable example, one-line blurb.
pub const CATALOG_ENTRIES: [(&str, &str, &str); 6] = [
    (
        "yeo-chua",
        "yeo-chua",
        "genuine four-qubit channel of Yeo and Chua; perfect teleportation",
    ),
    (
        "ghz4",
        "ghz4",
        "four-qubit GHZ state; teleportation impossible",
    ),
    ("w4", "w4", "four-qubit W state; teleportation impossible"),
    (
        "cnot-channel",
        "cnot-channel",
        "channel whose transformation operator is a C-NOT; perfect teleportation",
    ),
    (
        "bell-pairs:i=I,j=J",
        "bell-pairs:i=1,j=2",
        "product of Bell pairs (3,5) and (4,6); reducible reference channel",
    ),
    (
        "partial-pair:theta=T",
        "partial-pair:theta=0.5235987755982988",
        "partially entangled pair times a Bell pair; probabilistic teleportation",
    ),
];

pub fn catalog_json(command: String) -> CatalogJson {
    CatalogJson {
        version: VERSION,
        command,
        entries: CATALOG_ENTRIES
            .iter()
            .map(|(name, example, description)| CatalogEntryJson {
                name,
                example,
                description,
            })
            .collect(),
    }
}

pub fn catalog_text() -> String {
    let mut out = String::new();
    for (name, _, description) in CATALOG_ENTRIES {
        let _ = writeln!(out, "{name:<22} {description}");
    }
    out
}
