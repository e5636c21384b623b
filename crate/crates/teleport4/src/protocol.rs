//! End-to-end simulation of the teleportation protocol on the full
//! six-qubit state vector.
//!
//! This module is the brute-force counterpart of [`crate::transform`]: each
//! measurement branch is obtained by direct projection of the 64-amplitude
//! composite state, with no reference to the extracted operators, so the
//! two routes check each other. Bob's correction is an inverse for perfect
//! channels and a conclusive filter (implemented through an actual unitary
//! dilation with one ancilla qubit) for probabilistic ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bellkit::{g_state, BellIndex};
use crate::channel::{random_amplitudes, Channel};
use crate::qmath::{
    c64, dilation_unitary, inverse, partial_inner, singular_values, tol, unitarity_defect,
    Complex64, QmathError, StateVector,
};
use crate::transform::{classify, extract_all, TransformOp, Verdict, DEFAULT_TOLERANCE};

/// Qubit labels of the unknown input state, most significant first.
pub const INPUT_LABELS: [u8; 2] = [1, 2];

/// Probability below which a measurement branch is treated as absent.
const DEAD_BRANCH: f64 = 1e-15;

/// Errors from the protocol simulation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProtocolError {
    #[error("input state norm {norm} is not 1")]
    NotNormalized { norm: f64 },
    #[error("input state is zero")]
    ZeroNorm,
    #[error("inverse correction needs a unitary operator (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("filter correction needs an invertible operator (smallest singular value {s_min:.3e})")]
    SingularOperator { s_min: f64 },
    #[error(transparent)]
    Math(#[from] QmathError),
}

/// The unknown two-qubit state `x₀|00⟩ + x₁|01⟩ + x₂|10⟩ + x₃|11⟩` on
/// Alice's qubits (1, 2); normalized by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct InputState {
    amps: [Complex64; 4],
}

impl InputState {
    /// Accepts amplitudes already normalized to within 1e-9.
    pub fn new(amps: [Complex64; 4]) -> Result<Self, ProtocolError> {
        if let Some(index) = amps
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite { index }.into());
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(ProtocolError::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalizing(amps: [Complex64; 4]) -> Result<Self, ProtocolError> {
        if let Some(index) = amps
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite { index }.into());
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(ProtocolError::ZeroNorm);
        }
        Ok(Self {
            amps: amps.map(|z| z / norm),
        })
    }

    /// Seeded random input, drawn from the same generator as
    /// [`crate::channel::random_amplitudes`].
    pub fn random(seed: u64) -> Self {
        let v = random_amplitudes(seed, 4);
        Self {
            amps: [v[0], v[1], v[2], v[3]],
        }
    }

    pub fn amps(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn to_state_vector(&self) -> StateVector {
        StateVector::new(INPUT_LABELS.to_vec(), self.amps.to_vec()).expect("normalized and finite")
    }
}

/// Which correction Bob applies after hearing the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionMode {
    /// Apply the inverse operator; deterministic, unitary channels only.
    Inverse,
    /// Apply the scaled inverse through a dilated unitary plus ancilla
    /// measurement; conclusive with probability below one.
    Filter,
}

/// Bob's final state for one branch, or the reason there is none.
#[derive(Clone, Debug, PartialEq)]
pub enum CorrectionOutcome {
    Corrected([Complex64; 4]),
    /// No correction attempted: singular operators (or a dead branch).
    Skipped,
}

/// One Bell-measurement branch of the protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    pub i: BellIndex,
    pub j: BellIndex,
    /// Probability of Alice observing this outcome.
    pub probability: f64,
    /// Bob's pair right after the measurement, normalized.
    pub bob_state_raw: [Complex64; 4],
    pub corrected: CorrectionOutcome,
    /// Overlap `|⟨χ|final⟩|²` with the corrected state, or with the raw
    /// state when no correction was applied.
    pub fidelity: f64,
    /// Probability that the correction itself succeeds: 1 for inverse
    /// corrections, the conclusive-filter acceptance otherwise, 0 when
    /// skipped.
    pub filter_success_probability: f64,
}

/// Aggregate of a sampled protocol run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    pub trials: u64,
    pub seed: u64,
    /// Count per outcome, ordered by [`crate::transform::branch_index`].
    pub outcome_counts: [u64; 16],
    pub empirical_success_rate: f64,
    /// Mean fidelity over conclusive trials; 0 when none succeeded.
    pub mean_fidelity_on_success: f64,
}

/// `|χ⟩₁₂ ⊗ |φ⟩₃₄₅₆`, the 64-amplitude state in label order (1..6).
pub fn compose_system(chi: &InputState, channel: &Channel) -> StateVector {
    chi.to_state_vector()
        .tensor(channel.state())
        .expect("input and channel labels are disjoint")
}

/// Branch probabilities via the extracted operators: `‖σ^{ij}·χ‖²/16`.
pub fn outcome_probabilities(chi: &InputState, channel: &Channel) -> [f64; 16] {
    let mut probabilities = [0.0; 16];
    for (slot, op) in extract_all(channel).iter().enumerate() {
        let image = op.matrix.mul_vec(chi.amps());
        probabilities[slot] = image.iter().map(|z| z.norm_sqr()).sum::<f64>() / 16.0;
    }
    probabilities
}

/// Branch probabilities by direct projection of the composite state onto
/// each measurement basis state; agrees with [`outcome_probabilities`].
pub fn outcome_probabilities_direct(chi: &InputState, channel: &Channel) -> [f64; 16] {
    let composite = compose_system(chi, channel);
    let mut probabilities = [0.0; 16];
    let mut slot = 0;
    for i in BellIndex::ALL {
        for j in BellIndex::ALL {
            let bob = partial_inner(&g_state(i, j), &composite).expect("labels are present");
            probabilities[slot] = bob.squared_norm();
            slot += 1;
        }
    }
    probabilities
}

/// Applies Bob's correction for one branch.
///
/// `Inverse` multiplies by the inverse operator and always succeeds.
/// `Filter` builds the contraction `M = s_min·(σ^{ij})⁻¹`, embeds it as the
/// top-left block of a dilated unitary, applies that unitary to the state
/// joined with an ancilla in `|0⟩`, and keeps the ancilla-`|0⟩` block:
/// acceptance probability `‖M·raw‖²`, and the accepted state reproduces the
/// input up to global phase.
pub fn bob_correction(
    op: &TransformOp,
    bob_state_raw: &[Complex64; 4],
    mode: CorrectionMode,
) -> Result<([Complex64; 4], f64), ProtocolError> {
    match mode {
        CorrectionMode::Inverse => {
            let defect = unitarity_defect(&op.matrix);
            if defect > tol::ALGEBRAIC {
                return Err(ProtocolError::NotUnitary { defect });
            }
            let corrected = inverse(&op.matrix)?.mul_vec(bob_state_raw);
            Ok(([corrected[0], corrected[1], corrected[2], corrected[3]], 1.0))
        }
        CorrectionMode::Filter => {
            let s_min = *singular_values(&op.matrix)?.last().expect("4x4");
            if s_min <= tol::SINGULARITY {
                return Err(ProtocolError::SingularOperator { s_min });
            }
            let filter = inverse(&op.matrix)?.scale(c64(s_min, 0.0));
            let unitary = dilation_unitary(&filter)?;
            // Ancilla |0⟩ selects the leading 4-component block.
            let mut joined = vec![c64(0.0, 0.0); 8];
            joined[..4].copy_from_slice(bob_state_raw);
            let rotated = unitary.mul_vec(&joined);
            let accepted = &rotated[..4];
            let success: f64 = accepted.iter().map(|z| z.norm_sqr()).sum();
            let scale = 1.0 / success.sqrt();
            Ok((
                [
                    accepted[0] * scale,
                    accepted[1] * scale,
                    accepted[2] * scale,
                    accepted[3] * scale,
                ],
                success,
            ))
        }
    }
}

/// Squared overlap `|⟨a|b⟩|²` of two normalized four-amplitude states;
/// invariant under a global phase on either side.
pub fn fidelity(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Largest amplitude of `¼·Σ_{ij} g^{ij} ⊗ (σ^{ij}·χ) − |χ⟩⊗|φ⟩`: how well
/// the sixteen extracted branches resum to the composite state.
pub fn reconstruction_defect(chi: &InputState, channel: &Channel) -> f64 {
    let composite = compose_system(chi, channel);
    let mut rebuilt = StateVector::new(composite.labels().to_vec(), vec![c64(0.0, 0.0); 64])
        .expect("well formed");
    for op in extract_all(channel) {
        let image = op.matrix.mul_vec(chi.amps());
        let bob = StateVector::new(vec![5, 6], image).expect("well formed");
        let term = g_state(op.i, op.j)
            .tensor(&bob)
            .expect("labels are disjoint");
        rebuilt = rebuilt.add(&term).expect("matching labels");
    }
    rebuilt = rebuilt.scale(c64(0.25, 0.0));
    rebuilt
        .amps()
        .iter()
        .zip(composite.amps())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Largest disagreement between the two branch routes: direct projection of
/// the 64-amplitude composite versus the extracted operator applied to the
/// input. States are compared entrywise after global-phase alignment,
/// probabilities directly; branches of negligible probability are skipped.
pub fn oracle_equivalence_defect(chi: &InputState, channel: &Channel) -> f64 {
    let composite = compose_system(chi, channel);
    let mut defect = 0.0f64;
    for op in extract_all(channel) {
        let direct = partial_inner(&g_state(op.i, op.j), &composite).expect("labels are present");
        let image = op.matrix.mul_vec(chi.amps());
        let direct_probability = direct.squared_norm();
        let image_probability = image.iter().map(|z| z.norm_sqr()).sum::<f64>() / 16.0;
        defect = defect.max((direct_probability - image_probability).abs());
        if direct_probability < 1e-12 {
            continue;
        }
        let direct = direct.normalized().expect("positive probability");
        let scale = 1.0 / image.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let image: Vec<Complex64> = image.iter().map(|z| z * scale).collect();
        let overlap: Complex64 = direct
            .amps()
            .iter()
            .zip(&image)
            .map(|(d, m)| d.conj() * m)
            .sum();
        let phase = if overlap.norm() == 0.0 {
            c64(1.0, 0.0)
        } else {
            overlap / overlap.norm()
        };
        for (d, m) in direct.amps().iter().zip(&image) {
            defect = defect.max((d * phase - m).norm());
        }
    }
    defect
}

/// Enumerates all sixteen branches deterministically.
///
/// Raw branch states come from direct projection of the composed system.
/// The correction mode follows the channel class: inverse when perfect,
/// filter when probabilistic, skipped when impossible (the raw state and
/// its fidelity are still reported as diagnostics).
pub fn run_deterministic(
    chi: &InputState,
    channel: &Channel,
) -> Result<Vec<OutcomeRecord>, ProtocolError> {
    let classification = classify(channel, DEFAULT_TOLERANCE)?;
    let composite = compose_system(chi, channel);
    let ops = extract_all(channel);
    let mut records = Vec::with_capacity(16);
    for op in ops {
        let bob = partial_inner(&g_state(op.i, op.j), &composite).expect("labels are present");
        let probability = bob.squared_norm();
        if probability < DEAD_BRANCH {
            records.push(OutcomeRecord {
                i: op.i,
                j: op.j,
                probability,
                bob_state_raw: [c64(0.0, 0.0); 4],
                corrected: CorrectionOutcome::Skipped,
                fidelity: 0.0,
                filter_success_probability: 0.0,
            });
            continue;
        }
        let normalized = bob.normalized().expect("positive probability");
        let bob_state_raw = [
            normalized.amp(0),
            normalized.amp(1),
            normalized.amp(2),
            normalized.amp(3),
        ];
        let (corrected, branch_fidelity, filter_success) = match classification.verdict {
            Verdict::Perfect => {
                let (state, success) = bob_correction(&op, &bob_state_raw, CorrectionMode::Inverse)?;
                (
                    CorrectionOutcome::Corrected(state),
                    fidelity(chi.amps(), &state),
                    success,
                )
            }
            Verdict::Probabilistic => {
                let (state, success) = bob_correction(&op, &bob_state_raw, CorrectionMode::Filter)?;
                (
                    CorrectionOutcome::Corrected(state),
                    fidelity(chi.amps(), &state),
                    success,
                )
            }
            Verdict::Impossible => (
                CorrectionOutcome::Skipped,
                fidelity(chi.amps(), &bob_state_raw),
                0.0,
            ),
        };
        records.push(OutcomeRecord {
            i: op.i,
            j: op.j,
            probability,
            bob_state_raw,
            corrected,
            fidelity: branch_fidelity,
            filter_success_probability: filter_success,
        });
    }
    Ok(records)
}

/// Samples the protocol `trials` times with a seeded generator.
///
/// Outcomes are drawn by inverse CDF over the sixteen branch
/// probabilities; for filter corrections the ancilla measurement is an
/// independent draw with the branch's acceptance probability. The same
/// seed always reproduces the same statistics.
pub fn run_sampled(
    chi: &InputState,
    channel: &Channel,
    seed: u64,
    trials: u64,
) -> Result<RunStats, ProtocolError> {
    assert!(trials >= 1, "at least one trial");
    let classification = classify(channel, DEFAULT_TOLERANCE)?;
    let records = run_deterministic(chi, channel)?;
    let mut cumulative = [0.0; 16];
    let mut running = 0.0;
    for (slot, record) in records.iter().enumerate() {
        running += record.probability;
        cumulative[slot] = running;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome_counts = [0u64; 16];
    let mut successes = 0u64;
    let mut fidelity_sum = 0.0;
    for _ in 0..trials {
        let draw: f64 = rng.gen();
        let slot = cumulative
            .iter()
            .position(|&edge| draw < edge)
            .unwrap_or(15);
        outcome_counts[slot] += 1;
        let record = &records[slot];
        let conclusive = match classification.verdict {
            Verdict::Perfect => true,
            Verdict::Probabilistic => rng.gen::<f64>() < record.filter_success_probability,
            Verdict::Impossible => false,
        };
        if conclusive {
            successes += 1;
            fidelity_sum += record.fidelity;
        }
    }
    Ok(RunStats {
        trials,
        seed,
        outcome_counts,
        empirical_success_rate: successes as f64 / trials as f64,
        mean_fidelity_on_success: if successes > 0 {
            fidelity_sum / successes as f64
        } else {
            0.0
        },
    })
}
