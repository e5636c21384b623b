//! Extraction and classification of the sixteen transformation operators.
//!
//! Composing an arbitrary input `|χ⟩₁₂` with a channel `|φ⟩₃₄₅₆` and
//! expanding over the double Bell basis of the pairs (1,3) and (2,4) writes
//! the six-qubit state as a sum of sixteen branches, each carrying a 4x4
//! operator `σ^{ij}` applied to the input amplitudes on Bob's pair (5,6).
//! Those operators decide everything: all sixteen are the first one times a
//! fixed unitary, so `σ¹¹` alone classifies the channel as perfect
//! (unitary), probabilistic (invertible), or impossible (singular).

use std::fmt;
use std::sync::OnceLock;

use crate::bellkit::{g_state, pauli_factor, BellIndex};
use crate::channel::{catalog, CatalogName, Channel};
use crate::qmath::{
    c64, determinant, kron, partial_inner, singular_values, tol, Matrix, QmathError, StateVector,
};

/// Default classification tolerance; override per call where needed.
pub const DEFAULT_TOLERANCE: f64 = tol::ALGEBRAIC;

/// The operator attached to Bell outcome `(i, j)`: maps input amplitudes
/// `(x₀, x₁, x₂, x₃)` to Bob's unnormalized post-measurement amplitudes in
/// label order `(5, 6)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformOp {
    pub i: BellIndex,
    pub j: BellIndex,
    pub matrix: Matrix,
}

/// Position of outcome `(i, j)` in every 16-entry listing: `i` major.
pub fn branch_index(i: BellIndex, j: BellIndex) -> usize {
    i.ordinal() * 4 + j.ordinal()
}

/// What a channel can do for an arbitrary two-qubit input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// All operators unitary: deterministic recovery, unit fidelity.
    Perfect,
    /// Invertible but not unitary: conclusive recovery with probability
    /// strictly between 0 and 1.
    Probabilistic,
    /// Singular operators: no faithful recovery exists.
    Impossible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Perfect => "Perfect",
            Verdict::Probabilistic => "Probabilistic",
            Verdict::Impossible => "Impossible",
        })
    }
}

/// Classification of a channel from the spectrum of `σ¹¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Probability of conclusive success: 1 for perfect channels, the
    /// squared smallest singular value otherwise, 0 when impossible.
    pub success_probability: f64,
    /// `|det σ¹¹|`.
    pub det_magnitude: f64,
    /// Singular values of `σ¹¹`, descending.
    pub singular_values: [f64; 4],
    /// Set when the spectrum sits exactly on a tolerance boundary; the
    /// verdict then falls on the probabilistic side.
    pub borderline: bool,
}

/// Everything the analyzer knows about one channel.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub channel_name: Option<String>,
    pub sigma11: Matrix,
    pub classification: Classification,
    /// Largest entry of `Σ_{ij} (σ^{ij})†σ^{ij} − 16·I`.
    pub completeness_defect: f64,
    /// Largest entry over `(i,j)` of `σ^{ij} − σ¹¹·(W_i ⊗ W_j)`.
    pub pauli_relation_defect: f64,
}

/// Extracts the operator for outcome `(i, j)` by projecting basis inputs.
///
/// Column `k` is `4·⟨g^{ij}| (|e_k⟩₁₂ ⊗ channel)`, the (rescaled) partial
/// inner product of the measurement state with the composite system built
/// from the `k`-th computational basis input.
pub fn extract_sigma(channel: &Channel, i: BellIndex, j: BellIndex) -> TransformOp {
    let g = g_state(i, j);
    let mut entries = vec![c64(0.0, 0.0); 16];
    for k in 0..4 {
        let alice = StateVector::basis(vec![1, 2], k).expect("k < 4");
        let composite = alice
            .tensor(channel.state())
            .expect("labels (1,2) and (3,4,5,6) are disjoint");
        let bob = partial_inner(&g, &composite).expect("measured labels are present");
        for t in 0..4 {
            entries[t * 4 + k] = bob.amp(t) * 4.0;
        }
    }
    TransformOp {
        i,
        j,
        matrix: Matrix::new(4, 4, entries).expect("finite entries"),
    }
}

/// All sixteen operators, ordered by [`branch_index`].
pub fn extract_all(channel: &Channel) -> Vec<TransformOp> {
    BellIndex::ALL
        .iter()
        .flat_map(|&i| {
            BellIndex::ALL
                .iter()
                .map(move |&j| extract_sigma(channel, i, j))
        })
        .collect()
}

/// The channel-independent factors `W₁..W₄` with
/// `σ^{ij} = σ¹¹ · (W_i ⊗ W_j)`.
///
/// The candidate factors are the [`pauli_factor`] matrices, but their signs
/// are frozen here by matching direct extraction on the reducible
/// bell-pairs(1,1) channel (where `σ¹¹ = I`, so `σ^{i1} = W_i ⊗ I` reads
/// the factor off directly) instead of being taken on faith.
pub fn frozen_pauli_factors() -> &'static [Matrix; 4] {
    static FACTORS: OnceLock<[Matrix; 4]> = OnceLock::new();
    FACTORS.get_or_init(|| {
        let one = BellIndex::ALL[0];
        let reference =
            catalog(&CatalogName::BellPairs(one, one)).expect("builtin catalog entry");
        let id2 = Matrix::identity(2);
        BellIndex::ALL.map(|i| {
            let direct = extract_sigma(&reference, i, one).matrix;
            let candidate = pauli_factor(i).matrix;
            if direct.max_abs_diff(&kron(&candidate, &id2)) <= 1e-9 {
                return candidate;
            }
            let flipped = candidate.scale(c64(-1.0, 0.0));
            assert!(
                direct.max_abs_diff(&kron(&flipped, &id2)) <= 1e-9,
                "factor calibration failed for index {i}"
            );
            flipped
        })
    })
}

/// Largest deviation, over all sixteen outcomes, of the directly extracted
/// operator from `σ¹¹ · (W_i ⊗ W_j)` with the frozen factors. The relation
/// is channel-independent, so this is a pure consistency defect.
pub fn verify_pauli_relation(channel: &Channel) -> f64 {
    let factors = frozen_pauli_factors();
    let one = BellIndex::ALL[0];
    let sigma11 = extract_sigma(channel, one, one).matrix;
    let mut defect = 0.0f64;
    for i in BellIndex::ALL {
        for j in BellIndex::ALL {
            let direct = extract_sigma(channel, i, j).matrix;
            let predicted = sigma11.mul(&kron(&factors[i.ordinal()], &factors[j.ordinal()]));
            defect = defect.max(direct.max_abs_diff(&predicted));
        }
    }
    defect
}

/// Largest entry of `Σ_{ij} (σ^{ij})†σ^{ij} − 16·I`; zero for every
/// normalized channel by completeness of the two Bell bases.
pub fn completeness_defect(channel: &Channel) -> f64 {
    let mut sum = Matrix::zeros(4, 4);
    for op in extract_all(channel) {
        sum = sum.add(&op.matrix.adjoint().mul(&op.matrix));
    }
    sum.max_abs_diff(&Matrix::identity(4).scale(c64(16.0, 0.0)))
}

fn classify_operator(sigma11: &Matrix, tolerance: f64) -> Result<Classification, QmathError> {
    let values = singular_values(sigma11)?;
    let singular_values = [values[0], values[1], values[2], values[3]];
    let det_magnitude = determinant(sigma11).norm();
    let flatness = singular_values
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    let s_min = singular_values[3];
    // Strictly inside a tolerance band resolves to the adjacent class;
    // exact boundary hits fall to Probabilistic and raise the flag.
    let (verdict, success_probability, borderline) = if flatness < tolerance {
        (Verdict::Perfect, 1.0, false)
    } else if s_min < tolerance {
        (Verdict::Impossible, 0.0, false)
    } else {
        (
            Verdict::Probabilistic,
            s_min * s_min,
            flatness == tolerance || s_min == tolerance,
        )
    };
    Ok(Classification {
        verdict,
        success_probability,
        det_magnitude,
        singular_values,
        borderline,
    })
}

/// Classifies a channel by the spectrum of `σ¹¹` alone.
///
/// Valid because the other fifteen operators are right-unitary multiples of
/// `σ¹¹` and therefore share its singular values. The success probability
/// of the conclusive filter is the squared smallest singular value: the
/// per-branch filter succeeds with `s_min²/‖σχ‖²` on a branch of weight
/// `‖σχ‖²/16`, and the sixteen branches sum to `s_min²` for every input.
pub fn classify(channel: &Channel, tolerance: f64) -> Result<Classification, QmathError> {
    let one = BellIndex::ALL[0];
    classify_operator(&extract_sigma(channel, one, one).matrix, tolerance)
}

/// Runs the full analysis at the given classification tolerance.
pub fn analyze_with_tolerance(
    channel: &Channel,
    tolerance: f64,
) -> Result<AnalysisReport, QmathError> {
    let one = BellIndex::ALL[0];
    let sigma11 = extract_sigma(channel, one, one).matrix;
    let classification = classify_operator(&sigma11, tolerance)?;
    Ok(AnalysisReport {
        channel_name: channel.name().map(String::from),
        sigma11,
        classification,
        completeness_defect: completeness_defect(channel),
        pauli_relation_defect: verify_pauli_relation(channel),
    })
}

/// [`analyze_with_tolerance`] at [`DEFAULT_TOLERANCE`].
pub fn analyze(channel: &Channel) -> Result<AnalysisReport, QmathError> {
    analyze_with_tolerance(channel, DEFAULT_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel;
    use crate::qmath::is_unitary;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn by_name(s: &str) -> Channel {
        catalog(&s.parse().unwrap()).unwrap()
    }

    fn idx(v: u8) -> BellIndex {
        BellIndex::new(v).unwrap()
    }

    fn sigma11(channel: &Channel) -> Matrix {
        extract_sigma(channel, idx(1), idx(1)).matrix
    }

    fn real_matrix(rows: [[f64; 4]; 4]) -> Matrix {
        let entries = rows.iter().flatten().map(|&re| c64(re, 0.0)).collect();
        Matrix::new(4, 4, entries).unwrap()
    }

    #[test]
    fn ghz_operator_is_the_scaled_projector() {
        let s = SQRT_2;
        let expected = real_matrix([
            [s, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, s],
        ]);
        assert!(sigma11(&by_name("ghz4")).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn w_operator_matches_hand_expansion() {
        let expected = real_matrix([
            [0.0, 1.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(sigma11(&by_name("w4")).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn cnot_channel_operator_is_a_cnot() {
        let expected = real_matrix([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ]);
        assert!(sigma11(&by_name("cnot-channel")).max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn bell_pairs_operator_is_the_identity() {
        // Brute-force projection oracle: the reducible channel teleports
        // with identity correction.
        assert!(sigma11(&by_name("bell-pairs:i=1,j=1")).max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn yeo_chua_operator_is_unitary_with_exchanged_middle_columns() {
        let h = FRAC_1_SQRT_2;
        let got = sigma11(&by_name("yeo-chua"));
        assert!(is_unitary(&got, 1e-10));
        let expected = real_matrix([
            [h, 0.0, 0.0, h],
            [0.0, -h, h, 0.0],
            [0.0, h, h, 0.0],
            [-h, 0.0, 0.0, h],
        ]);
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn partial_pair_operator_is_the_scaled_diagonal() {
        let theta = std::f64::consts::FRAC_PI_6;
        let (c, s) = (theta.cos(), theta.sin());
        let expected = real_matrix([
            [SQRT_2 * c, 0.0, 0.0, 0.0],
            [0.0, SQRT_2 * c, 0.0, 0.0],
            [0.0, 0.0, SQRT_2 * s, 0.0],
            [0.0, 0.0, 0.0, SQRT_2 * s],
        ]);
        let got = sigma11(&by_name("partial-pair:theta=0.5235987755982988"));
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn yeo_chua_operators_are_all_unitary() {
        for op in extract_all(&by_name("yeo-chua")) {
            assert!(is_unitary(&op.matrix, 1e-10), "({}, {})", op.i, op.j);
        }
    }

    #[test]
    fn ghz_operators_are_all_singular() {
        for op in extract_all(&by_name("ghz4")) {
            let s_min = *singular_values(&op.matrix).unwrap().last().unwrap();
            assert!(s_min < 1e-12, "({}, {})", op.i, op.j);
        }
    }

    #[test]
    fn completeness_on_named_and_random_channels() {
        assert!(completeness_defect(&by_name("yeo-chua")) < 1e-9);
        for seed in 0..25 {
            assert!(completeness_defect(&random_channel(seed)) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn pauli_relation_holds_everywhere() {
        assert!(verify_pauli_relation(&by_name("yeo-chua")) < 1e-10);
        assert!(verify_pauli_relation(&random_channel(42)) < 1e-10);
    }

    #[test]
    fn pauli_relation_first_term_is_exact() {
        // W₁ ⊗ W₁ = I, so the (1,1) term deviates by exactly zero.
        let channel = random_channel(3);
        let factors = frozen_pauli_factors();
        let sigma = sigma11(&channel);
        let predicted = sigma.mul(&kron(&factors[0], &factors[0]));
        assert_eq!(sigma.max_abs_diff(&predicted), 0.0);
    }

    #[test]
    fn classify_the_catalog() {
        let perfect = classify(&by_name("yeo-chua"), DEFAULT_TOLERANCE).unwrap();
        assert_eq!(perfect.verdict, Verdict::Perfect);
        assert_eq!(perfect.success_probability, 1.0);

        for name in ["ghz4", "w4"] {
            let impossible = classify(&by_name(name), DEFAULT_TOLERANCE).unwrap();
            assert_eq!(impossible.verdict, Verdict::Impossible);
            assert_eq!(impossible.success_probability, 0.0);
            assert!(impossible.det_magnitude < 1e-12);
        }

        let partial = classify(
            &by_name("partial-pair:theta=0.5235987755982988"),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        assert_eq!(partial.verdict, Verdict::Probabilistic);
        assert!((partial.success_probability - 0.5).abs() < 1e-12);
        assert!(!partial.borderline);
    }

    #[test]
    fn analyze_bundles_the_diagnostics() {
        let report = analyze(&by_name("yeo-chua")).unwrap();
        assert_eq!(report.classification.verdict, Verdict::Perfect);
        assert!(report.completeness_defect < 1e-9);
        assert!(report.pauli_relation_defect < 1e-9);
        assert_eq!(report.channel_name.as_deref(), Some("yeo-chua"));

        let report = analyze(&by_name("cnot-channel")).unwrap();
        assert_eq!(report.classification.verdict, Verdict::Perfect);

        let report = analyze(&by_name("w4")).unwrap();
        assert_eq!(report.classification.verdict, Verdict::Impossible);
        assert_eq!(report.classification.det_magnitude, 0.0);
    }

    #[test]
    fn equal_spectra_across_outcomes() {
        let channel = random_channel(99);
        let reference = singular_values(&sigma11(&channel)).unwrap();
        for op in extract_all(&channel) {
            let values = singular_values(&op.matrix).unwrap();
            for (a, b) in values.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
