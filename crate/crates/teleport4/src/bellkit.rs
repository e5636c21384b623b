//! The fixed algebraic vocabulary of the protocol: the four Bell states,
//! the sixteen four-qubit products built from them, and the Pauli factors
//! that relate the sixteen transformation operators to the first one.

use std::fmt;
use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use crate::qmath::{c64, kron, Complex64, Matrix, StateVector};

/// Index of a Bell state, `1` through `4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellIndex(u8);

impl BellIndex {
    /// All four indices in order.
    pub const ALL: [BellIndex; 4] = [BellIndex(1), BellIndex(2), BellIndex(3), BellIndex(4)];

    pub fn new(value: u8) -> Option<Self> {
        (1..=4).contains(&value).then_some(Self(value))
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub(crate) fn ordinal(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The Bell state of the given index over the qubit pair `(hi, lo)`, with
/// `hi` owning the most significant bit:
///
/// * 1 → `(|00⟩ + |11⟩)/√2`
/// * 2 → `(|00⟩ − |11⟩)/√2`
/// * 3 → `(|01⟩ + |10⟩)/√2`
/// * 4 → `(|01⟩ − |10⟩)/√2`
pub fn bell_state_on(index: BellIndex, hi: u8, lo: u8) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let z = 0.0;
    let amps = match index.value() {
        1 => [h, z, z, h],
        2 => [h, z, z, -h],
        3 => [z, h, h, z],
        _ => [z, h, -h, z],
    };
    StateVector::new(vec![hi, lo], amps.iter().map(|&re| c64(re, z)).collect())
        .expect("Bell states are well formed")
}

/// [`bell_state_on`] over the default labels `(1, 2)`.
pub fn bell_state(index: BellIndex) -> StateVector {
    bell_state_on(index, 1, 2)
}

/// The four-qubit product of Bell state `i` on the pair `(1, 3)` with Bell
/// state `j` on the pair `(2, 4)`, expressed in label order `(1, 2, 3, 4)`.
///
/// The sixteen of these form an orthonormal basis of the measured space;
/// Alice's double Bell measurement projects onto them.
pub fn g_state(i: BellIndex, j: BellIndex) -> StateVector {
    bell_state_on(i, 1, 3)
        .tensor(&bell_state_on(j, 2, 4))
        .expect("pairs (1,3) and (2,4) are disjoint")
        .reordered(&[1, 2, 3, 4])
        .expect("same label set")
}

/// One of the four single-qubit factors appearing in the operator relation.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliFactor {
    pub index: BellIndex,
    pub matrix: Matrix,
}

/// The factor for the given index, in order `I`, `σz`, `σx`, `−iσy`:
///
/// ```text
/// [1  0]   [1  0]   [0  1]   [0 −1]
/// [0  1]   [0 −1]   [1  0]   [1  0]
/// ```
pub fn pauli_factor(index: BellIndex) -> PauliFactor {
    let rows: [[f64; 2]; 2] = match index.value() {
        1 => [[1.0, 0.0], [0.0, 1.0]],
        2 => [[1.0, 0.0], [0.0, -1.0]],
        3 => [[0.0, 1.0], [1.0, 0.0]],
        _ => [[0.0, -1.0], [1.0, 0.0]],
    };
    let entries = rows.iter().flatten().map(|&re| c64(re, 0.0)).collect();
    PauliFactor {
        index,
        matrix: Matrix::new(2, 2, entries).expect("factors are well formed"),
    }
}

/// The sign `s` in `(F_i ⊗ I)|φ¹⟩ = s·|φ^i⟩` for factor `F_i`.
///
/// Computed once from the state algebra and stored, rather than assumed:
/// the first three factors map the reference Bell state onto their own
/// index with sign `+1`, while `−iσy` picks up `−1`.
pub fn bell_sign(index: BellIndex) -> f64 {
    static SIGNS: OnceLock<[f64; 4]> = OnceLock::new();
    SIGNS.get_or_init(|| {
        BellIndex::ALL.map(|k| {
            let rotated = kron(&pauli_factor(k).matrix, &Matrix::identity(2))
                .mul_vec(bell_state(BellIndex::ALL[0]).amps());
            let target = bell_state(k);
            let overlap: Complex64 = target
                .amps()
                .iter()
                .zip(&rotated)
                .map(|(t, r)| t.conj() * r)
                .sum();
            debug_assert!((overlap.norm() - 1.0).abs() < 1e-12);
            if overlap.re >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
    })[index.ordinal()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::partial_inner;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_index_range() {
        assert!(BellIndex::new(0).is_none());
        assert!(BellIndex::new(5).is_none());
        assert_eq!(BellIndex::new(3).unwrap().value(), 3);
    }

    #[test]
    fn bell_state_amplitudes() {
        let h = FRAC_1_SQRT_2;
        let one = bell_state(BellIndex::new(1).unwrap());
        assert_eq!(
            one.amps(),
            &[c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(h, 0.0)]
        );
        let four = bell_state(BellIndex::new(4).unwrap());
        assert_eq!(
            four.amps(),
            &[c64(0.0, 0.0), c64(h, 0.0), c64(-h, 0.0), c64(0.0, 0.0)]
        );
    }

    #[test]
    fn bell_states_are_orthonormal() {
        for i in BellIndex::ALL {
            for j in BellIndex::ALL {
                let overlap = bell_state(i).inner(&bell_state(j)).unwrap();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (overlap - c64(expected, 0.0)).norm() < 1e-12,
                    "⟨φ{i}|φ{j}⟩ = {overlap}"
                );
            }
        }
    }

    #[test]
    fn g_state_one_one() {
        let g = g_state(BellIndex::ALL[0], BellIndex::ALL[0]);
        assert_eq!(g.labels(), &[1, 2, 3, 4]);
        for (index, amp) in g.amps().iter().enumerate() {
            let expected = match index {
                0b0000 | 0b0101 | 0b1010 | 0b1111 => 0.5,
                _ => 0.0,
            };
            assert!((amp - c64(expected, 0.0)).norm() < 1e-15, "index {index}");
        }
    }

    #[test]
    fn g_state_four_one() {
        // φ⁴₁₃ ⊗ φ¹₂₄ expanded by hand: ½(|0010⟩ + |0111⟩ − |1000⟩ − |1101⟩).
        let g = g_state(BellIndex::new(4).unwrap(), BellIndex::new(1).unwrap());
        for (index, amp) in g.amps().iter().enumerate() {
            let expected = match index {
                0b0010 | 0b0111 => 0.5,
                0b1000 | 0b1101 => -0.5,
                _ => 0.0,
            };
            assert!((amp - c64(expected, 0.0)).norm() < 1e-15, "index {index}");
        }
    }

    #[test]
    fn g_states_form_an_orthonormal_basis() {
        let all: Vec<StateVector> = BellIndex::ALL
            .iter()
            .flat_map(|&i| BellIndex::ALL.iter().map(move |&j| g_state(i, j)))
            .collect();
        for (a, ga) in all.iter().enumerate() {
            for (b, gb) in all.iter().enumerate() {
                let gram = partial_inner(ga, gb).unwrap().amp(0);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((gram - c64(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_factors_are_real_unitary_and_square_to_sign() {
        use crate::qmath::is_unitary;
        for i in BellIndex::ALL {
            let f = pauli_factor(i).matrix;
            assert!(f.entries().iter().all(|z| z.im == 0.0));
            assert!(is_unitary(&f, 1e-12));
            let square = f.mul(&f);
            let id = Matrix::identity(2);
            let plus = square.max_abs_diff(&id);
            let minus = square.max_abs_diff(&id.scale(c64(-1.0, 0.0)));
            assert!(plus < 1e-12 || minus < 1e-12);
        }
    }

    #[test]
    fn pauli_factor_four() {
        let f = pauli_factor(BellIndex::new(4).unwrap()).matrix;
        assert_eq!(f.get(0, 1), c64(-1.0, 0.0));
        assert_eq!(f.get(1, 0), c64(1.0, 0.0));
    }

    #[test]
    fn sign_table() {
        let signs: Vec<f64> = BellIndex::ALL.iter().map(|&i| bell_sign(i)).collect();
        assert_eq!(signs, vec![1.0, 1.0, 1.0, -1.0]);
        // The sign really relates (F⊗I)|φ¹⟩ to |φ^i⟩, entry by entry.
        for i in BellIndex::ALL {
            let rotated = kron(&pauli_factor(i).matrix, &Matrix::identity(2))
                .mul_vec(bell_state(BellIndex::ALL[0]).amps());
            let target = bell_state(i).scale(c64(bell_sign(i), 0.0));
            for (r, t) in rotated.iter().zip(target.amps()) {
                assert!((r - t).norm() < 1e-15);
            }
        }
    }
}
