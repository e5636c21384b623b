use super::{c64, Complex64, QmathError};

/// A pure state over a list of labelled qubits.
///
/// The first label owns the most significant bit of the amplitude index, so
/// a state over labels `(1, 2)` stores the amplitude of `|q1 q2⟩ = |10⟩` at
/// index `0b10 = 2`. Constructors admit unnormalized amplitude vectors;
/// types that promise normalization enforce it themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    labels: Vec<u8>,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from distinct labels and `2^n` finite amplitudes.
    pub fn new(labels: Vec<u8>, amps: Vec<Complex64>) -> Result<Self, QmathError> {
        for (k, label) in labels.iter().enumerate() {
            if labels[..k].contains(label) {
                return Err(QmathError::DuplicateLabel { label: *label });
            }
        }
        if amps.len() != 1usize << labels.len() {
            return Err(QmathError::AmplitudeCount {
                qubits: labels.len(),
                found: amps.len(),
            });
        }
        if let Some(index) = amps
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFinite { index });
        }
        Ok(Self { labels, amps })
    }

    /// The computational basis state `|index⟩` over the given labels.
    pub fn basis(labels: Vec<u8>, index: usize) -> Result<Self, QmathError> {
        let dimension = 1usize << labels.len();
        if index >= dimension {
            return Err(QmathError::IndexOutOfRange { index, dimension });
        }
        let mut amps = vec![c64(0.0, 0.0); dimension];
        amps[index] = c64(1.0, 0.0);
        Self::new(labels, amps)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn squared_norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|z| z * k).collect(),
        }
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self, QmathError> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(QmathError::ZeroNorm);
        }
        Ok(self.scale(c64(1.0 / norm, 0.0)))
    }

    /// Componentwise sum; labels must match exactly, order included.
    pub fn add(&self, other: &Self) -> Result<Self, QmathError> {
        if self.labels != other.labels {
            return Err(QmathError::LabelSetMismatch);
        }
        Ok(Self {
            labels: self.labels.clone(),
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Tensor product; the labels of `self` stay most significant.
    pub fn tensor(&self, other: &Self) -> Result<Self, QmathError> {
        if self.labels.iter().any(|l| other.labels.contains(l)) {
            return Err(QmathError::OverlappingLabels);
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::new(labels, amps)
    }

    /// Renames the qubits without touching amplitudes.
    pub fn relabel(&self, labels: Vec<u8>) -> Result<Self, QmathError> {
        if labels.len() != self.labels.len() {
            return Err(QmathError::LabelSetMismatch);
        }
        Self::new(labels, self.amps.clone())
    }

    /// Permutes amplitudes into a new ordering of the same label set.
    pub fn reordered(&self, order: &[u8]) -> Result<Self, QmathError> {
        if order.len() != self.labels.len()
            || self.labels.iter().any(|l| !order.contains(l))
        {
            return Err(QmathError::LabelSetMismatch);
        }
        let n = self.labels.len();
        // new_pos[k] = position of the k-th old label in the new order
        let new_pos: Vec<usize> = self
            .labels
            .iter()
            .map(|l| order.iter().position(|o| o == l).unwrap())
            .collect();
        let mut amps = vec![c64(0.0, 0.0); self.amps.len()];
        for (old_index, amp) in self.amps.iter().enumerate() {
            let mut new_index = 0usize;
            for (k, pos) in new_pos.iter().enumerate() {
                let bit = (old_index >> (n - 1 - k)) & 1;
                new_index |= bit << (n - 1 - pos);
            }
            amps[new_index] = *amp;
        }
        Self::new(order.to_vec(), amps)
    }

    /// Full inner product `⟨self|other⟩` over an identical label set.
    pub fn inner(&self, other: &Self) -> Result<Complex64, QmathError> {
        if self.labels.len() != other.labels.len() {
            return Err(QmathError::LabelSetMismatch);
        }
        Ok(partial_inner(self, other)?.amp(0))
    }
}

/// Projects `psi` onto `bra` over the bra's qubits, leaving a state on the
/// remaining labels in `psi`'s order.
///
/// `result[t] = Σ_s conj(bra[s]) · psi[merge(s, t)]`, where `merge`
/// interleaves bit assignments by label. Linear in `psi`, antilinear in
/// `bra`; the result is generally unnormalized. With equal label sets the
/// result is a zero-qubit state holding the plain inner product.
pub fn partial_inner(bra: &StateVector, psi: &StateVector) -> Result<StateVector, QmathError> {
    let missing: Vec<u8> = bra
        .labels
        .iter()
        .copied()
        .filter(|l| !psi.labels.contains(l))
        .collect();
    if !missing.is_empty() {
        return Err(QmathError::LabelMismatch { missing });
    }

    enum Source {
        Bra(usize),
        Kept(usize),
    }

    let kept: Vec<u8> = psi
        .labels
        .iter()
        .copied()
        .filter(|l| !bra.labels.contains(l))
        .collect();
    let sources: Vec<Source> = psi
        .labels
        .iter()
        .map(|l| match bra.labels.iter().position(|b| b == l) {
            Some(p) => Source::Bra(p),
            None => Source::Kept(kept.iter().position(|k| k == l).unwrap()),
        })
        .collect();

    let bra_bits = bra.labels.len();
    let kept_bits = kept.len();
    let mut out = vec![c64(0.0, 0.0); 1usize << kept_bits];
    for s in 0..1usize << bra_bits {
        let weight = bra.amps[s].conj();
        if weight == c64(0.0, 0.0) {
            continue;
        }
        for (t, slot) in out.iter_mut().enumerate() {
            let mut index = 0usize;
            for source in &sources {
                let bit = match source {
                    Source::Bra(p) => (s >> (bra_bits - 1 - p)) & 1,
                    Source::Kept(p) => (t >> (kept_bits - 1 - p)) & 1,
                };
                index = (index << 1) | bit;
            }
            *slot += weight * psi.amps[index];
        }
    }
    StateVector::new(kept, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(labels: Vec<u8>, bits: usize) -> StateVector {
        StateVector::basis(labels, bits).unwrap()
    }

    #[test]
    fn rejects_duplicate_labels() {
        let err = StateVector::new(vec![1, 1], vec![c64(1.0, 0.0); 4]).unwrap_err();
        assert_eq!(err, QmathError::DuplicateLabel { label: 1 });
    }

    #[test]
    fn rejects_wrong_amplitude_count() {
        let err = StateVector::new(vec![1, 2], vec![c64(1.0, 0.0); 3]).unwrap_err();
        assert!(matches!(err, QmathError::AmplitudeCount { qubits: 2, found: 3 }));
    }

    #[test]
    fn first_label_is_most_significant() {
        // |q1 q2⟩ = |10⟩ lives at index 2.
        let psi = ket(vec![1, 2], 0b10);
        assert_eq!(psi.amp(2), c64(1.0, 0.0));
        let swapped = psi.reordered(&[2, 1]).unwrap();
        assert_eq!(swapped.amp(0b01), c64(1.0, 0.0));
    }

    #[test]
    fn basis_projection() {
        // ⟨0|₁ applied to |01⟩ over (1,2) leaves |1⟩ over (2).
        let bra = ket(vec![1], 0);
        let psi = ket(vec![1, 2], 0b01);
        let rest = partial_inner(&bra, &psi).unwrap();
        assert_eq!(rest.labels(), &[2]);
        assert_eq!(rest.amps(), &[c64(0.0, 0.0), c64(1.0, 0.0)]);
    }

    #[test]
    fn bell_overlap_scales_spectator() {
        // ⟨φ¹|₁₃ on |00⟩₁₃ ⊗ |v⟩₅ picks up the single overlapping component.
        let h = FRAC_1_SQRT_2;
        let bra = StateVector::new(
            vec![1, 3],
            vec![c64(h, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(h, 0.0)],
        )
        .unwrap();
        let v = StateVector::new(vec![5], vec![c64(0.6, 0.0), c64(0.0, 0.8)]).unwrap();
        let psi = ket(vec![1, 3], 0).tensor(&v).unwrap();
        let rest = partial_inner(&bra, &psi).unwrap();
        assert_eq!(rest.labels(), &[5]);
        assert!((rest.amp(0) - c64(h * 0.6, 0.0)).norm() < 1e-15);
        assert!((rest.amp(1) - c64(0.0, h * 0.8)).norm() < 1e-15);
    }

    #[test]
    fn partial_inner_requires_sublabels() {
        let bra = ket(vec![7], 0);
        let psi = ket(vec![1, 2], 0);
        let err = partial_inner(&bra, &psi).unwrap_err();
        assert_eq!(err, QmathError::LabelMismatch { missing: vec![7] });
    }

    #[test]
    fn full_projection_is_inner_product() {
        let a = StateVector::new(
            vec![1, 2],
            vec![c64(0.5, 0.0), c64(0.0, 0.5), c64(-0.5, 0.0), c64(0.0, -0.5)],
        )
        .unwrap();
        let b = ket(vec![1, 2], 1);
        let scalar = partial_inner(&a, &b).unwrap();
        assert_eq!(scalar.num_qubits(), 0);
        assert!((scalar.amp(0) - c64(0.0, -0.5)).norm() < 1e-15);
        assert!((a.inner(&b).unwrap() - c64(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn tensor_rejects_shared_labels() {
        let a = ket(vec![1], 0);
        let b = ket(vec![1], 1);
        assert_eq!(a.tensor(&b).unwrap_err(), QmathError::OverlappingLabels);
    }

    #[test]
    fn normalize_zero_fails() {
        let z = StateVector::new(vec![1], vec![c64(0.0, 0.0); 2]).unwrap();
        assert_eq!(z.normalized().unwrap_err(), QmathError::ZeroNorm);
    }
}
