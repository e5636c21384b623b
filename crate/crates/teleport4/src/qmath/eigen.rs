use super::{c64, tol, Matrix, QmathError};

const MAX_JACOBI_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigenvalues (descending) and eigenvectors (columns) of a Hermitian
/// matrix, by cyclic Jacobi rotations.
///
/// Each pivot `(p, q)` is phase-rotated to a real 2x2 subproblem and
/// annihilated with the classic symmetric rotation. Iteration stops once
/// the off-diagonal norm drops below [`tol::JACOBI_OFF`], capped at 100
/// sweeps.
pub fn hermitian_eigen(h: &Matrix) -> Result<(Vec<f64>, Matrix), QmathError> {
    assert!(h.is_square(), "eigendecomposition requires a square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut vectors = Matrix::identity(n);

    let mut converged = off_diagonal_norm(&a) < tol::JACOBI_OFF;
    for _ in 0..MAX_JACOBI_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let h_pq = a.get(p, q);
                let r = h_pq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // diag(1, conj(phase)) turns the (p,q) block real symmetric
                let phase = h_pq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut rotation = Matrix::identity(n);
                rotation.set(p, p, c64(c, 0.0));
                rotation.set(p, q, c64(s, 0.0));
                rotation.set(q, p, phase.conj() * (-s));
                rotation.set(q, q, phase.conj() * c);

                a = rotation.adjoint().mul(&a).mul(&rotation);
                vectors = vectors.mul(&rotation);
            }
        }
        converged = off_diagonal_norm(&a) < tol::JACOBI_OFF;
    }
    if !converged {
        return Err(QmathError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut sorted_vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            sorted_vectors.set(row, new_col, vectors.get(row, old_col));
        }
    }
    Ok((values, sorted_vectors))
}

/// Singular values of a square matrix in descending order: square roots of
/// the eigenvalues of `m†m`.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>, QmathError> {
    let (values, _) = hermitian_eigen(&m.adjoint().mul(m))?;
    Ok(values.into_iter().map(|v| v.max(0.0).sqrt()).collect())
}

/// Inverse of a square matrix by Gauss-Jordan elimination with partial
/// pivoting, guarded by the smallest singular value.
pub fn inverse(m: &Matrix) -> Result<Matrix, QmathError> {
    assert!(m.is_square(), "inverse requires a square matrix");
    let n = m.rows();
    let singulars = singular_values(m)?;
    let s_min = singulars.last().copied().unwrap_or(0.0);
    if s_min <= tol::SINGULARITY {
        return Err(QmathError::SingularMatrix { s_min });
    }

    let mut work = m.clone();
    let mut out = Matrix::identity(n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| work.get(i, col).norm().total_cmp(&work.get(j, col).norm()))
            .unwrap();
        let pivot = work.get(pivot_row, col);
        if pivot.norm() == 0.0 {
            return Err(QmathError::SingularMatrix { s_min: 0.0 });
        }
        if pivot_row != col {
            for j in 0..n {
                let (a, b) = (work.get(col, j), work.get(pivot_row, j));
                work.set(col, j, b);
                work.set(pivot_row, j, a);
                let (a, b) = (out.get(col, j), out.get(pivot_row, j));
                out.set(col, j, b);
                out.set(pivot_row, j, a);
            }
        }
        let inv_pivot = c64(1.0, 0.0) / pivot;
        for j in 0..n {
            work.set(col, j, work.get(col, j) * inv_pivot);
            out.set(col, j, out.get(col, j) * inv_pivot);
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = work.get(row, col);
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = work.get(row, j) - factor * work.get(col, j);
                work.set(row, j, w);
                let o = out.get(row, j) - factor * out.get(col, j);
                out.set(row, j, o);
            }
        }
    }
    Ok(out)
}

/// Hermitian square root of a positive semidefinite matrix, with small
/// negative eigenvalues clamped to zero.
fn sqrt_psd(h: &Matrix) -> Result<Matrix, QmathError> {
    let n = h.rows();
    let (values, vectors) = hermitian_eigen(h)?;
    let mut root = Matrix::zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        root.set(i, i, c64(v.max(0.0).sqrt(), 0.0));
    }
    Ok(vectors.mul(&root).mul(&vectors.adjoint()))
}

/// Embeds a contraction `m` (operator norm at most 1) as the top-left block
/// of a unitary twice its size:
///
/// ```text
///     U = [ m                 sqrt(I − m·m†) ]
///         [ sqrt(I − m†·m)    −m†            ]
/// ```
///
/// Applying `U` to a state with the ancilla in its zero block and reading
/// the ancilla back as zero implements `m` on the state, with branch
/// probability `‖m·state‖²`.
pub fn dilation_unitary(m: &Matrix) -> Result<Matrix, QmathError> {
    assert!(m.is_square(), "dilation requires a square matrix");
    let n = m.rows();
    let singulars = singular_values(m)?;
    let s_max = singulars.first().copied().unwrap_or(0.0);
    if s_max > 1.0 + tol::SINGULARITY {
        return Err(QmathError::NormExceeded { s_max });
    }
    let id = Matrix::identity(n);
    let top_right = sqrt_psd(&id.sub(&m.mul(&m.adjoint())))?;
    let bottom_left = sqrt_psd(&id.sub(&m.adjoint().mul(m)))?;
    let mut u = Matrix::zeros(2 * n, 2 * n);
    u.set_block(0, 0, m);
    u.set_block(0, n, &top_right);
    u.set_block(n, 0, &bottom_left);
    u.set_block(n, n, &m.adjoint().scale(c64(-1.0, 0.0)));
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{determinant, is_unitary};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let entries = (0..n * n)
            .map(|_| c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        Matrix::new(n, n, entries).unwrap()
    }

    #[test]
    fn eigen_reconstructs_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let m = random_matrix(&mut rng, 4);
            let h = m.adjoint().mul(&m);
            let (values, vectors) = hermitian_eigen(&h).unwrap();
            let mut diag = Matrix::zeros(4, 4);
            for (i, v) in values.iter().enumerate() {
                diag.set(i, i, c64(*v, 0.0));
            }
            let rebuilt = vectors.mul(&diag).mul(&vectors.adjoint());
            assert!(rebuilt.max_abs_diff(&h) < 1e-12);
            assert!(is_unitary(&vectors, 1e-12));
            assert!(values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn singular_values_of_scaled_projector() {
        let s = std::f64::consts::SQRT_2;
        let mut m = Matrix::zeros(4, 4);
        m.set(0, 0, c64(s, 0.0));
        m.set(3, 3, c64(s, 0.0));
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - s).abs() < 1e-14);
        assert!((sv[1] - s).abs() < 1e-14);
        assert!(sv[2].abs() < 1e-14);
        assert!(sv[3].abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_w_operator() {
        // m†m = [[2,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,0]] has spectrum {2,2,0,0}.
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let m = Matrix::from_rows(&[
            vec![zero, one, one, zero],
            vec![one, zero, zero, zero],
            vec![one, zero, zero, zero],
            vec![zero, zero, zero, zero],
        ])
        .unwrap();
        let sv = singular_values(&m).unwrap();
        let s = std::f64::consts::SQRT_2;
        assert!((sv[0] - s).abs() < 1e-14);
        assert!((sv[1] - s).abs() < 1e-14);
        assert!(sv[2].abs() < 1e-14);
        assert!(sv[3].abs() < 1e-14);
    }

    #[test]
    fn product_of_singular_values_matches_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 4);
            let sv = singular_values(&m).unwrap();
            let product: f64 = sv.iter().product();
            assert!((product - determinant(&m).norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let id = Matrix::identity(4);
        assert!(inverse(&id).unwrap().max_abs_diff(&id) < 1e-15);
        for _ in 0..25 {
            let m = random_matrix(&mut rng, 4);
            match inverse(&m) {
                Ok(inv) => assert!(m.mul(&inv).max_abs_diff(&id) < 1e-9),
                Err(QmathError::SingularMatrix { s_min }) => {
                    assert!(s_min <= tol::SINGULARITY)
                }
                Err(other) => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn inverse_rejects_singular_input() {
        let mut m = Matrix::zeros(4, 4);
        m.set(0, 0, c64(1.0, 0.0));
        let err = inverse(&m).unwrap_err();
        assert!(matches!(err, QmathError::SingularMatrix { .. }));
    }

    #[test]
    fn dilation_of_identity_has_trivial_blocks() {
        let id = Matrix::identity(4);
        let u = dilation_unitary(&id).unwrap();
        assert!(is_unitary(&u, 1e-9));
        let mut expected = Matrix::zeros(8, 8);
        expected.set_block(0, 0, &id);
        expected.set_block(4, 4, &id.scale(c64(-1.0, 0.0)));
        assert!(u.max_abs_diff(&expected) < 1e-12);
        // On the success branch the input is reproduced exactly.
        let state = [c64(0.5, 0.0), c64(0.5, 0.0), c64(0.5, 0.0), c64(0.0, 0.5)];
        let mut embedded = vec![c64(0.0, 0.0); 8];
        embedded[..4].copy_from_slice(&state);
        let rotated = u.mul_vec(&embedded);
        for (got, want) in rotated[..4].iter().zip(&state) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn dilation_of_zero_never_succeeds() {
        let u = dilation_unitary(&Matrix::zeros(4, 4)).unwrap();
        assert!(is_unitary(&u, 1e-9));
        let mut embedded = vec![c64(0.0, 0.0); 8];
        embedded[0] = c64(1.0, 0.0);
        let rotated = u.mul_vec(&embedded);
        let success: f64 = rotated[..4].iter().map(|z| z.norm_sqr()).sum();
        assert!(success < 1e-28);
    }

    #[test]
    fn dilation_rejects_expanding_maps() {
        let m = Matrix::identity(4).scale(c64(1.5, 0.0));
        assert!(matches!(
            dilation_unitary(&m).unwrap_err(),
            QmathError::NormExceeded { .. }
        ));
    }

    #[test]
    fn dilation_on_random_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..25 {
            let m = random_matrix(&mut rng, 4);
            let s_max = singular_values(&m).unwrap()[0];
            let contraction = m.scale(c64(1.0 / (s_max + 1e-12), 0.0));
            let u = dilation_unitary(&contraction).unwrap();
            assert!(is_unitary(&u, 1e-9));
            let mut top_left = Matrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    top_left.set(i, j, u.get(i, j));
                }
            }
            assert!(top_left.max_abs_diff(&contraction) < 1e-12);
        }
    }
}
