//! Dense complex kernels: cyclic Jacobi for Hermitian matrices and the
//! singular-value quantities derived from it.
//!
//! Products and LU inversion come from `nalgebra`; all spectral work goes
//! through [`hermitian_eigen`].

use crate::{CMatrix, C64};

const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius mass, relative to the Frobenius norm, at which a sweep stops.
const JACOBI_CONVERGENCE: f64 = 1e-13;

/// Eigendecomposition `A = V diag(values) V^†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

fn off_diagonal_mass(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Hermitian part `(A + A^†)/2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Cyclic Jacobi eigendecomposition of the Hermitian part of `a`.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    assert!(a.is_square(), "hermitian_eigen needs a square matrix");
    let n = a.nrows();
    let mut m = hermitian_part(a);
    let mut v = CMatrix::identity(n, n);
    let scale = m.norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_mass(&m) <= JACOBI_CONVERGENCE * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// One complex Jacobi rotation annihilating `m[(p, q)]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if abs <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = C64::new(0.0, 0.0);
        m[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    // phase g = apq/|apq|; G = diag(1, conj g) · [[c, s], [-s, c]]
    let g = apq / abs;
    let gc = g.conj();
    let zeta = (aqq - app) / (2.0 * abs);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = m.nrows();

    // columns: M <- M G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * gc * s;
        m[(k, q)] = mkp * s + mkq * gc * c;
    }
    // rows: M <- G^† M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * g * s;
        m[(q, k)] = mpk * s + mqk * g * c;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..v.nrows() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * gc * s;
        v[(k, q)] = vkp * s + vkq * gc * c;
    }
}

/// Eigenvalues (ascending) of the Hermitian part of `a`.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    hermitian_eigen(a).values
}

/// Singular values of `a` in ascending order, `min(rows, cols)` of them.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    // a direct SVD keeps small singular values accurate; sqrt(eig(a^†a)) would not
    let mut sv: Vec<f64> = a.clone().svd_unordered(false, false).singular_values.iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Smallest singular value of `a` seen as a map on its column space:
/// `sqrt(λ_min(a^† a))`, which is zero for wide matrices.
pub fn min_singular_value(a: &CMatrix) -> f64 {
    if a.nrows() < a.ncols() {
        return 0.0;
    }
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `rel_tol · ‖a‖`.
pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.last().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Spectral norm of `a - a^†`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    spectral_norm(&(a - a.adjoint()))
}

/// LU inverse; `None` when the factorization is singular.
pub fn inverse(a: &CMatrix) -> Option<CMatrix> {
    a.clone().try_inverse()
}

/// Block-diagonal matrix assembled from square or rectangular blocks.
pub fn block_diagonal(blocks: &[CMatrix]) -> CMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn jacobi_diagonalizes_complex_hermitian() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.5),
                c(0.25, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let eig = hermitian_eigen(&a);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            3,
            eig.values.iter().map(|&l| c(l, 0.0)),
        ));
        let back = &eig.vectors * d * eig.vectors.adjoint();
        assert!((back - &a).norm() < 1e-12);
        let unit = eig.vectors.adjoint() * &eig.vectors;
        assert!((unit - CMatrix::identity(3, 3)).norm() < 1e-12);

        let mut reference: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(reference) {
            assert_relative_eq!(*x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_values_of_nilpotent() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let sv = singular_values(&a);
        assert_relative_eq!(sv[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(sv[1], 2.0, epsilon = 1e-14);
        assert_eq!(numerical_rank(&a, 1e-12), 1);
    }

    #[test]
    fn wide_matrix_has_zero_min_singular_value() {
        let a = CMatrix::from_element(1, 3, c(1.0, 0.0));
        assert_eq!(min_singular_value(&a), 0.0);
        assert_relative_eq!(spectral_norm(&a), 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let eig = hermitian_eigen(&CMatrix::zeros(2, 2));
        assert_eq!(eig.values, vec![0.0, 0.0]);
    }
}
