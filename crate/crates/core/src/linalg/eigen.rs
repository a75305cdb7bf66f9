//! Jacobi eigensolvers for real symmetric and complex Hermitian matrices,
//! plus a spectral decomposition for unitaries built on top of them.

use serde::{Deserialize, Serialize};

use super::complex::{CMatrix, C64, ZERO};
use super::matrix::Matrix;
use super::LinalgError;

/// Maximum number of cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted non-increasing, with optional orthonormal eigenvectors
/// stored as the columns of `vectors` in the same order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Option<Matrix>,
}

impl Spectrum {
    pub fn largest(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn smallest(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// `max |A - V diag(values) V^T|`, or `None` without vectors.
    pub fn reconstruction_error(&self, a: &Matrix) -> Option<f64> {
        let v = self.vectors.as_ref()?;
        let rebuilt = v.matmul(&Matrix::from_diag(&self.values)).matmul(&v.transpose());
        Some(rebuilt.max_abs_diff(a))
    }
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
///
/// Uses threshold sweeps for the first three passes, then rotates every
/// non-negligible off-diagonal entry. Eigenvalues are sorted non-increasing with
/// ties kept in original diagonal order.
pub fn sym_eig(a: &Matrix, tol: f64) -> Result<Spectrum, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let scale = a.max_abs().max(1.0);
    if !a.is_symmetric(tol * scale) {
        return Err(LinalgError::NotSymmetric {
            asymmetry: max_asymmetry(a),
        });
    }
    let n = a.rows();
    let mut m = Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = Matrix::identity(n);
    let norm = m.frobenius_norm();

    let mut converged = n <= 1 || norm == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps: sweep });
        }
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * norm * 1e-2 || off == 0.0 {
            break;
        }
        let threshold = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let (app, aqq) = (m[(p, p)], m[(q, q)]);
                // entries below rounding level of both diagonals are zeroed
                let small = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + small == app.abs() && aqq.abs() + small == aqq.abs() {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_real(&mut m, &mut v, p, q, c, s);
            }
        }
        sweep += 1;
        if !rotated && threshold == 0.0 {
            converged = true;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = m.diagonal();
    // stable sort keeps original index order on ties
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        values,
        vectors: Some(vectors),
    })
}

fn rotate_real(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn max_asymmetry(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Sorted non-increasing.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let vd = CMatrix::from_fn(self.vectors.rows(), d.len(), |i, j| self.vectors[(i, j)] * d[j]);
        vd.matmul(&self.vectors.adjoint())
    }
}

/// Complex Jacobi eigensolver for a Hermitian matrix.
pub fn herm_eig(a: &CMatrix, tol: f64) -> Result<HermitianEigen, LinalgError> {
    if a.rows() != a.cols() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let scale = a.max_abs().max(1.0);
    if !a.is_hermitian(tol * scale) {
        return Err(LinalgError::NotHermitian);
    }
    let n = a.rows();
    let mut m = CMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let norm = m.frobenius_norm();
    let mut sweep = 0;
    if n > 1 && norm > 0.0 {
        loop {
            let off: f64 = (0..n)
                .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
                .map(|(p, q)| m[(p, q)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= f64::EPSILON * norm * 1e-2 || off == 0.0 {
                break;
            }
            if sweep == MAX_SWEEPS {
                return Err(LinalgError::NoConvergence { sweeps: sweep });
            }
            let threshold = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    let mag = apq.norm();
                    let (app, aqq) = (m[(p, p)].re, m[(q, q)].re);
                    let small = 100.0 * mag;
                    if sweep > 3 && app.abs() + small == app.abs() && aqq.abs() + small == aqq.abs() {
                        m[(p, q)] = ZERO;
                        m[(q, p)] = ZERO;
                        continue;
                    }
                    if mag <= threshold || mag == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let phase = apq / mag;
                    let theta = (aqq - app) / (2.0 * mag);
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    rotate_complex(&mut m, &mut v, p, q, c, s, phase);
                }
            }
            sweep += 1;
            if !rotated && threshold == 0.0 {
                break;
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).unwrap_or(std::cmp::Ordering::Equal));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    })
}

/// Applies `J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` on indices `(p, q)`:
/// `M <- J† M J`, `V <- V J`.
fn rotate_complex(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let n = m.rows();
    let pc = phase.conj();
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -pc * s;
    let j_qq = pc * c;
    // M <- M J (columns)
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    // M <- J† M (rows)
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Spectral decomposition of a unitary: eigenphases in `(-π, π]` and an
/// orthonormal eigenbasis (columns).
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: CMatrix,
}

/// Diagonalizes a unitary by jointly diagonalizing the commuting Hermitian
/// parts `(U + U†)/2` and `(U - U†)/2i`.
pub fn unitary_eig(u: &CMatrix, tol: f64) -> Result<UnitaryEigen, LinalgError> {
    if u.rows() != u.cols() {
        return Err(LinalgError::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    if u.unitarity_defect() > tol.max(1e-12) * 10.0 {
        return Err(LinalgError::NotUnitary {
            defect: u.unitarity_defect(),
        });
    }
    let n = u.rows();
    let ud = u.adjoint();
    let re_part = u.add(&ud).scale(C64::new(0.5, 0.0));
    let im_part = u.sub(&ud).scale(C64::new(0.0, -0.5));
    let first = herm_eig(&re_part, 1e-9)?;

    // cluster nearly equal cosines; refine each cluster with the sine part
    let cluster_tol = 1e-7;
    let mut vectors = CMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (first.values[end - 1] - first.values[end]).abs() <= cluster_tol {
            end += 1;
        }
        let width = end - start;
        let block = CMatrix::from_fn(n, width, |i, j| first.vectors[(i, start + j)]);
        if width == 1 {
            for i in 0..n {
                vectors[(i, start)] = block[(i, 0)];
            }
        } else {
            let reduced = block.adjoint().matmul(&im_part).matmul(&block);
            let reduced = CMatrix::from_fn(width, width, |i, j| 0.5 * (reduced[(i, j)] + reduced[(j, i)].conj()));
            let sub = herm_eig(&reduced, 1e-6)?;
            let rotated = block.matmul(&sub.vectors);
            for i in 0..n {
                for j in 0..width {
                    vectors[(i, start + j)] = rotated[(i, j)];
                }
            }
        }
        start = end;
    }

    let phases = (0..n)
        .map(|j| {
            let col: Vec<C64> = (0..n).map(|i| vectors[(i, j)]).collect();
            let ucol = u.matvec(&col);
            let rq: C64 = col.iter().zip(&ucol).map(|(a, b)| a.conj() * b).sum();
            if rq == ZERO {
                0.0
            } else {
                rq.arg()
            }
        })
        .collect();
    Ok(UnitaryEigen { phases, vectors })
}

/// `exp(i t H)` for Hermitian `H`.
pub fn expm_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix, LinalgError> {
    let eig = herm_eig(h, 1e-9)?;
    Ok(eig.apply(|lambda| C64::from_polar(1.0, lambda * t)))
}

/// Diagonal unitary `diag(e^{i p_j})`.
pub fn diagonal_phases(phases: &[f64]) -> CMatrix {
    CMatrix::from_diag(&phases.iter().map(|&p| C64::from_polar(1.0, p)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex::pauli;

    fn adjacency(n: usize, edges: &[(usize, usize)]) -> Matrix {
        let mut a = Matrix::zeros(n, n);
        for &(k, l) in edges {
            a[(k, l)] = 1.0;
            a[(l, k)] = 1.0;
        }
        a
    }

    #[test]
    fn complete_graph_k4_spectrum() {
        let a = Matrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
        let s = sym_eig(&a, 1e-9).unwrap();
        let expected = [3.0, -1.0, -1.0, -1.0];
        for (x, y) in s.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{:?}", s.values);
        }
        assert!(s.reconstruction_error(&a).unwrap() < 1e-12);
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = sym_eig(&Matrix::zeros(3, 3), 1e-9).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }

    #[test]
    fn star_spectrum() {
        let a = adjacency(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = sym_eig(&a, 1e-9).unwrap();
        let expected = [2.0, 0.0, 0.0, 0.0, -2.0];
        for (x, y) in s.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{:?}", s.values);
        }
    }

    #[test]
    fn rejects_non_symmetric() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(sym_eig(&a, 1e-9), Err(LinalgError::NotSymmetric { .. })));
    }

    #[test]
    fn hermitian_xx_yy_zz() {
        let h = pauli(0)
            .kron(&pauli(0))
            .add(&pauli(1).kron(&pauli(1)))
            .add(&pauli(2).kron(&pauli(2)));
        let e = herm_eig(&h, 1e-9).unwrap();
        let expected = [1.0, 1.0, 1.0, -3.0];
        for (x, y) in e.values.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(e.apply(|x| C64::new(x, 0.0)).max_abs_diff(&h) < 1e-12);
        assert!(e.vectors.unitarity_defect() < 1e-12);
    }

    #[test]
    fn unitary_eig_recovers_phases_with_degeneracy() {
        // exp(i 0.3 zz) has two doubly degenerate phases ±0.3
        let zz = pauli(2).kron(&pauli(2));
        let u = expm_i_hermitian(&zz, 0.3).unwrap();
        let e = unitary_eig(&u, 1e-9).unwrap();
        let mut p = e.phases.clone();
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [-0.3, -0.3, 0.3, 0.3];
        for (x, y) in p.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12, "{p:?}");
        }
        // identity and a phase-split degenerate cosine cluster (θ and -θ)
        let id = CMatrix::identity(4);
        assert!(unitary_eig(&id, 1e-9).unwrap().phases.iter().all(|p| p.abs() < 1e-12));
        let d = diagonal_phases(&[0.7, -0.7, 0.7, 2.0]);
        let e = unitary_eig(&d, 1e-9).unwrap();
        let rebuilt = e
            .vectors
            .matmul(&diagonal_phases(&e.phases))
            .matmul(&e.vectors.adjoint());
        assert!(rebuilt.max_abs_diff(&d) < 1e-10);
    }
}
