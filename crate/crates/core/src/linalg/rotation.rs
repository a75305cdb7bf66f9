//! Signed 3x3 SVD with rotation factors and the SO(3) <-> SU(2) correspondence.

use super::complex::{pauli, CMatrix, C64, I, ONE, ZERO};
use super::matrix::{cross, dot3, mat3_det, mat3_identity, mat3_mul, mat3_transpose, norm3, Mat3};
use super::LinalgError;

/// `M = U · diag(s) · V` with `U, V ∈ SO(3)`.
///
/// `s[0] ≥ s[1] ≥ |s[2]|`; `s[2]` carries the sign of `det M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedSvd3 {
    pub u: Mat3,
    pub s: [f64; 3],
    pub v: Mat3,
}

impl SignedSvd3 {
    pub fn reconstruct(&self) -> Mat3 {
        let mut us = self.u;
        for row in us.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                *x *= self.s[j];
            }
        }
        mat3_mul(&us, &self.v)
    }

    /// `Σ |s_α|`, the operator norm of the matching two-qubit interaction.
    pub fn nuclear_sum(&self) -> f64 {
        self.s.iter().map(|x| x.abs()).sum()
    }
}

/// Signed singular value decomposition of a real 3x3 matrix.
///
/// Ordinary SVD by one-sided Jacobi, after which any reflection in either
/// factor is moved into the sign of the smallest singular value so that both
/// factors are proper rotations.
pub fn svd3_special(m: &Mat3) -> SignedSvd3 {
    // columns of B and W; B = M W
    let mut b = [[0.0; 3]; 3];
    for j in 0..3 {
        for i in 0..3 {
            b[j][i] = m[i][j];
        }
    }
    let mut w = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _sweep in 0..60 {
        let mut changed = false;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = dot3(b[i], b[i]);
            let beta = dot3(b[j], b[j]);
            let gamma = dot3(b[i], b[j]);
            if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                continue;
            }
            changed = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = if zeta == 0.0 {
                1.0
            } else {
                zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            for k in 0..3 {
                let (bi, bj) = (b[i][k], b[j][k]);
                b[i][k] = c * bi - s * bj;
                b[j][k] = s * bi + c * bj;
                let (wi, wj) = (w[i][k], w[j][k]);
                w[i][k] = c * wi - s * wj;
                w[j][k] = s * wi + c * wj;
            }
        }
        if !changed {
            break;
        }
    }

    let mut sigma = [norm3(b[0]), norm3(b[1]), norm3(b[2])];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| sigma[y].partial_cmp(&sigma[x]).unwrap_or(std::cmp::Ordering::Equal));
    let b = order.map(|k| b[k]);
    let w = order.map(|k| w[k]);
    sigma = order.map(|k| sigma[k]);

    let smax = sigma[0];
    let mut ucols: Vec<[f64; 3]> = Vec::with_capacity(3);
    for k in 0..3 {
        if sigma[k] > 1e-300 && sigma[k] > smax * 1e-15 {
            ucols.push(b[k].map(|x| x / sigma[k]));
        } else {
            sigma[k] = 0.0;
        }
    }
    complete_orthonormal(&mut ucols);

    let mut u = columns_to_mat(&[ucols[0], ucols[1], ucols[2]]);
    let mut wm = columns_to_mat(&w);
    if mat3_det(&u) < 0.0 {
        negate_column(&mut u, 2);
        sigma[2] = -sigma[2];
    }
    if mat3_det(&wm) < 0.0 {
        negate_column(&mut wm, 2);
        sigma[2] = -sigma[2];
    }
    SignedSvd3 {
        u,
        s: sigma,
        v: mat3_transpose(&wm),
    }
}

fn columns_to_mat(cols: &[[f64; 3]; 3]) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = col[i];
        }
    }
    m
}

fn negate_column(m: &mut Mat3, j: usize) {
    for row in m.iter_mut() {
        row[j] = -row[j];
    }
}

/// Extends a list of ≤ 3 orthonormal vectors to an orthonormal basis.
fn complete_orthonormal(cols: &mut Vec<[f64; 3]>) {
    if cols.len() == 2 {
        let c = cross(cols[0], cols[1]);
        let n = norm3(c);
        cols.push(c.map(|x| x / n));
        return;
    }
    let basis = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for e in basis {
        if cols.len() == 3 {
            break;
        }
        let mut v = e;
        for c in cols.iter() {
            let d = dot3(v, *c);
            for k in 0..3 {
                v[k] -= d * c[k];
            }
        }
        let n = norm3(v);
        if n > 0.5 {
            cols.push(v.map(|x| x / n));
        }
    }
}

/// Checks `RᵀR = I` and `det R = 1` within `tol`.
pub fn is_rotation(r: &Mat3, tol: f64) -> bool {
    let rtr = mat3_mul(&mat3_transpose(r), r);
    let id = mat3_identity();
    let ortho = (0..3).all(|i| (0..3).all(|j| (rtr[i][j] - id[i][j]).abs() <= tol));
    ortho && (mat3_det(r) - 1.0).abs() <= tol
}

/// Element of SU(2), stored as its 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2(pub [[C64; 2]; 2]);

impl Su2 {
    pub fn identity() -> Self {
        Su2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// `exp(-i θ/2 n·σ)`; its adjoint action rotates by `θ` about `n`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = norm3(axis);
        let axis = if n > 0.0 { axis.map(|x| x / n) } else { [0.0, 0.0, 1.0] };
        let (s, c) = (0.5 * angle).sin_cos();
        Su2::from_quaternion([c, s * axis[0], s * axis[1], s * axis[2]])
    }

    /// `q0 I - i (q1 σx + q2 σy + q3 σz)` for a unit quaternion.
    pub fn from_quaternion(q: [f64; 4]) -> Self {
        let [q0, q1, q2, q3] = q;
        Su2([
            [C64::new(q0, -q3), C64::new(-q2, -q1)],
            [C64::new(q2, -q1), C64::new(q0, q3)],
        ])
    }

    /// Inverse of [`Su2::from_quaternion`] (assumes `self` is in SU(2)).
    pub fn quaternion(&self) -> [f64; 4] {
        let m = &self.0;
        [
            0.5 * (m[0][0].re + m[1][1].re),
            -0.5 * (m[0][1].im + m[1][0].im),
            0.5 * (m[1][0].re - m[0][1].re),
            0.5 * (m[1][1].im - m[0][0].im),
        ]
    }

    /// Axis (unit) and angle in `[0, 2π]` such that `from_axis_angle` returns `self`.
    pub fn axis_angle(&self) -> ([f64; 3], f64) {
        let q = self.quaternion();
        let v = [q[1], q[2], q[3]];
        let s = norm3(v);
        if s < 1e-15 {
            // ±identity
            return (
                [0.0, 0.0, 1.0],
                if q[0] >= 0.0 { 0.0 } else { 2.0 * std::f64::consts::PI },
            );
        }
        let angle = 2.0 * s.atan2(q[0]);
        (v.map(|x| x / s), angle)
    }

    /// The Pauli matrix `-i σ_axis`, which has determinant one.
    pub fn pauli(axis: usize) -> Self {
        let p = pauli(axis).scale(-I);
        Su2([[p[(0, 0)], p[(0, 1)]], [p[(1, 0)], p[(1, 1)]]])
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_rows(&self.0)
    }

    pub fn mul(&self, other: &Su2) -> Su2 {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Su2(out)
    }

    pub fn adjoint(&self) -> Su2 {
        let m = &self.0;
        Su2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.to_cmatrix().unitarity_defect()
    }

    /// Distance to `other` modulo the global sign `±1`.
    pub fn distance_up_to_sign(&self, other: &Su2) -> f64 {
        let a = self.to_cmatrix();
        let b = other.to_cmatrix();
        a.max_abs_diff(&b).min(a.max_abs_diff(&b.scale(-ONE)))
    }
}

/// Adjoint action of `u`: `R[β][α] = ½ Re tr(σ_β u σ_α u†)`, so that
/// `u σ_α u† = Σ_β R[β][α] σ_β`.
pub fn su2_to_so3(u: &Su2) -> Mat3 {
    let um = u.to_cmatrix();
    let ud = um.adjoint();
    let mut r = [[0.0; 3]; 3];
    for alpha in 0..3 {
        let conj = um.matmul(&pauli(alpha)).matmul(&ud);
        for (beta, row) in r.iter_mut().enumerate() {
            row[alpha] = 0.5 * pauli(beta).matmul(&conj).trace().re;
        }
    }
    r
}

/// Lifts a rotation to SU(2) (one of the two preimages) via its quaternion.
pub fn so3_to_su2(r: &Mat3) -> Result<Su2, LinalgError> {
    if !r.iter().flatten().all(|x| x.is_finite()) || !is_rotation(r, 1e-8) {
        return Err(LinalgError::NotRotation { det: mat3_det(r) });
    }
    let tr = r[0][0] + r[1][1] + r[2][2];
    // Shepperd: pivot on the largest of (tr, R00, R11, R22)
    let q = if tr >= r[0][0] && tr >= r[1][1] && tr >= r[2][2] {
        let q0 = 0.5 * (1.0 + tr).max(0.0).sqrt();
        let f = 0.25 / q0;
        [
            q0,
            (r[2][1] - r[1][2]) * f,
            (r[0][2] - r[2][0]) * f,
            (r[1][0] - r[0][1]) * f,
        ]
    } else if r[0][0] >= r[1][1] && r[0][0] >= r[2][2] {
        let q1 = 0.5 * (1.0 + r[0][0] - r[1][1] - r[2][2]).max(0.0).sqrt();
        let f = 0.25 / q1;
        [
            (r[2][1] - r[1][2]) * f,
            q1,
            (r[0][1] + r[1][0]) * f,
            (r[0][2] + r[2][0]) * f,
        ]
    } else if r[1][1] >= r[2][2] {
        let q2 = 0.5 * (1.0 - r[0][0] + r[1][1] - r[2][2]).max(0.0).sqrt();
        let f = 0.25 / q2;
        [
            (r[0][2] - r[2][0]) * f,
            (r[0][1] + r[1][0]) * f,
            q2,
            (r[1][2] + r[2][1]) * f,
        ]
    } else {
        let q3 = 0.5 * (1.0 - r[0][0] - r[1][1] + r[2][2]).max(0.0).sqrt();
        let f = 0.25 / q3;
        [
            (r[1][0] - r[0][1]) * f,
            (r[0][2] + r[2][0]) * f,
            (r[1][2] + r[2][1]) * f,
            q3,
        ]
    };
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(Su2::from_quaternion(q.map(|x| x / n)))
}

/// Some rotation taking `e_z` to the unit vector `target`.
pub fn rotation_z_to(target: [f64; 3]) -> Mat3 {
    let n = norm3(target);
    let z = target.map(|x| x / n);
    let helper = if z[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let x = cross(helper, z);
    let nx = norm3(x);
    let x = x.map(|v| v / nx);
    let y = cross(z, x);
    columns_to_mat(&[x, y, z])
}
