use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::eigen::herm_eig;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense row-major complex square-or-rectangular matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let mut m = CMatrix::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = CMatrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Max deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        p.max_abs_diff(&CMatrix::identity(self.cols))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[x * n + col]
                        .norm()
                        .partial_cmp(&a[y * n + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in (col + 1)..n {
                let f = a[r * n + col] / p;
                if f == ZERO {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= f * v;
                }
            }
        }
        det
    }

    /// Operator (spectral) norm. Exact on diagonal matrices, from a Jacobi
    /// spectrum up to 64 columns, power iteration on `A†A` beyond that.
    pub fn op_norm(&self) -> f64 {
        if self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == ZERO)) {
            return (0..self.rows).map(|i| self[(i, i)].norm()).fold(0.0, f64::max);
        }
        if self.cols <= 64 {
            let spectrum = if self.is_hermitian(0.0) {
                herm_eig(self, 1e-12).map(|e| e.values.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
            } else {
                herm_eig(&self.adjoint().matmul(self), 1e-12).map(|e| e.values[0].max(0.0).sqrt())
            };
            if let Ok(norm) = spectrum {
                return norm;
            }
        }
        operator_norm(self, 1e-12, 20_000)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }
}

/// Largest singular value of `a` by power iteration on `A†A`, stopped once the
/// Rayleigh quotient changes by less than `rel_tol` relative.
pub fn operator_norm(a: &CMatrix, rel_tol: f64, max_iter: usize) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let ah = a.adjoint();
    // deterministic start vector with no special symmetry
    let mut v: Vec<C64> = (0..n)
        .map(|i| {
            let x = i as f64 + 1.0;
            C64::new(1.0 + 0.37 * (x * 0.731).sin(), 0.29 * (x * 1.313).cos())
        })
        .collect();
    normalize(&mut v);
    let mut last = 0.0;
    for it in 0..max_iter {
        let w = a.matvec(&v);
        let mut z = ah.matvec(&w);
        let lambda: f64 = v.iter().zip(&z).map(|(x, y)| (x.conj() * y).re).sum();
        let nz = normalize(&mut z);
        if nz == 0.0 {
            return 0.0;
        }
        v = z;
        if it > 3 && (lambda - last).abs() <= rel_tol * lambda.abs().max(f64::MIN_POSITIVE) {
            return lambda.max(0.0).sqrt();
        }
        last = lambda;
    }
    last.max(0.0).sqrt()
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Pauli matrix for axis 0 = x, 1 = y, 2 = z.
pub fn pauli(axis: usize) -> CMatrix {
    match axis {
        0 => CMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]),
        1 => CMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]),
        2 => CMatrix::from_rows(&[[ONE, ZERO], [ZERO, -ONE]]),
        _ => panic!("Pauli axis out of range: {axis}"),
    }
}
