use super::eigen::sym_eig;
use super::matrix::Matrix;
use super::LinalgError;

/// `true` when `x ≺ y`: every prefix sum of `x` sorted non-increasing is at
/// most the matching prefix sum of `y`, with equal totals.
///
/// Comparisons allow an absolute slack of `tol` scaled by the largest entry.
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<bool, LinalgError> {
    if x.len() != y.len() {
        return Err(LinalgError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let scale = x.iter().chain(y).fold(1.0_f64, |m, v| m.max(v.abs())) * x.len().max(1) as f64;
    let slack = tol * scale;
    let (xs, ys) = (sorted_desc(x), sorted_desc(y));
    let (mut px, mut py) = (0.0, 0.0);
    for (a, b) in xs.iter().zip(&ys) {
        px += a;
        py += b;
        if px > py + slack {
            return Ok(false);
        }
    }
    Ok((px - py).abs() <= slack)
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Smallest eigenvalue `≥ -tol`.
pub fn is_psd(a: &Matrix, tol: f64) -> Result<bool, LinalgError> {
    let spectrum = sym_eig(a, tol)?;
    Ok(spectrum.smallest().is_none_or(|q| q >= -tol))
}
