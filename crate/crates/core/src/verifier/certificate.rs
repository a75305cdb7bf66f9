use serde::Serialize;

use crate::linalg::majorization::is_psd;
use crate::linalg::matrix::Matrix;
use crate::model::{graph_to_jmatrix, CorrelationMatrix, EnsembleTerm, ProductEnsemble, SignSchedule, WeightedGraph};

use super::VerifyError;

/// Separable-state witness for a sign schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub correlation: CorrelationMatrix,
    pub ensemble: ProductEnsemble,
    pub psd_ok: bool,
    /// `max |C − ((1/μ) J + I)|` against the target.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub psd_ok: bool,
    pub deviation: f64,
    pub terms: usize,
}

impl Certificate {
    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            psd_ok: self.psd_ok,
            deviation: self.deviation,
            terms: self.ensemble.terms.len(),
        }
    }
}

/// `(1/μ) J + I` for a zz target, as a `3n x 3n` matrix.
pub fn normalized_correlation(target: &WeightedGraph, mu: f64) -> Matrix {
    let j = graph_to_jmatrix(target).to_dense();
    j.scale(1.0 / mu).add(&Matrix::identity(3 * target.n()))
}

/// Each interval contributes weight `τ/(2μ)` to the product state with Bloch
/// vectors `(0, 0, s_k)` and the same to its antipode; the mixture's
/// correlation matrix is compared with `(1/μ) J + I`.
pub fn product_certificate(s: &SignSchedule, target: &WeightedGraph, tol: f64) -> Result<Certificate, VerifyError> {
    if s.n != target.n() {
        return Err(VerifyError::DimensionMismatch {
            schedule: s.n,
            other: target.n(),
        });
    }
    let mu = s.overhead();
    if !(mu > 0.0) {
        return Err(VerifyError::ZeroOverhead);
    }
    let mut terms = Vec::with_capacity(2 * s.intervals.len());
    for iv in &s.intervals {
        for flip in [1.0, -1.0] {
            terms.push(EnsembleTerm {
                weight: iv.duration / (2.0 * mu),
                bloch: iv.signs.iter().map(|&x| [0.0, 0.0, flip * f64::from(x)]).collect(),
            });
        }
    }
    let ensemble = ProductEnsemble { n: s.n, terms };
    let correlation = ensemble.correlation();
    let expected = normalized_correlation(target, mu);
    let deviation = correlation.0.max_abs_diff(&expected);
    let psd_ok = is_psd(&correlation.0, tol)?;
    Ok(Certificate {
        correlation,
        ensemble,
        psd_ok,
        deviation,
    })
}
