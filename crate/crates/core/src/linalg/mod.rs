//! Dense complex Hermitian linear algebra.
//!
//! Everything the logarithmic-derivative formulas need reduces to three
//! things: a reliable Hermitian eigensolver, spectral matrix functions, and
//! the scalar kernels applied entrywise in an eigenbasis. The kernels live
//! here too so the other modules never evaluate an integral numerically.

mod eig;
mod matrix;

pub use eig::{hermitian_eig, singular_values, HermitianEig};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::ZERO;

use crate::error::{Error, Result};

/// `V diag(f(λ)) V†` for Hermitian `a`.
///
/// Fails with [`Error::Domain`] carrying the first eigenvalue for which `f`
/// is not finite, so `ln` on a singular matrix or `x^{-1/2}` on a negative
/// eigenvalue is reported rather than propagated as NaN.
pub fn matrix_function(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    hermitian_eig(a)?.apply(f)
}

/// Relative separation below which [`logmean`] switches to its series.
pub const LOGMEAN_SERIES_THRESHOLD: f64 = 1e-8;

/// Logarithmic mean `(a - b) / (ln a - ln b)`, extended by `a` at `a = b`.
///
/// This is `∫₀¹ aᵗ b¹⁻ᵗ dt`, the weight that turns the Kubo–Mori integral
/// into an entrywise product in the eigenbasis.
pub fn logmean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain { value: a });
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain { value: b });
    }
    Ok(logmean_unchecked(a, b))
}

#[inline]
pub(crate) fn logmean_unchecked(a: f64, b: f64) -> f64 {
    let diff = a - b;
    if libm::fabs(diff) <= LOGMEAN_SERIES_THRESHOLD * (a + b) {
        // sqrt(ab) * sinh(u/2) / (u/2), u = ln(a/b)
        let u = libm::log1p(diff / b);
        let u2 = u * u;
        return libm::sqrt(a * b) * (1.0 + u2 / 24.0 + u2 * u2 / 1920.0 + u2 * u2 * u2 / 322_560.0);
    }
    let ratio = a / b;
    let log_ratio = if (0.5..=2.0).contains(&ratio) {
        libm::log1p(diff / b)
    } else {
        libm::log(a) - libm::log(b)
    };
    diff / log_ratio
}

/// Which Schatten norm to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schatten {
    /// Sum of singular values.
    Trace,
    /// `sqrt(Tr A†A)`.
    Frobenius,
    /// Largest singular value.
    Operator,
}

pub fn schatten_norm(a: &ComplexMatrix, p: Schatten) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries"));
    }
    match p {
        Schatten::Frobenius => {
            Ok(libm::sqrt(a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>()))
        }
        Schatten::Trace => Ok(singular_values(a)?.iter().sum()),
        Schatten::Operator => Ok(singular_values(a)?.into_iter().fold(0.0, f64::max)),
    }
}

/// Trace norm of a matrix already known to be finite.
pub(crate) fn trace_norm(a: &ComplexMatrix) -> f64 {
    schatten_norm(a, Schatten::Trace).unwrap_or(f64::INFINITY)
}

pub(crate) fn frobenius(a: &ComplexMatrix) -> f64 {
    schatten_norm(a, Schatten::Frobenius).unwrap_or(f64::INFINITY)
}
