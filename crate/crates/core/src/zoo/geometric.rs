use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::{Interval, StateFamily};
use crate::ldops::{ld_operator, Model};
use crate::linalg::ComplexMatrix;
use crate::qfi::qfi_of;

/// Largest discarded tail mass `e^{−Nθ}` accepted by [`geometric_qfi`].
pub const GEOMETRIC_TAIL_TOL: f64 = 1e-12;

/// Diagonal family with weights `∝ e^{−jθ}` on `j = 0..trunc_dim`,
/// renormalized; eigenvectors never move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometricFamily {
    trunc_dim: usize,
}

impl GeometricFamily {
    pub fn new(trunc_dim: usize) -> Result<Self> {
        if trunc_dim == 0 {
            return Err(Error::InvalidInput("truncation dimension must be positive"));
        }
        Ok(Self { trunc_dim })
    }

    /// Smallest truncation whose discarded tail at `θ` is within tolerance.
    pub fn for_theta(theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::OutOfDomain { theta, lo: 0.0, hi: f64::INFINITY });
        }
        let n = libm::ceil(-libm::log(GEOMETRIC_TAIL_TOL) / theta) as usize;
        Self::new(n.max(2))
    }

    pub fn trunc_dim(&self) -> usize {
        self.trunc_dim
    }

    /// Mass the truncation discards, `e^{−Nθ}`.
    pub fn tail(&self, theta: f64) -> f64 {
        libm::exp(-(self.trunc_dim as f64) * theta)
    }

    /// Renormalized weights.
    pub fn weights(&self, theta: f64) -> Vec<f64> {
        let raw: Vec<f64> = (0..self.trunc_dim).map(|j| libm::exp(-(j as f64) * theta)).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    pub fn family(&self) -> StateFamily {
        let me = *self;
        StateFamily::new(self.trunc_dim, Interval::new(0.0, f64::INFINITY), move |t| {
            ComplexMatrix::from_diagonal(&me.weights(t))
        })
        .with_rho_prime(move |t| {
            let w = me.weights(t);
            let mean: f64 = w.iter().enumerate().map(|(j, p)| j as f64 * p).sum();
            let d: Vec<f64> = w.iter().enumerate().map(|(j, p)| p * (mean - j as f64)).collect();
            ComplexMatrix::from_diagonal(&d)
        })
    }
}

/// Fisher information of the untruncated geometric distribution, `e^θ/(e^θ − 1)²`.
pub fn geometric_closed_form(theta: f64) -> f64 {
    let e = libm::expm1(theta);
    (e + 1.0) / (e * e)
}

/// Four-model informations on the truncated family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricQfi {
    /// Indexed by [`Model::index`].
    pub per_model: [f64; 4],
    pub closed_form: f64,
}

impl GeometricQfi {
    pub fn max_spread(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in self.per_model {
            for b in self.per_model {
                worst = worst.max(libm::fabs(a - b));
            }
        }
        worst
    }
}

pub fn geometric_qfi(theta: f64, trunc_dim: usize) -> Result<GeometricQfi> {
    let g = GeometricFamily::new(trunc_dim)?;
    let tail = g.tail(theta);
    if tail > GEOMETRIC_TAIL_TOL {
        return Err(Error::Truncation { defect: tail });
    }
    let br = g.family().branches(theta)?;
    let mut per_model = [0.0; 4];
    for m in Model::ALL {
        per_model[m.index()] = qfi_of(&br, &ld_operator(&br, m));
    }
    Ok(GeometricQfi { per_model, closed_form: geometric_closed_form(theta) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_four_weights_before_renormalization() {
        let g = GeometricFamily::new(4).unwrap();
        let w = g.weights(core::f64::consts::LN_2);
        let total = 1.0 + 0.5 + 0.25 + 0.125;
        for (j, expect) in [0.5, 0.25, 0.125, 0.0625].iter().enumerate() {
            // raw weight e^{-jθ}(1 - e^{-θ}) is the renormalized weight times the kept mass
            assert!((w[j] * total * 0.5 - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_at_ln2() {
        assert!((geometric_closed_form(core::f64::consts::LN_2) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn short_truncation_is_rejected() {
        assert!(matches!(geometric_qfi(0.5, 10), Err(Error::Truncation { .. })));
    }
}
