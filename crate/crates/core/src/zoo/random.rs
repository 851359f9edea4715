use alloc::vec::Vec;

use rand::Rng;

use crate::error::Result;
use crate::family::{Interval, StateFamily};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianEig, C64};

/// Spacing of the log-weights of the random spectra; together with
/// [`SLOPE_BOUND`] it keeps neighbouring eigenvalues a factor `e^{0.1}`
/// apart on the whole domain.
pub const LOG_SPACING: f64 = 0.7;
pub const SLOPE_BOUND: f64 = 0.3;

/// Random real-analytic family `U(θ) D(θ) U(θ)†` on `(−1, 1)` with
/// `U(θ) = exp(iθK)` and `D(θ) = softmax(a + θb)`.
#[derive(Debug, Clone)]
pub struct RandomAnalyticFamily {
    log_weights: Vec<f64>,
    slopes: Vec<f64>,
    rotation: Option<HermitianEig>,
}

impl RandomAnalyticFamily {
    /// With `commuting`, `K = 0` and the family is diagonal.
    pub fn sample<R: Rng + ?Sized>(dim: usize, commuting: bool, rng: &mut R) -> Result<Self> {
        let log_weights = (0..dim).map(|j| -LOG_SPACING * j as f64 + rng.gen_range(-0.05..0.05)).collect();
        let slopes = (0..dim).map(|_| rng.gen_range(-SLOPE_BOUND..SLOPE_BOUND)).collect();
        let rotation = if commuting {
            None
        } else {
            let mut k = ComplexMatrix::zeros(dim);
            for i in 0..dim {
                k[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
                for j in (i + 1)..dim {
                    let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    k[(i, j)] = z;
                    k[(j, i)] = z.conj();
                }
            }
            Some(hermitian_eig(&k)?)
        };
        Ok(Self { log_weights, slopes, rotation })
    }

    pub fn dim(&self) -> usize {
        self.log_weights.len()
    }

    pub fn is_commuting(&self) -> bool {
        self.rotation.is_none()
    }

    fn weights(&self, theta: f64) -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = self.log_weights.iter().zip(&self.slopes).map(|(a, b)| a + theta * b).collect();
        let top = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = x.iter().map(|v| libm::exp(v - top)).collect();
        let total: f64 = e.iter().sum();
        let p: Vec<f64> = e.iter().map(|v| v / total).collect();
        let mean_slope: f64 = p.iter().zip(&self.slopes).map(|(p, b)| p * b).sum();
        let dp = p.iter().zip(&self.slopes).map(|(p, b)| p * (b - mean_slope)).collect();
        (p, dp)
    }

    /// `exp(iθK)`.
    fn rotation(&self, theta: f64) -> ComplexMatrix {
        match &self.rotation {
            None => ComplexMatrix::identity(self.dim()),
            Some(e) => {
                let v = &e.vectors;
                let scaled = ComplexMatrix::from_fn(v.dim(), |i, j| v[(i, j)] * C64::from_polar(1.0, theta * e.values[j]));
                &scaled * &v.adjoint()
            }
        }
    }

    pub fn generator(&self) -> ComplexMatrix {
        match &self.rotation {
            None => ComplexMatrix::zeros(self.dim()),
            Some(e) => e.reconstruct(),
        }
    }

    pub fn family(&self) -> StateFamily {
        let a = self.clone();
        let b = self.clone();
        StateFamily::new(self.dim(), Interval::new(-1.0, 1.0), move |t| {
            let u = a.rotation(t);
            let (p, _) = a.weights(t);
            &(&u * &ComplexMatrix::from_diagonal(&p)) * &u.adjoint()
        })
        .with_rho_prime(move |t| {
            let u = b.rotation(t);
            let (p, dp) = b.weights(t);
            let rho = &(&u * &ComplexMatrix::from_diagonal(&p)) * &u.adjoint();
            let spectral = &(&u * &ComplexMatrix::from_diagonal(&dp)) * &u.adjoint();
            let turn = b.generator().commutator(&rho).scale_complex(C64::new(0.0, 1.0));
            &turn + &spectral
        })
    }
}
