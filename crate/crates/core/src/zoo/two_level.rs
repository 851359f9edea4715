use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::family::{Interval, StateFamily};
use crate::ldops::Model;
use crate::linalg::ComplexMatrix;
use crate::qfi::QfiSplit;

/// Eigenvalue `λ(θ)` attached to the rotating projection, with `λ'(θ)`.
#[derive(Clone)]
pub enum LambdaProfile {
    /// `(1 + tanh θ)/2`.
    Tanh,
    Constant(f64),
    Custom(Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>),
}

impl fmt::Debug for LambdaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaProfile::Tanh => f.write_str("Tanh"),
            LambdaProfile::Constant(c) => write!(f, "Constant({c})"),
            LambdaProfile::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl LambdaProfile {
    pub fn eval(&self, theta: f64) -> (f64, f64) {
        match self {
            LambdaProfile::Tanh => {
                let t = libm::tanh(theta);
                (0.5 * (1.0 + t), 0.5 * (1.0 - t * t))
            }
            LambdaProfile::Constant(c) => (*c, 0.0),
            LambdaProfile::Custom(f) => f(theta),
        }
    }
}

/// Projection onto `(cos θ, sin θ)`.
pub fn rotating_projection(theta: f64) -> ComplexMatrix {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    ComplexMatrix::from_real_rows(2, &[c * c, s * c, s * c, s * s]).expect("2x2")
}

/// Derivative of [`rotating_projection`].
pub fn rotating_projection_prime(theta: f64) -> ComplexMatrix {
    let (s2, c2) = (libm::sin(2.0 * theta), libm::cos(2.0 * theta));
    ComplexMatrix::from_real_rows(2, &[-s2, c2, c2, s2]).expect("2x2")
}

fn qubit_family(profile: LambdaProfile) -> StateFamily {
    let p1 = profile.clone();
    StateFamily::new(2, Interval::REAL_LINE, move |t| {
        let (l, _) = p1.eval(t);
        let p = rotating_projection(t);
        &p.scale(2.0 * l - 1.0) + &ComplexMatrix::identity(2).scale(1.0 - l)
    })
    .with_rho_prime(move |t| {
        let (l, dl) = profile.eval(t);
        let p = rotating_projection(t);
        let sign = &p.scale(2.0) - &ComplexMatrix::identity(2);
        &sign.scale(dl) + &rotating_projection_prime(t).scale(2.0 * l - 1.0)
    })
}

/// `λ(θ) P(θ) + (1 − λ(θ)) P(θ)^⊥` with both eigenvalues and eigenvectors moving.
#[derive(Debug, Clone)]
pub struct TwoLevelFamily1 {
    pub profile: LambdaProfile,
}

impl TwoLevelFamily1 {
    pub fn new(profile: LambdaProfile) -> Self {
        Self { profile }
    }

    pub fn family(&self) -> StateFamily {
        qubit_family(self.profile.clone())
    }

    pub fn qfi_oracle(&self, theta: f64, model: Model, source: TableSource) -> Result<QfiSplit> {
        let (l, dl) = self.profile.eval(theta);
        two_level_qfi_oracle(l, dl, model, source)
    }
}

/// Fixed eigenvalues `(1 ± r)/2` on a rotating eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelFamily2 {
    r: f64,
}

impl TwoLevelFamily2 {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidInput("r must lie in [0, 1)"));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        0.5 * (1.0 + self.r)
    }

    pub fn family(&self) -> StateFamily {
        qubit_family(LambdaProfile::Constant(self.lambda()))
    }

    pub fn qfi_oracle(&self, model: Model, source: TableSource) -> Result<QfiSplit> {
        two_level_qfi_oracle(self.lambda(), 0.0, model, source)
    }
}

/// Which closed form to evaluate for the projection part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    /// The expressions as tabulated in the literature.
    Printed,
    /// What each model's own definition yields: the Kubo–Mori form for BvN
    /// and `Tr(ρH²)` for the rest.
    Exact,
}

/// Closed-form `(I1, I2)` of a rotating qubit with eigenvalue `λ` on the
/// rotating projection.
pub fn two_level_qfi_oracle(lambda: f64, lambda_prime: f64, model: Model, source: TableSource) -> Result<QfiSplit> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::SingularState { min_eigenvalue: lambda.min(1.0 - lambda) });
    }
    let (l, q) = (lambda, 1.0 - lambda);
    let i1 = lambda_prime * lambda_prime / (l * q);
    let d = 2.0 * l - 1.0;
    let log_ratio = libm::log(l / q);
    let i2 = match (source, model) {
        (TableSource::Printed, Model::Bvn) => log_ratio * log_ratio,
        (TableSource::Exact, Model::Bvn) => 2.0 * d * log_ratio,
        (TableSource::Printed, Model::Ld1) => d * d / (2.0 * l * l * q * q),
        (TableSource::Exact, Model::Ld1) => d * d / (4.0 * l * l * q * q),
        (TableSource::Printed, Model::Ld2) => 2.0 * d * d / (l * q),
        (TableSource::Exact, Model::Ld2) => d * d / (l * q),
        (_, Model::Sld) => 4.0 * d * d,
    };
    Ok(QfiSplit { i1, i2 })
}

/// Table entries written in terms of `r` for the fixed-eigenvalue family.
pub fn table2_printed(r: f64, model: Model) -> f64 {
    let s = 1.0 - r * r;
    match model {
        Model::Bvn => {
            let l = libm::log((1.0 + r) / (1.0 - r));
            l * l
        }
        Model::Ld1 => 8.0 * r * r / (s * s),
        Model::Ld2 => 8.0 * r * r / s,
        Model::Sld => 4.0 * r * r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_diagonal_at_zero() {
        let fam = TwoLevelFamily1::new(LambdaProfile::Constant(0.7)).family();
        let rho = fam.eval_rho(0.0).unwrap();
        assert!((rho.matrix() - &ComplexMatrix::from_diagonal(&[0.7, 0.3])).max_abs() < 1e-15);
    }

    #[test]
    fn projection_derivative_at_zero() {
        let dp = rotating_projection_prime(0.0);
        assert_eq!(dp, ComplexMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap());
    }

    #[test]
    fn printed_table_in_r_matches_lambda_form() {
        let r = 0.3;
        let f = TwoLevelFamily2::new(r).unwrap();
        for m in Model::ALL {
            let v = f.qfi_oracle(m, TableSource::Printed).unwrap().i2;
            assert!((v - table2_printed(r, m)).abs() < 1e-13, "{m}");
        }
    }

    #[test]
    fn half_mixture_has_no_quantum_part() {
        for m in Model::ALL {
            for src in [TableSource::Printed, TableSource::Exact] {
                assert_eq!(two_level_qfi_oracle(0.5, 0.0, m, src).unwrap().i2, 0.0);
            }
        }
    }

    #[test]
    fn rejects_pure_states() {
        assert!(TwoLevelFamily2::new(1.0).is_err());
        assert!(two_level_qfi_oracle(1.0, 0.0, Model::Sld, TableSource::Exact).is_err());
    }
}
