use crate::family::{counterexample_projections, Interval, StateFamily};
use crate::linalg::ComplexMatrix;

/// The family behind [`crate::family::counterexample31`] on `(−1, 1)`.
///
/// `ρ₀ = I/2` is filled in at the origin, where every derivative vanishes
/// but the eigenprojections have no limit.
pub fn counterexample_family() -> StateFamily {
    StateFamily::new(2, Interval::new(-1.0, 1.0), |t| {
        if t == 0.0 {
            return ComplexMatrix::from_diagonal(&[0.5, 0.5]);
        }
        let (p1, p2) = counterexample_projections(t);
        let g = libm::exp(-1.0 / (t * t));
        &p1.scale(0.5 * (1.0 + g)) + &p2.scale(0.5 * (1.0 - g))
    })
    .with_rho_prime(|t| {
        if t == 0.0 {
            return ComplexMatrix::zeros(2);
        }
        let phi = 1.0 / t;
        let g = libm::exp(-1.0 / (t * t));
        let (s2, c2) = (libm::sin(2.0 * phi), libm::cos(2.0 * phi));
        let split = ComplexMatrix::from_real_rows(2, &[c2, s2, s2, -c2]).expect("2x2");
        let turn = ComplexMatrix::from_real_rows(2, &[-2.0 * s2, 2.0 * c2, 2.0 * c2, 2.0 * s2]).expect("2x2");
        let dg = g * 2.0 / (t * t * t);
        &split.scale(0.5 * dg) + &turn.scale(-0.5 * g / (t * t))
    })
}

/// Distance from the origin below which the eigenvalue split
/// `e^{−1/θ²}` is lost in double precision.
pub const DEGENERATE_RADIUS: f64 = 0.2;

pub fn near_degenerate_origin(theta: f64) -> bool {
    libm::fabs(theta) < DEGENERATE_RADIUS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::DerivativeMode;

    #[test]
    fn analytic_derivative_matches_differences() {
        let fam = counterexample_family();
        for t in [-0.8, 0.45, 0.9] {
            let exact = fam.eval_rho_prime(t).unwrap();
            let num = fam.clone().with_mode(DerivativeMode::richardson()).eval_rho_prime(t).unwrap();
            assert!((&exact - &num).max_abs() < 1e-7, "θ = {t}");
        }
    }
}
