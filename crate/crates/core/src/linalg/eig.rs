use alloc::vec::Vec;

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Eigendecomposition `A = V diag(values) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V† A V`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors.adjoint() * a) * &self.vectors
    }

    /// `V B V†`.
    pub fn from_eigenbasis(&self, b: &ComplexMatrix) -> ComplexMatrix {
        &(&self.vectors * b) * &self.vectors.adjoint()
    }

    /// `V diag(f(values)) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let mut mapped = Vec::with_capacity(self.values.len());
        for &v in &self.values {
            let y = f(v);
            if !y.is_finite() {
                return Err(Error::Domain { value: v });
            }
            mapped.push(y);
        }
        Ok(self.from_eigenbasis(&ComplexMatrix::from_diagonal(&mapped)))
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.from_eigenbasis(&ComplexMatrix::from_diagonal(&self.values))
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// The input is symmetrized as `(A + A†)/2` first. Rotations are skipped
/// when the off-diagonal entry is negligible relative to the geometric mean
/// of the two diagonal entries, which keeps small eigenvalues of graded
/// positive-definite matrices accurate.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries"));
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let z = m[(p, q)];
                let r = z.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if r <= f64::EPSILON * 0.5 * libm::sqrt(libm::fabs(app * aqq)) {
                    m[(p, q)] = ZERO;
                    m[(q, p)] = ZERO;
                    continue;
                }
                rotated = true;
                let phase = z / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // U = [[e^{iφ} c, e^{iφ} s], [-s, c]] on the (p, q) plane.
                let upp = phase * c;
                let upq = phase * s;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * upp - mkq * s;
                    m[(k, q)] = mkp * upq + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = upp.conj() * mpk - mqk * s;
                    m[(q, k)] = upq.conj() * mpk + mqk * c;
                }
                m[(p, p)] = C64::new(app - t * r, 0.0);
                m[(q, q)] = C64::new(aqq + t * r, 0.0);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp - vkq * s;
                    v[(k, q)] = vkp * upq + vkq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEig { values, vectors })
}

/// Singular values by one-sided (Hestenes) Jacobi, in no particular order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries"));
    }
    let n = a.dim();
    // columns stored contiguously
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: C64 = cp.iter().zip(cq).map(|(x, y)| x.conj() * y).sum();
                    (alpha, beta, gamma)
                };
                let r = gamma.norm();
                if r == 0.0 || r <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let upp = phase * c;
                let upq = phase * s;
                let (left, right) = cols.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = xp * upp - xq * s;
                    *y = xp * upq + xq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    Ok(cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|z| z.norm_sqr()).sum::<f64>()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{schatten_norm, Schatten};

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn diagonal_input_is_returned_as_is() {
        let e = hermitian_eig(&ComplexMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert_eq!(e.values, [1.0, 2.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = hermitian_eig(&pauli_x()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = ComplexMatrix::from_rows(
            2,
            &[C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        let err = &e.reconstruct() - &a;
        assert!(err.max_abs() < 1e-14);
    }

    #[test]
    fn rejects_nan() {
        let mut a = ComplexMatrix::identity(2);
        a[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert_eq!(
            hermitian_eig(&a).unwrap_err(),
            Error::InvalidInput("matrix has non-finite entries")
        );
    }

    #[test]
    fn singular_values_of_rank_one() {
        let u = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let p = ComplexMatrix::outer(&u, &u);
        let mut s = singular_values(&p).unwrap();
        s.sort_by(f64::total_cmp);
        assert!(s[0].abs() < 1e-15);
        assert!((s[1] - 1.0).abs() < 1e-15);
        assert!((schatten_norm(&p, Schatten::Trace).unwrap() - 1.0).abs() < 1e-15);
    }
}
