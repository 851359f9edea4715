//! Quantum Fisher informations of the four models, their splits, and the
//! statistical identities they satisfy.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::{spectral_branches, DensityMatrix, SpectralBranches, StateFamily};
use crate::ldops::{bvn_ld, kmb_residual, ld_operator, zero_expectation_check, LdOperator, Model};
use crate::linalg::{logmean_unchecked, ComplexMatrix};

/// Largest explicit tensor-power dimension [`ncopy_qfi`] will build.
pub const NCOPY_DIM_CAP: usize = 512;
/// Default `ε` sequence for [`relent_limit`].
pub const RELENT_EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
/// Central-difference step for `dH/dθ` in [`maximality_check`].
pub const MAXIMALITY_STEP: f64 = 1e-4;

/// A Hermitian observable, typically an estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::InvalidInput("observable has non-finite entries"));
        }
        if matrix.hermitian_defect() > 1e-12 * (1.0 + matrix.max_abs()) {
            return Err(Error::InvalidInput("observable is not Hermitian"));
        }
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<&LdOperator> for Observable {
    fn from(h: &LdOperator) -> Self {
        Self { matrix: h.matrix.clone() }
    }
}

/// `Σ_ij |H_ij|² L(λ_i, λ_j)` in the eigenbasis, `L` the logarithmic mean.
///
/// This is `∫₀¹ Tr(ρᵗ H ρ^{1−t} H) dt`.
pub fn qfi_bvn(br: &SpectralBranches, h: &LdOperator) -> f64 {
    let h_eb = br.to_eigenbasis(&h.matrix);
    kubo_mori_form(br, &h_eb)
}

fn kubo_mori_form(br: &SpectralBranches, a_eb: &ComplexMatrix) -> f64 {
    let n = br.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += a_eb[(i, j)].norm_sqr() * logmean_unchecked(br.level(i), br.level(j));
        }
    }
    acc
}

/// `Tr(ρH²)`.
pub fn qfi_variance(rho: &DensityMatrix, h: &LdOperator) -> f64 {
    let rh = rho.matrix() * &h.matrix;
    rh.trace_product(&h.matrix).re
}

/// The information of `h` under its own model's definition.
pub fn qfi_of(br: &SpectralBranches, h: &LdOperator) -> f64 {
    match h.model {
        Model::Bvn => qfi_bvn(br, h),
        _ => {
            let h_eb = br.to_eigenbasis(&h.matrix);
            let n = br.dim();
            let mut acc = 0.0;
            for i in 0..n {
                let row: f64 = (0..n).map(|j| h_eb[(i, j)].norm_sqr()).sum();
                acc += br.level(i) * row;
            }
            acc
        }
    }
}

pub fn qfi(br: &SpectralBranches, model: Model) -> f64 {
    qfi_of(br, &ld_operator(br, model))
}

/// `∫₀¹ ‖ρ^{(1−t)/2} (Y − Tr ρY) ρ^{t/2}‖₂² dt`.
pub fn breve_variance(br: &SpectralBranches, y: &Observable) -> f64 {
    let mean = br.rho().trace_product(y.matrix()).re;
    let centered = y.matrix() - &ComplexMatrix::identity(br.dim()).scale(mean);
    kubo_mori_form(br, &br.to_eigenbasis(&centered))
}

/// `Tr(ρY²) − (Tr ρY)²`.
pub fn variance(rho: &ComplexMatrix, y: &Observable) -> f64 {
    let mean = rho.trace_product(y.matrix()).re;
    let second = (rho * y.matrix()).trace_product(y.matrix()).re;
    second - mean * mean
}

/// Eigenvalue part and projection part of an information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiSplit {
    pub i1: f64,
    pub i2: f64,
}

impl QfiSplit {
    pub fn total(&self) -> f64 {
        self.i1 + self.i2
    }
}

/// `I1 = Σ m_k λ'²_k/λ_k` for every model and `I2 = QFI − I1`.
pub fn qfi_split(br: &SpectralBranches, model: Model) -> QfiSplit {
    let i1 = br.classical_information();
    QfiSplit { i1, i2: qfi(br, model) - i1 }
}

/// Everything the sweep reports at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiReport {
    pub theta: f64,
    /// Indexed by [`Model::index`].
    pub qfi: [f64; 4],
    pub i1: f64,
    pub i2: [f64; 4],
    /// Kubo–Mori residual of the BvN derivative.
    pub kmb_residual: f64,
    /// `Tr(ρH)` per model.
    pub zero_expectation: [f64; 4],
}

impl QfiReport {
    pub fn compute(fam: &StateFamily, theta: f64) -> Result<Self> {
        let rho = fam.eval_rho(theta)?;
        let rho_prime = fam.eval_rho_prime(theta)?;
        let br = spectral_branches(&rho, &rho_prime)?;
        Ok(Self::from_branches(theta, &rho, &br))
    }

    pub fn from_branches(theta: f64, rho: &DensityMatrix, br: &SpectralBranches) -> Self {
        let i1 = br.classical_information();
        let mut report = QfiReport {
            theta,
            qfi: [0.0; 4],
            i1,
            i2: [0.0; 4],
            kmb_residual: 0.0,
            zero_expectation: [0.0; 4],
        };
        for m in Model::ALL {
            let h = ld_operator(br, m);
            let q = qfi_of(br, &h);
            report.qfi[m.index()] = q;
            report.i2[m.index()] = q - i1;
            report.zero_expectation[m.index()] = zero_expectation_check(rho, &h);
            if m == Model::Bvn {
                report.kmb_residual = kmb_residual(br, &h);
            }
        }
        report
    }

    pub fn qfi(&self, m: Model) -> f64 {
        self.qfi[m.index()]
    }

    pub fn i2(&self, m: Model) -> f64 {
        self.i2[m.index()]
    }
}

/// Outcome of a local Cramér–Rao comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrCheck {
    /// `Tr(ρ'Θ)`, the local bias slope.
    pub u: f64,
    /// Variance of `Θ` (Kubo–Mori variance for BvN).
    pub lhs: f64,
    /// `u² / QFI`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `Var(Θ) ≥ Tr(ρ'Θ)² / QFI`.
pub fn local_cr_check(br: &SpectralBranches, theta_obs: &Observable, model: Model) -> Result<CrCheck> {
    let info = qfi(br, model);
    if info <= 1e-14 {
        return Err(Error::DegenerateInformation { qfi: info });
    }
    let u = br.rho_prime().trace_product(theta_obs.matrix()).re;
    let lhs = match model {
        Model::Bvn => breve_variance(br, theta_obs),
        _ => variance(&br.rho(), theta_obs),
    };
    let rhs = u * u / info;
    Ok(CrCheck { u, lhs, rhs, holds: lhs >= rhs - 1e-10 })
}

/// Information of `n` independent copies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NCopyQfi {
    pub value: f64,
    pub single: f64,
    /// Whether `value` came from an explicit tensor-power computation.
    pub explicit: bool,
    /// `‖H_n − Σ_j I⊗…⊗H⊗…⊗I‖_max` for the explicit build, else zero.
    pub local_sum_residual: f64,
}

/// QFI of `ρ^{⊗n}` with derivative `Σ_j ρ⊗…⊗ρ'⊗…⊗ρ`.
///
/// For `n ≤ 3` the tensor power is built and run through the full pipeline;
/// larger `n` use additivity directly.
pub fn ncopy_qfi(br: &SpectralBranches, model: Model, n: usize) -> Result<NCopyQfi> {
    if n == 0 {
        return Err(Error::InvalidInput("copy count must be positive"));
    }
    let single = qfi(br, model);
    if n == 1 {
        return Ok(NCopyQfi { value: single, single, explicit: true, local_sum_residual: 0.0 });
    }
    if n > 3 {
        return Ok(NCopyQfi { value: n as f64 * single, single, explicit: false, local_sum_residual: 0.0 });
    }
    let d = br.dim();
    let big = d.checked_pow(n as u32).unwrap_or(usize::MAX);
    if big > NCOPY_DIM_CAP {
        return Err(Error::ResourceLimit { dim: big, cap: NCOPY_DIM_CAP });
    }
    let rho = br.rho();
    let rho_prime = br.rho_prime();
    let h = ld_operator(br, model).matrix;
    let id = ComplexMatrix::identity(d);

    let power = |slot: usize, special: &ComplexMatrix, rest: &ComplexMatrix| {
        let mut acc = if slot == 0 { special.clone() } else { rest.clone() };
        for j in 1..n {
            acc = acc.kron(if j == slot { special } else { rest });
        }
        acc
    };
    let rho_n = power(n, &rho, &rho);
    let mut rho_prime_n = ComplexMatrix::zeros(big);
    let mut local_sum = ComplexMatrix::zeros(big);
    for slot in 0..n {
        rho_prime_n = &rho_prime_n + &power(slot, &rho_prime, &rho);
        local_sum = &local_sum + &power(slot, &h, &id);
    }
    let state = DensityMatrix::new(rho_n)?;
    let br_n = spectral_branches(&state, &rho_prime_n)?;
    let h_n = ld_operator(&br_n, model);
    let value = qfi_of(&br_n, &h_n);
    let local_sum_residual = (&h_n.matrix - &local_sum).max_abs();
    Ok(NCopyQfi { value, single, explicit: true, local_sum_residual })
}

/// `S(σ‖ρ) = Tr σ(ln σ − ln ρ)` for full-rank states.
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    let log_rho = rho.eig().apply(libm::log)?;
    let s = sigma.eig();
    let neg_entropy: f64 = s.values.iter().map(|&l| l * libm::log(l)).sum();
    let cross = sigma.matrix().trace_product(&log_rho).re;
    Ok(neg_entropy - cross)
}

/// Extrapolates `2 S(ρ_{θ+ε}‖ρ_θ)/ε²` to `ε → 0` with the interpolating
/// polynomial in `ε` through every sample (Neville's scheme).
pub fn relent_limit(fam: &StateFamily, theta: f64, eps_seq: &[f64]) -> Result<f64> {
    if eps_seq.len() < 2 {
        return Err(Error::InvalidInput("need at least two step sizes"));
    }
    let base = fam.eval_rho(theta)?;
    let mut xs = Vec::with_capacity(eps_seq.len());
    let mut table = Vec::with_capacity(eps_seq.len());
    for &eps in eps_seq {
        if !(eps > 0.0) || xs.contains(&eps) {
            return Err(Error::InvalidInput("step sizes must be positive and distinct"));
        }
        let shifted = fam.eval_rho(theta + eps)?;
        let s = relative_entropy(&shifted, &base)?;
        xs.push(eps);
        table.push(2.0 * s / (eps * eps));
    }
    let n = xs.len();
    for level in 1..n {
        for i in 0..n - level {
            let (lo, hi) = (xs[i], xs[i + level]);
            table[i] = (hi * table[i] - lo * table[i + 1]) / (hi - lo);
        }
    }
    Ok(table[0])
}

/// `Tr(ρ dH/dθ)` next to `−I(θ)` for the BvN derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximality {
    pub e_hprime: f64,
    pub minus_qfi: f64,
}

pub fn maximality_check(fam: &StateFamily, theta: f64) -> Result<Maximality> {
    let h = MAXIMALITY_STEP;
    let dom = fam.domain();
    if !dom.contains(theta - h) || !dom.contains(theta + h) {
        return Err(Error::OutOfDomain { theta, lo: dom.lo, hi: dom.hi });
    }
    let plus = bvn_ld(&fam.branches(theta + h)?).matrix;
    let minus = bvn_ld(&fam.branches(theta - h)?).matrix;
    let dh = (&plus - &minus).scale(0.5 / h);
    let rho = fam.eval_rho(theta)?;
    let br = spectral_branches(&rho, &fam.eval_rho_prime(theta)?)?;
    let info = qfi_bvn(&br, &bvn_ld(&br));
    Ok(Maximality { e_hprime: rho.matrix().trace_product(&dh).re, minus_qfi: -info })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Interval;

    fn two_level(theta: f64, lam: f64) -> SpectralBranches {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let p = ComplexMatrix::from_real_rows(2, &[c * c, s * c, s * c, s * s]).unwrap();
        let q = &ComplexMatrix::identity(2) - &p;
        let dp = ComplexMatrix::from_real_rows(
            2,
            &[-libm::sin(2.0 * theta), libm::cos(2.0 * theta), libm::cos(2.0 * theta), libm::sin(2.0 * theta)],
        )
        .unwrap();
        let rho = DensityMatrix::new(&p.scale(lam) + &q.scale(1.0 - lam)).unwrap();
        spectral_branches(&rho, &dp.scale(2.0 * lam - 1.0)).unwrap()
    }

    #[test]
    fn sld_information_of_rotating_qubit() {
        let br = two_level(0.4, 0.75);
        assert!((qfi(&br, Model::Sld) - 1.0).abs() < 1e-12);
        let s = qfi_split(&br, Model::Sld);
        assert!(s.i1.abs() < 1e-15);
    }

    #[test]
    fn breve_variance_of_identity_is_zero() {
        let br = two_level(0.1, 0.8);
        let y = Observable::new(ComplexMatrix::identity(2).scale(3.0)).unwrap();
        assert!(breve_variance(&br, &y).abs() < 1e-15);
    }

    #[test]
    fn breve_variance_of_bvn_derivative_is_its_information() {
        let br = two_level(0.7, 0.9);
        let h = bvn_ld(&br);
        let v = breve_variance(&br, &Observable::from(&h));
        assert!((v - qfi_bvn(&br, &h)).abs() < 1e-12);
    }

    #[test]
    fn cr_rejects_zero_information() {
        let br = two_level(0.0, 0.5);
        let y = Observable::new(ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(local_cr_check(&br, &y, Model::Sld), Err(Error::DegenerateInformation { .. })));
    }

    #[test]
    fn ncopy_respects_cap() {
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.125; 8])).unwrap();
        let br = spectral_branches(&rho, &ComplexMatrix::zeros(8)).unwrap();
        assert!(matches!(ncopy_qfi(&br, Model::Sld, 2), Ok(_)));
        assert!(matches!(ncopy_qfi(&br, Model::Sld, 3), Ok(_)));
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.1; 10])).unwrap();
        let br = spectral_branches(&rho, &ComplexMatrix::zeros(10)).unwrap();
        assert!(matches!(ncopy_qfi(&br, Model::Sld, 3), Err(Error::ResourceLimit { dim: 1000, .. })));
    }

    #[test]
    fn constant_family_has_no_information() {
        let fam = StateFamily::new(2, Interval::REAL_LINE, |_| ComplexMatrix::from_diagonal(&[0.3, 0.7]))
            .with_rho_prime(|_| ComplexMatrix::zeros(2));
        assert_eq!(relent_limit(&fam, 0.0, &RELENT_EPS).unwrap(), 0.0);
        let m = maximality_check(&fam, 0.0).unwrap();
        assert_eq!(m.e_hprime, 0.0);
        assert_eq!(m.minus_qfi, 0.0);
    }

    #[test]
    fn observables_must_be_hermitian() {
        let a = ComplexMatrix::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(Observable::new(a).is_err());
    }
}
