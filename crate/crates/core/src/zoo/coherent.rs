use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::{DensityMatrix, Interval, SpectralBranches, StateFamily};
use crate::ldops::{ld_operator, Model};
use crate::linalg::{hermitian_eig, ComplexMatrix, HermitianEig, C64};
use crate::qfi::qfi_of;

/// Thermal mass the default truncation is allowed to discard.
pub const COHERENT_TAIL_TOL: f64 = 1e-10;
/// Tail mass above which the informations are not trusted.
pub const COHERENT_MAX_TAIL: f64 = 1e-6;
/// Population allowed in the top [`EDGE_LEVELS`] levels of a displaced state.
pub const EDGE_POPULATION_TOL: f64 = 1e-6;
pub const EDGE_LEVELS: usize = 5;
/// Largest Fock truncation built densely.
pub const MAX_TRUNCATION: usize = 2048;

/// Displaced thermal states `W(θ) ρ₀ W(θ)†` on a truncated Fock space, with
/// `ρ₀ = Σ λ_k |k⟩⟨k|`, `λ_k = M⁻¹ (1 + 1/M)^{−(1+k)}` and `W(θ) = exp(θ(a† − a))`.
#[derive(Debug, Clone)]
pub struct CoherentFamily {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    m: f64,
    thermal: Vec<f64>,
    generator: ComplexMatrix,
    /// eigendecomposition of the Hermitian `i(a† − a)`
    generator_eig: HermitianEig,
}

/// Smallest `N` whose discarded thermal mass `(1 + 1/M)^{−N}` is at most
/// [`COHERENT_TAIL_TOL`].
pub fn default_truncation(m: f64) -> usize {
    let q = libm::log1p(1.0 / m);
    libm::ceil(-libm::log(COHERENT_TAIL_TOL) / q) as usize
}

/// `a† − a` truncated to `n` levels.
pub fn displacement_generator(n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n);
    for k in 0..n.saturating_sub(1) {
        let s = libm::sqrt((k + 1) as f64);
        g[(k + 1, k)] = C64::new(s, 0.0);
        g[(k, k + 1)] = C64::new(-s, 0.0);
    }
    g
}

impl CoherentFamily {
    pub fn new(m: f64, trunc_dim: usize) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput("M must be positive"));
        }
        if trunc_dim < EDGE_LEVELS + 2 {
            return Err(Error::InvalidInput("truncation too small"));
        }
        if trunc_dim > MAX_TRUNCATION {
            return Err(Error::ResourceLimit { dim: trunc_dim, cap: MAX_TRUNCATION });
        }
        let q = 1.0 + 1.0 / m;
        let raw: Vec<f64> = (0..trunc_dim).map(|k| libm::pow(q, -(1.0 + k as f64)) / m).collect();
        let total: f64 = raw.iter().sum();
        let thermal = raw.into_iter().map(|l| l / total).collect();
        let generator = displacement_generator(trunc_dim);
        let generator_eig = hermitian_eig(&generator.scale_complex(C64::new(0.0, 1.0)))?;
        Ok(Self { inner: Arc::new(Inner { m, thermal, generator, generator_eig }) })
    }

    pub fn with_default_truncation(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput("M must be positive"));
        }
        Self::new(m, default_truncation(m))
    }

    pub fn m(&self) -> f64 {
        self.inner.m
    }

    pub fn trunc_dim(&self) -> usize {
        self.inner.thermal.len()
    }

    /// Thermal mass beyond the truncation, `(1 + 1/M)^{−N}`.
    pub fn tail(&self) -> f64 {
        libm::pow(1.0 + 1.0 / self.inner.m, -(self.trunc_dim() as f64))
    }

    /// Renormalized thermal weights `λ_k`, `k = 0..N`.
    pub fn thermal(&self) -> &[f64] {
        &self.inner.thermal
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.inner.generator
    }

    /// `exp(θ(a† − a))` on the truncated space.
    pub fn displacement(&self, theta: f64) -> ComplexMatrix {
        let e = &self.inner.generator_eig;
        let phases: Vec<C64> = e.values.iter().map(|&mu| C64::from_polar(1.0, -theta * mu)).collect();
        let v = &e.vectors;
        let scaled = ComplexMatrix::from_fn(v.dim(), |i, j| v[(i, j)] * phases[j]);
        &scaled * &v.adjoint()
    }

    fn rho_matrix(&self, theta: f64) -> Result<ComplexMatrix> {
        let rho0 = ComplexMatrix::from_diagonal(&self.inner.thermal);
        if theta == 0.0 {
            return Ok(rho0);
        }
        let w = self.displacement(theta);
        let rho = &(&w * &rho0) * &w.adjoint();
        let n = self.trunc_dim();
        let edge: f64 = (n - EDGE_LEVELS..n).map(|k| rho[(k, k)].re).sum();
        if edge > EDGE_POPULATION_TOL {
            return Err(Error::Truncation { defect: edge });
        }
        let tr = rho.trace().re;
        Ok(rho.scale(1.0 / tr).hermitian_part())
    }

    /// `ρ' = [a† − a, ρ]`.
    fn rho_prime_matrix(&self, theta: f64) -> Result<ComplexMatrix> {
        let rho = self.rho_matrix(theta)?;
        Ok(self.inner.generator.commutator(&rho).hermitian_part())
    }

    pub fn family(&self) -> StateFamily {
        let a = self.clone();
        let b = self.clone();
        StateFamily::try_new(self.trunc_dim(), Interval::REAL_LINE, move |t| a.rho_matrix(t))
            .try_with_rho_prime(move |t| b.rho_prime_matrix(t))
    }

    /// Spectral branches at `θ`; the level `n` of `ρ₀` is cluster `N − 1 − n`.
    pub fn branches(&self, theta: f64) -> Result<SpectralBranches> {
        self.family().branches(theta)
    }
}

pub fn coherent_rho(fam: &CoherentFamily, theta: f64) -> Result<DensityMatrix> {
    DensityMatrix::new(fam.rho_matrix(theta)?)
}

/// Derivative of `W(θ)|n⟩⟨n|W(θ)†` at `θ = 0`:
/// `√(n+1)(|n+1⟩⟨n| + |n⟩⟨n+1|) − √n(|n⟩⟨n−1| + |n−1⟩⟨n|)`.
pub fn coherent_projection_prime(n: usize, trunc_dim: usize) -> Result<ComplexMatrix> {
    if n + 1 >= trunc_dim {
        return Err(Error::Truncation { defect: libm::sqrt((n + 1) as f64) });
    }
    let mut p = ComplexMatrix::zeros(trunc_dim);
    let up = C64::new(libm::sqrt((n + 1) as f64), 0.0);
    p[(n + 1, n)] = up;
    p[(n, n + 1)] = up;
    if n > 0 {
        let down = C64::new(libm::sqrt(n as f64), 0.0);
        p[(n, n - 1)] = -down;
        p[(n - 1, n)] = -down;
    }
    Ok(p)
}

/// Number-state projection `|n⟩⟨n|`.
pub fn number_projection(n: usize, trunc_dim: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(trunc_dim);
    p[(n, n)] = C64::new(1.0, 0.0);
    p
}

fn check_tail(fam: &CoherentFamily) -> Result<()> {
    let tail = fam.tail();
    if tail > COHERENT_MAX_TAIL {
        return Err(Error::Truncation { defect: tail });
    }
    Ok(())
}

/// Truncated BvN information at `θ = 0` next to `2 ln(1 + 1/M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentBvn {
    pub numeric: f64,
    pub formula: f64,
}

impl CoherentBvn {
    pub fn relative_error(&self) -> f64 {
        libm::fabs(self.numeric - self.formula) / (1.0 + libm::fabs(self.numeric))
    }
}

pub fn coherent_qfi_bvn(m: f64, trunc_dim: usize) -> Result<CoherentBvn> {
    let fam = CoherentFamily::new(m, trunc_dim)?;
    check_tail(&fam)?;
    let br = fam.branches(0.0)?;
    let numeric = qfi_of(&br, &ld_operator(&br, Model::Bvn));
    Ok(CoherentBvn { numeric, formula: 2.0 * libm::log1p(1.0 / m) })
}

/// Which closed form the numerics agree with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaMatch {
    A,
    B,
    Neither,
}

impl FormulaMatch {
    pub fn name(self) -> &'static str {
        match self {
            FormulaMatch::A => "A",
            FormulaMatch::B => "B",
            FormulaMatch::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLd2 {
    pub numeric: f64,
    /// `(2 + 2M(1+M)(3+M)) / (1+M)⁴`
    pub formula_a: f64,
    /// `(2 + M(2+M)(3+2M)) / (1+M)⁴`
    pub formula_b: f64,
    pub matches: FormulaMatch,
}

/// Match tolerance for [`coherent_qfi_ld2`].
pub const LD2_MATCH_TOL: f64 = 1e-6;

pub fn ld2_formula_a(m: f64) -> f64 {
    (2.0 + 2.0 * m * (1.0 + m) * (3.0 + m)) / libm::pow(1.0 + m, 4.0)
}

pub fn ld2_formula_b(m: f64) -> f64 {
    (2.0 + m * (2.0 + m) * (3.0 + 2.0 * m)) / libm::pow(1.0 + m, 4.0)
}

/// Truncated `Tr(ρĤ²)` at `θ = 0` and which of two closed forms it matches.
pub fn coherent_qfi_ld2(m: f64, trunc_dim: usize) -> Result<CoherentLd2> {
    let fam = CoherentFamily::new(m, trunc_dim)?;
    check_tail(&fam)?;
    let br = fam.branches(0.0)?;
    let numeric = qfi_of(&br, &ld_operator(&br, Model::Ld2));
    let (a, b) = (ld2_formula_a(m), ld2_formula_b(m));
    let close = |x: f64| libm::fabs(numeric - x) <= LD2_MATCH_TOL * (1.0 + libm::fabs(x));
    let matches = match (close(a), close(b)) {
        (true, false) => FormulaMatch::A,
        (false, true) => FormulaMatch::B,
        (true, true) => {
            if libm::fabs(numeric - a) <= libm::fabs(numeric - b) {
                FormulaMatch::A
            } else {
                FormulaMatch::B
            }
        }
        (false, false) => FormulaMatch::Neither,
    };
    Ok(CoherentLd2 { numeric, formula_a: a, formula_b: b, matches })
}

/// One row of the trace table: `Tr(P_k X P_l Y)` with its tabulated value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub label: &'static str,
    pub value: f64,
    pub expected: f64,
}

/// Where the projection derivatives come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSource {
    /// The closed form of [`coherent_projection_prime`].
    Formula,
    /// First-order perturbation of the truncated family at `θ = 0`.
    Pipeline,
}

/// The eight nonzero traces `Tr(P_k P'_a P_b P'_c)` around level `k`.
///
/// Terms that reference level `k − 1` vanish at `k = 0`.
pub fn coherent_trace_table(k: usize, trunc_dim: usize, source: ProjectionSource) -> Result<[TraceEntry; 8]> {
    if k + 2 >= trunc_dim {
        return Err(Error::Truncation { defect: libm::sqrt((k + 2) as f64) });
    }
    let n = trunc_dim;
    let pipeline = match source {
        ProjectionSource::Pipeline => Some(CoherentFamily::new(1.0, n)?.branches(0.0)?),
        ProjectionSource::Formula => None,
    };
    let dp = |level: Option<usize>| -> Result<ComplexMatrix> {
        match level {
            None => Ok(ComplexMatrix::zeros(n)),
            Some(l) => match &pipeline {
                Some(br) => Ok(br.projection_prime(n - 1 - l)),
                None => coherent_projection_prime(l, n),
            },
        }
    };
    let p = |level: Option<usize>| match level {
        None => ComplexMatrix::zeros(n),
        Some(l) => number_projection(l, n),
    };
    let here = Some(k);
    let up = Some(k + 1);
    let down = k.checked_sub(1);
    let pk = p(here);
    let tr = |a: Option<usize>, b: Option<usize>, c: Option<usize>| -> Result<f64> {
        let prod = &(&(&pk * &dp(a)?) * &p(b)) * &dp(c)?;
        Ok(prod.trace().re)
    };
    let kf = k as f64;
    Ok([
        TraceEntry { label: "P_k P'_k P_{k+1} P'_k", value: tr(here, up, here)?, expected: kf + 1.0 },
        TraceEntry { label: "P_k P'_{k+1} P_{k+1} P'_k", value: tr(up, up, here)?, expected: -(kf + 1.0) },
        TraceEntry { label: "P_k P'_k P_{k-1} P'_k", value: tr(here, down, here)?, expected: kf },
        TraceEntry { label: "P_k P'_{k-1} P_{k-1} P'_k", value: tr(down, down, here)?, expected: -kf },
        TraceEntry { label: "P_k P'_{k+1} P_{k+1} P'_{k+1}", value: tr(up, up, up)?, expected: kf + 1.0 },
        TraceEntry { label: "P_k P'_k P_{k+1} P'_{k+1}", value: tr(here, up, up)?, expected: -(kf + 1.0) },
        TraceEntry { label: "P_k P'_{k-1} P_{k-1} P'_{k-1}", value: tr(down, down, down)?, expected: kf },
        TraceEntry { label: "P_k P'_k P_{k-1} P'_{k-1}", value: tr(here, down, down)?, expected: -kf },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_weights_for_unit_width() {
        let f = CoherentFamily::new(1.0, 30).unwrap();
        assert!((f.thermal()[0] - 0.5).abs() < 1e-9);
        assert!((f.thermal()[1] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn displacement_is_identity_at_zero() {
        let f = CoherentFamily::new(1.0, 12).unwrap();
        assert!((&f.displacement(0.0) - &ComplexMatrix::identity(12)).max_abs() < 1e-14);
    }

    #[test]
    fn ground_level_projection_derivative() {
        let p = coherent_projection_prime(0, 5).unwrap();
        let mut expect = ComplexMatrix::zeros(5);
        expect[(0, 1)] = C64::new(1.0, 0.0);
        expect[(1, 0)] = C64::new(1.0, 0.0);
        assert_eq!(p, expect);
        assert!(coherent_projection_prime(4, 5).is_err());
    }

    #[test]
    fn default_truncation_tail() {
        for m in [0.5, 1.0, 2.0] {
            let f = CoherentFamily::with_default_truncation(m).unwrap();
            assert!(f.tail() <= COHERENT_TAIL_TOL);
        }
    }

    #[test]
    fn printed_ld2_formulas_at_unit_width() {
        assert!((ld2_formula_a(1.0) - 1.125).abs() < 1e-15);
        assert!((ld2_formula_b(1.0) - 1.0625).abs() < 1e-15);
    }

    #[test]
    fn far_displacement_hits_the_edge() {
        let f = CoherentFamily::new(1.0, 12).unwrap();
        assert!(matches!(coherent_rho(&f, 3.0), Err(Error::Truncation { .. })));
    }
}
