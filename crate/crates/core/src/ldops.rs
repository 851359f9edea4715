//! The four logarithmic-derivative operators and their diagnostics.
//!
//! Every operator is `V K∘R V†` where `R = V†ρ'V` and `K` is a scalar
//! kernel of the eigenvalue pair. Inside a cluster all kernels reduce to
//! `1/λ`, so they differ only through the off-diagonal blocks fed by
//! `P'_k`.

use core::fmt;

use crate::family::{DensityMatrix, SpectralBranches};
use crate::linalg::{logmean_unchecked, matrix_function, trace_norm, ComplexMatrix};

/// Which logarithmic derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    /// Derivative of `ln ρ`; solves the Kubo–Mori equation.
    Bvn,
    /// `(ρ⁻¹ρ' + ρ'ρ⁻¹)/2`.
    Ld1,
    /// `ρ^{-1/2} ρ' ρ^{-1/2}`.
    Ld2,
    /// Symmetric logarithmic derivative, `(Hρ + ρH)/2 = ρ'`.
    Sld,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Bvn, Model::Ld1, Model::Ld2, Model::Sld];

    pub fn name(self) -> &'static str {
        match self {
            Model::Bvn => "bvn",
            Model::Ld1 => "ld1",
            Model::Ld2 => "ld2",
            Model::Sld => "sld",
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bvn" => Some(Model::Bvn),
            "ld1" => Some(Model::Ld1),
            "ld2" => Some(Model::Ld2),
            "sld" | "ld3" => Some(Model::Sld),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Eigenbasis multiplier applied to `R_ij`.
    #[inline]
    pub fn kernel(self, a: f64, b: f64) -> f64 {
        match self {
            Model::Bvn => 1.0 / logmean_unchecked(a, b),
            Model::Ld1 => 0.5 * (1.0 / a + 1.0 / b),
            Model::Ld2 => 1.0 / libm::sqrt(a * b),
            Model::Sld => 2.0 / (a + b),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A logarithmic derivative together with its eigenvalue/projection split.
#[derive(Debug, Clone)]
pub struct LdOperator {
    pub model: Model,
    pub matrix: ComplexMatrix,
    /// `H1 = Σ (λ'_i/λ_i) P_i` over eigenvalue branches, shared by all models.
    pub h1: ComplexMatrix,
    /// `H2 = H − H1`, driven entirely by the projection derivatives.
    pub h2: ComplexMatrix,
    eigenbasis: ComplexMatrix,
}

impl LdOperator {
    /// The operator expressed in the eigenbasis the branches were built in.
    pub fn eigenbasis(&self) -> &ComplexMatrix {
        &self.eigenbasis
    }
}

/// Builds the logarithmic derivative of `model` from the spectral branches.
pub fn ld_operator(br: &SpectralBranches, model: Model) -> LdOperator {
    let r = br.rho_prime_eigenbasis();
    let eb = r.map_indexed(|i, j, z| {
        if br.owner(i) == br.owner(j) {
            z / br.level(i)
        } else {
            z * model.kernel(br.level(i), br.level(j))
        }
    });
    let h1_eb = br.branch_derivative_eigenbasis().map_indexed(|i, _, z| z / br.level(i));
    let h2_eb = &eb - &h1_eb;
    LdOperator {
        model,
        matrix: br.to_standard(&eb).hermitian_part(),
        h1: br.to_standard(&h1_eb).hermitian_part(),
        h2: br.to_standard(&h2_eb).hermitian_part(),
        eigenbasis: eb,
    }
}

pub fn bvn_ld(br: &SpectralBranches) -> LdOperator {
    ld_operator(br, Model::Bvn)
}

pub fn ld1(br: &SpectralBranches) -> LdOperator {
    ld_operator(br, Model::Ld1)
}

pub fn ld2(br: &SpectralBranches) -> LdOperator {
    ld_operator(br, Model::Ld2)
}

pub fn sld(br: &SpectralBranches) -> LdOperator {
    ld_operator(br, Model::Sld)
}

/// Trace-norm residual of the Kubo–Mori equation `∫₀¹ ρᵗHρ^{1−t} dt = ρ'`.
///
/// Zero for the BvN derivative; for the other models it measures how far
/// they are from solving that equation.
pub fn kmb_residual(br: &SpectralBranches, h: &LdOperator) -> f64 {
    let h_eb = br.to_eigenbasis(&h.matrix);
    let r = br.rho_prime_eigenbasis();
    let diff = h_eb.map_indexed(|i, j, z| z * logmean_unchecked(br.level(i), br.level(j)) - r[(i, j)]);
    trace_norm(&diff)
}

/// Trace-norm residual of `(Hρ + ρH)/2 = ρ'`.
pub fn sld_residual(br: &SpectralBranches, h: &LdOperator) -> f64 {
    let h_eb = br.to_eigenbasis(&h.matrix);
    let r = br.rho_prime_eigenbasis();
    let diff = h_eb.map_indexed(|i, j, z| z * (0.5 * (br.level(i) + br.level(j))) - r[(i, j)]);
    trace_norm(&diff)
}

/// Trace-norm residual of `ρ^{1/2} H ρ^{1/2} = ρ'`, using an independent
/// square root of `ρ`.
pub fn ld2_factorization_residual(rho: &DensityMatrix, rho_prime: &ComplexMatrix, h: &LdOperator) -> f64 {
    match matrix_function(rho.matrix(), libm::sqrt) {
        Ok(s) => trace_norm(&(&(&(&s * &h.matrix) * &s) - rho_prime)),
        Err(_) => f64::INFINITY,
    }
}

/// `Tr(ρH)`, which vanishes for every logarithmic derivative.
pub fn zero_expectation_check(rho: &DensityMatrix, h: &LdOperator) -> f64 {
    rho.matrix().trace_product(&h.matrix).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::spectral_branches;
    use crate::linalg::C64;

    fn branches(rho: &[f64], rho_prime: ComplexMatrix) -> SpectralBranches {
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(rho)).unwrap();
        spectral_branches(&rho, &rho_prime).unwrap()
    }

    #[test]
    fn kernels_agree_on_the_diagonal() {
        for m in Model::ALL {
            assert!((m.kernel(0.25, 0.25) - 4.0).abs() < 1e-14, "{m}");
        }
    }

    #[test]
    fn kernel_ordering() {
        // arithmetic ≥ logarithmic ≥ geometric ≥ harmonic mean
        let (a, b) = (0.1, 0.7);
        assert!(Model::Sld.kernel(a, b) < Model::Bvn.kernel(a, b));
        assert!(Model::Bvn.kernel(a, b) < Model::Ld2.kernel(a, b));
        assert!(Model::Ld2.kernel(a, b) < Model::Ld1.kernel(a, b));
    }

    #[test]
    fn scalar_state_scales_derivative() {
        let rp = ComplexMatrix::from_rows(
            2,
            &[C64::new(0.1, 0.0), C64::new(0.2, 0.3), C64::new(0.2, -0.3), C64::new(-0.1, 0.0)],
        )
        .unwrap();
        let br = branches(&[0.5, 0.5], rp.clone());
        for m in Model::ALL {
            let h = ld_operator(&br, m);
            assert!((&h.matrix - &rp.scale(2.0)).max_abs() < 1e-14, "{m}");
        }
    }

    #[test]
    fn commuting_split_has_no_projection_part() {
        let br = branches(&[0.2, 0.3, 0.5], ComplexMatrix::from_diagonal(&[0.1, 0.05, -0.15]));
        let h = bvn_ld(&br);
        assert!(h.h2.max_abs() < 1e-15);
        assert!((h.matrix[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(kmb_residual(&br, &h) < 1e-15);
    }

    #[test]
    fn model_names_round_trip() {
        for m in Model::ALL {
            assert_eq!(Model::parse(m.name()), Some(m));
        }
        assert_eq!(Model::parse("LD3"), Some(Model::Sld));
        assert_eq!(Model::parse("rld"), None);
    }
}
