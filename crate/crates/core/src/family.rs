//! One-parameter state families `θ ↦ ρ_θ`, their derivatives, and the
//! smooth spectral branches `λ_k(θ), P_k(θ)` with first derivatives.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eig, trace_norm, ComplexMatrix, HermitianEig, C64, ZERO};

/// Smallest admissible eigenvalue of a state.
pub const RANK_TOL: f64 = 1e-14;
/// Allowed deviation of `Tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues closer than this multiple of `ε·λ_max` form one cluster.
pub const CLUSTER_MERGE_FACTOR: f64 = 64.0;
/// Unmerged neighbours closer than this relative gap cannot be separated.
pub const CROSSING_REL_TOL: f64 = 1e-9;

/// Open parameter interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta > self.lo && theta < self.hi
    }

    pub fn check(&self, theta: f64) -> Result<()> {
        if self.contains(theta) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { theta, lo: self.lo, hi: self.hi })
        }
    }
}

/// How `ρ'_θ` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    /// Use the family's closed-form derivative.
    Analytic,
    /// Symmetric difference quotient; `step = None` picks
    /// `max(1e-5, ε^{1/3}(1 + |θ|))`. With `richardson` the step is halved
    /// once and the two quotients are combined to cancel the `h²` term.
    CentralDifference { step: Option<f64>, richardson: bool },
}

impl DerivativeMode {
    pub fn central() -> Self {
        DerivativeMode::CentralDifference { step: None, richardson: false }
    }

    pub fn richardson() -> Self {
        DerivativeMode::CentralDifference { step: None, richardson: true }
    }
}

pub fn default_step(theta: f64) -> f64 {
    f64::max(1e-5, libm::cbrt(f64::EPSILON) * (1.0 + libm::fabs(theta)))
}

type MatrixFn = Arc<dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync>;

/// A parametrized family of density matrices.
///
/// Immutable once built; cloning shares the underlying closures.
#[derive(Clone)]
pub struct StateFamily {
    dim: usize,
    domain: Interval,
    rho_of: MatrixFn,
    rho_prime_of: Option<MatrixFn>,
    mode: DerivativeMode,
}

impl fmt::Debug for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateFamily")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("analytic_derivative", &self.rho_prime_of.is_some())
            .field("mode", &self.mode)
            .finish()
    }
}

impl StateFamily {
    /// Family without a closed-form derivative; defaults to central differences.
    pub fn new(
        dim: usize,
        domain: Interval,
        rho_of: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        Self::try_new(dim, domain, move |t| Ok(rho_of(t)))
    }

    /// Like [`StateFamily::new`] for constructions that can fail at some `θ`.
    pub fn try_new(
        dim: usize,
        domain: Interval,
        rho_of: impl Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, domain, rho_of: Arc::new(rho_of), rho_prime_of: None, mode: DerivativeMode::central() }
    }

    /// Attaches a closed-form derivative and switches to [`DerivativeMode::Analytic`].
    pub fn with_rho_prime(
        self,
        rho_prime_of: impl Fn(f64) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        self.try_with_rho_prime(move |t| Ok(rho_prime_of(t)))
    }

    pub fn try_with_rho_prime(
        mut self,
        rho_prime_of: impl Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    ) -> Self {
        self.rho_prime_of = Some(Arc::new(rho_prime_of));
        self.mode = DerivativeMode::Analytic;
        self
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    /// The family `s ↦ ρ_{factor·s}`.
    pub fn reparametrized(&self, factor: f64) -> Self {
        let rho = self.rho_of.clone();
        let domain = if factor > 0.0 {
            Interval::new(self.domain.lo / factor, self.domain.hi / factor)
        } else {
            Interval::new(self.domain.hi / factor, self.domain.lo / factor)
        };
        let mut out = StateFamily::try_new(self.dim, domain, move |s| rho(factor * s));
        if let Some(d) = self.rho_prime_of.clone() {
            out = out.try_with_rho_prime(move |s| Ok(d(factor * s)?.scale(factor)));
        }
        out.with_mode(self.mode)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.rho_prime_of.is_some()
    }

    /// Raw `ρ_θ` without state validation.
    pub fn rho_matrix(&self, theta: f64) -> Result<ComplexMatrix> {
        self.domain.check(theta)?;
        let m = (self.rho_of)(theta)?;
        if m.dim() != self.dim {
            return Err(Error::InvalidInput("family produced a matrix of the wrong dimension"));
        }
        Ok(m)
    }

    /// `ρ_θ`, validated as a full-rank density matrix.
    pub fn eval_rho(&self, theta: f64) -> Result<DensityMatrix> {
        DensityMatrix::new(self.rho_matrix(theta)?)
    }

    /// `dρ/dθ` according to the family's derivative mode.
    pub fn eval_rho_prime(&self, theta: f64) -> Result<ComplexMatrix> {
        self.domain.check(theta)?;
        match self.mode {
            DerivativeMode::Analytic => {
                let d = self
                    .rho_prime_of
                    .as_ref()
                    .ok_or(Error::InvalidInput("analytic mode requires a closed-form derivative"))?;
                Ok(d(theta)?.hermitian_part())
            }
            DerivativeMode::CentralDifference { step, richardson } => {
                let h = step.unwrap_or_else(|| default_step(theta));
                if !(h > 0.0) {
                    return Err(Error::InvalidInput("difference step must be positive"));
                }
                let coarse = self.central_quotient(theta, h)?;
                if !richardson {
                    return Ok(coarse);
                }
                let fine = self.central_quotient(theta, 0.5 * h)?;
                Ok((&fine.scale(4.0) - &coarse).scale(1.0 / 3.0))
            }
        }
    }

    fn central_quotient(&self, theta: f64, h: f64) -> Result<ComplexMatrix> {
        let plus = self.rho_matrix(theta + h)?;
        let minus = self.rho_matrix(theta - h)?;
        Ok((&plus - &minus).scale(0.5 / h).hermitian_part())
    }

    /// `ρ_θ` and its spectral branches in one call.
    pub fn branches(&self, theta: f64) -> Result<SpectralBranches> {
        let rho = self.eval_rho(theta)?;
        let rho_prime = self.eval_rho_prime(theta)?;
        spectral_branches(&rho, &rho_prime)
    }
}

/// A validated full-rank density matrix with its cached eigendecomposition.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    eig: HermitianEig,
}

impl DensityMatrix {
    /// Validates Hermiticity (after symmetrization), unit trace and full rank.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::InvalidInput("matrix has non-finite entries"));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if libm::fabs(tr - 1.0) > TRACE_TOL {
            return Err(Error::InvalidInput("trace differs from one"));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min <= RANK_TOL {
            return Err(Error::SingularState { min_eigenvalue: min });
        }
        Ok(Self { matrix, eig })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eig(&self) -> &HermitianEig {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.values
    }
}

/// One eigenvalue cluster `λ_k` of multiplicity `m_k` and its derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub lambda: f64,
    pub lambda_prime: f64,
    /// First eigenvector column of the cluster in the eigenbasis.
    pub start: usize,
    pub multiplicity: usize,
}

impl Cluster {
    pub fn range(&self) -> core::ops::Range<usize> {
        self.start..self.start + self.multiplicity
    }
}

/// Eigenvalue clusters of `ρ`, their projections, and first derivatives,
/// all held in the eigenbasis of `ρ`.
///
/// Projections `P_k` and their derivatives `P'_k` are materialized on
/// demand; operators built from them are computed in the eigenbasis as
/// entrywise kernels over `R = V† ρ' V`.
#[derive(Debug, Clone)]
pub struct SpectralBranches {
    eig: HermitianEig,
    rho_prime_eb: ComplexMatrix,
    clusters: Vec<Cluster>,
    /// cluster index of every eigenvector column
    owner: Vec<usize>,
}

/// Splits `ρ` into eigenvalue clusters and differentiates each branch.
pub fn spectral_branches(rho: &DensityMatrix, rho_prime: &ComplexMatrix) -> Result<SpectralBranches> {
    SpectralBranches::from_eig(rho.eig().clone(), rho_prime)
}

impl SpectralBranches {
    /// Builds branches from an explicit eigendecomposition of `ρ`.
    ///
    /// Any orthonormal basis inside a degenerate eigenspace gives the same
    /// clusters, projections and derivatives.
    pub fn from_eig(eig: HermitianEig, rho_prime: &ComplexMatrix) -> Result<Self> {
        let n = eig.dim();
        if rho_prime.dim() != n {
            return Err(Error::InvalidInput("derivative dimension differs from state dimension"));
        }
        if !rho_prime.is_finite() {
            return Err(Error::InvalidInput("derivative has non-finite entries"));
        }
        let min = eig.values.first().copied().unwrap_or(0.0);
        if min <= RANK_TOL {
            return Err(Error::SingularState { min_eigenvalue: min });
        }
        let lambda_max = eig.values[n - 1];
        let merge_tol = CLUSTER_MERGE_FACTOR * f64::EPSILON * lambda_max;

        let mut clusters: Vec<Cluster> = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            let split = i == n || {
                let (lo, hi) = (eig.values[i - 1], eig.values[i]);
                let gap = hi - lo;
                if gap > merge_tol && gap <= CROSSING_REL_TOL * hi {
                    return Err(Error::DegenerateCrossing { lower: lo, upper: hi });
                }
                gap > merge_tol
            };
            if split {
                let m = i - start;
                let lambda = eig.values[start..i].iter().sum::<f64>() / m as f64;
                clusters.push(Cluster { lambda, lambda_prime: 0.0, start, multiplicity: m });
                start = i;
            }
        }

        let rho_prime_eb = eig.to_eigenbasis(&rho_prime.hermitian_part()).hermitian_part();
        let mut owner = alloc::vec![0; n];
        for (k, c) in clusters.iter_mut().enumerate() {
            let tr: f64 = c.range().map(|i| rho_prime_eb[(i, i)].re).sum();
            c.lambda_prime = tr / c.multiplicity as f64;
            for i in c.range() {
                owner[i] = k;
            }
        }
        Ok(Self { eig, rho_prime_eb, clusters, owner })
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn eig(&self) -> &HermitianEig {
        &self.eig
    }

    /// `V† ρ' V`.
    pub fn rho_prime_eigenbasis(&self) -> &ComplexMatrix {
        &self.rho_prime_eb
    }

    /// Cluster eigenvalue attached to eigenvector column `i`.
    #[inline]
    pub fn level(&self, i: usize) -> f64 {
        self.clusters[self.owner[i]].lambda
    }

    /// Cluster index owning eigenvector column `i`.
    #[inline]
    pub fn owner(&self, i: usize) -> usize {
        self.owner[i]
    }

    /// `ρ = Σ λ_k P_k` rebuilt from the clusters.
    pub fn rho(&self) -> ComplexMatrix {
        let levels: Vec<f64> = (0..self.dim()).map(|i| self.level(i)).collect();
        self.eig.from_eigenbasis(&ComplexMatrix::from_diagonal(&levels))
    }

    pub fn rho_prime(&self) -> ComplexMatrix {
        self.eig.from_eigenbasis(&self.rho_prime_eb)
    }

    /// Maps an eigenbasis operator back to the standard basis.
    pub fn to_standard(&self, eb: &ComplexMatrix) -> ComplexMatrix {
        self.eig.from_eigenbasis(eb)
    }

    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.eig.to_eigenbasis(a)
    }

    /// `Σ_k f(k) P_k` in the eigenbasis: diagonal with `f(k)` on cluster `k`.
    pub fn projection_sum_eigenbasis(&self, f: impl Fn(&Cluster) -> f64) -> ComplexMatrix {
        let diag: Vec<f64> = (0..self.dim()).map(|i| f(&self.clusters[self.owner[i]])).collect();
        ComplexMatrix::from_diagonal(&diag)
    }

    fn projection_eigenbasis(&self, k: usize) -> ComplexMatrix {
        self.projection_sum_eigenbasis(|c| if c.start == self.clusters[k].start { 1.0 } else { 0.0 })
    }

    /// `P'_k = Σ_{j≠k} (P_j ρ' P_k + P_k ρ' P_j) / (λ_k − λ_j)` in the eigenbasis.
    fn projection_prime_eigenbasis(&self, k: usize) -> ComplexMatrix {
        let ck = self.clusters[k];
        let r = &self.rho_prime_eb;
        ComplexMatrix::from_fn(self.dim(), |i, j| {
            let (oi, oj) = (self.owner[i], self.owner[j]);
            if oi == oj || (oi != k && oj != k) {
                return ZERO;
            }
            let other = if oi == k { oj } else { oi };
            r[(i, j)] / (ck.lambda - self.clusters[other].lambda)
        })
    }

    /// Eigenprojection `P_k`.
    pub fn projection(&self, k: usize) -> ComplexMatrix {
        self.to_standard(&self.projection_eigenbasis(k))
    }

    /// Derivative `P'_k` of the eigenprojection.
    pub fn projection_prime(&self, k: usize) -> ComplexMatrix {
        self.to_standard(&self.projection_prime_eigenbasis(k))
    }

    /// `Σ λ'_k P_k + Σ λ_k P'_k`.
    pub fn reconstruct_rho_prime(&self) -> ComplexMatrix {
        let mut eb = self.branch_derivative_eigenbasis();
        let nu = self.lambda_weighted_projection_prime_eigenbasis();
        eb = &eb + &nu;
        self.to_standard(&eb)
    }

    fn lambda_weighted_projection_prime_eigenbasis(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for (k, c) in self.clusters.iter().enumerate() {
            acc = &acc + &self.projection_prime_eigenbasis(k).scale(c.lambda);
        }
        acc
    }

    /// `Σ_k λ_k P'_k`, which vanishes exactly when `[ρ, ρ'] = 0`.
    pub fn lambda_weighted_projection_prime(&self) -> ComplexMatrix {
        self.to_standard(&self.lambda_weighted_projection_prime_eigenbasis())
    }

    /// How far each intra-cluster block of `R` is from `λ'_k · I`.
    ///
    /// Zero for branches of constant multiplicity; a nonzero value means a
    /// merged cluster is splitting at first order.
    pub fn scalarity_residual(&self) -> f64 {
        let r = &self.rho_prime_eb;
        let mut acc = 0.0;
        for c in &self.clusters {
            for i in c.range() {
                for j in c.range() {
                    let target = if i == j { c.lambda_prime } else { 0.0 };
                    acc += (r[(i, j)] - C64::new(target, 0.0)).norm_sqr();
                }
            }
        }
        libm::sqrt(acc)
    }

    /// `Σ λ'_i P_i` over the eigenvalue branches: the cluster-diagonal blocks
    /// of `R`.
    ///
    /// A cluster whose block is not scalar is splitting at first order; its
    /// branches are the eigenvectors of the block and their slopes its
    /// eigenvalues, so the block itself is the branch term.
    pub fn branch_derivative_eigenbasis(&self) -> ComplexMatrix {
        let r = &self.rho_prime_eb;
        ComplexMatrix::from_fn(self.dim(), |i, j| if self.owner[i] == self.owner[j] { r[(i, j)] } else { ZERO })
    }

    /// `Σ λ'²_i / λ_i` over the eigenvalue branches, the eigenvalue part of
    /// every QFI. Equals `Σ m_k λ'²_k / λ_k` when no cluster splits.
    pub fn classical_information(&self) -> f64 {
        let r = &self.rho_prime_eb;
        self.clusters
            .iter()
            .map(|c| {
                let block: f64 = c.range().flat_map(|i| c.range().map(move |j| r[(i, j)].norm_sqr())).sum();
                block / c.lambda
            })
            .sum()
    }
}

/// Maximal residuals of the projection-derivative identities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Lemma33Audit {
    /// `P'_j P_j − P_j^⊥ P'_j` and `P'_j P_j^⊥ − P_j P'_j`.
    pub idempotent_derivative: f64,
    /// `P'_j P_k + P_j P'_k` for `j ≠ k`.
    pub orthogonal_derivative: f64,
    /// `P_k P'_j P_k` for all `j, k`.
    pub block_diagonal: f64,
    /// `(P'_j P'_k) P_j − P_j (P'_j P'_k)†`.
    pub product_symmetry: f64,
    /// `‖Σ_k λ_k P'_k‖₂`.
    pub weighted_derivative_norm: f64,
    /// `‖[ρ, ρ']‖₂`.
    pub commutator_norm: f64,
}

impl Lemma33Audit {
    /// Largest of the algebraic identity residuals.
    pub fn max_identity_residual(&self) -> f64 {
        self.idempotent_derivative
            .max(self.orthogonal_derivative)
            .max(self.block_diagonal)
            .max(self.product_symmetry)
    }
}

/// Evaluates the projection-derivative identities on `br`.
///
/// Works in the eigenbasis, where every norm used is unitarily invariant.
/// Cost grows with the square of the cluster count; meant for small systems.
pub fn lemma33_audit(br: &SpectralBranches) -> Lemma33Audit {
    let n = br.dim();
    let k_count = br.clusters.len();
    let p: Vec<ComplexMatrix> = (0..k_count).map(|k| br.projection_eigenbasis(k)).collect();
    let dp: Vec<ComplexMatrix> = (0..k_count).map(|k| br.projection_prime_eigenbasis(k)).collect();
    let id = ComplexMatrix::identity(n);
    let mut out = Lemma33Audit::default();

    for j in 0..k_count {
        let perp = &id - &p[j];
        let a = frobenius(&(&(&dp[j] * &p[j]) - &(&perp * &dp[j])));
        let b = frobenius(&(&(&dp[j] * &perp) - &(&p[j] * &dp[j])));
        out.idempotent_derivative = out.idempotent_derivative.max(a).max(b);
        for k in 0..k_count {
            out.block_diagonal = out.block_diagonal.max(frobenius(&(&(&p[k] * &dp[j]) * &p[k])));
            if j != k {
                let s = &(&dp[j] * &p[k]) + &(&p[j] * &dp[k]);
                out.orthogonal_derivative = out.orthogonal_derivative.max(frobenius(&s));
            }
            let prod = &dp[j] * &dp[k];
            let lhs = &prod * &p[j];
            let rhs = &p[j] * &prod.adjoint();
            out.product_symmetry = out.product_symmetry.max(frobenius(&(&lhs - &rhs)));
        }
    }

    out.weighted_derivative_norm = frobenius(&br.lambda_weighted_projection_prime_eigenbasis());
    let rho = br.projection_sum_eigenbasis(|c| c.lambda);
    out.commutator_norm = frobenius(&rho.commutator(&br.rho_prime_eb));
    out
}

/// Residual of the second-order projection identity
/// `P_j P''_k + P''_j P_k + 2 P'_j P'_k = δ_{kj} P''_j`,
/// with `P''` from second differences of projections at `θ ± h`.
///
/// Clusters are matched across the stencil by position, so the family must
/// not have eigenvalue crossings within `h` of `θ`.
pub fn second_order_projection_residual(fam: &StateFamily, theta: f64, h: f64) -> Result<f64> {
    let mid = fam.branches(theta)?;
    let plus = fam.branches(theta + h)?;
    let minus = fam.branches(theta - h)?;
    let k_count = mid.clusters().len();
    if plus.clusters().len() != k_count || minus.clusters().len() != k_count {
        return Err(Error::DegenerateCrossing { lower: theta - h, upper: theta + h });
    }
    let p: Vec<ComplexMatrix> = (0..k_count).map(|k| mid.projection(k)).collect();
    let dp: Vec<ComplexMatrix> = (0..k_count).map(|k| mid.projection_prime(k)).collect();
    let ddp: Vec<ComplexMatrix> = (0..k_count)
        .map(|k| {
            let s = &(&plus.projection(k) + &minus.projection(k)) - &p[k].scale(2.0);
            s.scale(1.0 / (h * h))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for j in 0..k_count {
        for k in 0..k_count {
            let mut lhs = &(&(&p[j] * &ddp[k]) + &(&ddp[j] * &p[k])) + &(&dp[j] * &dp[k]).scale(2.0);
            if j == k {
                lhs = &lhs - &ddp[j];
            }
            worst = worst.max(trace_norm(&lhs));
        }
    }
    Ok(worst)
}

/// `ρ_θ` of the two-level family whose eigenprojections have no limit at
/// `θ = 0`, together with its two eigenprojections.
#[derive(Debug, Clone)]
pub struct Counterexample31 {
    pub rho: DensityMatrix,
    pub p1: ComplexMatrix,
    pub p2: ComplexMatrix,
    /// Set at `θ = 0`, where `ρ₀ = I/2` and the projections are a convention.
    pub degenerate_at_zero: bool,
}

/// Eigenvalues `(1 ± e^{−1/θ²})/2` and rotating projections at angle `1/θ`.
pub fn counterexample31(theta: f64) -> Result<Counterexample31> {
    if !theta.is_finite() || libm::fabs(theta) > 1.0 {
        return Err(Error::OutOfDomain { theta, lo: -1.0, hi: 1.0 });
    }
    if theta == 0.0 {
        return Ok(Counterexample31 {
            rho: DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.5, 0.5]))?,
            p1: ComplexMatrix::from_diagonal(&[1.0, 0.0]),
            p2: ComplexMatrix::from_diagonal(&[0.0, 1.0]),
            degenerate_at_zero: true,
        });
    }
    let (p1, p2) = counterexample_projections(theta);
    let g = libm::exp(-1.0 / (theta * theta));
    let rho = &p1.scale(0.5 * (1.0 + g)) + &p2.scale(0.5 * (1.0 - g));
    Ok(Counterexample31 { rho: DensityMatrix::new(rho)?, p1, p2, degenerate_at_zero: false })
}

pub(crate) fn counterexample_projections(theta: f64) -> (ComplexMatrix, ComplexMatrix) {
    let phi = 1.0 / theta;
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    let p1 = ComplexMatrix::from_real_rows(2, &[c * c, c * s, c * s, s * s]).expect("2x2");
    let p2 = ComplexMatrix::from_real_rows(2, &[s * s, -c * s, -c * s, c * c]).expect("2x2");
    (p1, p2)
}
