#![allow(dead_code)]

use qfi_core::linalg::{ComplexMatrix, C64};
use qfi_core::zoo::RandomAnalyticFamily;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_family(seed: u64, dim: usize, commuting: bool) -> RandomAnalyticFamily {
    RandomAnalyticFamily::sample(dim, commuting, &mut rng(seed)).unwrap()
}

pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        a[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    a
}

/// Random unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = (0..dim)
        .map(|_| (0..dim).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let dot: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let v = cols[k][i];
                cols[j][i] -= dot * v;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

/// Nodes and weights of 8-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 4] = [0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363];
const GL_WEIGHTS: [f64; 4] = [0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];

/// Composite 8-point Gauss-Legendre quadrature of a matrix-valued integrand.
pub fn integrate_matrix(
    lo: f64,
    hi: f64,
    panels: usize,
    dim: usize,
    f: impl Fn(f64) -> ComplexMatrix,
) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(dim);
    let h = (hi - lo) / panels as f64;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            for s in [-1.0, 1.0] {
                let t = mid + s * x * 0.5 * h;
                acc = &acc + &f(t).scale(w * 0.5 * h);
            }
        }
    }
    acc
}

pub fn integrate(lo: f64, hi: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += w * 0.5 * h * (f(mid - x * 0.5 * h) + f(mid + x * 0.5 * h));
        }
    }
    acc
}

/// Solves `A X = B` by LU with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm())).unwrap();
        if pivot != k {
            for c in 0..n {
                let t = lu[(k, c)];
                lu[(k, c)] = lu[(pivot, c)];
                lu[(pivot, c)] = t;
                let t = x[(k, c)];
                x[(k, c)] = x[(pivot, c)];
                x[(pivot, c)] = t;
            }
        }
        let d = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            for c in (k + 1)..n {
                let v = lu[(k, c)];
                lu[(i, c)] -= f * v;
            }
            for c in 0..n {
                let v = x[(k, c)];
                x[(i, c)] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        for c in 0..n {
            let mut s = x[(k, c)];
            for j in (k + 1)..n {
                s -= lu[(k, j)] * x[(j, c)];
            }
            x[(k, c)] = s / lu[(k, k)];
        }
    }
    x
}

pub fn inverse(a: &ComplexMatrix) -> ComplexMatrix {
    solve(a, &ComplexMatrix::identity(a.dim()))
}

/// Matrix exponential by Taylor series with scaling and squaring.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let norm = a.max_abs() * a.dim() as f64;
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a.scale(scale);
    let mut term = ComplexMatrix::identity(a.dim());
    let mut sum = term.clone();
    for k in 1..20 {
        term = (&term * &x).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Logarithmic mean by quadrature of `∫₀¹ aᵗ b^{1−t} dt`.
pub fn logmean_quadrature(a: f64, b: f64) -> f64 {
    integrate(0.0, 1.0, 8, |t| a.powf(t) * b.powf(1.0 - t))
}

/// BvN derivative from `∫₀^∞ (ρ+u)⁻¹ ρ' (ρ+u)⁻¹ du`, substituting `u = eˣ`.
pub fn bvn_by_resolvent(rho: &ComplexMatrix, rho_prime: &ComplexMatrix, lambda_min: f64) -> ComplexMatrix {
    let n = rho.dim();
    let lo = lambda_min.ln() - 32.0;
    let hi = 32.0;
    integrate_matrix(lo, hi, 600, n, |x| {
        let u = x.exp();
        let shifted = rho + &ComplexMatrix::identity(n).scale(u);
        let left = solve(&shifted, rho_prime);
        // (ρ+u)⁻¹ρ'(ρ+u)⁻¹ = ((ρ+u)⁻¹ [(ρ+u)⁻¹ρ']†)† with Hermitian factors
        let both = solve(&shifted, &left.adjoint()).adjoint();
        both.scale(u)
    })
}

/// SLD from `∫₀^∞ e^{−tρ/2} ρ' e^{−tρ/2} dt`.
pub fn sld_by_semigroup(rho: &ComplexMatrix, rho_prime: &ComplexMatrix, lambda_min: f64) -> ComplexMatrix {
    let n = rho.dim();
    let t_max = 2.0 * 34.0 / lambda_min;
    let panels = (t_max * 2.0).ceil() as usize;
    integrate_matrix(0.0, t_max, panels.max(64), n, |t| {
        let e = expm(&rho.scale(-0.5 * t));
        &(&e * rho_prime) * &e
    })
}
