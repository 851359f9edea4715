//! Seeded property suites with a line-per-check summary.

use std::fmt::Write as _;

use qfi_core::family::{lemma33_audit, second_order_projection_residual};
use qfi_core::ldops::{kmb_residual, ld_operator, sld, sld_residual, zero_expectation_check};
use qfi_core::qfi::{local_cr_check, maximality_check, qfi, qfi_of, qfi_split, relent_limit, RELENT_EPS};
use qfi_core::zoo::*;
use qfi_core::{ComplexMatrix, Model, Observable, StateFamily, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Lemma33,
    Kmb,
    Tables,
    Coherent,
    Cr,
    Entropy,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Lemma33, Suite::Kmb, Suite::Tables, Suite::Coherent, Suite::Cr, Suite::Entropy];
}

#[derive(Debug, Default, Clone)]
pub struct Summary {
    pub text: String,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    fn record(&mut self, ok: bool, name: &str, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        let _ = writeln!(self.text, "{tag} {name:<36} {detail}");
    }

    /// Passes when the worst residual is at most `tol`.
    pub fn at_most(&mut self, name: &str, worst: f64, tol: f64) {
        self.record(worst <= tol, name, format!("max_residual={worst:.3e} tol={tol:.1e}"));
    }

    /// Passes when the smallest value is at least `floor`.
    pub fn at_least(&mut self, name: &str, least: f64, floor: f64) {
        self.record(least >= floor, name, format!("min_value={least:.3e} floor={floor:.1e}"));
    }

    pub fn flag(&mut self, name: &str, ok: bool, detail: String) {
        self.record(ok, name, detail);
    }

    pub fn info(&mut self, name: &str, detail: String) {
        let _ = writeln!(self.text, "INFO {name:<36} {detail}");
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run(suite: Suite, seed: u64) -> Summary {
    let mut s = Summary::default();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    for one in suites {
        match one {
            Suite::Lemma33 => lemma33(&mut s, seed),
            Suite::Kmb => kmb(&mut s, seed),
            Suite::Tables => tables(&mut s),
            Suite::Coherent => coherent(&mut s),
            Suite::Cr => cr(&mut s, seed),
            Suite::Entropy => entropy(&mut s),
            Suite::All => unreachable!(),
        }
    }
    let _ = writeln!(s.text, "summary: {} passed, {} failed", s.passed, s.failed);
    s
}

fn worst(acc: &mut f64, v: f64) {
    if v.is_nan() || v > *acc {
        *acc = if v.is_nan() { f64::INFINITY } else { v };
    }
}

fn grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn lemma33(s: &mut Summary, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ident, mut recon, mut second) = (0.0, 0.0, 0.0);
    let (mut commuting_max, mut turning_min) = (0.0, f64::INFINITY);
    for i in 0..100 {
        let fam = RandomAnalyticFamily::sample(4, false, &mut rng).expect("sampled family");
        let theta = rng.gen_range(-0.8..0.8);
        let f = fam.family();
        match f.branches(theta) {
            Ok(br) => {
                let audit = lemma33_audit(&br);
                worst(&mut ident, audit.max_identity_residual());
                turning_min = f64::min(turning_min, audit.weighted_derivative_norm.min(audit.commutator_norm));
                let d = f.eval_rho_prime(theta).map(|rp| (&br.reconstruct_rho_prime() - &rp).max_abs());
                worst(&mut recon, d.unwrap_or(f64::INFINITY));
            }
            Err(_) => worst(&mut ident, f64::INFINITY),
        }
        if i % 5 == 0 {
            let r = second_order_projection_residual(&f, theta, 1e-4).unwrap_or(f64::INFINITY);
            worst(&mut second, r);
        }
        let still = RandomAnalyticFamily::sample(4, true, &mut rng).expect("sampled family");
        match still.family().branches(theta) {
            Ok(br) => {
                let audit = lemma33_audit(&br);
                worst(&mut commuting_max, audit.weighted_derivative_norm.max(audit.commutator_norm));
                worst(&mut ident, audit.max_identity_residual());
            }
            Err(_) => worst(&mut commuting_max, f64::INFINITY),
        }
    }
    s.at_most("lemma33.identities", ident, 1e-7);
    s.at_most("lemma33.reconstruction", recon, 1e-8);
    s.at_most("lemma33.second_order", second, 1e-6);
    s.at_most("lemma33.commuting_weighted_derivative", commuting_max, 1e-12);
    s.at_least("lemma33.turning_weighted_derivative", turning_min, 1e-6);
}

/// Every zoo family on a representative grid.
pub fn zoo_points(seed: u64) -> Vec<(&'static str, StateFamily, f64)> {
    let mut out = Vec::new();
    let tl1 = TwoLevelFamily1::new(LambdaProfile::Tanh).family();
    out.extend(grid(-1.0, 1.0, 21).into_iter().map(|t| ("two_level_1", tl1.clone(), t)));
    let tl2 = TwoLevelFamily2::new(0.6).expect("valid r").family();
    out.extend(grid(-1.0, 1.0, 11).into_iter().map(|t| ("two_level_2", tl2.clone(), t)));
    for t in grid(0.5, 3.0, 11) {
        out.push(("geometric", GeometricFamily::for_theta(t).expect("positive θ").family(), t));
    }
    let coh = CoherentFamily::with_default_truncation(1.0).expect("valid M").family();
    out.extend([0.0, 0.1, 0.2].into_iter().map(|t| ("coherent", coh.clone(), t)));
    let ce = counterexample_family();
    out.extend([-0.9, -0.6, -0.4, 0.4, 0.6, 0.9].into_iter().map(|t| ("counterexample31", ce.clone(), t)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rnd = RandomAnalyticFamily::sample(4, false, &mut rng).expect("sampled family").family();
    out.extend(grid(-0.9, 0.9, 7).into_iter().map(|t| ("random", rnd.clone(), t)));
    out
}

fn kmb(s: &mut Summary, seed: u64) {
    let mut by_family: Vec<(&str, f64, [f64; 4], f64)> = Vec::new();
    for (name, fam, theta) in zoo_points(seed) {
        let slot = match by_family.iter().position(|e| e.0 == name) {
            Some(i) => i,
            None => {
                by_family.push((name, 0.0, [0.0; 4], 0.0));
                by_family.len() - 1
            }
        };
        let e = &mut by_family[slot];
        let (rho, br) = match (fam.eval_rho(theta), fam.branches(theta)) {
            (Ok(r), Ok(b)) => (r, b),
            _ => {
                e.1 = f64::INFINITY;
                continue;
            }
        };
        worst(&mut e.1, kmb_residual(&br, &ld_operator(&br, Model::Bvn)));
        for m in Model::ALL {
            worst(&mut e.2[m.index()], zero_expectation_check(&rho, &ld_operator(&br, m)).abs());
        }
        worst(&mut e.3, sld_residual(&br, &sld(&br)));
    }
    for (name, k, z, sl) in by_family {
        s.at_most(&format!("kmb.{name}.bvn_residual"), k, 1e-8);
        s.at_most(&format!("kmb.{name}.sld_residual"), sl, 1e-10);
        s.at_most(&format!("kmb.{name}.zero_expectation"), z.iter().copied().fold(0.0, f64::max), 1e-10);
    }
}

fn tables(s: &mut Summary) {
    let fam1 = TwoLevelFamily1::new(LambdaProfile::Tanh);
    let f1 = fam1.family();
    let mut i1_err = 0.0;
    let mut i2_err = [0.0; 4];
    let mut printed_dev = [0.0; 4];
    for theta in grid(-1.0, 1.0, 50) {
        let br = match f1.branches(theta) {
            Ok(b) => b,
            Err(_) => {
                i1_err = f64::INFINITY;
                continue;
            }
        };
        for m in Model::ALL {
            let got = qfi_split(&br, m);
            let exact = fam1.qfi_oracle(theta, m, TableSource::Exact).expect("full rank");
            let printed = fam1.qfi_oracle(theta, m, TableSource::Printed).expect("full rank");
            worst(&mut i1_err, (got.i1 - exact.i1).abs());
            worst(&mut i2_err[m.index()], (got.i2 - exact.i2).abs());
            worst(&mut printed_dev[m.index()], (got.i2 - printed.i2).abs());
        }
    }
    s.at_most("tables.family1.i1", i1_err, 1e-10);
    for m in Model::ALL {
        s.at_most(&format!("tables.family1.i2_{m}"), i2_err[m.index()], 1e-10);
    }
    for m in Model::ALL {
        s.info(&format!("tables.family1.tabulated_i2_{m}"), format!("max_deviation={:.3e}", printed_dev[m.index()]));
    }

    let mut i2_err = [0.0; 4];
    let mut printed_dev = [0.0; 4];
    let mut order_violation: f64 = 0.0;
    let mut at_zero: f64 = 0.0;
    for r in grid(0.0, 0.95, 50) {
        let fam2 = TwoLevelFamily2::new(r).expect("valid r");
        let br = match fam2.family().branches(0.3) {
            Ok(b) => b,
            Err(_) => {
                order_violation = f64::INFINITY;
                continue;
            }
        };
        let i2 = Model::ALL.map(|m| qfi_split(&br, m).i2);
        for m in Model::ALL {
            let exact = fam2.qfi_oracle(m, TableSource::Exact).expect("full rank");
            worst(&mut i2_err[m.index()], (i2[m.index()] - exact.i2).abs());
            worst(&mut printed_dev[m.index()], (i2[m.index()] - table2_printed(r, m)).abs());
        }
        let [_, l1, l2, sl] = i2;
        order_violation = order_violation.max(l2 - l1).max(sl - l2);
        if r == 0.0 {
            at_zero = i2.iter().fold(0.0, |a, v| a.max(v.abs()));
        }
    }
    for m in Model::ALL {
        s.at_most(&format!("tables.family2.i2_{m}"), i2_err[m.index()], 1e-10);
    }
    s.at_most("tables.family2.ordering_violation", order_violation, 0.0);
    s.at_most("tables.family2.zero_r", at_zero, 1e-12);
    for m in Model::ALL {
        s.info(&format!("tables.family2.tabulated_i2_{m}"), format!("max_deviation={:.3e}", printed_dev[m.index()]));
    }
}

fn coherent(s: &mut Summary) {
    for m in [0.5, 1.0, 2.0] {
        let n = default_truncation(m);
        match coherent_qfi_bvn(m, n) {
            Ok(b) => s.at_most(&format!("coherent.bvn.M={m}"), b.relative_error(), 1e-6),
            Err(_) => s.at_most(&format!("coherent.bvn.M={m}"), f64::INFINITY, 1e-6),
        }
        match coherent_qfi_ld2(m, n) {
            Ok(r) => s.info(
                &format!("coherent.ld2.M={m}"),
                format!(
                    "numeric={:.12} formula_a={:.12} formula_b={:.12} verdict={}",
                    r.numeric,
                    r.formula_a,
                    r.formula_b,
                    r.matches.name()
                ),
            ),
            Err(e) => s.flag(&format!("coherent.ld2.M={m}"), false, e.to_string()),
        }

        let (mut drift, mut i1) = (0.0, 0.0);
        match CoherentFamily::new(m, n) {
            Ok(f) => {
                let base = f.branches(0.0).map(|br| Model::ALL.map(|md| qfi(&br, md)));
                for theta in [0.1, 0.2] {
                    match (&base, f.branches(theta)) {
                        (Ok(b0), Ok(br)) => {
                            for md in Model::ALL {
                                let sp = qfi_split(&br, md);
                                worst(&mut drift, (sp.total() - b0[md.index()]).abs() / b0[md.index()]);
                                worst(&mut i1, sp.i1.abs());
                            }
                        }
                        _ => drift = f64::INFINITY,
                    }
                }
            }
            Err(_) => drift = f64::INFINITY,
        }
        s.at_most(&format!("coherent.theta_independence.M={m}"), drift, 1e-6);
        s.at_most(&format!("coherent.i1.M={m}"), i1, 1e-8);
    }
    for (label, source) in [("formula", ProjectionSource::Formula), ("pipeline", ProjectionSource::Pipeline)] {
        let mut dev = 0.0;
        for k in 0..=10 {
            match coherent_trace_table(k, 30, source) {
                Ok(rows) => rows.iter().for_each(|e| worst(&mut dev, (e.value - e.expected).abs())),
                Err(_) => dev = f64::INFINITY,
            }
        }
        let tol = if source == ProjectionSource::Formula { 1e-12 } else { 1e-8 };
        s.at_most(&format!("coherent.trace_table.{label}"), dev, tol);
    }
}

fn random_observable(dim: usize, rng: &mut ChaCha8Rng) -> Observable {
    let mut a = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        a[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    Observable::new(a).expect("Hermitian by construction")
}

/// Families for the Cramér-Rao checks, flagged when `[ρ, ρ'] = 0`.
pub fn cr_points(seed: u64) -> Vec<(&'static str, StateFamily, f64, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    vec![
        ("two_level_1", TwoLevelFamily1::new(LambdaProfile::Tanh).family(), 0.3, false),
        ("two_level_2", TwoLevelFamily2::new(0.5).expect("valid r").family(), 0.2, false),
        ("geometric", GeometricFamily::for_theta(1.0).expect("positive θ").family(), 1.0, true),
        ("random", RandomAnalyticFamily::sample(4, false, &mut rng).expect("sampled family").family(), 0.25, false),
        ("random_commuting", RandomAnalyticFamily::sample(4, true, &mut rng).expect("sampled family").family(), -0.4, true),
    ]
}

fn cr(s: &mut Summary, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, fam, theta, commuting) in cr_points(seed) {
        let br = match fam.branches(theta) {
            Ok(b) => b,
            Err(e) => {
                s.flag(&format!("cr.{name}"), false, e.to_string());
                continue;
            }
        };
        for m in Model::ALL {
            let mut slack = f64::INFINITY;
            for _ in 0..100 {
                let y = random_observable(br.dim(), &mut rng);
                slack = match local_cr_check(&br, &y, m) {
                    Ok(c) => slack.min(c.lhs - c.rhs),
                    Err(_) => f64::NEG_INFINITY,
                };
            }
            s.at_least(&format!("cr.{name}.{m}.slack"), slack, -1e-10);
            if commuting || matches!(m, Model::Bvn | Model::Sld) {
                let h = ld_operator(&br, m);
                let info = qfi_of(&br, &h);
                let gap = Observable::new(h.matrix.scale(1.0 / info))
                    .ok()
                    .and_then(|o| local_cr_check(&br, &o, m).ok())
                    .map_or(f64::INFINITY, |c| (c.lhs - c.rhs).abs());
                s.at_most(&format!("cr.{name}.{m}.saturation"), gap, 1e-8);
            }
        }
    }
}

/// Families for the relative-entropy and maximality checks.
pub fn entropy_points() -> Vec<(&'static str, StateFamily, f64)> {
    let ln2 = std::f64::consts::LN_2;
    vec![
        ("two_level_1", TwoLevelFamily1::new(LambdaProfile::Tanh).family(), 0.3),
        ("two_level_2", TwoLevelFamily2::new(0.5).expect("valid r").family(), 0.2),
        ("geometric", GeometricFamily::for_theta(ln2 - 0.05).expect("positive θ").family(), ln2),
    ]
}

fn entropy(s: &mut Summary) {
    for (name, fam, theta) in entropy_points() {
        let info = fam.branches(theta).map(|br| qfi(&br, Model::Bvn)).unwrap_or(f64::NAN);
        let rel = relent_limit(&fam, theta, &RELENT_EPS).map_or(f64::INFINITY, |l| (l - info).abs() / info);
        s.at_most(&format!("entropy.{name}.relative_entropy_limit"), rel, 1e-4);
        let mx = maximality_check(&fam, theta).map_or(f64::INFINITY, |m| (m.e_hprime - m.minus_qfi).abs() / info);
        s.at_most(&format!("entropy.{name}.maximality"), mx, 1e-4);
    }
}
