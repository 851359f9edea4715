mod common;

use common::*;
use qfi_core::ldops::ld_operator;
use qfi_core::linalg::ComplexMatrix;
use qfi_core::qfi::*;
use qfi_core::zoo::*;
use qfi_core::{Error, Model, Observable, StateFamily};

fn cr_families() -> Vec<(&'static str, StateFamily, f64, bool)> {
    vec![
        ("two_level_1", TwoLevelFamily1::new(LambdaProfile::Tanh).family(), 0.3, false),
        ("two_level_2", TwoLevelFamily2::new(0.5).unwrap().family(), 0.2, false),
        ("geometric", GeometricFamily::for_theta(1.0).unwrap().family(), 1.0, true),
        ("random", random_family(5, 4, false).family(), 0.25, false),
        ("random_commuting", random_family(6, 4, true).family(), -0.4, true),
    ]
}

#[test]
fn cramer_rao_holds_for_random_observables() {
    let mut r = rng(2024);
    for (name, fam, theta, _) in cr_families() {
        let br = fam.branches(theta).unwrap();
        for m in Model::ALL {
            for _ in 0..100 {
                let y = Observable::new(random_hermitian(br.dim(), &mut r)).unwrap();
                let c = local_cr_check(&br, &y, m).unwrap();
                assert!(c.lhs - c.rhs >= -1e-10, "{name} {m}: {} < {}", c.lhs, c.rhs);
                assert!(c.holds);
            }
        }
    }
}

#[test]
fn efficient_direction_saturates() {
    for (name, fam, theta, commuting) in cr_families() {
        let br = fam.branches(theta).unwrap();
        for m in Model::ALL {
            // off the commuting case only BvN and SLD pair their variance with their own information
            if !commuting && !matches!(m, Model::Bvn | Model::Sld) {
                continue;
            }
            let h = ld_operator(&br, m);
            let info = qfi_of(&br, &h);
            let obs = Observable::new(h.matrix.scale(1.0 / info)).unwrap();
            let c = local_cr_check(&br, &obs, m).unwrap();
            assert!((c.u - 1.0).abs() < 1e-10, "{name} {m}");
            assert!((c.lhs - c.rhs).abs() <= 1e-8, "{name} {m}: {} vs {}", c.lhs, c.rhs);
        }
    }
}

#[test]
fn flat_information_is_rejected() {
    let br = TwoLevelFamily1::new(LambdaProfile::Constant(0.5)).family().branches(0.1).unwrap();
    let y = Observable::new(ComplexMatrix::identity(2)).unwrap();
    assert!(matches!(local_cr_check(&br, &y, Model::Sld), Err(Error::DegenerateInformation { .. })));
}

#[test]
fn breve_variance_reduces_for_commuting_observables() {
    let fam = random_family(9, 4, false).family();
    let br = fam.branches(0.1).unwrap();
    let rho = br.rho();
    let y = Observable::new(&(&rho * &rho).scale(3.0) - &rho).unwrap();
    assert!((breve_variance(&br, &y) - variance(&rho, &y)).abs() < 1e-14);
    let mut r = rng(1);
    for _ in 0..20 {
        let z = Observable::new(random_hermitian(4, &mut r)).unwrap();
        assert!(breve_variance(&br, &z) <= variance(&rho, &z) + 1e-14);
    }
}

#[test]
fn observables_must_be_hermitian() {
    let mut a = ComplexMatrix::identity(2);
    a[(0, 1)] = 1.0.into();
    assert!(Observable::new(a).is_err());
}

#[test]
fn copies_add_information() {
    let fams = [
        (TwoLevelFamily1::new(LambdaProfile::Tanh).family(), 0.4),
        (TwoLevelFamily2::new(0.7).unwrap().family(), -0.2),
        (random_family(12, 2, false).family(), 0.3),
    ];
    for (fam, theta) in fams {
        let br = fam.branches(theta).unwrap();
        for m in Model::ALL {
            for n in [2, 3] {
                let c = ncopy_qfi(&br, m, n).unwrap();
                assert!(c.explicit);
                assert!((c.value - n as f64 * c.single).abs() <= 1e-8, "{m} n={n}: {} vs {}", c.value, c.single);
                assert!(c.local_sum_residual <= 1e-8, "{m} n={n}");
            }
            let big = ncopy_qfi(&br, m, 7).unwrap();
            assert!(!big.explicit && big.value == 7.0 * big.single);
        }
    }
    let br = GeometricFamily::new(9).unwrap().family().branches(0.2).unwrap();
    assert!(matches!(ncopy_qfi(&br, Model::Sld, 3), Err(Error::ResourceLimit { .. })));
    assert!(ncopy_qfi(&br, Model::Sld, 0).is_err());
}

fn entropy_families() -> Vec<(&'static str, StateFamily, f64)> {
    let ln2 = std::f64::consts::LN_2;
    vec![
        ("two_level_1", TwoLevelFamily1::new(LambdaProfile::Tanh).family(), 0.3),
        ("two_level_2", TwoLevelFamily2::new(0.5).unwrap().family(), 0.2),
        ("geometric", GeometricFamily::for_theta(ln2 - 0.05).unwrap().family(), ln2),
    ]
}

#[test]
fn relative_entropy_curvature_is_the_bvn_information() {
    for (name, fam, theta) in entropy_families() {
        let info = qfi(&fam.branches(theta).unwrap(), Model::Bvn);
        let limit = relent_limit(&fam, theta, &RELENT_EPS).unwrap();
        assert!((limit - info).abs() <= 1e-4 * info, "{name}: {limit} vs {info}");
    }
}

#[test]
fn bvn_derivative_is_maximal() {
    for (name, fam, theta) in entropy_families() {
        let mx = maximality_check(&fam, theta).unwrap();
        assert!((mx.e_hprime - mx.minus_qfi).abs() <= 1e-4 * mx.minus_qfi.abs(), "{name}: {mx:?}");
    }
}

#[test]
fn relative_entropy_basics() {
    let fam = random_family(4, 3, false).family();
    let a = fam.eval_rho(0.1).unwrap();
    let b = fam.eval_rho(0.5).unwrap();
    assert!(relative_entropy(&a, &a).unwrap().abs() < 1e-14);
    assert!(relative_entropy(&a, &b).unwrap() > 0.0);
    assert!(relent_limit(&fam, 0.0, &[1e-2]).is_err());
}

#[test]
fn doubling_the_speed_quadruples_information() {
    let fam = TwoLevelFamily2::new(0.6).unwrap().family();
    let fast = fam.reparametrized(2.0);
    for s in [-0.3, 0.1, 0.45] {
        let slow = fam.branches(2.0 * s).unwrap();
        let quick = fast.branches(s).unwrap();
        for m in Model::ALL {
            assert!((qfi(&quick, m) - 4.0 * qfi(&slow, m)).abs() <= 1e-10, "{m}");
        }
    }
}

#[test]
fn report_collects_every_model() {
    let fam = random_family(8, 3, false).family();
    let rep = QfiReport::compute(&fam, 0.2).unwrap();
    let br = fam.branches(0.2).unwrap();
    for m in Model::ALL {
        assert!((rep.qfi(m) - qfi(&br, m)).abs() < 1e-14);
        assert!((rep.i2(m) - (rep.qfi(m) - rep.i1)).abs() < 1e-14);
        assert!(rep.zero_expectation[m.index()].abs() < 1e-10);
    }
    assert!(rep.kmb_residual < 1e-10);
}
