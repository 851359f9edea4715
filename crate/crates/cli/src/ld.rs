//! Single-point inspection of a logarithmic derivative.

use std::fmt::Write as _;

use qfi_core::family::spectral_branches;
use qfi_core::ldops::{kmb_residual, ld_operator, zero_expectation_check};
use qfi_core::linalg::{schatten_norm, Schatten};
use qfi_core::zoo::near_degenerate_origin;
use qfi_core::{ComplexMatrix, Model};

use crate::families::FamilySpec;

pub struct LdReport {
    pub text: String,
    pub warnings: Vec<String>,
}

fn write_matrix(out: &mut String, a: &ComplexMatrix, part: impl Fn(qfi_core::C64) -> f64) {
    let n = a.dim();
    for i in 0..n {
        let cells: Vec<String> = (0..n).map(|j| format!("{:>17.12}", part(a[(i, j)]))).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

pub fn run(name: &str, spec: &FamilySpec, theta: f64, model: Model) -> qfi_core::Result<LdReport> {
    let mut warnings = Vec::new();
    if matches!(spec, FamilySpec::Counterexample) && near_degenerate_origin(theta) {
        warnings.push(format!(
            "theta = {theta} is in the degenerate vicinity of the origin; eigenprojections there are not resolvable"
        ));
    }
    let fam = spec.instantiate()?.at(theta)?;
    let rho = fam.eval_rho(theta)?;
    let br = spectral_branches(&rho, &fam.eval_rho_prime(theta)?)?;
    let h = ld_operator(&br, model);

    let mut text = String::new();
    let _ = writeln!(text, "family {name}  theta = {theta}  model = {model}  dim = {}", fam.dim());
    let _ = writeln!(text, "LD real part:");
    write_matrix(&mut text, &h.matrix, |z| z.re);
    let _ = writeln!(text, "LD imaginary part:");
    write_matrix(&mut text, &h.matrix, |z| z.im);
    let frob = |a: &ComplexMatrix| schatten_norm(a, Schatten::Frobenius);
    let _ = writeln!(text, "Tr(rho H)        = {:.12e}", zero_expectation_check(&rho, &h));
    let _ = writeln!(text, "KMB residual     = {:.12e}", kmb_residual(&br, &ld_operator(&br, Model::Bvn)));
    let _ = writeln!(text, "||H1||_2         = {:.12e}", frob(&h.h1)?);
    let _ = writeln!(text, "||H2||_2         = {:.12e}", frob(&h.h2)?);
    let _ = writeln!(text, "QFI              = {:.12e}", qfi_core::qfi::qfi_of(&br, &h));
    Ok(LdReport { text, warnings })
}
