//! Command implementations behind the `ainfty` binary: parse a document,
//! run one analysis, and render a deterministic report.
//!
//! Exit-code contract: 0 on pass, 1 on a mathematical negative (nonzero
//! residual, failed bar check, or an obstruction), 2 on input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ainfty::algebra::GradedAlgebra;
use ainfty::cochain::{Cochain, Coefficients};
use ainfty::cohomology::{cochain_basis, cohomology_dim, Theory};
use ainfty::doc::{self, Document};
use ainfty::field::Field;
use ainfty::twisting::{
    stasheff_residuals, structure_to_twisting, trivialize, AInfStructure, BarComplex,
    TrivializeOutcome, TwistingCochain, TwistingError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// 0 / 1 / 2 per the exit-code contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Negative,
    InputError,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Negative => 1,
            Outcome::InputError => 2,
        }
    }
}

pub struct Report {
    pub stdout: String,
    pub outcome: Outcome,
}

impl Report {
    fn pass(stdout: String) -> Self {
        Report {
            stdout,
            outcome: Outcome::Pass,
        }
    }

    fn negative(stdout: String) -> Self {
        Report {
            stdout,
            outcome: Outcome::Negative,
        }
    }
}

fn input_error(message: impl Into<String>) -> Report {
    Report {
        stdout: format!("error: {}\n", message.into()),
        outcome: Outcome::InputError,
    }
}

pub fn load(path: &Path) -> Result<Document, Report> {
    doc::parse_document(path).map_err(|e| input_error(e.to_string()))
}

fn theory_allowed<F: Field>(algebra: &GradedAlgebra<F>, theory: Theory) -> Result<(), Report> {
    if theory == Theory::Harrison && !algebra.is_commutative() {
        return Err(input_error(
            "harrison theory requires a graded-commutative algebra",
        ));
    }
    Ok(())
}

/// `cohomology`: bigraded dimension table. In diagonal mode only the
/// trivialization line `k = 2 − n` is reported, including zero rows; otherwise
/// every internal degree with a nonzero cochain space.
pub fn cmd_cohomology(
    document: &Document,
    theory: Theory,
    n_max: usize,
    diagonal: bool,
    format: Format,
) -> Report {
    match document {
        Document::RationalAlgebra(a) => run_cohomology(a, theory, n_max, diagonal, format),
        Document::PrimeAlgebra(a) => run_cohomology(a, theory, n_max, diagonal, format),
        Document::RationalStructure(s) => {
            run_cohomology(s.algebra(), theory, n_max, diagonal, format)
        }
        Document::PrimeStructure(s) => run_cohomology(s.algebra(), theory, n_max, diagonal, format),
    }
}

fn run_cohomology<F: Field>(
    algebra: &GradedAlgebra<F>,
    theory: Theory,
    n_max: usize,
    diagonal: bool,
    format: Format,
) -> Report {
    if n_max < 2 {
        return input_error("--n-max must be at least 2");
    }
    if let Err(report) = theory_allowed(algebra, theory) {
        return report;
    }
    let coeffs = Coefficients::SelfAlgebra;
    let label = match theory {
        Theory::Hochschild => "Hoch",
        Theory::Harrison => "Harr",
    };
    let mut out = String::new();
    if format == Format::Text {
        let _ = writeln!(
            out,
            "# {label} cohomology over {}, n = 2..{n_max}{}",
            algebra.field().spec(),
            if diagonal { ", diagonal k = 2−n" } else { "" }
        );
    }
    for n in 2..=n_max {
        let ks: Vec<i64> = if diagonal {
            vec![2 - n as i64]
        } else {
            internal_degrees(algebra, n)
        };
        for k in ks {
            let dim_space = cochain_basis(algebra, coeffs, n, k, theory).dim();
            if !diagonal && dim_space == 0 {
                continue;
            }
            let dim = match cohomology_dim(algebra, coeffs, n, k, theory) {
                Ok(d) => d,
                Err(e) => return input_error(e.to_string()),
            };
            match format {
                Format::Machine => {
                    let _ = writeln!(out, "{{\"n\":{n},\"k\":{k},\"dim\":{dim}}}");
                }
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "{label}^{{{n},{k}}} = {dim}   (dim C^{{{n},{k}}} = {dim_space})"
                    );
                }
            }
        }
    }
    Report::pass(out)
}

/// Internal degrees `k` with a nonzero cochain space at arity `n`.
fn internal_degrees<F: Field>(algebra: &GradedAlgebra<F>, n: usize) -> Vec<i64> {
    let space = algebra.space();
    let Some((dmin, dmax)) = space.degree_window() else {
        return Vec::new();
    };
    let lo = dmin - (n as i64) * dmax;
    let hi = dmax - (n as i64) * dmin;
    (lo..=hi)
        .filter(|&k| {
            cochain_basis(
                algebra,
                Coefficients::<'_, F>::SelfAlgebra,
                n,
                k,
                Theory::Hochschild,
            )
            .dim()
                > 0
        })
        .collect()
}

fn structure_of(document: &Document) -> Result<StructureRef<'_>, Report> {
    match document {
        Document::RationalStructure(s) => Ok(StructureRef::Rational(s)),
        Document::PrimeStructure(s) => Ok(StructureRef::Prime(s)),
        _ => Err(input_error(
            "this command needs a structure document (with truncation/operations)",
        )),
    }
}

enum StructureRef<'a> {
    Rational(&'a AInfStructure<ainfty::Rationals>),
    Prime(&'a AInfStructure<ainfty::PrimeField>),
}

/// `check`: per-arity Stasheff residual report.
pub fn cmd_check(document: &Document, n_max: Option<usize>, format: Format) -> Report {
    let structure = match structure_of(document) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match structure {
        StructureRef::Rational(s) => run_check(s, n_max, format),
        StructureRef::Prime(s) => run_check(s, n_max, format),
    }
}

fn resolve_n_max<F: Field>(
    structure: &AInfStructure<F>,
    n_max: Option<usize>,
) -> Result<usize, Report> {
    let truncation = structure.truncation();
    match n_max {
        None => Ok(truncation),
        Some(n) if n <= truncation => Ok(n),
        Some(n) => Err(input_error(format!(
            "--n-max {n} exceeds the document truncation {truncation}"
        ))),
    }
}

fn run_check<F: Field>(
    structure: &AInfStructure<F>,
    n_max: Option<usize>,
    format: Format,
) -> Report {
    let n_max = match resolve_n_max(structure, n_max) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let residuals = stasheff_residuals(structure, n_max);
    let mut out = String::new();
    let mut all_zero = true;
    for (arity, residual) in &residuals {
        let norm0 = residual.entry_count();
        all_zero &= norm0 == 0;
        match format {
            Format::Machine => {
                let _ = writeln!(out, "{{\"arity\":{arity},\"residual_norm0\":{norm0}}}");
            }
            Format::Text => {
                let verdict = if norm0 == 0 { "ok" } else { "NONZERO" };
                let _ = writeln!(out, "arity {arity}: residual {verdict} ({norm0} entries)");
            }
        }
    }
    if format == Format::Text {
        let _ = writeln!(
            out,
            "{}",
            if all_zero {
                "structure satisfies the associativity identities up to the truncation"
            } else {
                "structure FAILS the associativity identities"
            }
        );
    }
    if all_zero {
        Report::pass(out)
    } else {
        Report::negative(out)
    }
}

/// `bar-check`: `d∘d = 0` and the coderivation law on the bar complex.
pub fn cmd_bar_check(document: &Document, n_max: Option<usize>, format: Format) -> Report {
    let structure = match structure_of(document) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match structure {
        StructureRef::Rational(s) => run_bar_check(s, n_max, format),
        StructureRef::Prime(s) => run_bar_check(s, n_max, format),
    }
}

fn run_bar_check<F: Field>(
    structure: &AInfStructure<F>,
    n_max: Option<usize>,
    format: Format,
) -> Report {
    let n_max = match resolve_n_max(structure, n_max) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let bar = BarComplex::new(structure, n_max);
    let d_squared = bar.d_squared_failure();
    let coderivation = bar.coderivation_failure();
    let mut out = String::new();
    match format {
        Format::Machine => {
            let _ = writeln!(
                out,
                "{{\"check\":\"d_squared\",\"ok\":{}}}",
                d_squared.is_none()
            );
            let _ = writeln!(
                out,
                "{{\"check\":\"coderivation\",\"ok\":{}}}",
                coderivation.is_none()
            );
        }
        Format::Text => {
            match d_squared {
                None => {
                    let _ = writeln!(out, "d∘d = 0 on all words of length ≤ {n_max}");
                }
                Some(len) => {
                    let _ = writeln!(out, "d∘d ≠ 0, first failure at word length {len}");
                }
            }
            match &coderivation {
                None => {
                    let _ = writeln!(out, "d is a coderivation for the deconcatenation coproduct");
                }
                Some(word) => {
                    let _ = writeln!(
                        out,
                        "coderivation law fails on a word of length {}",
                        word.len()
                    );
                }
            }
        }
    }
    if d_squared.is_none() && coderivation.is_none() {
        Report::pass(out)
    } else {
        Report::negative(out)
    }
}

/// `trivialize`: run the obstruction loop; emit the equivalence components
/// as a document on success, or the obstruction bidegree and representative.
pub fn cmd_trivialize(
    document: &Document,
    theory: Option<Theory>,
    n_max: Option<usize>,
    format: Format,
    output: Option<&PathBuf>,
) -> Report {
    let structure = match structure_of(document) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match structure {
        StructureRef::Rational(s) => run_trivialize(s, theory, n_max, format, output),
        StructureRef::Prime(s) => run_trivialize(s, theory, n_max, format, output),
    }
}

fn run_trivialize<F: Field>(
    structure: &AInfStructure<F>,
    theory: Option<Theory>,
    n_max: Option<usize>,
    format: Format,
    output: Option<&PathBuf>,
) -> Report {
    let algebra = structure.algebra();
    let n_max = match resolve_n_max(structure, n_max) {
        Ok(n) => n,
        Err(r) => return r,
    };
    let theory = theory.unwrap_or(if structure.is_commutative() {
        Theory::Harrison
    } else {
        Theory::Hochschild
    });
    if let Err(r) = theory_allowed(algebra, theory) {
        return r;
    }
    if theory == Theory::Harrison && !structure.is_commutative() {
        return input_error("harrison trivialization needs a commutative structure");
    }
    let repackaged = match structure_to_twisting(structure) {
        Ok(a) => a,
        Err(e) => return input_error(e.to_string()),
    };
    let a = match TwistingCochain::new(
        algebra,
        repackaged.components().map(|(_, c)| c.clone()),
        n_max,
        theory,
    ) {
        Ok(a) => a,
        Err(TwistingError::TwistingCondition(arity)) => {
            return Report::negative(format!(
                "twisting condition δa = a⌣₁a fails first at arity {arity}; not a valid structure\n"
            ));
        }
        Err(TwistingError::ArityOutOfRange(arity, truncation)) => {
            return input_error(format!(
                "operation arity {arity} exceeds the working truncation {truncation}"
            ));
        }
        Err(e) => return input_error(e.to_string()),
    };
    match trivialize(algebra, &a) {
        Err(e) => Report::negative(format!("error: {e}\n")),
        Ok(TrivializeOutcome::Trivialized(t)) => {
            let raw = doc::morphism_components_to_raw(algebra, n_max, &t.equivalence);
            let emitted = doc::emit(&raw);
            let mut out = String::new();
            match format {
                Format::Machine => {
                    let _ = writeln!(
                        out,
                        "{{\"result\":\"trivial\",\"steps\":{},\"truncation\":{n_max}}}",
                        t.steps.len()
                    );
                }
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "twisting cochain is equivalent to zero up to truncation {n_max} ({} killing steps)",
                        t.steps.len()
                    );
                }
            }
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &emitted) {
                        return input_error(format!("cannot write {}: {e}", path.display()));
                    }
                    if format == Format::Text {
                        let _ =
                            writeln!(out, "equivalence components written to {}", path.display());
                    }
                }
                None => out.push_str(&emitted),
            }
            Report::pass(out)
        }
        Ok(TrivializeOutcome::Obstructed(o)) => {
            let (n, k) = o.class.bidegree();
            let mut out = String::new();
            match format {
                Format::Machine => {
                    let _ = writeln!(out, "{{\"result\":\"obstruction\",\"n\":{n},\"k\":{k}}}");
                }
                Format::Text => {
                    let _ = writeln!(
                        out,
                        "obstruction: nonzero {} class at bidegree ({n}, {k})",
                        o.class.theory()
                    );
                    let _ = writeln!(out, "representative:");
                }
            }
            out.push_str(&render_representative(algebra, o.class.representative()));
            Report::negative(out)
        }
    }
}

fn render_representative<F: Field>(algebra: &GradedAlgebra<F>, c: &Cochain<F>) -> String {
    let field = algebra.field();
    let space = algebra.space();
    let mut out = String::new();
    for (word, value) in c.support() {
        let inputs: Vec<&str> = word.letters().iter().map(|&l| space.name(l)).collect();
        let terms: Vec<String> = value
            .iter()
            .map(|(t, coeff)| format!("{}·{}", field.format(coeff), space.name(t)))
            .collect();
        let _ = writeln!(out, "  {} ↦ {}", inputs.join("⊗"), terms.join(" + "));
    }
    out
}
