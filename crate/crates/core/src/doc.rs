//! Structured-text documents describing algebras and A(∞)-structures.
//!
//! The on-disk format is a single JSON object. Rational coefficients are
//! serialized as strings (`"3"`, `"-7/2"`); prime-field elements as plain
//! integers. Emission is canonical: fixed key order, basis order as given,
//! entries sorted by basis index and word, coefficients in reduced form —
//! so emitted documents re-parse and re-emit byte-identically.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, GradedAlgebra};
use crate::cochain::{Cochain, CochainError, Target};
use crate::comb::LinComb;
use crate::field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
use crate::space::{GradedSpace, SpaceError};
use crate::twisting::{AInfStructure, TwistingError};
use crate::word::Word;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field kind must be \"rationals\" or \"prime\", found {0:?}")]
    UnknownFieldKind(String),
    #[error("a prime field needs a characteristic")]
    MissingCharacteristic,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("in {entry}: {source}")]
    Entry {
        entry: String,
        source: Box<DocError>,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Structure(#[from] TwistingError),
    #[error("operation entry {index}: arity {arity} does not match {found} inputs")]
    ArityMismatch {
        index: usize,
        arity: usize,
        found: usize,
    },
    #[error("a structure document needs a truncation")]
    MissingTruncation,
}

fn entry_error(entry: impl Into<String>, source: impl Into<DocError>) -> DocError {
    DocError::Entry {
        entry: entry.into(),
        source: Box::new(source.into()),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FieldDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisEntryDoc {
    pub name: String,
    pub degree: i64,
}

/// One `(basis, coefficient)` pair of a value.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermDoc(pub String, pub CoeffDoc);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum CoeffDoc {
    Int(i64),
    Str(String),
}

impl CoeffDoc {
    fn parse<F: Field>(&self, field: &F) -> Result<F::Elem, FieldError> {
        match self {
            CoeffDoc::Int(n) => field.parse(&n.to_string()),
            CoeffDoc::Str(s) => field.parse(s),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProductEntryDoc {
    pub left: String,
    pub right: String,
    pub value: Vec<TermDoc>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct FlagsDoc {
    #[serde(default)]
    pub associative: bool,
    #[serde(default)]
    pub commutative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unital: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OperationEntryDoc {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub value: Vec<TermDoc>,
}

/// The raw shape of every document this crate reads or writes. A document
/// without `truncation`/`operations` describes a plain algebra; with them,
/// an A(∞)-structure; `components` instead of `operations` describes the
/// equivalence data emitted by a trivialization.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RawDocument {
    pub field: FieldDoc,
    pub basis: Vec<BasisEntryDoc>,
    #[serde(default)]
    pub products: Vec<ProductEntryDoc>,
    #[serde(default)]
    pub flags: FlagsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutative_structure: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operations: Option<Vec<OperationEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<OperationEntryDoc>>,
}

impl RawDocument {
    pub fn field_spec(&self) -> Result<FieldSpec, DocError> {
        let spec = match self.field.kind.as_str() {
            "rationals" => FieldSpec::Rationals,
            "prime" => FieldSpec::Prime(
                self.field
                    .characteristic
                    .ok_or(DocError::MissingCharacteristic)?,
            ),
            other => return Err(DocError::UnknownFieldKind(other.to_owned())),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_structure(&self) -> bool {
        self.truncation.is_some() || self.operations.is_some()
    }
}

/// A fully validated document over one of the two concrete fields.
#[derive(Debug)]
pub enum Document {
    RationalAlgebra(GradedAlgebra<Rationals>),
    PrimeAlgebra(GradedAlgebra<PrimeField>),
    RationalStructure(AInfStructure<Rationals>),
    PrimeStructure(AInfStructure<PrimeField>),
}

pub fn parse_document_str(text: &str) -> Result<Document, DocError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    validate_document(&raw)
}

pub fn parse_document(path: &Path) -> Result<Document, DocError> {
    let text = std::fs::read_to_string(path).map_err(|source| DocError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_document_str(&text)
}

pub fn validate_document(raw: &RawDocument) -> Result<Document, DocError> {
    match raw.field_spec()? {
        FieldSpec::Rationals => {
            if raw.is_structure() {
                Ok(Document::RationalStructure(build_structure(
                    raw, Rationals,
                )?))
            } else {
                Ok(Document::RationalAlgebra(build_algebra(raw, Rationals)?))
            }
        }
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p)?;
            if raw.is_structure() {
                Ok(Document::PrimeStructure(build_structure(raw, field)?))
            } else {
                Ok(Document::PrimeAlgebra(build_algebra(raw, field)?))
            }
        }
    }
}

pub fn build_algebra<F: Field>(raw: &RawDocument, field: F) -> Result<GradedAlgebra<F>, DocError> {
    let space = GradedSpace::new(
        field.clone(),
        raw.basis.iter().map(|b| (b.name.clone(), b.degree)),
    )?;
    let mut table: BTreeMap<(u32, u32), LinComb<F>> = BTreeMap::new();
    for (index, entry) in raw.products.iter().enumerate() {
        let context = format!("product entry {index} ({}·{})", entry.left, entry.right);
        let left = space
            .index(&entry.left)
            .map_err(|e| entry_error(&context, e))?;
        let right = space
            .index(&entry.right)
            .map_err(|e| entry_error(&context, e))?;
        let mut value = LinComb::zero();
        for TermDoc(name, coeff) in &entry.value {
            let target = space.index(name).map_err(|e| entry_error(&context, e))?;
            let c = coeff.parse(&field).map_err(|e| entry_error(&context, e))?;
            value.add_term(&field, target, c);
        }
        if !value.is_zero() {
            match table.get_mut(&(left, right)) {
                None => {
                    table.insert((left, right), value);
                }
                Some(existing) => existing.add_scaled(&field, &value, &field.one()),
            }
        }
    }
    table.retain(|_, v| !v.is_zero());
    let unit = raw
        .flags
        .unital
        .as_deref()
        .map(|name| space.index(name))
        .transpose()?;
    Ok(GradedAlgebra::new(
        space,
        table,
        raw.flags.associative,
        raw.flags.commutative,
        unit,
    )?)
}

fn parse_operations<F: Field>(
    entries: &[OperationEntryDoc],
    space: &GradedSpace<F>,
    field: &F,
    internal_degree: impl Fn(usize) -> i64,
) -> Result<Vec<Cochain<F>>, DocError> {
    let mut by_arity: BTreeMap<usize, BTreeMap<Word, LinComb<F>>> = BTreeMap::new();
    for (index, entry) in entries.iter().enumerate() {
        let context = format!("operation entry {index} (arity {})", entry.arity);
        if entry.inputs.len() != entry.arity {
            return Err(DocError::ArityMismatch {
                index,
                arity: entry.arity,
                found: entry.inputs.len(),
            });
        }
        let mut letters = Vec::with_capacity(entry.arity);
        for name in &entry.inputs {
            letters.push(space.index(name).map_err(|e| entry_error(&context, e))?);
        }
        let word = Word::new(letters);
        let mut value = LinComb::zero();
        for TermDoc(name, coeff) in &entry.value {
            let target = space.index(name).map_err(|e| entry_error(&context, e))?;
            let c = coeff.parse(field).map_err(|e| entry_error(&context, e))?;
            value.add_term(field, target, c);
        }
        let values = by_arity.entry(entry.arity).or_default();
        match values.get_mut(&word) {
            None => {
                if !value.is_zero() {
                    values.insert(word, value);
                }
            }
            Some(existing) => {
                existing.add_scaled(field, &value, &field.one());
                if existing.is_zero() {
                    values.remove(&word);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (arity, values) in by_arity {
        let cochain = Cochain::new(
            arity,
            internal_degree(arity),
            Target::SelfAlgebra,
            values,
            space,
            space,
        )?;
        out.push(cochain);
    }
    Ok(out)
}

pub fn build_structure<F: Field>(
    raw: &RawDocument,
    field: F,
) -> Result<AInfStructure<F>, DocError> {
    let algebra = build_algebra(raw, field.clone())?;
    let truncation = raw.truncation.ok_or(DocError::MissingTruncation)?;
    let entries = raw.operations.as_deref().unwrap_or(&[]);
    let higher = parse_operations(entries, algebra.space(), &field, |arity| 2 - arity as i64)?;
    let commutative = raw.commutative_structure.unwrap_or(false);
    Ok(AInfStructure::new(
        algebra,
        higher,
        truncation,
        commutative,
    )?)
}

/// Morphism components (`f_i`, bidegree `(i, 1−i)`) read from a document's
/// `components` block, for re-validating emitted equivalence data.
pub fn build_components<F: Field>(
    raw: &RawDocument,
    algebra: &GradedAlgebra<F>,
) -> Result<Vec<Cochain<F>>, DocError> {
    let entries = raw.components.as_deref().unwrap_or(&[]);
    parse_operations(entries, algebra.space(), algebra.field(), |arity| {
        1 - arity as i64
    })
}

fn field_doc(spec: FieldSpec) -> FieldDoc {
    match spec {
        FieldSpec::Rationals => FieldDoc {
            kind: "rationals".to_owned(),
            characteristic: None,
        },
        FieldSpec::Prime(p) => FieldDoc {
            kind: "prime".to_owned(),
            characteristic: Some(p),
        },
    }
}

fn coeff_doc<F: Field>(field: &F, value: &F::Elem) -> CoeffDoc {
    match field.spec() {
        FieldSpec::Rationals => CoeffDoc::Str(field.format(value)),
        FieldSpec::Prime(_) => CoeffDoc::Int(
            field
                .format(value)
                .parse()
                .expect("prime field elements print as integers"),
        ),
    }
}

fn basis_docs<F: Field>(space: &GradedSpace<F>) -> Vec<BasisEntryDoc> {
    space
        .basis()
        .map(|(_, name, degree)| BasisEntryDoc {
            name: name.to_owned(),
            degree,
        })
        .collect()
}

fn value_terms<F: Field>(field: &F, space: &GradedSpace<F>, value: &LinComb<F>) -> Vec<TermDoc> {
    value
        .iter()
        .map(|(t, c)| TermDoc(space.name(t).to_owned(), coeff_doc(field, c)))
        .collect()
}

pub fn algebra_to_raw<F: Field>(algebra: &GradedAlgebra<F>) -> RawDocument {
    let field = algebra.field();
    let space = algebra.space();
    let products = algebra
        .table()
        .iter()
        .map(|(&(i, j), value)| ProductEntryDoc {
            left: space.name(i).to_owned(),
            right: space.name(j).to_owned(),
            value: value_terms(field, space, value),
        })
        .collect();
    RawDocument {
        field: field_doc(field.spec()),
        basis: basis_docs(space),
        products,
        flags: FlagsDoc {
            associative: algebra.is_associative(),
            commutative: algebra.is_commutative(),
            unital: algebra.unit().map(|u| space.name(u).to_owned()),
        },
        truncation: None,
        commutative_structure: None,
        operations: None,
        components: None,
    }
}

fn operation_entries<'a, F: Field + 'a>(
    space: &'a GradedSpace<F>,
    ops: impl Iterator<Item = (usize, &'a Cochain<F>)>,
) -> Vec<OperationEntryDoc> {
    let field = space.field();
    let mut out = Vec::new();
    for (arity, cochain) in ops {
        for (word, value) in cochain.support() {
            out.push(OperationEntryDoc {
                arity,
                inputs: word
                    .letters()
                    .iter()
                    .map(|&l| space.name(l).to_owned())
                    .collect(),
                value: value_terms(field, space, value),
            });
        }
    }
    out
}

pub fn structure_to_raw<F: Field>(structure: &AInfStructure<F>) -> RawDocument {
    let mut raw = algebra_to_raw(structure.algebra());
    raw.truncation = Some(structure.truncation());
    raw.commutative_structure = Some(structure.is_commutative());
    raw.operations = Some(operation_entries(
        structure.algebra().space(),
        structure.higher(),
    ));
    raw
}

/// The equivalence data `p = p² + p³ + …` of a trivialization, in the same
/// document shape with a `components` block.
pub fn morphism_components_to_raw<F: Field>(
    algebra: &GradedAlgebra<F>,
    truncation: usize,
    components: &[Cochain<F>],
) -> RawDocument {
    let mut raw = algebra_to_raw(algebra);
    raw.truncation = Some(truncation);
    raw.components = Some(operation_entries(
        algebra.space(),
        components.iter().map(|c| (c.arity(), c)),
    ));
    raw
}

/// Canonical serialization; emitted bytes re-parse and re-emit identically.
pub fn emit(raw: &RawDocument) -> String {
    let mut out = serde_json::to_string_pretty(raw).expect("documents serialize");
    out.push('\n');
    out
}
