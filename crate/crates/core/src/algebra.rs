//! Graded algebras and graded bimodules with eagerly validated tables.

use std::collections::BTreeMap;

use crate::comb::LinComb;
use crate::field::Field;
use crate::sign::parity_sign;
use crate::space::GradedSpace;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("product entry {left}·{right} -> {target} violates the degree law ({left_deg} + {right_deg} ≠ {target_deg})")]
    DegreeLaw {
        left: String,
        right: String,
        target: String,
        left_deg: i64,
        right_deg: i64,
        target_deg: i64,
    },
    #[error("associativity fails on ({0}·{1})·{2} vs {0}·({1}·{2})")]
    NotAssociative(String, String, String),
    #[error("graded commutativity fails on the pair ({0}, {1})")]
    NotCommutative(String, String),
    #[error("unit axiom fails: {unit}·{elem} or {elem}·{unit} ≠ {elem}")]
    UnitAxiom { unit: String, elem: String },
    #[error("bimodule axiom fails on ({0}, {1}, {2})")]
    BimoduleAxiom(String, String, String),
    #[error("action entry {0} violates the degree law")]
    ActionDegreeLaw(String),
}

/// A finite-dimensional graded algebra given by a sparse product table on
/// basis elements. Flags are claims checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra<F: Field> {
    space: GradedSpace<F>,
    table: BTreeMap<(u32, u32), LinComb<F>>,
    associative: bool,
    commutative: bool,
    unit: Option<u32>,
}

impl<F: Field> GradedAlgebra<F> {
    pub fn new(
        space: GradedSpace<F>,
        table: BTreeMap<(u32, u32), LinComb<F>>,
        associative: bool,
        commutative: bool,
        unit: Option<u32>,
    ) -> Result<Self, AlgebraError> {
        let algebra = GradedAlgebra {
            space,
            table,
            associative,
            commutative,
            unit,
        };
        algebra.validate()?;
        Ok(algebra)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let field = self.field();
        for (&(i, j), value) in &self.table {
            let expected = self.space.degree(i) + self.space.degree(j);
            for (t, _) in value.iter() {
                if self.space.degree(t) != expected {
                    return Err(AlgebraError::DegreeLaw {
                        left: self.space.name(i).to_owned(),
                        right: self.space.name(j).to_owned(),
                        target: self.space.name(t).to_owned(),
                        left_deg: self.space.degree(i),
                        right_deg: self.space.degree(j),
                        target_deg: self.space.degree(t),
                    });
                }
            }
        }
        let dim = self.space.dim() as u32;
        if self.associative {
            for a in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        let ab = self.product_basis(a, b);
                        let bc = self.product_basis(b, c);
                        let left = self.product_comb_basis(&ab, c);
                        let right = self.product_basis_comb(a, &bc);
                        if left != right {
                            return Err(AlgebraError::NotAssociative(
                                self.space.name(a).to_owned(),
                                self.space.name(b).to_owned(),
                                self.space.name(c).to_owned(),
                            ));
                        }
                    }
                }
            }
        }
        if self.commutative {
            for a in 0..dim {
                for b in 0..dim {
                    let ab = self.product_basis(a, b);
                    let sign = parity_sign(self.space.degree(a) * self.space.degree(b));
                    let ba = self.product_basis(b, a).scaled(field, &sign.scalar(field));
                    if ab != ba {
                        return Err(AlgebraError::NotCommutative(
                            self.space.name(a).to_owned(),
                            self.space.name(b).to_owned(),
                        ));
                    }
                }
            }
        }
        if let Some(u) = self.unit {
            for e in 0..dim {
                let basis = LinComb::basis(field, e);
                if self.product_basis(u, e) != basis || self.product_basis(e, u) != basis {
                    return Err(AlgebraError::UnitAxiom {
                        unit: self.space.name(u).to_owned(),
                        elem: self.space.name(e).to_owned(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &GradedSpace<F> {
        &self.space
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_associative(&self) -> bool {
        self.associative
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn unit(&self) -> Option<u32> {
        self.unit
    }

    pub fn table(&self) -> &BTreeMap<(u32, u32), LinComb<F>> {
        &self.table
    }

    pub fn product_basis(&self, i: u32, j: u32) -> LinComb<F> {
        self.table.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn product_basis_comb(&self, i: u32, y: &LinComb<F>) -> LinComb<F> {
        let field = self.field();
        let mut out = LinComb::zero();
        for (j, c) in y.iter() {
            out.add_scaled(field, &self.product_basis(i, j), c);
        }
        out
    }

    pub fn product_comb_basis(&self, x: &LinComb<F>, j: u32) -> LinComb<F> {
        let field = self.field();
        let mut out = LinComb::zero();
        for (i, c) in x.iter() {
            out.add_scaled(field, &self.product_basis(i, j), c);
        }
        out
    }

    pub fn product_comb(&self, x: &LinComb<F>, y: &LinComb<F>) -> LinComb<F> {
        let field = self.field();
        let mut out = LinComb::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(field, &self.product_basis(i, j), &field.mul(a, b));
            }
        }
        out
    }
}

/// A graded bimodule over a graded algebra, with left and right action
/// tables validated against the bimodule axioms on basis triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBimodule<F: Field> {
    name: String,
    space: GradedSpace<F>,
    left: BTreeMap<(u32, u32), LinComb<F>>,
    right: BTreeMap<(u32, u32), LinComb<F>>,
}

impl<F: Field> GradedBimodule<F> {
    pub fn new(
        name: impl Into<String>,
        space: GradedSpace<F>,
        left: BTreeMap<(u32, u32), LinComb<F>>,
        right: BTreeMap<(u32, u32), LinComb<F>>,
        algebra: &GradedAlgebra<F>,
    ) -> Result<Self, AlgebraError> {
        let module = GradedBimodule {
            name: name.into(),
            space,
            left,
            right,
        };
        module.validate(algebra)?;
        Ok(module)
    }

    /// The algebra as a bimodule over itself.
    pub fn regular(algebra: &GradedAlgebra<F>) -> Self {
        GradedBimodule {
            name: "regular".to_owned(),
            space: algebra.space().clone(),
            left: algebra.table().clone(),
            right: algebra.table().clone(),
        }
    }

    fn validate(&self, algebra: &GradedAlgebra<F>) -> Result<(), AlgebraError> {
        for (&(a, m), value) in &self.left {
            let expected = algebra.space().degree(a) + self.space.degree(m);
            if value.iter().any(|(t, _)| self.space.degree(t) != expected) {
                return Err(AlgebraError::ActionDegreeLaw(format!(
                    "{}·{}",
                    algebra.space().name(a),
                    self.space.name(m)
                )));
            }
        }
        for (&(m, a), value) in &self.right {
            let expected = self.space.degree(m) + algebra.space().degree(a);
            if value.iter().any(|(t, _)| self.space.degree(t) != expected) {
                return Err(AlgebraError::ActionDegreeLaw(format!(
                    "{}·{}",
                    self.space.name(m),
                    algebra.space().name(a)
                )));
            }
        }
        let adim = algebra.dim() as u32;
        let mdim = self.space.dim() as u32;
        for a in 0..adim {
            for b in 0..adim {
                let ab = algebra.product_basis(a, b);
                for m in 0..mdim {
                    // a·(b·m) = (ab)·m
                    let lhs = self.left_comb(algebra, a, &self.left_basis(b, m));
                    let rhs = self.left_from_alg_comb(algebra, &ab, m);
                    if lhs != rhs {
                        return Err(AlgebraError::BimoduleAxiom(
                            algebra.space().name(a).to_owned(),
                            algebra.space().name(b).to_owned(),
                            self.space.name(m).to_owned(),
                        ));
                    }
                    // (m·a)·b = m·(ab)
                    let lhs = self.right_comb(algebra, &self.right_basis(m, a), b);
                    let rhs = self.right_from_alg_comb(algebra, m, &ab);
                    if lhs != rhs {
                        return Err(AlgebraError::BimoduleAxiom(
                            self.space.name(m).to_owned(),
                            algebra.space().name(a).to_owned(),
                            algebra.space().name(b).to_owned(),
                        ));
                    }
                    // (a·m)·b = a·(m·b)
                    let lhs = self.right_comb(algebra, &self.left_basis(a, m), b);
                    let rhs = self.left_comb(algebra, a, &self.right_basis(m, b));
                    if lhs != rhs {
                        return Err(AlgebraError::BimoduleAxiom(
                            algebra.space().name(a).to_owned(),
                            self.space.name(m).to_owned(),
                            algebra.space().name(b).to_owned(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &GradedSpace<F> {
        &self.space
    }

    pub fn left_basis(&self, a: u32, m: u32) -> LinComb<F> {
        self.left.get(&(a, m)).cloned().unwrap_or_default()
    }

    pub fn right_basis(&self, m: u32, a: u32) -> LinComb<F> {
        self.right.get(&(m, a)).cloned().unwrap_or_default()
    }

    /// `a · x` for a basis algebra element and a module combination.
    pub fn left_comb(&self, algebra: &GradedAlgebra<F>, a: u32, x: &LinComb<F>) -> LinComb<F> {
        let field = algebra.field();
        let mut out = LinComb::zero();
        for (m, c) in x.iter() {
            out.add_scaled(field, &self.left_basis(a, m), c);
        }
        out
    }

    /// `x · a` for a module combination and a basis algebra element.
    pub fn right_comb(&self, algebra: &GradedAlgebra<F>, x: &LinComb<F>, a: u32) -> LinComb<F> {
        let field = algebra.field();
        let mut out = LinComb::zero();
        for (m, c) in x.iter() {
            out.add_scaled(field, &self.right_basis(m, a), c);
        }
        out
    }

    fn left_from_alg_comb(&self, algebra: &GradedAlgebra<F>, x: &LinComb<F>, m: u32) -> LinComb<F> {
        let field = algebra.field();
        let mut out = LinComb::zero();
        for (a, c) in x.iter() {
            out.add_scaled(field, &self.left_basis(a, m), c);
        }
        out
    }

    fn right_from_alg_comb(
        &self,
        algebra: &GradedAlgebra<F>,
        m: u32,
        x: &LinComb<F>,
    ) -> LinComb<F> {
        let field = algebra.field();
        let mut out = LinComb::zero();
        for (a, c) in x.iter() {
            out.add_scaled(field, &self.right_basis(m, a), c);
        }
        out
    }
}
