//! A(∞)-structures as twisting cochains: residual checks, the bar
//! construction, perturbation, and the obstruction-theoretic trivialization
//! loop.
//!
//! The dictionary is strict: a structure's higher operations `m_i` are the
//! components `a^{i,2−i}` of a twisting cochain, the multiplication enters
//! as the avatar `m̂`, and every component has shifted degree 1, so every
//! sign below is `(−1)^{A_r}` with `A_r` the shifted degree of the letters
//! passed over. Validity of the structure, `δa = a⌣₁a`, and `d∘d = 0` in
//! the bar complex are three faces of `(m̂ + a) ⌣₁ (m̂ + a) = 0`.

use std::collections::BTreeMap;

use crate::algebra::GradedAlgebra;
use crate::cochain::{
    coboundary, cup1, cup1_multi, identity_cochain, is_harrison, product_cochain, Cochain,
    CochainError, Coefficients, Target,
};
use crate::cohomology::{solve_coboundary, CohomologyClass, CohomologyError, Theory};
use crate::comb::LinComb;
use crate::field::Field;
use crate::word::{words_of_length, Word, WordSum};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwistingError {
    #[error("operation at arity {arity} must have internal degree {expected}, found {found}")]
    WrongBidegree {
        arity: usize,
        expected: i64,
        found: i64,
    },
    #[error("operation arity {0} is outside 3..=truncation ({1})")]
    ArityOutOfRange(usize, usize),
    #[error("morphism component arity {0} is outside 1..=truncation ({1})")]
    MorphismArityOutOfRange(usize, usize),
    #[error("a commutative structure requires a graded-commutative product table")]
    AlgebraNotCommutative,
    #[error("component at arity {0} does not vanish on shuffles")]
    ComponentNotHarrison(usize),
    #[error("twisting condition δa = a⌣₁a fails first at arity {0}")]
    TwistingCondition(usize),
    #[error("perturbation must sit in bidegree (n, 1−n) with n ≥ 2; found ({0}, {1})")]
    BadPerturbationBidegree(usize, i64),
    #[error("component at arity {arity} is not a cocycle although all lower components vanish")]
    ObstructionNotCocycle { arity: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// An A(∞)-structure with `m₁ = 0` and `m₂` the algebra multiplication,
/// truncated at a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfStructure<F: Field> {
    algebra: GradedAlgebra<F>,
    higher: BTreeMap<usize, Cochain<F>>,
    truncation: usize,
    commutative: bool,
}

impl<F: Field> AInfStructure<F> {
    pub fn new(
        algebra: GradedAlgebra<F>,
        higher: impl IntoIterator<Item = Cochain<F>>,
        truncation: usize,
        commutative: bool,
    ) -> Result<Self, TwistingError> {
        let mut ops = BTreeMap::new();
        for op in higher {
            let arity = op.arity();
            if arity < 3 || arity > truncation {
                return Err(TwistingError::ArityOutOfRange(arity, truncation));
            }
            let expected = 2 - arity as i64;
            if op.degree() != expected {
                return Err(TwistingError::WrongBidegree {
                    arity,
                    expected,
                    found: op.degree(),
                });
            }
            op.validate(algebra.space(), algebra.space())?;
            if !op.is_zero() {
                ops.insert(arity, op);
            }
        }
        let structure = AInfStructure {
            algebra,
            higher: ops,
            truncation,
            commutative,
        };
        if commutative {
            if !structure.algebra.is_commutative() {
                return Err(TwistingError::AlgebraNotCommutative);
            }
            for (&arity, op) in &structure.higher {
                if !is_harrison(&structure.algebra, structure.algebra.space(), op) {
                    return Err(TwistingError::ComponentNotHarrison(arity));
                }
            }
        }
        Ok(structure)
    }

    /// The structure with `m_{i≥3} = 0`.
    pub fn trivial(algebra: GradedAlgebra<F>, truncation: usize) -> Self {
        let commutative = algebra.is_commutative();
        AInfStructure {
            algebra,
            higher: BTreeMap::new(),
            truncation,
            commutative,
        }
    }

    pub fn algebra(&self) -> &GradedAlgebra<F> {
        &self.algebra
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn higher(&self) -> impl Iterator<Item = (usize, &Cochain<F>)> + '_ {
        self.higher.iter().map(|(&i, op)| (i, op))
    }

    pub fn is_trivial(&self) -> bool {
        self.higher.is_empty()
    }

    /// `m_j` in avatar form: the product avatar for `j = 2`, the stored
    /// component for `j ≥ 3`, zero otherwise (`m₁ = 0` by construction).
    pub fn operation(&self, j: usize) -> Option<Cochain<F>> {
        if j == 2 {
            Some(product_cochain(&self.algebra))
        } else {
            self.higher.get(&j).cloned()
        }
    }
}

/// `a = a^{3,−1} + a^{4,−2} + …`: the Hochschild-cochain avatar of the
/// higher operations, satisfying `δa = a⌣₁a` up to the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingCochain<F: Field> {
    components: BTreeMap<usize, Cochain<F>>,
    truncation: usize,
    theory: Theory,
}

impl<F: Field> TwistingCochain<F> {
    /// Validates bidegrees, the Harrison constraint when the theory asks
    /// for it, and the twisting condition itself.
    pub fn new(
        algebra: &GradedAlgebra<F>,
        components: impl IntoIterator<Item = Cochain<F>>,
        truncation: usize,
        theory: Theory,
    ) -> Result<Self, TwistingError> {
        let cochain = Self::new_unchecked(algebra, components, truncation, theory)?;
        if let Some(arity) = cochain.twisting_condition_failure(algebra)? {
            return Err(TwistingError::TwistingCondition(arity));
        }
        Ok(cochain)
    }

    /// Validates shapes only; the twisting condition is the caller's
    /// responsibility (used for seeding negative tests).
    pub fn new_unchecked(
        algebra: &GradedAlgebra<F>,
        components: impl IntoIterator<Item = Cochain<F>>,
        truncation: usize,
        theory: Theory,
    ) -> Result<Self, TwistingError> {
        let mut map = BTreeMap::new();
        for c in components {
            let arity = c.arity();
            if arity < 3 || arity > truncation {
                return Err(TwistingError::ArityOutOfRange(arity, truncation));
            }
            let expected = 2 - arity as i64;
            if c.degree() != expected {
                return Err(TwistingError::WrongBidegree {
                    arity,
                    expected,
                    found: c.degree(),
                });
            }
            c.validate(algebra.space(), algebra.space())?;
            if theory == Theory::Harrison && !is_harrison(algebra, algebra.space(), &c) {
                return Err(TwistingError::ComponentNotHarrison(arity));
            }
            if !c.is_zero() {
                map.insert(arity, c);
            }
        }
        Ok(TwistingCochain {
            components: map,
            truncation,
            theory,
        })
    }

    pub fn zero(truncation: usize, theory: Theory) -> Self {
        TwistingCochain {
            components: BTreeMap::new(),
            truncation,
            theory,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Cochain<F>)> + '_ {
        self.components.iter().map(|(&i, c)| (i, c))
    }

    pub fn component(&self, arity: usize) -> Cochain<F> {
        self.components
            .get(&arity)
            .cloned()
            .unwrap_or_else(|| Cochain::zero(arity, 2 - arity as i64, Target::SelfAlgebra))
    }

    /// Lowest arity with a nonzero component.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.components.keys().next().copied()
    }

    /// First arity `m ≤ truncation` where `δa = a⌣₁a` fails, if any.
    pub fn twisting_condition_failure(
        &self,
        algebra: &GradedAlgebra<F>,
    ) -> Result<Option<usize>, TwistingError> {
        let field = algebra.field().clone();
        for m in 3..=self.truncation {
            let mut residual = Cochain::zero(m, 3 - m as i64, Target::SelfAlgebra);
            if m >= 4 {
                let da = coboundary(algebra, Coefficients::SelfAlgebra, &self.component(m - 1))?;
                residual.add_scaled(&field, &da, &field.one());
            }
            for (i, ci) in self.components() {
                if i + 2 > m + 1 {
                    break;
                }
                let j = m + 1 - i;
                if j < 3 || j > self.truncation {
                    continue;
                }
                let cj = self.component(j);
                if cj.is_zero() {
                    continue;
                }
                let prod = cup1(algebra, ci, &cj)?;
                residual.add_scaled(&field, &prod, &field.neg(&field.one()));
            }
            if !residual.is_zero() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// Repackage a structure's higher operations as a twisting cochain; the
/// theory is Harrison exactly when the structure is commutative.
pub fn structure_to_twisting<F: Field>(
    structure: &AInfStructure<F>,
) -> Result<TwistingCochain<F>, TwistingError> {
    let theory = if structure.is_commutative() {
        Theory::Harrison
    } else {
        Theory::Hochschild
    };
    TwistingCochain::new_unchecked(
        &structure.algebra,
        structure.higher.values().cloned(),
        structure.truncation,
        theory,
    )
}

/// The inverse repackaging: pre `δa = a⌣₁a` (enforced by the constructor
/// of the argument).
pub fn twisting_to_structure<F: Field>(
    algebra: &GradedAlgebra<F>,
    a: &TwistingCochain<F>,
) -> Result<AInfStructure<F>, TwistingError> {
    AInfStructure::new(
        algebra.clone(),
        a.components.values().cloned(),
        a.truncation,
        a.theory == Theory::Harrison,
    )
}

/// Evaluate `outer` on `w` with the block `w[r..r+len]` replaced by an
/// already-computed inner value.
fn eval_with_insertion<F: Field>(
    field: &F,
    outer: &Cochain<F>,
    w: &Word,
    r: usize,
    len: usize,
    inner: &LinComb<F>,
) -> LinComb<F> {
    let letters = w.letters();
    let mut out = LinComb::zero();
    for (x, c) in inner.iter() {
        let mut assembled = Vec::with_capacity(letters.len() + 1 - len);
        assembled.extend_from_slice(&letters[..r]);
        assembled.push(x);
        assembled.extend_from_slice(&letters[r + len..]);
        out.add_scaled(field, &outer.value(&Word::new(assembled)), c);
    }
    out
}

/// Evaluate a cochain on a word whose letters are linear combinations,
/// expanding multilinearly.
fn eval_on_comb_word<F: Field>(field: &F, f: &Cochain<F>, blocks: &[LinComb<F>]) -> LinComb<F> {
    fn go<F: Field>(
        field: &F,
        f: &Cochain<F>,
        blocks: &[LinComb<F>],
        at: usize,
        letters: &mut Vec<u32>,
        coeff: F::Elem,
        out: &mut LinComb<F>,
    ) {
        if at == blocks.len() {
            out.add_scaled(field, &f.value(&Word::new(letters.clone())), &coeff);
            return;
        }
        for (x, c) in blocks[at].iter() {
            letters.push(x);
            go(field, f, blocks, at + 1, letters, field.mul(&coeff, c), out);
            letters.pop();
        }
    }
    let mut out = LinComb::zero();
    let mut letters = Vec::with_capacity(blocks.len());
    go(field, f, blocks, 0, &mut letters, field.one(), &mut out);
    out
}

/// The left-hand side of the Stasheff identity at each arity `3..=n_max`,
/// computed by direct enumeration:
/// `R_n(w) = Σ_{j,r} (−1)^{A_r} m_{n−j+1}(w[..r], m_j(w[r..r+j]), w[r+j..])`.
///
/// All residuals zero ⇔ the structure is a valid A⁰(∞)-structure up to
/// `n_max`.
pub fn stasheff_residuals<F: Field>(
    structure: &AInfStructure<F>,
    n_max: usize,
) -> Vec<(usize, Cochain<F>)> {
    assert!(
        n_max <= structure.truncation(),
        "n_max exceeds the truncation"
    );
    let algebra = structure.algebra();
    let field = algebra.field().clone();
    let space = algebra.space();
    let mut out = Vec::new();
    for n in 3..=n_max {
        let mut residual = Cochain::zero(n, 3 - n as i64, Target::SelfAlgebra);
        for j in 2..=n {
            let i = n - j + 1;
            if i < 2 {
                continue;
            }
            let (Some(outer), Some(inner)) = (structure.operation(i), structure.operation(j))
            else {
                continue;
            };
            for word in words_of_length(space, n) {
                let mut acc = LinComb::zero();
                for r in 0..=(n - j) {
                    let parity: i64 = word.letters()[..r]
                        .iter()
                        .map(|&l| space.degree(l) - 1)
                        .sum();
                    let block = word.slice(r..r + j);
                    let inner_value = inner.value(&block);
                    if inner_value.is_zero() {
                        continue;
                    }
                    let term = eval_with_insertion(&field, &outer, &word, r, j, &inner_value);
                    let sign = if parity.rem_euclid(2) == 0 {
                        field.one()
                    } else {
                        field.neg(&field.one())
                    };
                    acc.add_scaled(&field, &term, &sign);
                }
                residual.add_value(&field, &word, &acc, &field.one());
            }
        }
        out.push((n, residual));
    }
    out
}

/// True when every residual in the list vanishes.
pub fn residuals_vanish<F: Field>(residuals: &[(usize, Cochain<F>)]) -> bool {
    residuals.iter().all(|(_, r)| r.is_zero())
}

/// First arity carrying a nonzero residual.
pub fn first_failure<F: Field>(residuals: &[(usize, Cochain<F>)]) -> Option<usize> {
    residuals
        .iter()
        .find(|(_, r)| !r.is_zero())
        .map(|&(n, _)| n)
}

/// A morphism of truncated A(∞)-structures: components `f_i` of bidegree
/// `(i, 1−i)`, usually with `f₁ = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfMorphism<F: Field> {
    source: AInfStructure<F>,
    target: AInfStructure<F>,
    components: BTreeMap<usize, Cochain<F>>,
}

impl<F: Field> AInfMorphism<F> {
    pub fn new(
        source: AInfStructure<F>,
        target: AInfStructure<F>,
        components: impl IntoIterator<Item = Cochain<F>>,
    ) -> Result<Self, TwistingError> {
        let truncation = source.truncation().min(target.truncation());
        let mut map = BTreeMap::new();
        for c in components {
            let arity = c.arity();
            if arity < 1 || arity > truncation {
                return Err(TwistingError::MorphismArityOutOfRange(arity, truncation));
            }
            let expected = 1 - arity as i64;
            if c.degree() != expected {
                return Err(TwistingError::WrongBidegree {
                    arity,
                    expected,
                    found: c.degree(),
                });
            }
            c.validate(source.algebra().space(), target.algebra().space())?;
            if source.is_commutative()
                && target.is_commutative()
                && !is_harrison(source.algebra(), target.algebra().space(), &c)
            {
                return Err(TwistingError::ComponentNotHarrison(arity));
            }
            if !c.is_zero() {
                map.insert(arity, c);
            }
        }
        Ok(AInfMorphism {
            source,
            target,
            components: map,
        })
    }

    /// The identity morphism `{id, 0, 0, …}`.
    pub fn identity(structure: &AInfStructure<F>) -> Self {
        let id = identity_cochain(structure.algebra());
        AInfMorphism {
            source: structure.clone(),
            target: structure.clone(),
            components: BTreeMap::from([(1, id)]),
        }
    }

    pub fn source(&self) -> &AInfStructure<F> {
        &self.source
    }

    pub fn target(&self) -> &AInfStructure<F> {
        &self.target
    }

    pub fn truncation(&self) -> usize {
        self.source.truncation().min(self.target.truncation())
    }

    pub fn component(&self, arity: usize) -> Cochain<F> {
        self.components
            .get(&arity)
            .cloned()
            .unwrap_or_else(|| Cochain::zero(arity, 1 - arity as i64, Target::SelfAlgebra))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Cochain<F>)> + '_ {
        self.components.iter().map(|(&i, c)| (i, c))
    }

    /// True when `f₁` is the identity map.
    pub fn first_is_identity(&self) -> bool {
        self.component(1) == identity_cochain(self.source.algebra())
    }

    /// Composition `self ∘ inner` (apply `inner` first). The components of
    /// a composite are `(f∘g)_n = Σ f_t(g_{k₁} ⊗ … ⊗ g_{k_t})`; all
    /// morphism components have shifted degree 0, so no signs appear.
    pub fn compose(&self, inner: &AInfMorphism<F>) -> Result<AInfMorphism<F>, TwistingError> {
        if inner.target != self.source {
            return Err(TwistingError::Internal(
                "composition targets do not line up".to_owned(),
            ));
        }
        let field = self.source.algebra().field().clone();
        let space = inner.source.algebra().space();
        let truncation = self.truncation().min(inner.truncation());
        let mut components = Vec::new();
        for n in 1..=truncation {
            let mut comp = Cochain::zero(n, 1 - n as i64, Target::SelfAlgebra);
            for word in words_of_length(space, n) {
                let mut acc = LinComb::zero();
                for (t, blocks) in compositions_with_blocks(&word, n) {
                    let outer = self.component(t);
                    if outer.is_zero() {
                        continue;
                    }
                    let mut evaluated = Vec::with_capacity(t);
                    let mut dead = false;
                    for block in &blocks {
                        let v = inner.component(block.len()).value(block);
                        if v.is_zero() {
                            dead = true;
                            break;
                        }
                        evaluated.push(v);
                    }
                    if dead {
                        continue;
                    }
                    acc.add_scaled(
                        &field,
                        &eval_on_comb_word(&field, &outer, &evaluated),
                        &field.one(),
                    );
                }
                comp.add_value(&field, &word, &acc, &field.one());
            }
            components.push(comp);
        }
        AInfMorphism::new(inner.source.clone(), self.target.clone(), components)
    }
}

/// All ways to cut `word` into `t ≥ 1` nonempty consecutive blocks, for
/// every `t`.
fn compositions_with_blocks(word: &Word, n: usize) -> Vec<(usize, Vec<Word>)> {
    fn go(letters: &[u32], out: &mut Vec<Vec<Word>>, current: &mut Vec<Word>) {
        if letters.is_empty() {
            out.push(current.clone());
            return;
        }
        for head in 1..=letters.len() {
            current.push(Word::new(letters[..head].to_vec()));
            go(&letters[head..], out, current);
            current.pop();
        }
    }
    let mut all = Vec::new();
    let mut current = Vec::new();
    if n == 0 {
        return vec![];
    }
    go(word.letters(), &mut all, &mut current);
    all.into_iter()
        .map(|blocks| (blocks.len(), blocks))
        .collect()
}

/// Per-arity difference of the two sides of the morphism identity:
/// `Σ_{j,r} (−1)^{A_r} f_{n−j+1}(…, m_j(block), …)
///  − Σ_t Σ_{k₁+…+k_t=n} m'_t(f_{k₁}(…) ⊗ … ⊗ f_{k_t}(…))`.
/// Empty ⇔ valid morphism up to the truncation.
pub fn morphism_residuals<F: Field>(morphism: &AInfMorphism<F>) -> Vec<(usize, Cochain<F>)> {
    let source = morphism.source();
    let target = morphism.target();
    let field = source.algebra().field().clone();
    let space = source.algebra().space();
    let n_max = morphism.truncation();
    let mut out = Vec::new();
    for n in 2..=n_max {
        let mut residual = Cochain::zero(n, 2 - n as i64, Target::SelfAlgebra);
        for word in words_of_length(space, n) {
            let mut acc = LinComb::zero();
            // LHS: f after the source operations
            for j in 2..=n {
                let i = n - j + 1;
                let Some(inner) = source.operation(j) else {
                    continue;
                };
                let outer = morphism.component(i);
                if outer.is_zero() {
                    continue;
                }
                for r in 0..=(n - j) {
                    let inner_value = inner.value(&word.slice(r..r + j));
                    if inner_value.is_zero() {
                        continue;
                    }
                    let parity: i64 = word.letters()[..r]
                        .iter()
                        .map(|&l| space.degree(l) - 1)
                        .sum();
                    let sign = if parity.rem_euclid(2) == 0 {
                        field.one()
                    } else {
                        field.neg(&field.one())
                    };
                    let term = eval_with_insertion(&field, &outer, &word, r, j, &inner_value);
                    acc.add_scaled(&field, &term, &sign);
                }
            }
            // RHS: target operations after f, subtracted
            for (t, blocks) in compositions_with_blocks(&word, n) {
                if t < 2 {
                    continue; // m'_1 = 0
                }
                let Some(outer) = target.operation(t) else {
                    continue;
                };
                let mut evaluated = Vec::with_capacity(t);
                let mut dead = false;
                for block in &blocks {
                    let v = morphism.component(block.len()).value(block);
                    if v.is_zero() {
                        dead = true;
                        break;
                    }
                    evaluated.push(v);
                }
                if dead {
                    continue;
                }
                let term = eval_on_comb_word(&field, &outer, &evaluated);
                acc.add_scaled(&field, &term, &field.neg(&field.one()));
            }
            residual.add_value(&field, &word, &acc, &field.one());
        }
        out.push((n, residual));
    }
    out
}

/// The bar construction `B̃(M, {m_i})`: the truncated tensor coalgebra with
/// the coderivation generated by the operations.
pub struct BarComplex<'a, F: Field> {
    structure: &'a AInfStructure<F>,
    n_max: usize,
}

impl<'a, F: Field> BarComplex<'a, F> {
    pub fn new(structure: &'a AInfStructure<F>, n_max: usize) -> Self {
        BarComplex { structure, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `d(a₁ ⊗ … ⊗ a_n) = Σ_{j,r} (−1)^{A_r} a₁ ⊗ … ⊗ m_j(block) ⊗ … ⊗ a_n`.
    pub fn differential_word(&self, word: &Word) -> WordSum<F> {
        let algebra = self.structure.algebra();
        let field = algebra.field().clone();
        let space = algebra.space();
        let n = word.len();
        let mut out = WordSum::zero();
        for j in 2..=n.min(self.structure.truncation()) {
            let Some(op) = self.structure.operation(j) else {
                continue;
            };
            for r in 0..=(n - j) {
                let value = op.value(&word.slice(r..r + j));
                if value.is_zero() {
                    continue;
                }
                let parity: i64 = word.letters()[..r]
                    .iter()
                    .map(|&l| space.degree(l) - 1)
                    .sum();
                let sign = if parity.rem_euclid(2) == 0 {
                    field.one()
                } else {
                    field.neg(&field.one())
                };
                for (x, c) in value.iter() {
                    let mut letters = Vec::with_capacity(n + 1 - j);
                    letters.extend_from_slice(&word.letters()[..r]);
                    letters.push(x);
                    letters.extend_from_slice(&word.letters()[r + j..]);
                    out.add_term(&field, Word::new(letters), field.mul(&sign, c));
                }
            }
        }
        out
    }

    pub fn differential(&self, sum: &WordSum<F>) -> WordSum<F> {
        let field = self.structure.algebra().field().clone();
        let mut out = WordSum::zero();
        for (w, c) in sum.terms() {
            out.add_scaled(&field, &self.differential_word(w), c);
        }
        out
    }

    /// First word length `≤ n_max` where `d∘d ≠ 0`, if any.
    pub fn d_squared_failure(&self) -> Option<usize> {
        let algebra = self.structure.algebra();
        let space = algebra.space();
        for n in 0..=self.n_max {
            for word in words_of_length(space, n) {
                let once = self.differential_word(&word);
                let twice = self.differential(&once);
                if !twice.is_zero() {
                    return Some(n);
                }
            }
        }
        None
    }

    /// Checks `∇d = (d ⊗ id + id ⊗ d)∇` on all words up to `n_max`; returns
    /// the first offending word, if any.
    pub fn coderivation_failure(&self) -> Option<Word> {
        let algebra = self.structure.algebra();
        let field = algebra.field().clone();
        let space = algebra.space();
        for n in 0..=self.n_max {
            for word in words_of_length(space, n) {
                type Pair = (Word, Word);
                let mut lhs: BTreeMap<Pair, F::Elem> = BTreeMap::new();
                for (w, c) in self.differential_word(&word).terms() {
                    for split in crate::word::deconcatenate(w, 2).expect("two blocks") {
                        let key = (split[0].clone(), split[1].clone());
                        let entry = lhs.entry(key).or_insert_with(|| field.zero());
                        *entry = field.add(entry, c);
                    }
                }
                lhs.retain(|_, v| !field.is_zero(v));
                let mut rhs: BTreeMap<Pair, F::Elem> = BTreeMap::new();
                for split in crate::word::deconcatenate(&word, 2).expect("two blocks") {
                    let (u, v) = (&split[0], &split[1]);
                    for (du, c) in self.differential_word(u).terms() {
                        let entry = rhs
                            .entry((du.clone(), v.clone()))
                            .or_insert_with(|| field.zero());
                        *entry = field.add(entry, c);
                    }
                    let parity = u.degree(space);
                    let sign = if parity.rem_euclid(2) == 0 {
                        field.one()
                    } else {
                        field.neg(&field.one())
                    };
                    for (dv, c) in self.differential_word(v).terms() {
                        let entry = rhs
                            .entry((u.clone(), dv.clone()))
                            .or_insert_with(|| field.zero());
                        *entry = field.add(entry, &field.mul(&sign, c));
                    }
                }
                rhs.retain(|_, v| !field.is_zero(v));
                if lhs != rhs {
                    return Some(word);
                }
            }
        }
        None
    }
}

/// `B̃(f)`: the DG-coalgebra map induced on bar complexes. All morphism
/// components have shifted degree 0, so the displayed sum carries no signs.
pub struct BarMorphism<'a, F: Field> {
    morphism: &'a AInfMorphism<F>,
}

impl<'a, F: Field> BarMorphism<'a, F> {
    pub fn new(morphism: &'a AInfMorphism<F>) -> Self {
        BarMorphism { morphism }
    }

    pub fn apply_word(&self, word: &Word) -> WordSum<F> {
        let field = self.morphism.source().algebra().field().clone();
        let n = word.len();
        let mut out = WordSum::zero();
        if n == 0 {
            out.add_term(&field, Word::empty(), field.one());
            return out;
        }
        for (_, blocks) in compositions_with_blocks(word, n) {
            let mut words: Vec<Vec<u32>> = vec![Vec::new()];
            let mut coeffs: Vec<F::Elem> = vec![field.one()];
            let mut dead = false;
            for block in &blocks {
                let value = self.morphism.component(block.len()).value(block);
                if value.is_zero() {
                    dead = true;
                    break;
                }
                let mut next_words = Vec::new();
                let mut next_coeffs = Vec::new();
                for (w, c) in words.iter().zip(&coeffs) {
                    for (x, vc) in value.iter() {
                        let mut extended = w.clone();
                        extended.push(x);
                        next_words.push(extended);
                        next_coeffs.push(field.mul(c, vc));
                    }
                }
                words = next_words;
                coeffs = next_coeffs;
            }
            if dead {
                continue;
            }
            for (w, c) in words.into_iter().zip(coeffs) {
                out.add_term(&field, Word::new(w), c);
            }
        }
        out
    }

    pub fn apply(&self, sum: &WordSum<F>) -> WordSum<F> {
        let field = self.morphism.source().algebra().field().clone();
        let mut out = WordSum::zero();
        for (w, c) in sum.terms() {
            out.add_scaled(&field, &self.apply_word(w), c);
        }
        out
    }

    /// First word (length ≤ n_max) where `B̃(f)∘d ≠ d'∘B̃(f)`, if any.
    pub fn chain_map_failure(&self, n_max: usize) -> Option<Word> {
        let source_bar = BarComplex::new(self.morphism.source(), n_max);
        let target_bar = BarComplex::new(self.morphism.target(), n_max);
        let space = self.morphism.source().algebra().space();
        for n in 0..=n_max {
            for word in words_of_length(space, n) {
                let lhs = self.apply(&source_bar.differential_word(&word));
                let rhs = target_bar.differential(&self.apply_word(&word));
                if lhs != rhs {
                    return Some(word);
                }
            }
        }
        None
    }
}

/// The right-hand side corrections of the equivalence equation: everything
/// that must equal `ā − a` for `p` to realize `a ~ ā`:
/// `δp + p⌣₁a − m̂⌣₁(p,p) − Σ_{s≥1} ā⌣₁(p,…,p)`.
fn equivalence_corrections<F: Field>(
    algebra: &GradedAlgebra<F>,
    a: &TwistingCochain<F>,
    a_bar_components: &BTreeMap<usize, Cochain<F>>,
    p: &BTreeMap<usize, Cochain<F>>,
    arity: usize,
    truncation: usize,
) -> Result<Cochain<F>, TwistingError> {
    let field = algebra.field().clone();
    let one = field.one();
    let minus = field.neg(&one);
    let mut acc = Cochain::zero(arity, 2 - arity as i64, Target::SelfAlgebra);
    // δp at this arity
    if let Some(pc) = p.get(&(arity - 1)) {
        let dp = coboundary(algebra, Coefficients::SelfAlgebra, pc)?;
        acc.add_scaled(&field, &dp, &one);
    }
    // p ⌣₁ a
    for (i, pc) in p {
        for (j, ac) in a.components() {
            if i + j - 1 == arity {
                acc.add_scaled(&field, &cup1(algebra, pc, ac)?, &one);
            }
        }
    }
    // − m̂ ⌣₁ (p, p)
    let mhat = product_cochain(algebra);
    for (i, pi) in p {
        for (j, pj) in p {
            if i + j == arity {
                let term = cup1_multi(algebra, &mhat, &[pi, pj])?;
                acc.add_scaled(&field, &term, &minus);
            }
        }
    }
    // − Σ_{s≥1} ā ⌣₁ (p, …, p): each insertion of an arity-i component
    // raises the arity by i − 1 ≥ 1, so the sum is finite.
    let p_arities: Vec<usize> = p.keys().copied().collect();
    for (&j, abar) in a_bar_components {
        if j >= arity || j > truncation {
            continue;
        }
        // choose ordered tuples of p-components raising j to `arity`
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(j, Vec::new())];
        while let Some((reached, tuple)) = stack.pop() {
            if reached == arity && !tuple.is_empty() {
                if tuple.len() <= j {
                    let gs: Vec<&Cochain<F>> =
                        tuple.iter().map(|i| p.get(i).expect("tuple key")).collect();
                    let term = cup1_multi(algebra, abar, &gs)?;
                    acc.add_scaled(&field, &term, &minus);
                }
                continue;
            }
            if reached >= arity || tuple.len() >= j {
                continue;
            }
            for &i in &p_arities {
                if reached + (i - 1) <= arity {
                    let mut next = tuple.clone();
                    next.push(i);
                    stack.push((reached + (i - 1), next));
                }
            }
        }
    }
    Ok(acc)
}

/// Per-arity residual of the equivalence equation
/// `ā − a = δp + p⌣₁a − m̂⌣₁(p,p) − Σ_{s≥1} ā⌣₁(p^{×s})`; all residuals
/// zero ⇔ `p` realizes `a ~ ā` up to the truncation. Equivalent to the
/// morphism identity for `{id, p₂, p₃, …}`, which the tests cross-check.
pub fn equivalence_residuals<F: Field>(
    algebra: &GradedAlgebra<F>,
    a: &TwistingCochain<F>,
    a_bar: &TwistingCochain<F>,
    p: &[Cochain<F>],
) -> Result<Vec<(usize, Cochain<F>)>, TwistingError> {
    let field = algebra.field().clone();
    let truncation = a.truncation().min(a_bar.truncation());
    let p_map = index_perturbations(&field, p, truncation)?;
    let abar_map: BTreeMap<usize, Cochain<F>> =
        a_bar.components().map(|(i, c)| (i, c.clone())).collect();
    let mut out = Vec::new();
    for arity in 3..=truncation {
        let mut residual = a_bar.component(arity);
        residual.add_scaled(&field, &a.component(arity), &field.neg(&field.one()));
        let corrections =
            equivalence_corrections(algebra, a, &abar_map, &p_map, arity, truncation)?;
        residual.add_scaled(&field, &corrections, &field.neg(&field.one()));
        out.push((arity, residual));
    }
    Ok(out)
}

fn index_perturbations<F: Field>(
    field: &F,
    p: &[Cochain<F>],
    truncation: usize,
) -> Result<BTreeMap<usize, Cochain<F>>, TwistingError> {
    let mut map: BTreeMap<usize, Cochain<F>> = BTreeMap::new();
    for c in p {
        let arity = c.arity();
        if arity < 2 || c.degree() != 1 - arity as i64 {
            return Err(TwistingError::BadPerturbationBidegree(arity, c.degree()));
        }
        if arity > truncation || c.is_zero() {
            continue;
        }
        match map.get_mut(&arity) {
            None => {
                map.insert(arity, c.clone());
            }
            Some(existing) => existing.add_scaled(field, c, &field.one()),
        }
    }
    map.retain(|_, c| !c.is_zero());
    Ok(map)
}

/// Perturb `a` by a single cochain `p ∈ C^{n,1−n}`: the result agrees with
/// `a` up to arity `n`, has `ā^{n+1} = a^{n+1} + δp`, and is solved upward
/// from the equivalence equation so that `p` realizes `a ~ ā` exactly.
pub fn perturb<F: Field>(
    algebra: &GradedAlgebra<F>,
    a: &TwistingCochain<F>,
    p: &Cochain<F>,
) -> Result<TwistingCochain<F>, TwistingError> {
    let field = algebra.field().clone();
    let n = p.arity();
    if n < 2 || p.degree() != 1 - n as i64 {
        return Err(TwistingError::BadPerturbationBidegree(n, p.degree()));
    }
    p.validate(algebra.space(), algebra.space())?;
    if a.theory() == Theory::Harrison && !is_harrison(algebra, algebra.space(), p) {
        return Err(TwistingError::ComponentNotHarrison(n));
    }
    let truncation = a.truncation();
    let mut p_map: BTreeMap<usize, Cochain<F>> = BTreeMap::new();
    if !p.is_zero() {
        p_map.insert(n, p.clone());
    }
    let mut abar: BTreeMap<usize, Cochain<F>> = BTreeMap::new();
    for arity in 3..=truncation {
        let mut component = a.component(arity);
        if arity > n {
            let corrections =
                equivalence_corrections(algebra, a, &abar, &p_map, arity, truncation)?;
            component.add_scaled(&field, &corrections, &field.one());
        }
        if !component.is_zero() {
            abar.insert(arity, component);
        }
    }
    let result = TwistingCochain::new(algebra, abar.values().cloned(), truncation, a.theory())?;
    // Full recheck: p must realize the equivalence exactly.
    let residuals = equivalence_residuals(algebra, a, &result, std::slice::from_ref(p))?;
    if let Some((arity, _)) = residuals.iter().find(|(_, r)| !r.is_zero()) {
        return Err(TwistingError::Internal(format!(
            "perturbation failed to solve the equivalence equation at arity {arity}"
        )));
    }
    Ok(result)
}

/// A completed trivialization: the equivalence data and the checked
/// morphism `{id, p₂, p₃, …}` to the trivial structure.
pub struct Trivialization<F: Field> {
    pub morphism: AInfMorphism<F>,
    /// The components of the accumulated `p = p^{2,−1} + p^{3,−2} + …`.
    pub equivalence: Vec<Cochain<F>>,
    pub steps: Vec<TrivializationStep<F>>,
}

/// One obstruction-killing step of the loop.
pub struct TrivializationStep<F: Field> {
    /// Arity whose component was killed.
    pub arity: usize,
    /// The single-component perturbation used.
    pub perturbation: Cochain<F>,
    /// The twisting cochain after the step.
    pub after: TwistingCochain<F>,
}

/// The obstruction returned when a component's class is nonzero.
pub struct Obstruction<F: Field> {
    pub class: CohomologyClass<F>,
    pub steps: Vec<TrivializationStep<F>>,
}

pub enum TrivializeOutcome<F: Field> {
    Trivialized(Box<Trivialization<F>>),
    Obstructed(Box<Obstruction<F>>),
}

/// The obstruction-theoretic trivialization loop: kill the lowest nonzero
/// component arity by arity, or report its cohomology class.
///
/// Before each solve, the component is asserted to be a cocycle; a failure
/// there indicates an internal inconsistency rather than bad input, and is
/// reported as such.
pub fn trivialize<F: Field>(
    algebra: &GradedAlgebra<F>,
    a: &TwistingCochain<F>,
) -> Result<TrivializeOutcome<F>, TwistingError> {
    let field = algebra.field().clone();
    let theory = a.theory();
    let truncation = a.truncation();
    let coeffs = Coefficients::SelfAlgebra;
    if let Some(arity) = a.twisting_condition_failure(algebra)? {
        return Err(TwistingError::TwistingCondition(arity));
    }
    let mut current = a.clone();
    let mut steps: Vec<TrivializationStep<F>> = Vec::new();
    let mut morphism = AInfMorphism::identity(&twisting_to_structure(algebra, a)?);
    for arity in 3..=truncation {
        let component = current.component(arity);
        if component.is_zero() {
            continue;
        }
        let dc = coboundary(algebra, coeffs, &component)?;
        if !dc.is_zero() {
            return Err(TwistingError::ObstructionNotCocycle { arity });
        }
        let solved = solve_coboundary(algebra, coeffs, &component, theory)?;
        let Some(q) = solved else {
            let class = CohomologyClass::new(algebra, coeffs, component, theory)?;
            return Ok(TrivializeOutcome::Obstructed(Box::new(Obstruction {
                class,
                steps,
            })));
        };
        // ā^arity = component + δ(−q) = 0
        let step_p = q.negated(&field);
        let next = perturb(algebra, &current, &step_p)?;
        if !next.component(arity).is_zero() {
            return Err(TwistingError::Internal(format!(
                "perturbation did not kill the component at arity {arity}"
            )));
        }
        let step_morphism = AInfMorphism::new(
            twisting_to_structure(algebra, &current)?,
            twisting_to_structure(algebra, &next)?,
            [identity_cochain(algebra), step_p.clone()],
        )?;
        morphism = step_morphism.compose(&morphism)?;
        steps.push(TrivializationStep {
            arity,
            perturbation: step_p,
            after: next.clone(),
        });
        current = next;
    }
    if !current.is_zero() {
        return Err(TwistingError::Internal(
            "trivialization loop left nonzero components".to_owned(),
        ));
    }
    // The accumulated morphism must be a checked equivalence to the trivial
    // structure.
    let residuals = morphism_residuals(&morphism);
    if let Some(n) = first_failure(&residuals) {
        return Err(TwistingError::Internal(format!(
            "accumulated morphism fails its identity at arity {n}"
        )));
    }
    let equivalence: Vec<Cochain<F>> = morphism
        .components()
        .filter(|&(i, _)| i >= 2)
        .map(|(_, c)| c.clone())
        .collect();
    let eq_residuals = equivalence_residuals(
        algebra,
        a,
        &TwistingCochain::zero(truncation, theory),
        &equivalence,
    )?;
    if eq_residuals.iter().any(|(_, r)| !r.is_zero()) {
        return Err(TwistingError::Internal(
            "accumulated p fails the equivalence equation".to_owned(),
        ));
    }
    Ok(TrivializeOutcome::Trivialized(Box::new(Trivialization {
        morphism,
        equivalence,
        steps,
    })))
}

/// Extend a lowest component `c ∈ C^{n₀,2−n₀}` to a full twisting cochain
/// up to the truncation, solving `δa^m = (a⌣₁a)_{m+1}` upward. Fails when
/// `c` is not a cocycle or when an extension step is obstructed.
pub fn extend_twisting<F: Field>(
    algebra: &GradedAlgebra<F>,
    lowest: Cochain<F>,
    truncation: usize,
    theory: Theory,
) -> Result<TwistingCochain<F>, TwistingError> {
    let field = algebra.field().clone();
    let coeffs = Coefficients::SelfAlgebra;
    let n0 = lowest.arity();
    if n0 < 3 || lowest.degree() != 2 - n0 as i64 {
        return Err(TwistingError::WrongBidegree {
            arity: n0,
            expected: 2 - n0 as i64,
            found: lowest.degree(),
        });
    }
    let dc = coboundary(algebra, coeffs, &lowest)?;
    if !dc.is_zero() {
        return Err(TwistingError::ObstructionNotCocycle { arity: n0 });
    }
    let mut components: BTreeMap<usize, Cochain<F>> = BTreeMap::new();
    if !lowest.is_zero() {
        components.insert(n0, lowest);
    }
    for m in (n0 + 1)..=truncation {
        // δa^m must equal the arity-(m+1) component of a⌣₁a over the
        // already-chosen components.
        let mut rhs = Cochain::zero(m + 1, 2 - m as i64, Target::SelfAlgebra);
        for (i, ci) in &components {
            for (j, cj) in &components {
                if i + j == m + 2 {
                    rhs.add_scaled(&field, &cup1(algebra, ci, cj)?, &field.one());
                }
            }
        }
        if rhs.is_zero() {
            continue;
        }
        let solved = solve_coboundary(algebra, coeffs, &rhs, theory)?;
        match solved {
            Some(am) => {
                if !am.is_zero() {
                    components.insert(m, am);
                }
            }
            None => {
                return Err(TwistingError::Internal(format!(
                    "extension obstructed at arity {m}"
                )))
            }
        }
    }
    TwistingCochain::new(algebra, components.into_values(), truncation, theory)
}
