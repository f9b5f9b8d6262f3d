//! Hochschild cochains and their products.
//!
//! A cochain of arity `n` and internal degree `k` sends degree-`q` words to
//! elements of degree `q + k`. For sign purposes it is an operation of
//! shifted total degree `‖f‖ = n + k − 1`, and a letter of degree `d`
//! carries shifted degree `d − 1`; every `±` below is a Koszul sign in
//! these shifted degrees.
//!
//! The multiplication enters the calculus through its avatar
//! `m̂(x ⊗ y) = (−1)^{deg x} x·y`, the unique twist for which `m̂ ⌣₁ m̂`
//! is the associativity defect. The coboundary is `δf = (−1)^{‖f‖} f⌣₁m̂
//! − m̂⌣₁f`, and the cup product is the double insertion
//! `f ⌣ g = (−1)^{‖f‖+‖g‖} m̂⌣₁(f, g)`. With these choices, exactly:
//!
//! * `δ∘δ = 0` over any associative algebra;
//! * `δ(f⌣g) = δf⌣g + (−1)^{‖f‖} f⌣δg`;
//! * `δ(f⌣₁g) = δf⌣₁g + (−1)^{‖f‖} f⌣₁δg + f⌣g·(−1)^{‖f‖+‖g‖}
//!   + g⌣f·(−1)^{‖f‖‖g‖+‖f‖+‖g‖}`;
//! * `f⌣₁(g⌣₁h) − (f⌣₁g)⌣₁h = −f⌣₁(g,h) − (−1)^{‖g‖‖h‖} f⌣₁(h,g)`.

use std::collections::BTreeMap;

use crate::algebra::{GradedAlgebra, GradedBimodule};
use crate::comb::LinComb;
use crate::field::Field;
use crate::space::GradedSpace;
use crate::word::{shuffle_subspace_basis, words_of_length_degree, Word, WordSum};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CochainError {
    #[error("stored word {word} has length {len}, expected arity {arity}")]
    WordLength {
        word: String,
        len: usize,
        arity: usize,
    },
    #[error("value on word {word} violates the degree law: target {target} has degree {target_deg}, expected {expected}")]
    DegreeLaw {
        word: String,
        target: String,
        target_deg: i64,
        expected: i64,
    },
    #[error("cochain refers to basis index {index} outside the space of dimension {dim}")]
    IndexOutOfRange { index: u32, dim: usize },
    #[error("cup product requires coefficients in the algebra itself")]
    CupNeedsAlgebraCoefficients,
    #[error("insertion product with an arity-0 outer cochain is undefined")]
    OuterArityZero,
    #[error("inner cochain of an insertion product must take values in the algebra")]
    InnerNotAlgebraValued,
    #[error("cochain target {found:?} does not match the coefficient context {expected:?}")]
    TargetMismatch { expected: Target, found: Target },
    #[error("cochains have mismatched shapes: {0}")]
    ShapeMismatch(String),
}

/// Where a cochain takes its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    SelfAlgebra,
    Bimodule,
}

/// Coefficient context for operations that need module actions.
pub enum Coefficients<'a, F: Field> {
    SelfAlgebra,
    Module(&'a GradedBimodule<F>),
}

impl<F: Field> Clone for Coefficients<'_, F> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<F: Field> Copy for Coefficients<'_, F> {}

impl<'a, F: Field> Coefficients<'a, F> {
    pub fn tag(&self) -> Target {
        match self {
            Coefficients::SelfAlgebra => Target::SelfAlgebra,
            Coefficients::Module(_) => Target::Bimodule,
        }
    }

    pub fn space(&self, algebra: &'a GradedAlgebra<F>) -> &'a GradedSpace<F> {
        match self {
            Coefficients::SelfAlgebra => algebra.space(),
            Coefficients::Module(m) => m.space(),
        }
    }

    /// `a · x` for a basis algebra letter acting on a value.
    fn left(&self, algebra: &GradedAlgebra<F>, a: u32, x: &LinComb<F>) -> LinComb<F> {
        match self {
            Coefficients::SelfAlgebra => algebra.product_basis_comb(a, x),
            Coefficients::Module(m) => m.left_comb(algebra, a, x),
        }
    }

    /// `x · a` for a value acted on by a basis algebra letter.
    fn right(&self, algebra: &GradedAlgebra<F>, x: &LinComb<F>, a: u32) -> LinComb<F> {
        match self {
            Coefficients::SelfAlgebra => algebra.product_comb_basis(x, a),
            Coefficients::Module(m) => m.right_comb(algebra, x, a),
        }
    }
}

/// An element of `C^{n,k}`: an arity-`n` multilinear map of internal degree
/// `k`, stored sparsely on basis words. Zero values are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain<F: Field> {
    arity: usize,
    degree: i64,
    target: Target,
    values: BTreeMap<Word, LinComb<F>>,
}

impl<F: Field> Cochain<F> {
    pub fn zero(arity: usize, degree: i64, target: Target) -> Self {
        Cochain {
            arity,
            degree,
            target,
            values: BTreeMap::new(),
        }
    }

    /// Build and validate against the degree law of the given spaces.
    pub fn new(
        arity: usize,
        degree: i64,
        target: Target,
        values: BTreeMap<Word, LinComb<F>>,
        word_space: &GradedSpace<F>,
        value_space: &GradedSpace<F>,
    ) -> Result<Self, CochainError> {
        let mut cochain = Cochain {
            arity,
            degree,
            target,
            values,
        };
        cochain.values.retain(|_, v| !v.is_zero());
        cochain.validate(word_space, value_space)?;
        Ok(cochain)
    }

    /// The elementary map `word ↦ target`, with the internal degree read off
    /// from the degree law.
    pub fn elementary(
        word: Word,
        target_index: u32,
        target: Target,
        word_space: &GradedSpace<F>,
        value_space: &GradedSpace<F>,
    ) -> Self {
        let degree = value_space.degree(target_index) - word.degree_sum(word_space);
        let field = word_space.field();
        let mut values = BTreeMap::new();
        values.insert(word.clone(), LinComb::basis(field, target_index));
        Cochain {
            arity: word.len(),
            degree,
            target,
            values,
        }
    }

    pub fn validate(
        &self,
        word_space: &GradedSpace<F>,
        value_space: &GradedSpace<F>,
    ) -> Result<(), CochainError> {
        for (word, value) in &self.values {
            if word.len() != self.arity {
                return Err(CochainError::WordLength {
                    word: word.display(word_space).to_string(),
                    len: word.len(),
                    arity: self.arity,
                });
            }
            for &letter in word.letters() {
                if letter as usize >= word_space.dim() {
                    return Err(CochainError::IndexOutOfRange {
                        index: letter,
                        dim: word_space.dim(),
                    });
                }
            }
            let expected = word.degree_sum(word_space) + self.degree;
            for (t, _) in value.iter() {
                if t as usize >= value_space.dim() {
                    return Err(CochainError::IndexOutOfRange {
                        index: t,
                        dim: value_space.dim(),
                    });
                }
                if value_space.degree(t) != expected {
                    return Err(CochainError::DegreeLaw {
                        word: word.display(word_space).to_string(),
                        target: value_space.name(t).to_owned(),
                        target_deg: value_space.degree(t),
                        expected,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Internal degree `k`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn target(&self) -> Target {
        self.target
    }

    /// Shifted total degree `n + k − 1`, the degree that drives every sign.
    pub fn shifted_degree(&self) -> i64 {
        self.arity as i64 + self.degree - 1
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Word, &LinComb<F>)> + '_ {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Number of nonzero `(word, target)` entries.
    pub fn entry_count(&self) -> usize {
        self.values.values().map(LinComb::len).sum()
    }

    pub fn value(&self, word: &Word) -> LinComb<F> {
        self.values.get(word).cloned().unwrap_or_default()
    }

    pub fn set_value(&mut self, word: Word, value: LinComb<F>) {
        if value.is_zero() {
            self.values.remove(&word);
        } else {
            self.values.insert(word, value);
        }
    }

    pub fn add_value(&mut self, field: &F, word: &Word, value: &LinComb<F>, factor: &F::Elem) {
        if value.is_zero() || field.is_zero(factor) {
            return;
        }
        let mut current = self.values.remove(word).unwrap_or_default();
        current.add_scaled(field, value, factor);
        if !current.is_zero() {
            self.values.insert(word.clone(), current);
        }
    }

    pub fn add_scaled(&mut self, field: &F, other: &Self, factor: &F::Elem) {
        assert_eq!(self.arity, other.arity, "cochain arity mismatch");
        assert_eq!(self.degree, other.degree, "cochain degree mismatch");
        assert_eq!(self.target, other.target, "cochain target mismatch");
        for (w, v) in &other.values {
            self.add_value(field, w, v, factor);
        }
    }

    pub fn scaled(&self, field: &F, factor: &F::Elem) -> Self {
        let mut out = Cochain::zero(self.arity, self.degree, self.target);
        out.add_scaled(field, self, factor);
        out
    }

    pub fn negated(&self, field: &F) -> Self {
        self.scaled(field, &field.neg(&field.one()))
    }

    /// Linear extension to formal sums of words.
    pub fn eval_sum(&self, field: &F, sum: &WordSum<F>) -> LinComb<F> {
        let mut out = LinComb::zero();
        for (w, c) in sum.terms() {
            if w.len() == self.arity {
                out.add_scaled(field, &self.value(w), c);
            }
        }
        out
    }
}

/// Shifted degree of the prefix `w[..upto]`: `Σ (deg − 1)`.
fn prefix_shifted<F: Field>(space: &GradedSpace<F>, word: &Word, upto: usize) -> i64 {
    word.letters()[..upto]
        .iter()
        .map(|&i| space.degree(i) - 1)
        .sum()
}

fn sign_from_parity<F: Field>(field: &F, parity: i64) -> F::Elem {
    if parity.rem_euclid(2) == 0 {
        field.one()
    } else {
        field.neg(&field.one())
    }
}

/// Candidate support words for a cochain of the given arity and internal
/// degree: only degree sums whose value component is inhabited.
fn candidate_words<F: Field>(
    word_space: &GradedSpace<F>,
    value_space: &GradedSpace<F>,
    arity: usize,
    degree: i64,
) -> Vec<Word> {
    let mut degrees: Vec<i64> = value_space.basis().map(|(_, _, d)| d).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Vec::new();
    for dv in degrees {
        out.extend(words_of_length_degree(word_space, arity, dv - degree));
    }
    out
}

/// The multiplication avatar `m̂ ∈ C^{2,0}(A,A)`: `a ⊗ b ↦ (−1)^{deg a} ab`.
pub fn product_cochain<F: Field>(algebra: &GradedAlgebra<F>) -> Cochain<F> {
    let field = algebra.field();
    let space = algebra.space();
    let mut out = Cochain::zero(2, 0, Target::SelfAlgebra);
    for (&(i, j), value) in algebra.table() {
        let sign = sign_from_parity(field, space.degree(i));
        out.add_value(field, &Word::new(vec![i, j]), value, &sign);
    }
    out
}

/// The identity map as an element of `C^{1,0}(A,A)`.
pub fn identity_cochain<F: Field>(algebra: &GradedAlgebra<F>) -> Cochain<F> {
    let field = algebra.field();
    let mut out = Cochain::zero(1, 0, Target::SelfAlgebra);
    for i in 0..algebra.dim() as u32 {
        out.add_value(
            field,
            &Word::single(i),
            &LinComb::basis(field, i),
            &field.one(),
        );
    }
    out
}

/// Hochschild coboundary `δ : C^{n,k} → C^{n+1,k}`.
///
/// `δf = (−1)^{‖f‖} f⌣₁m̂ − m̂⌣₁f`, expanded on basis words; the outer
/// terms use the bimodule actions when the coefficients are a module.
pub fn coboundary<F: Field>(
    algebra: &GradedAlgebra<F>,
    coefficients: Coefficients<'_, F>,
    f: &Cochain<F>,
) -> Result<Cochain<F>, CochainError> {
    if f.target() != coefficients.tag() {
        return Err(CochainError::TargetMismatch {
            expected: coefficients.tag(),
            found: f.target(),
        });
    }
    let field = algebra.field().clone();
    let space = algebra.space();
    let value_space = coefficients.space(algebra);
    f.validate(space, value_space)?;
    let n = f.arity();
    let k = f.degree();
    let norm = f.shifted_degree();
    let mut out = Cochain::zero(n + 1, k, f.target());
    for word in candidate_words(space, value_space, n + 1, k) {
        let letters = word.letters();
        let mut acc: LinComb<F> = LinComb::zero();
        // inner contractions: (−1)^{‖f‖ + A_i + d_{i+1}} f(…, a_{i+1}a_{i+2}, …)
        for i in 0..n {
            let parity = norm + prefix_shifted(space, &word, i) + space.degree(letters[i]);
            let sign = sign_from_parity(&field, parity);
            let product = algebra.product_basis(letters[i], letters[i + 1]);
            for (x, c) in product.iter() {
                let mut contracted = Vec::with_capacity(n);
                contracted.extend_from_slice(&letters[..i]);
                contracted.push(x);
                contracted.extend_from_slice(&letters[i + 2..]);
                let inner = f.value(&Word::new(contracted));
                acc.add_scaled(&field, &inner, &field.mul(&sign, c));
            }
        }
        // − (−1)^{Σ d + k} f(a_1..a_n)·a_{n+1}
        if n <= letters.len() {
            let head = Word::new(letters[..n].to_vec());
            let fv = f.value(&head);
            if !fv.is_zero() {
                let parity = head.degree_sum(space) + k;
                let sign = field.neg(&sign_from_parity(&field, parity));
                let acted = coefficients.right(algebra, &fv, letters[n]);
                acc.add_scaled(&field, &acted, &sign);
            }
            // − (−1)^{‖f‖(d_1 − 1) + d_1} a_1·f(a_2..a_{n+1})
            let tail = Word::new(letters[1..].to_vec());
            let fv = f.value(&tail);
            if !fv.is_zero() {
                let d1 = space.degree(letters[0]);
                let parity = norm * (d1 - 1) + d1;
                let sign = field.neg(&sign_from_parity(&field, parity));
                let acted = coefficients.left(algebra, letters[0], &fv);
                acc.add_scaled(&field, &acted, &sign);
            }
        }
        out.set_value(word, acc);
    }
    Ok(out)
}

/// Gerstenhaber insertion product `f ⌣₁ g`: the sum over slots of `f` with
/// `g`'s output inserted, each weighted by `(−1)^{‖g‖·A_i}`.
pub fn cup1<F: Field>(
    algebra: &GradedAlgebra<F>,
    f: &Cochain<F>,
    g: &Cochain<F>,
) -> Result<Cochain<F>, CochainError> {
    if f.arity() == 0 {
        return Err(CochainError::OuterArityZero);
    }
    if g.target() != Target::SelfAlgebra {
        return Err(CochainError::InnerNotAlgebraValued);
    }
    let field = algebra.field().clone();
    let space = algebra.space();
    let m = f.arity();
    let n = g.arity();
    let arity = m + n - 1;
    let degree = f.degree() + g.degree();
    let g_norm = g.shifted_degree();
    let mut out = Cochain::zero(arity, degree, f.target());
    // Value space only matters for degree filtering; for module-valued f the
    // support of f already constrains the result, so filter by f's words.
    let candidates = candidate_words_for_output(algebra, f, arity, degree);
    for word in candidates {
        let letters = word.letters();
        let mut acc: LinComb<F> = LinComb::zero();
        for slot in 0..m {
            let parity = g_norm * prefix_shifted(space, &word, slot);
            let sign = sign_from_parity(&field, parity);
            let block = Word::new(letters[slot..slot + n].to_vec());
            let inner = g.value(&block);
            for (x, c) in inner.iter() {
                let mut assembled = Vec::with_capacity(m);
                assembled.extend_from_slice(&letters[..slot]);
                assembled.push(x);
                assembled.extend_from_slice(&letters[slot + n..]);
                let outer = f.value(&Word::new(assembled));
                acc.add_scaled(&field, &outer, &field.mul(&sign, c));
            }
        }
        out.set_value(word, acc);
    }
    Ok(out)
}

fn candidate_words_for_output<F: Field>(
    algebra: &GradedAlgebra<F>,
    f: &Cochain<F>,
    arity: usize,
    degree: i64,
) -> Vec<Word> {
    // f's value degrees bound the output value degrees, and the degree law
    // then pins the admissible word degree sums.
    let space = algebra.space();
    let mut value_degrees: Vec<i64> = f
        .support()
        .map(|(w, _)| w.degree_sum(space) + f.degree())
        .collect();
    if f.target() == Target::SelfAlgebra && f.is_zero() {
        return Vec::new();
    }
    value_degrees.sort_unstable();
    value_degrees.dedup();
    let mut out = Vec::new();
    for dv in value_degrees {
        out.extend(words_of_length_degree(space, arity, dv - degree));
    }
    out
}

/// The multi-slot insertion `f ⌣₁ (g_1, …, g_r)`: all order-preserving
/// placements into distinct slots, signed `Π_j (−1)^{‖g_j‖·A_{s_j}}`.
/// More insertions than slots yields the zero cochain.
pub fn cup1_multi<F: Field>(
    algebra: &GradedAlgebra<F>,
    f: &Cochain<F>,
    gs: &[&Cochain<F>],
) -> Result<Cochain<F>, CochainError> {
    if gs.is_empty() {
        return Ok(f.clone());
    }
    if f.arity() == 0 {
        return Err(CochainError::OuterArityZero);
    }
    for g in gs {
        if g.target() != Target::SelfAlgebra {
            return Err(CochainError::InnerNotAlgebraValued);
        }
    }
    let field = algebra.field().clone();
    let space = algebra.space().clone();
    let m = f.arity();
    let r = gs.len();
    let inserted: usize = gs.iter().map(|g| g.arity()).sum();
    let degree = f.degree() + gs.iter().map(|g| g.degree()).sum::<i64>();
    if r > m {
        let arity = (m + inserted).saturating_sub(r);
        return Ok(Cochain::zero(arity, degree, f.target()));
    }
    let arity = m + inserted - r;
    let mut out = Cochain::zero(arity, degree, f.target());
    let candidates = candidate_words_for_output(algebra, f, arity, degree);
    #[allow(clippy::too_many_arguments)]
    fn place<F: Field>(
        field: &F,
        space: &GradedSpace<F>,
        f: &Cochain<F>,
        gs: &[&Cochain<F>],
        word: &Word,
        pos: usize,
        next_g: usize,
        assembled: &mut Vec<u32>,
        coeff: F::Elem,
        acc: &mut LinComb<F>,
    ) {
        let letters = word.letters();
        if pos == letters.len() {
            if next_g == gs.len() && assembled.len() == f.arity() {
                let outer = f.value(&Word::new(assembled.clone()));
                acc.add_scaled(field, &outer, &coeff);
            }
            return;
        }
        // Slots of f remaining must accommodate the letters and pending g's.
        // Pass the current letter through:
        assembled.push(letters[pos]);
        place(
            field,
            space,
            f,
            gs,
            word,
            pos + 1,
            next_g,
            assembled,
            coeff.clone(),
            acc,
        );
        assembled.pop();
        // Or insert the next g here:
        if next_g < gs.len() {
            let g = gs[next_g];
            let n = g.arity();
            if pos + n <= letters.len() {
                let parity = g.shifted_degree() * prefix_shifted(space, word, pos);
                let sign = sign_from_parity(field, parity);
                let block = Word::new(letters[pos..pos + n].to_vec());
                for (x, c) in g.value(&block).iter() {
                    assembled.push(x);
                    let next_coeff = field.mul(&coeff, &field.mul(&sign, c));
                    place(
                        field,
                        space,
                        f,
                        gs,
                        word,
                        pos + n,
                        next_g + 1,
                        assembled,
                        next_coeff,
                        acc,
                    );
                    assembled.pop();
                }
            }
        }
    }
    for word in candidates {
        let mut acc = LinComb::zero();
        let mut assembled = Vec::with_capacity(m);
        place(
            &field,
            &space,
            f,
            gs,
            &word,
            0,
            0,
            &mut assembled,
            field.one(),
            &mut acc,
        );
        out.set_value(word, acc);
    }
    Ok(out)
}

/// Cup product `f ⌣ g = (−1)^{‖f‖+‖g‖} m̂⌣₁(f, g)`, defined for cochains
/// with coefficients in the algebra itself.
pub fn cup<F: Field>(
    algebra: &GradedAlgebra<F>,
    f: &Cochain<F>,
    g: &Cochain<F>,
) -> Result<Cochain<F>, CochainError> {
    if f.target() != Target::SelfAlgebra || g.target() != Target::SelfAlgebra {
        return Err(CochainError::CupNeedsAlgebraCoefficients);
    }
    let field = algebra.field().clone();
    let space = algebra.space();
    let m = f.arity();
    let n = g.arity();
    let degree = f.degree() + g.degree();
    let g_norm = g.shifted_degree();
    let outer_parity = f.shifted_degree() + g_norm;
    let mut out = Cochain::zero(m + n, degree, Target::SelfAlgebra);
    for (fw, fv) in f.support() {
        for (gw, gv) in g.support() {
            let word = fw.concat(gw);
            // (−1)^{‖f‖+‖g‖ + ‖g‖·A_m + deg f(w_1)}, then m̂'s value twist.
            let parity = outer_parity
                + g_norm * (fw.degree_sum(space) - m as i64)
                + fw.degree_sum(space)
                + f.degree();
            let sign = sign_from_parity(&field, parity);
            let product = algebra.product_comb(fv, gv);
            out.add_value(&field, &word, &product, &sign);
        }
    }
    Ok(out)
}

/// A nonzero value of a cochain on the shuffle subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleResidue<F: Field> {
    /// Word degree of the component of `Sh^n` carrying the residue.
    pub word_degree: i64,
    /// Index into the reduced shuffle basis of that component.
    pub basis_index: usize,
    pub value: LinComb<F>,
}

/// Evaluates `f` on a basis of `Sh^n(A)` in every degree the degree law
/// allows to be nonzero; the empty list certifies a Harrison cochain.
pub fn restrict_to_shuffles<F: Field>(
    algebra: &GradedAlgebra<F>,
    value_space: &GradedSpace<F>,
    f: &Cochain<F>,
) -> Vec<ShuffleResidue<F>> {
    let field = algebra.field().clone();
    let space = algebra.space();
    let n = f.arity();
    let mut residues = Vec::new();
    if n <= 1 {
        return residues;
    }
    let mut value_degrees: Vec<i64> = value_space.basis().map(|(_, _, d)| d).collect();
    value_degrees.sort_unstable();
    value_degrees.dedup();
    for dv in value_degrees {
        let q_sum = dv - f.degree();
        let q_word = q_sum - n as i64;
        let basis = shuffle_subspace_basis(space, n, q_word);
        for (index, sum) in basis.word_sums(&field).into_iter().enumerate() {
            let value = f.eval_sum(&field, &sum);
            if !value.is_zero() {
                residues.push(ShuffleResidue {
                    word_degree: q_word,
                    basis_index: index,
                    value,
                });
            }
        }
    }
    residues
}

/// True when `f` vanishes on all shuffles.
pub fn is_harrison<F: Field>(
    algebra: &GradedAlgebra<F>,
    value_space: &GradedSpace<F>,
    f: &Cochain<F>,
) -> bool {
    restrict_to_shuffles(algebra, value_space, f).is_empty()
}
