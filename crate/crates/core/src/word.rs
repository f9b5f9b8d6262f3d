//! The tensor coalgebra: words over a graded basis, deconcatenation,
//! and the Eilenberg–MacLane shuffle product.
//!
//! A word `a_1 ⊗ … ⊗ a_n` has degree `Σ deg a_i − n`, so each letter is
//! counted with its degree shifted down by one. All shuffle signs use these
//! shifted degrees.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::space::GradedSpace;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("deconcatenation into zero blocks is undefined")]
    ZeroBlocks,
}

/// A basis word of the tensor coalgebra: a finite (possibly empty) sequence
/// of basis indices. The empty word is the coalgebra unit `1 ∈ Λ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn single(letter: u32) -> Self {
        Word(vec![letter])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Unshifted degree sum `Σ deg a_i`.
    pub fn degree_sum<F: Field>(&self, space: &GradedSpace<F>) -> i64 {
        self.0.iter().map(|&i| space.degree(i)).sum()
    }

    /// Word degree in the tensor coalgebra grading, `Σ deg a_i − n`.
    pub fn degree<F: Field>(&self, space: &GradedSpace<F>) -> i64 {
        self.degree_sum(space) - self.len() as i64
    }

    pub fn display<'a, F: Field>(&'a self, space: &'a GradedSpace<F>) -> WordDisplay<'a, F> {
        WordDisplay { word: self, space }
    }
}

pub struct WordDisplay<'a, F: Field> {
    word: &'a Word,
    space: &'a GradedSpace<F>,
}

impl<F: Field> fmt::Display for WordDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "()");
        }
        let names: Vec<&str> = self
            .word
            .letters()
            .iter()
            .map(|&i| self.space.name(i))
            .collect();
        write!(f, "{}", names.join("⊗"))
    }
}

/// A formal sum of words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSum<F: Field>(BTreeMap<Word, F::Elem>);

impl<F: Field> Default for WordSum<F> {
    fn default() -> Self {
        WordSum(BTreeMap::new())
    }
}

impl<F: Field> WordSum<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(field: &F, word: Word) -> Self {
        let mut out = Self::zero();
        out.add_term(field, word, field.one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F::Elem)> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, field: &F, word: &Word) -> F::Elem {
        self.0.get(word).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn add_term(&mut self, field: &F, word: Word, coeff: F::Elem) {
        if field.is_zero(&coeff) {
            return;
        }
        match self.0.remove(&word) {
            None => {
                self.0.insert(word, coeff);
            }
            Some(old) => {
                let sum = field.add(&old, &coeff);
                if !field.is_zero(&sum) {
                    self.0.insert(word, sum);
                }
            }
        }
    }

    pub fn add_scaled(&mut self, field: &F, other: &Self, factor: &F::Elem) {
        if field.is_zero(factor) {
            return;
        }
        for (w, c) in other.terms() {
            self.add_term(field, w.clone(), field.mul(c, factor));
        }
    }

    pub fn add(&mut self, field: &F, other: &Self) {
        self.add_scaled(field, other, &field.one());
    }

    pub fn scaled(&self, field: &F, factor: &F::Elem) -> Self {
        let mut out = Self::zero();
        out.add_scaled(field, self, factor);
        out
    }
}

/// All ordered splittings of `w` into `blocks` consecutive, possibly empty
/// blocks; the iterated comultiplication `∇^i` with unit coefficients.
pub fn deconcatenate(w: &Word, blocks: usize) -> Result<Vec<Vec<Word>>, TensorError> {
    if blocks == 0 {
        return Err(TensorError::ZeroBlocks);
    }
    fn go(letters: &[u32], blocks: usize) -> Vec<Vec<Word>> {
        if blocks == 1 {
            return vec![vec![Word::new(letters.to_vec())]];
        }
        let mut out = Vec::new();
        for head in 0..=letters.len() {
            let first = Word::new(letters[..head].to_vec());
            for mut rest in go(&letters[head..], blocks - 1) {
                let mut splitting = Vec::with_capacity(blocks);
                splitting.push(first.clone());
                splitting.append(&mut rest);
                out.push(splitting);
            }
        }
        out
    }
    Ok(go(w.letters(), blocks))
}

/// Keeps exactly the terms of word length `length`: the projection
/// `p_i : T(M) → ⊗^i M`.
pub fn projection<F: Field>(s: &WordSum<F>, length: usize) -> WordSum<F> {
    let mut out = WordSum::zero();
    for (w, c) in s.terms() {
        if w.len() == length {
            out.0.insert(w.clone(), c.clone());
        }
    }
    out
}

/// The shuffle product `μ(u ⊗ v)`: the signed sum over all order-preserving
/// interleavings, with Koszul signs on the shifted letter degrees.
pub fn shuffle_product<F: Field>(space: &GradedSpace<F>, u: &Word, v: &Word) -> WordSum<F> {
    let field = space.field().clone();
    let mut out = WordSum::zero();
    let u_shift: Vec<i64> = u.letters().iter().map(|&i| space.degree(i) - 1).collect();
    let v_shift: Vec<i64> = v.letters().iter().map(|&i| space.degree(i) - 1).collect();
    // Remaining shifted degree of u's tail, used when a v-letter jumps the queue.
    let u_tail: Vec<i64> = {
        let mut tail = vec![0i64; u.len() + 1];
        for i in (0..u.len()).rev() {
            tail[i] = tail[i + 1] + u_shift[i];
        }
        tail
    };
    let mut merged: Vec<u32> = Vec::with_capacity(u.len() + v.len());
    #[allow(clippy::too_many_arguments)]
    fn go<F: Field>(
        field: &F,
        out: &mut WordSum<F>,
        merged: &mut Vec<u32>,
        u: &[u32],
        v: &[u32],
        ui: usize,
        vi: usize,
        u_tail: &[i64],
        v_shift: &[i64],
        parity: i64,
    ) {
        if ui == u.len() && vi == v.len() {
            let sign = if parity.rem_euclid(2) == 0 {
                field.one()
            } else {
                field.neg(&field.one())
            };
            out.add_term(field, Word::new(merged.clone()), sign);
            return;
        }
        if ui < u.len() {
            merged.push(u[ui]);
            go(
                field,
                out,
                merged,
                u,
                v,
                ui + 1,
                vi,
                u_tail,
                v_shift,
                parity,
            );
            merged.pop();
        }
        if vi < v.len() {
            merged.push(v[vi]);
            let crossing = v_shift[vi] * u_tail[ui];
            go(
                field,
                out,
                merged,
                u,
                v,
                ui,
                vi + 1,
                u_tail,
                v_shift,
                parity + crossing,
            );
            merged.pop();
        }
    }
    go(
        &field,
        &mut out,
        &mut merged,
        u.letters(),
        v.letters(),
        0,
        0,
        &u_tail,
        &v_shift,
        0,
    );
    out
}

/// Lexicographically ordered words of the given length whose unshifted
/// degree sum is `degree_sum`.
pub fn words_of_length_degree<F: Field>(
    space: &GradedSpace<F>,
    length: usize,
    degree_sum: i64,
) -> Vec<Word> {
    let mut out = Vec::new();
    let Some((dmin, dmax)) = space.degree_window() else {
        if length == 0 && degree_sum == 0 {
            out.push(Word::empty());
        }
        return out;
    };
    let mut letters = Vec::with_capacity(length);
    fn go<F: Field>(
        space: &GradedSpace<F>,
        out: &mut Vec<Word>,
        letters: &mut Vec<u32>,
        remaining: usize,
        target: i64,
        dmin: i64,
        dmax: i64,
    ) {
        if remaining == 0 {
            if target == 0 {
                out.push(Word::new(letters.clone()));
            }
            return;
        }
        let r = remaining as i64;
        if target < r * dmin || target > r * dmax {
            return;
        }
        for i in 0..space.dim() as u32 {
            letters.push(i);
            go(
                space,
                out,
                letters,
                remaining - 1,
                target - space.degree(i),
                dmin,
                dmax,
            );
            letters.pop();
        }
    }
    go(
        space,
        &mut out,
        &mut letters,
        length,
        degree_sum,
        dmin,
        dmax,
    );
    out
}

/// All words of the given length, lexicographically ordered.
pub fn words_of_length<F: Field>(space: &GradedSpace<F>, length: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let dim = space.dim() as u32;
    if length == 0 {
        out.push(Word::empty());
        return out;
    }
    if dim == 0 {
        return out;
    }
    let mut letters = vec![0u32; length];
    loop {
        out.push(Word::new(letters.clone()));
        let mut pos = length;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            letters[pos] += 1;
            if letters[pos] < dim {
                break;
            }
            letters[pos] = 0;
        }
    }
}

/// A basis (reduced echelon rows) of the shuffle subspace `Sh^n(M)` inside
/// the word-degree-`q` component of `⊗^n M`, in coordinates over the
/// lexicographic word basis of that component.
#[derive(Clone, Debug)]
pub struct ShuffleBasis<F: Field> {
    /// Word basis of `(⊗^n M)_q`, lexicographic.
    pub words: Vec<Word>,
    /// Reduced echelon basis rows of `Sh^n(M)_q` over `words`.
    pub vectors: Vec<Vec<F::Elem>>,
}

impl<F: Field> ShuffleBasis<F> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// The basis rows as word sums.
    pub fn word_sums(&self, field: &F) -> Vec<WordSum<F>> {
        self.vectors
            .iter()
            .map(|row| {
                let mut s = WordSum::zero();
                for (w, c) in self.words.iter().zip(row) {
                    s.add_term(field, w.clone(), c.clone());
                }
                s
            })
            .collect()
    }
}

/// Spanning-set-reduced basis of `Sh^n(M)` in word degree `q`.
///
/// `Sh^n(M) = Σ_{k=1}^{n-1} μ((⊗^k M) ⊗ (⊗^{n-k} M))`; the spanning products
/// are row-reduced over the word basis. Empty for `n ≤ 1`.
pub fn shuffle_subspace_basis<F: Field>(
    space: &GradedSpace<F>,
    n: usize,
    q: i64,
) -> ShuffleBasis<F> {
    let field = space.field().clone();
    let degree_sum = q + n as i64;
    let words = words_of_length_degree(space, n, degree_sum);
    if n <= 1 || words.is_empty() {
        return ShuffleBasis {
            words,
            vectors: Vec::new(),
        };
    }
    let word_index: BTreeMap<&Word, usize> =
        words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for k in 1..n {
        let (dmin, dmax) = space.degree_window().expect("nonempty basis");
        let lo = (k as i64) * dmin;
        let hi = (k as i64) * dmax;
        for left_sum in lo..=hi {
            let lefts = words_of_length_degree(space, k, left_sum);
            if lefts.is_empty() {
                continue;
            }
            let rights = words_of_length_degree(space, n - k, degree_sum - left_sum);
            for u in &lefts {
                for v in &rights {
                    let product = shuffle_product(space, u, v);
                    if product.is_zero() {
                        continue;
                    }
                    let mut row = vec![field.zero(); words.len()];
                    for (w, c) in product.terms() {
                        row[word_index[w]] = c.clone();
                    }
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return ShuffleBasis {
            words,
            vectors: Vec::new(),
        };
    }
    let rref = Matrix::from_rows(field.clone(), rows).rref();
    let vectors = (0..rref.rank())
        .map(|r| rref.matrix.row(r).to_vec())
        .collect();
    ShuffleBasis { words, vectors }
}

/// `dim Ch^n(M)_q = dim (⊗^n M)_q − dim Sh^n(M)_q`.
pub fn ch_dimension<F: Field>(space: &GradedSpace<F>, n: usize, q: i64) -> usize {
    let basis = shuffle_subspace_basis(space, n, q);
    basis.words.len() - basis.dim()
}
