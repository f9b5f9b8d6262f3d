#![allow(dead_code)]
//! Shared generators for randomized exact tests. All randomness is seeded.

use std::collections::BTreeMap;

use ainfty::algebra::GradedAlgebra;
use ainfty::cochain::{Cochain, Target};
use ainfty::comb::LinComb;
use ainfty::field::Field;
use ainfty::space::GradedSpace;
use ainfty::word::{words_of_length, Word};
use rand::Rng;

/// All `(word, target)` pairs of the given arity grouped by internal degree.
pub fn elementary_pairs<F: Field>(
    word_space: &GradedSpace<F>,
    value_space: &GradedSpace<F>,
    arity: usize,
) -> BTreeMap<i64, Vec<(Word, u32)>> {
    let mut by_degree: BTreeMap<i64, Vec<(Word, u32)>> = BTreeMap::new();
    for word in words_of_length(word_space, arity) {
        let q = word.degree_sum(word_space);
        for (t, _, dt) in value_space.basis() {
            by_degree.entry(dt - q).or_default().push((word.clone(), t));
        }
    }
    by_degree
}

/// A random cochain of the given arity with coefficients in the algebra,
/// concentrated in one achievable internal degree.
pub fn random_cochain<F: Field, R: Rng>(
    algebra: &GradedAlgebra<F>,
    arity: usize,
    rng: &mut R,
) -> Cochain<F> {
    random_cochain_in(algebra, algebra.space(), Target::SelfAlgebra, arity, rng)
}

pub fn random_cochain_in<F: Field, R: Rng>(
    algebra: &GradedAlgebra<F>,
    value_space: &GradedSpace<F>,
    target: Target,
    arity: usize,
    rng: &mut R,
) -> Cochain<F> {
    let field = algebra.field();
    let by_degree = elementary_pairs(algebra.space(), value_space, arity);
    let degrees: Vec<i64> = by_degree.keys().copied().collect();
    if degrees.is_empty() {
        return Cochain::zero(arity, 0, target);
    }
    let k = degrees[rng.gen_range(0..degrees.len())];
    let mut values: BTreeMap<Word, LinComb<F>> = BTreeMap::new();
    for (word, t) in &by_degree[&k] {
        if rng.gen_bool(0.6) {
            let c = field.from_i64(rng.gen_range(-4..=4));
            if !field.is_zero(&c) {
                values
                    .entry(word.clone())
                    .or_insert_with(LinComb::zero)
                    .add_term(field, *t, c);
            }
        }
    }
    Cochain::new(arity, k, target, values, algebra.space(), value_space)
        .expect("generated cochain satisfies the degree law")
}

/// Random cochain at a prescribed internal degree (zero cochain when the
/// bidegree is empty).
pub fn random_cochain_at<F: Field, R: Rng>(
    algebra: &GradedAlgebra<F>,
    arity: usize,
    degree: i64,
    rng: &mut R,
) -> Cochain<F> {
    let field = algebra.field();
    let by_degree = elementary_pairs(algebra.space(), algebra.space(), arity);
    let mut values: BTreeMap<Word, LinComb<F>> = BTreeMap::new();
    if let Some(pairs) = by_degree.get(&degree) {
        for (word, t) in pairs {
            if rng.gen_bool(0.6) {
                let c = field.from_i64(rng.gen_range(-4..=4));
                if !field.is_zero(&c) {
                    values
                        .entry(word.clone())
                        .or_insert_with(LinComb::zero)
                        .add_term(field, *t, c);
                }
            }
        }
    }
    Cochain::new(
        arity,
        degree,
        Target::SelfAlgebra,
        values,
        algebra.space(),
        algebra.space(),
    )
    .expect("generated cochain satisfies the degree law")
}

/// Mixed-parity associative test algebras over the given field.
pub fn associative_zoo<F: Field>(field: F) -> Vec<GradedAlgebra<F>> {
    use ainfty::samples::*;
    vec![
        ground_field(field.clone()),
        dual_numbers(field.clone(), 0),
        dual_numbers(field.clone(), 1),
        dual_numbers(field.clone(), 3),
        product_of_fields(field.clone(), 2),
        exterior(field.clone(), &[("x", 1), ("y", 2)]),
        exterior(field.clone(), &[("x", 1), ("y", 1)]),
        truncated_polynomial(field.clone(), 2, 3),
        truncated_polynomial(field.clone(), 1, 3),
        square_zero(field, &[("u", 1), ("v", 2)]),
    ]
}

/// The graded-commutative members of the zoo.
pub fn commutative_zoo<F: Field>(field: F) -> Vec<GradedAlgebra<F>> {
    associative_zoo(field)
        .into_iter()
        .filter(|a| a.is_commutative())
        .collect()
}

/// A random perturbation cochain in bidegree `(n, 1−n)` drawn from the
/// theory's basis; zero when the bidegree is empty.
pub fn random_perturbation<F: Field, R: Rng>(
    algebra: &GradedAlgebra<F>,
    arity: usize,
    theory: ainfty::cohomology::Theory,
    rng: &mut R,
) -> Cochain<F> {
    let field = algebra.field().clone();
    let basis = ainfty::cohomology::cochain_basis(
        algebra,
        ainfty::cochain::Coefficients::SelfAlgebra,
        arity,
        1 - arity as i64,
        theory,
    );
    if basis.dim() == 0 {
        return Cochain::zero(arity, 1 - arity as i64, Target::SelfAlgebra);
    }
    let coords: Vec<F::Elem> = (0..basis.dim())
        .map(|_| field.from_i64(rng.gen_range(-3..=3)))
        .collect();
    basis.from_coordinates(&field, &coords)
}

/// A valid random twisting cochain built by perturbing zero a few times;
/// validity is guaranteed (and re-verified) by construction.
pub fn random_twisting<F: Field, R: Rng>(
    algebra: &GradedAlgebra<F>,
    truncation: usize,
    theory: ainfty::cohomology::Theory,
    steps: usize,
    rng: &mut R,
) -> ainfty::twisting::TwistingCochain<F> {
    let mut current = ainfty::twisting::TwistingCochain::zero(truncation, theory);
    for _ in 0..steps {
        let arity = rng.gen_range(2..truncation.max(3));
        let p = random_perturbation(algebra, arity, theory, rng);
        if p.is_zero() {
            continue;
        }
        current = ainfty::twisting::perturb(algebra, &current, &p)
            .expect("perturbation of a valid twisting cochain stays valid");
    }
    current
}
