//! Deterministic example algebras used in tests, documentation and seeds.
//!
//! Every constructor returns a fully validated algebra; a panic here means
//! the construction itself is wrong, which is exactly what the validation
//! is for.

use std::collections::BTreeMap;

use crate::algebra::GradedAlgebra;
use crate::comb::LinComb;
use crate::field::Field;
use crate::sign::Sign;
use crate::space::GradedSpace;

fn space<F: Field>(field: F, basis: &[(&str, i64)]) -> GradedSpace<F> {
    GradedSpace::new(field, basis.iter().map(|&(n, d)| (n.to_owned(), d)))
        .expect("sample basis names are unique")
}

/// The ground field as an algebra: one unit generator in degree 0.
pub fn ground_field<F: Field>(field: F) -> GradedAlgebra<F> {
    let sp = space(field.clone(), &[("e", 0)]);
    let mut table = BTreeMap::new();
    table.insert((0, 0), LinComb::basis(&field, 0));
    GradedAlgebra::new(sp, table, true, true, Some(0)).expect("ground field is valid")
}

/// `Λ[x]/(x²)` with the generator in the given degree. Graded-commutative
/// for every degree because the square is zero.
pub fn dual_numbers<F: Field>(field: F, x_degree: i64) -> GradedAlgebra<F> {
    exterior(field, &[("x", x_degree)])
}

/// A product of `count` copies of the ground field: orthogonal idempotents
/// in degree 0.
pub fn product_of_fields<F: Field>(field: F, count: usize) -> GradedAlgebra<F> {
    let names: Vec<String> = (0..count).map(|i| format!("e{i}")).collect();
    let sp =
        GradedSpace::new(field.clone(), names.into_iter().map(|n| (n, 0))).expect("distinct names");
    let mut table = BTreeMap::new();
    for i in 0..count as u32 {
        table.insert((i, i), LinComb::basis(&field, i));
    }
    GradedAlgebra::new(sp, table, true, true, None).expect("product of fields is valid")
}

/// The free graded-commutative algebra on square-zero generators: basis
/// indexed by subsets of the generators, products with Koszul signs.
pub fn exterior<F: Field>(field: F, generators: &[(&str, i64)]) -> GradedAlgebra<F> {
    let r = generators.len();
    assert!(r <= 8, "exterior sample limited to 8 generators");
    let subsets: Vec<u32> = (0..(1u32 << r)).collect();
    let name_of = |s: u32| -> String {
        if s == 0 {
            return "1".to_owned();
        }
        (0..r)
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| generators[i].0)
            .collect::<Vec<_>>()
            .join("")
    };
    let degree_of = |s: u32| -> i64 {
        (0..r)
            .filter(|&i| s & (1 << i) != 0)
            .map(|i| generators[i].1)
            .sum()
    };
    let sp = GradedSpace::new(
        field.clone(),
        subsets.iter().map(|&s| (name_of(s), degree_of(s))),
    )
    .expect("subset names are distinct");
    let mut table = BTreeMap::new();
    for &s in &subsets {
        for &t in &subsets {
            if s & t != 0 {
                continue;
            }
            // Koszul sign of interleaving the sorted union: one factor
            // (−1)^{d_i d_j} per pair i ∈ s, j ∈ t with j < i.
            let mut parity = 0i64;
            for i in 0..r {
                if s & (1 << i) == 0 {
                    continue;
                }
                for j in 0..i {
                    if t & (1 << j) != 0 {
                        parity += generators[i].1 * generators[j].1;
                    }
                }
            }
            let coeff = Sign::from_parity(parity).scalar(&field);
            table.insert((s, t), LinComb::single(&field, s | t, coeff));
        }
    }
    GradedAlgebra::new(sp, table, true, true, Some(0)).expect("exterior algebra is valid")
}

/// `Λ[x]/(x^order)` with `deg x` as given. Flagged graded-commutative only
/// when that actually holds (even degree, or square already zero).
pub fn truncated_polynomial<F: Field>(field: F, x_degree: i64, order: usize) -> GradedAlgebra<F> {
    assert!(order >= 2);
    let names: Vec<(String, i64)> = (0..order)
        .map(|i| {
            let name = match i {
                0 => "1".to_owned(),
                1 => "x".to_owned(),
                _ => format!("x{i}"),
            };
            (name, x_degree * i as i64)
        })
        .collect();
    let sp = GradedSpace::new(field.clone(), names).expect("distinct powers");
    let mut table = BTreeMap::new();
    for i in 0..order as u32 {
        for j in 0..order as u32 {
            if ((i + j) as usize) < order {
                table.insert((i, j), LinComb::basis(&field, i + j));
            }
        }
    }
    let commutative = x_degree % 2 == 0 || order <= 2;
    GradedAlgebra::new(sp, table, true, commutative, Some(0))
        .expect("truncated polynomial algebra is valid")
}

/// The unital square-zero extension `Λ·1 ⊕ V` with `V·V = 0`.
pub fn square_zero<F: Field>(field: F, generators: &[(&str, i64)]) -> GradedAlgebra<F> {
    let mut basis = vec![("1", 0)];
    basis.extend_from_slice(generators);
    let sp = space(field.clone(), &basis);
    let mut table = BTreeMap::new();
    let dim = sp.dim() as u32;
    for i in 0..dim {
        table.insert((0, i), LinComb::basis(&field, i));
        if i != 0 {
            table.insert((i, 0), LinComb::basis(&field, i));
        }
    }
    GradedAlgebra::new(sp, table, true, true, Some(0)).expect("square-zero extension is valid")
}

/// A two-dimensional non-associative table in degree 0, for negative tests:
/// `x·x = y`, `x·y = x`, everything else zero, so `(xx)x ≠ x(xx)`.
pub fn nonassociative_seed<F: Field>(field: F) -> GradedAlgebra<F> {
    let sp = space(field.clone(), &[("x", 0), ("y", 0)]);
    let mut table = BTreeMap::new();
    table.insert((0, 0), LinComb::basis(&field, 1));
    table.insert((0, 1), LinComb::basis(&field, 0));
    GradedAlgebra::new(sp, table, false, false, None).expect("table is degree-lawful")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn samples_construct() {
        ground_field(Rationals);
        dual_numbers(Rationals, 0);
        dual_numbers(Rationals, 3);
        product_of_fields(Rationals, 3);
        exterior(Rationals, &[("x", 1), ("y", 2)]);
        exterior(Rationals, &[("x", 1), ("y", 1), ("z", 3)]);
        truncated_polynomial(Rationals, 2, 4);
        truncated_polynomial(Rationals, 1, 2);
        square_zero(Rationals, &[("u", 1), ("v", 2)]);
        nonassociative_seed(Rationals);
    }

    #[test]
    fn exterior_signs_are_koszul() {
        let a = exterior(Rationals, &[("x", 1), ("y", 1)]);
        let sp = a.space();
        let x = sp.index("x").unwrap();
        let y = sp.index("y").unwrap();
        let xy = sp.index("xy").unwrap();
        let q = Rationals;
        assert_eq!(a.product_basis(x, y), LinComb::basis(&q, xy));
        assert_eq!(
            a.product_basis(y, x),
            LinComb::single(&q, xy, q.from_i64(-1))
        );
        assert!(a.product_basis(x, x).is_zero());
    }
}
