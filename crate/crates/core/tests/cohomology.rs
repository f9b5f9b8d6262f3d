//! Exact linear algebra over the cochain complexes: basis counts, bigraded
//! dimensions, the coboundary solver, and the Harrison subcomplex checks.

mod common;

use ainfty::cochain::{coboundary, is_harrison, Cochain, Coefficients, Target};
use ainfty::cohomology::{
    cochain_basis, cohomology_dim, delta_matrix, solve_coboundary, BidegreeMatrixPair,
    CohomologyClass, CohomologyError, Theory,
};
use ainfty::field::{Field, PrimeField, Rationals};
use ainfty::samples;
use common::random_cochain_at;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SELF: Coefficients<'_, Rationals> = Coefficients::SelfAlgebra;

#[test]
fn degree_zero_algebra_has_no_offdiagonal_cochains() {
    let algebra = samples::product_of_fields(Rationals, 3);
    for n in 1..=4 {
        for k in [-2i64, -1, 1, 2] {
            assert_eq!(
                cochain_basis(&algebra, SELF, n, k, Theory::Hochschild).dim(),
                0
            );
        }
        assert!(cochain_basis(&algebra, SELF, n, 0, Theory::Hochschild).dim() > 0);
    }
}

#[test]
fn harrison_basis_at_arity_one_is_hochschild() {
    let algebra = samples::exterior(Rationals, &[("x", 1), ("y", 2)]);
    for k in -2..=2 {
        let hoch = cochain_basis(&algebra, SELF, 1, k, Theory::Hochschild);
        let harr = cochain_basis(&algebra, SELF, 1, k, Theory::Harrison);
        assert_eq!(hoch.elements(), harr.elements());
    }
}

#[test]
fn dual_numbers_have_eight_bidegree_two_zero_cochains() {
    // Both basis elements in degree 0: 4 pair-words × 2 targets.
    let algebra = samples::dual_numbers(Rationals, 0);
    assert_eq!(
        cochain_basis(&algebra, SELF, 2, 0, Theory::Hochschild).dim(),
        8
    );
}

#[test]
fn ground_field_cohomology_vanishes() {
    let algebra = samples::ground_field(Rationals);
    for n in 2..=5 {
        assert_eq!(
            cohomology_dim(&algebra, SELF, n, 0, Theory::Hochschild).unwrap(),
            0
        );
        // off-diagonal internal degrees have empty cochain spaces
        let k = 2 - n as i64;
        if k != 0 {
            assert_eq!(
                cohomology_dim(&algebra, SELF, n, k, Theory::Hochschild).unwrap(),
                0
            );
        }
    }
}

#[test]
fn harrison_dimension_bounded_by_hochschild() {
    for algebra in common::commutative_zoo(Rationals) {
        for n in 2..=3usize {
            for k in -2..=1 {
                let hoch = cohomology_dim(&algebra, SELF, n, k, Theory::Hochschild).unwrap();
                let harr = cohomology_dim(&algebra, SELF, n, k, Theory::Harrison).unwrap();
                assert!(
                    harr <= hoch,
                    "Harr^{{{n},{k}}} = {harr} > Hoch^{{{n},{k}}} = {hoch}"
                );
            }
        }
    }
}

#[test]
fn bidegree_matrices_compose_to_zero_and_rank_nullity_holds() {
    for algebra in common::associative_zoo(Rationals) {
        for n in 1..=3usize {
            for k in -2..=1 {
                let pair = BidegreeMatrixPair::new(&algebra, SELF, n, k, Theory::Hochschild)
                    .expect("δ² = 0 as matrices");
                let dim = pair.domain.dim();
                let rank = pair.outgoing.rank();
                let kernel = pair.outgoing.kernel_basis().len();
                assert_eq!(rank + kernel, dim);
            }
        }
    }
}

#[test]
fn cohomology_dim_is_basis_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for algebra in [
        samples::dual_numbers(Rationals, 1),
        samples::exterior(Rationals, &[("x", 1), ("y", 2)]),
    ] {
        for (n, k) in [(2usize, -1i64), (3, -1), (3, -2), (2, 0)] {
            let reference = cohomology_dim(&algebra, SELF, n, k, Theory::Hochschild).unwrap();
            // recompute with a shuffled domain basis
            let domain = cochain_basis(&algebra, SELF, n, k, Theory::Hochschild);
            let above = cochain_basis(&algebra, SELF, n + 1, k, Theory::Hochschild);
            let below = cochain_basis(&algebra, SELF, n - 1, k, Theory::Hochschild);
            let mut shuffled = domain.elements().to_vec();
            shuffled.shuffle(&mut rng);
            let outgoing = delta_matrix(&algebra, SELF, &shuffled, &above).unwrap();
            let mut below_shuffled = below.elements().to_vec();
            below_shuffled.shuffle(&mut rng);
            let incoming = delta_matrix(&algebra, SELF, &below_shuffled, &domain).unwrap();
            let recomputed = (domain.dim() - outgoing.rank()) - incoming.rank();
            assert_eq!(recomputed, reference);
        }
    }
}

#[test]
fn solve_coboundary_on_zero() {
    let algebra = samples::dual_numbers(Rationals, 1);
    let zero = Cochain::zero(3, -1, Target::SelfAlgebra);
    let p = solve_coboundary(&algebra, SELF, &zero, Theory::Hochschild)
        .unwrap()
        .expect("zero is a coboundary");
    assert!(p.is_zero());
}

#[test]
fn solve_coboundary_recovers_constructed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(67);
    for algebra in common::associative_zoo(Rationals) {
        for arity in 1..=2usize {
            for k in -2..=1i64 {
                let p0 = random_cochain_at(&algebra, arity, k, &mut rng);
                let c = coboundary(&algebra, SELF, &p0).unwrap();
                let solved = solve_coboundary(&algebra, SELF, &c, Theory::Hochschild)
                    .unwrap()
                    .expect("a constructed coboundary is solvable");
                let check = coboundary(&algebra, SELF, &solved).unwrap();
                assert_eq!(check, c, "δp ≠ c after solving");
            }
        }
    }
}

#[test]
fn solve_coboundary_rejects_non_cocycles() {
    // On the dual numbers with deg x = 0, the arity-1 cochain x ↦ 1 is not
    // a derivation-like cocycle: δf(x⊗x) = −2x.
    let algebra = samples::dual_numbers(Rationals, 0);
    let space = algebra.space();
    let one = space.index("1").unwrap();
    let x = space.index("x").unwrap();
    let f = Cochain::elementary(
        ainfty::word::Word::single(x),
        one,
        Target::SelfAlgebra,
        space,
        space,
    );
    let df = coboundary(&algebra, SELF, &f).unwrap();
    assert!(!df.is_zero());
    let err = solve_coboundary(&algebra, SELF, &f, Theory::Hochschild).unwrap_err();
    assert!(matches!(err, CohomologyError::NotACocycle { .. }));
}

/// A cocycle certified outside the image by rank comparison must yield
/// `None`, and wraps into a verified cohomology class.
#[test]
fn solve_coboundary_detects_obstructions() {
    // Dual numbers, deg x = 1: Hoch^{1,0} contains the class of f(x) = x
    // (derivations modulo inner ones is nonzero here at some bidegree);
    // hunt a kernel-not-image vector at (2, k) instead, by ranks.
    let algebra = samples::dual_numbers(Rationals, 1);
    let field = algebra.field().clone();
    let mut found = false;
    'outer: for n in 1..=3usize {
        for k in -2..=1i64 {
            let pair = BidegreeMatrixPair::new(&algebra, SELF, n, k, Theory::Hochschild).unwrap();
            if pair.cohomology_dim() == 0 {
                continue;
            }
            // pick a kernel vector not in the image
            let image_rank = pair.incoming.rank();
            for v in pair.outgoing.kernel_basis() {
                // augment image columns with v and compare ranks
                let mut rows: Vec<Vec<_>> = Vec::new();
                for i in 0..pair.incoming.rows() {
                    let mut row: Vec<_> = (0..pair.incoming.cols())
                        .map(|j| pair.incoming.at(i, j).clone())
                        .collect();
                    row.push(v[i].clone());
                    rows.push(row);
                }
                let augmented = ainfty::linalg::Matrix::from_rows(field.clone(), rows);
                if augmented.rank() > image_rank {
                    let c = pair.domain.from_coordinates(&field, &v);
                    let solved = solve_coboundary(&algebra, SELF, &c, Theory::Hochschild).unwrap();
                    assert!(solved.is_none(), "certified non-coboundary was solved");
                    let class = CohomologyClass::new(&algebra, SELF, c, Theory::Hochschild)
                        .expect("kernel vector is a cocycle");
                    assert_eq!(class.bidegree(), (n, k));
                    found = true;
                    break 'outer;
                }
            }
        }
    }
    assert!(found, "expected a nonzero cohomology class on Λ[x]/(x²)");
}

/// Harrison closure at the operator level: δ of every Harrison basis
/// element stays in the Harrison subspace, and solving in the Harrison
/// theory returns Harrison preimages.
#[test]
fn harrison_subcomplex_is_closed_and_solvable() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let algebras = [
        samples::dual_numbers(Rationals, 1),
        samples::dual_numbers(Rationals, 2),
        samples::exterior(Rationals, &[("x", 1), ("y", 2)]),
    ];
    for algebra in &algebras {
        let space = algebra.space();
        let field = algebra.field().clone();
        for n in 2..=3usize {
            for k in [-1i64, 0] {
                let basis = cochain_basis(algebra, SELF, n, k, Theory::Harrison);
                if basis.dim() == 0 {
                    continue;
                }
                // random Harrison cochain: random combination of the basis
                let coords: Vec<_> = (0..basis.dim())
                    .map(|_| field.from_i64(rand::Rng::gen_range(&mut rng, -3..=3)))
                    .collect();
                let f = basis.from_coordinates(&field, &coords);
                assert!(is_harrison(algebra, space, &f));
                let df = coboundary(algebra, SELF, &f).unwrap();
                assert!(is_harrison(algebra, space, &df), "δ left Harrison");
                if let Some(p) = solve_coboundary(algebra, SELF, &df, Theory::Harrison).unwrap() {
                    assert!(is_harrison(algebra, space, &p));
                    assert_eq!(coboundary(algebra, SELF, &p).unwrap(), df);
                } else {
                    panic!("δf of a Harrison cochain must be a Harrison coboundary");
                }
            }
        }
    }
}

#[test]
fn prime_field_pipeline_matches_shapes() {
    let f5 = PrimeField::new(5).unwrap();
    let algebra = samples::dual_numbers(f5, 1);
    let coeffs: Coefficients<'_, PrimeField> = Coefficients::SelfAlgebra;
    for n in 2..=3usize {
        let k = 2 - n as i64;
        let dim = cohomology_dim(&algebra, coeffs, n, k, Theory::Hochschild).unwrap();
        // dimension is a finite natural; the exactness is the point
        let pair = BidegreeMatrixPair::new(&algebra, coeffs, n, k, Theory::Hochschild).unwrap();
        assert_eq!(pair.cohomology_dim(), dim);
    }
}
