//! Bigraded cohomology of the Hochschild and Harrison complexes: cochain
//! bases, differential matrices, dimensions, and the coboundary solver that
//! drives obstruction killing.
//!
//! Everything is exact row reduction over the coefficient field. The
//! Harrison basis of a bidegree is the annihilator of the shuffle subspace,
//! computed as a kernel in reduced echelon form, so coordinates of a
//! Harrison cochain are read off at the free columns.

use std::collections::BTreeMap;

use crate::algebra::GradedAlgebra;
use crate::cochain::{coboundary, Cochain, CochainError, Coefficients, Target};
use crate::comb::LinComb;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::word::{shuffle_subspace_basis, words_of_length_degree, Word};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Theory {
    Hochschild,
    Harrison,
}

impl std::fmt::Display for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theory::Hochschild => write!(f, "hochschild"),
            Theory::Harrison => write!(f, "harrison"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("input to solve_coboundary is not a cocycle (arity {arity}, degree {degree})")]
    NotACocycle { arity: usize, degree: i64 },
    #[error("cochain does not vanish on shuffles, so it lies outside the Harrison subcomplex")]
    NotHarrison,
    #[error("cochain has coordinates outside the chosen basis: {0}")]
    OutsideBasis(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

struct DegreeBlock<F: Field> {
    words: Vec<Word>,
    targets: Vec<u32>,
    /// Reduced-echelon basis of the value-row subspace cut out by the
    /// theory: identity rows for Hochschild, the shuffle annihilator for
    /// Harrison. `free_cols` are the coordinate positions.
    row_basis: Vec<Vec<F::Elem>>,
    coordinate_cols: Vec<usize>,
}

/// An ordered basis of `C^{n,k}` or `C̄^{n,k}`, with coordinate maps.
pub struct CochainBasis<F: Field> {
    arity: usize,
    degree: i64,
    target: Target,
    theory: Theory,
    elements: Vec<Cochain<F>>,
    blocks: Vec<DegreeBlock<F>>,
}

impl<F: Field> CochainBasis<F> {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Cochain<F>] {
        &self.elements
    }

    /// Coordinates of `f` in this basis; errors when `f` lies outside the
    /// spanned subspace (wrong bidegree, or non-Harrison values in the
    /// Harrison theory).
    pub fn coordinates(
        &self,
        algebra: &GradedAlgebra<F>,
        f: &Cochain<F>,
    ) -> Result<Vec<F::Elem>, CohomologyError> {
        let field = algebra.field().clone();
        if f.arity() != self.arity || f.degree() != self.degree || f.target() != self.target {
            return Err(CohomologyError::OutsideBasis(format!(
                "expected bidegree ({}, {}), got ({}, {})",
                self.arity,
                self.degree,
                f.arity(),
                f.degree()
            )));
        }
        let mut coords = Vec::with_capacity(self.dim());
        let mut accounted = 0usize;
        for block in &self.blocks {
            for &t in &block.targets {
                let value_row: Vec<F::Elem> = block
                    .words
                    .iter()
                    .map(|w| f.value(w).coeff(&field, t))
                    .collect();
                accounted += block
                    .words
                    .iter()
                    .filter(|w| !f.value(w).coeff(&field, t).eq(&field.zero()))
                    .count();
                let mut block_coords: Vec<F::Elem> = block
                    .coordinate_cols
                    .iter()
                    .map(|&c| value_row[c].clone())
                    .collect();
                // membership check against the row basis
                let mut residual = value_row;
                for (i, row) in block.row_basis.iter().enumerate() {
                    for (j, r) in residual.iter_mut().enumerate() {
                        let term = field.mul(&block_coords[i], &row[j]);
                        *r = field.sub(r, &term);
                    }
                }
                if residual.iter().any(|x| !field.is_zero(x)) {
                    return Err(match self.theory {
                        Theory::Harrison => CohomologyError::NotHarrison,
                        Theory::Hochschild => CohomologyError::OutsideBasis(
                            "value outside the block row space".to_owned(),
                        ),
                    });
                }
                coords.append(&mut block_coords);
            }
        }
        // any support not covered by the blocks violates the degree law
        let mut support_nonzero = 0usize;
        for (w, v) in f.support() {
            let _ = w;
            support_nonzero += v.len();
        }
        if support_nonzero != accounted {
            return Err(CohomologyError::OutsideBasis(
                "support outside the degree-lawful blocks".to_owned(),
            ));
        }
        Ok(coords)
    }

    pub fn from_coordinates(&self, field: &F, coords: &[F::Elem]) -> Cochain<F> {
        assert_eq!(coords.len(), self.dim());
        let mut out = Cochain::zero(self.arity, self.degree, self.target);
        for (c, e) in coords.iter().zip(&self.elements) {
            out.add_scaled(field, e, c);
        }
        out
    }
}

/// Ordered basis of the bidegree-`(n,k)` cochains with the given theory and
/// coefficients. For Hochschild these are the elementary maps
/// `word ↦ target` allowed by the degree law; for Harrison, a reduced basis
/// of the subspace annihilating `Sh^n(A)`.
pub fn cochain_basis<F: Field>(
    algebra: &GradedAlgebra<F>,
    coefficients: Coefficients<'_, F>,
    n: usize,
    k: i64,
    theory: Theory,
) -> CochainBasis<F> {
    let field = algebra.field().clone();
    let space = algebra.space();
    let value_space = coefficients.space(algebra);
    let target = coefficients.tag();
    let mut value_degrees: Vec<i64> = value_space.basis().map(|(_, _, d)| d).collect();
    value_degrees.sort_unstable();
    value_degrees.dedup();
    let mut blocks = Vec::new();
    let mut elements = Vec::new();
    for dv in value_degrees {
        let degree_sum = dv - k;
        let words = words_of_length_degree(space, n, degree_sum);
        if words.is_empty() {
            continue;
        }
        let targets = value_space.indices_of_degree(dv);
        if targets.is_empty() {
            continue;
        }
        let (row_basis, coordinate_cols) = match theory {
            Theory::Hochschild => {
                let rows = (0..words.len())
                    .map(|i| {
                        let mut row = vec![field.zero(); words.len()];
                        row[i] = field.one();
                        row
                    })
                    .collect::<Vec<_>>();
                (rows, (0..words.len()).collect::<Vec<_>>())
            }
            Theory::Harrison => {
                let shuffles = shuffle_subspace_basis(space, n, degree_sum - n as i64);
                debug_assert_eq!(shuffles.words, words);
                if shuffles.dim() == 0 {
                    let rows = (0..words.len())
                        .map(|i| {
                            let mut row = vec![field.zero(); words.len()];
                            row[i] = field.one();
                            row
                        })
                        .collect::<Vec<_>>();
                    (rows, (0..words.len()).collect::<Vec<_>>())
                } else {
                    let matrix = Matrix::from_rows(field.clone(), shuffles.vectors.clone());
                    let rref = matrix.rref();
                    let kernel = rref.kernel_basis();
                    (kernel, rref.free_cols())
                }
            }
        };
        // Element order matches the coordinate traversal: block, then
        // target, then basis row.
        for &t in &targets {
            for row in &row_basis {
                let mut values: BTreeMap<Word, LinComb<F>> = BTreeMap::new();
                for (w, c) in words.iter().zip(row) {
                    if !field.is_zero(c) {
                        values.insert(w.clone(), LinComb::single(&field, t, c.clone()));
                    }
                }
                let cochain = Cochain::new(n, k, target, values, space, value_space)
                    .expect("basis cochains satisfy the degree law");
                elements.push(cochain);
            }
        }
        blocks.push(DegreeBlock {
            words,
            targets,
            row_basis,
            coordinate_cols,
        });
    }
    CochainBasis {
        arity: n,
        degree: k,
        target,
        theory,
        elements,
        blocks,
    }
}

/// The differential matrix from an ordered list of domain cochains to a
/// codomain basis: column `j` holds the coordinates of `δ(domain[j])`.
pub fn delta_matrix<F: Field>(
    algebra: &GradedAlgebra<F>,
    coefficients: Coefficients<'_, F>,
    domain: &[Cochain<F>],
    codomain: &CochainBasis<F>,
) -> Result<Matrix<F>, CohomologyError> {
    let field = algebra.field().clone();
    let mut matrix = Matrix::zero(field.clone(), codomain.dim(), domain.len());
    for (j, f) in domain.iter().enumerate() {
        let df = coboundary(algebra, coefficients, f)?;
        let coords = codomain.coordinates(algebra, &df).map_err(|e| match e {
            CohomologyError::NotHarrison => {
                CohomologyError::InternalConsistency("δ left the Harrison subcomplex".to_owned())
            }
            other => other,
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            matrix.set(i, j, c);
        }
    }
    Ok(matrix)
}

/// The two differentials touching one bidegree, with `δ∘δ = 0` verified at
/// the matrix level on construction.
pub struct BidegreeMatrixPair<F: Field> {
    pub incoming: Matrix<F>,
    pub outgoing: Matrix<F>,
    pub domain: CochainBasis<F>,
}

impl<F: Field> BidegreeMatrixPair<F> {
    pub fn new(
        algebra: &GradedAlgebra<F>,
        coefficients: Coefficients<'_, F>,
        n: usize,
        k: i64,
        theory: Theory,
    ) -> Result<Self, CohomologyError> {
        assert!(n >= 1, "bidegree matrices start at arity 1");
        let domain = cochain_basis(algebra, coefficients, n, k, theory);
        let below = cochain_basis(algebra, coefficients, n - 1, k, theory);
        let above = cochain_basis(algebra, coefficients, n + 1, k, theory);
        let incoming = delta_matrix(algebra, coefficients, below.elements(), &domain)?;
        let outgoing = delta_matrix(algebra, coefficients, domain.elements(), &above)?;
        let composite = outgoing.mul(&incoming);
        if !composite.is_zero() {
            return Err(CohomologyError::InternalConsistency(
                "δ∘δ ≠ 0 at the matrix level".to_owned(),
            ));
        }
        Ok(BidegreeMatrixPair {
            incoming,
            outgoing,
            domain,
        })
    }

    /// `dim ker(outgoing) − rank(incoming)`.
    pub fn cohomology_dim(&self) -> usize {
        let kernel = self.domain.dim() - self.outgoing.rank();
        kernel - self.incoming.rank()
    }
}

/// `dim Hoch^{n,k}` or `dim Harr^{n,k}` by exact row reduction.
pub fn cohomology_dim<F: Field>(
    algebra: &GradedAlgebra<F>,
    coefficients: Coefficients<'_, F>,
    n: usize,
    k: i64,
    theory: Theory,
) -> Result<usize, CohomologyError> {
    Ok(BidegreeMatrixPair::new(algebra, coefficients, n, k, theory)?.cohomology_dim())
}

/// Solve `δp = c` in the chosen theory.
///
/// Returns the reduced-echelon particular solution with free variables set
/// to zero, `Ok(None)` when `c` is a cocycle but not a coboundary, and an
/// error when `c` is not a cocycle at all (a contract violation distinct
/// from "no solution").
pub fn solve_coboundary<F: Field>(
    algebra: &GradedAlgebra<F>,
    coefficients: Coefficients<'_, F>,
    c: &Cochain<F>,
    theory: Theory,
) -> Result<Option<Cochain<F>>, CohomologyError> {
    let field = algebra.field().clone();
    let dc = coboundary(algebra, coefficients, c)?;
    if !dc.is_zero() {
        return Err(CohomologyError::NotACocycle {
            arity: c.arity(),
            degree: c.degree(),
        });
    }
    let n = c.arity();
    if n == 0 {
        return Ok(if c.is_zero() {
            Some(Cochain::zero(0, c.degree(), c.target()))
        } else {
            None
        });
    }
    let codomain = cochain_basis(algebra, coefficients, n, c.degree(), theory);
    let target_coords = codomain.coordinates(algebra, c)?;
    let domain = cochain_basis(algebra, coefficients, n - 1, c.degree(), theory);
    let matrix = delta_matrix(algebra, coefficients, domain.elements(), &codomain)?;
    match matrix.solve(&target_coords) {
        None => Ok(None),
        Some(x) => Ok(Some(domain.from_coordinates(&field, &x))),
    }
}

/// A verified cohomology class: the representative is a cocycle, and lies
/// in the Harrison subcomplex when the theory says so.
pub struct CohomologyClass<F: Field> {
    representative: Cochain<F>,
    theory: Theory,
}

impl<F: Field> CohomologyClass<F> {
    pub fn new(
        algebra: &GradedAlgebra<F>,
        coefficients: Coefficients<'_, F>,
        representative: Cochain<F>,
        theory: Theory,
    ) -> Result<Self, CohomologyError> {
        let dc = coboundary(algebra, coefficients, &representative)?;
        if !dc.is_zero() {
            return Err(CohomologyError::NotACocycle {
                arity: representative.arity(),
                degree: representative.degree(),
            });
        }
        if theory == Theory::Harrison {
            let value_space = coefficients.space(algebra);
            if !crate::cochain::is_harrison(algebra, value_space, &representative) {
                return Err(CohomologyError::NotHarrison);
            }
        }
        Ok(CohomologyClass {
            representative,
            theory,
        })
    }

    pub fn representative(&self) -> &Cochain<F> {
        &self.representative
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    /// `(n, k)`.
    pub fn bidegree(&self) -> (usize, i64) {
        (self.representative.arity(), self.representative.degree())
    }
}
