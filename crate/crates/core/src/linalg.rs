//! Dense exact linear algebra over a [`Field`].
//!
//! Forward elimination is fraction-free (Bareiss one-step updates with the
//! previous pivot divided out), so over the rationals the working entries
//! stay integral once [`Field::clear_denominators`] has scaled each row;
//! over a prime field the same code is plain Gaussian elimination. Reduced
//! echelon form, kernel bases and particular solutions are derived from it
//! deterministically: free variables are always set to zero.

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn at(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_mut(&mut self, i: usize) -> &mut [F::Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn mul_vec(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, xj) in x.iter().enumerate() {
                    let term = self.field.mul(self.at(i, j), xj);
                    acc = self.field.add(&acc, &term);
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.field.is_zero(self.at(i, k)) {
                    continue;
                }
                for j in 0..other.cols {
                    let term = self.field.mul(self.at(i, k), other.at(k, j));
                    let v = self.field.add(out.at(i, j), &term);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Fraction-free forward elimination in place. Returns the pivot
    /// positions `(row, col)` in order.
    fn echelonize(&mut self) -> Vec<(usize, usize)> {
        let field = self.field.clone();
        for i in 0..self.rows {
            field.clear_denominators(self.row_mut(i));
        }
        let mut prev = field.one();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for c in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| !field.is_zero(self.at(r, c))) else {
                continue;
            };
            self.swap_rows(pivot_row, r);
            let pivot = self.at(pivot_row, c).clone();
            for i in (pivot_row + 1)..self.rows {
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let num = field.sub(
                        &field.mul(&pivot, self.at(i, j)),
                        &field.mul(&factor, self.at(pivot_row, j)),
                    );
                    let v = field.div(&num, &prev).expect("previous pivot is nonzero");
                    self.set(i, j, v);
                }
            }
            prev = pivot;
            pivots.push((pivot_row, c));
            pivot_row += 1;
        }
        pivots
    }

    /// Reduced row echelon form with unit pivots.
    pub fn rref(mut self) -> Rref<F> {
        let pivots = self.echelonize();
        let field = self.field.clone();
        for &(r, c) in pivots.iter().rev() {
            let inv = field.inv(self.at(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = field.mul(self.at(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..r {
                let factor = self.at(i, c).clone();
                if field.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(self.at(i, j), &field.mul(&factor, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
        }
        Rref {
            matrix: self,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelonize().len()
    }

    /// Basis of the right null space `{x : Ax = 0}`, one vector per free
    /// column, in ascending column order.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let rref = self.clone().rref();
        rref.kernel_basis()
    }

    /// A particular solution of `Ax = b` with all free variables zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(rhs.len(), self.rows);
        let field = self.field.clone();
        let mut aug = Matrix::zero(field.clone(), self.rows, self.cols + 1);
        for (i, b) in rhs.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b.clone());
        }
        let rref = aug.rref();
        if rref.pivots.iter().any(|&(_, c)| c == self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for &(r, c) in &rref.pivots {
            x[c] = rref.matrix.at(r, self.cols).clone();
        }
        Some(x)
    }
}

/// A matrix in reduced row echelon form together with its pivot positions.
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<(usize, usize)>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.iter().map(|&(_, c)| c).collect()
    }

    pub fn free_cols(&self) -> Vec<usize> {
        let pivot_cols = self.pivot_cols();
        (0..self.matrix.cols())
            .filter(|c| !pivot_cols.contains(c))
            .collect()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let field = self.matrix.field().clone();
        let cols = self.matrix.cols();
        self.free_cols()
            .into_iter()
            .map(|fc| {
                let mut v = vec![field.zero(); cols];
                v[fc] = field.one();
                for &(r, c) in &self.pivots {
                    v[c] = field.neg(self.matrix.at(r, fc));
                }
                v
            })
            .collect()
    }

    /// Coordinates of `v` in the row space, assuming the rows of the RREF
    /// form a basis in which every pivot column carries a lone 1. Returns
    /// `None` if `v` lies outside the row space.
    pub fn coordinates_in_row_space(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let field = self.matrix.field().clone();
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&(_, c)| v[c].clone()).collect();
        // Residual check: v - sum coords_r * row_r must vanish.
        let mut residual = v.to_vec();
        for (k, &(r, _)) in self.pivots.iter().enumerate() {
            for (j, entry) in residual.iter_mut().enumerate() {
                let term = field.mul(&coords[k], self.matrix.at(r, j));
                *entry = field.sub(entry, &term);
            }
        }
        if residual.iter().all(|x| field.is_zero(x)) {
            Some(coords)
        } else {
            None
        }
    }
}
