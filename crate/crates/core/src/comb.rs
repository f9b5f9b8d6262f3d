//! Sparse linear combinations of basis elements.

use std::collections::BTreeMap;

use crate::field::Field;

/// A formal linear combination of basis indices with nonzero coefficients.
///
/// Zero coefficients are never stored, so derived equality is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<F: Field>(BTreeMap<u32, F::Elem>);

impl<F: Field> Default for LinComb<F> {
    fn default() -> Self {
        LinComb(BTreeMap::new())
    }
}

impl<F: Field> LinComb<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(field: &F, index: u32, coeff: F::Elem) -> Self {
        let mut out = Self::zero();
        out.add_term(field, index, coeff);
        out
    }

    pub fn basis(field: &F, index: u32) -> Self {
        Self::single(field, index, field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, field: &F, index: u32) -> F::Elem {
        self.0.get(&index).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &F::Elem)> + '_ {
        self.0.iter().map(|(&i, c)| (i, c))
    }

    pub fn add_term(&mut self, field: &F, index: u32, coeff: F::Elem) {
        if field.is_zero(&coeff) {
            return;
        }
        match self.0.remove(&index) {
            None => {
                self.0.insert(index, coeff);
            }
            Some(old) => {
                let sum = field.add(&old, &coeff);
                if !field.is_zero(&sum) {
                    self.0.insert(index, sum);
                }
            }
        }
    }

    pub fn add_scaled(&mut self, field: &F, other: &Self, factor: &F::Elem) {
        if field.is_zero(factor) {
            return;
        }
        for (i, c) in other.iter() {
            self.add_term(field, i, field.mul(c, factor));
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

    pub fn negated(&self, field: &F) -> Self {
        self.scaled(field, &field.neg(&field.one()))
    }

    /// Dense coordinate vector over the given index list.
    pub fn to_vec(&self, field: &F, indices: &[u32]) -> Vec<F::Elem> {
        indices.iter().map(|&i| self.coeff(field, i)).collect()
    }
}

impl<F: Field> FromIterator<(u32, F::Elem)> for LinComb<F>
where
    F: Default,
{
    fn from_iter<T: IntoIterator<Item = (u32, F::Elem)>>(iter: T) -> Self {
        let field = F::default();
        let mut out = Self::zero();
        for (i, c) in iter {
            out.add_term(&field, i, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn zeros_are_never_stored() {
        let q = Rationals;
        let mut c = LinComb::single(&q, 0, q.from_i64(2));
        c.add_term(&q, 0, q.from_i64(-2));
        assert!(c.is_zero());
        c.add_term(&q, 3, q.from_i64(0));
        assert!(c.is_zero());
    }
}
