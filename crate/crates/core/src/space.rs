//! Finite-dimensional graded vector spaces with named bases.

use std::collections::BTreeMap;

use crate::field::Field;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpaceError {
    #[error("duplicate basis name {0:?}")]
    DuplicateBasisName(String),
    #[error("unknown basis name {0:?}")]
    UnknownBasisName(String),
}

/// A graded module with a finite ordered basis of named homogeneous elements.
///
/// The degree window is finite by construction: the homogeneous component of
/// any degree outside `[min_degree, max_degree]` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace<F: Field> {
    field: F,
    names: Vec<String>,
    degrees: Vec<i64>,
    index: BTreeMap<String, u32>,
}

impl<F: Field> GradedSpace<F> {
    pub fn new(
        field: F,
        basis: impl IntoIterator<Item = (String, i64)>,
    ) -> Result<Self, SpaceError> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = BTreeMap::new();
        for (name, degree) in basis {
            if index.contains_key(&name) {
                return Err(SpaceError::DuplicateBasisName(name));
            }
            index.insert(name.clone(), names.len() as u32);
            names.push(name);
            degrees.push(degree);
        }
        Ok(GradedSpace {
            field,
            names,
            degrees,
            index,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: u32) -> i64 {
        self.degrees[i as usize]
    }

    pub fn name(&self, i: u32) -> &str {
        &self.names[i as usize]
    }

    pub fn index(&self, name: &str) -> Result<u32, SpaceError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| SpaceError::UnknownBasisName(name.to_owned()))
    }

    pub fn basis(&self) -> impl Iterator<Item = (u32, &str, i64)> + '_ {
        (0..self.dim() as u32).map(move |i| (i, self.name(i), self.degree(i)))
    }

    pub fn indices_of_degree(&self, d: i64) -> Vec<u32> {
        (0..self.dim() as u32)
            .filter(|&i| self.degree(i) == d)
            .collect()
    }

    pub fn dim_of_degree(&self, d: i64) -> usize {
        self.indices_of_degree(d).len()
    }

    /// `(min, max)` over basis degrees; `None` when the space is zero.
    pub fn degree_window(&self) -> Option<(i64, i64)> {
        let min = self.degrees.iter().copied().min()?;
        let max = self.degrees.iter().copied().max()?;
        Some((min, max))
    }

    /// True when both spaces share the field and the degree sequence, which
    /// is what the word and cochain machinery actually relies on.
    pub fn compatible(&self, other: &Self) -> bool {
        self.field == other.field && self.degrees == other.degrees && self.names == other.names
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn construction_and_lookups() {
        let space = GradedSpace::new(
            Rationals,
            vec![
                ("e".to_owned(), 0),
                ("x".to_owned(), 1),
                ("y".to_owned(), 1),
            ],
        )
        .unwrap();
        assert_eq!(space.dim(), 3);
        assert_eq!(space.index("x").unwrap(), 1);
        assert_eq!(space.degree(2), 1);
        assert_eq!(space.indices_of_degree(1), vec![1, 2]);
        assert_eq!(space.degree_window(), Some((0, 1)));
        assert_eq!(space.dim_of_degree(5), 0);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = GradedSpace::new(Rationals, vec![("e".to_owned(), 0), ("e".to_owned(), 1)])
            .unwrap_err();
        assert_eq!(err, SpaceError::DuplicateBasisName("e".to_owned()));
    }
}
