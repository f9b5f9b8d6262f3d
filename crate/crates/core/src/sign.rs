//! Koszul sign bookkeeping.
//!
//! Every `±` in the engine is produced here. The convention: permuting two
//! graded elements of degrees `p` and `q` costs `(-1)^{pq}`, and signs over
//! the tensor coalgebra use degrees shifted by `-1` (the word grading drops
//! one per letter), which callers request through the `shift` parameter.

use crate::field::Field;
use thiserror::Error;

/// A sign, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn scalar<F: Field>(self, field: &F) -> F::Elem {
        match self {
            Sign::Plus => field.one(),
            Sign::Minus => field.neg(&field.one()),
        }
    }

    /// Multiply `a` by this sign.
    pub fn apply<F: Field>(self, field: &F, a: &F::Elem) -> F::Elem {
        match self {
            Sign::Plus => a.clone(),
            Sign::Minus => field.neg(a),
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignError {
    #[error("permutation has length {permutation} but {degrees} degrees were given")]
    LengthMismatch { permutation: usize, degrees: usize },
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
}

/// `(-1)^d` for an element of degree `d`.
pub fn parity_sign(degree: i64) -> Sign {
    Sign::from_parity(degree)
}

/// The Koszul sign of a rearrangement of graded elements.
///
/// `arrangement[t]` is the original index of the element standing at
/// position `t` after the permutation; `degrees[i]` is the degree of the
/// element that originally stood at position `i`. Each inverted pair
/// contributes `(-1)^{(d_i + shift)(d_j + shift)}`.
pub fn koszul_sign(arrangement: &[usize], degrees: &[i64], shift: i64) -> Result<Sign, SignError> {
    let n = degrees.len();
    if arrangement.len() != n {
        return Err(SignError::LengthMismatch {
            permutation: arrangement.len(),
            degrees: n,
        });
    }
    let mut seen = vec![false; n];
    for &i in arrangement {
        if i >= n || seen[i] {
            return Err(SignError::NotAPermutation(n));
        }
        seen[i] = true;
    }
    let mut parity = 0i64;
    for t in 0..n {
        for u in (t + 1)..n {
            if arrangement[t] > arrangement[u] {
                parity += (degrees[arrangement[t]] + shift) * (degrees[arrangement[u]] + shift);
            }
        }
    }
    Ok(Sign::from_parity(parity))
}
