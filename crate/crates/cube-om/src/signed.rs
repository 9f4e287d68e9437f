//! Signed subsets of `C^n`: the common currency of circuits and cocircuits.
//!
//! A [`SignedSet`] is an ordered pair of disjoint vertex sets. Circuits and
//! cocircuits always come in opposite pairs `{X, -X}`; the canonical
//! representative of a pair is the one whose minimum-index support element
//! lies in the positive part, which gives deterministic storage and
//! comparison.

use std::fmt;

use crate::cube::{Vertex, VertexSet};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedSet {
    positive: VertexSet,
    negative: VertexSet,
}

impl SignedSet {
    /// An empty support is permitted here; circuit and cocircuit
    /// constructors reject it.
    pub fn new(positive: VertexSet, negative: VertexSet) -> Result<SignedSet> {
        if !positive.is_disjoint(&negative) {
            return Err(Error::InvalidInput(
                "positive and negative parts overlap".into(),
            ));
        }
        Ok(SignedSet { positive, negative })
    }

    pub fn positive(&self) -> &VertexSet {
        &self.positive
    }

    pub fn negative(&self) -> &VertexSet {
        &self.negative
    }

    pub fn support(&self) -> VertexSet {
        self.positive.union(&self.negative)
    }

    pub fn dim(&self) -> usize {
        self.positive.dim()
    }

    pub fn negate(&self) -> SignedSet {
        SignedSet {
            positive: self.negative,
            negative: self.positive,
        }
    }

    /// `+1`, `-1`, or `0` when the vertex is outside the support.
    pub fn sign_of(&self, v: Vertex) -> i8 {
        if self.positive.contains(v) {
            1
        } else if self.negative.contains(v) {
            -1
        } else {
            0
        }
    }

    /// One side empty (the whole support carries a single sign).
    pub fn is_pure(&self) -> bool {
        self.positive.is_empty() || self.negative.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        match self.support().min_vertex() {
            None => true,
            Some(v) => self.positive.contains(v),
        }
    }

    /// The representative of the pair `{X, -X}` whose minimum support
    /// element is positive.
    pub fn canonical(&self) -> SignedSet {
        if self.is_canonical() {
            *self
        } else {
            self.negate()
        }
    }

    /// Swap the sign of every element of `set`; the support is unchanged.
    pub fn reorient(&self, set: &VertexSet) -> SignedSet {
        SignedSet {
            positive: self.positive.difference(set).union(&self.negative.intersection(set)),
            negative: self.negative.difference(set).union(&self.positive.intersection(set)),
        }
    }
}

impl fmt::Debug for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.positive, self.negative)
    }
}

/// The orthogonality condition between signed sets: the agreement set
/// `(X+ ∩ Y+) ∪ (X- ∩ Y-)` is nonempty exactly when the disagreement set
/// `(X+ ∩ Y-) ∪ (X- ∩ Y+)` is.
pub fn orthogonal(x: &SignedSet, y: &SignedSet) -> bool {
    let agree = !x.positive.is_disjoint(&y.positive) || !x.negative.is_disjoint(&y.negative);
    let disagree = !x.positive.is_disjoint(&y.negative) || !x.negative.is_disjoint(&y.positive);
    agree == disagree
}
