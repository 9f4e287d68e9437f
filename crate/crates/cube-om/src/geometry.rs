//! Subcubes of `C^n`: generation, recognition, descriptor recovery,
//! rectangle enumeration, the three-vertex plane classifier, and rectangle
//! elimination.
//!
//! A k-subcube is a subset of `2^k` vertices of affine rank `k + 1`;
//! equivalently the set generated from a base vertex by independently
//! reversing signs on k pairwise-disjoint coordinate blocks. The 2-subcubes
//! are rectangles, and they are exactly the rank-3 circuits of the cube
//! matroid.

use crate::cube::{check_dim, CoordSet, Vertex, VertexSet};
use crate::matroid::affine_rank;
use crate::{Error, Result};

/// A base vertex together with pairwise-disjoint nonempty coordinate blocks.
///
/// `C(v; I_1, .., I_k)` is the set of vertices obtained from `v` by
/// reversing signs on any union of the blocks. A subcube has `2^k * k!`
/// descriptor presentations; the canonical one takes the minimum vertex of
/// the generated set as base and sorts the blocks by minimum coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcubeDescriptor {
    n: usize,
    base: Vertex,
    blocks: Vec<CoordSet>,
}

impl SubcubeDescriptor {
    pub fn new(n: usize, base: Vertex, blocks: Vec<CoordSet>) -> Result<SubcubeDescriptor> {
        check_dim(n)?;
        if base.index() >= 1 << n {
            return Err(Error::InvalidDescriptor(format!(
                "base vertex {} outside C^{}",
                base.index(),
                n
            )));
        }
        let mut seen = CoordSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidDescriptor("empty block".into()));
            }
            if !b.is_subset(CoordSet::full(n)) {
                return Err(Error::InvalidDescriptor(format!(
                    "block {b:?} outside the coordinate range of C^{n}"
                )));
            }
            if !seen.is_disjoint(*b) {
                return Err(Error::InvalidDescriptor(format!("overlapping block {b:?}")));
            }
            seen = seen.union(*b);
        }
        Ok(SubcubeDescriptor { n, base, blocks })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn blocks(&self) -> &[CoordSet] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// The equivalent descriptor with minimum-vertex base and blocks sorted
    /// by minimum coordinate.
    pub fn canonical_form(&self) -> SubcubeDescriptor {
        let points = generate_subcube(self).expect("validated descriptor generates");
        let base = points.min_vertex().expect("subcube is nonempty");
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b.min_coord());
        SubcubeDescriptor {
            n: self.n,
            base,
            blocks,
        }
    }
}

/// The vertex set `{reverse(base, union of any subset of blocks)}`; always
/// exactly `2^k` vertices.
pub fn generate_subcube(d: &SubcubeDescriptor) -> Result<VertexSet> {
    // Revalidate: descriptors are cheap to check and errors here are
    // contract violations, not corruption.
    let d2 = SubcubeDescriptor::new(d.n, d.base, d.blocks.clone())?;
    let mut points = VertexSet::empty(d2.n);
    for choice in 0..1usize << d2.k() {
        let mut flip = CoordSet::EMPTY;
        for (b, block) in d2.blocks.iter().enumerate() {
            if choice >> b & 1 == 1 {
                flip = flip.union(*block);
            }
        }
        points.insert(d2.base.reverse(flip));
    }
    debug_assert_eq!(points.len(), 1 << d2.k());
    Ok(points)
}

/// `Some(k)` when the set is a k-subcube: `2^k` vertices of affine rank `k + 1`.
pub fn recognize_subcube(set: &VertexSet) -> Option<u32> {
    let size = set.len();
    if size == 0 || !size.is_power_of_two() {
        return None;
    }
    let k = size.trailing_zeros();
    let rank = affine_rank(set).expect("rank of cube data stays within i128");
    (rank == k as usize + 1).then_some(k)
}

/// Recovers the canonical descriptor of a subcube.
///
/// The reversal masks from the minimum vertex form a group under symmetric
/// difference whose inclusion-minimal nonzero elements are the blocks.
pub fn recover_descriptor(set: &VertexSet) -> Result<SubcubeDescriptor> {
    let Some(k) = recognize_subcube(set) else {
        return Err(Error::NotASubcube);
    };
    let base = set.min_vertex().expect("recognized subcube is nonempty");
    let masks: Vec<CoordSet> = set
        .iter()
        .filter(|&v| v != base)
        .map(|v| base.reversal_to(v))
        .collect();
    let mut blocks: Vec<CoordSet> = masks
        .iter()
        .copied()
        .filter(|m| !masks.iter().any(|o| *o != *m && !o.is_empty() && o.is_subset(*m)))
        .collect();
    blocks.sort_by_key(|b| b.min_coord());
    blocks.dedup();
    if blocks.len() != k as usize {
        return Err(Error::NotASubcube);
    }
    let descriptor = SubcubeDescriptor::new(set.dim(), base, blocks)?;
    if generate_subcube(&descriptor)? != *set {
        return Err(Error::NotASubcube);
    }
    Ok(descriptor)
}

/// A 2-subcube in canonical descriptor form: four vertices
/// `{v, rev_I(v), rev_IJ(v), rev_J(v)}` of affine rank 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    descriptor: SubcubeDescriptor,
}

impl Rectangle {
    pub fn new(descriptor: SubcubeDescriptor) -> Result<Rectangle> {
        if descriptor.k() != 2 {
            return Err(Error::InvalidDescriptor(format!(
                "rectangle needs exactly 2 blocks, got {}",
                descriptor.k()
            )));
        }
        Ok(Rectangle {
            descriptor: descriptor.canonical_form(),
        })
    }

    pub fn from_points(set: &VertexSet) -> Result<Rectangle> {
        Rectangle::new(recover_descriptor(set).map_err(|_| Error::NotASubcube)?)
    }

    pub fn dim(&self) -> usize {
        self.descriptor.dim()
    }

    pub fn base(&self) -> Vertex {
        self.descriptor.base()
    }

    pub fn blocks(&self) -> (CoordSet, CoordSet) {
        (self.descriptor.blocks[0], self.descriptor.blocks[1])
    }

    pub fn descriptor(&self) -> &SubcubeDescriptor {
        &self.descriptor
    }

    pub fn points(&self) -> VertexSet {
        generate_subcube(&self.descriptor).expect("canonical rectangle generates")
    }

    /// The four vertices in cyclic order: base, across the first block,
    /// across both, across the second.
    pub fn cycle(&self) -> [Vertex; 4] {
        let v = self.base();
        let (a, b) = self.blocks();
        [v, v.reverse(a), v.reverse(a.union(b)), v.reverse(b)]
    }
}

/// All rectangles of `C^n`, each exactly once, in canonical form, sorted.
///
/// The count is `2^n * U / 4` with `U = (3^n - 2^(n+1) + 1) / 2` unordered
/// disjoint nonempty block pairs.
pub fn enumerate_rectangles(n: usize) -> Result<Vec<Rectangle>> {
    check_dim(n)?;
    if n < 2 {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: 8 });
    }
    let full = CoordSet::full(n).bits();
    let mut out = Vec::new();
    for a_bits in 1..=full {
        let a = CoordSet::from_bits(a_bits);
        let comp = full & !a_bits;
        // Nonempty subsets of the complement of `a`.
        let mut b_bits = comp;
        while b_bits != 0 {
            let b = CoordSet::from_bits(b_bits);
            // Canonical block order: first block holds the smaller minimum.
            if a.min_coord() < b.min_coord() {
                // The base is the minimum of the generated set exactly when
                // flipping either block can only increase the index, i.e.
                // the base is positive on both top coordinates.
                let ta = a.max_coord().expect("nonempty");
                let tb = b.max_coord().expect("nonempty");
                for idx in 0..1usize << n {
                    let v = Vertex::from_index(idx);
                    if v.coord(ta) == 1 && v.coord(tb) == 1 {
                        out.push(Rectangle {
                            descriptor: SubcubeDescriptor {
                                n,
                                base: v,
                                blocks: vec![a, b],
                            },
                        });
                    }
                }
            }
            b_bits = (b_bits - 1) & comp;
        }
    }
    out.sort_by_key(|r| (r.base(), r.blocks()));
    Ok(out)
}

/// Number of rectangles of `C^n` in closed form.
pub fn rectangle_count(n: usize) -> usize {
    let u = (3usize.pow(n as u32) - (1 << (n + 1)) + 1) / 2;
    (1 << n) * u / 4
}

/// How the affine plane through three distinct vertices meets `C^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleClass {
    /// Reversal sets disjoint: the plane picks up `rev_{I∪J}(v)`.
    DisjointCompletion { fourth: Vertex },
    /// One reversal set inside the other: the plane picks up the
    /// difference reversal.
    NestedCompletion { fourth: Vertex },
    /// Properly crossing reversal sets: no fourth cube vertex.
    NoFourthPoint,
}

impl TripleClass {
    pub fn fourth(&self) -> Option<Vertex> {
        match *self {
            TripleClass::DisjointCompletion { fourth } => Some(fourth),
            TripleClass::NestedCompletion { fourth } => Some(fourth),
            TripleClass::NoFourthPoint => None,
        }
    }
}

/// Classifies the plane through `v, v1, v2` by the reversal sets
/// `I = rev(v, v1)` and `J = rev(v, v2)` alone.
pub fn classify_triple(v: Vertex, v1: Vertex, v2: Vertex) -> Result<TripleClass> {
    if v == v1 || v == v2 || v1 == v2 {
        return Err(Error::InvalidTriple);
    }
    let i = v.reversal_to(v1);
    let j = v.reversal_to(v2);
    Ok(if i.is_disjoint(j) {
        TripleClass::DisjointCompletion {
            fourth: v.reverse(i.union(j)),
        }
    } else if i.is_subset(j) {
        TripleClass::NestedCompletion {
            fourth: v.reverse(j.difference(i)),
        }
    } else if j.is_subset(i) {
        TripleClass::NestedCompletion {
            fourth: v.reverse(i.difference(j)),
        }
    } else {
        TripleClass::NoFourthPoint
    })
}

/// Modular-pair elimination: the unique rank-3 circuit inside
/// `(R1 ∪ R2) \ {pivot}` for the two admissible configurations.
///
/// Pattern 1: `C(v; I, J)` with `C(v; I, K)` eliminates to
/// `C(rev_J(v); I, J ∪ K)`. Pattern 2: `C(v; I∪J, K)` with `C(v; I, J∪K)`
/// eliminates to `C(rev_I(v); J, I ∪ K)`. Anything else is rejected;
/// general circuit elimination is out of scope.
pub fn eliminate_rectangles(r1: &Rectangle, r2: &Rectangle, pivot: Vertex) -> Result<Rectangle> {
    let n = r1.dim();
    if r2.dim() != n {
        return Err(Error::InvalidInput("rectangles from different cubes".into()));
    }
    if r1 == r2 || !r1.points().contains(pivot) || !r2.points().contains(pivot) {
        return Err(Error::NotAModularPair);
    }
    let (a1, b1) = r1.blocks();
    let (a2, b2) = r2.blocks();

    // Pattern 1: a shared block, the two remaining blocks disjoint.
    for (common, other1) in [(a1, b1), (b1, a1)] {
        for (c2, other2) in [(a2, b2), (b2, a2)] {
            if common == c2 && other1.is_disjoint(other2) {
                let base = pivot.reverse(other1);
                let d = SubcubeDescriptor::new(n, base, vec![common, other1.union(other2)])?;
                return Rectangle::new(d);
            }
        }
    }

    // Pattern 2: a block of one rectangle properly inside a block of the
    // other, with the leftovers matching up.
    let match_nested = |ra: &Rectangle, rb: &Rectangle| -> Option<(CoordSet, CoordSet, CoordSet)> {
        let (aa, ba) = ra.blocks();
        let (ab, bb) = rb.blocks();
        for (big_a, k) in [(aa, ba), (ba, aa)] {
            for (i, big_b) in [(ab, bb), (bb, ab)] {
                if i.is_subset(big_a) && i != big_a {
                    let j = big_a.difference(i);
                    if big_b == j.union(k) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    };
    if let Some((i, j, k)) = match_nested(r1, r2).or_else(|| match_nested(r2, r1)) {
        let base = pivot.reverse(i);
        let d = SubcubeDescriptor::new(n, base, vec![j, i.union(k)])?;
        let result = Rectangle::new(d)?;
        debug_assert!(result
            .points()
            .is_subset(&r1.points().union(&r2.points()).difference(&VertexSet::singleton(n, pivot))));
        return Ok(result);
    }
    Err(Error::NotAModularPair)
}
