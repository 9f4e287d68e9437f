//! Vertices of the n-cube, coordinate sets, and packed vertex sets.
//!
//! A vertex of `C^n = {-1,1}^n` is packed into an n-bit word: bit `i` set
//! means coordinate `i` equals `-1`. The all-plus vertex is index 0,
//! reversing a set of coordinates is a single XOR, and the word read as an
//! unsigned integer gives the canonical total order on vertices. A
//! [`VertexSet`] is a fixed 256-bit bitset indexed by vertex word, which is
//! what caps the engine at `n <= 8`.

use std::fmt;

use crate::{Error, Result};

/// Hard dimension cap: a [`VertexSet`] is a fixed 256-bit word.
pub const MAX_DIM: usize = 8;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_DIM,
        })
    }
}

/// One vertex of `C^n`, packed as an n-bit word (bit `i` set ⇔ coordinate
/// `i` equals `-1`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex(u8);

impl Vertex {
    pub fn from_index(index: usize) -> Vertex {
        debug_assert!(index < (1 << MAX_DIM));
        Vertex(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Coordinate `i` as an integer, `+1` or `-1`.
    pub fn coord(self, i: usize) -> i64 {
        if self.0 >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn coords(self, n: usize) -> Vec<i64> {
        (0..n).map(|i| self.coord(i)).collect()
    }

    pub fn from_coords(coords: &[i64]) -> Result<Vertex> {
        check_dim(coords.len())?;
        let mut bits = 0u8;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                1 => {}
                -1 => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "coordinate {i} is {c}, expected +1 or -1"
                    )))
                }
            }
        }
        Ok(Vertex(bits))
    }

    /// The vertex with the signs reversed on `set`.
    pub fn reverse(self, set: CoordSet) -> Vertex {
        Vertex(self.0 ^ set.0)
    }

    /// The integer vector equal to this vertex on `set` and zero elsewhere.
    ///
    /// Satisfies `reverse(v, set) = v - 2 * restrict(v, set)` coordinatewise.
    pub fn restrict(self, set: CoordSet, n: usize) -> Vec<i64> {
        (0..n)
            .map(|i| if set.contains(i) { self.coord(i) } else { 0 })
            .collect()
    }

    /// The coordinate set `I` with `other = reverse(self, I)`.
    pub fn reversal_to(self, other: Vertex) -> CoordSet {
        CoordSet(self.0 ^ other.0)
    }

    /// Sign-string form, e.g. `"++-"` for `(1, 1, -1)`.
    pub fn signs(self, n: usize) -> String {
        (0..n)
            .map(|i| if self.coord(i) == 1 { '+' } else { '-' })
            .collect()
    }

    /// Parses a sign string like `"+-+"`; returns the vertex and its dimension.
    pub fn from_signs(s: &str) -> Result<(Vertex, usize)> {
        let n = s.chars().count();
        check_dim(n)?;
        let mut bits = 0u8;
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => {}
                '-' => bits |= 1 << i,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "invalid sign character {c:?} in vertex {s:?}"
                    )))
                }
            }
        }
        Ok((Vertex(bits), n))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A subset of the coordinate axes `{0, .., n-1}`, packed as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoordSet(u8);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn full(n: usize) -> CoordSet {
        debug_assert!(n <= MAX_DIM);
        CoordSet(if n == 8 { u8::MAX } else { (1u8 << n) - 1 })
    }

    pub fn singleton(i: usize) -> CoordSet {
        debug_assert!(i < MAX_DIM);
        CoordSet(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> CoordSet {
        let mut s = CoordSet::EMPTY;
        for &i in indices {
            debug_assert!(i < MAX_DIM);
            s.0 |= 1 << i;
        }
        s
    }

    pub(crate) fn from_bits(bits: u8) -> CoordSet {
        CoordSet(bits)
    }

    pub(crate) fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn intersection(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 & other.0)
    }

    pub fn difference(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 & !other.0)
    }

    pub fn symmetric_difference(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 ^ other.0)
    }

    pub fn is_disjoint(self, other: CoordSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_coord(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn max_coord(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(7 - self.0.leading_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_DIM).filter(move |&i| self.contains(i))
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

const WORDS: usize = 4;

/// A subset of `C^n`, stored as a `2^n`-bit set (at most 256 bits).
///
/// Bit `k` of the set corresponds to the vertex with index `k`. All set
/// algebra is exact and allocation-free.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    n: u8,
    words: [u64; WORDS],
}

impl VertexSet {
    pub fn empty(n: usize) -> VertexSet {
        debug_assert!((1..=MAX_DIM).contains(&n));
        VertexSet {
            n: n as u8,
            words: [0; WORDS],
        }
    }

    pub fn full(n: usize) -> VertexSet {
        let mut s = VertexSet::empty(n);
        let size = s.capacity();
        for k in 0..size {
            s.words[k / 64] |= 1u64 << (k % 64);
        }
        s
    }

    pub fn singleton(n: usize, v: Vertex) -> VertexSet {
        let mut s = VertexSet::empty(n);
        s.insert(v);
        s
    }

    pub fn from_vertices<I: IntoIterator<Item = Vertex>>(n: usize, vertices: I) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    /// Number of vertices of the ambient cube, `2^n`.
    pub fn capacity(&self) -> usize {
        1 << self.n
    }

    pub fn insert(&mut self, v: Vertex) {
        debug_assert!(v.index() < self.capacity());
        self.words[v.index() / 64] |= 1u64 << (v.index() % 64);
    }

    pub fn remove(&mut self, v: Vertex) {
        self.words[v.index() / 64] &= !(1u64 << (v.index() % 64));
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.index() < self.capacity() && self.words[v.index() / 64] >> (v.index() % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn zip(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        debug_assert_eq!(self.n, other.n, "vertex sets from different cubes");
        let mut words = [0u64; WORDS];
        for k in 0..WORDS {
            words[k] = f(self.words[k], other.words[k]);
        }
        VertexSet { n: self.n, words }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &VertexSet) -> VertexSet {
        self.zip(other, |a, b| a ^ b)
    }

    /// Complement within `C^n`.
    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.dim()).difference(self)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn min_vertex(&self) -> Option<Vertex> {
        for k in 0..WORDS {
            if self.words[k] != 0 {
                return Some(Vertex::from_index(
                    k * 64 + self.words[k].trailing_zeros() as usize,
                ));
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.capacity())
            .map(Vertex::from_index)
            .filter(move |&v| self.contains(v))
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    fn byte_len(&self) -> usize {
        self.capacity().div_ceil(8)
    }

    /// Lowercase hex encoding, little-endian: byte `k` holds vertex indices
    /// `8k..8k+8`, bit `j` of byte `k` is vertex `8k + j`.
    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> = (0..self.byte_len())
            .map(|k| (self.words[k / 8] >> (8 * (k % 8))) as u8)
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(n: usize, s: &str) -> Result<VertexSet> {
        check_dim(n)?;
        let mut set = VertexSet::empty(n);
        let bytes = hex::decode(s)
            .map_err(|e| Error::MalformedFile(format!("bad bitset hex {s:?}: {e}")))?;
        if bytes.len() != set.byte_len() {
            return Err(Error::MalformedFile(format!(
                "bitset hex {:?} has {} bytes, expected {} for n={}",
                s,
                bytes.len(),
                set.byte_len(),
                n
            )));
        }
        for (k, &b) in bytes.iter().enumerate() {
            set.words[k / 8] |= (b as u64) << (8 * (k % 8));
        }
        if set.capacity() < 8 && set.words[0] >> set.capacity() != 0 {
            return Err(Error::MalformedFile(format!(
                "bitset hex {s:?} has bits beyond 2^{n}"
            )));
        }
        Ok(set)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_matches_definition() {
        let (v, _) = Vertex::from_signs("+++").unwrap();
        let flipped = v.reverse(CoordSet::from_indices(&[0, 2]));
        assert_eq!(flipped.coords(3), vec![-1, 1, -1]);

        let (v, _) = Vertex::from_signs("+-").unwrap();
        assert_eq!(v.reverse(CoordSet::EMPTY), v);
    }

    #[test]
    fn reverse_is_an_involution_and_bijection() {
        let n = 4;
        for mask in 0..(1u8 << n) {
            let set = CoordSet::from_bits(mask);
            let mut seen = VertexSet::empty(n);
            for idx in 0..(1 << n) {
                let v = Vertex::from_index(idx);
                assert_eq!(v.reverse(set).reverse(set), v);
                seen.insert(v.reverse(set));
            }
            assert_eq!(seen, VertexSet::full(n));
        }
    }

    #[test]
    fn restrict_matches_definition() {
        let (v, _) = Vertex::from_signs("+-+").unwrap();
        assert_eq!(v.restrict(CoordSet::singleton(1), 3), vec![0, -1, 0]);
        let (v, _) = Vertex::from_signs("++").unwrap();
        assert_eq!(v.restrict(CoordSet::full(2), 2), vec![1, 1]);
    }

    #[test]
    fn reverse_equals_vertex_minus_twice_restriction() {
        let n = 3;
        for idx in 0..(1 << n) {
            let v = Vertex::from_index(idx);
            for mask in 0..(1u8 << n) {
                let set = CoordSet::from_bits(mask);
                let lhs = v.reverse(set).coords(n);
                let restricted = v.restrict(set, n);
                let rhs: Vec<i64> = v
                    .coords(n)
                    .iter()
                    .zip(&restricted)
                    .map(|(&c, &r)| c - 2 * r)
                    .collect();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn vertex_signs_round_trip() {
        for idx in 0..(1 << 5) {
            let v = Vertex::from_index(idx);
            let s = v.signs(5);
            assert_eq!(Vertex::from_signs(&s).unwrap(), (v, 5));
        }
        assert!(Vertex::from_signs("+x-").is_err());
        assert!(Vertex::from_signs("").is_err());
    }

    #[test]
    fn vertex_from_coords_validates() {
        assert_eq!(
            Vertex::from_coords(&[1, -1, 1]).unwrap(),
            Vertex::from_signs("+-+").unwrap().0
        );
        assert!(Vertex::from_coords(&[1, 0]).is_err());
    }

    #[test]
    fn set_algebra_basics() {
        let n = 3;
        let a = VertexSet::from_vertices(n, [0, 1, 5].map(Vertex::from_index));
        let b = VertexSet::from_vertices(n, [1, 2].map(Vertex::from_index));
        assert_eq!(a.len(), 3);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b).vertices(), vec![Vertex::from_index(1)]);
        assert_eq!(a.complement().len(), 5);
        assert_eq!(a.min_vertex(), Some(Vertex::from_index(0)));
        assert!(a.intersection(&b).is_subset(&a));
        assert_eq!(
            a.symmetric_difference(&b),
            a.union(&b).difference(&a.intersection(&b))
        );
    }

    #[test]
    fn full_set_at_max_dim() {
        let s = VertexSet::full(8);
        assert_eq!(s.len(), 256);
        assert_eq!(s.complement().len(), 0);
    }

    #[test]
    fn hex_round_trip_and_golden_value() {
        let n = 3;
        // Facet x0 = +1: vertices with bit 0 clear, indices {0,2,4,6}.
        let s = VertexSet::from_vertices(n, [0, 2, 4, 6].map(Vertex::from_index));
        assert_eq!(s.to_hex(), "55");
        assert_eq!(VertexSet::from_hex(n, "55").unwrap(), s);

        let t = VertexSet::full(4);
        assert_eq!(t.to_hex(), "ffff");
        assert_eq!(VertexSet::from_hex(4, "ffff").unwrap(), t);

        assert!(VertexSet::from_hex(2, "ff").is_err()); // bits beyond 2^2
        assert!(VertexSet::from_hex(3, "0102").is_err()); // wrong length
        assert!(VertexSet::from_hex(3, "zz").is_err());
    }
}
