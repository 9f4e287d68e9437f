//! The matroid of affine dependencies of `C^n`: exact rank, closure,
//! exhaustive hyperplane enumeration, and the facet/skew-facet classifier.
//!
//! A matroid hyperplane is a rank-n flat; concretely a subset `H` of `C^n`
//! whose affine span is a hyperplane of real n-space with
//! `H = aff(H) ∩ C^n`. Every hyperplane is stored with a canonical
//! primitive integer normal, which doubles as the deduplication key during
//! enumeration and as the sort key of the catalog.

use std::io::{BufRead, Write};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{Vertex, VertexSet};
use crate::linalg::{self, Int, RowBasis};
use crate::{Error, Result};

/// Practical enumeration cap; above this the subset scan is out of reach.
pub const MAX_ENUM_DIM: usize = 7;

/// Difference vectors from the minimum vertex, halved to entries in
/// `{-1, 0, 1}` (halving never changes span or kernel).
fn half_diff(base: Vertex, other: Vertex, n: usize) -> Vec<Int> {
    (0..n)
        .map(|i| ((other.coord(i) - base.coord(i)) / 2) as Int)
        .collect()
}

fn difference_basis(set: &VertexSet) -> Result<Option<(Vertex, RowBasis)>> {
    let Some(base) = set.min_vertex() else {
        return Ok(None);
    };
    let n = set.dim();
    let mut basis = RowBasis::new(n);
    for v in set.iter() {
        if v != base {
            basis.insert(half_diff(base, v, n))?;
        }
    }
    Ok(Some((base, basis)))
}

/// Matroid rank of a vertex set: `dim(aff(S)) + 1`, or 0 for the empty set.
pub fn affine_rank(set: &VertexSet) -> Result<usize> {
    match difference_basis(set)? {
        None => Ok(0),
        Some((_, basis)) => Ok(basis.rank() + 1),
    }
}

/// Matroid closure: every vertex whose addition leaves the rank unchanged.
pub fn closure(set: &VertexSet) -> Result<VertexSet> {
    let Some((base, basis)) = difference_basis(set)? else {
        return Ok(*set);
    };
    let n = set.dim();
    let mut out = VertexSet::empty(n);
    for v in VertexSet::full(n).iter() {
        if basis.contains(half_diff(base, v, n))? {
            out.insert(v);
        }
    }
    Ok(out)
}

/// A matroid hyperplane of `C^n` with its defining equation `x · normal = offset`.
///
/// The normal is primitive (gcd of all normal entries and the offset is 1)
/// and its first nonzero entry is positive, so equal point sets always carry
/// identical equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub n: usize,
    pub normal: Vec<i64>,
    pub offset: i64,
    pub points: VertexSet,
}

impl Hyperplane {
    /// Exact evaluation of `v · normal - offset`.
    pub fn eval(&self, v: Vertex) -> i64 {
        (0..self.n).map(|i| v.coord(i) * self.normal[i]).sum::<i64>() - self.offset
    }
}

/// Classification of a hyperplane by its defining equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyperplaneKind {
    /// `x_i = side` with `side` in `{-1, +1}`.
    Facet { coord: usize, side: i8 },
    /// `x_i + sign * x_j = 0` with `i < j` and `sign` in `{-1, +1}`.
    SkewFacet { i: usize, j: usize, sign: i8 },
    Other,
}

/// The complete, sorted list of hyperplanes of `C^n`.
///
/// There are `2n` facets and `n(n-1)` skew facets (`n^2 + n` maximum-size
/// hyperplanes in total); everything else in the catalog has fewer than
/// `2^(n-1)` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneCatalog {
    pub n: usize,
    pub entries: Vec<Hyperplane>,
}

impl HyperplaneCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Catalog index of the facet hyperplane `x_coord = side`.
    pub fn facet_index(&self, coord: usize, side: i8) -> Option<usize> {
        self.entries.iter().position(
            |h| matches!(classify_hyperplane(h), HyperplaneKind::Facet { coord: c, side: s } if c == coord && s == side),
        )
    }

    pub fn position_of_points(&self, points: &VertexSet) -> Option<usize> {
        self.entries.iter().position(|h| h.points == *points)
    }

    /// Re-verifies every entry: canonical primitive normal, point set
    /// matching the equation, affine rank n, and strict sort order.
    pub fn self_check(&self) -> Result<()> {
        check_enum_dim(self.n)?;
        let mut prev: Option<(&Vec<i64>, i64)> = None;
        for (idx, h) in self.entries.iter().enumerate() {
            let fail = |msg: String| Err(Error::CorruptCatalog(format!("entry {idx}: {msg}")));
            if h.n != self.n {
                return fail(format!("dimension {} != {}", h.n, self.n));
            }
            if h.normal.len() != self.n {
                return fail("normal length mismatch".into());
            }
            let mut g: i64 = h.offset.abs();
            for &c in &h.normal {
                g = gcd_i64(g, c);
            }
            if g != 1 {
                return fail(format!("normal/offset not primitive (content {g})"));
            }
            match h.normal.iter().find(|&&c| c != 0) {
                None => return fail("zero normal".into()),
                Some(&first) if first < 0 => return fail("first nonzero normal entry negative".into()),
                _ => {}
            }
            let expected = points_of_equation(self.n, &h.normal, h.offset);
            if expected != h.points {
                return fail("points do not match the equation".into());
            }
            if affine_rank(&h.points)? != self.n {
                return fail(format!("rank {} != {}", affine_rank(&h.points)?, self.n));
            }
            if let Some((pn, po)) = prev {
                if (pn, po) >= (&h.normal, h.offset) {
                    return fail("entries not strictly sorted by (normal, offset)".into());
                }
            }
            prev = Some((&h.normal, h.offset));
        }
        Ok(())
    }
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_enum_dim(n: usize) -> Result<()> {
    if (2..=MAX_ENUM_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange {
            n,
            min: 2,
            max: MAX_ENUM_DIM,
        })
    }
}

fn points_of_equation(n: usize, normal: &[i64], offset: i64) -> VertexSet {
    let mut points = VertexSet::empty(n);
    for idx in 0..1usize << n {
        let v = Vertex::from_index(idx);
        let dot: i64 = (0..n).map(|i| v.coord(i) * normal[i]).sum();
        if dot == offset {
            points.insert(v);
        }
    }
    points
}

/// Divide by the content and make the first nonzero normal entry positive.
fn canonicalize_equation(normal: &mut [i64], offset: &mut i64) {
    let mut g: i64 = offset.abs();
    for &c in normal.iter() {
        g = gcd_i64(g, c);
    }
    if g > 1 {
        for c in normal.iter_mut() {
            *c /= g;
        }
        *offset /= g;
    }
    if let Some(&first) = normal.iter().find(|&&c| c != 0) {
        if first < 0 {
            for c in normal.iter_mut() {
                *c = -*c;
            }
            *offset = -*offset;
        }
    }
}

/// The facet hyperplane `x_coord = side`.
pub fn make_facet(n: usize, coord: usize, side: i8) -> Result<Hyperplane> {
    check_enum_dim(n)?;
    if coord >= n || !(side == 1 || side == -1) {
        return Err(Error::InvalidInput(format!(
            "facet parameters coord={coord}, side={side} out of range for n={n}"
        )));
    }
    let mut normal = vec![0i64; n];
    normal[coord] = 1;
    let offset = side as i64;
    Ok(Hyperplane {
        n,
        points: points_of_equation(n, &normal, offset),
        normal,
        offset,
    })
}

/// The skew-facet hyperplane `x_i + sign * x_j = 0` with `i < j`.
pub fn make_skew_facet(n: usize, i: usize, j: usize, sign: i8) -> Result<Hyperplane> {
    check_enum_dim(n)?;
    if i >= j || j >= n || !(sign == 1 || sign == -1) {
        return Err(Error::InvalidInput(format!(
            "skew-facet parameters i={i}, j={j}, sign={sign} out of range for n={n}"
        )));
    }
    let mut normal = vec![0i64; n];
    normal[i] = 1;
    normal[j] = sign as i64;
    Ok(Hyperplane {
        n,
        points: points_of_equation(n, &normal, 0),
        normal,
        offset: 0,
    })
}

/// Matches the canonical equation against the two maximum-size closed forms.
pub fn classify_hyperplane(h: &Hyperplane) -> HyperplaneKind {
    let nonzero: Vec<usize> = (0..h.n).filter(|&i| h.normal[i] != 0).collect();
    match nonzero.as_slice() {
        [i] if h.normal[*i] == 1 && (h.offset == 1 || h.offset == -1) => HyperplaneKind::Facet {
            coord: *i,
            side: h.offset as i8,
        },
        [i, j]
            if h.normal[*i] == 1 && h.normal[*j].abs() == 1 && h.offset == 0 =>
        {
            HyperplaneKind::SkewFacet {
                i: *i,
                j: *j,
                sign: h.normal[*j] as i8,
            }
        }
        _ => HyperplaneKind::Other,
    }
}

/// Scans all n-subsets `{v} ∪ S` with `S` above the candidate minimum vertex
/// `v`, keeping hyperplanes whose point set has minimum exactly `v`.
fn scan_min_vertex(n: usize, v_idx: usize) -> Result<Vec<Hyperplane>> {
    let v = Vertex::from_index(v_idx);
    let total = 1usize << n;
    let mut found: Vec<Hyperplane> = Vec::new();
    for combo in (v_idx + 1..total).combinations(n - 1) {
        let rows: Vec<Vec<Int>> = combo
            .iter()
            .map(|&w| half_diff(v, Vertex::from_index(w), n))
            .collect();
        // Degenerate subsets (dependent differences) span no hyperplane.
        let Some(kernel) = linalg::right_kernel_unique(&rows)? else {
            continue;
        };
        let mut normal: Vec<i64> = kernel
            .iter()
            .map(|&c| i64::try_from(c).map_err(|_| Error::Overflow))
            .collect::<Result<_>>()?;
        let mut offset: i64 = (0..n).map(|i| v.coord(i) * normal[i]).sum();
        canonicalize_equation(&mut normal, &mut offset);
        let points = points_of_equation(n, &normal, offset);
        if points.min_vertex() != Some(v) {
            continue;
        }
        if !found.iter().any(|h| h.normal == normal && h.offset == offset) {
            found.push(Hyperplane {
                n,
                normal,
                offset,
                points,
            });
        }
    }
    Ok(found)
}

/// Complete hyperplane catalog of `C^n`, deterministic and sorted.
///
/// When a previously loaded catalog is supplied it is re-verified and
/// returned as-is; a catalog for the wrong dimension is rejected.
pub fn enumerate_hyperplanes(
    n: usize,
    cache: Option<HyperplaneCatalog>,
) -> Result<HyperplaneCatalog> {
    check_enum_dim(n)?;
    if let Some(catalog) = cache {
        if catalog.n != n {
            return Err(Error::CacheMismatch(format!(
                "catalog is for n={}, requested n={}",
                catalog.n, n
            )));
        }
        catalog.self_check()?;
        return Ok(catalog);
    }
    let total = 1usize << n;
    let per_vertex: Vec<Vec<Hyperplane>> = (0..total - (n - 1))
        .into_par_iter()
        .map(|v_idx| scan_min_vertex(n, v_idx))
        .collect::<Result<_>>()?;
    let mut entries: Vec<Hyperplane> = per_vertex.into_iter().flatten().collect();
    entries.sort_by(|a, b| (&a.normal, a.offset).cmp(&(&b.normal, b.offset)));
    Ok(HyperplaneCatalog { n, entries })
}

/// Cocircuit supports: the set complement of each hyperplane, in catalog order.
pub fn cocircuit_supports(catalog: &HyperplaneCatalog) -> Vec<VertexSet> {
    catalog.entries.iter().map(|h| h.points.complement()).collect()
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    version: u32,
    n: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    n: usize,
    h: Vec<i64>,
    b: i64,
    points: String,
}

/// Writes the catalog as line-delimited JSON: a header line
/// `{version, n, count}` followed by one `{n, h, b, points}` record per
/// hyperplane, points as a little-endian lowercase hex bitset. Byte-exact
/// across platforms.
pub fn write_catalog<W: Write>(catalog: &HyperplaneCatalog, mut w: W) -> Result<()> {
    let header = CacheHeader {
        version: 1,
        n: catalog.n,
        count: catalog.entries.len(),
    };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for h in &catalog.entries {
        let record = CacheRecord {
            n: h.n,
            h: h.normal.clone(),
            b: h.offset,
            points: h.points.to_hex(),
        };
        writeln!(w, "{}", serde_json::to_string(&record).expect("record serializes"))?;
    }
    Ok(())
}

/// Reads and fully re-verifies a catalog cache.
pub fn read_catalog<R: BufRead>(r: R) -> Result<HyperplaneCatalog> {
    let mut lines = r.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty catalog file".into()))??;
    let header: CacheHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::MalformedFile(format!("bad catalog header: {e}")))?;
    if header.version != 1 {
        return Err(Error::CacheMismatch(format!(
            "unsupported catalog version {}",
            header.version
        )));
    }
    check_enum_dim(header.n)?;
    let mut entries = Vec::with_capacity(header.count);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CacheRecord = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedFile(format!("bad catalog record: {e}")))?;
        if record.n != header.n {
            return Err(Error::CacheMismatch(format!(
                "record for n={} in a catalog for n={}",
                record.n, header.n
            )));
        }
        entries.push(Hyperplane {
            n: record.n,
            points: VertexSet::from_hex(record.n, &record.points)?,
            normal: record.h,
            offset: record.b,
        });
    }
    if entries.len() != header.count {
        return Err(Error::MalformedFile(format!(
            "catalog has {} records, header says {}",
            entries.len(),
            header.count
        )));
    }
    let catalog = HyperplaneCatalog {
        n: header.n,
        entries,
    };
    catalog.self_check()?;
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;

    fn vs(n: usize, indices: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, indices.iter().map(|&i| Vertex::from_index(i)))
    }

    #[test]
    fn rank_of_basic_sets() {
        assert_eq!(affine_rank(&VertexSet::empty(3)).unwrap(), 0);
        assert_eq!(affine_rank(&vs(3, &[5])).unwrap(), 1);
        assert_eq!(affine_rank(&VertexSet::full(3)).unwrap(), 4);
        assert_eq!(affine_rank(&VertexSet::full(5)).unwrap(), 6);
        // Any rectangle has rank 3.
        let rect = vs(3, &[0, 1, 6, 7]);
        assert_eq!(affine_rank(&rect).unwrap(), 3);
    }

    #[test]
    fn no_three_vertices_are_collinear() {
        // closure of any pair is the pair itself, exhaustively for n <= 4.
        for n in 1..=4 {
            let total = 1usize << n;
            for a in 0..total {
                for b in a + 1..total {
                    let pair = vs(n, &[a, b]);
                    assert_eq!(closure(&pair).unwrap(), pair);
                }
            }
        }
    }

    #[test]
    fn closure_completes_a_rectangle_corner() {
        // Disjoint reversal sets: the plane through the triple picks up the
        // fourth rectangle vertex.
        let triple = vs(3, &[0, 1, 2]);
        assert_eq!(closure(&triple).unwrap(), vs(3, &[0, 1, 2, 3]));
    }

    #[test]
    fn closure_is_idempotent_on_random_sets() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let mut s = VertexSet::empty(4);
            for idx in 0..16 {
                if rng.gen_bool(0.4) {
                    s.insert(Vertex::from_index(idx));
                }
            }
            if s.is_empty() {
                continue;
            }
            let c = closure(&s).unwrap();
            assert_eq!(closure(&c).unwrap(), c);
            assert!(s.is_subset(&c));
        }
    }

    #[test]
    fn rank_jumps_above_half_cube() {
        // Any set with more than 2^(n-1) vertices spans all of n-space:
        // exhaustive at n = 3.
        let n = 3;
        for mask in 0..256u32 {
            if mask.count_ones() as usize >= (1 << (n - 1)) + 1 {
                let s = VertexSet::from_vertices(
                    n,
                    (0..8).filter(|&i| mask >> i & 1 == 1).map(Vertex::from_index),
                );
                assert_eq!(affine_rank(&s).unwrap(), n + 1);
            }
        }
    }

    #[test]
    fn rank_jumps_above_half_cube_sampled() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [4usize, 5] {
            let total = 1usize << n;
            let need = (1 << (n - 1)) + 1;
            for _ in 0..10_000 {
                let extra = rng.gen_range(0..=(total - need));
                let mut indices: Vec<usize> = (0..total).collect();
                indices.shuffle(&mut rng);
                let s = VertexSet::from_vertices(
                    n,
                    indices[..need + extra].iter().map(|&i| Vertex::from_index(i)),
                );
                assert_eq!(affine_rank(&s).unwrap(), n + 1);
            }
        }
    }

    #[test]
    fn facet_and_skew_facet_closed_forms() {
        let f = make_facet(2, 0, 1).unwrap();
        assert_eq!(f.points, vs(2, &[0, 2])); // (1,1) and (1,-1)
        let sk = make_skew_facet(3, 0, 1, -1).unwrap();
        // x0 = x1: vertices with equal first two coordinates.
        assert_eq!(sk.points, vs(3, &[0, 3, 4, 7]));
        for n in 2..=6 {
            for coord in 0..n {
                for side in [-1, 1] {
                    assert_eq!(make_facet(n, coord, side).unwrap().points.len(), 1 << (n - 1));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for sign in [-1, 1] {
                        assert_eq!(
                            make_skew_facet(n, i, j, sign).unwrap().points.len(),
                            1 << (n - 1)
                        );
                    }
                }
            }
        }
        assert!(make_facet(3, 3, 1).is_err());
        assert!(make_skew_facet(3, 1, 1, 1).is_err());
        assert!(make_skew_facet(3, 0, 1, 2).is_err());
    }

    #[test]
    fn classifier_round_trips_and_rejects_triangles() {
        for n in 2..=5 {
            for coord in 0..n {
                for side in [-1i8, 1] {
                    let h = make_facet(n, coord, side).unwrap();
                    assert_eq!(classify_hyperplane(&h), HyperplaneKind::Facet { coord, side });
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for sign in [-1i8, 1] {
                        let h = make_skew_facet(n, i, j, sign).unwrap();
                        assert_eq!(
                            classify_hyperplane(&h),
                            HyperplaneKind::SkewFacet { i, j, sign }
                        );
                    }
                }
            }
        }
        // Corner triangle of C^3: normal (1,1,1), offset 1, three points.
        let catalog = enumerate_hyperplanes(3, None).unwrap();
        let tri = catalog
            .entries
            .iter()
            .find(|h| h.normal == vec![1, 1, 1] && h.offset == 1)
            .expect("corner triangle present");
        assert_eq!(tri.points.len(), 3);
        assert_eq!(classify_hyperplane(tri), HyperplaneKind::Other);
    }

    #[test]
    fn small_catalogs_match_known_counts() {
        let c2 = enumerate_hyperplanes(2, None).unwrap();
        assert_eq!(c2.len(), 6);
        assert!(c2.entries.iter().all(|h| h.points.len() == 2));

        let c3 = enumerate_hyperplanes(3, None).unwrap();
        assert_eq!(c3.len(), 20);
        let sizes: Vec<usize> = c3.entries.iter().map(|h| h.points.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 12);
        assert_eq!(sizes.iter().filter(|&&s| s == 3).count(), 8);
    }

    #[test]
    fn catalog_agrees_with_flat_scan() {
        // Second, independent method: a hyperplane is a rank-n flat, so scan
        // every subset of C^n for closed rank-n sets.
        for n in 2..=3 {
            let total = 1usize << n;
            let mut flats: Vec<VertexSet> = Vec::new();
            for mask in 1u32..(1 << total) {
                let s = VertexSet::from_vertices(
                    n,
                    (0..total).filter(|&i| mask >> i & 1 == 1).map(Vertex::from_index),
                );
                if affine_rank(&s).unwrap() == n && closure(&s).unwrap() == s {
                    flats.push(s);
                }
            }
            let catalog = enumerate_hyperplanes(n, None).unwrap();
            let mut expected: Vec<VertexSet> =
                catalog.entries.iter().map(|h| h.points).collect();
            flats.sort();
            expected.sort();
            assert_eq!(flats, expected);
        }
    }

    #[test]
    fn every_facet_and_skew_facet_is_in_the_catalog() {
        for n in 2..=4 {
            let catalog = enumerate_hyperplanes(n, None).unwrap();
            for coord in 0..n {
                for side in [-1, 1] {
                    let h = make_facet(n, coord, side).unwrap();
                    assert!(catalog.position_of_points(&h.points).is_some());
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for sign in [-1, 1] {
                        let h = make_skew_facet(n, i, j, sign).unwrap();
                        assert!(catalog.position_of_points(&h.points).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn hyperplane_point_sets_are_flats() {
        for n in 2..=4 {
            let catalog = enumerate_hyperplanes(n, None).unwrap();
            for h in &catalog.entries {
                assert_eq!(closure(&h.points).unwrap(), h.points);
            }
        }
    }

    #[test]
    fn catalog_spans_every_random_hyperplane_closure() {
        // Spot agreement at n = 4: the closure of any independent 4-subset
        // is a hyperplane point set and must already be catalogued.
        use rand::prelude::*;
        let n = 4;
        let catalog = enumerate_hyperplanes(n, None).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut hits = 0;
        while hits < 500 {
            let mut indices: Vec<usize> = (0..16).collect();
            indices.shuffle(&mut rng);
            let s = VertexSet::from_vertices(n, indices[..4].iter().map(|&i| Vertex::from_index(i)));
            if affine_rank(&s).unwrap() != n {
                continue;
            }
            hits += 1;
            let flat = closure(&s).unwrap();
            assert!(catalog.position_of_points(&flat).is_some());
        }
    }

    #[test]
    fn cocircuit_supports_complement_the_catalog() {
        let catalog = enumerate_hyperplanes(3, None).unwrap();
        let supports = cocircuit_supports(&catalog);
        assert_eq!(supports.len(), 20);
        let mut sizes: Vec<usize> = supports.iter().map(|s| s.len()).collect();
        sizes.sort();
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 12);
        assert_eq!(sizes.iter().filter(|&&s| s == 5).count(), 8);
        for (h, s) in catalog.entries.iter().zip(&supports) {
            assert!(h.points.is_disjoint(s));
            assert_eq!(h.points.union(s), VertexSet::full(3));
        }

        let c2 = enumerate_hyperplanes(2, None).unwrap();
        assert!(cocircuit_supports(&c2).iter().all(|s| s.len() == 2));
    }

    #[test]
    fn cache_round_trip_and_rejection() {
        let catalog = enumerate_hyperplanes(3, None).unwrap();
        let mut buf = Vec::new();
        write_catalog(&catalog, &mut buf).unwrap();
        let reread = read_catalog(buf.as_slice()).unwrap();
        assert_eq!(reread, catalog);

        // Cache for another dimension is rejected up front.
        assert!(matches!(
            enumerate_hyperplanes(4, Some(reread)),
            Err(Error::CacheMismatch(_))
        ));

        // A tampered point set fails the self-check.
        let text = String::from_utf8(buf.clone()).unwrap();
        let tampered = text.replacen("\"points\":\"0f\"", "\"points\":\"1f\"", 1);
        if tampered != text {
            assert!(read_catalog(tampered.as_bytes()).is_err());
        }

        // A wrong header count is rejected.
        let bad_count = text.replacen("\"count\":20", "\"count\":19", 1);
        assert!(read_catalog(bad_count.as_bytes()).is_err());

        // Garbage is rejected.
        assert!(read_catalog("not json".as_bytes()).is_err());
    }

    #[test]
    fn enumeration_respects_the_cap() {
        assert!(matches!(
            enumerate_hyperplanes(1, None),
            Err(Error::DimensionOutOfRange { .. })
        ));
        assert!(matches!(
            enumerate_hyperplanes(8, None),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }

    #[test]
    fn rank_agrees_with_rational_reference() {
        use num::rational::BigRational;
        use num::{BigInt, Zero};
        use rand::prelude::*;

        // Plain Gauss-Jordan over arbitrary-precision rationals.
        fn rational_rank(rows: Vec<Vec<BigRational>>) -> usize {
            let mut rows = rows;
            let mut rank = 0;
            let cols = rows.first().map_or(0, |r| r.len());
            for col in 0..cols {
                let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                    continue;
                };
                rows.swap(rank, pivot);
                let p = rows[rank][col].clone();
                for r in 0..rows.len() {
                    if r != rank && !rows[r][col].is_zero() {
                        let f = rows[r][col].clone() / p.clone();
                        for c in 0..cols {
                            let sub = f.clone() * rows[rank][c].clone();
                            rows[r][c] -= sub;
                        }
                    }
                }
                rank += 1;
            }
            rank
        }

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=5usize);
            let total = 1usize << n;
            let size = rng.gen_range(1..=total.min(10));
            let mut s = VertexSet::empty(n);
            while s.len() < size {
                s.insert(Vertex::from_index(rng.gen_range(0..total)));
            }
            let verts = s.vertices();
            let base = verts[0];
            let rows: Vec<Vec<BigRational>> = verts[1..]
                .iter()
                .map(|v| {
                    (0..n)
                        .map(|i| BigRational::from(BigInt::from(v.coord(i) - base.coord(i))))
                        .collect()
                })
                .collect();
            assert_eq!(affine_rank(&s).unwrap(), rational_rank(rows) + 1);
        }
    }

    #[test]
    fn geometry_rectangles_all_have_rank_three() {
        for rect in geometry::enumerate_rectangles(3).unwrap() {
            assert_eq!(affine_rank(&rect.points()).unwrap(), 3);
        }
    }
}
