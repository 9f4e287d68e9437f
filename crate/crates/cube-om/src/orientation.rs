//! The affine orientation of the cube matroid and its signed data.
//!
//! Cocircuits are signed by which side of a hyperplane each complement
//! vertex lies on; circuits are signed by their Radon partition, i.e. the
//! signs of the unique affine dependency. An [`Orientation`] is a total
//! assignment of a canonical signed set to every cocircuit support, in
//! catalog order — that is the presentation all downstream procedures
//! consume, and the one the orientation file format encodes.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cube::VertexSet;
use crate::geometry::{enumerate_rectangles, Rectangle};
use crate::linalg::{self, Int};
use crate::matroid::{make_facet, Hyperplane, HyperplaneCatalog};
use crate::signed::SignedSet;
use crate::{Error, Result};

/// A total cocircuit signature map for `M(C^n)`, one canonical signed set
/// per catalog hyperplane, in catalog order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub n: usize,
    pub cocircuits: Vec<SignedSet>,
}

impl Orientation {
    /// Swap the sign of every element of `set` in every cocircuit.
    pub fn reorient(&self, set: &VertexSet) -> Orientation {
        Orientation {
            n: self.n,
            cocircuits: self
                .cocircuits
                .iter()
                .map(|c| c.reorient(set).canonical())
                .collect(),
        }
    }
}

/// Signs the complement of a hyperplane by the exact sign of
/// `v · normal - offset`; returns the canonical representative.
pub fn aff_cocircuit(h: &Hyperplane) -> SignedSet {
    let mut positive = VertexSet::empty(h.n);
    let mut negative = VertexSet::empty(h.n);
    for v in h.points.complement().iter() {
        let value = h.eval(v);
        debug_assert_ne!(value, 0, "complement vertex on the hyperplane");
        if value > 0 {
            positive.insert(v);
        } else {
            negative.insert(v);
        }
    }
    SignedSet::new(positive, negative)
        .expect("sides of a hyperplane are disjoint")
        .canonical()
}

/// The affine orientation: every catalog cocircuit signed by hyperplane side.
pub fn aff_orientation(catalog: &HyperplaneCatalog) -> Orientation {
    Orientation {
        n: catalog.n,
        cocircuits: catalog.entries.iter().map(aff_cocircuit).collect(),
    }
}

/// A rectangle with its affine circuit signature: signs alternate around
/// the rectangle cycle, so the two diagonal pairs carry opposite signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRectangle {
    pub rect: Rectangle,
    pub signs: SignedSet,
}

/// The closed-form signature `({v, rev_IJ(v)}, {rev_I(v), rev_J(v)})`.
pub fn signed_rectangle(rect: &Rectangle) -> SignedRectangle {
    let n = rect.dim();
    let [v, vi, vij, vj] = rect.cycle();
    let signs = SignedSet::new(
        VertexSet::from_vertices(n, [v, vij]),
        VertexSet::from_vertices(n, [vi, vj]),
    )
    .expect("diagonal pairs are disjoint")
    .canonical();
    SignedRectangle {
        rect: rect.clone(),
        signs,
    }
}

/// The Radon partition of a circuit: signs of the unique (up to scale)
/// affine dependency, computed exactly.
pub fn radon_signature(circuit: &VertexSet) -> Result<SignedSet> {
    let n = circuit.dim();
    let verts = circuit.vertices();
    let rows: Vec<Vec<Int>> = verts
        .iter()
        .map(|v| {
            let mut row: Vec<Int> = (0..n).map(|i| v.coord(i) as Int).collect();
            row.push(1);
            row
        })
        .collect();
    let kernels = linalg::left_kernel(&rows)?;
    if kernels.len() != 1 {
        return Err(Error::NotACircuit(format!(
            "{} vertices with dependency space of dimension {}",
            verts.len(),
            kernels.len()
        )));
    }
    let lambda = &kernels[0];
    if lambda.iter().any(|&c| c == 0) {
        return Err(Error::NotACircuit(
            "dependency vanishes on some vertex (set is not minimal)".into(),
        ));
    }
    let mut positive = VertexSet::empty(n);
    let mut negative = VertexSet::empty(n);
    for (v, &c) in verts.iter().zip(lambda) {
        if c > 0 {
            positive.insert(*v);
        } else {
            negative.insert(*v);
        }
    }
    Ok(SignedSet::new(positive, negative)
        .expect("signs partition the circuit")
        .canonical())
}

/// The 2n facet cocircuits as pure signed sets (canonical representatives),
/// ordered by (coordinate, side).
pub fn family_f(catalog: &HyperplaneCatalog) -> Result<Vec<SignedSet>> {
    let n = catalog.n;
    let mut out = Vec::with_capacity(2 * n);
    for coord in 0..n {
        for side in [1i8, -1] {
            // The facet x_coord = side is the support: it is the cocircuit
            // complementary to the opposite facet hyperplane.
            let support = make_facet(n, coord, side)?.points;
            if catalog.position_of_points(&make_facet(n, coord, -side)?.points).is_none() {
                return Err(Error::InconsistentCatalog);
            }
            out.push(SignedSet::new(support, VertexSet::empty(n)).expect("pure set"));
        }
    }
    Ok(out)
}

/// One signed rectangle per rectangle of `C^n`, in enumeration order.
pub fn family_r(n: usize) -> Result<Vec<SignedRectangle>> {
    Ok(enumerate_rectangles(n)?
        .iter()
        .map(signed_rectangle)
        .collect())
}

/// Acyclicity via the positive-cocircuit cover: every vertex must lie in
/// the support of some pure-positive cocircuit.
pub fn is_acyclic(o: &Orientation) -> bool {
    let mut covered = VertexSet::empty(o.n);
    for c in &o.cocircuits {
        if c.negative().is_empty() && !c.positive().is_empty() {
            covered = covered.union(c.positive());
        }
    }
    covered == VertexSet::full(o.n)
}

#[derive(Serialize, Deserialize)]
struct OrientationHeader {
    version: u32,
    n: usize,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct OrientationRecord {
    index: usize,
    positive: String,
    negative: String,
}

/// Writes an orientation as line-delimited JSON: a `{version, n, count}`
/// header naming the catalog it refers to (by dimension and entry count),
/// then one `{index, positive, negative}` record per cocircuit.
pub fn write_orientation<W: Write>(o: &Orientation, mut w: W) -> Result<()> {
    let header = OrientationHeader {
        version: 1,
        n: o.n,
        count: o.cocircuits.len(),
    };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for (index, c) in o.cocircuits.iter().enumerate() {
        let record = OrientationRecord {
            index,
            positive: c.positive().to_hex(),
            negative: c.negative().to_hex(),
        };
        writeln!(w, "{}", serde_json::to_string(&record).expect("record serializes"))?;
    }
    Ok(())
}

/// Reads an orientation and validates it against the catalog: matching
/// dimension and count, records in index order, disjoint signs, and each
/// support equal to the complement of its catalog hyperplane.
pub fn read_orientation<R: BufRead>(r: R, catalog: &HyperplaneCatalog) -> Result<Orientation> {
    let mut lines = r.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::MalformedFile("empty orientation file".into()))??;
    let header: OrientationHeader = serde_json::from_str(&header_line)
        .map_err(|e| Error::MalformedFile(format!("bad orientation header: {e}")))?;
    if header.version != 1 {
        return Err(Error::MalformedFile(format!(
            "unsupported orientation version {}",
            header.version
        )));
    }
    if header.n != catalog.n || header.count != catalog.len() {
        return Err(Error::CacheMismatch(format!(
            "orientation refers to a catalog with n={}, count={}; loaded catalog has n={}, count={}",
            header.n,
            header.count,
            catalog.n,
            catalog.len()
        )));
    }
    let mut cocircuits = Vec::with_capacity(header.count);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: OrientationRecord = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedFile(format!("bad orientation record: {e}")))?;
        if record.index != cocircuits.len() {
            return Err(Error::MalformedFile(format!(
                "record index {} out of order (expected {})",
                record.index,
                cocircuits.len()
            )));
        }
        let positive = VertexSet::from_hex(header.n, &record.positive)?;
        let negative = VertexSet::from_hex(header.n, &record.negative)?;
        let signed = SignedSet::new(positive, negative).map_err(|_| {
            Error::MalformedFile(format!(
                "record {}: positive and negative parts overlap",
                record.index
            ))
        })?;
        let expected = catalog.entries[record.index].points.complement();
        if signed.support() != expected {
            return Err(Error::MalformedFile(format!(
                "record {}: support does not match the catalog cocircuit",
                record.index
            )));
        }
        cocircuits.push(signed.canonical());
    }
    if cocircuits.len() != header.count {
        return Err(Error::MalformedFile(format!(
            "orientation has {} records, header says {}",
            cocircuits.len(),
            header.count
        )));
    }
    Ok(Orientation {
        n: header.n,
        cocircuits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{CoordSet, Vertex};
    use crate::geometry::SubcubeDescriptor;
    use crate::matroid::{affine_rank, enumerate_hyperplanes, make_skew_facet};

    fn vtx(s: &str) -> Vertex {
        Vertex::from_signs(s).unwrap().0
    }

    fn catalog(n: usize) -> HyperplaneCatalog {
        enumerate_hyperplanes(n, None).unwrap()
    }

    #[test]
    fn facet_cocircuits_are_pure() {
        for n in 2..=4 {
            for coord in 0..n {
                for side in [-1, 1] {
                    let h = make_facet(n, coord, side).unwrap();
                    let c = aff_cocircuit(&h);
                    assert!(c.is_pure());
                    assert!(c.negative().is_empty());
                    assert_eq!(c.support(), make_facet(n, coord, -side).unwrap().points);
                }
            }
        }
    }

    #[test]
    fn skew_cocircuit_splits_evenly() {
        // x0 - x1 = 0 on C^2: complement {(-1,1), (1,-1)} splits one and one.
        let h = make_skew_facet(2, 0, 1, -1).unwrap();
        let c = aff_cocircuit(&h);
        assert_eq!(c.positive().vertices(), vec![vtx("-+")]);
        assert_eq!(c.negative().vertices(), vec![vtx("+-")]);
    }

    #[test]
    fn aff_orientation_pure_counts() {
        let o2 = aff_orientation(&catalog(2));
        assert_eq!(o2.cocircuits.len(), 6);
        assert_eq!(o2.cocircuits.iter().filter(|c| c.is_pure()).count(), 4);

        let o3 = aff_orientation(&catalog(3));
        assert_eq!(o3.cocircuits.len(), 20);
        assert_eq!(o3.cocircuits.iter().filter(|c| c.is_pure()).count(), 6);
    }

    #[test]
    fn reorienting_a_single_vertex_changes_the_orientation() {
        let cat = catalog(2);
        let aff = aff_orientation(&cat);
        let touched = aff.reorient(&VertexSet::singleton(2, vtx("++")));
        assert_ne!(aff, touched);
        // And reorienting back recovers it.
        assert_eq!(touched.reorient(&VertexSet::singleton(2, vtx("++"))), aff);
    }

    #[test]
    fn radon_signature_of_rectangles_matches_closed_form() {
        for n in 2..=4 {
            for rect in enumerate_rectangles(n).unwrap() {
                let sr = signed_rectangle(&rect);
                assert_eq!(radon_signature(&rect.points()).unwrap(), sr.signs);
                // Diagonal pairs are antipodal within the rectangle.
                let [v, vi, vij, vj] = rect.cycle();
                assert_eq!(sr.signs.sign_of(v), sr.signs.sign_of(vij));
                assert_eq!(sr.signs.sign_of(vi), sr.signs.sign_of(vj));
                assert_ne!(sr.signs.sign_of(v), sr.signs.sign_of(vi));
            }
        }
    }

    #[test]
    fn radon_signature_of_a_corner_circuit() {
        // {(1,1,1), (-1,1,1), (1,-1,1), (1,1,-1), (-1,-1,-1)}: rank-4 circuit
        // with dependency (-2, 1, 1, 1, -1).
        let verts = ["+++", "-++", "+-+", "++-", "---"].map(vtx);
        let c = VertexSet::from_vertices(3, verts);
        assert_eq!(affine_rank(&c).unwrap(), 4);
        let sig = radon_signature(&c).unwrap();
        // Canonical form: minimum vertex (+++) positive.
        assert_eq!(sig.positive().vertices(), vec![vtx("+++"), vtx("---")]);
        assert_eq!(
            sig.negative().vertices(),
            vec![vtx("-++"), vtx("+-+"), vtx("++-")]
        );
    }

    #[test]
    fn radon_signature_rejects_non_circuits() {
        // Three affinely independent vertices.
        let c = VertexSet::from_vertices(3, ["+++", "-++", "+-+"].map(vtx));
        assert!(matches!(radon_signature(&c), Err(Error::NotACircuit(_))));
        // A rectangle plus a vertex off its plane: dependent but not minimal.
        let rect = Rectangle::new(
            SubcubeDescriptor::new(
                3,
                vtx("+++"),
                vec![CoordSet::singleton(0), CoordSet::singleton(1)],
            )
            .unwrap(),
        )
        .unwrap();
        let mut c = rect.points();
        c.insert(vtx("++-"));
        assert!(matches!(radon_signature(&c), Err(Error::NotACircuit(_))));
    }

    #[test]
    fn radon_signature_is_equivariant_under_cube_symmetries() {
        // Reversing a coordinate set is a relabeling of C^n; signatures
        // follow the relabeling.
        let n = 3;
        for rect in enumerate_rectangles(n).unwrap() {
            let sig = radon_signature(&rect.points()).unwrap();
            for mask in 0..1u8 << n {
                let flip = CoordSet::from_bits(mask);
                let mapped = VertexSet::from_vertices(
                    n,
                    rect.points().iter().map(|v| v.reverse(flip)),
                );
                let mapped_sig = radon_signature(&mapped).unwrap();
                let relabeled = SignedSet::new(
                    VertexSet::from_vertices(n, sig.positive().iter().map(|v| v.reverse(flip))),
                    VertexSet::from_vertices(n, sig.negative().iter().map(|v| v.reverse(flip))),
                )
                .unwrap()
                .canonical();
                assert_eq!(mapped_sig, relabeled);
            }
        }
    }

    #[test]
    fn family_sizes() {
        for n in 2..=4 {
            let cat = catalog(n);
            let f = family_f(&cat).unwrap();
            assert_eq!(f.len(), 2 * n);
            assert!(f.iter().all(|c| c.is_pure() && c.support().len() == 1 << (n - 1)));
        }
        assert_eq!(family_r(2).unwrap().len(), 1);
        assert_eq!(family_r(3).unwrap().len(), 12);
        assert_eq!(family_r(4).unwrap().len(), 100);
    }

    #[test]
    fn acyclicity_matches_the_no_positive_circuit_oracle() {
        // Enumerate all circuits of C^n by brute force, sign them under the
        // reoriented affine orientation, and compare "no positive circuit"
        // with the positive-cocircuit cover criterion. Exhaustive over all
        // reorientation sets at n = 2 and n = 3.
        for n in 2..=3usize {
            let cat = catalog(n);
            let aff = aff_orientation(&cat);
            let total = 1usize << n;
            let mut circuits: Vec<SignedSet> = Vec::new();
            for mask in 1u32..(1 << total) {
                let s = VertexSet::from_vertices(
                    n,
                    (0..total).filter(|&i| mask >> i & 1 == 1).map(Vertex::from_index),
                );
                if s.len() < 3 {
                    continue;
                }
                if let Ok(sig) = radon_signature(&s) {
                    circuits.push(sig);
                }
            }
            for amask in 0..1u32 << total {
                let a = VertexSet::from_vertices(
                    n,
                    (0..total).filter(|&i| amask >> i & 1 == 1).map(Vertex::from_index),
                );
                let o = aff.reorient(&a);
                let no_positive_circuit = circuits
                    .iter()
                    .map(|c| c.reorient(&a))
                    .all(|c| !c.positive().is_empty() && !c.negative().is_empty());
                assert_eq!(is_acyclic(&o), no_positive_circuit, "n={n} A={a:?}");
            }
        }
    }

    #[test]
    fn acyclic_examples() {
        for n in 2..=4 {
            assert!(is_acyclic(&aff_orientation(&catalog(n))));
        }
        // No pure-positive cocircuits at all: not acyclic.
        let cat = catalog(2);
        let aff = aff_orientation(&cat);
        let stripped = Orientation {
            n: 2,
            cocircuits: aff
                .cocircuits
                .iter()
                .map(|c| {
                    if c.is_pure() {
                        // Break purity by hand: swap one support element.
                        let v = c.support().min_vertex().unwrap();
                        c.reorient(&VertexSet::singleton(2, v)).canonical()
                    } else {
                        *c
                    }
                })
                .collect(),
        };
        assert!(!is_acyclic(&stripped));
    }

    #[test]
    fn orientation_file_round_trip_and_validation() {
        let cat = catalog(3);
        let aff = aff_orientation(&cat);
        let mut buf = Vec::new();
        write_orientation(&aff, &mut buf).unwrap();
        let reread = read_orientation(buf.as_slice(), &cat).unwrap();
        assert_eq!(reread, aff);

        // Wrong catalog.
        let cat2 = catalog(2);
        assert!(matches!(
            read_orientation(buf.as_slice(), &cat2),
            Err(Error::CacheMismatch(_))
        ));

        // Overlapping signs are malformed.
        let text = String::from_utf8(buf).unwrap();
        let support_hex = cat.entries[0].points.complement().to_hex();
        let bad_line = format!(
            "{{\"index\":0,\"positive\":\"{support_hex}\",\"negative\":\"{support_hex}\"}}"
        );
        let corrupted: Vec<String> = text
            .lines()
            .enumerate()
            .map(|(i, line)| if i == 1 { bad_line.clone() } else { line.to_string() })
            .collect();
        assert!(read_orientation(corrupted.join("\n").as_bytes(), &cat).is_err());
    }
}
