//! Reorientation normal form: given any orientation of the cube matroid
//! (as a total cocircuit signature map), find a reorientation set that makes
//! every facet cocircuit pure positive, then verify it did.
//!
//! The pipeline reorients by the negative parts of the two last-coordinate
//! facet cocircuits, decides which of the two possible rectangle sign
//! patterns the result carries by probing one rectangle against the
//! cocircuits, optionally flips the upper facet, and verifies the facet
//! family afterwards instead of trusting the construction: invalid inputs
//! must be detected, not normalized.

use crate::cube::{Vertex, VertexSet};
use crate::geometry::{Rectangle, SubcubeDescriptor};
use crate::matroid::{make_facet, HyperplaneCatalog};
use crate::orientation::{family_r, is_acyclic, Orientation};
use crate::signed::{orthogonal, SignedSet};
use crate::{CoordSet, Error, Result};

/// Which rectangle sign pattern the probe carried before the optional
/// upper-facet flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Signs alternate around the rectangle cycle.
    Alternating,
    /// The last two signs of the cycle are swapped.
    Swapped,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Alternating => "alternating",
            Branch::Swapped => "swapped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NormalizationResult {
    /// The reorientation set: reorienting the input by it yields `normalized`.
    pub reorientation: VertexSet,
    pub normalized: Orientation,
    pub branch: Branch,
}

fn check_compatible(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<()> {
    if o.n != catalog.n || o.cocircuits.len() != catalog.len() {
        return Err(Error::InvalidInput(format!(
            "orientation (n={}, {} cocircuits) does not match catalog (n={}, {} hyperplanes)",
            o.n,
            o.cocircuits.len(),
            catalog.n,
            catalog.len()
        )));
    }
    Ok(())
}

/// Indices of the two cocircuits supported on the last-coordinate facets:
/// the entry whose support is `x_{n-1} = side` is the complement of the
/// opposite facet hyperplane.
fn axis_cocircuit_indices(catalog: &HyperplaneCatalog) -> Result<(usize, usize)> {
    let top = catalog
        .facet_index(catalog.n - 1, 1)
        .ok_or(Error::InconsistentCatalog)?;
    let bottom = catalog
        .facet_index(catalog.n - 1, -1)
        .ok_or(Error::InconsistentCatalog)?;
    Ok((top, bottom))
}

/// The union of the negative parts of the two last-coordinate facet
/// cocircuits (canonical representatives). Reorienting by the returned set
/// makes both of them pure positive, and with it the whole orientation
/// acyclic, since the two facets cover `C^n`.
pub fn compute_base_set(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<VertexSet> {
    check_compatible(o, catalog)?;
    let (top, bottom) = axis_cocircuit_indices(catalog)?;
    Ok(o.cocircuits[top]
        .negative()
        .union(o.cocircuits[bottom].negative()))
}

/// The signature forced on a rectangle support by orthogonality against the
/// given cocircuit signatures, rooted positive at the rectangle's minimum
/// vertex.
///
/// A cocircuit meeting the rectangle in exactly two vertices forces one
/// agreement and one disagreement there, i.e. `X(p) X(q) = -Y(p) Y(q)`.
/// Those two-point constraints pin the signature; every cocircuit is then
/// re-checked against the full orthogonality condition.
pub fn forced_rectangle_signature(
    o: &Orientation,
    rect: &Rectangle,
) -> Result<SignedSet> {
    let points = rect.points();
    let verts = points.vertices();
    let pos_of = |v: Vertex| verts.iter().position(|&w| w == v).expect("vertex in rectangle");

    let mut edges: Vec<(usize, usize, i8)> = Vec::new();
    for c in &o.cocircuits {
        let inter = c.support().intersection(&points);
        if inter.len() == 2 {
            let vv = inter.vertices();
            let parity = -(c.sign_of(vv[0]) * c.sign_of(vv[1]));
            edges.push((pos_of(vv[0]), pos_of(vv[1]), parity));
        } else {
            debug_assert_ne!(inter.len(), 1, "circuit and cocircuit supports meet in one vertex");
        }
    }

    let mut signs = [0i8; 4];
    signs[0] = 1;
    let mut changed = true;
    while changed {
        changed = false;
        for &(p, q, parity) in &edges {
            match (signs[p], signs[q]) {
                (0, 0) => {}
                (sp, 0) => {
                    signs[q] = sp * parity;
                    changed = true;
                }
                (0, sq) => {
                    signs[p] = sq * parity;
                    changed = true;
                }
                (sp, sq) => {
                    if sp * sq != parity {
                        return Err(Error::NotAnOrientation(
                            "conflicting two-point constraints on a rectangle support".into(),
                        ));
                    }
                }
            }
        }
    }
    if signs.iter().any(|&s| s == 0) {
        return Err(Error::NotAnOrientation(
            "rectangle signature underdetermined by the cocircuits".into(),
        ));
    }

    let n = rect.dim();
    let mut positive = VertexSet::empty(n);
    let mut negative = VertexSet::empty(n);
    for (v, &s) in verts.iter().zip(&signs) {
        if s == 1 {
            positive.insert(*v);
        } else {
            negative.insert(*v);
        }
    }
    let sig = SignedSet::new(positive, negative).expect("signs partition the rectangle");
    for c in &o.cocircuits {
        if !orthogonal(&sig, c) {
            return Err(Error::NotAnOrientation(
                "forced rectangle signature violates orthogonality".into(),
            ));
        }
    }
    Ok(sig)
}

/// Matches a forced signature against the two admissible patterns on the
/// rectangle cycle `v, rev_I(v), rev_IJn(v), rev_Jn(v)` where the second
/// block is the one containing the last coordinate.
fn branch_of_signature(rect: &Rectangle, sig: &SignedSet, n: usize) -> Result<Branch> {
    let (a, b) = rect.blocks();
    let (i_block, jn_block) = if b.contains(n - 1) { (a, b) } else { (b, a) };
    let v = rect.base();
    let cycle = [
        v,
        v.reverse(i_block),
        v.reverse(i_block.union(jn_block)),
        v.reverse(jn_block),
    ];
    let root = sig.sign_of(cycle[0]);
    let pattern: Vec<i8> = cycle.iter().map(|&w| sig.sign_of(w) * root).collect();
    match pattern.as_slice() {
        [1, -1, 1, -1] => Ok(Branch::Alternating),
        [1, -1, -1, 1] => Ok(Branch::Swapped),
        _ => Err(Error::NotAnOrientation(
            "rectangle signature matches neither admissible pattern".into(),
        )),
    }
}

/// Decides the rectangle sign pattern of an orientation whose two
/// last-coordinate facet cocircuits are pure, by probing the fixed
/// rectangle on blocks `{0}` and `{n-1}` at the minimum vertex.
pub fn detect_branch(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<Branch> {
    check_compatible(o, catalog)?;
    let n = o.n;
    let (top, bottom) = axis_cocircuit_indices(catalog)?;
    if !o.cocircuits[top].is_pure() || !o.cocircuits[bottom].is_pure() {
        return Err(Error::InvalidInput(
            "branch detection requires the last-coordinate facet cocircuits to be pure".into(),
        ));
    }
    let probe = Rectangle::new(SubcubeDescriptor::new(
        n,
        Vertex::from_index(0),
        vec![CoordSet::singleton(0), CoordSet::singleton(n - 1)],
    )?)?;
    let sig = forced_rectangle_signature(o, &probe)?;
    branch_of_signature(&probe, &sig, n)
}

/// Whether all 2n facet cocircuits are pure (as canonical ± pairs).
pub fn verify_facet_family(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<bool> {
    check_compatible(o, catalog)?;
    let n = o.n;
    for coord in 0..n {
        for side in [-1, 1] {
            let idx = catalog
                .facet_index(coord, side)
                .ok_or(Error::InconsistentCatalog)?;
            if !o.cocircuits[idx].is_pure() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every signed rectangle is orthogonal to every cocircuit of `o`,
/// which certifies each one as the signed circuit of `o` on its support.
pub fn verify_rectangle_family(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<bool> {
    check_compatible(o, catalog)?;
    let rects = family_r(o.n)?;
    Ok(rects
        .iter()
        .all(|r| o.cocircuits.iter().all(|c| orthogonal(&r.signs, c))))
}

/// Computes a reorientation set carrying the input onto an orientation that
/// contains all facet cocircuits as pure signed sets, and verifies the
/// result.
///
/// For a genuine orientation of the cube matroid this always succeeds; a
/// failed verification therefore certifies that the input violates the
/// orientation axioms.
pub fn normalize(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<NormalizationResult> {
    check_compatible(o, catalog)?;
    let n = o.n;
    let mut set = compute_base_set(o, catalog)?;
    let mut current = o.reorient(&set);
    debug_assert!(is_acyclic(&current));
    let branch = detect_branch(&current, catalog)?;
    if branch == Branch::Swapped {
        let upper = make_facet(n, n - 1, 1)?.points;
        set = set.symmetric_difference(&upper);
        current = o.reorient(&set);
    }
    if !verify_facet_family(&current, catalog)? {
        return Err(Error::NotNormalizable);
    }
    Ok(NormalizationResult {
        reorientation: set,
        normalized: current,
        branch,
    })
}

/// Confirms that no other orientation in the reorientation class of `o`
/// also has all facet cocircuits pure.
///
/// Only four reorientation sets can preserve the two last-coordinate facet
/// cocircuits as ± pairs: the empty set, either last-coordinate facet, or
/// all of `C^n`. Each candidate either reproduces `o` itself or breaks some
/// other facet cocircuit. At n = 2 the check additionally runs over all
/// `2^(2^n)` reorientation sets exhaustively.
pub fn uniqueness_check(o: &Orientation, catalog: &HyperplaneCatalog) -> Result<bool> {
    check_compatible(o, catalog)?;
    if !verify_facet_family(o, catalog)? {
        return Err(Error::InvalidInput(
            "uniqueness check requires an orientation with pure facet cocircuits".into(),
        ));
    }
    let n = o.n;
    let candidates = [
        make_facet(n, n - 1, 1)?.points,
        make_facet(n, n - 1, -1)?.points,
        VertexSet::full(n),
    ];
    for a in candidates {
        let o2 = o.reorient(&a);
        if o2 != *o && verify_facet_family(&o2, catalog)? {
            return Ok(false);
        }
    }
    if n == 2 {
        for mask in 0..16u32 {
            let a = VertexSet::from_vertices(
                2,
                (0..4).filter(|&i| mask >> i & 1 == 1).map(Vertex::from_index),
            );
            let o2 = o.reorient(&a);
            if o2 != *o && verify_facet_family(&o2, catalog)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
