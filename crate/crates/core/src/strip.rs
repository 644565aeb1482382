//! Two-piece collapsible covers of presentation complexes whose relator has
//! an algebraic collapse.
//!
//! With the collapsing generator `x` rotated to the end of the relator
//! `a_0 … a_{m-2} x`, the edge `x` is cut into `2m - 1` segments and every
//! other generator into three. Strip `i` joins the middle segment of `a_i`
//! to the segment `2m - 3 - 2i` of `x`; the strips are nested, so they are
//! pairwise disjoint. One piece is the union of the strips, the other the
//! closure of the complement.

use crate::cell::CellComplex;
use crate::complex::SimplicialComplex;
use crate::covers::{connect_components, Cover};
use crate::one_relator::{build_presentation_complex, has_algebraic_collapse, OneRelatorError, OneRelatorPresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripCover {
    pub complex: SimplicialComplex,
    pub cover: Cover,
    /// The generator with the algebraic collapse.
    pub generator: usize,
}

/// Sides of a generator's segments in the order a letter traverses them.
fn traversal(segments: &[usize], inverse: bool) -> Vec<(usize, bool)> {
    if inverse {
        segments.iter().rev().map(|&e| (e, false)).collect()
    } else {
        segments.iter().map(|&e| (e, true)).collect()
    }
}

pub fn strip_cover(p: &OneRelatorPresentation) -> Result<StripCover, OneRelatorError> {
    let x = has_algebraic_collapse(p).ok_or(OneRelatorError::NoAlgebraicCollapse)?;
    let m = p.relator.len();
    if m == 1 {
        // a disk, collapsible on its own
        let complex = build_presentation_complex(p, true)?.complex;
        let cover = Cover::certify(complex.clone(), vec![complex.clone()])?;
        return Ok(StripCover { complex, cover, generator: x });
    }
    let pos = p.relator.iter().position(|l| l.generator == x).unwrap();
    let word: Vec<_> = (1..=m).map(|i| p.relator[(pos + i) % m]).collect();

    let mut cc = CellComplex::new(1);
    let mut segments: Vec<Vec<usize>> = Vec::new();
    for g in 0..p.generators.len() {
        let n = if g == x { 2 * m - 1 } else { 3 };
        let mut prev = 0;
        let mut segs = Vec::new();
        for s in 0..n {
            let next = if s + 1 == n { 0 } else { cc.add_vertex() };
            segs.push(cc.add_edge(prev, next));
            prev = next;
        }
        segments.push(segs);
    }
    let start = |cc: &CellComplex, (e, f): (usize, bool)| cc.edges[e][if f { 0 } else { 1 }];
    let end = |cc: &CellComplex, (e, f): (usize, bool)| cc.edges[e][if f { 1 } else { 0 }];

    let xs = traversal(&segments[x], word[m - 1].inverse);
    let letters: Vec<Vec<(usize, bool)>> =
        word[..m - 1].iter().map(|l| traversal(&segments[l.generator], l.inverse)).collect();

    let mut strip_tris = Vec::new();
    let mut region_tris = Vec::new();
    // side1[i]: end of x segment -> start of middle segment; side2[i]: end of middle segment -> start of x segment
    let mut side1 = Vec::new();
    let mut side2 = Vec::new();
    for (i, a) in letters.iter().enumerate() {
        let xseg = xs[2 * m - 3 - 2 * i];
        let s1 = cc.add_edge(end(&cc, xseg), start(&cc, a[1]));
        let s2 = cc.add_edge(end(&cc, a[1]), start(&cc, xseg));
        strip_tris.extend(cc.add_polygon(&[a[1], (s2, true), xseg, (s1, true)])?);
        side1.push(s1);
        side2.push(s2);
    }
    region_tris.extend(cc.add_polygon(&[xs[2 * m - 2], letters[0][0], (side1[0], false)])?);
    for i in 1..m - 1 {
        region_tris.extend(cc.add_polygon(&[
            letters[i - 1][2],
            letters[i][0],
            (side1[i], false),
            xs[2 * m - 2 - 2 * i],
            (side2[i - 1], false),
        ])?);
    }
    region_tris.extend(cc.add_polygon(&[letters[m - 2][2], xs[0], (side2[m - 2], false)])?);

    let sd = cc.triangulate()?;
    let strip_set: std::collections::BTreeSet<usize> = strip_tris.into_iter().collect();
    let mut p1 = sd.image(|t| strip_set.contains(&t));
    let mut p2 = sd.image(|t| !strip_set.contains(&t));
    for g in p.unused_generators() {
        p1 = p1.union(&sd.edge_image(segments[g][0]));
        p2 = p2.union(&sd.edge_image(segments[g][1])).union(&sd.edge_image(segments[g][2]));
    }
    let complex = sd.complex;
    let p1 = connect_components(&complex, &p1)?;
    let p2 = connect_components(&complex, &p2)?;
    let cover = Cover::certify(complex.clone(), vec![p1, p2])?;
    debug_assert!(region_tris.len() + strip_set.len() == cc.triangles.len());
    Ok(StripCover { complex, cover, generator: x })
}
