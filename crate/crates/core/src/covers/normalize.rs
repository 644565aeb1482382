//! Reshaping size-two collapsible covers: shrinking the intersection to a
//! graph, then moving its leaves to splittable vertices.

use std::collections::BTreeSet;

use super::{Cover, CoverError, PieceCertificate};
use crate::collapse::{is_collapsible, CollapsibilityVerdict};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::structure::{disconnected_link_vertices, is_inner_connected, splittable_vertices};

fn recertify(cover: &mut Cover, i: usize) -> bool {
    match is_collapsible(&cover.pieces[i], u64::MAX) {
        Ok(CollapsibilityVerdict::Collapsible(c)) => {
            cover.certificates[i] = PieceCertificate::Elementary(c);
            true
        }
        _ => false,
    }
}

fn check_pair(k: &SimplicialComplex, cover: &Cover) -> Result<(), CoverError> {
    if cover.len() != 2 {
        return Err(CoverError::MalformedInput("expected a cover with two pieces".into()));
    }
    if cover.union() != *k {
        return Err(CoverError::NotACover);
    }
    for (i, c) in cover.certificates.iter().enumerate() {
        if c.start() != &cover.pieces[i] || c.verify_to_point().is_err() {
            return Err(CoverError::PieceNotCollapsible(i));
        }
    }
    Ok(())
}

/// Removes overlapping triangles until the two pieces meet in a graph.
/// Each round takes the least overlapping triangle `τ` having an inner edge
/// `e` whose other triangle lies in one piece only, and deletes `(e, τ)` from
/// the other piece.
pub fn normalize_graph_intersection(k: &SimplicialComplex, cover: &Cover) -> Result<Cover, CoverError> {
    if !is_inner_connected(k).0 {
        return Err(CoverError::NotInnerConnected);
    }
    check_pair(k, cover)?;
    let degrees = k.edge_degrees();
    let mut out = cover.clone();
    loop {
        let inter = out.pieces[0].intersection(&out.pieces[1]);
        let overlap: Vec<Simplex> = inter.triangles().copied().collect();
        if overlap.is_empty() {
            return Ok(out);
        }
        let mut pick = None;
        'search: for tau in &overlap {
            for e in tau.facets() {
                if degrees[&e] != 2 {
                    continue;
                }
                let sigma = k.triangles().find(|t| *t != tau && e.is_face_of(t)).copied().unwrap();
                if inter.contains(&sigma) {
                    continue;
                }
                // drop τ from the piece that does not contain σ
                let target = if out.pieces[0].contains(&sigma) { 1 } else { 0 };
                pick = Some((target, e, *tau));
                break 'search;
            }
        }
        let Some((target, e, tau)) = pick else {
            return Err(CoverError::NotInnerConnected);
        };
        let set: BTreeSet<Simplex> = out.pieces[target].simplices().filter(|s| **s != e && **s != tau).copied().collect();
        out.pieces[target] = SimplicialComplex::try_from_set(set)?;
        if !recertify(&mut out, target) {
            return Err(CoverError::PieceCollapsibilityLost { piece: target, edge: e, triangle: tau });
        }
    }
}

/// Moves leaves of the intersection graph away from non-splittable vertices:
/// a leaf `w` whose hanging edge is maximal in one piece is removed from that piece.
pub fn relocate_leaves(k: &SimplicialComplex, cover: &Cover) -> Result<Cover, CoverError> {
    if !k.is_homogeneous() {
        return Err(CoverError::HypothesisViolated("complex is not homogeneous".into()));
    }
    check_pair(k, cover)?;
    let splittable: BTreeSet<Vertex> = splittable_vertices(k).into_iter().collect();
    let bad: Vec<Vertex> = disconnected_link_vertices(k).into_iter().filter(|v| !splittable.contains(v)).collect();
    if !bad.is_empty() {
        return Err(CoverError::HypothesisViolated(format!("non-splittable vertices with disconnected link: {bad:?}")));
    }
    let mut out = cover.clone();
    if out.pieces[0].intersection(&out.pieces[1]).dim() == Some(2) {
        return Err(CoverError::HypothesisViolated("intersection is not a graph".into()));
    }
    loop {
        let graph = out.pieces[0].intersection(&out.pieces[1]).skeleton(1);
        let adj = graph.adjacency();
        let mut moved = false;
        for (&w, nbrs) in &adj {
            if nbrs.len() != 1 || splittable.contains(&w) {
                continue;
            }
            let v = *nbrs.iter().next().unwrap();
            let eta = Simplex::edge(v, w);
            for target in 0..2 {
                let piece = &out.pieces[target];
                let at_w: Vec<&Simplex> = piece.simplices().filter(|s| s.contains_vertex(w)).collect();
                if at_w.len() == 2 && at_w.contains(&&eta) {
                    let set = piece.simplices().filter(|s| !s.contains_vertex(w)).copied().collect();
                    let candidate = SimplicialComplex::try_from_set(set)?;
                    let saved = out.pieces[target].clone();
                    out.pieces[target] = candidate;
                    if recertify(&mut out, target) {
                        moved = true;
                        break;
                    }
                    out.pieces[target] = saved;
                }
            }
            if moved {
                break;
            }
        }
        if !moved {
            return Ok(out);
        }
    }
}
