//! Covers of `K''` by `dim K + 1` strong-collapsible subcomplexes.

use std::collections::{BTreeSet, VecDeque};

use super::{Cover, CoverError, PieceCertificate};
use crate::collapse::{strong_collapse_core, StarIndex, StrongCollapseCertificate, StrongCollapseStep};
use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::subdivision::{SecondSubdivision, SubdivisionMap};

/// Two trees covering `G'`.
#[derive(Debug, Clone)]
pub struct GraphCover {
    pub subdivision: SubdivisionMap,
    pub cover: Cover,
}

fn strong_certify(parent: SimplicialComplex, pieces: Vec<SimplicialComplex>) -> Result<Cover, CoverError> {
    let mut certificates = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let c = strong_collapse_core(p);
        if c.end.len() != 1 {
            return Err(CoverError::PieceNotCollapsible(i));
        }
        certificates.push(PieceCertificate::Strong(c));
    }
    Ok(Cover { parent, pieces, certificates })
}

/// Breadth-first spanning tree from the smallest vertex; each non-tree edge is
/// split at its midpoint and its two halves go to different pieces.
pub fn graph_cover2(g: &SimplicialComplex) -> Result<GraphCover, CoverError> {
    if g.dim().map_or(false, |d| d > 1) {
        return Err(CoverError::NotAGraph);
    }
    g.require_connected()?;
    let sd = SubdivisionMap::new(g);
    let adj = g.adjacency();
    let root = *adj.keys().next().unwrap();
    let mut seen = BTreeSet::from([root]);
    let mut tree = vec![Simplex::vertex(root)];
    let mut q = VecDeque::from([root]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[&v] {
            if seen.insert(w) {
                tree.push(Simplex::edge(v, w));
                q.push_back(w);
            }
        }
    }
    let tree = SimplicialComplex::closure_of(tree);
    let base = sd.image(&tree);
    let mut halves = [Vec::new(), Vec::new()];
    for e in g.edges() {
        if tree.contains(e) {
            continue;
        }
        let m = sd.barycenter(e).unwrap();
        let [a, b] = [e.vertices()[0], e.vertices()[1]];
        halves[0].push(Simplex::edge(sd.barycenter(&Simplex::vertex(a)).unwrap(), m));
        halves[1].push(Simplex::edge(sd.barycenter(&Simplex::vertex(b)).unwrap(), m));
    }
    let pieces = halves
        .into_iter()
        .map(|h| base.union(&SimplicialComplex::closure_of(h)))
        .collect();
    let cover = strong_certify(sd.child().clone(), pieces)?;
    Ok(GraphCover { subdivision: sd, cover })
}

/// Strong collapse of `K''` minus the barycenters of `tops` onto
/// `(K minus the open simplices tops)''`, removing the link vertices of each
/// barycenter by increasing chain length.
pub fn star_removal_collapse(sd: &SecondSubdivision, tops: &[Simplex]) -> Result<StrongCollapseCertificate, CoverError> {
    let k = sd.original();
    let maximal: BTreeSet<Simplex> = k.maximal_simplices().into_iter().collect();
    let mut centers = BTreeSet::new();
    for t in tops {
        if t.dim() == 0 || !maximal.contains(t) {
            return Err(CoverError::MalformedInput(format!("{t} is not a maximal simplex of positive dimension")));
        }
        centers.insert(sd.barycenter(t).unwrap());
    }
    let full = sd.complex();
    let start = full.delete_vertices(&centers);
    let mut idx = StarIndex::new(&start);
    let mut steps = Vec::new();
    for t in tops {
        let b = sd.barycenter(t).unwrap();
        let mut order: Vec<Vertex> = full.link(b)?.vertices().collect();
        order.sort_by_key(|v| (sd.chain_length(*v), *v));
        for u in order {
            let doms = idx.dominators(u);
            let Some(&w) = doms.first() else {
                return Err(CoverError::ConstructionFailed(format!("vertex {u} is not dominated while removing the star of {t}")));
            };
            idx.remove_vertex(u);
            steps.push(StrongCollapseStep { removed: u, dominator: w });
        }
    }
    let end = idx.to_complex();
    let remaining: BTreeSet<Simplex> = k.simplices().filter(|s| !tops.contains(s)).copied().collect();
    let expected = sd.image(&SimplicialComplex::try_from_set(remaining)?);
    if end != expected {
        return Err(CoverError::ConstructionFailed("star removal did not end at the subdivided remainder".into()));
    }
    Ok(StrongCollapseCertificate { start, steps, end })
}

/// Lifts a strong-collapsible cover of `L` back across a strong collapse `K -> L`.
/// For a removed vertex `v` dominated by `v'`, a piece gains the cone from `v`
/// over those link simplices `τ` with `τ ∪ v'` already in the piece.
pub fn expansion_lift(cover: &Cover, collapse: &StrongCollapseCertificate) -> Result<Cover, CoverError> {
    collapse.verify()?;
    if cover.parent != collapse.end {
        return Err(CoverError::ExpansionInvalid("cover is not a cover of the collapse's end".into()));
    }
    let mut recorded = Vec::new();
    let mut idx = StarIndex::new(&collapse.start);
    for s in &collapse.steps {
        recorded.push((s.removed, s.dominator, idx.link(s.removed)));
        idx.remove_vertex(s.removed);
    }
    let mut pieces: Vec<BTreeSet<Simplex>> = cover.pieces.iter().map(|p| p.as_set().clone()).collect();
    let mut new_steps: Vec<Vec<StrongCollapseStep>> = vec![Vec::new(); pieces.len()];
    for (v, w, link) in recorded.into_iter().rev() {
        let mut covered = BTreeSet::new();
        for (i, p) in pieces.iter_mut().enumerate() {
            let cone: Vec<Simplex> = link
                .iter()
                .filter(|t| {
                    p.contains(t) && {
                        let tw = if t.contains_vertex(w) { Ok(**t) } else { t.join_vertex(w) };
                        tw.map_or(false, |tw| p.contains(&tw))
                    }
                })
                .copied()
                .collect();
            if cone.is_empty() {
                continue;
            }
            let maximal_ok = cone
                .iter()
                .filter(|t| !cone.iter().any(|u| u.len() > t.len() && t.is_face_of(u)))
                .all(|t| t.contains_vertex(w));
            if !maximal_ok {
                return Err(CoverError::ExpansionInvalid(format!("{v} would not be dominated by {w} in piece {i}")));
            }
            p.insert(Simplex::vertex(v));
            for t in &cone {
                let s = t.join_vertex(v)?;
                p.insert(s);
                covered.insert(*t);
            }
            new_steps[i].push(StrongCollapseStep { removed: v, dominator: w });
        }
        if covered.len() != link.len() {
            return Err(CoverError::ExpansionInvalid(format!("star of {v} is not covered by the lifted pieces")));
        }
    }
    let mut out_pieces = Vec::new();
    let mut certificates = Vec::new();
    for (i, set) in pieces.into_iter().enumerate() {
        let piece = SimplicialComplex::try_from_set(set)?;
        let PieceCertificate::Strong(old) = &cover.certificates[i] else {
            return Err(CoverError::MalformedInput("expansion_lift needs strong certificates".into()));
        };
        let mut steps: Vec<StrongCollapseStep> = new_steps[i].iter().rev().copied().collect();
        steps.extend(old.steps.iter().copied());
        certificates.push(PieceCertificate::Strong(StrongCollapseCertificate {
            start: piece.clone(),
            steps,
            end: old.end.clone(),
        }));
        out_pieces.push(piece);
    }
    Ok(Cover { parent: collapse.start.clone(), pieces: out_pieces, certificates })
}

#[derive(Debug, Clone)]
pub struct StrongCover {
    pub subdivision: SecondSubdivision,
    pub cover: Cover,
}

/// Covers `K''` by `dim K + 1` strong-collapsible subcomplexes.
pub fn strong_cover(k: &SimplicialComplex) -> Result<StrongCover, CoverError> {
    k.require_connected()?;
    let sd = SecondSubdivision::new(k);
    let k2 = sd.complex().clone();
    let cover = match k.dim().unwrap() {
        0 => strong_certify(k2.clone(), vec![k2.clone()])?,
        1 => {
            let gc = graph_cover2(k)?;
            let pieces = gc.cover.pieces.iter().map(|p| sd.second.image(p)).collect();
            strong_certify(k2.clone(), pieces)?
        }
        _ => dim2_cover(k, &sd)?,
    };
    for (i, c) in cover.certificates.iter().enumerate() {
        c.verify_to_point().map_err(|e| CoverError::ConstructionFailed(format!("piece {i}: {e}")))?;
    }
    if cover.union() != k2 {
        return Err(CoverError::NotACover);
    }
    Ok(StrongCover { subdivision: sd, cover })
}

fn dim2_cover(k: &SimplicialComplex, sd: &SecondSubdivision) -> Result<Cover, CoverError> {
    let k2 = sd.complex();
    let skel = k.skeleton(1);
    let gc = graph_cover2(&skel)?;
    // graph_cover2 numbers barycenters of the 1-skeleton on its own; move them to K'
    let to_k1 = |u: Vertex| sd.first.barycenter(gc.subdivision.label(u).unwrap()).unwrap();
    let mut graph_pieces = Vec::new();
    for p in &gc.cover.pieces {
        let in_k1 = p.relabel(to_k1)?;
        graph_pieces.push(sd.second.image(&in_k1));
    }
    let skel2 = sd.image(&skel);
    let base = strong_certify(skel2, graph_pieces)?;

    let tops: Vec<Simplex> = k.triangles().copied().collect();
    let removal = star_removal_collapse(sd, &tops)?;
    if removal.end != base.parent {
        return Err(CoverError::ConstructionFailed("star removal does not end at the subdivided 1-skeleton".into()));
    }
    let lifted = expansion_lift(&base, &removal)?;

    let centers: Vec<Vertex> = tops.iter().map(|t| sd.barycenter(t).unwrap()).collect();
    let stars: Vec<SimplicialComplex> = centers.iter().map(|c| k2.star(*c)).collect::<Result<_, ComplexError>>()?;
    let in_stars: BTreeSet<Vertex> = stars.iter().flat_map(|s| s.vertices()).collect();
    let mut third = stars[0].clone();
    for target in &stars[1..] {
        let from: BTreeSet<Vertex> = third.vertices().collect();
        let to: BTreeSet<Vertex> = target.vertices().collect();
        let path = k2
            .shortest_path(&from, &to, |v| !in_stars.contains(&v) && !from.contains(&v))
            .ok_or_else(|| CoverError::ConstructionFailed("no path between barycenter stars".into()))?;
        let edges = path.windows(2).map(|w| Simplex::edge(w[0], w[1]));
        third = third.union(&SimplicialComplex::closure_of(edges)).union(target);
    }
    let core = strong_collapse_core(&third);
    if core.end.len() != 1 {
        return Err(CoverError::ConstructionFailed("union of barycenter stars is not strong collapsible".into()));
    }
    let mut pieces = lifted.pieces;
    let mut certificates = lifted.certificates;
    pieces.push(third);
    certificates.push(PieceCertificate::Strong(core));
    Ok(Cover { parent: k2.clone(), pieces, certificates })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(lists: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(lists.iter().copied()).unwrap()
    }

    #[test]
    fn tree_gives_equal_pieces() {
        let t = k(&[&[0, 1], &[1, 2], &[1, 3]]);
        let gc = graph_cover2(&t).unwrap();
        assert_eq!(gc.cover.pieces[0], gc.cover.pieces[1]);
    }

    #[test]
    fn cycle_pieces_are_trees() {
        let c = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let gc = graph_cover2(&c).unwrap();
        for p in &gc.cover.pieces {
            assert_eq!(p.euler_characteristic(), 1);
            assert!(p.is_connected());
        }
        assert_eq!(gc.cover.union(), *gc.subdivision.child());
    }

    #[test]
    fn star_removal_on_triangle() {
        let t = k(&[&[0, 1, 2]]);
        let sd = SecondSubdivision::new(&t);
        let c = star_removal_collapse(&sd, &[Simplex::triangle(0, 1, 2)]).unwrap();
        c.verify().unwrap();
        assert_eq!(c.end.f_vector(), [12, 12, 0]);
        let first = c.steps.first().unwrap().removed;
        assert_eq!(sd.chain_length(first), 2);
    }

    #[test]
    fn star_removal_on_edge() {
        let e = k(&[&[0, 1]]);
        let sd = SecondSubdivision::new(&e);
        let c = star_removal_collapse(&sd, &[Simplex::edge(0, 1)]).unwrap();
        assert_eq!(c.end.f_vector(), [2, 0, 0]);
    }

    #[test]
    fn triangle_strong_cover() {
        let t = k(&[&[0, 1, 2]]);
        let sc = strong_cover(&t).unwrap();
        assert_eq!(sc.cover.len(), 3);
        assert_eq!(sc.cover.parent.f_vector(), [25, 60, 36]);
    }

    #[test]
    fn cycle_strong_cover() {
        let c = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(strong_cover(&c).unwrap().cover.len(), 2);
    }
}
