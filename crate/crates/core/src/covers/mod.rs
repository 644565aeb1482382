//! Covers of a complex by collapsible or strong-collapsible subcomplexes.

mod normalize;
mod search;
mod strong;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::collapse::{is_collapsible, CollapseCertificate, CollapseError, StrongCollapseCertificate};
use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::homology::{homology, HomologySummary};

pub use normalize::{normalize_graph_intersection, relocate_leaves};
pub use search::{search_cover2, CoverSearchVerdict, SearchMode, SearchOptions};
pub use strong::{expansion_lift, graph_cover2, star_removal_collapse, strong_cover, GraphCover, StrongCover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error("input is not a graph")]
    NotAGraph,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("invalid expansion: {0}")]
    ExpansionInvalid(String),
    #[error("cover construction failed: {0}")]
    ConstructionFailed(String),
    #[error("piece {0} is not collapsible")]
    PieceNotCollapsible(usize),
    #[error("pieces do not cover the complex")]
    NotACover,
    #[error("complex is not inner-connected")]
    NotInnerConnected,
    #[error("piece {piece} stopped being collapsible after removing {edge} and {triangle}")]
    PieceCollapsibilityLost { piece: usize, edge: Simplex, triangle: Simplex },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PieceCertificate {
    Elementary(CollapseCertificate),
    Strong(StrongCollapseCertificate),
}

impl PieceCertificate {
    pub fn start(&self) -> &SimplicialComplex {
        match self {
            PieceCertificate::Elementary(c) => &c.start,
            PieceCertificate::Strong(c) => &c.start,
        }
    }

    pub fn verify_to_point(&self) -> Result<(), CollapseError> {
        match self {
            PieceCertificate::Elementary(c) => c.verify_to_point(),
            PieceCertificate::Strong(c) => c.verify_to_point(),
        }
    }

    pub fn is_strong(&self) -> bool {
        matches!(self, PieceCertificate::Strong(_))
    }
}

/// Pieces are subcomplexes of `parent` sharing its vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub parent: SimplicialComplex,
    pub pieces: Vec<SimplicialComplex>,
    pub certificates: Vec<PieceCertificate>,
}

impl Cover {
    /// Certifies each piece with an elementary collapse to a point.
    pub fn certify(parent: SimplicialComplex, pieces: Vec<SimplicialComplex>) -> Result<Cover, CoverError> {
        let mut certificates = Vec::new();
        for (i, p) in pieces.iter().enumerate() {
            match is_collapsible(p, u64::MAX) {
                Ok(v) if v.is_collapsible() => {
                    certificates.push(PieceCertificate::Elementary(v.certificate().unwrap().clone()))
                }
                _ => return Err(CoverError::PieceNotCollapsible(i)),
            }
        }
        Ok(Cover { parent, pieces, certificates })
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Intersection of all pieces.
    pub fn intersection(&self) -> SimplicialComplex {
        let mut it = self.pieces.iter();
        let first = it.next().cloned().unwrap_or_default();
        it.fold(first, |acc, p| acc.intersection(p))
    }

    pub fn union(&self) -> SimplicialComplex {
        self.pieces.iter().fold(SimplicialComplex::empty(), |acc, p| acc.union(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub union_matches: bool,
    /// Simplices of the complex not in any piece.
    pub missing: Vec<Simplex>,
    /// Simplices of pieces not in the complex.
    pub extra: Vec<Simplex>,
    /// Per piece: `None` if its certificate replays to a point, otherwise the failure.
    pub certificate_failures: Vec<Option<String>>,
    pub intersection_dim: Option<usize>,
    pub intersection_homology: Option<HomologySummary>,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.union_matches && self.certificate_failures.iter().all(|f| f.is_none())
    }
}

pub fn verify_cover(k: &SimplicialComplex, cover: &Cover) -> CoverReport {
    let u = cover.union();
    let missing: Vec<Simplex> = k.simplices().filter(|s| !u.contains(s)).copied().collect();
    let extra: Vec<Simplex> = u.simplices().filter(|s| !k.contains(s)).copied().collect();
    let mut certificate_failures = Vec::new();
    for (i, p) in cover.pieces.iter().enumerate() {
        let f = match cover.certificates.get(i) {
            None => Some("no certificate".to_string()),
            Some(c) if c.start() != p => Some("certificate starts at a different complex".to_string()),
            Some(c) => c.verify_to_point().err().map(|e| e.to_string()),
        };
        certificate_failures.push(f);
    }
    let (intersection_dim, intersection_homology) = if cover.len() == 2 {
        let i = cover.intersection();
        let h = if i.is_empty() { None } else { Some(homology(&i)) };
        (i.dim(), h)
    } else {
        (None, None)
    };
    CoverReport {
        union_matches: missing.is_empty() && extra.is_empty() && cover.parent == *k,
        missing,
        extra,
        certificate_failures,
        intersection_dim,
        intersection_homology,
    }
}

/// Mayer–Vietoris for a cover by two contractible pieces:
/// `rank H~0(K1 ∩ K2) = rank H1(K)` and `rank H1(K1 ∩ K2) = rank H2(K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MayerVietorisCheck {
    pub reduced_b0_intersection: usize,
    pub b1_intersection: usize,
    pub b1: usize,
    pub b2: usize,
}

impl MayerVietorisCheck {
    pub fn holds(&self) -> bool {
        self.reduced_b0_intersection == self.b1 && self.b1_intersection == self.b2
    }
}

pub fn mayer_vietoris(cover: &Cover) -> Option<MayerVietorisCheck> {
    if cover.len() != 2 {
        return None;
    }
    let i = cover.intersection();
    let h = homology(&cover.parent);
    let (rb0, b1i) = if i.is_empty() {
        (0, 0)
    } else {
        let hi = homology(&i);
        (hi.betti[0] - 1, hi.betti[1])
    };
    Some(MayerVietorisCheck { reduced_b0_intersection: rb0, b1_intersection: b1i, b1: h.betti[1], b2: h.betti[2] })
}

/// Joins the components of `piece` by shortest edge paths of `ambient` whose
/// interior vertices avoid the piece. Each path adds no cycle.
pub fn connect_components(ambient: &SimplicialComplex, piece: &SimplicialComplex) -> Result<SimplicialComplex, CoverError> {
    let mut cur = piece.clone();
    loop {
        let comps = cur.components();
        if comps.len() <= 1 {
            return Ok(cur);
        }
        let from = &comps[0];
        let to: BTreeSet<Vertex> = comps[1..].iter().flatten().copied().collect();
        let inside: BTreeSet<Vertex> = cur.vertices().collect();
        let path = ambient
            .shortest_path(from, &to, |v| !inside.contains(&v))
            .ok_or_else(|| CoverError::ConstructionFailed("no connecting path".into()))?;
        let edges = path.windows(2).map(|w| Simplex::edge(w[0], w[1]));
        cur = cur.union(&SimplicialComplex::closure_of(edges));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_reports_missing_vertex() {
        let k = SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![1, 2]]).unwrap();
        let p = SimplicialComplex::from_vertex_lists([[0, 1]]).unwrap();
        let cover = Cover::certify(k.clone(), vec![p.clone(), p]).unwrap();
        let r = verify_cover(&k, &cover);
        assert!(!r.ok());
        assert_eq!(r.missing, vec![Simplex::edge(1, 2), Simplex::vertex(2)]);
    }

    #[test]
    fn connectors_join_components() {
        let k = SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let p = SimplicialComplex::from_vertex_lists(vec![vec![0], vec![3]]).unwrap();
        let c = connect_components(&k, &p).unwrap();
        assert_eq!(c, k);
    }
}
