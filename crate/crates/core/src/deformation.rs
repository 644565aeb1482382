//! Simple-homotopy deformation from `K = K1 ∪ K2` (both pieces collapsible)
//! to the suspension of `K1 ∩ K2`. Intermediate complexes reach dimension 3,
//! so moves are recorded on plain sorted vertex lists.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::collapse::{CollapseCertificate, CollapseError};
use crate::complex::{SimplicialComplex, Vertex};
use crate::homology::{graded_homology, HomologySummary};

pub type Cell = Vec<Vertex>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformationError {
    #[error("pieces do not cover the complex")]
    NotACover,
    #[error("piece {0} has no valid collapse certificate to a point: {1}")]
    PieceNotCertifiedCollapsible(usize, CollapseError),
    #[error("move {index} is not a valid {kind}: {face:?} / {coface:?}")]
    InvalidMove { index: usize, kind: &'static str, face: Cell, coface: Cell },
    #[error("replay does not end at the suspension of the intersection")]
    EndMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DeformationMove {
    Expand { face: Cell, coface: Cell },
    Collapse { face: Cell, coface: Cell },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationRecord {
    pub start: SimplicialComplex,
    pub apexes: (Vertex, Vertex),
    pub moves: Vec<DeformationMove>,
    pub end: BTreeSet<Cell>,
    pub max_dim: usize,
}

fn faces_of(c: &[Vertex]) -> Vec<Cell> {
    (0..c.len()).map(|i| c.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect()).collect()
}

fn with(c: &[Vertex], v: Vertex) -> Cell {
    let mut out = c.to_vec();
    out.push(v);
    out.sort_unstable();
    out
}

/// Number of cells in `set` having `c` as a proper face.
fn coface_count(set: &BTreeSet<Cell>, c: &[Vertex]) -> usize {
    set.iter().filter(|s| s.len() > c.len() && c.iter().all(|x| s.contains(x))).count()
}

/// Suspension of `base` with apexes `a` and `b`, as a set of cells.
pub fn suspension_cells(base: &SimplicialComplex, a: Vertex, b: Vertex) -> BTreeSet<Cell> {
    let mut out = BTreeSet::new();
    out.insert(vec![a]);
    out.insert(vec![b]);
    for s in base.simplices() {
        out.insert(s.vertices().to_vec());
        out.insert(with(s.vertices(), a));
        out.insert(with(s.vertices(), b));
    }
    out
}

pub fn cells_homology(cells: &BTreeSet<Cell>) -> HomologySummary {
    let top = cells.iter().map(|c| c.len()).max().unwrap_or(1);
    let mut graded = vec![Vec::new(); top];
    for c in cells {
        graded[c.len() - 1].push(c.clone());
    }
    graded_homology(&graded)
}

impl DeformationRecord {
    /// Replays every move, checking each expansion and collapse is elementary.
    pub fn replay(&self) -> Result<BTreeSet<Cell>, DeformationError> {
        let mut cur: BTreeSet<Cell> = self.start.simplices().map(|s| s.vertices().to_vec()).collect();
        for (index, m) in self.moves.iter().enumerate() {
            match m {
                DeformationMove::Expand { face, coface } => {
                    let bad = || DeformationError::InvalidMove {
                        index,
                        kind: "expansion",
                        face: face.clone(),
                        coface: coface.clone(),
                    };
                    if cur.contains(face) || cur.contains(coface) || coface.len() != face.len() + 1 {
                        return Err(bad());
                    }
                    if !face.iter().all(|x| coface.contains(x)) {
                        return Err(bad());
                    }
                    for f in faces_of(coface).into_iter().chain(faces_of(face)) {
                        if f != *face && !f.is_empty() && !cur.contains(&f) {
                            return Err(bad());
                        }
                    }
                    cur.insert(face.clone());
                    cur.insert(coface.clone());
                }
                DeformationMove::Collapse { face, coface } => {
                    let ok = cur.contains(face)
                        && cur.contains(coface)
                        && coface.len() == face.len() + 1
                        && face.iter().all(|x| coface.contains(x))
                        && coface_count(&cur, face) == 1;
                    if !ok {
                        return Err(DeformationError::InvalidMove {
                            index,
                            kind: "collapse",
                            face: face.clone(),
                            coface: coface.clone(),
                        });
                    }
                    cur.remove(coface);
                    cur.remove(face);
                }
            }
        }
        Ok(cur)
    }

    pub fn verify(&self) -> Result<(), DeformationError> {
        if self.replay()? != self.end {
            return Err(DeformationError::EndMismatch);
        }
        Ok(())
    }
}

/// Expands cones over both pieces, then collapses onto `Σ(K1 ∩ K2)`.
pub fn suspension_deformation(
    k: &SimplicialComplex,
    certs: [&CollapseCertificate; 2],
) -> Result<DeformationRecord, DeformationError> {
    for (i, c) in certs.iter().enumerate() {
        c.verify_to_point().map_err(|e| DeformationError::PieceNotCertifiedCollapsible(i, e))?;
    }
    let (k1, k2) = (&certs[0].start, &certs[1].start);
    if k1.union(k2) != *k || !k1.is_subcomplex_of(k) || !k2.is_subcomplex_of(k) {
        return Err(DeformationError::NotACover);
    }
    let top = k.max_vertex().unwrap_or(0);
    let apexes = (top + 1, top + 2);
    let mut moves = Vec::new();
    for (c, apex) in [(certs[0], apexes.0), (certs[1], apexes.1)] {
        let w0 = c.end.vertices().next().unwrap();
        moves.push(DeformationMove::Expand { face: vec![apex], coface: with(&[w0], apex) });
        for s in c.steps.iter().rev() {
            moves.push(DeformationMove::Expand {
                face: with(s.free_face.vertices(), apex),
                coface: with(s.coface.vertices(), apex),
            });
        }
    }
    for (own, other, apex) in [(k1, k2, apexes.0), (k2, k1, apexes.1)] {
        let mut only: Vec<_> = own.simplices().filter(|s| !other.contains(s)).copied().collect();
        only.sort_by(|a, b| b.dim().cmp(&a.dim()).then(a.cmp(b)));
        for s in only {
            moves.push(DeformationMove::Collapse { face: s.vertices().to_vec(), coface: with(s.vertices(), apex) });
        }
    }
    let inter = k1.intersection(k2);
    let end = suspension_cells(&inter, apexes.0, apexes.1);
    let max_dim = moves
        .iter()
        .map(|m| match m {
            DeformationMove::Expand { coface, .. } | DeformationMove::Collapse { coface, .. } => coface.len() - 1,
        })
        .chain(k.dim())
        .max()
        .unwrap_or(0);
    let rec = DeformationRecord { start: k.clone(), apexes, moves, end, max_dim };
    rec.verify()?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::collapse_to_point;

    #[test]
    fn disk_split_in_two() {
        let k = SimplicialComplex::from_vertex_lists([[0, 1, 2], [0, 2, 3]]).unwrap();
        let k1 = SimplicialComplex::from_vertex_lists([[0, 1, 2]]).unwrap();
        let k2 = SimplicialComplex::from_vertex_lists([[0, 2, 3]]).unwrap();
        let c1 = collapse_to_point(&k1).unwrap();
        let c2 = collapse_to_point(&k2).unwrap();
        let rec = suspension_deformation(&k, [&c1, &c2]).unwrap();
        assert_eq!(cells_homology(&rec.end).betti, vec![1, 0, 0]);
        assert_eq!(rec.max_dim, 3);
    }

    #[test]
    fn rejects_non_cover() {
        let k = SimplicialComplex::from_vertex_lists([[0, 1, 2], [0, 2, 3]]).unwrap();
        let k1 = SimplicialComplex::from_vertex_lists([[0, 1, 2]]).unwrap();
        let c1 = collapse_to_point(&k1).unwrap();
        assert_eq!(suspension_deformation(&k, [&c1, &c1]), Err(DeformationError::NotACover));
    }
}
