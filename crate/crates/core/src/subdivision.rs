//! Barycentric subdivision with carrier bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Simplex, SimplicialComplex, Vertex};

/// `K -> K'`. Child vertex `i` is the barycenter of the `i`-th simplex of `K`
/// in lexicographic order.
#[derive(Debug, Clone)]
pub struct SubdivisionMap {
    parent: SimplicialComplex,
    child: SimplicialComplex,
    labels: Vec<Simplex>,
    ids: BTreeMap<Simplex, Vertex>,
}

impl SubdivisionMap {
    pub fn new(parent: &SimplicialComplex) -> Self {
        let labels: Vec<Simplex> = parent.simplices().copied().collect();
        let ids: BTreeMap<Simplex, Vertex> = labels.iter().enumerate().map(|(i, s)| (*s, i as Vertex)).collect();
        let mut set = BTreeSet::new();
        for s in parent.simplices() {
            let a = ids[s];
            set.insert(Simplex::vertex(a));
            for t in s.proper_faces() {
                let b = ids[&t];
                set.insert(Simplex::edge(a, b));
                for r in t.proper_faces() {
                    let c = ids[&r];
                    set.insert(Simplex::edge(a, c));
                    set.insert(Simplex::edge(b, c));
                    set.insert(Simplex::triangle(a, b, c));
                }
            }
        }
        SubdivisionMap {
            parent: parent.clone(),
            child: SimplicialComplex::from_closed_set(set),
            labels,
            ids,
        }
    }

    pub fn parent(&self) -> &SimplicialComplex {
        &self.parent
    }

    pub fn child(&self) -> &SimplicialComplex {
        &self.child
    }

    /// The parent simplex whose barycenter is child vertex `v`.
    pub fn label(&self, v: Vertex) -> Option<&Simplex> {
        self.labels.get(v as usize)
    }

    pub fn barycenter(&self, s: &Simplex) -> Option<Vertex> {
        self.ids.get(s).copied()
    }

    /// Chain of parent simplices (increasing dimension) spanned by a child simplex.
    pub fn chain(&self, s: &Simplex) -> Vec<Simplex> {
        let mut c: Vec<Simplex> = s.vertices().iter().map(|v| self.labels[*v as usize]).collect();
        c.sort_by_key(|x| (x.dim(), *x));
        c
    }

    /// Smallest parent simplex containing the child simplex.
    pub fn carrier(&self, s: &Simplex) -> Simplex {
        *self.chain(s).last().unwrap()
    }

    /// `L'` as a subcomplex of `K'` for a subcomplex `L` of `K`.
    pub fn image(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        let set = self
            .child
            .simplices()
            .filter(|s| s.vertices().iter().all(|v| sub.contains(&self.labels[*v as usize])))
            .copied()
            .collect();
        SimplicialComplex::from_closed_set(set)
    }
}

/// `K -> K' -> K''`.
#[derive(Debug, Clone)]
pub struct SecondSubdivision {
    pub first: SubdivisionMap,
    pub second: SubdivisionMap,
}

impl SecondSubdivision {
    pub fn new(k: &SimplicialComplex) -> Self {
        let first = SubdivisionMap::new(k);
        let second = SubdivisionMap::new(first.child());
        SecondSubdivision { first, second }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.second.child()
    }

    pub fn original(&self) -> &SimplicialComplex {
        self.first.parent()
    }

    /// Vertex of `K''` sitting at the barycenter of a simplex of `K`.
    pub fn barycenter(&self, s: &Simplex) -> Option<Vertex> {
        let b = self.first.barycenter(s)?;
        self.second.barycenter(&Simplex::vertex(b))
    }

    /// The `K'` simplex whose barycenter is `v`.
    pub fn label(&self, v: Vertex) -> Option<&Simplex> {
        self.second.label(v)
    }

    /// Number of vertices of the `K'` simplex labelling `v`.
    pub fn chain_length(&self, v: Vertex) -> usize {
        self.second.label(v).map(|s| s.len()).unwrap_or(0)
    }

    /// Smallest simplex of `K` containing a simplex of `K''`.
    pub fn carrier(&self, s: &Simplex) -> Simplex {
        self.first.carrier(&self.second.carrier(s))
    }

    /// `L''` inside `K''`.
    pub fn image(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        self.second.image(&self.first.image(sub))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_subdivides_into_six() {
        let k = SimplicialComplex::from_vertex_lists([[0, 1, 2]]).unwrap();
        let sd = SubdivisionMap::new(&k);
        assert_eq!(sd.child().f_vector(), [7, 12, 6]);
        let t = Simplex::triangle(0, 1, 2);
        let b = sd.barycenter(&t).unwrap();
        assert_eq!(sd.label(b), Some(&t));
        for s in sd.child().triangles() {
            assert_eq!(sd.carrier(s), t);
        }
    }

    #[test]
    fn second_subdivision_of_triangle() {
        let k = SimplicialComplex::from_vertex_lists([[0, 1, 2]]).unwrap();
        let sd = SecondSubdivision::new(&k);
        assert_eq!(sd.complex().triangles().count(), 36);
        assert_eq!(sd.complex().euler_characteristic(), 1);
        let e = SimplicialComplex::from_vertex_lists([[0, 1]]).unwrap();
        assert_eq!(sd.image(&e).f_vector(), [5, 4, 0]);
    }
}
