//! Local structure of 2-complexes: inner edges, inner-connectedness, links,
//! splittable and singular vertices, and the no-cover-of-size-two criterion.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::homology::{homology, HomologySummary};
use crate::subdivision::SecondSubdivision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("complex is not 2-dimensional")]
    NotDim2,
    #[error("complex is not a graph")]
    NotAGraph,
    #[error("complex is not homogeneous")]
    NotHomogeneous,
    #[error("complex is not inner-connected")]
    NotInnerConnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub dim: Option<usize>,
    pub f_vector: [usize; 3],
    pub euler_characteristic: i64,
    pub homogeneous: bool,
    pub strongly_connected: bool,
    pub inner_connected: bool,
    pub pseudosurface: bool,
    pub inner_edges: Vec<Simplex>,
    pub boundary_edges: Vec<Simplex>,
    pub splittable_vertices: Vec<Vertex>,
    pub disconnected_link_vertices: Vec<Vertex>,
    pub singular_vertices: Vec<Vertex>,
}

pub fn analyze(k: &SimplicialComplex) -> StructureReport {
    let degrees = k.edge_degrees();
    let two_dim = k.dim() == Some(2);
    let homogeneous = k.is_homogeneous();
    let strongly_connected = two_dim && homogeneous && dual_components(k, false).len() == 1;
    let inner_connected = is_inner_connected(k).0;
    StructureReport {
        dim: k.dim(),
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        homogeneous,
        strongly_connected,
        inner_connected,
        pseudosurface: strongly_connected && degrees.values().all(|d| *d <= 2),
        inner_edges: if two_dim { degrees.iter().filter(|(_, d)| **d == 2).map(|(e, _)| *e).collect() } else { vec![] },
        boundary_edges: degrees.iter().filter(|(_, d)| **d == 1).map(|(e, _)| *e).collect(),
        splittable_vertices: splittable_vertices(k),
        disconnected_link_vertices: disconnected_link_vertices(k),
        singular_vertices: if two_dim && homogeneous { singular_vertices(k).unwrap_or_default() } else { vec![] },
    }
}

/// Edges lying in exactly two triangles.
pub fn inner_edges(k: &SimplicialComplex) -> Result<Vec<Simplex>, StructureError> {
    if k.dim() != Some(2) {
        return Err(StructureError::NotDim2);
    }
    Ok(k.edge_degrees().into_iter().filter(|(_, d)| *d == 2).map(|(e, _)| e).collect())
}

/// Components of the dual graph on triangles, adjacent through inner edges
/// only (`inner_only`) or through any shared edge.
fn dual_components(k: &SimplicialComplex, inner_only: bool) -> Vec<Vec<Simplex>> {
    let degrees = k.edge_degrees();
    dual_components_filtered(k, |e| !inner_only || degrees[e] == 2)
}

fn dual_components_filtered(k: &SimplicialComplex, usable: impl Fn(&Simplex) -> bool) -> Vec<Vec<Simplex>> {
    let triangles: Vec<Simplex> = k.triangles().copied().collect();
    let mut by_edge: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, t) in triangles.iter().enumerate() {
        for e in t.facets() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut seen = vec![false; triangles.len()];
    let mut out = Vec::new();
    for s in 0..triangles.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = Vec::new();
        let mut q = VecDeque::from([s]);
        while let Some(i) = q.pop_front() {
            comp.push(triangles[i]);
            for e in triangles[i].facets() {
                if !usable(&e) {
                    continue;
                }
                for &j in &by_edge[&e] {
                    if !seen[j] {
                        seen[j] = true;
                        q.push_back(j);
                    }
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

/// Homogeneous of dimension 2 with the inner dual graph connected. The
/// witness lists the triangles of each inner component.
pub fn is_inner_connected(k: &SimplicialComplex) -> (bool, Vec<Vec<Simplex>>) {
    if k.dim() != Some(2) || !k.is_homogeneous() {
        return (false, Vec::new());
    }
    let comps = dual_components(k, true);
    (comps.len() == 1, comps)
}

pub fn is_pseudosurface(k: &SimplicialComplex) -> bool {
    analyze(k).pseudosurface
}

fn graph_components(vertices: &BTreeSet<Vertex>, edges: &[(Vertex, Vertex)], skip: Option<Vertex>) -> usize {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = vertices.iter().filter(|v| Some(**v) != skip).map(|v| (*v, vec![])).collect();
    for &(a, b) in edges {
        if Some(a) != skip && Some(b) != skip {
            adj.get_mut(&a).unwrap().push(b);
            adj.get_mut(&b).unwrap().push(a);
        }
    }
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &s in adj.keys() {
        if !seen.insert(s) {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    count
}

fn graph_parts(g: &SimplicialComplex) -> (BTreeSet<Vertex>, Vec<(Vertex, Vertex)>) {
    let vs = g.vertices().collect();
    let es = g.edges().map(|e| (e.vertices()[0], e.vertices()[1])).collect();
    (vs, es)
}

/// Cut vertices of a graph: removing one increases the number of components.
pub fn bridges(g: &SimplicialComplex) -> Result<Vec<Vertex>, StructureError> {
    if g.dim().map_or(false, |d| d > 1) {
        return Err(StructureError::NotAGraph);
    }
    let (vs, es) = graph_parts(g);
    let base = graph_components(&vs, &es, None);
    Ok(vs.iter().copied().filter(|v| graph_components(&vs, &es, Some(*v)) > base).collect())
}

/// Vertices whose link has a cut vertex.
pub fn splittable_vertices(k: &SimplicialComplex) -> Vec<Vertex> {
    k.vertices()
        .filter(|v| {
            let lk = k.link(*v).unwrap();
            lk.dim().map_or(false, |d| d <= 1) && !bridges(&lk).unwrap().is_empty()
        })
        .collect()
}

pub fn disconnected_link_vertices(k: &SimplicialComplex) -> Vec<Vertex> {
    k.vertices().filter(|v| k.link(*v).unwrap().components().len() > 1).collect()
}

fn is_simple_cycle(g: &SimplicialComplex) -> bool {
    let adj = g.adjacency();
    adj.len() >= 3 && adj.values().all(|n| n.len() == 2) && g.components().len() == 1
}

fn is_simple_arc(g: &SimplicialComplex) -> bool {
    let adj = g.adjacency();
    adj.len() >= 2
        && adj.values().all(|n| n.len() <= 2)
        && adj.values().filter(|n| n.len() == 1).count() == 2
        && g.components().len() == 1
}

/// Vertices whose link is neither a simple cycle nor a simple arc.
pub fn singular_vertices(k: &SimplicialComplex) -> Result<Vec<Vertex>, StructureError> {
    if k.dim() != Some(2) {
        return Err(StructureError::NotDim2);
    }
    if !k.is_homogeneous() {
        return Err(StructureError::NotHomogeneous);
    }
    Ok(k.vertices()
        .filter(|v| {
            let lk = k.link(*v).unwrap();
            !is_simple_cycle(&lk) && !is_simple_arc(&lk)
        })
        .collect())
}

/// Inner dual graph of `K''` using only inner edges that avoid the singular
/// vertices of `K`. Points of `K''` inside a singular edge of `K` are not
/// avoided: a triangle of `K''` along such an edge has one of them on each of
/// its inner edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedConnectivity {
    pub connected: bool,
    pub components: Vec<Vec<Simplex>>,
    /// Singular vertices of `K`, as vertices of `K''`.
    pub singular_vertices: Vec<Vertex>,
}

/// Singular vertices of `K` as vertices of `K''`.
pub fn avoided_vertices(sd: &SecondSubdivision) -> Result<BTreeSet<Vertex>, StructureError> {
    Ok(singular_vertices(sd.original())?
        .into_iter()
        .map(|v| sd.barycenter(&Simplex::vertex(v)).expect("vertex of K"))
        .collect())
}

fn avoiding_inner_edge(degrees: &BTreeMap<Simplex, usize>, avoid: &BTreeSet<Vertex>, e: &Simplex) -> bool {
    degrees[e] == 2 && e.vertices().iter().all(|v| !avoid.contains(v))
}

pub fn refined_inner_connectivity(sd: &SecondSubdivision) -> Result<RefinedConnectivity, StructureError> {
    if !is_inner_connected(sd.original()).0 {
        return Err(StructureError::NotInnerConnected);
    }
    let k2 = sd.complex();
    let avoid = avoided_vertices(sd)?;
    let degrees = k2.edge_degrees();
    let comps = dual_components_filtered(k2, |e| avoiding_inner_edge(&degrees, &avoid, e));
    Ok(RefinedConnectivity { connected: comps.len() == 1, components: comps, singular_vertices: avoid.into_iter().collect() })
}

/// A sequence of triangles of `K''` from `from` to `to`, consecutive ones
/// sharing an inner edge that avoids the singular vertices of `K`.
pub fn refined_inner_sequence(sd: &SecondSubdivision, from: Simplex, to: Simplex) -> Option<Vec<Simplex>> {
    let k = sd.complex();
    let avoid = avoided_vertices(sd).ok()?;
    let degrees = k.edge_degrees();
    let mut by_edge: BTreeMap<Simplex, Vec<Simplex>> = BTreeMap::new();
    for t in k.triangles() {
        for e in t.facets() {
            by_edge.entry(e).or_default().push(*t);
        }
    }
    let mut prev: BTreeMap<Simplex, Option<Simplex>> = BTreeMap::from([(from, None)]);
    let mut q = VecDeque::from([from]);
    while let Some(t) = q.pop_front() {
        if t == to {
            let mut path = vec![t];
            let mut cur = t;
            while let Some(Some(p)) = prev.get(&cur) {
                path.push(*p);
                cur = *p;
            }
            path.reverse();
            return Some(path);
        }
        for e in t.facets() {
            if !avoiding_inner_edge(&degrees, &avoid, &e) {
                continue;
            }
            for &u in &by_edge[&e] {
                if !prev.contains_key(&u) {
                    prev.insert(u, Some(t));
                    q.push_back(u);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub holds: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct No2Checklist {
    pub inner_connected: CheckItem,
    pub homology_condition: CheckItem,
    pub not_collapsible: CheckItem,
    pub splittable_at_most_one: CheckItem,
    pub links_connected: CheckItem,
}

impl No2Checklist {
    pub fn items(&self) -> [(&'static str, &CheckItem); 5] {
        [
            ("inner_connected", &self.inner_connected),
            ("homology_condition", &self.homology_condition),
            ("not_collapsible", &self.not_collapsible),
            ("splittable_at_most_one", &self.splittable_at_most_one),
            ("links_connected", &self.links_connected),
        ]
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.items().iter().filter(|(_, c)| !c.holds).map(|(n, _)| *n).collect()
    }
}

/// Every hypothesis of the criterion holds, so no triangulation of the
/// polyhedron is a union of two collapsible subcomplexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct No2Certificate {
    pub checklist: No2Checklist,
    pub homology: HomologySummary,
    pub splittable_vertices: Vec<Vertex>,
    pub plgcat: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum No2Verdict {
    Certificate(No2Certificate),
    Inapplicable { checklist: No2Checklist, failing: Vec<&'static str> },
}

impl No2Verdict {
    pub fn certificate(&self) -> Option<&No2Certificate> {
        match self {
            No2Verdict::Certificate(c) => Some(c),
            No2Verdict::Inapplicable { .. } => None,
        }
    }
}

fn item(holds: bool, evidence: impl Into<String>) -> CheckItem {
    CheckItem { holds, evidence: evidence.into() }
}

/// A homogeneous 2-complex without boundary edges has no free edge in any
/// triangulation, so it is not PL collapsible.
pub fn boundaryless_evidence(k: &SimplicialComplex) -> Option<String> {
    if k.dim() != Some(2) || !k.is_homogeneous() {
        return None;
    }
    let degrees = k.edge_degrees();
    let min = degrees.values().min().copied().unwrap_or(0);
    (min >= 2).then(|| format!("homogeneous with all {} edges in at least {min} triangles", degrees.len()))
}

pub fn no2_criterion(k: &SimplicialComplex) -> No2Verdict {
    let (ic, comps) = is_inner_connected(k);
    let inner_connected = item(ic, format!("{} inner component(s)", comps.len()));
    let h = homology(k);
    let (b1, b2) = (h.betti[1], h.betti[2]);
    let homology_condition = item(b2 == 0 || b2 < b1, format!("b1 = {b1}, b2 = {b2}"));
    let not_collapsible = match boundaryless_evidence(k) {
        Some(ev) => item(true, ev),
        None => item(false, "non-collapsibility unproved: boundary edges present"),
    };
    let split = splittable_vertices(k);
    let splittable_at_most_one = item(split.len() <= 1, format!("splittable vertices {split:?}"));
    let splitset: BTreeSet<Vertex> = split.iter().copied().collect();
    let bad_links: Vec<Vertex> =
        disconnected_link_vertices(k).into_iter().filter(|v| !splitset.contains(v)).collect();
    let links_connected = item(bad_links.is_empty(), format!("non-splittable vertices with disconnected link {bad_links:?}"));
    let checklist = No2Checklist { inner_connected, homology_condition, not_collapsible, splittable_at_most_one, links_connected };
    let failing = checklist.failing();
    if failing.is_empty() && k.dim() == Some(2) {
        No2Verdict::Certificate(No2Certificate { checklist, homology: h, splittable_vertices: split, plgcat: 3 })
    } else {
        No2Verdict::Inapplicable { checklist, failing }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(lists: &[&[Vertex]]) -> SimplicialComplex {
        SimplicialComplex::from_vertex_lists(lists.iter().copied()).unwrap()
    }

    #[test]
    fn bridges_of_small_graphs() {
        assert_eq!(bridges(&k(&[&[0, 1], &[1, 2]])).unwrap(), vec![1]);
        assert!(bridges(&k(&[&[0, 1], &[1, 2], &[0, 2]])).unwrap().is_empty());
        let bowtie = k(&[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[3, 4], &[0, 4]]);
        assert_eq!(bridges(&bowtie).unwrap(), vec![0]);
        assert_eq!(bridges(&k(&[&[0, 1, 2]])), Err(StructureError::NotAGraph));
    }

    #[test]
    fn wedge_at_vertex_is_not_inner_connected() {
        let w = k(&[&[0, 1, 2], &[0, 3, 4]]);
        assert!(!is_inner_connected(&w).0);
        assert_eq!(disconnected_link_vertices(&w), vec![0]);
    }

    #[test]
    fn disk_interior_vertex_is_regular() {
        let d = k(&[&[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 1, 4]]);
        assert!(singular_vertices(&d).unwrap().is_empty());
        assert!(is_inner_connected(&d).0);
        assert_eq!(inner_edges(&d).unwrap().len(), 4);
    }

    #[test]
    fn single_triangle_has_no_inner_edges() {
        assert!(inner_edges(&k(&[&[0, 1, 2]])).unwrap().is_empty());
        assert_eq!(inner_edges(&k(&[&[0, 1]])), Err(StructureError::NotDim2));
    }
}
