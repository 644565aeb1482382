//! Elementary and strong collapses with replayable certificates.
//!
//! For complexes of dimension at most two the set of triangles removable by
//! elementary collapses does not depend on the order of the moves: removing a
//! triangle only lowers the incidence counts of edges, and an edge that is
//! not in any triangle never blocks another triangle. So the greedy pass in
//! [`is_collapsible`] decides collapsibility exactly; [`is_collapsible_exhaustive`]
//! is the memoised search over all move orders, kept for cross-checking.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollapseError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("step {index}: {face} is not a free face of {coface}")]
    NotFree { index: usize, face: Simplex, coface: Simplex },
    #[error("step {index}: vertex {removed} is not dominated by {dominator}")]
    NotDominated { index: usize, removed: Vertex, dominator: Vertex },
    #[error("replay does not end at the recorded complex")]
    EndMismatch,
    #[error("certificate does not end at a single vertex")]
    NotToPoint,
    #[error("subcomplex is not contained in the certificate's start")]
    NotSubcomplex,
    #[error("parent certificate does not replay: {0}")]
    ParentCertificateInvalid(Box<CollapseError>),
    #[error("expected a 2-dimensional subcomplex")]
    NotTwoDimensional,
    #[error("no free edge on triangle {0} while following the parent order")]
    NoFreeEdge(Simplex),
}

/// Remove `free_face` and its unique proper coface `coface`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CollapseStep {
    pub free_face: Simplex,
    pub coface: Simplex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    pub start: SimplicialComplex,
    pub steps: Vec<CollapseStep>,
    pub end: SimplicialComplex,
}

impl CollapseCertificate {
    /// Replays every step and returns the complex reached.
    pub fn replay(&self) -> Result<SimplicialComplex, CollapseError> {
        replay_steps(&self.start, &self.steps)
    }

    pub fn verify(&self) -> Result<(), CollapseError> {
        if self.replay()? != self.end {
            return Err(CollapseError::EndMismatch);
        }
        Ok(())
    }

    /// Replays and checks that the end is a single vertex.
    pub fn verify_to_point(&self) -> Result<(), CollapseError> {
        self.verify()?;
        if self.end.len() != 1 {
            return Err(CollapseError::NotToPoint);
        }
        Ok(())
    }

    pub fn reaches_point(&self) -> bool {
        self.end.len() == 1
    }
}

/// Proof that no sequence of collapses reaches a point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustionProof {
    /// Collapses from the start to `stuck`.
    pub steps: Vec<CollapseStep>,
    /// A complex with no free face and more than one simplex.
    pub stuck: SimplicialComplex,
    pub nodes_expanded: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CollapsibilityVerdict {
    Collapsible(CollapseCertificate),
    NotCollapsible(ExhaustionProof),
    Unknown { nodes_expanded: u64 },
}

impl CollapsibilityVerdict {
    pub fn is_collapsible(&self) -> bool {
        matches!(self, CollapsibilityVerdict::Collapsible(_))
    }

    pub fn certificate(&self) -> Option<&CollapseCertificate> {
        match self {
            CollapsibilityVerdict::Collapsible(c) => Some(c),
            _ => None,
        }
    }
}

/// Simplices with codimension-one incidences, indexed in lexicographic order.
pub(crate) struct Indexed {
    pub simplices: Vec<Simplex>,
    pub index: HashMap<Simplex, usize>,
    pub facets: Vec<Vec<usize>>,
    pub cofacets: Vec<Vec<usize>>,
}

impl Indexed {
    pub fn new(k: &SimplicialComplex) -> Self {
        let simplices: Vec<Simplex> = k.simplices().copied().collect();
        let index: HashMap<Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut facets = vec![Vec::new(); simplices.len()];
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                let j = index[&f];
                facets[i].push(j);
                cofacets[j].push(i);
            }
        }
        Indexed { simplices, index, facets, cofacets }
    }
}

pub(crate) struct CollapseState<'a> {
    ix: &'a Indexed,
    present: Vec<bool>,
    up: Vec<u32>,
    alive: usize,
}

impl<'a> CollapseState<'a> {
    pub fn new(ix: &'a Indexed) -> Self {
        let up = ix.cofacets.iter().map(|c| c.len() as u32).collect();
        CollapseState { ix, present: vec![true; ix.simplices.len()], up, alive: ix.simplices.len() }
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        if !self.present[i] || self.up[i] != 1 {
            return None;
        }
        self.ix.cofacets[i].iter().copied().find(|&j| self.present[j])
    }

    fn remove(&mut self, i: usize) {
        self.present[i] = false;
        self.alive -= 1;
        for &f in &self.ix.facets[i] {
            self.up[f] -= 1;
        }
    }

    pub fn collapse(&mut self, face: usize, coface: usize) {
        self.remove(coface);
        self.remove(face);
    }

    pub fn to_complex(&self) -> SimplicialComplex {
        let set = (0..self.present.len()).filter(|&i| self.present[i]).map(|i| self.ix.simplices[i]).collect();
        SimplicialComplex::from_closed_set(set)
    }
}

fn replay_steps(start: &SimplicialComplex, steps: &[CollapseStep]) -> Result<SimplicialComplex, CollapseError> {
    let ix = Indexed::new(start);
    let mut st = CollapseState::new(&ix);
    for (index, step) in steps.iter().enumerate() {
        let bad = CollapseError::NotFree { index, face: step.free_face, coface: step.coface };
        let (Some(&i), Some(&j)) = (ix.index.get(&step.free_face), ix.index.get(&step.coface)) else {
            return Err(bad);
        };
        if st.partner(i) != Some(j) {
            return Err(bad);
        }
        st.collapse(i, j);
    }
    Ok(st.to_complex())
}

/// Applies a single elementary collapse.
pub fn apply_collapse(k: &SimplicialComplex, step: &CollapseStep) -> Result<SimplicialComplex, CollapseError> {
    replay_steps(k, std::slice::from_ref(step))
}

/// All currently free pairs, in lexicographic order of the free face.
pub fn free_faces(k: &SimplicialComplex) -> Vec<CollapseStep> {
    let ix = Indexed::new(k);
    let st = CollapseState::new(&ix);
    (0..ix.simplices.len())
        .filter_map(|i| st.partner(i).map(|j| CollapseStep { free_face: ix.simplices[i], coface: ix.simplices[j] }))
        .collect()
}

/// Greedy lexicographic collapse until no free face is left (or the budget runs out).
pub fn collapse_greedy(k: &SimplicialComplex, budget: u64) -> (Vec<CollapseStep>, SimplicialComplex, bool) {
    let ix = Indexed::new(k);
    let mut st = CollapseState::new(&ix);
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..ix.simplices.len() {
        if let Some(j) = st.partner(i) {
            queue.insert((i, j));
        }
    }
    let mut steps = Vec::new();
    let mut exhausted = true;
    while let Some((i, j)) = queue.pop_first() {
        if st.partner(i) != Some(j) {
            continue;
        }
        if steps.len() as u64 >= budget {
            exhausted = false;
            break;
        }
        st.collapse(i, j);
        steps.push(CollapseStep { free_face: ix.simplices[i], coface: ix.simplices[j] });
        for &f in ix.facets[j].iter().chain(ix.facets[i].iter()) {
            if let Some(p) = st.partner(f) {
                queue.insert((f, p));
            }
        }
    }
    (steps, st.to_complex(), exhausted)
}

/// Exact collapsibility test with a certificate either way.
pub fn is_collapsible(k: &SimplicialComplex, budget: u64) -> Result<CollapsibilityVerdict, CollapseError> {
    k.require_connected()?;
    let (steps, end, exhausted) = collapse_greedy(k, budget);
    let nodes = steps.len() as u64;
    if !exhausted {
        return Ok(CollapsibilityVerdict::Unknown { nodes_expanded: nodes });
    }
    if end.len() == 1 {
        Ok(CollapsibilityVerdict::Collapsible(CollapseCertificate { start: k.clone(), steps, end }))
    } else {
        Ok(CollapsibilityVerdict::NotCollapsible(ExhaustionProof { steps, stuck: end, nodes_expanded: nodes }))
    }
}

/// Convenience wrapper: a certificate to a point, or `None`.
pub fn collapse_to_point(k: &SimplicialComplex) -> Option<CollapseCertificate> {
    match is_collapsible(k, u64::MAX) {
        Ok(CollapsibilityVerdict::Collapsible(c)) => Some(c),
        _ => None,
    }
}

/// Memoised depth-first search over every collapse order. Exponential; meant
/// for small complexes and for checking the greedy decision procedure.
pub fn is_collapsible_exhaustive(k: &SimplicialComplex, budget: u64) -> Result<CollapsibilityVerdict, CollapseError> {
    k.require_connected()?;
    let ix = Indexed::new(k);
    let mut st = CollapseState::new(&ix);
    let mut dead: HashSet<Vec<bool>> = HashSet::new();
    let mut path = Vec::new();
    let mut nodes = 0u64;
    let mut stuck: Option<(Vec<CollapseStep>, SimplicialComplex)> = None;

    fn dfs(
        st: &mut CollapseState<'_>,
        dead: &mut HashSet<Vec<bool>>,
        path: &mut Vec<(usize, usize)>,
        nodes: &mut u64,
        budget: u64,
        stuck: &mut Option<(Vec<CollapseStep>, SimplicialComplex)>,
    ) -> Option<bool> {
        if st.alive == 1 {
            return Some(true);
        }
        if dead.contains(&st.present) {
            return Some(false);
        }
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let moves: Vec<(usize, usize)> =
            (0..st.present.len()).filter_map(|i| st.partner(i).map(|j| (i, j))).collect();
        if moves.is_empty() && stuck.is_none() {
            let steps = path
                .iter()
                .map(|&(i, j)| CollapseStep { free_face: st.ix.simplices[i], coface: st.ix.simplices[j] })
                .collect();
            *stuck = Some((steps, st.to_complex()));
        }
        for (i, j) in moves {
            let saved = (st.present.clone(), st.up.clone(), st.alive);
            st.collapse(i, j);
            path.push((i, j));
            match dfs(st, dead, path, nodes, budget, stuck) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            path.pop();
            (st.present, st.up, st.alive) = saved;
        }
        dead.insert(st.present.clone());
        Some(false)
    }

    match dfs(&mut st, &mut dead, &mut path, &mut nodes, budget, &mut stuck) {
        None => Ok(CollapsibilityVerdict::Unknown { nodes_expanded: nodes }),
        Some(true) => {
            let steps = path
                .iter()
                .map(|&(i, j)| CollapseStep { free_face: ix.simplices[i], coface: ix.simplices[j] })
                .collect();
            Ok(CollapsibilityVerdict::Collapsible(CollapseCertificate {
                start: k.clone(),
                steps,
                end: st.to_complex(),
            }))
        }
        Some(false) => {
            let (steps, stuck) = stuck.expect("a finite search reaches a terminal state");
            Ok(CollapsibilityVerdict::NotCollapsible(ExhaustionProof { steps, stuck, nodes_expanded: nodes }))
        }
    }
}

/// Collapses a 2-dimensional subcomplex `L` of a collapsible `K` onto a graph,
/// removing the triangles of `L` in the order the parent certificate removes them.
pub fn collapse_to_graph(l: &SimplicialComplex, parent: &CollapseCertificate) -> Result<CollapseCertificate, CollapseError> {
    parent.verify().map_err(|e| CollapseError::ParentCertificateInvalid(Box::new(e)))?;
    if !l.is_subcomplex_of(&parent.start) {
        return Err(CollapseError::NotSubcomplex);
    }
    if l.dim() != Some(2) {
        return Err(CollapseError::NotTwoDimensional);
    }
    let order: Vec<Simplex> = parent
        .steps
        .iter()
        .filter(|s| s.coface.dim() == 2 && l.contains(&s.coface))
        .map(|s| s.coface)
        .collect();
    let ix = Indexed::new(l);
    let mut st = CollapseState::new(&ix);
    let mut steps = Vec::new();
    for t in order {
        let ti = ix.index[&t];
        let edge = ix.facets[ti].iter().copied().find(|&e| st.partner(e) == Some(ti));
        let Some(e) = edge else { return Err(CollapseError::NoFreeEdge(t)) };
        st.collapse(e, ti);
        steps.push(CollapseStep { free_face: ix.simplices[e], coface: t });
    }
    let end = st.to_complex();
    debug_assert!(end.dim() != Some(2));
    Ok(CollapseCertificate { start: l.clone(), steps, end })
}

/// Remove `removed`, which is dominated by `dominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StrongCollapseStep {
    pub removed: Vertex,
    pub dominator: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongCollapseCertificate {
    pub start: SimplicialComplex,
    pub steps: Vec<StrongCollapseStep>,
    pub end: SimplicialComplex,
}

/// Which dominated vertex to remove first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexOrder {
    #[default]
    Smallest,
    Largest,
}

/// Per-vertex lists of the simplices containing it.
#[derive(Clone)]
pub(crate) struct StarIndex {
    inc: BTreeMap<Vertex, BTreeSet<Simplex>>,
}

impl StarIndex {
    pub fn new(k: &SimplicialComplex) -> Self {
        let mut inc: BTreeMap<Vertex, BTreeSet<Simplex>> = k.vertices().map(|v| (v, BTreeSet::new())).collect();
        for s in k.simplices() {
            for v in s.vertices() {
                inc.get_mut(v).unwrap().insert(*s);
            }
        }
        StarIndex { inc }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.inc.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.inc.keys().copied()
    }

    /// Vertices dominating `v`, ascending.
    pub fn dominators(&self, v: Vertex) -> Vec<Vertex> {
        let sims = &self.inc[&v];
        let maximal: Vec<&Simplex> = sims
            .iter()
            .filter(|s| !sims.iter().any(|t| t.len() > s.len() && s.is_face_of(t)))
            .collect();
        let mut common: Option<BTreeSet<Vertex>> = None;
        for m in maximal {
            let vs: BTreeSet<Vertex> = m.vertices().iter().copied().filter(|x| *x != v).collect();
            common = Some(match common {
                None => vs,
                Some(c) => c.intersection(&vs).copied().collect(),
            });
        }
        common.unwrap_or_default().into_iter().collect()
    }

    pub fn is_dominated_by(&self, v: Vertex, w: Vertex) -> bool {
        self.dominators(v).contains(&w)
    }

    pub fn neighbours(&self, v: Vertex) -> BTreeSet<Vertex> {
        self.inc[&v].iter().flat_map(|s| s.vertices().iter().copied()).filter(|x| *x != v).collect()
    }

    /// Link simplices of `v`.
    pub fn link(&self, v: Vertex) -> Vec<Simplex> {
        self.inc[&v].iter().filter_map(|s| s.without_vertex(v)).collect()
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        let sims = self.inc.remove(&v).unwrap_or_default();
        for s in sims {
            for u in s.vertices() {
                if *u != v {
                    self.inc.get_mut(u).unwrap().remove(&s);
                }
            }
        }
    }

    pub fn to_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_closed_set(self.inc.values().flatten().copied().collect())
    }
}

/// Pairs `(v, v')` with `v` dominated by `v'`.
pub fn dominated_vertices(k: &SimplicialComplex) -> Vec<StrongCollapseStep> {
    let idx = StarIndex::new(k);
    idx.vertices()
        .flat_map(|v| idx.dominators(v).into_iter().map(move |w| StrongCollapseStep { removed: v, dominator: w }))
        .collect()
}

/// Removes dominated vertices until none is left. The core does not depend on
/// the order up to isomorphism; `order` only picks which one goes first.
pub fn strong_collapse_core_ordered(k: &SimplicialComplex, order: VertexOrder) -> StrongCollapseCertificate {
    let mut idx = StarIndex::new(k);
    let mut dominated: BTreeSet<Vertex> = idx.vertices().filter(|v| !idx.dominators(*v).is_empty()).collect();
    let mut steps = Vec::new();
    loop {
        let next = match order {
            VertexOrder::Smallest => dominated.pop_first(),
            VertexOrder::Largest => dominated.pop_last(),
        };
        let Some(v) = next else { break };
        let doms = idx.dominators(v);
        let Some(&w) = doms.first() else { continue };
        let nbrs = idx.neighbours(v);
        idx.remove_vertex(v);
        steps.push(StrongCollapseStep { removed: v, dominator: w });
        for u in nbrs {
            if idx.dominators(u).is_empty() {
                dominated.remove(&u);
            } else {
                dominated.insert(u);
            }
        }
    }
    StrongCollapseCertificate { start: k.clone(), steps, end: idx.to_complex() }
}

pub fn strong_collapse_core(k: &SimplicialComplex) -> StrongCollapseCertificate {
    strong_collapse_core_ordered(k, VertexOrder::Smallest)
}

pub fn is_strong_collapsible(k: &SimplicialComplex) -> bool {
    !k.is_empty() && strong_collapse_core(k).end.len() == 1
}

impl StrongCollapseCertificate {
    pub fn replay(&self) -> Result<SimplicialComplex, CollapseError> {
        let mut idx = StarIndex::new(&self.start);
        for (index, s) in self.steps.iter().enumerate() {
            let bad = CollapseError::NotDominated { index, removed: s.removed, dominator: s.dominator };
            if s.removed == s.dominator || !idx.contains(s.removed) || !idx.contains(s.dominator) {
                return Err(bad);
            }
            if !idx.is_dominated_by(s.removed, s.dominator) {
                return Err(bad);
            }
            idx.remove_vertex(s.removed);
        }
        Ok(idx.to_complex())
    }

    pub fn verify(&self) -> Result<(), CollapseError> {
        if self.replay()? != self.end {
            return Err(CollapseError::EndMismatch);
        }
        Ok(())
    }

    pub fn verify_to_point(&self) -> Result<(), CollapseError> {
        self.verify()?;
        if self.end.len() != 1 {
            return Err(CollapseError::NotToPoint);
        }
        Ok(())
    }

    /// Expands each vertex removal into elementary collapses.
    pub fn to_elementary(&self) -> Result<CollapseCertificate, CollapseError> {
        let mut idx = StarIndex::new(&self.start);
        let mut steps = Vec::new();
        for (index, s) in self.steps.iter().enumerate() {
            let (v, w) = (s.removed, s.dominator);
            if !idx.contains(v) || !idx.contains(w) || !idx.is_dominated_by(v, w) {
                return Err(CollapseError::NotDominated { index, removed: v, dominator: w });
            }
            let mut m: Vec<Simplex> = idx.link(v).into_iter().filter(|x| !x.contains_vertex(w)).collect();
            m.sort_by(|a, b| b.dim().cmp(&a.dim()).then(a.cmp(b)));
            for sigma in m {
                let face = sigma.join_vertex(v)?;
                steps.push(CollapseStep { free_face: face, coface: face.join_vertex(w)? });
            }
            steps.push(CollapseStep { free_face: Simplex::vertex(v), coface: Simplex::edge(v, w) });
            idx.remove_vertex(v);
        }
        let cert = CollapseCertificate { start: self.start.clone(), steps, end: idx.to_complex() };
        cert.verify()?;
        Ok(cert)
    }
}
