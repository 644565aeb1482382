//! Exhaustive search for a cover of a fixed triangulation by two collapsible
//! subcomplexes.
//!
//! Items are the triangles and maximal edges. Each item goes to piece 1,
//! piece 2, or both. Given the item sets, suitable pieces exist exactly when
//! every connected component of each side's closure is collapsible: the
//! components can then be joined by edge paths through vertices outside
//! the side, and conversely any component of a subcomplex of a collapsible
//! 2-complex collapses along with it to a forest.
//!
//! For an inner-connected, non-collapsible complex it is enough to look at
//! partitions of the triangles: an overlapping triangle `τ` with an inner
//! edge `e` shared with a triangle outside the overlap can be dropped from the
//! other piece by the elementary collapse `(e, τ)`, and the smaller piece
//! stays collapsible since the removable triangles of a 2-complex do not
//! depend on the collapse order.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{connect_components, Cover, CoverError};
use crate::collapse::{is_collapsible, DEFAULT_BUDGET};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::structure::is_inner_connected;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    /// Partitions of triangles when the complex is inner-connected, full otherwise.
    Auto,
    /// Every item to piece 1, piece 2 or both.
    Full,
    /// Every item to exactly one piece.
    Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes.
    pub budget: u64,
    pub mode: SearchMode,
    /// Enumerate items in reverse lexicographic order.
    pub reverse: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, mode: SearchMode::Auto, reverse: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CoverSearchVerdict {
    Found(Cover),
    NotFoundExhausted { nodes: u64, mode: SearchMode },
    Unknown { nodes: u64 },
}

impl CoverSearchVerdict {
    pub fn cover(&self) -> Option<&Cover> {
        match self {
            CoverSearchVerdict::Found(c) => Some(c),
            _ => None,
        }
    }
}

const ONE: u8 = 1;
const TWO: u8 = 2;
const BOTH: u8 = 3;

struct Problem {
    items: Vec<Simplex>,
    /// edge indices per item (the item itself for an edge)
    edges: Vec<Vec<usize>>,
    is_triangle: Vec<bool>,
    n_vertices: usize,
    n_edges: usize,
    edge_ends: Vec<[usize; 2]>,
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
}

/// Edge indices on the forest path from `u` to `v`.
fn tree_path(adj: &[Vec<(usize, usize)>], u: usize, v: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[u] = true;
    let mut q = VecDeque::from([u]);
    while let Some(x) = q.pop_front() {
        if x == v {
            break;
        }
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some((x, e));
                q.push_back(y);
            }
        }
    }
    let mut out = Vec::new();
    let mut x = v;
    while let Some((y, e)) = prev[x] {
        out.push(e);
        x = y;
    }
    out
}

impl Problem {
    fn new(k: &SimplicialComplex, reverse: bool) -> Self {
        let mut items: Vec<Simplex> = k.triangles().copied().collect();
        items.extend(k.maximal_simplices().into_iter().filter(|s| s.dim() == 1));
        if reverse {
            items.reverse();
        }
        // breadth-first over shared vertices, so components finish early
        let mut by_vertex: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (i, s) in items.iter().enumerate() {
            for v in s.vertices() {
                by_vertex.entry(*v).or_default().push(i);
            }
        }
        let mut order = Vec::new();
        let mut seen = vec![false; items.len()];
        for s in 0..items.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(i) = q.pop_front() {
                order.push(i);
                for v in items[i].vertices() {
                    for &j in &by_vertex[v] {
                        if !seen[j] {
                            seen[j] = true;
                            q.push_back(j);
                        }
                    }
                }
            }
        }
        let items: Vec<Simplex> = order.into_iter().map(|i| items[i]).collect();
        let vids: BTreeMap<Vertex, usize> = k.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let eids: BTreeMap<Simplex, usize> = k.edges().enumerate().map(|(i, e)| (*e, i)).collect();
        let edges = items
            .iter()
            .map(|s| if s.dim() == 2 { s.facets().iter().map(|e| eids[e]).collect() } else { vec![eids[s]] })
            .collect();
        Problem {
            is_triangle: items.iter().map(|s| s.dim() == 2).collect(),
            items,
            edges,
            n_vertices: vids.len(),
            n_edges: eids.len(),
            edge_ends: eids.keys().map(|e| [vids[&e.vertices()[0]], vids[&e.vertices()[1]]]).collect(),
        }
    }
}

struct Search<'a> {
    p: &'a Problem,
    assign: Vec<u8>,
    nodes: u64,
    budget: u64,
    values: &'static [u8],
}

fn on_side(a: u8, side: u8) -> bool {
    a == side || a == BOTH
}

impl<'a> Search<'a> {
    /// Nonempty 2-core: the side's triangles cannot all be collapsed away.
    fn has_core(&self, side: u8) -> bool {
        let p = self.p;
        let tris: Vec<usize> =
            (0..p.items.len()).filter(|&i| p.is_triangle[i] && on_side(self.assign[i], side)).collect();
        if tris.len() < 2 {
            return false;
        }
        let mut count = vec![0u32; p.n_edges];
        for &t in &tris {
            for &e in &p.edges[t] {
                count[e] += 1;
            }
        }
        let mut alive = vec![true; tris.len()];
        let mut remaining = tris.len();
        loop {
            let mut changed = false;
            for (k, &t) in tris.iter().enumerate() {
                if alive[k] && p.edges[t].iter().any(|&e| count[e] == 1) {
                    alive[k] = false;
                    remaining -= 1;
                    changed = true;
                    for &e in &p.edges[t] {
                        count[e] -= 1;
                    }
                }
            }
            if !changed || remaining == 0 {
                return remaining > 0;
            }
        }
    }

    /// Every mod-2 cycle of the side's closure must bound in the largest
    /// complex the side can still grow into, since the final side has no
    /// first homology.
    fn cycles_bound(&self, side: u8) -> bool {
        let p = self.p;
        let words = p.n_edges.div_ceil(64);
        // echelon basis of boundaries of triangles that may still join the side
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let reduce = |basis: &[(usize, Vec<u64>)], v: &mut Vec<u64>| {
            for (piv, b) in basis {
                if v[piv / 64] >> (piv % 64) & 1 == 1 {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x ^= y;
                    }
                }
            }
        };
        for i in 0..p.items.len() {
            let a = self.assign[i];
            if !p.is_triangle[i] || !(a == 0 || on_side(a, side)) {
                continue;
            }
            let mut v = vec![0u64; words];
            for &e in &p.edges[i] {
                v[e / 64] ^= 1 << (e % 64);
            }
            reduce(&basis, &mut v);
            if let Some(piv) = first_bit(&v) {
                for (_, b) in basis.iter_mut() {
                    if b[piv / 64] >> (piv % 64) & 1 == 1 {
                        for (x, y) in b.iter_mut().zip(&v) {
                            *x ^= y;
                        }
                    }
                }
                basis.push((piv, v));
            }
        }
        // fundamental cycles of the side's 1-skeleton
        let mut edges: Vec<usize> =
            (0..p.items.len()).filter(|&i| on_side(self.assign[i], side)).flat_map(|i| p.edges[i].iter().copied()).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p.n_vertices];
        let mut parent: Vec<usize> = (0..p.n_vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in edges {
            let [u, v] = p.edge_ends[e];
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                adj[u].push((v, e));
                adj[v].push((u, e));
                continue;
            }
            let mut cycle = vec![0u64; words];
            cycle[e / 64] ^= 1 << (e % 64);
            for f in tree_path(&adj, u, v) {
                cycle[f / 64] ^= 1 << (f % 64);
            }
            reduce(&basis, &mut cycle);
            if cycle.iter().any(|w| *w != 0) {
                return false;
            }
        }
        true
    }

    fn side_ok(&self, side: u8) -> bool {
        !self.has_core(side) && self.cycles_bound(side)
    }

    /// `Some(true)` when a valid complete assignment is reached, `None` on budget.
    fn dfs(&mut self, depth: usize) -> Option<bool> {
        if depth == self.p.items.len() {
            return Some(true);
        }
        // piece 1 always holds the first item
        let values: &[u8] = match (depth, self.values.len()) {
            (0, 2) => &[ONE],
            (0, _) => &[ONE, BOTH],
            _ => self.values,
        };
        for &a in values {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.assign[depth] = a;
            let ok = self.side_ok(ONE) && self.side_ok(TWO);
            if ok {
                match self.dfs(depth + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.assign[depth] = 0;
        }
        Some(false)
    }
}

/// Searches this triangulation for a cover by two collapsible subcomplexes.
pub fn search_cover2(k: &SimplicialComplex, opts: SearchOptions) -> Result<CoverSearchVerdict, CoverError> {
    k.require_connected()?;
    if k.dim() != Some(2) {
        return Err(CoverError::MalformedInput("search_cover2 needs a 2-dimensional complex".into()));
    }
    let mode = match opts.mode {
        SearchMode::Auto => {
            if let Ok(v) = is_collapsible(k, u64::MAX) {
                if v.is_collapsible() {
                    return Ok(CoverSearchVerdict::Found(Cover::certify(k.clone(), vec![k.clone(), k.clone()])?));
                }
            }
            if is_inner_connected(k).0 {
                SearchMode::Partition
            } else {
                SearchMode::Full
            }
        }
        SearchMode::Partition if !is_inner_connected(k).0 => {
            return Err(CoverError::NotInnerConnected);
        }
        m => m,
    };
    let p = Problem::new(k, opts.reverse);
    let values: &'static [u8] = if mode == SearchMode::Partition { &[ONE, TWO] } else { &[ONE, TWO, BOTH] };
    let mut s = Search { p: &p, assign: vec![0; p.items.len()], nodes: 0, budget: opts.budget, values };
    match s.dfs(0) {
        None => Ok(CoverSearchVerdict::Unknown { nodes: s.nodes }),
        Some(false) => Ok(CoverSearchVerdict::NotFoundExhausted { nodes: s.nodes, mode }),
        Some(true) => {
            let mut pieces = Vec::new();
            for side in [ONE, TWO] {
                let chosen: Vec<Simplex> =
                    (0..p.items.len()).filter(|&i| on_side(s.assign[i], side)).map(|i| p.items[i]).collect();
                let closure = if chosen.is_empty() {
                    SimplicialComplex::closure_of([Simplex::vertex(k.vertices().next().unwrap())])
                } else {
                    SimplicialComplex::closure_of(chosen)
                };
                pieces.push(connect_components(k, &closure)?);
            }
            Ok(CoverSearchVerdict::Found(Cover::certify(k.clone(), pieces)?))
        }
    }
}
