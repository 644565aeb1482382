//! Two-dimensional cell complexes built from triangles whose faces may be
//! identified (loops, repeated sides), triangulated by a double barycentric
//! subdivision.
//!
//! Polygons are coned from a new center vertex, one cell triangle per side.
//! The first subdivision of such a complex is a Δ-complex whose simplices
//! have pairwise distinct vertices; the second one is simplicial.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("edge {0} has an endpoint outside the vertex range")]
    BadEdge(usize),
    #[error("triangle {0} refers to a missing edge")]
    MissingEdge(usize),
    #[error("triangle {0}: side does not match its corners")]
    SideMismatch(usize),
    #[error("polygon has no sides")]
    EmptyPolygon,
    #[error("polygon side {0} does not start where the previous side ends")]
    OpenPolygon(usize),
    #[error("subdivision repeats triangle {0}")]
    NotSimplicial(Simplex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A cell triangle with corners `c0, c1, c2`. `sides[i]` is `(edge, forward)` for
/// the local pairs `(0,1)`, `(1,2)`, `(0,2)`; `forward` means the edge runs from
/// the lower local corner to the higher one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellTriangle {
    pub corners: [Vertex; 3],
    pub sides: [(usize, bool); 3],
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellComplex {
    pub vertex_count: u32,
    /// `[start, end]`; loops allowed.
    pub edges: Vec<[Vertex; 2]>,
    pub triangles: Vec<CellTriangle>,
}

const PAIRS: [(u8, u8); 3] = [(0, 1), (1, 2), (0, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum CellRef {
    V(Vertex),
    E(usize),
    T(usize),
}

/// A simplex of the first subdivision: a flag of faces of a cell, as
/// bitmasks over the cell's local corners.
type Flag = (CellRef, Vec<u8>);

impl CellComplex {
    pub fn new(vertex_count: u32) -> Self {
        CellComplex { vertex_count, ..Default::default() }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, start: Vertex, end: Vertex) -> usize {
        self.edges.push([start, end]);
        self.edges.len() - 1
    }

    pub fn add_triangle(&mut self, t: CellTriangle) -> Result<usize, CellError> {
        let i = self.triangles.len();
        self.check_triangle(i, &t)?;
        self.triangles.push(t);
        Ok(i)
    }

    fn check_triangle(&self, i: usize, t: &CellTriangle) -> Result<(), CellError> {
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            let (e, fwd) = t.sides[k];
            let ends = self.edges.get(e).ok_or(CellError::MissingEdge(i))?;
            let want = if fwd { [t.corners[a as usize], t.corners[b as usize]] } else { [t.corners[b as usize], t.corners[a as usize]] };
            if *ends != want {
                return Err(CellError::SideMismatch(i));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CellError> {
        for (i, e) in self.edges.iter().enumerate() {
            if e[0] >= self.vertex_count || e[1] >= self.vertex_count {
                return Err(CellError::BadEdge(i));
            }
        }
        for (i, t) in self.triangles.iter().enumerate() {
            self.check_triangle(i, t)?;
        }
        Ok(())
    }

    fn side_start(&self, (e, fwd): (usize, bool)) -> Vertex {
        self.edges[e][if fwd { 0 } else { 1 }]
    }

    fn side_end(&self, (e, fwd): (usize, bool)) -> Vertex {
        self.edges[e][if fwd { 1 } else { 0 }]
    }

    /// Cones a closed edge path from a new center vertex. Returns the new
    /// cell triangles, one per side, in boundary order.
    pub fn add_polygon(&mut self, boundary: &[(usize, bool)]) -> Result<Vec<usize>, CellError> {
        if boundary.is_empty() {
            return Err(CellError::EmptyPolygon);
        }
        for &(e, _) in boundary {
            if e >= self.edges.len() {
                return Err(CellError::MissingEdge(self.triangles.len()));
            }
        }
        let n = boundary.len();
        for i in 0..n {
            if self.side_end(boundary[i]) != self.side_start(boundary[(i + 1) % n]) {
                return Err(CellError::OpenPolygon((i + 1) % n));
            }
        }
        let c = self.add_vertex();
        let radial: Vec<usize> = boundary.iter().map(|&s| {
            let v = self.side_start(s);
            self.add_edge(c, v)
        }).collect();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let t = CellTriangle {
                corners: [c, self.side_start(boundary[i]), self.side_end(boundary[i])],
                sides: [(radial[i], true), boundary[i], (radial[j], true)],
            };
            out.push(self.add_triangle(t)?);
        }
        Ok(out)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Pushes a flag of faces of triangle `t` down to the smallest cell
    /// carrying it.
    fn canonical(&self, t: usize, masks: &[u8]) -> Flag {
        let tri = &self.triangles[t];
        let top = *masks.last().unwrap();
        match top.count_ones() {
            3 => (CellRef::T(t), masks.to_vec()),
            2 => {
                let k = PAIRS.iter().position(|&(a, b)| top == (1 << a) | (1 << b)).unwrap();
                let (a, b) = PAIRS[k];
                let (e, fwd) = tri.sides[k];
                let (to_a, to_b) = if fwd { (1u8, 2u8) } else { (2, 1) };
                let mapped = masks
                    .iter()
                    .map(|m| (if m & (1 << a) != 0 { to_a } else { 0 }) | (if m & (1 << b) != 0 { to_b } else { 0 }))
                    .collect();
                (CellRef::E(e), mapped)
            }
            _ => (CellRef::V(tri.corners[top.trailing_zeros() as usize]), vec![1]),
        }
    }

    fn edge_flag(&self, e: usize, masks: &[u8]) -> Flag {
        match masks.last() {
            Some(1) => (CellRef::V(self.edges[e][0]), vec![1]),
            Some(2) => (CellRef::V(self.edges[e][1]), vec![1]),
            _ => (CellRef::E(e), masks.to_vec()),
        }
    }

    /// The cells themselves, when they already form a simplicial complex.
    pub fn as_simplicial(&self) -> Option<CellSubdivision> {
        self.validate().ok()?;
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            if e[0] == e[1] || !pairs.insert(Simplex::edge(e[0], e[1])) {
                return None;
            }
        }
        let mut owner = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            let s = Simplex::new(&t.corners).ok()?;
            if owner.insert(s, i).is_some() {
                return None;
            }
        }
        let mut simplices: Vec<Simplex> = owner.keys().copied().collect();
        simplices.extend(pairs.iter().copied());
        simplices.extend((0..self.vertex_count).map(Simplex::vertex));
        Some(CellSubdivision {
            complex: SimplicialComplex::closure_of(simplices),
            owner,
            edge_paths: self.edges.iter().map(|e| e.to_vec()).collect(),
        })
    }

    /// First barycentric subdivision; simplicial when no edge is a loop and
    /// no triangle repeats a side.
    pub fn first_subdivision(&self) -> Option<CellSubdivision> {
        self.validate().ok()?;
        if self.edges.iter().any(|e| e[0] == e[1]) {
            return None;
        }
        for t in &self.triangles {
            let es: BTreeSet<usize> = t.sides.iter().map(|s| s.0).collect();
            if es.len() < 3 {
                return None;
            }
        }
        let n = self.vertex_count;
        let edge_bary = |e: usize| n + e as Vertex;
        let tri_bary = |t: usize| n + self.edges.len() as Vertex + t as Vertex;
        let mut owner = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for (k, &(a, b)) in PAIRS.iter().enumerate() {
                let e = edge_bary(t.sides[k].0);
                for c in [a, b] {
                    owner.insert(Simplex::triangle(t.corners[c as usize], e, tri_bary(i)), i);
                }
            }
        }
        if owner.len() != 6 * self.triangles.len() {
            return None;
        }
        let edge_paths: Vec<Vec<Vertex>> =
            self.edges.iter().enumerate().map(|(i, e)| vec![e[0], edge_bary(i), e[1]]).collect();
        let mut simplices: Vec<Simplex> = owner.keys().copied().collect();
        for p in &edge_paths {
            simplices.extend(p.windows(2).map(|w| Simplex::edge(w[0], w[1])));
        }
        simplices.extend((0..n).map(Simplex::vertex));
        Some(CellSubdivision { complex: SimplicialComplex::closure_of(simplices), owner, edge_paths })
    }

    /// The coarsest of: the cells, their first subdivision, their second.
    pub fn triangulate(&self) -> Result<CellSubdivision, CellError> {
        match self.as_simplicial().or_else(|| self.first_subdivision()) {
            Some(sd) => Ok(sd),
            None => self.double_subdivision(),
        }
    }

    pub fn double_subdivision(&self) -> Result<CellSubdivision, CellError> {
        self.validate()?;
        let mut tris: Vec<([Flag; 3], usize)> = Vec::new();
        for t in 0..self.triangles.len() {
            for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                let full = [1u8 << a, (1 << a) | (1 << b), (1 << a) | (1 << b) | (1 << c)];
                for i in 0..3 {
                    for j in 0..3 {
                        if i == j {
                            continue;
                        }
                        let pair = if i < j { [full[i], full[j]] } else { [full[j], full[i]] };
                        tris.push((
                            [self.canonical(t, &full[i..=i]), self.canonical(t, &pair), self.canonical(t, &full)],
                            t,
                        ));
                    }
                }
            }
        }
        let mut edge_flags: Vec<[Flag; 5]> = Vec::new();
        for e in 0..self.edges.len() {
            edge_flags.push([
                self.edge_flag(e, &[1]),
                self.edge_flag(e, &[1, 3]),
                self.edge_flag(e, &[3]),
                self.edge_flag(e, &[2, 3]),
                self.edge_flag(e, &[2]),
            ]);
        }
        let mut keys: BTreeSet<Flag> = BTreeSet::new();
        for (fl, _) in &tris {
            keys.extend(fl.iter().cloned());
        }
        for fl in &edge_flags {
            keys.extend(fl.iter().cloned());
        }
        let mut ids: BTreeMap<Flag, Vertex> = BTreeMap::new();
        for v in 0..self.vertex_count {
            ids.insert((CellRef::V(v), vec![1]), v);
        }
        let mut next = self.vertex_count;
        for k in keys {
            ids.entry(k).or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        let mut simplices: Vec<Simplex> = Vec::new();
        let mut owner = BTreeMap::new();
        for (fl, t) in &tris {
            let s = Simplex::triangle(ids[&fl[0]], ids[&fl[1]], ids[&fl[2]]);
            if owner.insert(s, *t).is_some() {
                return Err(CellError::NotSimplicial(s));
            }
            simplices.push(s);
        }
        let mut edge_paths = Vec::new();
        for fl in &edge_flags {
            let path: Vec<Vertex> = fl.iter().map(|f| ids[f]).collect();
            for w in path.windows(2) {
                simplices.push(Simplex::edge(w[0], w[1]));
            }
            edge_paths.push(path);
        }
        simplices.extend((0..self.vertex_count).map(Simplex::vertex));
        let complex = SimplicialComplex::closure_of(simplices);
        Ok(CellSubdivision { complex, owner, edge_paths })
    }
}

#[derive(Debug, Clone)]
pub struct CellSubdivision {
    pub complex: SimplicialComplex,
    /// Cell triangle carrying each triangle of the subdivision.
    pub owner: BTreeMap<Simplex, usize>,
    /// Vertex path of each cell edge, from its start to its end.
    pub edge_paths: Vec<Vec<Vertex>>,
}

impl CellSubdivision {
    /// Closure of the subdivided cell triangles selected by `keep`.
    pub fn image(&self, keep: impl Fn(usize) -> bool) -> SimplicialComplex {
        SimplicialComplex::closure_of(self.owner.iter().filter(|(_, t)| keep(**t)).map(|(s, _)| *s))
    }

    pub fn edge_image(&self, e: usize) -> SimplicialComplex {
        SimplicialComplex::closure_of(self.edge_paths[e].windows(2).map(|w| Simplex::edge(w[0], w[1])))
    }
}
