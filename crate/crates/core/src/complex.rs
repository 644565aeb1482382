//! Finite abstract simplicial complexes of dimension at most two.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("no simplices given")]
    EmptyInput,
    #[error("empty simplex")]
    EmptySimplex,
    #[error("simplex with {0} vertices exceeds dimension 2")]
    SimplexTooLarge(usize),
    #[error("vertex {0} repeated inside a simplex")]
    DuplicateVertex(Vertex),
    #[error("vertex {0} is not in the complex")]
    VertexNotInComplex(Vertex),
    #[error("simplex {0} is not in the parent complex")]
    SimplexNotInParent(Simplex),
    #[error("complex is empty")]
    EmptyComplex,
    #[error("complex is disconnected")]
    Disconnected,
    #[error("operation would produce a simplex of dimension {0}")]
    DimensionOverflow(usize),
}

/// A simplex of dimension 0, 1 or 2, stored as a sorted vertex list.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex {
    len: u8,
    v: [Vertex; 3],
}

impl Simplex {
    pub fn new(vertices: &[Vertex]) -> Result<Self, ComplexError> {
        match vertices.len() {
            0 => return Err(ComplexError::EmptySimplex),
            1..=3 => {}
            n => return Err(ComplexError::SimplexTooLarge(n)),
        }
        let mut v = [0; 3];
        v[..vertices.len()].copy_from_slice(vertices);
        let s = &mut v[..vertices.len()];
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertex(w[0]));
            }
        }
        Ok(Simplex { len: vertices.len() as u8, v })
    }

    pub fn vertex(a: Vertex) -> Self {
        Simplex { len: 1, v: [a, 0, 0] }
    }

    /// Panics if `a == b`.
    pub fn edge(a: Vertex, b: Vertex) -> Self {
        Self::new(&[a, b]).expect("edge endpoints must differ")
    }

    /// Panics on repeated vertices.
    pub fn triangle(a: Vertex, b: Vertex, c: Vertex) -> Self {
        Self::new(&[a, b, c]).expect("triangle vertices must differ")
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.v[..self.len as usize]
    }

    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_vertex(&self, x: Vertex) -> bool {
        self.vertices().contains(&x)
    }

    /// True when `self` is a (not necessarily proper) face of `other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.vertices().iter().all(|x| other.contains_vertex(*x))
    }

    /// Codimension-one faces, in lexicographic order.
    pub fn facets(&self) -> Vec<Simplex> {
        let vs = self.vertices();
        if vs.len() == 1 {
            return Vec::new();
        }
        let mut out: Vec<Simplex> = (0..vs.len())
            .map(|skip| {
                let rest: Vec<Vertex> = vs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, x)| *x)
                    .collect();
                Simplex::new(&rest).unwrap()
            })
            .collect();
        out.sort();
        out
    }

    /// All nonempty proper faces.
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let vs = self.vertices();
        let n = vs.len();
        let mut out = Vec::new();
        for mask in 1..(1u32 << n) - 1 {
            let sub: Vec<Vertex> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| vs[i]).collect();
            out.push(Simplex::new(&sub).unwrap());
        }
        out.sort();
        out
    }

    /// All nonempty faces including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let mut out = self.proper_faces();
        out.push(*self);
        out.sort();
        out
    }

    /// The join with a single vertex, if it is a simplex of dimension at most 2.
    pub fn join_vertex(&self, x: Vertex) -> Result<Simplex, ComplexError> {
        if self.contains_vertex(x) {
            return Err(ComplexError::DuplicateVertex(x));
        }
        let mut vs = self.vertices().to_vec();
        vs.push(x);
        Simplex::new(&vs)
    }

    /// Removes one vertex; `None` if nothing would remain or `x` is absent.
    pub fn without_vertex(&self, x: Vertex) -> Option<Simplex> {
        if !self.contains_vertex(x) || self.len == 1 {
            return None;
        }
        let rest: Vec<Vertex> = self.vertices().iter().copied().filter(|y| *y != x).collect();
        Simplex::new(&rest).ok()
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(other.vertices())
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.vertices().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Simplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<Vertex> = Vec::deserialize(d)?;
        Simplex::new(&v).map_err(serde::de::Error::custom)
    }
}

/// An immutable face-closed set of simplices.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [v, e, t] = self.f_vector();
        write!(f, "SimplicialComplex(v={v}, e={e}, t={t}; {:?})", self.maximal_simplices())
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.maximal_simplices().serialize(s)
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds the face closure of the given vertex lists.
    pub fn from_vertex_lists<I, L>(lists: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = L>,
        L: AsRef<[Vertex]>,
    {
        let mut simplices = Vec::new();
        for l in lists {
            simplices.push(Simplex::new(l.as_ref())?);
        }
        if simplices.is_empty() {
            return Err(ComplexError::EmptyInput);
        }
        Ok(Self::closure_of(simplices))
    }

    /// Face closure of an arbitrary collection of simplices.
    pub fn closure_of<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut set = BTreeSet::new();
        for s in simplices {
            if set.contains(&s) {
                continue;
            }
            for f in s.faces() {
                set.insert(f);
            }
        }
        SimplicialComplex { simplices: set }
    }

    /// Wraps a set already known to be face closed.
    pub(crate) fn from_closed_set(simplices: BTreeSet<Simplex>) -> Self {
        debug_assert!(simplices.iter().all(|s| s.proper_faces().iter().all(|f| simplices.contains(f))));
        SimplicialComplex { simplices }
    }

    /// Checks face closure; used when accepting simplex sets from outside.
    pub fn try_from_set(simplices: BTreeSet<Simplex>) -> Result<Self, ComplexError> {
        for s in &simplices {
            for f in s.proper_faces() {
                if !simplices.contains(&f) {
                    return Err(ComplexError::SimplexNotInParent(f));
                }
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn simplices(&self) -> impl DoubleEndedIterator<Item = &Simplex> + '_ {
        self.simplices.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.simplices.contains(&Simplex::vertex(v))
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.dim()).max()
    }

    pub fn of_dim(&self, d: usize) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplices.iter().filter(move |s| s.dim() == d)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.of_dim(0).map(|s| s.vertices()[0])
    }

    pub fn edges(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.of_dim(1)
    }

    pub fn triangles(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.of_dim(2)
    }

    pub fn f_vector(&self) -> [usize; 3] {
        let mut f = [0; 3];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [v, e, t] = self.f_vector();
        v as i64 - e as i64 + t as i64
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.vertices().max()
    }

    /// Simplices that are not a proper face of another simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered = BTreeSet::new();
        for s in &self.simplices {
            for f in s.proper_faces() {
                covered.insert(f);
            }
        }
        self.simplices.iter().filter(|s| !covered.contains(*s)).copied().collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.dim() {
            None => true,
            Some(d) => self.maximal_simplices().iter().all(|s| s.dim() == d),
        }
    }

    /// For each edge, the number of triangles containing it.
    pub fn edge_degrees(&self) -> BTreeMap<Simplex, usize> {
        let mut m: BTreeMap<Simplex, usize> = self.edges().map(|e| (*e, 0)).collect();
        for t in self.triangles() {
            for e in t.facets() {
                *m.get_mut(&e).unwrap() += 1;
            }
        }
        m
    }

    /// Vertex adjacency of the 1-skeleton.
    pub fn adjacency(&self) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = self.vertices().map(|v| (v, BTreeSet::new())).collect();
        for e in self.edges() {
            let [a, b] = [e.vertices()[0], e.vertices()[1]];
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        adj
    }

    fn require_vertex(&self, v: Vertex) -> Result<(), ComplexError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(ComplexError::VertexNotInComplex(v))
        }
    }

    /// Closed star: all simplices containing `v` together with their faces.
    pub fn star(&self, v: Vertex) -> Result<SimplicialComplex, ComplexError> {
        self.require_vertex(v)?;
        Ok(Self::closure_of(self.simplices.iter().filter(|s| s.contains_vertex(v)).copied()))
    }

    pub fn link(&self, v: Vertex) -> Result<SimplicialComplex, ComplexError> {
        self.require_vertex(v)?;
        let set = self.simplices.iter().filter_map(|s| s.without_vertex(v)).collect();
        Ok(Self::from_closed_set(set))
    }

    /// Deletion `K \ v`: the simplices not containing `v`.
    pub fn delete_vertex(&self, v: Vertex) -> SimplicialComplex {
        self.delete_vertices(&[v].into_iter().collect())
    }

    pub fn delete_vertices(&self, vs: &BTreeSet<Vertex>) -> SimplicialComplex {
        let set = self
            .simplices
            .iter()
            .filter(|s| !s.vertices().iter().any(|x| vs.contains(x)))
            .copied()
            .collect();
        Self::from_closed_set(set)
    }

    /// Full subcomplex spanned by a vertex set.
    pub fn induced(&self, vs: &BTreeSet<Vertex>) -> SimplicialComplex {
        let set = self
            .simplices
            .iter()
            .filter(|s| s.vertices().iter().all(|x| vs.contains(x)))
            .copied()
            .collect();
        Self::from_closed_set(set)
    }

    pub fn skeleton(&self, d: usize) -> SimplicialComplex {
        Self::from_closed_set(self.simplices.iter().filter(|s| s.dim() <= d).copied().collect())
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::from_closed_set(self.simplices.union(&other.simplices).copied().collect())
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::from_closed_set(self.simplices.intersection(&other.simplices).copied().collect())
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    /// Closure of a subset of this complex's simplices.
    pub fn closure_within(&self, subset: &[Simplex]) -> Result<SimplicialComplex, ComplexError> {
        for s in subset {
            if !self.contains(s) {
                return Err(ComplexError::SimplexNotInParent(*s));
            }
        }
        Ok(Self::closure_of(subset.iter().copied()))
    }

    /// Cone with a fresh apex; fails if the result would exceed dimension 2.
    pub fn cone(&self, apex: Vertex) -> Result<SimplicialComplex, ComplexError> {
        if self.contains_vertex(apex) {
            return Err(ComplexError::DuplicateVertex(apex));
        }
        if let Some(d) = self.dim() {
            if d >= 2 {
                return Err(ComplexError::DimensionOverflow(d + 1));
            }
        }
        let mut set = self.simplices.clone();
        set.insert(Simplex::vertex(apex));
        for s in &self.simplices {
            set.insert(s.join_vertex(apex)?);
        }
        Ok(Self::from_closed_set(set))
    }

    /// Returns the same complex with every vertex id passed through `f`.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Result<SimplicialComplex, ComplexError> {
        let mut set = BTreeSet::new();
        for s in &self.simplices {
            let vs: Vec<Vertex> = s.vertices().iter().map(|x| f(*x)).collect();
            set.insert(Simplex::new(&vs)?);
        }
        Self::try_from_set(set)
    }

    /// Vertex sets of connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in adj.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &adj[&v] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Nonempty and connected.
    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().len() == 1
    }

    pub fn require_connected(&self) -> Result<(), ComplexError> {
        if self.is_empty() {
            Err(ComplexError::EmptyComplex)
        } else if !self.is_connected() {
            Err(ComplexError::Disconnected)
        } else {
            Ok(())
        }
    }

    /// Shortest path in the 1-skeleton from any vertex of `from` to any vertex of `to`,
    /// whose interior vertices all satisfy `allowed`. Ties go to the smallest ids.
    pub fn shortest_path(
        &self,
        from: &BTreeSet<Vertex>,
        to: &BTreeSet<Vertex>,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Option<Vec<Vertex>> {
        let adj = self.adjacency();
        let mut prev: BTreeMap<Vertex, Option<Vertex>> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &s in from {
            if adj.contains_key(&s) {
                if to.contains(&s) {
                    return Some(vec![s]);
                }
                prev.insert(s, None);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if prev.contains_key(&w) {
                    continue;
                }
                if to.contains(&w) {
                    let mut path = vec![w, v];
                    let mut cur = v;
                    while let Some(Some(p)) = prev.get(&cur) {
                        path.push(*p);
                        cur = *p;
                    }
                    path.reverse();
                    return Some(path);
                }
                if !allowed(w) {
                    continue;
                }
                prev.insert(w, Some(v));
                queue.push_back(w);
            }
        }
        None
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maximal_simplices().iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}
