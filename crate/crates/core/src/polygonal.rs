//! Polygonal presentations: words over an alphabet of edge labels, their
//! elementary transformations and geometric realization, and the reduction
//! of an inner-connected complex to a presentation with one word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cell::{CellComplex, CellError};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::structure::{avoided_vertices, is_inner_connected, singular_vertices};
use crate::subdivision::SecondSubdivision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonalError {
    #[error("word index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("symbol {0} occurs elsewhere")]
    SymbolReused(String),
    #[error("words do not have the shape W1 e, e^-1 W2: {0}")]
    ShapeMismatch(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("map is not a closed edge path: {0}")]
    NotALoop(String),
    #[error("map misses edge {0}")]
    NotSurjective(Simplex),
    #[error("complex is not inner-connected")]
    NotInnerConnected,
    #[error("no pastable edge: {0}")]
    StuckNoPastableEdge(Box<StuckState>),
    #[error(transparent)]
    Cell(#[from] CellError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignedSymbol {
    pub symbol: String,
    pub inverse: bool,
}

impl SignedSymbol {
    pub fn new(symbol: impl Into<String>, inverse: bool) -> Self {
        SignedSymbol { symbol: symbol.into(), inverse }
    }

    pub fn inv(&self) -> Self {
        SignedSymbol { symbol: self.symbol.clone(), inverse: !self.inverse }
    }

    /// `abc` is a symbol and `ABC` its inverse.
    pub fn parse(token: &str) -> Result<Self, PolygonalError> {
        let ok = token.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && token.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        let has_lower = token.chars().any(|c| c.is_ascii_lowercase());
        let has_upper = token.chars().any(|c| c.is_ascii_uppercase());
        if !ok || (has_lower && has_upper) {
            return Err(PolygonalError::InvalidPresentation(format!("bad symbol '{token}'")));
        }
        Ok(SignedSymbol { symbol: token.to_ascii_lowercase(), inverse: has_upper })
    }
}

impl fmt::Display for SignedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}", self.symbol.to_ascii_uppercase())
        } else {
            write!(f, "{}", self.symbol)
        }
    }
}

pub type Word = Vec<SignedSymbol>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonalPresentation {
    pub alphabet: BTreeSet<String>,
    pub words: Vec<Word>,
}

pub fn word_to_string(w: &[SignedSymbol]) -> String {
    w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for PolygonalPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<&str> = self.alphabet.iter().map(|s| s.as_str()).collect();
        write!(f, "<{} | ", a.join(" "))?;
        let ws: Vec<String> = self.words.iter().map(|w| word_to_string(w)).collect();
        write!(f, "{}>", ws.join(", "))
    }
}

impl PolygonalPresentation {
    /// Parses words written as whitespace-separated symbols, one word per
    /// entry; the alphabet is the set of symbols used.
    pub fn from_words(words: &[&str]) -> Result<Self, PolygonalError> {
        let words: Vec<Word> = words
            .iter()
            .map(|w| w.split_whitespace().map(SignedSymbol::parse).collect::<Result<Word, _>>())
            .collect::<Result<_, _>>()?;
        let alphabet = words.iter().flatten().map(|s| s.symbol.clone()).collect();
        let p = PolygonalPresentation { alphabet, words };
        p.validate()?;
        Ok(p)
    }

    /// Single-letter symbols, as in `abAB`.
    pub fn from_compact(words: &[&str]) -> Result<Self, PolygonalError> {
        let spaced: Vec<String> =
            words.iter().map(|w| w.chars().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")).collect();
        let refs: Vec<&str> = spaced.iter().map(|s| s.as_str()).collect();
        Self::from_words(&refs)
    }

    pub fn validate(&self) -> Result<(), PolygonalError> {
        if self.words.is_empty() {
            return Err(PolygonalError::InvalidPresentation("no words".into()));
        }
        let mut used = BTreeSet::new();
        for (i, w) in self.words.iter().enumerate() {
            if w.len() < 3 {
                return Err(PolygonalError::InvalidPresentation(format!("word {i} has length {} < 3", w.len())));
            }
            for s in w {
                if !self.alphabet.contains(&s.symbol) {
                    return Err(PolygonalError::InvalidPresentation(format!("symbol {} not in alphabet", s.symbol)));
                }
                used.insert(s.symbol.clone());
            }
        }
        if let Some(s) = self.alphabet.iter().find(|s| !used.contains(*s)) {
            return Err(PolygonalError::InvalidPresentation(format!("symbol {s} unused")));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), PolygonalError> {
        if i < self.words.len() {
            Ok(())
        } else {
            Err(PolygonalError::IndexOutOfRange(i))
        }
    }

    pub fn occurrences(&self, symbol: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            for (j, s) in w.iter().enumerate() {
                if s.symbol == symbol {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn total_length(&self) -> usize {
        self.words.iter().map(|w| w.len()).sum()
    }
}

/// `a_1 … a_m ↦ a_m^{-1} … a_1^{-1}` on word `i`.
pub fn reflect(p: &PolygonalPresentation, i: usize) -> Result<PolygonalPresentation, PolygonalError> {
    p.check_index(i)?;
    let mut out = p.clone();
    out.words[i] = p.words[i].iter().rev().map(|s| s.inv()).collect();
    Ok(out)
}

/// `a_1 a_2 … a_m ↦ a_2 … a_m a_1` on word `i`.
pub fn rotate(p: &PolygonalPresentation, i: usize) -> Result<PolygonalPresentation, PolygonalError> {
    p.check_index(i)?;
    let mut out = p.clone();
    out.words[i].rotate_left(1);
    Ok(out)
}

/// Pastes `W_i e` and `e^{-1} W_j` into `W_i W_j`, stored at the smaller index.
pub fn paste(p: &PolygonalPresentation, i: usize, j: usize, e: &SignedSymbol) -> Result<PolygonalPresentation, PolygonalError> {
    p.check_index(i)?;
    p.check_index(j)?;
    if i == j {
        return Err(PolygonalError::ShapeMismatch("pasting needs two different words".into()));
    }
    if p.occurrences(&e.symbol).len() != 2 {
        return Err(PolygonalError::SymbolReused(e.symbol.clone()));
    }
    let (wi, wj) = (&p.words[i], &p.words[j]);
    if wi.last() != Some(e) || wj.first() != Some(&e.inv()) {
        return Err(PolygonalError::ShapeMismatch(format!(
            "word {i} = {} must end with {e}, word {j} = {} must start with {}",
            word_to_string(wi),
            word_to_string(wj),
            e.inv()
        )));
    }
    let mut merged: Word = wi[..wi.len() - 1].to_vec();
    merged.extend(wj[1..].iter().cloned());
    let mut out = p.clone();
    let (lo, hi) = (i.min(j), i.max(j));
    out.words[lo] = merged;
    out.words.remove(hi);
    out.alphabet.remove(&e.symbol);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TransformationStep {
    Reflection { word: usize },
    /// `times` successive rotations.
    Rotation { word: usize, times: usize },
    Pasting { first: usize, second: usize, symbol: SignedSymbol },
}

pub fn apply_step(p: &PolygonalPresentation, step: &TransformationStep) -> Result<PolygonalPresentation, PolygonalError> {
    match step {
        TransformationStep::Reflection { word } => reflect(p, *word),
        TransformationStep::Rotation { word, times } => {
            p.check_index(*word)?;
            let mut out = p.clone();
            let n = out.words[*word].len();
            out.words[*word].rotate_left(times % n);
            Ok(out)
        }
        TransformationStep::Pasting { first, second, symbol } => paste(p, *first, *second, symbol),
    }
}

pub fn replay(p: &PolygonalPresentation, steps: &[TransformationStep]) -> Result<PolygonalPresentation, PolygonalError> {
    steps.iter().try_fold(p.clone(), |acc, s| apply_step(&acc, s))
}

fn cell_structure(p: &PolygonalPresentation) -> Result<CellComplex, PolygonalError> {
    p.validate()?;
    let symbols: Vec<&String> = p.alphabet.iter().collect();
    let index: BTreeMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    // endpoint 2e is the tail of edge e, 2e + 1 its head
    let start = |s: &SignedSymbol| 2 * index[s.symbol.as_str()] + usize::from(s.inverse);
    let end = |s: &SignedSymbol| 2 * index[s.symbol.as_str()] + usize::from(!s.inverse);
    let mut parent: Vec<usize> = (0..2 * symbols.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for w in &p.words {
        for k in 0..w.len() {
            let (a, b) = (find(&mut parent, end(&w[k])), find(&mut parent, start(&w[(k + 1) % w.len()])));
            parent[a] = b;
        }
    }
    let mut class: BTreeMap<usize, Vertex> = BTreeMap::new();
    let mut vid = vec![0; parent.len()];
    for x in 0..parent.len() {
        let r = find(&mut parent, x);
        let n = class.len() as Vertex;
        vid[x] = *class.entry(r).or_insert(n);
    }
    let mut cc = CellComplex::new(class.len() as u32);
    for e in 0..symbols.len() {
        cc.add_edge(vid[2 * e], vid[2 * e + 1]);
    }
    for w in &p.words {
        let sides: Vec<(usize, bool)> = w.iter().map(|s| (index[s.symbol.as_str()], !s.inverse)).collect();
        cc.add_polygon(&sides)?;
    }
    Ok(cc)
}

/// Euler characteristic of the quotient cell structure: identified vertices,
/// alphabet, words.
pub fn cell_euler_characteristic(p: &PolygonalPresentation) -> Result<i64, PolygonalError> {
    let cc = cell_structure(p)?;
    let vertices = cc.vertex_count as i64 - p.words.len() as i64;
    Ok(vertices - p.alphabet.len() as i64 + p.words.len() as i64)
}

/// Realizes the presentation: each word is a polygon coned from its center,
/// sides with the same label are identified, and the result is subdivided
/// until simplicial.
pub fn realize(p: &PolygonalPresentation) -> Result<SimplicialComplex, PolygonalError> {
    let cc = cell_structure(p)?;
    let complex = cc.triangulate()?.complex;
    let chi = cc.vertex_count as i64 - p.alphabet.len() as i64;
    debug_assert_eq!(complex.euler_characteristic(), chi);
    Ok(complex)
}

/// Attaches one 2-cell to the graph `g` along the closed edge path `phi`.
/// Vertices of `g` are renumbered `0..n` in increasing order.
pub fn realize_from_map(g: &SimplicialComplex, phi: &[(Vertex, Vertex)]) -> Result<SimplicialComplex, PolygonalError> {
    if g.dim().is_some_and(|d| d > 1) {
        return Err(PolygonalError::InvalidPresentation("not a graph".into()));
    }
    if phi.is_empty() {
        return Err(PolygonalError::NotALoop("empty map".into()));
    }
    for (k, &(a, b)) in phi.iter().enumerate() {
        if a == b || !g.contains(&Simplex::edge(a, b)) {
            return Err(PolygonalError::NotALoop(format!("step {k} ({a}, {b}) is not an edge")));
        }
        if phi[(k + 1) % phi.len()].0 != b {
            return Err(PolygonalError::NotALoop(format!("step {k} ends at {b}, next starts elsewhere")));
        }
    }
    let used: BTreeSet<Simplex> = phi.iter().map(|&(a, b)| Simplex::edge(a, b)).collect();
    if let Some(e) = g.edges().find(|e| !used.contains(e)) {
        return Err(PolygonalError::NotSurjective(*e));
    }
    let ids: BTreeMap<Vertex, Vertex> = g.vertices().enumerate().map(|(i, v)| (v, i as Vertex)).collect();
    let mut cc = CellComplex::new(ids.len() as u32);
    let mut edge_id = BTreeMap::new();
    for e in g.edges() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        edge_id.insert(*e, cc.add_edge(ids[&a], ids[&b]));
    }
    let sides: Vec<(usize, bool)> = phi.iter().map(|&(a, b)| (edge_id[&Simplex::edge(a, b)], a < b)).collect();
    cc.add_polygon(&sides)?;
    let complex = cc.triangulate()?.complex;
    debug_assert!(is_inner_connected(&complex).0);
    Ok(complex)
}

/// Which inner edges the reduction may paste along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PasteRule {
    /// Only inner edges avoiding the singular vertices of the input.
    #[default]
    NonSingular,
    /// Any inner edge. Pasting along any shared label keeps the realization.
    AnyInnerEdge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StuckState {
    pub words_left: usize,
    pub first_word_length: usize,
    /// Labels occurring once in the first word, with their edges.
    pub boundary_labels: Vec<(String, Simplex)>,
    pub singular_vertices: Vec<Vertex>,
    pub presentation: String,
}

impl fmt::Display for StuckState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} words left, first word has length {} and {} once-occurring labels, all with a singular endpoint",
            self.words_left,
            self.first_word_length,
            self.boundary_labels.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    /// The complex whose triangles became the initial words.
    pub complex: SimplicialComplex,
    pub subdivided: bool,
    pub initial: PolygonalPresentation,
    pub steps: Vec<TransformationStep>,
    pub result: PolygonalPresentation,
    /// Label of each edge of `complex`.
    pub labels: BTreeMap<Simplex, String>,
}

/// One word per triangle `a < b < c`: `e_ab e_bc e_ac^{-1}`.
pub fn triangle_words(k: &SimplicialComplex) -> (PolygonalPresentation, BTreeMap<Simplex, String>) {
    let labels: BTreeMap<Simplex, String> = k.edges().enumerate().map(|(i, e)| (*e, format!("e{i}"))).collect();
    let sym = |a: Vertex, b: Vertex, inverse: bool| SignedSymbol::new(labels[&Simplex::edge(a, b)].clone(), inverse);
    let words = k
        .triangles()
        .map(|t| {
            let [a, b, c] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
            vec![sym(a, b, false), sym(b, c, false), sym(a, c, true)]
        })
        .collect();
    let alphabet = k.triangles().flat_map(|t| t.facets()).map(|e| labels[&e].clone()).collect();
    (PolygonalPresentation { alphabet, words }, labels)
}

/// Reduces an inner-connected complex to a polygonal presentation with one
/// word by growing the first word one pasting at a time. The complex is
/// replaced by its second subdivision when it has singular vertices.
pub fn one_word_reduction(k: &SimplicialComplex, rule: PasteRule) -> Result<Reduction, PolygonalError> {
    if k.dim() != Some(2) || !is_inner_connected(k).0 {
        return Err(PolygonalError::NotInnerConnected);
    }
    let singular = singular_vertices(k).map_err(|_| PolygonalError::NotInnerConnected)?;
    let (complex, subdivided, singular) = if singular.is_empty() || rule == PasteRule::AnyInnerEdge {
        (k.clone(), false, BTreeSet::new())
    } else {
        let sd = SecondSubdivision::new(k);
        let avoid = avoided_vertices(&sd).map_err(|_| PolygonalError::NotInnerConnected)?;
        (sd.complex().clone(), true, avoid)
    };
    let (initial, labels) = triangle_words(&complex);
    if initial.words.len() < 2 {
        return Err(PolygonalError::InvalidPresentation("need at least two triangles".into()));
    }
    let edge_of: BTreeMap<&str, Simplex> = labels.iter().map(|(e, l)| (l.as_str(), *e)).collect();
    let degrees = complex.edge_degrees();
    let pastable = |e: &Simplex| {
        degrees[e] == 2
            && (rule == PasteRule::AnyInnerEdge || e.vertices().iter().all(|v| !singular.contains(v)))
    };
    let mut cur = initial.clone();
    let mut steps = Vec::new();
    let mut push = |cur: &mut PolygonalPresentation, step: TransformationStep| -> Result<(), PolygonalError> {
        *cur = apply_step(cur, &step)?;
        steps.push(step);
        Ok(())
    };
    while cur.words.len() > 1 {
        // where each label occurs
        let mut occ: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, w) in cur.words.iter().enumerate() {
            for s in w {
                occ.entry(s.symbol.as_str()).or_default().push(i);
            }
        }
        let mut best: Option<(usize, usize, String)> = None;
        for (label, ws) in &occ {
            if ws.len() != 2 || ws.iter().filter(|&&i| i == 0).count() != 1 {
                continue;
            }
            let e = edge_of[label];
            if !pastable(&e) {
                continue;
            }
            let idx: usize = label[1..].parse().unwrap();
            let j = ws[0].max(ws[1]);
            if best.as_ref().is_none_or(|b| (idx, j) < (b.0, b.1)) {
                best = Some((idx, j, label.to_string()));
            }
        }
        let Some((_, j, label)) = best else {
            let mut boundary_labels: Vec<(String, Simplex)> = occ
                .iter()
                .filter(|(_, ws)| ws.iter().filter(|&&i| i == 0).count() == 1 && ws.len() == 2)
                .map(|(l, _)| (l.to_string(), edge_of[l]))
                .collect();
            boundary_labels.sort();
            return Err(PolygonalError::StuckNoPastableEdge(Box::new(StuckState {
                words_left: cur.words.len(),
                first_word_length: cur.words[0].len(),
                boundary_labels,
                singular_vertices: singular.iter().copied().collect(),
                presentation: cur.to_string(),
            })));
        };
        let pos0 = cur.words[0].iter().position(|s| s.symbol == label).unwrap();
        let n0 = cur.words[0].len();
        let times = (pos0 + 1) % n0;
        if times != 0 {
            push(&mut cur, TransformationStep::Rotation { word: 0, times })?;
        }
        let tail = cur.words[0].last().unwrap().clone();
        let posj = cur.words[j].iter().position(|s| s.symbol == label).unwrap();
        if cur.words[j][posj] == tail {
            push(&mut cur, TransformationStep::Reflection { word: j })?;
        }
        let posj = cur.words[j].iter().position(|s| s.symbol == label).unwrap();
        if posj != 0 {
            push(&mut cur, TransformationStep::Rotation { word: j, times: posj })?;
        }
        push(&mut cur, TransformationStep::Pasting { first: 0, second: j, symbol: tail })?;
    }
    Ok(Reduction { complex, subdivided, initial, steps, result: cur, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::structure::{is_pseudosurface, singular_vertices};

    fn pp(words: &[&str]) -> PolygonalPresentation {
        PolygonalPresentation::from_compact(words).unwrap()
    }

    #[test]
    fn elementary_transformations() {
        let p = pp(&["abc"]);
        assert_eq!(word_to_string(&reflect(&p, 0).unwrap().words[0]), "C B A");
        assert_eq!(reflect(&reflect(&p, 0).unwrap(), 0).unwrap(), p);
        assert_eq!(word_to_string(&reflect(&pp(&["abA"]), 0).unwrap().words[0]), "a B A");
        assert_eq!(word_to_string(&rotate(&p, 0).unwrap().words[0]), "b c a");
        assert_eq!(rotate(&pp(&["aaa"]), 0).unwrap(), pp(&["aaa"]));
        assert_eq!(rotate(&p, 1), Err(PolygonalError::IndexOutOfRange(1)));
        let q = pp(&["abe", "Ecd"]);
        let r = paste(&q, 0, 1, &SignedSymbol::new("e", false)).unwrap();
        assert_eq!(r, pp(&["abcd"]));
        assert!(!r.alphabet.contains("e"));
        let bad = pp(&["aee", "Ecd"]);
        assert!(matches!(paste(&bad, 0, 1, &SignedSymbol::new("e", false)), Err(PolygonalError::SymbolReused(_))));
        assert!(matches!(paste(&q, 1, 0, &SignedSymbol::new("e", false)), Err(PolygonalError::ShapeMismatch(_))));
    }

    #[test]
    fn realizations() {
        let t = realize(&pp(&["abAB"])).unwrap();
        assert_eq!(homology(&t).betti, vec![1, 2, 1]);
        assert!(is_pseudosurface(&t));
        assert!(singular_vertices(&t).unwrap().is_empty());
        let kb = homology(&realize(&pp(&["abAb"])).unwrap());
        assert_eq!(kb.betti, vec![1, 1, 0]);
        assert_eq!(kb.torsion[1], vec![2.into()]);
        let p = pp(&["abcABC"]);
        let s = realize(&p).unwrap();
        assert_eq!(s.euler_characteristic(), cell_euler_characteristic(&p).unwrap());
        assert!(matches!(realize(&pp(&["abAB"]).tap_short()), Err(PolygonalError::InvalidPresentation(_))));
    }

    trait TapShort {
        fn tap_short(self) -> Self;
    }

    impl TapShort for PolygonalPresentation {
        fn tap_short(mut self) -> Self {
            self.words[0].truncate(2);
            self
        }
    }

    #[test]
    fn maps_to_graphs() {
        // bouquet-like graph: a triangle loop; the map goes around twice
        let g = SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let phi = [(0, 1), (1, 2), (2, 0), (0, 1), (1, 2), (2, 0)];
        let k = realize_from_map(&g, &phi).unwrap();
        assert!(is_pseudosurface(&k));
        assert_eq!(homology(&k).torsion[1], vec![2.into()]);
        assert!(matches!(realize_from_map(&g, &[(0, 1), (1, 2), (2, 1), (1, 0)]), Err(PolygonalError::NotSurjective(_))));
        assert!(matches!(realize_from_map(&g, &[(0, 1), (2, 0)]), Err(PolygonalError::NotALoop(_))));
    }

    #[test]
    fn octahedron_to_one_word() {
        let oct = SimplicialComplex::from_vertex_lists(vec![
            vec![0, 2, 4], vec![0, 2, 5], vec![0, 3, 4], vec![0, 3, 5],
            vec![1, 2, 4], vec![1, 2, 5], vec![1, 3, 4], vec![1, 3, 5],
        ])
        .unwrap();
        let r = one_word_reduction(&oct, PasteRule::NonSingular).unwrap();
        assert!(!r.subdivided);
        assert_eq!(r.result.words.len(), 1);
        assert_eq!(r.result.words[0].len(), 10);
        assert_eq!(replay(&r.initial, &r.steps).unwrap(), r.result);
        assert_eq!(homology(&realize(&r.result).unwrap()), homology(&oct));
    }
}
