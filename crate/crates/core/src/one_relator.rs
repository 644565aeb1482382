//! One-relator presentations, their presentation complexes, Whitehead graphs
//! and the computation of their PL geometric category.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cell::CellError;
use crate::collapse::{is_collapsible, CollapseCertificate};
use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::covers::{connect_components, search_cover2, strong_cover, Cover, CoverError, SearchOptions};
use crate::homology::{homology, HomologySummary};
use crate::structure::{boundaryless_evidence, no2_criterion, No2Certificate};

pub use crate::strip::{strip_cover, StripCover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OneRelatorError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(char),
    #[error("empty relator")]
    EmptyRelator,
    #[error("malformed presentation: {0}")]
    MalformedSyntax(String),
    #[error("generator '{0}' does not occur in the relator")]
    GeneratorUnused(char),
    #[error("relator has no algebraic collapse")]
    NoAlgebraicCollapse,
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct OneRelatorPresentation {
    pub generators: Vec<char>,
    pub relator: Vec<Letter>,
}

impl fmt::Display for OneRelatorPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|c| c.to_string()).collect();
        write!(f, "<{}|", gens.join(","))?;
        for l in &self.relator {
            let c = self.generators[l.generator];
            write!(f, "{}", if l.inverse { c.to_ascii_uppercase() } else { c })?;
        }
        write!(f, ">")
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    gens: &'a [char],
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Vec<Letter>, OneRelatorError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            match c {
                '(' => {
                    self.pos += 1;
                    let inner = self.word()?;
                    if self.peek() != Some(')') {
                        return Err(OneRelatorError::MalformedSyntax("unbalanced parenthesis".into()));
                    }
                    self.pos += 1;
                    let n = self.exponent()?;
                    let unit: Vec<Letter> =
                        if n > 0 { inner } else { inner.iter().rev().map(|l| l.inv()).collect() };
                    for _ in 0..n.unsigned_abs() {
                        out.extend(unit.iter().copied());
                    }
                }
                ')' => break,
                c if c.is_ascii_alphabetic() => {
                    let lower = c.to_ascii_lowercase();
                    let generator =
                        self.gens.iter().position(|g| *g == lower).ok_or(OneRelatorError::UnknownGenerator(lower))?;
                    out.push(Letter { generator, inverse: c.is_ascii_uppercase() });
                    self.pos += 1;
                }
                c => return Err(OneRelatorError::MalformedSyntax(format!("unexpected '{c}'"))),
            }
        }
        Ok(out)
    }

    fn exponent(&mut self) -> Result<i64, OneRelatorError> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let n: i64 = s.parse().map_err(|_| OneRelatorError::MalformedSyntax(format!("bad exponent '{s}'")))?;
        if n == 0 {
            return Err(OneRelatorError::MalformedSyntax("exponent must be nonzero".into()));
        }
        Ok(n)
    }
}

/// Parses `<a,b | abAB>`; uppercase letters are inverses and `(w)^n`
/// repeats `w`, reversed and inverted when `n < 0`.
pub fn parse_presentation(text: &str) -> Result<OneRelatorPresentation, OneRelatorError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('<')
        .or_else(|| t.strip_prefix('⟨'))
        .and_then(|s| s.strip_suffix('>').or_else(|| s.strip_suffix('⟩')))
        .ok_or_else(|| OneRelatorError::MalformedSyntax("expected <generators | relator>".into()))?;
    let (gens, word) =
        inner.split_once('|').ok_or_else(|| OneRelatorError::MalformedSyntax("missing '|'".into()))?;
    let mut generators = Vec::new();
    for g in gens.split(',') {
        let mut cs = g.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => {
                if generators.contains(&c) {
                    return Err(OneRelatorError::MalformedSyntax(format!("generator '{c}' repeated")));
                }
                generators.push(c);
            }
            _ => return Err(OneRelatorError::MalformedSyntax(format!("bad generator '{g}'"))),
        }
    }
    let mut p = Parser { chars: word.chars().collect(), pos: 0, gens: &generators };
    let relator = p.word()?;
    if p.pos != p.chars.len() {
        return Err(OneRelatorError::MalformedSyntax("unbalanced parenthesis".into()));
    }
    if relator.is_empty() {
        return Err(OneRelatorError::EmptyRelator);
    }
    Ok(OneRelatorPresentation { generators, relator })
}

impl OneRelatorPresentation {
    pub fn occurrences(&self, g: usize) -> usize {
        self.relator.iter().filter(|l| l.generator == g).count()
    }

    pub fn unused_generators(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|&g| self.occurrences(g) == 0).collect()
    }

    /// The presentation on the generators that occur in the relator.
    pub fn homogeneous_part(&self) -> OneRelatorPresentation {
        let used: Vec<usize> = (0..self.generators.len()).filter(|&g| self.occurrences(g) > 0).collect();
        OneRelatorPresentation {
            generators: used.iter().map(|&g| self.generators[g]).collect(),
            relator: self
                .relator
                .iter()
                .map(|l| Letter { generator: used.iter().position(|&g| g == l.generator).unwrap(), inverse: l.inverse })
                .collect(),
        }
    }

    /// `<x | xX>` up to rotation and inversion.
    pub fn is_exceptional(&self) -> bool {
        self.generators.len() == 1 && self.relator.len() == 2 && self.relator[0].inverse != self.relator[1].inverse
    }
}

/// Least generator occurring exactly once in the relator.
pub fn has_algebraic_collapse(p: &OneRelatorPresentation) -> Option<usize> {
    (0..p.generators.len()).find(|&g| p.occurrences(g) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationComplex {
    pub complex: SimplicialComplex,
    pub wedge: Vertex,
    /// Closed vertex path of each generator loop, starting at the wedge point.
    pub loops: Vec<Vec<Vertex>>,
}

/// Triangulates the presentation complex.
///
/// Each generator loop is split into three edges `w, x1, x2, w`. Inside the
/// relator polygon every letter gets two ring vertices `r, s`; the band
/// between the letter and its ring edge has four triangles, each corner at
/// the wedge point one more, and the inner ring polygon is fanned from its
/// first vertex: `7m - 2` triangles for a relator of length `m`. Every
/// triangle has a ring vertex, and two triangles sharing their ring vertices
/// differ elsewhere, so the quotient is simplicial.
pub fn build_presentation_complex(p: &OneRelatorPresentation, allow_unused: bool) -> Result<PresentationComplex, OneRelatorError> {
    if p.relator.is_empty() {
        return Err(OneRelatorError::EmptyRelator);
    }
    if !allow_unused {
        if let Some(&g) = p.unused_generators().first() {
            return Err(OneRelatorError::GeneratorUnused(p.generators[g]));
        }
    }
    let k = p.generators.len() as u32;
    let m = p.relator.len() as u32;
    let w: Vertex = 0;
    let x1 = |g: usize| 1 + 2 * g as u32;
    let x2 = |g: usize| 2 + 2 * g as u32;
    // ring vertices in polygon order: r_0, s_0, r_1, s_1, ...
    let ring = |j: u32| 1 + 2 * k + j % (2 * m);
    let mut lists: Vec<Vec<Vertex>> = Vec::new();
    let loops: Vec<Vec<Vertex>> = (0..k as usize).map(|g| vec![w, x1(g), x2(g), w]).collect();
    for l in &loops {
        for e in l.windows(2) {
            lists.push(e.to_vec());
        }
    }
    for (i, l) in p.relator.iter().enumerate() {
        let i = i as u32;
        let (a, b) = if l.inverse { (x2(l.generator), x1(l.generator)) } else { (x1(l.generator), x2(l.generator)) };
        let (r, s, next) = (ring(2 * i), ring(2 * i + 1), ring(2 * i + 2));
        lists.extend([vec![w, a, r], vec![a, b, r], vec![b, r, s], vec![b, w, s], vec![w, s, next]]);
    }
    for j in 1..2 * m - 1 {
        lists.push(vec![ring(0), ring(j), ring(j + 1)]);
    }
    let complex = SimplicialComplex::from_vertex_lists(lists)?;
    debug_assert_eq!(complex.euler_characteristic(), 2 - k as i64);
    Ok(PresentationComplex { complex, wedge: w, loops })
}

/// Nodes `2g` (outgoing end of generator `g`) and `2g + 1` (incoming end).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhiteheadGraph {
    pub node_count: usize,
    pub edges: Vec<(usize, usize)>,
}

fn start_node(l: Letter) -> usize {
    2 * l.generator + usize::from(l.inverse)
}

fn end_node(l: Letter) -> usize {
    2 * l.generator + usize::from(!l.inverse)
}

impl WhiteheadGraph {
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let mut parent: Vec<usize> = (0..self.node_count).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut comps: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for v in 0..self.node_count {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().insert(v);
        }
        let mut out: Vec<BTreeSet<usize>> = comps.into_values().collect();
        out.sort();
        out
    }
}

pub fn whitehead_graph(p: &OneRelatorPresentation) -> Result<WhiteheadGraph, OneRelatorError> {
    if let Some(&g) = p.unused_generators().first() {
        return Err(OneRelatorError::GeneratorUnused(p.generators[g]));
    }
    let m = p.relator.len();
    let edges = (0..m).map(|i| (end_node(p.relator[i]), start_node(p.relator[(i + 1) % m]))).collect();
    let g = WhiteheadGraph { node_count: 2 * p.generators.len(), edges };
    debug_assert_eq!(Some(g.components()), wedge_link_components(p).ok());
    Ok(g)
}

/// Components of the wedge point's link, as sets of Whitehead nodes: the
/// link vertex `x1` of generator `g` is node `2g` and `x2` is node `2g + 1`.
pub fn wedge_link_components(p: &OneRelatorPresentation) -> Result<Vec<BTreeSet<usize>>, OneRelatorError> {
    let pc = build_presentation_complex(p, false)?;
    let link = pc.complex.link(pc.wedge)?;
    let k = p.generators.len() as u32;
    let mut out: Vec<BTreeSet<usize>> = link
        .components()
        .into_iter()
        .map(|c| c.into_iter().filter(|v| (1..=2 * k).contains(v)).map(|v| (v - 1) as usize).collect())
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LowerEvidence {
    /// Every polyhedron needs one piece.
    Trivial,
    /// Reduced homology is nonzero, so the polyhedron is not contractible.
    NontrivialHomology(HomologySummary),
    /// No free edge in any triangulation.
    Boundaryless(String),
    /// Only this triangulation is known not to collapse.
    TriangulationNotCollapsible,
    /// A generator outside the relator contributes a circle.
    UnusedGenerators(Vec<char>),
    /// No algebraic collapse and not of the form `<x | (xX)^±1>`, with the
    /// criterion certificate when its hypotheses hold on the triangulation.
    NoTwoCover { no2: Option<No2Certificate> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum UpperEvidence {
    Collapse(CollapseCertificate),
    Cover(Cover),
}

impl UpperEvidence {
    /// Replays the certificate; `Ok` means the bound is proved.
    pub fn verify(&self) -> Result<(), String> {
        match self {
            UpperEvidence::Collapse(c) => c.verify_to_point().map_err(|e| e.to_string()),
            UpperEvidence::Cover(c) => {
                let r = crate::covers::verify_cover(&c.parent, c);
                if r.ok() {
                    Ok(())
                } else {
                    Err(format!("cover fails verification: {r:?}"))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlgcatReport {
    pub presentation: String,
    pub lower: u8,
    pub lower_evidence: Vec<LowerEvidence>,
    pub upper: u8,
    pub upper_evidence: UpperEvidence,
    /// How the upper bound was obtained.
    pub upper_method: String,
    pub exact: Option<u8>,
}

fn report(p: &OneRelatorPresentation, lower: u8, lower_evidence: Vec<LowerEvidence>, upper: u8, ev: UpperEvidence, method: String) -> PlgcatReport {
    PlgcatReport {
        presentation: p.to_string(),
        lower,
        lower_evidence,
        upper,
        upper_evidence: ev,
        upper_method: method,
        exact: (lower == upper).then_some(upper),
    }
}

/// Bounds the PL geometric category of the presentation complex.
pub fn classify_plgcat(p: &OneRelatorPresentation) -> Result<PlgcatReport, OneRelatorError> {
    let unused = p.unused_generators();
    if unused.is_empty() {
        classify_homogeneous(p)
    } else {
        classify_with_unused(p, &unused)
    }
}

fn classify_homogeneous(p: &OneRelatorPresentation) -> Result<PlgcatReport, OneRelatorError> {
    let k = build_presentation_complex(p, false)?.complex;
    if let Some(cert) = is_collapsible(&k, u64::MAX).ok().and_then(|v| v.certificate().cloned()) {
        return Ok(report(p, 1, vec![LowerEvidence::Trivial], 1, UpperEvidence::Collapse(cert), "collapse".into()));
    }
    let h = homology(&k);
    let mut lower = 2;
    let mut lower_evidence = vec![if !h.is_trivial_reduced() {
        LowerEvidence::NontrivialHomology(h)
    } else if let Some(ev) = boundaryless_evidence(&k) {
        LowerEvidence::Boundaryless(ev)
    } else {
        LowerEvidence::TriangulationNotCollapsible
    }];
    let collapse_gen = has_algebraic_collapse(p);
    if collapse_gen.is_none() && !p.is_exceptional() {
        lower = 3;
        lower_evidence.push(LowerEvidence::NoTwoCover { no2: no2_criterion(&k).certificate().cloned() });
    }
    let (upper, cover, method) = if let Some(g) = collapse_gen {
        let sc = strip_cover(p)?;
        (2, sc.cover, format!("strip cover along generator {}", p.generators[g]))
    } else if p.is_exceptional() {
        match search_cover2(&k, SearchOptions::default())? {
            crate::covers::CoverSearchVerdict::Found(c) => (2, c, "two-piece cover found by search".to_string()),
            _ => {
                let sc = strong_cover(&k)?;
                (3, sc.cover, "strong-collapsible cover of the second subdivision".to_string())
            }
        }
    } else {
        let sc = strong_cover(&k)?;
        (3, sc.cover, "strong-collapsible cover of the second subdivision".to_string())
    };
    Ok(report(p, lower, lower_evidence, upper, UpperEvidence::Cover(cover), method))
}

/// Wedge of the homogeneous part with one circle per unused generator. The
/// result needs two pieces when the homogeneous part needs at most two; the
/// circles are split between the pieces of its cover.
fn classify_with_unused(p: &OneRelatorPresentation, unused: &[usize]) -> Result<PlgcatReport, OneRelatorError> {
    let q = p.homogeneous_part();
    let rq = classify_homogeneous(&q)?;
    let mut lower_evidence = vec![LowerEvidence::UnusedGenerators(unused.iter().map(|&g| p.generators[g]).collect())];
    lower_evidence.extend(rq.lower_evidence.iter().filter(|e| !matches!(e, LowerEvidence::Trivial)).cloned());
    let lower = rq.lower.max(2);
    if rq.upper == 3 {
        let k = build_presentation_complex(p, true)?.complex;
        let sc = strong_cover(&k)?;
        return Ok(report(p, lower, lower_evidence, 3, UpperEvidence::Cover(sc.cover), rq.upper_method));
    }
    let (base, pieces) = match &rq.upper_evidence {
        UpperEvidence::Collapse(c) => {
            let w = SimplicialComplex::closure_of([Simplex::vertex(0)]);
            (c.start.clone(), vec![c.start.clone(), w])
        }
        UpperEvidence::Cover(c) => (c.parent.clone(), c.pieces.clone()),
    };
    let mut next = base.max_vertex().unwrap_or(0) + 1;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for _ in unused {
        let (y1, y2) = (next, next + 1);
        next += 2;
        a.push(Simplex::edge(0, y1));
        b.extend([Simplex::edge(y1, y2), Simplex::edge(0, y2)]);
    }
    let a = SimplicialComplex::closure_of(a);
    let b = SimplicialComplex::closure_of(b);
    let k = base.union(&a).union(&b);
    let p0 = connect_components(&k, &pieces[0].union(&a))?;
    let p1 = connect_components(&k, &pieces[1].union(&b))?;
    let cover = Cover::certify(k, vec![p0, p1])?;
    let method = format!("{} with the extra circles split between the pieces", rq.upper_method);
    Ok(report(p, lower, lower_evidence, 2, UpperEvidence::Cover(cover), method))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> OneRelatorPresentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn parsing() {
        let p = parse("<x | xxX>");
        assert_eq!(p.relator.len(), 3);
        assert!(p.relator[2].inverse);
        assert_eq!(parse("<x|(xX)^1>").relator, parse("<x|xX>").relator);
        assert_eq!(parse("<a,b|(ab)^-2>").to_string(), "<a,b|BABA>");
        assert_eq!(parse_presentation("<a,b | abz>"), Err(OneRelatorError::UnknownGenerator('z')));
        assert_eq!(parse_presentation("<a|>"), Err(OneRelatorError::EmptyRelator));
        assert!(matches!(parse_presentation("<a|(a>"), Err(OneRelatorError::MalformedSyntax(_))));
        assert!(matches!(parse_presentation("<a|(a)^0>"), Err(OneRelatorError::MalformedSyntax(_))));
    }

    #[test]
    fn algebraic_collapses() {
        assert_eq!(has_algebraic_collapse(&parse("<a,b|aab>")), Some(1));
        assert_eq!(has_algebraic_collapse(&parse("<x|xxX>")), None);
        assert_eq!(has_algebraic_collapse(&parse("<a,b|abAB>")), None);
    }

    #[test]
    fn presentation_complexes() {
        let d = build_presentation_complex(&parse("<x|xxX>"), false).unwrap().complex;
        assert_eq!(d.euler_characteristic(), 1);
        assert!(homology(&d).is_trivial_reduced());
        let t = build_presentation_complex(&parse("<a,b|abAB>"), false).unwrap().complex;
        assert_eq!(homology(&t).betti, vec![1, 2, 1]);
        let s = build_presentation_complex(&parse("<x|xX>"), false).unwrap().complex;
        assert_eq!(homology(&s).betti, vec![1, 1, 1]);
        assert_eq!(
            build_presentation_complex(&parse("<a,b|aa>"), false),
            Err(OneRelatorError::GeneratorUnused('b'))
        );
    }

    #[test]
    fn whitehead_matches_link() {
        for (s, n) in [("<x|(xX)^2>", 2), ("<x|xxX>", 1), ("<a,b|abAB>", 1), ("<x|xX>", 2)] {
            let p = parse(s);
            let g = whitehead_graph(&p).unwrap();
            assert_eq!(g.edges.len(), p.relator.len());
            assert_eq!(g.components().len(), n, "{s}");
            assert_eq!(g.components(), wedge_link_components(&p).unwrap());
        }
    }

    #[test]
    fn classifier_examples() {
        let r = classify_plgcat(&parse("<x|x>")).unwrap();
        assert_eq!(r.exact, Some(1));
        let r = classify_plgcat(&parse("<x|xxX>")).unwrap();
        assert_eq!(r.exact, Some(3));
        let r = classify_plgcat(&parse("<x|xX>")).unwrap();
        assert_eq!(r.exact, Some(2));
        r.upper_evidence.verify().unwrap();
        let r = classify_plgcat(&parse("<a,b|aab>")).unwrap();
        assert_eq!(r.exact, Some(2));
        r.upper_evidence.verify().unwrap();
        let r = classify_plgcat(&parse("<a,b|aa>")).unwrap();
        assert_eq!(r.lower, 3);
        assert_eq!(r.upper, 3);
        let r = classify_plgcat(&parse("<a,b,c|bB>")).unwrap();
        assert_eq!(r.exact, Some(2));
        r.upper_evidence.verify().unwrap();
    }
}
