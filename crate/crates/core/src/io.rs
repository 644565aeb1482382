//! Line-oriented text formats: complexes (`.sc`), collapse certificates
//! (`.clps`), covers (`.cover`) and polygonal presentations (`.poly`).
//!
//! Files refer to complexes either by path, relative to the referring file,
//! or as `corpus:<name>`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::collapse::{apply_collapse, CollapseCertificate, CollapseError, CollapseStep, StrongCollapseCertificate, StrongCollapseStep};
use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::corpus::{self, CorpusError};
use crate::covers::{Cover, CoverError, PieceCertificate};
use crate::polygonal::{PolygonalError, PolygonalPresentation, SignedSymbol};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Polygonal(#[from] PolygonalError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{0}")]
    Mismatch(String),
}

fn perr(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line: line + 1, msg: msg.into() }
}

/// Non-blank, non-comment lines with their 0-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_vertices(line: usize, words: &[&str]) -> Result<Vec<Vertex>, IoError> {
    words.iter().map(|w| w.parse::<Vertex>().map_err(|_| perr(line, format!("bad vertex '{w}'")))).collect()
}

fn parse_simplex(line: usize, words: &[&str]) -> Result<Simplex, IoError> {
    if words.is_empty() {
        return Err(perr(line, "empty simplex"));
    }
    Simplex::new(&parse_vertices(line, words)?).map_err(|e| perr(line, e.to_string()))
}

fn simplex_words(s: &Simplex) -> String {
    s.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_sc(text: &str) -> Result<SimplicialComplex, IoError> {
    let mut dim: Option<i64> = None;
    let mut simplices = Vec::new();
    for (i, line) in content_lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "dim" if dim.is_none() && simplices.is_empty() => {
                let d = words.get(1).and_then(|w| w.parse::<i64>().ok()).filter(|d| (-1..=2).contains(d));
                dim = Some(d.ok_or_else(|| perr(i, "expected 'dim D' with D in 0..=2"))?);
            }
            "s" => simplices.push(parse_simplex(i, &words[1..])?),
            other => return Err(perr(i, format!("unexpected '{other}'"))),
        }
    }
    let k = SimplicialComplex::closure_of(simplices);
    if let Some(d) = dim {
        let actual = k.dim().map(|d| d as i64).unwrap_or(-1);
        if actual != d {
            return Err(IoError::Mismatch(format!("declared dim {d}, simplices have dim {actual}")));
        }
    }
    Ok(k)
}

/// Maximal simplices, sorted.
pub fn write_sc(k: &SimplicialComplex) -> String {
    let mut out = format!("dim {}\n", k.dim().map(|d| d as i64).unwrap_or(-1));
    write_simplices(&mut out, k);
    out
}

fn write_simplices(out: &mut String, k: &SimplicialComplex) {
    let mut max = k.maximal_simplices();
    max.sort();
    for s in max {
        let _ = writeln!(out, "s {}", simplex_words(&s));
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

/// Resolves `corpus:<name>` or a `.sc` path relative to `base`.
pub fn load_complex(reference: &str, base: Option<&Path>) -> Result<SimplicialComplex, IoError> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        return Ok(corpus::get(name)?.complex()?);
    }
    parse_sc(&read_text(&resolve(reference, base))?)
}

fn resolve(reference: &str, base: Option<&Path>) -> PathBuf {
    let p = Path::new(reference);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClpsStep {
    Elementary(CollapseStep),
    Strong(StrongCollapseStep),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClpsFile {
    pub start: String,
    pub steps: Vec<ClpsStep>,
}

pub fn parse_clps(text: &str) -> Result<ClpsFile, IoError> {
    let mut start = None;
    let mut steps = Vec::new();
    for (i, line) in content_lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "start" if start.is_none() => {
                start = Some(line["start".len()..].trim().to_string());
            }
            "c" => {
                let bar = words.iter().position(|w| *w == "|").ok_or_else(|| perr(i, "expected 'c σ | τ'"))?;
                let free_face = parse_simplex(i, &words[1..bar])?;
                let coface = parse_simplex(i, &words[bar + 1..])?;
                steps.push(ClpsStep::Elementary(CollapseStep { free_face, coface }));
            }
            "d" => {
                if words.len() != 4 || words[2] != "<-" {
                    return Err(perr(i, "expected 'd v <- w'"));
                }
                let v = parse_vertices(i, &[words[1], words[3]])?;
                steps.push(ClpsStep::Strong(StrongCollapseStep { removed: v[0], dominator: v[1] }));
            }
            other => return Err(perr(i, format!("unexpected '{other}'"))),
        }
    }
    let start = start.ok_or_else(|| perr(0, "missing 'start' line"))?;
    Ok(ClpsFile { start, steps })
}

pub fn write_clps(start: &str, steps: &[ClpsStep]) -> String {
    let mut out = format!("start {start}\n");
    for s in steps {
        let _ = match s {
            ClpsStep::Elementary(c) => writeln!(out, "c {} | {}", simplex_words(&c.free_face), simplex_words(&c.coface)),
            ClpsStep::Strong(d) => writeln!(out, "d {} <- {}", d.removed, d.dominator),
        };
    }
    out
}

pub fn certificate_steps(c: &PieceCertificate) -> Vec<ClpsStep> {
    match c {
        PieceCertificate::Elementary(c) => c.steps.iter().map(|s| ClpsStep::Elementary(*s)).collect(),
        PieceCertificate::Strong(c) => c.steps.iter().map(|s| ClpsStep::Strong(*s)).collect(),
    }
}

/// Replays steps from `start`, checking each one, and returns the complex reached.
pub fn replay_clps(start: &SimplicialComplex, steps: &[ClpsStep]) -> Result<SimplicialComplex, IoError> {
    let mut k = start.clone();
    for s in steps {
        k = match s {
            ClpsStep::Elementary(c) => apply_collapse(&k, c)?,
            ClpsStep::Strong(d) => {
                let cert = StrongCollapseCertificate { start: k.clone(), steps: vec![*d], end: k.delete_vertex(d.removed) };
                cert.verify()?;
                cert.end
            }
        };
    }
    Ok(k)
}

/// A certificate whose steps are all elementary or all strong.
pub fn piece_certificate(start: &SimplicialComplex, steps: &[ClpsStep]) -> Result<PieceCertificate, IoError> {
    let end = replay_clps(start, steps)?;
    if steps.iter().all(|s| matches!(s, ClpsStep::Strong(_))) && !steps.is_empty() {
        let steps = steps.iter().map(|s| if let ClpsStep::Strong(d) = s { *d } else { unreachable!() }).collect();
        Ok(PieceCertificate::Strong(StrongCollapseCertificate { start: start.clone(), steps, end }))
    } else if steps.iter().all(|s| matches!(s, ClpsStep::Elementary(_))) {
        let steps = steps.iter().map(|s| if let ClpsStep::Elementary(c) = s { *c } else { unreachable!() }).collect();
        Ok(PieceCertificate::Elementary(CollapseCertificate { start: start.clone(), steps, end }))
    } else {
        Err(IoError::Mismatch("certificate mixes elementary and strong steps".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPiece {
    pub complex: SimplicialComplex,
    pub cert: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverFile {
    pub parent: Option<String>,
    pub pieces: Vec<CoverPiece>,
}

pub fn parse_cover(text: &str) -> Result<CoverFile, IoError> {
    let mut parent = None;
    let mut pieces: Vec<(Vec<Simplex>, Option<String>)> = Vec::new();
    for (i, line) in content_lines(text) {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "parent" if parent.is_none() && pieces.is_empty() => parent = Some(line["parent".len()..].trim().to_string()),
            "piece" => {
                let n: usize = words.get(1).and_then(|w| w.parse().ok()).ok_or_else(|| perr(i, "expected 'piece N'"))?;
                if n != pieces.len() + 1 {
                    return Err(perr(i, format!("expected piece {}, found {n}", pieces.len() + 1)));
                }
                pieces.push((Vec::new(), None));
            }
            "s" => pieces.last_mut().ok_or_else(|| perr(i, "simplex before 'piece'"))?.0.push(parse_simplex(i, &words[1..])?),
            "cert" => {
                let p = pieces.last_mut().ok_or_else(|| perr(i, "cert before 'piece'"))?;
                p.1 = Some(line["cert".len()..].trim().to_string());
            }
            other => return Err(perr(i, format!("unexpected '{other}'"))),
        }
    }
    let pieces = pieces
        .into_iter()
        .map(|(s, cert)| CoverPiece { complex: SimplicialComplex::closure_of(s), cert })
        .collect();
    Ok(CoverFile { parent, pieces })
}

pub fn write_cover(parent: Option<&str>, pieces: &[SimplicialComplex], certs: &[Option<String>]) -> String {
    let mut out = String::new();
    if let Some(p) = parent {
        let _ = writeln!(out, "parent {p}");
    }
    for (i, piece) in pieces.iter().enumerate() {
        let _ = writeln!(out, "piece {}", i + 1);
        write_simplices(&mut out, piece);
        if let Some(Some(c)) = certs.get(i) {
            let _ = writeln!(out, "cert {c}");
        }
    }
    out
}

/// Builds a certified cover from a parsed file. Pieces with a `cert` line are
/// checked against that certificate; the others are certified afresh.
pub fn load_cover(file: &CoverFile, parent: SimplicialComplex, base: Option<&Path>) -> Result<Cover, IoError> {
    let pieces: Vec<SimplicialComplex> = file.pieces.iter().map(|p| p.complex.clone()).collect();
    let mut cover = Cover::certify(parent, pieces)?;
    for (i, p) in file.pieces.iter().enumerate() {
        if let Some(c) = &p.cert {
            let clps = parse_clps(&read_text(&resolve(c, base))?)?;
            let cert = piece_certificate(&p.complex, &clps.steps)?;
            cert.verify_to_point().map_err(|e| IoError::Mismatch(format!("piece {}: {e}", i + 1)))?;
            cover.certificates[i] = cert;
        }
    }
    Ok(cover)
}

pub fn parse_poly(text: &str) -> Result<PolygonalPresentation, IoError> {
    let mut alphabet = None;
    let mut words = Vec::new();
    for (i, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "alphabet" if alphabet.is_none() => {
                alphabet = Some(
                    toks[1..]
                        .iter()
                        .map(|t| match SignedSymbol::parse(t) {
                            Ok(s) if !s.inverse => Ok(s.symbol),
                            _ => Err(perr(i, format!("bad alphabet symbol '{t}'"))),
                        })
                        .collect::<Result<_, _>>()?,
                );
            }
            "w" => words.push(
                toks[1..].iter().map(|t| SignedSymbol::parse(t).map_err(|e| perr(i, e.to_string()))).collect::<Result<Vec<_>, _>>()?,
            ),
            other => return Err(perr(i, format!("unexpected '{other}'"))),
        }
    }
    let alphabet = alphabet.ok_or_else(|| perr(0, "missing 'alphabet' line"))?;
    let p = PolygonalPresentation { alphabet, words };
    p.validate()?;
    Ok(p)
}

pub fn write_poly(p: &PolygonalPresentation) -> String {
    let mut out = format!("alphabet {}\n", p.alphabet.iter().cloned().collect::<Vec<_>>().join(" "));
    for w in &p.words {
        let _ = writeln!(out, "w {}", crate::polygonal::word_to_string(w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::{is_collapsible, strong_collapse_core};

    #[test]
    fn sc_round_trip() {
        let k = parse_sc("# two triangles\ndim 2\ns 0 1 2\n\ns 1 2 3\ns 3 4\n").unwrap();
        assert_eq!(k.f_vector(), [5, 6, 2]);
        assert_eq!(parse_sc(&write_sc(&k)).unwrap(), k);
        assert!(write_sc(&k).starts_with("dim 2\ns 0 1 2\ns 1 2 3\ns 3 4\n"));
        assert!(matches!(parse_sc("dim 1\ns 0 1 2\n"), Err(IoError::Mismatch(_))));
        assert!(matches!(parse_sc("s 0 0 1\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_sc("t 0 1\n"), Err(IoError::Parse { .. })));
    }

    #[test]
    fn clps_round_trip() {
        let k = parse_sc("s 0 1 2\ns 1 2 3\n").unwrap();
        let cert = is_collapsible(&k, 1000).unwrap().certificate().unwrap().clone();
        let steps: Vec<ClpsStep> = cert.steps.iter().map(|s| ClpsStep::Elementary(*s)).collect();
        let text = write_clps("k.sc", &steps);
        let f = parse_clps(&text).unwrap();
        assert_eq!(f.start, "k.sc");
        assert_eq!(f.steps, steps);
        assert_eq!(replay_clps(&k, &f.steps).unwrap(), cert.end);

        let strong = strong_collapse_core(&k);
        let steps: Vec<ClpsStep> = strong.steps.iter().map(|s| ClpsStep::Strong(*s)).collect();
        let f = parse_clps(&write_clps("k.sc", &steps)).unwrap();
        assert!(piece_certificate(&k, &f.steps).unwrap().is_strong());
        assert!(replay_clps(&k, &[ClpsStep::Strong(StrongCollapseStep { removed: 0, dominator: 3 })]).is_err());
    }

    #[test]
    fn cover_and_poly_round_trip() {
        let a = parse_sc("s 0 1 2\n").unwrap();
        let b = parse_sc("s 1 2 3\n").unwrap();
        let text = write_cover(Some("corpus:triangle"), &[a.clone(), b.clone()], &[]);
        let f = parse_cover(&text).unwrap();
        assert_eq!(f.parent.as_deref(), Some("corpus:triangle"));
        assert_eq!(f.pieces.iter().map(|p| p.complex.clone()).collect::<Vec<_>>(), vec![a, b]);
        assert!(parse_cover("piece 2\ns 0 1\n").is_err());

        let p = parse_poly("alphabet a b\nw a b A B\n").unwrap();
        assert_eq!(p, PolygonalPresentation::from_compact(&["abAB"]).unwrap());
        assert_eq!(parse_poly(&write_poly(&p)).unwrap(), p);
        assert!(parse_poly("alphabet a b c\nw a b A B\n").is_err());
    }
}
