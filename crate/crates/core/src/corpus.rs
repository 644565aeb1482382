//! Built-in named examples with their expected invariants.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::collapse::{free_faces, is_collapsible};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::covers::{graph_cover2, search_cover2, strong_cover, verify_cover, Cover, SearchOptions};
use crate::homology::homology;
use crate::io;
use crate::one_relator::{build_presentation_complex, classify_plgcat, parse_presentation};
use crate::polygonal::{realize, PolygonalPresentation};
use crate::structure::{analyze, no2_criterion};
use crate::subdivision::SecondSubdivision;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry '{0}'")]
    UnknownName(String),
    #[error("corpus entry '{0}' is broken: {1}")]
    Broken(String, String),
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Stated in the literature for this space.
    Published,
    /// Follows from the definitions by inspection.
    Definitional,
    /// Computed by an independent count or by the engines.
    Computed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Invariant {
    FVector([usize; 3]),
    EulerCharacteristic(i64),
    /// Betti numbers and torsion coefficients per degree.
    Homology { betti: Vec<usize>, torsion: Vec<Vec<u64>> },
    InnerConnected(bool),
    Pseudosurface(bool),
    SplittableCount(usize),
    NoFreeFaces(bool),
    Collapsible(bool),
    /// The stored cover verifies and has this many pieces.
    StoredCover(usize),
    Plgcat(u8),
    PlgcatAtMost(u8),
    /// Recorded for reference only; no engine certifies it.
    Note(String),
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::FVector(v) => write!(f, "f-vector {v:?}"),
            Invariant::EulerCharacteristic(x) => write!(f, "euler characteristic {x}"),
            Invariant::Homology { betti, torsion } => write!(f, "betti {betti:?} torsion {torsion:?}"),
            Invariant::InnerConnected(b) => write!(f, "inner-connected {b}"),
            Invariant::Pseudosurface(b) => write!(f, "pseudosurface {b}"),
            Invariant::SplittableCount(n) => write!(f, "{n} splittable vertices"),
            Invariant::NoFreeFaces(b) => write!(f, "no free faces {b}"),
            Invariant::Collapsible(b) => write!(f, "collapsible {b}"),
            Invariant::StoredCover(n) => write!(f, "stored cover with {n} pieces"),
            Invariant::Plgcat(n) => write!(f, "plgcat = {n}"),
            Invariant::PlgcatAtMost(n) => write!(f, "plgcat <= {n}"),
            Invariant::Note(s) => write!(f, "note: {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub invariant: Invariant,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Complex,
    Presentation,
    Polygonal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Payload {
    Complex(SimplicialComplex),
    Presentation(String),
    Polygonal(PolygonalPresentation),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub payload: Payload,
    /// Pieces of a known cover of the complex.
    pub cover: Option<Vec<SimplicialComplex>>,
    pub expected: Vec<Expected>,
}

impl CorpusEntry {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Complex(_) => Kind::Complex,
            Payload::Presentation(_) => Kind::Presentation,
            Payload::Polygonal(_) => Kind::Polygonal,
        }
    }

    /// The simplicial complex of the entry: the payload itself, the built
    /// presentation complex, or the realization.
    pub fn complex(&self) -> Result<SimplicialComplex, CorpusError> {
        let broken = |e: String| CorpusError::Broken(self.name.to_string(), e);
        match &self.payload {
            Payload::Complex(k) => Ok(k.clone()),
            Payload::Presentation(s) => {
                let p = parse_presentation(s).map_err(|e| broken(e.to_string()))?;
                Ok(build_presentation_complex(&p, true).map_err(|e| broken(e.to_string()))?.complex)
            }
            Payload::Polygonal(p) => realize(p).map_err(|e| broken(e.to_string())),
        }
    }
}

fn k(lists: &[&[Vertex]]) -> SimplicialComplex {
    SimplicialComplex::from_vertex_lists(lists.iter().map(|l| l.to_vec())).expect("corpus complex")
}

fn sc(text: &str) -> SimplicialComplex {
    io::parse_sc(text).expect("corpus data")
}

fn pieces(text: &str) -> Vec<SimplicialComplex> {
    io::parse_cover(text).expect("corpus data").pieces.into_iter().map(|p| p.complex).collect()
}

fn e(invariant: Invariant, provenance: Provenance) -> Expected {
    Expected { invariant, provenance }
}

fn hom(betti: &[usize], torsion: &[&[u64]]) -> Invariant {
    Invariant::Homology { betti: betti.to_vec(), torsion: torsion.iter().map(|t| t.to_vec()).collect() }
}

pub fn octahedron() -> SimplicialComplex {
    k(&[
        &[0, 2, 4], &[0, 2, 5], &[0, 3, 4], &[0, 3, 5],
        &[1, 2, 4], &[1, 2, 5], &[1, 3, 4], &[1, 3, 5],
    ])
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut t = Vec::new();
    for i in 0..7 {
        t.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        t.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_vertex_lists(t).unwrap()
}

/// Square grid of `w × h` cells, each cut along its main diagonal, with
/// vertex `(i, j)` sent to `id(i, j)`.
fn grid(w: u32, h: u32, id: impl Fn(u32, u32) -> Vertex) -> SimplicialComplex {
    let mut t = Vec::new();
    for i in 0..w {
        for j in 0..h {
            t.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            t.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::from_vertex_lists(t).unwrap()
}

pub fn dunce_hat() -> SimplicialComplex {
    k(&[
        &[0, 1, 3], &[0, 1, 4], &[0, 1, 6], &[0, 2, 3], &[0, 2, 5], &[0, 2, 7], &[0, 4, 6], &[0, 5, 7], &[1, 2, 5],
        &[1, 2, 6], &[1, 2, 7], &[1, 3, 7], &[1, 4, 5], &[2, 3, 6], &[3, 6, 7], &[4, 5, 7], &[4, 6, 7],
    ])
}

/// The octahedron with two triangle circles attached at vertex 0.
fn fox_p1() -> SimplicialComplex {
    octahedron().union(&k(&[&[0, 6], &[6, 7], &[0, 7], &[0, 8], &[8, 9], &[0, 9]]))
}

/// The second subdivision of the octahedron with the points at vertices 0,
/// 2 and 4 identified. Their stars are disjoint and far apart, so the
/// quotient stays simplicial.
fn fox_p2() -> SimplicialComplex {
    let sd = SecondSubdivision::new(&octahedron());
    let a = sd.barycenter(&Simplex::vertex(0)).unwrap();
    let b = sd.barycenter(&Simplex::vertex(2)).unwrap();
    let c = sd.barycenter(&Simplex::vertex(4)).unwrap();
    let glued = sd.complex().relabel(|v| if v == b || v == c { a } else { v }).unwrap();
    // renumber compactly
    let ids: std::collections::BTreeMap<Vertex, Vertex> = glued.vertices().enumerate().map(|(i, v)| (v, i as Vertex)).collect();
    glued.relabel(|v| ids[&v]).unwrap()
}

const NAMES: &[&str] = &[
    "triangle", "path", "cycle5", "tree", "wedge_two_circles", "octahedron", "torus", "rp2", "klein_bottle", "disk12",
    "annulus", "dunce_hat", "bing_house", "fox_p1", "fox_p2", "wedge_triangles", "wedge_spheres", "xxX", "xxxXX",
    "xxxxXXX", "xX", "abAB", "aab", "poly_torus", "poly_klein",
];

pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn get(name: &str) -> Result<CorpusEntry, CorpusError> {
    use Invariant::*;
    use Provenance::*;
    let entry = |name: &'static str, description: &'static str, payload: Payload, expected: Vec<Expected>| CorpusEntry {
        name,
        description,
        payload,
        cover: None,
        expected,
    };
    let c = Payload::Complex;
    let pres = |s: &str| Payload::Presentation(s.to_string());
    Ok(match name {
        "triangle" => entry("triangle", "a single triangle", c(k(&[&[0, 1, 2]])), vec![
            e(FVector([3, 3, 1]), Definitional),
            e(Collapsible(true), Definitional),
            e(Plgcat(1), Definitional),
        ]),
        "path" => entry("path", "a path with three edges", c(k(&[&[0, 1], &[1, 2], &[2, 3]])), vec![
            e(Collapsible(true), Definitional),
            e(Plgcat(1), Definitional),
        ]),
        "cycle5" => entry("cycle5", "a cycle of length five", c(k(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[0, 4]])), vec![
            e(hom(&[1, 1, 0], &[&[], &[], &[]]), Definitional),
            e(Collapsible(false), Definitional),
            e(Plgcat(2), Definitional),
        ]),
        "tree" => entry("tree", "a tree with six vertices", c(k(&[&[0, 1], &[0, 2], &[0, 3], &[3, 4], &[3, 5]])), vec![
            e(Collapsible(true), Definitional),
            e(Plgcat(1), Definitional),
        ]),
        "wedge_two_circles" => entry(
            "wedge_two_circles",
            "two triangle circles sharing a vertex",
            c(k(&[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[3, 4], &[0, 4]])),
            vec![e(hom(&[1, 2, 0], &[&[], &[], &[]]), Definitional), e(Plgcat(2), Computed)],
        ),
        "octahedron" => CorpusEntry {
            cover: Some(vec![
                k(&[&[0, 2, 4], &[0, 3, 4], &[1, 2, 4], &[1, 3, 4]]),
                k(&[&[0, 2, 5], &[0, 3, 5], &[1, 2, 5], &[1, 3, 5]]),
            ]),
            ..entry("octahedron", "boundary of the octahedron, a 2-sphere", c(octahedron()), vec![
                e(FVector([6, 12, 8]), Definitional),
                e(hom(&[1, 0, 1], &[&[], &[], &[]]), Definitional),
                e(Pseudosurface(true), Definitional),
                e(StoredCover(2), Computed),
                e(Plgcat(2), Published),
            ])
        },
        "torus" => entry("torus", "seven-vertex torus", c(torus()), vec![
            e(FVector([7, 21, 14]), Computed),
            e(hom(&[1, 2, 1], &[&[], &[], &[]]), Definitional),
            e(Pseudosurface(true), Definitional),
            e(Plgcat(3), Computed),
        ]),
        "rp2" => entry(
            "rp2",
            "six-vertex real projective plane",
            c(k(&[
                &[0, 1, 3], &[0, 1, 5], &[0, 2, 4], &[0, 2, 5], &[0, 3, 4],
                &[1, 2, 3], &[1, 2, 4], &[1, 4, 5], &[2, 3, 5], &[3, 4, 5],
            ])),
            vec![
                e(FVector([6, 15, 10]), Computed),
                e(hom(&[1, 0, 0], &[&[], &[2], &[]]), Definitional),
                e(Plgcat(3), Computed),
            ],
        ),
        "klein_bottle" => entry(
            "klein_bottle",
            "Klein bottle on a 3 × 3 grid with one side glued reversed",
            c(grid(3, 3, |i, j| {
                let (i, j) = if j == 3 { ((3 - i % 3) % 3, 0) } else { (i % 3, j) };
                3 * i + j
            })),
            vec![
                e(FVector([9, 27, 18]), Computed),
                e(hom(&[1, 1, 0], &[&[], &[2], &[]]), Definitional),
                e(Plgcat(3), Computed),
            ],
        ),
        "disk12" => entry("disk12", "a disk made of twelve triangles", c(grid(3, 2, |i, j| 3 * i + j)), vec![
            e(FVector([12, 23, 12]), Computed),
            e(Collapsible(true), Definitional),
            e(Plgcat(1), Definitional),
        ]),
        "annulus" => entry("annulus", "an annulus made of six triangles", c(grid(3, 1, |i, j| 2 * (i % 3) + j)), vec![
            e(FVector([6, 12, 6]), Computed),
            e(hom(&[1, 1, 0], &[&[], &[], &[]]), Definitional),
            e(Plgcat(2), Computed),
        ]),
        "dunce_hat" => entry("dunce_hat", "eight-vertex dunce hat", c(dunce_hat()), vec![
            e(FVector([8, 24, 17]), Computed),
            e(EulerCharacteristic(1), Computed),
            e(hom(&[1, 0, 0], &[&[], &[], &[]]), Published),
            e(InnerConnected(true), Published),
            e(SplittableCount(1), Published),
            e(NoFreeFaces(true), Computed),
            e(Plgcat(3), Published),
        ]),
        "bing_house" => CorpusEntry {
            cover: Some(pieces(include_str!("../data/bing_house.cover"))),
            ..entry("bing_house", "Bing's house with two rooms", c(sc(include_str!("../data/bing_house.sc"))), vec![
                e(hom(&[1, 0, 0], &[&[], &[], &[]]), Published),
                e(NoFreeFaces(true), Computed),
                e(StoredCover(2), Published),
                e(Plgcat(2), Published),
            ])
        },
        "fox_p1" => CorpusEntry {
            cover: Some(vec![
                k(&[&[0, 2, 4], &[0, 3, 4], &[1, 2, 4], &[1, 3, 4], &[0, 6], &[0, 8]]),
                k(&[&[0, 2, 5], &[0, 3, 5], &[1, 2, 5], &[1, 3, 5], &[6, 7], &[0, 7], &[8, 9], &[0, 9]]),
            ]),
            ..entry("fox_p1", "a 2-sphere with two circles attached at a point", c(fox_p1()), vec![
                e(hom(&[1, 2, 1], &[&[], &[], &[]]), Definitional),
                e(StoredCover(2), Computed),
                e(Plgcat(2), Published),
            ])
        },
        "fox_p2" => entry("fox_p2", "a 2-sphere with three points identified", c(fox_p2()), vec![
            e(hom(&[1, 2, 1], &[&[], &[], &[]]), Definitional),
            e(Note("plgcat = 3 as stated in the literature; not certified here".into()), Published),
        ]),
        "wedge_triangles" => entry(
            "wedge_triangles",
            "two triangles sharing a vertex",
            c(k(&[&[0, 1, 2], &[0, 3, 4]])),
            vec![e(InnerConnected(false), Definitional), e(Collapsible(true), Definitional), e(Plgcat(1), Definitional)],
        ),
        "wedge_spheres" => entry(
            "wedge_spheres",
            "two tetrahedron boundaries sharing a vertex",
            c(k(&[
                &[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3],
                &[0, 4, 5], &[0, 4, 6], &[0, 5, 6], &[4, 5, 6],
            ])),
            vec![
                e(hom(&[1, 0, 2], &[&[], &[], &[]]), Definitional),
                e(InnerConnected(false), Definitional),
                e(Plgcat(2), Computed),
            ],
        ),
        "xxX" => entry("xxX", "the dunce hat as a presentation complex", pres("<x|xxX>"), vec![
            e(EulerCharacteristic(1), Published),
            e(hom(&[1, 0, 0], &[&[], &[], &[]]), Published),
            e(Plgcat(3), Published),
        ]),
        "xxxXX" => entry("xxxXX", "contractible one-relator complex", pres("<x|xxxXX>"), vec![
            e(hom(&[1, 0, 0], &[&[], &[], &[]]), Computed),
            e(Plgcat(3), Computed),
        ]),
        "xxxxXXX" => entry("xxxxXXX", "contractible one-relator complex", pres("<x|xxxxXXX>"), vec![
            e(hom(&[1, 0, 0], &[&[], &[], &[]]), Computed),
            e(Plgcat(3), Computed),
        ]),
        "xX" => entry("xX", "a 2-sphere with a circle attached", pres("<x|(xX)^1>"), vec![
            e(hom(&[1, 1, 1], &[&[], &[], &[]]), Computed),
            e(Plgcat(2), Computed),
        ]),
        "abAB" => entry("abAB", "the torus as a presentation complex", pres("<a,b|abAB>"), vec![
            e(hom(&[1, 2, 1], &[&[], &[], &[]]), Definitional),
            e(Plgcat(3), Computed),
        ]),
        "aab" => entry("aab", "collapses onto a circle", pres("<a,b|aab>"), vec![
            e(hom(&[1, 1, 0], &[&[], &[], &[]]), Computed),
            e(Plgcat(2), Published),
        ]),
        "poly_torus" => entry(
            "poly_torus",
            "torus as a square with opposite sides glued",
            Payload::Polygonal(PolygonalPresentation::from_compact(&["abAB"]).unwrap()),
            vec![e(hom(&[1, 2, 1], &[&[], &[], &[]]), Definitional), e(EulerCharacteristic(0), Definitional)],
        ),
        "poly_klein" => entry(
            "poly_klein",
            "Klein bottle as a square",
            Payload::Polygonal(PolygonalPresentation::from_compact(&["abAb"]).unwrap()),
            vec![e(hom(&[1, 1, 0], &[&[], &[2], &[]]), Definitional), e(EulerCharacteristic(0), Definitional)],
        ),
        other => return Err(CorpusError::UnknownName(other.to_string())),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub expected: Expected,
    /// `None` for notes, which are not checked.
    pub holds: Option<bool>,
    pub found: String,
}

/// Bounds on plgcat established by the engines.
fn plgcat_bounds(entry: &CorpusEntry, k: &SimplicialComplex) -> Result<(u8, u8), String> {
    if let Payload::Presentation(s) = &entry.payload {
        let p = parse_presentation(s).map_err(|e| e.to_string())?;
        let r = classify_plgcat(&p).map_err(|e| e.to_string())?;
        r.upper_evidence.verify()?;
        return Ok((r.lower, r.upper));
    }
    if is_collapsible(k, u64::MAX).map_err(|e| e.to_string())?.is_collapsible() {
        return Ok((1, 1));
    }
    let lower = if no2_criterion(k).certificate().is_some() { 3 } else { 2 };
    if let Some(pieces) = &entry.cover {
        let cover = Cover::certify(k.clone(), pieces.clone()).map_err(|e| e.to_string())?;
        if verify_cover(k, &cover).ok() {
            return Ok((lower, cover.len() as u8));
        }
    }
    if k.dim() == Some(1) {
        let gc = graph_cover2(k).map_err(|e| e.to_string())?;
        return Ok((lower, gc.cover.len() as u8));
    }
    if lower == 2 {
        let v = search_cover2(k, SearchOptions::default()).map_err(|e| e.to_string())?;
        if let Some(c) = v.cover().filter(|c| verify_cover(k, c).ok()) {
            return Ok((lower, c.len() as u8));
        }
    }
    let sc = strong_cover(k).map_err(|e| e.to_string())?;
    if !verify_cover(sc.subdivision.complex(), &sc.cover).ok() {
        return Err("strong cover does not verify".into());
    }
    let upper = sc.cover.len() as u8;
    Ok((lower, upper))
}

pub fn verify(entry: &CorpusEntry) -> Result<Vec<CheckOutcome>, CorpusError> {
    let k = entry.complex()?;
    let mut bounds = None;
    let mut out = Vec::new();
    for ex in &entry.expected {
        let (holds, found) = match &ex.invariant {
            Invariant::FVector(v) => (Some(k.f_vector() == *v), format!("{:?}", k.f_vector())),
            Invariant::EulerCharacteristic(x) => (Some(k.euler_characteristic() == *x), k.euler_characteristic().to_string()),
            Invariant::Homology { betti, torsion } => {
                let h = homology(&k);
                let t: Vec<Vec<u64>> =
                    h.torsion.iter().map(|t| t.iter().map(|x| u64::try_from(x).unwrap_or(u64::MAX)).collect()).collect();
                (Some(&h.betti == betti && &t == torsion), format!("betti {:?} torsion {t:?}", h.betti))
            }
            Invariant::InnerConnected(b) => {
                let a = analyze(&k).inner_connected;
                (Some(a == *b), a.to_string())
            }
            Invariant::Pseudosurface(b) => {
                let a = analyze(&k).pseudosurface;
                (Some(a == *b), a.to_string())
            }
            Invariant::SplittableCount(n) => {
                let s = analyze(&k).splittable_vertices;
                (Some(s.len() == *n), format!("{s:?}"))
            }
            Invariant::NoFreeFaces(b) => {
                let n = free_faces(&k).len();
                (Some((n == 0) == *b), format!("{n} free faces"))
            }
            Invariant::Collapsible(b) => {
                let a = is_collapsible(&k, u64::MAX).map(|v| v.is_collapsible()).unwrap_or(false);
                (Some(a == *b), a.to_string())
            }
            Invariant::StoredCover(n) => match &entry.cover {
                Some(p) => match Cover::certify(k.clone(), p.clone()) {
                    Ok(c) => {
                        let ok = verify_cover(&k, &c).ok();
                        (Some(ok && c.len() == *n), format!("{} pieces, verifies {ok}", c.len()))
                    }
                    Err(e) => (Some(false), e.to_string()),
                },
                None => (Some(false), "no stored cover".into()),
            },
            Invariant::Plgcat(_) | Invariant::PlgcatAtMost(_) => {
                if bounds.is_none() {
                    bounds = Some(plgcat_bounds(entry, &k));
                }
                match bounds.as_ref().unwrap() {
                    Ok((lo, hi)) => {
                        let holds = match ex.invariant {
                            Invariant::Plgcat(n) => *lo == n && *hi == n,
                            Invariant::PlgcatAtMost(n) => *hi <= n,
                            _ => unreachable!(),
                        };
                        (Some(holds), format!("{lo} <= plgcat <= {hi}"))
                    }
                    Err(e) => (Some(false), e.clone()),
                }
            }
            Invariant::Note(_) => (None, String::new()),
        };
        out.push(CheckOutcome { expected: ex.clone(), holds, found });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for n in list() {
            let e = get(n).unwrap();
            assert_eq!(e.name, n);
            assert!(e.complex().is_ok(), "{n}");
        }
        assert!(matches!(get("nope"), Err(CorpusError::UnknownName(_))));
    }

    #[test]
    fn payloads_are_deterministic() {
        for n in list() {
            assert_eq!(get(n).unwrap(), get(n).unwrap());
        }
        assert_eq!(io::write_sc(&get("dunce_hat").unwrap().complex().unwrap()), io::write_sc(&dunce_hat()));
    }

    #[test]
    fn small_entries_verify() {
        for n in ["triangle", "path", "cycle5", "tree", "octahedron", "rp2", "klein_bottle", "disk12", "annulus", "wedge_triangles"] {
            for c in verify(&get(n).unwrap()).unwrap() {
                assert_eq!(c.holds, Some(true), "{n}: {} found {}", c.expected.invariant, c.found);
            }
        }
    }
}
