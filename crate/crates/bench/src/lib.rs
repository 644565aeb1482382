//! Inputs shared by the benchmarks.

use plgcat_core::corpus;
use plgcat_core::one_relator::{parse_presentation, OneRelatorPresentation};
use plgcat_core::SimplicialComplex;

/// Corpus complexes by name.
pub fn complex(name: &str) -> SimplicialComplex {
    corpus::get(name).and_then(|e| e.complex()).expect("corpus entry")
}

pub fn presentation(text: &str) -> OneRelatorPresentation {
    parse_presentation(text).expect("valid presentation")
}

/// An `n`×`n` grid of squares, each cut into two triangles.
pub fn disk(n: u32) -> SimplicialComplex {
    let v = |i: u32, j: u32| i * (n + 1) + j;
    let mut tris = Vec::new();
    for i in 0..n {
        for j in 0..n {
            tris.push([v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            tris.push([v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    SimplicialComplex::from_vertex_lists(tris).expect("grid is simplicial")
}
