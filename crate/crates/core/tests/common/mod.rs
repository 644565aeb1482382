#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use plgcat_core::complex::{Simplex, SimplicialComplex, Vertex};
use plgcat_core::one_relator::{parse_presentation, OneRelatorPresentation};
use rand::seq::SliceRandom;
use rand::Rng;

const GENS: [char; 3] = ['a', 'b', 'c'];

/// Random complex on `n` vertices: each triangle kept with probability
/// `p_tri`, each remaining edge with probability `p_edge`.
pub fn random_complex(rng: &mut impl Rng, n: Vertex, p_tri: f64, p_edge: f64) -> SimplicialComplex {
    let mut tops = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_edge) {
                tops.push(Simplex::edge(a, b));
            }
            for c in b + 1..n {
                if rng.gen_bool(p_tri) {
                    tops.push(Simplex::triangle(a, b, c));
                }
            }
        }
    }
    if tops.is_empty() {
        tops.push(Simplex::vertex(0));
    }
    SimplicialComplex::closure_of(tops)
}

pub fn relabel_randomly(rng: &mut impl Rng, k: &SimplicialComplex) -> SimplicialComplex {
    let vs: Vec<Vertex> = k.vertices().collect();
    let mut image = vs.clone();
    image.shuffle(rng);
    let map: BTreeMap<Vertex, Vertex> = vs.into_iter().zip(image).collect();
    k.relabel(|v| map[&v]).unwrap()
}

/// Brute-force isomorphism test for small complexes.
pub fn isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    if a.f_vector() != b.f_vector() || a.len() != b.len() {
        return false;
    }
    let av: Vec<Vertex> = a.vertices().collect();
    let bv: Vec<Vertex> = b.vertices().collect();
    let deg = |k: &SimplicialComplex, v: Vertex| k.star(v).map(|s| s.f_vector()).unwrap_or([0; 3]);
    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    fn go(
        i: usize,
        a: &SimplicialComplex,
        b: &SimplicialComplex,
        av: &[Vertex],
        bv: &[Vertex],
        map: &mut BTreeMap<Vertex, Vertex>,
        used: &mut BTreeSet<Vertex>,
        deg: &dyn Fn(&SimplicialComplex, Vertex) -> [usize; 3],
    ) -> bool {
        if i == av.len() {
            return a.simplices().all(|s| {
                let img: Vec<Vertex> = s.vertices().iter().map(|v| map[v]).collect();
                b.contains(&Simplex::new(&img).unwrap())
            });
        }
        let v = av[i];
        for &w in bv {
            if used.contains(&w) || deg(a, v) != deg(b, w) {
                continue;
            }
            // edges to already-mapped vertices must be preserved
            let ok = av[..i].iter().all(|u| a.contains(&Simplex::edge(*u, v)) == b.contains(&Simplex::edge(map[u], w)));
            if !ok {
                continue;
            }
            map.insert(v, w);
            used.insert(w);
            if go(i + 1, a, b, av, bv, map, used, deg) {
                return true;
            }
            map.remove(&v);
            used.remove(&w);
        }
        false
    }
    go(0, a, b, &av, &bv, &mut map, &mut used, &deg)
}

/// Every relator of length `1..=max_len` over `k` generators that uses all of them.
pub fn all_homogeneous(k: usize, max_len: usize) -> Vec<OneRelatorPresentation> {
    let letters: Vec<char> = GENS[..k].iter().flat_map(|g| [*g, g.to_ascii_uppercase()]).collect();
    let gens: Vec<String> = GENS[..k].iter().map(|g| g.to_string()).collect();
    let mut words = vec![String::new()];
    let mut out = Vec::new();
    for _ in 0..max_len {
        words = words.iter().flat_map(|w| letters.iter().map(move |c| format!("{w}{c}"))).collect();
        for w in &words {
            let p = parse_presentation(&format!("<{}|{w}>", gens.join(","))).unwrap();
            if p.unused_generators().is_empty() {
                out.push(p);
            }
        }
    }
    out
}

pub fn random_presentation(rng: &mut impl Rng, max_k: usize, max_len: usize, homogeneous: bool) -> OneRelatorPresentation {
    loop {
        let k = rng.gen_range(1..=max_k);
        let len = rng.gen_range(1..=max_len);
        let w: String = (0..len)
            .map(|_| {
                let g = GENS[rng.gen_range(0..k)];
                if rng.gen_bool(0.5) { g.to_ascii_uppercase() } else { g }
            })
            .collect();
        let gens: Vec<String> = GENS[..k].iter().map(|g| g.to_string()).collect();
        let p = parse_presentation(&format!("<{}|{w}>", gens.join(","))).unwrap();
        if !homogeneous || p.unused_generators().is_empty() {
            return p;
        }
    }
}
