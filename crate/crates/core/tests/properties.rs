mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use plgcat_core::collapse::{is_collapsible, is_collapsible_exhaustive, strong_collapse_core_ordered, VertexOrder};
use plgcat_core::covers::{search_cover2, verify_cover, CoverSearchVerdict, SearchMode, SearchOptions};
use plgcat_core::homology::{boundary_matrices, homology, smith_normal_form, sparse_invariant_factors, IntegerMatrix};
use plgcat_core::one_relator::classify_plgcat;
use plgcat_core::polygonal::{paste, realize, reflect, rotate, PolygonalPresentation, SignedSymbol};
use plgcat_core::{Simplex, SimplicialComplex, SubdivisionMap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex(seed: u64, n: u32, p_tri: f64, p_edge: f64) -> SimplicialComplex {
    common::random_complex(&mut ChaCha8Rng::seed_from_u64(seed), n, p_tri, p_edge)
}

fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect()).collect();
        let term = BigInt::from(m[0][c]) * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of k×k minors.
fn determinantal_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (m.len(), m.first().map_or(0, |x| x.len()));
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<i64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// All subcomplexes of a tiny complex that are collapsible, as bitmasks over
/// its simplices, then whether two of them cover it.
fn brute_force_two_cover(k: &SimplicialComplex) -> bool {
    let simplices: Vec<Simplex> = k.simplices().copied().collect();
    let n = simplices.len();
    assert!(n <= 18);
    let index = |s: &Simplex| simplices.iter().position(|t| t == s).unwrap();
    let facets: Vec<u32> =
        simplices.iter().map(|s| s.facets().iter().filter(|f| !f.is_empty()).fold(0, |acc, f| acc | (1 << index(f)))).collect();
    let mut good = Vec::new();
    for mask in 1u32..(1 << n) {
        if (0..n).any(|i| mask & (1 << i) != 0 && facets[i] & !mask != 0) {
            continue;
        }
        let sub = SimplicialComplex::closure_of((0..n).filter(|i| mask & (1 << i) != 0).map(|i| simplices[i]));
        if is_collapsible(&sub, u64::MAX).is_ok_and(|v| v.is_collapsible()) {
            good.push(mask);
        }
    }
    let all = (1u32 << n) - 1;
    good.iter().any(|a| good.iter().any(|b| a | b == all))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_agrees_with_exhaustive(seed in any::<u64>(), n in 3u32..7) {
        let k = complex(seed, n, 0.3, 0.15);
        prop_assume!(k.is_connected());
        let greedy = is_collapsible(&k, u64::MAX).unwrap().is_collapsible();
        let exhaustive = is_collapsible_exhaustive(&k, 1_000_000).unwrap().is_collapsible();
        prop_assert_eq!(greedy, exhaustive);
        if let Some(c) = is_collapsible(&k, u64::MAX).unwrap().certificate() {
            prop_assert!(c.verify_to_point().is_ok());
        }
    }

    #[test]
    fn smith_form_matches_minors(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-3i64..4, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| entries[i * 4 + j]).collect()).collect();
        let snf = smith_normal_form(&IntegerMatrix::from_rows(&m)).invariant_factors;
        let expected: Vec<BigInt> = determinantal_factors(&m).into_iter().map(|x| x.abs()).collect();
        prop_assert_eq!(snf, expected);
    }

    #[test]
    fn sparse_elimination_matches_dense(seed in any::<u64>(), n in 3u32..8) {
        let k = complex(seed, n, 0.35, 0.1);
        let (d1, d2) = boundary_matrices(&k);
        for d in [d1, d2] {
            let dense = smith_normal_form(&d.to_dense()).invariant_factors;
            prop_assert_eq!(sparse_invariant_factors(&d), dense);
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes(seed in any::<u64>(), n in 3u32..8) {
        let k = complex(seed, n, 0.35, 0.1);
        let (d1, d2) = boundary_matrices(&k);
        let (a, b) = (d1.to_dense(), d2.to_dense());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut s = BigInt::zero();
                for l in 0..a.cols() {
                    s += a.get(i, l) * b.get(l, j);
                }
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn homology_survives_subdivision(seed in any::<u64>(), n in 3u32..7) {
        let k = complex(seed, n, 0.3, 0.15);
        let sd = SubdivisionMap::new(&k);
        prop_assert_eq!(homology(sd.child()), homology(&k));
        prop_assert_eq!(sd.child().euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn strong_core_is_order_independent(seed in any::<u64>(), n in 3u32..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = common::random_complex(&mut rng, n, 0.3, 0.1);
        let a = strong_collapse_core_ordered(&k, VertexOrder::Smallest);
        let b = strong_collapse_core_ordered(&k, VertexOrder::Largest);
        let r = strong_collapse_core_ordered(&common::relabel_randomly(&mut rng, &k), VertexOrder::Largest);
        prop_assert!(a.verify().is_ok() && b.verify().is_ok());
        prop_assert!(common::isomorphic(&a.end, &b.end));
        prop_assert!(common::isomorphic(&a.end, &r.end));
    }

    #[test]
    fn polygonal_moves_keep_invariants(w in "[abcABC]{3,6}", v in "[abcABC]{3,5}") {
        let Ok(p) = PolygonalPresentation::from_compact(&[&w, &v]) else { return Ok(()) };
        let base = realize(&p).unwrap();
        let (h, chi) = (homology(&base), base.euler_characteristic());
        for q in [reflect(&p, 0).unwrap(), rotate(&p, 1).unwrap()] {
            let r = realize(&q).unwrap();
            prop_assert_eq!(homology(&r), h.clone());
            prop_assert_eq!(r.euler_characteristic(), chi);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_agrees_with_brute_force(seed in any::<u64>(), n in 4u32..6) {
        let k = complex(seed, n, 0.3, 0.15);
        prop_assume!(k.len() <= 18 && k.is_connected() && k.dim() == Some(2));
        let expected = brute_force_two_cover(&k);
        for mode in [SearchMode::Auto, SearchMode::Full] {
            let v = search_cover2(&k, SearchOptions { budget: 10_000_000, mode, reverse: false }).unwrap();
            match v {
                CoverSearchVerdict::Found(c) => {
                    prop_assert!(expected);
                    prop_assert!(verify_cover(&k, &c).ok());
                }
                CoverSearchVerdict::NotFoundExhausted { .. } => prop_assert!(!expected, "{mode:?} missed a cover of {k}"),
                CoverSearchVerdict::Unknown { .. } => prop_assert!(false, "budget"),
            }
        }
    }

    #[test]
    fn classifier_bounds_are_ordered(seed in any::<u64>()) {
        let p = common::random_presentation(&mut ChaCha8Rng::seed_from_u64(seed), 3, 8, false);
        let r = classify_plgcat(&p).unwrap();
        prop_assert!(1 <= r.lower && r.lower <= r.upper && r.upper <= 3, "{p}: {}..{}", r.lower, r.upper);
        prop_assert!(r.upper_evidence.verify().is_ok());
    }
}

#[test]
fn pasting_keeps_invariants() {
    let p = PolygonalPresentation::from_compact(&["abe", "Ecd", "aBcD"]).unwrap();
    let q = paste(&p, 0, 1, &SignedSymbol::new("e", false)).unwrap();
    let (a, b) = (realize(&p).unwrap(), realize(&q).unwrap());
    assert_eq!(homology(&a), homology(&b));
    assert_eq!(a.euler_characteristic(), b.euler_characteristic());
}
