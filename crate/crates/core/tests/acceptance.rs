//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any fails.

mod common;

use std::time::Instant;

use plgcat_core::collapse::{free_faces, strong_collapse_core_ordered, StrongCollapseCertificate, VertexOrder};
use plgcat_core::corpus::{self, dunce_hat, octahedron, torus};
use plgcat_core::covers::{
    mayer_vietoris, search_cover2, star_removal_collapse, strong_cover, verify_cover, Cover, CoverSearchVerdict,
    PieceCertificate, SearchOptions,
};
use plgcat_core::homology::homology;
use plgcat_core::one_relator::{build_presentation_complex, classify_plgcat, has_algebraic_collapse, parse_presentation, UpperEvidence};
use plgcat_core::polygonal::{one_word_reduction, realize, replay, PasteRule};
use plgcat_core::strip::strip_cover;
use plgcat_core::structure::{analyze, no2_criterion};
use plgcat_core::{SecondSubdivision, Simplex, SimplicialComplex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, ok: impl Into<String>, err: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(err.into())
    }
}

/// Covers with two pieces seen during the run, checked by criterion 7.
#[derive(Default)]
struct Seen {
    two_covers: Vec<(String, Cover)>,
    strong: Vec<(String, StrongCollapseCertificate)>,
}

impl Seen {
    fn cover(&mut self, name: impl Into<String>, c: &Cover) {
        if c.len() == 2 {
            self.two_covers.push((name.into(), c.clone()));
        }
    }
}

fn criterion1(seen: &mut Seen) -> Outcome {
    let d = dunce_hat();
    let r = analyze(&d);
    if !free_faces(&d).is_empty() {
        return Err("free faces present".into());
    }
    if !r.inner_connected {
        return Err("not inner-connected".into());
    }
    if r.splittable_vertices.len() != 1 {
        return Err(format!("splittable vertices {:?}", r.splittable_vertices));
    }
    if r.disconnected_link_vertices.iter().any(|v| !r.splittable_vertices.contains(v)) {
        return Err(format!("disconnected links at {:?}", r.disconnected_link_vertices));
    }
    let h = homology(&d);
    if h.betti != [1, 0, 0] || h.torsion.iter().any(|t| !t.is_empty()) {
        return Err(format!("homology {h:?}"));
    }
    match no2_criterion(&d).certificate() {
        Some(c) if c.plgcat == 3 => {}
        _ => return Err("no2 criterion gave no certificate".into()),
    }
    let sc = strong_cover(&d).map_err(|e| e.to_string())?;
    let rep = verify_cover(sc.subdivision.complex(), &sc.cover);
    collect_strong(seen, "dunce_hat", &sc.cover);
    check(
        rep.ok() && sc.cover.len() == 3,
        format!("no free faces, 1 splittable vertex, homology (1,0,0), plgcat = 3, verified 3-piece cover of K'' ({} triangles)", sc.cover.parent.f_vector()[2]),
        "strong cover of K'' does not verify",
    )
}

fn collect_strong(seen: &mut Seen, name: &str, cover: &Cover) {
    for (i, c) in cover.certificates.iter().enumerate() {
        if let PieceCertificate::Strong(s) = c {
            seen.strong.push((format!("{name} piece {i}"), s.clone()));
        }
    }
}

fn criterion2() -> Outcome {
    let mut found = Vec::new();
    for n in 2..=4 {
        let s = format!("<x|{}{}>", "x".repeat(n), "X".repeat(n - 1));
        let r = classify_plgcat(&parse_presentation(&s).unwrap()).map_err(|e| e.to_string())?;
        r.upper_evidence.verify().map_err(|e| format!("{s}: {e}"))?;
        if r.exact != Some(3) {
            return Err(format!("{s}: {}..{}", r.lower, r.upper));
        }
        found.push(s);
    }
    Ok(format!("exact 3 for {}", found.join(", ")))
}

fn criterion3(seen: &mut Seen) -> Outcome {
    let p = parse_presentation("<x|(xX)^1>").unwrap();
    let r = classify_plgcat(&p).map_err(|e| e.to_string())?;
    if r.exact != Some(2) {
        return Err(format!("classifier gave {}..{}", r.lower, r.upper));
    }
    let UpperEvidence::Cover(c) = &r.upper_evidence else { return Err("no cover certificate".into()) };
    let rep = verify_cover(&c.parent, c);
    seen.cover("<x|(xX)^1>", c);
    let h = homology(&build_presentation_complex(&p, false).map_err(|e| e.to_string())?.complex);
    check(
        rep.ok() && c.len() == 2 && h.betti == [1, 1, 1],
        "exact 2, size-2 cover verified, homology (1,1,1)",
        format!("cover ok {}, homology {:?}", rep.ok(), h.betti),
    )
}

fn criterion4(seen: &mut Seen, rng: &mut ChaCha8Rng) -> Outcome {
    let mut done = 0;
    while done < 50 {
        let p = common::random_presentation(rng, 3, 8, false);
        if has_algebraic_collapse(&p).is_none() || p.relator.len() < 2 {
            continue;
        }
        let sc = strip_cover(&p).map_err(|e| format!("{p}: {e}"))?;
        for (i, c) in sc.cover.certificates.iter().enumerate() {
            c.verify_to_point().map_err(|e| format!("{p} piece {i}: {e}"))?;
        }
        if sc.cover.union() != sc.complex || sc.cover.len() != 2 {
            return Err(format!("{p}: union differs from the complex"));
        }
        seen.cover(p.to_string(), &sc.cover);
        done += 1;
    }
    Ok("50/50 strip covers replay and cover their complexes".into())
}

fn criterion5(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..200 {
        let p = common::random_presentation(rng, 3, 10, true);
        let k = build_presentation_complex(&p, false).map_err(|e| format!("{p}: {e}"))?.complex;
        let h = homology(&k);
        let lhs = h.betti[2] as i64 - h.betti[1] as i64;
        if lhs != 1 - p.generators.len() as i64 {
            return Err(format!("{p}: b2 - b1 = {lhs}"));
        }
    }
    Ok("b2 - b1 = 1 - k on 200/200".into())
}

fn criterion6(seen: &mut Seen) -> Outcome {
    let mut counted = (0, 0);
    for name in corpus::list() {
        let k = corpus::get(name).unwrap().complex().map_err(|e| e.to_string())?;
        let want = match k.dim() {
            Some(2) => 3,
            Some(1) => 2,
            _ => continue,
        };
        let sc = strong_cover(&k).map_err(|e| format!("{name}: {e}"))?;
        let rep = verify_cover(sc.subdivision.complex(), &sc.cover);
        let strong = sc.cover.certificates.iter().all(|c| c.is_strong());
        if !rep.ok() || !strong || sc.cover.len() != want {
            return Err(format!("{name}: {} pieces, verified {}, strong {strong}", sc.cover.len(), rep.ok()));
        }
        collect_strong(seen, name, &sc.cover);
        if want == 3 {
            counted.0 += 1;
        } else {
            counted.1 += 1;
        }
    }
    Ok(format!("{} complexes with 3 strong pieces, {} graphs with 2", counted.0, counted.1))
}

fn criterion7(seen: &Seen) -> Outcome {
    for (name, c) in &seen.two_covers {
        let mv = mayer_vietoris(c).unwrap();
        if !mv.holds() {
            return Err(format!("{name}: {mv:?}"));
        }
    }
    Ok(format!("{} size-2 covers satisfy both identities", seen.two_covers.len()))
}

fn criterion8(seen: &mut Seen) -> Outcome {
    let start = Instant::now();
    let (mut exact3, mut found) = (0, 0);
    for k in 1..=2 {
        for p in common::all_homogeneous(k, 4) {
            let r = classify_plgcat(&p).map_err(|e| format!("{p}: {e}"))?;
            r.upper_evidence.verify().map_err(|e| format!("{p}: {e}"))?;
            let target = match (&r.upper_evidence, r.upper) {
                (UpperEvidence::Cover(c), 2) => c.parent.clone(),
                _ => build_presentation_complex(&p, false).map_err(|e| e.to_string())?.complex,
            };
            let v = search_cover2(&target, SearchOptions { budget: 50_000_000, ..Default::default() })
                .map_err(|e| format!("{p}: {e}"))?;
            match (&v, r.exact, r.upper) {
                (CoverSearchVerdict::Unknown { nodes }, ..) => return Err(format!("{p}: Unknown after {nodes} nodes")),
                (CoverSearchVerdict::Found(_), Some(3), _) => return Err(format!("{p}: Found although exact 3")),
                (CoverSearchVerdict::NotFoundExhausted { .. }, _, u) if u <= 2 => {
                    return Err(format!("{p}: exhausted although upper bound {u}"))
                }
                (CoverSearchVerdict::Found(c), ..) => {
                    seen.cover(p.to_string(), c);
                    found += 1;
                }
                _ => exact3 += 1,
            }
            if start.elapsed().as_secs() > 30 * 60 {
                return Err("over the 30 minute budget".into());
            }
        }
    }
    Ok(format!("{exact3} exact-3 exhausted, {found} found where plgcat <= 2, {:.1?}", start.elapsed()))
}

fn criterion9() -> Outcome {
    let start = Instant::now();
    let v = search_cover2(&dunce_hat(), SearchOptions { budget: u64::MAX, ..Default::default() }).map_err(|e| e.to_string())?;
    match v {
        CoverSearchVerdict::NotFoundExhausted { nodes, mode } => {
            Ok(format!("NotFoundExhausted after {nodes} nodes ({mode:?}), {:.1?}", start.elapsed()))
        }
        other => Err(format!("{other:?}")),
    }
}

fn criterion10(seen: &mut Seen) -> Outcome {
    let e = corpus::get("bing_house").unwrap();
    let k = e.complex().map_err(|e| e.to_string())?;
    let c = Cover::certify(k.clone(), e.cover.clone().unwrap()).map_err(|e| e.to_string())?;
    let rep = verify_cover(&k, &c);
    seen.cover("bing_house", &c);
    check(
        rep.ok() && c.len() == 2 && rep.intersection_dim == Some(2),
        "stored size-2 cover verifies; intersection is 2-dimensional",
        format!("verified {}, intersection dim {:?}", rep.ok(), rep.intersection_dim),
    )
}

fn reduce_matches(name: &str, k: &SimplicialComplex) -> Result<String, String> {
    let r = one_word_reduction(k, PasteRule::NonSingular).map_err(|e| format!("{name}: {e}"))?;
    let f = r.complex.f_vector()[2];
    if r.result.words.len() != 1 || r.result.words[0].len() != f + 2 {
        return Err(format!("{name}: {} words", r.result.words.len()));
    }
    if replay(&r.initial, &r.steps).map_err(|e| e.to_string())? != r.result {
        return Err(format!("{name}: log does not replay"));
    }
    let real = realize(&r.result).map_err(|e| e.to_string())?;
    if homology(&real) != homology(k) || real.euler_characteristic() != k.euler_characteristic() {
        return Err(format!("{name}: realization invariants differ"));
    }
    Ok(format!("{name} length {}", f + 2))
}

fn criterion11() -> Outcome {
    let oct = reduce_matches("octahedron", &octahedron())?;
    if oct != "octahedron length 10" {
        return Err(oct);
    }
    let t = reduce_matches("torus", &torus())?;
    let d = reduce_matches("dunce hat''", &dunce_hat())?;
    Ok(format!("{oct}; {t}; {d}; invariants match"))
}

fn criterion12(seen: &Seen, rng: &mut ChaCha8Rng) -> Outcome {
    // star removal on a triangle and on every triangle of the dunce hat
    let t = SimplicialComplex::from_vertex_lists(vec![vec![0, 1, 2]]).unwrap();
    let sd = SecondSubdivision::new(&t);
    let c = star_removal_collapse(&sd, &[Simplex::triangle(0, 1, 2)]).map_err(|e| e.to_string())?;
    c.verify().map_err(|e| e.to_string())?;
    let boundary = SimplicialComplex::from_vertex_lists(vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    if c.end != sd.image(&boundary) {
        return Err("star removal on a triangle does not end at the subdivided boundary".into());
    }
    let d = dunce_hat();
    let sd = SecondSubdivision::new(&d);
    let tops: Vec<Simplex> = d.triangles().copied().collect();
    let c = star_removal_collapse(&sd, &tops).map_err(|e| e.to_string())?;
    c.verify().map_err(|e| e.to_string())?;
    if c.end != sd.image(&d.skeleton(1)) {
        return Err("star removal on the dunce hat does not end at the subdivided 1-skeleton".into());
    }

    let mut cores = 0;
    let mut certs: Vec<StrongCollapseCertificate> = seen.strong.iter().map(|(_, c)| c.clone()).collect();
    while cores < 100 {
        let k = common::random_complex(rng, 7, 0.25, 0.1);
        if !k.is_connected() {
            continue;
        }
        let a = strong_collapse_core_ordered(&k, VertexOrder::Smallest);
        let b = strong_collapse_core_ordered(&k, VertexOrder::Largest);
        let relabeled = common::relabel_randomly(rng, &k);
        let r = strong_collapse_core_ordered(&relabeled, VertexOrder::Smallest);
        if !common::isomorphic(&a.end, &b.end) || !common::isomorphic(&a.end, &r.end) {
            return Err(format!("cores differ for {k}"));
        }
        certs.push(a);
        certs.push(b);
        cores += 1;
    }
    for (i, s) in certs.iter().enumerate() {
        let e = s.to_elementary().map_err(|e| format!("certificate {i}: {e}"))?;
        e.verify().map_err(|e| format!("certificate {i}: {e}"))?;
        if e.end != s.end {
            return Err(format!("certificate {i}: elementary replay ends elsewhere"));
        }
    }
    Ok(format!("star removal ends at the subdivided boundary; 100 cores order-independent; {} strong certificates converted", certs.len()))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20241016);
    let mut seen = Seen::default();
    let mut results: Vec<(usize, Outcome, std::time::Duration)> = Vec::new();
    let mut run = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let r = f();
        results.push((n, r, t.elapsed()));
    };
    run(1, &mut || criterion1(&mut seen));
    run(2, &mut criterion2);
    run(3, &mut || criterion3(&mut seen));
    run(4, &mut || criterion4(&mut seen, &mut rng));
    run(5, &mut || criterion5(&mut rng));
    run(6, &mut || criterion6(&mut seen));
    run(8, &mut || criterion8(&mut seen));
    run(9, &mut criterion9);
    run(10, &mut || criterion10(&mut seen));
    run(11, &mut criterion11);
    run(12, &mut || criterion12(&seen, &mut rng));
    run(7, &mut || criterion7(&seen));
    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, r, t) in &results {
        match r {
            Ok(msg) => println!("criterion {n:>2}: PASS  {msg} [{:.2?}]", t),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL  {msg} [{:.2?}]", t)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
