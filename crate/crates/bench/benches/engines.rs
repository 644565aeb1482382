use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use plgcat_bench::{complex, disk, presentation};
use plgcat_core::collapse::{is_collapsible, strong_collapse_core};
use plgcat_core::covers::{search_cover2, strong_cover, SearchOptions};
use plgcat_core::one_relator::classify_plgcat;
use plgcat_core::polygonal::{one_word_reduction, PasteRule};
use plgcat_core::structure::no2_criterion;
use plgcat_core::{homology, SecondSubdivision};

fn collapse(c: &mut Criterion) {
    let mut g = c.benchmark_group("collapse");
    for n in [8, 16, 32] {
        let k = disk(n);
        g.bench_with_input(BenchmarkId::new("greedy_disk", n), &k, |b, k| b.iter(|| is_collapsible(black_box(k), u64::MAX)));
        g.bench_with_input(BenchmarkId::new("strong_disk", n), &k, |b, k| b.iter(|| strong_collapse_core(black_box(k))));
    }
    g.finish();
}

fn homology_bench(c: &mut Criterion) {
    let dunce = SecondSubdivision::new(&complex("dunce_hat")).complex().clone();
    c.bench_function("homology/dunce_hat_second_subdivision", |b| b.iter(|| homology(black_box(&dunce))));
    let bing = complex("bing_house");
    c.bench_function("homology/bing_house", |b| b.iter(|| homology(black_box(&bing))));
}

fn covers(c: &mut Criterion) {
    let mut g = c.benchmark_group("covers");
    g.sample_size(10);
    for name in ["octahedron", "torus", "dunce_hat"] {
        let k = complex(name);
        g.bench_with_input(BenchmarkId::new("strong", name), &k, |b, k| b.iter(|| strong_cover(black_box(k))));
    }
    for name in ["octahedron", "annulus", "rp2"] {
        let k = complex(name);
        g.bench_with_input(BenchmarkId::new("search2", name), &k, |b, k| b.iter(|| search_cover2(black_box(k), SearchOptions::default())));
    }
    g.finish();
}

fn structure(c: &mut Criterion) {
    let dunce = complex("dunce_hat");
    c.bench_function("criterion/dunce_hat", |b| b.iter(|| no2_criterion(black_box(&dunce))));
}

fn one_relator(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    for text in ["<a,b|aab>", "<a,b|abAB>", "<x|xxX>", "<a,b|aabbAB>"] {
        let p = presentation(text);
        g.bench_with_input(BenchmarkId::from_parameter(text), &p, |b, p| b.iter(|| classify_plgcat(black_box(p))));
    }
    g.finish();
}

fn polygonal(c: &mut Criterion) {
    let mut g = c.benchmark_group("one_word");
    g.sample_size(10);
    let torus = complex("torus");
    g.bench_function("torus", |b| b.iter(|| one_word_reduction(black_box(&torus), PasteRule::AnyInnerEdge)));
    let dunce = complex("dunce_hat");
    g.bench_function("dunce_hat", |b| b.iter(|| one_word_reduction(black_box(&dunce), PasteRule::NonSingular)));
    g.finish();
}

criterion_group!(benches, collapse, homology_bench, covers, structure, one_relator, polygonal);
criterion_main!(benches);
