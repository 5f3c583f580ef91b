use costfn::catalogue::{counta, letter_count, sega};
use costfn::computation::{construct, value_sets, ORACLE_LIMIT};
use costfn::costmso::{compile, parse_formula};
use costfn::recogniser::decide_domination;
use costfn::{ElemId, Mode};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn word(m: &costfn::StabilisationMonoid, len: usize) -> Vec<ElemId> {
    // a fixed mix of every element, so stabilisation and products both occur
    (0..len).map(|i| ElemId::new((i * 7 + i / 3) % m.size())).collect()
}

fn bench_construct(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct");
    for len in [50, 200, 1000] {
        let m = sega();
        let w = word(&m, len);
        group.bench_with_input(BenchmarkId::new("sega_n5", len), &w, |b, w| {
            b.iter(|| construct(&m, black_box(w), 5).unwrap())
        });
    }
    group.finish();
}

fn bench_value_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("value_sets");
    let m = counta();
    for len in [4, 8, ORACLE_LIMIT] {
        let w = word(&m, len);
        group.bench_with_input(BenchmarkId::new("counta_exact", len), &w, |b, w| {
            b.iter(|| value_sets(&m, black_box(w), 3, 9, Mode::Exact, ORACLE_LIMIT).unwrap())
        });
    }
    group.finish();
}

fn bench_compile(c: &mut Criterion) {
    let ab = vec!["a".to_string(), "b".to_string()];
    let phi = parse_formula("A X. (cardle(X) | E Y. (sub(Y,X) & b(Y)))").unwrap();
    c.bench_function("compile/count_a", |b| b.iter(|| compile(black_box(&phi), &ab).unwrap()));
    let f = compile(&phi, &ab).unwrap();
    let g = letter_count(&ab, &["a"]).unwrap();
    c.bench_function("dominates/compiled_vs_counta", |b| {
        b.iter(|| decide_domination(black_box(&f), black_box(&g)).unwrap())
    });
}

criterion_group!(benches, bench_construct, bench_value_sets, bench_compile);
criterion_main!(benches);
