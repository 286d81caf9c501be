use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fermatq::encoders::{default_penalty, encode_sum_of_odds};
use fermatq::fermat::fermat_bounds;
use fermatq::solvers::{solve_exact, solve_sa, SaParams};
use fermatq::QuboDocument;
use fermatq_bench::{bit_pattern_model, headline_n, semiprime};
use serde_json::Value;

fn encoders(c: &mut Criterion) {
    let n = headline_n();
    c.bench_function("encode/bit-pattern/8689739", |b| b.iter(|| bit_pattern_model(&n)));
    let n = semiprime(16);
    let bounds = fermat_bounds(&n, true).unwrap();
    c.bench_function("encode/sum-odds/16", |b| b.iter(|| encode_sum_of_odds(&n, &bounds, &default_penalty(&n)).unwrap()));
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let small = bit_pattern_model(&semiprime(12));
    group.bench_function(BenchmarkId::new("exact", small.num_vars()), |b| b.iter(|| solve_exact(&small, 26).unwrap()));
    let headline = bit_pattern_model(&headline_n());
    let params = SaParams { seed: 1, restarts: 64, ..SaParams::default() };
    group.bench_function(BenchmarkId::new("sa-64-chains", headline.num_vars()), |b| b.iter(|| solve_sa(&headline, &params).unwrap()));
    group.finish();
}

fn documents(c: &mut Criterion) {
    let doc = QuboDocument::new(bit_pattern_model(&headline_n()), Value::Null);
    let text = doc.to_json();
    c.bench_function("document/write", |b| b.iter(|| doc.to_json()));
    c.bench_function("document/read", |b| b.iter(|| QuboDocument::from_json(&text).unwrap()));
}

criterion_group!(benches, encoders, solvers, documents);
criterion_main!(benches);
