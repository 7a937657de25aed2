use criterion::{black_box, criterion_group, criterion_main, Criterion};
use wavelock::{compute_bound, ProblemParams};

fn bounds(c: &mut Criterion) {
    let single = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 1.0).unwrap();
    let dual = ProblemParams::new(0.5, 2.0, 4.0, 1.0, 0.4).unwrap();
    c.bench_function("bound/single", |b| b.iter(|| compute_bound(black_box(&single)).unwrap()));
    c.bench_function("bound/dual", |b| b.iter(|| compute_bound(black_box(&dual)).unwrap()));
}

criterion_group!(benches, bounds);
criterion_main!(benches);
