use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use paretoscope_bench::{grid, own, positive_grid, relative};
use paretoscope_core::{
    enumerate_frontier, enumerate_frontier_naive, is_pareto_efficient, scan_all_moves, Allocation, ScanOptions,
};

fn frontier(c: &mut Criterion) {
    let mut group = c.benchmark_group("frontier");
    for (agents, levels) in [(2, 8), (3, 5), (4, 4)] {
        let (p, fs) = grid(agents, levels);
        let t = own(agents);
        let label = format!("{levels}^{agents}");
        group.bench_with_input(BenchmarkId::new("naive", &label), &(), |b, _| {
            b.iter(|| enumerate_frontier_naive(&p, &fs, black_box(&t)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pruned", &label), &(), |b, _| {
            b.iter(|| enumerate_frontier(&p, &fs, black_box(&t)).unwrap())
        });
    }
    group.finish();
}

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan");
    group.sample_size(20);
    let (p, fs) = positive_grid(3, 5);
    for workers in [1, 2, 4] {
        let options = ScanOptions { cap: None, workers };
        group.bench_with_input(
            BenchmarkId::new("relative_mean 5^3", workers),
            &options,
            |b, options| b.iter(|| scan_all_moves(&p, &fs, &relative(3), options).unwrap()),
        );
    }
    group.finish();
}

fn efficiency(c: &mut Criterion) {
    let (_, fs) = positive_grid(3, 6);
    let state = Allocation::from_scalars(&[3, 3, 3]);
    c.bench_function("is_pareto_efficient relative_mean 6^3", |b| {
        b.iter(|| is_pareto_efficient(black_box(&state), &fs, &relative(3)).unwrap())
    });
}

criterion_group!(benches, frontier, scan, efficiency);
criterion_main!(benches);
