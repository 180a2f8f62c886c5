use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hvconic::grid_geometry::{dilate_with, sample_hv_convex};
use hvconic::metrics::{hausdorff_with, tube_area_with};
use hvconic::reconstruct::{exhaustive_with, local_search_with, AnnealingParams, Feasibility, Norm, ReconstructionProblem};
use hvconic::theorem_verify::{check_concavity, run_batch, DEFAULT_LATTICE};
use hvconic::xray_conic::{conic_of, l1_norm_diff_with};
use hvconic::{Execution, Fraction, GridGeometry, Polyline};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn hausdorff(c: &mut Criterion) {
    let g = GridGeometry::unit(32, 32).unwrap();
    let (k, l) = (sample_hv_convex(g, 1, false), sample_hv_convex(g, 2, false));
    let mut group = c.benchmark_group("hausdorff_32x32");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| hausdorff_with(black_box(&k), black_box(&l), 4, exec).unwrap()));
    }
    group.finish();
}

fn dilation(c: &mut Criterion) {
    let l = sample_hv_convex(GridGeometry::unit(16, 16).unwrap(), 3, true);
    let mut group = c.benchmark_group("dilate_16x16");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| dilate_with(black_box(&l), 1.5, 8, exec).unwrap()));
    }
    group.finish();
}

fn l1_norm(c: &mut Criterion) {
    let g = GridGeometry::unit(16, 16).unwrap();
    let (k, l) = (conic_of(&sample_hv_convex(g, 4, false)), conic_of(&sample_hv_convex(g, 5, false)));
    let mut group = c.benchmark_group("l1_norm_16x16");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| l1_norm_diff_with(&k, &l, &g.rect(), 8, exec).unwrap()));
    }
    group.finish();
}

fn tube(c: &mut Criterion) {
    let chain = Polyline::new(vec![(0.0, 0.0), (2.0, 0.5), (3.0, 2.0), (1.0, 3.0), (-0.5, 1.5)], false).unwrap();
    let mut group = c.benchmark_group("tube_area");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| tube_area_with(&chain, 0.2, 256, exec).unwrap()));
    }
    group.finish();
}

fn concavity_batch(c: &mut Criterion) {
    let g = GridGeometry::unit(8, 8).unwrap();
    let t = Fraction::new(1, 3).unwrap();
    let mut group = c.benchmark_group("concavity_batch_50");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                run_batch(0..50, exec, |s| {
                    check_concavity(&sample_hv_convex(g, 2 * s, true), &sample_hv_convex(g, 2 * s + 1, true), t, DEFAULT_LATTICE)
                })
                .unwrap()
            })
        });
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let g = GridGeometry::unit(4, 4).unwrap();
    let target = sample_hv_convex(g, 11, true);
    let p = ReconstructionProblem::from_generator(&target, Norm::Sup, Feasibility::HvConnected).unwrap();
    let params = AnnealingParams { steps: 2_000, restarts: 3, seed: 1, ..AnnealingParams::default() };
    let mut group = c.benchmark_group("reconstruct_4x4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("exhaustive", name), &exec, |b, &exec| {
            b.iter(|| exhaustive_with(&p, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("local_search", name), &exec, |b, &exec| {
            b.iter(|| local_search_with(&p, &params, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, hausdorff, dilation, l1_norm, tube, concavity_batch, reconstruction);
criterion_main!(benches);
