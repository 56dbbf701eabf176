//! Hot-path benchmarks: exact clipping and measures, the lens closest-point
//! kernel, and the seeded Monte Carlo estimators.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kp_core::random::{random_config, InstanceBox};
use kp_core::*;

fn two_disk_family() -> RadiusFamily {
    let c = BallConfiguration::from_rows(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![1.0, 1.0])
        .unwrap();
    RadiusFamily::new(c, 0.0).unwrap()
}

fn random_family(dim: usize, n: usize, seed: u64) -> RadiusFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_config(&mut rng, dim, n, &InstanceBox::default());
    RadiusFamily::new(c, 0.0).unwrap()
}

fn bench_exact_measures(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_union_area");
    let two = two_disk_family();
    group.bench_function("two_unit_disks", |b| {
        b.iter(|| union_area_2d(black_box(&two)).unwrap())
    });
    for n in [4usize, 8, 16] {
        let fam = random_family(2, n, 42);
        group.bench_with_input(BenchmarkId::new("random", n), &fam, |b, fam| {
            b.iter(|| union_area_2d(black_box(fam)).unwrap())
        });
    }
    group.finish();
}

fn bench_clipping(c: &mut Criterion) {
    let fam = random_family(2, 8, 7);
    let cell = power_cell(&fam, 0).unwrap();
    let center = fam.config().center(0).coords().to_vec();
    c.bench_function("clip_disk_by_7_halfplanes", |b| {
        b.iter(|| {
            clip_disk_by_halfplanes(
                black_box([center[0], center[1]]),
                black_box(fam.radius(0)),
                cell.halfspaces(),
            )
            .area()
        })
    });
}

fn bench_closest_point(c: &mut Criterion) {
    let cfg = BallConfiguration::from_rows(
        3,
        vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.2, -0.1]],
        vec![1.0, 0.9],
    )
    .unwrap();
    let tol = Tolerances::default();
    let x = Point::new(vec![0.6, 1.8, 0.4]);
    c.bench_function("closest_point_in_lens_3d", |b| {
        b.iter(|| closest_point_in_lens(black_box(&x), &cfg, 0, 1, &tol).unwrap())
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("union_volume_mc");
    group.sample_size(20);
    for (dim, n) in [(2usize, 4usize), (3, 5)] {
        let fam = random_family(dim, n, 11);
        group.bench_with_input(
            BenchmarkId::new(format!("d{dim}"), format!("n{n}_100k")),
            &fam,
            |b, fam| b.iter(|| union_volume_mc(black_box(fam), 100_000, 3).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_exact_measures,
    bench_clipping,
    bench_closest_point,
    bench_monte_carlo
);
criterion_main!(benches);
