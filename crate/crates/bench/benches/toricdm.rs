use std::collections::BTreeSet;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use toricdm::catalog;
use toricdm::cohomology::h_all;
use toricdm::exactalg::smith_normal_form;
use toricdm::exceptional::scan_subsets;
use toricdm::frobenius::{pushforward_by_characters, pushforward_by_lattice, stable_summands};
use toricdm::picard::{LineBundle, PicardGroup};
use toricdm::IntMatrix;

fn snf(c: &mut Criterion) {
    let mut rng = StdRng::seed_from_u64(7);
    let mats: Vec<IntMatrix> = (0..32)
        .map(|_| {
            let rows: Vec<Vec<i64>> = (0..6).map(|_| (0..6).map(|_| rng.random_range(-50..=50)).collect()).collect();
            IntMatrix::from_i64_rows(&rows)
        })
        .collect();
    c.bench_function("smith_normal_form 6x6 x32", |b| {
        b.iter(|| mats.iter().map(|m| smith_normal_form(black_box(m)).rank()).sum::<usize>())
    });
}

fn summands(c: &mut Criterion) {
    let five = PicardGroup::new(&catalog::five_ray_orbifold());
    c.bench_function("stable_summands five-ray surface", |b| b.iter(|| stable_summands(black_box(&five))));
    let root = PicardGroup::new(&catalog::root_of_projective_plane(3));
    c.bench_function("stable_summands root plane c=3", |b| b.iter(|| stable_summands(black_box(&root))));
    let m = BigInt::from(12);
    let o = five.trivial();
    c.bench_function("push-forward m=12 characters", |b| b.iter(|| pushforward_by_characters(&five, &o, &m).unwrap()));
    c.bench_function("push-forward m=12 lattice", |b| b.iter(|| pushforward_by_lattice(&five, &o, &m).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let pic = PicardGroup::new(&catalog::five_ray_orbifold());
    let bundles: Vec<LineBundle> = [[0, 0, -3, -1, 1], [2, 1, 3, 0, 1], [-4, 0, -2, -1, -3]]
        .iter()
        .map(|k| pic.bundle_i64(k, &[]).unwrap())
        .collect();
    c.bench_function("h_all five-ray surface x3", |b| {
        b.iter(|| bundles.iter().map(|l| h_all(&pic, l).unwrap()[1]).sum::<u64>())
    });
}

fn scan(c: &mut Criterion) {
    let pic = PicardGroup::new(&catalog::five_ray_orbifold());
    let pool: BTreeSet<LineBundle> = stable_summands(&pic);
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    g.bench_function("five-ray surface size 7", |b| b.iter(|| scan_subsets(&pic, &pool, 7).unwrap().len()));
    g.finish();
}

criterion_group!(benches, snf, summands, cohomology, scan);
criterion_main!(benches);
