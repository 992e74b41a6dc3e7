#![allow(dead_code)]

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;
use toricdm::picard::{LineBundle, PicardGroup};
use toricdm::{IntMatrix, StackyFan};

pub fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Complete 2D orbifold with 3 to 5 rays and `|B_ij| ≤ 3`.
pub fn random_surface_orbifold(rng: &mut StdRng) -> StackyFan {
    loop {
        let s = rng.random_range(3..=5);
        let cols: Vec<[i64; 2]> = (0..s)
            .map(|_| [rng.random_range(-3..=3), rng.random_range(-3..=3)])
            .collect();
        if cols.iter().any(|c| c == &[0, 0]) {
            continue;
        }
        let b = IntMatrix::from_i64_rows(&[
            cols.iter().map(|c| c[0]).collect::<Vec<_>>(),
            cols.iter().map(|c| c[1]).collect::<Vec<_>>(),
        ]);
        if let Ok(f) = StackyFan::orbifold_2d(b) {
            return f;
        }
    }
}

/// Complete fan with `n ≤ 2`, at most one cyclic factor in `N`, `s ≤ 5` and
/// `|B_ij| ≤ 3`.
pub fn random_stacky_fan(rng: &mut StdRng) -> StackyFan {
    let n = if rng.random_bool(0.3) { 1 } else { 2 };
    let coarse = if n == 1 {
        let (p, q) = (rng.random_range(1..=3), rng.random_range(1..=3));
        StackyFan::new(1, vec![], IntMatrix::from_i64_rows(&[[p, -q]]), vec![vec![0], vec![1]]).unwrap()
    } else {
        random_surface_orbifold(rng)
    };
    if rng.random_bool(0.5) {
        return coarse;
    }
    let a: i64 = rng.random_range(2..=3);
    let row: Vec<i64> = (0..coarse.s()).map(|_| rng.random_range(0..a)).collect();
    let mut rows = coarse.b().to_rows();
    rows.push(bigs(&row));
    let b = IntMatrix::from_rows_with_cols(rows, coarse.s());
    StackyFan::new(n, vec![BigInt::from(a)], b, coarse.cones().to_vec()).unwrap()
}

pub fn random_bundle(rng: &mut StdRng, pic: &PicardGroup, bound: i64) -> LineBundle {
    let k: Vec<i64> = (0..pic.s()).map(|_| rng.random_range(-bound..=bound)).collect();
    let l: Vec<i64> = (0..pic.r()).map(|_| rng.random_range(-bound..=bound)).collect();
    pic.bundle_i64(&k, &l).unwrap()
}

pub fn random_matrix(rng: &mut StdRng, max_dim: usize, bound: i64) -> IntMatrix {
    let (r, c) = (rng.random_range(1..=max_dim), rng.random_range(1..=max_dim));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.random_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_i64_rows(&rows)
}
