//! Worked examples with their known summand data, as divisor coefficient
//! vectors `k` (all examples are orbifolds).

use crate::exactalg::IntMatrix;
use crate::fan::StackyFan;

/// `P^2` with every toric divisor replaced by its `c`-th root.
pub fn root_of_projective_plane(c: i64) -> StackyFan {
    StackyFan::orbifold_2d(IntMatrix::from_i64_rows(&[[c, 0, -c], [0, c, -c]])).expect("valid for c >= 1")
}

/// `O(i(D1 - D3) + j(D2 - D3) + k D3)` for `i, j ∈ [0, c)`, `k ∈ {0, -1, -2}`.
pub fn root_of_projective_plane_summands(c: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..c {
        for j in 0..c {
            for k in [0, -1, -2] {
                out.push(vec![i, j, k - i - j]);
            }
        }
    }
    out
}

pub fn projective_plane_summands() -> Vec<Vec<i64>> {
    vec![vec![0, 0, 0], vec![-1, 0, 0], vec![-2, 0, 0]]
}

/// Coarse space `F_1`, with the divisor on the ray `(-1, 1)` doubled.
pub fn hirzebruch_orbifold() -> StackyFan {
    StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [0, -1]]).expect("valid")
}

pub fn hirzebruch_orbifold_summands() -> Vec<Vec<i64>> {
    [[0, 0], [-1, 0], [-2, 0], [1, -1], [0, -1], [-1, -1], [-2, -1]]
        .iter()
        .map(|&[a, b]| vec![0, 0, a, b])
        .collect()
}

/// The summand whose inverse is not nef.
pub fn hirzebruch_orbifold_non_nef() -> Vec<Vec<i64>> {
    vec![vec![0, 0, 1, -1]]
}

/// Five rays `(1,0), (0,1), (-2,2), (-1,0), (0,-1)`.
pub fn five_ray_orbifold() -> StackyFan {
    StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [-1, 0], [0, -1]]).expect("valid")
}

pub fn five_ray_orbifold_summands() -> Vec<Vec<i64>> {
    vec![
        vec![0, 0, 0, 0, 0],
        vec![0, 0, -1, -1, 0],
        vec![0, 0, -2, -1, 0],
        vec![0, 0, 1, 0, -1],
        vec![0, 0, 0, 0, -1],
        vec![0, 0, -2, -1, -1],
        vec![0, 0, -1, -1, -1],
        vec![0, 0, 0, -1, -1],
        vec![0, 0, 1, -1, -1],
    ]
}

/// `O(D3 - D5)`, `O(-D3 - D4)`, `O(D3 - D4 - D5)`: the summands whose
/// inverses are not nef.
pub fn five_ray_orbifold_non_nef() -> Vec<Vec<i64>> {
    vec![vec![0, 0, 1, 0, -1], vec![0, 0, -1, -1, 0], vec![0, 0, 1, -1, -1]]
}

/// The two summands left out of the seven-element strong exceptional
/// collection: `O(-2D3 - D4)` and `O(-2D3 - D4 - D5)`.
pub fn five_ray_orbifold_dropped() -> Vec<Vec<i64>> {
    vec![vec![0, 0, -2, -1, 0], vec![0, 0, -2, -1, -1]]
}
