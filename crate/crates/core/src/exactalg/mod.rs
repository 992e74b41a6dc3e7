//! Exact integer linear algebra: matrices over `BigInt`, Smith and Hermite
//! normal forms, finitely generated abelian groups and integer solving.

mod group;
mod hnf;
mod matrix;
mod snf;

pub use group::{cokernel, FgAbGroup, GroupElement};
pub use hnf::HermiteBasis;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, solve_integer, solve_integer_matrix, SmithForm};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// Least common multiple of a sequence; `1` for an empty one.
pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
