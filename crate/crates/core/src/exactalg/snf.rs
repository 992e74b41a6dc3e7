use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left * m * right = diagonal` with unimodular transforms
/// and their inverses.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub fn invariants(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows().min(self.diagonal.cols());
        (0..k)
            .map(|i| self.diagonal.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().len()
    }
}

struct Reducer {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, target: usize, src: usize, f: &BigInt) {
        self.s.add_row_multiple(target, src, f);
        self.u.add_row_multiple(target, src, f);
        self.u_inv.add_col_multiple(src, target, &-f);
    }

    fn add_col(&mut self, target: usize, src: usize, f: &BigInt) {
        self.s.add_col_multiple(target, src, f);
        self.v.add_col_multiple(target, src, f);
        self.v_inv.add_row_multiple(src, target, &-f);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Moves the smallest nonzero entry among `cells` to `(t, t)`.
    fn bring_min_to_pivot(&mut self, t: usize, cells: impl Iterator<Item = (usize, usize)>) -> bool {
        let best = cells
            .filter(|&(i, j)| !self.s.get(i, j).is_zero())
            .min_by(|&(a, b), &(c, d)| self.s.get(a, b).abs().cmp(&self.s.get(c, d).abs()));
        match best {
            Some((i, j)) => {
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                true
            }
            None => false,
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut r = Reducer {
        s: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        let sub = (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)));
        if !r.bring_min_to_pivot(t, sub) {
            break;
        }
        loop {
            let p = r.s.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !r.s.get(i, t).is_zero() {
                    let q = r.s.get(i, t).div_floor(&p);
                    r.add_row(i, t, &-q);
                    clean &= r.s.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !r.s.get(t, j).is_zero() {
                    let q = r.s.get(t, j).div_floor(&p);
                    r.add_col(j, t, &-q);
                    clean &= r.s.get(t, j).is_zero();
                }
            }
            if !clean {
                let line = std::iter::once((t, t))
                    .chain((t + 1..rows).map(|i| (i, t)))
                    .chain((t + 1..cols).map(|j| (t, j)));
                r.bring_min_to_pivot(t, line);
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !r.s.get(i, j).is_multiple_of(&p));
            match bad {
                Some((i, _)) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.s.get(t, t).is_negative() {
            r.negate_row(t);
        }
    }
    SmithForm {
        left: r.u,
        left_inv: r.u_inv,
        diagonal: r.s,
        right: r.v,
        right_inv: r.v_inv,
    }
}

/// Some integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "right-hand side has wrong length");
    let snf = smith_normal_form(m);
    let c = snf.left.mul_vec(b);
    let d = snf.invariants();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        match d.get(i) {
            Some(di) => {
                if !ci.is_multiple_of(di) {
                    return None;
                }
                y[i] = ci / di;
            }
            None if !ci.is_zero() => return None,
            None => {}
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// Solves `m X = b` column by column.
pub fn solve_integer_matrix(m: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let cols = (0..b.cols())
        .map(|j| solve_integer(m, &b.col(j)))
        .collect::<Option<Vec<_>>>()?;
    Some(IntMatrix::from_cols_with_rows(cols, m.cols()))
}
