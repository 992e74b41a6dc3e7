use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix};

/// Element of a finitely generated abelian group in normal coordinates:
/// torsion coordinates reduced into `[0, d_i)`, followed by free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

/// `Z^m / im(M)` presented through the Smith form of `M`.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ambient: usize,
    invariants: Vec<BigInt>,
    torsion_rows: IntMatrix,
    free_rows: IntMatrix,
    torsion_lift: IntMatrix,
    free_lift: IntMatrix,
}

/// Cokernel of `m : Z^cols -> Z^rows`.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(m);
    let d = snf.invariants();
    let rank = d.len();
    let torsion_idx: Vec<usize> = (0..rank).filter(|&i| !d[i].is_one()).collect();
    let free_idx: Vec<usize> = (rank..m.rows()).collect();
    FgAbGroup {
        ambient: m.rows(),
        invariants: torsion_idx.iter().map(|&i| d[i].clone()).collect(),
        torsion_rows: snf.left.select_rows(&torsion_idx),
        free_rows: snf.left.select_rows(&free_idx),
        torsion_lift: snf.left_inv.select_cols(&torsion_idx),
        free_lift: snf.left_inv.select_cols(&free_idx),
    }
}

impl FgAbGroup {
    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn free_rank(&self) -> usize {
        self.free_rows.rows()
    }

    /// Invariant factors `d_1 | d_2 | ...` of the torsion part, all `> 1`.
    pub fn torsion_invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariants.is_empty()
    }

    /// Image of a vector of `Z^m` in the quotient.
    pub fn project(&self, x: &[BigInt]) -> GroupElement {
        assert_eq!(x.len(), self.ambient, "vector has wrong length");
        self.element(self.torsion_rows.mul_vec(x), self.free_rows.mul_vec(x))
    }

    /// Normalizes raw coordinates (torsion taken modulo the invariants).
    pub fn element(&self, torsion: Vec<BigInt>, free: Vec<BigInt>) -> GroupElement {
        assert_eq!(torsion.len(), self.invariants.len());
        assert_eq!(free.len(), self.free_rank());
        let torsion = torsion
            .into_iter()
            .zip(&self.invariants)
            .map(|(t, d)| t.mod_floor(d))
            .collect();
        GroupElement { torsion, free }
    }

    /// A preimage in `Z^m`.
    pub fn lift(&self, e: &GroupElement) -> Vec<BigInt> {
        let a = self.torsion_lift.mul_vec(&e.torsion);
        let b = self.free_lift.mul_vec(&e.free);
        a.into_iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            torsion: vec![BigInt::zero(); self.invariants.len()],
            free: vec![BigInt::zero(); self.free_rank()],
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(zip_with(&a.torsion, &b.torsion, |x, y| x + y), zip_with(&a.free, &b.free, |x, y| x + y))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(zip_with(&a.torsion, &b.torsion, |x, y| x - y), zip_with(&a.free, &b.free, |x, y| x - y))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.scale(a, &BigInt::from(-1))
    }

    pub fn scale(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        self.element(a.torsion.iter().map(|x| x * k).collect(), a.free.iter().map(|x| x * k).collect())
    }

    /// All `x` with `m x = t`. Empty when `t` is not divisible by `m`.
    pub fn divide(&self, t: &GroupElement, m: &BigInt) -> Vec<GroupElement> {
        assert!(m.is_positive(), "divisor must be positive");
        let mut free = Vec::with_capacity(t.free.len());
        for x in &t.free {
            if !x.is_multiple_of(m) {
                return Vec::new();
            }
            free.push(x / m);
        }
        // Per torsion coordinate: m x = t (mod d) has gcd(m, d) solutions
        // spaced d / gcd apart, or none.
        let mut choices: Vec<Vec<BigInt>> = Vec::with_capacity(t.torsion.len());
        for (ti, d) in t.torsion.iter().zip(&self.invariants) {
            let g = m.gcd(d);
            if !ti.is_multiple_of(&g) {
                return Vec::new();
            }
            let (mg, dg, tg) = (m / &g, d / &g, ti / &g);
            let inv = mod_inverse(&mg, &dg);
            let x0 = (tg * inv).mod_floor(&dg);
            let mut sols = Vec::new();
            let mut k = BigInt::zero();
            while k < g {
                sols.push(&x0 + &k * &dg);
                k += 1;
            }
            choices.push(sols);
        }
        let mut out = vec![Vec::new()];
        for c in choices {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    c.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|torsion| GroupElement {
                torsion,
                free: free.clone(),
            })
            .collect()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

fn zip_with(a: &[BigInt], b: &[BigInt], f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.invariants.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn cokernel_structure() {
        // Z^3 / <(2,0,0), (0,4,0)> = Z/2 + Z/4 + Z
        let m = IntMatrix::from_i64_rows(&[[2, 0], [0, 4], [0, 0]]);
        let g = cokernel(&m);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion_invariants(), &[b(2), b(4)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
    }

    #[test]
    fn project_kills_image_and_lift_inverts() {
        let m = IntMatrix::from_i64_rows(&[[1, 2], [3, 4], [5, 6]]);
        let g = cokernel(&m);
        for j in 0..2 {
            assert_eq!(g.project(&m.col(j)), g.zero());
        }
        let x = vec![b(7), b(-3), b(11)];
        let e = g.project(&x);
        assert_eq!(g.project(&g.lift(&e)), e);
    }

    #[test]
    fn division_counts() {
        let g = cokernel(&IntMatrix::from_i64_rows(&[[6]]));
        // 2x = 4 in Z/6: x in {2, 5}
        let sols = g.divide(&g.element(vec![b(4)], vec![]), &b(2));
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert_eq!(g.scale(s, &b(2)), g.element(vec![b(4)], vec![]));
        }
        assert!(g.divide(&g.element(vec![b(3)], vec![]), &b(2)).is_empty());
    }
}
