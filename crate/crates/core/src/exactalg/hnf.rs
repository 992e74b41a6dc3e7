use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-echelon Hermite basis of a sublattice of `Z^d`.
///
/// Pivots are positive and sit in strictly increasing columns; entries above
/// a pivot lie in `[0, pivot)`. Reducing a vector against the basis gives a
/// representative of its coset that is unique for the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl HermiteBasis {
    pub fn new(dim: usize, generators: &[Vec<BigInt>]) -> Self {
        let mut a: Vec<Vec<BigInt>> = generators
            .iter()
            .inspect(|g| assert_eq!(g.len(), dim, "generator has wrong length"))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut pivots = Vec::new();
        let mut p = 0;
        for c in 0..dim {
            if p == a.len() {
                break;
            }
            // Euclid on column c among rows p.. until a single nonzero remains.
            loop {
                let nz: Vec<usize> = (p..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        a.swap(p, i);
                    }
                    break;
                }
                let m = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
                for &i in &nz {
                    if i != m {
                        let q = a[i][c].div_floor(&a[m][c]);
                        let src = a[m].clone();
                        for (x, y) in a[i].iter_mut().zip(&src) {
                            *x -= &q * y;
                        }
                    }
                }
            }
            if a[p][c].is_zero() {
                continue;
            }
            if a[p][c].is_negative() {
                for x in a[p].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            for i in 0..p {
                let q = a[i][c].div_floor(&a[p][c]);
                if !q.is_zero() {
                    let src = a[p].clone();
                    for (x, y) in a[i].iter_mut().zip(&src) {
                        *x -= &q * y;
                    }
                }
            }
            pivots.push(c);
            p += 1;
        }
        a.truncate(p);
        Self { dim, rows: a, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim, "vector has wrong length");
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = out[c].div_floor(&row[c]);
            if !q.is_zero() {
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_shape() {
        let h = HermiteBasis::new(3, &[v(&[2, 4, 6]), v(&[3, 5, 7]), v(&[1, 1, 1])]);
        assert_eq!(h.rank(), 2);
        for (row, &c) in h.rows().iter().zip(h.pivots()) {
            assert!(row[c].is_positive());
            assert!(row[..c].iter().all(Zero::is_zero));
        }
        assert!(h.contains(&v(&[5, 9, 13])));
        assert!(!h.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn reduction_is_coset_invariant() {
        let gens = [v(&[1, 0, -2, 0]), v(&[0, 1, 2, -1])];
        let h = HermiteBasis::new(4, &gens);
        let x = v(&[3, -1, 5, 2]);
        let y: Vec<BigInt> = x
            .iter()
            .zip(&gens[0])
            .zip(&gens[1])
            .map(|((a, b), c)| a + b * 7 - c * 4)
            .collect();
        assert_eq!(h.reduce(&x), h.reduce(&y));
    }
}
