//! Picard groups `Pic = coker (B|A)^t` and line bundles `O(kD)_l`.
//!
//! A [`LineBundle`] always stores the canonical representative of its class,
//! so `==`, `Ord` and `Hash` are class comparisons.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{cokernel, FgAbGroup, GroupElement, HermiteBasis};
use crate::fan::StackyFan;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineBundle {
    k: Vec<BigInt>,
    l: Vec<BigInt>,
}

impl LineBundle {
    /// Divisor coefficients of the canonical representative.
    pub fn k(&self) -> &[BigInt] {
        &self.k
    }

    /// Torsion twist of the canonical representative.
    pub fn l(&self) -> &[BigInt] {
        &self.l
    }

    pub fn is_untwisted(&self) -> bool {
        self.l.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let div = render_terms(&self.k, "D");
        let tw = render_terms(&self.l, "g");
        match (div.is_empty(), tw.is_empty()) {
            (true, true) => write!(f, "O"),
            (false, true) => write!(f, "O({div})"),
            (true, false) => write!(f, "O(0; {tw})"),
            (false, false) => write!(f, "O({div}; {tw})"),
        }
    }
}

fn render_terms(c: &[BigInt], sym: &str) -> String {
    let mut out = String::new();
    for (i, x) in c.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mag = x.abs();
        let coef = if mag == BigInt::from(1) { String::new() } else { format!("{mag} ") };
        if out.is_empty() {
            if x.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if x.is_negative() { " - " } else { " + " });
        }
        out.push_str(&format!("{coef}{sym}{}", i + 1));
    }
    out
}

#[derive(Clone, Debug)]
pub struct PicardGroup {
    fan: StackyFan,
    group: FgAbGroup,
    relations: HermiteBasis,
}

impl PicardGroup {
    pub fn new(fan: &StackyFan) -> Self {
        let ba = fan.b().hstack(&fan.a_matrix());
        let group = cokernel(&ba.transpose());
        let relations = HermiteBasis::new(ba.cols(), &ba.to_rows());
        Self { fan: fan.clone(), group, relations }
    }

    pub fn fan(&self) -> &StackyFan {
        &self.fan
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    /// Hermite basis of the relation lattice `im (B|A)^t` in `Z^(s+r)`.
    pub fn relations(&self) -> &HermiteBasis {
        &self.relations
    }

    pub fn s(&self) -> usize {
        self.fan.s()
    }

    pub fn r(&self) -> usize {
        self.fan.r()
    }

    pub fn bundle(&self, k: &[BigInt], l: &[BigInt]) -> Result<LineBundle> {
        if k.len() != self.s() {
            return Err(Error::DimensionMismatch { what: "k", expected: self.s(), found: k.len() });
        }
        if l.len() != self.r() {
            return Err(Error::DimensionMismatch { what: "l", expected: self.r(), found: l.len() });
        }
        let mut v = k.to_vec();
        v.extend_from_slice(l);
        Ok(self.bundle_from_vector(&v))
    }

    pub fn bundle_i64(&self, k: &[i64], l: &[i64]) -> Result<LineBundle> {
        let k: Vec<BigInt> = k.iter().map(|&x| x.into()).collect();
        let l: Vec<BigInt> = l.iter().map(|&x| x.into()).collect();
        self.bundle(&k, &l)
    }

    /// Bundle from a concatenated vector `k ⊕ l`.
    pub(crate) fn bundle_from_vector(&self, v: &[BigInt]) -> LineBundle {
        let red = self.relations.reduce(v);
        let s = self.s();
        LineBundle { k: red[..s].to_vec(), l: red[s..].to_vec() }
    }

    fn vector(&self, b: &LineBundle) -> Vec<BigInt> {
        let mut v = b.k.clone();
        v.extend_from_slice(&b.l);
        v
    }

    pub fn class(&self, b: &LineBundle) -> GroupElement {
        self.group.project(&self.vector(b))
    }

    pub fn from_class(&self, e: &GroupElement) -> LineBundle {
        self.bundle_from_vector(&self.group.lift(e))
    }

    pub fn trivial(&self) -> LineBundle {
        self.bundle_from_vector(&vec![BigInt::zero(); self.s() + self.r()])
    }

    /// `O(D_i)` for the 0-based ray `i`.
    pub fn divisor(&self, i: usize) -> LineBundle {
        let mut v = vec![BigInt::zero(); self.s() + self.r()];
        v[i] = BigInt::from(1);
        self.bundle_from_vector(&v)
    }

    /// `K = O(-ΣD_i)`.
    pub fn canonical_class(&self) -> LineBundle {
        let mut v = vec![BigInt::from(-1); self.s()];
        v.extend(std::iter::repeat_n(BigInt::zero(), self.r()));
        self.bundle_from_vector(&v)
    }

    pub fn add(&self, a: &LineBundle, b: &LineBundle) -> LineBundle {
        let v: Vec<BigInt> = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x + y).collect();
        self.bundle_from_vector(&v)
    }

    pub fn sub(&self, a: &LineBundle, b: &LineBundle) -> LineBundle {
        let v: Vec<BigInt> = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x - y).collect();
        self.bundle_from_vector(&v)
    }

    pub fn neg(&self, a: &LineBundle) -> LineBundle {
        self.scale(a, &BigInt::from(-1))
    }

    pub fn scale(&self, a: &LineBundle, m: &BigInt) -> LineBundle {
        let v: Vec<BigInt> = self.vector(a).iter().map(|x| x * m).collect();
        self.bundle_from_vector(&v)
    }

    pub fn generic_stabilizer_order(&self) -> BigInt {
        self.fan.generic_stabilizer_order()
    }

    /// Degree against the positive generator of the free quotient `Z`.
    ///
    /// The sign is fixed by `deg O(D_1) > 0`; every `O(D_i)` must then have
    /// positive degree.
    pub fn degree(&self, b: &LineBundle) -> Result<BigInt> {
        let sign = self.degree_sign()?;
        Ok(&self.class(b).free[0] * sign)
    }

    fn degree_sign(&self) -> Result<BigInt> {
        let f = self.group.free_rank();
        if f != 1 {
            return Err(Error::NoDegree(f));
        }
        let raw: Vec<BigInt> = (0..self.s()).map(|i| self.class(&self.divisor(i)).free[0].clone()).collect();
        let sign = match raw.first() {
            Some(d) if d.is_negative() => BigInt::from(-1),
            _ => BigInt::from(1),
        };
        if raw.iter().any(|d| !(d * &sign).is_positive()) {
            return Err(Error::Unsupported("toric divisors do not all have positive degree".into()));
        }
        Ok(sign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::IntMatrix;

    #[test]
    fn rendering() {
        let p = PicardGroup::new(&StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [-1, 0], [0, -1]]).unwrap());
        let b = p.bundle_i64(&[0, 0, -2, -1, 0], &[]).unwrap();
        assert_eq!(b.to_string(), "O(-2 D3 - D4)");
        let c = p.bundle_i64(&[0, 0, 1, 0, -1], &[]).unwrap();
        assert_eq!(c.to_string(), "O(D3 - D5)");
        assert_eq!(p.trivial().to_string(), "O");
    }

    #[test]
    fn projective_plane_divisors_agree() {
        let p = PicardGroup::new(&StackyFan::projective_plane());
        assert_eq!(p.group().to_string(), "Z");
        assert_eq!(p.divisor(0), p.divisor(2));
        assert_eq!(p.degree(&p.canonical_class()).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn root_plane_torsion() {
        let fan = StackyFan::orbifold_2d(IntMatrix::from_i64_rows(&[[2, 0, -2], [0, 2, -2]])).unwrap();
        let p = PicardGroup::new(&fan);
        assert_eq!(p.group().to_string(), "Z + Z/2 + Z/2");
        assert_ne!(p.divisor(0), p.divisor(1));
        assert_eq!(p.scale(&p.divisor(0), &BigInt::from(2)), p.scale(&p.divisor(1), &BigInt::from(2)));
    }

    #[test]
    fn weighted_degrees() {
        let fan = StackyFan::weighted_projective(&[2, 3, 5]).unwrap();
        let p = PicardGroup::new(&fan);
        let d: Vec<BigInt> = (0..3).map(|i| p.degree(&p.divisor(i)).unwrap()).collect();
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
        assert_eq!(p.degree(&p.canonical_class()).unwrap(), BigInt::from(-10));
    }

    #[test]
    fn degree_needs_rank_one() {
        let p = PicardGroup::new(&StackyFan::hirzebruch(1));
        assert!(matches!(p.degree(&p.trivial()), Err(Error::NoDegree(2))));
    }
}
