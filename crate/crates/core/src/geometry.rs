//! Nefness on surface orbifolds and the rank of the Grothendieck group.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{cross, StackyFan};
use crate::frobenius::stable_summands;
use crate::picard::{LineBundle, PicardGroup};

/// Piecewise linear function of the divisor `Σ k_i D_i`: on each maximal
/// cone, the form `m_σ` with `⟨m_σ, β(f_i)⟩ = -k_i` on its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub forms: Vec<(Vec<usize>, [BigRational; 2])>,
}

fn require_surface_orbifold(fan: &StackyFan) -> Result<()> {
    if fan.n() != 2 || !fan.is_orbifold() {
        return Err(Error::Unsupported("nefness is implemented for two-dimensional orbifolds".into()));
    }
    Ok(())
}

pub fn support_function(fan: &StackyFan, k: &[BigInt]) -> Result<SupportFunction> {
    require_surface_orbifold(fan)?;
    if k.len() != fan.s() {
        return Err(Error::DimensionMismatch { what: "k", expected: fan.s(), found: k.len() });
    }
    let forms = fan
        .cones()
        .iter()
        .map(|c| {
            let (i, j) = (c[0], c[1]);
            let (bi, bj) = (fan.free_ray(i), fan.free_ray(j));
            let det = cross(&bi, &bj);
            let x = -&k[i] * &bj[1] + &k[j] * &bi[1];
            let y = -&bi[0] * &k[j] + &bj[0] * &k[i];
            (c.clone(), [BigRational::new(x, det.clone()), BigRational::new(y, det)])
        })
        .collect();
    Ok(SupportFunction { forms })
}

/// Whether `O(kD)` is nef: the support function is convex, i.e.
/// `⟨m_σ, β(f_t)⟩ ≥ -k_t` for every maximal cone `σ` and every ray `t`.
pub fn is_nef(pic: &PicardGroup, l: &LineBundle) -> Result<bool> {
    let fan = pic.fan();
    require_surface_orbifold(fan)?;
    if !l.is_untwisted() {
        return Err(Error::InvalidArgument("nefness needs a bundle without torsion twist".into()));
    }
    let sf = support_function(fan, l.k())?;
    for (_, m) in &sf.forms {
        for t in 0..fan.s() {
            let bt = fan.free_ray(t);
            let val = &m[0] * BigRational::from(bt[0].clone()) + &m[1] * BigRational::from(bt[1].clone());
            if val < BigRational::from(-&l.k()[t]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The members `L` of the stabilized summand set with `L^{-1}` nef.
pub fn nef_summands(pic: &PicardGroup) -> Result<BTreeSet<LineBundle>> {
    require_surface_orbifold(pic.fan())?;
    let mut out = BTreeSet::new();
    for b in stable_summands(pic) {
        if is_nef(pic, &pic.neg(&b))? {
            out.insert(b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRank {
    pub rank: BigInt,
    /// Every `β(f_i)` lies on the boundary of the hull.
    pub boundary: bool,
}

/// `n! · vol(conv{β(f_i)})` for `n ≤ 2`.
pub fn k_rank(fan: &StackyFan) -> Result<KRank> {
    let pts: Vec<Vec<BigInt>> = (0..fan.s()).map(|i| fan.free_ray(i)).collect();
    match fan.n() {
        1 => {
            let lo = pts.iter().map(|p| p[0].clone()).min().unwrap_or_default();
            let hi = pts.iter().map(|p| p[0].clone()).max().unwrap_or_default();
            Ok(KRank { rank: hi - lo, boundary: true })
        }
        2 => {
            let hull = convex_hull(&pts);
            let h = hull.len();
            let twice: BigInt = (0..h).map(|t| cross(&hull[t], &hull[(t + 1) % h])).sum();
            let on_boundary = |p: &Vec<BigInt>| {
                (0..h).any(|t| {
                    let (a, b) = (&hull[t], &hull[(t + 1) % h]);
                    let ab = vec![&b[0] - &a[0], &b[1] - &a[1]];
                    let ap = vec![&p[0] - &a[0], &p[1] - &a[1]];
                    cross(&ab, &ap).is_zero()
                })
            };
            Ok(KRank { rank: twice.abs(), boundary: pts.iter().all(on_boundary) })
        }
        n => Err(Error::RankFormula(format!("dimension {n} is not supported"))),
    }
}

/// Counterclockwise hull vertices (monotone chain), collinear points dropped.
fn convex_hull(pts: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let turn = |o: &Vec<BigInt>, a: &Vec<BigInt>, b: &Vec<BigInt>| {
        cross(&[&a[0] - &o[0], &a[1] - &o[1]], &[&b[0] - &o[0], &b[1] - &o[1]])
    };
    let mut lower: Vec<Vec<BigInt>> = Vec::new();
    for x in &p {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], x).is_positive() {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<Vec<BigInt>> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], x).is_positive() {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2() -> StackyFan {
        StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [0, -1]]).unwrap()
    }

    fn example3() -> StackyFan {
        StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [-1, 0], [0, -1]]).unwrap()
    }

    #[test]
    fn plane_nefness() {
        let pic = PicardGroup::new(&StackyFan::projective_plane());
        assert!(is_nef(&pic, &pic.divisor(0)).unwrap());
        assert!(!is_nef(&pic, &pic.neg(&pic.divisor(0))).unwrap());
        assert!(is_nef(&pic, &pic.trivial()).unwrap());
    }

    #[test]
    fn nef_on_doubled_divisor_surfaces() {
        let p2 = PicardGroup::new(&example2());
        assert!(!is_nef(&p2, &p2.bundle_i64(&[0, 0, -1, 1], &[]).unwrap()).unwrap());
        let p3 = PicardGroup::new(&example3());
        assert!(is_nef(&p3, &p3.bundle_i64(&[0, 0, 0, 0, 1], &[]).unwrap()).unwrap());
    }

    #[test]
    fn ranks() {
        assert_eq!(k_rank(&example3()).unwrap(), KRank { rank: 7.into(), boundary: true });
        assert_eq!(k_rank(&example2()).unwrap(), KRank { rank: 6.into(), boundary: true });
        assert_eq!(k_rank(&StackyFan::projective_plane()).unwrap(), KRank { rank: 3.into(), boundary: true });
        let interior = StackyFan::from_rays_2d(&[[1, 0], [3, 1], [0, 1], [-1, 0], [0, -1]]).unwrap();
        assert!(!k_rank(&interior).unwrap().boundary);
    }

    #[test]
    fn hull_drops_collinear_points() {
        let pts: Vec<Vec<BigInt>> = [[0, 0], [2, 0], [1, 0], [0, 2]]
            .iter()
            .map(|p| vec![BigInt::from(p[0]), BigInt::from(p[1])])
            .collect();
        assert_eq!(convex_hull(&pts).len(), 3);
    }
}
