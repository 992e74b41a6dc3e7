//! Frobenius push-forwards of line bundles and the stabilized summand set.
//!
//! Two independent descriptions of `F_{m*} L`:
//! * by characters: `L_χ'` appears once for every `j ∈ [0,m)^s` with
//!   `m χ' = χ - cl(j)`;
//! * by the lattice: the bundles `O(⌊(k + B^t u)/m⌋ D)_{(l + A^t u)/m}` for
//!   `u ∈ [0,m)^(n+r)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::constructions::{pullback, rigidification};
use crate::error::{Error, Result};
use crate::exactalg::{lcm_all, subsets, GroupElement, IntMatrix};
use crate::fan::StackyFan;
use crate::picard::{LineBundle, PicardGroup};

/// Direct summands with multiplicities, keyed by canonical representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummandMultiset {
    entries: BTreeMap<LineBundle, u64>,
}

impl SummandMultiset {
    pub fn entries(&self) -> &BTreeMap<LineBundle, u64> {
        &self.entries
    }

    pub fn support(&self) -> BTreeSet<LineBundle> {
        self.entries.keys().cloned().collect()
    }

    pub fn multiplicity(&self, b: &LineBundle) -> u64 {
        self.entries.get(b).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().sum()
    }
}

fn check_modulus(m: &BigInt) -> Result<()> {
    if m.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Frobenius degree {m} must be positive")))
    }
}

pub fn pushforward_by_characters(pic: &PicardGroup, l: &LineBundle, m: &BigInt) -> Result<SummandMultiset> {
    check_modulus(m)?;
    let g = pic.group();
    let s = pic.s();
    let steps: Vec<GroupElement> = (0..s).map(|i| pic.class(&pic.divisor(i))).collect();
    // Wrapping a digit from m-1 back to 0 adds (m-1) cl(f_i) back.
    let wraps: Vec<GroupElement> = steps.iter().map(|c| g.scale(c, &(m - 1))).collect();
    let mut counts: HashMap<GroupElement, u64> = HashMap::new();
    let mut digits = vec![BigInt::zero(); s];
    let mut t = pic.class(l);
    loop {
        for x in g.divide(&t, m) {
            *counts.entry(x).or_default() += 1;
        }
        let mut i = 0;
        loop {
            if i == s {
                let entries = counts.into_iter().map(|(e, c)| (pic.from_class(&e), c)).collect();
                return Ok(SummandMultiset { entries });
            }
            digits[i] += 1;
            if &digits[i] < m {
                t = g.sub(&t, &steps[i]);
                break;
            }
            digits[i] = BigInt::zero();
            t = g.add(&t, &wraps[i]);
            i += 1;
        }
    }
}

pub fn pushforward_by_lattice(pic: &PicardGroup, l: &LineBundle, m: &BigInt) -> Result<BTreeSet<LineBundle>> {
    check_modulus(m)?;
    Ok(floor_images(pic.fan(), l.k(), l.l(), m)
        .into_iter()
        .map(|v| pic.bundle_from_vector(&v))
        .collect())
}

/// Distinct raw vectors `(⌊(k + B^t u)/m⌋, (l + A^t u)/m)` over the grid.
///
/// The last free coordinate is swept by breakpoints: for fixed other
/// coordinates each floor is a step function of it, so only the points where
/// some step occurs need to be evaluated. The result equals the plain grid
/// enumeration.
fn floor_images(fan: &StackyFan, k: &[BigInt], l: &[BigInt], m: &BigInt) -> HashSet<Vec<BigInt>> {
    let (n, r) = (fan.n(), fan.r());
    let b = fan.b();
    let mut out = HashSet::new();
    let tors_choices: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let a = &fan.torsion()[i];
            let (g, rest) = (a.gcd(m), -&l[i]);
            if !rest.is_multiple_of(&g) {
                return Vec::new();
            }
            // a u = -l (mod m): one residue class modulo m/g.
            let step = m / &g;
            let inv = a_inverse(&(a / &g), &step);
            let u0 = ((rest / &g) * inv).mod_floor(&step);
            let mut v = Vec::new();
            let mut u = u0;
            while &u < m {
                v.push(u.clone());
                u += &step;
            }
            v
        })
        .collect();
    let mut tors = vec![BigInt::zero(); r];
    for_each_choice(&tors_choices, &mut tors, 0, &mut |tors| {
        let mut p = k.to_vec();
        let mut twist = Vec::with_capacity(r);
        for (i, u) in tors.iter().enumerate() {
            for (j, pj) in p.iter_mut().enumerate() {
                *pj += b.get(n + i, j) * u;
            }
            twist.push((&l[i] + &fan.torsion()[i] * u) / m);
        }
        free_sweep(b, n, 0, &mut p, m, &twist, &mut out);
    });
    out
}

fn a_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    a.extended_gcd(m).x.mod_floor(m)
}

fn for_each_choice(choices: &[Vec<BigInt>], cur: &mut Vec<BigInt>, i: usize, f: &mut impl FnMut(&[BigInt])) {
    if i == choices.len() {
        f(cur);
        return;
    }
    for c in &choices[i] {
        cur[i] = c.clone();
        for_each_choice(choices, cur, i + 1, f);
    }
}

fn free_sweep(
    b: &IntMatrix,
    n: usize,
    c: usize,
    p: &mut Vec<BigInt>,
    m: &BigInt,
    twist: &[BigInt],
    out: &mut HashSet<Vec<BigInt>>,
) {
    let push = |vals: Vec<BigInt>, out: &mut HashSet<Vec<BigInt>>| {
        let mut v = vals;
        v.extend_from_slice(twist);
        out.insert(v);
    };
    if n == 0 {
        push(p.iter().map(|x| x.div_floor(m)).collect(), out);
        return;
    }
    let row = b.row(c);
    if c + 1 < n {
        let mut w = BigInt::zero();
        while &w < m {
            free_sweep(b, n, c + 1, p, m, twist, out);
            for (pj, bj) in p.iter_mut().zip(row) {
                *pj += bj;
            }
            w += 1;
        }
        for (pj, bj) in p.iter_mut().zip(row) {
            *pj -= bj * m;
        }
        return;
    }
    let mut points = vec![BigInt::zero()];
    for (pj, cj) in p.iter().zip(row) {
        points.extend(change_points(pj, cj, m));
    }
    points.sort();
    points.dedup();
    for w in points {
        push(p.iter().zip(row).map(|(pj, cj)| (pj + cj * &w).div_floor(m)).collect(), out);
    }
}

/// The `w ∈ (0, m)` at which `⌊(p + c w)/m⌋` differs from its value at `w - 1`.
fn change_points(p: &BigInt, c: &BigInt, m: &BigInt) -> Vec<BigInt> {
    let mut v = Vec::new();
    let last: BigInt = p + c * (m - BigInt::one());
    if c.is_positive() {
        let mut t = p.div_floor(m) + 1;
        let hi = last.div_floor(m);
        while t <= hi {
            let num: BigInt = &t * m - p;
            v.push(num.div_ceil(c));
            t += 1;
        }
    } else if c.is_negative() {
        let mut t = p.div_floor(m);
        let lo = last.div_floor(m) + 1;
        let mc = -c;
        while t >= lo {
            v.push((p - &t * m).div_floor(&mc) + 1);
            t -= 1;
        }
    }
    v
}

/// `m* = a · g · lcm(1, …, n+1)`, where `a` is the lcm of the torsion orders
/// and `g` the lcm of the nonzero maximal minors of the free parts of the
/// columns of `B` together with the unit vectors. For `O` the torsion
/// coordinates of `u` range over `(1/a) Z`, and for each such choice the map
/// `u ↦ ⌊B^t u⌋` is constant on the cells of an arrangement in the free
/// coordinates whose vertices lie in `(1/(a g)) Z^n`; every cell then contains
/// a barycenter of at most `n + 1` vertices, a point of `(1/m*) Z^n`.
pub fn stabilization_modulus(fan: &StackyFan) -> BigInt {
    let n = fan.n();
    let mut normals: Vec<Vec<BigInt>> = (0..fan.s()).map(|j| fan.free_ray(j)).collect();
    normals.extend(IntMatrix::identity(n).to_rows());
    let dets: Vec<BigInt> = subsets(normals.len(), n)
        .into_iter()
        .map(|idx| {
            IntMatrix::from_rows_with_cols(idx.iter().map(|&i| normals[i].clone()).collect(), n)
                .determinant()
                .abs()
        })
        .filter(|x| !x.is_zero())
        .collect();
    let small: Vec<BigInt> = (1..=n as u64 + 1).map(BigInt::from).collect();
    lcm_all(&dets) * lcm_all(&small) * lcm_all(fan.torsion())
}

/// The stabilized summand set of `F_{m*} O`.
pub fn stable_summands(pic: &PicardGroup) -> BTreeSet<LineBundle> {
    let m = stabilization_modulus(pic.fan());
    let o = pic.trivial();
    let set = pushforward_by_lattice(pic, &o, &m).expect("positive modulus");
    debug_assert_eq!(
        set,
        pushforward_by_lattice(pic, &o, &(&m * 2)).expect("positive modulus"),
        "summand set not stable under refinement"
    );
    set
}

/// Checks that the summands of a root-type stack (torsion rows of `B` zero,
/// free rows divisible by `Π a_i`) are the pulled-back summands of its
/// rigidification twisted by every `O_l`, `l ∈ Π [0, a_i)`.
pub fn rootstack_summand_decomposition_check(fan: &StackyFan) -> Result<bool> {
    let (n, r) = (fan.n(), fan.r());
    let a: BigInt = fan.generic_stabilizer_order();
    let b = fan.b();
    for j in 0..fan.s() {
        for i in 0..n + r {
            let x = b.get(i, j);
            let ok = if i < n { x.is_multiple_of(&a) } else { x.is_zero() };
            if !ok {
                return Err(Error::InvalidArgument(
                    "fan is not of root type: need free rows divisible by the stabilizer order and zero torsion rows"
                        .into(),
                ));
            }
        }
    }
    let pic = PicardGroup::new(fan);
    let lhs = stable_summands(&pic);
    let (rig, psi) = rigidification(fan);
    let rig_pic = PicardGroup::new(&rig);
    let pulled: Vec<LineBundle> = stable_summands(&rig_pic)
        .iter()
        .map(|b| pullback(&psi, &pic, b))
        .collect::<Result<_>>()?;
    let choices: Vec<Vec<BigInt>> = fan
        .torsion()
        .iter()
        .map(|t| {
            let mut v = Vec::new();
            let mut x = BigInt::zero();
            while &x < t {
                v.push(x.clone());
                x += 1;
            }
            v
        })
        .collect();
    let mut rhs = BTreeSet::new();
    let zero_k = vec![BigInt::zero(); fan.s()];
    let mut cur = vec![BigInt::zero(); r];
    let mut err = None;
    for_each_choice(&choices, &mut cur, 0, &mut |l| match pic.bundle(&zero_k, l) {
        Ok(twist) => rhs.extend(pulled.iter().map(|p| pic.add(p, &twist))),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn naive_images(fan: &StackyFan, k: &[BigInt], l: &[BigInt], m: i64) -> HashSet<Vec<BigInt>> {
        let d = fan.n() + fan.r();
        let bt = fan.b().transpose();
        let at = fan.a_matrix().transpose();
        let mut out = HashSet::new();
        let total = (m as usize).pow(d as u32);
        for mut code in 0..total {
            let u: Vec<BigInt> = (0..d)
                .map(|_| {
                    let x = code % m as usize;
                    code /= m as usize;
                    big(x as i64)
                })
                .collect();
            let tw: Vec<BigInt> = at.mul_vec(&u).iter().zip(l).map(|(x, y)| x + y).collect();
            if tw.iter().any(|x| !x.is_multiple_of(&big(m))) {
                continue;
            }
            let mut v: Vec<BigInt> = bt.mul_vec(&u).iter().zip(k).map(|(x, y)| (x + y).div_floor(&big(m))).collect();
            v.extend(tw.iter().map(|x| x / big(m)));
            out.insert(v);
        }
        out
    }

    #[test]
    fn change_points_match_brute_force() {
        for p in -7..8 {
            for c in -4..5 {
                for m in 1..7 {
                    let f = |w: i64| Integer::div_floor(&(p + c * w), &m);
                    let want: Vec<BigInt> = (1..m).filter(|&w| f(w) != f(w - 1)).map(big).collect();
                    let mut got = change_points(&big(p), &big(c), &big(m));
                    got.sort();
                    got.dedup();
                    assert_eq!(got, want, "p={p} c={c} m={m}");
                }
            }
        }
    }

    #[test]
    fn sweep_matches_full_grid() {
        let fans = [
            StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [-1, 0], [0, -1]]).unwrap(),
            StackyFan::new(
                2,
                vec![big(3)],
                IntMatrix::from_i64_rows(&[[1, 0, -1], [0, 1, -1], [1, 2, 0]]),
                vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            )
            .unwrap(),
        ];
        for fan in &fans {
            let k: Vec<BigInt> = (0..fan.s()).map(|i| big(i as i64 - 1)).collect();
            let l: Vec<BigInt> = (0..fan.r()).map(|_| big(1)).collect();
            for m in 1..7 {
                assert_eq!(floor_images(fan, &k, &l, &big(m)), naive_images(fan, &k, &l, m), "m={m}");
            }
        }
    }

    #[test]
    fn projective_line_splitting() {
        let pic = PicardGroup::new(&StackyFan::projective_line());
        let o = pic.trivial();
        let ms = pushforward_by_characters(&pic, &o, &big(2)).unwrap();
        let minus = pic.neg(&pic.divisor(1));
        assert_eq!(ms.entries().len(), 2);
        assert_eq!((ms.multiplicity(&o), ms.multiplicity(&minus)), (1, 1));
        assert_eq!(pushforward_by_lattice(&pic, &o, &big(2)).unwrap(), ms.support());
    }

    #[test]
    fn degree_one_is_identity() {
        let pic = PicardGroup::new(&StackyFan::hirzebruch(2));
        let l = pic.bundle_i64(&[1, -2, 0, 3], &[]).unwrap();
        let ms = pushforward_by_characters(&pic, &l, &big(1)).unwrap();
        assert_eq!(ms.entries().iter().collect::<Vec<_>>(), vec![(&l, &1)]);
    }

    #[test]
    fn projective_plane_thomsen() {
        let pic = PicardGroup::new(&StackyFan::projective_plane());
        let want: BTreeSet<LineBundle> = (0..3).map(|d| pic.bundle_i64(&[-d, 0, 0], &[]).unwrap()).collect();
        assert_eq!(pushforward_by_lattice(&pic, &pic.trivial(), &big(3)).unwrap(), want);
        assert_eq!(stable_summands(&pic), want);
        // rank of F_3 O on P^2 is 9
        assert_eq!(pushforward_by_characters(&pic, &pic.trivial(), &big(3)).unwrap().total_rank(), 9);
    }

    #[test]
    fn modulus_examples() {
        let ex3 = StackyFan::from_rays_2d(&[[1, 0], [0, 1], [-2, 2], [-1, 0], [0, -1]]).unwrap();
        assert_eq!(stabilization_modulus(&ex3), big(12));
        let root2 = StackyFan::from_rays_2d(&[[2, 0], [0, 2], [-2, -2]]).unwrap();
        assert_eq!(stabilization_modulus(&root2), big(24));
    }

    #[test]
    fn nonpositive_degree_rejected() {
        let pic = PicardGroup::new(&StackyFan::projective_line());
        assert!(pushforward_by_lattice(&pic, &pic.trivial(), &big(0)).is_err());
    }
}
