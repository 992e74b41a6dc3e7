//! Stacky fans `(Δ, β)` presented by integer matrices.
//!
//! `N = Z^(n+r) / im A` with `A = [0; diag(a_1..a_r)]`; the column `i` of `B`
//! is `β(f_i)`. Ray and cone indices are 0-based in the API and 1-based in
//! rendered output.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{smith_normal_form, solve_integer_matrix, subsets, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StackyFan {
    n: usize,
    torsion: Vec<BigInt>,
    b: IntMatrix,
    cones: Vec<Vec<usize>>,
}

/// A ray `β(f_i) = b v` with `v` primitive in the free part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayData {
    pub index: usize,
    pub v: Vec<BigInt>,
    pub b: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { rows: usize, expected: usize },
    Torsion { index: usize, value: BigInt },
    ZeroRay { ray: usize },
    ConeArity { cone: usize, found: usize, expected: usize },
    ConeIndex { cone: usize, index: usize },
    DuplicateIndex { cone: usize, index: usize },
    DuplicateCone { cone: usize },
    DependentCone { cone: usize },
    UnusedRay { ray: usize },
    Incomplete(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { rows, expected } => {
                write!(f, "B has {rows} rows, expected rank + #torsion = {expected}")
            }
            Violation::Torsion { index, value } => {
                write!(f, "torsion entry {} is {value}, must be at least 2", index + 1)
            }
            Violation::ZeroRay { ray } => write!(f, "ray {} projects to zero in the free part", ray + 1),
            Violation::ConeArity { cone, found, expected } => {
                write!(f, "cone {} has {found} rays, expected {expected}", cone + 1)
            }
            Violation::ConeIndex { cone, index } => {
                write!(f, "cone {} refers to ray {} which does not exist", cone + 1, index + 1)
            }
            Violation::DuplicateIndex { cone, index } => {
                write!(f, "cone {} repeats ray {}", cone + 1, index + 1)
            }
            Violation::DuplicateCone { cone } => write!(f, "cone {} is listed twice", cone + 1),
            Violation::DependentCone { cone } => {
                write!(f, "cone {} is not simplicial (rays linearly dependent)", cone + 1)
            }
            Violation::UnusedRay { ray } => write!(f, "ray {} lies in no maximal cone", ray + 1),
            Violation::Incomplete(why) => write!(f, "fan is not complete: {why}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notices: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Result of rewriting a raw presentation `(A0, B0)` into the canonical shape.
///
/// `back`, `e`, `f` are the `D`, `E`, `F` data of the isomorphism from the
/// normalized stack to the raw one (with `C = I`), so raw classes
/// `O(kD)_l` pull back to `O((k + F^t l) D)_{E^t l}`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub fan: StackyFan,
    pub back: IntMatrix,
    pub e: IntMatrix,
    pub f: IntMatrix,
}

impl StackyFan {
    /// Unvalidated constructor; see [`validate`](Self::validate).
    pub fn from_parts(n: usize, torsion: Vec<BigInt>, b: IntMatrix, cones: Vec<Vec<usize>>) -> Self {
        let cones = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Self { n, torsion, b, cones }
    }

    pub fn new(n: usize, torsion: Vec<BigInt>, b: IntMatrix, cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Self::from_parts(n, torsion, b, cones);
        let report = fan.validate();
        if report.is_valid() {
            Ok(fan)
        } else {
            Err(Error::InvalidFan(report.violations))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.torsion.len()
    }

    pub fn s(&self) -> usize {
        self.b.cols()
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn is_orbifold(&self) -> bool {
        self.torsion.is_empty()
    }

    /// `A = [0; diag(a)]`, shape `(n + r) x r`.
    pub fn a_matrix(&self) -> IntMatrix {
        let (n, r) = (self.n, self.r());
        let mut a = IntMatrix::zeros(n + r, r);
        for (i, t) in self.torsion.iter().enumerate() {
            a.set(n + i, i, t.clone());
        }
        a
    }

    /// Free part (top `n` rows) of column `i`.
    pub fn free_ray(&self, i: usize) -> Vec<BigInt> {
        self.b.col(i)[..self.n].to_vec()
    }

    /// Ray data for the 1-based ray number `i`.
    pub fn ray_data(&self, i: usize) -> Result<RayData> {
        if i == 0 || i > self.s() {
            return Err(Error::IndexOutOfRange { index: i, max: self.s() });
        }
        Ok(self.ray(i - 1))
    }

    pub(crate) fn ray(&self, i: usize) -> RayData {
        let w = self.free_ray(i);
        let b = IntMatrix::content(&w);
        let v = if b.is_zero() { w } else { w.iter().map(|x| x / &b).collect() };
        RayData { index: i, v, b }
    }

    pub fn multiplicities(&self) -> Vec<BigInt> {
        (0..self.s()).map(|i| self.ray(i).b).collect()
    }

    pub fn generic_stabilizer_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let (n, s) = (self.n, self.s());
        let expected = n + self.r();
        if self.b.rows() != expected {
            rep.violations.push(Violation::Shape { rows: self.b.rows(), expected });
            return rep;
        }
        for (i, t) in self.torsion.iter().enumerate() {
            if *t < BigInt::from(2) {
                rep.violations.push(Violation::Torsion { index: i, value: t.clone() });
            }
        }
        for i in 0..s {
            if self.free_ray(i).iter().all(Zero::is_zero) {
                rep.violations.push(Violation::ZeroRay { ray: i });
            }
        }
        let mut seen = BTreeSet::new();
        let mut well_formed = true;
        for (ci, cone) in self.cones.iter().enumerate() {
            if cone.len() != n {
                rep.violations.push(Violation::ConeArity { cone: ci, found: cone.len(), expected: n });
                well_formed = false;
            }
            for (k, &i) in cone.iter().enumerate() {
                if i >= s {
                    rep.violations.push(Violation::ConeIndex { cone: ci, index: i });
                    well_formed = false;
                } else if k > 0 && cone[k - 1] == i {
                    rep.violations.push(Violation::DuplicateIndex { cone: ci, index: i });
                    well_formed = false;
                }
            }
            if !seen.insert(cone.clone()) {
                rep.violations.push(Violation::DuplicateCone { cone: ci });
            }
        }
        if !well_formed || !rep.violations.is_empty() {
            return rep;
        }
        for (ci, cone) in self.cones.iter().enumerate() {
            let m = IntMatrix::from_cols_with_rows(cone.iter().map(|&i| self.free_ray(i)).collect(), n);
            if m.determinant().is_zero() {
                rep.violations.push(Violation::DependentCone { cone: ci });
            }
        }
        let used: BTreeSet<usize> = self.cones.iter().flatten().copied().collect();
        for i in 0..s {
            if !used.contains(&i) {
                rep.violations.push(Violation::UnusedRay { ray: i });
            }
        }
        if !rep.violations.is_empty() {
            return rep;
        }
        match n {
            0 => {
                if s != 0 || self.cones.len() != 1 {
                    rep.violations.push(Violation::Incomplete(
                        "a zero-dimensional fan has no rays and the single cone {0}".into(),
                    ));
                }
            }
            1 => {
                let signs: Vec<bool> = (0..s).map(|i| self.b.get(0, i).is_positive()).collect();
                if s != 2 || signs[0] == signs[1] {
                    rep.violations.push(Violation::Incomplete(
                        "a complete one-dimensional fan has one positive and one negative ray".into(),
                    ));
                }
            }
            2 => {
                if let Err(why) = self.check_complete_2d() {
                    rep.violations.push(Violation::Incomplete(why));
                }
            }
            _ => rep.notices.push(format!("completeness unchecked in dimension {n}")),
        }
        rep
    }

    fn check_complete_2d(&self) -> std::result::Result<(), String> {
        let s = self.s();
        if s < 3 {
            return Err(format!("only {s} rays"));
        }
        let ord = self.sorted_by_angle();
        let mut expected = BTreeSet::new();
        for t in 0..s {
            let (a, b) = (ord[t], ord[(t + 1) % s]);
            let (va, vb) = (self.free_ray(a), self.free_ray(b));
            let c = cross(&va, &vb);
            if c.is_zero() && dot(&va, &vb).is_positive() {
                return Err(format!("rays {} and {} span the same ray", a + 1, b + 1));
            }
            if !c.is_positive() {
                return Err(format!("the sector from ray {} to ray {} is not strictly convex", a + 1, b + 1));
            }
            expected.insert(if a < b { vec![a, b] } else { vec![b, a] });
        }
        let actual: BTreeSet<Vec<usize>> = self.cones.iter().cloned().collect();
        if let Some(missing) = expected.difference(&actual).next() {
            return Err(format!("missing cone {{{}, {}}}", missing[0] + 1, missing[1] + 1));
        }
        if let Some(extra) = actual.difference(&expected).next() {
            return Err(format!("cone {{{}, {}}} overlaps other cones", extra[0] + 1, extra[1] + 1));
        }
        Ok(())
    }

    fn sorted_by_angle(&self) -> Vec<usize> {
        let mut ord: Vec<usize> = (0..self.s()).collect();
        ord.sort_by(|&i, &j| angle_cmp(&self.free_ray(i), &self.free_ray(j)).then(i.cmp(&j)));
        ord
    }

    /// Rays in counterclockwise order starting from ray 0 (`n = 2` only).
    pub fn cyclic_order(&self) -> Option<Vec<usize>> {
        if self.n != 2 || self.s() == 0 {
            return None;
        }
        let mut ord = self.sorted_by_angle();
        let p = ord.iter().position(|&i| i == 0)?;
        ord.rotate_left(p);
        Some(ord)
    }

    /// The maximal cones containing ray `i`.
    pub fn cones_containing(&self, i: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| self.cones[c].contains(&i)).collect()
    }

    pub fn projective_line() -> Self {
        Self::new(1, vec![], IntMatrix::from_i64_rows(&[[1, -1]]), vec![vec![0], vec![1]]).expect("valid")
    }

    pub fn projective_plane() -> Self {
        Self::from_rays_2d(&[[1, 0], [0, 1], [-1, -1]]).expect("valid")
    }

    /// Complete 2D orbifold whose `i`-th ray image is `rays[i]`, with the
    /// maximal cones read off from the angular order.
    pub fn from_rays_2d(rays: &[[i64; 2]]) -> Result<Self> {
        let b = IntMatrix::from_i64_rows(&[
            rays.iter().map(|r| r[0]).collect::<Vec<_>>(),
            rays.iter().map(|r| r[1]).collect::<Vec<_>>(),
        ]);
        Self::orbifold_2d(b)
    }

    /// Like [`from_rays_2d`](Self::from_rays_2d) for an arbitrary `2 x s` matrix.
    pub fn orbifold_2d(b: IntMatrix) -> Result<Self> {
        if b.rows() != 2 {
            return Err(Error::DimensionMismatch { what: "B rows", expected: 2, found: b.rows() });
        }
        let probe = Self::from_parts(2, vec![], b.clone(), vec![]);
        let s = probe.s();
        let ord = probe.sorted_by_angle();
        let cones = if s >= 2 {
            (0..s).map(|t| vec![ord[t], ord[(t + 1) % s]]).collect()
        } else {
            vec![]
        };
        Self::new(2, vec![], b, cones)
    }

    /// Hirzebruch surface `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Self {
        Self::from_rays_2d(&[[1, 0], [0, 1], [-1, a], [0, -1]]).expect("valid")
    }

    /// `P(a)`: `N = Z^(n+1) / Z a`, `B = I`, normalized.
    pub fn weighted_projective(a: &[i64]) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("weights must be nonempty".into()));
        }
        if let Some(w) = a.iter().find(|&&w| w < 1) {
            return Err(Error::InvalidArgument(format!("weight {w} is not positive")));
        }
        let m = a.len();
        let a0 = IntMatrix::from_i64_rows(&a.iter().map(|&w| [w]).collect::<Vec<_>>());
        let cones = subsets(m, m - 1);
        Ok(normalize_presentation(&a0, &IntMatrix::identity(m), cones)?.fan)
    }
}

/// Rewrites `N = Z^m / im(a0)` with rays `b0` into the canonical shape via the
/// Smith form of `a0`: free coordinates first, then cyclic factors of order
/// `> 1`; torsion rows of `B` are reduced modulo their orders.
pub fn normalize_presentation(a0: &IntMatrix, b0: &IntMatrix, cones: Vec<Vec<usize>>) -> Result<Normalized> {
    let m = a0.rows();
    if b0.rows() != m {
        return Err(Error::DimensionMismatch { what: "B rows", expected: m, found: b0.rows() });
    }
    let snf = smith_normal_form(a0);
    let d = snf.invariants();
    let k = d.len();
    let tors: Vec<usize> = (0..k).filter(|&i| !d[i].is_one()).collect();
    let order: Vec<usize> = (k..m).chain(tors.iter().copied()).collect();
    let n = m - k;
    let torsion: Vec<BigInt> = tors.iter().map(|&i| d[i].clone()).collect();
    let ub = &snf.left * b0;
    let mut b = ub.select_rows(&order);
    for (t, dt) in torsion.iter().enumerate() {
        for j in 0..b.cols() {
            let v = b.get(n + t, j).mod_floor(dt);
            b.set(n + t, j, v);
        }
    }
    let mut embed = IntMatrix::zeros(m, order.len());
    for (col, &row) in order.iter().enumerate() {
        embed.set(row, col, BigInt::one());
    }
    let back = &snf.left_inv * &embed;
    let e = snf.right.select_cols(&tors);
    let fan = StackyFan::new(n, torsion, b, cones)?;
    let diff = &(&back * fan.b()) - b0;
    let f = solve_integer_matrix(a0, &diff)
        .ok_or_else(|| Error::InvalidMorphism("presentation change is not integral".into()))?;
    Ok(Normalized { fan, back, e, f })
}

pub(crate) fn cross(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn half(v: &[BigInt]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

/// Exact comparison of polar angles in `[0, 2π)`.
pub(crate) fn angle_cmp(a: &[BigInt], b: &[BigInt]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| BigInt::zero().cmp(&cross(a, b)))
}

impl fmt::Display for StackyFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, torsion [", self.n)?;
        for (i, t) in self.torsion.iter().enumerate() {
            write!(f, "{}{t}", if i > 0 { ", " } else { "" })?;
        }
        write!(f, "], B = {}, cones [", self.b)?;
        for (ci, c) in self.cones.iter().enumerate() {
            let idx: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{}{{{}}}", if ci > 0 { ", " } else { "" }, idx.join(", "))?;
        }
        write!(f, "]")
    }
}
