//! Morphisms of stacky fans and the standard constructions: root stacks,
//! rigidification, torus-invariant substacks, weighted blow-ups, surface
//! resolutions and Frobenius morphisms.
//!
//! A [`ToricMorphism`] from `(B, A)` to `(B', A')` is given by `C: Z^s -> Z^s'`
//! on divisor lattices, `D: Z^(n+r) -> Z^(n'+r')`, `E: Z^r -> Z^r'` and a
//! homotopy `F: Z^s -> Z^r'` with `D B - B' C = A' F` and `D A = A' E`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::fan::{cross, dot, normalize_presentation, StackyFan};
use crate::picard::{LineBundle, PicardGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricMorphism {
    pub source: StackyFan,
    pub target: StackyFan,
    pub c: IntMatrix,
    pub d: IntMatrix,
    pub e: IntMatrix,
    pub f: IntMatrix,
}

impl ToricMorphism {
    /// Checked constructor.
    pub fn new(
        source: StackyFan,
        target: StackyFan,
        c: IntMatrix,
        d: IntMatrix,
        e: IntMatrix,
        f: IntMatrix,
    ) -> Result<Self> {
        let phi = Self { source, target, c, d, e, f };
        phi.validate()?;
        Ok(phi)
    }

    pub fn identity(fan: &StackyFan) -> Self {
        Self {
            source: fan.clone(),
            target: fan.clone(),
            c: IntMatrix::identity(fan.s()),
            d: IntMatrix::identity(fan.n() + fan.r()),
            e: IntMatrix::identity(fan.r()),
            f: IntMatrix::zeros(fan.r(), fan.s()),
        }
    }

    /// Shapes, the two commutation identities, and for `n, n' ≤ 2` the cone
    /// conditions: every source cone maps into a target cone, and `C` sends
    /// each ray into the rays of the minimal target cone containing its image
    /// with nonnegative coefficients.
    pub fn validate(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        let bad = |m: String| Err(Error::InvalidMorphism(m));
        let shapes = [
            ("C", self.c.shape(), (y.s(), x.s())),
            ("D", self.d.shape(), (y.n() + y.r(), x.n() + x.r())),
            ("E", self.e.shape(), (y.r(), x.r())),
            ("F", self.f.shape(), (y.r(), x.s())),
        ];
        for (name, got, want) in shapes {
            if got != want {
                return bad(format!("{name} has shape {got:?}, expected {want:?}"));
            }
        }
        let lhs = &(&self.d * x.b()) - &(y.b() * &self.c);
        if lhs != &y.a_matrix() * &self.f {
            return bad("D B - B' C differs from A' F".into());
        }
        if &self.d * &x.a_matrix() != &y.a_matrix() * &self.e {
            return bad("D A differs from A' E".into());
        }
        if x.n() > 2 || y.n() > 2 {
            return Ok(());
        }
        let dfree = self.free_block();
        let image = |j: usize| dfree.mul_vec(&x.free_ray(j));
        for (ci, cone) in x.cones().iter().enumerate() {
            let imgs: Vec<Vec<BigInt>> = cone.iter().map(|&j| image(j)).collect();
            let hit = y.cones().iter().any(|t| imgs.iter().all(|w| in_closed_cone(y, t, w)));
            if !hit {
                return bad(format!("cone {} maps into no target cone", ci + 1));
            }
        }
        for j in 0..x.s() {
            let tau = minimal_cone(y, &image(j))
                .ok_or_else(|| Error::InvalidMorphism(format!("image of ray {} lies in no cone", j + 1)))?;
            for i in 0..y.s() {
                let cij = self.c.get(i, j);
                if cij.is_negative() || (!cij.is_zero() && !tau.contains(&i)) {
                    return bad(format!(
                        "ray {} is routed to ray {} outside the cone containing its image",
                        j + 1,
                        i + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Induced map on the free quotients `Z^n -> Z^n'`.
    pub fn free_block(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.target.n()).collect();
        let cols: Vec<usize> = (0..self.source.n()).collect();
        self.d.select_rows(&rows).select_cols(&cols)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ToricMorphism) -> Result<ToricMorphism> {
        if first.target != self.source {
            return Err(Error::InvalidMorphism("composition of non-matching morphisms".into()));
        }
        Ok(ToricMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            c: &self.c * &first.c,
            d: &self.d * &first.d,
            e: &self.e * &first.e,
            f: &(&self.f * &first.c) + &(&self.e * &first.f),
        })
    }
}

/// `φ* O(k'D')_{l'} = O((C^t k' + F^t l') D)_{E^t l'}` on the source.
pub fn pullback(phi: &ToricMorphism, source: &PicardGroup, b: &LineBundle) -> Result<LineBundle> {
    if b.k().len() != phi.target.s() || b.l().len() != phi.target.r() {
        return Err(Error::InvalidMorphism("bundle does not live on the target".into()));
    }
    if source.fan() != &phi.source {
        return Err(Error::InvalidMorphism("Picard group is not that of the source".into()));
    }
    let ct = phi.c.transpose().mul_vec(b.k());
    let ft = phi.f.transpose().mul_vec(b.l());
    let k: Vec<BigInt> = ct.into_iter().zip(ft).map(|(x, y)| x + y).collect();
    let l = phi.e.transpose().mul_vec(b.l());
    source.bundle(&k, &l)
}

fn in_closed_cone(fan: &StackyFan, cone: &[usize], w: &[BigInt]) -> bool {
    match cone.len() {
        0 => w.iter().all(Zero::is_zero),
        1 => {
            let v = fan.free_ray(cone[0]);
            if v.len() == 1 {
                !(&v[0] * &w[0]).is_negative()
            } else {
                cross(&v, w).is_zero() && !dot(&v, w).is_negative()
            }
        }
        _ => {
            let (va, vb) = (fan.free_ray(cone[0]), fan.free_ray(cone[1]));
            let det = cross(&va, &vb);
            let x = cross(w, &vb) * det.signum();
            let y = cross(&va, w) * det.signum();
            !x.is_negative() && !y.is_negative()
        }
    }
}

/// Smallest cone of a complete fan (`n ≤ 2`) containing `w`, as ray indices.
fn minimal_cone(fan: &StackyFan, w: &[BigInt]) -> Option<Vec<usize>> {
    if w.iter().all(Zero::is_zero) {
        return Some(vec![]);
    }
    for i in 0..fan.s() {
        if in_closed_cone(fan, &[i], w) {
            return Some(vec![i]);
        }
    }
    fan.cones().iter().find(|c| in_closed_cone(fan, c, w)).cloned()
}

/// Roots of the toric divisors: `B'' = B diag(c)`.
pub fn root_stack_divisors(fan: &StackyFan, c: &[BigInt]) -> Result<(StackyFan, ToricMorphism)> {
    if c.len() != fan.s() {
        return Err(Error::DimensionMismatch { what: "c", expected: fan.s(), found: c.len() });
    }
    if let Some(x) = c.iter().find(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument(format!("root order {x} is not positive")));
    }
    let mut diag = IntMatrix::zeros(c.len(), c.len());
    for (i, x) in c.iter().enumerate() {
        diag.set(i, i, x.clone());
    }
    let root = StackyFan::new(fan.n(), fan.torsion().to_vec(), fan.b() * &diag, fan.cones().to_vec())?;
    let (n, r) = (fan.n(), fan.r());
    let phi = ToricMorphism::new(
        root.clone(),
        fan.clone(),
        diag,
        IntMatrix::identity(n + r),
        IntMatrix::identity(r),
        IntMatrix::zeros(r, fan.s()),
    )?;
    Ok((root, phi))
}

/// Root stack of line bundles together with its structure morphism and the
/// tautological roots: `roots[i]^{e_i}` is the pullback of `bundles[i]`.
#[derive(Clone, Debug)]
pub struct BundleRoot {
    pub fan: StackyFan,
    pub morphism: ToricMorphism,
    pub roots: Vec<LineBundle>,
}

/// `A' = (A 0; -l^t diag(e))`, `B' = (B; -k^t)`, renormalized.
pub fn root_stack_line_bundles(fan: &StackyFan, bundles: &[LineBundle], e: &[BigInt]) -> Result<BundleRoot> {
    if bundles.len() != e.len() || e.is_empty() {
        return Err(Error::DimensionMismatch { what: "root orders", expected: bundles.len().max(1), found: e.len() });
    }
    if let Some(x) = e.iter().find(|x| !x.is_positive()) {
        return Err(Error::InvalidArgument(format!("root order {x} is not positive")));
    }
    let (n, r, s, t) = (fan.n(), fan.r(), fan.s(), e.len());
    for b in bundles {
        if b.k().len() != s || b.l().len() != r {
            return Err(Error::DimensionMismatch { what: "bundle", expected: s + r, found: b.k().len() + b.l().len() });
        }
    }
    let m = n + r + t;
    let mut a0 = IntMatrix::zeros(m, r + t);
    let a = fan.a_matrix();
    for i in 0..n + r {
        for j in 0..r {
            a0.set(i, j, a.get(i, j).clone());
        }
    }
    let mut b0 = IntMatrix::zeros(m, s);
    for i in 0..n + r {
        for j in 0..s {
            b0.set(i, j, fan.b().get(i, j).clone());
        }
    }
    for (q, (bundle, ei)) in bundles.iter().zip(e).enumerate() {
        for (j, x) in bundle.l().iter().enumerate() {
            a0.set(n + r + q, j, -x);
        }
        a0.set(n + r + q, r + q, ei.clone());
        for (j, x) in bundle.k().iter().enumerate() {
            b0.set(n + r + q, j, -x);
        }
    }
    let norm = normalize_presentation(&a0, &b0, fan.cones().to_vec())?;
    let proj_d = IntMatrix::identity(m).select_rows(&(0..n + r).collect::<Vec<_>>());
    let proj_e = IntMatrix::identity(r + t).select_rows(&(0..r).collect::<Vec<_>>());
    let morphism = ToricMorphism::new(
        norm.fan.clone(),
        fan.clone(),
        IntMatrix::identity(s),
        &proj_d * &norm.back,
        &proj_e * &norm.e,
        &proj_e * &norm.f,
    )?;
    // The raw generator g*_{r+q} transported to the normalized presentation.
    let pic = PicardGroup::new(&norm.fan);
    let roots = (0..t)
        .map(|q| pic.bundle(norm.f.row(r + q), norm.e.row(r + q)))
        .collect::<Result<_>>()?;
    Ok(BundleRoot { fan: norm.fan, morphism, roots })
}

/// Drops the torsion rows; the morphism is the rigidification map.
pub fn rigidification(fan: &StackyFan) -> (StackyFan, ToricMorphism) {
    let n = fan.n();
    let top: Vec<usize> = (0..n).collect();
    let rig = StackyFan::new(n, vec![], fan.b().select_rows(&top), fan.cones().to_vec())
        .expect("free parts of a valid fan form a valid fan");
    let psi = ToricMorphism {
        source: fan.clone(),
        target: rig.clone(),
        c: IntMatrix::identity(fan.s()),
        d: IntMatrix::identity(n + fan.r()).select_rows(&top),
        e: IntMatrix::zeros(0, fan.r()),
        f: IntMatrix::zeros(0, fan.s()),
    };
    debug_assert!(psi.validate().is_ok());
    (rig, psi)
}

/// The bundles `O(-Σ_j b_{n+i,j} D_j)` whose roots give back `fan` from its
/// rigidification.
pub fn rigidification_bundles(fan: &StackyFan, rig_pic: &PicardGroup) -> Result<Vec<LineBundle>> {
    (0..fan.r())
        .map(|i| {
            let k: Vec<BigInt> = fan.b().row(fan.n() + i).iter().map(|x| -x).collect();
            rig_pic.bundle(&k, &[])
        })
        .collect()
}

/// Torus-invariant closed substack for a cone `τ`, with `rays[i]` the
/// original index of its `i`-th ray.
#[derive(Clone, Debug)]
pub struct Substack {
    pub fan: StackyFan,
    pub rays: Vec<usize>,
}

pub fn substack(fan: &StackyFan, tau: &[usize]) -> Result<Substack> {
    let mut tau = tau.to_vec();
    tau.sort_unstable();
    tau.dedup();
    if tau.is_empty() {
        return Err(Error::InvalidArgument("the cone must be nonzero".into()));
    }
    let containing: Vec<&Vec<usize>> = fan.cones().iter().filter(|c| tau.iter().all(|i| c.contains(i))).collect();
    if containing.is_empty() {
        let idx: Vec<String> = tau.iter().map(|i| (i + 1).to_string()).collect();
        return Err(Error::InvalidArgument(format!("{{{}}} is not a cone of the fan", idx.join(", "))));
    }
    let rays: Vec<usize> = (0..fan.s())
        .filter(|j| !tau.contains(j) && containing.iter().any(|c| c.contains(j)))
        .collect();
    let mut a_cols: Vec<Vec<BigInt>> = tau.iter().map(|&i| fan.b().col(i)).collect();
    let a = fan.a_matrix();
    a_cols.extend((0..fan.r()).map(|j| a.col(j)));
    let m = fan.n() + fan.r();
    let a0 = IntMatrix::from_cols_with_rows(a_cols, m);
    let b0 = IntMatrix::from_cols_with_rows(rays.iter().map(|&j| fan.b().col(j)).collect(), m);
    let cones = containing
        .iter()
        .map(|c| c.iter().filter(|i| !tau.contains(i)).map(|i| rays.iter().position(|j| j == i).unwrap()).collect())
        .collect();
    let norm = normalize_presentation(&a0, &b0, cones)?;
    Ok(Substack { fan: norm.fan, rays })
}

#[derive(Clone, Debug)]
pub struct Blowup {
    pub fan: StackyFan,
    pub morphism: ToricMorphism,
    /// `m v_new = h_i v_i + h_j v_j` with coprime `h`.
    pub m: BigInt,
    pub h_coeffs: [BigInt; 2],
    pub h: BigInt,
    pub b_new: BigInt,
    /// `b_new v_new = c_i b_i v_i + c_j b_j v_j`.
    pub c: [BigInt; 2],
    pub cone: [usize; 2],
    pub v_new: Vec<BigInt>,
}

/// Weighted blow-up of a surface orbifold at a primitive vector strictly
/// inside the maximal cone `{i, j}`. The new ray gets index `s`.
pub fn weighted_blowup(fan: &StackyFan, cone: [usize; 2], v_new: &[BigInt]) -> Result<Blowup> {
    if fan.n() != 2 || !fan.is_orbifold() {
        return Err(Error::Unsupported("weighted blow-ups need a two-dimensional orbifold".into()));
    }
    let mut key = cone.to_vec();
    key.sort_unstable();
    if !fan.cones().contains(&key) {
        return Err(Error::InvalidArgument(format!("{{{}, {}}} is not a maximal cone", cone[0] + 1, cone[1] + 1)));
    }
    if v_new.len() != 2 {
        return Err(Error::DimensionMismatch { what: "v_new", expected: 2, found: v_new.len() });
    }
    if !IntMatrix::content(v_new).is_one() {
        return Err(Error::InvalidArgument("new ray vector is not primitive".into()));
    }
    let (ri, rj) = (fan.ray(cone[0]), fan.ray(cone[1]));
    let det = cross(&ri.v, &rj.v);
    let sg = det.signum();
    let x = cross(v_new, &rj.v) * &sg;
    let y = cross(&ri.v, v_new) * &sg;
    let dd = det.abs();
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::InvalidArgument("new ray is not strictly inside the cone".into()));
    }
    let g = dd.gcd(&x.gcd(&y));
    let m = &dd / &g;
    let (hi, hj) = (&x / &g, &y / &g);
    let h = (&ri.b / ri.b.gcd(&hi)).lcm(&(&rj.b / rj.b.gcd(&hj)));
    let b_new = &h * &m;
    let (ci, cj) = (&h * &hi / &ri.b, &h * &hj / &rj.b);
    let s = fan.s();
    let col: Vec<BigInt> = v_new.iter().map(|v| v * &b_new).collect();
    let b = fan.b().hstack(&IntMatrix::from_cols_with_rows(vec![col], 2));
    let mut cones: Vec<Vec<usize>> = fan.cones().iter().filter(|c| **c != key).cloned().collect();
    cones.push(vec![cone[0], s]);
    cones.push(vec![cone[1], s]);
    let new_fan = StackyFan::new(2, vec![], b, cones)?;
    let mut c = IntMatrix::identity(s).hstack(&IntMatrix::zeros(s, 1));
    c.set(cone[0], s, ci.clone());
    c.set(cone[1], s, cj.clone());
    let morphism = ToricMorphism::new(
        new_fan.clone(),
        fan.clone(),
        c,
        IntMatrix::identity(2),
        IntMatrix::zeros(0, 0),
        IntMatrix::zeros(0, s + 1),
    )?;
    Ok(Blowup {
        fan: new_fan,
        morphism,
        m,
        h_coeffs: [hi, hj],
        h,
        b_new,
        c: [ci, cj],
        cone,
        v_new: v_new.to_vec(),
    })
}

/// Repeated weighted blow-ups until every coarse cone is unimodular. Each
/// step takes the first singular cone `(v_a, v_b)` in counterclockwise order
/// and inserts the lattice point `w` with `det(v_a, w) = 1` on the segment
/// side of `v_a`, i.e. `w = (q v_a + v_b) / d` with `d = det(v_a, v_b)`.
pub fn resolve_2d(fan: &StackyFan) -> Result<Vec<Blowup>> {
    if fan.n() != 2 || !fan.is_orbifold() {
        return Err(Error::Unsupported("resolution needs a two-dimensional orbifold".into()));
    }
    let mut steps: Vec<Blowup> = Vec::new();
    let mut cur = fan.clone();
    loop {
        let ord = cur.cyclic_order().expect("two-dimensional");
        let s = ord.len();
        let singular = (0..s).map(|t| (ord[t], ord[(t + 1) % s])).find(|&(a, b)| {
            let d = cross(&cur.ray(a).v, &cur.ray(b).v);
            d > BigInt::one()
        });
        let Some((a, b)) = singular else {
            return Ok(steps);
        };
        let (va, vb) = (cur.ray(a).v, cur.ray(b).v);
        let d = cross(&va, &vb);
        let mut q = BigInt::one();
        let w = loop {
            let num: Vec<BigInt> = va.iter().zip(&vb).map(|(x, y)| &q * x + y).collect();
            if num.iter().all(|z| z.is_multiple_of(&d)) {
                break num.iter().map(|z| z / &d).collect::<Vec<_>>();
            }
            q += 1;
        };
        let step = weighted_blowup(&cur, [a, b], &w)?;
        cur = step.fan.clone();
        steps.push(step);
    }
}

/// The degree-`m` Frobenius endomorphism: every structure map is
/// multiplication by `m`.
pub fn frobenius_morphism(fan: &StackyFan, m: &BigInt) -> Result<ToricMorphism> {
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("Frobenius degree {m} must be positive")));
    }
    let scaled = |k: usize| {
        let mut x = IntMatrix::zeros(k, k);
        for i in 0..k {
            x.set(i, i, m.clone());
        }
        x
    };
    ToricMorphism::new(
        fan.clone(),
        fan.clone(),
        scaled(fan.s()),
        scaled(fan.n() + fan.r()),
        scaled(fan.r()),
        IntMatrix::zeros(fan.r(), fan.s()),
    )
}
