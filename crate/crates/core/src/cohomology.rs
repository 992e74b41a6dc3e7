//! Line-bundle cohomology on complete toric orbifolds of dimension at most 2.
//!
//! `h^p(O(kD)) = Σ_m h̃_{n-p-1}(Supp(k + B^t m))` over `m ∈ Z^n`, where
//! `Supp(r)` is the subcomplex of the fan on the rays with `r_i ≥ 0`.
//!
//! Only finitely many `m` contribute: every contributing `m` lies in a
//! bounded polyhedron cut out by lines `⟨m, β_i⟩ = -k_i` or `-k_i - 1`, so
//! the box spanned by all pairwise intersections of those lines contains all
//! of them. The box is then checked against its outer shell.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::{cross, StackyFan};
use crate::picard::{LineBundle, PicardGroup};

/// Subcomplex of the fan on the rays where `r_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuppComplex {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

fn require_small_orbifold(fan: &StackyFan) -> Result<()> {
    if !fan.is_orbifold() {
        return Err(Error::Unsupported("cohomology is implemented for orbifolds (no torsion) only".into()));
    }
    if fan.n() > 2 {
        return Err(Error::Unsupported(format!("cohomology in dimension {} (at most 2 supported)", fan.n())));
    }
    Ok(())
}

pub fn supp_complex(fan: &StackyFan, r: &[BigInt]) -> Result<SuppComplex> {
    require_small_orbifold(fan)?;
    if r.len() != fan.s() {
        return Err(Error::DimensionMismatch { what: "r", expected: fan.s(), found: r.len() });
    }
    Ok(supp_unchecked(fan, r))
}

fn supp_unchecked(fan: &StackyFan, r: &[BigInt]) -> SuppComplex {
    let vertices: Vec<usize> = (0..r.len()).filter(|&i| !r[i].is_negative()).collect();
    let edges = if fan.n() == 2 {
        fan.cones()
            .iter()
            .filter(|c| c.iter().all(|i| !r[*i].is_negative()))
            .map(|c| (c[0], c[1]))
            .collect()
    } else {
        Vec::new()
    };
    SuppComplex { vertices, edges }
}

/// `(h̃_{-1}, h̃_0, h̃_1)` of a graph viewed as a simplicial complex.
pub fn reduced_homology_dims(k: &SuppComplex) -> [u64; 3] {
    if k.vertices.is_empty() {
        return [1, 0, 0];
    }
    let mut parent: Vec<usize> = (0..k.vertices.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let pos = |v: usize| k.vertices.iter().position(|&w| w == v).expect("edge endpoint is a vertex");
    for &(a, b) in &k.edges {
        let (ra, rb) = (find(&mut parent, pos(a)), find(&mut parent, pos(b)));
        parent[ra] = rb;
    }
    let comps = (0..k.vertices.len()).filter(|&i| find(&mut parent, i) == i).count() as u64;
    let cycles = k.edges.len() as u64 + comps - k.vertices.len() as u64;
    [0, comps - 1, cycles]
}

struct Setup {
    n: usize,
    rays: Vec<Vec<BigInt>>,
    k: Vec<BigInt>,
    bound: i64,
}

const MAX_BOX_POINTS: i128 = 50_000_000;

fn setup(pic: &PicardGroup, l: &LineBundle) -> Result<Setup> {
    let fan = pic.fan();
    require_small_orbifold(fan)?;
    let n = fan.n();
    let rays: Vec<Vec<BigInt>> = (0..fan.s()).map(|i| fan.free_ray(i)).collect();
    let k = l.k().to_vec();
    let levels = |i: usize| [-&k[i], -&k[i] - 1];
    let mut bound = BigInt::zero();
    let mut widen = |num: &BigInt, den: &BigInt| {
        let q = num.abs().div_ceil(&den.abs());
        if q > bound {
            bound = q;
        }
    };
    match n {
        1 => {
            for (i, ray) in rays.iter().enumerate() {
                for c in levels(i) {
                    widen(&c, &ray[0]);
                }
            }
        }
        2 => {
            for a in 0..rays.len() {
                for b in a + 1..rays.len() {
                    let det = cross(&rays[a], &rays[b]);
                    if det.is_zero() {
                        continue;
                    }
                    for ca in levels(a) {
                        for cb in levels(b) {
                            widen(&(&ca * &rays[b][1] - &cb * &rays[a][1]), &det);
                            widen(&(&rays[a][0] * &cb - &rays[b][0] * &ca), &det);
                        }
                    }
                }
            }
        }
        _ => {}
    }
    let bound = bound
        .to_i64()
        .filter(|b| (2 * *b as i128 + 3).pow(n as u32) <= MAX_BOX_POINTS)
        .ok_or_else(|| Error::Uncertified(format!("enumeration box of radius {bound} is too large")))?;
    Ok(Setup { n, rays, k, bound })
}

impl Setup {
    fn r_at(&self, m: &[i64]) -> Vec<BigInt> {
        self.rays
            .iter()
            .zip(&self.k)
            .map(|(ray, k)| k + ray.iter().zip(m).map(|(x, &y)| x * y).sum::<BigInt>())
            .collect()
    }

    /// Points with sup-norm exactly `radius` (all of `Z^0` for radius 0).
    fn shell(&self, radius: i64) -> Vec<Vec<i64>> {
        match self.n {
            0 => if radius == 0 { vec![vec![]] } else { vec![] },
            1 => if radius == 0 { vec![vec![0]] } else { vec![vec![-radius], vec![radius]] },
            _ => {
                let mut pts = Vec::new();
                for x in -radius..=radius {
                    for y in -radius..=radius {
                        if x.abs() == radius || y.abs() == radius {
                            pts.push(vec![x, y]);
                        }
                    }
                }
                pts
            }
        }
    }
}

/// `h^0` by direct count of the lattice points `m` with `k + B^t m ≥ 0`.
pub fn h0(pic: &PicardGroup, l: &LineBundle) -> Result<u64> {
    let st = setup(pic, l)?;
    let mut count = 0u64;
    for radius in 0..=st.bound + 1 {
        for m in st.shell(radius) {
            if st.r_at(&m).iter().all(|x| !x.is_negative()) {
                if radius > st.bound {
                    return Err(Error::Uncertified("global section outside the enumeration box".into()));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `(h^0, …, h^n)`.
pub fn h_all(pic: &PicardGroup, l: &LineBundle) -> Result<Vec<u64>> {
    let st = setup(pic, l)?;
    let fan = pic.fan();
    let n = st.n;
    let mut h = vec![0u64; n + 1];
    for radius in 0..=st.bound + 1 {
        for m in st.shell(radius) {
            let dims = reduced_homology_dims(&supp_unchecked(fan, &st.r_at(&m)));
            // h^p collects h̃_{n-p-1}; dims[j] is h̃_{j-1}.
            let contrib: Vec<u64> = (0..=n).map(|p| dims[n - p]).collect();
            if contrib.iter().any(|&x| x > 0) && radius > st.bound {
                return Err(Error::Uncertified(format!("contribution at {m:?} beyond radius {}", st.bound)));
            }
            for (hp, c) in h.iter_mut().zip(contrib) {
                *hp += c;
            }
        }
    }
    Ok(h)
}

/// `Ext^i(L1, L2) = H^i(L2 ⊗ L1^{-1})`.
pub fn ext(pic: &PicardGroup, l1: &LineBundle, l2: &LineBundle) -> Result<Vec<u64>> {
    h_all(pic, &pic.sub(l2, l1))
}
