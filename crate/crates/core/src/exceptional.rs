//! Exceptional and strong exceptional orderings of line-bundle collections.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;

use crate::cohomology::ext;
use crate::error::{Error, Result};
use crate::exactalg::subsets;
use crate::fan::StackyFan;
use crate::geometry::k_rank;
use crate::picard::{LineBundle, PicardGroup};

/// `table[i][j]` is `(ext^0, …, ext^n)(bundles[i], bundles[j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    pub bundles: Vec<LineBundle>,
    pub table: Vec<Vec<Vec<u64>>>,
}

impl ExtTable {
    fn sub(&self, idx: &[usize]) -> ExtTable {
        ExtTable {
            bundles: idx.iter().map(|&i| self.bundles[i].clone()).collect(),
            table: idx.iter().map(|&i| idx.iter().map(|&j| self.table[i][j].clone()).collect()).collect(),
        }
    }

    fn nonzero(&self, i: usize, j: usize) -> bool {
        self.table[i][j].iter().any(|&x| x > 0)
    }

    fn higher_nonzero(&self, i: usize, j: usize) -> bool {
        self.table[i][j].iter().skip(1).any(|&x| x > 0)
    }

    fn is_exceptional_object(&self, i: usize) -> bool {
        self.table[i][i].first() == Some(&1) && !self.higher_nonzero(i, i)
    }
}

pub fn ext_table(pic: &PicardGroup, bundles: &[LineBundle]) -> Result<ExtTable> {
    let table = bundles
        .iter()
        .map(|a| bundles.iter().map(|b| ext(pic, a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let t = ExtTable { bundles: bundles.to_vec(), table };
    for i in 0..bundles.len() {
        for j in 0..i {
            debug_assert!(
                bundles[i] == bundles[j] || t.table[i][j][0] == 0 || t.table[j][i][0] == 0,
                "distinct line bundles with maps in both directions"
            );
        }
    }
    Ok(t)
}

/// Checks the definition directly: every object is exceptional,
/// `Ext^*(E_b, E_a) = 0` for `b` after `a`, and for strong collections
/// `Ext^{i≠0}(E_a, E_b) = 0` for all pairs.
pub fn is_exceptional_ordering(t: &ExtTable, order: &[usize], strong: bool) -> bool {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..t.bundles.len()).collect::<Vec<_>>() {
        return false;
    }
    for (p, &a) in order.iter().enumerate() {
        if !t.is_exceptional_object(a) {
            return false;
        }
        for &b in &order[p + 1..] {
            if t.nonzero(b, a) || (strong && t.higher_nonzero(a, b)) {
                return false;
            }
        }
    }
    true
}

/// An ordering (as indices into `t.bundles`) making the collection
/// exceptional, or strong exceptional. Ties are broken by canonical order.
pub fn find_exceptional_ordering(t: &ExtTable, strong: bool) -> Option<Vec<usize>> {
    let n = t.bundles.len();
    if !(0..n).all(|i| t.is_exceptional_object(i)) {
        return None;
    }
    let pairs = || (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
    if strong && pairs().any(|(i, j)| t.higher_nonzero(i, j)) {
        return None;
    }
    let mut indeg = vec![0usize; n];
    for (i, j) in pairs() {
        if t.nonzero(i, j) {
            indeg[j] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<(&LineBundle, usize)>> =
        (0..n).filter(|&i| indeg[i] == 0).map(|i| Reverse((&t.bundles[i], i))).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, i))) = ready.pop() {
        order.push(i);
        for j in 0..n {
            if j != i && t.nonzero(i, j) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(Reverse((&t.bundles[j], j)));
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Compares a collection size with the rank of the Grothendieck group. Equal
/// sizes are necessary for fullness, not sufficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProxy {
    pub passes: bool,
    pub k_rank: BigInt,
    pub size: usize,
}

pub fn fullness_rank_proxy(fan: &StackyFan, size: usize) -> Result<RankProxy> {
    let kr = k_rank(fan)?;
    if !kr.boundary {
        return Err(Error::RankFormula(
            "some ray image lies inside the hull, so the hull volume does not give the rank".into(),
        ));
    }
    Ok(RankProxy { passes: kr.rank == BigInt::from(size), k_rank: kr.rank, size })
}

/// All `size`-subsets of `pool` admitting an exceptional ordering.
pub fn scan_subsets(pic: &PicardGroup, pool: &BTreeSet<LineBundle>, size: usize) -> Result<Vec<Vec<LineBundle>>> {
    if pool.len() > 12 {
        return Err(Error::PoolTooLarge(pool.len()));
    }
    let bundles: Vec<LineBundle> = pool.iter().cloned().collect();
    let table = ext_table(pic, &bundles)?;
    Ok(subsets(bundles.len(), size)
        .into_iter()
        .filter(|idx| find_exceptional_ordering(&table.sub(idx), false).is_some())
        .map(|idx| idx.iter().map(|&i| bundles[i].clone()).collect())
        .collect())
}
