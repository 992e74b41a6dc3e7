//! `reproduce`: recompute the worked examples and compare with their known
//! answers, normalizing the listed representatives to canonical classes.

use std::collections::BTreeSet;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::{big, bundles_json, Failure, Report};
use toricdm::catalog;
use toricdm::exceptional::{ext_table, find_exceptional_ordering, fullness_rank_proxy, scan_subsets};
use toricdm::frobenius::stable_summands;
use toricdm::geometry::{k_rank, nef_summands};
use toricdm::picard::{LineBundle, PicardGroup};
use toricdm::StackyFan;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Example {
    /// The projective plane.
    P2,
    /// The plane with every toric divisor replaced by its square root.
    #[value(name = "root-p2-c2")]
    RootP2C2,
    /// The weighted projective plane P(1,2,3).
    Wps,
    /// `F_1` with the divisor on the ray `(-1, 1)` doubled.
    #[value(name = "hirzebruch-ex2")]
    HirzebruchEx2,
    /// The five-ray surface with rays `(1,0), (0,1), (-2,2), (-1,0), (0,-1)`.
    Example3,
}

struct Check {
    name: &'static str,
    computed: Value,
    expected: Value,
    ok: bool,
    lines: Vec<String>,
}

fn set_check(name: &'static str, computed: &BTreeSet<LineBundle>, expected: &BTreeSet<LineBundle>) -> Check {
    let mut lines = vec![format!("{name}: {} computed, {} expected", computed.len(), expected.len())];
    for b in computed.union(expected) {
        let mark = match (computed.contains(b), expected.contains(b)) {
            (true, true) => " ",
            (true, false) => "+",
            _ => "-",
        };
        lines.push(format!("  {mark} {b}"));
    }
    Check { name, computed: bundles_json(computed), expected: bundles_json(expected), ok: computed == expected, lines }
}

fn value_check(name: &'static str, computed: Value, expected: Value) -> Check {
    let ok = computed == expected;
    let lines = vec![format!("{name}: computed {computed}, expected {expected}")];
    Check { name, computed, expected, ok, lines }
}

fn strong_check(name: &'static str, pic: &PicardGroup, set: &BTreeSet<LineBundle>) -> Result<Check, Failure> {
    let bundles: Vec<LineBundle> = set.iter().cloned().collect();
    let t = ext_table(pic, &bundles)?;
    let order = find_exceptional_ordering(&t, true);
    let mut c = value_check(name, json!(order.is_some()), json!(true));
    if let Some(o) = &order {
        c.lines.extend(o.iter().map(|&i| format!("  {}", t.bundles[i])));
    } else {
        for (i, a) in t.bundles.iter().enumerate() {
            for (j, b) in t.bundles.iter().enumerate() {
                if i != j && t.table[i][j].iter().skip(1).any(|&x| x > 0) {
                    c.lines.push(format!("  ext({a}, {b}) = {:?}", t.table[i][j]));
                }
            }
        }
    }
    Ok(c)
}

fn classes(pic: &PicardGroup, ks: &[Vec<i64>]) -> Result<BTreeSet<LineBundle>, Failure> {
    ks.iter().map(|k| pic.bundle_i64(k, &[]).map_err(Failure::from)).collect()
}

fn checks(example: Example) -> Result<(StackyFan, Vec<Check>), Failure> {
    Ok(match example {
        Example::P2 => {
            let fan = StackyFan::projective_plane();
            let pic = PicardGroup::new(&fan);
            let expected = classes(&pic, &catalog::projective_plane_summands())?;
            (fan, vec![set_check("summands", &stable_summands(&pic), &expected)])
        }
        Example::RootP2C2 => {
            let fan = catalog::root_of_projective_plane(2);
            let pic = PicardGroup::new(&fan);
            let expected = classes(&pic, &catalog::root_of_projective_plane_summands(2))?;
            (fan, vec![set_check("summands", &stable_summands(&pic), &expected)])
        }
        Example::Wps => {
            let fan = StackyFan::weighted_projective(&[1, 2, 3])?;
            let pic = PicardGroup::new(&fan);
            let deg_k = pic.degree(&pic.canonical_class())?;
            // D1 has degree 1, so its multiples fill the degree window.
            let mut expected = BTreeSet::new();
            let mut d = BigInt::from(0);
            while d > deg_k {
                expected.insert(pic.scale(&pic.divisor(0), &d));
                d -= 1;
            }
            let got = stable_summands(&pic);
            let mut out = vec![value_check("deg K", big(&deg_k), json!(-6)), set_check("summands", &got, &expected)];
            out.push(strong_check("strong ordering", &pic, &got)?);
            (fan, out)
        }
        Example::HirzebruchEx2 => {
            let fan = catalog::hirzebruch_orbifold();
            let pic = PicardGroup::new(&fan);
            let expected = classes(&pic, &catalog::hirzebruch_orbifold_summands())?;
            let got = stable_summands(&pic);
            let nef = nef_summands(&pic)?;
            let excluded: BTreeSet<LineBundle> = got.difference(&nef).cloned().collect();
            let proxy = fullness_rank_proxy(&fan, nef.len())?;
            (
                fan,
                vec![
                    set_check("summands", &got, &expected),
                    set_check("excluded from nef part", &excluded, &classes(&pic, &catalog::hirzebruch_orbifold_non_nef())?),
                    strong_check("nef part strong ordering", &pic, &nef)?,
                    value_check("rank of K-group", big(&proxy.k_rank), json!(6)),
                    value_check("rank proxy", json!(proxy.passes), json!(true)),
                ],
            )
        }
        Example::Example3 => {
            let fan = catalog::five_ray_orbifold();
            let pic = PicardGroup::new(&fan);
            let expected = classes(&pic, &catalog::five_ray_orbifold_summands())?;
            let got = stable_summands(&pic);
            let nef = nef_summands(&pic)?;
            let excluded: BTreeSet<LineBundle> = got.difference(&nef).cloned().collect();
            let kr = k_rank(&fan)?;
            let dropped = classes(&pic, &catalog::five_ray_orbifold_dropped())?;
            let s: BTreeSet<LineBundle> = got.difference(&dropped).cloned().collect();
            let found = scan_subsets(&pic, &got, 7)?;
            let mut scan = value_check("orderable 7-subsets", json!(found.len()), json!(1));
            for sub in &found {
                let missing: Vec<String> = got.iter().filter(|b| !sub.contains(b)).map(|b| b.to_string()).collect();
                scan.lines.push(format!("  all but {{{}}}", missing.join(", ")));
            }
            (
                fan,
                vec![
                    set_check("summands", &got, &expected),
                    set_check("excluded from nef part", &excluded, &classes(&pic, &catalog::five_ray_orbifold_non_nef())?),
                    value_check("nef part size", json!(nef.len()), json!(6)),
                    value_check("rank of K-group", big(&kr.rank), json!(7)),
                    value_check("rank formula applies", json!(kr.boundary), json!(true)),
                    strong_check("seven-element subset strong ordering", &pic, &s)?,
                    scan,
                ],
            )
        }
    })
}

pub fn run(example: Example) -> Result<Report, Failure> {
    let (fan, list) = checks(example)?;
    let mut text = Vec::new();
    let (mut computed, mut expected) = (Map::new(), Map::new());
    for c in &list {
        text.push(format!("[{}] {}", if c.ok { "ok" } else { "MISMATCH" }, c.name));
        text.extend(c.lines.iter().cloned());
        computed.insert(c.name.into(), c.computed.clone());
        expected.insert(c.name.into(), c.expected.clone());
    }
    let all = list.iter().all(|c| c.ok);
    text.push(if all { "all checks match".into() } else { "reproduction mismatch".into() });
    let mut r = Report::new("reproduce", Some(&fan), Value::Object(computed), text)?;
    r.expected = Some(Value::Object(expected));
    r.matched = Some(all);
    Ok(r)
}
