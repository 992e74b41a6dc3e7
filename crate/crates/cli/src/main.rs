mod fanfile;
mod reproduce;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use fanfile::FanFile;
use toricdm::cohomology::{ext, h_all};
use toricdm::constructions::{
    frobenius_morphism, resolve_2d, rigidification, root_stack_divisors, root_stack_line_bundles, substack,
    weighted_blowup, ToricMorphism,
};
use toricdm::exceptional::{ext_table, find_exceptional_ordering, fullness_rank_proxy, scan_subsets};
use toricdm::frobenius::{pushforward_by_characters, pushforward_by_lattice, stabilization_modulus, stable_summands};
use toricdm::geometry::{is_nef, nef_summands};
use toricdm::picard::{LineBundle, PicardGroup};
use toricdm::{IntMatrix, StackyFan};

#[derive(Parser)]
#[command(name = "toricdm", version, about = "Line bundles, Frobenius summands and exceptional collections on toric DM stacks")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FanArg {
    /// Fan file (JSON).
    #[arg(long)]
    fan: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a fan file and list violations.
    Validate(FanArg),
    /// Picard group, generic stabilizer, toric divisors and canonical class.
    Picard(FanArg),
    /// Summands of a Frobenius push-forward.
    Summands {
        #[command(flatten)]
        fan: FanArg,
        /// One push-forward of degree m, computed by both formulas.
        #[arg(long, conflicts_with = "stable", required_unless_present = "stable")]
        m: Option<u64>,
        /// The stabilized summand set of the structure sheaf.
        #[arg(long)]
        stable: bool,
        /// Divisor coefficients of the bundle pushed forward (default: O).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "stable")]
        k: Option<String>,
        /// Torsion twist of the bundle pushed forward.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "stable")]
        l: Option<String>,
    },
    /// Cohomology dimensions h^0, ..., h^n.
    Cohomology {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
    },
    /// Ext groups between two bundles, each given as `k1,k2,...[;l1,...]`.
    Ext {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Nefness of one divisor, or the summands with nef inverse.
    Nef {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Look for an exceptional ordering of the given bundles.
    CheckCollection {
        #[command(flatten)]
        fan: FanArg,
        /// Bundle as `k1,k2,...[;l1,...]`; repeat for each member.
        #[arg(long = "bundle", required = true, allow_hyphen_values = true)]
        bundles: Vec<String>,
        #[arg(long)]
        strong: bool,
    },
    /// All subsets of a summand pool admitting an exceptional ordering.
    Scan {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Pool::Stable)]
        pool: Pool,
    },
    /// Build a new fan from an old one.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Recompute a worked example and compare with its known answer.
    Reproduce {
        #[arg(long, value_enum)]
        example: reproduce::Example,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Pool {
    Stable,
    Nef,
}

#[derive(Args)]
struct OutArg {
    /// Also write the resulting fan file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construct {
    /// Root stack of the toric divisors with orders `c1,...,cs`.
    Root {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long)]
        c: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Root stack of line bundles: `e_j`-th roots of each `--bundle`.
    Rootlb {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long = "bundle", required = true, allow_hyphen_values = true)]
        bundles: Vec<String>,
        #[arg(long)]
        e: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Rigidification (remove the generic stabilizer).
    Rigidify {
        #[command(flatten)]
        fan: FanArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Closed substack of a cone given by 1-based ray numbers.
    Substack {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long)]
        tau: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Weighted blow-up at a primitive vector inside a 2-cone `i,j`.
    Blowup {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long)]
        cone: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Weighted blow-ups until every coarse cone is unimodular.
    Resolve {
        #[command(flatten)]
        fan: FanArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Frobenius morphism of degree m.
    Frobenius {
        #[command(flatten)]
        fan: FanArg,
        #[arg(long)]
        m: u64,
    },
}

pub enum Failure {
    Domain(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Domain(s)
    }
}

impl From<toricdm::Error> for Failure {
    fn from(e: toricdm::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// What a command prints: `text` for humans, the rest for `--json`.
pub struct Report {
    pub command: &'static str,
    pub fan: Option<FanFile>,
    pub result: Value,
    pub text: Vec<String>,
    pub expected: Option<Value>,
    pub matched: Option<bool>,
    /// Printed on standard error after the report; exit status 1.
    pub error: Option<String>,
}

impl Report {
    fn new(command: &'static str, fan: Option<&StackyFan>, result: Value, text: Vec<String>) -> Result<Self, Failure> {
        Ok(Report {
            command,
            fan: fan.map(FanFile::from_fan).transpose()?,
            result,
            text,
            expected: None,
            matched: None,
            error: None,
        })
    }
}

pub fn big(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn bigs(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(big).collect())
}

pub fn bundle_json(b: &LineBundle) -> Value {
    json!({ "name": b.to_string(), "k": bigs(b.k()), "l": bigs(b.l()) })
}

pub fn bundles_json<'a>(bs: impl IntoIterator<Item = &'a LineBundle>) -> Value {
    Value::Array(bs.into_iter().map(bundle_json).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| bigs(r)).collect())
}

fn csv(s: &str, what: &str) -> Result<Vec<BigInt>, Failure> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Failure::Domain(format!("{what}: `{t}` is not an integer"))))
        .collect()
}

fn bundle_arg(pic: &PicardGroup, k: &str, l: Option<&str>) -> Result<LineBundle, Failure> {
    let k = csv(k, "k")?;
    let l = match l {
        Some(l) => csv(l, "l")?,
        None => vec![BigInt::from(0); pic.r()],
    };
    Ok(pic.bundle(&k, &l)?)
}

fn parse_bundle(pic: &PicardGroup, text: &str) -> Result<LineBundle, Failure> {
    match text.split_once(';') {
        Some((k, l)) => bundle_arg(pic, k, Some(l)),
        None => bundle_arg(pic, text, None),
    }
}

fn load_valid(arg: &FanArg) -> Result<StackyFan, Failure> {
    let fan = fanfile::load(&arg.fan)?.to_fan_unchecked()?;
    let report = fan.validate();
    if !report.is_valid() {
        let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Domain(format!("invalid fan: {}", list.join("; "))));
    }
    Ok(fan)
}

fn validate(arg: &FanArg) -> Result<Report, Failure> {
    let fan = fanfile::load(&arg.fan)?.to_fan_unchecked()?;
    let report = fan.validate();
    let violations: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
    let mut text = Vec::new();
    if report.is_valid() {
        text.push(format!("valid: rank {}, {} rays, {} maximal cones", fan.n(), fan.s(), fan.cones().len()));
    } else {
        text.push(format!("invalid: {} violation(s)", violations.len()));
        text.extend(violations.iter().map(|v| format!("  {v}")));
    }
    text.extend(report.notices.iter().map(|n| format!("note: {n}")));
    let mut r = Report::new(
        "validate",
        None,
        json!({ "valid": report.is_valid(), "violations": violations, "notices": report.notices }),
        text,
    )?;
    r.fan = FanFile::from_fan(&fan).ok();
    if !report.is_valid() {
        r.error = Some("fan failed validation".into());
    }
    Ok(r)
}

fn picard(arg: &FanArg) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let g = pic.group();
    let divisors: Vec<LineBundle> = (0..fan.s()).map(|i| pic.divisor(i)).collect();
    let kc = pic.canonical_class();
    let mut text = vec![
        format!("Pic = {g}"),
        format!("generic stabilizer order = {}", pic.generic_stabilizer_order()),
        format!("K = {kc}"),
    ];
    let degrees = if g.free_rank() == 1 {
        let ds: Vec<BigInt> = divisors.iter().map(|d| pic.degree(d)).collect::<Result<_, _>>()?;
        text.push(format!("deg K = {}", pic.degree(&kc)?));
        Some(ds)
    } else {
        None
    };
    for (i, d) in divisors.iter().enumerate() {
        let deg = degrees.as_ref().map(|ds| format!(", degree {}", ds[i])).unwrap_or_default();
        text.push(format!("D{} = {d}{deg}", i + 1));
    }
    let result = json!({
        "group": g.to_string(),
        "free_rank": g.free_rank(),
        "torsion": bigs(g.torsion_invariants()),
        "generic_stabilizer_order": big(&pic.generic_stabilizer_order()),
        "canonical": bundle_json(&kc),
        "divisors": bundles_json(&divisors),
        "degrees": degrees.map(|d| bigs(&d)),
    });
    Report::new("picard", Some(&fan), result, text)
}

fn summands(arg: &FanArg, m: Option<u64>, k: Option<&str>, l: Option<&str>) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let Some(m) = m else {
        let ms = stabilization_modulus(&fan);
        let set = stable_summands(&pic);
        let mut text = vec![format!("stable modulus m* = {ms}"), format!("{} summands:", set.len())];
        text.extend(set.iter().map(|b| format!("  {b}")));
        let result = json!({ "modulus": big(&ms), "summands": bundles_json(&set) });
        return Report::new("summands", Some(&fan), result, text);
    };
    if m == 0 {
        return Err(Failure::Domain("m must be positive".into()));
    }
    let mb = BigInt::from(m);
    let l = match k {
        Some(k) => bundle_arg(&pic, k, l)?,
        None => pic.trivial(),
    };
    let chars = pushforward_by_characters(&pic, &l, &mb)?;
    let lattice = pushforward_by_lattice(&pic, &l, &mb)?;
    let support = chars.support();
    let only_chars: Vec<&LineBundle> = support.difference(&lattice).collect();
    let only_lattice: Vec<&LineBundle> = lattice.difference(&support).collect();
    let mut text = vec![
        format!("F_{m} push-forward of {l}: rank {}, {} distinct summands", chars.total_rank(), support.len()),
    ];
    text.extend(chars.entries().iter().map(|(b, c)| format!("  {c} x {b}")));
    if only_chars.is_empty() && only_lattice.is_empty() {
        text.push("character and lattice formulas agree".into());
    } else {
        text.extend(only_chars.iter().map(|b| format!("only in character formula: {b}")));
        text.extend(only_lattice.iter().map(|b| format!("only in lattice formula: {b}")));
    }
    let result = json!({
        "m": m,
        "bundle": bundle_json(&l),
        "rank": chars.total_rank(),
        "summands": chars.entries().iter().map(|(b, c)| json!({ "bundle": bundle_json(b), "multiplicity": c })).collect::<Vec<_>>(),
        "agree": only_chars.is_empty() && only_lattice.is_empty(),
        "only_characters": bundles_json(only_chars.iter().copied()),
        "only_lattice": bundles_json(only_lattice.iter().copied()),
    });
    let agree = only_chars.is_empty() && only_lattice.is_empty();
    let mut r = Report::new("summands", Some(&fan), result, text)?;
    if !agree {
        r.error = Some("push-forward formulas disagree".into());
    }
    Ok(r)
}

fn cohomology(arg: &FanArg, k: &str, l: Option<&str>) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let b = bundle_arg(&pic, k, l)?;
    let h = h_all(&pic, &b)?;
    let text = vec![format!("{b}"), h.iter().enumerate().map(|(i, x)| format!("h^{i} = {x}")).collect::<Vec<_>>().join(", ")];
    Report::new("cohomology", Some(&fan), json!({ "bundle": bundle_json(&b), "h": h }), text)
}

fn ext_cmd(arg: &FanArg, from: &str, to: &str) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let (a, b) = (parse_bundle(&pic, from)?, parse_bundle(&pic, to)?);
    let e = ext(&pic, &a, &b)?;
    let text = vec![
        format!("Ext^*({a}, {b})"),
        e.iter().enumerate().map(|(i, x)| format!("ext^{i} = {x}")).collect::<Vec<_>>().join(", "),
    ];
    Report::new("ext", Some(&fan), json!({ "from": bundle_json(&a), "to": bundle_json(&b), "ext": e }), text)
}

fn nef(arg: &FanArg, k: Option<&str>) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    if let Some(k) = k {
        let b = bundle_arg(&pic, k, None)?;
        let yes = is_nef(&pic, &b)?;
        let text = vec![format!("{b} is {}nef", if yes { "" } else { "not " })];
        return Report::new("nef", Some(&fan), json!({ "bundle": bundle_json(&b), "nef": yes }), text);
    }
    let all = stable_summands(&pic);
    let good = nef_summands(&pic)?;
    let bad: BTreeSet<LineBundle> = all.difference(&good).cloned().collect();
    let mut text = vec![format!("{} of {} summands have nef inverse:", good.len(), all.len())];
    text.extend(good.iter().map(|b| format!("  {b}")));
    if !bad.is_empty() {
        text.push("inverse not nef:".into());
        text.extend(bad.iter().map(|b| format!("  {b}")));
    }
    Report::new("nef", Some(&fan), json!({ "nef_summands": bundles_json(&good), "excluded": bundles_json(&bad) }), text)
}

fn check_collection(arg: &FanArg, bundle_args: &[String], strong: bool) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let mut bundles: Vec<LineBundle> = bundle_args.iter().map(|s| parse_bundle(&pic, s)).collect::<Result<_, _>>()?;
    bundles.sort();
    bundles.dedup();
    let t = ext_table(&pic, &bundles)?;
    let order = find_exceptional_ordering(&t, strong);
    let kind = if strong { "strong exceptional" } else { "exceptional" };
    let mut text = Vec::new();
    match &order {
        Some(o) => {
            text.push(format!("{kind} ordering of {} bundles:", o.len()));
            text.extend(o.iter().map(|&i| format!("  {}", t.bundles[i])));
        }
        None => text.push(format!("no {kind} ordering of these {} bundles", bundles.len())),
    }
    let proxy = match fullness_rank_proxy(&fan, bundles.len()) {
        Ok(p) => {
            text.push(format!(
                "rank proxy: {} bundles vs rank {} ({}; necessary for fullness, not sufficient)",
                p.size,
                p.k_rank,
                if p.passes { "equal" } else { "different" }
            ));
            json!({ "passes": p.passes, "k_rank": big(&p.k_rank), "size": p.size })
        }
        Err(e) => {
            text.push(format!("rank proxy unavailable: {e}"));
            Value::Null
        }
    };
    let ordered = order.map(|o| bundles_json(o.iter().map(|&i| &t.bundles[i])));
    let table: Vec<Vec<Value>> = t.table.iter().map(|row| row.iter().map(|e| json!(e)).collect()).collect();
    let result = json!({ "strong": strong, "ordering": ordered, "bundles": bundles_json(&t.bundles), "ext_table": table, "rank_proxy": proxy });
    Report::new("check-collection", Some(&fan), result, text)
}

fn scan(arg: &FanArg, size: usize, pool: Pool) -> Result<Report, Failure> {
    let fan = load_valid(arg)?;
    let pic = PicardGroup::new(&fan);
    let pool_set = match pool {
        Pool::Stable => stable_summands(&pic),
        Pool::Nef => nef_summands(&pic)?,
    };
    let found = scan_subsets(&pic, &pool_set, size)?;
    let mut text = vec![format!("{} of the {}-subsets of a pool of {} admit an exceptional ordering", found.len(), size, pool_set.len())];
    for s in &found {
        text.push(format!("  {{{}}}", s.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", ")));
    }
    let result = json!({ "pool": bundles_json(&pool_set), "size": size, "subsets": found.iter().map(bundles_json).collect::<Vec<_>>() });
    Report::new("scan", Some(&fan), result, text)
}

fn morphism_json(phi: &ToricMorphism) -> Value {
    json!({ "C": matrix_json(&phi.c), "D": matrix_json(&phi.d), "E": matrix_json(&phi.e), "F": matrix_json(&phi.f) })
}

fn morphism_text(phi: &ToricMorphism) -> Vec<String> {
    vec![format!("C = {}", phi.c), format!("D = {}", phi.d), format!("E = {}", phi.e), format!("F = {}", phi.f)]
}

fn construct(what: &Construct) -> Result<Report, Failure> {
    let (fan, mut extra, mut text, out): (StackyFan, Value, Vec<String>, Option<&PathBuf>) = match what {
        Construct::Root { fan, c, out } => {
            let src = load_valid(fan)?;
            let (f, phi) = root_stack_divisors(&src, &csv(c, "c")?)?;
            (f, json!({ "morphism": morphism_json(&phi) }), morphism_text(&phi), out.out.as_ref())
        }
        Construct::Rootlb { fan, bundles, e, out } => {
            let src = load_valid(fan)?;
            let pic = PicardGroup::new(&src);
            let bs: Vec<LineBundle> = bundles.iter().map(|s| parse_bundle(&pic, s)).collect::<Result<_, _>>()?;
            let root = root_stack_line_bundles(&src, &bs, &csv(e, "e")?)?;
            let mut text = morphism_text(&root.morphism);
            text.extend(root.roots.iter().zip(&bs).map(|(r, b)| format!("root of {b}: {r}")));
            let extra = json!({ "morphism": morphism_json(&root.morphism), "roots": bundles_json(&root.roots) });
            (root.fan, extra, text, out.out.as_ref())
        }
        Construct::Rigidify { fan, out } => {
            let src = load_valid(fan)?;
            let (f, phi) = rigidification(&src);
            (f, json!({ "morphism": morphism_json(&phi) }), morphism_text(&phi), out.out.as_ref())
        }
        Construct::Substack { fan, tau, out } => {
            let src = load_valid(fan)?;
            let idx: Vec<usize> = csv(tau, "tau")?
                .iter()
                .map(|x| match usize::try_from(x) {
                    Ok(i) if i >= 1 && i <= src.s() => Ok(i - 1),
                    _ => Err(Failure::Domain(format!("tau: ray {x} out of range 1..={}", src.s()))),
                })
                .collect::<Result<_, _>>()?;
            let sub = substack(&src, &idx)?;
            let rays: Vec<usize> = sub.rays.iter().map(|i| i + 1).collect();
            let text = vec![format!("remaining rays of the original fan: {rays:?}")];
            (sub.fan, json!({ "rays": rays }), text, out.out.as_ref())
        }
        Construct::Blowup { fan, cone, v, out } => {
            let src = load_valid(fan)?;
            let c = csv(cone, "cone")?;
            let idx: Vec<usize> = c.iter().filter_map(|x| usize::try_from(x).ok()).filter(|&i| i >= 1).map(|i| i - 1).collect();
            if idx.len() != 2 {
                return Err(Failure::Domain("cone must be two 1-based ray numbers".into()));
            }
            let bl = weighted_blowup(&src, [idx[0], idx[1]], &csv(v, "v")?)?;
            let mut text = vec![format!(
                "m = {}, h = ({}, {}), h_min = {}, b_new = {}, c = ({}, {})",
                bl.m, bl.h_coeffs[0], bl.h_coeffs[1], bl.h, bl.b_new, bl.c[0], bl.c[1]
            )];
            text.extend(morphism_text(&bl.morphism));
            let extra = json!({
                "m": big(&bl.m), "h_coeffs": bigs(&bl.h_coeffs), "h": big(&bl.h), "b_new": big(&bl.b_new),
                "c": bigs(&bl.c), "morphism": morphism_json(&bl.morphism),
            });
            (bl.fan, extra, text, out.out.as_ref())
        }
        Construct::Resolve { fan, out } => {
            let src = load_valid(fan)?;
            let steps = resolve_2d(&src)?;
            let last = steps.last().map_or_else(|| src.clone(), |s| s.fan.clone());
            let mut text = vec![format!("{} blow-up(s)", steps.len())];
            let mut js = Vec::new();
            for st in &steps {
                text.push(format!(
                    "  cone ({}, {}): insert ({}, {}) with b_new = {}",
                    st.cone[0] + 1,
                    st.cone[1] + 1,
                    st.v_new[0],
                    st.v_new[1],
                    st.b_new
                ));
                js.push(json!({ "cone": [st.cone[0] + 1, st.cone[1] + 1], "v_new": bigs(&st.v_new), "b_new": big(&st.b_new) }));
            }
            (last, json!({ "steps": js }), text, out.out.as_ref())
        }
        Construct::Frobenius { fan, m } => {
            let src = load_valid(fan)?;
            let phi = frobenius_morphism(&src, &BigInt::from(*m))?;
            (src, json!({ "morphism": morphism_json(&phi) }), morphism_text(&phi), None)
        }
    };
    let file = FanFile::from_fan(&fan)?;
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())? + "\n";
        std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))?;
        text.push(format!("wrote {}", path.display()));
    }
    text.push("fan:".into());
    text.push(serde_json::to_string(&file).map_err(|e| e.to_string())?);
    if let Value::Object(m) = &mut extra {
        m.insert("fan".into(), serde_json::to_value(&file).map_err(|e| e.to_string())?);
    }
    Report::new("construct", Some(&fan), extra, text)
}

fn print_report(r: &Report, json_mode: bool) {
    let body = if json_mode {
        let mut obj = serde_json::Map::new();
        obj.insert("command".into(), json!(r.command));
        obj.insert("fan".into(), r.fan.as_ref().map_or(Value::Null, |f| serde_json::to_value(f).unwrap_or(Value::Null)));
        obj.insert("result".into(), r.result.clone());
        if let Some(e) = &r.expected {
            obj.insert("expected".into(), e.clone());
        }
        if let Some(m) = r.matched {
            obj.insert("match".into(), json!(m));
        }
        serde_json::to_string_pretty(&Value::Object(obj)).unwrap_or_default() + "\n"
    } else {
        r.text.iter().map(|l| format!("{l}\n")).collect()
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.cmd {
        Cmd::Validate(f) => validate(f),
        Cmd::Picard(f) => picard(f),
        Cmd::Summands { fan, m, k, l, .. } => summands(fan, *m, k.as_deref(), l.as_deref()),
        Cmd::Cohomology { fan, k, l } => cohomology(fan, k, l.as_deref()),
        Cmd::Ext { fan, from, to } => ext_cmd(fan, from, to),
        Cmd::Nef { fan, k } => nef(fan, k.as_deref()),
        Cmd::CheckCollection { fan, bundles, strong } => check_collection(fan, bundles, *strong),
        Cmd::Scan { fan, size, pool } => scan(fan, *size, *pool),
        Cmd::Construct { what } => construct(what),
        Cmd::Reproduce { example } => reproduce::run(*example),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            print_report(&r, cli.json);
            if let Some(msg) = &r.error {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            } else if r.matched == Some(false) {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
