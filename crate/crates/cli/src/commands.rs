use serde_json::{json, Map, Value};
use slk_core::arboreal::{build_complex_from, SignConvention, DEFAULT_BOUND};
use slk_core::ehp::{even_les_report, odd_iso_report, ComparisonReport, LesForm};
use slk_core::fieldlin::Prime;
use slk_core::forest::{orbit_census_of, PermGroupSpec, Tree};
use slk_core::layers::{d1_matrices, e1_page, layer_dims, layer_dims_for, SSPage};
use slk_core::opbasis::{layer_basis_sphere_window, poincare, poincare_by_weight, slp_basis, Policy};
use slk_core::shiftedlie::GradedVS;
use slk_core::GradedDims;

use crate::cache::TreeCache;
use crate::format::{dims_json, Document, Table};
use crate::{Cli, Command, Convention, EhpMode, Failure};

/// Largest leaf count the CLI will enumerate trees for.
pub const MAX_TREE_LEAVES: u32 = 8;

struct Ctx {
    p: Prime,
    policy: Policy,
    lo: i64,
    hi: i64,
    cache: TreeCache,
}

impl Ctx {
    fn doc(&self, object: String, dims: GradedDims) -> Document {
        Document::new(self.p.get(), object, self.policy.name().to_string(), dims)
    }
}

/// Runs a parsed command line and returns its document.
pub fn execute(cli: &Cli) -> Result<Document, Failure> {
    let c = &cli.common;
    let p = Prime::new(c.prime).map_err(|e| Failure::from_core("fieldlin", e))?;
    let policy: Policy = c.policy.parse().map_err(|e| Failure::from_core("opbasis", e))?;
    let lo = c.min_degree.unwrap_or(i64::MIN);
    if lo > c.max_degree {
        return Err(Failure::usage("cli", format!("empty degree window {lo}..={}", c.max_degree)));
    }
    let cache = match (&c.cache_dir, c.no_cache) {
        (Some(d), false) => TreeCache::new(Some(d.clone())),
        _ => TreeCache::disabled(),
    };
    let ctx = Ctx { p, policy, lo, hi: c.max_degree, cache };
    match &cli.command {
        Command::Trees { n, k, group } => trees(&ctx, *n, *k, group.as_deref(), false),
        Command::Census { n, k, group } => trees(&ctx, *n, *k, group.as_deref(), true),
        Command::Complex { n, convention } => complex(&ctx, *n, *convention),
        Command::Layer { n, sphere, group, page } => layer(&ctx, *n, *sphere, group.as_deref(), *page),
        Command::Basis { gens, n, sphere, weight_cap } => {
            basis(&ctx, gens.as_deref(), *n, *sphere, *weight_cap)
        }
        Command::Poincare { gens, by_weight, weight_cap } => {
            poincare_doc(&ctx, gens, *by_weight, *weight_cap)
        }
        Command::Ehp { n, sphere, mode, form } => ehp(&ctx, *n, *sphere, *mode, form),
    }
}

fn tree_levels(ctx: &Ctx, module: &'static str, n: u32) -> Result<Vec<Vec<Tree>>, Failure> {
    if !(2..=MAX_TREE_LEAVES).contains(&n) {
        return Err(Failure {
            module,
            code: if n < 2 { crate::EXIT_USAGE } else { crate::EXIT_UNSUPPORTED },
            message: format!("tree enumeration covers 2 <= n <= {MAX_TREE_LEAVES}, got {n}"),
        });
    }
    Ok(ctx.cache.trees(n).0)
}

fn group(module: &'static str, name: &str, n: u32) -> Result<PermGroupSpec, Failure> {
    PermGroupSpec::by_name(name, n).map_err(|e| Failure::from_core(module, e))
}

fn trees(ctx: &Ctx, n: u32, k: Option<usize>, g: Option<&str>, census: bool) -> Result<Document, Failure> {
    const M: &str = "forest";
    let levels = tree_levels(ctx, M, n)?;
    if let Some(k) = k {
        if k == 0 || k > levels.len() {
            return Err(Failure::usage(M, format!("k must lie in 1..={} for n = {n}", levels.len())));
        }
    }
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..=levels.len()).collect(),
    };
    let scope = match k {
        Some(k) => format!("trees n={n} k={k}"),
        None => format!("trees n={n}"),
    };
    let group_name = match (g, census) {
        (Some(g), _) => Some(g.to_string()),
        (None, true) => Some(format!("sigma{n}")),
        (None, false) => None,
    };
    let mut dims = GradedDims::new();
    let Some(name) = group_name else {
        for &k in &ks {
            for t in &levels[k - 1] {
                dims.add_label(-(k as i64), t.to_string());
            }
        }
        return Ok(ctx.doc(scope, dims));
    };
    let g = group(M, &name, n)?;
    let mut rows = Vec::new();
    let mut table = Table::new(&["degree", "representative", "stabilizer_order", "orbit_size"]);
    for &k in &ks {
        let degree = -(k as i64);
        for r in orbit_census_of(&levels[k - 1], &g).map_err(|e| Failure::from_core(M, e))? {
            let rep = r.representative.to_string();
            dims.add_label(degree, rep.clone());
            table.push(vec![
                degree.to_string(),
                rep.clone(),
                r.stabilizer_order.to_string(),
                r.orbit_size.to_string(),
            ]);
            rows.push(json!({
                "degree": degree,
                "representative": rep,
                "stabilizer_order": r.stabilizer_order,
                "orbit_size": r.orbit_size,
            }));
        }
    }
    let mut doc = ctx
        .doc(format!("orbits of {name} on {scope}"), dims)
        .with("group_order", json!(g.order()))
        .with("orbits", Value::Array(rows));
    doc.table = Some(table);
    Ok(doc)
}

/// Signed representative in `(-p/2, p/2]`.
fn signed(v: u32, p: Prime) -> i64 {
    let q = p.get() as i64;
    let v = v as i64;
    if v > q / 2 {
        v - q
    } else {
        v
    }
}

fn complex(ctx: &Ctx, n: u32, convention: Convention) -> Result<Document, Failure> {
    const M: &str = "arboreal";
    if n > DEFAULT_BOUND {
        return Err(Failure::from_core(
            M,
            slk_core::Error::Bound { what: "leaf count of the tree complex", bound: DEFAULT_BOUND as usize },
        ));
    }
    let levels = tree_levels(ctx, M, n)?;
    let convention = match convention {
        Convention::EdgePreorder => SignConvention::EdgePreorder,
        Convention::EdgeClade => SignConvention::EdgeClade,
        Convention::SplitVertex => SignConvention::SplitVertexIndex,
    };
    let c = build_complex_from(n, ctx.p, convention, levels).map_err(|e| Failure::from_core(M, e))?;
    let h = c.homology().map_err(|e| Failure::from_core(M, e))?;
    let mut cells = Map::new();
    let mut diffs = Vec::new();
    for d in c.degrees() {
        cells.insert(d.to_string(), json!(c.labels(d)));
        if let Some(m) = c.differential(d) {
            let entries: Vec<Value> =
                m.triplets().map(|(r, col, v)| json!([r, col, signed(v, ctx.p)])).collect();
            diffs.push(json!({
                "source": d,
                "target": d - 1,
                "rows": m.rows(),
                "cols": m.cols(),
                "entries": entries,
            }));
        }
    }
    Ok(ctx
        .doc(format!("tree complex n={n}"), h.window(ctx.lo, ctx.hi))
        .with("convention", json!(format!("{convention:?}")))
        .with("euler_characteristic", json!(c.euler_characteristic()))
        .with("cells", Value::Object(cells))
        .with("differentials", Value::Array(diffs)))
}

fn page_json(page: &SSPage) -> Value {
    let mut columns = Map::new();
    for c in &page.columns {
        columns.insert(
            c.tree.to_string(),
            json!({ "k": c.k, "stabilizer_order": c.stabilizer_order, "entries": dims_json(&c.entries) }),
        );
    }
    let d1: Vec<Value> = page
        .d1
        .iter()
        .map(|b| {
            json!({
                "s": b.s,
                "source": page.columns[b.source].tree.to_string(),
                "target": page.columns[b.target].tree.to_string(),
                "scalar": signed(b.scalar, page.prime),
            })
        })
        .collect();
    let e2: Vec<Value> = page
        .e2
        .iter()
        .filter(|(_, &r)| r > 0)
        .map(|(&(k, s), &r)| json!({ "k": k, "s": s, "degree": page.total_degree(k, s), "rank": r }))
        .collect();
    json!({ "columns": columns, "d1": d1, "e2": e2 })
}

fn layer(ctx: &Ctx, n: u32, j: i64, g: Option<&str>, with_page: bool) -> Result<Document, Failure> {
    const M: &str = "layers";
    let core = |e| Failure::from_core(M, e);
    let (dims, object) = match g {
        Some(name) => {
            let g = group(M, name, n)?;
            (layer_dims_for(&g, j, ctx.p, ctx.hi).map_err(core)?, format!("D_{n}(S^{j}) over {name}"))
        }
        None => (layer_dims(n, j, ctx.p, ctx.hi).map_err(core)?, format!("D_{n}(S^{j})")),
    };
    let mut doc = ctx.doc(object, dims.window(ctx.lo, ctx.hi));
    if with_page && n >= 2 {
        let g = match g {
            Some(name) => group(M, name, n)?,
            None => PermGroupSpec::symmetric(n).map_err(core)?,
        };
        let page = d1_matrices(&e1_page(n, &g, j, ctx.p, ctx.hi).map_err(core)?).map_err(core)?;
        doc = doc.with("page", page_json(&page));
    }
    Ok(doc)
}

fn parse_gens(spec: &str) -> Result<GradedVS, Failure> {
    if spec.trim().is_empty() {
        return GradedVS::new(Vec::new()).map_err(|e| Failure::from_core("shiftedlie", e));
    }
    GradedVS::parse(spec).map_err(|e| Failure::from_core("shiftedlie", e))
}

fn basis(
    ctx: &Ctx,
    gens: Option<&str>,
    n: Option<usize>,
    sphere: Option<i64>,
    cap: Option<usize>,
) -> Result<Document, Failure> {
    const M: &str = "opbasis";
    let core = |e| Failure::from_core(M, e);
    match (gens, n, sphere) {
        (Some(spec), None, None) => {
            let vs = parse_gens(spec)?;
            let (elements, truncated) =
                slp_basis(&vs, ctx.lo, ctx.hi, ctx.p, ctx.policy, cap).map_err(core)?;
            let mut dims = GradedDims::new();
            let mut table = Table::new(&["degree", "weight", "label"]);
            let mut list = Vec::new();
            for e in &elements {
                dims.add_label(e.degree, e.label.clone());
                table.push(vec![e.degree.to_string(), e.weight.to_string(), e.label.clone()]);
                list.push(json!({ "degree": e.degree, "weight": e.weight, "label": e.label }));
            }
            dims.truncated = truncated;
            dims.certified = !truncated;
            let mut doc =
                ctx.doc(format!("free algebra on {spec}"), dims).with("elements", Value::Array(list));
            doc.table = Some(table);
            Ok(doc)
        }
        (None, Some(n), Some(j)) => {
            let dims = layer_basis_sphere_window(n, j, ctx.p, ctx.policy, ctx.lo, ctx.hi).map_err(core)?;
            Ok(ctx.doc(format!("D_{n}(S^{j})"), dims))
        }
        _ => Err(Failure::usage(M, "basis takes either --gens or both --n and --sphere")),
    }
}

fn poincare_doc(ctx: &Ctx, gens: &str, by_weight: bool, cap: Option<usize>) -> Result<Document, Failure> {
    const M: &str = "opbasis";
    let core = |e| Failure::from_core(M, e);
    let vs = parse_gens(gens)?;
    let mut dims = poincare(&vs, ctx.lo, ctx.hi, ctx.p, ctx.policy, cap).map_err(core)?;
    dims.labels.clear();
    let mut doc = ctx.doc(format!("free algebra on {gens}"), dims);
    if by_weight {
        let split = poincare_by_weight(&vs, ctx.lo, ctx.hi, ctx.p, ctx.policy, cap).map_err(core)?;
        let weights: Map<String, Value> = split.iter().map(|(w, d)| (w.to_string(), dims_json(d))).collect();
        doc = doc.with("weights", Value::Object(weights));
    }
    Ok(doc)
}

fn report_doc(ctx: &Ctx, object: String, extra: Vec<(&str, Value)>, r: &ComparisonReport) -> Document {
    let mut dims = GradedDims::new();
    let mut table = Table::new(&["degree", "lhs", "rhs_degree", "rhs", "agree"]);
    let mut rows = Vec::new();
    for row in &r.rows {
        if row.lhs > 0 {
            dims.add(row.degree, row.lhs);
        }
        table.push(vec![
            row.degree.to_string(),
            row.lhs.to_string(),
            (row.degree + r.shift).to_string(),
            row.rhs.to_string(),
            if row.agree { "yes" } else { "NO" }.to_string(),
        ]);
        rows.push(json!({ "degree": row.degree, "lhs": row.lhs, "rhs": row.rhs, "agree": row.agree }));
    }
    dims.certified = r.oracle_agrees == Some(true);
    let mut doc = ctx.doc(object, dims);
    for (k, v) in extra {
        doc = doc.with(k, v);
    }
    doc = doc
        .with("lhs", json!(r.lhs))
        .with("rhs", json!(r.rhs))
        .with("shift", json!(r.shift))
        .with("agrees", json!(r.agrees()))
        .with("first_discrepancy", json!(r.first_discrepancy))
        .with("oracle_agrees", json!(r.oracle_agrees))
        .with("rows", Value::Array(rows));
    doc.table = Some(table);
    doc
}

fn ehp(ctx: &Ctx, m: usize, sphere: i64, mode: EhpMode, form: &str) -> Result<Document, Failure> {
    const M: &str = "ehp";
    let core = |e| Failure::from_core(M, e);
    let lo = (ctx.lo != i64::MIN).then_some(ctx.lo);
    match mode {
        EhpMode::OddIso => {
            let r = odd_iso_report(m, sphere, ctx.p, lo, ctx.hi, ctx.policy).map_err(core)?;
            let extra = vec![("mode", json!("odd-iso"))];
            Ok(report_doc(ctx, format!("odd-iso m={m} n={sphere}"), extra, &r))
        }
        EhpMode::EvenLes => {
            let form: LesForm = form.parse().map_err(core)?;
            if sphere.rem_euclid(2) != 0 {
                return Err(Failure::usage(M, format!("even-les needs an even sphere, got {sphere}")));
            }
            let l = sphere / 2;
            let r = even_les_report(m, l, ctx.p, lo, ctx.hi, ctx.policy, form).map_err(core)?;
            let extra = vec![("mode", json!("even-les")), ("form", json!(form.name()))];
            Ok(report_doc(ctx, format!("even-les m={m} l={l}"), extra, &r))
        }
    }
}
