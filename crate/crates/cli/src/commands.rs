use std::fmt::Write as _;
use std::path::Path;

use orderlab_core::catalog::{self, CatalogEntry};
use orderlab_core::culayer::{self, AlgebraicCu};
use orderlab_core::grothendieck::{self, cone_member, Cone};
use orderlab_core::json::{
    budget_json, chain_json, cu_elem_json, elem_json, formal_sum_json, gr_json, instance_json, parse_cu_elem,
    parse_elem, parse_formal_sum, parse_gr, parse_instance, to_pretty, verdict_json,
};
use orderlab_core::relations::{check_property, try_check_property, Status};
use orderlab_core::tensorz::{self, oracle_leq};
use orderlab_core::verdict::Fact;
use orderlab_core::{arith, Instance, PropertyId, SearchBudget, Tri, Verdict};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{Command, Common, Format};
use crate::input::{budget, json_arg, load, Failure};
use crate::theorems::{self, status_json, Outcome, Theorem};

/// What a command prints and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

pub fn run(cmd: &Command) -> Result<Output, Failure> {
    let c = cmd.common();
    match cmd {
        Command::Check { instance, prop, .. } => check(instance, prop, c),
        Command::Report { instance, .. } => report(instance, c),
        Command::Gr { instance, elems, .. } => gr(instance, elems, c),
        Command::Tensorz { instance, lhs, rhs, interpolate, s, t, .. } => {
            tensorz_cmd(instance, lhs.as_deref(), rhs.as_deref(), interpolate.as_deref(), s.as_deref(), t.as_deref(), c)
        }
        Command::Cu { instance, axiom, thm, lhs, rhs, unit, .. } => {
            cu(instance, axiom.as_deref(), thm.as_deref(), lhs.as_deref(), rhs.as_deref(), *unit, c)
        }
        Command::Verify { thms, all, instances, .. } => verify(thms, *all, instances, c),
        Command::Catalog { write, check, .. } => catalog_cmd(write.as_deref(), check.as_deref(), c),
    }
}

fn emit(c: &Common, v: &Value, text: impl FnOnce() -> String, code: i32) -> Result<Output, Failure> {
    let stdout = match c.format {
        Format::Json => to_pretty(v),
        Format::Text => text(),
    };
    Ok(Output { stdout, code })
}

fn decided_code(t: Tri) -> i32 {
    if t.is_decided() {
        0
    } else {
        3
    }
}

// ---- text rendering ---------------------------------------------------------

fn fact_text(m: &Instance, f: &Fact) -> String {
    let (a, rel, b) = match f {
        Fact::Leq(a, b) => (a, "<=", b),
        Fact::NotLeq(a, b) => (a, "not <=", b),
        Fact::Eq(a, b) => (a, "=", b),
        Fact::Ne(a, b) => (a, "!=", b),
    };
    format!("{} {rel} {}", m.fmt_elem(a), m.fmt_elem(b))
}

/// `label: value` followed by the certificate, indented.
pub fn verdict_text(m: &Instance, label: &str, v: &Verdict) -> String {
    let c = &v.certificate;
    let mut s = format!("{label}: {}\n", v.value);
    if !c.summary.is_empty() {
        let _ = writeln!(s, "  {}", c.summary);
    }
    if !c.witness.is_empty() {
        let w: Vec<String> = c.witness.iter().map(|(k, e)| format!("{k} = {}", m.fmt_elem(e))).collect();
        let _ = writeln!(s, "  witness: {}", w.join(", "));
    }
    if let Some(n) = c.n {
        let _ = writeln!(s, "  n = {n}");
    }
    for f in &c.facts {
        let _ = writeln!(s, "  fact: {}", fact_text(m, f));
    }
    if let Some(k) = &c.combination {
        let _ = writeln!(s, "  combination: {k:?}");
    }
    if let Some(b) = c.bound {
        let _ = writeln!(s, "  budget exhausted: {}", b.as_str());
    }
    s
}

fn budget_text(b: &SearchBudget) -> String {
    format!("box {} nmax {} coeff-bound {} depth {}", b.sample_box, b.n_max, b.coeff_bound, b.chain_depth)
}

// ---- check / report ---------------------------------------------------------

fn parse_prop(s: &str) -> Result<PropertyId, Failure> {
    PropertyId::parse(s).ok_or_else(|| {
        let names: Vec<String> = PropertyId::ALL.iter().map(|p| p.kebab()).collect();
        Failure::input(format!("--prop: unknown property `{s}`; expected one of {}", names.join(", ")))
    })
}

fn check(arg: &str, prop: &str, c: &Common) -> Result<Output, Failure> {
    let m = load(arg)?;
    let b = budget(Some(&m), c)?;
    let p = parse_prop(prop)?;
    let v = try_check_property(&m, p, &b)?;
    let doc = json!({
        "instance": m.name,
        "property": p.kebab(),
        "budget": budget_json(&b),
        "verdict": verdict_json(&m, &v),
    });
    emit(c, &doc, || format!("instance: {}\n{}", m.name, verdict_text(&m, &p.kebab(), &v)), decided_code(v.value))
}

fn report(arg: &str, c: &Common) -> Result<Output, Failure> {
    let m = load(arg)?;
    let b = budget(Some(&m), c)?;
    let verdicts: Vec<(PropertyId, Verdict)> = PropertyId::ALL.par_iter().map(|&p| (p, check_property(&m, p, &b))).collect();
    let mut props = Map::new();
    for (p, v) in &verdicts {
        props.insert(p.name().into(), verdict_json(&m, v));
    }
    let group = grothendieck::gr_group(&m).ok();
    let tensor = tensorz::tensor_one_report(&m, &b.with_box(b.sample_box.min(4)));
    let doc = json!({
        "instance": m.name,
        "kind": m.kind(),
        "budget": budget_json(&b),
        "properties": props,
        "grothendieck": group.as_ref().map(|g| json!({
            "description": g.description, "rank": g.rank, "order": g.order, "basis": g.basis,
        })),
        "tensor_one": {
            "embedding": tensor.embedding.as_str(),
            "order_cancellative": tensor.order_cancellative.as_str(),
            "nearly_unperforated": tensor.nearly_unperforated.as_str(),
            "p_implies_unit": tensor.p_implies_unit.as_str(),
            "pairs": tensor.pairs,
        },
    });
    let text = || {
        let mut s = format!("instance: {} ({})\nbudget: {}\n", m.name, m.kind(), budget_text(&b));
        let w = verdicts.iter().map(|(p, _)| p.name().len()).max().unwrap_or(0);
        for (p, v) in &verdicts {
            let _ = writeln!(s, "  {:w$}  {}", p.name(), v.value);
        }
        if let Some(g) = &group {
            let _ = writeln!(s, "Grothendieck group: {}", g.description);
        }
        let _ = writeln!(
            s,
            "M⊗1: embedding {}, order cancellative {}, p implies unit {} ({} pairs)",
            tensor.embedding, tensor.order_cancellative, tensor.p_implies_unit, tensor.pairs
        );
        s
    };
    emit(c, &doc, text, 0)
}

// ---- gr ---------------------------------------------------------------------

const CONES: [Cone; 4] = [Cone::GrPlus, Cone::GrPlusPlus, Cone::AuGrPlus, Cone::AuGrPlusPlus];

fn gr(arg: &str, elems: &[String], c: &Common) -> Result<Output, Failure> {
    let m = load(arg)?;
    let b = budget(Some(&m), c)?;
    let g = grothendieck::gr_group(&m)?;
    let mut rows = Vec::new();
    let mut text_rows = Vec::new();
    for (i, e) in elems.iter().enumerate() {
        let v = json_arg(e, "elem")?;
        let x = parse_gr(&m, &v, &format!("--elem[{i}]"))?;
        let mut cones = Map::new();
        let mut line = format!("{}:", grothendieck::fmt_gr(&m, &x));
        for cone in CONES {
            let verdict = cone_member(&m, cone, &x, &b)?;
            let _ = write!(line, " {} {}", cone.as_str(), verdict.value);
            if let Some(n) = verdict.certificate.n {
                let _ = write!(line, " (n={n})");
            }
            cones.insert(cone.as_str().into(), verdict_json(&m, &verdict));
        }
        rows.push(json!({ "elem": gr_json(&m, &x), "cones": cones }));
        text_rows.push(line);
    }
    let doc = json!({
        "instance": m.name,
        "group": { "description": g.description, "rank": g.rank, "order": g.order, "basis": g.basis },
        "elements": rows,
    });
    emit(c, &doc, || format!("instance: {}\ngroup: {}\n{}", m.name, g.description, text_rows.iter().map(|r| format!("{r}\n")).collect::<String>()), 0)
}

// ---- tensorz ----------------------------------------------------------------

fn tensorz_cmd(
    arg: &str,
    lhs: Option<&str>,
    rhs: Option<&str>,
    interpolate: Option<&str>,
    s: Option<&str>,
    t: Option<&str>,
    c: &Common,
) -> Result<Output, Failure> {
    let m = load(arg)?;
    let b = budget(Some(&m), c)?;
    if let Some(x) = interpolate {
        let x = parse_elem(&m, &json_arg(x, "interpolate")?, "--interpolate")?;
        let q = |v: Option<&str>, flag: &str| -> Result<arith::Q, Failure> {
            let v = v.ok_or_else(|| Failure::input(format!("--{flag} is required with --interpolate")))?;
            arith::parse_q(v).map_err(|e| Failure::input(format!("--{flag}: {e}")))
        };
        let (s, t) = (q(s, "s")?, q(t, "t")?);
        let i = tensorz::interpolate_compact(&m, &x, &s, &t, &b)?;
        let checks: Vec<Value> = i.checks.iter().map(|(k, v)| json!([k, v.as_str()])).collect();
        let doc = json!({
            "instance": m.name, "x": elem_json(&m, &x), "s": arith::fmt_q(&s), "t": arith::fmt_q(&t),
            "n": i.n, "y": elem_json(&m, &i.y), "L": i.l, "trace": i.trace, "checks": checks,
            "verified": i.verified().as_str(),
        });
        let text = || {
            let mut o = format!("n = {}, y = {}", i.n, m.fmt_elem(&i.y));
            if let Some(l) = i.l {
                let _ = write!(o, ", L = {l}");
            }
            o.push('\n');
            for line in &i.trace {
                let _ = writeln!(o, "  {line}");
            }
            for (k, v) in &i.checks {
                let _ = writeln!(o, "  {k}: {v}");
            }
            o
        };
        return emit(c, &doc, text, decided_code(i.verified()));
    }
    let lhs = lhs.ok_or_else(|| Failure::input("tensorz needs --lhs or --interpolate"))?;
    let f = parse_formal_sum(&m, &json_arg(lhs, "lhs")?, "--lhs")?;
    let (v, chain, g) = match rhs {
        Some(r) => {
            let g = parse_formal_sum(&m, &json_arg(r, "rhs")?, "--rhs")?;
            let (v, chain) = oracle_leq(&m, &f, &g, &b);
            (v, chain, Some(g))
        }
        None => {
            let (v, chain) = tensorz::compact_test(&m, &f, &b)?;
            (v, chain, None)
        }
    };
    let doc = json!({
        "instance": m.name,
        "lhs": formal_sum_json(&m, &f),
        "rhs": g.as_ref().map(|g| formal_sum_json(&m, g)),
        "question": if g.is_some() { "leq" } else { "compact" },
        "verdict": verdict_json(&m, &v),
        "chain": chain.as_ref().map(|ch| chain_json(&m, ch)),
    });
    let text = || {
        let label = match &g {
            Some(g) => format!("{} <= {}", f.fmt_with(&m), g.fmt_with(&m)),
            None => format!("{} compact", f.fmt_with(&m)),
        };
        let mut o = verdict_text(&m, &label, &v);
        if let Some(ch) = &chain {
            for line in ch.render(&m) {
                let _ = writeln!(o, "  {line}");
            }
        }
        o
    };
    emit(c, &doc, text, decided_code(v.value))
}

// ---- cu ---------------------------------------------------------------------

fn cu(
    arg: &str,
    axiom: Option<&str>,
    thm: Option<&str>,
    lhs: Option<&str>,
    rhs: Option<&str>,
    unit: bool,
    c: &Common,
) -> Result<Output, Failure> {
    let m = load(arg)?;
    let b = budget(Some(&m), c)?;
    let s = AlgebraicCu::new(m.clone());
    if let Some(a) = axiom {
        let ax = theorems::parse_axiom(a).ok_or_else(|| Failure::input(format!("--axiom: unknown axiom `{a}`")))?;
        let v = culayer::satisfies_axiom(&s, ax, &b);
        let doc = json!({ "instance": s.name(), "axiom": ax.name(), "verdict": verdict_json(&m, &v) });
        return emit(c, &doc, || verdict_text(&m, ax.name(), &v), decided_code(v.value));
    }
    if let Some(id) = thm {
        let th = theorems::find(id)
            .filter(|t| ["T6.3", "T6.4", "T6.5"].contains(&t.id))
            .ok_or_else(|| Failure::input(format!("--thm: `{id}` is not one of T6.3, T6.4, T6.5")))?;
        let results = vec![run_job(th, &m, &b)];
        return render_verify(&results, c);
    }
    let (l, r) = match (lhs, rhs) {
        (Some(l), Some(r)) => (l, r),
        _ => return Err(Failure::input("cu needs --axiom, --thm, or both --lhs and --rhs")),
    };
    let u = parse_cu_elem(&m, &json_arg(l, "lhs")?, "--lhs")?;
    let w = parse_cu_elem(&m, &json_arg(r, "rhs")?, "--rhs")?;
    u.validate(&s, &b)?;
    w.validate(&s, &b)?;
    let v = if unit { culayer::cu_unit_leq(&s, &u, &w, &b)? } else { culayer::cu_leq(&s, &u, &w, b.chain_depth) };
    let doc = json!({
        "instance": s.name(),
        "lhs": cu_elem_json(&m, &u),
        "rhs": cu_elem_json(&m, &w),
        "question": if unit { "unit_leq" } else { "leq" },
        "verdict": verdict_json(&m, &v),
    });
    let label = format!("{} {} {}", u.fmt_with(&m), if unit { "⊗1 <=" } else { "<=" }, w.fmt_with(&m));
    emit(c, &doc, || verdict_text(&m, &label, &v), decided_code(v.value))
}

// ---- verify -----------------------------------------------------------------

/// One theorem on one instance.
#[derive(Clone, Debug)]
pub struct JobResult {
    pub theorem: &'static str,
    pub title: &'static str,
    pub instance: String,
    pub outcome: Option<Outcome>,
}

fn run_job(th: &Theorem, m: &Instance, b: &SearchBudget) -> JobResult {
    JobResult { theorem: th.id, title: th.title, instance: m.name.clone(), outcome: th.run(m, b) }
}

pub fn result_json(r: &JobResult) -> Value {
    let mut v = json!({ "theorem": r.theorem, "instance": r.instance });
    match &r.outcome {
        None => v["status"] = json!("NotApplicable"),
        Some(o) => {
            for (k, x) in status_json(&o.status).as_object().expect("object") {
                v[k] = x.clone();
            }
            v["details"] = Value::Object(o.details.clone());
        }
    }
    v
}

/// Runs theorems over instances concurrently; results keep input order.
pub fn verify_jobs(ths: &[&'static Theorem], instances: &[(Instance, SearchBudget)]) -> Vec<JobResult> {
    let jobs: Vec<(&Theorem, usize)> = ths.iter().flat_map(|t| (0..instances.len()).map(move |i| (*t, i))).collect();
    jobs.par_iter().map(|(t, i)| run_job(t, &instances[*i].0, &instances[*i].1)).collect()
}

fn verify(thms: &[String], all: bool, names: &[String], c: &Common) -> Result<Output, Failure> {
    let ths: Vec<&'static Theorem> = if all || thms.is_empty() {
        theorems::THEOREMS.iter().collect()
    } else {
        thms.iter()
            .map(|id| theorems::find(id).ok_or_else(|| Failure::input(format!("--thm: unknown theorem id `{id}`"))))
            .collect::<Result<_, _>>()?
    };
    let instances: Vec<Instance> = if names.is_empty() {
        catalog::all().into_iter().map(|e| e.instance).collect()
    } else {
        names.iter().map(|n| load(n)).collect::<Result<_, _>>()?
    };
    let with_budget = instances
        .into_iter()
        .map(|m| budget(Some(&m), c).map(|b| (m, b)))
        .collect::<Result<Vec<_>, _>>()?;
    let results = verify_jobs(&ths, &with_budget);
    render_verify(&results, c)
}

fn render_verify(results: &[JobResult], c: &Common) -> Result<Output, Failure> {
    let mut counts = [0usize; 5];
    for r in results {
        let k = match r.outcome.as_ref().map(|o| &o.status) {
            Some(Status::Pass) => 0,
            Some(Status::Fail) => 1,
            Some(Status::Vacuous(_)) => 2,
            Some(Status::Undecided) => 3,
            None => 4,
        };
        counts[k] += 1;
    }
    let code = if counts[1] > 0 { 1 } else { 0 };
    let doc = json!({
        "results": results.iter().map(result_json).collect::<Vec<_>>(),
        "summary": {
            "Pass": counts[0], "Fail": counts[1], "Vacuous": counts[2], "Undecided": counts[3], "NotApplicable": counts[4],
        },
    });
    let text = || {
        let wi = results.iter().map(|r| r.instance.len()).max().unwrap_or(0);
        let mut s = String::new();
        for r in results {
            let Some(o) = &r.outcome else { continue };
            let _ = write!(s, "{:6} {:wi$}  {}", r.theorem, r.instance, o.status);
            if o.status == Status::Fail {
                let _ = write!(s, "\n  {}", serde_json::to_string(&o.details).expect("serializes"));
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "Pass {}  Fail {}  Vacuous {}  Undecided {}  not applicable {}",
            counts[0], counts[1], counts[2], counts[3], counts[4]
        );
        s
    };
    emit(c, &doc, text, code)
}

// ---- catalog ----------------------------------------------------------------

/// The verdict table recorded for each shipped instance: every property.
pub fn expected_verdicts(m: &Instance, b: &SearchBudget) -> Value {
    let mut o = Map::new();
    for p in PropertyId::ALL {
        o.insert(p.kebab(), json!(check_property(m, p, b).value.as_str()));
    }
    Value::Object(o)
}

fn index_entry(e: &CatalogEntry, b: &SearchBudget) -> Value {
    json!({
        "name": e.name,
        "file": format!("{}.json", e.name),
        "note": e.note,
        "curated": e.curated,
        "expected": expected_verdicts(&e.instance, b),
    })
}

fn catalog_budget(c: &Common) -> Result<SearchBudget, Failure> {
    budget(None, c)
}

fn write_err(p: &Path, e: std::io::Error) -> Failure {
    Failure { code: 1, message: format!("{}: {e}", p.display()) }
}

fn catalog_cmd(write: Option<&str>, check: Option<&str>, c: &Common) -> Result<Output, Failure> {
    let entries = catalog::all();
    let b = catalog_budget(c)?;
    if let Some(dir) = write {
        let dir = Path::new(dir);
        std::fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
        let index: Vec<Value> = entries.par_iter().map(|e| index_entry(e, &b)).collect();
        for e in &entries {
            let v = instance_json(&e.instance).expect("catalog instances serialize");
            let p = dir.join(format!("{}.json", e.name));
            std::fs::write(&p, to_pretty(&v)).map_err(|err| write_err(&p, err))?;
        }
        let doc = json!({ "budget": budget_json(&b), "entries": index });
        let p = dir.join("index.json");
        std::fs::write(&p, to_pretty(&doc)).map_err(|err| write_err(&p, err))?;
        let summary = json!({ "written": entries.len(), "directory": dir.display().to_string() });
        return emit(c, &summary, || format!("wrote {} instances and index.json to {}\n", entries.len(), dir.display()), 0);
    }
    if let Some(dir) = check {
        let mismatches = check_catalog(Path::new(dir))?;
        let code = if mismatches.is_empty() { 0 } else { 1 };
        let doc = json!({ "checked": dir, "mismatches": mismatches });
        let text = || {
            if mismatches.is_empty() {
                "catalog matches fresh runs\n".to_string()
            } else {
                mismatches.iter().map(|m| format!("{m}\n")).collect()
            }
        };
        return emit(c, &doc, text, code);
    }
    let list: Vec<Value> = entries.iter().map(|e| json!({ "name": e.name, "kind": e.instance.kind(), "note": e.note })).collect();
    let w = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    emit(c, &Value::Array(list), || entries.iter().map(|e| format!("{:w$}  {}\n", e.name, e.note)).collect(), 0)
}

/// Reads `index.json` under `dir`, re-parses every file, checks the
/// round trip and recomputes every expected verdict.
pub fn check_catalog(dir: &Path) -> Result<Vec<String>, Failure> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())));
    let index: Value = serde_json::from_str(&read(&dir.join("index.json"))?)
        .map_err(|e| Failure::input(format!("index.json: {e}")))?;
    let b = match index.get("budget") {
        Some(v) => SearchBudget::default().apply_overrides(&budget_spec(v)).map_err(Failure::input)?,
        None => SearchBudget::default(),
    };
    let entries = index["entries"].as_array().ok_or_else(|| Failure::input("index.json: /entries is not an array"))?;
    let per: Vec<Result<Vec<String>, Failure>> = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let file = e["file"].as_str().ok_or_else(|| Failure::input(format!("index.json: /entries/{i}/file")))?;
            let text = read(&dir.join(file))?;
            let v: Value = serde_json::from_str(&text).map_err(|err| Failure::input(format!("{file}: {err}")))?;
            let m = parse_instance(&v).map_err(|err| Failure::input(format!("{file}: parse error {err}")))?;
            let mut out = Vec::new();
            if instance_json(&m).as_ref() != Some(&v) {
                out.push(format!("{file}: serialization does not round-trip"));
            }
            let fresh = expected_verdicts(&m, &b);
            if fresh != e["expected"] {
                out.push(format!("{file}: expected {} but fresh run gives {}", e["expected"], fresh));
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per {
        all.extend(r?);
    }
    Ok(all)
}

fn budget_spec(v: &Value) -> String {
    let keys = ["box", "nmax", "coeff_bound", "depth"];
    keys.iter().filter_map(|k| v.get(*k).map(|x| format!("{k}={x}"))).collect::<Vec<_>>().join(",")
}
