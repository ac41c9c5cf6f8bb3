//! One line per acceptance criterion: PASS or FAIL, wall time, detail.
//! Runs without the libtest harness so the lines always show.

use std::process::Command;
use std::time::{Duration, Instant};

use orderlab_core::arith::qf;
use orderlab_core::catalog;
use orderlab_core::grothendieck::{cone_member, Cone};
use orderlab_core::relations::{rel_p, rel_s, Status};
use orderlab_core::tensorz::{interpolate_compact, unit_leq};
use orderlab_core::{Elem, Instance, SearchBudget, Tri};
use orderlab_cli::theorems::{self, oracle_units, p56_check, sandwich};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_orderlab");

fn cli_json(args: &[&str]) -> (Value, i32) {
    let out = Command::new(BIN).args(args).args(["--format", "json"]).output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (v, out.status.code().unwrap_or(-1))
}

fn cat(name: &str) -> Instance {
    catalog::lookup(name).expect("catalog entry").instance
}

fn v(c: &[i64]) -> Elem {
    Elem::Vec(c.to_vec())
}

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1() -> Check {
    let (doc, code) = cli_json(&["check", "cuz", "--prop", "preminimal"]);
    let w = &doc["verdict"]["certificate"]["witness"];
    ensure(code == 0 && doc["verdict"]["value"] == "No", format!("exit {code}, verdict {}", doc["verdict"]["value"]))?;
    let got = [&w["x"], &w["y"], &w["v"], &w["w"]];
    let want: [Value; 4] = ["compact:1".into(), "soft:1".into(), "soft:1".into(), "compact:1".into()];
    ensure(got.iter().zip(&want).all(|(g, w)| *g == w), format!("witness {w}"))?;
    let facts = doc["verdict"]["certificate"]["facts"].to_string();
    ensure(facts.contains("not <="), "no failing comparison in the certificate")?;
    Ok(format!("witness (1, 1', 1', 1), facts {facts}"))
}

fn c2() -> Check {
    let (doc, code) = cli_json(&["check", "cone33", "--prop", "almost-unperforated", "--box", "8"]);
    let cert = &doc["verdict"]["certificate"];
    ensure(code == 0 && doc["verdict"]["value"] == "No", "almost-unperforated is not No")?;
    ensure(
        cert["witness"]["x"] == serde_json::json!([0, 1]) && cert["witness"]["y"] == serde_json::json!([2, 0]) && cert["n"] == 2,
        format!("certificate {cert}"),
    )?;
    let (gr, _) = cli_json(&["gr", "cone33", "--elem", "[2,-1]"]);
    let cones = &gr["elements"][0]["cones"];
    ensure(cones["GrPlus"]["value"] == "No", "(2,-1) in GrPlus")?;
    ensure(cones["Au(GrPlus)"]["value"] == "Yes" && cones["Au(GrPlus)"]["certificate"]["n"] == 2, format!("Au cone {}", cones["Au(GrPlus)"]))?;
    Ok("x=(0,1), y=(2,0), n=2; (2,-1): GrPlus No, Au(GrPlus) Yes with n=2".into())
}

fn c3() -> Check {
    let m = cat("theta");
    let b = SearchBudget::default();
    let mut mismatches = Vec::new();
    for a in -10..=10 {
        for c in -10..=10 {
            let got = cone_member(&m, Cone::AuGrPlus, &v(&[a, c]), &b).map_err(|e| e.to_string())?.value;
            if got != Tri::from_bool(a >= 0 && c >= 0) {
                mismatches.push(format!("({a},{c}) {got}"));
            }
        }
    }
    ensure(mismatches.is_empty(), format!("box differs from N x N at {mismatches:?}"))?;
    let g = v(&[2, -1]);
    let pp = cone_member(&m, Cone::GrPlusPlus, &g, &b).map_err(|e| e.to_string())?.value;
    let au = cone_member(&m, Cone::AuGrPlus, &g, &b).map_err(|e| e.to_string())?.value;
    ensure(pp == Tri::Yes && au == Tri::No, format!("(2,-1): GrPlusPlus {pp}, Au(GrPlus) {au}"))?;
    Ok("441 box points equal N x N; (2,-1) in GrPlusPlus, not in Au(GrPlus)".into())
}

fn c4() -> Check {
    let m = cat("ex54");
    let b = SearchBudget::default();
    let (x, y) = (Elem::pair(v(&[3]), v(&[1])), Elem::pair(v(&[4]), v(&[1])));
    let leq = m.leq_tri(&x, &y, &b);
    let s = rel_s(&m, &x, &y, &b).value;
    let p = rel_p(&m, &x, &y, &b);
    let u = unit_leq(&m, &x, &y, &b).value;
    ensure(
        leq == Tri::No && s == Tri::No && p.value == Tri::Yes && p.certificate.n == Some(2) && u == Tri::Yes,
        format!("leq {leq}, rel_s {s}, rel_p {} (n={:?}), unit_leq {u}", p.value, p.certificate.n),
    )?;
    let (o, depth) = oracle_units(&m, &x, &y, &b);
    ensure(o == Tri::Yes && depth.is_some_and(|d| d <= 8), format!("oracle {o}, depth {depth:?}"))?;
    Ok(format!("leq No, rel_s No, rel_p Yes (n=2), unit_leq Yes, replayed chain of depth {}", depth.unwrap()))
}

fn c5() -> Check {
    let b = SearchBudget::default();
    let square: Vec<Elem> = (0..=5).flat_map(|a| (0..=5).map(move |c| v(&[a, c]))).collect();
    let num: Vec<Elem> = (0..=12).filter(|&n| n != 1).map(|n| v(&[n])).collect();
    let sum: Vec<Elem> = num.iter().flat_map(|x| (0..=5).map(move |k| Elem::pair(x.clone(), v(&[k])))).collect();
    let mut cases: Vec<(Instance, Vec<Elem>)> = vec![
        (Instance::free(2).named("N^2"), square),
        (cat("num2_3"), num),
        (cat("ex54"), sum),
    ];
    for e in catalog::small_monoids(3) {
        let elems = e.instance.carrier().expect("finite carrier");
        cases.push((e.instance, elems));
    }
    let (mut pairs, mut confirmed, mut oracle) = (0, 0, 0);
    for (m, elems) in &cases {
        let r = sandwich(m, elems, &b);
        ensure(r.tally.violations.is_empty(), format!("{}: {:?}", m.name, r.tally.violations))?;
        pairs += r.pairs;
        confirmed += r.tally.confirmed;
        oracle += r.oracle_confirmed;
    }
    Ok(format!("{} instances, {pairs} pairs, {confirmed} implications confirmed, {oracle} strict pairs replayed by the oracle, 0 violations", cases.len()))
}

fn c6() -> Check {
    let m = Instance::free(2);
    let b = SearchBudget::default().with_depth(6);
    let elems: Vec<Elem> = (0..=5).flat_map(|a| (0..=5).map(move |c| v(&[a, c]))).collect();
    let (t, yes, missing) = p56_check(&m, &elems, &b, true).map_err(|o| format!("hypotheses not met: {}", o.status))?;
    ensure(t.violations.is_empty(), format!("{:?}", t.violations))?;
    ensure(t.undecided == 0 && missing == 0, format!("{} undecided, {missing} without oracle chain", t.undecided))?;
    let mut leq_mismatch = 0;
    for x in &elems {
        for y in &elems {
            if m.leq_tri(x, y, &b) != rel_p(&m, x, y, &b).value {
                leq_mismatch += 1;
            }
        }
    }
    ensure(leq_mismatch == 0, format!("{leq_mismatch} pairs where <= and <=_p differ"))?;
    Ok(format!("{} pairs agree on unit_leq, <=_p and <=; {yes} oracle chains at depth <= 6 agree", t.confirmed))
}

fn verify_over_catalog(ids: &[&str]) -> Result<(usize, usize), String> {
    let instances: Vec<(Instance, SearchBudget)> = catalog::all().into_iter().map(|e| (e.instance.clone(), e.instance.budget)).collect();
    let ths: Vec<_> = ids.iter().map(|id| theorems::find(id).expect("theorem id")).collect();
    let results = orderlab_cli::commands::verify_jobs(&ths, &instances);
    let fails: Vec<String> = results
        .iter()
        .filter(|r| r.outcome.as_ref().is_some_and(|o| o.status == Status::Fail))
        .map(|r| format!("{} on {}", r.theorem, r.instance))
        .collect();
    ensure(fails.is_empty(), format!("Fail: {fails:?}"))?;
    let pass = results.iter().filter(|r| r.outcome.as_ref().is_some_and(|o| o.status == Status::Pass)).count();
    Ok((results.len(), pass))
}

fn c7() -> Check {
    let (n, pass) = verify_over_catalog(&["P3.8", "T3.10"])?;
    Ok(format!("{n} theorem-instance runs, {pass} Pass, 0 Fail"))
}

fn c8() -> Check {
    let instances: Vec<Instance> = catalog::all().into_iter().map(|e| e.instance).collect();
    let th = theorems::find("P4.3").unwrap();
    let mut not_pass = Vec::new();
    for m in &instances {
        let b = m.budget.with_n_max(24);
        match th.run(m, &b) {
            Some(o) if o.status == Status::Pass => {}
            o => not_pass.push(format!("{}: {:?}", m.name, o.map(|o| o.status))),
        }
    }
    ensure(not_pass.is_empty(), format!("{not_pass:?}"))?;
    Ok(format!("Pass on all {} catalog entries with n <= 24", instances.len()))
}

fn c9() -> Check {
    let th = theorems::find("T4.9").unwrap();
    let mut notes = Vec::new();
    for name in ["nat", "num2_3", "cone33"] {
        let m = cat(name);
        let o = th.run(&m, &m.budget).ok_or(format!("{name}: not wired"))?;
        ensure(o.status == Status::Pass, format!("{name}: {} {:?}", o.status, o.details.get("violations")))?;
        let confirmed = o.details["confirmed"].as_u64().unwrap_or(0);
        ensure(confirmed >= 101, format!("{name}: only {confirmed} agreeing evaluations"))?;
        notes.push(format!("{name} {confirmed}"));
    }
    Ok(format!("both paths agree on generators, 100 seeded random sums and hull samples ({})", notes.join(", ")))
}

fn c10() -> Check {
    let m = cat("qplus");
    let i = interpolate_compact(&m, &Elem::Rat(qf(1, 1)), &qf(1, 2), &qf(3, 4), &SearchBudget::default()).map_err(|e| e.to_string())?;
    ensure(
        i.l == Some(8) && i.n == 5 && i.y == Elem::Rat(qf(1, 8)) && i.verified() == Tri::Yes,
        format!("L={:?} n={} y={}", i.l, i.n, m.fmt_elem(&i.y)),
    )?;
    let sandwich = i.trace.iter().any(|t| t.contains("Ls = 4 < n = 5 < (L-1)t = 21/4"));
    ensure(sandwich, format!("trace {:?}", i.trace))?;
    Ok("L=8, n=5, y=1/8, Ls=4 < 5 < 21/4, all four inequalities re-verified".into())
}

fn c11() -> Check {
    let th = theorems::find("T6.5").unwrap();
    for name in ["qplus", "zero_top"] {
        let m = cat(name);
        let o = th.run(&m, &m.budget).unwrap();
        let all_yes = o.details["conditions"].as_array().is_some_and(|c| c.len() == 4 && c.iter().all(|x| x[1] == "Yes"));
        ensure(o.status == Status::Pass && all_yes, format!("{name}: {} {}", o.status, o.details["conditions"]))?;
    }
    let m = cat("num2_3");
    let o = th.run(&m, &m.budget).unwrap();
    ensure(o.status == Status::Vacuous("AlmostDivisible".into()), format!("num2_3: {:?}", o.status))?;
    Ok("qplus and zero_top: all four Yes, chain Pass; num2_3 Vacuous on AlmostDivisible".into())
}

fn c12() -> Check {
    let run = || Command::new(BIN).args(["verify", "--all", "--format", "json"]).output().expect("binary runs");
    let (a, b) = (run(), run());
    ensure(a.status.code() == Some(0), format!("exit {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} bytes, identical", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 12] = [
        ("Z is not preminimal", Duration::from_secs(1), c1),
        ("cone N^2 + (3,-3)N: perforation and hull membership", Duration::from_secs(1), c2),
        ("theta = sqrt 2: hull of GrPlus is N x N", Duration::from_secs(5), c3),
        ("<2,3> + N: 3 below 4 only at the unit level", Duration::from_secs(10), c4),
        ("sandwich <=_s, unit order, <=_p on exhaustive boxes", Duration::from_secs(120), c5),
        ("unit order equals <=_p and <= on N^2", Duration::from_secs(60), c6),
        ("P3.8 and T3.10 over the catalog", Duration::from_secs(300), c7),
        ("P4.3 Au cone checks over the catalog", Duration::from_secs(60), c8),
        ("T4.9 factorization paths agree", Duration::from_secs(5), c9),
        ("L6.1 interpolation on Q+", Duration::from_secs(1), c10),
        ("T6.5 chain", Duration::from_secs(10), c11),
        ("verify --all is deterministic", Duration::from_secs(600), c12),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        let (ok, detail) = match r {
            Ok(d) if t <= *limit => (true, d),
            Ok(d) => (false, format!("over the {:.0?} limit; {d}", limit)),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {:2}: {} {:>8.3}s  {name}: {detail}", i + 1, if ok { "PASS" } else { "FAIL" }, t.as_secs_f64());
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
