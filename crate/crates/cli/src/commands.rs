use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use octorb::algebra::{pretty, BASIS_NAMES, DIM, E11, E12, E22, VE11, VE12, VE22};
use octorb::catalog::{
    self, build_case, cases_of, parse_combination, CaseSpec, CatalogError, Source,
};
use octorb::io::{operator_from_json, operator_to_json, script_from_json, OperatorFile};
use octorb::maps::{build_map, replay_trace, shipped_scripts, verify_map, MapKind, MapSpec, ScriptError};
use octorb::operator::LinMap;
use octorb::search::{
    classify_run, linmap_to_fp, ClassifyOptions, ImageTarget, OrbitStore, SearchSpec, DEFAULT_ORBIT_CAP,
};
use octorb::{FieldSpec, Octo, Scalar, SubalgebraSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Cli, Command, FieldArg, Global};

/// What a verb produces: a verdict plus both renderings.
pub struct Report {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

type CliResult = Result<Report, String>;

fn field_of(g: &Global) -> Result<FieldSpec, String> {
    match g.field {
        FieldArg::Q => Ok(FieldSpec::Rationals),
        FieldArg::Fp => {
            let p = g.p.ok_or("--field fp needs --p")?;
            FieldSpec::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn banner(field: FieldSpec) -> Value {
    json!({ "field": field.to_string(), "basis_order": BASIS_NAMES })
}

fn banner_text(field: FieldSpec) -> String {
    format!("field {}; basis {}\n", field, BASIS_NAMES.join(" "))
}

fn with_banner(field: FieldSpec, mut body: Value) -> Value {
    let b = banner(field);
    if let (Value::Object(m), Value::Object(bm)) = (&mut body, b) {
        for (k, v) in bm {
            m.insert(k, v);
        }
    }
    body
}

fn read_operator(path: &Path) -> Result<LinMap, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    operator_from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_scalar(field: FieldSpec, text: &str) -> Result<Scalar, String> {
    Scalar::parse_lenient(field, text).map_err(|e| e.to_string())
}

fn sources(arg: &str) -> Result<Vec<Source>, String> {
    if arg.eq_ignore_ascii_case("all") {
        return Ok(Source::all());
    }
    Source::parse(arg).map(|s| vec![s]).ok_or_else(|| format!("unknown source {arg:?}"))
}

fn samples(field: FieldSpec) -> Vec<Scalar> {
    match field {
        FieldSpec::Rationals => ["-2", "-1", "1/2", "1", "2", "3"]
            .iter()
            .map(|t| Scalar::parse(field, t).expect("valid literal"))
            .collect(),
        _ => field.elements().expect("finite field"),
    }
}

pub fn run(cli: &Cli) -> CliResult {
    let g = &cli.global;
    match &cli.command {
        Command::VerifyAlgebra { samples } => verify_algebra(g, *samples),
        Command::VerifyMaps => verify_maps(g),
        Command::VerifyCatalog { source, alpha, beta } => verify_catalog(g, source, alpha.as_deref(), beta.as_deref()),
        Command::Check { file } => check(file),
        Command::Fingerprint { file } => fingerprint(file),
        Command::CatalogDump { source, alpha, beta, out } => catalog_dump(g, source, alpha.as_deref(), beta.as_deref(), out),
        Command::Enumerate { image, kernel, exact, orbits } => enumerate(g, image, kernel.as_deref(), *exact, *orbits),
        Command::Reduce { file, out } => reduce(file, out.as_deref()),
        Command::ReplayScript { script, input, expect, builtin } => match builtin {
            Some(name) => replay_builtin(name),
            None => replay_file(
                script.as_deref().ok_or("missing script file (or use --builtin)")?,
                input.as_deref().ok_or("missing input operator file")?,
                expect.as_deref(),
            ),
        },
    }
}

fn verify_algebra(g: &Global, n: usize) -> CliResult {
    let f = field_of(g)?;
    let mut failures = Vec::new();
    let basis: Vec<Octo> = (0..DIM).map(|i| Octo::basis(f, i)).collect();
    let one = Octo::one(f);
    for x in &basis {
        if one.mul(x) != *x || x.mul(&one) != *x {
            failures.push(format!("unit law on {}", pretty(x)));
        }
    }
    let assoc = |a: &Octo, b: &Octo, c: &Octo| &a.mul(b).mul(c) - &a.mul(&b.mul(c));
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let a = assoc(x, y, z);
                if !(&a + &assoc(y, x, z)).is_zero() || !(&a + &assoc(x, z, y)).is_zero() {
                    failures.push(format!("alternativity on ({}, {}, {})", pretty(x), pretty(y), pretty(z)));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let elems = f.elements();
    let mut random = || {
        use rand::Rng;
        let coords = (0..DIM)
            .map(|_| match &elems {
                Some(e) => e[rng.gen_range(0..e.len())].clone(),
                None => Scalar::from_frac(f, rng.gen_range(-5..=5), rng.gen_range(1..=3)).expect("nonzero denominator"),
            })
            .collect();
        Octo::from_coords(f, coords).expect("eight coordinates")
    };
    for _ in 0..n {
        let x = random();
        let y = random();
        match (x.trace_norm(), y.trace_norm(), x.mul(&y).trace_norm()) {
            (Ok((t, nx)), Ok((_, ny)), Ok((_, nxy))) => {
                if !(&(&x.mul(&x) - &x.scale(&t)) + &one.scale(&nx)).is_zero() {
                    failures.push(format!("quadratic law on {x}"));
                }
                if nxy != &nx * &ny {
                    failures.push(format!("norm multiplicativity on {x} and {y}"));
                }
            }
            _ => failures.push(format!("trace or norm undefined near {x}, {y}")),
        }
    }
    let ok = failures.is_empty();
    let text = format!(
        "{}unit law, 512 basis triples, {n} random pairs (seed {}): {}\n{}",
        banner_text(f),
        g.seed,
        if ok { "all hold" } else { "FAILED" },
        failures.iter().map(|s| format!("  {s}\n")).collect::<String>()
    );
    let body = json!({ "ok": ok, "seed": g.seed, "random_pairs": n, "failures": failures });
    Ok(Report { ok, json: with_banner(f, body), text })
}

fn verify_maps(g: &Global) -> CliResult {
    let f = field_of(g)?;
    let mut rows = Vec::new();
    let mut text = banner_text(f);
    let mut ok = true;
    for kind in MapKind::all() {
        let params: Vec<Option<Scalar>> = if kind.takes_param() {
            samples(f)
                .into_iter()
                .filter(|a| !(kind.needs_nonzero() && a.is_zero()))
                .map(Some)
                .collect()
        } else {
            vec![None]
        };
        for param in params {
            let spec = MapSpec { kind, param };
            let passed = build_map(&spec, f).map(|m| verify_map(&m, kind.claimed()));
            let (pass, note) = match passed {
                Ok(b) => (b, String::new()),
                Err(e) => (false, e.to_string()),
            };
            ok &= pass;
            let _ = writeln!(text, "{:<28} {:<17} {}", spec.to_string(), format!("{:?}", kind.claimed()), if pass { "ok" } else { "FAIL" });
            rows.push(json!({ "map": spec.to_string(), "claimed": kind.claimed(), "ok": pass, "error": note }));
        }
    }
    let _ = writeln!(text, "{} maps, {}", rows.len(), if ok { "all verified" } else { "FAILURES" });
    Ok(Report { ok, json: with_banner(f, json!({ "ok": ok, "maps": rows })), text })
}

fn verify_catalog(g: &Global, source: &str, alpha: Option<&str>, beta: Option<&str>) -> CliResult {
    let f = field_of(g)?;
    let srcs = sources(source)?;
    let alphas = match alpha {
        Some(a) => vec![parse_scalar(f, a)?],
        None => samples(f),
    };
    let betas = match beta {
        Some(b) => vec![parse_scalar(f, b)?],
        None => samples(f),
    };
    let mut verified: BTreeSet<(Source, u8)> = BTreeSet::new();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    let mut instances = 0;
    let mut total_cases = 0;
    for src in &srcs {
        for def in cases_of(*src) {
            total_cases += 1;
            let a_vals: Vec<Option<Scalar>> = if def.uses_alpha() { alphas.iter().cloned().map(Some).collect() } else { vec![None] };
            let b_vals: Vec<Option<Scalar>> = if def.uses_beta() { betas.iter().cloned().map(Some).collect() } else { vec![None] };
            let mut case_failed = false;
            for a in &a_vals {
                for b in &b_vals {
                    let spec = CaseSpec { source: *src, case_no: def.case_no, alpha: a.clone(), beta: b.clone() };
                    match build_case(&spec, f) {
                        Ok(_) => {
                            instances += 1;
                            verified.insert((*src, def.case_no));
                        }
                        Err(CatalogError::ConstraintViolation(..)) => {}
                        Err(e) => {
                            case_failed = true;
                            failures.push(format!("{spec}: {e}"));
                        }
                    }
                }
            }
            if !case_failed && !verified.contains(&(*src, def.case_no)) {
                skipped.push(format!("{src} case {}", def.case_no));
            }
        }
    }
    let ok = failures.is_empty();
    let mut text = banner_text(f);
    let _ = writeln!(
        text,
        "{} of {} cases verified ({} instances); {} skipped as inadmissible; {} failed",
        verified.len(),
        total_cases,
        instances,
        skipped.len(),
        failures.len()
    );
    for s in &skipped {
        let _ = writeln!(text, "  skipped {s}");
    }
    for s in &failures {
        let _ = writeln!(text, "  FAIL {s}");
    }
    let body = json!({
        "ok": ok,
        "sources": srcs.iter().map(|s| s.slug()).collect::<Vec<_>>(),
        "cases_total": total_cases,
        "cases_verified": verified.len(),
        "instances": instances,
        "skipped": skipped,
        "failures": failures,
    });
    Ok(Report { ok, json: with_banner(f, body), text })
}

fn check(path: &Path) -> CliResult {
    let r = read_operator(path)?;
    let f = r.field();
    match r.check_rb() {
        Ok(()) => Ok(Report {
            ok: true,
            json: with_banner(f, json!({ "ok": true, "rota_baxter": true, "operator": r.describe() })),
            text: format!("{}{}\nRota-Baxter: yes\n", banner_text(f), r.describe()),
        }),
        Err(w) => {
            let (x, y) = (BASIS_NAMES[w.i], BASIS_NAMES[w.j]);
            let text = format!(
                "{}{}\nRota-Baxter: no, first failure at ({x}, {y})\n  R({x})R({y})            = {}\n  R(R({x}){y} + {x}R({y})) = {}\n",
                banner_text(f),
                r.describe(),
                pretty(&w.lhs),
                pretty(&w.rhs)
            );
            let body = json!({
                "ok": false,
                "rota_baxter": false,
                "witness": { "x": x, "y": y, "lhs": w.lhs.to_string(), "rhs": w.rhs.to_string(),
                             "lhs_pretty": pretty(&w.lhs), "rhs_pretty": pretty(&w.rhs) },
            });
            Ok(Report { ok: false, json: with_banner(f, body), text })
        }
    }
}

fn nilpotency(d2: usize, d3: usize) -> &'static str {
    if d2 == 0 {
        "R^2 = 0"
    } else if d3 == 0 {
        "R^2 != 0, R^3 = 0"
    } else {
        "R^3 != 0"
    }
}

fn fingerprint(path: &Path) -> CliResult {
    let r = read_operator(path)?;
    let f = r.field();
    let fp = r.fingerprint();
    let ki = r.rank_kernel_image();
    let nil = nilpotency(fp.d2, fp.d3);
    let list = |xs: &[Octo]| xs.iter().map(pretty).collect::<Vec<_>>();
    let text = format!(
        "{}{}\nfingerprint {fp}\n{nil}\nimage  [{}]\nkernel [{}]\n",
        banner_text(f),
        r.describe(),
        list(&ki.image).join("; "),
        list(&ki.kernel).join("; ")
    );
    let body = json!({
        "ok": true,
        "fingerprint": fp,
        "nilpotency": nil,
        "image": list(&ki.image),
        "kernel": list(&ki.kernel),
    });
    Ok(Report { ok: true, json: with_banner(f, body), text })
}

fn catalog_dump(g: &Global, source: &str, alpha: Option<&str>, beta: Option<&str>, out: &Path) -> CliResult {
    let f = field_of(g)?;
    let src = Source::parse(source).ok_or_else(|| format!("unknown source {source:?}"))?;
    let a = alpha.map(|t| parse_scalar(f, t)).transpose()?;
    let b = match beta {
        Some(t) => parse_scalar(f, t)?,
        None => Scalar::one(f),
    };
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let mut written = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for def in cases_of(src) {
        let mut spec = CaseSpec::new(src, def.case_no);
        if def.uses_alpha() {
            let a = a.clone().ok_or_else(|| format!("{src} case {} needs --alpha", def.case_no))?;
            spec = spec.with_alpha(a);
        }
        if def.uses_beta() {
            spec = spec.with_beta(b.clone());
        }
        match build_case(&spec, f) {
            Ok(r) => {
                let name = format!("{}-case-{:02}.json", src.slug(), def.case_no);
                let path = out.join(&name);
                fs::write(&path, operator_to_json(&r) + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
                written.push(name);
            }
            Err(CatalogError::ConstraintViolation(_, n, c)) => skipped.push(format!("case {n}: {c}")),
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    let ok = failures.is_empty();
    let mut text = banner_text(f);
    let _ = writeln!(text, "wrote {} files to {}", written.len(), out.display());
    for s in &skipped {
        let _ = writeln!(text, "  skipped {s}");
    }
    for s in &failures {
        let _ = writeln!(text, "  FAIL {s}");
    }
    let body = json!({ "ok": ok, "source": src.slug(), "written": written, "skipped": skipped, "failures": failures });
    Ok(Report { ok, json: with_banner(f, body), text })
}

fn parse_vectors(f: FieldSpec, text: &str) -> Result<Vec<Octo>, String> {
    text.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t.contains(',') {
                Octo::parse(f, t).map_err(|e| format!("{t:?}: {e}"))
            } else {
                parse_combination(f, t).ok_or_else(|| format!("cannot parse vector {t:?}"))
            }
        })
        .collect()
}

/// Kernels proven for the larger images; S4 has two branches.
fn default_kernels(f: FieldSpec, image: SubalgebraSpec) -> Vec<Vec<Octo>> {
    let v = |ix: &[usize]| ix.iter().map(|&i| Octo::basis(f, i)).collect::<Vec<_>>();
    match image {
        SubalgebraSpec::N3 | SubalgebraSpec::I3 => vec![v(&[E11, E12, E22, VE12, VE22])],
        SubalgebraSpec::S4 => vec![v(&[E12, E22, VE11, VE12]), v(&[E11, E12, VE11, VE12])],
        _ => vec![vec![]],
    }
}

fn enumerate(g: &Global, image: &str, kernel: Option<&str>, exact: bool, orbits: bool) -> CliResult {
    let f = field_of(g)?;
    if f == FieldSpec::Rationals {
        return Err("enumerate needs a prime field: --field fp --p <p>".into());
    }
    let sa = SubalgebraSpec::parse(image).ok_or_else(|| format!("unknown image {image:?}"))?;
    let kernels = match kernel {
        None => default_kernels(f, sa),
        Some(t) if t.eq_ignore_ascii_case("none") => vec![vec![]],
        Some(t) => vec![parse_vectors(f, t)?],
    };
    let mut reports = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for k in kernels {
        let mut spec = SearchSpec::new(f, ImageTarget::subalgebra(sa, f))
            .with_kernel(k)
            .exact(exact)
            .with_budget(g.budget);
        spec.threads = g.threads;
        let rep = classify_run(&spec, ClassifyOptions { orbits, orbit_cap: DEFAULT_ORBIT_CAP }).map_err(|e| e.to_string())?;
        ok &= rep.novel_fingerprints.is_empty();
        text.push_str(&rep.to_table());
        reports.push(rep);
    }
    let _ = writeln!(text, "{}", if ok { "every fingerprint occurs in the catalog" } else { "NOVEL fingerprints found" });
    let body = json!({ "ok": ok, "budget": g.budget, "runs": reports });
    Ok(Report { ok, json: with_banner(f, body), text })
}

fn reduce(path: &Path, out: Option<&Path>) -> CliResult {
    let r = read_operator(path)?;
    let f = r.field();
    if f == FieldSpec::Rationals {
        return Err("orbit reduction needs an operator over a prime field".into());
    }
    let mut store = OrbitStore::new(f, DEFAULT_ORBIT_CAP).map_err(|e| e.to_string())?;
    let m = linmap_to_fp(&r).map_err(|e| e.to_string())?;
    let id = store.orbit_id(&m).map_err(|e| e.to_string())?;
    let canon = store.orbit_reduce(&r).map_err(|e| e.to_string())?;
    let fp = r.fingerprint();
    let mut cases = Vec::new();
    for (cs, c) in catalog::enumerate_all_admissible(f, &Source::all()) {
        if c.fingerprint() == fp && store.orbit_id(&linmap_to_fp(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())? == id {
            cases.push(cs.to_string());
        }
    }
    let size = store.orbit_size(id);
    let mut text = format!("{}orbit of {} operators\nrepresentative: {}\n", banner_text(f), size, canon.describe());
    let _ = writeln!(
        text,
        "catalog cases in this orbit: {}",
        if cases.is_empty() { "none".to_string() } else { cases.join(", ") }
    );
    if let Some(p) = out {
        fs::write(p, operator_to_json(&canon) + "\n").map_err(|e| format!("{}: {e}", p.display()))?;
        let _ = writeln!(text, "wrote {}", p.display());
    }
    let body = json!({
        "ok": true,
        "orbit_size": size,
        "representative": OperatorFile::from_linmap(&canon),
        "catalog_cases": cases,
    });
    Ok(Report { ok: true, json: with_banner(f, body), text })
}

fn replay_builtin(name: &str) -> CliResult {
    let scripts: Vec<_> = shipped_scripts()
        .into_iter()
        .filter(|s| name == "all" || s.name == name)
        .collect();
    if scripts.is_empty() {
        return Err(format!("no built-in script named {name:?}"));
    }
    let f = FieldSpec::Rationals;
    let mut ok = true;
    let mut rows = Vec::new();
    let mut text = banner_text(f);
    for sc in &scripts {
        let (pass, note) = match replay_trace(&sc.steps, &sc.input) {
            Ok(trace) if trace.last() == Some(&sc.output) => (true, String::new()),
            Ok(trace) => (false, format!("produced {}", trace.last().expect("nonempty").describe())),
            Err(e) => (false, e.to_string()),
        };
        ok &= pass;
        let line = format!("{:<34} {:>2} steps  {} {}", sc.name, sc.steps.len(), if pass { "ok" } else { "FAIL" }, note);
        let _ = writeln!(text, "{}", line.trim_end());
        rows.push(json!({ "name": sc.name, "steps": sc.steps.len(), "ok": pass, "error": note }));
    }
    Ok(Report { ok, json: with_banner(f, json!({ "ok": ok, "scripts": rows })), text })
}

fn replay_file(script: &Path, input: &Path, expect: Option<&Path>) -> CliResult {
    let r = read_operator(input)?;
    let f = r.field();
    let text_in = fs::read_to_string(script).map_err(|e| format!("{}: {e}", script.display()))?;
    let steps = script_from_json(f, &text_in).map_err(|e| format!("{}: {e}", script.display()))?;
    let mut text = banner_text(f);
    let _ = writeln!(text, "input: {}", r.describe());
    let trace = match replay_trace(&steps, &r) {
        Ok(t) => t,
        Err(ScriptError::RbBroken { step, desc }) => {
            let _ = writeln!(text, "step {step} ({desc}) broke the Rota-Baxter identity");
            let body = json!({ "ok": false, "broken_at": step, "step": desc });
            return Ok(Report { ok: false, json: with_banner(f, body), text });
        }
        Err(e) => return Err(e.to_string()),
    };
    for (k, (step, op)) in steps.iter().zip(&trace[1..]).enumerate() {
        let _ = writeln!(text, "{k}: {step} -> {}", op.describe());
    }
    let output = trace.last().expect("nonempty");
    let matches = match expect {
        Some(p) => Some(read_operator(p)? == *output),
        None => None,
    };
    let ok = matches != Some(false);
    if let Some(m) = matches {
        let _ = writeln!(text, "expected output {}", if m { "reached" } else { "NOT reached" });
    }
    let body = json!({
        "ok": ok,
        "steps": steps.len(),
        "rota_baxter_preserved": r.is_rb(),
        "output": OperatorFile::from_linmap(output),
        "matches_expected": matches,
    });
    Ok(Report { ok, json: with_banner(f, body), text })
}
