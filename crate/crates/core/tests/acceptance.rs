//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{fp, q, random_octo, s, sample_params};
use octorb::algebra::{subalgebra_check, Octo, SubalgebraSpec, BASIS_NAMES, DIM, E11, E12, E22, VE11, VE12, VE22};
use octorb::catalog::{
    build_case, cases_of, enumerate_all_admissible, enumerate_catalog, expected_fingerprint, find_case,
    fingerprint_set, CaseSpec, NilpotencyPrediction, Source,
};
use octorb::maps::{build_map, replay_trace, shipped_scripts, sqrt_steps, verify_map, MapError, MapKind, MapSpec};
use octorb::operator::{image_is_subalgebra, LinMap};
use octorb::search::{
    classify_run, fp_fingerprint, sweep, ClassifyOptions, ImageTarget, SearchSpec,
};
use octorb::{FieldSpec, Fingerprint, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:?}, limit {limit:?}"))?;
    Ok(e)
}

fn catalog(f: FieldSpec) -> Vec<(CaseSpec, LinMap)> {
    match f {
        FieldSpec::Rationals => enumerate_catalog(f, &Source::all(), &sample_params(f)),
        _ => enumerate_all_admissible(f, &Source::all()),
    }
}

fn algebra_soundness() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for f in [q(), fp(5)] {
        let basis: Vec<Octo> = (0..DIM).map(|i| Octo::basis(f, i)).collect();
        let one = Octo::one(f);
        for x in &basis {
            ensure(one.mul(x) == *x && x.mul(&one) == *x, || format!("unit law fails on {x}"))?;
        }
        let assoc = |a: &Octo, b: &Octo, c: &Octo| &a.mul(b).mul(c) - &a.mul(&b.mul(c));
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let a = assoc(x, y, z);
                    ensure((&a + &assoc(y, x, z)).is_zero() && (&a + &assoc(x, z, y)).is_zero(), || {
                        format!("associator not alternating on ({x}), ({y}), ({z}) over {f}")
                    })?;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = random_octo(&mut rng, f);
            let y = random_octo(&mut rng, f);
            let (tx, nx) = x.trace_norm().map_err(|e| e.to_string())?;
            let quad = &(&x.mul(&x) - &x.scale(&tx)) + &Octo::one(f).scale(&nx);
            ensure(quad.is_zero(), || format!("x^2 - t x + n != 0 for {x}"))?;
            let (_, ny) = y.trace_norm().map_err(|e| e.to_string())?;
            let (_, nxy) = x.mul(&y).trace_norm().map_err(|e| e.to_string())?;
            ensure(nxy == &nx * &ny, || format!("n(xy) != n(x)n(y) for {x}, {y}"))?;
            checked += 1;
        }
    }
    let e = within(t, Duration::from_secs(1))?;
    Ok(format!("512 basis triples and {checked} random pairs over Q and F5 in {e:?}"))
}

fn maps_suite() -> Outcome {
    let t = Instant::now();
    let mut n = 0;
    for f in [q(), fp(5)] {
        for kind in MapKind::all() {
            let params: Vec<Option<Scalar>> = if kind.takes_param() {
                sample_params(f)
                    .into_iter()
                    .filter(|a| !(kind.needs_nonzero() && a.is_zero()))
                    .map(Some)
                    .collect()
            } else {
                vec![None]
            };
            for param in params {
                let spec = MapSpec { kind, param };
                let m = build_map(&spec, f).map_err(|e| format!("{spec}: {e}"))?;
                ensure(verify_map(&m, kind.claimed()), || format!("{spec} over {f} is not a {:?}", kind.claimed()))?;
                n += 1;
            }
        }
    }
    let e = within(t, Duration::from_secs(5))?;
    Ok(format!("{n} maps verified as claimed in {e:?}"))
}

fn catalog_rb() -> Outcome {
    let t = Instant::now();
    let counts = (
        cases_of(Source::Theorem1).len(),
        cases_of(Source::Corollary(6)).len(),
        cases_of(Source::Prop18).len(),
    );
    ensure(counts == (27, 25, 4), || format!("case counts {counts:?}"))?;
    let mut n = 0;
    for f in [q(), fp(5)] {
        let ops = catalog(f);
        let present: BTreeSet<(Source, u8)> = ops.iter().map(|(c, _)| (c.source, c.case_no)).collect();
        for src in Source::all() {
            for def in cases_of(src) {
                ensure(present.contains(&(src, def.case_no)), || format!("{src} case {} missing over {f}", def.case_no))?;
            }
        }
        for (cs, r) in &ops {
            r.check_rb().map_err(|w| format!("{cs} over {f}: {w}"))?;
            n += 1;
        }
    }
    let e = within(t, Duration::from_secs(10))?;
    Ok(format!("{n} instances pass over Q (sampled) and F5 (all admissible) in {e:?}"))
}

fn nilpotency_pattern() -> Outcome {
    let mut case25 = BTreeSet::new();
    let mut n = 0;
    for f in [q(), fp(5)] {
        let samples = sample_params(f);
        for (cs, r) in enumerate_catalog(f, &[Source::Corollary(6)], &samples) {
            let fpr = r.fingerprint();
            match expected_fingerprint(&cs).map_err(|e| e.to_string())? {
                NilpotencyPrediction::SquareZero => ensure(fpr.d2 == 0, || format!("{cs}: R^2 != 0"))?,
                NilpotencyPrediction::CubeZeroSquareNonzero => {
                    ensure(fpr.d2 > 0 && fpr.d3 == 0, || format!("{cs}: rank R^2 = {}, rank R^3 = {}", fpr.d2, fpr.d3))?
                }
                NilpotencyPrediction::Unstated => {
                    case25.insert(if fpr.d2 == 0 { "R^2 = 0" } else if fpr.d3 == 0 { "R^3 = 0 only" } else { "R^3 != 0" });
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} instances match; case 25 (not predicted) computes {case25:?}"))
}

fn kernel_claims() -> Outcome {
    let mut n = 0;
    for f in [q(), fp(5)] {
        let b = |i| Octo::basis(f, i);
        let ops = catalog(f);
        let k5: Vec<Octo> = [E11, E12, E22, VE12, VE22].iter().map(|&i| b(i)).collect();
        for (cs, r) in &ops {
            let ki = r.rank_kernel_image();
            let ok = match cs.source {
                Source::Lemma(5) => ki.kernel == k5,
                Source::Lemma(3) => ki.image == vec![b(E11), b(E12)],
                Source::Lemma(7) => ki.image == SubalgebraSpec::S4.basis(f),
                _ => continue,
            };
            ensure(ok, || format!("{cs} over {f}: kernel {:?}, image {:?}", ki.kernel, ki.image))?;
            n += 1;
        }
    }
    Ok(format!("{n} kernel/image equalities hold exactly"))
}

fn bimodule_laws() -> Outcome {
    let mut n = 0;
    for f in [q(), fp(5)] {
        for (cs, r) in catalog(f) {
            ensure(image_is_subalgebra(&r), || format!("{cs}: image not closed"))?;
            ensure(r.bimodule_check(), || format!("{cs}: kernel not an image bimodule"))?;
            n += 1;
        }
        for sa in SubalgebraSpec::ALL {
            let rep = subalgebra_check(&sa.basis(f)).map_err(|e| e.to_string())?;
            ensure(rep.closed && !rep.unital, || format!("{} over {f}: {rep:?}", sa.name()))?;
        }
        let n2 = subalgebra_check(&SubalgebraSpec::N2.basis(f)).map_err(|e| e.to_string())?;
        ensure(n2.square_zero, || "N2 is not square-zero".into())?;
    }
    Ok(format!("{n} operators; seven subalgebras closed and non-unital; N2 square-zero"))
}

fn script_replay() -> Outcome {
    let scripts = shipped_scripts();
    ensure(scripts.len() >= 8, || format!("only {} scripts", scripts.len()))?;
    for sc in &scripts {
        let trace = replay_trace(&sc.steps, &sc.input).map_err(|e| format!("{}: {e}", sc.name))?;
        for (k, r) in trace.iter().enumerate() {
            r.check_rb().map_err(|w| format!("{} after step {k}: {w}", sc.name))?;
        }
        ensure(trace.last() == Some(&sc.output), || format!("{}: output differs", sc.name))?;
    }
    Ok(format!("{} scripts reproduce their outputs", scripts.len()))
}

fn sweep_line(image: SubalgebraSpec, lemma: u8) -> Result<String, String> {
    let f = fp(3);
    let spec = SearchSpec::new(f, ImageTarget::subalgebra(image, f));
    let rep = classify_run(&spec, ClassifyOptions { orbits: true, ..Default::default() }).map_err(|e| e.to_string())?;
    let lemma_set = fingerprint_set(f, &[Source::Lemma(lemma)]);
    for fc in &rep.fingerprints {
        ensure(lemma_set.contains(&fc.fingerprint), || {
            format!("{}: fingerprint {} not in lemma {lemma} set", image.name(), fc.fingerprint)
        })?;
    }
    let orbits = rep.orbits.as_ref().ok_or("no orbit summary")?;
    let novel: BTreeSet<Fingerprint> = rep.novel_fingerprints.iter().copied().collect();
    for o in &orbits.unmatched {
        ensure(!novel.contains(&o.fingerprint), || {
            format!("{}: unmatched orbit {} with novel fingerprint", image.name(), o.canonical)
        })?;
    }
    Ok(format!(
        "{} {} RB ({} orbits, {} unmatched)",
        image.name(),
        rep.rb_count,
        orbits.orbit_count,
        orbits.unmatched.len()
    ))
}

fn classify_dim1() -> Outcome {
    let t = Instant::now();
    let a = sweep_line(SubalgebraSpec::N1, 1)?;
    let b = sweep_line(SubalgebraSpec::I1, 2)?;
    let e = within(t, Duration::from_secs(1))?;
    Ok(format!("{a}; {b}; {e:?}"))
}

/// Sweep and check fingerprints: operators whose image is the whole target
/// must match the classifying lemma; smaller images must match some catalog case.
fn check_sweep(image: SubalgebraSpec, kernel: &[usize], lemma: u8, all: &BTreeSet<Fingerprint>) -> Outcome {
    let f = fp(3);
    let spec = SearchSpec::new(f, ImageTarget::subalgebra(image, f))
        .with_kernel(kernel.iter().map(|&i| Octo::basis(f, i)).collect());
    let res = sweep(&spec).map_err(|e| e.to_string())?;
    let lemma_set = fingerprint_set(f, &[Source::Lemma(lemma)]);
    let dim = image.basis_indices().len();
    let (mut exact, mut lower) = (0, 0);
    for m in &res.operators {
        if m.iter().all(|&x| x == 0) {
            continue;
        }
        let fpr = fp_fingerprint(m, 3);
        if fpr.d1 == dim {
            ensure(lemma_set.contains(&fpr), || format!("{}: exact-image fingerprint {fpr} not in lemma {lemma} set", image.name()))?;
            exact += 1;
        } else {
            ensure(all.contains(&fpr), || format!("{}: fingerprint {fpr} not in catalog", image.name()))?;
            lower += 1;
        }
    }
    let names: Vec<&str> = kernel.iter().map(|&i| BASIS_NAMES[i]).collect();
    let ker = if names.is_empty() { String::new() } else { format!(" kernel containing {}", names.join(",")) };
    Ok(format!("{}{ker}: {} candidates, {exact} full-image, {lower} smaller", image.name(), res.candidates))
}

fn classify_dim2() -> Outcome {
    let t = Instant::now();
    let all = fingerprint_set(fp(3), &Source::all());
    let a = check_sweep(SubalgebraSpec::I2, &[], 3, &all)?;
    let b = check_sweep(SubalgebraSpec::N2, &[], 4, &all)?;
    Ok(format!("{a}; {b}; {:?}", t.elapsed()))
}

fn classify_dim34() -> Outcome {
    let t = Instant::now();
    let all = fingerprint_set(fp(3), &Source::all());
    let k5 = [E11, E12, E22, VE12, VE22];
    let parts = [
        check_sweep(SubalgebraSpec::N3, &k5, 5, &all)?,
        check_sweep(SubalgebraSpec::I3, &k5, 6, &all)?,
        check_sweep(SubalgebraSpec::S4, &[E12, E22, VE11, VE12], 7, &all)?,
        check_sweep(SubalgebraSpec::S4, &[E11, E12, VE11, VE12], 7, &all)?,
    ];
    Ok(format!("{}; {:?}", parts.join("; "), t.elapsed()))
}

fn quadratic_reductions() -> Outcome {
    let f = fp(7);
    let a = s(f, 2);
    ensure(a.sqrt() == Some(s(f, 3)), || "sqrt(2) != 3 in F7".into())?;
    let chains = sqrt_steps(f, &a).ok_or("2 is not a square in F7")?;
    let table: &[(u8, &str, u8, Option<i64>)] = &[
        (7, "prop7-sqrt-then-inv-sqrt", 7, None),
        (9, "prop7-sqrt-then-inv-alpha", 9, None),
        (15, "prop6-inv-sqrt-prop17-prop16", 13, Some(-1)),
        (16, "prop8-inv-sqrt-then-inv-alpha", 14, None),
        (17, "prop8-inv-sqrt-then-inv-alpha", 15, None),
        (21, "prop8-inv-sqrt-then-inv-alpha", 19, Some(1)),
        (25, "prop7-inv-sqrt", 23, None),
        (27, "prop7-inv-sqrt", 25, None),
    ];
    for &(tc, chain, cc, calpha) in table {
        let def = find_case(Source::Theorem1, tc).map_err(|e| e.to_string())?;
        let mut spec = CaseSpec::new(Source::Theorem1, tc).with_alpha(a.clone());
        if def.uses_beta() {
            spec = spec.with_beta(Scalar::one(f));
        }
        let r = build_case(&spec, f).map_err(|e| e.to_string())?;
        let steps = &chains.iter().find(|(n, _)| *n == chain).ok_or("missing chain")?.1;
        let trace = replay_trace(steps, &r).map_err(|e| e.to_string())?;
        let mut target = CaseSpec::new(Source::Corollary(6), cc);
        if let Some(v) = calpha {
            target = target.with_alpha(s(f, v));
        }
        let want = build_case(&target, f).map_err(|e| e.to_string())?;
        ensure(trace.last() == Some(&want), || format!("theorem case {tc} via {chain} does not reach {target}"))?;
    }
    Ok(format!("{} theorem cases reach their square-root-normalized forms", table.len()))
}

fn negative_controls() -> Outcome {
    let f = q();
    let w = LinMap::identity(f).check_rb().err().ok_or("identity passed")?;
    ensure((w.i, w.j) == (E11, E11), || format!("identity witness at {:?}", (w.i, w.j)))?;
    ensure(w.lhs == Octo::basis(f, E11) && w.rhs == Octo::basis(f, E11).scale(&s(f, 2)), || format!("{w}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let r = LinMap::from_columns(f, (0..DIM).map(|_| random_octo(&mut rng, f)).collect()).map_err(|e| e.to_string())?;
    let w2 = r.check_rb().err().ok_or("random matrix passed")?;
    let (ei, ej) = (Octo::basis(f, w2.i), Octo::basis(f, w2.j));
    let (ri, rj) = (r.apply(&ei), r.apply(&ej));
    let lhs = ri.mul(&rj);
    let rhs = r.apply(&(&ri.mul(&ej) + &ei.mul(&rj)));
    ensure(lhs == w2.lhs && rhs == w2.rhs && lhs != rhs, || "random witness does not reproduce".into())?;

    let e = build_map(&MapSpec::prop(6, Scalar::zero(f)), f).err().ok_or("prop 6 at 0 built")?;
    ensure(e == MapError::ZeroParamForbidden(6), || format!("unexpected error {e}"))?;
    Ok(format!(
        "identity fails at (e11,e11); random fails at ({},{}); prop 6 at 0: {e}",
        BASIS_NAMES[w2.i], BASIS_NAMES[w2.j]
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("algebra soundness", algebra_soundness),
        ("maps verify as claimed", maps_suite),
        ("catalog passes the Rota-Baxter check", catalog_rb),
        ("nilpotency pattern of the closed-field list", nilpotency_pattern),
        ("kernel and image claims", kernel_claims),
        ("bimodule and subalgebra laws", bimodule_laws),
        ("reduction script replay", script_replay),
        ("F3 classification, image dimension 1", classify_dim1),
        ("F3 classification, image dimension 2", classify_dim2),
        ("F3 classification, image dimensions 3 and 4", classify_dim34),
        ("square-root reductions over F7", quadratic_reductions),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.into_iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
