//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! summary prints in order; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;

use common::Acts;
use qfw_core::algebra::{same_algebra, Algebra, AlgebraHom};
use qfw_core::coring::{left_dual_ring, right_dual_ring, sweedler, Coring};
use qfw_core::decomp::{decompose, match_classes, WorkRng};
use qfw_core::fixtures::{battery, corpus, extensions, run_fixture, BatteryItem, Fixture, Task, PRIMES};
use qfw_core::graded::{coinduce, coinduced_bimodule, GradedRing};
use qfw_core::modrep::{induced_left, induced_right, regular_left, LeftModule};
use qfw_core::pipeline::{check_coring, check_extension, ExtensionOptions};
use qfw_core::report::{Report, Verdict};
use qfw_core::ringext::{make_extension, qf_pair_witness};
use qfw_core::schema::{coring_document, parse_input, Input};
use qfw_core::simdiv::{divides_modules, similar_modules};
use qfw_core::verify::verify_certificate;
use qfw_core::{Error, PrimeField};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

fn rng(seed: u64) -> WorkRng {
    WorkRng::seed_from_u64(seed)
}

fn input(fx: &Fixture) -> Input {
    fx.document.build().expect("fixture documents build")
}

fn certificates_verify(r: &Report) -> Result<usize, String> {
    let mut n = 0;
    for (c, cert) in r.certificates() {
        let v = verify_certificate(cert);
        if !v.ok {
            return Err(format!("{}: {}", c.name, v.reasons.join("; ")));
        }
        n += 1;
    }
    Ok(n)
}

fn secs(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

struct Ctx {
    fixtures: Vec<Fixture>,
    items: Vec<BatteryItem>,
    battery_time: Duration,
}

impl Ctx {
    fn report(&self, name: &str) -> Option<&Report> {
        self.items.iter().find(|i| i.name == name)?.report.as_ref().ok()
    }

    fn qf_extensions(&self) -> impl Iterator<Item = (&Fixture, AlgebraHom)> {
        self.fixtures.iter().filter_map(|fx| match (fx.task, input(fx)) {
            (Task::CheckExtension, Input::Hom(h)) if fx.expected.is_yes() => Some((fx, h)),
            _ => None,
        })
    }
}

fn c1(ctx: &Ctx) -> Outcome {
    let mut certs = 0;
    for it in &ctx.items {
        let r = it.report.as_ref().map_err(|e| format!("{}: {e}", it.name))?;
        if r.verdict == Verdict::Inconsistent {
            return Err(format!("{}: inconsistent report", it.name));
        }
        let text = serde_json::to_string(r).map_err(|e| e.to_string())?;
        let back: Report = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", it.name))?;
        certs += certificates_verify(&back).map_err(|e| format!("{}: {e}", it.name))?;
    }
    if ctx.battery_time > Duration::from_secs(120) {
        return Err(format!("battery took {}", secs(ctx.battery_time)));
    }
    let passed = ctx.items.iter().filter(|i| i.pass).count();
    Ok(format!(
        "{certs} certificates over {} fixtures verify after a JSON round trip; {passed}/{} verdicts as expected; battery {}",
        ctx.items.len(),
        ctx.items.len(),
        secs(ctx.battery_time)
    ))
}

fn c2(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for fx in ctx.fixtures.iter().filter(|f| f.task == Task::CheckCoring) {
        let r = ctx.report(&fx.name).ok_or(format!("{}: no report", fx.name))?;
        let vs: Vec<Verdict> = ["iii", "iv", "vi", "vii", "viii"]
            .iter()
            .map(|c| r.check(c).map(|c| c.verdict).ok_or(format!("{}: missing {c}", fx.name)))
            .collect::<Result<_, _>>()?;
        if vs.iter().any(|v| *v != vs[0]) || r.verdict == Verdict::Inconsistent {
            return Err(format!("{}: conditions disagree {vs:?}", fx.name));
        }
        n += 1;
    }
    if n < 8 {
        return Err(format!("only {n} coring fixtures"));
    }
    Ok(format!("{n} coring fixtures, all five conditions agree on each"))
}

/// Sweedler coring serialized and parsed back; `None` beyond the tensor size limit.
fn sweedler_roundtrip(h: &AlgebraHom) -> Result<Option<Coring>, String> {
    let e = make_extension(h).map_err(|e| e.to_string())?;
    let c = match sweedler(&e) {
        Ok(c) => c,
        Err(Error::TooLarge(_)) => return Ok(None),
        Err(e) => return Err(e.to_string()),
    };
    let text = coring_document(&c).to_json();
    match parse_input(&text).map_err(|e| e.to_string())? {
        Input::Coring(back) => Ok(Some(back)),
        other => Err(format!("parsed back as {}", other.kind())),
    }
}

fn c3(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    let mut worst = Duration::ZERO;
    let mut beyond = Vec::new();
    for (fx, h) in ctx.qf_extensions() {
        let t = Instant::now();
        let Some(c) = sweedler_roundtrip(&h).map_err(|e| format!("{}: {e}", fx.name))? else {
            beyond.push(format!("{} (carrier {})", fx.name, h.target.dim() * h.target.dim()));
            continue;
        };
        let r = check_coring(&c, &mut rng(0)).map_err(|e| format!("{}: {e}", fx.name))?;
        if r.verdict != Verdict::Yes {
            return Err(format!("{}: sweedler coring verdict {}", fx.name, r.verdict.as_str()));
        }
        if certificates_verify(&r).map_err(|e| format!("{}: {e}", fx.name))? == 0 {
            return Err(format!("{}: no certificate", fx.name));
        }
        let dt = t.elapsed();
        worst = worst.max(dt);
        if dt > Duration::from_secs(30) {
            return Err(format!("{}: took {}", fx.name, secs(dt)));
        }
        n += 1;
    }
    let mut msg = format!("{n} QF extensions give QF Sweedler corings with verified certificates; slowest {}", secs(worst));
    if !beyond.is_empty() {
        msg.push_str(&format!(
            "; not run, S ⊗_R S beyond the 16-dim carrier scale: {}",
            beyond.join(", ")
        ));
    }
    Ok(msg)
}

fn c4(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for fx in &ctx.fixtures {
        if !matches!(input(fx), Input::Hom(_)) {
            continue;
        }
        let r = if fx.task == Task::CheckExtension {
            ctx.report(&fx.name).cloned().ok_or(format!("{}: no report", fx.name))?
        } else {
            let mut plain = fx.clone();
            plain.task = Task::CheckExtension;
            run_fixture(&plain, 0).map_err(|e| format!("{}: {e}", fx.name))?
        };
        let rs = r.check("rs-qf").map(|c| c.verdict);
        let sr = r.check("sr-qf").map(|c| c.verdict);
        if rs.is_none() || rs != sr {
            return Err(format!("{}: rs-qf {rs:?} vs sr-qf {sr:?}", fx.name));
        }
        n += 1;
    }
    Ok(format!("{n} extension fixtures, the two one-sided conditions agree on each"))
}

fn c5(_: &Ctx) -> Outcome {
    let pairs = [
        ("to_c2", "c2_diag"),
        ("to_fxf", "fxf_onto_f"),
        ("x2_onto_f", "to_c2"),
        ("t2_onto_fxf", "fxf_onto_f"),
    ];
    let mut n = 0;
    for p in PRIMES {
        let f = PrimeField::new(p).unwrap();
        let exts = extensions(f);
        let get = |name: &str| exts.iter().find(|e| e.0 == name).map(|e| e.1.clone()).unwrap();
        for (a, b) in pairs {
            let (alpha, beta) = (get(a), get(b));
            if !common::qf_bimodule(&induced_left(&beta)) {
                return Err(format!("F_{p} {b} is not QF"));
            }
            let composite = alpha.then(&beta).map_err(|e| e.to_string())?;
            let lhs = common::qf_bimodule(&induced_left(&alpha));
            let rhs = common::qf_bimodule(&induced_left(&composite));
            if lhs != rhs {
                return Err(format!("F_{p} ({a}, {b}): oracle {lhs} vs composite {rhs}"));
            }
            let opts = ExtensionOptions {
                then: Some(beta),
                ..Default::default()
            };
            let r = check_extension(&alpha, &opts, &mut rng(0)).map_err(|e| e.to_string())?;
            if r.verdict != Verdict::Yes {
                return Err(format!("F_{p} ({a}, {b}): composition check {}", r.verdict.as_str()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} composable pairs with β QF over {} primes; α QF iff βα QF on each", PRIMES.len()))
}

fn graded_oracle(g: &GradedRing, budget: u64) -> Result<bool, String> {
    let re = g.identity_component();
    let reg = common::regular_left(re);
    let mut ok = true;
    for x in 0..g.group().order() {
        let m = Acts::of_module(&g.component_module(x));
        let d = m.dim;
        ok &= common::divides_exhaustive(&m, &reg, d, budget).ok_or(format!("component {x} beyond budget"))?;
    }
    let co = coinduce(g, &regular_left(re)).map_err(|e| e.to_string())?;
    let cb = Acts::of_bimodule(&coinduced_bimodule(g, &co).map_err(|e| e.to_string())?);
    let rb = Acts::of_bimodule(&g.as_bimodule().map_err(|e| e.to_string())?);
    let fwd = common::divides_exhaustive(&rb, &cb, rb.dim, budget).ok_or("R | Coind beyond budget")?;
    let bwd = common::divides_exhaustive(&cb, &rb, cb.dim, budget).ok_or("Coind | R beyond budget")?;
    Ok(ok && fwd && bwd)
}

fn c6(ctx: &Ctx) -> Outcome {
    let t = Instant::now();
    let find = |n: &str| ctx.fixtures.iter().find(|f| f.name == n).ok_or(format!("no fixture {n}"));
    let c2 = find("f5_graded_c2")?;
    let r = run_fixture(c2, 0).map_err(|e| e.to_string())?;
    let certs = certificates_verify(&r)?;
    if r.verdict != Verdict::Yes || certs == 0 {
        return Err(format!("graded C2: {} with {certs} certificates", r.verdict.as_str()));
    }
    let t2 = find("f5_graded_t2")?;
    let Input::Graded(g) = input(t2) else {
        return Err("graded T2 fixture is not graded".into());
    };
    let r = run_fixture(t2, 0).map_err(|e| e.to_string())?;
    let oracle = graded_oracle(&g, 2_000_000)?;
    if r.verdict != Verdict::from_bool(oracle) {
        return Err(format!("graded T2: pipeline {} vs exhaustive oracle {oracle}", r.verdict.as_str()));
    }
    let dt = t.elapsed();
    if dt > Duration::from_secs(60) {
        return Err(format!("took {}", secs(dt)));
    }
    Ok(format!(
        "graded C2 yes with {certs} verified certificates; graded T2 {} matches exhaustive split-map search; {}",
        r.verdict.as_str(),
        secs(dt)
    ))
}

fn test_modules(a: &Arc<Algebra>) -> Vec<LeftModule> {
    let reg = regular_left(a);
    let reps: Vec<LeftModule> = decompose(&reg, &mut rng(0))
        .unwrap()
        .classes
        .into_iter()
        .map(|c| c.representative)
        .collect();
    let (first, last) = (&reps[0], &reps[reps.len() - 1]);
    let mut xs = vec![reg.clone(), reg.power(2)];
    xs.extend(reps.iter().cloned());
    xs.push(first.direct_sum(&reg).unwrap());
    xs.push(first.power(2));
    xs.push(first.direct_sum(last).unwrap());
    xs
}

fn c7(ctx: &Ctx) -> Outcome {
    let (mut cases, mut exts) = (0, 0);
    let mut fewest = usize::MAX;
    for (fx, h) in ctx.qf_extensions() {
        let e = make_extension(&h).map_err(|e| e.to_string())?;
        let xs = test_modules(&h.target);
        fewest = fewest.min(xs.len());
        for (i, x) in xs.iter().enumerate() {
            let w = qf_pair_witness(&e, x, &mut rng(i as u64)).map_err(|e| format!("{} X{i}: {e}", fx.name))?;
            if !w.alpha_bar.mul(&w.alpha).is_identity() || !w.verified {
                return Err(format!("{} X{i}: composite is not the identity", fx.name));
            }
            cases += 1;
        }
        exts += 1;
    }
    if fewest < 5 {
        return Err(format!("only {fewest} test modules for some extension"));
    }
    Ok(format!("{cases} witnesses over {exts} QF extensions (at least {fewest} modules each) compose to the identity"))
}

/// Left modules carried by a fixture: enveloping-module carriers and regular modules.
fn fixture_modules(fx: &Fixture) -> Vec<LeftModule> {
    match input(fx) {
        Input::Algebra(a) => vec![regular_left(&a)],
        Input::Hom(h) => vec![
            regular_left(&h.target),
            induced_left(&h).carrier().clone(),
            induced_right(&h).carrier().clone(),
        ],
        Input::Module(m) => vec![m],
        Input::Bimodule(b) => vec![b.carrier().clone()],
        Input::Coring(c) => vec![c.carrier().carrier().clone()],
        Input::Graded(g) => {
            let mut v = vec![g.as_bimodule().unwrap().carrier().clone()];
            v.extend((0..g.group().order()).map(|x| g.component_module(x)));
            v
        }
    }
}

fn c8(ctx: &Ctx) -> Outcome {
    let mut n = 0;
    for fx in &ctx.fixtures {
        for m in fixture_modules(fx) {
            let base = decompose(&m, &mut rng(0)).map_err(|e| format!("{}: {e}", fx.name))?;
            if !base.verify() {
                return Err(format!("{}: decomposition fails its identities", fx.name));
            }
            for seed in 1..10 {
                let d = decompose(&m, &mut rng(seed * 7919)).map_err(|e| e.to_string())?;
                if d.signature() != base.signature() {
                    return Err(format!("{}: seed {seed} signature {:?} vs {:?}", fx.name, d.signature(), base.signature()));
                }
                let matched = match_classes(&base, &d).map_err(|e| e.to_string())?;
                if matched.iter().any(Option::is_none) {
                    return Err(format!("{}: seed {seed} classes do not match", fx.name));
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} fixture modules, identical signatures and matched classes under 10 seeds"))
}

fn c9(ctx: &Ctx) -> Outcome {
    let mut mods: Vec<LeftModule> = Vec::new();
    for fx in &ctx.fixtures {
        for m in fixture_modules(fx) {
            let dup = mods
                .iter()
                .any(|x| same_algebra(x.algebra(), m.algebra()) && x.action() == m.action());
            if m.dim() <= 6 && !dup {
                mods.push(m);
            }
        }
    }
    let budget = 50_000;
    let (mut exhaustive, mut trace, mut pairs) = (0, 0, 0);
    let mut oracle_divides = |m: &LeftModule, n: &LeftModule| -> bool {
        let (a, b) = (Acts::of_module(m), Acts::of_module(n));
        match common::divides_exhaustive(&a, &b, a.dim, budget) {
            Some(v) => {
                exhaustive += 1;
                v
            }
            None => {
                trace += 1;
                common::divides(&a, &b)
            }
        }
    };
    for m in &mods {
        for n in &mods {
            if !same_algebra(m.algebra(), n.algebra()) {
                continue;
            }
            let div = divides_modules(m, n, &mut rng(1)).map_err(|e| e.to_string())?.is_some();
            let back = divides_modules(n, m, &mut rng(2)).map_err(|e| e.to_string())?.is_some();
            let sim = similar_modules(m, n, &mut rng(3)).map_err(|e| e.to_string())?.is_some();
            let (od, ob) = (oracle_divides(m, n), oracle_divides(n, m));
            if div != od || back != ob || sim != (od && ob) {
                return Err(format!(
                    "dims {} and {}: divides {div}/{od}, reverse {back}/{ob}, similar {sim}",
                    m.dim(),
                    n.dim()
                ));
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "{} modules, {pairs} pairs; {exhaustive} divisibility queries by exhaustive split-map search, {trace} by the trace ideal",
        mods.len()
    ))
}

fn counit_holds(c: &Coring) -> bool {
    let f = c.base().field();
    let n = c.dim();
    let lift = c.delta_lift();
    let car = c.carrier();
    let eps_col = |j: usize| c.eps().column(j);
    (0..n).all(|k| {
        let mut left = vec![0u32; n];
        let mut right = vec![0u32; n];
        for i in 0..n {
            for j in 0..n {
                let d = lift.get(i * n + j, k);
                if d == 0 {
                    continue;
                }
                let l = car.left_act(&eps_col(i)).column(j);
                let r = car.right_act(&eps_col(j)).column(i);
                for t in 0..n {
                    left[t] = f.mul_add(left[t], d, l[t]);
                    right[t] = f.mul_add(right[t], d, r[t]);
                }
            }
        }
        let e: Vec<u32> = (0..n).map(|t| u32::from(t == k)).collect();
        left == e && right == e
    })
}

fn c10(ctx: &Ctx) -> Outcome {
    let mut rings = 0;
    for fx in ctx.fixtures.iter().filter(|f| f.task == Task::CheckCoring) {
        let Input::Coring(c) = input(fx) else {
            return Err(format!("{}: not a coring", fx.name));
        };
        let oracle = common::left_convolution(&c);
        if !common::associative(c.base().field(), oracle.dim, &oracle.mul, &oracle.unit) {
            return Err(format!("{}: *C from the definition is not associative", fx.name));
        }
        for (side, d) in [("*C", left_dual_ring(&c)), ("C*", right_dual_ring(&c))] {
            let a = d.map_err(|e| format!("{} {side}: {e}", fx.name))?.algebra;
            if !common::associative(a.field(), a.dim(), a.structure_constants(), a.unit()) {
                return Err(format!("{} {side}: not associative", fx.name));
            }
            Algebra::new(a.field(), a.dim(), a.structure_constants().to_vec(), a.unit().to_vec())
                .map_err(|e| format!("{} {side}: {e}", fx.name))?;
            if side == "*C" && a.dim() != oracle.dim {
                return Err(format!("{}: *C has dimension {} vs {}", fx.name, a.dim(), oracle.dim));
            }
            rings += 1;
        }
        if !counit_holds(&c) {
            return Err(format!("{}: counit law fails", fx.name));
        }
    }
    let (mut sw, mut beyond) = (0, Vec::new());
    for fx in &ctx.fixtures {
        let Input::Hom(h) = input(fx) else { continue };
        match sweedler_roundtrip(&h).map_err(|e| format!("{}: {e}", fx.name))? {
            Some(c) if counit_holds(&c) => sw += 1,
            Some(_) => return Err(format!("{}: sweedler counit law fails", fx.name)),
            None => beyond.push(fx.name.clone()),
        }
    }
    let mut msg = format!("{rings} convolution rings associative; {sw} Sweedler corings revalidate after a round trip");
    if !beyond.is_empty() {
        msg.push_str(&format!("; beyond the tensor size limit: {}", beyond.join(", ")));
    }
    Ok(msg)
}

fn main() -> ExitCode {
    let fixtures = corpus();
    let t = Instant::now();
    let items = battery(&fixtures, 0);
    let ctx = Ctx {
        fixtures,
        items,
        battery_time: t.elapsed(),
    };
    let criteria: [Criterion; 10] = [
        ("certificate soundness", c1),
        ("coring conditions agree", c2),
        ("Sweedler corings of QF extensions", c3),
        ("one-sided extension conditions agree", c4),
        ("composition with a QF extension", c5),
        ("graded restriction", c6),
        ("pair witnesses", c7),
        ("Krull-Schmidt stability", c8),
        ("oracle equivalence", c9),
        ("convolution rings and Sweedler validation", c10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&ctx)))
            .unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(msg) => println!("criterion {}: PASS {name} ({msg}) [{}]", i + 1, secs(t.elapsed())),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({msg}) [{}]", i + 1, secs(t.elapsed()));
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
