//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rr_core::capability::{build_matrix, compare, Matrix, DEFAULT_SEEDS};
use rr_core::dsl::{parse, print_canonical, SourceText};
use rr_core::fixtures::{self, load, load_one};
use rr_core::interp::{execute, numerals, Arrangement, Event, ExecOptions, TraceEvent, Value, World};
use rr_core::ir::{level_metrics, validate, validate_set, ConceptUnit, Level, Visibility, IMPLICIT_OP};
use rr_core::kb::{demonstration, KnowledgeBase};
use rr_core::redescribe::{antiunify_instances, decompose_to_e3, generalize_to_e2};
use rr_core::tasks::{
    build_task, build_task_with, check_principles, judge_object_irrelevance, judge_order_irrelevance, run_task_with, scene,
    training_world, Outcome, TaskId, TaskParams,
};
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {took:?}, limit {limit:?}"))
}

fn fixture_fidelity() -> Check {
    let start = Instant::now();
    let listings = [
        (fixtures::I_COUNTING_APPLES, Level::I),
        (fixtures::E1_COUNTING_APPLES, Level::E1),
        (fixtures::E2_COUNTING, Level::E2),
        (fixtures::E3_COUNTING, Level::E3),
    ];
    for (text, level) in listings {
        let units = parse(&SourceText::memory(text)).map_err(|e| format!("{level}: {}", e[0]))?;
        for u in units.iter().filter(|u| !u.is_globals()) {
            ensure(u.level == level, format!("{} declared at {}, expected {level}", u.name, u.level))?;
            let d = validate(u);
            ensure(d.is_empty(), format!("{}: {} diagnostic(s)", u.name, d.len()))?;
        }
        ensure(print_canonical(&units) == text, format!("{level} listing does not round-trip byte for byte"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("4 listings in {:?}", start.elapsed()))
}

fn projection(trace: &[TraceEvent]) -> Vec<Event> {
    let mut p: Vec<Event> =
        trace.iter().map(|e| e.event.clone()).filter(|e| matches!(e, Event::PointedTo(_) | Event::Said(_))).collect();
    if p.len() >= 2 && p[p.len() - 1] == p[p.len() - 2] {
        p.pop();
    }
    p
}

fn phase_one() -> Check {
    let start = Instant::now();
    let three = load(fixtures::I_COUNTING_APPLES).into_iter().find(|u| !u.is_globals()).unwrap();
    let four_world = scene(4, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, 0);
    let four = KnowledgeBase::new()
        .record_instance(&demonstration(&four_world, &numerals()), &four_world, "apples")
        .map_err(|e| e.to_string())?;
    let (e1, _) = antiunify_instances(&[three.clone(), four.clone()]).map_err(|e| e.to_string())?;
    ensure(e1.level == Level::E1 && validate(&e1).is_empty(), "class fails E1 discipline")?;
    for (inst, w) in [(&three, training_world()), (&four, four_world)] {
        let replay = execute(&[], inst, IMPLICIT_OP, &[], &w, "apples", 1000).map_err(|e| e.to_string())?;
        let class = execute(&[], &e1, "Counting", &[], &w, "apples", 1000).map_err(|e| e.to_string())?;
        ensure(projection(&class.trace) == projection(&replay.trace), format!("projection differs for {}", inst.name))?;
    }
    let mut correct = 0;
    for n in 1..=20 {
        for seed in [0, 1, 2] {
            let w = scene(n, "ROOM2", "TABLE2", "apples", "APPLE", "Apple", Arrangement::ALL[seed as usize % 4], seed);
            let r = execute(&[], &e1, "Counting", &[], &w, "apples", 10_000);
            if r.is_ok_and(|r| r.value == Value::Int(n as i64)) {
                correct += 1;
            }
        }
    }
    ensure(correct == 60, format!("{correct}/60 correct"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{correct}/60 correct, projections equal"))
}

/// Names, member counts, visibilities and call graph of a unit set.
fn structure(units: &[ConceptUnit]) -> Vec<String> {
    units
        .iter()
        .flat_map(|u| {
            let mut rows = vec![format!("{} {} attrs {} ops {}", u.name, u.level, u.attributes.len(), u.operations.len())];
            rows.extend(u.attributes.iter().map(|a| format!("{}.{} {:?}", u.name, a.name, a.visibility)));
            rows.extend(u.operations.iter().map(|o| {
                format!("{}.{} {:?} calls {:?}", u.name, o.name, o.visibility, rr_core::ir::called_operations(o))
            }));
            rows
        })
        .collect()
}

fn diff(want: &[ConceptUnit], got: &[ConceptUnit]) -> usize {
    let (a, b) = (structure(want), structure(got));
    a.iter().filter(|r| !b.contains(r)).count() + b.iter().filter(|r| !a.contains(r)).count()
}

fn phases_two_three() -> Check {
    let mut want_e2 = load(fixtures::GLOBALS);
    want_e2.extend(load(fixtures::E2_COUNTING));
    let (e2, _) = generalize_to_e2(&load_one(fixtures::E1_COUNTING_APPLES)).map_err(|e| e.to_string())?;
    ensure(validate_set(&e2).is_empty(), "E2 output fails discipline")?;
    let d2 = diff(&want_e2, &e2);
    ensure(d2 == 0 && e2 == want_e2, format!("E2 diff: {d2} row(s)"))?;
    let (e3, _) = decompose_to_e3(&e2).map_err(|e| e.to_string())?;
    let want_e3 = load(fixtures::E3_COUNTING);
    let d3 = diff(&want_e3, &e3);
    ensure(d3 == 0 && e3 == want_e3, format!("E3 diff: {d3} row(s)"))?;
    Ok("E2 and E3 diffs empty".into())
}

fn matrix() -> Check {
    let kb = KnowledgeBase::canonical().all();
    let actual = build_matrix(&kb, &DEFAULT_SEEDS, &ExecOptions::default());
    let golden = Matrix::from_tsv(fixtures::GOLDEN_MATRIX).map_err(|e| e.to_string())?;
    let diffs = compare(&golden, &actual);
    ensure(diffs.is_empty(), format!("{} cell(s) differ, first: {}", diffs.len(), diffs.first().map(|d| d.to_string()).unwrap_or_default()))?;
    let upto = |k: usize| TaskId::ALL[..k].to_vec();
    for (level, want) in [(Level::I, upto(1)), (Level::E1, upto(3)), (Level::E2, upto(6)), (Level::E3, upto(9))] {
        ensure(actual.solved_at(level) == want, format!("row {level} solves {:?}", actual.solved_at(level)))?;
    }
    Ok("36 cells match the golden matrix".into())
}

fn counting_principles() -> Check {
    let kb = KnowledgeBase::canonical().all();
    let opts = ExecOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let levels = [Level::E1, Level::E2, Level::E3];
    let counting = [TaskId::T1, TaskId::T2, TaskId::T3, TaskId::T4];
    let mut ok = 0;
    for _ in 0..100 {
        let level = levels[rng.gen_range(0..3)];
        // E1 knowledge is confined to apples, so it only gets the apple tasks.
        let pool = if level == Level::E1 { &counting[..3] } else { &counting[..] };
        let task = build_task(pool[rng.gen_range(0..pool.len())], rng.gen_range(0..10_000));
        let r = run_task_with(&task, &kb, level, &opts);
        if r.outcome.is_solved() && check_principles(&r.trace, &task.world, &opts.numerals).single_trace_ok() {
            ok += 1;
        }
    }
    ensure(ok == 100, format!("{ok}/100 executions obey one-to-one, stable order and cardinality"))?;
    for level in levels {
        ensure(judge_order_irrelevance(&kb, level, &opts), format!("order irrelevance fails at {level}"))?;
    }
    for level in [Level::E2, Level::E3] {
        ensure(judge_object_irrelevance(&kb, level, &opts), format!("object irrelevance fails at {level}"))?;
        for n in [2, 5, 9, 14] {
            let params = TaskParams { objects: Some(n), ..TaskParams::default() };
            for seed in 0..4 {
                let a = run_task_with(&build_task_with(TaskId::T3, seed, &params), &kb, level, &opts);
                let b = run_task_with(&build_task_with(TaskId::T4, seed, &params), &kb, level, &opts);
                ensure(
                    a.outcome.is_solved() && b.outcome.is_solved() && a.value == b.value,
                    format!("T3 and T4 disagree at {level} for {n} objects, seed {seed}"),
                )?;
            }
        }
    }
    Ok(format!("{ok}/100, order and object irrelevance hold"))
}

fn conservation() -> Check {
    let kb = KnowledgeBase::canonical().all();
    let opts = ExecOptions::default();
    for seed in [0, 1, 2] {
        let task = build_task(TaskId::T8, seed);
        let r = run_task_with(&task, &kb, Level::E3, &opts);
        ensure(r.outcome == Outcome::Solved, format!("seed {seed}: {}", r.outcome))?;
        // Every pointing belongs to the first count of the 16 apples.
        let pointed = r.trace.iter().filter(|e| matches!(e.event, Event::PointedTo(_))).count();
        ensure(pointed == 16, format!("seed {seed}: {} pointing(s) after the rearrangement", pointed.saturating_sub(16)))?;
        let e2 = run_task_with(&task, &kb, Level::E2, &opts).outcome;
        ensure(!e2.is_solved(), format!("seed {seed}: solved at E2"))?;
    }
    Ok("E3 solved for seeds 0-2 without recounting; E2 not solved".into())
}

fn visibility() -> Check {
    let kb = common::fixture_units();
    let cases = common::access_cases(7, 50);
    let hidden = cases.iter().filter(|c| c.visibility != Visibility::Public).count();
    let refused = cases.iter().filter(|c| c.visibility != Visibility::Public && common::violates(&kb, c)).count();
    let wrongly = cases.iter().filter(|c| c.visibility == Visibility::Public && common::violates(&kb, c)).count();
    ensure(hidden > 0 && hidden < cases.len(), "suite does not mix public and hidden members")?;
    ensure(refused == hidden && wrongly == 0, format!("{refused}/{hidden} hidden uses refused, {wrongly} public use(s) refused"))?;
    Ok(format!("{refused}/{hidden} hidden refused, {} public allowed", cases.len() - hidden))
}

fn replayable(kb: &KnowledgeBase, worlds: &[World]) -> bool {
    kb.at_level(Level::I).iter().all(|u| worlds.iter().any(|w| execute(&[], u, IMPLICIT_OP, &[], w, &u.domain, 1000).is_ok()))
}

fn retention() -> Check {
    let opts = ExecOptions::default();
    let mut kb = KnowledgeBase::new();
    let mut worlds = Vec::new();
    for (i, n) in [3, 4, 5].into_iter().enumerate() {
        let w = scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, i as u64);
        kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").map_err(|e| e.to_string())?;
        worlds.push(w);
    }
    let practice = [TaskId::T1, TaskId::T2, TaskId::T3];
    let mut chain = vec![level_metrics(kb.at_level(Level::I).into_iter())];
    let mut fired = 0;
    for level in [Level::I, Level::E1, Level::E2] {
        kb.practice(level, &practice, &DEFAULT_SEEDS, &opts);
        let before = kb.census();
        let reports = kb.advance(3);
        ensure(reports.len() == 1, format!("no phase fired after practising at {level}"))?;
        fired += 1;
        let after = kb.census();
        for (l, n) in &before {
            ensure(after.get(l).copied().unwrap_or(0) >= *n, format!("level {l} shrank"))?;
        }
        ensure(replayable(&kb, &worlds), "a level-I instance no longer replays")?;
        let next = kb.at_level(Level::ALL[level as usize + 1]);
        chain.push(level_metrics(next.into_iter().filter(|u| !u.is_globals())));
    }
    ensure(kb.census()[&Level::I] == 3, "level-I instances were removed")?;
    for w in chain.windows(2) {
        ensure(w[0].mean_visibility() < w[1].mean_visibility(), "visibility did not move toward public")?;
    }
    Ok(format!("{fired} phases fired, 3 instances kept and replayable"))
}

/// The harness output: the matrix and every task run, as TSV.
fn harness_tsv() -> String {
    let kb = KnowledgeBase::canonical().all();
    let opts = ExecOptions::default();
    let mut out = build_matrix(&kb, &DEFAULT_SEEDS, &opts).to_tsv();
    for level in Level::ALL {
        for t in TaskId::ALL {
            for seed in DEFAULT_SEEDS {
                let r = run_task_with(&build_task(t, seed), &kb, level, &opts);
                out.push_str(&format!("{level}\t{t}\t{seed}\t{}\n", r.outcome.kind()));
                out.push_str(&rr_core::interp::dump_trace(&r.trace));
            }
        }
    }
    out
}

fn cli_tsv() -> Vec<u8> {
    let mut out = Vec::new();
    rr_core::cli::run(["rr", "--output", "tsv", "matrix"], &mut out, &mut Vec::new());
    out
}

fn determinism() -> Check {
    let (a, b) = (harness_tsv(), harness_tsv());
    ensure(a == b, "harness runs differ")?;
    ensure(cli_tsv() == cli_tsv(), "CLI matrix output differs")?;
    Ok(format!("{} bytes identical across runs", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("fixture fidelity", fixture_fidelity),
        ("phase-1 reproduction", phase_one),
        ("phase-2/3 reproduction", phases_two_three),
        ("capability matrix", matrix),
        ("counting principles", counting_principles),
        ("conservation", conservation),
        ("visibility enforcement", visibility),
        ("retention and monotonicity", retention),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
