use rr_core::fixtures::{self, load, load_one};
use rr_core::interp::{execute, numerals, Arrangement, Event, TraceEvent, Value, World};
use rr_core::ir::{level_metrics, validate, AtomicAction, ConceptUnit, Expr, Level, Statement, Verb, IMPLICIT_OP};
use rr_core::kb::{demonstration, KnowledgeBase};
use rr_core::redescribe::{
    antiunify_instances, decompose_to_e3, find_region, generalize_to_e2, loop_roll, Phase, RedescribeError, Region,
};
use rr_core::tasks::scene;

fn apples(n: usize) -> World {
    scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, 0)
}

fn record(kb: &mut KnowledgeBase, world: &World, domain: &str) -> ConceptUnit {
    kb.record_instance(&demonstration(world, &numerals()), world, domain).unwrap()
}

/// PointedTo and Said events, without a restated final word.
fn projection(trace: &[TraceEvent]) -> Vec<Event> {
    let mut p: Vec<Event> =
        trace.iter().map(|e| e.event.clone()).filter(|e| matches!(e, Event::PointedTo(_) | Event::Said(_))).collect();
    if p.len() >= 2 && p[p.len() - 1] == p[p.len() - 2] {
        p.pop();
    }
    p
}

fn fixture_instance() -> ConceptUnit {
    load(fixtures::I_COUNTING_APPLES).into_iter().find(|u| !u.is_globals()).unwrap()
}

#[test]
fn three_and_four_apples_become_one_class() {
    let mut kb = KnowledgeBase::new();
    let worlds = [apples(3), apples(4)];
    let insts: Vec<ConceptUnit> = worlds.iter().map(|w| record(&mut kb, w, "apples")).collect();
    let (e1, report) = antiunify_instances(&insts).unwrap();
    assert_eq!(report.phase, Phase::P1);
    assert_eq!(e1.level, Level::E1);
    assert!(validate(&e1).is_empty());
    assert!(e1.attribute("app_set").is_some_and(|a| a.type_ref.to_string() == "APP_Set"));
    assert!(e1.attribute("p").is_some_and(|a| a.type_ref.to_string() == "Person"));
    assert!(e1.attribute("ROOM1").is_none() && e1.attribute("TABLE1").is_none());
    for (inst, w) in insts.iter().zip(&worlds) {
        let replay = execute(&[], inst, IMPLICIT_OP, &[], w, "apples", 1000).unwrap();
        let class = execute(&[], &e1, "Counting", &[], w, "apples", 1000).unwrap();
        assert_eq!(projection(&class.trace), projection(&replay.trace));
        assert_eq!(class.value, Value::Int(w.focus_members().len() as i64));
    }
}

#[test]
fn class_counts_sizes_no_instance_saw() {
    let mut kb = KnowledgeBase::new();
    let insts = [record(&mut kb, &apples(3), "apples"), record(&mut kb, &apples(4), "apples")];
    let (e1, _) = antiunify_instances(&insts).unwrap();
    for n in 1..=20 {
        let w = scene(n, "ROOM2", "TABLE2", "apples", "APPLE", "Apple", Arrangement::Scattered, n as u64);
        assert_eq!(execute(&[], &e1, "Counting", &[], &w, "apples", 10_000).unwrap().value, Value::Int(n as i64));
        if n != 3 && n != 4 {
            assert!(insts.iter().all(|i| execute(&[], i, IMPLICIT_OP, &[], &w, "apples", 1000).is_err()));
        }
    }
}

#[test]
fn identical_copies_still_generalize() {
    let i = fixture_instance();
    let (e1, _) = antiunify_instances(&[i.clone(), i]).unwrap();
    let r = execute(&[], &e1, "Counting", &[], &apples(3), "apples", 1000).unwrap();
    assert_eq!(r.value, Value::Int(3));
}

#[test]
fn antiunify_rejects_bad_inputs() {
    let mut kb = KnowledgeBase::new();
    let a = record(&mut kb, &apples(3), "apples");
    let pencils = scene(3, "ROOM1", "TABLE1", "pencils", "PENCIL", "Pencil", Arrangement::Line, 0);
    let p = record(&mut kb, &pencils, "pencils");
    assert!(matches!(antiunify_instances(&[a.clone(), p]), Err(RedescribeError::DomainMismatch(..))));
    assert_eq!(antiunify_instances(&[a.clone()]).unwrap_err(), RedescribeError::TooFewInstances(1));
    let e1 = load_one(fixtures::E1_COUNTING_APPLES);
    assert!(matches!(antiunify_instances(&[a, e1]), Err(RedescribeError::NotInstance(_))));
}

fn act(verb: Verb, arg: &str) -> Statement {
    Statement::Action(AtomicAction::Verb { actor: "ME".into(), verb, arg: Expr::Name(arg.into()) })
}

#[test]
fn loop_roll_on_the_recorded_episode() {
    let body = fixture_instance().implicit_operation().unwrap().body.clone();
    let acts: Vec<Statement> = body.into_iter().filter(|s| matches!(s, Statement::Action(_))).collect();
    assert_eq!(find_region(&acts), Some(Region { start: 0, period: 3, k: 3 }));
    let rolled = loop_roll(&acts);
    let loops: Vec<&Vec<Statement>> = rolled
        .iter()
        .filter_map(|s| match s {
            Statement::While { body, .. } => Some(body),
            _ => None,
        })
        .collect();
    assert_eq!(loops.len(), 1);
    let verbs: Vec<Verb> = loops[0]
        .iter()
        .filter_map(|s| match s {
            Statement::Action(AtomicAction::Verb { verb, .. }) => Some(*verb),
            _ => None,
        })
        .collect();
    assert_eq!(verbs, [Verb::Move, Verb::PointTo, Verb::Say]);
    assert_eq!(rolled.last(), Some(&act(Verb::Say, "THREE")));
}

#[test]
fn loop_roll_small_cases() {
    let one = vec![act(Verb::Say, "ONE")];
    assert_eq!(loop_roll(&one), one);
    let points: Vec<Statement> = (1..=4).map(|i| act(Verb::PointTo, &format!("A{i}"))).collect();
    assert_eq!(find_region(&points), Some(Region { start: 0, period: 1, k: 4 }));
    let rolled = loop_roll(&points);
    assert_eq!(rolled.iter().filter(|s| matches!(s, Statement::While { .. })).count(), 1);
    assert_eq!(loop_roll(&rolled), rolled);
}

#[test]
fn e2_and_e3_match_the_reference_units() {
    let mut want = load(fixtures::GLOBALS);
    want.extend(load(fixtures::E2_COUNTING));
    let (e2, report) = generalize_to_e2(&load_one(fixtures::E1_COUNTING_APPLES)).unwrap();
    assert_eq!(report.phase, Phase::P2);
    assert_eq!(e2, want);
    let (e1, _) = antiunify_instances(&[fixture_instance(), fixture_instance()]).unwrap();
    assert_eq!(generalize_to_e2(&e1).unwrap().0, want);
    let (e3, report) = decompose_to_e3(&e2).unwrap();
    assert_eq!(report.phase, Phase::P3);
    assert_eq!(e3, load(fixtures::E3_COUNTING));
}

#[test]
fn e2_output_counts_cups_for_anyone() {
    let (e2, _) = generalize_to_e2(&load_one(fixtures::E1_COUNTING_APPLES)).unwrap();
    let counting = e2.iter().find(|u| u.name == "Counting").unwrap();
    let cups = scene(4, "ROOM2", "TABLE2", "cups", "CUP", "Cup", Arrangement::Circle, 2);
    assert_eq!(execute(&e2, counting, "Counting", &[], &cups, "cups", 1000).unwrap().value, Value::Int(4));
}

#[test]
fn passes_check_their_input_level() {
    assert!(matches!(generalize_to_e2(&fixture_instance()), Err(RedescribeError::NotE1(_))));
    assert!(matches!(decompose_to_e3(&[load_one(fixtures::E1_COUNTING_APPLES)]), Err(RedescribeError::NotE2(_))));
}

#[test]
fn chain_moves_toward_public() {
    let i = vec![fixture_instance()];
    let e1 = vec![load_one(fixtures::E1_COUNTING_APPLES)];
    let mut e2 = load(fixtures::GLOBALS);
    e2.extend(load(fixtures::E2_COUNTING));
    let e3 = load(fixtures::E3_COUNTING);
    let m: Vec<_> = [&i, &e1, &e2, &e3].iter().map(|u| level_metrics(u.iter())).collect();
    for w in m.windows(2) {
        assert!(w[0].unit_count <= w[1].unit_count, "{m:?}");
        assert!(w[0].operation_count <= w[1].operation_count, "{m:?}");
        assert!(w[0].const_count >= w[1].const_count, "{m:?}");
        assert!(w[0].mean_visibility() < w[1].mean_visibility(), "{m:?}");
    }
}

#[test]
fn advancing_keeps_the_sources() {
    let mut kb = KnowledgeBase::canonical();
    let before = kb.census();
    let instances: Vec<String> = kb.at_level(Level::I).iter().map(|u| u.name.clone()).collect();
    kb.advance(3);
    let after = kb.census();
    for (level, n) in before {
        assert!(after.get(&level).copied().unwrap_or(0) >= n, "{level}");
    }
    let w = apples(3);
    for name in instances {
        let u = kb.get(&name, Level::I).unwrap();
        if u.name == "CountingApples" {
            assert!(execute(&[], u, IMPLICIT_OP, &[], &w, "apples", 1000).is_ok());
        }
    }
}
