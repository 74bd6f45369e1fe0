mod common;

use proptest::prelude::*;
use rr_core::dsl::{parse, print_canonical, SourceText};
use rr_core::interp::{numerals, Arrangement, ExecOptions};
use rr_core::ir::{AtomicAction, Expr, Level, Statement, Verb, Visibility};
use rr_core::kb::{demonstration, KnowledgeBase};
use rr_core::redescribe::{antiunify_instances, find_region, loop_roll, MasteryLog, RedescribeError};
use rr_core::tasks::{build_task, check_principles, run_task_with, scene, Outcome, TaskId};

fn arrangement() -> impl Strategy<Value = Arrangement> {
    prop::sample::select(Arrangement::ALL.to_vec())
}

fn level() -> impl Strategy<Value = Level> {
    prop::sample::select(vec![Level::I, Level::E1, Level::E2, Level::E3])
}

fn action() -> impl Strategy<Value = Statement> {
    let verb = prop::sample::select(vec![Verb::Move, Verb::PointTo, Verb::Say]);
    let arg = prop::sample::select(vec!["A1", "A2", "A3", "A4", "ONE", "TWO", "HAND"]);
    (verb, arg).prop_map(|(v, a)| Statement::action(AtomicAction::verb("ME", v, Expr::name(a))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recorded_instances_round_trip(n in 1usize..12, arr in arrangement(), seed in 0u64..1000) {
        let w = scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", arr, seed);
        let mut kb = KnowledgeBase::new();
        let u = kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap();
        let text = print_canonical(std::slice::from_ref(&u));
        let back = parse(&SourceText::memory(text.clone())).unwrap();
        prop_assert_eq!(&back, &vec![u]);
        prop_assert_eq!(print_canonical(&back), text);
    }

    #[test]
    fn generalized_classes_round_trip_and_count(a in 2usize..8, b in 1usize..8, n in 1usize..21, seed in 0u64..100) {
        let mut kb = KnowledgeBase::new();
        let insts: Vec<_> = [a, b].iter().map(|&k| {
            let w = scene(k, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, 0);
            kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap()
        }).collect();
        let (e1, _) = antiunify_instances(&insts).unwrap();
        let back = parse(&SourceText::memory(print_canonical(std::slice::from_ref(&e1)))).unwrap();
        prop_assert_eq!(&back[0], &e1);
        let w = scene(n, "ROOM3", "TABLE3", "apples", "APPLE", "Apple", Arrangement::Scattered, seed);
        let r = rr_core::interp::execute(&[], &e1, "Counting", &[], &w, "apples", 10_000).unwrap();
        prop_assert_eq!(r.value, rr_core::interp::Value::Int(n as i64));
    }

    #[test]
    fn single_objects_share_no_loop(seed in 0u64..100) {
        let mut kb = KnowledgeBase::new();
        let w = scene(1, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, seed);
        let i = kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap();
        let err = antiunify_instances(&[i.clone(), i]).unwrap_err();
        prop_assert!(matches!(err, RedescribeError::NoCommonSkeleton(_)));
    }

    #[test]
    fn parser_never_panics_on_cut_fixtures(which in 0usize..8, cut in 0.0f64..1.0, junk in "[ -~\n]{0,20}") {
        let text = rr_core::fixtures::ALL[which].1;
        let mut at = (text.len() as f64 * cut) as usize;
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        let _ = parse(&SourceText::memory(format!("{}{junk}", &text[..at])));
    }

    #[test]
    fn parser_never_panics_on_noise(s in "[a-zA-Z0-9_@(){};:,.=<>!+\\-\\[\\]\"/* \n]{0,200}") {
        let _ = parse(&SourceText::memory(s));
    }

    #[test]
    fn loop_region_matches_brute_force(body in prop::collection::vec(action(), 0..16)) {
        prop_assert_eq!(find_region(&body), common::oracle_region(&body));
    }

    #[test]
    fn loop_roll_is_idempotent(body in prop::collection::vec(action(), 0..16)) {
        let once = loop_roll(&body);
        prop_assert_eq!(loop_roll(&once), once.clone());
        if find_region(&body).is_none() {
            prop_assert_eq!(once, body);
        }
    }

    #[test]
    fn cross_domain_access_follows_visibility(seed in 0u64..10_000) {
        let kb = common::fixture_units();
        for case in common::access_cases(seed, 50) {
            prop_assert_eq!(common::violates(&kb, &case), case.visibility != Visibility::Public, "{:?}", case);
        }
    }

    #[test]
    fn runs_are_deterministic(t in prop::sample::select(TaskId::ALL.to_vec()), seed in 0u64..50, level in level()) {
        let kb = KnowledgeBase::canonical().all();
        let opts = ExecOptions::default();
        let a = run_task_with(&build_task(t, seed), &kb, level, &opts);
        let b = run_task_with(&build_task(t, seed), &kb, level, &opts);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn solved_counts_obey_the_principles(seed in 0u64..10_000, level in level()) {
        let kb = KnowledgeBase::canonical().all();
        let opts = ExecOptions::default();
        let task = build_task(TaskId::T3, seed);
        let r = run_task_with(&task, &kb, level, &opts);
        if r.outcome == Outcome::Solved {
            prop_assert!(check_principles(&r.trace, &task.world, &opts.numerals).single_trace_ok());
        }
    }

    #[test]
    fn mastery_ticks_increase(units in prop::collection::vec("[A-C]", 1..20)) {
        let mut log = MasteryLog::default();
        for u in &units {
            log.record(u, "w", Outcome::Solved);
        }
        prop_assert!(log.entries().windows(2).all(|w| w[0].tick < w[1].tick));
        let last = log.entries().last().unwrap().clone();
        prop_assert!(log.push(last).is_err());
    }
}
