use rr_core::interp::{pointed_entities, said_tokens, Event, ExecOptions};
use rr_core::ir::Level;
use rr_core::kb::KnowledgeBase;
use rr_core::tasks::{
    build_task, build_task_with, check_principles, judge_object_irrelevance, judge_order_irrelevance, run_task, run_task_with,
    Outcome, TaskId, TaskParams,
};

fn kb() -> Vec<rr_core::ir::ConceptUnit> {
    KnowledgeBase::canonical().all()
}

#[test]
fn fetching_five_bananas() {
    let kb = kb();
    for seed in 0..3 {
        let r = run_task_with(&build_task(TaskId::T5, seed), &kb, Level::E2, &ExecOptions::default());
        assert_eq!(r.outcome, Outcome::Solved);
        let taken = r.trace.iter().filter(|e| matches!(e.event, Event::TookAway(_))).count();
        assert_eq!(taken, 5);
    }
}

#[test]
fn too_few_bananas_says_error() {
    let params = TaskParams { objects: Some(4), ..TaskParams::default() };
    let r = run_task_with(&build_task_with(TaskId::T5, 0, &params), &kb(), Level::E2, &ExecOptions::default());
    assert_eq!(r.outcome, Outcome::Failed("said Error".into()));
    assert!(said_tokens(&r.trace).contains(&"Error"));
}

#[test]
fn heaps_are_compared_without_counting_aloud() {
    let kb = kb();
    for seed in 0..4 {
        let r = run_task_with(&build_task(TaskId::T9, seed), &kb, Level::E3, &ExecOptions::default());
        assert_eq!(r.outcome, Outcome::Solved, "seed {seed}");
        assert!(said_tokens(&r.trace).len() < 7);
    }
    assert_eq!(run_task(&build_task(TaskId::T9, 0), &kb, Level::E2), Outcome::Inaccessible);
}

#[test]
fn conservation_needs_the_e3_cardinal_sum() {
    let kb = kb();
    let r = run_task_with(&build_task(TaskId::T8, 0), &kb, Level::E3, &ExecOptions::default());
    assert_eq!(r.outcome, Outcome::Solved);
    // First count points at 16 apples, the recall after rearranging at none.
    assert_eq!(pointed_entities(&r.trace).len(), 16);
    assert!(!run_task(&build_task(TaskId::T8, 0), &kb, Level::E2).is_solved());
}

#[test]
fn bus_seats_only_at_e3() {
    let kb = kb();
    let r = run_task_with(&build_task(TaskId::T7, 1), &kb, Level::E3, &ExecOptions::default());
    assert_eq!(r.outcome, Outcome::Solved);
    assert_eq!(r.value.and_then(|v| v.as_int()), Some(10));
    for level in [Level::I, Level::E1, Level::E2] {
        assert_eq!(run_task(&build_task(TaskId::T7, 1), &kb, level), Outcome::Inaccessible);
    }
}

#[test]
fn memorized_episode_fails_on_a_rearranged_world() {
    let out = run_task(&build_task(TaskId::T2, 0), &kb(), Level::I);
    assert!(matches!(out, Outcome::Failed(ref r) if r.contains("SetupMismatch")), "{out}");
}

#[test]
fn counting_runs_obey_the_principles() {
    let kb = kb();
    let opts = ExecOptions::default();
    for level in [Level::E1, Level::E2, Level::E3] {
        for seed in 0..5 {
            let task = build_task(TaskId::T3, seed);
            let r = run_task_with(&task, &kb, level, &opts);
            let p = check_principles(&r.trace, &task.world, &opts.numerals);
            assert!(p.single_trace_ok(), "{level} seed {seed}: {p:?}");
        }
    }
}

#[test]
fn irrelevance_judgements() {
    let kb = kb();
    let opts = ExecOptions::default();
    assert!(!judge_order_irrelevance(&kb, Level::I, &opts));
    for level in [Level::E1, Level::E2, Level::E3] {
        assert!(judge_order_irrelevance(&kb, level, &opts), "{level}");
    }
    assert!(!judge_object_irrelevance(&kb, Level::E1, &opts));
    assert!(judge_object_irrelevance(&kb, Level::E2, &opts));
    assert!(judge_object_irrelevance(&kb, Level::E3, &opts));
}

#[test]
fn outcomes_are_deterministic() {
    let kb = kb();
    for t in TaskId::ALL {
        let a = run_task_with(&build_task(t, 2), &kb, Level::E3, &ExecOptions::default());
        let b = run_task_with(&build_task(t, 2), &kb, Level::E3, &ExecOptions::default());
        assert_eq!(a, b, "{t}");
    }
}
