use rr_core::fixtures::{self, load};
use rr_core::interp::{execute, numerals, Arrangement, World};
use rr_core::ir::{validate, Level, IMPLICIT_OP};
use rr_core::kb::{demonstration, KbError, KnowledgeBase};
use rr_core::redescribe::Phase;
use rr_core::tasks::{scene, training_world, Outcome};

fn apples(n: usize, seed: u64) -> World {
    scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, seed)
}

#[test]
fn recording_the_training_episode_gives_the_reference_instance() {
    let mut kb = KnowledgeBase::new();
    let w = training_world();
    let got = kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap();
    let want = load(fixtures::I_COUNTING_APPLES).into_iter().find(|u| !u.is_globals()).unwrap();
    assert!(got.same_shape(&want), "{got:#?}");
}

#[test]
fn one_apple_and_repeated_recordings() {
    let mut kb = KnowledgeBase::new();
    let w = apples(1, 0);
    let trace = demonstration(&w, &numerals());
    let a = kb.record_instance(&trace, &w, "apples").unwrap();
    assert_eq!(a.level, Level::I);
    assert!(validate(&a).is_empty());
    let b = kb.record_instance(&trace, &w, "apples").unwrap();
    assert_ne!(a.name, b.name);
    assert!(a.same_shape(&b));
    assert_eq!(kb.census()[&Level::I], 2);
    assert_eq!(kb.record_instance(&[], &w, "apples").unwrap_err(), KbError::EmptyTrace);
}

#[test]
fn replay_then_record_is_a_fixpoint() {
    for n in [1, 3, 6] {
        let mut kb = KnowledgeBase::new();
        let w = apples(n, n as u64);
        let first = kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap();
        let replay = execute(&[], &first, IMPLICIT_OP, &[], &w, "apples", 1000).unwrap();
        let second = kb.record_instance(&replay.trace, &w, "apples").unwrap();
        assert!(first.same_shape(&second), "n = {n}");
    }
}

#[test]
fn save_and_load_round_trip() {
    let kb = KnowledgeBase::canonical();
    let dir = tempfile::tempdir().unwrap();
    kb.save(dir.path()).unwrap();
    assert_eq!(KnowledgeBase::load(dir.path()).unwrap(), kb);
}

#[test]
fn empty_directory_loads_as_empty() {
    let dir = tempfile::tempdir().unwrap();
    let kb = KnowledgeBase::load(dir.path()).unwrap();
    assert!(kb.is_empty() && kb.log.is_empty());
    assert!(matches!(KnowledgeBase::load(&dir.path().join("missing")), Err(KbError::Io(_))));
}

#[test]
fn duplicate_units_are_refused_on_load() {
    let dir = tempfile::tempdir().unwrap();
    KnowledgeBase::canonical().save(dir.path()).unwrap();
    let path = dir.path().join("manifest.tsv");
    let text = std::fs::read_to_string(&path).unwrap();
    let first_unit = text.lines().nth(1).unwrap().to_string();
    std::fs::write(&path, text.replacen(&first_unit, &format!("{first_unit}\n{first_unit}"), 1)).unwrap();
    assert!(matches!(KnowledgeBase::load(dir.path()), Err(KbError::DuplicateUnit(..))));
}

#[test]
fn corrupt_unit_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let kb = KnowledgeBase::canonical();
    kb.save(dir.path()).unwrap();
    let file = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).find(|p| p.extension().is_some_and(|x| x == "rr")).unwrap();
    std::fs::write(&file, "@level(E9) class {").unwrap();
    assert!(matches!(KnowledgeBase::load(dir.path()), Err(KbError::Parse(_))));
}

fn recorded(sizes: &[usize]) -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    for (i, &n) in sizes.iter().enumerate() {
        let w = apples(n, i as u64);
        kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap();
    }
    kb
}

#[test]
fn three_mastered_instances_fire_the_first_phase() {
    let mut kb = recorded(&[3, 4, 5]);
    let reports = kb.advance(3);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].phase, Phase::P1);
    assert_eq!(kb.census()[&Level::I], 3);
    assert_eq!(kb.census()[&Level::E1], 1);
}

#[test]
fn advance_stops_when_not_ready_or_at_the_top() {
    let mut kb = recorded(&[3, 4, 5]);
    assert!(kb.advance(5).is_empty());
    let mut top = KnowledgeBase::new();
    for u in load(fixtures::GLOBALS).into_iter().chain(load(fixtures::E3_COUNTING)) {
        top.insert(u).unwrap();
    }
    assert!(top.advance(1).is_empty());
}

#[test]
fn later_phases_need_logged_successes() {
    let mut kb = recorded(&[3, 4, 5]);
    kb.advance(3);
    assert!(kb.advance(3).is_empty());
    let e1 = kb.at_level(Level::E1)[0].name.clone();
    for w in ["w1", "w2", "w3"] {
        kb.log_outcome(&e1, w, Outcome::Solved);
    }
    let reports = kb.advance(3);
    assert_eq!(reports.iter().map(|r| r.phase).collect::<Vec<_>>(), [Phase::P2]);
    assert!(kb.census()[&Level::E2] >= 1);
    assert_eq!(kb.census()[&Level::I], 3);
}
