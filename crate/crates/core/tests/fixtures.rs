use rr_core::dsl::{parse, print_canonical, SourceText};
use rr_core::fixtures;
use rr_core::ir::{level_metrics, validate_set, Level, Visibility};

#[test]
fn every_fixture_round_trips_byte_for_byte() {
    for (name, text) in fixtures::ALL {
        let units = parse(&SourceText::memory(text)).unwrap_or_else(|e| panic!("{name}: {}", e[0]));
        assert_eq!(print_canonical(&units), text, "{name}");
    }
}

#[test]
fn fixture_set_validates_as_a_whole() {
    let all: Vec<_> = fixtures::ALL.iter().flat_map(|(_, t)| fixtures::load(t)).collect();
    assert_eq!(validate_set(&all), vec![]);
}

#[test]
fn implicit_instance_shape() {
    let u = fixtures::load_one(fixtures::I_COUNTING_APPLES);
    assert_eq!(u.attributes.len(), 10);
    assert!(u.attributes.iter().all(|a| a.is_const()));
    let body = &u.implicit_operation().unwrap().body;
    let actions = body.iter().filter(|s| matches!(s, rr_core::ir::Statement::Action(_))).count();
    assert_eq!(actions, 10);
    let m = level_metrics([&u]);
    assert_eq!(m.loop_count, 0);
    assert_eq!(m.count(Visibility::Private), m.members());
}

#[test]
fn e1_has_two_loops_and_no_public_section() {
    let u = fixtures::load_one(fixtures::E1_COUNTING_APPLES);
    assert_eq!(u.level, Level::E1);
    let m = level_metrics([&u]);
    assert!(m.loop_count >= 2);
    assert_eq!(m.count(Visibility::Public), 0);
    assert!(!fixtures::E1_COUNTING_APPLES.contains("public:"));
}

#[test]
fn e3_fixture_names() {
    let names: Vec<_> = fixtures::load(fixtures::E3_COUNTING).into_iter().map(|u| u.name).collect();
    assert_eq!(names, ["OrdinalNumber", "Set", "Counting"]);
}
