//! The canonical fixture texts, embedded at build time.

use crate::dsl::{parse, SourceText};
use crate::ir::ConceptUnit;

pub const I_COUNTING_APPLES: &str = include_str!("../fixtures/i_counting_apples.rr");
pub const E1_COUNTING_APPLES: &str = include_str!("../fixtures/e1_counting_apples.rr");
pub const GLOBALS: &str = include_str!("../fixtures/globals.rr");
pub const E2_COUNTING: &str = include_str!("../fixtures/e2_counting.rr");
pub const E3_COUNTING: &str = include_str!("../fixtures/e3_counting.rr");
pub const FETCH_OBJECTS: &str = include_str!("../fixtures/fetch_objects.rr");
pub const BUS_SEATS: &str = include_str!("../fixtures/bus_seats.rr");
pub const CONSERVATION: &str = include_str!("../fixtures/conservation.rr");
pub const GOLDEN_MATRIX: &str = include_str!("../fixtures/golden/matrix.tsv");

/// Every fixture as `(file name, text)`, in chain order.
pub const ALL: [(&str, &str); 8] = [
    ("i_counting_apples.rr", I_COUNTING_APPLES),
    ("e1_counting_apples.rr", E1_COUNTING_APPLES),
    ("globals.rr", GLOBALS),
    ("e2_counting.rr", E2_COUNTING),
    ("e3_counting.rr", E3_COUNTING),
    ("fetch_objects.rr", FETCH_OBJECTS),
    ("bus_seats.rr", BUS_SEATS),
    ("conservation.rr", CONSERVATION),
];

/// Parse an embedded fixture. Fixtures are checked by the test suite, so a
/// failure here is a build defect.
pub fn load(text: &str) -> Vec<ConceptUnit> {
    match parse(&SourceText::memory(text)) {
        Ok(units) => units,
        Err(errs) => panic!("embedded fixture does not parse: {}", errs[0]),
    }
}

pub fn load_one(text: &str) -> ConceptUnit {
    let mut units = load(text);
    assert_eq!(units.len(), 1, "fixture holds more than one unit");
    units.remove(0)
}
