//! Parse every reference unit, validate it and print a one-line summary.

use rr_core::dsl::{parse, print_canonical, SourceText};
use rr_core::fixtures;
use rr_core::ir::level_metrics;

fn main() {
    for (name, text) in fixtures::ALL {
        let units = parse(&SourceText::memory(text)).expect("reference units parse");
        let m = level_metrics(units.iter());
        let same = print_canonical(&units) == text;
        println!(
            "{name:<20} units {} ops {} consts {} mean visibility {:.2} round-trip {}",
            m.unit_count,
            m.operation_count,
            m.const_count,
            m.mean_visibility(),
            if same { "exact" } else { "differs" }
        );
    }
}
