//! Describe each reference unit in plain English.

use rr_core::capability::verbalize;
use rr_core::fixtures;

fn main() {
    for (_, text) in fixtures::ALL {
        for u in fixtures::load(text) {
            println!("{}", verbalize(&u));
        }
    }
}
