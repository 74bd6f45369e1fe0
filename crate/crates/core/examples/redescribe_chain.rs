//! Walk the whole chain: record two episodes, compress them into an E1
//! class, generalize to E2, decompose to E3. Each pass prints its report.

use rr_core::dsl::print_canonical;
use rr_core::interp::{numerals, Arrangement};
use rr_core::kb::{demonstration, KnowledgeBase};
use rr_core::redescribe::{antiunify_instances, decompose_to_e3, generalize_to_e2};
use rr_core::tasks::scene;

fn main() {
    let mut kb = KnowledgeBase::new();
    let instances: Vec<_> = [3, 4]
        .into_iter()
        .map(|n| {
            let w = scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, 0);
            kb.record_instance(&demonstration(&w, &numerals()), &w, "apples").unwrap()
        })
        .collect();

    let (e1, r1) = antiunify_instances(&instances).unwrap();
    print!("{}", r1.to_text());
    println!("{}", print_canonical(std::slice::from_ref(&e1)));

    let (e2, r2) = generalize_to_e2(&e1).unwrap();
    print!("{}", r2.to_text());

    let (e3, r3) = decompose_to_e3(&e2).unwrap();
    print!("{}", r3.to_text());
    println!("{}", print_canonical(&e3));
}
