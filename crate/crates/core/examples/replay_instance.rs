//! Replay the memorized 3-apple episode, then watch it refuse a world where
//! one remembered fact no longer holds.

use rr_core::fixtures;
use rr_core::interp::{dump_trace, execute, Arrangement};
use rr_core::ir::IMPLICIT_OP;
use rr_core::tasks::{scene, training_world};

fn main() {
    let inst = fixtures::load(fixtures::I_COUNTING_APPLES).into_iter().find(|u| !u.is_globals()).unwrap();
    let r = execute(&[], &inst, IMPLICIT_OP, &[], &training_world(), "apples", 1000).unwrap();
    print!("{}", dump_trace(&r.trace));

    let scattered = scene(3, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Scattered, 0);
    match execute(&[], &inst, IMPLICIT_OP, &[], &scattered, "apples", 1000) {
        Ok(_) => println!("unexpectedly replayed"),
        Err(e) => println!("scattered apples: {e}"),
    }
}
