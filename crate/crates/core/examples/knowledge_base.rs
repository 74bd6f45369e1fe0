//! Grow a knowledge base from recorded episodes by practice and automatic
//! advancement, save it to a directory and load it back.

use rr_core::capability::DEFAULT_SEEDS;
use rr_core::interp::{numerals, Arrangement, ExecOptions};
use rr_core::ir::Level;
use rr_core::kb::{demonstration, KnowledgeBase, DEFAULT_THRESHOLD};
use rr_core::tasks::{scene, TaskId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut kb = KnowledgeBase::new();
    for (seed, n) in [3, 4, 5].into_iter().enumerate() {
        let w = scene(n, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, seed as u64);
        kb.record_instance(&demonstration(&w, &numerals()), &w, "apples")?;
    }
    println!("recorded: {:?}", kb.census());

    let tasks = [TaskId::T1, TaskId::T2, TaskId::T3];
    for level in [Level::I, Level::E1, Level::E2] {
        kb.practice(level, &tasks, &DEFAULT_SEEDS, &ExecOptions::default());
        for report in kb.advance(DEFAULT_THRESHOLD) {
            println!("{:?} fired, outputs {:?}", report.phase, report.outputs);
        }
        println!("after practising at {level}: {:?}", kb.census());
    }

    let dir = std::env::temp_dir().join("rr-example-kb");
    kb.save(&dir)?;
    let back = KnowledgeBase::load(&dir)?;
    println!("saved to {} and loaded back equal: {}", dir.display(), back == kb);
    Ok(())
}
