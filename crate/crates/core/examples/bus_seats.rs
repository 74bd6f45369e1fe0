//! "How many children can sit on the bus?" answered by matching seats and
//! passengers one to one and carrying the known seat count across.

use rr_core::interp::ExecOptions;
use rr_core::ir::Level;
use rr_core::kb::KnowledgeBase;
use rr_core::tasks::{build_task, run_task_with, TaskId};

fn main() {
    let kb = KnowledgeBase::canonical().all();
    let task = build_task(TaskId::T7, 0);
    for level in Level::ALL {
        let r = run_task_with(&task, &kb, level, &ExecOptions::default());
        let value = r.value.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        println!("{level}: {} (answer {value})", r.outcome);
    }
}
