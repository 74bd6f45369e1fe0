//! Take five bananas from the kitchen, then try again when only four are left.

use rr_core::interp::{dump_trace, ExecOptions};
use rr_core::ir::Level;
use rr_core::kb::KnowledgeBase;
use rr_core::tasks::{build_task_with, run_task_with, TaskId, TaskParams};

fn main() {
    let kb = KnowledgeBase::canonical().all();
    for objects in [None, Some(4)] {
        let params = TaskParams { objects, ..TaskParams::default() };
        let r = run_task_with(&build_task_with(TaskId::T5, 0, &params), &kb, Level::E2, &ExecOptions::default());
        println!("{} bananas available: {}", objects.map_or("enough".to_string(), |n| n.to_string()), r.outcome);
        print!("{}", dump_trace(&r.trace));
    }
}
