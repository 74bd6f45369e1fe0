//! Count 16 apples, spread them into a circle and ask again. Only the E3
//! set keeps its cardinal sum without recounting.

use rr_core::interp::{Event, ExecOptions};
use rr_core::ir::Level;
use rr_core::kb::KnowledgeBase;
use rr_core::tasks::{build_task, run_task_with, TaskId};

fn main() {
    let kb = KnowledgeBase::canonical().all();
    let task = build_task(TaskId::T8, 0);
    for level in [Level::E2, Level::E3] {
        let r = run_task_with(&task, &kb, level, &ExecOptions::default());
        let pointed = r.trace.iter().filter(|e| matches!(e.event, Event::PointedTo(_))).count();
        println!("{level}: {} after {pointed} pointing(s)", r.outcome);
    }
}
