//! Check the counting principles of single runs at each level, and the two
//! principles that need several runs.

use rr_core::interp::ExecOptions;
use rr_core::ir::Level;
use rr_core::kb::KnowledgeBase;
use rr_core::tasks::{build_task, check_principles, judge_object_irrelevance, judge_order_irrelevance, run_task_with, TaskId};

fn main() {
    let kb = KnowledgeBase::canonical().all();
    let opts = ExecOptions::default();
    for level in Level::ALL {
        let task = build_task(TaskId::T3, 5);
        let run = run_task_with(&task, &kb, level, &opts);
        let p = check_principles(&run.trace, &task.world, &opts.numerals);
        println!(
            "{:<3} {:<40} one-to-one {} stable order {} cardinality {} order-free {} object-free {}",
            level.to_string(),
            run.outcome.to_string(),
            p.one_to_one,
            p.stable_order,
            p.cardinality,
            judge_order_irrelevance(&kb, level, &opts),
            judge_object_irrelevance(&kb, level, &opts),
        );
    }
}
