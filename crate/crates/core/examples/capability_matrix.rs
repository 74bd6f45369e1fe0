//! Build the level by task matrix from the canonical knowledge and compare
//! it with the frozen one.

use rr_core::capability::{build_matrix, compare, Matrix, DEFAULT_SEEDS};
use rr_core::fixtures::GOLDEN_MATRIX;
use rr_core::interp::ExecOptions;
use rr_core::kb::KnowledgeBase;

fn main() {
    let kb = KnowledgeBase::canonical().all();
    let m = build_matrix(&kb, &DEFAULT_SEEDS, &ExecOptions::default());
    print!("{}", m.render_text());
    let golden = Matrix::from_tsv(GOLDEN_MATRIX).unwrap();
    let diffs = compare(&golden, &m);
    println!("{} difference(s) from the golden matrix", diffs.len());
    for d in diffs {
        println!("  {d}");
    }
}
