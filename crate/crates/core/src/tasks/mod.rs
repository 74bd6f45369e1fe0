//! Task library: worlds, queries and success predicates for the nine
//! capability probes, plus the counting-principle checkers.

mod principles;
mod run;

pub use principles::{check_principles, judge_object_irrelevance, judge_order_irrelevance, PrincipleReport};
pub use run::{run_task, run_task_with, TaskRun};

use crate::interp::{Arrangement, Value, World};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaskId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
}

impl TaskId {
    pub const ALL: [TaskId; 9] =
        [TaskId::T1, TaskId::T2, TaskId::T3, TaskId::T4, TaskId::T5, TaskId::T6, TaskId::T7, TaskId::T8, TaskId::T9];

    pub fn describe(self) -> &'static str {
        match self {
            TaskId::T1 => "count the memorized row of three apples",
            TaskId::T2 => "count the same apples rearranged",
            TaskId::T3 => "count a row of apples of another size",
            TaskId::T4 => "count pencils or cups",
            TaskId::T5 => "fetch five bananas",
            TaskId::T6 => "decide whether 5 or 7 is bigger by fetching",
            TaskId::T7 => "how many children fit on a bus with 10 seats",
            TaskId::T8 => "recall the number of apples after rearranging",
            TaskId::T9 => "tell the bigger of two candy heaps without counting",
        }
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown task id `{0}` (expected T1 to T9)")]
pub struct UnknownTaskId(pub String);

impl FromStr for TaskId {
    type Err = UnknownTaskId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskId::ALL.into_iter().find(|t| t.to_string().eq_ignore_ascii_case(s)).ok_or_else(|| UnknownTaskId(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Failed(String),
    Inaccessible,
}

impl Outcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved)
    }

    /// `Solved`, `Failed` or `Inaccessible`, without the reason.
    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Solved => "Solved",
            Outcome::Failed(_) => "Failed",
            Outcome::Inaccessible => "Inaccessible",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Failed(reason) => write!(f, "Failed({reason})"),
            other => f.write_str(other.kind()),
        }
    }
}

/// What the task asks of the knowledge: an operation by name and arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub concept: String,
    pub op: String,
    pub args: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: TaskId,
    pub seed: u64,
    pub world: World,
    pub caller_domain: String,
    pub query: Query,
}

/// Knobs for the randomized tasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskParams {
    /// Overrides the object count of T3, T4 and T5.
    pub objects: Option<usize>,
    /// Heap sizes of T9, smaller first.
    pub heaps: (usize, usize),
    /// Numbers compared in T6.
    pub compare: (i64, i64),
}

impl Default for TaskParams {
    fn default() -> Self {
        TaskParams { objects: None, heaps: (7, 8), compare: (5, 7) }
    }
}

pub const BUS_SEATS: usize = 10;
pub const CONSERVED_APPLES: usize = 16;
pub const FETCH_COUNT: i64 = 5;
pub const PILE_SIZE: usize = 15;

/// The world the level-I fixture was recorded in: three apples in a row on
/// a table in a room.
pub fn training_world() -> World {
    scene(3, "ROOM1", "TABLE1", "apples", "APPLE", "Apple", Arrangement::Line, 0)
}

/// A counting scene: the actor, a room, a table, a hand, and `n` objects on
/// the table forming one group.
#[allow(clippy::too_many_arguments)]
pub fn scene(n: usize, room: &str, table: &str, container: &str, prefix: &str, kind: &str, arrangement: Arrangement, seed: u64) -> World {
    let mut w = World::new(seed);
    w.add_entity("ME", "Person", None);
    w.add_entity(room, "Room", None);
    w.add_entity(table, "Table", None);
    w.add_entity("HAND", "Hand", None);
    let ids = w.add_group(container, prefix, kind, n, arrangement);
    w.add_fact("In", &["ME", room]);
    for id in &ids {
        w.add_fact("On", &[id, table]);
    }
    w.focus = Some(container.to_string());
    w
}

fn pick_arrangement(rng: &mut ChaCha8Rng) -> Arrangement {
    Arrangement::ALL[rng.gen_range(0..Arrangement::ALL.len())]
}

pub fn build_task(id: TaskId, seed: u64) -> Task {
    build_task_with(id, seed, &TaskParams::default())
}

pub fn build_task_with(id: TaskId, seed: u64, params: &TaskParams) -> Task {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((id as u64 + 1) << 32));
    let counting = |domain: &str| (domain.to_string(), Query { concept: "Counting".into(), op: "Counting".into(), args: vec![] });
    let (world, (caller_domain, query)) = match id {
        TaskId::T1 => (training_world(), counting("apples")),
        TaskId::T2 => {
            let mut w = training_world();
            w.arrangements.insert("apples".into(), Arrangement::Scattered);
            w.rng_seed = seed;
            (w, counting("apples"))
        }
        TaskId::T3 => {
            let n = params.objects.unwrap_or_else(|| rng.gen_range(1..=20));
            let arrangement = pick_arrangement(&mut rng);
            (scene(n, "ROOM2", "TABLE2", "apples", "APPLE", "Apple", arrangement, seed), counting("apples"))
        }
        TaskId::T4 => {
            let n = params.objects.unwrap_or_else(|| rng.gen_range(1..=20));
            let arrangement = pick_arrangement(&mut rng);
            let (container, prefix, kind) = if seed % 2 == 0 { ("pencils", "PENCIL", "Pencil") } else { ("cups", "CUP", "Cup") };
            (scene(n, "ROOM2", "TABLE2", container, prefix, kind, arrangement, seed), counting(container))
        }
        TaskId::T5 => {
            let n = params.objects.unwrap_or_else(|| rng.gen_range(5..=20));
            let w = scene(n, "KITCHEN", "TABLE2", "bananas", "BANANA", "Banana", pick_arrangement(&mut rng), seed);
            let q = Query {
                concept: "Counting".into(),
                op: "FetchObjects".into(),
                args: vec![Value::Token("bananas".into()), Value::Int(FETCH_COUNT)],
            };
            (w, ("bananas".to_string(), q))
        }
        TaskId::T6 => {
            let w = scene(PILE_SIZE, "ROOM2", "TABLE2", "pile", "BLOCK", "Block", Arrangement::Scattered, seed);
            let q = Query { concept: "Counting".into(), op: "FetchObjects".into(), args: vec![Value::Token("pile".into()), Value::Int(params.compare.0)] };
            (w, ("numbers".to_string(), q))
        }
        TaskId::T7 => {
            let mut w = World::new(seed);
            w.add_entity("ME", "Person", None);
            w.add_group("Seats_of_Car", "SEAT", "Seat", BUS_SEATS, Arrangement::Line);
            w.add_group("Passengers", "CHILD", "Child", BUS_SEATS, Arrangement::Scattered);
            w.known_sums.insert("Seats_of_Car".into(), BUS_SEATS as i64);
            w.focus = Some("Seats_of_Car".into());
            let q = Query {
                concept: "BusSeats".into(),
                op: "Solve".into(),
                args: vec![Value::Token("Seats_of_Car".into()), Value::Token("Passengers".into())],
            };
            (w, ("transport".to_string(), q))
        }
        TaskId::T8 => (
            scene(CONSERVED_APPLES, "ROOM2", "TABLE2", "apples", "APPLE", "Apple", Arrangement::Square, seed),
            counting("apples"),
        ),
        TaskId::T9 => {
            let (small, big) = params.heaps;
            let (a, b) = if seed % 2 == 0 { (small, big) } else { (big, small) };
            let mut w = World::new(seed);
            w.add_entity("ME", "Person", None);
            w.add_group("heap1", "CANDYA", "Candy", a, Arrangement::Scattered);
            w.add_group("heap2", "CANDYB", "Candy", b, Arrangement::Scattered);
            w.focus = Some("heap1".into());
            let q = Query {
                concept: "Counting".into(),
                op: "OneToOneMap".into(),
                args: vec![Value::Token("heap1".into()), Value::Token("heap2".into())],
            };
            (w, ("candy".to_string(), q))
        }
    };
    Task { id, seed, world, caller_domain, query }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t1_is_the_training_world_for_every_seed() {
        assert_eq!(build_task(TaskId::T1, 0).world, training_world());
        assert_eq!(build_task(TaskId::T1, 9).world, training_world());
        assert_eq!(training_world().containers["apples"].len(), 3);
        assert_eq!(training_world().arrangements["apples"], Arrangement::Line);
    }

    #[test]
    fn bus_and_conservation_worlds() {
        assert_eq!(build_task(TaskId::T7, 0).world.containers["Seats_of_Car"].len(), 10);
        let t8 = build_task(TaskId::T8, 0);
        assert_eq!(t8.world.containers["apples"].len(), 16);
        assert_eq!(t8.world.arrangements["apples"], Arrangement::Square);
    }

    #[test]
    fn build_is_deterministic() {
        for id in TaskId::ALL {
            assert_eq!(build_task(id, 5), build_task(id, 5));
            assert!(build_task(id, 5).world.check().is_ok());
        }
    }

    #[test]
    fn task_ids_parse() {
        assert_eq!("t5".parse::<TaskId>().unwrap(), TaskId::T5);
        assert!("T10".parse::<TaskId>().is_err());
    }
}
