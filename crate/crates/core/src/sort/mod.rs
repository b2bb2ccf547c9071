//! Instrumented sorting algorithms.

mod adaptive;
mod bitonic;
mod parallel;
mod record;

pub use adaptive::{sort_adaptive, INSERTION_THRESHOLD};
pub use bitonic::{
    apply_schedule, bitonic_stage_schedule, comparator_total, comparators_for_len, sort_bitonic, sort_bitonic_with,
    stage_count, Comparator, Stage,
};
pub use parallel::{default_workers, sort_parallel, sort_parallel_with_grain, worker_pool, DEFAULT_GRAIN};
pub use record::{is_sorted, pad_to_power_of_two, records_from_keys, AlgorithmId, KeyRecord, SortStats};
