//! Banked-memory model of butterfly access patterns.
//!
//! [`gen_trace`] replays the index arithmetic of the in-place radix-2 kernels
//! and the constant-geometry kernels without touching values. [`schedule`]
//! then issues the trace against a bank partition and reports the smallest
//! initiation interval at which no bank is asked for more than `ports`
//! accesses per cycle; [`feasible_partition`] searches for a partition that
//! reaches II=1.

mod config;
mod partition;
mod report;
mod schedule;
mod trace;

pub use config::{bank_of, BankConfig, Mapping, ScheduleShape};
pub use partition::{
    feasible_partition, feasible_partition_with, pease_nc_check_with, pease_nc_partition_check, Certificate,
    Partition, PartitionOutcome, SearchMethod, SwapCheck, DEFAULT_BUDGET, EXHAUSTIVE_MAX_ADDRS,
};
pub use report::BankSummaryRow;
pub use schedule::{conflict_graph, schedule, CoCycleGroup, Conflict, ConflictGraph, ConflictReport, CONFLICT_GRAPH_MAX_LOG};
pub use trace::{gen_trace, AccessTrace, ArrayId, Iteration, MAX_TRACE_LOG};
