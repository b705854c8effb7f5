//! Benchmark and batch tooling around `rcsp-core`: run records, grouped
//! statistics, and the instance runner behind the `rcsp` binary.

pub mod record;
pub mod runner;
pub mod summary;

pub use record::{read_csv, read_json, write_csv, write_json, Outcome, RunRecord, CSV_HEADER};
pub use runner::{run_all, run_batch, run_instance, run_on_graph, BenchConfig, Instance, Limits, MapSpec, QuerySource};
pub use summary::{cactus, summarize, CactusRow, SummaryRow};
