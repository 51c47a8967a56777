//! Benchmark harness around `flowkit-core`: graph file formats, flow,
//! scaling and Gomory-Hu workloads, and CSV output.

mod error;
pub mod formats;
pub mod record;
pub mod regression;
pub mod workload;

pub use error::{BenchError, Result};
pub use formats::{parse_dimacs_max, parse_edge_list, write_dimacs, write_edge_list, DimacsFile, EdgeListFile};
pub use record::{strip_timing_columns, to_csv_string, write_csv, AggregateRecord, CsvRecord, GhSummary};
pub use regression::loglog_slope;
pub use workload::{
    run_flow_workload, run_flows, run_gomory_hu, run_scaling, sample_pairs, FlowConfig, GhConfig, Instance, PairSpec,
    ScalingConfig, ScalingOutput,
};
