//! Maximum-flow and minimum-cut solvers tuned for repeated flow computations
//! on large sparse networks.
//!
//! The crate provides
//!
//! * [`FlowNetwork`], an arc-paired adjacency array with an implicit residual
//!   network and touched-arc tracking for sub-linear resets,
//! * [`Dinitz`], the textbook algorithm with a unidirectional BFS,
//! * [`DinitzOpt`], Dinitz driven by a balanced bidirectional BFS with lazy
//!   per-round state and pruning of the forward search fringe,
//! * [`PushRelabel`], highest-label push-relabel with three ways of
//!   extracting the source side of a minimum cut,
//! * [`gomory_hu`], Gusfield's cut-tree construction over any [`CutOracle`],
//! * [`generators`] for Erdős–Rényi, layered and one-dimensional threshold
//!   GIRG instances plus terminal sampling.

pub mod dinitz;
pub mod dinitz_opt;
mod error;
pub mod fixtures;
pub mod generators;
pub mod gomory_hu;
pub mod network;
pub mod push_relabel;
pub mod solver;
pub mod stats;

pub use dinitz::{CutResult, Dinitz, FlowResult, SearchLabels};
pub use dinitz_opt::{BalanceMetric, DinitzOpt, OptConfig};
pub use error::{FlowError, Result};

pub use network::{Arc, FlowNetwork, TerminalPair, VertexId};
pub use gomory_hu::{gusfield, CutOracle, GomoryHuTree, GusfieldStats};
pub use push_relabel::{CutStrategy, PushRelabel, PushRelabelCounters};
pub use solver::{Solver, SolverKind};
pub use stats::{SearchSpaceStats, StageTimes};
