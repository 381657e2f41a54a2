//! Permutation routing on graphs where every step is a matching and matched
//! endpoints swap their pebbles.

pub mod cli;
pub mod clique;
pub mod cliquecontract;
pub mod connectivity;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hconn;
pub mod io;
pub mod matching;
pub mod maxroute;
pub mod oracle;
pub mod perm;
pub mod reductions;
pub mod schedule;
pub mod treeroute;
pub mod twostep;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
pub use perm::{cycle_decompose, CycleDecomposition, PebbleConfig, Permutation};
pub use schedule::{apply_matching, verify_schedule, MatchingStep, Schedule, VerificationReport};
