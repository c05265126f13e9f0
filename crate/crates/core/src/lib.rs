//! Solvers and model generators for the signed Roman domination problem
//! (SRDP) and the signed total Roman domination problem (STRDP).
//!
//! * [`graph`]: graphs, edge-list I/O and instance generators
//! * [`domination`]: labelings, neighborhood sums, feasibility, weight
//! * [`exact`]: exhaustive enumeration and branch-and-bound
//! * [`model`]: ILP (RR, BVV) and CP formulations, LP/MPS/CP text output,
//!   and the mapping between the two LP relaxations
//! * [`vns`]: variable neighborhood search with a penalty function

pub mod domination;
pub mod exact;
pub mod graph;
pub mod model;
pub mod vns;

pub use domination::{Assignment, ProblemKind};
pub use exact::{SolveResult, SolveStatus};
pub use graph::Graph;
