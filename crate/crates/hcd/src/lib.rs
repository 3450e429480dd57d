//! Analysis toolkit for H-coloured digraphs.
//!
//! A host digraph `D` has its arcs coloured by the vertices of a pattern
//! digraph `H`. A walk in `D` is an H-walk when its colour sequence is a
//! walk in `H`. On top of that single notion the crate builds:
//!
//! * H-walk reachability and the H-closure ([`reach`]);
//! * simple-cycle enumeration, H-cycle recognition and the symmetric-arc
//!   condition ([`cycles`]);
//! * kernels, H-kernels and their solvers ([`kernel`]);
//! * H-semikernels modulo an arc block and the semikernel digraph
//!   ([`semikernel`]);
//! * rainbow C3/P3 detection ([`rainbow`]);
//! * a text format for instances ([`format`]) and a random-instance
//!   verification harness ([`harness`]).

pub mod cycles;
pub mod digraph;
pub mod error;
pub mod format;
pub mod harness;
pub mod instance;
pub mod kernel;
pub mod rainbow;
pub mod reach;
pub mod semikernel;

pub use digraph::{Arc, ColourId, HostDigraph, PatternDigraph, VertexId};
pub use error::{CounterexampleReport, Error, Result};
pub use instance::{
    ArcPartition, ArcSet, ColouredInstance, Colouring, ValidationReport, VertexSet, Violation,
    Walk,
};
