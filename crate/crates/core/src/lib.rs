//! Graph k-coloring through penalty QUBOs, diagonal Ising Hamiltonians and
//! variational quantum algorithms (VQE, QAOA) on a dense statevector
//! simulator, with exact and heuristic classical baselines.

pub mod cases;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod optimize;
pub mod ising;
pub mod qubo;
pub mod statevector;
pub mod variational;

pub use cases::{builtin_case, load_case, CaseStudy, ReferenceSolution};
pub use error::{Error, Result};
pub use graph::{ColorAssignment, Graph, Interval, IntervalSet};
pub use optimize::{minimize, Method, ObjectiveFunction, OptimizerConfig, OptimizerTrace};
pub use ising::{qubo_to_ising, IsingModel};
pub use qubo::{BitVector, ColoringQubo, Decoded};
pub use statevector::{Gate, Statevector};
pub use variational::{AnsatzSpec, Hamiltonian, QaoaProblem, RunOptions, SolverResult, VqeProblem};
