//! Cost model and solvers for offloading a dependency DAG of subtasks
//! across three execution tiers: the mobile device, an edge server, and
//! the remote cloud behind it.
//!
//! The model prices every placement decision in completion time and
//! energy, including cross-tier transfers of predecessor results, and
//! checks two hard constraints: the edge operator's utility must stay
//! strictly positive and the application must finish strictly within its
//! time budget. Solvers minimize total device-side energy under those
//! constraints.
//!
//! The arithmetic is generic over the scalar type (see [`scalar::Real`]);
//! the aliases below pin the common double-precision configuration.

pub mod costmodel;
pub mod scalar;
pub mod solvers;
pub mod taskgraph;

pub use costmodel::{
    BudgetSpec, CloudFetchEnergy, CostError, CostReport, OffloadPolicy, Scenario, Site,
    TransferSize, Uplink, Violation,
};
pub use scalar::Real;
pub use solvers::{
    brute_force, brute_force_with_cap, epsilon_bound, gain, initial_assignment,
    simulated_annealing, EpsilonBound, InfeasibleInfo, SaParams, Solution, SolveError, SolverKind,
};
pub use taskgraph::{GraphError, Subtask, TaskGraph};

/// Double-precision scenario.
pub type Scenario64 = Scenario<f64>;
/// Double-precision task graph.
pub type TaskGraph64 = TaskGraph<f64>;
/// Double-precision cost report.
pub type CostReport64 = CostReport<f64>;
/// Double-precision solver outcome.
pub type Solution64 = Solution<f64>;
