//! Placement solvers for the energy-minimization problem.
//!
//! Three strategies over the same objective (total completion energy,
//! subject to the utility and budget constraints):
//!
//! * [`brute_force`] — exhaustive enumeration of all `3^N` placements;
//!   the ground-truth optimum at small `N`.
//! * [`gain`] — greedy per-task minimum-energy assignment followed by a
//!   repair loop that restores utility and budget feasibility one move
//!   at a time.
//! * [`simulated_annealing`] — seeded local search starting from the
//!   greedy solution, tracking the best feasible policy ever visited.
//!
//! [`epsilon_bound`] certifies the greedy result against per-task
//! min/max energy envelopes.

mod annealing;
mod bounds;
mod brute_force;
mod gain;

use thiserror::Error;

pub use annealing::{simulated_annealing, SaParams};
pub use bounds::{epsilon_bound, EpsilonBound};
pub use brute_force::{brute_force, brute_force_with_cap, BRUTE_FORCE_DEFAULT_CAP};
pub use gain::{gain, initial_assignment};

use crate::costmodel::{CostError, CostReport, OffloadPolicy, Violation};
use crate::scalar::Real;

/// Which solver produced a [`Solution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    BruteForce,
    Gain,
    SimulatedAnnealing,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [
        SolverKind::BruteForce,
        SolverKind::Gain,
        SolverKind::SimulatedAnnealing,
    ];

    /// Short stable name used in CSV rows and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::BruteForce => "brute_force",
            SolverKind::Gain => "gain",
            SolverKind::SimulatedAnnealing => "sa",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "brute_force" | "bf" => Some(SolverKind::BruteForce),
            "gain" => Some(SolverKind::Gain),
            "sa" | "simulated_annealing" => Some(SolverKind::SimulatedAnnealing),
            _ => None,
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A solver outcome: the policy, its full evaluation, and run metadata.
///
/// `report` is recomputable bit-identically via `scenario.evaluate(&policy)`,
/// and a solution is only returned when that evaluation is feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<F> {
    pub policy: OffloadPolicy,
    pub report: CostReport<F>,
    pub solver: SolverKind,
    /// Solver-specific work counter: placements evaluated (brute force),
    /// repair moves applied (gain), or annealing steps.
    pub iterations: u64,
    /// Wall-clock seconds on a monotonic clock.
    pub wall_time: f64,
    pub feasible: bool,
}

/// Details attached to an infeasible solver outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibleInfo<F> {
    /// The last policy the solver held, if it held one at all.
    pub last_policy: Option<OffloadPolicy>,
    pub violations: Vec<Violation<F>>,
    pub iterations: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError<F: Real> {
    #[error("instance has {n} subtasks, above the exhaustive-search cap of {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("no feasible policy found: {}", describe_violations(&.0.violations))]
    Infeasible(InfeasibleInfo<F>),
    #[error("invalid solver parameters: {message}")]
    InvalidParams { message: String },
    #[error("per-task energy lower bound is zero, cannot form a ratio")]
    DivisionByZero,
    #[error(transparent)]
    Cost(#[from] CostError),
}

fn describe_violations<F: Real>(violations: &[Violation<F>]) -> String {
    if violations.is_empty() {
        return "no candidate move available".to_string();
    }
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Measures `f`, returning its output and elapsed seconds.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}
