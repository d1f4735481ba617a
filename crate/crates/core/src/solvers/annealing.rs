//! Simulated annealing seeded by the greedy solution.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::costmodel::Scenario;
use crate::costmodel::Site;
use crate::scalar::Real;

use super::{gain, timed, Solution, SolveError, SolverKind};

/// Annealing schedule and seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams<F> {
    /// Initial temperature, in energy units.
    pub t0: F,
    /// Multiplicative cooling factor per step, in (0, 1).
    pub cool: F,
    /// Stop temperature, > 0 and below `t0`.
    pub t_min: F,
    /// RNG seed; identical seeds give bit-identical runs.
    pub seed: u64,
}

impl<F: Real> SaParams<F> {
    pub fn new(t0: F, cool: F, t_min: F, seed: u64) -> Result<Self, SolveError<F>> {
        if !(cool > F::zero() && cool < F::one()) {
            return Err(SolveError::InvalidParams {
                message: format!("cool must lie in (0, 1), got {cool}"),
            });
        }
        if !(t_min > F::zero() && t0 > t_min) {
            return Err(SolveError::InvalidParams {
                message: format!("temperatures must satisfy t0 > t_min > 0, got t0={t0} t_min={t_min}"),
            });
        }
        Ok(Self {
            t0,
            cool,
            t_min,
            seed,
        })
    }

    /// Default schedule: starts at ten times the seeding solution's
    /// energy (floored well above `t_min`), cools by 0.95 down to 0.1.
    pub fn scaled(initial_energy: F, seed: u64) -> Self {
        let t_min = F::from_f64(0.1);
        let t0 = (F::from_f64(10.0) * initial_energy).max(t_min * F::from_f64(10.0));
        Self {
            t0,
            cool: F::from_f64(0.95),
            t_min,
            seed,
        }
    }
}

/// Metropolis acceptance rule for a minimization move at temperature
/// `temperature`: improvements always pass, regressions pass with
/// probability `exp(-delta/temperature)` clamped into [0, 1].
pub fn acceptance_probability<F: Real>(delta_energy: F, temperature: F) -> F {
    if delta_energy <= F::zero() {
        F::one()
    } else {
        (-(delta_energy / temperature)).exp().min(F::one())
    }
}

/// Anneals from the greedy solution: each step reassigns one uniformly
/// random subtask to one uniformly random site, discards mutations that
/// break either constraint, Metropolis-accepts the rest, and cools the
/// temperature multiplicatively. Returns the best feasible policy ever
/// seen. Deterministic for a fixed seed.
pub fn simulated_annealing<F: Real>(
    scenario: &Scenario<F>,
    params: &SaParams<F>,
) -> Result<Solution<F>, SolveError<F>> {
    SaParams::new(params.t0, params.cool, params.t_min, params.seed)?;
    let (outcome, wall_time) = timed(|| anneal(scenario, params));
    let (solution, steps) = outcome?;
    Ok(Solution {
        wall_time,
        iterations: steps,
        solver: SolverKind::SimulatedAnnealing,
        ..solution
    })
}

fn anneal<F: Real>(
    scenario: &Scenario<F>,
    params: &SaParams<F>,
) -> Result<(Solution<F>, u64), SolveError<F>> {
    let seed_solution = gain(scenario)?;
    let n = scenario.graph.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut current = seed_solution.policy.clone();
    let mut current_energy = seed_solution.report.total_energy;
    let mut best = seed_solution;

    let mut temperature = params.t0;
    let mut steps = 0u64;
    while temperature > params.t_min {
        steps += 1;
        let task = rng.random_range(0..n);
        let site = Site::from_rank(rng.random_range(0..3usize)).expect("rank < 3");
        let previous = current.site(task);
        current.set(task, site);
        let report = scenario.evaluate(&current)?;
        let accepted = report.feasible && {
            let delta = report.total_energy - current_energy;
            let probability = acceptance_probability(delta, temperature);
            if probability >= F::one() {
                true
            } else {
                F::from_f64(rng.random::<f64>()) < probability
            }
        };
        if accepted {
            current_energy = report.total_energy;
            if current_energy < best.report.total_energy {
                best.policy = current.clone();
                best.report = report;
            }
        } else {
            current.set(task, previous);
        }
        temperature = temperature * params.cool;
    }
    Ok((best, steps))
}
