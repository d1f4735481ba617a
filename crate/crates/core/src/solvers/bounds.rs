//! Per-task energy envelopes certifying the greedy solution.
//!
//! For every subtask the completion energy of any policy lies between
//! the cheapest and the dearest combination of its own site and its
//! predecessors' sites, independently chosen. Summing those envelopes
//! gives a lower bound no policy can beat and an upper bound no policy
//! can exceed, and their ratio certifies how far the greedy result can
//! possibly sit from the optimum.

use crate::costmodel::{Scenario, Site};
use crate::scalar::Real;

use super::SolveError;

/// Energy envelope: `lower <= optimal <= any policy <= upper`, with
/// `epsilon = upper / lower - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonBound<F> {
    pub lower: F,
    pub upper: F,
    pub epsilon: F,
}

/// Computes the per-task min/max completion-energy sums and their ratio.
///
/// Errors with `DivisionByZero` when the lower bound is zero (every
/// workload and data size zero), since no ratio exists.
pub fn epsilon_bound<F: Real>(scenario: &Scenario<F>) -> Result<EpsilonBound<F>, SolveError<F>> {
    let mut lower = F::zero();
    let mut upper = F::zero();
    for task in 0..scenario.graph.len() {
        let preds = scenario
            .graph
            .predecessors(task)
            .expect("task ids are dense");
        let mut task_min: Option<F> = None;
        let mut task_max: Option<F> = None;
        for own in Site::ALL {
            let mut fetch_min = F::zero();
            let mut fetch_max = F::zero();
            for &pred in preds {
                let billed = scenario.billed_task(task, pred);
                let mut pair_min: Option<F> = None;
                let mut pair_max: Option<F> = None;
                for pred_site in Site::ALL {
                    let (_, energy) = scenario.transfer_cost(pred_site, own, billed)?;
                    pair_min = Some(pair_min.map_or(energy, |m: F| m.min(energy)));
                    pair_max = Some(pair_max.map_or(energy, |m: F| m.max(energy)));
                }
                fetch_min = fetch_min + pair_min.expect("three predecessor sites");
                fetch_max = fetch_max + pair_max.expect("three predecessor sites");
            }
            let (_, exec) = scenario.exec_cost(task, own)?;
            let candidate_min = fetch_min + exec;
            let candidate_max = fetch_max + exec;
            task_min = Some(task_min.map_or(candidate_min, |m: F| m.min(candidate_min)));
            task_max = Some(task_max.map_or(candidate_max, |m: F| m.max(candidate_max)));
        }
        lower = lower + task_min.expect("three own sites");
        upper = upper + task_max.expect("three own sites");
    }
    if lower <= F::zero() {
        return Err(SolveError::DivisionByZero);
    }
    Ok(EpsilonBound {
        lower,
        upper,
        epsilon: upper / lower - F::one(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taskgraph::{Subtask, TaskGraph};

    fn scenario(specs: &[(f64, f64)], edges: &[(usize, usize)]) -> Scenario<f64> {
        let tasks = specs
            .iter()
            .enumerate()
            .map(|(id, &(w, d))| Subtask::new(id, w, d))
            .collect();
        crate::costmodel::tests::scenario_with(TaskGraph::new(tasks, edges).unwrap())
    }

    #[test]
    fn degenerate_all_zero_instance_has_no_ratio() {
        let s = scenario(&[(0.0, 0.0), (0.0, 0.0)], &[(0, 1)]);
        assert!(matches!(
            epsilon_bound(&s),
            Err(SolveError::DivisionByZero)
        ));
    }

    #[test]
    fn single_entry_task_bounds_are_exec_extremes() {
        let s = scenario(&[(100.0, 2.0)], &[]);
        let energies: Vec<f64> = Site::ALL
            .iter()
            .map(|&site| s.exec_cost(0, site).unwrap().1)
            .collect();
        let bound = epsilon_bound(&s).unwrap();
        assert_eq!(bound.lower, energies.iter().cloned().fold(f64::INFINITY, f64::min));
        assert_eq!(bound.upper, energies.iter().cloned().fold(0.0, f64::max));
        assert!(bound.epsilon > 0.0);
    }

    #[test]
    fn bounds_widen_with_predecessors() {
        let chain = scenario(&[(100.0, 2.0), (100.0, 2.0)], &[(0, 1)]);
        let free = scenario(&[(100.0, 2.0), (100.0, 2.0)], &[]);
        let chained = epsilon_bound(&chain).unwrap();
        let unchained = epsilon_bound(&free).unwrap();
        // The fetch term can only add to the per-task maximum.
        assert!(chained.upper >= unchained.upper);
        assert!(chained.lower >= unchained.lower);
    }
}
