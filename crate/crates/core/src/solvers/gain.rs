//! Greedy minimum-energy assignment with feasibility repair.
//!
//! Phase 1 walks the DAG in topological order and places each subtask at
//! the site with the lowest completion energy given the predecessors
//! already placed. Phase 2 repairs constraint violations one single-task
//! move at a time: utility violations move work off the cloud (or, when
//! nothing runs on the cloud, promote one local subtask to the edge so
//! the edge operator earns anything at all); budget violations apply the
//! admissible move that strictly reduces total completion time at the
//! smallest energy change. Admissible moves are Local->Edge, Edge->Local
//! and Cloud->{Edge, Local}; nothing ever moves onto the cloud during
//! repair, so the move count is capped at N plus the initial cloud count.

use crate::costmodel::{CostError, CostReport, OffloadPolicy, Scenario, Site};
use crate::scalar::Real;

use super::{timed, InfeasibleInfo, Solution, SolveError, SolverKind};

/// Phase 1 only: per-subtask minimum-energy placement in topological
/// order, ties resolved Local, then Edge, then Cloud.
pub fn initial_assignment<F: Real>(
    scenario: &Scenario<F>,
) -> Result<OffloadPolicy, SolveError<F>> {
    let n = scenario.graph.len();
    let mut policy = OffloadPolicy::uniform(n, Site::Local);
    for &task in scenario.graph.topological_order() {
        let mut best: Option<(F, Site)> = None;
        for site in Site::ALL {
            policy.set(task, site);
            let energy = scenario.completion_energy(&policy, task)?;
            if best.map_or(true, |(b, _)| energy < b) {
                best = Some((energy, site));
            }
        }
        let (_, site) = best.expect("three candidate sites");
        policy.set(task, site);
    }
    Ok(policy)
}

/// Greedy solver: minimum-energy assignment plus feasibility repair.
pub fn gain<F: Real>(scenario: &Scenario<F>) -> Result<Solution<F>, SolveError<F>> {
    let (outcome, wall_time) = timed(|| run(scenario));
    let (policy, report, moves) = outcome?;
    Ok(Solution {
        feasible: true,
        policy,
        report,
        solver: SolverKind::Gain,
        iterations: moves,
        wall_time,
    })
}

type GainOutcome<F> = (OffloadPolicy, CostReport<F>, u64);

fn run<F: Real>(scenario: &Scenario<F>) -> Result<GainOutcome<F>, SolveError<F>> {
    let mut policy = initial_assignment(scenario)?;
    let (_, _, initial_cloud) = policy.counts();
    let move_cap = (scenario.graph.len() + initial_cloud) as u64;
    let mut moves = 0u64;
    loop {
        let report = scenario.evaluate(&policy)?;
        if report.feasible {
            return Ok((policy, report, moves));
        }
        if moves >= move_cap {
            return Err(SolveError::Infeasible(InfeasibleInfo {
                last_policy: Some(policy),
                violations: report.violations,
                iterations: moves,
            }));
        }
        let utility_violated = !(report.edge_utility > F::zero());
        let chosen = if utility_violated {
            utility_move(scenario, &mut policy, &report)?
        } else {
            budget_move(scenario, &mut policy, &report)?
        };
        match chosen {
            Some((task, site)) => {
                policy.set(task, site);
                moves += 1;
            }
            None => {
                return Err(SolveError::Infeasible(InfeasibleInfo {
                    last_policy: Some(policy),
                    violations: report.violations,
                    iterations: moves,
                }))
            }
        }
    }
}

/// Picks the utility-repair move with the smallest energy change:
/// cloud-placed subtasks may move to Local or Edge; when the cloud is
/// already empty (so the utility is stuck at zero revenue), one local
/// subtask is promoted to the edge instead.
fn utility_move<F: Real>(
    scenario: &Scenario<F>,
    policy: &mut OffloadPolicy,
    report: &CostReport<F>,
) -> Result<Option<(usize, Site)>, SolveError<F>> {
    let has_cloud = policy.sites().iter().any(|&s| s == Site::Cloud);
    let mut best: Option<(F, usize, Site)> = None;
    for task in 0..policy.len() {
        let (from, targets): (Site, &[Site]) = if has_cloud {
            if policy.site(task) != Site::Cloud {
                continue;
            }
            (Site::Cloud, &[Site::Local, Site::Edge])
        } else {
            if policy.site(task) != Site::Local {
                continue;
            }
            (Site::Local, &[Site::Edge])
        };
        debug_assert_eq!(policy.site(task), from);
        for &target in targets {
            let (_, delta_energy) = move_delta(scenario, policy, report, task, target)?;
            if best.map_or(true, |(b, _, _)| delta_energy < b) {
                best = Some((delta_energy, task, target));
            }
        }
    }
    Ok(best.map(|(_, task, site)| (task, site)))
}

/// Picks, among the admissible single-task moves that strictly decrease
/// total completion time, the one with the smallest energy change.
fn budget_move<F: Real>(
    scenario: &Scenario<F>,
    policy: &mut OffloadPolicy,
    report: &CostReport<F>,
) -> Result<Option<(usize, Site)>, SolveError<F>> {
    let mut best: Option<(F, usize, Site)> = None;
    for task in 0..policy.len() {
        let targets: &[Site] = match policy.site(task) {
            Site::Local => &[Site::Edge],
            Site::Edge => &[Site::Local],
            Site::Cloud => &[Site::Local, Site::Edge],
        };
        for &target in targets {
            let (delta_time, delta_energy) = move_delta(scenario, policy, report, task, target)?;
            if delta_time < F::zero() && best.map_or(true, |(b, _, _)| delta_energy < b) {
                best = Some((delta_energy, task, target));
            }
        }
    }
    Ok(best.map(|(_, task, site)| (task, site)))
}

/// Change in total completion time and energy if `task` moved to `site`.
///
/// Only `task` itself and its successors can change cost, so the delta is
/// summed over that set against the current report. The policy is
/// restored before returning.
fn move_delta<F: Real>(
    scenario: &Scenario<F>,
    policy: &mut OffloadPolicy,
    report: &CostReport<F>,
    task: usize,
    site: Site,
) -> Result<(F, F), CostError> {
    let old = policy.site(task);
    policy.set(task, site);
    let mut delta_time = F::zero();
    let mut delta_energy = F::zero();
    let mut affected = vec![task];
    affected.extend_from_slice(
        scenario
            .graph
            .successors(task)
            .expect("task ids come from the policy"),
    );
    let mut failure = None;
    for &id in &affected {
        let time = match scenario.completion_time(policy, id) {
            Ok(t) => t,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let energy = match scenario.completion_energy(policy, id) {
            Ok(e) => e,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        delta_time = delta_time + (time - report.per_task_time[id]);
        delta_energy = delta_energy + (energy - report.per_task_energy[id]);
    }
    policy.set(task, old);
    match failure {
        Some(err) => Err(err),
        None => Ok((delta_time, delta_energy)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costmodel::{BudgetSpec, Violation};
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
    fn feasible_initial_assignment_skips_repair() {
        // Edge execution is by far the cheapest here, so every subtask's
        // minimum-energy site is the edge, which already satisfies both
        // constraints: repair must be a no-op.
        let mut s = scenario(&[(100.0, 2.0), (120.0, 1.5), (80.0, 1.0)], &[(0, 1), (0, 2)]);
        s.alpha_edge = 1e-25;
        s.alpha_cloud = 1e-24;
        let initial = initial_assignment(&s).unwrap();
        assert_eq!(initial.compact(), "EEE");
        let solution = gain(&s).unwrap();
        assert_eq!(solution.policy, initial);
        assert_eq!(solution.iterations, 0);
        assert!(solution.report.feasible);
    }

    #[test]
    fn utility_violation_moves_work_off_the_cloud() {
        // Cloud execution is cheapest, so phase 1 puts everything there
        // and the edge operator's utility is negative. Repair must end
        // feasible with at least one subtask moved off the cloud.
        let mut s = scenario(
            &[(100.0, 2.0), (110.0, 1.5), (90.0, 1.0), (105.0, 2.5)],
            &[(0, 1), (1, 2), (1, 3)],
        );
        s.alpha_cloud = 1e-26;
        let initial = initial_assignment(&s).unwrap();
        assert_eq!(initial.compact(), "CCCC");
        let before = s.evaluate(&initial).unwrap();
        assert!(before.edge_utility <= 0.0);

        let solution = gain(&s).unwrap();
        let (_, _, n_cloud) = solution.policy.counts();
        assert!(n_cloud < 4, "at least one subtask must leave the cloud");
        assert!(solution.report.edge_utility > 0.0);
        assert!(solution.report.feasible);
    }

    #[test]
    fn all_local_start_promotes_one_task_to_the_edge() {
        // With the default constants local execution dominates every
        // energy comparison, so phase 1 is all-local and the utility is
        // exactly zero with nothing on the cloud to pull back. The repair
        // must promote a local subtask to the edge and then work the
        // budget down.
        let s = scenario(
            &[(100.0, 1.0), (90.0, 0.8), (110.0, 1.2), (95.0, 0.6)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        );
        let initial = initial_assignment(&s).unwrap();
        assert_eq!(initial.compact(), "LLLL");
        let solution = gain(&s).unwrap();
        let (_, n_edge, _) = solution.policy.counts();
        assert!(n_edge >= 1);
        assert!(solution.report.feasible);
        assert!(solution.iterations <= 4);
    }

    #[test]
    fn empty_graph_is_infeasible() {
        let mut s = scenario(&[], &[]);
        s.budget = BudgetSpec::Explicit(1.0);
        let err = gain(&s).unwrap_err();
        match err {
            SolveError::Infeasible(info) => {
                assert_eq!(info.last_policy.unwrap().len(), 0);
                assert!(info
                    .violations
                    .iter()
                    .any(|v| matches!(v, Violation::NonPositiveUtility { .. })));
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn impossible_budget_reports_infeasible_with_last_policy() {
        // A budget below any reachable completion time: repair runs out
        // of admissible moves or hits the move cap and reports the last
        // policy with its violations.
        let mut s = scenario(&[(100.0, 1.0), (90.0, 0.8)], &[(0, 1)]);
        s.budget = BudgetSpec::Explicit(1e-12);
        let err = gain(&s).unwrap_err();
        match err {
            SolveError::Infeasible(info) => {
                assert!(info.last_policy.is_some());
                assert!(info
                    .violations
                    .iter()
                    .any(|v| matches!(v, Violation::BudgetExceeded { .. })));
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn move_delta_matches_full_reevaluation() {
        let s = scenario(
            &[(100.0, 1.0), (90.0, 0.8), (110.0, 1.2), (95.0, 0.6)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        );
        let mut policy = OffloadPolicy::from_compact("LELC").unwrap();
        let report = s.evaluate(&policy).unwrap();
        for task in 0..4 {
            for site in Site::ALL {
                let (dt, de) = move_delta(&s, &mut policy, &report, task, site).unwrap();
                let mut mutated = policy.clone();
                mutated.set(task, site);
                let full = s.evaluate(&mutated).unwrap();
                let full_dt = full.total_time - report.total_time;
                let full_de = full.total_energy - report.total_energy;
                assert!((dt - full_dt).abs() <= 1e-9 * (1.0 + full_dt.abs()));
                assert!((de - full_de).abs() <= 1e-9 * (1.0 + full_de.abs()));
            }
        }
    }
}
