//! Exhaustive search over all `3^N` placements.

use crate::costmodel::{OffloadPolicy, Scenario, Site};
use crate::scalar::Real;

use super::{timed, InfeasibleInfo, Solution, SolveError, SolverKind};

/// Largest instance the exhaustive search accepts by default
/// (`3^12` is about half a million evaluations).
pub const BRUTE_FORCE_DEFAULT_CAP: usize = 12;

/// Finds the minimum-energy feasible placement by evaluating every
/// possible policy. See [`brute_force_with_cap`].
pub fn brute_force<F: Real>(scenario: &Scenario<F>) -> Result<Solution<F>, SolveError<F>> {
    brute_force_with_cap(scenario, BRUTE_FORCE_DEFAULT_CAP)
}

/// Exhaustive search with an explicit instance-size cap.
///
/// Placements are enumerated in lexicographic order of the placement
/// vector (task 0 most significant, Local < Edge < Cloud), and only a
/// strictly smaller energy replaces the incumbent, so ties resolve to the
/// lexicographically smallest vector. Returns `Infeasible` when no
/// placement satisfies both constraints.
pub fn brute_force_with_cap<F: Real>(
    scenario: &Scenario<F>,
    cap: usize,
) -> Result<Solution<F>, SolveError<F>> {
    let n = scenario.graph.len();
    if n > cap {
        return Err(SolveError::InstanceTooLarge { n, cap });
    }

    let (result, wall_time) = timed(|| search(scenario, n));
    let (best, evaluated, last_report) = result?;
    match best {
        Some((policy, report)) => Ok(Solution {
            feasible: true,
            policy,
            report,
            solver: SolverKind::BruteForce,
            iterations: evaluated,
            wall_time,
        }),
        None => Err(SolveError::Infeasible(InfeasibleInfo {
            last_policy: None,
            violations: last_report,
            iterations: evaluated,
        })),
    }
}

type SearchOutcome<F> = (
    Option<(OffloadPolicy, crate::costmodel::CostReport<F>)>,
    u64,
    Vec<crate::costmodel::Violation<F>>,
);

fn search<F: Real>(
    scenario: &Scenario<F>,
    n: usize,
) -> Result<SearchOutcome<F>, SolveError<F>> {
    let total = 3u64
        .checked_pow(n as u32)
        .expect("3^N fits in u64 for capped N");
    let mut best: Option<(OffloadPolicy, crate::costmodel::CostReport<F>)> = None;
    let mut last_violations = Vec::new();
    let mut policy = OffloadPolicy::uniform(n, Site::Local);
    for code in 0..total {
        decode(code, n, &mut policy);
        let report = scenario.evaluate(&policy)?;
        if report.feasible {
            let better = match &best {
                Some((_, incumbent)) => report.total_energy < incumbent.total_energy,
                None => true,
            };
            if better {
                best = Some((policy.clone(), report));
            }
        } else {
            last_violations = report.violations;
        }
    }
    Ok((best, total, last_violations))
}

/// Writes the `code`-th placement vector, task 0 as the most significant
/// base-3 digit so that ascending codes follow lexicographic order.
fn decode(code: u64, n: usize, policy: &mut OffloadPolicy) {
    let mut rest = code;
    for id in (0..n).rev() {
        let site = Site::from_rank((rest % 3) as usize).expect("digit < 3");
        policy.set(id, site);
        rest /= 3;
    }
}
