//! Dependency DAG of an application's subtasks.
//!
//! A [`TaskGraph`] is validated once at construction (unique dense ids,
//! no dangling edges, acyclic) and is immutable afterwards, so it can be
//! shared freely across concurrent solver runs.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::scalar::Real;

/// One node of the application DAG: a unit of computation with the data
/// it needs shipped when it runs away from its predecessors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Subtask<F> {
    /// Dense index in `[0, N)`, unique within a graph.
    pub id: usize,
    /// Compute demand in CPU cycles (abstract units), `>= 0`.
    pub workload: F,
    /// Size of the subtask's data in bits (abstract units), `>= 0`.
    pub data_size: F,
}

impl<F: Real> Subtask<F> {
    pub fn new(id: usize, workload: F, data_size: F) -> Self {
        Self {
            id,
            workload,
            data_size,
        }
    }
}

/// Errors raised while building or querying a [`TaskGraph`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate subtask id {id}")]
    DuplicateId { id: usize },
    #[error("subtask id {id} outside the dense range 0..{len}")]
    InvalidId { id: usize, len: usize },
    #[error("edge {from} -> {to} references an unknown subtask id")]
    DanglingEdge { from: usize, to: usize },
    #[error("precedence edges form a cycle through subtasks {involved:?}")]
    Cycle { involved: Vec<usize> },
    #[error("unknown subtask id {id}")]
    UnknownId { id: usize },
}

/// Immutable, validated DAG of subtasks with precedence edges.
///
/// `preds[n]` is the in-neighbor set of `n` (sorted ascending), i.e. the
/// subtasks whose results `n` must fetch before executing.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskGraph<F> {
    subtasks: Vec<Subtask<F>>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl<F: Real> TaskGraph<F> {
    /// Builds a graph from subtasks and `(from, to)` precedence pairs.
    ///
    /// Ids must be exactly `0..subtasks.len()` (in any order). Duplicate
    /// edges collapse to one. Fails on duplicate ids, edges touching
    /// unknown ids, or any directed cycle (a self-loop counts).
    pub fn new(subtasks: Vec<Subtask<F>>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let n = subtasks.len();
        let mut by_id: Vec<Option<Subtask<F>>> = vec![None; n];
        for task in subtasks {
            if task.id >= n {
                return Err(GraphError::InvalidId { id: task.id, len: n });
            }
            if by_id[task.id].is_some() {
                return Err(GraphError::DuplicateId { id: task.id });
            }
            by_id[task.id] = Some(task);
        }
        let subtasks: Vec<Subtask<F>> = by_id.into_iter().map(|t| t.expect("dense ids")).collect();

        let mut pred_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(from, to) in edges {
            if from >= n || to >= n {
                return Err(GraphError::DanglingEdge { from, to });
            }
            pred_sets[to].insert(from);
        }
        let preds: Vec<Vec<usize>> = pred_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (to, ps) in preds.iter().enumerate() {
            for &from in ps {
                succs[from].push(to);
            }
        }

        let topo = kahn_order(&preds, &succs)?;
        Ok(Self {
            subtasks,
            preds,
            succs,
            topo,
        })
    }

    /// Number of subtasks. The empty graph is legal.
    pub fn len(&self) -> usize {
        self.subtasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subtasks.is_empty()
    }

    pub fn subtask(&self, id: usize) -> Result<&Subtask<F>, GraphError> {
        self.subtasks.get(id).ok_or(GraphError::UnknownId { id })
    }

    pub fn subtasks(&self) -> &[Subtask<F>] {
        &self.subtasks
    }

    /// Predecessor ids of `n`, sorted ascending; empty for entry subtasks.
    pub fn predecessors(&self, n: usize) -> Result<&[usize], GraphError> {
        self.preds
            .get(n)
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownId { id: n })
    }

    /// Successor ids of `n`, sorted ascending.
    pub fn successors(&self, n: usize) -> Result<&[usize], GraphError> {
        self.succs
            .get(n)
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownId { id: n })
    }

    /// A topological order of all ids, deterministic: among ready
    /// subtasks the smallest id goes first.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Sum of all workloads.
    pub fn total_workload(&self) -> F {
        self.subtasks
            .iter()
            .fold(F::zero(), |acc, t| acc + t.workload)
    }
}

/// Kahn's algorithm with a min-heap on ids for deterministic tie-breaks.
fn kahn_order(preds: &[Vec<usize>], succs: &[Vec<usize>]) -> Result<Vec<usize>, GraphError> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = preds.len();
    let mut indegree: Vec<usize> = preds.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(id, _)| Reverse(id))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(id)) = ready.pop() {
        order.push(id);
        for &next in &succs[id] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.push(Reverse(next));
            }
        }
    }
    if order.len() != n {
        let involved = indegree
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(id, _)| id)
            .collect();
        return Err(GraphError::Cycle { involved });
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_tasks(n: usize) -> Vec<Subtask<f64>> {
        (0..n).map(|id| Subtask::new(id, 1.0, 1.0)).collect()
    }

    #[test]
    fn single_subtask_no_edges() {
        let g = TaskGraph::new(unit_tasks(1), &[]).unwrap();
        assert_eq!(g.predecessors(0).unwrap(), &[] as &[usize]);
        assert_eq!(g.topological_order(), &[0]);
    }

    #[test]
    fn two_cycle_rejected() {
        let err = TaskGraph::new(unit_tasks(2), &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, GraphError::Cycle { .. }));
    }

    #[test]
    fn self_loop_rejected() {
        let err = TaskGraph::new(unit_tasks(1), &[(0, 0)]).unwrap_err();
        assert!(matches!(err, GraphError::Cycle { .. }));
    }

    #[test]
    fn eight_task_layered_graph_orders_ascending() {
        // Same topology as configs/canonical.toml.
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 4),
            (2, 4),
            (2, 5),
            (3, 5),
            (4, 6),
            (5, 6),
            (6, 7),
        ];
        let g = TaskGraph::new(unit_tasks(8), &edges).unwrap();
        assert_eq!(g.topological_order(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(g.predecessors(5).unwrap(), &[2, 3]);
        assert_eq!(g.successors(2).unwrap(), &[4, 5]);
    }

    #[test]
    fn chain_has_unique_order() {
        let g = TaskGraph::new(unit_tasks(3), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.topological_order(), &[0, 1, 2]);
    }

    /// Enumerates every topological order by brute force.
    fn all_topo_orders(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        fn recurse(
            remaining: &mut Vec<usize>,
            prefix: &mut Vec<usize>,
            edges: &[(usize, usize)],
            out: &mut Vec<Vec<usize>>,
        ) {
            if remaining.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..remaining.len() {
                let cand = remaining[i];
                let ready = edges
                    .iter()
                    .filter(|&&(_, to)| to == cand)
                    .all(|&(from, _)| prefix.contains(&from));
                if ready {
                    remaining.remove(i);
                    prefix.push(cand);
                    recurse(remaining, prefix, edges, out);
                    prefix.pop();
                    remaining.insert(i, cand);
                }
            }
        }
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        recurse(&mut remaining, &mut Vec::new(), edges, &mut out);
        out
    }

    #[test]
    fn diamond_order_is_smallest_valid_order() {
        let edges = [(0, 1), (0, 2), (1, 3), (2, 3)];
        let g = TaskGraph::new(unit_tasks(4), &edges).unwrap();
        let valid = all_topo_orders(4, &edges);
        // Independent enumeration: the diamond admits exactly two orders and
        // the ascending-id tie-break must pick the lexicographically least.
        assert_eq!(valid.len(), 2);
        let least = valid.iter().min().unwrap();
        assert_eq!(g.topological_order(), least.as_slice());
        assert_eq!(g.topological_order(), &[0, 1, 2, 3]);
        assert_eq!(g.predecessors(3).unwrap(), &[1, 2]);
        assert_eq!(g.predecessors(0).unwrap(), &[] as &[usize]);
    }

    #[test]
    fn dangling_edge_rejected() {
        let err = TaskGraph::new(unit_tasks(2), &[(0, 7)]).unwrap_err();
        assert_eq!(err, GraphError::DanglingEdge { from: 0, to: 7 });
    }

    #[test]
    fn duplicate_id_rejected() {
        let tasks = vec![Subtask::new(0, 1.0, 1.0), Subtask::new(0, 2.0, 2.0)];
        let err = TaskGraph::new(tasks, &[]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateId { id: 0 });
    }

    #[test]
    fn sparse_id_rejected() {
        let tasks = vec![Subtask::new(0, 1.0, 1.0), Subtask::new(2, 1.0, 1.0)];
        let err = TaskGraph::new(tasks, &[]).unwrap_err();
        assert_eq!(err, GraphError::InvalidId { id: 2, len: 2 });
    }

    #[test]
    fn empty_graph_is_legal() {
        let g = TaskGraph::new(Vec::<Subtask<f64>>::new(), &[]).unwrap();
        assert!(g.is_empty());
        assert!(g.topological_order().is_empty());
    }

    #[test]
    fn unknown_id_query() {
        let g = TaskGraph::new(unit_tasks(2), &[(0, 1)]).unwrap();
        assert_eq!(g.predecessors(5).unwrap_err(), GraphError::UnknownId { id: 5 });
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = TaskGraph::new(unit_tasks(2), &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.predecessors(1).unwrap(), &[0]);
    }
}
