//! Cost equations for the three-tier device/edge/cloud placement model.
//!
//! A [`Scenario`] bundles the hardware, channel and pricing parameters
//! together with the application [`TaskGraph`]. Given an [`OffloadPolicy`]
//! (one execution [`Site`] per subtask), [`Scenario::evaluate`] produces a
//! [`CostReport`] with per-subtask completion time and energy, the
//! application totals, the edge operator's utility, and the feasibility
//! verdict for the two hard constraints:
//!
//! * utility: the edge server's net revenue must be strictly positive;
//! * budget: total completion time must stay strictly under the budget.
//!
//! Completion costs are dependency-aware: a subtask first fetches every
//! predecessor's result across the site pair separating them (delays take
//! the max over predecessors, energies the sum) and then executes at its
//! own site.

use thiserror::Error;

use crate::scalar::Real;
use crate::taskgraph::TaskGraph;

/// Execution site of one subtask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    /// The mobile device itself.
    Local,
    /// The edge server at the access point.
    Edge,
    /// The remote cloud behind the edge server.
    Cloud,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::Local, Site::Edge, Site::Cloud];

    /// Preference rank used by deterministic tie-breaks: Local < Edge < Cloud.
    pub fn rank(self) -> usize {
        match self {
            Site::Local => 0,
            Site::Edge => 1,
            Site::Cloud => 2,
        }
    }

    pub fn from_rank(rank: usize) -> Option<Site> {
        Site::ALL.get(rank).copied()
    }

    /// One-letter tag used in compact placement strings.
    pub fn letter(self) -> char {
        match self {
            Site::Local => 'L',
            Site::Edge => 'E',
            Site::Cloud => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Site> {
        match c {
            'L' => Some(Site::Local),
            'E' => Some(Site::Edge),
            'C' => Some(Site::Cloud),
            _ => None,
        }
    }
}

/// Placement decision vector: one site per subtask, indexed by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OffloadPolicy {
    sites: Vec<Site>,
}

impl OffloadPolicy {
    pub fn new(sites: Vec<Site>) -> Self {
        Self { sites }
    }

    /// All `n` subtasks at the same site.
    pub fn uniform(n: usize, site: Site) -> Self {
        Self {
            sites: vec![site; n],
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, id: usize) -> Site {
        self.sites[id]
    }

    pub fn set(&mut self, id: usize, site: Site) {
        self.sites[id] = site;
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// `(n_local, n_edge, n_cloud)` occupation counts.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for site in &self.sites {
            match site {
                Site::Local => counts.0 += 1,
                Site::Edge => counts.1 += 1,
                Site::Cloud => counts.2 += 1,
            }
        }
        counts
    }

    /// Compact form like `"LEEC"`, one letter per subtask in id order.
    pub fn compact(&self) -> String {
        self.sites.iter().map(|s| s.letter()).collect()
    }

    pub fn from_compact(s: &str) -> Option<Self> {
        s.chars()
            .map(Site::from_letter)
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Site)> + '_ {
        self.sites.iter().copied().enumerate()
    }
}

/// Uplink channel between the device and the edge server.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Uplink<F> {
    /// Fixed channel rate in bits/s.
    FixedRate { rate: F },
    /// Shannon-capacity rate from bandwidth, signal and noise terms:
    /// `bandwidth * log2(1 + p_tx * gain / (noise + interference))`.
    Shannon {
        bandwidth_hz: F,
        channel_gain: F,
        noise_power: F,
        interference: F,
    },
}

/// Completion-time budget: an explicit bound in seconds, or derived from
/// the total workload (half the serial-local execution time by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BudgetSpec<F> {
    Explicit(F),
    Auto,
}

/// Which subtask's data size a predecessor-result transfer is billed on.
///
/// `Consumer` bills the fetching subtask's own data size; `Predecessor`
/// bills the producing subtask's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransferSize {
    #[default]
    Consumer,
    Predecessor,
}

/// Energy accounting for fetching an edge-produced result into the cloud.
///
/// `Relay` bills the edge-to-cloud link energy (symmetric with the other
/// site pairs). `EdgeExec` bills the edge execution energy of the billed
/// subtask instead; it exists only as a model variant and is off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CloudFetchEnergy {
    #[default]
    Relay,
    EdgeExec,
}

/// Full parameter set for one device's offloading problem.
///
/// All physical quantities must be strictly positive, except
/// `interference >= 0`, `channel_gain >= 0` and a fixed uplink rate
/// `>= 0` (a zero rate is legal in the scenario and only errors when a
/// nonzero payload must cross it). Validated by [`Scenario::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<F> {
    pub graph: TaskGraph<F>,
    /// Device CPU speed, Hz.
    pub f_local: F,
    /// Edge server CPU speed, Hz.
    pub f_edge: F,
    /// Cloud CPU speed, Hz.
    pub f_cloud: F,
    /// Device energy coefficient, J*s^2/cycle.
    pub k_energy: F,
    /// Edge server power-fit constants.
    pub alpha_edge: F,
    pub beta_edge: F,
    /// Cloud power-fit constants.
    pub alpha_cloud: F,
    pub beta_cloud: F,
    /// Power-fit exponent, in `[2.5, 3]`.
    pub sigma_exp: F,
    /// Device radio transmit power, W.
    pub p_tx_device: F,
    /// Edge-to-cloud link transmit power, W.
    pub p_relay: F,
    pub uplink: Uplink<F>,
    /// Edge-to-cloud link bandwidth, bits/s.
    pub relay_bandwidth: F,
    /// Price credited to the edge operator per edge-executed subtask.
    pub service_price: F,
    pub budget: BudgetSpec<F>,
    /// Frequency dividing total workload in auto-budget mode; defaults to
    /// `f_local` when `None`.
    pub budget_norm_freq: Option<F>,
    pub transfer_size: TransferSize,
    pub cloud_fetch_energy: CloudFetchEnergy,
}

/// Errors from cost evaluation or scenario validation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("subtask {task} has {data_size} bits to send but the uplink rate is zero")]
    ZeroRate { task: usize, data_size: f64 },
    #[error("policy covers {got} subtasks, graph has {expected}")]
    IncompletePolicy { expected: usize, got: usize },
    #[error("unknown subtask id {id}")]
    UnknownId { id: usize },
    #[error("invalid scenario: {field}: {message}")]
    InvalidScenario {
        field: &'static str,
        message: String,
    },
}

/// A violated feasibility constraint, with the offending values.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation<F> {
    /// Edge utility must be strictly positive.
    NonPositiveUtility { utility: F },
    /// Total completion time must be strictly under the budget.
    BudgetExceeded { total_time: F, budget: F },
}

impl<F: Real> std::fmt::Display for Violation<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonPositiveUtility { utility } => {
                write!(f, "edge utility {utility} is not > 0")
            }
            Violation::BudgetExceeded { total_time, budget } => {
                write!(f, "completion time {total_time} is not < budget {budget}")
            }
        }
    }
}

/// Per-subtask and total costs of one policy, plus the feasibility verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<F> {
    /// Completion time of each subtask at its chosen site, indexed by id.
    pub per_task_time: Vec<F>,
    /// Completion energy of each subtask at its chosen site, indexed by id.
    pub per_task_energy: Vec<F>,
    /// Sum of per-task completion times.
    pub total_time: F,
    /// Sum of per-task completion energies: the objective.
    pub total_energy: F,
    /// Edge operator's utility: price per edge task minus relay cost of
    /// cloud tasks.
    pub edge_utility: F,
    /// Resolved completion-time budget.
    pub budget: F,
    pub feasible: bool,
    pub violations: Vec<Violation<F>>,
}

impl<F: Real> Scenario<F> {
    /// Checks the scenario invariants, returning the first violation.
    pub fn validate(&self) -> Result<(), CostError> {
        fn positive<F: Real>(field: &'static str, v: F) -> Result<(), CostError> {
            if v > F::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(CostError::InvalidScenario {
                    field,
                    message: format!("must be strictly positive and finite, got {v}"),
                })
            }
        }
        fn non_negative<F: Real>(field: &'static str, v: F) -> Result<(), CostError> {
            if v >= F::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(CostError::InvalidScenario {
                    field,
                    message: format!("must be >= 0 and finite, got {v}"),
                })
            }
        }

        positive("f_local", self.f_local)?;
        positive("f_edge", self.f_edge)?;
        positive("f_cloud", self.f_cloud)?;
        positive("k_energy", self.k_energy)?;
        positive("alpha_edge", self.alpha_edge)?;
        positive("beta_edge", self.beta_edge)?;
        positive("alpha_cloud", self.alpha_cloud)?;
        positive("beta_cloud", self.beta_cloud)?;
        positive("p_tx_device", self.p_tx_device)?;
        positive("p_relay", self.p_relay)?;
        positive("relay_bandwidth", self.relay_bandwidth)?;
        positive("service_price", self.service_price)?;
        let lo = F::from_f64(2.5);
        let hi = F::from_f64(3.0);
        if !(self.sigma_exp >= lo && self.sigma_exp <= hi) {
            return Err(CostError::InvalidScenario {
                field: "sigma_exp",
                message: format!("must lie in [2.5, 3], got {}", self.sigma_exp),
            });
        }
        match self.uplink {
            Uplink::FixedRate { rate } => non_negative("uplink.rate", rate)?,
            Uplink::Shannon {
                bandwidth_hz,
                channel_gain,
                noise_power,
                interference,
            } => {
                positive("uplink.bandwidth_hz", bandwidth_hz)?;
                non_negative("uplink.channel_gain", channel_gain)?;
                positive("uplink.noise_power", noise_power)?;
                non_negative("uplink.interference", interference)?;
            }
        }
        if let BudgetSpec::Explicit(b) = self.budget {
            positive("budget", b)?;
        }
        if let Some(f) = self.budget_norm_freq {
            positive("budget_norm_freq", f)?;
        }
        for task in self.graph.subtasks() {
            non_negative("graph.workload", task.workload)?;
            non_negative("graph.data_size", task.data_size)?;
        }
        Ok(())
    }

    /// Device-to-edge uplink rate in bits/s. Constant across subtasks.
    pub fn uplink_rate(&self) -> F {
        match self.uplink {
            Uplink::FixedRate { rate } => rate,
            Uplink::Shannon {
                bandwidth_hz,
                channel_gain,
                noise_power,
                interference,
            } => {
                let snr = self.p_tx_device * channel_gain / (noise_power + interference);
                bandwidth_hz * (F::one() + snr).log2()
            }
        }
    }

    /// Delay and energy to move subtask `task`'s data across the
    /// device-edge channel. Zero payload costs nothing even on a dead
    /// channel; a nonzero payload on a zero-rate channel is an error.
    pub fn tx_to_edge(&self, task: usize) -> Result<(F, F), CostError> {
        let data = self.data_of(task)?;
        if data == F::zero() {
            return Ok((F::zero(), F::zero()));
        }
        let rate = self.uplink_rate();
        if rate <= F::zero() {
            return Err(CostError::ZeroRate {
                task,
                data_size: data.into_f64(),
            });
        }
        let delay = data / rate;
        Ok((delay, self.p_tx_device * delay))
    }

    /// Delay and energy to move subtask `task`'s data across the
    /// edge-cloud link.
    pub fn relay_to_cloud(&self, task: usize) -> Result<(F, F), CostError> {
        let data = self.data_of(task)?;
        if data == F::zero() {
            return Ok((F::zero(), F::zero()));
        }
        let delay = data / self.relay_bandwidth;
        Ok((delay, self.p_relay * delay))
    }

    /// Execution delay and energy of subtask `task` at `site`, ignoring
    /// any predecessor transfers.
    pub fn exec_cost(&self, task: usize, site: Site) -> Result<(F, F), CostError> {
        let workload = self.graph.subtask(task).map_err(graph_to_cost)?.workload;
        Ok(self.exec_of_workload(workload, site))
    }

    fn exec_of_workload(&self, workload: F, site: Site) -> (F, F) {
        match site {
            Site::Local => {
                let delay = workload / self.f_local;
                (delay, self.k_energy * workload * self.f_local * self.f_local)
            }
            Site::Edge => {
                let delay = workload / self.f_edge;
                let power = self.alpha_edge * self.f_edge.powf(self.sigma_exp) + self.beta_edge;
                (delay, power * delay)
            }
            Site::Cloud => {
                let delay = workload / self.f_cloud;
                let power = self.alpha_cloud * self.f_cloud.powf(self.sigma_exp) + self.beta_cloud;
                (delay, power * delay)
            }
        }
    }

    fn data_of(&self, task: usize) -> Result<F, CostError> {
        Ok(self.graph.subtask(task).map_err(graph_to_cost)?.data_size)
    }

    /// Delay and energy to bring a predecessor's result from `from` to
    /// `to`, billed on subtask `billed`'s data size (chosen by the
    /// [`TransferSize`] mode). Same-site fetches are free; device-cloud
    /// fetches pay both hops.
    pub fn transfer_cost(&self, from: Site, to: Site, billed: usize) -> Result<(F, F), CostError> {
        use Site::*;
        match (from, to) {
            (Local, Local) | (Edge, Edge) | (Cloud, Cloud) => Ok((F::zero(), F::zero())),
            (Local, Edge) | (Edge, Local) => self.tx_to_edge(billed),
            (Cloud, Edge) => self.relay_to_cloud(billed),
            (Edge, Cloud) => {
                let (delay, energy) = self.relay_to_cloud(billed)?;
                match self.cloud_fetch_energy {
                    CloudFetchEnergy::Relay => Ok((delay, energy)),
                    CloudFetchEnergy::EdgeExec => {
                        let (_, exec_energy) = self.exec_cost(billed, Site::Edge)?;
                        Ok((delay, exec_energy))
                    }
                }
            }
            (Local, Cloud) | (Cloud, Local) => {
                let (t_up, e_up) = self.tx_to_edge(billed)?;
                let (t_relay, e_relay) = self.relay_to_cloud(billed)?;
                Ok((t_up + t_relay, e_up + e_relay))
            }
        }
    }

    /// Which subtask a fetch from predecessor `pred` into `task` is billed on.
    pub(crate) fn billed_task(&self, task: usize, pred: usize) -> usize {
        match self.transfer_size {
            TransferSize::Consumer => task,
            TransferSize::Predecessor => pred,
        }
    }

    /// Completion time of subtask `n` under `policy`: slowest predecessor
    /// fetch plus own execution delay.
    pub fn completion_time(&self, policy: &OffloadPolicy, n: usize) -> Result<F, CostError> {
        self.check_policy(policy)?;
        let own = policy.site(n);
        let mut fetch = F::zero();
        for &pred in self.graph.predecessors(n).map_err(graph_to_cost)? {
            let (delay, _) = self.transfer_cost(policy.site(pred), own, self.billed_task(n, pred))?;
            fetch = fetch.max(delay);
        }
        let (exec_delay, _) = self.exec_cost(n, own)?;
        Ok(fetch + exec_delay)
    }

    /// Completion energy of subtask `n` under `policy`: every predecessor
    /// fetch plus own execution energy.
    pub fn completion_energy(&self, policy: &OffloadPolicy, n: usize) -> Result<F, CostError> {
        self.check_policy(policy)?;
        let own = policy.site(n);
        let mut fetch = F::zero();
        for &pred in self.graph.predecessors(n).map_err(graph_to_cost)? {
            let (_, energy) = self.transfer_cost(policy.site(pred), own, self.billed_task(n, pred))?;
            fetch = fetch + energy;
        }
        let (_, exec_energy) = self.exec_cost(n, own)?;
        Ok(fetch + exec_energy)
    }

    /// Resolved completion-time budget in seconds.
    ///
    /// Auto mode charges half the total workload, converted to time by the
    /// normalization frequency (device speed unless overridden).
    pub fn resolved_budget(&self) -> F {
        match self.budget {
            BudgetSpec::Explicit(b) => b,
            BudgetSpec::Auto => {
                let norm = self.budget_norm_freq.unwrap_or(self.f_local);
                F::from_f64(0.5) * self.graph.total_workload() / norm
            }
        }
    }

    /// Evaluates `policy` into a full [`CostReport`]. Pure: identical
    /// inputs give identical reports.
    pub fn evaluate(&self, policy: &OffloadPolicy) -> Result<CostReport<F>, CostError> {
        self.check_policy(policy)?;
        let n = self.graph.len();
        let mut per_task_time = Vec::with_capacity(n);
        let mut per_task_energy = Vec::with_capacity(n);
        let mut total_time = F::zero();
        let mut total_energy = F::zero();
        let mut edge_utility = F::zero();
        for id in 0..n {
            let time = self.completion_time(policy, id)?;
            let energy = self.completion_energy(policy, id)?;
            total_time = total_time + time;
            total_energy = total_energy + energy;
            per_task_time.push(time);
            per_task_energy.push(energy);
            match policy.site(id) {
                Site::Edge => edge_utility = edge_utility + self.service_price,
                Site::Cloud => {
                    let (_, relay_energy) = self.relay_to_cloud(id)?;
                    edge_utility = edge_utility - relay_energy;
                }
                Site::Local => {}
            }
        }
        let budget = self.resolved_budget();
        let mut violations = Vec::new();
        if !(edge_utility > F::zero()) {
            violations.push(Violation::NonPositiveUtility {
                utility: edge_utility,
            });
        }
        if !(total_time < budget) {
            violations.push(Violation::BudgetExceeded { total_time, budget });
        }
        Ok(CostReport {
            per_task_time,
            per_task_energy,
            total_time,
            total_energy,
            edge_utility,
            budget,
            feasible: violations.is_empty(),
            violations,
        })
    }

    fn check_policy(&self, policy: &OffloadPolicy) -> Result<(), CostError> {
        if policy.len() != self.graph.len() {
            return Err(CostError::IncompletePolicy {
                expected: self.graph.len(),
                got: policy.len(),
            });
        }
        Ok(())
    }
}

fn graph_to_cost(err: crate::taskgraph::GraphError) -> CostError {
    match err {
        crate::taskgraph::GraphError::UnknownId { id } => CostError::UnknownId { id },
        other => CostError::InvalidScenario {
            field: "graph",
            message: other.to_string(),
        },
    }
}
