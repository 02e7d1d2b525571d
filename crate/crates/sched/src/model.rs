use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Issue, SchedError};

/// Simulation time in integer microseconds.
pub type Micros = u64;

/// 24 simulated hours.
pub const DEFAULT_SCHEDULING_PERIOD: Micros = 24 * 3600 * 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DeviceKind {
    #[serde(rename = "QPU")]
    Qpu,
    #[serde(rename = "CPU-node")]
    CpuNode,
    #[serde(rename = "GPU-node")]
    GpuNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Local,
    Cloud,
}

/// How many jobs a QPU runs at once. A `shares` device has `k` slots, each
/// running one job at full predicted runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ResourceModel {
    #[default]
    QpuExclusive,
    Shares {
        k: u32,
    },
}

impl ResourceModel {
    pub fn slots(self) -> usize {
        match self {
            ResourceModel::QpuExclusive => 1,
            ResourceModel::Shares { k } => k as usize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub id: String,
    pub kind: DeviceKind,
    #[serde(default)]
    pub qubits: u32,
    /// Per-layer times in microseconds; only meaningful for QPUs.
    #[serde(default)]
    pub gate_time_1q: f64,
    #[serde(default)]
    pub gate_time_2q: f64,
    #[serde(default)]
    pub readout_time: f64,
    pub location: Location,
    #[serde(default)]
    pub submit_latency: Micros,
    #[serde(default)]
    pub resource_model: ResourceModel,
    /// Price per microsecond of device time, used to pick among cloud QPUs.
    #[serde(default)]
    pub cost_per_us: f64,
}

impl Device {
    pub fn qpu(id: &str, qubits: u32, gate_time_2q: f64, readout_time: f64, location: Location) -> Self {
        Self {
            id: id.into(),
            kind: DeviceKind::Qpu,
            qubits,
            gate_time_1q: gate_time_2q / 10.0,
            gate_time_2q,
            readout_time,
            location,
            submit_latency: 0,
            resource_model: ResourceModel::QpuExclusive,
            cost_per_us: 0.0,
        }
    }

    pub fn cpu_node(id: &str, location: Location) -> Self {
        Self {
            id: id.into(),
            kind: DeviceKind::CpuNode,
            qubits: 0,
            gate_time_1q: 0.0,
            gate_time_2q: 0.0,
            readout_time: 0.0,
            location,
            submit_latency: 0,
            resource_model: ResourceModel::QpuExclusive,
            cost_per_us: 0.0,
        }
    }

    pub fn is_qpu(&self) -> bool {
        self.kind == DeviceKind::Qpu
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Coupling {
    /// QPU and classical nodes reserved together at a local site.
    #[serde(rename = "HPC_for_Quantum")]
    HpcForQuantum,
    /// Classical nodes held while the quantum phase runs.
    #[serde(rename = "Quantum_in_HPC")]
    QuantumInHpc,
    /// Quantum phase and classical post-processing scheduled independently.
    #[serde(rename = "Quantum_about_HPC")]
    QuantumAboutHpc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: u64,
    /// `hub/group/project`.
    pub project: String,
    pub coupling: Coupling,
    #[serde(default)]
    pub circuits: u64,
    #[serde(default)]
    pub depth: u64,
    #[serde(default)]
    pub n_qubits: u32,
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub classical_node_need: u32,
    /// Length of the classical phase on the job's nodes.
    #[serde(default)]
    pub classical_time_us: Micros,
    pub submit_time: Micros,
    #[serde(default)]
    pub deadline: Option<Micros>,
    /// Jobs that must finish before this one becomes ready.
    #[serde(default)]
    pub depends_on: Vec<u64>,
}

impl Job {
    pub fn is_quantum(&self) -> bool {
        self.circuits > 0 || self.n_qubits > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Hub,
    Group,
    Project,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShareNode {
    pub name: String,
    pub level: Level,
    pub shares: f64,
    #[serde(default)]
    pub children: Vec<ShareNode>,
    #[serde(default)]
    pub used_time: Micros,
}

impl ShareNode {
    pub fn new(name: &str, level: Level, shares: f64, children: Vec<ShareNode>) -> Self {
        Self {
            name: name.into(),
            level,
            shares,
            children,
            used_time: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ShareTree {
    pub hubs: Vec<ShareNode>,
}

impl ShareTree {
    /// One hub with one group holding `projects` (name, shares).
    pub fn flat(hub: &str, group: &str, projects: &[(&str, f64)]) -> Self {
        let leaves = projects
            .iter()
            .map(|&(p, s)| ShareNode::new(p, Level::Project, s, vec![]))
            .collect();
        Self {
            hubs: vec![ShareNode::new(
                hub,
                Level::Hub,
                1.0,
                vec![ShareNode::new(group, Level::Group, 1.0, leaves)],
            )],
        }
    }

    /// Every `hub/group/project` path.
    pub fn project_paths(&self) -> Vec<String> {
        let mut out = Vec::new();
        for h in &self.hubs {
            for g in &h.children {
                for p in &g.children {
                    out.push(format!("{}/{}/{}", h.name, g.name, p.name));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BurstPolicy {
    #[serde(default)]
    pub allow: bool,
    /// Only burst for capacity or a deadline, never just because local
    /// QPUs are congested.
    #[serde(default)]
    pub deadline_only: bool,
}

fn default_period() -> Micros {
    DEFAULT_SCHEDULING_PERIOD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub devices: Vec<Device>,
    pub share_tree: ShareTree,
    pub jobs: Vec<Job>,
    #[serde(default)]
    pub burst_policy: BurstPolicy,
    /// No job starts at or after this time, though started jobs run their
    /// remaining phases; `None` runs to completion.
    #[serde(default)]
    pub horizon_us: Option<Micros>,
    /// Actual runtimes are `predicted * (1 + jitter * u)`, `u` uniform in
    /// `[-1, 1]` drawn from the seed.
    #[serde(default)]
    pub runtime_jitter: f64,
    #[serde(default = "default_period")]
    pub scheduling_period_us: Micros,
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Self, SchedError> {
        let sc: Scenario = serde_json::from_str(s).map_err(|e| SchedError::Parse(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Collect every problem, each tagged with a JSON-style path.
    pub fn validate(&self) -> Result<(), SchedError> {
        let mut issues = Vec::new();
        let mut push = |path: String, message: String| issues.push(Issue { path, message });
        if self.devices.is_empty() {
            push("devices".into(), "at least one device is required".into());
        }
        let mut ids = BTreeSet::new();
        for (k, d) in self.devices.iter().enumerate() {
            let at = format!("devices[{k}]");
            if !ids.insert(d.id.as_str()) {
                push(format!("{at}.id"), format!("duplicate device id `{}`", d.id));
            }
            if d.is_qpu() {
                if d.qubits == 0 {
                    push(format!("{at}.qubits"), "a QPU needs at least one qubit".into());
                }
                for (name, v) in [
                    ("gate_time_1q", d.gate_time_1q),
                    ("gate_time_2q", d.gate_time_2q),
                    ("readout_time", d.readout_time),
                ] {
                    if !(v > 0.0 && v.is_finite()) {
                        push(format!("{at}.{name}"), format!("must be > 0, got {v}"));
                    }
                }
            }
            if let ResourceModel::Shares { k } = d.resource_model {
                if k == 0 {
                    push(format!("{at}.resource_model.k"), "shares must be >= 1".into());
                }
            }
            if !(d.cost_per_us >= 0.0 && d.cost_per_us.is_finite()) {
                push(format!("{at}.cost_per_us"), "must be >= 0".into());
            }
        }
        if self.share_tree.hubs.is_empty() {
            push("share_tree.hubs".into(), "at least one hub is required".into());
        }
        check_level(&self.share_tree.hubs, Level::Hub, "share_tree.hubs", &mut push);
        let projects: BTreeSet<String> = self.share_tree.project_paths().into_iter().collect();
        let job_ids: BTreeMap<u64, usize> = self.jobs.iter().enumerate().map(|(k, j)| (j.id, k)).collect();
        let has_nodes = self.devices.iter().any(|d| !d.is_qpu());
        let mut seen = BTreeSet::new();
        for (k, j) in self.jobs.iter().enumerate() {
            let at = format!("jobs[{k}]");
            if !seen.insert(j.id) {
                push(format!("{at}.id"), format!("duplicate job id {}", j.id));
            }
            if !projects.contains(&j.project) {
                push(format!("{at}.project"), format!("unknown project `{}`", j.project));
            }
            if !j.is_quantum() && j.classical_node_need == 0 {
                push(
                    format!("{at}.classical_node_need"),
                    "a classical-only job needs at least one node".into(),
                );
            }
            if j.classical_node_need > 0 && !has_nodes {
                push(
                    format!("{at}.classical_node_need"),
                    "scenario has no classical nodes".into(),
                );
            }
            for (m, dep) in j.depends_on.iter().enumerate() {
                if *dep == j.id {
                    push(format!("{at}.depends_on[{m}]"), "job depends on itself".into());
                } else if !job_ids.contains_key(dep) {
                    push(format!("{at}.depends_on[{m}]"), format!("unknown job {dep}"));
                }
            }
        }
        if let Some(cycle_at) = find_cycle(&self.jobs, &job_ids) {
            push(format!("jobs[{cycle_at}].depends_on"), "dependency cycle".into());
        }
        if !(0.0..1.0).contains(&self.runtime_jitter) {
            push("runtime_jitter".into(), "must be in [0, 1)".into());
        }
        if self.scheduling_period_us == 0 {
            push("scheduling_period_us".into(), "must be > 0".into());
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SchedError::Invalid(issues))
        }
    }
}

fn check_level(nodes: &[ShareNode], level: Level, at: &str, push: &mut impl FnMut(String, String)) {
    let mut names = BTreeSet::new();
    for (k, n) in nodes.iter().enumerate() {
        let here = format!("{at}[{k}]");
        if n.level != level {
            push(
                format!("{here}.level"),
                format!("expected {level:?}, got {:?}", n.level),
            );
        }
        if !(n.shares > 0.0 && n.shares.is_finite()) {
            push(format!("{here}.shares"), format!("must be > 0, got {}", n.shares));
        }
        if !names.insert(n.name.as_str()) || n.name.contains('/') {
            push(format!("{here}.name"), format!("bad or duplicate name `{}`", n.name));
        }
        let next = match level {
            Level::Hub => Some(Level::Group),
            Level::Group => Some(Level::Project),
            Level::Project => None,
        };
        match next {
            Some(l) => {
                if n.children.is_empty() {
                    push(format!("{here}.children"), format!("a {level:?} needs children"));
                }
                check_level(&n.children, l, &format!("{here}.children"), push);
            }
            None if !n.children.is_empty() => {
                push(format!("{here}.children"), "projects are leaves".into());
            }
            None => {}
        }
    }
}

/// Index of some job on a dependency cycle, if any.
fn find_cycle(jobs: &[Job], index: &BTreeMap<u64, usize>) -> Option<usize> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; jobs.len()];
    for start in 0..jobs.len() {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state[start] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let deps = &jobs[v].depends_on;
            if *next < deps.len() {
                let d = deps[*next];
                *next += 1;
                if let Some(&w) = index.get(&d) {
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return Some(w),
                        _ => {}
                    }
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}
