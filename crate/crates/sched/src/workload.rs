use serde::{Deserialize, Serialize};

use crate::model::{BurstPolicy, Coupling, Device, Job, Location, Micros, Scenario, ShareTree};

/// Shape of a generated variational workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeSizes {
    pub project: String,
    pub n_qubits: u32,
    pub depth: u64,
    /// Length of the one-off classical preprocessing job.
    pub pre_time_us: Micros,
    /// Length of each parameter-update job.
    pub update_time_us: Micros,
    pub nodes: u32,
    pub submit_time: Micros,
    /// Id of the first job; the rest follow consecutively.
    pub first_id: u64,
}

impl Default for VqeSizes {
    fn default() -> Self {
        Self {
            project: "hub/group/vqe".into(),
            n_qubits: 8,
            depth: 20,
            pre_time_us: 50_000,
            update_time_us: 2_000,
            nodes: 2,
            submit_time: 0,
            first_id: 0,
        }
    }
}

/// A preprocessing job, then per iteration a quantum job followed by a
/// classical update, all chained: `2 * iterations + 1` jobs.
pub fn gen_vqe_workload(iterations: usize, circuits_per_iter: u64, shots: u64, sizes: &VqeSizes) -> Vec<Job> {
    let mut jobs = Vec::with_capacity(2 * iterations + 1);
    let classical = |id, time, dep: Option<u64>| Job {
        id,
        project: sizes.project.clone(),
        coupling: Coupling::QuantumAboutHpc,
        circuits: 0,
        depth: 0,
        n_qubits: 0,
        shots: 0,
        classical_node_need: sizes.nodes.max(1),
        classical_time_us: time,
        submit_time: sizes.submit_time,
        deadline: None,
        depends_on: dep.into_iter().collect(),
    };
    let mut id = sizes.first_id;
    jobs.push(classical(id, sizes.pre_time_us, None));
    for _ in 0..iterations {
        jobs.push(Job {
            id: id + 1,
            project: sizes.project.clone(),
            coupling: Coupling::QuantumInHpc,
            circuits: circuits_per_iter,
            depth: sizes.depth,
            n_qubits: sizes.n_qubits,
            shots,
            classical_node_need: sizes.nodes,
            classical_time_us: 0,
            submit_time: sizes.submit_time,
            deadline: None,
            depends_on: vec![id],
        });
        jobs.push(classical(id + 2, sizes.update_time_us, Some(id + 1)));
        id += 2;
    }
    jobs
}

/// Two equal-share projects competing for one QPU. Jobs from `a` take twice
/// as long as jobs from `b`; every job is submitted at time zero and the
/// horizon is half the total demand, so the queue never drains.
pub fn gen_fairshare_scenario(jobs_per_project: usize, runtime_jitter: f64) -> Scenario {
    let qpu = Device::qpu("qpu0", 27, 1.0, 5.0, Location::Local);
    let unit = 100 * (10 + 5); // shots * (depth * gate + readout)
    let mut jobs = Vec::with_capacity(2 * jobs_per_project);
    for k in 0..jobs_per_project {
        for (p, circuits) in [("a", 2), ("b", 1)] {
            jobs.push(Job {
                id: jobs.len() as u64,
                project: format!("hub/group/{p}"),
                coupling: Coupling::QuantumAboutHpc,
                circuits,
                depth: 10,
                n_qubits: 5,
                shots: 100,
                classical_node_need: 0,
                classical_time_us: 0,
                submit_time: k as Micros,
                deadline: None,
                depends_on: vec![],
            });
        }
    }
    let demand = jobs_per_project as Micros * 3 * unit;
    Scenario {
        devices: vec![qpu],
        share_tree: ShareTree::flat("hub", "group", &[("a", 1.0), ("b", 1.0)]),
        jobs,
        burst_policy: BurstPolicy::default(),
        horizon_us: Some(demand / 2),
        runtime_jitter,
        scheduling_period_us: crate::model::DEFAULT_SCHEDULING_PERIOD,
    }
}
