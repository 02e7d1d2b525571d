use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::burst::{burst_decision, QpuView, Unschedulable};
use crate::error::Result;
use crate::fairshare::ShareState;
use crate::model::{Coupling, Device, Job, Location, Micros, Scenario};
use crate::runtime::predict_runtime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Quantum,
    Classical,
}

/// Event kinds, declared in the order they are logged within one timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    ReleaseQpu,
    ReleaseNodes,
    Finish,
    Submit,
    Ready,
    Unschedulable,
    Start,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub time: Micros,
    pub kind: EventKind,
    pub job: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    /// QPU id for quantum starts and QPU releases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<String>,
    /// When the QPU slot taken by a start is released.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qpu_end: Option<Micros>,
    /// When the nodes taken by a start are released.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_end: Option<Micros>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Event {
    fn new(time: Micros, kind: EventKind, job: u64) -> Self {
        Self {
            time,
            kind,
            job,
            phase: None,
            device: None,
            slot: None,
            nodes: Vec::new(),
            qpu_end: None,
            nodes_end: None,
            reason: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Last finish minus first submission.
    pub makespan_us: Micros,
    /// Start of the first phase minus the time the job became ready.
    pub mean_wait_us: f64,
    pub p95_wait_us: Micros,
    /// Busy fraction of each device over the makespan, averaged over slots.
    pub utilization: BTreeMap<String, f64>,
    /// Fraction of started quantum jobs that ran on a cloud QPU.
    pub burst_fraction: f64,
    pub completed: usize,
    pub unschedulable: usize,
    pub not_started: usize,
    /// Device-microseconds charged during the run, per project.
    pub project_used_us: BTreeMap<String, Micros>,
    pub total_charged_us: Micros,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub events: Vec<Event>,
    pub metrics: Metrics,
}

impl SimOutput {
    pub fn events_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn metrics_json(&self) -> String {
        serde_json::to_string_pretty(&self.metrics).expect("metrics serialize")
    }
}

/// Parse a JSONL event log back into events.
pub fn parse_events(jsonl: &str) -> std::result::Result<Vec<Event>, serde_json::Error> {
    jsonl
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Waiting,
    Pending,
    Running,
    Done,
    Unschedulable,
}

#[derive(Debug, Clone)]
struct JobRun {
    deps_left: usize,
    submitted: bool,
    status: Status,
    ready_at: Micros,
    started_at: Option<Micros>,
    charged: Micros,
}

#[derive(Debug, Clone)]
enum Action {
    ReleaseQpu { device: usize, slot: usize },
    ReleaseNodes { nodes: Vec<usize> },
    PhaseDone { phase: Phase },
    Submit,
}

impl Action {
    fn order(&self) -> u8 {
        match self {
            Action::ReleaseQpu { .. } => 0,
            Action::ReleaseNodes { .. } => 1,
            Action::PhaseDone { .. } => 2,
            Action::Submit => 3,
        }
    }
}

struct Engine<'a> {
    sc: &'a Scenario,
    seed: u64,
    dev_by_id: BTreeMap<&'a str, usize>,
    dependents: Vec<Vec<usize>>,
    /// Classical work tied to the quantum queue gets dispatch priority.
    linked: Vec<bool>,
    runs: Vec<JobRun>,
    /// Per device: `None` for a free slot, else its predicted release time.
    qpu_slots: Vec<Vec<Option<Micros>>>,
    node_busy: Vec<bool>,
    /// Node device indices, local ones first.
    node_order: Vec<usize>,
    pending: Vec<(usize, Phase, Micros)>,
    heap: BinaryHeap<Reverse<(Micros, u8, u64, u64)>>,
    actions: Vec<Option<(usize, Action)>>,
    shares: ShareState,
    project_used: BTreeMap<String, Micros>,
    busy: Vec<Micros>,
    quantum_started: usize,
    bursted: usize,
    finish_at: Vec<Option<Micros>>,
    log: Vec<Event>,
    buffer: Vec<Event>,
}

impl<'a> Engine<'a> {
    fn new(sc: &'a Scenario, seed: u64) -> Self {
        let by_id: BTreeMap<u64, usize> = sc.jobs.iter().enumerate().map(|(k, j)| (j.id, k)).collect();
        let mut dependents = vec![Vec::new(); sc.jobs.len()];
        for (k, j) in sc.jobs.iter().enumerate() {
            for d in &j.depends_on {
                dependents[by_id[d]].push(k);
            }
        }
        let linked = sc
            .jobs
            .iter()
            .enumerate()
            .map(|(k, j)| {
                j.is_quantum()
                    || j.depends_on.iter().any(|d| sc.jobs[by_id[d]].is_quantum())
                    || dependents[k].iter().any(|&c| sc.jobs[c].is_quantum())
            })
            .collect();
        let runs = sc
            .jobs
            .iter()
            .map(|j| JobRun {
                deps_left: j.depends_on.len(),
                submitted: false,
                status: Status::Waiting,
                ready_at: 0,
                started_at: None,
                charged: 0,
            })
            .collect();
        let qpu_slots = sc
            .devices
            .iter()
            .map(|d| {
                if d.is_qpu() {
                    vec![None; d.resource_model.slots()]
                } else {
                    Vec::new()
                }
            })
            .collect();
        let mut node_order: Vec<usize> = (0..sc.devices.len()).filter(|&k| !sc.devices[k].is_qpu()).collect();
        node_order.sort_by_key(|&k| (sc.devices[k].location, k));
        Self {
            sc,
            seed,
            dev_by_id: sc.devices.iter().enumerate().map(|(k, d)| (d.id.as_str(), k)).collect(),
            dependents,
            linked,
            runs,
            qpu_slots,
            node_busy: vec![false; sc.devices.len()],
            node_order,
            pending: Vec::new(),
            heap: BinaryHeap::new(),
            actions: Vec::new(),
            shares: ShareState::new(&sc.share_tree, sc.scheduling_period_us),
            project_used: sc.share_tree.project_paths().into_iter().map(|p| (p, 0)).collect(),
            busy: vec![0; sc.devices.len()],
            quantum_started: 0,
            bursted: 0,
            finish_at: vec![None; sc.jobs.len()],
            log: Vec::new(),
            buffer: Vec::new(),
        }
    }

    fn schedule(&mut self, time: Micros, job: usize, action: Action) {
        let seq = self.actions.len() as u64;
        self.heap
            .push(Reverse((time, action.order(), self.sc.jobs[job].id, seq)));
        self.actions.push(Some((job, action)));
    }

    fn emit(&mut self, e: Event) {
        self.buffer.push(e);
    }

    fn run(mut self) -> SimOutput {
        for k in 0..self.sc.jobs.len() {
            self.schedule(self.sc.jobs[k].submit_time, k, Action::Submit);
        }
        while let Some(&Reverse((now, ..))) = self.heap.peek() {
            while let Some(&Reverse((t, _, _, seq))) = self.heap.peek() {
                if t != now {
                    break;
                }
                self.heap.pop();
                let (job, action) = self.actions[seq as usize].take().expect("action fired once");
                self.handle(now, job, action);
            }
            self.shares.expire(now);
            let open = self.sc.horizon_us.is_none_or(|h| now < h);
            self.dispatch(now, open);
            let mut batch = std::mem::take(&mut self.buffer);
            batch.sort_by_key(|e| (e.kind, e.job));
            self.log.append(&mut batch);
        }
        self.finish()
    }

    fn handle(&mut self, now: Micros, j: usize, action: Action) {
        let id = self.sc.jobs[j].id;
        match action {
            Action::Submit => {
                self.emit(Event::new(now, EventKind::Submit, id));
                self.runs[j].submitted = true;
                if self.runs[j].deps_left == 0 && self.runs[j].status == Status::Waiting {
                    self.make_ready(now, j);
                }
            }
            Action::ReleaseQpu { device, slot } => {
                self.qpu_slots[device][slot] = None;
                let mut e = Event::new(now, EventKind::ReleaseQpu, id);
                e.device = Some(self.sc.devices[device].id.clone());
                e.slot = Some(slot);
                self.emit(e);
            }
            Action::ReleaseNodes { nodes } => {
                for &n in &nodes {
                    self.node_busy[n] = false;
                }
                let mut e = Event::new(now, EventKind::ReleaseNodes, id);
                e.nodes = nodes.iter().map(|&n| self.sc.devices[n].id.clone()).collect();
                self.emit(e);
            }
            Action::PhaseDone { phase } => {
                let job = &self.sc.jobs[j];
                if phase == Phase::Quantum && job.coupling == Coupling::QuantumAboutHpc && job.classical_node_need > 0 {
                    self.pending.push((j, Phase::Classical, now));
                    let mut e = Event::new(now, EventKind::Ready, id);
                    e.phase = Some(Phase::Classical);
                    self.emit(e);
                    return;
                }
                self.runs[j].status = Status::Done;
                self.finish_at[j] = Some(now);
                let charged = self.runs[j].charged;
                self.shares.charge(&job.project, charged, now);
                *self.project_used.get_mut(&job.project).expect("known project") += charged;
                self.emit(Event::new(now, EventKind::Finish, id));
                for c in self.dependents[j].clone() {
                    self.runs[c].deps_left -= 1;
                    if self.runs[c].deps_left == 0 && self.runs[c].submitted && self.runs[c].status == Status::Waiting {
                        self.make_ready(now, c);
                    }
                }
            }
        }
    }

    fn qpu_views(&self, location: Location, now: Micros) -> Vec<QpuView<'a>> {
        self.sc
            .devices
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_qpu() && d.location == location)
            .map(|(k, d)| QpuView {
                device: d,
                free_at: self.qpu_slots[k].iter().map(|s| s.unwrap_or(now)).min().unwrap_or(now),
            })
            .collect()
    }

    /// Why a job can never run, independent of current load.
    fn infeasible(&self, j: usize) -> Option<Unschedulable> {
        let job = &self.sc.jobs[j];
        let need = job.classical_node_need as usize;
        let local_only = job.coupling == Coupling::HpcForQuantum && job.is_quantum();
        let nodes = self
            .node_order
            .iter()
            .filter(|&&n| !local_only || self.sc.devices[n].location == Location::Local)
            .count();
        if need > nodes {
            return Some(Unschedulable::Nodes);
        }
        if job.is_quantum() {
            let local = self.qpu_views(Location::Local, 0);
            let cloud = self.qpu_views(Location::Cloud, 0);
            if let Err(u) = burst_decision(job, &local, &cloud, self.sc.burst_policy, 0) {
                return Some(u);
            }
        }
        None
    }

    fn make_ready(&mut self, now: Micros, j: usize) {
        if let Some(reason) = self.infeasible(j) {
            self.mark_unschedulable(now, j, reason);
            return;
        }
        let job = &self.sc.jobs[j];
        let phase = if job.is_quantum() {
            Phase::Quantum
        } else {
            Phase::Classical
        };
        self.runs[j].status = Status::Pending;
        self.runs[j].ready_at = now;
        self.pending.push((j, phase, now));
        let mut e = Event::new(now, EventKind::Ready, job.id);
        e.phase = Some(phase);
        self.emit(e);
    }

    fn mark_unschedulable(&mut self, now: Micros, j: usize, reason: Unschedulable) {
        let mut work = vec![(j, reason)];
        while let Some((k, why)) = work.pop() {
            if matches!(self.runs[k].status, Status::Unschedulable | Status::Done) {
                continue;
            }
            self.runs[k].status = Status::Unschedulable;
            let mut e = Event::new(now, EventKind::Unschedulable, self.sc.jobs[k].id);
            e.reason = Some(why.as_str().into());
            self.emit(e);
            for &c in &self.dependents[k] {
                work.push((c, Unschedulable::Dependency));
            }
        }
    }

    fn free_nodes(&self, need: usize, local_only: bool) -> Option<Vec<usize>> {
        let picked: Vec<usize> = self
            .node_order
            .iter()
            .copied()
            .filter(|&n| !self.node_busy[n])
            .filter(|&n| !local_only || self.sc.devices[n].location == Location::Local)
            .take(need)
            .collect();
        (picked.len() == need).then_some(picked)
    }

    fn anything_free(&self) -> bool {
        self.qpu_slots.iter().any(|s| s.iter().any(Option::is_none))
            || self.node_order.iter().any(|&n| !self.node_busy[n])
    }

    /// Past the horizon only later phases of already started jobs run.
    fn dispatch(&mut self, now: Micros, open: bool) {
        if self.pending.is_empty() || !self.anything_free() {
            return;
        }
        let mut keys: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for &(j, _, _) in &self.pending {
            let p = self.sc.jobs[j].project.as_str();
            if !keys.contains_key(p) {
                keys.insert(p, self.shares.key(p, now));
            }
        }
        let mut order: Vec<(bool, f64, f64, Micros, u64, Phase, usize)> = self
            .pending
            .iter()
            .enumerate()
            .map(|(k, &(j, phase, _))| {
                let job = &self.sc.jobs[j];
                let boost = phase == Phase::Classical && self.linked[j];
                let (g, p) = keys[job.project.as_str()];
                (!boost, g, p, job.submit_time, job.id, phase, k)
            })
            .collect();
        order.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then(a.1.total_cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
                .then(a.3.cmp(&b.3))
                .then(a.4.cmp(&b.4))
                .then(a.5.cmp(&b.5))
        });
        let mut started = vec![false; self.pending.len()];
        for &(.., k) in &order {
            let (j, phase, _) = self.pending[k];
            if !open && self.runs[j].started_at.is_none() {
                continue;
            }
            started[k] = match phase {
                Phase::Classical => self.start_classical(now, j),
                Phase::Quantum => self.start_quantum(now, j),
            };
            if !self.anything_free() {
                break;
            }
        }
        let mut k = 0;
        self.pending.retain(|_| {
            k += 1;
            !started[k - 1]
        });
    }

    fn note_start(&mut self, now: Micros, j: usize) {
        let r = &mut self.runs[j];
        r.status = Status::Running;
        if r.started_at.is_none() {
            r.started_at = Some(now);
        }
    }

    fn start_classical(&mut self, now: Micros, j: usize) -> bool {
        let job = &self.sc.jobs[j];
        let Some(nodes) = self.free_nodes(job.classical_node_need as usize, false) else {
            return false;
        };
        let dur = job.classical_time_us;
        for &n in &nodes {
            self.node_busy[n] = true;
            self.busy[n] += dur;
        }
        self.runs[j].charged += nodes.len() as Micros * dur;
        self.note_start(now, j);
        let mut e = Event::new(now, EventKind::Start, job.id);
        e.phase = Some(Phase::Classical);
        e.nodes = nodes.iter().map(|&n| self.sc.devices[n].id.clone()).collect();
        e.nodes_end = Some(now + dur);
        self.emit(e);
        self.schedule(now + dur, j, Action::ReleaseNodes { nodes });
        self.schedule(
            now + dur,
            j,
            Action::PhaseDone {
                phase: Phase::Classical,
            },
        );
        true
    }

    fn jittered(&self, job: &Job, predicted: Micros) -> Micros {
        if self.sc.runtime_jitter == 0.0 {
            return predicted;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(job.id);
        let u: f64 = rng.random_range(-1.0..=1.0);
        (predicted as f64 * (1.0 + self.sc.runtime_jitter * u)).round() as Micros
    }

    fn start_quantum(&mut self, now: Micros, j: usize) -> bool {
        let job = &self.sc.jobs[j];
        let local = self.qpu_views(Location::Local, now);
        let cloud = self.qpu_views(Location::Cloud, now);
        let Ok(decision) = burst_decision(job, &local, &cloud, self.sc.burst_policy, now) else {
            return false;
        };
        let dev = self.dev_by_id[decision.device.as_str()];
        let Some(slot) = self.qpu_slots[dev].iter().position(Option::is_none) else {
            return false;
        };
        let device: &Device = &self.sc.devices[dev];
        let holds_nodes = job.coupling != Coupling::QuantumAboutHpc && job.classical_node_need > 0;
        let nodes = if holds_nodes {
            match self.free_nodes(
                job.classical_node_need as usize,
                job.coupling == Coupling::HpcForQuantum,
            ) {
                Some(n) => n,
                None => return false,
            }
        } else {
            Vec::new()
        };
        let predicted = predict_runtime(job, device).expect("decision only returns fitting devices");
        let run = self.jittered(job, predicted);
        let classical = if holds_nodes { job.classical_time_us } else { 0 };
        let (qpu_hold, node_hold, predicted_hold) = match job.coupling {
            Coupling::HpcForQuantum => (run + classical, run + classical, predicted + classical),
            Coupling::QuantumInHpc => (run, run + classical, predicted),
            Coupling::QuantumAboutHpc => (run, 0, predicted),
        };
        self.qpu_slots[dev][slot] = Some(now + predicted_hold);
        self.busy[dev] += qpu_hold;
        for &n in &nodes {
            self.node_busy[n] = true;
            self.busy[n] += node_hold;
        }
        self.runs[j].charged += qpu_hold + nodes.len() as Micros * node_hold;
        self.note_start(now, j);
        self.quantum_started += 1;
        if device.location == Location::Cloud {
            self.bursted += 1;
        }
        let mut e = Event::new(now, EventKind::Start, job.id);
        e.phase = Some(Phase::Quantum);
        e.device = Some(device.id.clone());
        e.slot = Some(slot);
        e.qpu_end = Some(now + qpu_hold);
        e.reason = Some(decision.reason.as_str().into());
        if !nodes.is_empty() {
            e.nodes = nodes.iter().map(|&n| self.sc.devices[n].id.clone()).collect();
            e.nodes_end = Some(now + node_hold);
        }
        self.emit(e);
        let done = now + qpu_hold.max(if nodes.is_empty() { 0 } else { node_hold });
        self.schedule(now + qpu_hold, j, Action::ReleaseQpu { device: dev, slot });
        if !nodes.is_empty() {
            self.schedule(now + node_hold, j, Action::ReleaseNodes { nodes });
        }
        self.schedule(done, j, Action::PhaseDone { phase: Phase::Quantum });
        true
    }

    fn finish(self) -> SimOutput {
        let first_submit = self.sc.jobs.iter().map(|j| j.submit_time).min().unwrap_or(0);
        let last_finish = self.finish_at.iter().flatten().copied().max();
        let makespan = last_finish.map_or(0, |f| f.saturating_sub(first_submit));
        let mut waits: Vec<Micros> = self
            .runs
            .iter()
            .filter_map(|r| r.started_at.map(|s| s - r.ready_at))
            .collect();
        waits.sort_unstable();
        let mean_wait = if waits.is_empty() {
            0.0
        } else {
            waits.iter().sum::<Micros>() as f64 / waits.len() as f64
        };
        let p95 = if waits.is_empty() {
            0
        } else {
            let rank = (0.95 * waits.len() as f64).ceil() as usize;
            waits[rank.max(1) - 1]
        };
        let utilization = self
            .sc
            .devices
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let slots = if d.is_qpu() { d.resource_model.slots() } else { 1 } as f64;
                let u = if makespan == 0 {
                    0.0
                } else {
                    self.busy[k] as f64 / (slots * makespan as f64)
                };
                (d.id.clone(), u)
            })
            .collect();
        let count = |s: Status| self.runs.iter().filter(|r| r.status == s).count();
        let metrics = Metrics {
            makespan_us: makespan,
            mean_wait_us: mean_wait,
            p95_wait_us: p95,
            utilization,
            burst_fraction: if self.quantum_started == 0 {
                0.0
            } else {
                self.bursted as f64 / self.quantum_started as f64
            },
            completed: count(Status::Done),
            unschedulable: count(Status::Unschedulable),
            not_started: self
                .runs
                .iter()
                .filter(|r| r.started_at.is_none() && r.status != Status::Unschedulable)
                .count(),
            total_charged_us: self.project_used.values().sum(),
            project_used_us: self.project_used,
        };
        SimOutput {
            events: self.log,
            metrics,
        }
    }
}

/// Run the discrete-event simulation.
///
/// The seed only drives runtime jitter; with `runtime_jitter = 0` the
/// output is independent of it.
pub fn simulate(scenario: &Scenario, seed: u64) -> Result<SimOutput> {
    scenario.validate()?;
    Ok(Engine::new(scenario, seed).run())
}
