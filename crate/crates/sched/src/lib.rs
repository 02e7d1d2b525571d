//! Discrete-event simulation of hybrid quantum/classical workload scheduling:
//! fair-share queues, coupling-aware co-allocation, runtime prediction and
//! cloud bursting.

pub mod burst;
pub mod check;
pub mod cloud;
pub mod engine;
pub mod error;
pub mod fairshare;
pub mod model;
pub mod runtime;
pub mod workload;

pub use burst::{burst_decision, Decision, QpuView, Reason, Unschedulable};
pub use engine::{parse_events, simulate, Event, EventKind, Metrics, Phase, SimOutput};
pub use error::{Issue, Result, SchedError};
pub use fairshare::{fairshare_next, ShareState};
pub use model::{
    BurstPolicy, Coupling, Device, DeviceKind, Job, Level, Location, Micros, ResourceModel, Scenario, ShareNode,
    ShareTree,
};
pub use runtime::{calibrate, predict_runtime, Calibration, TraceRecord};
pub use workload::{gen_fairshare_scenario, gen_vqe_workload, VqeSizes};
