use serde::{Deserialize, Serialize};

use crate::model::{BurstPolicy, Coupling, Device, Job, Location, Micros};
use crate::runtime::predict_runtime;

/// A QPU as seen by the placement rule: the device and when its earliest
/// slot is expected to free up.
#[derive(Debug, Clone, Copy)]
pub struct QpuView<'a> {
    pub device: &'a Device,
    pub free_at: Micros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// Best local device.
    Local,
    /// No local device has enough qubits.
    Capacity,
    /// Local completion would miss the deadline.
    Deadline,
    /// Local devices are busy and a cloud device finishes sooner.
    Congestion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unschedulable {
    /// No QPU anywhere has enough qubits, or bursting is off and no local one does.
    NoFittingDevice,
    /// Tightly coupled job without a fitting local QPU.
    Colocation,
    /// Not enough classical nodes exist for the job.
    Nodes,
    /// A prerequisite job could not run.
    Dependency,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Local => "local",
            Reason::Capacity => "capacity",
            Reason::Deadline => "deadline",
            Reason::Congestion => "congestion",
        }
    }
}

impl Unschedulable {
    pub fn as_str(self) -> &'static str {
        match self {
            Unschedulable::NoFittingDevice => "no_fitting_device",
            Unschedulable::Colocation => "colocation",
            Unschedulable::Nodes => "nodes",
            Unschedulable::Dependency => "dependency",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub device: String,
    pub reason: Reason,
    /// Predicted completion time on the chosen device.
    pub completion: Micros,
}

fn completion(job: &Job, v: &QpuView, now: Micros) -> Option<Micros> {
    let run = predict_runtime(job, v.device).ok()?;
    Some(now.max(v.free_at) + run)
}

/// Choose a QPU for `job` at time `now`.
///
/// The fitting local device with the earliest predicted completion is
/// preferred. A cloud device (cheapest predicted cost, then earliest
/// completion) is used when no local device fits, when the local completion
/// misses the deadline, or, unless `deadline_only`, when it simply finishes
/// sooner than a busy local queue. Tightly coupled jobs stay local.
pub fn burst_decision(
    job: &Job,
    local: &[QpuView],
    cloud: &[QpuView],
    policy: BurstPolicy,
    now: Micros,
) -> Result<Decision, Unschedulable> {
    let best_local = local
        .iter()
        .filter(|v| v.device.location == Location::Local)
        .filter_map(|v| completion(job, v, now).map(|c| (c, v)))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.device.id.cmp(&b.1.device.id)));
    let may_burst = policy.allow && job.coupling != Coupling::HpcForQuantum;
    let best_cloud = if may_burst {
        cloud
            .iter()
            .filter_map(|v| {
                let c = completion(job, v, now)?;
                let run = predict_runtime(job, v.device).ok()?;
                Some((v.device.cost_per_us * run as f64, c, v))
            })
            .min_by(|a, b| {
                a.0.total_cmp(&b.0)
                    .then(a.1.cmp(&b.1))
                    .then(a.2.device.id.cmp(&b.2.device.id))
            })
    } else {
        None
    };
    let pick = |v: &QpuView, reason, completion| Decision {
        device: v.device.id.clone(),
        reason,
        completion,
    };
    match (best_local, best_cloud) {
        (None, Some((_, c, v))) => Ok(pick(v, Reason::Capacity, c)),
        (None, None) => {
            let fits_cloud = cloud.iter().any(|v| completion(job, v, now).is_some());
            if job.coupling == Coupling::HpcForQuantum && fits_cloud {
                Err(Unschedulable::Colocation)
            } else {
                Err(Unschedulable::NoFittingDevice)
            }
        }
        (Some((lc, lv)), cloud) => {
            if let Some((_, cc, cv)) = cloud {
                if job.deadline.is_some_and(|d| lc > d) {
                    return Ok(pick(cv, Reason::Deadline, cc));
                }
                if !policy.deadline_only && lv.free_at > now && cc < lc {
                    return Ok(pick(cv, Reason::Congestion, cc));
                }
            }
            Ok(pick(lv, Reason::Local, lc))
        }
    }
}
