use serde::{Deserialize, Serialize};

use crate::error::{Result, SchedError};
use crate::model::{Device, Job, Micros};

/// `circuits * shots * (depth * gate_time_2q + readout_time) + submit_latency`,
/// rounded up to whole microseconds.
pub fn predict_runtime(job: &Job, device: &Device) -> Result<Micros> {
    if !device.is_qpu() {
        return Err(SchedError::NotQpu(device.id.clone()));
    }
    if job.n_qubits > device.qubits {
        return Err(SchedError::QubitsExceeded {
            job: job.id,
            device: device.id.clone(),
            need: job.n_qubits,
            have: device.qubits,
        });
    }
    let per_shot = job.depth as f64 * device.gate_time_2q + device.readout_time;
    let body = (job.circuits as f64 * job.shots as f64 * per_shot).ceil();
    Ok(body as Micros + device.submit_latency)
}

/// One observed execution for [`calibrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub circuits: u64,
    pub shots: u64,
    pub depth: u64,
    #[serde(default)]
    pub latency_us: Micros,
    pub runtime_us: Micros,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub gate_time_2q: f64,
    pub readout_time: f64,
    /// Root-mean-square residual in microseconds.
    pub rms_residual: f64,
}

/// Least-squares fit of the two per-shot coefficients from historical runs:
/// `runtime - latency = (circuits * shots * depth) a + (circuits * shots) b`.
pub fn calibrate(trace: &[TraceRecord]) -> Result<Calibration> {
    if trace.len() < 2 {
        return Err(SchedError::Degenerate("need at least two trace records".into()));
    }
    let rows: Vec<(f64, f64, f64)> = trace
        .iter()
        .map(|r| {
            let cs = r.circuits as f64 * r.shots as f64;
            (cs * r.depth as f64, cs, r.runtime_us as f64 - r.latency_us as f64)
        })
        .collect();
    let (mut saa, mut sab, mut sbb, mut say, mut sby) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, y) in &rows {
        saa += a * a;
        sab += a * b;
        sbb += b * b;
        say += a * y;
        sby += b * y;
    }
    let det = saa * sbb - sab * sab;
    if !(det.abs() > 1e-12 * (saa * sbb).max(f64::MIN_POSITIVE)) {
        return Err(SchedError::Degenerate("depths must vary across records".into()));
    }
    let gate = (say * sbb - sby * sab) / det;
    let readout = (saa * sby - sab * say) / det;
    let ss: f64 = rows.iter().map(|&(a, b, y)| (a * gate + b * readout - y).powi(2)).sum();
    Ok(Calibration {
        gate_time_2q: gate,
        readout_time: readout,
        rms_residual: (ss / rows.len() as f64).sqrt(),
    })
}
