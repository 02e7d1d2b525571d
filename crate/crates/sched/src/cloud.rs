//! Minimal cloud-vendor interface and an in-process implementation backed by
//! the runtime model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SchedError};
use crate::model::{Device, Job, Micros};
use crate::runtime::predict_runtime;

pub type Ticket = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CloudStatus {
    Queued,
    Running,
    Done,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloudResult {
    pub job: u64,
    pub device: String,
    pub start: Micros,
    pub end: Micros,
}

pub trait CloudEndpoint {
    fn list_devices(&self) -> Vec<Device>;
    fn submit(&mut self, job: &Job, device: &str, now: Micros) -> Result<Ticket>;
    fn status(&self, ticket: Ticket, now: Micros) -> Result<CloudStatus>;
    fn result(&self, ticket: Ticket, now: Micros) -> Result<CloudResult>;
    fn cancel(&mut self, ticket: Ticket, now: Micros) -> Result<()>;
}

#[derive(Debug, Clone)]
struct Entry {
    result: CloudResult,
    cancelled: bool,
}

/// FIFO per device slot; runtimes come from [`predict_runtime`].
#[derive(Debug, Clone, Default)]
pub struct SimulatedCloud {
    devices: Vec<Device>,
    free_at: BTreeMap<String, Vec<Micros>>,
    tickets: Vec<Entry>,
}

impl SimulatedCloud {
    pub fn new(devices: Vec<Device>) -> Self {
        let free_at = devices
            .iter()
            .map(|d| (d.id.clone(), vec![0; d.resource_model.slots()]))
            .collect();
        Self {
            devices,
            free_at,
            tickets: Vec::new(),
        }
    }

    fn entry(&self, ticket: Ticket) -> Result<&Entry> {
        self.tickets
            .get(ticket as usize)
            .ok_or_else(|| SchedError::InvalidArgument(format!("unknown ticket {ticket}")))
    }
}

impl CloudEndpoint for SimulatedCloud {
    fn list_devices(&self) -> Vec<Device> {
        self.devices.clone()
    }

    fn submit(&mut self, job: &Job, device: &str, now: Micros) -> Result<Ticket> {
        let dev = self
            .devices
            .iter()
            .find(|d| d.id == device)
            .ok_or_else(|| SchedError::InvalidArgument(format!("unknown device `{device}`")))?;
        let run = predict_runtime(job, dev)?;
        let slots = self.free_at.get_mut(device).expect("slots per device");
        let (k, &free) = slots.iter().enumerate().min_by_key(|&(k, &t)| (t, k)).expect("k >= 1");
        let start = now.max(free);
        slots[k] = start + run;
        self.tickets.push(Entry {
            result: CloudResult {
                job: job.id,
                device: device.into(),
                start,
                end: start + run,
            },
            cancelled: false,
        });
        Ok(self.tickets.len() as Ticket - 1)
    }

    fn status(&self, ticket: Ticket, now: Micros) -> Result<CloudStatus> {
        let e = self.entry(ticket)?;
        Ok(if e.cancelled {
            CloudStatus::Cancelled
        } else if now < e.result.start {
            CloudStatus::Queued
        } else if now < e.result.end {
            CloudStatus::Running
        } else {
            CloudStatus::Done
        })
    }

    fn result(&self, ticket: Ticket, now: Micros) -> Result<CloudResult> {
        match self.status(ticket, now)? {
            CloudStatus::Done => Ok(self.entry(ticket)?.result.clone()),
            s => Err(SchedError::InvalidArgument(format!("ticket {ticket} is {s:?}"))),
        }
    }

    /// Only queued work can be cancelled; running circuits are not preempted.
    fn cancel(&mut self, ticket: Ticket, now: Micros) -> Result<()> {
        match self.status(ticket, now)? {
            CloudStatus::Queued => {
                self.tickets[ticket as usize].cancelled = true;
                Ok(())
            }
            s => Err(SchedError::InvalidArgument(format!("ticket {ticket} is {s:?}"))),
        }
    }
}
