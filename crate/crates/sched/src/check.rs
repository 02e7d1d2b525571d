//! Invariant checks over an event log.

use std::collections::BTreeMap;

use crate::engine::{Event, EventKind, Metrics, Phase};
use crate::model::{Coupling, Location, Micros, Scenario};

fn starts(events: &[Event]) -> impl Iterator<Item = &Event> {
    events.iter().filter(|e| e.kind == EventKind::Start)
}

/// Times never decrease along the log.
pub fn check_ordered(events: &[Event]) -> Result<(), String> {
    match events.windows(2).find(|w| w[1].time < w[0].time) {
        Some(w) => Err(format!("time goes back from {} to {}", w[0].time, w[1].time)),
        None => Ok(()),
    }
}

/// Busy intervals per resource: `(qpu id, slot)` or `(node id, 0)`.
pub fn intervals(events: &[Event]) -> BTreeMap<(String, usize), Vec<(Micros, Micros, u64)>> {
    let mut out: BTreeMap<(String, usize), Vec<_>> = BTreeMap::new();
    for e in starts(events) {
        if let (Some(d), Some(s), Some(end)) = (&e.device, e.slot, e.qpu_end) {
            out.entry((d.clone(), s)).or_default().push((e.time, end, e.job));
        }
        if let Some(end) = e.nodes_end {
            for n in &e.nodes {
                out.entry((n.clone(), 0)).or_default().push((e.time, end, e.job));
            }
        }
    }
    out
}

/// Each job phase starts once, and intervals on every QPU slot and node are
/// disjoint.
pub fn check_non_preemption(events: &[Event]) -> Result<(), String> {
    let mut seen = BTreeMap::new();
    for e in starts(events) {
        if seen.insert((e.job, e.phase), e.time).is_some() {
            return Err(format!("job {} phase {:?} started twice", e.job, e.phase));
        }
    }
    for ((dev, slot), mut iv) in intervals(events) {
        iv.sort();
        for w in iv.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(format!(
                    "jobs {} and {} overlap on {dev} slot {slot}: [{}, {}) vs [{}, {})",
                    w[0].2, w[1].2, w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
    }
    Ok(())
}

/// Tightly coupled jobs run on a local QPU with local nodes.
pub fn check_colocation(scenario: &Scenario, events: &[Event]) -> Result<(), String> {
    let loc: BTreeMap<&str, Location> = scenario.devices.iter().map(|d| (d.id.as_str(), d.location)).collect();
    let tight: BTreeMap<u64, bool> = scenario
        .jobs
        .iter()
        .map(|j| (j.id, j.coupling == Coupling::HpcForQuantum))
        .collect();
    for e in starts(events) {
        if !tight.get(&e.job).copied().unwrap_or(false) || e.phase != Some(Phase::Quantum) {
            continue;
        }
        let used = e.device.iter().chain(&e.nodes);
        if let Some(d) = used.into_iter().find(|d| loc[d.as_str()] != Location::Local) {
            return Err(format!("job {} uses non-local device {d}", e.job));
        }
    }
    Ok(())
}

/// Charged time equals the summed resource intervals of finished jobs, per
/// project and in total.
pub fn check_conservation(scenario: &Scenario, events: &[Event], metrics: &Metrics) -> Result<(), String> {
    let project: BTreeMap<u64, &str> = scenario.jobs.iter().map(|j| (j.id, j.project.as_str())).collect();
    let finished: std::collections::BTreeSet<u64> = events
        .iter()
        .filter(|e| e.kind == EventKind::Finish)
        .map(|e| e.job)
        .collect();
    let mut used: BTreeMap<&str, Micros> = BTreeMap::new();
    for e in starts(events).filter(|e| finished.contains(&e.job)) {
        let mut amount = 0;
        if let Some(end) = e.qpu_end {
            amount += end - e.time;
        }
        if let Some(end) = e.nodes_end {
            amount += e.nodes.len() as Micros * (end - e.time);
        }
        *used.entry(project[&e.job]).or_default() += amount;
    }
    for (p, &m) in &metrics.project_used_us {
        let u = used.get(p.as_str()).copied().unwrap_or(0);
        if u != m {
            return Err(format!("project {p}: log sums to {u}, metrics say {m}"));
        }
    }
    let total: Micros = used.values().sum();
    if total != metrics.total_charged_us {
        return Err(format!("total {total} != charged {}", metrics.total_charged_us));
    }
    Ok(())
}

/// No job starts before every job it depends on has finished.
pub fn check_dependencies(scenario: &Scenario, events: &[Event]) -> Result<(), String> {
    let mut finish = BTreeMap::new();
    for (pos, e) in events.iter().enumerate() {
        if e.kind == EventKind::Finish {
            finish.insert(e.job, (e.time, pos));
        }
    }
    let deps: BTreeMap<u64, &[u64]> = scenario.jobs.iter().map(|j| (j.id, j.depends_on.as_slice())).collect();
    for (pos, e) in events.iter().enumerate().filter(|(_, e)| e.kind == EventKind::Start) {
        for d in deps[&e.job].iter() {
            match finish.get(d) {
                Some(&(t, p)) if t <= e.time && p < pos => {}
                _ => return Err(format!("job {} started before dependency {d} finished", e.job)),
            }
        }
    }
    Ok(())
}

/// All of the above.
pub fn check_all(scenario: &Scenario, events: &[Event], metrics: &Metrics) -> Result<(), String> {
    check_ordered(events)?;
    check_non_preemption(events)?;
    check_colocation(scenario, events)?;
    check_conservation(scenario, events, metrics)?;
    check_dependencies(scenario, events)
}
