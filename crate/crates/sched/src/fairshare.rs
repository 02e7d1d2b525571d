use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use crate::model::{Job, Micros, ShareTree};

#[derive(Debug, Clone)]
struct Account {
    group: String,
    /// Fraction of all shares held by the project (product down the tree).
    fraction: f64,
    used_total: Micros,
    /// `(completion time, amount)` within the rolling window.
    recent: VecDeque<(Micros, Micros)>,
}

/// Usage bookkeeping for fair-share ordering.
///
/// A project's ratio is `windowed usage / (share fraction * period)`; groups
/// are ranked by the same ratio over their projects. Candidates compare by
/// group ratio, then project ratio.
#[derive(Debug, Clone)]
pub struct ShareState {
    period: Micros,
    projects: BTreeMap<String, Account>,
    group_fraction: BTreeMap<String, f64>,
}

impl ShareState {
    pub fn new(tree: &ShareTree, period: Micros) -> Self {
        let mut projects = BTreeMap::new();
        let mut group_fraction = BTreeMap::new();
        let hub_total: f64 = tree.hubs.iter().map(|h| h.shares).sum();
        for h in &tree.hubs {
            let hf = h.shares / hub_total;
            let g_total: f64 = h.children.iter().map(|g| g.shares).sum();
            for g in &h.children {
                let gf = hf * g.shares / g_total;
                let gkey = format!("{}/{}", h.name, g.name);
                group_fraction.insert(gkey.clone(), gf);
                let p_total: f64 = g.children.iter().map(|p| p.shares).sum();
                for p in &g.children {
                    // Prior usage counts as charged at time zero.
                    let mut recent = VecDeque::new();
                    if p.used_time > 0 {
                        recent.push_back((0, p.used_time));
                    }
                    projects.insert(
                        format!("{gkey}/{}", p.name),
                        Account {
                            group: gkey.clone(),
                            fraction: gf * p.shares / p_total,
                            used_total: p.used_time,
                            recent,
                        },
                    );
                }
            }
        }
        Self {
            period,
            projects,
            group_fraction,
        }
    }

    pub fn contains(&self, project: &str) -> bool {
        self.projects.contains_key(project)
    }

    /// Record `amount` device-microseconds for `project`, completed at `now`.
    pub fn charge(&mut self, project: &str, amount: Micros, now: Micros) {
        let acc = self.projects.get_mut(project).expect("project validated at load");
        acc.used_total += amount;
        acc.recent.push_back((now, amount));
    }

    fn windowed(&self, acc: &Account, now: Micros) -> Micros {
        let from = now.saturating_sub(self.period);
        acc.recent
            .iter()
            .filter(|&&(t, _)| t > from || now < self.period)
            .map(|&(_, a)| a)
            .sum()
    }

    /// Drop records that have left the window.
    pub fn expire(&mut self, now: Micros) {
        if now < self.period {
            return;
        }
        let from = now - self.period;
        for acc in self.projects.values_mut() {
            while acc.recent.front().is_some_and(|&(t, _)| t <= from) {
                acc.recent.pop_front();
            }
        }
    }

    pub fn project_ratio(&self, project: &str, now: Micros) -> f64 {
        let acc = &self.projects[project];
        self.windowed(acc, now) as f64 / (acc.fraction * self.period as f64)
    }

    pub fn group_ratio(&self, group: &str, now: Micros) -> f64 {
        let used: Micros = self
            .projects
            .values()
            .filter(|a| a.group == group)
            .map(|a| self.windowed(a, now))
            .sum();
        used as f64 / (self.group_fraction[group] * self.period as f64)
    }

    /// `(group ratio, project ratio)` for a project.
    pub fn key(&self, project: &str, now: Micros) -> (f64, f64) {
        let group = &self.projects[project].group;
        (self.group_ratio(group, now), self.project_ratio(project, now))
    }

    pub fn used_total(&self) -> BTreeMap<String, Micros> {
        self.projects.iter().map(|(k, a)| (k.clone(), a.used_total)).collect()
    }

    /// Total ordering of candidates: ratios, then submit time, then id.
    pub fn compare(&self, a: &Job, b: &Job, now: Micros) -> Ordering {
        let (ka, kb) = (self.key(&a.project, now), self.key(&b.project, now));
        ka.0.total_cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(a.submit_time.cmp(&b.submit_time))
            .then(a.id.cmp(&b.id))
    }
}

/// The pending job to dispatch next, or `None` for an empty queue.
pub fn fairshare_next(queue: &[&Job], state: &ShareState, now: Micros) -> Option<u64> {
    queue.iter().min_by(|a, b| state.compare(a, b, now)).map(|j| j.id)
}
