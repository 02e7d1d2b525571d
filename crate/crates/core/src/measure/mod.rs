//! Expectation-value estimation from sampled bitstrings: qubitwise-commuting
//! measurement groups with shot allocation, randomized single-qubit-basis
//! (classical-shadow) estimation, and zero-noise extrapolation.

mod shadow;
mod zne;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{qubitwise_partition, Axis, PauliString, PauliTerm, QubitOperator};
use crate::scalar::Scalar;
use crate::sv::StateVec;

pub use shadow::shadow_estimate;
pub use zne::{zne_extrapolate, ZneModel};

/// Qubitwise-commuting terms measured together after `basis_circuit`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup<T: Scalar> {
    pub terms: Vec<PauliTerm<T>>,
    pub basis_circuit: Circuit<T>,
    pub shots: usize,
}

impl<T: Scalar> MeasurementGroup<T> {
    pub fn new(terms: Vec<PauliTerm<T>>, num_qubits: usize) -> Result<Self> {
        let basis_circuit = basis_change(&terms, num_qubits)?;
        Ok(Self {
            terms,
            basis_circuit,
            shots: 0,
        })
    }

    /// Sum of `|c|` over the group's terms.
    pub fn weight(&self) -> T {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }
}

/// Per-group (or per-term, for shadows) slice of an [`EstimateReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartEstimate {
    pub label: String,
    pub mean: f64,
    pub stderr: f64,
    pub shots: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub stderr: f64,
    pub per_group: Vec<PartEstimate>,
    pub total_shots: u64,
    pub seed: u64,
}

/// Rotations taking every term of a qubitwise-commuting set to a `Z`/`I`
/// string: `H` for an `X` axis, `Sdg` then `H` for `Y`, nothing for `Z`.
pub fn basis_change<T: Scalar>(terms: &[PauliTerm<T>], num_qubits: usize) -> Result<Circuit<T>> {
    let mut axis: BTreeMap<usize, Axis> = BTreeMap::new();
    for t in terms {
        for &(q, a) in t.string.ops() {
            match axis.insert(q, a) {
                Some(prev) if prev != a => {
                    return Err(Error::InvalidArgument(format!(
                        "group is not qubitwise commuting on qubit {q}"
                    )))
                }
                _ => {}
            }
        }
    }
    let mut c = Circuit::new(num_qubits);
    for (q, a) in axis {
        match a {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => {
                c.push(Gate::Sdg(q))?;
                c.push(Gate::H(q))?;
            }
            Axis::Z => {}
        }
    }
    Ok(c)
}

/// Greedy qubitwise-commuting partition of `op` with basis circuits attached
/// and no shots assigned.
pub fn group_qubitwise_commuting<T: Scalar>(op: &QubitOperator<T>) -> Result<Vec<MeasurementGroup<T>>> {
    qubitwise_partition(op)
        .into_iter()
        .map(|terms| MeasurementGroup::new(terms, op.num_qubits()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShotStrategy {
    Uniform,
    /// Proportional to each group's one-norm weight.
    #[default]
    Weighted,
}

/// Split `total` shots across groups with largest-remainder rounding. Every
/// nonempty group receives at least one shot; empty groups receive none.
pub fn allocate_shots<T: Scalar>(
    groups: &[MeasurementGroup<T>],
    total: usize,
    strategy: ShotStrategy,
) -> Result<Vec<usize>> {
    let live: Vec<bool> = groups.iter().map(|g| !g.terms.is_empty()).collect();
    let n_live = live.iter().filter(|&&l| l).count();
    if total < n_live {
        return Err(Error::InvalidArgument(format!(
            "{total} shots cannot cover {n_live} groups"
        )));
    }
    let mut weights: Vec<f64> = groups
        .iter()
        .zip(&live)
        .map(|(g, &l)| match (l, strategy) {
            (false, _) => 0.0,
            (true, ShotStrategy::Uniform) => 1.0,
            (true, ShotStrategy::Weighted) => g.weight().as_f64(),
        })
        .collect();
    if weights.iter().sum::<f64>() <= 0.0 {
        weights = live.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
    }
    let mut alloc = largest_remainder(&weights, total);
    // Lift starved groups by taking from the currently largest allocation.
    for i in 0..alloc.len() {
        if live[i] && alloc[i] == 0 {
            let donor = (0..alloc.len())
                .filter(|&j| alloc[j] > 1)
                .max_by(|&a, &b| alloc[a].cmp(&alloc[b]).then(b.cmp(&a)))
                .expect("total >= live groups leaves a donor");
            alloc[donor] -= 1;
            alloc[i] = 1;
        }
    }
    Ok(alloc)
}

/// Largest-remainder apportionment of `total` by `weights`; fractional ties
/// go to the lower index.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| total as f64 * w / sum).collect();
    let mut alloc: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = alloc.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - quotas[a].floor();
        let fb = quotas[b] - quotas[b].floor();
        fb.partial_cmp(&fa).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        alloc[i] += 1;
    }
    alloc
}

/// Stream seed for sub-task `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over a golden-ratio stride.
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_coverage<T: Scalar>(op: &QubitOperator<T>, groups: &[MeasurementGroup<T>]) -> Result<()> {
    let mut seen: BTreeMap<&PauliString, usize> = BTreeMap::new();
    for g in groups {
        for t in &g.terms {
            *seen.entry(&t.string).or_insert(0) += 1;
            if (op.coeff(&t.string) - t.coeff).norm() > T::lit(1e-12) * T::one().max(t.coeff.norm()) {
                return Err(Error::InvalidArgument(format!(
                    "group term {} does not match the observable",
                    t.string
                )));
            }
        }
    }
    if seen.values().any(|&k| k > 1) {
        return Err(Error::InvalidArgument("a term appears in more than one group".into()));
    }
    for (p, _) in op.iter() {
        if !seen.contains_key(p) {
            return Err(Error::InvalidArgument(format!("term {p} is not measured by any group")));
        }
    }
    Ok(())
}

/// Mean and standard error of a weighted sample `(value, count)`; the
/// standard error uses the `M - 1` variance and is infinite for `M = 1`.
pub(crate) fn sample_stats(values: impl Iterator<Item = (f64, u64)> + Clone) -> (f64, f64, u64) {
    let m: u64 = values.clone().map(|(_, k)| k).sum();
    if m == 0 {
        return (0.0, f64::INFINITY, 0);
    }
    let mean = values.clone().map(|(v, k)| v * k as f64).sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, f64::INFINITY, 1);
    }
    let ss: f64 = values.map(|(v, k)| (v - mean).powi(2) * k as f64).sum();
    let var = ss / (m - 1) as f64;
    (mean, (var / m as f64).sqrt(), m)
}

/// Estimate `<op>` by sampling each group in its rotated basis.
///
/// Each shot of a group yields `sum_k c_k (-1)^{parity of outcome on P_k}`;
/// group means add, group variances add in quadrature. Groups draw from
/// independent streams derived from `seed` and their index.
pub fn estimate_expectation<T: Scalar>(
    state: &StateVec<T>,
    op: &QubitOperator<T>,
    groups: &[MeasurementGroup<T>],
    seed: u64,
) -> Result<EstimateReport> {
    op.require_hermitian()?;
    if op.num_qubits() != state.num_qubits() {
        return Err(Error::SizeMismatch {
            expected: state.num_qubits(),
            got: op.num_qubits(),
        });
    }
    check_coverage(op, groups)?;
    let parts: Vec<Result<PartEstimate>> = groups
        .par_iter()
        .enumerate()
        .map(|(gi, g)| estimate_group(state, g, derive_seed(seed, gi as u64)))
        .collect();
    let parts: Vec<PartEstimate> = parts.into_iter().collect::<Result<_>>()?;
    let mean = parts.iter().map(|p| p.mean).sum();
    let stderr = parts.iter().map(|p| p.stderr * p.stderr).sum::<f64>().sqrt();
    let total_shots = parts.iter().map(|p| p.shots).sum();
    Ok(EstimateReport {
        mean,
        stderr,
        per_group: parts,
        total_shots,
        seed,
    })
}

fn estimate_group<T: Scalar>(state: &StateVec<T>, g: &MeasurementGroup<T>, seed: u64) -> Result<PartEstimate> {
    let label = g
        .terms
        .iter()
        .map(|t| t.string.to_string())
        .collect::<Vec<_>>()
        .join(" + ");
    if g.terms.is_empty() {
        return Ok(PartEstimate {
            label,
            mean: 0.0,
            stderr: 0.0,
            shots: 0,
        });
    }
    if g.shots == 0 {
        return Err(Error::InvalidArgument(format!("group [{label}] has no shots")));
    }
    let mut rotated = state.clone();
    rotated.apply_circuit(&g.basis_circuit)?;
    let hist = rotated.sample(g.shots as u64, seed)?;
    let diag: Vec<(u64, f64)> = g
        .terms
        .iter()
        .map(|t| (t.string.masks().0 | t.string.masks().1, t.coeff.re.as_f64()))
        .collect();
    let values: Vec<(f64, u64)> = hist
        .iter()
        .map(|(&outcome, &count)| {
            let v = diag
                .iter()
                .map(|&(mask, c)| {
                    if (outcome as u64 & mask).count_ones() % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .sum();
            (v, count)
        })
        .collect();
    let (mean, stderr, shots) = sample_stats(values.iter().copied());
    Ok(PartEstimate {
        label,
        mean,
        stderr,
        shots,
    })
}
