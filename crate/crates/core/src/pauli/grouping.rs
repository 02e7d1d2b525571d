use super::{PauliTerm, QubitOperator};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Terms that pairwise anticommute; `sum_k c_k P_k = combined_norm * R` with
/// `R` a Hermitian unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct AnticommutingGroup<T: Scalar> {
    pub members: Vec<PauliTerm<T>>,
    pub combined_norm: T,
}

/// Greedy seed-and-grow partition into anticommuting sets.
///
/// Terms are visited by descending `|c|` (ties in canonical order). Each
/// unassigned term seeds a group, which then absorbs every later term that
/// anticommutes with all current members.
pub fn group_anticommuting<T: Scalar>(op: &QubitOperator<T>) -> Result<Vec<AnticommutingGroup<T>>> {
    if !op.is_hermitian() {
        return Err(Error::ComplexCoefficients);
    }
    let mut terms: Vec<PauliTerm<T>> = op.terms().collect();
    terms.sort_by(|a, b| {
        b.coeff
            .re
            .abs()
            .partial_cmp(&a.coeff.re.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut used = vec![false; terms.len()];
    let mut groups = Vec::new();
    for seed in 0..terms.len() {
        if used[seed] {
            continue;
        }
        used[seed] = true;
        let mut members = vec![terms[seed].clone()];
        for cand in seed + 1..terms.len() {
            if !used[cand] && members.iter().all(|m| !m.commutes(&terms[cand])) {
                used[cand] = true;
                members.push(terms[cand].clone());
            }
        }
        let combined_norm = members.iter().map(|m| m.coeff.re * m.coeff.re).sum::<T>().sqrt();
        groups.push(AnticommutingGroup { members, combined_norm });
    }
    Ok(groups)
}

/// `sum_g combined_norm(g)`: the LCU one-norm after anticommuting grouping.
pub fn grouped_l1<T: Scalar>(groups: &[AnticommutingGroup<T>]) -> T {
    groups.iter().map(|g| g.combined_norm).sum()
}

/// Partition of terms into qubitwise-commuting sets by greedy coloring of the
/// incompatibility graph, largest degree first (ties in canonical order).
pub fn qubitwise_partition<T: Scalar>(op: &QubitOperator<T>) -> Vec<Vec<PauliTerm<T>>> {
    let terms: Vec<PauliTerm<T>> = op.terms().collect();
    let n = terms.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if !terms[i].qubitwise_commutes(&terms[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
    let mut color = vec![usize::MAX; n];
    let mut ncolors = 0;
    for &v in &order {
        let mut taken = vec![false; ncolors + 1];
        for &u in &adj[v] {
            if color[u] != usize::MAX {
                taken[color[u]] = true;
            }
        }
        let c = taken.iter().position(|&t| !t).unwrap();
        color[v] = c;
        ncolors = ncolors.max(c + 1);
    }
    let mut groups = vec![Vec::new(); ncolors];
    for (i, t) in terms.into_iter().enumerate() {
        groups[color[i]].push(t);
    }
    groups
}
