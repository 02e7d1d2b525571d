//! Product-formula compilation, step-count bounds, and measured Trotter error.
//!
//! Angles follow `theta = 2 c t / n`, so each block is
//! `exp(-i theta/2 P) = exp(-i c P t / n)`.

use nalgebra::DMatrix;
use serde_json::json;

use crate::circuits::{pauli_rotation_circuit, Circuit, DENSE_UNITARY_LIMIT};
use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian, operator_matrix, phase_aligned_distance, LinalgScalar};
use crate::pauli::{PauliTerm, QubitOperator};
use crate::scalar::{Scalar, C};

/// Term-count guard for the pairwise commutator sum.
pub const MAX_COMMUTATOR_TERMS: usize = 2000;

/// Inputs of a product formula.
///
/// `term_order` indexes the operator's terms in canonical order. Identity
/// terms may appear in it but are skipped when emitting gates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterPlan<T: Scalar> {
    pub hamiltonian: QubitOperator<T>,
    pub t: T,
    pub order: u8,
    pub steps: usize,
    pub term_order: Vec<usize>,
}

/// Indices of terms sorted by descending `|c|`, ties in canonical order.
pub fn default_term_order<T: Scalar>(h: &QubitOperator<T>) -> Vec<usize> {
    let mags: Vec<T> = h.iter().map(|(_, c)| c.norm()).collect();
    let mut idx: Vec<usize> = (0..mags.len()).collect();
    idx.sort_by(|&a, &b| {
        mags[b]
            .partial_cmp(&mags[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx
}

fn check_order(order: u8) -> Result<()> {
    if order == 1 || order == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "product-formula order must be 1 or 2, got {order}"
        )))
    }
}

impl<T: Scalar> TrotterPlan<T> {
    pub fn new(hamiltonian: QubitOperator<T>, t: T, order: u8, steps: usize) -> Result<Self> {
        let term_order = default_term_order(&hamiltonian);
        Self::with_term_order(hamiltonian, t, order, steps, term_order)
    }

    pub fn with_term_order(
        hamiltonian: QubitOperator<T>,
        t: T,
        order: u8,
        steps: usize,
        term_order: Vec<usize>,
    ) -> Result<Self> {
        check_order(order)?;
        if steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if !t.is_finite() {
            return Err(Error::InvalidArgument("evolution time must be finite".into()));
        }
        let mut seen = vec![false; hamiltonian.len()];
        if term_order.len() != seen.len() {
            return Err(Error::SizeMismatch {
                expected: seen.len(),
                got: term_order.len(),
            });
        }
        for &k in &term_order {
            if k >= seen.len() || seen[k] {
                return Err(Error::InvalidArgument("term_order is not a permutation".into()));
            }
            seen[k] = true;
        }
        Ok(Self {
            hamiltonian,
            t,
            order,
            steps,
            term_order,
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "hamiltonian": self.hamiltonian.to_json_value(),
            "t": self.t.as_f64(),
            "order": self.order,
            "steps": self.steps,
            "term_order": self.term_order,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("plan serializes")
    }
}

fn ordered_terms<T: Scalar>(plan: &TrotterPlan<T>) -> Result<Vec<PauliTerm<T>>> {
    if !plan.hamiltonian.is_hermitian() {
        return Err(Error::ComplexCoefficients);
    }
    let terms: Vec<PauliTerm<T>> = plan.hamiltonian.terms().collect();
    Ok(plan
        .term_order
        .iter()
        .map(|&k| terms[k].clone())
        .filter(|t| !t.string.is_identity())
        .collect())
}

fn one_step<T: Scalar>(plan: &TrotterPlan<T>) -> Result<Circuit<T>> {
    let terms = ordered_terms(plan)?;
    let n = plan.hamiltonian.num_qubits();
    let steps = T::from_usize(plan.steps).unwrap();
    let two = T::lit(2.0);
    let mut step = Circuit::new(n);
    match plan.order {
        1 => {
            for term in &terms {
                let theta = two * term.coeff.re * plan.t / steps;
                step.extend(&pauli_rotation_circuit(term, theta, n)?)?;
            }
        }
        _ => {
            let half = |term: &PauliTerm<T>| term.coeff.re * plan.t / steps;
            for term in &terms {
                step.extend(&pauli_rotation_circuit(term, half(term), n)?)?;
            }
            for term in terms.iter().rev() {
                step.extend(&pauli_rotation_circuit(term, half(term), n)?)?;
            }
        }
    }
    Ok(step)
}

/// Full product-formula circuit: one step repeated `plan.steps` times.
pub fn trotter_circuit<T: Scalar>(plan: &TrotterPlan<T>) -> Result<Circuit<T>> {
    check_order(plan.order)?;
    Ok(one_step(plan)?.repeat(plan.steps))
}

fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("error target must be > 0, got {eps}")));
    }
    Ok(())
}

/// Formula bound on the product-formula error with one-norm `lambda`:
/// `(lambda t)^2 / (2n) * e^{lambda t / n}` for order 1 and
/// `(lambda t)^3 / (3 n^2) * e^{lambda t / n}` for order 2.
pub fn l1_error_bound(lambda: f64, t: f64, n: usize, order: u8) -> f64 {
    let x = lambda * t.abs();
    let n = n as f64;
    match order {
        1 => x * x / (2.0 * n) * (x / n).exp(),
        _ => x * x * x / (3.0 * n * n) * (x / n).exp(),
    }
}

/// Smallest `n` with `bound(n) <= eps` for a bound decreasing in `n`.
fn smallest_n(bound: impl Fn(usize) -> f64, eps: f64) -> Result<usize> {
    if bound(1) <= eps {
        return Ok(1);
    }
    let mut hi = 2usize;
    while bound(hi) > eps {
        hi = hi.checked_mul(2).ok_or(Error::TooLarge {
            what: "Trotter steps",
            size: usize::MAX,
            limit: usize::MAX / 2,
        })?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Step count from the one-norm bound; `1` when all terms commute or `t = 0`.
/// The identity component is excluded from the one-norm since it only adds a
/// global phase.
pub fn steps_for_error_l1<T: Scalar>(h: &QubitOperator<T>, t: T, eps: T, order: u8) -> Result<usize> {
    check_eps(eps)?;
    check_order(order)?;
    h.require_hermitian()?;
    if t == T::zero() || h.all_terms_commute() {
        return Ok(1);
    }
    let lambda = (h.l1_norm() - h.identity_coeff().norm()).as_f64();
    let (t, eps) = (t.as_f64(), eps.as_f64());
    smallest_n(|n| l1_error_bound(lambda, t, n, order), eps)
}

/// `sum_{i<j} ||[H_i, H_j]||_1` over the non-identity terms.
pub fn commutator_sum<T: Scalar>(h: &QubitOperator<T>) -> Result<T> {
    let terms: Vec<PauliTerm<T>> = h.terms().filter(|t| !t.string.is_identity()).collect();
    if terms.len() > MAX_COMMUTATOR_TERMS {
        return Err(Error::TooLarge {
            what: "terms for commutator bound",
            size: terms.len(),
            limit: MAX_COMMUTATOR_TERMS,
        });
    }
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            // Anticommuting Paulis give [P, Q] = 2PQ, commuting ones give 0.
            if !terms[i].string.commutes(&terms[j].string) {
                acc += two * terms[i].coeff.norm() * terms[j].coeff.norm();
            }
        }
    }
    Ok(acc)
}

/// First-order step count `ceil(t^2 C / (2 eps))` with `C` from [`commutator_sum`].
pub fn steps_for_error_commutator<T: Scalar>(h: &QubitOperator<T>, t: T, eps: T) -> Result<usize> {
    check_eps(eps)?;
    h.require_hermitian()?;
    let c = commutator_sum(h)?.as_f64();
    let (t, eps) = (t.as_f64(), eps.as_f64());
    let n = (t * t * c / (2.0 * eps)).ceil();
    if !(n < usize::MAX as f64) {
        return Err(Error::TooLarge {
            what: "Trotter steps",
            size: usize::MAX,
            limit: usize::MAX / 2,
        });
    }
    Ok((n as usize).max(1))
}

fn mat_pow<T: LinalgScalar>(m: &DMatrix<C<T>>, mut k: usize) -> DMatrix<C<T>> {
    let dim = m.nrows();
    let mut result = DMatrix::<C<T>>::identity(dim, dim);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Spectral-norm distance, up to global phase, between the product formula
/// with `n` steps and `exp(-i H t)`. The `n`-step unitary is formed by
/// repeated squaring of the one-step matrix.
pub fn empirical_error<T: LinalgScalar>(h: &QubitOperator<T>, t: T, n: usize, order: u8) -> Result<T> {
    if h.num_qubits() > DENSE_UNITARY_LIMIT {
        return Err(Error::TooLarge {
            what: "qubits for empirical Trotter error",
            size: h.num_qubits(),
            limit: DENSE_UNITARY_LIMIT,
        });
    }
    let plan = TrotterPlan::new(h.clone(), t, order, n)?;
    empirical_error_for_plan(&plan)
}

/// [`empirical_error`] for an explicit plan, honouring its term order.
pub fn empirical_error_for_plan<T: LinalgScalar>(plan: &TrotterPlan<T>) -> Result<T> {
    let step = one_step(plan)?.to_matrix()?;
    let approx = mat_pow(&step, plan.steps);
    let exact = expm_hermitian(&operator_matrix(&plan.hamiltonian), plan.t);
    Ok(phase_aligned_distance(&approx, &exact))
}
