use super::{PauliString, PauliTerm, QubitOperator};
use crate::error::{Error, Result};
use crate::linalg::{check_dense, hermitian_eigenvalues, operator_matrix, LinalgScalar};
use crate::scalar::Scalar;

/// `(E_max - E_min) / 2` by dense diagonalization; lower bound on the one-norm
/// of any LCU decomposition.
pub fn spectral_halfwidth<T: LinalgScalar>(op: &QubitOperator<T>) -> Result<T> {
    op.require_hermitian()?;
    check_dense(op.num_qubits())?;
    let ev = hermitian_eigenvalues(operator_matrix(op));
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    Ok((hi - lo) * T::lit(0.5))
}

/// Jordan-Wigner total number operator `sum_j (I - Z_j) / 2` on every qubit.
pub fn number_operator<T: Scalar>(num_qubits: usize) -> QubitOperator<T> {
    let half = T::lit(0.5);
    let mut op = QubitOperator::identity(num_qubits, half * T::from_usize(num_qubits).unwrap());
    for q in 0..num_qubits {
        op.add_term(PauliTerm::real(-half, PauliString::single(q, super::Axis::Z)))
            .expect("index in range");
    }
    op
}

/// `H + c (N^2 - N_e^2 I)`, which acts as `H` on the `N_e`-particle sector.
///
/// The one-body shift `O_1e (N - N_e)` is fixed to zero here.
pub fn effective_shift<T: Scalar>(op: &QubitOperator<T>, n_electrons: usize, c: T) -> Result<QubitOperator<T>> {
    let n = op.num_qubits();
    if n_electrons > n {
        return Err(Error::InvalidArgument(format!(
            "{n_electrons} electrons do not fit in {n} modes"
        )));
    }
    if c == T::zero() {
        return Ok(op.clone());
    }
    let num = number_operator::<T>(n);
    let ne = T::from_usize(n_electrons).unwrap();
    let penalty = num.mul(&num).sub(&QubitOperator::identity(n, ne * ne));
    Ok(op.add(&penalty.scale_real(c)))
}

/// Grid search for the `c` minimizing the one-norm of [`effective_shift`].
///
/// Returns `(c_best, l1_best)`; ties go to smallest `|c|`, then smallest `c`.
pub fn optimize_shift<T: Scalar>(op: &QubitOperator<T>, n_electrons: usize, c_grid: &[T]) -> Result<(T, T)> {
    if c_grid.is_empty() {
        return Err(Error::InvalidArgument("empty shift grid".into()));
    }
    let mut best: Option<(T, T)> = None;
    for &c in c_grid {
        let l1 = effective_shift(op, n_electrons, c)?.l1_norm();
        best = Some(match best {
            None => (c, l1),
            Some((bc, bl)) => {
                let tol = T::lit(1e-12) * T::one().max(bl.abs());
                if l1 < bl - tol {
                    (c, l1)
                } else if (l1 - bl).abs() <= tol && (c.abs() < bc.abs() || (c.abs() == bc.abs() && c < bc)) {
                    (c, l1)
                } else {
                    (bc, bl)
                }
            }
        });
    }
    Ok(best.unwrap())
}
