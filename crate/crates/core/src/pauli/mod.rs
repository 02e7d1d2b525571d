//! Pauli-string algebra and operator-level analysis: one-norms, spectral
//! bounds, anticommuting and qubitwise-commuting grouping, particle-number
//! shifts.

mod grouping;
mod io;
mod lcu;
mod operator;
mod string;

pub use grouping::{group_anticommuting, grouped_l1, qubitwise_partition, AnticommutingGroup};
pub use lcu::{effective_shift, number_operator, optimize_shift, spectral_halfwidth};
pub use operator::{QubitOperator, DEFAULT_DROP_TOL};
pub use string::{commutes, multiply, qubitwise_commutes, Axis, PauliString, PauliTerm};

use crate::scalar::Scalar;

pub fn l1_norm<T: Scalar>(op: &QubitOperator<T>) -> T {
    op.l1_norm()
}
