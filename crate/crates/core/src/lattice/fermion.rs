use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString, PauliTerm, QubitOperator};
use crate::scalar::{Scalar, C};

/// Product of ladder operators, applied left to right as written:
/// `coeff * op[0] op[1] ...`. A `true` flag marks a creation operator.
///
/// Spin orbitals follow `mode = 2 * site + spin` with spin up = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm<T: Scalar> {
    pub ops: Vec<(usize, bool)>,
    pub coeff: C<T>,
}

impl<T: Scalar> FermionTerm<T> {
    pub fn new(ops: Vec<(usize, bool)>, coeff: C<T>) -> Self {
        Self { ops, coeff }
    }

    pub fn real(ops: Vec<(usize, bool)>, coeff: T) -> Self {
        Self::new(ops, Complex::new(coeff, T::zero()))
    }

    /// `c a_i^dagger a_j`.
    pub fn hopping(i: usize, j: usize, coeff: T) -> Self {
        Self::real(vec![(i, true), (j, false)], coeff)
    }

    /// `c n_i`.
    pub fn number(i: usize, coeff: T) -> Self {
        Self::hopping(i, i, coeff)
    }

    /// `c n_i n_j`.
    pub fn density_density(i: usize, j: usize, coeff: T) -> Self {
        Self::real(vec![(i, true), (i, false), (j, true), (j, false)], coeff)
    }
}

pub(crate) fn spin_orbital(site: usize, spin: usize) -> usize {
    2 * site + spin
}

/// `(X_j -/+ i Y_j) / 2` with a `Z` string on every lower mode.
fn ladder<T: Scalar>(mode: usize, dagger: bool, num_modes: usize) -> QubitOperator<T> {
    let half = T::lit(0.5);
    let mut zs: Vec<(usize, Axis)> = (0..mode).map(|q| (q, Axis::Z)).collect();
    let mut xs = zs.clone();
    xs.push((mode, Axis::X));
    zs.push((mode, Axis::Y));
    let y_coeff = if dagger { -half } else { half };
    let mut op = QubitOperator::new(num_modes);
    op.add_term(PauliTerm::real(half, PauliString::new(xs).expect("distinct")))
        .expect("in range");
    op.add_term(PauliTerm::new(
        Complex::new(T::zero(), y_coeff),
        PauliString::new(zs).expect("distinct"),
    ))
    .expect("in range");
    op
}

/// Jordan-Wigner image of a fermionic monomial on `num_modes` qubits.
pub fn jordan_wigner<T: Scalar>(term: &FermionTerm<T>, num_modes: usize) -> Result<QubitOperator<T>> {
    if num_modes > 64 {
        return Err(Error::TooLarge {
            what: "fermionic modes",
            size: num_modes,
            limit: 64,
        });
    }
    let mut acc = QubitOperator::identity(num_modes, T::one()).scale(term.coeff);
    for &(mode, dagger) in &term.ops {
        if mode >= num_modes {
            return Err(Error::ModeOutOfRange { index: mode, num_modes });
        }
        acc = acc.mul(&ladder(mode, dagger, num_modes));
    }
    Ok(acc)
}

/// Sum of Jordan-Wigner images.
pub fn jordan_wigner_sum<T: Scalar>(terms: &[FermionTerm<T>], num_modes: usize) -> Result<QubitOperator<T>> {
    let mut out = QubitOperator::new(num_modes);
    for t in terms {
        out = out.add(&jordan_wigner(t, num_modes)?);
    }
    Ok(out)
}
