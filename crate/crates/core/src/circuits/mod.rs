//! Circuit representation, dense reference unitary, global folding for
//! noise amplification, and Pauli-rotation synthesis.

pub mod gate;
mod io;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use gate::{Gate, GateMatrix, Mat2, Mat4};

use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliTerm};
use crate::scalar::{Scalar, C};

/// Qubit limit for [`Circuit::to_matrix`].
pub const DENSE_UNITARY_LIMIT: usize = 10;

/// Ordered gate list over an `n`-qubit register. Qubit `q` contributes bit
/// `2^q` to basis-state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T: Scalar> {
    num_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate<T>>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate<T>) -> Result<()> {
        g.validate(self.num_qubits)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit<T>) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// The circuit concatenated `times` times.
    pub fn repeat(&self, times: usize) -> Circuit<T> {
        let mut gates = Vec::with_capacity(self.gates.len() * times);
        for _ in 0..times {
            gates.extend(self.gates.iter().cloned());
        }
        Circuit {
            num_qubits: self.num_qubits,
            gates,
        }
    }

    /// `C^dagger`: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit<T> {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Dense unitary `G_{m-1} ... G_0`, each gate lifted to the full register
    /// by its Kronecker embedding.
    pub fn to_matrix(&self) -> Result<DMatrix<C<T>>> {
        if self.num_qubits > DENSE_UNITARY_LIMIT {
            return Err(Error::TooLarge {
                what: "qubits for dense unitary",
                size: self.num_qubits,
                limit: DENSE_UNITARY_LIMIT,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::identity(dim, dim);
        for g in &self.gates {
            m = lifted_product(g, &m);
        }
        Ok(m)
    }
}

/// Full-register matrix of one gate via the Kronecker embedding: entry
/// `(r, c)` is the local matrix element when `r` and `c` agree off the targets.
pub fn lifted_matrix<T: Scalar>(g: &Gate<T>, num_qubits: usize) -> DMatrix<C<T>> {
    let dim = 1usize << num_qubits;
    DMatrix::from_fn(dim, dim, |r, c| lifted_entry(g, r, c))
}

fn local_index(r: usize, ts: &[usize]) -> usize {
    ts.iter().enumerate().map(|(k, &t)| ((r >> t) & 1) << k).sum()
}

fn lifted_entry<T: Scalar>(g: &Gate<T>, r: usize, c: usize) -> C<T> {
    let ts = g.targets();
    let tmask: usize = ts.iter().map(|&t| 1 << t).sum();
    if r & !tmask != c & !tmask {
        return Complex::new(T::zero(), T::zero());
    }
    let (lr, lc) = (local_index(r, &ts), local_index(c, &ts));
    match g.matrix() {
        GateMatrix::One(_, u) => u[lr][lc],
        GateMatrix::Two(_, _, u) => u[lr][lc],
    }
}

/// `lift(g) * m`, visiting only the nonzero columns of each lifted row.
fn lifted_product<T: Scalar>(g: &Gate<T>, m: &DMatrix<C<T>>) -> DMatrix<C<T>> {
    let ts = g.targets();
    let tmask: usize = ts.iter().map(|&t| 1 << t).sum();
    let dim = m.nrows();
    let orbit: Vec<usize> = (0..1usize << ts.len())
        .map(|l| ts.iter().enumerate().map(|(k, &t)| ((l >> k) & 1) << t).sum())
        .collect();
    let mut out = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for r in 0..dim {
        let base = r & !tmask;
        for &off in &orbit {
            let k = base | off;
            let e = lifted_entry(g, r, k);
            if e.re == T::zero() && e.im == T::zero() {
                continue;
            }
            for col in 0..dim {
                out[(r, col)] += e * m[(k, col)];
            }
        }
    }
    out
}

/// Global unitary folding `C (C^dagger C)^((factor-1)/2)` for odd `factor`.
pub fn fold_global<T: Scalar>(c: &Circuit<T>, factor: usize) -> Result<Circuit<T>> {
    if factor == 0 || factor % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "folding factor must be odd and >= 1, got {factor}"
        )));
    }
    let inv = c.inverse();
    let mut out = c.clone();
    for _ in 0..(factor - 1) / 2 {
        out.gates.extend(inv.gates.iter().cloned());
        out.gates.extend(c.gates.iter().cloned());
    }
    Ok(out)
}

/// Circuit for `exp(-i theta/2 P)` using basis changes, a CX ladder onto the
/// highest support qubit, `RZ(theta)`, and the mirrored unladder.
///
/// The term's coefficient is ignored; callers fold it into `theta`.
pub fn pauli_rotation_circuit<T: Scalar>(term: &PauliTerm<T>, theta: T, num_qubits: usize) -> Result<Circuit<T>> {
    let ops = term.string.ops();
    if ops.is_empty() {
        return Err(Error::InvalidArgument("rotation about the identity".into()));
    }
    let mut c = Circuit::new(num_qubits);
    for &(q, a) in ops {
        match a {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => {
                c.push(Gate::Sdg(q))?;
                c.push(Gate::H(q))?;
            }
            Axis::Z => {}
        }
    }
    for w in ops.windows(2) {
        c.push(Gate::CX(w[0].0, w[1].0))?;
    }
    let top = ops[ops.len() - 1].0;
    c.push(Gate::RZ(top, theta))?;
    for w in ops.windows(2).rev() {
        c.push(Gate::CX(w[0].0, w[1].0))?;
    }
    for &(q, a) in ops {
        match a {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => {
                c.push(Gate::H(q))?;
                c.push(Gate::S(q))?;
            }
            Axis::Z => {}
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_hermitian, max_abs_diff, normalized_overlap, pauli_matrix};

    #[test]
    fn empty_is_identity() {
        let m = Circuit::<f64>::new(3).to_matrix().unwrap();
        assert_eq!(m, DMatrix::identity(8, 8));
    }

    #[test]
    fn x_matrix() {
        let c = Circuit::<f64>::from_gates(1, vec![Gate::X(0)]).unwrap();
        let m = c.to_matrix().unwrap();
        assert_eq!(m[(0, 1)].re, 1.0);
        assert_eq!(m[(1, 0)].re, 1.0);
        assert_eq!(m[(0, 0)].re, 0.0);
    }

    #[test]
    fn bell_column() {
        let c = Circuit::<f64>::from_gates(2, vec![Gate::H(0), Gate::CX(0, 1)]).unwrap();
        let m = c.to_matrix().unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m[(0, 0)].re - s).abs() < 1e-15);
        assert!((m[(3, 0)].re - s).abs() < 1e-15);
        assert!(m[(1, 0)].norm() < 1e-15 && m[(2, 0)].norm() < 1e-15);
    }

    #[test]
    fn sparse_product_matches_explicit_lift() {
        let c =
            Circuit::<f64>::from_gates(3, vec![Gate::H(2), Gate::CX(2, 0), Gate::RZZ(0, 1, 0.3), Gate::SX(1)]).unwrap();
        let mut dense = DMatrix::identity(8, 8);
        for g in c.gates() {
            dense = lifted_matrix(g, 3) * dense;
        }
        assert!(max_abs_diff(&dense, &c.to_matrix().unwrap()) < 1e-15);
    }

    #[test]
    fn oversize_rejected() {
        assert!(Circuit::<f64>::new(11).to_matrix().is_err());
    }

    #[test]
    fn fold_factors() {
        let c = Circuit::<f64>::from_gates(1, vec![Gate::H(0)]).unwrap();
        assert_eq!(fold_global(&c, 1).unwrap(), c);
        let f3 = fold_global(&c, 3).unwrap();
        assert_eq!(f3.gates(), &[Gate::H(0), Gate::H(0), Gate::H(0)]);
        assert!(fold_global(&c, 2).is_err());
        assert!(fold_global(&c, 0).is_err());
    }

    #[test]
    fn z_rotation_is_single_rz() {
        let t = PauliTerm::<f64>::parse(crate::scalar::c(1.0, 0.0), "Z0").unwrap();
        let c = pauli_rotation_circuit(&t, 0.4, 1).unwrap();
        assert_eq!(c.gates(), &[Gate::RZ(0, 0.4)]);
    }

    #[test]
    fn x_rotation_by_pi_is_x_up_to_phase() {
        let t = PauliTerm::<f64>::parse(crate::scalar::c(1.0, 0.0), "X0").unwrap();
        let u = pauli_rotation_circuit(&t, std::f64::consts::PI, 1)
            .unwrap()
            .to_matrix()
            .unwrap();
        let x = pauli_matrix::<f64>(&"X0".parse().unwrap(), 1);
        let tr = (x.adjoint() * &u).trace();
        assert!((tr.norm() - 2.0).abs() < 1e-12);
        assert!((normalized_overlap(&x, &u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotations_match_dense_exponential() {
        for s in ["Z0 Z1", "X0 Y2", "Y0 Y1 X2", "Y1"] {
            let t = PauliTerm::<f64>::parse(crate::scalar::c(1.0, 0.0), s).unwrap();
            let theta = 0.8123;
            let u = pauli_rotation_circuit(&t, theta, 3).unwrap().to_matrix().unwrap();
            let p = pauli_matrix::<f64>(&t.string, 3);
            let want = expm_hermitian(&p, theta / 2.0);
            assert!(max_abs_diff(&u, &want) < 1e-12, "{s}");
        }
    }

    #[test]
    fn identity_rotation_rejected() {
        let t = PauliTerm::<f64>::parse(crate::scalar::c(1.0, 0.0), "").unwrap();
        assert!(pauli_rotation_circuit(&t, 0.1, 1).is_err());
    }
}
