use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

pub type Mat2<T> = [[C<T>; 2]; 2];
pub type Mat4<T> = [[C<T>; 4]; 4];

/// A one- or two-qubit gate.
///
/// Two-qubit matrices act on the local basis index `b(t0) + 2 * b(t1)`, where
/// `t0`/`t1` are the first and second listed targets. For `CX` the first
/// target is the control.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate<T: Scalar> {
    X(usize),
    SX(usize),
    RZ(usize, T),
    H(usize),
    S(usize),
    Sdg(usize),
    CX(usize, usize),
    RZZ(usize, usize, T),
    U1q(usize, Mat2<T>),
    U2q(usize, usize, Mat4<T>),
}

/// Matrix of a gate together with its targets.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix<T: Scalar> {
    One(usize, Mat2<T>),
    Two(usize, usize, Mat4<T>),
}

fn cz<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

fn cr<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

pub fn identity2<T: Scalar>() -> Mat2<T> {
    [[cr(T::one()), cz()], [cz(), cr(T::one())]]
}

pub fn identity4<T: Scalar>() -> Mat4<T> {
    let mut m = [[cz(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = cr(T::one());
    }
    m
}

pub fn pauli_x<T: Scalar>() -> Mat2<T> {
    [[cz(), cr(T::one())], [cr(T::one()), cz()]]
}

pub fn pauli_y<T: Scalar>() -> Mat2<T> {
    [
        [cz(), Complex::new(T::zero(), -T::one())],
        [Complex::new(T::zero(), T::one()), cz()],
    ]
}

pub fn pauli_z<T: Scalar>() -> Mat2<T> {
    [[cr(T::one()), cz()], [cz(), cr(-T::one())]]
}

pub fn hadamard<T: Scalar>() -> Mat2<T> {
    let h = cr(T::FRAC_1_SQRT_2());
    [[h, h], [h, -h]]
}

pub fn rz<T: Scalar>(theta: T) -> Mat2<T> {
    let half = theta * T::lit(0.5);
    [
        [Complex::from_polar(T::one(), -half), cz()],
        [cz(), Complex::from_polar(T::one(), half)],
    ]
}

pub fn sx<T: Scalar>() -> Mat2<T> {
    let h = T::lit(0.5);
    let a = Complex::new(h, h);
    let b = Complex::new(h, -h);
    [[a, b], [b, a]]
}

pub fn s_gate<T: Scalar>() -> Mat2<T> {
    [[cr(T::one()), cz()], [cz(), Complex::new(T::zero(), T::one())]]
}

pub fn sdg_gate<T: Scalar>() -> Mat2<T> {
    [[cr(T::one()), cz()], [cz(), Complex::new(T::zero(), -T::one())]]
}

/// Controlled-X with control on local bit 0, target on local bit 1.
pub fn cx<T: Scalar>() -> Mat4<T> {
    let mut m = [[cz(); 4]; 4];
    m[0][0] = cr(T::one());
    m[2][2] = cr(T::one());
    m[1][3] = cr(T::one());
    m[3][1] = cr(T::one());
    m
}

/// `exp(-i theta/2 Z (x) Z)`.
pub fn rzz<T: Scalar>(theta: T) -> Mat4<T> {
    let half = theta * T::lit(0.5);
    let mut m = [[cz(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        let parity = (i & 1) ^ (i >> 1);
        row[i] = Complex::from_polar(T::one(), if parity == 0 { -half } else { half });
    }
    m
}

pub fn swap<T: Scalar>() -> Mat4<T> {
    let mut m = [[cz(); 4]; 4];
    m[0][0] = cr(T::one());
    m[1][2] = cr(T::one());
    m[2][1] = cr(T::one());
    m[3][3] = cr(T::one());
    m
}

pub fn mat2_mul<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let mut m = [[cz(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn mat4_mul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut m = [[cz(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).fold(cz(), |x, y| x + y);
        }
    }
    m
}

pub fn mat2_adjoint<T: Scalar>(a: &Mat2<T>) -> Mat2<T> {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat4_adjoint<T: Scalar>(a: &Mat4<T>) -> Mat4<T> {
    let mut m = [[cz(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[j][i].conj();
        }
    }
    m
}

/// Conjugate a 4x4 local matrix by the swap of its two local bits.
pub fn mat4_swap_targets<T: Scalar>(a: &Mat4<T>) -> Mat4<T> {
    const P: [usize; 4] = [0, 2, 1, 3];
    let mut m = [[cz(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[P[i]][P[j]];
        }
    }
    m
}

/// Max deviation `max |U^dagger U - I|` over entries.
pub fn unitarity_error<const N: usize, T: Scalar>(u: &[[C<T>; N]; N]) -> T {
    let mut worst = T::zero();
    for i in 0..N {
        for j in 0..N {
            let mut acc = cz::<T>();
            for row in u.iter() {
                acc = acc + row[i].conj() * row[j];
            }
            if i == j {
                acc = acc - cr(T::one());
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

impl<T: Scalar> Gate<T> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::SX(_) => "SX",
            Gate::RZ(..) => "RZ",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "Sdg",
            Gate::CX(..) => "CX",
            Gate::RZZ(..) => "RZZ",
            Gate::U1q(..) => "U1q",
            Gate::U2q(..) => "U2q",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::SX(q) | Gate::RZ(q, _) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => {
                vec![q]
            }
            Gate::U1q(q, _) => vec![q],
            Gate::CX(a, b) | Gate::RZZ(a, b, _) | Gate::U2q(a, b, _) => vec![a, b],
        }
    }

    pub fn arity(&self) -> usize {
        self.targets().len()
    }

    pub fn matrix(&self) -> GateMatrix<T> {
        match *self {
            Gate::X(q) => GateMatrix::One(q, pauli_x()),
            Gate::SX(q) => GateMatrix::One(q, sx()),
            Gate::RZ(q, th) => GateMatrix::One(q, rz(th)),
            Gate::H(q) => GateMatrix::One(q, hadamard()),
            Gate::S(q) => GateMatrix::One(q, s_gate()),
            Gate::Sdg(q) => GateMatrix::One(q, sdg_gate()),
            Gate::U1q(q, m) => GateMatrix::One(q, m),
            Gate::CX(a, b) => GateMatrix::Two(a, b, cx()),
            Gate::RZZ(a, b, th) => GateMatrix::Two(a, b, rzz(th)),
            Gate::U2q(a, b, m) => GateMatrix::Two(a, b, m),
        }
    }

    pub fn inverse(&self) -> Gate<T> {
        match *self {
            Gate::X(q) => Gate::X(q),
            Gate::SX(q) => Gate::U1q(q, mat2_adjoint(&sx())),
            Gate::RZ(q, th) => Gate::RZ(q, -th),
            Gate::H(q) => Gate::H(q),
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::CX(a, b) => Gate::CX(a, b),
            Gate::RZZ(a, b, th) => Gate::RZZ(a, b, -th),
            Gate::U1q(q, m) => Gate::U1q(q, mat2_adjoint(&m)),
            Gate::U2q(a, b, m) => Gate::U2q(a, b, mat4_adjoint(&m)),
        }
    }

    /// Checks target range, distinctness, and unitarity of explicit matrices.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let ts = self.targets();
        for &t in &ts {
            if t >= num_qubits {
                return Err(Error::QubitOutOfRange { index: t, num_qubits });
            }
        }
        if ts.len() == 2 && ts[0] == ts[1] {
            return Err(Error::DuplicateTarget(ts[0]));
        }
        let err = match self {
            Gate::U1q(_, m) => unitarity_error(m),
            Gate::U2q(_, _, m) => unitarity_error(m),
            Gate::RZ(_, th) | Gate::RZZ(_, _, th) if !th.is_finite() => {
                return Err(Error::InvalidArgument("non-finite angle".into()))
            }
            _ => T::zero(),
        };
        if !(err <= T::unitary_tol()) {
            return Err(Error::NotUnitary(err.as_f64()));
        }
        Ok(())
    }
}
