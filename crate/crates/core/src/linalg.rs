//! Dense linear-algebra helpers used for exact diagonalization and as
//! brute-force references. Everything here is `O(4^n)` memory or worse.

use nalgebra::{DMatrix, RealField};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, QubitOperator};
use crate::scalar::{times_i_pow, Scalar, C};

/// Scalars usable with the dense eigensolvers.
pub trait LinalgScalar: Scalar + RealField {}
impl<T: Scalar + RealField> LinalgScalar for T {}

/// Qubit limit for dense diagonalization.
pub const DENSE_DIAG_LIMIT: usize = 12;

/// Action of a Pauli string on basis state `j`: `P|j> = phase * |target>`.
#[inline]
pub fn pauli_action<T: Scalar>(x: u64, z: u64, ny: u8, j: u64) -> (u64, C<T>) {
    let sign = if (j & z).count_ones() % 2 == 1 {
        -T::one()
    } else {
        T::one()
    };
    (j ^ x, times_i_pow(Complex::new(sign, T::zero()), ny))
}

/// Dense `2^n x 2^n` matrix of a Pauli sum.
pub fn operator_matrix<T: Scalar>(op: &QubitOperator<T>) -> DMatrix<C<T>> {
    let n = op.num_qubits();
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for (p, &cf) in op.iter() {
        let (x, z, ny) = p.masks();
        for j in 0..dim as u64 {
            let (i, ph) = pauli_action::<T>(x, z, ny, j);
            m[(i as usize, j as usize)] += cf * ph;
        }
    }
    m
}

/// Dense matrix of a single Pauli string on `n` qubits.
pub fn pauli_matrix<T: Scalar>(p: &PauliString, n: usize) -> DMatrix<C<T>> {
    let dim = 1usize << n;
    let (x, z, ny) = p.masks();
    let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for j in 0..dim as u64 {
        let (i, ph) = pauli_action::<T>(x, z, ny, j);
        m[(i as usize, j as usize)] = ph;
    }
    m
}

pub(crate) fn check_dense(op_qubits: usize) -> Result<()> {
    if op_qubits > DENSE_DIAG_LIMIT {
        return Err(Error::TooLarge {
            what: "qubits for dense diagonalization",
            size: op_qubits,
            limit: DENSE_DIAG_LIMIT,
        });
    }
    Ok(())
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: LinalgScalar>(m: DMatrix<C<T>>) -> Vec<T> {
    let mut ev: Vec<T> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Eigen-decomposition `(values, vectors)` of a Hermitian matrix, columns of
/// `vectors` being eigenvectors; unsorted.
pub fn hermitian_eigen<T: LinalgScalar>(m: DMatrix<C<T>>) -> (Vec<T>, DMatrix<C<T>>) {
    let eig = m.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `exp(-i t H)` for Hermitian `H` by spectral decomposition.
pub fn expm_hermitian<T: LinalgScalar>(h: &DMatrix<C<T>>, t: T) -> DMatrix<C<T>> {
    let (vals, vecs) = hermitian_eigen(h.clone());
    let dim = vals.len();
    let mut scaled = vecs.clone();
    for (k, &lam) in vals.iter().enumerate() {
        let ph = Complex::from_polar(T::one(), -(lam * t));
        for r in 0..dim {
            scaled[(r, k)] *= ph;
        }
    }
    &scaled * vecs.adjoint()
}

/// Largest singular value.
pub fn spectral_norm<T: LinalgScalar>(m: &DMatrix<C<T>>) -> T {
    // sigma_max^2 is the largest eigenvalue of the Hermitian m^dagger m.
    let gram = m.adjoint() * m;
    let ev = hermitian_eigenvalues(gram);
    let top = ev.last().copied().unwrap_or_else(T::zero);
    num_traits::Float::sqrt(num_traits::Float::max(top, T::zero()))
}

/// `min_phi ||u - e^{i phi} v||_2`, with phi aligned by the trace overlap.
pub fn phase_aligned_distance<T: LinalgScalar>(u: &DMatrix<C<T>>, v: &DMatrix<C<T>>) -> T {
    let overlap = (v.adjoint() * u).trace();
    let phase = if overlap.norm() > T::zero() {
        overlap / Complex::new(overlap.norm(), T::zero())
    } else {
        Complex::new(T::one(), T::zero())
    };
    spectral_norm(&(u - v * phase))
}

/// `|tr(u^dagger v)| / dim`; equals 1 iff equal up to global phase (for unitaries).
pub fn normalized_overlap<T: Scalar>(u: &DMatrix<C<T>>, v: &DMatrix<C<T>>) -> T {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (a, b) in u.iter().zip(v.iter()) {
        acc += a.conj() * b;
    }
    acc.norm() / T::from_usize(u.nrows()).unwrap()
}

/// Trace distance `(1/2) sum |eig(a - b)|` of Hermitian matrices.
pub fn trace_distance<T: LinalgScalar>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> T {
    let d = a - b;
    let ev = hermitian_eigenvalues(d);
    let s: T = ev.into_iter().map(num_traits::Float::abs).sum();
    s * T::lit(0.5)
}

/// Maximum elementwise modulus of `a - b`.
pub fn max_abs_diff<T: Scalar>(a: &DMatrix<C<T>>, b: &DMatrix<C<T>>) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (*x - *y).norm())
        .fold(T::zero(), num_traits::Float::max)
}
