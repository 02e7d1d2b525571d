//! State-vector simulation.

pub mod kernel;

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::gate::{unitarity_error, Mat2, Mat4};
use crate::circuits::{Circuit, GateMatrix};
use crate::error::{Error, Result};
use crate::linalg::pauli_action;
use crate::pauli::{PauliString, QubitOperator};
use crate::scalar::{Scalar, C};

/// Largest register [`StateVec::new`] will allocate.
pub const MAX_QUBITS: usize = 30;

/// Counts of sampled basis-state indices.
pub type Histogram = BTreeMap<usize, u64>;

/// Pure state `sum_i alpha_i |i>`, bit `q` of `i` being qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVec<T: Scalar> {
    num_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Scalar> StateVec<T> {
    /// `|0...0>`.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "state-vector qubits",
                size: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { num_qubits, amps })
    }

    /// Wraps amplitudes whose squared norm is 1 within `1e-9`.
    pub fn from_amplitudes(amps: Vec<C<T>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let s = Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let dev = (s.norm_sqr() - T::one()).abs();
        if !(dev <= T::lit(1e-9).max(T::unitary_tol())) {
            return Err(Error::InvalidArgument(format!(
                "state not normalized (|norm^2 - 1| = {:e})",
                dev.as_f64()
            )));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bytes held by the amplitude array: `2 * size_of::<T>() * 2^n`.
    pub fn memory_bytes(&self) -> usize {
        std::mem::size_of::<C<T>>() * self.amps.len()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    pub fn apply_1q(&mut self, u: &Mat2<T>, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let err = unitarity_error(u);
        if !(err <= T::unitary_tol()) {
            return Err(Error::NotUnitary(err.as_f64()));
        }
        kernel::apply_1q_raw(&mut self.amps, u, q);
        Ok(())
    }

    /// `U` on `(p, q)` with local basis index `b(p) + 2 b(q)`.
    pub fn apply_2q(&mut self, u: &Mat4<T>, p: usize, q: usize) -> Result<()> {
        self.check_qubit(p)?;
        self.check_qubit(q)?;
        if p == q {
            return Err(Error::DuplicateTarget(p));
        }
        let err = unitarity_error(u);
        if !(err <= T::unitary_tol()) {
            return Err(Error::NotUnitary(err.as_f64()));
        }
        kernel::apply_2q_raw(&mut self.amps, u, p, q);
        Ok(())
    }

    /// Applies every gate in order. Gates were validated when the circuit was built.
    pub fn apply_circuit(&mut self, c: &Circuit<T>) -> Result<()> {
        if c.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                got: c.num_qubits(),
            });
        }
        for g in c.gates() {
            match g.matrix() {
                GateMatrix::One(q, u) => kernel::apply_1q_raw(&mut self.amps, &u, q),
                GateMatrix::Two(p, q, u) => kernel::apply_2q_raw(&mut self.amps, &u, p, q),
            }
        }
        Ok(())
    }

    /// `<psi| P |psi>` for a single Pauli string (complex in general).
    pub fn pauli_expectation(&self, p: &PauliString) -> C<T> {
        let (x, z, ny) = p.masks();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (j, &a) in self.amps.iter().enumerate() {
            let (i, ph) = pauli_action::<T>(x, z, ny, j as u64);
            acc += self.amps[i as usize].conj() * ph * a;
        }
        acc
    }

    /// `<psi|H|psi>` term by term without building a dense matrix.
    pub fn expectation(&self, op: &QubitOperator<T>) -> Result<T> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                got: op.num_qubits(),
            });
        }
        op.require_hermitian()?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, &cf) in op.iter() {
            acc += cf * self.pauli_expectation(p);
        }
        Ok(acc.re)
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws `shots` computational-basis outcomes from a seeded ChaCha8 stream.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        let cdf = cumulative(&self.probabilities());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = Histogram::new();
        for _ in 0..shots {
            *hist.entry(draw(&cdf, &mut rng)).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

/// Running sums of `probs` in `f64`, normalized so the last entry is 1.
pub(crate) fn cumulative<T: Scalar>(probs: &[T]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p.as_f64();
            acc
        })
        .collect();
    let total = acc;
    for v in &mut cdf {
        *v /= total;
    }
    cdf
}

pub(crate) fn draw<R: Rng>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Runs `c` from `init` (default `|0...0>`).
pub fn run<T: Scalar>(c: &Circuit<T>, init: Option<StateVec<T>>) -> Result<StateVec<T>> {
    let mut s = match init {
        Some(s) => s,
        None => StateVec::new(c.num_qubits())?,
    };
    s.apply_circuit(c)?;
    Ok(s)
}
