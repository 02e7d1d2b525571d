//! Density-matrix simulation with gate conjugation and Kraus noise.
//!
//! `rho` is stored row-major, so entry `(r, c)` sits at `r * 2^n + c`. Read as
//! a `2n`-qubit vector, column bits are qubits `0..n` and row bits are qubits
//! `n..2n`: left multiplication by `U` on qubit `q` is the state-vector kernel
//! on qubit `q + n`, and right multiplication by `U^dagger` is the kernel with
//! `conj(U)` on qubit `q`.

mod channel;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use channel::{Channel, ChannelSpec, Kraus, NoiseModel};

use crate::circuits::gate::{Mat2, Mat4};
use crate::circuits::{Circuit, Gate, GateMatrix};
use crate::error::{Error, Result};
use crate::linalg::pauli_action;
use crate::pauli::QubitOperator;
use crate::scalar::{Scalar, C};
use crate::sv::kernel::{apply_1q_raw, apply_2q_raw};
use crate::sv::StateVec;

/// Register limit; `16 * 4^13` bytes is about 1.1 GB.
pub const MAX_QUBITS: usize = 13;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    num_qubits: usize,
    data: Vec<C<T>>,
}

fn conj2<T: Scalar>(u: &Mat2<T>) -> Mat2<T> {
    u.map(|row| row.map(|z| z.conj()))
}

fn conj4<T: Scalar>(u: &Mat4<T>) -> Mat4<T> {
    u.map(|row| row.map(|z| z.conj()))
}

impl<T: Scalar> DensityMatrix<T> {
    fn check_size(num_qubits: usize) -> Result<()> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooLarge {
                what: "density-matrix qubits",
                size: num_qubits,
                limit: MAX_QUBITS,
            });
        }
        Ok(())
    }

    /// `|0...0><0...0|`.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        data[0] = Complex::new(T::one(), T::zero());
        Ok(Self { num_qubits, data })
    }

    pub fn from_pure(s: &StateVec<T>) -> Result<Self> {
        Self::check_size(s.num_qubits())?;
        let a = s.amplitudes();
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(a[r] * a[c].conj());
            }
        }
        Ok(Self {
            num_qubits: s.num_qubits(),
            data,
        })
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        Self::check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let w = T::one() / T::from_usize(dim).unwrap();
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::new(w, T::zero());
        }
        Ok(Self { num_qubits, data })
    }

    /// Mixture `sum_k w_k rho_k`. Weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let mut out = Self {
            num_qubits: first.1.num_qubits,
            data: vec![Complex::new(T::zero(), T::zero()); first.1.data.len()],
        };
        let mut total = T::zero();
        for &(w, rho) in parts {
            if rho.num_qubits != out.num_qubits {
                return Err(Error::SizeMismatch {
                    expected: out.num_qubits,
                    got: rho.num_qubits,
                });
            }
            if w < T::zero() {
                return Err(Error::InvalidArgument("negative mixture weight".into()));
            }
            total = total + w;
            for (o, &v) in out.data.iter_mut().zip(&rho.data) {
                *o += v * w;
            }
        }
        if (total - T::one()).abs() > T::lit(1e-9) {
            return Err(Error::InvalidArgument("mixture weights do not sum to 1".into()));
        }
        Ok(out)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.data[r * self.dim() + c]
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    pub fn trace(&self) -> C<T> {
        let dim = self.dim();
        (0..dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.data[i * dim + i]
        })
    }

    /// `max |rho - rho^dagger|` over entries.
    pub fn hermiticity_error(&self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<C<T>> {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    fn check_targets(&self, ts: &[usize]) -> Result<()> {
        for &t in ts {
            if t >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: t,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if ts.len() == 2 && ts[0] == ts[1] {
            return Err(Error::DuplicateTarget(ts[0]));
        }
        Ok(())
    }

    fn conjugate_1q(data: &mut [C<T>], n: usize, u: &Mat2<T>, q: usize) {
        apply_1q_raw(data, u, q + n);
        apply_1q_raw(data, &conj2(u), q);
    }

    fn conjugate_2q(data: &mut [C<T>], n: usize, u: &Mat4<T>, p: usize, q: usize) {
        apply_2q_raw(data, u, p + n, q + n);
        apply_2q_raw(data, &conj4(u), p, q);
    }

    /// `rho <- G rho G^dagger` with strided left and right kernels.
    pub fn apply_gate(&mut self, g: &Gate<T>) -> Result<()> {
        g.validate(self.num_qubits)?;
        let n = self.num_qubits;
        match g.matrix() {
            GateMatrix::One(q, u) => Self::conjugate_1q(&mut self.data, n, &u, q),
            GateMatrix::Two(p, q, u) => Self::conjugate_2q(&mut self.data, n, &u, p, q),
        }
        Ok(())
    }

    /// `rho <- sum_k K_k rho K_k^dagger` on `targets` (one per channel qubit).
    pub fn apply_channel(&mut self, ch: &Channel<T>, targets: &[usize]) -> Result<()> {
        if targets.len() != ch.arity() {
            return Err(Error::InvalidArgument(format!(
                "{}-qubit channel given {} targets",
                ch.arity(),
                targets.len()
            )));
        }
        self.check_targets(targets)?;
        let n = self.num_qubits;
        let mut acc = vec![Complex::new(T::zero(), T::zero()); self.data.len()];
        for k in ch.kraus() {
            let mut term = self.data.clone();
            match k {
                Kraus::One(m) => Self::conjugate_1q(&mut term, n, m, targets[0]),
                Kraus::Two(m) => Self::conjugate_2q(&mut term, n, m, targets[0], targets[1]),
            }
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        self.data = acc;
        Ok(())
    }

    /// `Tr(rho H)` term by term: `Tr(rho P) = sum_j rho[j ^ x, j] * phase_j`.
    pub fn expectation(&self, op: &QubitOperator<T>) -> Result<T> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::SizeMismatch {
                expected: self.num_qubits,
                got: op.num_qubits(),
            });
        }
        op.require_hermitian()?;
        let dim = self.dim();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (p, &cf) in op.iter() {
            let (x, z, ny) = p.masks();
            let mut tr = Complex::new(T::zero(), T::zero());
            for j in 0..dim as u64 {
                let (i, ph) = pauli_action::<T>(x, z, ny, j);
                tr += self.data[i as usize * dim + j as usize] * ph;
            }
            acc += cf * tr;
        }
        Ok(acc.re)
    }

    pub fn probabilities(&self) -> Vec<T> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }
}

/// Applies the noise channel a model attaches to gate `g`, if any.
fn apply_noise<T: Scalar>(rho: &mut DensityMatrix<T>, g: &Gate<T>, nm: &NoiseModel<T>) -> Result<()> {
    let ts = g.targets();
    if let Some(ch) = nm.channel_for(g.kind_name(), ts.len()) {
        if ch.arity() == ts.len() {
            rho.apply_channel(ch, &ts)?;
        } else if ch.arity() == 1 {
            for &t in &ts {
                rho.apply_channel(ch, &[t])?;
            }
        } else {
            return Err(Error::InvalidArgument(format!(
                "{}-qubit channel attached to {}-qubit gate {}",
                ch.arity(),
                ts.len(),
                g.kind_name()
            )));
        }
    }
    Ok(())
}

/// Each gate is applied by conjugation, followed by its kind's channel on the
/// same targets.
pub fn run_noisy<T: Scalar>(
    c: &Circuit<T>,
    nm: &NoiseModel<T>,
    init: Option<DensityMatrix<T>>,
) -> Result<DensityMatrix<T>> {
    let mut rho = match init {
        Some(r) => r,
        None => DensityMatrix::new(c.num_qubits())?,
    };
    if rho.num_qubits() != c.num_qubits() {
        return Err(Error::SizeMismatch {
            expected: rho.num_qubits(),
            got: c.num_qubits(),
        });
    }
    for g in c.gates() {
        rho.apply_gate(g)?;
        apply_noise(&mut rho, g, nm)?;
    }
    Ok(rho)
}
