//! Odd-even SWAP networks on a line, and compilation of dense commuting `ZZ`
//! interactions onto them.

use serde::{Deserialize, Serialize};

use crate::circuits::gate::{mat4_mul, rzz, swap};
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Axis, QubitOperator};
use crate::scalar::Scalar;

/// Logical qubits `i < j` adjacent at `(position, position + 1)` during `layer`
/// (numbered from 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meeting {
    pub i: usize,
    pub j: usize,
    pub layer: usize,
    pub position: usize,
}

/// Brick-pattern network: layer 1 swaps positions `(0,1), (2,3), ...`, layer
/// 2 swaps `(1,2), (3,4), ...`, alternating for `n` layers. Every pair in a
/// layer swaps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapSchedule {
    pub n: usize,
    pub layers: Vec<Vec<(usize, usize)>>,
    pub meeting_log: Vec<Meeting>,
    /// Logical qubit at each position before the first layer.
    pub initial_layout: Vec<usize>,
    /// Logical qubit at each position after the last layer.
    pub final_layout: Vec<usize>,
}

pub fn swap_network(n: usize) -> Result<SwapSchedule> {
    swap_network_from((0..n).collect())
}

/// Network starting from an arbitrary placement of logical qubits.
pub fn swap_network_from(initial_layout: Vec<usize>) -> Result<SwapSchedule> {
    let n = initial_layout.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("swap network needs n >= 2, got {n}")));
    }
    let mut seen = vec![false; n];
    for &l in &initial_layout {
        if l >= n || seen[l] {
            return Err(Error::InvalidArgument("initial layout is not a permutation".into()));
        }
        seen[l] = true;
    }
    let mut layout = initial_layout.clone();
    let mut layers = Vec::with_capacity(n);
    let mut meeting_log = Vec::with_capacity(n * (n - 1) / 2);
    for layer in 0..n {
        let pairs: Vec<(usize, usize)> = (layer % 2..n - 1).step_by(2).map(|p| (p, p + 1)).collect();
        for &(p, q) in &pairs {
            let (a, b) = (layout[p], layout[q]);
            meeting_log.push(Meeting {
                i: a.min(b),
                j: a.max(b),
                layer: layer + 1,
                position: p,
            });
            layout.swap(p, q);
        }
        layers.push(pairs);
    }
    Ok(SwapSchedule {
        n,
        layers,
        meeting_log,
        initial_layout,
        final_layout: layout,
    })
}

fn zz_pair<T: Scalar>(op: &QubitOperator<T>) -> Result<Vec<Vec<T>>> {
    let n = op.num_qubits();
    let mut coeff = vec![vec![T::zero(); n]; n];
    for (p, c) in op.iter() {
        if p.is_identity() {
            continue;
        }
        let ops = p.ops();
        if ops.len() != 2 || ops.iter().any(|&(_, a)| a != Axis::Z) {
            return Err(Error::InvalidArgument(format!(
                "dense interaction compiler accepts only ZZ pair terms, got {p}"
            )));
        }
        if c.im != T::zero() {
            return Err(Error::ComplexCoefficients);
        }
        let (i, j) = (ops[0].0, ops[1].0);
        coeff[i][j] = c.re;
        coeff[j][i] = c.re;
    }
    Ok(coeff)
}

/// Result of [`compile_dense_interactions`]. Circuit qubits are line
/// positions; `schedule.final_layout` tells which logical qubit ends where.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledNetwork<T: Scalar> {
    pub circuit: Circuit<T>,
    pub schedule: SwapSchedule,
}

/// `prod_{i<j} exp(-i c_ij t Z_i Z_j)` on a line: at each meeting the pair's
/// `RZZ(2 c_ij t)` is fused with the SWAP into one `U2q` block on adjacent
/// positions. Pairs without a term get a bare SWAP block. The identity term
/// only adds a global phase and is dropped.
pub fn compile_dense_interactions<T: Scalar>(op: &QubitOperator<T>, t: T) -> Result<CompiledNetwork<T>> {
    compile_with_layout(op, t, (0..op.num_qubits()).collect())
}

/// [`compile_dense_interactions`] starting from `initial_layout`
/// (logical qubit at each position).
pub fn compile_with_layout<T: Scalar>(
    op: &QubitOperator<T>,
    t: T,
    initial_layout: Vec<usize>,
) -> Result<CompiledNetwork<T>> {
    let coeff = zz_pair(op)?;
    let schedule = swap_network_from(initial_layout)?;
    let mut circuit = Circuit::new(schedule.n);
    let two = T::lit(2.0);
    for m in &schedule.meeting_log {
        let block = mat4_mul(&swap(), &rzz(two * coeff[m.i][m.j] * t));
        circuit.push(Gate::U2q(m.position, m.position + 1, block))?;
    }
    Ok(CompiledNetwork { circuit, schedule })
}
