use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sample_stats, EstimateReport, PartEstimate};
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::{Axis, QubitOperator};
use crate::scalar::Scalar;
use crate::sv::{cumulative, draw, StateVec};

const AXES: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

fn basis_circuit<T: Scalar>(bases: &[u8]) -> Result<Circuit<T>> {
    let mut c = Circuit::new(bases.len());
    for (q, &b) in bases.iter().enumerate() {
        match AXES[b as usize] {
            Axis::X => c.push(Gate::H(q))?,
            Axis::Y => {
                c.push(Gate::Sdg(q))?;
                c.push(Gate::H(q))?;
            }
            Axis::Z => {}
        }
    }
    Ok(c)
}

/// Classical-shadow estimate of `<op>` from single-qubit random Pauli bases.
///
/// Each sample draws an independent uniform basis per qubit, rotates, and
/// records one outcome. A term `P` scores `3^|P| * prod (+-1)` when the drawn
/// basis matches `P` on its whole support and `0` otherwise; this is unbiased
/// because the match probability is `3^-|P|`. The report carries one entry
/// per term.
pub fn shadow_estimate<T: Scalar>(
    state: &StateVec<T>,
    op: &QubitOperator<T>,
    samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    op.require_hermitian()?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let n = state.num_qubits();
    if op.num_qubits() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: op.num_qubits(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<u8>> = (0..samples)
        .map(|_| (0..n).map(|_| rng.random_range(0..3u8)).collect())
        .collect();
    // Group samples by basis so each rotated distribution is built once.
    let mut by_basis: BTreeMap<&[u8], usize> = BTreeMap::new();
    for d in &draws {
        *by_basis.entry(d.as_slice()).or_insert(0) += 1;
    }
    let mut records: Vec<(&[u8], usize)> = Vec::with_capacity(samples);
    for (&bases, &count) in &by_basis {
        let mut rotated = state.clone();
        rotated.apply_circuit(&basis_circuit(bases)?)?;
        let cdf = cumulative(&rotated.probabilities());
        for _ in 0..count {
            records.push((bases, draw(&cdf, &mut rng)));
        }
    }

    let terms: Vec<(String, Vec<(usize, u8)>, f64)> = op
        .iter()
        .map(|(p, c)| {
            let support = p
                .ops()
                .iter()
                .map(|&(q, a)| (q, AXES.iter().position(|&x| x == a).unwrap() as u8))
                .collect();
            (p.to_string(), support, c.re.as_f64())
        })
        .collect();
    let score = |support: &[(usize, u8)], bases: &[u8], outcome: usize| -> f64 {
        let mut v = 1.0;
        for &(q, a) in support {
            if bases[q] != a {
                return 0.0;
            }
            v *= if (outcome >> q) & 1 == 1 { -3.0 } else { 3.0 };
        }
        v
    };

    let mut per_group = Vec::with_capacity(terms.len());
    for (label, support, _) in &terms {
        let vals = records.iter().map(|&(b, o)| (score(support, b, o), 1u64));
        let (mean, stderr, shots) = sample_stats(vals);
        per_group.push(PartEstimate {
            label: if label.is_empty() { "I".into() } else { label.clone() },
            mean,
            stderr,
            shots,
        });
    }
    // The identity coefficient is known exactly and is added after averaging.
    let offset = op.identity_coeff().re.as_f64();
    let totals = records.iter().map(|&(b, o)| {
        let v: f64 = terms
            .iter()
            .filter(|(_, s, _)| !s.is_empty())
            .map(|(_, s, c)| c * score(s, b, o))
            .sum();
        (v, 1u64)
    });
    let (mean, stderr, total_shots) = sample_stats(totals);
    let mean = mean + offset;
    let stderr = if op.iter().all(|(p, _)| p.is_identity()) {
        0.0
    } else {
        stderr
    };
    Ok(EstimateReport {
        mean,
        stderr,
        per_group,
        total_shots,
        seed,
    })
}
