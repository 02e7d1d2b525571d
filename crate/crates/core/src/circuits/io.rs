//! Circuit JSON: `{"num_qubits": n, "gates": [{"kind": "RZ", "targets": [0], "theta": 0.5}]}`.
//! Explicit matrices are row-major arrays of `[re, im]` pairs.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gate::{Mat2, Mat4};
use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Serialize, Deserialize)]
struct GateWire {
    kind: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircuitWire {
    num_qubits: usize,
    gates: Vec<GateWire>,
}

fn flatten<T: Scalar, const N: usize>(m: &[[Complex<T>; N]; N]) -> Vec<[f64; 2]> {
    m.iter()
        .flat_map(|row| row.iter().map(|z| [z.re.as_f64(), z.im.as_f64()]))
        .collect()
}

fn unflatten<T: Scalar, const N: usize>(v: &[[f64; 2]]) -> Result<[[Complex<T>; N]; N]> {
    if v.len() != N * N {
        return Err(Error::Parse(format!("matrix needs {} entries, got {}", N * N, v.len())));
    }
    let mut m = [[Complex::new(T::zero(), T::zero()); N]; N];
    for (k, e) in v.iter().enumerate() {
        m[k / N][k % N] = Complex::new(T::lit(e[0]), T::lit(e[1]));
    }
    Ok(m)
}

impl<T: Scalar> Gate<T> {
    fn to_wire(&self) -> GateWire {
        let (theta, matrix) = match self {
            Gate::RZ(_, th) | Gate::RZZ(_, _, th) => (Some(th.as_f64()), None),
            Gate::U1q(_, m) => (None, Some(flatten(m))),
            Gate::U2q(_, _, m) => (None, Some(flatten(m))),
            _ => (None, None),
        };
        GateWire {
            kind: self.kind_name().to_string(),
            targets: self.targets(),
            theta,
            matrix,
        }
    }

    fn from_wire(w: &GateWire) -> Result<Self> {
        let arity = match w.kind.as_str() {
            "X" | "SX" | "RZ" | "H" | "S" | "Sdg" | "U1q" => 1,
            "CX" | "RZZ" | "U2q" => 2,
            other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
        };
        if w.targets.len() != arity {
            return Err(Error::Parse(format!(
                "{} takes {arity} target(s), got {}",
                w.kind,
                w.targets.len()
            )));
        }
        let theta = || {
            w.theta
                .map(T::lit)
                .ok_or_else(|| Error::Parse(format!("{} requires theta", w.kind)))
        };
        let matrix = || {
            w.matrix
                .as_deref()
                .ok_or_else(|| Error::Parse(format!("{} requires matrix", w.kind)))
        };
        let t = &w.targets;
        Ok(match w.kind.as_str() {
            "X" => Gate::X(t[0]),
            "SX" => Gate::SX(t[0]),
            "RZ" => Gate::RZ(t[0], theta()?),
            "H" => Gate::H(t[0]),
            "S" => Gate::S(t[0]),
            "Sdg" => Gate::Sdg(t[0]),
            "U1q" => Gate::U1q(t[0], unflatten::<T, 2>(matrix()?)? as Mat2<T>),
            "CX" => Gate::CX(t[0], t[1]),
            "RZZ" => Gate::RZZ(t[0], t[1], theta()?),
            "U2q" => Gate::U2q(t[0], t[1], unflatten::<T, 4>(matrix()?)? as Mat4<T>),
            _ => unreachable!(),
        })
    }
}

impl<T: Scalar> Circuit<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = CircuitWire {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().map(Gate::to_wire).collect(),
        };
        serde_json::to_value(wire).expect("circuit serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: CircuitWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let gates = wire.gates.iter().map(Gate::from_wire).collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(wire.num_qubits, gates)
    }
}
