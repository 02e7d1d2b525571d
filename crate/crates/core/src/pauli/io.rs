//! JSON operator files: `{"num_qubits": n, "terms": [{"pauli": "X0 Z3", "coeff": [re, im]}]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{PauliTerm, QubitOperator};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Serialize, Deserialize)]
struct TermWire {
    pauli: String,
    coeff: [f64; 2],
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorWire {
    num_qubits: usize,
    terms: Vec<TermWire>,
}

impl<T: Scalar> QubitOperator<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let wire = OperatorWire {
            num_qubits: self.num_qubits(),
            terms: self
                .iter()
                .map(|(p, c)| TermWire {
                    pauli: p.to_string(),
                    coeff: [c.re.as_f64(), c.im.as_f64()],
                })
                .collect(),
        };
        serde_json::to_value(wire).expect("operator serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).unwrap()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: OperatorWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut op = Self::new(wire.num_qubits);
        for t in wire.terms {
            let coeff = Complex::new(T::lit(t.coeff[0]), T::lit(t.coeff[1]));
            op.add_term(PauliTerm::new(coeff, t.pauli.parse()?))?;
        }
        Ok(op)
    }
}
