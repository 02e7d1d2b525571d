use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::circuits::gate::{identity2, pauli_x, pauli_y, pauli_z, Mat2, Mat4};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// One Kraus operator of a one- or two-qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub enum Kraus<T: Scalar> {
    One(Mat2<T>),
    Two(Mat4<T>),
}

/// Trace-preserving channel `rho -> sum_k K_k rho K_k^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T: Scalar> {
    arity: usize,
    kraus: Vec<Kraus<T>>,
}

const TP_TOL: f64 = 1e-9;

fn kron2<T: Scalar>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    // local index = bit0 (first target) + 2 * bit1 (second target); `a` acts on bit0.
    let mut m = [[Complex::new(T::zero(), T::zero()); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] = a[r & 1][c & 1] * b[r >> 1][c >> 1];
        }
    }
    m
}

fn scale2<T: Scalar>(m: Mat2<T>, s: T) -> Mat2<T> {
    m.map(|row| row.map(|z| z * s))
}

fn scale4<T: Scalar>(m: Mat4<T>, s: T) -> Mat4<T> {
    m.map(|row| row.map(|z| z * s))
}

fn check_prob<T: Scalar>(name: &str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidArgument(format!(
            "{name} parameter {} outside [0, 1]",
            p.as_f64()
        )));
    }
    Ok(())
}

impl<T: Scalar> Channel<T> {
    /// Builds a channel after checking `sum K^dagger K = I` within `1e-9`.
    pub fn new(kraus: Vec<Kraus<T>>) -> Result<Self> {
        let arity = match kraus.first() {
            Some(Kraus::One(_)) => 1,
            Some(Kraus::Two(_)) => 2,
            None => return Err(Error::InvalidArgument("channel has no Kraus operators".into())),
        };
        let dim = 1usize << arity;
        let mut acc = vec![vec![Complex::new(T::zero(), T::zero()); dim]; dim];
        for k in &kraus {
            let get = |r: usize, c: usize| -> Result<C<T>> {
                match (k, arity) {
                    (Kraus::One(m), 1) => Ok(m[r][c]),
                    (Kraus::Two(m), 2) => Ok(m[r][c]),
                    _ => Err(Error::InvalidArgument("mixed Kraus arities".into())),
                }
            };
            for i in 0..dim {
                for j in 0..dim {
                    for r in 0..dim {
                        acc[i][j] += get(r, i)?.conj() * get(r, j)?;
                    }
                }
            }
        }
        let mut dev = T::zero();
        for (i, row) in acc.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                dev = dev.max((v - Complex::new(target, T::zero())).norm());
            }
        }
        if !(dev <= T::lit(TP_TOL).max(T::unitary_tol())) {
            return Err(Error::NotTracePreserving(dev.as_f64()));
        }
        Ok(Self { arity, kraus })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus(&self) -> &[Kraus<T>] {
        &self.kraus
    }

    /// One-qubit depolarizing: `(1 - 3p/4) rho + (p/4)(X rho X + Y rho Y + Z rho Z)`.
    pub fn depolarizing_1q(p: T) -> Result<Self> {
        check_prob("depolarizing", p)?;
        let q = p * T::lit(0.25);
        Self::new(vec![
            Kraus::One(scale2(identity2(), (T::one() - T::lit(3.0) * q).sqrt())),
            Kraus::One(scale2(pauli_x(), q.sqrt())),
            Kraus::One(scale2(pauli_y(), q.sqrt())),
            Kraus::One(scale2(pauli_z(), q.sqrt())),
        ])
    }

    /// Two-qubit depolarizing, uniform over the 15 non-identity Paulis:
    /// `(1 - 15p/16) rho + (p/16) sum_{P != II} P rho P`.
    pub fn depolarizing_2q(p: T) -> Result<Self> {
        check_prob("depolarizing", p)?;
        let paulis = [identity2(), pauli_x(), pauli_y(), pauli_z()];
        let q = p / T::lit(16.0);
        let mut kraus = Vec::with_capacity(16);
        for (i, a) in paulis.iter().enumerate() {
            for (j, b) in paulis.iter().enumerate() {
                let w = if i == 0 && j == 0 {
                    T::one() - T::lit(15.0) * q
                } else {
                    q
                };
                kraus.push(Kraus::Two(scale4(kron2(a, b), w.sqrt())));
            }
        }
        Self::new(kraus)
    }

    pub fn amplitude_damping(gamma: T) -> Result<Self> {
        check_prob("amplitude damping", gamma)?;
        let z = Complex::new(T::zero(), T::zero());
        let r = |x: T| Complex::new(x, T::zero());
        Self::new(vec![
            Kraus::One([[r(T::one()), z], [z, r((T::one() - gamma).sqrt())]]),
            Kraus::One([[z, r(gamma.sqrt())], [z, z]]),
        ])
    }

    pub fn bit_flip(p: T) -> Result<Self> {
        check_prob("bit flip", p)?;
        Self::new(vec![
            Kraus::One(scale2(identity2(), (T::one() - p).sqrt())),
            Kraus::One(scale2(pauli_x(), p.sqrt())),
        ])
    }

    pub fn phase_flip(p: T) -> Result<Self> {
        check_prob("phase flip", p)?;
        Self::new(vec![
            Kraus::One(scale2(identity2(), (T::one() - p).sqrt())),
            Kraus::One(scale2(pauli_z(), p.sqrt())),
        ])
    }
}

/// Built-in channel description as it appears in noise-model files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", rename_all = "snake_case")]
pub enum ChannelSpec {
    /// Depolarizing on the gate's full arity (15-Pauli form for two-qubit gates).
    Depolarizing {
        p: f64,
    },
    AmplitudeDamping {
        gamma: f64,
    },
    BitFlip {
        p: f64,
    },
    PhaseFlip {
        p: f64,
    },
}

impl ChannelSpec {
    /// Channel to attach to a gate of the given arity. Single-qubit channels on
    /// two-qubit gates are applied to each target separately.
    pub fn build<T: Scalar>(&self, gate_arity: usize) -> Result<Channel<T>> {
        match *self {
            ChannelSpec::Depolarizing { p } if gate_arity == 2 => Channel::depolarizing_2q(T::lit(p)),
            ChannelSpec::Depolarizing { p } => Channel::depolarizing_1q(T::lit(p)),
            ChannelSpec::AmplitudeDamping { gamma } => Channel::amplitude_damping(T::lit(gamma)),
            ChannelSpec::BitFlip { p } => Channel::bit_flip(T::lit(p)),
            ChannelSpec::PhaseFlip { p } => Channel::phase_flip(T::lit(p)),
        }
    }
}

/// Per-gate-kind noise: after each gate of a listed kind, the kind's channel
/// acts on the gate's targets. The `"default"` key covers unlisted kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel<T: Scalar> {
    specs: BTreeMap<String, ChannelSpec>,
    channels: BTreeMap<(String, usize), Channel<T>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NoiseWire {
    #[serde(default)]
    gates: BTreeMap<String, ChannelSpec>,
}

impl<T: Scalar> Default for NoiseModel<T> {
    fn default() -> Self {
        Self::noiseless()
    }
}

impl<T: Scalar> NoiseModel<T> {
    pub fn noiseless() -> Self {
        Self {
            specs: BTreeMap::new(),
            channels: BTreeMap::new(),
        }
    }

    /// Builds every channel eagerly so invalid parameters fail here.
    pub fn from_specs(specs: BTreeMap<String, ChannelSpec>) -> Result<Self> {
        let mut channels = BTreeMap::new();
        for (kind, spec) in &specs {
            for arity in [1, 2] {
                channels.insert((kind.clone(), arity), spec.build(arity)?);
            }
        }
        Ok(Self { specs, channels })
    }

    /// Depolarizing noise of strength `p` after every gate.
    pub fn uniform_depolarizing(p: f64) -> Result<Self> {
        Self::from_specs(BTreeMap::from([(
            "default".to_string(),
            ChannelSpec::Depolarizing { p },
        )]))
    }

    /// Attach an explicit channel to a gate kind; arity must match the gate or be 1.
    pub fn with_channel(mut self, kind: &str, gate_arity: usize, ch: Channel<T>) -> Self {
        self.channels.insert((kind.to_string(), gate_arity), ch);
        self
    }

    pub fn is_noiseless(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channel_for(&self, kind: &str, gate_arity: usize) -> Option<&Channel<T>> {
        self.channels
            .get(&(kind.to_string(), gate_arity))
            .or_else(|| self.channels.get(&("default".to_string(), gate_arity)))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: NoiseWire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_specs(wire.gates)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&NoiseWire {
            gates: self.specs.clone(),
        })
        .unwrap()
    }
}
