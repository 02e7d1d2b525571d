use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{times_i_pow, Scalar, C};

/// Non-identity single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    /// Product `self * other` as `(i^k, axis)`; `None` axis means identity.
    fn product(self, other: Axis) -> (u8, Option<Axis>) {
        use Axis::*;
        match (self, other) {
            (a, b) if a == b => (0, None),
            (X, Y) => (1, Some(Z)),
            (Y, Z) => (1, Some(X)),
            (Z, X) => (1, Some(Y)),
            (Y, X) => (3, Some(Z)),
            (Z, Y) => (3, Some(X)),
            (X, Z) => (3, Some(Y)),
            _ => unreachable!(),
        }
    }
}

/// Sparse tensor product of Pauli axes, sorted by qubit index.
///
/// Identity factors are implicit; the empty string is the identity operator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PauliString(Vec<(usize, Axis)>);

impl PauliString {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Builds a string from `(qubit, axis)` pairs. Repeated qubits are rejected.
    pub fn new(mut ops: Vec<(usize, Axis)>) -> Result<Self> {
        ops.sort_by_key(|&(q, _)| q);
        if let Some(w) = ops.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!(
                "qubit {} appears twice in Pauli string",
                w[0].0
            )));
        }
        Ok(Self(ops))
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        Self(vec![(qubit, axis)])
    }

    pub fn ops(&self) -> &[(usize, Axis)] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn axis_at(&self, qubit: usize) -> Option<Axis> {
        self.0
            .binary_search_by_key(&qubit, |&(q, _)| q)
            .ok()
            .map(|i| self.0[i].1)
    }

    /// Smallest qubit count able to hold this string.
    pub fn min_qubits(&self) -> usize {
        self.0.last().map_or(0, |&(q, _)| q + 1)
    }

    /// Bit masks `(x, z, y_count)` with X and Y setting the x-bit and Y and Z
    /// setting the z-bit. Requires every index below 64.
    pub fn masks(&self) -> (u64, u64, u8) {
        let (mut x, mut z, mut ny) = (0u64, 0u64, 0u8);
        for &(q, a) in &self.0 {
            assert!(q < 64, "bitmask path supports at most 64 qubits");
            match a {
                Axis::X => x |= 1 << q,
                Axis::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny = ny.wrapping_add(1);
                }
                Axis::Z => z |= 1 << q,
            }
        }
        (x, z, ny % 4)
    }

    /// Returns `(i^k, self * other)`.
    pub fn product(&self, other: &PauliString) -> (u8, PauliString) {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut phase = 0u8;
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let (k, ax) = a[i].1.product(b[j].1);
                phase = (phase + k) % 4;
                if let Some(ax) = ax {
                    out.push((a[i].0, ax));
                }
                i += 1;
                j += 1;
            }
        }
        (phase, PauliString(out))
    }

    /// Number of shared qubits where both strings act with different axes.
    fn clash_count(&self, other: &PauliString) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i].1 != b[j].1 {
                        n += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        self.clash_count(other) % 2 == 0
    }

    pub fn qubitwise_commutes(&self, other: &PauliString) -> bool {
        self.clash_count(other) == 0
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (q, a)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", a.letter(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `"X0 Z3"`; the empty string is the identity. `I<k>` tokens are accepted
    /// and dropped.
    fn from_str(s: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let letter = chars.next().unwrap();
            let idx: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad Pauli token {tok:?}")))?;
            let axis = match letter.to_ascii_uppercase() {
                'X' => Axis::X,
                'Y' => Axis::Y,
                'Z' => Axis::Z,
                'I' => continue,
                _ => return Err(Error::Parse(format!("bad Pauli axis in {tok:?}"))),
            };
            ops.push((idx, axis));
        }
        PauliString::new(ops)
    }
}

/// Weighted Pauli string `coeff * P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm<T: Scalar> {
    pub coeff: C<T>,
    pub string: PauliString,
}

impl<T: Scalar> PauliTerm<T> {
    pub fn new(coeff: C<T>, string: PauliString) -> Self {
        Self { coeff, string }
    }

    pub fn real(coeff: T, string: PauliString) -> Self {
        Self::new(Complex::new(coeff, T::zero()), string)
    }

    pub fn parse(coeff: C<T>, s: &str) -> Result<Self> {
        Ok(Self::new(coeff, s.parse()?))
    }

    pub fn multiply(&self, other: &PauliTerm<T>) -> PauliTerm<T> {
        let (k, string) = self.string.product(&other.string);
        PauliTerm {
            coeff: times_i_pow(self.coeff * other.coeff, k),
            string,
        }
    }

    pub fn commutes(&self, other: &PauliTerm<T>) -> bool {
        self.string.commutes(&other.string)
    }

    pub fn qubitwise_commutes(&self, other: &PauliTerm<T>) -> bool {
        self.string.qubitwise_commutes(&other.string)
    }
}

pub fn multiply<T: Scalar>(a: &PauliTerm<T>, b: &PauliTerm<T>) -> PauliTerm<T> {
    a.multiply(b)
}

pub fn commutes<T: Scalar>(a: &PauliTerm<T>, b: &PauliTerm<T>) -> bool {
    a.commutes(b)
}

pub fn qubitwise_commutes<T: Scalar>(a: &PauliTerm<T>, b: &PauliTerm<T>) -> bool {
    a.qubitwise_commutes(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn t(s: &str) -> PauliTerm<f64> {
        PauliTerm::parse(c(1.0, 0.0), s).unwrap()
    }

    #[test]
    fn x_times_y_is_i_z() {
        let p = t("X0").multiply(&t("Y0"));
        assert_eq!(p.string.to_string(), "Z0");
        assert_eq!(p.coeff, c(0.0, 1.0));
    }

    #[test]
    fn x_squared_is_identity() {
        let p = t("X0").multiply(&t("X0"));
        assert!(p.string.is_identity());
        assert_eq!(p.coeff, c(1.0, 0.0));
    }

    #[test]
    fn disjoint_supports() {
        let p = t("Z0").multiply(&t("X1"));
        assert_eq!(p.string.to_string(), "Z0 X1");
        assert_eq!(p.coeff, c(1.0, 0.0));
        assert!(t("Z0").commutes(&t("X1")));
    }

    #[test]
    fn commutation_examples() {
        assert!(!t("X0").commutes(&t("Z0")));
        assert!(t("X0 X1").commutes(&t("Z0 Z1")));
        assert!(!t("X0 X1").qubitwise_commutes(&t("Z0 Z1")));
        assert!(t("X0").commutes(&t("X0 X1")));
        assert!(t("X0").qubitwise_commutes(&t("X0 X1")));
    }

    #[test]
    fn parse_roundtrip_and_errors() {
        let s: PauliString = "Z3 X0 I2".parse().unwrap();
        assert_eq!(s.to_string(), "X0 Z3");
        assert!("".parse::<PauliString>().unwrap().is_identity());
        assert!("Q1".parse::<PauliString>().is_err());
        assert!("X".parse::<PauliString>().is_err());
        assert!("X1 Z1".parse::<PauliString>().is_err());
    }

    #[test]
    fn masks_count_y() {
        let s: PauliString = "X0 Y1 Z2".parse().unwrap();
        assert_eq!(s.masks(), (0b011, 0b110, 1));
    }
}
