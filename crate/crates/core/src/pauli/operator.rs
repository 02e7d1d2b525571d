use std::collections::BTreeMap;

use num_complex::Complex;

use super::string::{PauliString, PauliTerm};
use crate::error::{Error, Result};
use crate::scalar::{times_i_pow, Scalar, C};

/// Default magnitude below which merged coefficients are dropped.
pub const DEFAULT_DROP_TOL: f64 = 1e-12;

/// Sum of weighted Pauli strings over a fixed register, `H = sum_i c_i P_i`.
///
/// Terms are kept merged by string and in canonical (sorted) order, so two
/// operators with equal content compare and serialize identically.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitOperator<T: Scalar> {
    num_qubits: usize,
    terms: BTreeMap<PauliString, C<T>>,
    drop_tol: T,
}

impl<T: Scalar> QubitOperator<T> {
    pub fn new(num_qubits: usize) -> Self {
        Self::with_drop_tolerance(num_qubits, T::lit(DEFAULT_DROP_TOL))
    }

    pub fn with_drop_tolerance(num_qubits: usize, drop_tol: T) -> Self {
        Self {
            num_qubits,
            terms: BTreeMap::new(),
            drop_tol,
        }
    }

    pub fn identity(num_qubits: usize, coeff: T) -> Self {
        let mut op = Self::new(num_qubits);
        op.insert(Complex::new(coeff, T::zero()), PauliString::identity());
        op
    }

    pub fn from_terms<I>(num_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = PauliTerm<T>>,
    {
        let mut op = Self::new(num_qubits);
        for t in terms {
            op.add_term(t)?;
        }
        Ok(op)
    }

    /// Convenience constructor from `(coeff, "X0 Z1")` pairs with real coefficients.
    pub fn from_real_strs(num_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let mut op = Self::new(num_qubits);
        for &(cf, s) in terms {
            op.add_term(PauliTerm::real(T::lit(cf), s.parse()?))?;
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn drop_tolerance(&self) -> T {
        self.drop_tol
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, term: PauliTerm<T>) -> Result<()> {
        if let Some(&(q, _)) = term.string.ops().last() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits: self.num_qubits,
                });
            }
        }
        if !(term.coeff.re.is_finite() && term.coeff.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        self.insert(term.coeff, term.string);
        Ok(())
    }

    fn insert(&mut self, coeff: C<T>, string: PauliString) {
        let entry = self.terms.entry(string);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if coeff.norm() >= self.drop_tol {
                    v.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = *o.get() + coeff;
                if merged.norm() < self.drop_tol {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
    }

    pub fn coeff(&self, string: &PauliString) -> C<T> {
        self.terms
            .get(string)
            .copied()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn identity_coeff(&self) -> C<T> {
        self.coeff(&PauliString::identity())
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = PauliTerm<T>> + '_ {
        self.terms.iter().map(|(s, &c)| PauliTerm::new(c, s.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &C<T>)> {
        self.terms.iter()
    }

    /// True iff every coefficient is real within the drop tolerance.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < self.drop_tol)
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian)
        }
    }

    /// `sum_i |c_i|`, identity term included.
    pub fn l1_norm(&self) -> T {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Removes coefficients below the drop tolerance and zeroes imaginary
    /// parts that fall under it.
    pub fn canonicalize(&mut self) {
        let tol = self.drop_tol;
        self.terms.retain(|_, c| c.norm() >= tol);
        for c in self.terms.values_mut() {
            if c.im.abs() < tol {
                c.im = T::zero();
            }
        }
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = Self::with_drop_tolerance(self.num_qubits, self.drop_tol);
        for (p, &c) in &self.terms {
            out.insert(c * s, p.clone());
        }
        out
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.num_qubits = self.num_qubits.max(other.num_qubits);
        for (p, &c) in &other.terms {
            out.insert(c, p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-T::one()))
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::with_drop_tolerance(self.num_qubits.max(other.num_qubits), self.drop_tol);
        for (pa, &ca) in &self.terms {
            for (pb, &cb) in &other.terms {
                let (k, p) = pa.product(pb);
                out.insert(times_i_pow(ca * cb, k), p);
            }
        }
        out
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.conj();
        }
        out
    }

    /// Largest qubit index touched plus one.
    pub fn support_qubits(&self) -> usize {
        self.terms.keys().map(|p| p.min_qubits()).max().unwrap_or(0)
    }

    pub fn with_num_qubits(mut self, n: usize) -> Result<Self> {
        let need = self.support_qubits();
        if need > n {
            return Err(Error::QubitOutOfRange {
                index: need - 1,
                num_qubits: n,
            });
        }
        self.num_qubits = n;
        Ok(self)
    }

    /// True iff all pairs of terms commute.
    pub fn all_terms_commute(&self) -> bool {
        let keys: Vec<_> = self.terms.keys().collect();
        keys.iter()
            .enumerate()
            .all(|(i, a)| keys[i + 1..].iter().all(|b| a.commutes(b)))
    }
}
