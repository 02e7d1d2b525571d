use nalgebra::DMatrix;
use num_complex::Complex;

use super::fermion::{jordan_wigner_sum, spin_orbital, FermionTerm};
use super::geometry::{LatticeKind, LatticeSpec};
use crate::error::{Error, Result};
use crate::linalg::{check_dense, hermitian_eigenvalues, operator_matrix, pauli_action, LinalgScalar};
use crate::pauli::{Axis, PauliString, PauliTerm, QubitOperator};
use crate::scalar::Scalar;

/// Qubit budget for model builders.
pub const MAX_MODEL_QUBITS: usize = 24;

/// Largest particle-number sector accepted by [`sector_spectrum`].
pub const MAX_SECTOR_DIM: usize = 4096;

fn check_budget(qubits: usize) -> Result<()> {
    if qubits > MAX_MODEL_QUBITS {
        return Err(Error::TooLarge {
            what: "model qubits",
            size: qubits,
            limit: MAX_MODEL_QUBITS,
        });
    }
    Ok(())
}

fn hop_pair<T: Scalar>(terms: &mut Vec<FermionTerm<T>>, i: usize, j: usize, amp: T) {
    terms.push(FermionTerm::hopping(i, j, amp));
    terms.push(FermionTerm::hopping(j, i, amp));
}

/// Fermi-Hubbard model on any lattice, `-t sum_<ij>,s (a+_is a_js + h.c.) + U sum_i n_iu n_id`.
pub fn hubbard_hamiltonian<T: Scalar>(lat: &LatticeSpec, t: T, u: T) -> Result<QubitOperator<T>> {
    let sites = lat.num_sites()?;
    let modes = 2 * sites;
    check_budget(modes)?;
    let mut terms = Vec::new();
    for b in lat.bonds()? {
        for s in 0..2 {
            hop_pair(&mut terms, spin_orbital(b.i, s), spin_orbital(b.j, s), -t);
        }
    }
    for i in 0..sites {
        terms.push(FermionTerm::density_density(spin_orbital(i, 0), spin_orbital(i, 1), u));
    }
    jordan_wigner_sum(&terms, modes)
}

/// Couplings of the three-band copper-oxide model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmeryParams<T> {
    pub t_pd: T,
    pub t_pp: T,
    pub delta_pd: T,
    pub u_d: T,
    pub u_p: T,
    pub v_pd: T,
}

/// Site index of orbital `orb` (0 = d, 1 = px, 2 = py) in cell `cell`.
pub fn emery_site(cell: usize, orb: usize) -> usize {
    3 * cell + orb
}

/// Copper-oxygen bonds of an open chain of `cells`: `d_i-px_i`, `d_i-py_i`, `d_{i+1}-px_i`.
pub fn emery_pd_bonds(cells: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cells {
        out.push((emery_site(i, 0), emery_site(i, 1)));
        out.push((emery_site(i, 0), emery_site(i, 2)));
        if i + 1 < cells {
            out.push((emery_site(i + 1, 0), emery_site(i, 1)));
        }
    }
    out
}

/// Oxygen-oxygen bonds: `px_i-py_i` and `px_{i-1}-py_i`.
pub fn emery_pp_bonds(cells: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cells {
        out.push((emery_site(i, 1), emery_site(i, 2)));
        if i > 0 {
            out.push((emery_site(i - 1, 1), emery_site(i, 2)));
        }
    }
    out
}

/// Three-band model in the hole picture on a 1-D chain of cells, each with
/// one d and two p orbitals:
///
/// `t_pd sum_pd,s (d+ p + h.c.) + t_pp sum_pp,s (p+ p' + h.c.) - delta_pd sum_i,s n^d
///  + U_d sum n^d_u n^d_d + U_p sum n^p_u n^p_d + V_pd sum_pd,s,s' n^d_s n^p_s'`.
///
/// Signs are used as given, without any orbital-phase gauge.
pub fn emery_hamiltonian<T: Scalar>(cells: usize, p: EmeryParams<T>) -> Result<QubitOperator<T>> {
    if cells == 0 {
        return Err(Error::InvalidArgument("emery chain needs at least one cell".into()));
    }
    let modes = 6 * cells;
    check_budget(modes)?;
    let mut terms = Vec::new();
    let pd = emery_pd_bonds(cells);
    for &(d, o) in &pd {
        for s in 0..2 {
            hop_pair(&mut terms, spin_orbital(d, s), spin_orbital(o, s), p.t_pd);
        }
    }
    for (a, b) in emery_pp_bonds(cells) {
        for s in 0..2 {
            hop_pair(&mut terms, spin_orbital(a, s), spin_orbital(b, s), p.t_pp);
        }
    }
    for i in 0..cells {
        let d = emery_site(i, 0);
        for s in 0..2 {
            terms.push(FermionTerm::number(spin_orbital(d, s), -p.delta_pd));
        }
        terms.push(FermionTerm::density_density(
            spin_orbital(d, 0),
            spin_orbital(d, 1),
            p.u_d,
        ));
        for orb in 1..3 {
            let o = emery_site(i, orb);
            terms.push(FermionTerm::density_density(
                spin_orbital(o, 0),
                spin_orbital(o, 1),
                p.u_p,
            ));
        }
    }
    for &(d, o) in &pd {
        for s in 0..2 {
            for s2 in 0..2 {
                terms.push(FermionTerm::density_density(
                    spin_orbital(d, s),
                    spin_orbital(o, s2),
                    p.v_pd,
                ));
            }
        }
    }
    jordan_wigner_sum(&terms, modes)
}

/// Couplings of the extended Kitaev-Heisenberg model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KitaevParams<T> {
    pub j: T,
    pub k: T,
    pub gamma: T,
    pub gamma_prime: T,
}

impl KitaevParams<f64> {
    /// Literature couplings for alpha-RuCl3, in meV.
    pub const RUCL3: Self = Self {
        j: -1.53,
        k: -24.4,
        gamma: 5.25,
        gamma_prime: -0.95,
    };
}

/// `(alpha, beta)` completing the bond label `gamma` cyclically.
fn cross_axes(gamma: Axis) -> (Axis, Axis) {
    match gamma {
        Axis::Z => (Axis::X, Axis::Y),
        Axis::Y => (Axis::Z, Axis::X),
        Axis::X => (Axis::Y, Axis::Z),
    }
}

fn add_spin_pair<T: Scalar>(op: &mut QubitOperator<T>, i: usize, a: Axis, j: usize, b: Axis, coeff: T) -> Result<()> {
    // S = sigma / 2 on both sites.
    let s = PauliString::new(vec![(i, a), (j, b)])?;
    op.add_term(PauliTerm::real(coeff * T::lit(0.25), s))
}

/// `sum_<ij>_gamma [J S_i.S_j + K S_i^g S_j^g + Gamma (S_i^a S_j^b + S_i^b S_j^a)
///  + Gamma' (S_i^g S_j^a + S_i^g S_j^b + S_i^a S_j^g + S_i^b S_j^g)]` on a honeycomb lattice.
pub fn kitaev_heisenberg<T: Scalar>(lat: &LatticeSpec, p: KitaevParams<T>) -> Result<QubitOperator<T>> {
    if lat.kind != LatticeKind::Honeycomb {
        return Err(Error::InvalidArgument(format!(
            "kitaev_heisenberg needs a honeycomb lattice, got {:?}",
            lat.kind
        )));
    }
    let n = lat.num_sites()?;
    check_budget(n)?;
    let mut op = QubitOperator::new(n);
    for b in lat.bonds()? {
        let g = b.label.expect("honeycomb bonds are labelled");
        let (a, be) = cross_axes(g);
        let (i, j) = (b.i, b.j);
        for ax in [Axis::X, Axis::Y, Axis::Z] {
            add_spin_pair(&mut op, i, ax, j, ax, p.j)?;
        }
        add_spin_pair(&mut op, i, g, j, g, p.k)?;
        add_spin_pair(&mut op, i, a, j, be, p.gamma)?;
        add_spin_pair(&mut op, i, be, j, a, p.gamma)?;
        add_spin_pair(&mut op, i, g, j, a, p.gamma_prime)?;
        add_spin_pair(&mut op, i, g, j, be, p.gamma_prime)?;
        add_spin_pair(&mut op, i, a, j, g, p.gamma_prime)?;
        add_spin_pair(&mut op, i, be, j, g, p.gamma_prime)?;
    }
    Ok(op)
}

/// Spin-1/2 Heisenberg model `J sum_<ij> S_i.S_j` on any lattice.
pub fn heisenberg_hamiltonian<T: Scalar>(lat: &LatticeSpec, j: T) -> Result<QubitOperator<T>> {
    let n = lat.num_sites()?;
    check_budget(n)?;
    let mut op = QubitOperator::new(n);
    for b in lat.bonds()? {
        for ax in [Axis::X, Axis::Y, Axis::Z] {
            add_spin_pair(&mut op, b.i, ax, b.j, ax, j)?;
        }
    }
    Ok(op)
}

/// The `k` smallest eigenvalues, ascending, by dense diagonalization.
pub fn exact_spectrum<T: LinalgScalar>(op: &QubitOperator<T>, k: usize) -> Result<Vec<T>> {
    op.require_hermitian()?;
    check_dense(op.num_qubits())?;
    let mut ev = hermitian_eigenvalues(operator_matrix(op));
    if k > ev.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenvalues of a {}-dimensional operator",
            ev.len()
        )));
    }
    ev.truncate(k);
    Ok(ev)
}

/// The `k` smallest eigenvalues restricted to computational basis states with
/// exactly `particles` ones, i.e. a fixed Jordan-Wigner particle number.
///
/// Only meaningful for number-conserving operators; terms leaving the sector
/// are ignored.
pub fn sector_spectrum<T: LinalgScalar>(op: &QubitOperator<T>, particles: usize, k: usize) -> Result<Vec<T>> {
    op.require_hermitian()?;
    let n = op.num_qubits();
    check_budget(n)?;
    if particles > n {
        return Err(Error::InvalidArgument(format!(
            "{particles} particles do not fit in {n} modes"
        )));
    }
    let basis: Vec<u64> = (0..1u64 << n)
        .filter(|b| b.count_ones() as usize == particles)
        .collect();
    if basis.len() > MAX_SECTOR_DIM {
        return Err(Error::TooLarge {
            what: "sector dimension",
            size: basis.len(),
            limit: MAX_SECTOR_DIM,
        });
    }
    let dim = basis.len();
    let mut m = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    for (p, &cf) in op.iter() {
        let (x, z, ny) = p.masks();
        for (col, &j) in basis.iter().enumerate() {
            let (i, ph) = pauli_action::<T>(x, z, ny, j);
            if let Ok(row) = basis.binary_search(&i) {
                m[(row, col)] += cf * ph;
            }
        }
    }
    let mut ev = hermitian_eigenvalues(m);
    if k > ev.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenvalues of a {dim}-dimensional sector"
        )));
    }
    ev.truncate(k);
    Ok(ev)
}
