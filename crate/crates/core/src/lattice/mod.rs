//! Lattice geometries and model Hamiltonians: Fermi-Hubbard, the three-band
//! copper-oxide model, and extended Kitaev-Heisenberg spin models.

mod fermion;
mod geometry;
mod models;

pub use fermion::{jordan_wigner, jordan_wigner_sum, FermionTerm};
pub use geometry::{Bond, LatticeKind, LatticeSpec};
pub use models::{
    emery_hamiltonian, emery_pd_bonds, emery_pp_bonds, emery_site, exact_spectrum, heisenberg_hamiltonian,
    hubbard_hamiltonian, kitaev_heisenberg, sector_spectrum, EmeryParams, KitaevParams, MAX_MODEL_QUBITS,
    MAX_SECTOR_DIM,
};
