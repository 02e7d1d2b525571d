//! Brute-force references built only from Kronecker products of small
//! matrices. Nothing here calls into the library's dense helpers.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcsc_core::circuits::{Circuit, Gate, Mat2, Mat4};
use qcsc_core::pauli::{Axis, PauliString, PauliTerm, QubitOperator};
use qcsc_core::sv::StateVec;

pub type M = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn m2(e: [[Complex64; 2]; 2]) -> M {
    DMatrix::from_fn(2, 2, |r, k| e[r][k])
}

pub fn eye(dim: usize) -> M {
    DMatrix::identity(dim, dim)
}

pub fn kron(a: &M, b: &M) -> M {
    a.kronecker(b)
}

pub fn px() -> M {
    m2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
}

pub fn py() -> M {
    m2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
}

pub fn pz() -> M {
    m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
}

pub fn h() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    m2([[c(s, 0.), c(s, 0.)], [c(s, 0.), c(-s, 0.)]])
}

pub fn rz(theta: f64) -> M {
    m2([
        [Complex64::from_polar(1.0, -theta / 2.0), c(0., 0.)],
        [c(0., 0.), Complex64::from_polar(1.0, theta / 2.0)],
    ])
}

fn elem(i: usize, j: usize) -> M {
    let mut m = DMatrix::from_element(2, 2, c(0., 0.));
    m[(i, j)] = c(1., 0.);
    m
}

/// `op` on `q`, identity elsewhere; qubit `q` is bit `2^q`, so the leftmost
/// Kronecker factor is the highest qubit.
pub fn lift1(op: &M, q: usize, n: usize) -> M {
    let id = eye2();
    let mut out = eye(1);
    for k in (0..n).rev() {
        out = kron(&out, if k == q { op } else { &id });
    }
    out
}

fn eye2() -> M {
    eye(2)
}

fn lift_pair(on_a: &M, a: usize, on_b: &M, b: usize, n: usize) -> M {
    let mut out = eye(1);
    for k in (0..n).rev() {
        let f = if k == a {
            on_a.clone()
        } else if k == b {
            on_b.clone()
        } else {
            eye2()
        };
        out = kron(&out, &f);
    }
    out
}

/// Two-qubit matrix in the local basis `b(a) + 2 b(b)`, expanded as a sum of
/// elementary outer products.
pub fn lift2(u: &M, a: usize, b: usize, n: usize) -> M {
    let dim = 1 << n;
    let mut out = DMatrix::from_element(dim, dim, c(0., 0.));
    for i in 0..4 {
        for j in 0..4 {
            if u[(i, j)] == c(0., 0.) {
                continue;
            }
            out += lift_pair(&elem(i & 1, j & 1), a, &elem(i >> 1, j >> 1), b, n) * u[(i, j)];
        }
    }
    out
}

pub fn from_mat2(m: &Mat2<f64>) -> M {
    DMatrix::from_fn(2, 2, |r, k| m[r][k])
}

pub fn from_mat4(m: &Mat4<f64>) -> M {
    DMatrix::from_fn(4, 4, |r, k| m[r][k])
}

pub fn gate_dense(g: &Gate<f64>, n: usize) -> M {
    match *g {
        Gate::X(q) => lift1(&px(), q, n),
        Gate::SX(q) => lift1(&m2([[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]), q, n),
        Gate::RZ(q, t) => lift1(&rz(t), q, n),
        Gate::H(q) => lift1(&h(), q, n),
        Gate::S(q) => lift1(&m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]]), q, n),
        Gate::Sdg(q) => lift1(&m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., -1.)]]), q, n),
        Gate::CX(a, b) => lift_pair(&elem(0, 0), a, &eye2(), b, n) + lift_pair(&elem(1, 1), a, &px(), b, n),
        Gate::RZZ(a, b, t) => {
            let zz = lift_pair(&pz(), a, &pz(), b, n);
            let dim = 1 << n;
            let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
            eye(dim) * c(co, 0.) - zz * c(0., si)
        }
        Gate::U1q(q, ref m) => lift1(&from_mat2(m), q, n),
        Gate::U2q(a, b, ref m) => lift2(&from_mat4(m), a, b, n),
    }
}

/// `G_{m-1} ... G_0`.
pub fn circuit_dense(circ: &Circuit<f64>) -> M {
    let n = circ.num_qubits();
    let mut u = eye(1 << n);
    for g in circ.gates() {
        u = gate_dense(g, n) * u;
    }
    u
}

pub fn pauli_dense(p: &PauliString, n: usize) -> M {
    let mut out = eye(1);
    for k in (0..n).rev() {
        let f = match p.axis_at(k) {
            None => eye2(),
            Some(Axis::X) => px(),
            Some(Axis::Y) => py(),
            Some(Axis::Z) => pz(),
        };
        out = kron(&out, &f);
    }
    out
}

pub fn op_dense(op: &QubitOperator<f64>) -> M {
    let dim = 1 << op.num_qubits();
    let mut out = DMatrix::from_element(dim, dim, c(0., 0.));
    for (p, cf) in op.iter() {
        out += pauli_dense(p, op.num_qubits()) * *cf;
    }
    out
}

/// `exp(-i t H)` by scaling and squaring of a Taylor series.
pub fn expm_minus_i(hm: &M, t: f64) -> M {
    let dim = hm.nrows();
    let a = hm * c(0., -t);
    let norm: f64 = a.iter().map(|z| z.norm()).sum::<f64>().max(1e-300);
    let squarings = (norm.log2().ceil().max(0.0) as u32) + 4;
    let scaled = &a / c(2f64.powi(squarings as i32), 0.);
    let mut term = eye(dim);
    let mut sum = eye(dim);
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `min_phi max_ij |a - e^{i phi} b|` with phi from the trace overlap.
pub fn max_diff_up_to_phase(a: &M, b: &M) -> f64 {
    let ov: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1., 0.) };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * ph).norm())
        .fold(0.0, f64::max)
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn gauss<R: Rng>(r: &mut R) -> f64 {
    // Box-Muller.
    let u1: f64 = r.random::<f64>().max(1e-300);
    let u2: f64 = r.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_unitary<R: Rng>(dim: usize, r: &mut R) -> M {
    let g = DMatrix::from_fn(dim, dim, |_, _| c(gauss(r), gauss(r)));
    g.qr().q()
}

pub fn random_mat2<R: Rng>(r: &mut R) -> Mat2<f64> {
    let u = random_unitary(2, r);
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

pub fn random_mat4<R: Rng>(r: &mut R) -> Mat4<f64> {
    let u = random_unitary(4, r);
    let mut m = [[c(0., 0.); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = u[(i, j)];
        }
    }
    m
}

pub fn random_amps<R: Rng>(n: usize, r: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..1 << n).map(|_| c(gauss(r), gauss(r))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_state<R: Rng>(n: usize, r: &mut R) -> StateVec<f64> {
    StateVec::from_amplitudes(random_amps(n, r)).unwrap()
}

pub fn random_gate<R: Rng>(n: usize, r: &mut R) -> Gate<f64> {
    let q = r.random_range(0..n);
    let mut p = r.random_range(0..n);
    let kinds = if n >= 2 { 10 } else { 7 };
    let k = r.random_range(0..kinds);
    if k >= 7 {
        while p == q {
            p = r.random_range(0..n);
        }
    }
    let theta = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    match k {
        0 => Gate::X(q),
        1 => Gate::SX(q),
        2 => Gate::RZ(q, theta),
        3 => Gate::H(q),
        4 => Gate::S(q),
        5 => Gate::Sdg(q),
        6 => Gate::U1q(q, random_mat2(r)),
        7 => Gate::CX(q, p),
        8 => Gate::RZZ(q, p, theta),
        _ => Gate::U2q(q, p, random_mat4(r)),
    }
}

pub fn random_circuit<R: Rng>(n: usize, depth: usize, r: &mut R) -> Circuit<f64> {
    let gates = (0..depth).map(|_| random_gate(n, r)).collect();
    Circuit::from_gates(n, gates).unwrap()
}

pub fn random_string<R: Rng>(n: usize, r: &mut R) -> PauliString {
    let mut ops = Vec::new();
    for q in 0..n {
        match r.random_range(0..4) {
            1 => ops.push((q, Axis::X)),
            2 => ops.push((q, Axis::Y)),
            3 => ops.push((q, Axis::Z)),
            _ => {}
        }
    }
    PauliString::new(ops).unwrap()
}

/// Hermitian operator with `terms` random strings and real coefficients.
pub fn random_op<R: Rng>(n: usize, terms: usize, r: &mut R) -> QubitOperator<f64> {
    let mut op = QubitOperator::new(n);
    for _ in 0..terms {
        let cf = r.random_range(-1.0..1.0);
        op.add_term(PauliTerm::real(cf, random_string(n, r))).unwrap();
    }
    op
}

pub fn dense_apply(u: &M, amps: &[Complex64]) -> Vec<Complex64> {
    let v = nalgebra::DVector::from_column_slice(amps);
    (u * v).iter().copied().collect()
}

pub fn amp_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvals(m: &M) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}
