mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use common::*;
use nalgebra::DMatrix;
use qcsc_core::circuits::gate::{cx, swap};
use qcsc_core::circuits::{fold_global, pauli_rotation_circuit, Circuit, Gate};
use qcsc_core::dm::{run_noisy, Channel, DensityMatrix, NoiseModel};
use qcsc_core::linalg::trace_distance;
use qcsc_core::pauli::{PauliTerm, QubitOperator};
use qcsc_core::scalar::c as cx_;
use qcsc_core::sv::{run, StateVec};
use rand::Rng;

fn ghz(n: usize) -> Circuit<f64> {
    let mut c = Circuit::new(n);
    c.push(Gate::H(0)).unwrap();
    for q in 0..n - 1 {
        c.push(Gate::CX(q, q + 1)).unwrap();
    }
    c
}

#[test]
fn to_matrix_examples() {
    assert_eq!(Circuit::<f64>::new(2).to_matrix().unwrap(), eye(4));
    let x = Circuit::from_gates(1, vec![Gate::X(0)]).unwrap().to_matrix().unwrap();
    assert!(max_diff(&x, &px()) < 1e-15);
    let bell = Circuit::<f64>::from_gates(2, vec![Gate::H(0), Gate::CX(0, 1)]).unwrap();
    let u = bell.to_matrix().unwrap();
    assert!((u[(0, 0)].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((u[(3, 0)].re - FRAC_1_SQRT_2).abs() < 1e-15);
    let s = run(&bell, None).unwrap();
    for i in 0..4 {
        assert!((s.amplitudes()[i] - u[(i, 0)]).norm() < 1e-15);
    }
}

#[test]
fn to_matrix_matches_kronecker_oracle() {
    let mut r = rng(21);
    for _ in 0..40 {
        let n = r.random_range(1..=5);
        let c = random_circuit(n, 25, &mut r);
        let got = c.to_matrix().unwrap();
        assert!(max_diff(&got, &circuit_dense(&c)) < 1e-12);
        let unit = got.adjoint() * &got;
        assert!(max_diff(&unit, &eye(1 << n)) < 1e-9);
    }
    assert!(Circuit::<f64>::new(11).to_matrix().is_err());
}

#[test]
fn folding() {
    let mut r = rng(22);
    let c = random_circuit(3, 12, &mut r);
    assert_eq!(fold_global(&c, 1).unwrap(), c);
    let h = Circuit::<f64>::from_gates(1, vec![Gate::H(0)]).unwrap();
    assert_eq!(
        fold_global(&h, 3).unwrap().gates(),
        &[Gate::H(0), Gate::H(0), Gate::H(0)]
    );
    assert!(fold_global(&c, 2).is_err());
    for f in [3, 5, 7] {
        let folded = fold_global(&c, f).unwrap();
        assert_eq!(folded.len(), f * c.len());
        assert!(max_diff(&folded.to_matrix().unwrap(), &c.to_matrix().unwrap()) < 1e-9);
    }
}

#[test]
fn pauli_rotations_match_dense_exponentials() {
    let z = pauli_rotation_circuit(&PauliTerm::real(1.0, "Z0".parse().unwrap()), 0.4, 1).unwrap();
    assert_eq!(z.gates(), &[Gate::RZ(0, 0.4)]);
    let xpi = pauli_rotation_circuit(&PauliTerm::real(1.0, "X0".parse().unwrap()), PI, 1).unwrap();
    let u = xpi.to_matrix().unwrap();
    let tr: num_complex::Complex64 = (u.adjoint() * px()).trace();
    assert!((tr.norm() - 2.0).abs() < 1e-12);
    let mut r = rng(23);
    for _ in 0..30 {
        let n = r.random_range(1..=4);
        let mut s = random_string(n, &mut r);
        while s.is_identity() {
            s = random_string(n, &mut r);
        }
        let theta = r.random_range(-3.0..3.0);
        let term = PauliTerm::real(1.0, s.clone());
        let got = pauli_rotation_circuit(&term, theta, n).unwrap().to_matrix().unwrap();
        let want = expm_minus_i(&pauli_dense(&s, n), theta / 2.0);
        assert!(max_diff_up_to_phase(&got, &want) < 1e-9, "{s}");
        // theta = 0 is the identity, and angles add.
        let zero = pauli_rotation_circuit(&term, 0.0, n).unwrap().to_matrix().unwrap();
        assert!(max_diff_up_to_phase(&zero, &eye(1 << n)) < 1e-12);
        let t2 = r.random_range(-3.0..3.0);
        let mut both = pauli_rotation_circuit(&term, theta, n).unwrap();
        both.extend(&pauli_rotation_circuit(&term, t2, n).unwrap()).unwrap();
        let sum = pauli_rotation_circuit(&term, theta + t2, n).unwrap();
        assert!(max_diff_up_to_phase(&both.to_matrix().unwrap(), &sum.to_matrix().unwrap()) < 1e-9);
    }
    assert!(pauli_rotation_circuit(&PauliTerm::<f64>::real(1.0, "".parse().unwrap()), 1.0, 1).is_err());
}

#[test]
fn circuit_json_round_trip_is_bit_exact() {
    let mut r = rng(24);
    for _ in 0..20 {
        let c = random_circuit(4, 30, &mut r);
        assert_eq!(Circuit::<f64>::from_json(&c.to_json()).unwrap(), c);
    }
    let c = Circuit::<f64>::from_json(
        r#"{"num_qubits": 2, "gates": [{"kind":"RZ","targets":[0],"theta":0.5}, {"kind":"CX","targets":[0,1]}]}"#,
    )
    .unwrap();
    assert_eq!(c.gates(), &[Gate::RZ(0, 0.5), Gate::CX(0, 1)]);
}

#[test]
fn apply_1q_examples() {
    for q in 0..4 {
        let mut s = StateVec::<f64>::new(4).unwrap();
        s.apply_1q(&qcsc_core::circuits::gate::pauli_x(), q).unwrap();
        assert_eq!(s.amplitudes()[1 << q], cx_(1.0, 0.0));
    }
    let mut s = StateVec::<f64>::new(1).unwrap();
    s.apply_1q(&qcsc_core::circuits::gate::hadamard(), 0).unwrap();
    assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    let bad = [[cx_(1.0, 0.0), cx_(1.0, 0.0)], [cx_(0.0, 0.0), cx_(1.0, 0.0)]];
    assert!(s.apply_1q(&bad, 0).is_err());
    assert!(s.apply_1q(&qcsc_core::circuits::gate::hadamard(), 1).is_err());
}

#[test]
fn kernels_match_dense_oracle() {
    let mut r = rng(25);
    for _ in 0..20 {
        let amps = random_amps(5, &mut r);
        let u = random_mat2(&mut r);
        let q = r.random_range(0..5);
        let mut s = StateVec::from_amplitudes(amps.clone()).unwrap();
        s.apply_1q(&u, q).unwrap();
        let want = dense_apply(&lift1(&from_mat2(&u), q, 5), &amps);
        assert!(amp_diff(s.amplitudes(), &want) < 1e-12);
    }
    for _ in 0..20 {
        let amps = random_amps(6, &mut r);
        let u = random_mat4(&mut r);
        let p = r.random_range(0..6);
        let mut q = r.random_range(0..6);
        while q == p {
            q = r.random_range(0..6);
        }
        let mut s = StateVec::from_amplitudes(amps.clone()).unwrap();
        s.apply_2q(&u, p, q).unwrap();
        let want = dense_apply(&lift2(&from_mat4(&u), p, q, 6), &amps);
        assert!(amp_diff(s.amplitudes(), &want) < 1e-10);
    }
}

#[test]
fn apply_2q_examples() {
    let mut s = StateVec::<f64>::basis(2, 1).unwrap();
    s.apply_2q(&cx(), 0, 1).unwrap();
    assert_eq!(s.amplitudes()[3], cx_(1.0, 0.0));
    let mut s = StateVec::<f64>::basis(2, 2).unwrap();
    s.apply_2q(&swap(), 0, 1).unwrap();
    assert_eq!(s.amplitudes()[1], cx_(1.0, 0.0));
    assert!(s.apply_2q(&swap(), 1, 1).is_err());
    assert!(s.apply_2q(&swap(), 0, 2).is_err());
}

#[test]
fn swap_is_relabeling() {
    let mut r = rng(26);
    let amps = random_amps(5, &mut r);
    let mut s = StateVec::from_amplitudes(amps.clone()).unwrap();
    s.apply_2q(&swap(), 3, 1).unwrap();
    for i in 0..32usize {
        let b1 = (i >> 1) & 1;
        let b3 = (i >> 3) & 1;
        let j = (i & !0b1010) | (b1 << 3) | (b3 << 1);
        assert_eq!(s.amplitudes()[j], amps[i]);
    }
}

#[test]
fn run_examples() {
    let s = run(&ghz(4), None).unwrap();
    assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((s.amplitudes()[15].re - FRAC_1_SQRT_2).abs() < 1e-15);
    let mut r = rng(27);
    let init = random_state(3, &mut r);
    assert_eq!(run(&Circuit::new(3), Some(init.clone())).unwrap(), init);
    for _ in 0..50 {
        let n = r.random_range(1..=6);
        let c = random_circuit(n, r.random_range(0..=30), &mut r);
        let init = random_state(n, &mut r);
        let got = run(&c, Some(init.clone())).unwrap();
        let want = dense_apply(&circuit_dense(&c), init.amplitudes());
        assert!(amp_diff(got.amplitudes(), &want) < 1e-10);
    }
}

#[test]
fn norm_survives_long_runs() {
    let mut r = rng(28);
    let c = random_circuit(6, 10_000, &mut r);
    let s = run(&c, None).unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
}

#[test]
fn expectation_examples() {
    let z = QubitOperator::<f64>::from_real_strs(1, &[(1.0, "Z0")]).unwrap();
    assert_eq!(StateVec::new(1).unwrap().expectation(&z).unwrap(), 1.0);
    let plus = run(&Circuit::<f64>::from_gates(1, vec![Gate::H(0)]).unwrap(), None).unwrap();
    assert!(plus.expectation(&z).unwrap().abs() < 1e-15);
    let mut r = rng(29);
    for _ in 0..10 {
        let s = random_state(4, &mut r);
        let op = random_op(4, 8, &mut r);
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        let want = (v.adjoint() * op_dense(&op) * &v)[(0, 0)];
        assert!((s.expectation(&op).unwrap() - want.re).abs() < 1e-12);
    }
    assert!(StateVec::<f64>::new(2).unwrap().expectation(&z).is_err());
}

#[test]
fn sampling() {
    let zero = StateVec::<f64>::new(2).unwrap().sample(500, 1).unwrap();
    assert_eq!(zero.get(&0), Some(&500));
    assert_eq!(zero.len(), 1);
    let plus = run(&Circuit::<f64>::from_gates(1, vec![Gate::H(0)]).unwrap(), None).unwrap();
    let shots = 100_000u64;
    let h = plus.sample(shots, 42).unwrap();
    let frac = *h.get(&0).unwrap_or(&0) as f64 / shots as f64;
    let sigma = (0.25 / shots as f64).sqrt();
    assert!((frac - 0.5).abs() < 5.0 * sigma);
    assert_eq!(plus.sample(shots, 42).unwrap(), h);
    let g = run(&ghz(3), None).unwrap().sample(10_000, 3).unwrap();
    assert!(g.keys().all(|&k| k == 0 || k == 7));
    assert!(plus.sample(0, 1).is_err());
}

#[test]
fn chi_square_sanity() {
    let mut r = rng(30);
    let s = random_state(3, &mut r);
    let shots = 100_000u64;
    let h = s.sample(shots, 5).unwrap();
    let probs = s.probabilities();
    let chi2: f64 = (0..8)
        .map(|i| {
            let e = probs[i] * shots as f64;
            let o = *h.get(&i).unwrap_or(&0) as f64;
            (o - e).powi(2) / e
        })
        .sum();
    // 7 degrees of freedom; 24.3 is the 0.999 quantile.
    assert!(chi2 < 24.3, "{chi2}");
}

fn pure_dense(s: &StateVec<f64>) -> M {
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    &v * v.adjoint()
}

#[test]
fn density_gate_examples() {
    let mut rho = DensityMatrix::<f64>::new(1).unwrap();
    rho.apply_gate(&Gate::X(0)).unwrap();
    assert_eq!(rho.get(1, 1), cx_(1.0, 0.0));
    let mut rho = DensityMatrix::<f64>::new(1).unwrap();
    rho.apply_gate(&Gate::H(0)).unwrap();
    for e in rho.entries() {
        assert!((e.re - 0.5).abs() < 1e-15 && e.im.abs() < 1e-15);
    }
    assert!(rho.apply_gate(&Gate::H(1)).is_err());
}

#[test]
fn noiseless_density_equals_pure_state() {
    let mut r = rng(31);
    for _ in 0..30 {
        let n = r.random_range(1..=5);
        let c = random_circuit(n, 30, &mut r);
        let rho = run_noisy(&c, &NoiseModel::noiseless(), None).unwrap();
        let psi = run(&c, None).unwrap();
        assert!(trace_distance(&rho.to_dense(), &pure_dense(&psi)) < 1e-10);
    }
}

#[test]
fn channel_examples() {
    let mut mixed = DensityMatrix::<f64>::new(1).unwrap();
    mixed
        .apply_channel(&Channel::depolarizing_1q(1.0).unwrap(), &[0])
        .unwrap();
    assert!((mixed.get(0, 0).re - 0.5).abs() < 1e-15);
    assert!((mixed.get(1, 1).re - 0.5).abs() < 1e-15);
    assert!(mixed.get(0, 1).norm() < 1e-15);
    let mut same = DensityMatrix::<f64>::new(1).unwrap();
    same.apply_gate(&Gate::H(0)).unwrap();
    let before = same.clone();
    same.apply_channel(&Channel::depolarizing_1q(0.0).unwrap(), &[0])
        .unwrap();
    assert_eq!(same, before);
    let gamma = 0.3f64;
    let mut one = DensityMatrix::from_pure(&StateVec::basis(1, 1).unwrap()).unwrap();
    one.apply_channel(&Channel::amplitude_damping(gamma).unwrap(), &[0])
        .unwrap();
    assert!((one.get(0, 0).re - gamma).abs() < 1e-15);
    assert!((one.get(1, 1).re - (1.0 - gamma)).abs() < 1e-15);
    assert!(Channel::<f64>::depolarizing_1q(1.5).is_err());
}

#[test]
fn channels_match_kraus_sum_oracle() {
    let mut r = rng(32);
    let chans = [
        Channel::depolarizing_1q(0.2).unwrap(),
        Channel::amplitude_damping(0.4).unwrap(),
        Channel::bit_flip(0.1).unwrap(),
        Channel::phase_flip(0.3).unwrap(),
    ];
    for ch in &chans {
        let psi = random_state(3, &mut r);
        let mut rho = DensityMatrix::from_pure(&psi).unwrap();
        let q = r.random_range(0..3);
        rho.apply_channel(ch, &[q]).unwrap();
        let dense = pure_dense(&psi);
        let mut want = DMatrix::from_element(8, 8, c(0., 0.));
        for k in ch.kraus() {
            let km = match k {
                qcsc_core::dm::Kraus::One(m) => lift1(&from_mat2(m), q, 3),
                qcsc_core::dm::Kraus::Two(m) => lift2(&from_mat4(m), q, (q + 1) % 3, 3),
            };
            want += &km * &dense * km.adjoint();
        }
        assert!(max_diff(&rho.to_dense(), &want) < 1e-12);
    }
    let two = Channel::depolarizing_2q(0.15).unwrap();
    assert_eq!(two.kraus().len(), 16);
    let psi = random_state(3, &mut r);
    let mut rho = DensityMatrix::from_pure(&psi).unwrap();
    rho.apply_channel(&two, &[2, 0]).unwrap();
    let dense = pure_dense(&psi);
    let mut want = DMatrix::from_element(8, 8, c(0., 0.));
    for k in two.kraus() {
        if let qcsc_core::dm::Kraus::Two(m) = k {
            let km = lift2(&from_mat4(m), 2, 0, 3);
            want += &km * &dense * km.adjoint();
        }
    }
    assert!(max_diff(&rho.to_dense(), &want) < 1e-12);
}

#[test]
fn channel_is_linear_on_mixtures() {
    let mut r = rng(33);
    let ch = Channel::amplitude_damping(0.25).unwrap();
    let a = DensityMatrix::from_pure(&random_state(2, &mut r)).unwrap();
    let b = DensityMatrix::from_pure(&random_state(2, &mut r)).unwrap();
    let w = 0.3;
    let mut mix = DensityMatrix::mixture(&[(w, &a), (1.0 - w, &b)]).unwrap();
    mix.apply_channel(&ch, &[1]).unwrap();
    let (mut a2, mut b2) = (a.clone(), b.clone());
    a2.apply_channel(&ch, &[1]).unwrap();
    b2.apply_channel(&ch, &[1]).unwrap();
    let want = DensityMatrix::mixture(&[(w, &a2), (1.0 - w, &b2)]).unwrap();
    assert!(max_diff(&mix.to_dense(), &want.to_dense()) < 1e-14);
}

#[test]
fn noisy_stress_keeps_state_physical() {
    let mut r = rng(34);
    let nm = NoiseModel::<f64>::from_json(
        r#"{"gates": {"CX": {"channel":"depolarizing","p":0.01}, "default": {"channel":"amplitude_damping","gamma":0.002}}}"#,
    )
    .unwrap();
    let c = random_circuit(4, 1000, &mut r);
    let rho = run_noisy(&c, &nm, None).unwrap();
    assert!((rho.trace().re - 1.0).abs() < 1e-9);
    assert!(rho.hermiticity_error() < 1e-9);
    let ev = eigvals(&rho.to_dense());
    assert!(ev[0] > -1e-8);
}

#[test]
fn full_depolarizing_mixes_touched_qubits() {
    let nm = NoiseModel::<f64>::uniform_depolarizing(1.0).unwrap();
    let c = Circuit::from_gates(2, vec![Gate::X(1)]).unwrap();
    let rho = run_noisy(&c, &nm, None).unwrap();
    // Qubit 1 fully mixed, qubit 0 untouched in |0>.
    let p = rho.probabilities();
    assert!((p[0] + p[2] - 1.0).abs() < 1e-12);
    assert!(p[1].abs() < 1e-15 && p[3].abs() < 1e-15);
    assert!((p[2] - 0.5).abs() < 1e-12);
}

#[test]
fn folding_under_noise_moves_toward_zero() {
    let nm = NoiseModel::<f64>::uniform_depolarizing(0.01).unwrap();
    let zz = QubitOperator::<f64>::from_real_strs(3, &[(1.0, "Z0 Z2")]).unwrap();
    let c = ghz(3);
    let e1 = run_noisy(&c, &nm, None).unwrap().expectation(&zz).unwrap();
    let e3 = run_noisy(&fold_global(&c, 3).unwrap(), &nm, None)
        .unwrap()
        .expectation(&zz)
        .unwrap();
    assert!(e3.abs() < e1.abs());
    assert!(e1 < 1.0);
}

#[test]
fn density_expectation() {
    let z = QubitOperator::<f64>::from_real_strs(1, &[(1.0, "Z0")]).unwrap();
    let mixed = DensityMatrix::<f64>::maximally_mixed(1).unwrap();
    assert!(mixed.expectation(&z).unwrap().abs() < 1e-15);
    let mut r = rng(35);
    let psi = random_state(3, &mut r);
    let op = random_op(3, 6, &mut r);
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    assert!((rho.expectation(&op).unwrap() - psi.expectation(&op).unwrap()).abs() < 1e-12);
    let parts: Vec<DensityMatrix<f64>> = (0..4)
        .map(|_| DensityMatrix::from_pure(&random_state(3, &mut r)).unwrap())
        .collect();
    let ws = [0.1, 0.2, 0.3, 0.4];
    let mix = DensityMatrix::mixture(&ws.iter().copied().zip(parts.iter()).collect::<Vec<_>>()).unwrap();
    let want = (op_dense(&op) * mix.to_dense()).trace().re;
    assert!((mix.expectation(&op).unwrap() - want).abs() < 1e-12);
}
