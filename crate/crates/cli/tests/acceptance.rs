//! End-to-end acceptance checks. Run with
//! `cargo test -p qcsc-cli --test acceptance`; prints one line per criterion
//! and exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qcsc_core::circuits::{fold_global, Circuit, Gate, Mat2, Mat4};
use qcsc_core::dm::{run_noisy, NoiseModel};
use qcsc_core::lattice::{hubbard_hamiltonian, kitaev_heisenberg, sector_spectrum, KitaevParams, LatticeSpec};
use qcsc_core::linalg::trace_distance;
use qcsc_core::measure::{
    allocate_shots, estimate_expectation, group_qubitwise_commuting, shadow_estimate, zne_extrapolate, ShotStrategy,
    ZneModel,
};
use qcsc_core::pauli::{
    group_anticommuting, grouped_l1, spectral_halfwidth, Axis, PauliString, PauliTerm, QubitOperator,
};
use qcsc_core::sv::{run, StateVec};
use qcsc_core::swapnet::{compile_dense_interactions, swap_network};
use qcsc_core::trotter::empirical_error;
use qcsc_sched::check::{check_all, check_colocation, check_non_preemption};
use qcsc_sched::model::DEFAULT_SCHEDULING_PERIOD;
use qcsc_sched::{
    gen_fairshare_scenario, gen_vqe_workload, parse_events, simulate, Device, Location, Scenario, ShareTree, VqeSizes,
};

type M = DMatrix<Complex64>;
type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gauss<R: Rng>(r: &mut R) -> f64 {
    let u1: f64 = r.random::<f64>().max(1e-300);
    let u2: f64 = r.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn random_unitary<R: Rng>(dim: usize, r: &mut R) -> M {
    DMatrix::from_fn(dim, dim, |_, _| c(gauss(r), gauss(r))).qr().q()
}

fn random_mat2<R: Rng>(r: &mut R) -> Mat2<f64> {
    let u = random_unitary(2, r);
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

fn random_mat4<R: Rng>(r: &mut R) -> Mat4<f64> {
    let u = random_unitary(4, r);
    std::array::from_fn(|i| std::array::from_fn(|j| u[(i, j)]))
}

fn random_gate<R: Rng>(n: usize, r: &mut R) -> Gate<f64> {
    let q = r.random_range(0..n);
    let kinds = if n >= 2 { 10 } else { 7 };
    let k = r.random_range(0..kinds);
    let mut p = r.random_range(0..n);
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

fn random_circuit<R: Rng>(n: usize, depth: usize, r: &mut R) -> Circuit<f64> {
    Circuit::from_gates(n, (0..depth).map(|_| random_gate(n, r)).collect()).unwrap()
}

fn random_string<R: Rng>(n: usize, r: &mut R) -> PauliString {
    let ops = (0..n)
        .filter_map(|q| match r.random_range(0..4) {
            1 => Some((q, Axis::X)),
            2 => Some((q, Axis::Y)),
            3 => Some((q, Axis::Z)),
            _ => None,
        })
        .collect();
    PauliString::new(ops).unwrap()
}

fn random_op<R: Rng>(n: usize, terms: usize, r: &mut R) -> QubitOperator<f64> {
    let mut op = QubitOperator::new(n);
    for _ in 0..terms {
        op.add_term(PauliTerm::real(r.random_range(-1.0..1.0), random_string(n, r)))
            .unwrap();
    }
    op
}

fn random_state<R: Rng>(n: usize, r: &mut R) -> StateVec<f64> {
    let v: Vec<Complex64> = (0..1 << n).map(|_| c(gauss(r), gauss(r))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVec::from_amplitudes(v.into_iter().map(|z| z / norm).collect()).unwrap()
}

/// `min_phi max |a - e^{i phi} b|` with phi from the trace overlap.
fn diff_up_to_phase(a: &M, b: &M) -> f64 {
    let ov: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1., 0.) };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * ph).norm())
        .fold(0.0, f64::max)
}

fn within(label: &str, elapsed: Duration, limit_s: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!(
            "{label} took {:.2} s, limit {limit_s} s",
            elapsed.as_secs_f64()
        ))
    }
}

fn suite() -> Vec<Circuit<f64>> {
    let mut r = rng(1001);
    (0..200)
        .map(|_| {
            let n = r.random_range(1..=6);
            let depth = r.random_range(1..=30);
            random_circuit(n, depth, &mut r)
        })
        .collect()
}

fn kernel_vs_dense() -> Outcome {
    let circuits = suite();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for circ in &circuits {
        let psi = run(circ, None).map_err(|e| e.to_string())?;
        let u = circ.to_matrix().map_err(|e| e.to_string())?;
        let err = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| (a - u[(i, 0)]).norm())
            .fold(0.0, f64::max);
        worst = worst.max(err);
    }
    within("suite", start.elapsed(), 30.0)?;
    if worst < 1e-10 {
        Ok(format!(
            "max amplitude error {worst:.2e}, {:.2} s",
            start.elapsed().as_secs_f64()
        ))
    } else {
        Err(format!("max amplitude error {worst:.2e}"))
    }
}

fn dm_vs_sv() -> Outcome {
    let mut worst = 0.0f64;
    for circ in &suite() {
        let psi = run(circ, None).map_err(|e| e.to_string())?;
        let rho = run_noisy(circ, &NoiseModel::noiseless(), None).map_err(|e| e.to_string())?;
        let v = DMatrix::from_column_slice(psi.amplitudes().len(), 1, psi.amplitudes());
        let pure = &v * v.adjoint();
        worst = worst.max(trace_distance(&rho.to_dense(), &pure));
    }
    if worst < 1e-10 {
        Ok(format!("max trace distance {worst:.2e}"))
    } else {
        Err(format!("max trace distance {worst:.2e}"))
    }
}

fn trotter_scaling() -> Outcome {
    let start = Instant::now();
    let xz = QubitOperator::from_real_strs(1, &[(1.0, "X0"), (1.0, "Z0")]).unwrap();
    let hexagon = kitaev_heisenberg(&LatticeSpec::honeycomb(1, 1), KitaevParams::RUCL3).unwrap();
    let mut report = Vec::new();
    for (name, h) in [("X+Z", &xz), ("hexagon", &hexagon)] {
        for (order, lo, hi) in [(1u8, 0.75, 1.25), (2, 1.75, 2.25)] {
            let errs: Vec<f64> = [64, 128, 256]
                .iter()
                .map(|&n| empirical_error(h, 1.0, n, order).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            for w in errs.windows(2) {
                let k = (w[0] / w[1]).log2();
                if !(lo..=hi).contains(&k) {
                    return Err(format!("{name} order {order}: exponent {k:.3} outside [{lo}, {hi}]"));
                }
                report.push(format!("{name}/p{order}:{k:.3}"));
            }
        }
    }
    within("scaling", start.elapsed(), 120.0)?;
    Ok(format!("exponents {}", report.join(" ")))
}

fn lcu_bound() -> Outcome {
    let mut r = rng(1004);
    let mut strict = 0;
    for i in 0..100 {
        let n = r.random_range(1..=6);
        let terms = r.random_range(1..=12);
        let op = random_op(n, terms, &mut r);
        let lambda = op.l1_norm();
        let half = spectral_halfwidth(&op).map_err(|e| e.to_string())?;
        if lambda < half - 1e-9 {
            return Err(format!("instance {i}: l1 {lambda} below half-width {half}"));
        }
        let groups = group_anticommuting(&op).map_err(|e| e.to_string())?;
        let grouped = grouped_l1(&groups);
        let multi = groups.iter().any(|g| g.members.len() >= 2);
        if grouped > lambda + 1e-12 || (multi && grouped >= lambda) {
            return Err(format!(
                "instance {i}: grouped {grouped} vs l1 {lambda} (multi-member {multi})"
            ));
        }
        strict += multi as usize;
    }
    Ok(format!("100 operators, {strict} with strict grouping gain"))
}

/// Dense Hubbard dimer on four modes `2 * site + spin`, built from explicit
/// Jordan-Wigner annihilators, restricted to two particles.
fn hubbard_dimer_oracle(t: f64, u: f64) -> f64 {
    let modes = 4;
    let dim = 1 << modes;
    let ann = |j: usize| {
        DMatrix::<f64>::from_fn(dim, dim, |row, col| {
            if col >> j & 1 == 1 && row == col ^ (1 << j) {
                let parity = (col & ((1 << j) - 1)).count_ones();
                if parity % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            }
        })
    };
    let a: Vec<DMatrix<f64>> = (0..modes).map(ann).collect();
    let num: Vec<DMatrix<f64>> = a.iter().map(|x| x.transpose() * x).collect();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for spin in 0..2 {
        let (l, r) = (spin, 2 + spin);
        h -= (a[l].transpose() * &a[r] + a[r].transpose() * &a[l]) * t;
    }
    for site in 0..2 {
        h += &num[2 * site] * &num[2 * site + 1] * u;
    }
    let sector: Vec<usize> = (0..dim).filter(|b: &usize| b.count_ones() == 2).collect();
    let block = DMatrix::from_fn(sector.len(), sector.len(), |i, j| h[(sector[i], sector[j])]);
    block
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn hubbard_ground() -> Outcome {
    let mut report = Vec::new();
    for u in [0.0, 4.0, 8.0] {
        let op = hubbard_hamiltonian(&LatticeSpec::chain(2), 1.0, u).map_err(|e| e.to_string())?;
        let got = sector_spectrum(&op, 2, 1).map_err(|e| e.to_string())?[0];
        let oracle = hubbard_dimer_oracle(1.0, u);
        let closed = (u - (u * u + 16.0f64).sqrt()) / 2.0;
        if (got - oracle).abs() > 1e-9 || (got - closed).abs() > 1e-9 {
            return Err(format!("U={u}: got {got}, oracle {oracle}, closed form {closed}"));
        }
        report.push(format!("U={u}:{got:.6}"));
    }
    Ok(report.join(" "))
}

fn random_zz<R: Rng>(n: usize, r: &mut R) -> QubitOperator<f64> {
    let mut op = QubitOperator::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let s = PauliString::new(vec![(i, Axis::Z), (j, Axis::Z)]).unwrap();
            op.add_term(PauliTerm::real(r.random_range(-1.0..1.0), s)).unwrap();
        }
    }
    op
}

fn swap_networks() -> Outcome {
    for n in 2..=12 {
        let s = swap_network(n).map_err(|e| e.to_string())?;
        if s.layers.len() != n {
            return Err(format!("n={n}: {} layers", s.layers.len()));
        }
        // Replay positions independently of the meeting log.
        let mut at: Vec<usize> = (0..n).collect();
        let mut met = BTreeSet::new();
        for layer in &s.layers {
            let mut touched = BTreeSet::new();
            for &(p, q) in layer {
                if q != p + 1 || !touched.insert(p) || !touched.insert(q) {
                    return Err(format!("n={n}: bad swap ({p}, {q})"));
                }
                let pair = (at[p].min(at[q]), at[p].max(at[q]));
                if !met.insert(pair) {
                    return Err(format!("n={n}: pair {pair:?} meets twice"));
                }
                at.swap(p, q);
            }
        }
        if met.len() != n * (n - 1) / 2 {
            return Err(format!("n={n}: {} of {} pairs met", met.len(), n * (n - 1) / 2));
        }
        if at != (0..n).rev().collect::<Vec<_>>() || s.final_layout != at {
            return Err(format!("n={n}: final layout {at:?}"));
        }
    }
    let mut r = rng(1006);
    let t = 0.37;
    let mut worst = 0.0f64;
    for n in 2..=8 {
        let op = random_zz(n, &mut r);
        let compiled = compile_dense_interactions(&op, t).map_err(|e| e.to_string())?;
        let got = compiled.circuit.to_matrix().map_err(|e| e.to_string())?;
        // exp(-i t H) is diagonal; then logical qubit fin[p] lands on position p.
        let fin = &compiled.schedule.final_layout;
        let dim = 1usize << n;
        let mut want = DMatrix::from_element(dim, dim, c(0., 0.));
        for x in 0..dim {
            let z = |q: usize| if x >> q & 1 == 1 { -1.0 } else { 1.0 };
            let energy: f64 = op
                .iter()
                .map(|(p, cf)| cf.re * p.ops().iter().map(|&(q, _)| z(q)).product::<f64>())
                .sum();
            let y: usize = (0..n).map(|p| (x >> fin[p] & 1) << p).sum();
            want[(y, x)] = Complex64::from_polar(1.0, -t * energy);
        }
        worst = worst.max(diff_up_to_phase(&got, &want));
    }
    if worst < 1e-9 {
        Ok(format!("n=2..12 exhaustive, compiled error {worst:.2e} for n<=8"))
    } else {
        Err(format!("compiled error {worst:.2e}"))
    }
}

/// Grand mean of 200 seeded trials within five standard errors of `exact`.
fn unbiased(trial: impl Fn(u64) -> f64 + Sync + Send, exact: f64) -> Result<f64, String> {
    let runs: Vec<f64> = (0..200u64).into_par_iter().map(trial).collect();
    let m = runs.len() as f64;
    let mean = runs.iter().sum::<f64>() / m;
    let var = runs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt().max(1e-15);
    let z = (mean - exact).abs() / se;
    if z <= 5.0 {
        Ok(z)
    } else {
        Err(format!("mean {mean} vs exact {exact}, {z:.2} standard errors"))
    }
}

fn estimators() -> Outcome {
    let mut r = rng(1007);
    let mut worst = 0.0f64;
    for inst in 0..10 {
        let n = r.random_range(1..=4);
        let terms = r.random_range(2..=8);
        let op = random_op(n, terms, &mut r);
        let psi = random_state(n, &mut r);
        let exact = psi.expectation(&op).map_err(|e| e.to_string())?;
        let mut groups = group_qubitwise_commuting(&op).map_err(|e| e.to_string())?;
        let alloc = allocate_shots(&groups, 10_000, ShotStrategy::Weighted).map_err(|e| e.to_string())?;
        for (g, s) in groups.iter_mut().zip(alloc) {
            g.shots = s;
        }
        let z = unbiased(|s| estimate_expectation(&psi, &op, &groups, s).unwrap().mean, exact)
            .map_err(|e| format!("instance {inst} grouped: {e}"))?;
        worst = worst.max(z);
        let z = unbiased(|s| shadow_estimate(&psi, &op, 10_000, s).unwrap().mean, exact)
            .map_err(|e| format!("instance {inst} shadow: {e}"))?;
        worst = worst.max(z);
    }
    Ok(format!("10 instances x 2 estimators, worst deviation {worst:.2} se"))
}

/// GHZ preparation along a random qubit order, padded with random Z rotations
/// that leave every ZZ correlator unchanged.
fn random_ghz<R: Rng>(n: usize, r: &mut R) -> Circuit<f64> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, r.random_range(0..=i));
    }
    let mut circ = Circuit::new(n);
    circ.push(Gate::H(order[0])).unwrap();
    for w in order.windows(2) {
        circ.push(Gate::CX(w[0], w[1])).unwrap();
    }
    for _ in 0..r.random_range(0..=3) {
        let q = r.random_range(0..n);
        circ.push(Gate::RZ(q, r.random_range(-3.0..3.0))).unwrap();
    }
    circ
}

fn zne_efficacy() -> Outcome {
    let mut r = rng(1008);
    let nm = NoiseModel::<f64>::uniform_depolarizing(0.01).map_err(|e| e.to_string())?;
    let mut wins = 0;
    for _ in 0..50 {
        let n = r.random_range(2..=4);
        let circ = random_ghz(n, &mut r);
        let a = r.random_range(0..n);
        let mut b = r.random_range(0..n);
        while b == a {
            b = r.random_range(0..n);
        }
        let zz = QubitOperator::from_real_strs(n, &[(1.0, &format!("Z{a} Z{b}"))]).unwrap();
        let truth = run_noisy(&circ, &NoiseModel::noiseless(), None)
            .and_then(|d| d.expectation(&zz))
            .map_err(|e| e.to_string())?;
        let pts: Vec<(f64, f64)> = [1usize, 3, 5]
            .iter()
            .map(|&f| {
                let folded = fold_global(&circ, f)?;
                Ok((f as f64, run_noisy(&folded, &nm, None)?.expectation(&zz)?))
            })
            .collect::<qcsc_core::Result<_>>()
            .map_err(|e| e.to_string())?;
        let z = zne_extrapolate(&pts, ZneModel::Linear).map_err(|e| e.to_string())?;
        wins += ((z - truth).abs() < (pts[0].1 - truth).abs()) as usize;
    }
    if wins * 100 >= 90 * 50 {
        Ok(format!("{wins}/50 instances improved"))
    } else {
        Err(format!("only {wins}/50 instances improved"))
    }
}

fn scheduler() -> Outcome {
    let start = Instant::now();
    let fair = gen_fairshare_scenario(2000, 0.1);
    let sizes = VqeSizes {
        project: "hub/group/vqe".into(),
        ..VqeSizes::default()
    };
    let vqe = Scenario {
        devices: vec![
            Device::qpu("qpu0", 27, 1.0, 5.0, Location::Local),
            Device::cpu_node("node0", Location::Local),
            Device::cpu_node("node1", Location::Local),
        ],
        share_tree: ShareTree::flat("hub", "group", &[("vqe", 1.0)]),
        jobs: gen_vqe_workload(5, 4, 1000, &sizes),
        burst_policy: Default::default(),
        horizon_us: None,
        runtime_jitter: 0.1,
        scheduling_period_us: DEFAULT_SCHEDULING_PERIOD,
    };
    let first = simulate(&fair, 11).map_err(|e| e.to_string())?;
    let again = simulate(&fair, 11).map_err(|e| e.to_string())?;
    if first.events_jsonl() != again.events_jsonl() || first.metrics_json() != again.metrics_json() {
        return Err("repeated run differs".into());
    }
    let m = &first.metrics;
    if m.completed < 2000 {
        return Err(format!("only {} jobs completed", m.completed));
    }
    let a = m.project_used_us["hub/group/a"] as f64;
    let b = m.project_used_us["hub/group/b"] as f64;
    let ratio = a / b;
    if (ratio - 1.0).abs() > 0.05 {
        return Err(format!("usage ratio {ratio:.4}"));
    }
    for (name, s) in [("fairshare", &fair), ("vqe", &vqe)] {
        let out = simulate(s, 11).map_err(|e| e.to_string())?;
        let events = parse_events(&out.events_jsonl()).map_err(|e| e.to_string())?;
        check_non_preemption(&events).map_err(|e| format!("{name}: {e}"))?;
        check_colocation(s, &events).map_err(|e| format!("{name}: {e}"))?;
        check_all(s, &events, &out.metrics).map_err(|e| format!("{name}: {e}"))?;
    }
    within("scheduler", start.elapsed(), 60.0)?;
    Ok(format!(
        "{} jobs completed, usage ratio {ratio:.4}, {:.2} s",
        m.completed,
        start.elapsed().as_secs_f64()
    ))
}

fn performance() -> Outcome {
    let mut r = rng(1010);
    let u = random_mat2(&mut r);
    let mut psi = StateVec::<f64>::new(24).map_err(|e| e.to_string())?;
    let start = Instant::now();
    psi.apply_1q(&u, 23).map_err(|e| e.to_string())?;
    let one = start.elapsed();
    within("24-qubit apply_1q", one, 2.0)?;
    let circ = random_circuit(20, 500, &mut r);
    let start = Instant::now();
    run(&circ, None).map_err(|e| e.to_string())?;
    let big = start.elapsed();
    within("20-qubit 500-gate circuit", big, 10.0)?;
    Ok(format!(
        "apply_1q(24) {:.3} s, 20q/500 gates {:.3} s",
        one.as_secs_f64(),
        big.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("state vector matches dense matrix", kernel_vs_dense),
        ("noiseless density matrix matches state vector", dm_vs_sv),
        ("product-formula error scaling", trotter_scaling),
        ("one-norm and grouping bounds", lcu_bound),
        ("Hubbard dimer ground energy", hubbard_ground),
        ("SWAP network exactness", swap_networks),
        ("estimator unbiasedness", estimators),
        ("zero-noise extrapolation", zne_efficacy),
        ("scheduler determinism and fairness", scheduler),
        ("performance floor", performance),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
