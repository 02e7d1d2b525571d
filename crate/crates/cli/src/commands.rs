use std::collections::BTreeMap;
use std::path::Path;

use qcsc_core::lattice::{
    emery_hamiltonian, exact_spectrum, heisenberg_hamiltonian, hubbard_hamiltonian, kitaev_heisenberg, sector_spectrum,
    EmeryParams, KitaevParams, LatticeSpec,
};
use qcsc_core::measure::{
    allocate_shots, estimate_expectation, group_qubitwise_commuting, shadow_estimate, zne_extrapolate, ShotStrategy,
    ZneModel,
};
use qcsc_core::{dm, sv, swapnet as net, trotter, Circuit64, NoiseModel64, QubitOperator64, TrotterPlan64};
use qcsc_sched::{calibrate, gen_fairshare_scenario, gen_vqe_workload, simulate, Scenario, TraceRecord, VqeSizes};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::Session;
use crate::*;

/// Largest register whose amplitudes are written out.
const MAX_AMPLITUDE_DUMP: usize = 20;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn load_circuit(s: &mut Session, p: &Path) -> CliResult<Circuit64> {
    Ok(Circuit64::from_json(&s.read(p)?)?)
}

fn load_operator(s: &mut Session, p: &Path) -> CliResult<QubitOperator64> {
    Ok(QubitOperator64::from_json(&s.read(p)?)?)
}

/// Bitstrings print qubit 0 rightmost.
fn bitstring(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

fn sample_probabilities(probs: &[f64], shots: u64, seed: u64) -> BTreeMap<usize, u64> {
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * acc;
        let k = cdf.partition_point(|&c| c <= u).min(probs.len() - 1);
        *counts.entry(k).or_insert(0) += 1;
    }
    counts
}

pub fn sim_run(a: SimRun, s: &mut Session) -> CliResult<()> {
    s.seed = a.seed;
    let c = load_circuit(s, &a.circuit)?;
    let n = c.num_qubits();
    let obs = match &a.observable {
        Some(p) => Some(load_operator(s, p)?),
        None => None,
    };
    let mut out = json!({ "num_qubits": n });
    let probs: Vec<f64>;
    if let Some(np) = &a.noise {
        let nm = NoiseModel64::from_json(&s.read(np)?)?;
        let rho = dm::run_noisy(&c, &nm, None)?;
        probs = rho.probabilities();
        if let Some(op) = &obs {
            out["expectation"] = json!(rho.expectation(op)?);
        }
        if a.shots.is_none() && obs.is_none() {
            out["probabilities"] = json!(probs);
        }
    } else {
        let psi = sv::run(&c, None)?;
        if let Some(op) = &obs {
            out["expectation"] = json!(psi.expectation(op)?);
        }
        if a.shots.is_none() && obs.is_none() {
            if n > MAX_AMPLITUDE_DUMP {
                return Err(CliError::new(
                    "too_large",
                    format!("amplitude output is limited to {MAX_AMPLITUDE_DUMP} qubits; pass --shots or --observable"),
                ));
            }
            let amps: Vec<[f64; 2]> = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            out["amplitudes"] = json!(amps);
        }
        probs = psi.probabilities();
    }
    if let Some(shots) = a.shots {
        if shots == 0 {
            return Err(CliError::invalid("shots must be >= 1"));
        }
        let counts: BTreeMap<String, u64> = sample_probabilities(&probs, shots, a.seed)
            .into_iter()
            .map(|(k, v)| (bitstring(k, n), v))
            .collect();
        out["shots"] = json!(shots);
        out["counts"] = json!(counts);
    }
    s.emit(a.out.as_deref(), &pretty(&out))
}

pub fn ham_build(a: HamBuild, s: &mut Session) -> CliResult<()> {
    let lattice = |s: &mut Session| -> CliResult<LatticeSpec> {
        match (&a.lattice, a.sites) {
            (Some(p), None) => Ok(serde_json::from_str(&s.read(p)?)?),
            (None, Some(n)) => Ok(LatticeSpec::chain(n)),
            (Some(_), Some(_)) => Err(CliError::invalid("give either --lattice or --sites")),
            (None, None) => Err(CliError::invalid("--lattice or --sites is required")),
        }
    };
    let op = match a.model {
        Model::Hubbard => hubbard_hamiltonian(&lattice(s)?, a.t, a.u)?,
        Model::Heisenberg => heisenberg_hamiltonian(&lattice(s)?, a.j.unwrap_or(1.0))?,
        Model::Emery => {
            let cells = match a.cells.as_deref() {
                Some([c]) => *c,
                None => 1,
                Some(_) => return Err(CliError::invalid("emery takes a single --cells count")),
            };
            let p = EmeryParams {
                t_pd: a.t,
                t_pp: a.t_pp,
                delta_pd: a.delta,
                u_d: a.u,
                u_p: a.u_p,
                v_pd: a.v_pd,
            };
            emery_hamiltonian(cells, p)?
        }
        Model::Kitaev => {
            let lat = match (&a.lattice, a.cells.as_deref()) {
                (Some(_), _) => lattice(s)?,
                (None, Some(&[nx, ny])) => LatticeSpec::honeycomb(nx, ny),
                (None, None) => LatticeSpec::honeycomb(1, 1),
                (None, Some(_)) => return Err(CliError::invalid("kitaev takes --cells nx,ny")),
            };
            let base = if a.rucl3 {
                KitaevParams::RUCL3
            } else {
                KitaevParams::default()
            };
            let p = KitaevParams {
                j: a.j.unwrap_or(base.j),
                k: a.k.unwrap_or(base.k),
                gamma: a.gamma.unwrap_or(base.gamma),
                gamma_prime: a.gamma_prime.unwrap_or(base.gamma_prime),
            };
            kitaev_heisenberg(&lat, p)?
        }
    };
    s.emit(a.out.as_deref(), &op.to_json())
}

pub fn oracle_diag(a: OracleDiag, s: &mut Session) -> CliResult<()> {
    let op = load_operator(s, &a.ham)?;
    let ev = match a.particles {
        Some(n) => sector_spectrum(&op, n, a.k)?,
        None => exact_spectrum(&op, a.k)?,
    };
    let out = json!({ "num_qubits": op.num_qubits(), "particles": a.particles, "eigenvalues": ev });
    s.emit(a.out.as_deref(), &pretty(&out))
}

pub fn trotter_plan(a: TrotterPlanArgs, s: &mut Session) -> CliResult<()> {
    let h = load_operator(s, &a.ham)?;
    let (steps, bound_value) = match a.bound {
        Bound::L1 => {
            let n = trotter::steps_for_error_l1(&h, a.t, a.eps, a.order)?;
            let lambda = h.l1_norm() - h.identity_coeff().norm();
            (n, trotter::l1_error_bound(lambda, a.t, n, a.order))
        }
        Bound::Commutator => {
            if a.order != 1 {
                return Err(CliError::invalid("the commutator bound is first order; pass --order 1"));
            }
            let n = trotter::steps_for_error_commutator(&h, a.t, a.eps)?;
            let c = trotter::commutator_sum(&h)?;
            (n, a.t * a.t * c / (2.0 * n as f64))
        }
    };
    let plan = TrotterPlan64::new(h, a.t, a.order, steps)?;
    let circuit_path = match &a.circuit_out {
        Some(p) => {
            let c = trotter::trotter_circuit(&plan)?;
            s.write(p, &c.to_json())?;
            Some(p.display().to_string())
        }
        None => None,
    };
    let bound = match a.bound {
        Bound::L1 => "l1",
        Bound::Commutator => "commutator",
    };
    let out = json!({
        "n": steps,
        "bound": bound,
        "bound_value": bound_value,
        "eps": a.eps,
        "circuit_path": circuit_path,
        "plan": plan.to_json_value(),
    });
    s.emit(a.out.as_deref(), &pretty(&out))
}

pub fn trotter_error(a: TrotterErrorArgs, s: &mut Session) -> CliResult<()> {
    let h = load_operator(s, &a.ham)?;
    let err = trotter::empirical_error(&h, a.t, a.steps, a.order)?;
    let out = json!({ "t": a.t, "steps": a.steps, "order": a.order, "error": err });
    s.emit(a.out.as_deref(), &pretty(&out))
}

pub fn measure_estimate(a: MeasureEstimate, s: &mut Session) -> CliResult<()> {
    s.seed = a.seed;
    let c = load_circuit(s, &a.circuit)?;
    let op = load_operator(s, &a.observable)?;
    let psi = sv::run(&c, None)?;
    let report = match a.method {
        Method::Groups => {
            let mut groups = group_qubitwise_commuting(&op)?;
            let strategy = match a.strategy {
                Strategy::Weighted => ShotStrategy::Weighted,
                Strategy::Uniform => ShotStrategy::Uniform,
            };
            let shots = allocate_shots(&groups, a.shots, strategy)?;
            for (g, k) in groups.iter_mut().zip(shots) {
                g.shots = k;
            }
            estimate_expectation(&psi, &op, &groups, a.seed)?
        }
        Method::Shadows => shadow_estimate(&psi, &op, a.shots, a.seed)?,
    };
    s.emit(a.out.as_deref(), &pretty(&serde_json::to_value(&report)?))
}

pub fn measure_zne(a: MeasureZne, s: &mut Session) -> CliResult<()> {
    let text = s.read(&a.points)?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::new("parse_error", format!("points file needs a `{name}` column")))
    };
    let (fc, vc) = (col("factor")?, col("value")?);
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |k: usize| -> CliResult<f64> {
            rec.get(k)
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| CliError::new("parse_error", format!("bad number in row {:?}", rec)))
        };
        points.push((num(fc)?, num(vc)?));
    }
    let model = match a.model {
        ZneKind::Linear => ZneModel::Linear,
        ZneKind::Poly2 => ZneModel::Poly2,
        ZneKind::Exp => ZneModel::Exp,
    };
    let value = zne_extrapolate(&points, model)?;
    let out = json!({ "model": model, "points": points.len(), "value": value });
    s.emit(a.out.as_deref(), &pretty(&out))
}

pub fn swapnet(a: SwapnetArgs, s: &mut Session) -> CliResult<()> {
    match &a.compile {
        None => {
            let n =
                a.n.ok_or_else(|| CliError::invalid("--n is required without --compile"))?;
            let sched = net::swap_network(n)?;
            s.emit(a.out.as_deref(), &pretty(&serde_json::to_value(&sched)?))
        }
        Some(p) => {
            let op = load_operator(s, p)?;
            if let Some(n) = a.n.filter(|&n| n != op.num_qubits()) {
                return Err(CliError::invalid(format!(
                    "--n {n} disagrees with the operator's {} qubits",
                    op.num_qubits()
                )));
            }
            let compiled = net::compile_dense_interactions(&op, a.t)?;
            let out = json!({
                "circuit": compiled.circuit.to_json_value(),
                "schedule": compiled.schedule,
            });
            s.emit(a.out.as_deref(), &pretty(&out))
        }
    }
}

pub fn sched_run(a: SchedRun, s: &mut Session) -> CliResult<()> {
    s.seed = a.seed;
    let scenario = Scenario::from_json(&s.read(&a.scenario)?)?;
    let out = simulate(&scenario, a.seed)?;
    s.write(&a.out.join("events.jsonl"), &out.events_jsonl())?;
    s.write(&a.out.join("metrics.json"), &out.metrics_json())?;
    s.manifest_path = Some(a.out.join("manifest.json"));
    Ok(())
}

pub fn sched_calibrate(a: SchedCalibrate, s: &mut Session) -> CliResult<()> {
    let trace: Vec<TraceRecord> = serde_json::from_str(&s.read(&a.trace)?)?;
    let fit = calibrate(&trace)?;
    s.emit(a.out.as_deref(), &pretty(&serde_json::to_value(fit)?))
}

pub fn sched_example(a: SchedExample, s: &mut Session) -> CliResult<()> {
    let scenario = match a.kind {
        ExampleKind::Fairshare => gen_fairshare_scenario(a.jobs, 0.0),
        ExampleKind::Vqe => {
            if a.iterations == 0 {
                return Err(CliError::invalid("iterations must be >= 1"));
            }
            let sizes = VqeSizes {
                project: "hub/group/vqe".into(),
                ..VqeSizes::default()
            };
            Scenario {
                devices: vec![
                    qcsc_sched::Device::qpu("qpu0", 27, 1.0, 5.0, qcsc_sched::Location::Local),
                    qcsc_sched::Device::cpu_node("node0", qcsc_sched::Location::Local),
                    qcsc_sched::Device::cpu_node("node1", qcsc_sched::Location::Local),
                ],
                share_tree: qcsc_sched::ShareTree::flat("hub", "group", &[("vqe", 1.0)]),
                jobs: gen_vqe_workload(a.iterations, 4, 1000, &sizes),
                burst_policy: Default::default(),
                horizon_us: None,
                runtime_jitter: 0.0,
                scheduling_period_us: qcsc_sched::model::DEFAULT_SCHEDULING_PERIOD,
            }
        }
    };
    s.emit(a.out.as_deref(), &scenario.to_json())
}
