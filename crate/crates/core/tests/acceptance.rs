//! Acceptance run: one line per criterion, non-zero exit if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qudit_cluster::algorithms::{run_circuit_reference, run_cluster_version, HiddenShiftInstance};
use qudit_cluster::clifford::verify_generation;
use qudit_cluster::cluster::{verify_stabilizers, z_measure_removal_check, ClusterGraph};
use qudit_cluster::identities::identity_residuals;
use qudit_cluster::math::{
    fourier_gate, generated_group_order, omega, pauli_x_power, phase_gate, random_phase_vector,
    random_state_vector, sc_label_permutation, states_equal_up_to_phase, units, x_label_permutation, ModUnit,
    C64,
};
use qudit_cluster::mub::{
    b_vector, build_mub_family, compile_gate, eigenphase_relation_residual, spanning_rank, zx_eigenvector,
    GateTarget,
};
use qudit_cluster::teleport::{
    branch_agreement_fidelity, min_soundness_fidelity, one_dit_teleport_with_probability, run_pattern,
    BranchSelection, MeasurementPattern,
};
use qudit_cluster::StateVector;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn teleportation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_fid, mut worst_p) = (1.0f64, 0.0f64);
    for d in [2, 3, 5, 7] {
        let f = fourier_gate(d).map_err(fail)?;
        for _ in 0..50 {
            let psi = StateVector::single(random_state_vector(d, &mut rng)).map_err(fail)?;
            let a = random_phase_vector(d, &mut rng);
            let fz = f.matmul(&phase_gate(&a));
            for m in 0..d {
                let (out, p) = one_dit_teleport_with_probability(&psi, &a, m).map_err(fail)?;
                let expected = pauli_x_power(d, m as i64).map_err(fail)?.matmul(&fz).apply(psi.amplitudes());
                let cmp = states_equal_up_to_phase(out.amplitudes(), &expected, 1e-10).map_err(fail)?;
                worst_fid = worst_fid.min(cmp.fidelity);
                worst_p = worst_p.max((p - 1.0 / d as f64).abs());
            }
        }
    }
    ensure(worst_fid >= 1.0 - 1e-10 && worst_p <= 1e-10, || {
        format!("fidelity {worst_fid}, probability deviation {worst_p:e}")
    })?;
    Ok(format!("min fidelity {worst_fid:.15}, max |p - 1/d| {worst_p:.1e}"))
}

fn identity_suite() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in [2, 3, 5] {
        for c in identity_residuals(d, 2).map_err(fail)? {
            ensure(c.residual <= 1e-10, || format!("{} d={d}: {:e}", c.name, c.residual))?;
            worst = worst.max(c.residual);
            count += 1;
        }
    }
    Ok(format!("{count} identities, max residual {worst:.1e}"))
}

fn random_linear_pattern(rng: &mut ChaCha8Rng) -> Result<(usize, MeasurementPattern), String> {
    let d = [2, 3, 5][rng.random_range(0..3)];
    let steps = rng.random_range(1..=4);
    let us = units(d);
    let mut p = MeasurementPattern::empty(d).map_err(fail)?;
    for q in 0..steps {
        let a = random_phase_vector(d, rng);
        p = if rng.random_bool(0.5) {
            let c = ModUnit::new(us[rng.random_range(0..us.len())] as i64, d).map_err(fail)?;
            p.measure_fc(q, a, c)
        } else {
            p.measure(q, a)
        }
        .map_err(fail)?;
    }
    Ok((steps, p))
}

fn frame_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut sound, mut agree) = (1.0f64, 1.0f64);
    let mut branches = 0;
    for _ in 0..200 {
        let (steps, p) = random_linear_pattern(&mut rng)?;
        let d = p.dim();
        let g = ClusterGraph::linear(d, steps + 1).map_err(fail)?;
        let psi = StateVector::single(random_state_vector(d, &mut rng)).map_err(fail)?;
        let res = run_pattern(Some(&psi), &g, &p, &BranchSelection::Exhaustive).map_err(fail)?;
        branches += res.len();
        sound = sound.min(min_soundness_fidelity(&res).map_err(fail)?);
        agree = agree.min(branch_agreement_fidelity(&res).map_err(fail)?);
    }
    ensure(sound >= 1.0 - 1e-9 && agree >= 1.0 - 1e-9, || {
        format!("soundness {sound}, agreement {agree}")
    })?;
    Ok(format!("200 patterns, {branches} branches, min fidelity {sound:.12}"))
}

fn mub_suite() -> Outcome {
    let mut worst = 0.0f64;
    for d in [2, 3, 5, 7, 11] {
        let fam = build_mub_family(d).map_err(fail)?;
        worst = worst.max(fam.unbiasedness_residual());
        let rank = spanning_rank(&fam);
        ensure(rank == d * d, || format!("d={d}: rank {rank}"))?;
        for k in 1..d {
            let r = eigenphase_relation_residual(d, k).map_err(fail)?;
            ensure(r <= 1e-10, || format!("phase relation d={d} k={k}: {r:e}"))?;
        }
    }
    ensure(worst <= 1e-10, || format!("overlap deviation {worst:e}"))?;

    let w = |e: i64| omega(3, e) * (1.0 / 3f64.sqrt());
    let table: [(usize, [[i64; 3]; 3]); 2] = [
        (1, [[0, 0, 2], [2, 0, 0], [0, 2, 0]]),
        (2, [[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
    ];
    for (k, rows) in table {
        for (m, row) in rows.iter().enumerate() {
            let v = zx_eigenvector(3, k, m).map_err(fail)?;
            let expected: Vec<C64> = row.iter().map(|&e| w(e)).collect();
            let diff = v.iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            ensure(diff < 1e-12, || format!("ZX^{k}_{m} table entry off by {diff:e}"))?;
        }
    }
    let pi = std::f64::consts::PI;
    for (k, expected) in [(1, [0.0, 0.0, 4.0 * pi / 3.0]), (2, [0.0, 2.0 * pi / 3.0, 0.0])] {
        let b = b_vector(3, k).map_err(fail)?;
        let diff = b.angles().iter().zip(expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ensure(diff < 1e-12, || format!("b_{k} off by {diff:e}"))?;
    }
    Ok(format!("max overlap deviation {worst:.1e}, full rank, tables reproduced"))
}

fn gate_compilation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 1.0f64;
    let mut targets = 0;
    for d in [2, 3, 5] {
        for class in 0..3 {
            for t in 0..100 {
                let a = random_phase_vector(d, &mut rng);
                let target = match class {
                    0 => GateTarget::Z(a),
                    1 => GateTarget::X(a),
                    _ => GateTarget::Zx { k: 1 + t % (d - 1), a },
                };
                let gp = compile_gate(&target).map_err(fail)?;
                let psi = StateVector::single(random_state_vector(d, &mut rng)).map_err(fail)?;
                let res = gp.run(&psi, &BranchSelection::Exhaustive).map_err(fail)?;
                let f = min_soundness_fidelity(&res).map_err(fail)?;
                ensure(f >= 1.0 - 1e-9, || format!("{} d={d}: fidelity {f}", target.label()))?;
                worst = worst.min(f);
                targets += 1;
            }
        }
    }
    Ok(format!("{targets} targets, min fidelity {worst:.12}"))
}

fn deutsch_jozsa() -> Outcome {
    let mut branches = 0;
    for d in [2, 3, 5] {
        for inst in HiddenShiftInstance::all(d).map_err(fail)? {
            let reference = run_circuit_reference(&inst).map_err(fail)?;
            ensure(reference == (inst.a, inst.b), || format!("reference {inst:?} gave {reference:?}"))?;
            let res = run_cluster_version(&inst, &BranchSelection::Exhaustive).map_err(fail)?;
            ensure(res.len() == d.pow(4), || format!("{} branches for d={d}", res.len()))?;
            for br in &res {
                ensure(br.recovered == reference, || format!("{inst:?} branch {:?} gave {:?}", br.outcomes, br.recovered))?;
            }
            branches += res.len();
        }
    }
    Ok(format!("{branches} branches, all exact"))
}

fn stabilizers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for _ in 0..50 {
        let d = [2, 3, 5][rng.random_range(0..3)];
        let n = rng.random_range(2..=5);
        let g = ClusterGraph::random(d, n, 0.5, &mut rng).map_err(fail)?;
        ensure(verify_stabilizers(&g).map_err(fail)?, || format!("stabilizers fail on {g:?}"))?;
        for q in 0..n {
            for j in 0..d {
                ensure(z_measure_removal_check(&g, q, j).map_err(fail)?, || {
                    format!("Z removal fails on {g:?} q={q} j={j}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("50 graphs, {checks} removal checks"))
}

fn clifford_generation() -> Outcome {
    let mut counts = Vec::new();
    for d in [2, 3, 5] {
        let report = verify_generation(d).map_err(fail)?;
        let n = report.records.len();
        ensure(n == d * (d * d - 1), || format!("d={d}: {n} actions"))?;
        ensure(report.passed(), || format!("d={d}: {} failures", report.failures().len()))?;
        counts.push(n.to_string());
    }
    Ok(format!("actions {} with zero failures", counts.join("/")))
}

fn permutation_groups() -> Outcome {
    for d in [3, 5, 7] {
        let mut gens = vec![x_label_permutation(d)];
        for c in units(d) {
            gens.push(sc_label_permutation(ModUnit::new(c as i64, d).map_err(fail)?));
        }
        let order = generated_group_order(d, &gens).map_err(fail)?;
        ensure(order == d * (d - 1), || format!("d={d}: order {order}"))?;
    }
    let order = generated_group_order(3, &[x_label_permutation(3), sc_label_permutation(ModUnit::minus_one(3))])
        .map_err(fail)?;
    ensure(order == 6, || format!("<X, S_-1> for d=3 has order {order}"))?;
    Ok("orders 6/20/42, <X, S_-1> = 6".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("one-dit teleportation", teleportation, 5),
        ("identity suite", identity_suite, 5),
        ("frame soundness", frame_soundness, 60),
        ("mutually unbiased bases", mub_suite, 10),
        ("gate compilation", gate_compilation, 120),
        ("hidden-shift recovery", deutsch_jozsa, 60),
        ("stabilizers and Z removal", stabilizers, 30),
        ("Clifford generation", clifford_generation, 30),
        ("permutation group orders", permutation_groups, 1),
    ];
    let mut all = true;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget} s budget")),
            Err(e) => (false, e),
        };
        all &= ok;
        println!(
            "criterion {}: {} {name} ({:.2} s) {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
