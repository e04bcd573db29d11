use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qudit_cluster::algorithms::{run_cluster_version, HiddenShiftInstance};
use qudit_cluster::clifford::{build_c_imn, commutator_exponent, conjugate_pauli, PauliLabel};
use qudit_cluster::cluster::ClusterGraph;
use qudit_cluster::frame::{shift_phase_vector, ErrorFrame, FrameEntry};
use qudit_cluster::math::{
    basis_vector, controlled_z, matrices_equal_up_to_phase, pauli_x_power, phase_gate, random_phase_vector,
    random_state_vector, unit_inverse, ModUnit,
};
use qudit_cluster::mub::{compile_gate, zx_phase_gate, GateTarget};
use qudit_cluster::teleport::{
    branch_agreement_fidelity, min_soundness_fidelity, one_dit_teleport_with_probability, run_pattern,
    BranchSelection, MeasurementPattern,
};
use qudit_cluster::StateVector;

fn prime() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 5, 7])
}

fn small_prime() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 5])
}

fn entry(d: usize, x: usize, z: usize, c: usize) -> FrameEntry {
    let c = (1 + c % (d - 1)) as i64;
    FrameEntry {
        x: x % d,
        z: z % d,
        c: ModUnit::new(c, d).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_inverse_is_an_inverse(d in prime(), c in 1i64..1000) {
        prop_assume!(c % d as i64 != 0);
        let inv = unit_inverse(c, d).unwrap();
        prop_assert_eq!((inv as i64 * c).rem_euclid(d as i64), 1);
    }

    #[test]
    fn phase_vector_shift_past_x_power(d in prime(), l in -10i64..10, seed: u64) {
        let a = random_phase_vector(d, &mut ChaCha8Rng::seed_from_u64(seed));
        let xl = pauli_x_power(d, l).unwrap();
        let lhs = phase_gate(&a).matmul(&xl);
        let rhs = xl.matmul(&phase_gate(&shift_phase_vector(&a, l)));
        prop_assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn teleport_outcomes_are_uniform(d in prime(), seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let psi = StateVector::single(random_state_vector(d, &mut r)).unwrap();
        let a = random_phase_vector(d, &mut r);
        for m in 0..d {
            let (_, p) = one_dit_teleport_with_probability(&psi, &a, m).unwrap();
            prop_assert!((p - 1.0 / d as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn cz_pulls_frames_through(d in small_prime(), e in any::<[usize; 6]>()) {
        let (f1, f2) = (entry(d, e[0], e[1], e[2]), entry(d, e[3], e[4], e[5]));
        let mut frame = ErrorFrame::from_entries(d, vec![f1, f2]).unwrap();
        let before = frame.realize();
        let power = frame.commute_through_cz(0, 1).unwrap();
        let lhs = controlled_z(d, 1).unwrap().matmul(&before);
        let rhs = frame.realize().matmul(&controlled_z(d, power as i64).unwrap());
        prop_assert!(matrices_equal_up_to_phase(&lhs, &rhs, 1e-10).unwrap().equal);
    }

    #[test]
    fn readout_correction_inverts_the_frame(d in prime(), e in any::<[usize; 3]>(), k in 0usize..7) {
        let k = k % d;
        let f = entry(d, e[0], e[1], e[2]);
        let frame = ErrorFrame::from_entries(d, vec![f]).unwrap();
        // the frame maps logical |k> to some physical |k'>; correction must give k back
        let image = f.matrix().apply(&basis_vector(d, k));
        let physical = image.iter().position(|a| a.norm() > 0.5).unwrap();
        prop_assert_eq!(frame.correct_label(0, physical).unwrap(), k);
    }

    #[test]
    fn clifford_conjugation_preserves_commutators(d in prop::sample::select(vec![3usize, 5]), i in 1usize..5, m in 0usize..5, n in 0usize..5, p in any::<[u8; 4]>()) {
        prop_assume!(i % d != 0);
        let u = build_c_imn(i % d, m % d, n % d, d).unwrap();
        let a = PauliLabel::xz(d, p[0] as i64, p[1] as i64);
        let b = PauliLabel::xz(d, p[2] as i64, p[3] as i64);
        let (ua, ub) = (conjugate_pauli(&u, &a).unwrap(), conjugate_pauli(&u, &b).unwrap());
        prop_assert_eq!(commutator_exponent(&ua, &ub), commutator_exponent(&a, &b));
    }

    #[test]
    fn graph_text_round_trip(d in 2usize..6, n in 1usize..7, seed: u64) {
        let g = ClusterGraph::random(d, n, 0.5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(ClusterGraph::parse(&g.to_text()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_patterns_are_sound(d in small_prime(), fcs in prop::collection::vec(0usize..5, 1..=4), seed: u64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut p = MeasurementPattern::empty(d).unwrap();
        for (q, &c) in fcs.iter().enumerate() {
            let a = random_phase_vector(d, &mut r);
            p = if c == 0 {
                p.measure(q, a)
            } else {
                p.measure_fc(q, a, ModUnit::new((1 + c % (d - 1)) as i64, d).unwrap())
            }
            .unwrap();
        }
        prop_assert_eq!(MeasurementPattern::parse(&p.to_text(), d).unwrap(), p.clone());
        let g = ClusterGraph::linear(d, fcs.len() + 1).unwrap();
        let psi = StateVector::single(random_state_vector(d, &mut r)).unwrap();
        let res = run_pattern(Some(&psi), &g, &p, &BranchSelection::Exhaustive).unwrap();
        prop_assert_eq!(res.len(), d.pow(fcs.len() as u32));
        prop_assert!(min_soundness_fidelity(&res).unwrap() > 1.0 - 1e-9);
        prop_assert!(branch_agreement_fidelity(&res).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn compiled_zx_gates_are_sound(d in prop::sample::select(vec![3usize, 5, 7]), k in 1usize..7, seed: u64) {
        let k = 1 + (k - 1) % (d - 1);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_phase_vector(d, &mut r);
        let gp = compile_gate(&GateTarget::Zx { k, a: a.clone() }).unwrap();
        prop_assert!(gp.expected.max_diff(&zx_phase_gate(k, &a).unwrap()) < 1e-12);
        let psi = StateVector::single(random_state_vector(d, &mut r)).unwrap();
        let res = gp.run(&psi, &BranchSelection::Seeded(seed)).unwrap();
        prop_assert!(min_soundness_fidelity(&res).unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn hidden_shift_sampled_branches(d in small_prime(), a in 0usize..5, b in 0usize..5, seed: u64) {
        let inst = HiddenShiftInstance::new(d, a % d, b % d).unwrap();
        let br = run_cluster_version(&inst, &BranchSelection::Seeded(seed)).unwrap();
        prop_assert_eq!(br[0].recovered, (a % d, b % d));
    }
}
