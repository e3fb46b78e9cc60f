mod common;

use common::*;
use proptest::prelude::*;
use vqebench::ansatz::{exponentiate_pauli, Angle, Circuit, Gate};
use vqebench::backend::Statevector;
use vqebench::chem::load_fixture;
use vqebench::pipeline::{build, PipelineOptions};
use vqebench::PauliString;

fn nonidentity(n: usize) -> impl Strategy<Value = PauliString> {
    (0u128..1 << n, 0u128..1 << n)
        .prop_filter("identity has no circuit", |(x, z)| x | z != 0)
        .prop_map(move |(x, z)| PauliString::from_masks(n, x, z).unwrap())
}

fn random_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::H),
        (q.clone(), -3.0f64..3.0).prop_map(|(q, a)| Gate::Rx(q, Angle::Fixed(a))),
        (q.clone(), -3.0f64..3.0).prop_map(|(q, a)| Gate::Ry(q, Angle::Fixed(a))),
        (q.clone(), -3.0f64..3.0).prop_map(|(q, a)| Gate::Rz(q, Angle::Fixed(a))),
        (q.clone(), -2.0f64..2.0).prop_map(|(q, m)| Gate::Rz(q, Angle::Param { index: 0, multiplier: m })),
        (q.clone(), 1..n).prop_map(move |(c, d)| Gate::Cnot { control: c, target: (c + d) % n }),
    ]
}

fn circuit_from(n: usize, gates: &[Gate]) -> Circuit {
    let mut c = Circuit::new(n, 1);
    for g in gates {
        c.push(*g).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pauli_exponential_matches_closed_form(
        p in (1usize..=5).prop_flat_map(nonidentity),
        theta in -4.0f64..4.0,
    ) {
        let circuit = exponentiate_pauli(&p, Angle::Fixed(theta)).unwrap();
        prop_assert!(max_abs_diff(&circuit_unitary(&circuit, &[]), &pauli_exponential(&p, theta)) < 1e-12);
        let scaled = exponentiate_pauli(&p, Angle::Param { index: 0, multiplier: 0.5 }).unwrap();
        prop_assert!(max_abs_diff(&circuit_unitary(&scaled, &[2.0 * theta]), &pauli_exponential(&p, theta)) < 1e-12);
    }

    #[test]
    fn statevector_matches_unitary_oracle(
        gates in prop::collection::vec(random_gate(4), 1..30),
        param in -2.0f64..2.0,
    ) {
        let c = circuit_from(4, &gates);
        let s = Statevector::prepare(&c, &[param], 30).unwrap();
        let u = circuit_unitary(&c, &[param]);
        for (k, a) in s.amplitudes().iter().enumerate() {
            prop_assert!((a - u[(k, 0)]).norm() < 1e-12);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn optimization_preserves_unitary_up_to_phase(
        gates in prop::collection::vec(random_gate(3), 1..40),
        param in -2.0f64..2.0,
    ) {
        let c = circuit_from(3, &gates);
        let opt = c.optimize();
        prop_assert!(opt.len() <= c.len());
        prop_assert!(opt.stats().n_cnot <= c.stats().n_cnot);
        let d = max_abs_diff_up_to_phase(&circuit_unitary(&opt, &[param]), &circuit_unitary(&c, &[param]));
        prop_assert!(d < 1e-10, "distance {}", d);
    }

    #[test]
    fn text_round_trip(gates in prop::collection::vec(random_gate(3), 0..20)) {
        let c = circuit_from(3, &gates).optimize();
        prop_assert_eq!(Circuit::parse_text(&c.to_text()).unwrap(), c);
    }
}

fn names(c: &Circuit) -> Vec<String> {
    c.gates().iter().map(|g| g.to_string()).collect()
}

#[test]
fn zz_and_zzz_blocks() {
    let angle = Angle::Param { index: 0, multiplier: 1.0 };
    let zz = exponentiate_pauli(&"ZZ".parse().unwrap(), angle).unwrap();
    assert_eq!(names(&zz), ["CNOT 0 1", "RZ 1 p0*2.0", "CNOT 0 1"]);
    let zzz = exponentiate_pauli(&"ZZZ".parse().unwrap(), angle).unwrap();
    assert_eq!(
        names(&zzz),
        ["CNOT 0 1", "CNOT 1 2", "RZ 2 p0*2.0", "CNOT 1 2", "CNOT 0 1"]
    );
}

#[test]
fn uccsd_circuit_is_an_ordered_product_of_exponentials() {
    let fx = load_fixture(fixture("h2/6-31G.fcidump")).unwrap();
    let options = PipelineOptions {
        optimize_circuit: false,
        n_frozen: fx.recommended_frozen(),
        ..PipelineOptions::default()
    };
    let b = build(&fx.problem, options).unwrap();
    let n = b.n_qubits();
    let theta: Vec<f64> = (0..b.n_parameters()).map(|k| 0.3 - 0.17 * k as f64).collect();

    let mut expected = CMat::identity(1 << n, 1 << n);
    for q in b.reference.ones() {
        expected = gate_unitary(&Gate::X(q), n, &[]) * expected;
    }
    for e in &b.mapped_excitations {
        for t in e.generator.terms().iter().filter(|t| !t.string.is_identity()) {
            // exp(theta * i r P) = exp(-i (-r theta) P)
            let angle = -t.coefficient.im * theta[e.parameter_index];
            expected = pauli_exponential(&t.string, angle) * expected;
        }
    }
    assert!(max_abs_diff(&circuit_unitary(&b.circuit, &theta), &expected) < 1e-10);

    let optimized = b.circuit.optimize();
    assert!(max_abs_diff_up_to_phase(&circuit_unitary(&optimized, &theta), &expected) < 1e-10);
}

#[test]
fn zero_parameters_prepare_the_reference() {
    for rel in ["h2/STO-3G.fcidump", "h2/6-31G.fcidump", "oh_minus/STO-6G.fcidump", "h2o/STO-6G.fcidump"] {
        let fx = load_fixture(fixture(rel)).unwrap();
        let options = PipelineOptions {
            n_frozen: fx.recommended_frozen(),
            ..PipelineOptions::default()
        };
        let b = build(&fx.problem, options).unwrap();
        let s = Statevector::prepare(&b.circuit, &vec![0.0; b.n_parameters()], 30).unwrap();
        let fidelity = s.amplitudes()[b.reference.bits() as usize].norm_sqr();
        assert!((fidelity - 1.0).abs() < 1e-12, "{rel}: fidelity {fidelity}");
    }
}
