mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vqebench::backend::exact_ground_energy;
use vqebench::bits::Bitstring;
use vqebench::fermion::{
    find_z2_symmetries, map_bravyi_kitaev, map_jordan_wigner, map_parity, taper, two_qubit_reduction, Encoding,
    EncodingKind,
};
use vqebench::pipeline::{build, PipelineOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jordan_wigner_reproduces_occupation_matrix(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (op, oracle) = random_hermitian_fermion(&mut rng, n, 6);
        // the Jordan-Wigner image in the computational basis is the
        // occupation-basis matrix itself
        prop_assert!(max_abs_diff(&pauli_sum_matrix(&map_jordan_wigner(&op).unwrap()), &oracle) < 1e-12);
        prop_assert!(max_abs_diff(&fermion_matrix(&op), &oracle) < 1e-12);
    }

    #[test]
    fn encodings_are_isospectral(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (op, oracle) = random_hermitian_fermion(&mut rng, n, 6);
        let reference = sorted_eigenvalues(&oracle);
        for mapped in [map_jordan_wigner(&op), map_parity(&op), map_bravyi_kitaev(&op)] {
            let m = pauli_sum_matrix(&mapped.unwrap());
            prop_assert!(max_diff(&sorted_eigenvalues(&m), &reference) < 1e-10);
        }
    }

    #[test]
    fn encoder_maps_basis_states(n in 1usize..=6, bits in any::<u64>()) {
        // the mapped number operator n_j is diagonal on encoded basis states
        let occ = Bitstring::new(n, (bits as u128) & ((1u128 << n) - 1)).unwrap();
        for kind in [EncodingKind::JordanWigner, EncodingKind::Parity, EncodingKind::BravyiKitaev] {
            let enc = Encoding::new(kind, n).unwrap();
            let code = enc.encode(&occ).unwrap();
            for j in 0..n {
                let mut number = vqebench::fermion::FermionOperator::new(n);
                number.add_term(c(1.0, 0.0), &[
                    vqebench::fermion::Ladder::create(j),
                    vqebench::fermion::Ladder::annihilate(j),
                ]).unwrap();
                let m = pauli_sum_matrix(&enc.map(&number).unwrap());
                let idx = code.bits() as usize;
                let expected = if occ.get(j) { 1.0 } else { 0.0 };
                prop_assert!((m[(idx, idx)].re - expected).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn reduction_and_tapering_preserve_sector_ground_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..24 {
        let problem = random_problem(&mut rng, 2, 2);
        let fci = determinant_fci(&problem);
        let built = build(&problem, PipelineOptions::default()).unwrap();
        let e = exact_ground_energy(&built.hamiltonian).unwrap().energy;
        assert!((e - fci).abs() < 1e-9, "tapered {e} vs determinant FCI {fci}");
        assert!((built.sector_fci().unwrap().energy - fci).abs() < 1e-9);
    }
}

#[test]
fn three_electron_instances_taper_consistently() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..6 {
        let problem = random_problem(&mut rng, 3, 3);
        let fci = determinant_fci(&problem);
        let built = build(&problem, PipelineOptions::default()).unwrap();
        let e = exact_ground_energy(&built.hamiltonian).unwrap().energy;
        assert!((e - fci).abs() < 1e-9, "tapered {e} vs determinant FCI {fci}");
    }
}

#[test]
fn tapering_alone_keeps_the_spectrum_of_its_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let problem = random_problem(&mut rng, 2, 2);
    let op = vqebench::chem::spin_orbital_hamiltonian(&problem);
    let h = map_parity(&op).unwrap();
    let reduced = two_qubit_reduction(&h, 1, 1).unwrap();
    let info = find_z2_symmetries(&reduced);
    // every sector of the tapered operator is a block of the reduced one
    let full = sorted_eigenvalues(&pauli_sum_matrix(&reduced));
    let mut union = Vec::new();
    for sector in 0..1u32 << info.len() {
        let mut s = info.clone();
        s.sector = (0..info.len()).map(|i| if sector >> i & 1 == 1 { -1 } else { 1 }).collect();
        union.extend(sorted_eigenvalues(&pauli_sum_matrix(&taper(&reduced, &s).unwrap())));
    }
    union.sort_by(f64::total_cmp);
    assert!(max_diff(&union, &full) < 1e-10);
}
