mod common;

use common::*;
use proptest::prelude::*;
use vqebench::{PauliString, PauliSum, PauliTerm};

fn string(n: usize) -> impl Strategy<Value = PauliString> {
    (0u128..1 << n, 0u128..1 << n).prop_map(move |(x, z)| PauliString::from_masks(n, x, z).unwrap())
}

proptest! {
    #[test]
    fn product_matches_matrix_product(a in string(4), b in string(4)) {
        let (p, phase) = a.multiply(&b).unwrap();
        let expected = pauli_matrix(&a) * pauli_matrix(&b);
        let got = pauli_matrix(&p) * phase.to_complex();
        prop_assert!(max_abs_diff(&expected, &got) < 1e-14);
    }

    #[test]
    fn commutation_matches_matrices(a in string(4), b in string(4)) {
        let (ma, mb) = (pauli_matrix(&a), pauli_matrix(&b));
        let commutator = &ma * &mb - &mb * &ma;
        let commute = commutator.iter().all(|z| z.norm() < 1e-14);
        prop_assert_eq!(a.commutes(&b).unwrap(), commute);
    }

    #[test]
    fn basis_action_matches_matrix(p in string(3), b in 0u128..8) {
        let (out, amp) = p.act_on_basis(b);
        let m = pauli_matrix(&p);
        prop_assert!((m[(out as usize, b as usize)] - amp).norm() < 1e-14);
    }

    #[test]
    fn sum_matrix_and_text_round_trip(
        terms in prop::collection::vec((string(3), -1.0f64..1.0, -1.0f64..1.0), 1..8)
    ) {
        let mut s = PauliSum::zero(3);
        for (p, re, im) in &terms {
            s.push(PauliTerm::new(p.clone(), c(*re, *im))).unwrap();
        }
        prop_assert!(max_abs_diff(&s.to_matrix().unwrap(), &pauli_sum_matrix(&s)) < 1e-13);
        let back = PauliSum::parse_text(&s.render()).unwrap();
        prop_assert!(max_abs_diff(&back.to_matrix().unwrap(), &pauli_sum_matrix(&s)) < 1e-13);
    }

    #[test]
    fn simplify_preserves_operator(
        terms in prop::collection::vec((string(2), -1.0f64..1.0), 1..10)
    ) {
        let mut s = PauliSum::zero(2);
        for (p, re) in &terms {
            s.push(PauliTerm::real(p.clone(), *re)).unwrap();
        }
        let simple = s.simplify(0.0);
        prop_assert!(max_abs_diff(&pauli_sum_matrix(&simple), &pauli_sum_matrix(&s)) < 1e-13);
        let mut seen = std::collections::HashSet::new();
        prop_assert!(simple.terms().iter().all(|t| seen.insert(t.string.clone())));
    }
}

#[test]
fn strings_larger_than_register_rejected() {
    assert!(PauliString::from_masks(2, 0b100, 0).is_err());
    let a = PauliString::identity(2);
    let b = PauliString::identity(3);
    assert!(a.multiply(&b).is_err());
}
