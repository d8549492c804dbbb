use num::{BigInt, BigRational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trace_relations::combinatorics::{canonicalize_word, involution_basis, pair_permutation};
use trace_relations::evaluation::Matrix;
use trace_relations::*;

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    proptest::collection::vec(prop_oneof![Just(Letter::X), Just(Letter::XT)], 1..12)
}

fn random_sample(n: usize, rng: &mut ChaCha8Rng) -> MatrixSample {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
        .collect();
    MatrixSample::from_integers(&rows).unwrap()
}

fn random_signed_permutation(n: usize, rng: &mut ChaCha8Rng) -> Matrix<BigRational> {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        images.swap(i, rng.gen_range(0..=i));
    }
    let negate: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    Matrix::signed_permutation(&Permutation::from_images(&images).unwrap(), &negate)
}

proptest! {
    #[test]
    fn word_canonicalization_is_idempotent(w in letters()) {
        let c = canonicalize_word(&w).unwrap();
        prop_assert_eq!(canonicalize_word(c.letters()).unwrap(), c.clone());
        // rotations and the reversed-swapped word share the canonical form
        let mut rotated = w.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(canonicalize_word(&rotated).unwrap(), c.clone());
        let mirrored: Vec<Letter> = w.iter().rev().map(|l| l.swapped()).collect();
        prop_assert_eq!(canonicalize_word(&mirrored).unwrap(), c);
    }

    #[test]
    fn monomial_canonicalization_is_idempotent(words in proptest::collection::vec(letters(), 1..4)) {
        let ws: Vec<TraceWord> = words.iter().map(|w| canonicalize_word(w).unwrap()).collect();
        let m = InvariantMonomial::new(ws.clone()).unwrap();
        prop_assert_eq!(InvariantMonomial::new(m.words().to_vec()).unwrap(), m.clone());
        let mut reversed = ws;
        reversed.reverse();
        prop_assert_eq!(InvariantMonomial::new(reversed).unwrap(), m.clone());
        let parsed: InvariantMonomial = m.class_id().as_str().parse().unwrap();
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn transposing_swaps_letters(w in letters(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_sample(3, &mut rng);
        let word = canonicalize_word(&w).unwrap();
        let swapped: Vec<Letter> = w.iter().map(|l| l.swapped()).collect();
        let swapped = canonicalize_word(&swapped).unwrap();
        prop_assert_eq!(evaluate_word(&word, &x.transpose()).unwrap(), evaluate_word(&swapped, &x).unwrap());
    }
}

#[test]
fn signed_permutation_conjugation_fixes_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for d in 1..=4 {
        let basis = enumerate_invariant_basis(d).unwrap();
        for n in 1..=4 {
            for _ in 0..5 {
                let x = random_sample(n, &mut rng);
                let MatrixSample::Rational(m) = &x else { unreachable!() };
                let g = random_signed_permutation(n, &mut rng);
                let y = MatrixSample::Rational(m.orthogonal_conjugate(&g));
                assert_eq!(
                    evaluate_basis_row(&basis, &x).unwrap(),
                    evaluate_basis_row(&basis, &y).unwrap()
                );
            }
        }
    }
}

#[test]
fn contraction_matches_monomial_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let limits = Limits::default();
    for d in 1..=3 {
        for inv in enumerate_fpf_involutions(d, &limits).unwrap() {
            let m = involution_to_monomial(&inv);
            for n in 1..=3 {
                for _ in 0..20 {
                    let x = random_sample(n, &mut rng);
                    assert_eq!(
                        contract_matching(&inv, &x, &limits).unwrap(),
                        evaluate_monomial(&m, &x).unwrap(),
                        "{inv} vs {m} at n={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn class_ids_are_constant_on_pair_permutation_orbits() {
    let limits = Limits::default();
    for d in 1..=4 {
        let group = Permutation::all_on(d, &(0..d).collect::<Vec<_>>());
        for inv in enumerate_fpf_involutions(d, &limits).unwrap() {
            let id = class_of_involution(&inv);
            for g in &group {
                assert_eq!(class_of_involution(&inv.conjugate_by(&pair_permutation(g))), id);
            }
        }
    }
}

#[test]
fn involution_images_cover_the_basis() {
    let limits = Limits::default();
    for d in 1..=6 {
        assert_eq!(
            involution_basis(d, &limits).unwrap(),
            enumerate_invariant_basis(d).unwrap()
        );
    }
}

#[test]
fn integer_samples_give_integer_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let basis = enumerate_invariant_basis(4).unwrap();
    let x = random_sample(3, &mut rng);
    for v in evaluate_basis_row(&basis, &x).unwrap() {
        assert!(v.as_rational().unwrap().is_integer());
    }
    let zero = MatrixSample::from_integers(&[vec![0, 0], vec![0, 0]]).unwrap();
    let zero_row = evaluate_basis_row(&enumerate_invariant_basis(3).unwrap(), &zero).unwrap();
    assert!(zero_row
        .iter()
        .all(|v| v.as_rational() == Some(&BigRational::from_integer(BigInt::from(0)))));
}

#[test]
fn identity_row_at_degree_three() {
    let x = MatrixSample::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
    let row = evaluate_basis_row(&enumerate_invariant_basis(3).unwrap(), &x).unwrap();
    let expected: Vec<ScalarValue> = [2, 2, 4, 4, 8]
        .iter()
        .map(|&v| ScalarValue::Rational(BigRational::from_integer(BigInt::from(v))))
        .collect();
    assert_eq!(row, expected);
}
