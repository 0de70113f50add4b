use jp_toric::bratteli::{to_dot, BratteliDiagram};
use jp_toric::json::{from_json, to_json, DigitsDoc};
use jp_toric::jp::{
    digit_matrix, jp_expand, jp_step, reconstruct_theta, DigitBlock, DigitSequence, Step,
    ThetaVector,
};
use jp_toric::numerics::rational::{pow10, ratio};
use jp_toric::numerics::{GuardedReal, UnimodularMatrix};
use jp_toric::repr::{evaluate_word, free_reduce, Presentation, Representation};
use jp_toric::toric::{stably_isomorphic, theta_from_lambda, ToricAFAlgebra};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn block(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..6, n - 1)
}

fn blocks(n: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(block(n), len)
}

fn seq(n: usize, b: &[Vec<i64>]) -> DigitSequence {
    DigitSequence::new(n, b.iter().map(|x| DigitBlock::from_i64(x)).collect(), false).unwrap()
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-500i64..500, 1i64..200).prop_map(|(p, q)| ratio(p, q))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..1000, 1i64..200).prop_map(|(p, q)| ratio(p, q))
}

fn small_unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    (2usize..5)
        .prop_flat_map(|n| prop::collection::vec(block(n), 1..4))
        .prop_map(|bs| {
            let n = bs[0].len() + 1;
            bs.iter().fold(UnimodularMatrix::identity(n), |acc, b| {
                acc.mul(&digit_matrix(&DigitBlock::from_i64(b))).unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn digit_matrix_determinant(n in 2usize..8, seed in prop::collection::vec(-5i64..9, 7)) {
        let b = DigitBlock::from_i64(&seed[..n - 1]);
        let m = digit_matrix(&b);
        let expected = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(m.determinant(), expected);
        prop_assert!(m.mul(&m.inverse()).unwrap().is_identity());
    }

    #[test]
    fn matrix_product_is_associative(a in small_unimodular(), k in 0i64..3) {
        let b = a.pow(k);
        let c = a.inverse();
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.determinant().abs().is_one());
    }

    #[test]
    fn guarded_floor_is_sound(x in rational(), r in 0i64..50) {
        let g = GuardedReal::around(&x, &ratio(r, 1000), 128);
        let exact = x.floor().to_integer();
        match g.floor() {
            Some(f) => prop_assert_eq!(f, exact),
            None => prop_assert!(g.lower().floor() != g.upper().floor() || g.upper().is_integer()),
        }
    }

    #[test]
    fn rationals_terminate_and_round_trip(n in 2usize..5, parts in prop::collection::vec(positive_rational(), 4)) {
        let theta = ThetaVector::Exact(parts[..n - 1].to_vec());
        let digits = jp_expand(&theta, 400).unwrap();
        if digits.is_terminated() {
            prop_assert_eq!(reconstruct_theta(&digits, &pow10(-9)).unwrap(), theta);
        }
        if n == 2 {
            prop_assert!(digits.is_terminated());
        }
    }

    #[test]
    fn step_inverts_digit_matrix(parts in prop::collection::vec(positive_rational(), 2)) {
        let theta = ThetaVector::Exact(parts.clone());
        if let Step::Next { block, theta: next } = jp_step(&theta).unwrap() {
            let mut v = vec![BigRational::one()];
            v.extend(next.as_exact().unwrap().iter().cloned());
            let image = digit_matrix(&block).mul_rational_vector(&v).unwrap();
            let back: Vec<BigRational> = image[1..].iter().map(|x| x / &image[0]).collect();
            prop_assert_eq!(back, parts);
        }
    }

    #[test]
    fn diagrams_differ_at_first_differing_level(
        a in blocks(3, 1..12),
        b in blocks(3, 1..12),
    ) {
        let (sa, sb) = (seq(3, &a), seq(3, &b));
        let da = BratteliDiagram::from_digits(&sa).unwrap();
        let db = BratteliDiagram::from_digits(&sb).unwrap();
        let first = a.iter().zip(&b).position(|(x, y)| x != y).map(|k| k + 1);
        let limit = a.len().min(b.len());
        prop_assert_eq!(da.first_difference(&db, limit), first);
        prop_assert_eq!(to_dot(&da, 3.min(a.len() + 1)).unwrap(), to_dot(&da.clone(), 3.min(a.len() + 1)).unwrap());
    }

    #[test]
    fn stable_isomorphism_is_symmetric(
        tail in blocks(3, 24..30),
        ha in blocks(3, 0..4),
        hb in blocks(3, 0..4),
    ) {
        let mk = |h: &[Vec<i64>]| {
            let mut all = h.to_vec();
            all.extend(tail.iter().cloned());
            ToricAFAlgebra::new(seq(3, &all)).unwrap()
        };
        let (a, b) = (mk(&ha), mk(&hb));
        prop_assert!(stably_isomorphic(&a, &a, 6).unwrap().unwrap().offsets == [0, 0]);
        let ab = stably_isomorphic(&a, &b, 6).unwrap();
        let ba = stably_isomorphic(&b, &a, 6).unwrap();
        prop_assert_eq!(ab.is_some(), ba.is_some());
        prop_assert!(ab.is_some());
        let w = ab.unwrap();
        prop_assert_eq!(&a.digits().blocks()[w.offsets[0]..][..w.window], &b.digits().blocks()[w.offsets[1]..][..w.window]);
    }

    #[test]
    fn theta_from_lambda_is_scale_invariant(
        lambda in prop::collection::vec(positive_rational(), 2..7),
        c in rational().prop_filter("nonzero", |c| !num_traits::Zero::is_zero(c)),
    ) {
        let scaled: Vec<BigRational> = lambda.iter().map(|x| x * &c).collect();
        prop_assert_eq!(theta_from_lambda(&lambda).unwrap(), theta_from_lambda(&scaled).unwrap());
    }

    #[test]
    fn words_evaluate_to_unimodular_homomorphically(
        u in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2]), 0..8),
        v in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2]), 0..8),
    ) {
        let rep = Representation::from_matrices(
            Presentation::free(2),
            vec![
                digit_matrix(&DigitBlock::from_i64(&[1, 1])),
                digit_matrix(&DigitBlock::from_i64(&[2, 1])),
            ],
        ).unwrap();
        let uv: Vec<i64> = u.iter().chain(&v).copied().collect();
        let m = evaluate_word(&rep, &uv).unwrap();
        prop_assert_eq!(&m, &evaluate_word(&rep, &u).unwrap().mul(&evaluate_word(&rep, &v).unwrap()).unwrap());
        prop_assert!(m.determinant().abs().is_one());
        prop_assert_eq!(&evaluate_word(&rep, &free_reduce(&uv)).unwrap(), &m);
        prop_assert_eq!(free_reduce(&free_reduce(&uv)), free_reduce(&uv));
    }

    #[test]
    fn digits_json_round_trip(n in 2usize..7, b in prop::collection::vec(prop::collection::vec(0i64..1_000_000, 6), 0..10), terminated: bool) {
        let b: Vec<Vec<i64>> = b.iter().map(|x| x[..n - 1].to_vec()).collect();
        let s = DigitSequence::new(n, b.iter().map(|x| DigitBlock::from_i64(x)).collect(), terminated && !b.is_empty()).unwrap();
        let text = to_json(&DigitsDoc::from_sequence(&s)).unwrap();
        let back: DigitsDoc = from_json(&text).unwrap();
        prop_assert_eq!(back.to_sequence().unwrap(), s);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}
