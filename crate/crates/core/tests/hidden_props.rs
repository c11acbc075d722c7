use proptest::prelude::*;
use rand::Rng;

use qmarkov::hidden::{
    bell_check, five_state_example, is_jointly_observable, joint, observe_distribution,
    product_expectation,
};
use qmarkov::random::{nonnegative_state, seeded, sign_table};
use qmarkov::{HiddenStateSpace, InformationFunction, MarkovDensity, MarkovState, Rational};

fn table(space: &HiddenStateSpace, rows: &[Vec<i8>]) -> Vec<InformationFunction> {
    rows.iter()
        .map(|r| InformationFunction::from_signs(space.clone(), r).unwrap())
        .collect()
}

/// Uniform draws on `[-0.5, 1)` shifted to sum to 1; often signed.
fn signed_state(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..1.0)).collect();
    let s: f64 = q.iter().sum();
    let shift = (1.0 - s) / n as f64;
    for x in &mut q {
        *x += shift;
    }
    q
}

#[test]
fn bell_holds_for_nonnegative_states() {
    let mut rng = seeded(404);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=8);
        let space = HiddenStateSpace::numbered(n).unwrap();
        let fs = table(&space, &sign_table(n, 3, &mut rng));
        let raw = nonnegative_state(n, &mut rng);
        let q = MarkovState::new(raw.clone()).unwrap();
        let r = bell_check(&fs[0], &fs[1], &fs[2], &q, 1e-12).unwrap();
        assert!(r.satisfied, "trial {trial}: {r:?}");
        assert!(r.jointly_observable);
        // pointwise oracle: |xy − yz| ≤ 1 − xz holds at every hidden state
        let v = |f: &InformationFunction| f.numeric_values::<f64>().unwrap();
        let (x, y, z) = (v(&fs[0]), v(&fs[1]), v(&fs[2]));
        let e = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .zip(&raw)
                .map(|((p, q), w)| p * q * w)
                .sum::<f64>()
        };
        assert!((r.e_xy - e(&x, &y)).abs() <= 1e-12);
        assert!((r.e_yz - e(&y, &z)).abs() <= 1e-12);
        assert!((r.e_xz - e(&x, &z)).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn joint_observability_passes_to_subcollections(n in 1usize..7, k in 1usize..5, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let space = HiddenStateSpace::numbered(n).unwrap();
        let fs = table(&space, &sign_table(n, k, &mut rng));
        let q = MarkovState::new(signed_state(n, &mut rng)).unwrap();
        let refs: Vec<&InformationFunction> = fs.iter().collect();
        if is_jointly_observable(&refs, &q, 1e-12).unwrap() {
            for mask in 1u32..(1 << k) {
                let sub: Vec<&InformationFunction> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| &fs[i]).collect();
                prop_assert!(is_jointly_observable(&sub, &q, 1e-12).unwrap());
            }
            for a in &fs {
                for b in &fs {
                    prop_assert!(product_expectation(a, b, &q, 1e-12).is_ok());
                }
            }
        }
    }

    #[test]
    fn outcome_values_partition_the_state(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let space = HiddenStateSpace::numbered(n).unwrap();
        let fs = table(&space, &sign_table(n, 2, &mut rng));
        let q = MarkovState::new(signed_state(n, &mut rng)).unwrap();
        for f in &fs {
            prop_assert!((observe_distribution(f, &q).unwrap().total() - 1.0).abs() <= 1e-12);
        }
        let refs: Vec<&InformationFunction> = fs.iter().collect();
        let pair = observe_distribution(&joint(&refs).unwrap(), &q).unwrap();
        prop_assert_eq!(pair.values.len(), 4);
        prop_assert!((pair.total() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn diagonal_povm_agrees_with_counting(n in 1usize..9, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let space = HiddenStateSpace::numbered(n).unwrap();
        let f = &table(&space, &sign_table(n, 1, &mut rng))[0];
        let raw = signed_state(n, &mut rng);
        let q = MarkovState::new(raw.clone()).unwrap();
        let direct = observe_distribution(f, &q).unwrap();
        let density = MarkovDensity::from_real_diagonal(&raw).unwrap();
        let via_povm = f.diagonal_povm::<f64>().outcome_distribution(&density).unwrap();
        for (a, b) in direct.values.iter().zip(&via_povm.values) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn five_state_violation_is_exact_over_rationals() {
    let ex = five_state_example::<Rational>();
    let r = bell_check(&ex.x, &ex.y, &ex.z, &ex.q, Rational::from_integer(0)).unwrap();
    assert_eq!(r.e_xy, Rational::from_integer(1));
    assert_eq!(r.e_yz, Rational::new(-1, 3));
    assert_eq!(r.e_xz, Rational::from_integer(1));
    assert_eq!(r.lhs, Rational::new(4, 3));
    assert_eq!(r.rhs, Rational::from_integer(0));
    assert!(!r.satisfied);
    assert!(r.pairwise_observable);
    assert!(!r.jointly_observable);
    let triple = observe_distribution(&joint(&[&ex.x, &ex.y, &ex.z]).unwrap(), &ex.q).unwrap();
    assert!(triple.values.contains(&Rational::new(-1, 3)));
}

#[test]
fn identical_functions_give_equality() {
    let mut rng = seeded(7);
    let space = HiddenStateSpace::numbered(5).unwrap();
    let f = &table(&space, &sign_table(5, 1, &mut rng))[0];
    let q = MarkovState::new(signed_state(5, &mut rng)).unwrap();
    let r = bell_check(f, f, f, &q, 1e-12).unwrap();
    assert!(r.lhs.abs() <= 1e-12 && r.rhs.abs() <= 1e-12 && r.satisfied);
}
