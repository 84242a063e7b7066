mod common;

use quon::composite::{
    classified_pair_product, composite_word, oracle_classified_pair_product, two_composite_scalar, CompositeSpec,
};
use quon::permutations::{preset_rep, RepKind};
use quon::QPolynomial;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_rep, set_partitions};

/// All 15 coincidence patterns of the tags `(t1, t2, u1, u2)`.
fn tag_patterns() -> Vec<[String; 4]> {
    set_partitions(4)
        .into_iter()
        .map(|b| [0, 1, 2, 3].map(|i| format!("t{}", b[i])))
        .collect()
}

fn specs(n: usize) -> Vec<CompositeSpec> {
    [RepKind::Symmetric, RepKind::Antisymmetric]
        .into_iter()
        .map(|k| CompositeSpec::new(preset_rep(n, k).unwrap()))
        .collect()
}

#[test]
fn decomposition_identity_against_oracle_all_tag_patterns() {
    for n in 1..=4 {
        for spec in specs(n) {
            for [t1, t2, u1, u2] in tag_patterns() {
                let dp = classified_pair_product(&spec, (&t1, &t2), (&u1, &u2)).unwrap();
                let oracle = oracle_classified_pair_product(&spec, (&t1, &t2), (&u1, &u2)).unwrap();
                assert_eq!(dp, oracle, "n={n} {} tags {t1}{t2}|{u1}{u2}", spec.rep().label());
                if n <= 3 {
                    // the unclassified bilinear product is an independent total
                    let left = composite_word(&spec, &t1).unwrap().concat(&composite_word(&spec, &t2).unwrap());
                    let right = composite_word(&spec, &u1).unwrap().concat(&composite_word(&spec, &u2).unwrap());
                    assert_eq!(dp.total(), left.inner(&right).unwrap());
                }
            }
        }
    }
}

#[test]
fn block_classes_vanish_when_tags_forbid_them() {
    for n in 1..=3 {
        for spec in specs(n) {
            for [t1, t2, u1, u2] in tag_patterns() {
                let r = classified_pair_product(&spec, (&t1, &t2), (&u1, &u2)).unwrap();
                if !(t1 == u1 && t2 == u2) {
                    assert!(r.direct.is_zero());
                }
                if !(t1 == u2 && t2 == u1) {
                    assert!(r.exchange.is_zero());
                }
                // a split block needs both right composites to carry its tag
                let all_equal = t1 == t2 && t2 == u1 && u1 == u2;
                if n == 1 || !all_equal {
                    assert!(r.cross.is_zero(), "n={n} {t1}{t2}|{u1}{u2}");
                }
            }
        }
    }
}

#[test]
fn exchange_law_for_random_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0101);
    for n in 1..=3 {
        for i in 0..6 {
            let spec = CompositeSpec::new(random_rep(n, &mut rng, &format!("r{i}")));
            let direct = two_composite_scalar(&spec, ("a", "b"), ("a", "b")).unwrap();
            let swapped = two_composite_scalar(&spec, ("a", "b"), ("b", "a")).unwrap();
            let p = spec.normalization();
            assert_eq!(direct.direct, &p * &p);
            assert_eq!(swapped.exchange, direct.direct.shift(n * n));
            assert!(direct.cross.is_zero() && swapped.cross.is_zero());
        }
    }
}

#[test]
fn normalized_exchange_amplitude_is_q_to_n_squared() {
    // dividing by P_r^2 at a point where it is nonzero leaves q^(n^2)
    use num_rational::BigRational;
    let q = BigRational::new(1.into(), 3.into());
    for n in 1..=3 {
        for spec in specs(n) {
            let swapped = two_composite_scalar(&spec, ("a", "b"), ("b", "a")).unwrap();
            let p = spec.normalization().eval(&q);
            let ratio = swapped.exchange.eval(&q) / (&p * &p);
            assert_eq!(ratio, QPolynomial::monomial(n * n).eval(&q));
        }
    }
}

#[test]
fn overlap_cross_terms_match_oracle() {
    for n in 2..=3 {
        for spec in specs(n) {
            let dp = classified_pair_product(&spec, ("p", "p"), ("p", "p")).unwrap();
            let oracle = oracle_classified_pair_product(&spec, ("p", "p"), ("p", "p")).unwrap();
            assert_eq!(dp.cross, oracle.cross);
            assert!(!dp.cross.is_zero());
        }
    }
}
