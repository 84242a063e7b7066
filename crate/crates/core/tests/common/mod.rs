#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use quon::permutations::{enumerate, RepCoefficients};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random rational coefficients over `S_n` with small numerators and
/// denominators; roughly a quarter of the entries are zero.
pub fn random_rep(n: usize, rng: &mut ChaCha8Rng, label: &str) -> RepCoefficients {
    let perms = enumerate(n).unwrap();
    loop {
        let coeffs: Vec<_> = perms
            .iter()
            .map(|p| {
                let num = if rng.gen_bool(0.25) { 0 } else { rng.gen_range(-4i64..=4) };
                let den = rng.gen_range(1i64..=3);
                (p.clone(), BigRational::new(BigInt::from(num), BigInt::from(den)))
            })
            .collect();
        if let Ok(rep) = RepCoefficients::new(n, coeffs, label) {
            return rep;
        }
    }
}

/// Every set partition of `{0..m-1}` as a restricted-growth string.
pub fn set_partitions(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |x| x + 1);
        for b in 0..=next {
            prefix.push(b);
            go(prefix, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}
