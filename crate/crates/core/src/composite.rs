//! Statistics of bound states made of `n` identical quons.
//!
//! Each constituent of a composite with tag `t` carries the mode
//! `(t, internal_i)`, so the wavefunction is localized and only the operator
//! algebra matters. For two composites on each side of the scalar product,
//! every contraction is classified by where the first block of operators
//! goes: back onto the first block (direct), onto the second block
//! (exchange), or split across both (cross).

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{QuonError, Result};
use crate::fock::{build_state, normalization_from_coefficients, StateVector};
use crate::permutations::{enumerate_with_cap, Permutation, RepCoefficients};
use crate::qpoly::QPolynomial;
use crate::wick::{classified_counts, delta_rows, ModeLabel};

/// Largest constituent count for two-composite products (`2n = 8` operators
/// per side, `(n!)^4` word pairs).
pub const COMPOSITE_MAX_N: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeSpec {
    n: usize,
    internal_labels: Vec<String>,
    rep: RepCoefficients,
}

impl CompositeSpec {
    /// Internal labels default to `"1"..="n"`.
    pub fn new(rep: RepCoefficients) -> Self {
        let internal_labels = (1..=rep.n()).map(|i| i.to_string()).collect();
        Self {
            n: rep.n(),
            internal_labels,
            rep,
        }
    }

    pub fn with_labels(rep: RepCoefficients, internal_labels: Vec<String>) -> Result<Self> {
        if internal_labels.len() != rep.n() {
            return Err(QuonError::contract(format!(
                "{} internal labels for {} constituents",
                internal_labels.len(),
                rep.n()
            )));
        }
        let mut sorted = internal_labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != internal_labels.len() {
            return Err(QuonError::contract("internal labels must be distinct"));
        }
        Ok(Self {
            n: rep.n(),
            internal_labels,
            rep,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &RepCoefficients {
        &self.rep
    }

    pub fn labels_for(&self, tag: &str) -> Vec<ModeLabel> {
        self.internal_labels
            .iter()
            .map(|i| ModeLabel::tagged(tag, i.clone()))
            .collect()
    }

    /// The composite's normalization polynomial.
    pub fn normalization(&self) -> QPolynomial {
        normalization_from_coefficients(&self.rep)
    }
}

/// A two-composite scalar product split by contraction class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCompositeResult {
    pub n: usize,
    pub direct: QPolynomial,
    pub exchange: QPolynomial,
    pub cross: QPolynomial,
}

impl TwoCompositeResult {
    pub fn total(&self) -> QPolynomial {
        &(&self.direct + &self.exchange) + &self.cross
    }
}

/// `Σ_P c_r(P) a†(tag, y_P1) … a†(tag, y_Pn)`.
pub fn composite_word(spec: &CompositeSpec, tag: &str) -> Result<StateVector> {
    build_state(&spec.labels_for(tag), &spec.rep)
}

fn pair_state(spec: &CompositeSpec, tags: (&str, &str)) -> Result<StateVector> {
    Ok(composite_word(spec, tags.0)?.concat(&composite_word(spec, tags.1)?))
}

fn check_size(spec: &CompositeSpec) -> Result<()> {
    if spec.n > COMPOSITE_MAX_N {
        return Err(QuonError::Unsupported(format!(
            "two-composite products are limited to n <= {COMPOSITE_MAX_N}, got {}",
            spec.n
        )));
    }
    Ok(())
}

/// Maps every label to a small integer so word comparisons are cheap.
struct Interner(HashMap<ModeLabel, u32>);

impl Interner {
    fn intern(&mut self, state: &StateVector) -> Vec<(Vec<u32>, BigRational)> {
        state
            .terms()
            .iter()
            .map(|(w, c)| {
                let ids = w
                    .labels()
                    .iter()
                    .map(|l| {
                        let next = self.0.len() as u32;
                        *self.0.entry(l.clone()).or_insert(next)
                    })
                    .collect();
                (ids, c.clone())
            })
            .collect()
    }
}

type ClassSums = [Vec<BigRational>; 3];

fn add_weighted(target: &mut Vec<BigRational>, counts: &[u64], weight: &BigRational) {
    if target.len() < counts.len() {
        target.resize(counts.len(), BigRational::zero());
    }
    for (t, &c) in target.iter_mut().zip(counts) {
        if c != 0 {
            *t += weight * BigRational::from_integer(c.into());
        }
    }
}

fn merge(mut a: ClassSums, b: ClassSums) -> ClassSums {
    for (ta, tb) in a.iter_mut().zip(b) {
        if ta.len() < tb.len() {
            ta.resize(tb.len(), BigRational::zero());
        }
        for (x, y) in ta.iter_mut().zip(tb) {
            *x += y;
        }
    }
    a
}

fn into_result(n: usize, sums: ClassSums) -> TwoCompositeResult {
    let [direct, exchange, cross] = sums.map(QPolynomial::from_coeffs);
    TwoCompositeResult {
        n,
        direct,
        exchange,
        cross,
    }
}

/// Classified scalar product of `b†(t1) b†(t2)|0⟩` with `b†(u1) b†(u2)|0⟩`
/// for arbitrary tags (coinciding tags allowed), evaluated by running the
/// block-classifying q-permanent DP on every word pair.
pub fn classified_pair_product(
    spec: &CompositeSpec,
    left_tags: (&str, &str),
    right_tags: (&str, &str),
) -> Result<TwoCompositeResult> {
    check_size(spec)?;
    let mut interner = Interner(HashMap::new());
    let left = interner.intern(&pair_state(spec, left_tags)?);
    let right = interner.intern(&pair_state(spec, right_tags)?);
    let sums = left
        .par_iter()
        .map(|(lw, lc)| {
            let mut local: ClassSums = Default::default();
            for (rw, rc) in &right {
                let classes = classified_counts(&delta_rows(lw, rw));
                if classes.iter().all(Vec::is_empty) {
                    continue;
                }
                for (target, counts) in local.iter_mut().zip(&classes) {
                    add_weighted(target, counts, rc);
                }
            }
            for target in local.iter_mut() {
                for x in target.iter_mut() {
                    *x *= lc;
                }
            }
            local
        })
        .reduce(ClassSums::default, merge);
    Ok(into_result(spec.n, sums))
}

/// Reference evaluation of [`classified_pair_product`]: enumerates all
/// `(2n)!` matchings `R`, classifies each from its block structure, and for
/// every left word looks up the unique right word it contracts with.
pub fn oracle_classified_pair_product(
    spec: &CompositeSpec,
    left_tags: (&str, &str),
    right_tags: (&str, &str),
) -> Result<TwoCompositeResult> {
    check_size(spec)?;
    let n = spec.n;
    let mut interner = Interner(HashMap::new());
    let left = interner.intern(&pair_state(spec, left_tags)?);
    let right: HashMap<Vec<u32>, BigRational> = interner.intern(&pair_state(spec, right_tags)?).into_iter().collect();
    let matchings = enumerate_with_cap(2 * n, 2 * COMPOSITE_MAX_N)?;

    let sums = matchings
        .par_iter()
        .fold(ClassSums::default, |mut acc, r| {
            let first_block: Vec<usize> = (0..n).map(|i| r.image(i)).collect();
            let class = if first_block.iter().all(|&j| j < n) {
                0
            } else if first_block.iter().all(|&j| j >= n) {
                1
            } else {
                2
            };
            let mut amplitude = BigRational::zero();
            let mut target = vec![0u32; 2 * n];
            for (w, cw) in &left {
                for (i, &id) in w.iter().enumerate() {
                    target[r.image(i)] = id;
                }
                if let Some(cv) = right.get(&target) {
                    amplitude += cw * cv;
                }
            }
            if !amplitude.is_zero() {
                let k = r.inversion_number();
                let slot = &mut acc[class];
                if slot.len() <= k {
                    slot.resize(k + 1, BigRational::zero());
                }
                slot[k] += amplitude;
            }
            acc
        })
        .reduce(ClassSums::default, merge);
    Ok(into_result(n, sums))
}

fn check_distinct_tags(left_tags: (&str, &str), right_tags: (&str, &str)) -> Result<()> {
    if left_tags.0 == left_tags.1 || right_tags.0 == right_tags.1 {
        return Err(QuonError::contract(
            "each side must hold two distinct composites (t1 != t2, u1 != u2)",
        ));
    }
    Ok(())
}

/// [`classified_pair_product`] for distinct composites on each side.
pub fn two_composite_scalar(
    spec: &CompositeSpec,
    left_tags: (&str, &str),
    right_tags: (&str, &str),
) -> Result<TwoCompositeResult> {
    check_distinct_tags(left_tags, right_tags)?;
    classified_pair_product(spec, left_tags, right_tags)
}

/// Oracle counterpart of [`two_composite_scalar`].
pub fn oracle_two_composite_scalar(
    spec: &CompositeSpec,
    left_tags: (&str, &str),
    right_tags: (&str, &str),
) -> Result<TwoCompositeResult> {
    check_distinct_tags(left_tags, right_tags)?;
    oracle_classified_pair_product(spec, left_tags, right_tags)
}

/// Both theorem configurations for one composite species.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeCheck {
    pub normalization: QPolynomial,
    /// Targets in the same order: `(p1, p2)` against `(p1, p2)`.
    pub same_order: TwoCompositeResult,
    /// Targets swapped: `(p1, p2)` against `(p2, p1)`.
    pub swapped: TwoCompositeResult,
    /// `k` with `swapped.exchange = q^k · same_order.direct`.
    pub exponent: usize,
}

/// Computes the direct and block-swapped configurations, verifies that the
/// direct part is the squared normalization polynomial, and extracts the
/// power `k` with `exchange = q^k · direct`. Fails with
/// [`QuonError::TheoremViolation`] unless every identity holds and `k = n²`.
pub fn exchange_check(spec: &CompositeSpec) -> Result<ExchangeCheck> {
    let same_order = two_composite_scalar(spec, ("p1", "p2"), ("p1", "p2"))?;
    let swapped = two_composite_scalar(spec, ("p1", "p2"), ("p2", "p1"))?;
    let normalization = spec.normalization();
    let violation = |msg: String| Err(QuonError::TheoremViolation(format!("n={}, rep {}: {msg}", spec.n, spec.rep.label())));

    if same_order.direct != &normalization * &normalization {
        return violation(format!(
            "direct term {} differs from squared normalization {}",
            same_order.direct,
            &normalization * &normalization
        ));
    }
    if !(same_order.exchange.is_zero() && same_order.cross.is_zero()) {
        return violation("same-order configuration has non-direct contributions".into());
    }
    if !(swapped.direct.is_zero() && swapped.cross.is_zero()) {
        return violation("swapped configuration has non-exchange contributions".into());
    }
    let Some(exponent) = swapped.exchange.monomial_ratio(&same_order.direct) else {
        return violation(format!(
            "exchange term {} is not a power of q times the direct term {}",
            swapped.exchange, same_order.direct
        ));
    };
    if exponent != spec.n * spec.n {
        return violation(format!("exchange exponent {exponent} differs from n^2 = {}", spec.n * spec.n));
    }
    Ok(ExchangeCheck {
        normalization,
        same_order,
        swapped,
        exponent,
    })
}

/// The verified exponent `n²` of the composite exchange parameter.
pub fn effective_exponent(spec: &CompositeSpec) -> Result<usize> {
    Ok(exchange_check(spec)?.exponent)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// The constituent parameter at this limit: `+1` or `-1`.
    pub fn q(self) -> i64 {
        match self {
            Statistics::Boson => 1,
            Statistics::Fermion => -1,
        }
    }
}

impl std::fmt::Display for Statistics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

/// Statistics of an `n`-constituent composite whose constituents sit at the
/// Bose (`q = 1`) or Fermi (`q = -1`) point, read off `q^(n²)`.
pub fn weo_limit_check(n: usize, constituents: Statistics) -> Result<Statistics> {
    if n == 0 {
        return Err(QuonError::contract("a composite needs at least one constituent"));
    }
    let value = QPolynomial::q()
        .pow_substitute(n * n)?
        .eval(&BigRational::from_integer(constituents.q().into()));
    Ok(if value == BigRational::from_integer((-1).into()) {
        Statistics::Fermion
    } else {
        Statistics::Boson
    })
}

/// Cross-term contribution: with `shared_tags` all four composites sit on
/// the same tag (maximal overlap); otherwise the distinct same-order
/// configuration, where cross terms vanish.
pub fn cross_term_magnitude(spec: &CompositeSpec, shared_tags: bool) -> Result<QPolynomial> {
    let result = if shared_tags {
        classified_pair_product(spec, ("p", "p"), ("p", "p"))?
    } else {
        classified_pair_product(spec, ("p1", "p2"), ("p1", "p2"))?
    };
    Ok(result.cross)
}

/// The contraction that swaps two blocks of `n` operators while keeping the
/// order inside each block: slot `i < n` goes to `n + i`, slot `n + i` to `i`.
pub fn superline_swap(n: usize) -> Permutation {
    Permutation::from_images((0..2 * n).map(|i| (i + n) % (2 * n)).collect())
        .expect("block swap is a bijection")
}
