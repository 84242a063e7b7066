//! Vacuum scalar products of creation-operator words.
//!
//! `(a†(k_1)…a†(k_n)|0⟩, a†(l_1)…a†(l_n)|0⟩)` is the sum over bijections
//! `R` of `q^i(R) ∏ δ(k_i, l_R(i))`. Two independent evaluators exist:
//!
//! * [`q_permanent`]: dynamic programming over the set of already-matched
//!   right-hand slots, `O(2^n · n)` polynomial updates;
//! * [`oracle_scalar_product`]: explicit enumeration of all `n!` bijections
//!   with a direct inversion count.
//!
//! Both return integer-coefficient polynomials; internally they count
//! matchings per inversion number and only convert at the end.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{QuonError, Result};
use crate::permutations::enumerate_with_cap;
use crate::qpoly::QPolynomial;

/// Default cap on the dimension accepted by [`q_permanent`].
pub const DEFAULT_QPERM_CAP: usize = 16;
/// Largest dimension the DP can represent (`20!` still fits in `u64` counts).
pub const MAX_QPERM_DIM: usize = 20;
/// Largest word length the enumeration oracle will accept.
pub const ORACLE_CAP: usize = 9;

/// A single-particle mode. Two labels contract to `1` iff both fields match.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub composite_tag: Option<String>,
    pub internal: String,
}

impl ModeLabel {
    pub fn new(internal: impl Into<String>) -> Self {
        Self {
            composite_tag: None,
            internal: internal.into(),
        }
    }

    pub fn tagged(tag: impl Into<String>, internal: impl Into<String>) -> Self {
        Self {
            composite_tag: Some(tag.into()),
            internal: internal.into(),
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.composite_tag {
            Some(tag) => write!(f, "{tag}:{}", self.internal),
            None => f.write_str(&self.internal),
        }
    }
}

impl FromStr for ModeLabel {
    type Err = QuonError;

    /// `"k1"` is an untagged label, `"p1:2"` is internal index `2` of composite `p1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let ok = |t: &str| !t.is_empty() && !t.contains([',', ':']) && !t.chars().any(char::is_whitespace);
        match s.split_once(':') {
            None if ok(s) => Ok(Self::new(s)),
            Some((tag, internal)) if ok(tag) && ok(internal) => Ok(Self::tagged(tag, internal)),
            _ => Err(QuonError::parse(None, format!("bad mode label {s:?}"))),
        }
    }
}

/// An ordered product of creation operators acting on the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OperatorWord(pub Vec<ModeLabel>);

impl OperatorWord {
    pub fn new(labels: Vec<ModeLabel>) -> Self {
        Self(labels)
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation: `self` operators first (leftmost), then `other`.
    pub fn concat(&self, other: &OperatorWord) -> OperatorWord {
        let mut labels = self.0.clone();
        labels.extend(other.0.iter().cloned());
        OperatorWord(labels)
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for OperatorWord {
    type Err = QuonError;

    /// Comma-separated labels; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::default());
        }
        s.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(Self)
    }
}

/// Square 0/1 contraction matrix; row `i` bit `j` is `δ(left_i, right_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMatrix {
    rows: Vec<u64>,
}

impl DeltaMatrix {
    /// Builds from explicit 0/1 rows, rejecting non-square or non-binary input.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if n > 64 {
            return Err(QuonError::Unsupported(format!("matrix dimension {n} exceeds 64")));
        }
        let mut bits = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(QuonError::contract(format!(
                    "matrix is not square: row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            let mut mask = 0u64;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => mask |= 1 << j,
                    _ => return Err(QuonError::contract(format!("entry ({}, {}) is not 0/1", i + 1, j + 1))),
                }
            }
            bits.push(mask);
        }
        Ok(Self { rows: bits })
    }

    /// The contraction pattern of two equal-length words.
    pub fn from_words(left: &OperatorWord, right: &OperatorWord) -> Result<Self> {
        if left.len() != right.len() {
            return Err(QuonError::contract("words differ in length"));
        }
        if left.len() > 64 {
            return Err(QuonError::Unsupported("words longer than 64 operators".into()));
        }
        Ok(Self {
            rows: delta_rows(left.labels(), right.labels()),
        })
    }

    /// Parses tab-separated 0/1 rows (blank lines and `#` comments ignored).
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split('\t')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| QuonError::parse(Some(idx + 1), "matrix entries must be 0 or 1"))?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.rows
    }
}

pub(crate) fn delta_rows<T: PartialEq>(left: &[T], right: &[T]) -> Vec<u64> {
    left.iter()
        .map(|l| {
            right
                .iter()
                .enumerate()
                .filter(|(_, r)| *r == l)
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

fn add_shifted(target: &mut Vec<u64>, src: &[u64], shift: usize) {
    if target.len() < src.len() + shift {
        target.resize(src.len() + shift, 0);
    }
    for (t, s) in target[shift..].iter_mut().zip(src) {
        *t += s;
    }
}

fn has_empty_line(rows: &[u64]) -> bool {
    let n = rows.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rows.contains(&0) || rows.iter().fold(0, |a, &r| a | r) != full
}

type Layer = HashMap<u64, Vec<u64>>;

/// Advances the DP by one row: every partial matching in `layer` is extended
/// by each free column of `row`, picking up one inversion per used column
/// to the right of the new one.
fn step(layer: &Layer, row: u64) -> Layer {
    let mut next: Layer = HashMap::with_capacity(layer.len() * 2);
    for (&mask, counts) in layer {
        let mut free = row & !mask;
        while free != 0 {
            let j = free.trailing_zeros();
            free &= free - 1;
            let crossings = (mask >> j >> 1).count_ones() as usize;
            add_shifted(next.entry(mask | 1 << j).or_default(), counts, crossings);
        }
    }
    next
}

fn collapse(layer: Layer) -> Vec<u64> {
    let mut out = Vec::new();
    for counts in layer.values() {
        add_shifted(&mut out, counts, 0);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Number of bijections per inversion count, by subset DP over used columns.
pub(crate) fn q_permanent_counts(rows: &[u64]) -> Vec<u64> {
    if has_empty_line(rows) {
        return Vec::new();
    }
    let mut layer: Layer = HashMap::from([(0u64, vec![1u64])]);
    for &row in rows {
        layer = step(&layer, row);
        if layer.is_empty() {
            return Vec::new();
        }
    }
    collapse(layer)
}

/// Matching counts of a `2m x 2m` matrix split by block structure:
/// `[direct, exchange, cross]`, where direct matchings send the first `m`
/// rows onto the first `m` columns, exchange matchings send them onto the
/// last `m` columns, and every other matching is cross.
pub(crate) fn classified_counts(rows: &[u64]) -> [Vec<u64>; 3] {
    let dim = rows.len();
    assert!(dim.is_multiple_of(2), "block classification needs an even dimension");
    let half = dim / 2;
    if has_empty_line(rows) {
        return Default::default();
    }
    let low: u64 = (1u64 << half) - 1;
    let high: u64 = low << half;
    let mut layer: Layer = HashMap::from([(0u64, vec![1u64])]);
    for &row in &rows[..half] {
        layer = step(&layer, row);
    }
    let mut classes: [Layer; 3] = Default::default();
    for (mask, counts) in layer {
        let class = if mask == low {
            0
        } else if mask == high {
            1
        } else {
            2
        };
        classes[class].insert(mask, counts);
    }
    classes.map(|mut l| {
        for &row in &rows[half..] {
            if l.is_empty() {
                break;
            }
            l = step(&l, row);
        }
        collapse(l)
    })
}

/// `Σ_R q^i(R) ∏_i m[i, R(i)]` with the default dimension cap.
pub fn q_permanent(m: &DeltaMatrix) -> Result<QPolynomial> {
    q_permanent_with_cap(m, DEFAULT_QPERM_CAP)
}

pub fn q_permanent_with_cap(m: &DeltaMatrix, cap: usize) -> Result<QPolynomial> {
    let cap = cap.min(MAX_QPERM_DIM);
    if m.dim() > cap {
        return Err(QuonError::CapExceeded { n: m.dim(), cap });
    }
    Ok(QPolynomial::from_counts(&q_permanent_counts(&m.rows)))
}

/// Scalar product via the q-permanent. Words of different length give `0`:
/// a leftover annihilator reaches the vacuum.
pub fn scalar_product(left: &OperatorWord, right: &OperatorWord) -> Result<QPolynomial> {
    if left.len() != right.len() {
        return Ok(QPolynomial::zero());
    }
    q_permanent(&DeltaMatrix::from_words(left, right)?)
}

/// Enumerates all `n!` bijections of `m`, in parallel over the permutation
/// list, and tallies those with all entries `1` by inversion number.
pub fn oracle_q_permanent(m: &DeltaMatrix) -> Result<QPolynomial> {
    let n = m.dim();
    let perms = enumerate_with_cap(n, ORACLE_CAP)?;
    let counts = perms
        .par_iter()
        .filter(|r| (0..n).all(|i| m.get(i, r.image(i))))
        .fold(Vec::new, |mut acc: Vec<u64>, r| {
            let k = r.inversion_number();
            if acc.len() <= k {
                acc.resize(k + 1, 0);
            }
            acc[k] += 1;
            acc
        })
        .reduce(Vec::new, |mut a, b| {
            add_shifted(&mut a, &b, 0);
            a
        });
    Ok(QPolynomial::from_counts(&counts))
}

/// Ground-truth scalar product by explicit enumeration (length ≤ 9).
pub fn oracle_scalar_product(left: &OperatorWord, right: &OperatorWord) -> Result<QPolynomial> {
    if left.len() > ORACLE_CAP || right.len() > ORACLE_CAP {
        return Err(QuonError::CapExceeded {
            n: left.len().max(right.len()),
            cap: ORACLE_CAP,
        });
    }
    if left.len() != right.len() {
        return Ok(QPolynomial::zero());
    }
    oracle_q_permanent(&DeltaMatrix::from_words(left, right)?)
}
