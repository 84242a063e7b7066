//! Place permutations of `S_n`, inversion numbers and representation
//! coefficients `c_r(P)`.
//!
//! A [`Permutation`] acts on operator *slots*: applying `P` to a word
//! `(w_1, ..., w_n)` yields `(w_{P(1)}, ..., w_{P(n)})`. This stays well
//! defined when several slots carry the same mode label.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{QuonError, Result};
use crate::qpoly::parse_rational;

/// Default cap on `n` for `n!`-sized enumerations.
pub const DEFAULT_ENUM_CAP: usize = 8;

/// Environment variable that overrides [`DEFAULT_ENUM_CAP`] for the CLI.
pub const ENUM_CAP_ENV: &str = "QUON_ENUM_CAP";

/// A bijection on `{0..n-1}` stored in one-line notation (0-based internally,
/// rendered 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(QuonError::contract(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(Self { images })
    }

    /// Builds from 1-based one-line notation, e.g. `[3, 2, 1]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(QuonError::contract("one-line notation is 1-based"));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based image of slot `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of pairs `i < j` with `P(i) > P(j)`; also the minimum number of
    /// crossings in the contraction diagram of `P`.
    pub fn inversion_number(&self) -> usize {
        let n = self.images.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `(-1)^i(P)` as `+1` or `-1`.
    pub fn sign(&self) -> i32 {
        if self.inversion_number().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            images[p] = i;
        }
        Self { images }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    /// Place action on a word: slot `k` of the result holds `word[P(k)]`.
    pub fn permute_slots<T: Clone>(&self, word: &[T]) -> Vec<T> {
        assert_eq!(self.len(), word.len(), "permutation and word differ in length");
        self.images.iter().map(|&i| word[i].clone()).collect()
    }

    /// Cycle lengths in non-increasing order (a partition of `n`).
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = QuonError;

    /// Parses 1-based one-line notation such as `"3,2,1"` or `"(3,2,1)"`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let images = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| QuonError::parse(None, format!("bad permutation {s:?}")))?;
        Self::from_one_based(&images).map_err(|e| QuonError::parse(None, e.to_string()))
    }
}

/// All `n!` permutations in lexicographic order, refusing when `n > cap`.
pub fn enumerate_with_cap(n: usize, cap: usize) -> Result<Vec<Permutation>> {
    if n > cap {
        return Err(QuonError::CapExceeded { n, cap });
    }
    let mut out = Vec::with_capacity((1..=n).product());
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation {
            images: current.clone(),
        });
        if !next_lexicographic(&mut current) {
            break;
        }
    }
    Ok(out)
}

/// [`enumerate_with_cap`] with [`DEFAULT_ENUM_CAP`].
pub fn enumerate(n: usize) -> Result<Vec<Permutation>> {
    enumerate_with_cap(n, DEFAULT_ENUM_CAP)
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Which preset representation to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Symmetric,
    Antisymmetric,
}

/// Coefficients `c_r(P)` selecting a combination of place-permuted words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCoefficients {
    n: usize,
    coeffs: BTreeMap<Permutation, BigRational>,
    label: String,
}

impl RepCoefficients {
    /// Validates degrees and drops zero entries; at least one coefficient
    /// must survive.
    pub fn new(
        n: usize,
        coeffs: impl IntoIterator<Item = (Permutation, BigRational)>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(QuonError::contract("representation degree must be positive"));
        }
        let mut map = BTreeMap::new();
        for (p, c) in coeffs {
            if p.len() != n {
                return Err(QuonError::contract(format!(
                    "permutation {p} is not in S_{n}"
                )));
            }
            if map.insert(p.clone(), c).is_some() {
                return Err(QuonError::contract(format!("duplicate coefficient for {p}")));
            }
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(QuonError::contract("representation has no nonzero coefficient"));
        }
        Ok(Self {
            n,
            coeffs: map,
            label: label.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Nonzero coefficients in lexicographic permutation order.
    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, p: &Permutation) -> BigRational {
        self.coeffs.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Reads the text format: one `perm<TAB>coefficient` per line with the
    /// permutation in 1-based one-line notation and the coefficient as `p`
    /// or `p/q`. `#` starts a comment; an optional `label<TAB>name` line
    /// names the representation.
    pub fn parse(text: &str) -> Result<Self> {
        let mut label = String::from("custom");
        let mut entries = Vec::new();
        let mut n = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(QuonError::parse(Some(lineno), "expected two tab-separated fields"));
            }
            if fields[0] == "label" {
                label = fields[1].to_string();
                continue;
            }
            let perm: Permutation = fields[0]
                .parse()
                .map_err(|e: QuonError| QuonError::parse(Some(lineno), e.to_string()))?;
            let coeff = parse_rational(fields[1])
                .ok_or_else(|| QuonError::parse(Some(lineno), format!("bad coefficient {:?}", fields[1])))?;
            match n {
                None => n = Some(perm.len()),
                Some(m) if m != perm.len() => {
                    return Err(QuonError::parse(Some(lineno), "permutations of mixed degree"));
                }
                _ => {}
            }
            entries.push((perm, coeff));
        }
        let n = n.ok_or_else(|| QuonError::parse(None, "representation file has no coefficients"))?;
        Self::new(n, entries, label)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Multiplies every coefficient by the least common denominator, giving
    /// integer coefficients and the scale that was applied.
    pub fn integer_scaled(&self) -> (Vec<(Permutation, BigInt)>, BigInt) {
        use num_integer::Integer;
        let lcm = self
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled = self
            .coeffs
            .iter()
            .map(|(p, c)| (p.clone(), (c * BigRational::from_integer(lcm.clone())).to_integer()))
            .collect();
        (scaled, lcm)
    }
}

/// `c(P) = 1` (symmetric) or `c(P) = (-1)^i(P)` (antisymmetric) over all of `S_n`.
pub fn preset_rep(n: usize, kind: RepKind) -> Result<RepCoefficients> {
    preset_rep_with_cap(n, kind, DEFAULT_ENUM_CAP)
}

/// [`preset_rep`] with an explicit enumeration cap.
pub fn preset_rep_with_cap(n: usize, kind: RepKind, cap: usize) -> Result<RepCoefficients> {
    let perms = enumerate_with_cap(n, cap)?;
    let coeffs = perms.into_iter().map(|p| {
        let c = match kind {
            RepKind::Symmetric => 1,
            RepKind::Antisymmetric => p.sign(),
        };
        (p, BigRational::from_integer(BigInt::from(c)))
    });
    let label = match kind {
        RepKind::Symmetric => "symmetric",
        RepKind::Antisymmetric => "antisymmetric",
    };
    RepCoefficients::new(n, coeffs, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(perm(&[1, 2, 3]).inversion_number(), 0);
        assert_eq!(perm(&[2, 1]).inversion_number(), 1);
        assert_eq!(perm(&[3, 2, 1]).inversion_number(), 3);
    }

    #[test]
    fn enumerate_sizes_and_order() {
        assert_eq!(enumerate(1).unwrap(), vec![perm(&[1])]);
        let s3 = enumerate(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(s3.windows(2).all(|w| w[0] < w[1]), "lexicographic");
        assert_eq!(s3[0], perm(&[1, 2, 3]));
        assert_eq!(s3[5], perm(&[3, 2, 1]));
        assert_eq!(enumerate(8).unwrap().len(), 40320);
        assert!(matches!(enumerate(9), Err(QuonError::CapExceeded { n: 9, cap: 8 })));
        assert_eq!(enumerate_with_cap(0, 8).unwrap().len(), 1);
    }

    #[test]
    fn inversion_invariant_under_inverse_exhaustive() {
        for n in 1..=6 {
            for p in enumerate(n).unwrap() {
                assert_eq!(p.inversion_number(), p.inverse().inversion_number(), "{p}");
                assert_eq!(p.compose(&p.inverse()), Permutation::identity(n));
            }
        }
    }

    #[test]
    fn sign_is_a_homomorphism_exhaustive() {
        for n in 1..=5 {
            let all = enumerate(n).unwrap();
            for p in &all {
                for q in &all {
                    assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
                }
            }
        }
    }

    #[test]
    fn place_action() {
        let p = perm(&[2, 3, 1]);
        assert_eq!(p.permute_slots(&['a', 'b', 'c']), vec!['b', 'c', 'a']);
        // acting twice composes
        let q = perm(&[3, 1, 2]);
        let word = ['a', 'b', 'c'];
        assert_eq!(q.permute_slots(&p.permute_slots(&word)), p.compose(&q).permute_slots(&word));
    }

    #[test]
    fn cycle_types() {
        assert_eq!(perm(&[1, 2, 3, 4]).cycle_type(), vec![1, 1, 1, 1]);
        assert_eq!(perm(&[2, 1, 4, 3]).cycle_type(), vec![2, 2]);
        assert_eq!(perm(&[2, 3, 4, 1]).cycle_type(), vec![4]);
        assert_eq!(perm(&[2, 3, 1, 4]).cycle_type(), vec![3, 1]);
    }

    #[test]
    fn presets() {
        let one = BigRational::one();
        let sym = preset_rep(2, RepKind::Symmetric).unwrap();
        assert_eq!(sym.coeff(&perm(&[1, 2])), one);
        assert_eq!(sym.coeff(&perm(&[2, 1])), one);
        let anti = preset_rep(2, RepKind::Antisymmetric).unwrap();
        assert_eq!(anti.coeff(&perm(&[2, 1])), -one.clone());
        let anti3 = preset_rep(3, RepKind::Antisymmetric).unwrap();
        assert_eq!(anti3.coeff(&perm(&[3, 2, 1])), -one.clone());
        assert_eq!(anti3.coeff(&perm(&[2, 3, 1])), one);
        assert_eq!(anti3.iter().count(), 6);
    }

    #[test]
    fn rep_validation() {
        assert!(RepCoefficients::new(2, vec![(perm(&[1, 2]), BigRational::zero())], "z").is_err());
        assert!(RepCoefficients::new(2, vec![(perm(&[1, 2, 3]), BigRational::one())], "x").is_err());
        assert!(RepCoefficients::new(0, Vec::new(), "x").is_err());
    }

    #[test]
    fn rep_file_parse() {
        let text = "# mixed\nlabel\tmine\n1,2,3\t1/2\n(2,1,3)\t-3\n3,2,1\t0\n";
        let rep = RepCoefficients::parse(text).unwrap();
        assert_eq!(rep.n(), 3);
        assert_eq!(rep.label(), "mine");
        assert_eq!(rep.iter().count(), 2);
        let (scaled, lcm) = rep.integer_scaled();
        assert_eq!(lcm, BigInt::from(2));
        assert_eq!(scaled[1].1, BigInt::from(-6));

        let err = RepCoefficients::parse("1,2\t1\n1,2,3\t1\n").unwrap_err();
        assert!(matches!(err, QuonError::Parse { line: Some(2), .. }));
        assert!(RepCoefficients::parse("1,1\t1\n").unwrap_err().is_parse_error());
        assert!(RepCoefficients::parse("# nothing\n").is_err());
    }

    #[test]
    fn display_round_trip() {
        let p = perm(&[3, 1, 2]);
        assert_eq!(p.to_string(), "(3,1,2)");
        assert_eq!(p.to_string().parse::<Permutation>().unwrap(), p);
    }
}
