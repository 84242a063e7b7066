//! Multi-quon states built from representation-weighted operator words.

use std::collections::{BTreeMap, HashSet};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::characters::character_table;
use crate::error::{QuonError, Result};
use crate::permutations::{enumerate_with_cap, RepCoefficients, DEFAULT_ENUM_CAP};
use crate::qpoly::QPolynomial;
use crate::wick::{scalar_product, ModeLabel, OperatorWord};

/// A finite linear combination of equal-length operator words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StateVector {
    terms: BTreeMap<OperatorWord, BigRational>,
}

impl StateVector {
    /// Sums duplicate words and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (OperatorWord, BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<OperatorWord, BigRational> = BTreeMap::new();
        let mut len = None;
        for (w, c) in terms {
            match len {
                None => len = Some(w.len()),
                Some(l) if l != w.len() => {
                    return Err(QuonError::contract("state mixes words of different length"));
                }
                _ => {}
            }
            *map.entry(w).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { terms: map })
    }

    pub fn terms(&self) -> &BTreeMap<OperatorWord, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Word length shared by every term (`None` for the zero state).
    pub fn word_len(&self) -> Option<usize> {
        self.terms.keys().next().map(OperatorWord::len)
    }

    /// The product state `self · other |0⟩`: every word of `self` followed by
    /// every word of `other`.
    pub fn concat(&self, other: &StateVector) -> StateVector {
        let mut terms = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                *terms.entry(w1.concat(w2)).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c: &mut BigRational| !c.is_zero());
        StateVector { terms }
    }

    /// Bilinear scalar product through the q-permanent of every word pair.
    pub fn inner(&self, other: &StateVector) -> Result<QPolynomial> {
        let left: Vec<_> = self.terms.iter().collect();
        left.par_iter()
            .map(|(w, cw)| {
                let mut acc = QPolynomial::zero();
                for (v, cv) in &other.terms {
                    let sp = scalar_product(w, v)?;
                    acc += &sp.scale(&(*cw * cv));
                }
                Ok(acc)
            })
            .try_reduce(QPolynomial::zero, |a, b| Ok(a + b))
    }
}

/// `Σ_P c_r(P) · (labels permuted by P)`.
pub fn build_state(labels: &[ModeLabel], rep: &RepCoefficients) -> Result<StateVector> {
    if labels.len() != rep.n() {
        return Err(QuonError::contract(format!(
            "{} labels supplied for a representation of S_{}",
            labels.len(),
            rep.n()
        )));
    }
    StateVector::from_terms(
        rep.iter()
            .map(|(p, c)| (OperatorWord(p.permute_slots(labels)), c.clone())),
    )
}

fn all_distinct(labels: &[ModeLabel]) -> bool {
    labels.iter().collect::<HashSet<_>>().len() == labels.len()
}

/// The normalization polynomial `Σ_{P,P'} c(P) c(P') q^i(P⁻¹P')`, i.e. the
/// squared norm of the unnormalized state on distinct labels. The
/// normalization constant then obeys `|N_r|² = 1 / P_r(q)`.
pub fn normalization_poly(rep: &RepCoefficients, labels: &[ModeLabel]) -> Result<QPolynomial> {
    if labels.len() != rep.n() {
        return Err(QuonError::contract(format!(
            "{} labels supplied for a representation of S_{}",
            labels.len(),
            rep.n()
        )));
    }
    if !all_distinct(labels) {
        return Err(QuonError::Unsupported(
            "normalization polynomial requires distinct labels".into(),
        ));
    }
    Ok(normalization_from_coefficients(rep))
}

/// Label-free form of [`normalization_poly`].
pub(crate) fn normalization_from_coefficients(rep: &RepCoefficients) -> QPolynomial {
    let (scaled, lcm) = rep.integer_scaled();
    let n = rep.n();
    let mut by_inversions = vec![BigInt::zero(); n * (n.saturating_sub(1)) / 2 + 1];
    for (p, cp) in &scaled {
        let p_inv = p.inverse();
        for (p2, cp2) in &scaled {
            by_inversions[p_inv.compose(p2).inversion_number()] += cp * cp2;
        }
    }
    let denom = BigRational::from_integer(&lcm * &lcm);
    QPolynomial::from_coeffs(
        by_inversions
            .into_iter()
            .map(|c| BigRational::from_integer(c) / &denom)
            .collect(),
    )
}

/// Scalar products between every pair of a list of equal-length words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub words: Vec<OperatorWord>,
    pub entries: Vec<Vec<QPolynomial>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn evaluate(&self, q: f64) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j].eval_f64(q))
    }
}

pub fn gram(words: &[OperatorWord]) -> Result<GramMatrix> {
    if let Some(first) = words.first() {
        if words.iter().any(|w| w.len() != first.len()) {
            return Err(QuonError::contract("Gram matrix words must share one length"));
        }
    }
    let entries = words
        .par_iter()
        .map(|wi| words.iter().map(|wj| scalar_product(wi, wj)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(GramMatrix {
        words: words.to_vec(),
        entries,
    })
}

/// All `n!` place-permutations of `labels`, in lexicographic permutation order.
pub fn permutation_basis(labels: &[ModeLabel], cap: usize) -> Result<Vec<OperatorWord>> {
    Ok(enumerate_with_cap(labels.len(), cap)?
        .iter()
        .map(|p| OperatorWord(p.permute_slots(labels)))
        .collect())
}

/// Default PSD tolerance for a matrix of the given dimension.
pub fn default_psd_tolerance(dim: usize) -> f64 {
    1e-10 * dim.max(1) as f64
}

/// Outcome of [`check_psd`].
#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub passed: bool,
    pub min_eigenvalue: f64,
    /// Unit eigenvector of the minimum eigenvalue, reported on failure.
    pub witness: Option<Vec<f64>>,
    /// `q` lies outside `[-1, 1]`, where positivity is not expected.
    pub outside_convexity: bool,
}

/// Evaluates `g` at `q` and tests its minimum eigenvalue against `-tolerance`.
pub fn check_psd(g: &GramMatrix, q: f64, tolerance: f64) -> Result<PsdReport> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(QuonError::contract("tolerance must be positive"));
    }
    if !q.is_finite() {
        return Err(QuonError::contract("q must be finite"));
    }
    let outside_convexity = !(-1.0..=1.0).contains(&q);
    if g.dim() == 0 {
        return Ok(PsdReport {
            passed: true,
            min_eigenvalue: 0.0,
            witness: None,
            outside_convexity,
        });
    }
    let eig = SymmetricEigen::new(g.evaluate(q));
    let (idx, &min_eigenvalue) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let passed = min_eigenvalue >= -tolerance;
    Ok(PsdReport {
        passed,
        min_eigenvalue,
        witness: (!passed).then(|| eig.eigenvectors.column(idx).iter().copied().collect()),
        outside_convexity,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrepWeight {
    pub label: String,
    pub weight: f64,
}

fn canonical_labels(n: usize) -> Vec<ModeLabel> {
    (1..=n).map(|i| ModeLabel::new(format!("y{i}"))).collect()
}

/// Probability of each irreducible representation of `S_n` in the state of
/// `n` quons on distinct modes. The central idempotent
/// `(d_λ/n!) Σ_P χ_λ(P) P` is applied to the canonical word and its squared
/// norm is read off the numerically evaluated Gram matrix of the `n!`
/// permuted words; weights are normalized to sum to one.
pub fn irrep_weights(n: usize, q: f64) -> Result<Vec<IrrepWeight>> {
    let table = character_table(n)?;
    if !(q > -1.0 && q < 1.0) {
        return Err(QuonError::contract(format!("irrep weights need -1 < q < 1, got {q}")));
    }
    let perms = enumerate_with_cap(n, DEFAULT_ENUM_CAP)?;
    let labels = canonical_labels(n);
    let words: Vec<OperatorWord> = perms.iter().map(|p| OperatorWord(p.permute_slots(&labels))).collect();
    let g = gram(&words)?.evaluate(q);
    let order = perms.len() as f64;

    let mut raw = Vec::with_capacity(table.irreps.len());
    for (idx, irrep) in table.irreps.iter().enumerate() {
        let scale = irrep.dimension() as f64 / order;
        let v = nalgebra::DVector::from_iterator(
            perms.len(),
            perms.iter().map(|p| scale * table.character(idx, p) as f64),
        );
        raw.push((irrep.label.clone(), v.dot(&(&g * &v))));
    }
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    Ok(raw
        .into_iter()
        .map(|(label, w)| IrrepWeight { label, weight: w / total })
        .collect())
}

/// Exact weight polynomials `(d_λ/n!) Σ_R χ_λ(R) q^i(R)` for every irrep;
/// they sum to `1` identically.
pub fn irrep_weight_polys(n: usize) -> Result<Vec<(String, QPolynomial)>> {
    let table = character_table(n)?;
    let perms = enumerate_with_cap(n, DEFAULT_ENUM_CAP)?;
    let order = BigInt::from(perms.len());
    Ok(table
        .irreps
        .iter()
        .enumerate()
        .map(|(idx, irrep)| {
            let scale = BigRational::new(BigInt::from(irrep.dimension()), order.clone());
            let poly = perms.iter().fold(QPolynomial::zero(), |acc, r| {
                let chi = BigRational::from_integer(BigInt::from(table.character(idx, r)));
                acc + QPolynomial::monomial(r.inversion_number()).scale(&(&chi * &scale))
            });
            (irrep.label.clone(), poly)
        })
        .collect())
}
