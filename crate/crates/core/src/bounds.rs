//! Propagation of statistics-violation limits from composites to their
//! constituents through `q_composite = q_constituent^(n²)`.
//!
//! A deviation is `ε = 1 - |q|` for both near-Bose and near-Fermi systems,
//! so one law covers both: to first order `ε_constituent = ε_composite / n²`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{QuonError, Result};

/// Bundled limits dataset.
pub const BUNDLED_LIMITS: &str = include_str!("../data/limits.tsv");

/// Above this deviation the linearized propagation is flagged as unreliable.
pub const LINEARIZATION_LIMIT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proximity {
    NearBose,
    NearFermi,
}

impl fmt::Display for Proximity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Proximity::NearBose => "near_bose",
            Proximity::NearFermi => "near_fermi",
        })
    }
}

impl FromStr for Proximity {
    type Err = QuonError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "near_bose" => Ok(Proximity::NearBose),
            "near_fermi" => Ok(Proximity::NearFermi),
            other => Err(QuonError::parse(None, format!("unknown proximity {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRecord {
    pub species: String,
    pub composite_of: String,
    pub n_constituents: u32,
    pub epsilon: f64,
    pub proximity: Proximity,
    pub source: String,
    pub model_dependent: bool,
}

fn check_n(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(QuonError::contract("constituent count must be positive"));
    }
    Ok(f64::from(n) * f64::from(n))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(QuonError::contract(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Whether `ε` is small enough for the first-order law to be trusted.
pub fn first_order_reliable(epsilon: f64) -> bool {
    epsilon <= LINEARIZATION_LIMIT
}

/// `ε / n²`.
pub fn propagate_first_order(epsilon_composite: f64, n: u32) -> Result<f64> {
    check_epsilon(epsilon_composite)?;
    Ok(epsilon_composite / check_n(n)?)
}

/// Inverts `1 - ε_composite = (1 - ε)^(n²)` exactly for the constituent `ε`.
/// For `ε_composite > 1` the composite parameter has flipped sign and a real
/// root exists only for odd `n`.
pub fn propagate_exact(epsilon_composite: f64, n: u32) -> Result<f64> {
    check_epsilon(epsilon_composite)?;
    let n2 = check_n(n)?;
    if epsilon_composite >= 2.0 {
        return Err(QuonError::NoSolution(format!(
            "epsilon {epsilon_composite} >= 2 puts q outside [-1, 1]"
        )));
    }
    if epsilon_composite <= 1.0 {
        // 1 - (1-ε)^(1/n²), written to avoid cancellation for tiny ε
        return Ok(-(f64::ln_1p(-epsilon_composite) / n2).exp_m1());
    }
    if n.is_multiple_of(2) {
        return Err(QuonError::NoSolution(format!(
            "1 - epsilon = {} is negative and has no real root of even order {n}^2",
            1.0 - epsilon_composite
        )));
    }
    Ok(1.0 + (epsilon_composite - 1.0).powf(1.0 / n2))
}

/// The forward map `ε ↦ 1 - (1 - ε)^(n²)` from constituent to composite.
pub fn composite_epsilon(epsilon: f64, n: u32) -> Result<f64> {
    check_epsilon(epsilon)?;
    let n2 = check_n(n)?;
    if epsilon <= 1.0 {
        return Ok(-(n2 * f64::ln_1p(-epsilon)).exp_m1());
    }
    let magnitude = (epsilon - 1.0).powf(n2);
    Ok(if n.is_multiple_of(2) { 1.0 - magnitude } else { 1.0 + magnitude })
}

/// One rejected line of a limits file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineDiagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LineDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn parse_record(line: &str) -> std::result::Result<BoundRecord, String> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if !(6..=7).contains(&fields.len()) {
        return Err(format!("expected 6 or 7 tab-separated fields, found {}", fields.len()));
    }
    let n_constituents: u32 = fields[2]
        .parse()
        .map_err(|_| format!("bad n_constituents {:?}", fields[2]))?;
    let epsilon: f64 = fields[3].parse().map_err(|_| format!("bad epsilon {:?}", fields[3]))?;
    let proximity: Proximity = fields[4].parse().map_err(|e: QuonError| e.to_string())?;
    let model_dependent = match fields.get(6).copied() {
        None | Some("") => false,
        Some(comment) => comment.split_whitespace().any(|t| t == "model_dependent=true"),
    };
    if fields[0].is_empty() || fields[1].is_empty() {
        return Err("species and composite_of must be non-empty".into());
    }
    if n_constituents < 1 {
        return Err("n_constituents must be at least 1".into());
    }
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(format!("epsilon {epsilon} outside (0, 2]"));
    }
    Ok(BoundRecord {
        species: fields[0].to_string(),
        composite_of: fields[1].to_string(),
        n_constituents,
        epsilon,
        proximity,
        source: fields[5].to_string(),
        model_dependent,
    })
}

/// Parses every line, keeping valid records and listing rejected ones.
pub fn parse_limits_lenient(text: &str) -> (Vec<BoundRecord>, Vec<LineDiagnostic>) {
    let mut records = Vec::new();
    let mut rejected = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        match parse_record(line) {
            Ok(r) => records.push(r),
            Err(message) => rejected.push(LineDiagnostic { line: idx + 1, message }),
        }
    }
    (records, rejected)
}

/// Strict parse: any rejected line fails the whole file with all diagnostics.
pub fn parse_limits(text: &str) -> Result<Vec<BoundRecord>> {
    let (records, rejected) = parse_limits_lenient(text);
    if rejected.is_empty() {
        return Ok(records);
    }
    let message = rejected.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    Err(QuonError::parse(rejected.first().map(|d| d.line), message))
}

pub fn ingest_limits(path: &Path) -> Result<Vec<BoundRecord>> {
    parse_limits(&std::fs::read_to_string(path)?)
}

pub fn bundled_limits() -> Vec<BoundRecord> {
    parse_limits(BUNDLED_LIMITS).expect("bundled limits file is valid")
}

/// One descent `composite -> constituent` with `n` constituents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub species: String,
    pub n: u32,
}

/// Parses `"O16>nucleon:16>quark:3"`: a starting species followed by
/// `constituent:n` steps.
pub fn parse_chain(spec: &str) -> Result<(String, Vec<ChainStep>)> {
    let mut parts = spec.split('>').map(str::trim);
    let start = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| QuonError::parse(None, "empty chain"))?;
    let steps = parts
        .map(|p| {
            let (species, n) = p
                .split_once(':')
                .ok_or_else(|| QuonError::parse(None, format!("chain step {p:?} must be species:n")))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| QuonError::parse(None, format!("bad constituent count in {p:?}")))?;
            Ok(ChainStep {
                species: species.trim().to_string(),
                n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((start.to_string(), steps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainLevel {
    pub species: String,
    /// Constituent count of the parent level (`None` at the root).
    pub n_from_parent: Option<u32>,
    pub proximity: Proximity,
    pub epsilon_first_order: f64,
    pub epsilon_exact: f64,
    /// Free-form note on how the proximity was fixed.
    pub parity: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub source: String,
    pub levels: Vec<ChainLevel>,
}

impl ChainReport {
    /// Tab-separated table, one row per level.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("level\tspecies\tn\tproximity\tepsilon_first_order\tepsilon_exact\tparity\n");
        for (i, l) in self.levels.iter().enumerate() {
            let n = l.n_from_parent.map_or("-".to_string(), |n| n.to_string());
            out.push_str(&format!(
                "{i}\t{}\t{n}\t{}\t{:.4e}\t{:.4e}\t{}\n",
                l.species, l.proximity, l.epsilon_first_order, l.epsilon_exact, l.parity
            ));
        }
        out
    }
}

/// Constituent proximity implied by a composite at `parent` made of `n`
/// constituents. An even-`n` near-Bose composite admits either sign; the
/// constituent is then taken near Fermi, as for nucleons in nuclei.
fn constituent_proximity(parent: Proximity, n: u32) -> Result<(Proximity, String)> {
    let odd = n % 2 == 1;
    match (parent, odd) {
        (Proximity::NearFermi, true) => Ok((Proximity::NearFermi, "n odd: near_fermi composite needs near_fermi constituents".into())),
        (Proximity::NearFermi, false) => Err(QuonError::contract(format!(
            "a near_fermi composite cannot have an even number ({n}) of constituents"
        ))),
        (Proximity::NearBose, true) => Ok((Proximity::NearBose, "n odd: near_bose composite needs near_bose constituents".into())),
        (Proximity::NearBose, false) => Ok((Proximity::NearFermi, "n even: sign not fixed by composite, taken near_fermi".into())),
    }
}

/// Resolves the root species from `records` (the tightest limit among
/// model-independent records unless `include_model_dependent`) and
/// propagates its `ε` down each step with both laws.
pub fn derive_chain(
    records: &[BoundRecord],
    start: &str,
    steps: &[ChainStep],
    include_model_dependent: bool,
) -> Result<ChainReport> {
    let root = records
        .iter()
        .filter(|r| r.species == start && (include_model_dependent || !r.model_dependent))
        .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
        .ok_or_else(|| QuonError::Unresolved(format!("no usable limit for species {start:?}")))?;
    if let Some(first) = steps.first() {
        let elementary = root.n_constituents == 1 && root.composite_of == root.species;
        if !elementary && (first.species != root.composite_of || first.n != root.n_constituents) {
            return Err(QuonError::contract(format!(
                "step {}:{} disagrees with the record for {start} ({} x {})",
                first.species, first.n, root.n_constituents, root.composite_of
            )));
        }
    }

    let mut levels = vec![ChainLevel {
        species: root.species.clone(),
        n_from_parent: None,
        proximity: root.proximity,
        epsilon_first_order: root.epsilon,
        epsilon_exact: root.epsilon,
        parity: "-".into(),
    }];
    let mut total_n2: u128 = 1;
    for step in steps {
        let parent = levels.last().expect("root level present");
        let n2 = check_n(step.n)?;
        total_n2 *= n2 as u128;
        let (proximity, parity) = constituent_proximity(parent.proximity, step.n)?;
        levels.push(ChainLevel {
            species: step.species.clone(),
            n_from_parent: Some(step.n),
            proximity,
            epsilon_first_order: root.epsilon / total_n2 as f64,
            epsilon_exact: propagate_exact(parent.epsilon_exact, step.n)?,
            parity,
        });
    }
    Ok(ChainReport {
        source: root.source.clone(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn first_order_examples() {
        let nucleon = propagate_first_order(5e-9, 16).unwrap();
        assert!(rel(nucleon, 1.953125e-11) < 1e-15);
        assert!(nucleon <= 2e-11);
        let quark = propagate_first_order(2e-11, 3).unwrap();
        assert!(rel(quark, 2.0e-11 / 9.0) < 1e-15);
        assert_eq!(propagate_first_order(0.01, 1).unwrap(), 0.01);
        assert!(propagate_first_order(0.01, 0).is_err());
        assert!(propagate_first_order(-1.0, 2).is_err());
        assert!(first_order_reliable(0.1) && !first_order_reliable(0.2));
    }

    #[test]
    fn exact_examples() {
        let e = propagate_exact(5e-9, 16).unwrap();
        assert!(rel(e, 1.953125e-11) < 1e-8);
        // 1 - (1/2)^(1/4)
        assert!((propagate_exact(0.5, 2).unwrap() - 0.159_103_584_746_285_5).abs() < 1e-12);
        assert_eq!(propagate_exact(1.0, 2).unwrap(), 1.0);
        assert!(rel(propagate_exact(1e-15, 7).unwrap(), 1e-15 / 49.0) < 1e-12);
        assert!(matches!(propagate_exact(2.0, 3), Err(QuonError::NoSolution(_))));
        assert!(matches!(propagate_exact(1.5, 2), Err(QuonError::NoSolution(_))));
        let odd = propagate_exact(1.5, 3).unwrap();
        assert!(rel(composite_epsilon(odd, 3).unwrap(), 1.5) < 1e-12);
    }

    #[test]
    fn bundled_dataset() {
        let recs = bundled_limits();
        let o16 = recs.iter().find(|r| r.species == "O16").unwrap();
        assert_eq!((o16.epsilon, o16.n_constituents, o16.proximity), (5e-9, 16, Proximity::NearBose));
        let e = recs.iter().find(|r| r.species == "electron").unwrap();
        assert_eq!((e.epsilon, e.proximity), (1e-26, Proximity::NearFermi));
        assert!(recs.iter().any(|r| r.model_dependent));
    }

    #[test]
    fn ingest_diagnostics() {
        assert!(parse_limits("").unwrap().is_empty());
        assert!(parse_limits("# only comments\n\n").unwrap().is_empty());
        let text = "a\tb\t2\t1e-3\tnear_bose\tsrc\n\
                    bad line\n\
                    c\td\t0\t1e-3\tnear_bose\tsrc\n\
                    e\tf\t2\t3.0\tnear_fermi\tsrc\n\
                    g\th\t2\t1e-3\tsideways\tsrc\n";
        let (records, rejected) = parse_limits_lenient(text);
        assert_eq!(records.len(), 1);
        assert_eq!(rejected.iter().map(|d| d.line).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
        let err = parse_limits(text).unwrap_err();
        assert!(err.is_parse_error());
        assert!(err.to_string().contains("line 4"));
    }

    #[test]
    fn chain_parsing() {
        let (start, steps) = parse_chain("O16>nucleon:16>quark:3").unwrap();
        assert_eq!(start, "O16");
        assert_eq!(steps, vec![
            ChainStep { species: "nucleon".into(), n: 16 },
            ChainStep { species: "quark".into(), n: 3 },
        ]);
        assert!(parse_chain("").is_err());
        assert!(parse_chain("O16>nucleon").is_err());
        assert!(parse_chain("O16>nucleon:x").is_err());
    }

    #[test]
    fn oxygen_chain() {
        let (start, steps) = parse_chain("O16>nucleon:16>quark:3").unwrap();
        let report = derive_chain(&bundled_limits(), &start, &steps, false).unwrap();
        let nucleon = &report.levels[1];
        assert_eq!(nucleon.proximity, Proximity::NearFermi);
        assert!(rel(nucleon.epsilon_first_order, 1.953125e-11) < 1e-15);
        let quark = &report.levels[2];
        assert_eq!(quark.proximity, Proximity::NearFermi);
        assert!(rel(quark.epsilon_first_order, 5e-9 / 2304.0) < 1e-15);
        assert!(rel(quark.epsilon_exact, quark.epsilon_first_order) < 1e-7);
        assert!(report.to_tsv().lines().count() == 4);
    }

    #[test]
    fn chain_errors_and_identity() {
        let recs = bundled_limits();
        let single = derive_chain(&recs, "O16", &[], false).unwrap();
        assert_eq!(single.levels.len(), 1);
        assert_eq!(single.levels[0].epsilon_exact, 5e-9);
        assert!(matches!(derive_chain(&recs, "muon", &[], false), Err(QuonError::Unresolved(_))));
        // model-dependent nucleon record is skipped unless requested
        assert!(derive_chain(&recs, "nucleon", &[], false).is_err());
        assert!(derive_chain(&recs, "nucleon", &[], true).is_ok());
        let wrong = [ChainStep { species: "nucleon".into(), n: 15 }];
        assert!(derive_chain(&recs, "O16", &wrong, false).is_err());
        // near-Fermi composite with an even constituent count is inconsistent
        let (s, steps) = parse_chain("electron>parton:2").unwrap();
        assert!(derive_chain(&recs, &s, &steps, false).is_err());
    }
}
