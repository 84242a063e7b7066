//! Bundled character tables of `S_2`, `S_3` and `S_4`.
//!
//! Tables ship as a tab-separated data file and are checked against row and
//! column orthogonality (and against brute-force class sizes) every time
//! they are loaded.

use crate::error::{QuonError, Result};
use crate::permutations::{enumerate, Permutation};

const BUNDLED: &str = include_str!("../data/character_tables.tsv");

pub const MIN_TABLE_N: usize = 2;
pub const MAX_TABLE_N: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Cycle lengths in non-increasing order.
    pub cycle_type: Vec<usize>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irrep {
    pub label: String,
    pub partition: Vec<usize>,
    /// One value per class, in table class order.
    pub characters: Vec<i64>,
}

impl Irrep {
    /// The character on the identity class.
    pub fn dimension(&self) -> usize {
        self.characters[0] as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub n: usize,
    pub classes: Vec<ConjugacyClass>,
    pub irreps: Vec<Irrep>,
}

impl CharacterTable {
    fn class_index(&self, cycle_type: &[usize]) -> Option<usize> {
        self.classes.iter().position(|c| c.cycle_type == cycle_type)
    }

    /// `χ_λ(P)` for the irrep at `irrep` index.
    pub fn character(&self, irrep: usize, p: &Permutation) -> i64 {
        let class = self
            .class_index(&p.cycle_type())
            .expect("validated tables cover every cycle type");
        self.irreps[irrep].characters[class]
    }

    /// Checks class sizes, row orthogonality and column orthogonality exactly.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| QuonError::Unsupported(format!("character table for S_{}: {msg}", self.n));
        let order: i64 = (1..=self.n as i64).product();
        if self.classes.first().map(|c| c.cycle_type.as_slice()) != Some(&vec![1; self.n][..]) {
            return Err(bad("first class must be the identity".into()));
        }
        let perms = enumerate(self.n)?;
        for class in &self.classes {
            let count = perms.iter().filter(|p| p.cycle_type() == class.cycle_type).count();
            if count != class.size {
                return Err(bad(format!("class {:?} has {count} elements, table says {}", class.cycle_type, class.size)));
            }
        }
        if self.classes.iter().map(|c| c.size as i64).sum::<i64>() != order {
            return Err(bad("class sizes do not sum to n!".into()));
        }
        if self.irreps.len() != self.classes.len() {
            return Err(bad("table is not square".into()));
        }
        for (a, ra) in self.irreps.iter().enumerate() {
            for (b, rb) in self.irreps.iter().enumerate() {
                let inner: i64 = self
                    .classes
                    .iter()
                    .enumerate()
                    .map(|(c, class)| class.size as i64 * ra.characters[c] * rb.characters[c])
                    .sum();
                let expected = if a == b { order } else { 0 };
                if inner != expected {
                    return Err(bad(format!("rows {} and {} fail orthogonality", ra.label, rb.label)));
                }
            }
        }
        for (c1, k1) in self.classes.iter().enumerate() {
            for c2 in 0..self.classes.len() {
                let inner: i64 = self
                    .irreps
                    .iter()
                    .map(|r| r.characters[c1] * r.characters[c2])
                    .sum();
                let expected = if c1 == c2 { order / k1.size as i64 } else { 0 };
                if inner != expected {
                    return Err(bad(format!("columns {c1} and {c2} fail orthogonality")));
                }
            }
        }
        Ok(())
    }
}

fn parse_parts(text: &str) -> Option<Vec<usize>> {
    text.split('+').map(|t| t.trim().parse().ok()).collect()
}

/// Parses every table block in the data-file format.
pub fn parse_tables(text: &str) -> Result<Vec<CharacterTable>> {
    let mut tables: Vec<CharacterTable> = Vec::new();
    let mut expect_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = Some(idx + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields[0] == "group" {
            let n = fields
                .get(1)
                .and_then(|t| t.trim().parse().ok())
                .ok_or_else(|| QuonError::parse(lineno, "bad group line"))?;
            tables.push(CharacterTable {
                n,
                classes: Vec::new(),
                irreps: Vec::new(),
            });
            expect_header = true;
            continue;
        }
        let table = tables
            .last_mut()
            .ok_or_else(|| QuonError::parse(lineno, "row before any group line"))?;
        if expect_header {
            if fields.len() < 3 || fields[0] != "cycle_type" || fields[1] != "class_size" {
                return Err(QuonError::parse(lineno, "expected column header"));
            }
            for col in &fields[2..] {
                let (label, partition) = col
                    .split_once(':')
                    .ok_or_else(|| QuonError::parse(lineno, "irrep column must be name:partition"))?;
                let partition =
                    parse_parts(partition).ok_or_else(|| QuonError::parse(lineno, "bad partition"))?;
                table.irreps.push(Irrep {
                    label: label.to_string(),
                    partition,
                    characters: Vec::new(),
                });
            }
            expect_header = false;
            continue;
        }
        if fields.len() != 2 + table.irreps.len() {
            return Err(QuonError::parse(lineno, "wrong number of columns"));
        }
        let cycle_type = parse_parts(fields[0]).ok_or_else(|| QuonError::parse(lineno, "bad cycle type"))?;
        let size = fields[1]
            .trim()
            .parse()
            .map_err(|_| QuonError::parse(lineno, "bad class size"))?;
        table.classes.push(ConjugacyClass { cycle_type, size });
        for (irrep, value) in table.irreps.iter_mut().zip(&fields[2..]) {
            irrep.characters.push(
                value
                    .trim()
                    .parse()
                    .map_err(|_| QuonError::parse(lineno, "bad character value"))?,
            );
        }
    }
    Ok(tables)
}

/// The bundled, validated character table of `S_n` for `2 <= n <= 4`.
pub fn character_table(n: usize) -> Result<CharacterTable> {
    if !(MIN_TABLE_N..=MAX_TABLE_N).contains(&n) {
        return Err(QuonError::Unsupported(format!(
            "character tables are bundled for {MIN_TABLE_N} <= n <= {MAX_TABLE_N}, got {n}"
        )));
    }
    let table = parse_tables(BUNDLED)?
        .into_iter()
        .find(|t| t.n == n)
        .ok_or_else(|| QuonError::Unsupported(format!("no bundled table for S_{n}")))?;
    table.validate()?;
    Ok(table)
}
