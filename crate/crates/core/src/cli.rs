//! Command-line front end. All tabular output is tab-separated and
//! polynomials use the `QPolynomial` text format. Exit codes: `0` success,
//! `1` contract violation or other failure, `2` unparseable input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::bounds::{
    bundled_limits, derive_chain, first_order_reliable, ingest_limits, parse_chain, propagate_exact,
    propagate_first_order, BoundRecord,
};
use crate::characters::character_table;
use crate::composite::{
    cross_term_magnitude, exchange_check, oracle_classified_pair_product, oracle_two_composite_scalar,
    classified_pair_product, CompositeSpec, Statistics, weo_limit_check,
};
use crate::error::{QuonError, Result};
use crate::fock::{
    build_state, check_psd, default_psd_tolerance, gram, irrep_weight_polys, irrep_weights,
    normalization_poly, permutation_basis,
};
use crate::permutations::{preset_rep_with_cap, RepCoefficients, RepKind, DEFAULT_ENUM_CAP, ENUM_CAP_ENV};
use crate::wick::{oracle_q_permanent, oracle_scalar_product, q_permanent, scalar_product, DeltaMatrix, ModeLabel, OperatorWord};

#[derive(Debug, Parser)]
#[command(name = "quon", version, about = "Exact quon algebra and composite statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scalar product of two creation-operator words.
    Sp {
        /// Comma-separated labels, `tag:internal` for tagged modes.
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        /// Use the enumeration oracle instead of the DP.
        #[arg(long)]
        oracle: bool,
    },
    /// q-permanent of a tab-separated 0/1 matrix file.
    Qperm {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Normalization polynomial of an n-quon state.
    Norm {
        #[arg(long)]
        n: usize,
        /// `sym`, `antisym`, or a representation coefficient file.
        #[arg(long)]
        rep: String,
        /// Comma-separated distinct labels (default y1..yn).
        #[arg(long)]
        labels: Option<String>,
        /// Also print the state's terms.
        #[arg(long)]
        show_state: bool,
    },
    /// Gram matrix of all place-permutations of a label word.
    Gram {
        #[arg(long)]
        labels: String,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<f64>,
        #[arg(long, requires = "q")]
        check_psd: bool,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Irreducible-representation weights of n quons on distinct modes.
    Weights {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<f64>,
        /// Print exact weight polynomials instead of numbers.
        #[arg(long)]
        exact: bool,
        /// Print the bundled character table.
        #[arg(long)]
        table: bool,
    },
    /// Two-composite scalar products and the verified exchange exponent.
    Composite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rep: String,
        /// Add the fully overlapping configuration and its cross term.
        #[arg(long)]
        overlap: bool,
        /// Cross-check every configuration against the matching enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Bose/Fermi character of an n-constituent composite at q = ±1.
    Weo {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
    },
    /// Statistics-violation bound propagation.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Propagate a composite deviation to its constituents.
    Propagate {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        exact: bool,
    },
    /// Derive constituent limits down a chain such as `O16>nucleon:16>quark:3`.
    Chain {
        /// Limits file (bundled dataset when omitted).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        path: String,
        #[arg(long)]
        include_model_dependent: bool,
    },
    /// List the records of a limits file.
    List {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

/// Enumeration cap from `QUON_ENUM_CAP`, defaulting to 8.
pub fn enum_cap() -> Result<usize> {
    match std::env::var(ENUM_CAP_ENV) {
        Err(_) => Ok(DEFAULT_ENUM_CAP),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| QuonError::parse(None, format!("{ENUM_CAP_ENV}={v:?} is not a non-negative integer"))),
    }
}

fn parse_labels(text: &str) -> Result<Vec<ModeLabel>> {
    Ok(text.parse::<OperatorWord>()?.0)
}

fn load_rep(rep: &str, n: usize, cap: usize) -> Result<RepCoefficients> {
    let loaded = match rep {
        "sym" | "symmetric" => preset_rep_with_cap(n, RepKind::Symmetric, cap)?,
        "antisym" | "antisymmetric" => preset_rep_with_cap(n, RepKind::Antisymmetric, cap)?,
        path => RepCoefficients::from_file(path.as_ref())?,
    };
    if loaded.n() != n {
        return Err(QuonError::contract(format!(
            "representation file is for S_{}, but --n {n} was given",
            loaded.n()
        )));
    }
    Ok(loaded)
}

fn load_records(input: Option<&PathBuf>) -> Result<Vec<BoundRecord>> {
    match input {
        Some(path) => ingest_limits(path),
        None => Ok(bundled_limits()),
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cap = enum_cap()?;
    match command {
        Command::Sp { left, right, oracle } => {
            let (l, r) = (left.parse::<OperatorWord>()?, right.parse::<OperatorWord>()?);
            let p = if oracle { oracle_scalar_product(&l, &r)? } else { scalar_product(&l, &r)? };
            writeln!(out, "{p}")?;
        }
        Command::Qperm { matrix, oracle } => {
            let m = DeltaMatrix::parse(&std::fs::read_to_string(matrix)?)?;
            let p = if oracle { oracle_q_permanent(&m)? } else { q_permanent(&m)? };
            writeln!(out, "{p}")?;
        }
        Command::Norm { n, rep, labels, show_state } => {
            let rep = load_rep(&rep, n, cap)?;
            let labels = match labels {
                Some(text) => parse_labels(&text)?,
                None => (1..=n).map(|i| ModeLabel::new(format!("y{i}"))).collect(),
            };
            let p = normalization_poly(&rep, &labels)?;
            if show_state {
                for (w, c) in build_state(&labels, &rep)?.terms() {
                    writeln!(out, "term\t{w}\t{c}")?;
                }
            }
            writeln!(out, "{p}")?;
        }
        Command::Gram { labels, q, check_psd: psd, tolerance } => {
            let labels = parse_labels(&labels)?;
            let g = gram(&permutation_basis(&labels, cap)?)?;
            let header: Vec<String> = g.words.iter().map(ToString::to_string).collect();
            writeln!(out, "word\t{}", header.join("\t"))?;
            for (w, row) in g.words.iter().zip(&g.entries) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(out, "{w}\t{}", cells.join("\t"))?;
            }
            if let (true, Some(q)) = (psd, q) {
                let tol = tolerance.unwrap_or_else(|| default_psd_tolerance(g.dim()));
                let report = check_psd(&g, q, tol)?;
                if report.outside_convexity {
                    writeln!(err, "warning: q = {q} is outside [-1, 1]; positivity is not expected")?;
                }
                let verdict = if report.passed { "pass" } else { "fail" };
                writeln!(out, "psd\t{verdict}\t{:.6e}", report.min_eigenvalue)?;
                if let Some(witness) = report.witness {
                    let cells: Vec<String> = witness.iter().map(|x| format!("{x:.6e}")).collect();
                    writeln!(out, "witness\t{}", cells.join("\t"))?;
                }
            }
        }
        Command::Weights { n, q, exact, table } => {
            if table {
                let t = character_table(n)?;
                let names: Vec<&str> = t.irreps.iter().map(|r| r.label.as_str()).collect();
                writeln!(out, "cycle_type\tclass_size\t{}", names.join("\t"))?;
                for (c, class) in t.classes.iter().enumerate() {
                    let ct: Vec<String> = class.cycle_type.iter().map(ToString::to_string).collect();
                    let chars: Vec<String> = t.irreps.iter().map(|r| r.characters[c].to_string()).collect();
                    writeln!(out, "{}\t{}\t{}", ct.join("+"), class.size, chars.join("\t"))?;
                }
            } else if exact {
                for (label, p) in irrep_weight_polys(n)? {
                    writeln!(out, "{label}\t{p}")?;
                }
            } else {
                let q = q.ok_or_else(|| QuonError::contract("--q is required unless --exact or --table is given"))?;
                for w in irrep_weights(n, q)? {
                    writeln!(out, "{}\t{:.12}", w.label, w.weight)?;
                }
            }
        }
        Command::Composite { n, rep, overlap, oracle } => {
            let spec = CompositeSpec::new(load_rep(&rep, n, cap)?);
            let check = exchange_check(&spec)?;
            writeln!(out, "n\t{n}")?;
            writeln!(out, "rep\t{}", spec.rep().label())?;
            writeln!(out, "normalization\t{}", check.normalization)?;
            writeln!(out, "config\tdirect\texchange\tcross")?;
            let rows = [("same_order", &check.same_order), ("swapped", &check.swapped)];
            for (name, r) in rows {
                writeln!(out, "{name}\t{}\t{}\t{}", r.direct, r.exchange, r.cross)?;
            }
            let overlap_result = if overlap {
                let r = classified_pair_product(&spec, ("p", "p"), ("p", "p"))?;
                writeln!(out, "overlap\t{}\t{}\t{}", r.direct, r.exchange, r.cross)?;
                writeln!(out, "cross_overlap\t{}", cross_term_magnitude(&spec, true)?)?;
                Some(r)
            } else {
                None
            };
            if oracle {
                let same = oracle_two_composite_scalar(&spec, ("p1", "p2"), ("p1", "p2"))?;
                let swapped = oracle_two_composite_scalar(&spec, ("p1", "p2"), ("p2", "p1"))?;
                let mut agree = same == check.same_order && swapped == check.swapped;
                if let Some(r) = &overlap_result {
                    agree &= oracle_classified_pair_product(&spec, ("p", "p"), ("p", "p"))? == *r;
                }
                if !agree {
                    return Err(QuonError::TheoremViolation("DP and oracle disagree".into()));
                }
                writeln!(out, "oracle\tagree")?;
            }
            writeln!(out, "exponent\t{}", check.exponent)?;
        }
        Command::Weo { n, q } => {
            let constituents = match q {
                1 => Statistics::Boson,
                -1 => Statistics::Fermion,
                other => return Err(QuonError::contract(format!("--q must be 1 or -1, got {other}"))),
            };
            writeln!(out, "{}", weo_limit_check(n, constituents)?)?;
        }
        Command::Bounds { command } => match command {
            BoundsCommand::Propagate { epsilon, n, exact } => {
                if !first_order_reliable(epsilon) && !exact {
                    writeln!(err, "warning: epsilon {epsilon} is large; the first-order law may be inaccurate (try --exact)")?;
                }
                let value = if exact { propagate_exact(epsilon, n)? } else { propagate_first_order(epsilon, n)? };
                writeln!(out, "{value:.3e}")?;
            }
            BoundsCommand::Chain { input, path, include_model_dependent } => {
                let records = load_records(input.as_ref())?;
                let (start, steps) = parse_chain(&path)?;
                let report = derive_chain(&records, &start, &steps, include_model_dependent)?;
                write!(out, "{}", report.to_tsv())?;
            }
            BoundsCommand::List { input } => {
                writeln!(out, "species\tcomposite_of\tn_constituents\tepsilon\tproximity\tsource\tmodel_dependent")?;
                for r in load_records(input.as_ref())? {
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{:e}\t{}\t{}\t{}",
                        r.species, r.composite_of, r.n_constituents, r.epsilon, r.proximity, r.source, r.model_dependent
                    )?;
                }
            }
        },
    }
    Ok(())
}

/// Runs the CLI on `argv` (including the program name), returning the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_parse_error() {
                2
            } else {
                1
            }
        }
    }
}
