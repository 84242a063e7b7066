use std::io::Write;
use std::process::Command;

use quon::cli::run;

fn quon(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["quon"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn sp_examples() {
    assert_eq!(quon(&["sp", "--left", "k1,k2", "--right", "k2,k1"]), (0, "q\n".into(), String::new()));
    assert_eq!(quon(&["sp", "--left", "k1,k2", "--right", "k1,k2"]).1, "1\n");
    assert_eq!(quon(&["sp", "--left", "k,k", "--right", "k,k", "--oracle"]).1, "1 + q\n");
    assert_eq!(quon(&["sp", "--left", "k1", "--right", "k2"]).1, "0\n");
}

#[test]
fn composite_antisym_three_reports_exponent_nine() {
    let (code, out, _) = quon(&["composite", "--n", "3", "--rep", "antisym"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "exponent\t9"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("normalization\t")));
}

#[test]
fn composite_overlap_and_oracle() {
    let (code, out, _) = quon(&["composite", "--n", "2", "--rep", "sym", "--overlap", "--oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains("cross_overlap\t2*q + 8*q^2 + 12*q^3 + 8*q^4 + 2*q^5\n"), "{out}");
    assert!(out.contains("oracle\tagree\n"));
    assert!(out.ends_with("exponent\t4\n"));
}

#[test]
fn bounds_propagate_example() {
    let (code, out, err) = quon(&["bounds", "propagate", "--epsilon", "5e-9", "--n", "16"]);
    assert_eq!((code, out.as_str(), err.as_str()), (0, "1.953e-11\n", ""));
    let (code, out, _) = quon(&["bounds", "propagate", "--epsilon", "5e-9", "--n", "16", "--exact"]);
    assert_eq!((code, out.as_str()), (0, "1.953e-11\n"));
}

#[test]
fn bounds_propagate_warns_outside_linear_regime() {
    let (code, _, err) = quon(&["bounds", "propagate", "--epsilon", "0.5", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"));
    let (code, out, _) = quon(&["bounds", "propagate", "--epsilon", "0.5", "--n", "2", "--exact"]);
    assert_eq!((code, out.as_str()), (0, "1.591e-1\n"));
}

#[test]
fn bounds_chain_bundled() {
    let (code, out, _) = quon(&["bounds", "chain", "--path", "O16>nucleon:16>quark:3"]);
    assert_eq!(code, 0, "{out}");
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][1], "nucleon");
    assert_eq!(rows[1][3], "near_fermi");
    let quark: f64 = rows[2][4].parse().unwrap();
    assert!((quark - 5e-9 / 2304.0).abs() / quark < 1e-3);
}

#[test]
fn bounds_list_and_custom_input() {
    let (code, out, _) = quon(&["bounds", "list"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);

    let f = temp_file("He4\tnucleon\t4\t1e-6\tnear_bose\tinvented\n");
    let path = f.path().to_str().unwrap();
    let (code, out, _) = quon(&["bounds", "chain", "--input", path, "--path", "He4>nucleon:4"]);
    assert_eq!(code, 0);
    assert!(out.contains("6.2500e-8"), "{out}");

    let bad = temp_file("He4\tnucleon\tfour\t1e-6\tnear_bose\tx\nHe3\tnucleon\t3\t-1\tnear_bose\tx\n");
    let (code, _, err) = quon(&["bounds", "list", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1") && err.contains("line 2"), "{err}");
}

#[test]
fn qperm_from_file() {
    let f = temp_file("1\t1\n1\t1\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(quon(&["qperm", "--matrix", path]).1, "1 + q\n");
    assert_eq!(quon(&["qperm", "--matrix", path, "--oracle"]).1, "1 + q\n");
}

#[test]
fn norm_presets_and_rep_file() {
    assert_eq!(quon(&["norm", "--n", "2", "--rep", "sym"]).1, "2 + 2*q\n");
    assert_eq!(quon(&["norm", "--n", "2", "--rep", "antisym"]).1, "2 - 2*q\n");
    let f = temp_file("label\tidentity_only\n(1,2)\t1\n");
    let (code, out, _) = quon(&["norm", "--n", "2", "--rep", f.path().to_str().unwrap(), "--show-state"]);
    assert_eq!(code, 0);
    assert_eq!(out, "term\ty1,y2\t1\n1\n");
}

#[test]
fn gram_psd_pass_and_fail() {
    let (code, out, _) = quon(&["gram", "--labels", "a,b,c", "--q", "0.5", "--check-psd"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("psd\tpass")));
    let (code, out, err) = quon(&["gram", "--labels", "a,b,c", "--q", "2", "--check-psd"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("psd\tfail")));
    assert!(out.lines().any(|l| l.starts_with("witness\t")));
    assert!(err.contains("warning"));
}

#[test]
fn weights_numeric_exact_and_table() {
    let (code, out, _) = quon(&["weights", "--n", "3", "--q", "0"]);
    assert_eq!(code, 0);
    let total: f64 = out.lines().map(|l| l.split('\t').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    // each printed weight is rounded to 12 decimals
    assert!((total - 1.0).abs() < 1e-11);
    assert!(quon(&["weights", "--n", "2", "--exact"]).1.starts_with("trivial\t"));
    assert!(quon(&["weights", "--n", "4", "--table"]).1.starts_with("cycle_type\tclass_size\ttrivial"));
}

#[test]
fn weo_limits() {
    assert_eq!(quon(&["weo", "--n", "3", "--q", "-1"]).1, "fermion\n");
    assert_eq!(quon(&["weo", "--n", "2", "--q", "-1"]).1, "boson\n");
    assert_eq!(quon(&["weo", "--n", "3", "--q", "1"]).1, "boson\n");
}

#[test]
fn exit_codes() {
    // malformed label
    assert_eq!(quon(&["sp", "--left", "k1,", "--right", "k1"]).0, 2);
    // unknown flag
    assert_eq!(quon(&["sp", "--bogus"]).0, 2);
    // repeated labels where distinct ones are required
    assert_eq!(quon(&["norm", "--n", "2", "--rep", "sym", "--labels", "a,a"]).0, 1);
    assert_eq!(quon(&["weo", "--n", "3", "--q", "0"]).0, 1);
    assert_eq!(quon(&["weights", "--n", "3", "--q", "1"]).0, 1);
    assert_eq!(quon(&["composite", "--n", "5", "--rep", "sym"]).0, 1);
    assert_eq!(quon(&["bounds", "propagate", "--epsilon", "2.5", "--n", "2", "--exact"]).0, 1);
    assert_eq!(quon(&["qperm", "--matrix", "/nonexistent/matrix.tsv"]).0, 1);
    assert_eq!(quon(&["--help"]).0, 0);
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["composite", "--n", "3", "--rep", "sym", "--overlap"];
    let outputs: Vec<String> = [1, 4]
        .iter()
        .map(|threads| {
            let out = Command::new(env!("CARGO_BIN_EXE_quon"))
                .args(args)
                .env("RAYON_NUM_THREADS", threads.to_string())
                .output()
                .unwrap();
            assert!(out.status.success());
            String::from_utf8(out.stdout).unwrap()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn enumeration_cap_override() {
    let run_with_cap = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_quon"))
            .args(["gram", "--labels", "a,b,c,d"])
            .env("QUON_ENUM_CAP", cap)
            .output()
            .unwrap()
    };
    let capped = run_with_cap("3");
    assert_eq!(capped.status.code(), Some(1));
    assert!(run_with_cap("4").status.success());
}
