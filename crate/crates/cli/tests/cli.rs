// SPDX-License-Identifier: MIT OR Apache-2.0

use std::io::Write;
use std::process::{Command, Output};

use segfit::{solve_constrained, Signal, SolverOptions};
use tempfile::NamedTempFile;

const V_SHAPE: &str = "2\n1\n0\n1\n2\n";

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn segfit(input: &NamedTempFile, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segfit"))
        .arg("--input")
        .arg(input.path())
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_row(line: &str) -> (usize, f64, Vec<usize>, Vec<f64>) {
    let f: Vec<&str> = line.split(',').collect();
    assert_eq!(f.len(), 4, "{line}");
    (
        f[0].parse().unwrap(),
        f[1].parse().unwrap(),
        f[2].split(';').map(|s| s.parse().unwrap()).collect(),
        f[3].split(';').map(|s| s.parse().unwrap()).collect(),
    )
}

/// Wavy sampled signal, no randomness needed.
fn wave(n: usize) -> Vec<f64> {
    (0..n).map(|k| (0.7 * k as f64).sin() + 0.05 * k as f64).collect()
}

fn lines(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

#[test]
fn v_shape_two_segments() {
    let input = file(V_SHAPE);
    let out = segfit(&input, &["--mode", "constrained", "--segments", "2"]);
    assert_eq!(stdout(&out), "2,0.0,0;2;4,2;0;2\n");
}

#[test]
fn v_shape_regularized_json() {
    let input = file(V_SHAPE);
    let out = segfit(&input, &["--mode", "regularized", "--zeta", "0.1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["mode"], "regularized");
    assert_eq!(doc["segments"], 2);
    let objective = doc["objective"].as_f64().unwrap();
    let sweep = solve_constrained(&Signal::discrete(vec![2.0, 1.0, 0.0, 1.0, 2.0]).unwrap(), 4, &SolverOptions::default())
        .unwrap();
    let best = sweep.fits.iter().map(|f| f.objective + 0.1 * f.segments as f64).fold(f64::INFINITY, f64::min);
    assert!((objective - best).abs() < 1e-12);
    assert!((objective - 0.2).abs() < 1e-12);
    assert!(doc.get("fits").is_none() && doc.get("stats").is_none());
}

#[test]
fn continuous_input_with_header() {
    let input = file("t,g\n0,5\n1,3\n2.5,5\n4,4\n");
    let out = segfit(&input, &["--mode", "constrained", "--segments", "3", "--kind", "continuous"]);
    let (m, objective, idx, vals) = parse_row(stdout(&out).trim_end());
    assert_eq!((m, idx), (3, vec![0, 1, 2, 3]));
    assert!(objective.abs() < 1e-12);
    for (got, want) in vals.iter().zip([5.0, 3.0, 5.0, 4.0]) {
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn emit_all_m_and_stats() {
    let values = wave(30);
    let input = file(&lines(&values));
    let out = segfit(&input, &["--mode", "constrained", "--segments", "5", "--emit-all-m", "--stats"]);
    let text = stdout(&out);
    let all: Vec<&str> = text.lines().collect();
    let n = values.len() - 1;
    assert_eq!(all.len(), 5 + n + 1);
    for (k, line) in all[..5].iter().enumerate() {
        assert_eq!(parse_row(line).0, k + 1);
    }
    for (i, line) in all[5..5 + n].iter().enumerate() {
        let (idx, len) = line.split_once(',').unwrap();
        assert_eq!(idx.parse::<usize>().unwrap(), i);
        assert!(len.parse::<usize>().unwrap() >= 1);
    }
    let summary: Vec<&str> = all[5 + n].split(',').collect();
    assert_eq!(summary[0], "R");
    assert!(summary[1].parse::<usize>().unwrap() >= 1);
    assert_eq!(summary[2], "bound_held");
    assert!(summary[3] == "true" || summary[3] == "false");
    let dump = String::from_utf8(out.stderr).unwrap();
    assert!(dump.lines().skip(1).all(|l| l.split(' ').count() == 6), "{dump}");

    let json = segfit(&input, &["--mode", "constrained", "--segments", "5", "--emit-all-m", "--stats", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["fits"].as_array().unwrap().len(), 5);
    assert_eq!(doc["segments"], 5);
    assert_eq!(doc["stats"]["max_len_by_index"].as_array().unwrap().len(), n);
}

#[test]
fn emitted_fit_rescores_to_objective() {
    let values = wave(40);
    let input = file(&lines(&values));
    let out = segfit(&input, &["--mode", "constrained", "--segments", "6"]);
    let (_, objective, idx, ys) = parse_row(stdout(&out).trim_end());
    // Squared error of the linear interpolant at every sample, summed directly.
    let mut direct = 0.0;
    for (seg, pair) in idx.windows(2).enumerate() {
        let (i, j) = (pair[0], pair[1]);
        for (k, g) in values.iter().enumerate().take(j).skip(i) {
            let f = ys[seg] + (ys[seg + 1] - ys[seg]) * (k - i) as f64 / (j - i) as f64;
            direct += (f - g).powi(2);
        }
    }
    direct += (ys.last().unwrap() - values.last().unwrap()).powi(2);
    assert!((direct - objective).abs() <= 1e-8 * objective.abs().max(1e-12), "{direct} vs {objective}");
}

#[test]
fn oracle_agrees_with_solver() {
    let input = file(&lines(&wave(11)));
    for args in [
        vec!["--mode", "constrained", "--segments", "4", "--emit-all-m"],
        vec!["--mode", "regularized", "--zeta", "0.05"],
    ] {
        let dp = stdout(&segfit(&input, &args));
        let mut with_oracle = args.clone();
        with_oracle.push("--oracle");
        let bf = stdout(&segfit(&input, &with_oracle));
        for (a, b) in dp.lines().zip(bf.lines()) {
            let (ra, rb) = (parse_row(a), parse_row(b));
            assert_eq!((ra.0, &ra.2), (rb.0, &rb.2));
            assert!((ra.1 - rb.1).abs() <= 1e-8 * ra.1.abs().max(rb.1.abs()) + 1e-12);
        }
    }
}

#[test]
fn output_is_byte_stable() {
    let input = file(&lines(&wave(60)));
    let args = ["--mode", "constrained", "--segments", "6", "--emit-all-m", "--format", "json"];
    let first = segfit(&input, &args).stdout;
    assert_eq!(first, segfit(&input, &args).stdout);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(first, segfit(&input, &threaded).stdout);
}

#[test]
fn exit_codes() {
    let code = |input: &NamedTempFile, args: &[&str]| segfit(input, args).status.code().unwrap();
    let v = file(V_SHAPE);
    assert_eq!(code(&v, &["--mode", "constrained"]), 2);
    assert_eq!(code(&v, &["--mode", "regularized", "--zeta", "1", "--segments", "2"]), 2);
    assert_eq!(code(&v, &["--mode", "constrained", "--segments", "2", "--oracle", "--stats"]), 2);
    assert_eq!(code(&file("1,0\n0,1\n"), &["--mode", "constrained", "--segments", "1", "--kind", "continuous"]), 3);
    assert_eq!(code(&file("1\nabc\n"), &["--mode", "constrained", "--segments", "1"]), 3);
    assert_eq!(code(&v, &["--mode", "constrained", "--segments", "5"]), 4);
    assert_eq!(code(&v, &["--mode", "constrained", "--segments", "0"]), 4);
    assert_eq!(code(&v, &["--mode", "regularized", "--zeta", "-1"]), 5);
    let big = file(&lines(&wave(200)));
    assert_eq!(code(&big, &["--mode", "constrained", "--segments", "20", "--oracle"]), 6);

    let missing = Command::new(env!("CARGO_BIN_EXE_segfit"))
        .args(["--mode", "constrained", "--segments", "1", "--input", "/nonexistent/signal.csv"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("cannot open"));
}

#[test]
fn help_documents_exit_codes() {
    let out = Command::new(env!("CARGO_BIN_EXE_segfit")).arg("--help").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for code in ["2 ", "3 ", "4 ", "5 ", "6 ", "70 "] {
        assert!(text.contains(&format!("  {code}")), "missing exit code {code} in help");
    }
}
