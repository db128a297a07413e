use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

const RUNNING_EXAMPLE: &str = "\
1\tThe\t_\t_\t_\t_\t0\troot\t_\t_
2\tcat\t_\t_\t_\t_\t4\tnsubj\t_\t_
3\tsat\t_\t_\t_\t_\t4\taux\t_\t_
4\ton\t_\t_\t_\t_\t0\troot\t_\t_
5\tthe\t_\t_\t_\t_\t6\tdet\t_\t_
6\tmat\t_\t_\t_\t_\t7\tobj\t_\t_
7\tnow\t_\t_\t_\t_\t4\tadvmod\t_\t_

";

fn hierbrack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hierbrack"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

fn heads_and_rels(conllu: &str) -> Vec<(String, String)> {
    conllu
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[6].to_owned(), f[7].to_owned())
        })
        .collect()
}

#[test]
fn running_example_labels() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "example.conllu", RUNNING_EXAMPLE);
    let out = stdout(&hierbrack(&["encode", "--scheme", "optimal", &input]));
    let labels: Vec<&str> = out
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.split('\t').nth(2).unwrap())
        .collect();
    assert_eq!(labels, [">", "<", "<", ">*/*", "<*", "\\*<", ">*"]);

    let with_root = stdout(&hierbrack(&[
        "encode",
        "--scheme",
        "optimal",
        "--emit-root-label",
        &input,
    ]));
    assert_eq!(with_root.lines().next(), Some("0\t_\t/*\t_"));
    assert!(with_root.contains("4\ton\t>*/*\troot\n"));
}

#[test]
fn empty_file_gives_empty_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "empty.conllu", "");
    assert_eq!(stdout(&hierbrack(&["encode", &input])), "");
    let labels = write(&dir, "empty.tsv", "");
    assert_eq!(stdout(&hierbrack(&["decode", &labels])), "");
}

#[test]
fn encode_then_decode_restores_heads_and_relations() {
    let dir = TempDir::new().unwrap();
    let gold = path(&dir, "gold.conllu");
    stdout(&hierbrack(&[
        "generate", "--count", "300", "--seed", "8", "-o", &gold,
    ]));
    for scheme in ["optimal-np", "optimal", "fourbit", "naive"] {
        for jobs in ["1", "4"] {
            let labels = path(&dir, "labels.tsv");
            let pred = path(&dir, "pred.conllu");
            let mut encode = vec![
                "encode", "--jobs", jobs, "--scheme", scheme, &gold, "-o", &labels,
            ];
            if scheme != "optimal-np" {
                encode.push("--pseudoproj");
            }
            stdout(&hierbrack(&encode));
            let mut decode = vec!["decode", "--jobs", jobs, &labels, "-o", &pred];
            if scheme != "optimal-np" {
                decode.push("--deproj");
            }
            stdout(&hierbrack(&decode));
            let gold_text = fs::read_to_string(&gold).unwrap();
            let pred_text = fs::read_to_string(&pred).unwrap();
            assert_eq!(
                heads_and_rels(&gold_text).len(),
                heads_and_rels(&pred_text).len()
            );
            if scheme == "optimal-np" {
                assert_eq!(heads_and_rels(&gold_text), heads_and_rels(&pred_text));
                let eval = stdout(&hierbrack(&["eval", &gold, &pred]));
                assert_eq!(eval.trim(), "uas=1.0000\tlas=1.0000\tum=1.0000\tlm=1.0000");
            }
        }
    }
}

#[test]
fn output_is_independent_of_job_count() {
    let dir = TempDir::new().unwrap();
    let gold = path(&dir, "gold.conllu");
    stdout(&hierbrack(&[
        "generate", "--count", "500", "--seed", "2", "-o", &gold,
    ]));
    let one = stdout(&hierbrack(&["encode", "--jobs", "1", &gold]));
    let many = stdout(&hierbrack(&["encode", "--jobs", "8", &gold]));
    assert_eq!(one, many);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hierbrack"))
            .args(["generate", "--count", "5"])
            .env("HIERBRACK_SEED", seed)
            .output()
            .unwrap();
        stdout(&out)
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn projective_scheme_reports_crossing_sentences() {
    let dir = TempDir::new().unwrap();
    let text = format!(
        "{RUNNING_EXAMPLE}1\ta\t_\t_\t_\t_\t3\tx\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n3\tc\t_\t_\t_\t_\t2\ty\t_\t_\n4\td\t_\t_\t_\t_\t2\tz\t_\t_\n\n"
    );
    let input = write(&dir, "mixed.conllu", &text);
    let out = hierbrack(&["encode", "--scheme", "optimal", &input]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("sentence 2:"), "{stderr}");
    // the good sentence is still written
    assert_eq!(
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| !l.is_empty())
            .count(),
        7
    );
    assert!(
        hierbrack(&["encode", "--scheme", "optimal", "--pseudoproj", &input])
            .status
            .success()
    );
}

#[test]
fn index_cap_rejects_sentences() {
    let dir = TempDir::new().unwrap();
    // needs index 2
    let text = "\
1\ta\t_\t_\t_\t_\t6\tx\t_\t_
2\tb\t_\t_\t_\t_\t0\tx\t_\t_
3\tc\t_\t_\t_\t_\t6\tx\t_\t_
4\td\t_\t_\t_\t_\t7\tx\t_\t_
5\te\t_\t_\t_\t_\t8\tx\t_\t_
6\tf\t_\t_\t_\t_\t0\tx\t_\t_
7\tg\t_\t_\t_\t_\t2\tx\t_\t_
8\th\t_\t_\t_\t_\t3\tx\t_\t_

";
    let input = write(&dir, "deep.conllu", text);
    let out = hierbrack(&["encode", "--max-index", "1", &input]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sentence 1"));
    assert!(hierbrack(&["encode", "--max-index", "2", &input])
        .status
        .success());
}

#[test]
fn malformed_labels_name_the_line() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.tsv", "1\ta\t>*\t_\n2\tb\t>q\t_\n");
    let out = hierbrack(&["decode", &input]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn garbage_labels_still_give_trees() {
    let dir = TempDir::new().unwrap();
    let shapes = [
        "/*", ">*", "<*", "\\*", "/", ">", "<", "\\", ">1", "<*2", "/*", "\\1",
    ];
    let mut text = String::new();
    let mut r = StdRng::seed_from_u64(17);
    let mut next = || r.gen_range(0..usize::MAX);
    for _ in 0..200 {
        let n = 1 + next() % 9;
        for id in 1..=n {
            let label: String = (0..next() % 4)
                .map(|_| shapes[next() % shapes.len()])
                .collect();
            let label = if label.is_empty() {
                "_".to_owned()
            } else {
                label
            };
            text.push_str(&format!("{id}\tw\t{label}\tdep\n"));
        }
        text.push('\n');
    }
    let input = write(&dir, "fuzz.tsv", &text);
    let notes = path(&dir, "notes.txt");
    let out = stdout(&hierbrack(&["decode", &input, "--diagnostics", &notes]));
    let parsed = path(&dir, "out.conllu");
    fs::write(&parsed, &out).unwrap();
    // the output parses as CoNLL-U and scores against itself
    let eval = stdout(&hierbrack(&["eval", &parsed, &parsed]));
    assert!(eval.starts_with("uas=1.0000"));
    assert!(Path::new(&notes).exists());
    assert!(fs::read_to_string(&notes).unwrap().lines().count() > 0);
    for sentence in out.split("\n\n").filter(|s| !s.trim().is_empty()) {
        let heads: Vec<usize> = sentence
            .lines()
            .map(|l| l.split('\t').nth(6).unwrap().parse().unwrap())
            .collect();
        // every token reaches the root
        for start in 1..=heads.len() {
            let mut node = start;
            for _ in 0..=heads.len() {
                if node == 0 {
                    break;
                }
                node = heads[node - 1];
            }
            assert_eq!(node, 0);
        }
    }
}

#[test]
fn stats_and_coverage_layouts() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "proj.conllu");
    stdout(&hierbrack(&[
        "generate",
        "--count",
        "400",
        "--projective",
        "--max-len",
        "9",
        "-o",
        &input,
    ]));
    let stats = stdout(&hierbrack(&["stats", "--scheme", "optimal", &input]));
    let labels: usize = stats
        .lines()
        .find_map(|l| l.strip_prefix("labels="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(labels <= 12);
    assert!(stats.contains("failures=0\n"));
    let coverage = stdout(&hierbrack(&["coverage", "--scheme", "optimal-np", &input]));
    assert_eq!(
        coverage.trim(),
        "uas=100.00\tlas=100.00\tum=100.00\tlm=100.00"
    );
    let empirical = stdout(&hierbrack(&["coverage", "--empirical", &input]));
    assert_eq!(empirical, coverage);
    let eval = stdout(&hierbrack(&["eval", &input, &input]));
    assert_eq!(eval.trim(), "uas=1.0000\tlas=1.0000\tum=1.0000\tlm=1.0000");
}
