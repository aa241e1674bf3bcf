// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use apsp_cli::RunReport;
use apsp_core::weighted::build_oracle_2;
use apsp_core::{exact_apsp, load_graph, EstimateMatrix};

fn apsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apsp"))
        .args(args)
        .env_remove("APSP_THREADS")
        .output()
        .expect("run apsp")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> RunReport {
    RunReport::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn gen(dir: &Path, name: &str, n: &str, prob: &str, w: &str, seed: &str) -> String {
    let path = p(dir, name);
    let out = apsp(&["gen", "-n", n, "-p", prob, "-w", w, "-s", seed, "-o", &path]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_header_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "100", "0.2", "50", "7");
    let text = fs::read_to_string(&g).unwrap();
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(header[0], 100);
    assert_eq!(header[1], lines.filter(|l| !l.trim().is_empty()).count());

    let e = gen(dir.path(), "e.txt", "10", "0", "1", "1");
    assert_eq!(fs::read_to_string(e).unwrap().trim(), "10 0");

    let a = gen(dir.path(), "a.txt", "50", "0.2", "100", "7");
    let b = gen(dir.path(), "b.txt", "50", "0.2", "100", "7");
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn apsp_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "80", "0.1", "1", "3");
    let d = p(dir.path(), "d.bin");
    let e = p(dir.path(), "e.bin");
    assert_eq!(code(&apsp(&["apsp", "--algo", "exact", &g, "-o", &d])), 0);
    assert_eq!(
        code(&apsp(&["apsp", "--algo", "two-approx-comb", &g, "-o", &e])),
        0
    );

    let same = apsp(&["verify", &d, &d, "--mult", "1", "--add", "0"]);
    assert_eq!(code(&same), 0);
    assert_eq!(report(&same).audit.unwrap().violations, 0);

    let out = apsp(&["verify", &d, &e, "--mult", "2", "--add", "0"]);
    assert_eq!(code(&out), 0);
    let audit = report(&out).audit.unwrap();
    assert_eq!(audit.violations, 0);
    assert_eq!(audit.pairs, 80 * 79);
    assert!(audit.max_ratio <= 2.0);
}

#[test]
fn every_algorithm_passes_its_own_audit() {
    let dir = tempfile::tempdir().unwrap();
    let unweighted = gen(dir.path(), "u.txt", "70", "0.15", "1", "5");
    let weighted = gen(dir.path(), "w.txt", "70", "0.15", "40", "5");
    let runs: [(&str, &str, &[&str]); 8] = [
        ("exact", &weighted, &[]),
        ("two-approx", &unweighted, &[]),
        ("two-approx-comb", &unweighted, &[]),
        ("near-additive", &unweighted, &["--k", "4", "--eps", "0.1"]),
        ("dense-weighted", &weighted, &["--p", "0.3", "--eps", "1/4"]),
        ("dense-weighted", &weighted, &[]),
        ("bk", &weighted, &["--r", "0.5", "--eps", "0"]),
        ("bk", &weighted, &["--r", "1"]),
    ];
    for (algo, g, extra) in runs {
        let mut args = vec!["apsp", "--algo", algo, g, "--seed", "9", "--audit"];
        args.extend_from_slice(extra);
        let out = apsp(&args);
        assert_eq!(
            code(&out),
            0,
            "{algo}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r = report(&out);
        assert_eq!(r.algorithm.as_deref(), Some(algo));
        assert_eq!(r.audit.unwrap().violations, 0, "{algo}");
    }
}

#[test]
fn bk_contract_is_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "90", "0.08", "100", "11");
    let out = apsp(&[
        "apsp", "--algo", "bk", "--r", "0.5", "--eps", "0", &g, "--audit",
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(r.params.contains(&("contract".into(), "(2, 0)".into())));
    assert_eq!(r.audit.unwrap().contract, "(2, 0)");
}

#[test]
fn text_output_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "30", "0.2", "9", "2");
    let d = p(dir.path(), "d.txt");
    let out = apsp(&["apsp", "--algo", "exact", &g, "-o", &d, "--format", "text"]);
    assert_eq!(code(&out), 0);
    let m = EstimateMatrix::read_text(fs::read(&d).unwrap().as_slice()).unwrap();
    assert_eq!(
        m.as_slice(),
        exact_apsp(&load_graph(&g).unwrap()).as_slice()
    );
    assert_eq!(code(&apsp(&["verify", &d, &d])), 0);
}

#[test]
fn verify_catches_an_injected_underestimate() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "40", "0.2", "20", "4");
    let d = p(dir.path(), "d.bin");
    assert_eq!(code(&apsp(&["apsp", "--algo", "exact", &g, "-o", &d])), 0);

    let mut m = EstimateMatrix::read_binary(fs::read(&d).unwrap().as_slice()).unwrap();
    let (u, v) = (0..40)
        .flat_map(|u| (0..40).map(move |v| (u, v)))
        .find(|&(u, v)| u != v && m.get(u, v) > 0 && m.get(u, v) < apsp_core::INF)
        .unwrap();
    m.set(u, v, m.get(u, v) - 1);
    let bad = p(dir.path(), "bad.bin");
    m.write_binary(fs::File::create(&bad).unwrap()).unwrap();

    let out = apsp(&["verify", &d, &bad, "--mult", "2", "--add", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out).audit.unwrap().violations, 1);
}

#[test]
fn oracle_build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "120", "0.05", "30", "6");
    let graph = load_graph(&g).unwrap();
    let d = exact_apsp(&graph);

    for kind in ["two", "two-w"] {
        let blob = p(dir.path(), &format!("{kind}.bin"));
        let out = apsp(&[
            "oracle", "build", &g, "--kind", kind, "--p", "0.2", "--seed", "6", "-o", &blob,
            "--audit",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(report(&out).audit.unwrap().violations, 0);

        let q = apsp(&["oracle", "query", &blob, "17", "17", "--kind", kind]);
        assert_eq!(code(&q), 0);
        let text = String::from_utf8(q.stdout).unwrap();
        assert_eq!(text.lines().next(), Some("0"));
        assert!(text.contains("table=") && text.contains("via_pivot_u="));
    }

    // a direct edge (u, v) with v in B(u) is answered exactly
    let o = build_oracle_2(&graph, 0.2, 6);
    let (u, v, _) = graph
        .edges()
        .find(|&(u, v, _)| o.bunches().in_bunch(u, v).is_some())
        .expect("some edge inside a bunch");
    let blob = p(dir.path(), "two.bin");
    let q = apsp(&["oracle", "query", &blob, &u.to_string(), &v.to_string()]);
    let first = String::from_utf8(q.stdout)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(first, d.get(u, v).to_string());
}

#[test]
fn oracle_query_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "20", "0.3", "5", "1");
    let blob = p(dir.path(), "o.bin");
    assert_eq!(code(&apsp(&["oracle", "build", &g, "-o", &blob])), 0);
    assert_eq!(code(&apsp(&["oracle", "query", &blob, "0", "20"])), 2);
    // kind recorded in the blob must match
    assert_eq!(
        code(&apsp(&[
            "oracle", "query", &blob, "0", "1", "--kind", "two-w"
        ])),
        2
    );
    assert_eq!(code(&apsp(&["oracle", "query", &g, "0", "1"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "20", "0.3", "5", "1");
    let h = gen(dir.path(), "h.txt", "21", "0.3", "1", "1");
    assert_eq!(code(&apsp(&["apsp", "--algo", "nonsense", &g])), 2);
    assert_eq!(code(&apsp(&["gen", "-p", "0.1"])), 2);
    assert_eq!(code(&apsp(&["gen", "-n", "0"])), 2);
    assert_eq!(code(&apsp(&["gen", "-n", "5", "-p", "1.5"])), 2);
    assert_eq!(code(&apsp(&["frobnicate"])), 2);
    assert_eq!(
        code(&apsp(&["apsp", "--algo", "exact", "/no/such/file"])),
        2
    );
    // unweighted-only routine on a weighted graph
    assert_eq!(code(&apsp(&["apsp", "--algo", "two-approx", &g])), 2);
    assert_eq!(
        code(&apsp(&["apsp", "--algo", "near-additive", "--k", "3", &h])),
        2
    );
    assert_eq!(code(&apsp(&["apsp", "--algo", "bk", "--r", "2", &g])), 2);

    let (a, b) = (p(dir.path(), "a.bin"), p(dir.path(), "b.bin"));
    assert_eq!(code(&apsp(&["apsp", "--algo", "exact", &g, "-o", &a])), 0);
    assert_eq!(code(&apsp(&["apsp", "--algo", "exact", &h, "-o", &b])), 0);
    assert_eq!(code(&apsp(&["verify", &a, &b])), 2);
}

#[test]
fn thread_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.txt", "60", "0.1", "10", "2");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_apsp"))
            .args(["apsp", "--algo", "bk", &g, "--audit"])
            .env("APSP_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1")), 0);
    assert_eq!(code(&run("0")), 0);
    assert_eq!(code(&run("many")), 2);
}

#[test]
fn bench_reports_each_size() {
    let out = apsp(&["bench", "--sizes", "60,120"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    for n in [60, 120] {
        assert!(r
            .phases
            .iter()
            .any(|(k, _)| *k == format!("n{n}.two_build")));
        assert!(r
            .sizes
            .iter()
            .any(|(k, b)| *k == format!("n{n}.two_w_bytes") && *b > 0));
    }
}
