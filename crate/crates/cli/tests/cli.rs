use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn krev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krev")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const FIG1_T1: &str = "n=8\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n6 8\n";

#[test]
fn simulate_p3_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_graph(dir.path(), "p3.txt", "n=3\n1 2\n2 3\n");
    let o = krev(&["simulate", "--graph", &p3, "--config", "+-+", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "tau=0 period=2 E_final=1\n");

    let o = krev(&["simulate", "--graph", &p3, "--config", "+-+", "--k", "2", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], r#"{"t":0,"x":"+-+","E":2}"#);
    assert_eq!(lines.last().unwrap(), &"tau=1 period=1 E_final=6");
}

#[test]
fn simulate_figure_one_tree() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "t1.txt", FIG1_T1);
    let o = krev(&["simulate", "--graph", &g, "--config", "+-+-+-+-", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["tau"], 5);
    assert_eq!(v["period"], 1);
}

#[test]
fn bounds_report_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "t1.txt", FIG1_T1);
    let o = krev(&["bounds", "--graph", &g, "--config", "+-+-+-+-", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["general_bound"], 31);
    assert_eq!(v["tree_bound"], 23);
    assert_eq!(v["tree_max_energy"], 16);
    assert_eq!(v["theorem2_bound"], 21);
}

#[test]
fn energy_trace_is_non_decreasing() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_graph(dir.path(), "t1.txt", FIG1_T1);
    let o = krev(&["energy-trace", "--graph", &g, "--config", "+-+-+-+-", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["energy"], v["energy_aux"]);
        assert!(v["energy_next"].as_u64() >= v["energy"].as_u64());
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write_graph(dir.path(), "p3.txt", "n=3\n1 2\n2 3\n");
    let bad = write_graph(dir.path(), "bad.txt", "n=3\n1 2\n2 7\n");
    for args in [
        vec!["simulate", "--graph", p3.as_str(), "--config", "+x+"],
        vec!["simulate", "--graph", p3.as_str(), "--config", "++"],
        vec!["simulate", "--graph", bad.as_str(), "--config", "+++"],
        vec!["simulate", "--graph", p3.as_str()],
        vec!["simulate", "--graph", p3.as_str(), "--config", "+-+", "--k", "0"],
        vec!["conjecture", "--n", "4"],
        vec!["frobnicate"],
    ] {
        assert_eq!(krev(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn generate_reproduces_figure_one() {
    let o = krev(&["generate", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("# T_").count(), 4);
    assert!(out.contains("# T_4\nn=8\n1 2\n2 4\n3 4\n4 6\n5 6\n5 8\n6 7\n# config +-+-+-+-"));

    let o = krev(&["generate", "--n", "9", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("tau=6").count(), 3);
}

#[test]
fn conjecture_verdicts() {
    let o = krev(&["conjecture", "--n", "8", "--workers", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tau_max"], 5);
    assert_eq!(v["tree_count"], 4);
    assert_eq!(v["verdict"], "pass");

    // P5 also reaches n - 3 at n = 5, so the tree count claim fails there
    let o = krev(&["conjecture", "--n", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tree_count"], 2);
    assert_eq!(v["verdict"], "fail");

    assert_eq!(krev(&["validate-alg1", "--n", "9"]).status.code(), Some(0));
    assert_eq!(krev(&["validate-alg1", "--n", "5"]).status.code(), Some(3));
}

#[test]
fn conjecture_json_is_identical_across_workers_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["conjecture", "--n", "10", "--format", "json"];
        args.extend_from_slice(extra);
        let o = krev(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    let one = run(&["--workers", "1"]);
    assert_eq!(one, run(&["--workers", "8"]));

    let ledger = dir.path().join("ledger.jsonl");
    let ledger_arg = ledger.to_str().unwrap();
    assert_eq!(one, run(&["--workers", "2", "--checkpoint", ledger_arg]));

    // keep a prefix of the ledger with a torn final line, then resume
    let text = fs::read_to_string(&ledger).unwrap();
    let cut: usize = text.lines().take(30).map(|l| l.len() + 1).sum::<usize>() + 10;
    fs::write(&ledger, &text[..cut]).unwrap();
    assert_eq!(one, run(&["--workers", "1", "--checkpoint", ledger_arg]));
    assert_eq!(fs::read_to_string(&ledger).unwrap().lines().count(), 106);
}
