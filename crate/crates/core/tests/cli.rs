mod common;

use std::process::{Command, Output};

use common::fixture_path;

fn pep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pep"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    fixture_path(name).to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn parse_reports_machines_and_entry() {
    let o = pep(&["parse", &fixture("harddrive.pep")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: 5 machines, entry CPU\n");
}

#[test]
fn parse_dumps_the_compiled_program() {
    let o = pep(&["parse", &fixture("harddrive.pep"), "--dump-ast"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("program\n  entry CPU\n"));
    assert!(text.contains("  machine HDHead\n"));
}

#[test]
fn invalid_programs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pep");
    std::fs::write(&bad, "machine X {\n  init state a(e) { emit \"x\"; }\n}").unwrap();
    let bad = bad.to_str().unwrap();
    for args in [
        vec!["parse", bad],
        vec!["run", bad],
        vec!["check", bad, "--depth", "3"],
    ] {
        let o = pep(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(
            stderr(&o).contains("syntax error at 2:21"),
            "{}",
            stderr(&o)
        );
    }
    let o = pep(&["parse", "/nonexistent/file.pep"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn machine_without_init_state_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pep");
    std::fs::write(&bad, "machine X {}\nctl.run(X);\n").unwrap();
    let o = pep(&["parse", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no init state"), "{}", stderr(&o));
}

#[test]
fn unreacted_event_is_logged_as_a_drop() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("deaf.pep");
    std::fs::write(
        &src,
        "machine Root { c = null; init state s(e) { c = ctl.start(Deaf, null); emit (\"hi\") to c; } }\n\
         machine Deaf { init state s(e) { } }\nctl.run(Root);\n",
    )
    .unwrap();
    let trace = dir.path().join("t.jsonl");
    let o = pep(&[
        "run",
        src.to_str().unwrap(),
        "--max-steps",
        "300",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&trace).unwrap();
    let drop = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["kind"] == "drop")
        .expect("a drop entry");
    assert_eq!(drop["label"], "no-reaction");
    assert_eq!(drop["actors"][0], "prog(2)");
    assert_eq!(drop["event"][2], "hi");
}

#[test]
fn one_step_gives_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let o = pep(&[
        "run",
        &fixture("ack.pep"),
        "--max-steps",
        "1",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with(r#"{"step":0,"#));
}

#[test]
fn bad_arguments_exit_with_one() {
    assert_eq!(
        pep(&["run", &fixture("ack.pep"), "--policy", "fifo"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pep(&["check", &fixture("ack.pep")]).status.code(), Some(1));
    assert_eq!(pep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(pep(&["--help"]).status.code(), Some(0));
}

#[test]
fn run_exit_codes_follow_the_outcome() {
    let o = pep(&["run", &fixture("ack.pep"), "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("terminated after "));

    let o = pep(&["run", &fixture("harddrive.pep"), "--max-steps", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "step-cap-reached after 10 steps\n");

    let o = pep(&["run", &fixture("deadlock.pep")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "deadlocked after 0 steps\n");
}

#[test]
fn run_writes_trace_and_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let msc = dir.path().join("t.mmd");
    let o = pep(&[
        "run",
        &fixture("harddrive.pep"),
        "--policy",
        "roundrobin",
        "--trace",
        trace.to_str().unwrap(),
        "--msc",
        msc.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(meta["kind"], "meta");
    assert_eq!(meta["policy"], "roundrobin");
    assert_eq!(meta["entry"], "CPU");
    let mut arrows = 0;
    for (i, line) in lines.enumerate() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["step"], i);
        let actors = v["actors"].as_array().unwrap().len();
        match v["kind"].as_str() {
            Some("comm") => assert_eq!(actors, 2),
            Some("solo" | "drop") => assert_eq!(actors, 1),
            other => panic!("kind {other:?}"),
        }
        let name = v["name"].as_str().unwrap_or_default();
        let sub = v["sub"].as_str().unwrap_or_default();
        let to_instance = sub.parse::<u64>().is_ok();
        if v["kind"] == "comm"
            && to_instance
            && matches!(name, "out" | "distrib" | "start" | "new_id" | "halt")
        {
            arrows += 1;
        }
        if let Some(ev) = v["event"].as_array() {
            assert_eq!(ev.len(), 4);
            assert!(matches!(ev[3].as_u64(), Some(0 | 1)));
        }
    }
    let diagram = std::fs::read_to_string(&msc).unwrap();
    assert!(diagram.starts_with("sequenceDiagram\n"));
    assert_eq!(
        diagram.lines().filter(|l| l.contains(" ->> ")).count(),
        arrows
    );
    assert!(diagram.contains("participant MC"));
    let prog_a = diagram
        .lines()
        .find_map(|l| l.trim().strip_prefix("participant ProgA_"))
        .expect("ProgA participant");
    assert!(diagram.contains(&format!("ProgA_{prog_a} ->> MC : out read")));
}

#[test]
fn check_reports_deadlocks() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = pep(&[
        "check",
        &fixture("deadlock.pep"),
        "--depth",
        "5",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        stdout(&o),
        "depth 5: 1 states, 1 deadlocks, 0 teardown violations\n"
    );
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["deadlocks"].as_array().unwrap().len(), 1);
    assert_eq!(r["deadlocks"][0]["depth"], 0);
}

#[test]
fn check_of_the_halt_race_is_clean() {
    let o = pep(&["check", &fixture("haltrace.pep"), "--depth", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("depth 20: 577316 states, 0 deadlocks, 0 teardown violations"));
}
