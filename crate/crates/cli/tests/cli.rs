use std::path::Path;
use std::process::{Command, Output};

use kq::formats::{ReportJson, RepresentationJson};

fn kq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kq"))
        .args(args)
        .env_remove("KQ_SEED")
        .env_remove("KQ_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn vprime_a2() {
    let o = kq(&[
        "stability",
        "vprime",
        "--group",
        "A2",
        "--I",
        "1",
        "--nI",
        "2",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("v' = (1;3,2,3)\n"));
    let o = kq(&[
        "stability",
        "vprime",
        "--group",
        "A2",
        "--I",
        "1",
        "--nI",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["v"]["weights"], serde_json::json!([3, 2, 3]));
    assert_eq!(v["v"]["inf"], 1);
}

#[test]
fn oracle_count_z3() {
    let o = kq(&["oracle", "count", "--m", "3", "--v", "1,1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn mckay_show_d4_json() {
    let o = kq(&["mckay", "show", "--group", "D4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["delta"], serde_json::json!([1, 1, 2, 1, 1]));
    assert_eq!(v["adjacency"][2], serde_json::json!([1, 1, 0, 1, 1]));
}

#[test]
fn certify_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    let f = file.to_str().unwrap();
    let o = kq(&[
        "oracle",
        "certify",
        "--m",
        "3",
        "--partition",
        "3,1",
        "--output",
        f,
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    let parsed: RepresentationJson = serde_json::from_str(&text).unwrap();
    let (_, rep) = parsed.to_rep().unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);
    assert!(rep.is_a_module());
    let o = kq(&["rep", "check", f, "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generated_at_inf"], true);
    let o = kq(&["rep", "stability", f, "--theta=-4,1,1,2"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("stable\n"));
}

#[test]
fn broken_module_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    let f = file.to_str().unwrap();
    assert!(kq(&[
        "oracle",
        "certify",
        "--m",
        "2",
        "--partition",
        "2",
        "--output",
        f
    ])
    .status
    .success());
    let mut j: RepresentationJson =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    // b* must act by zero
    assert_eq!(
        (j.arrows[1].tail.as_str(), j.arrows[1].head.as_str()),
        ("0", "inf")
    );
    j.arrows[1].entries[0] = kq::formats::RationalJson::Small([1, 1]);
    std::fs::write(&file, serde_json::to_string(&j).unwrap()).unwrap();
    assert_eq!(kq(&["rep", "check", f]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(
        kq(&["pipeline", "run", "--group", "A3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        kq(&["mckay", "show", "--group", "D3"]).status.code(),
        Some(1)
    );
    assert_eq!(kq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        kq(&["rep", "check", "/nonexistent.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn resource_guard_exits_three() {
    let o = kq(&["pipeline", "run", "--group", "E7", "--I", "7", "--nI", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let r = ReportJson::parse(&stdout(&o)).unwrap();
    assert!(r.errors.iter().any(|e| e.contains("exceeds")));
    assert!(r.invariants_ok);
}

fn pipeline_json(dir: &Path, name: &str, extra: &[&str]) -> String {
    let file = dir.join(name);
    let mut args = vec!["pipeline", "run", "--json", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = kq(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(file).unwrap()
}

#[test]
fn pipeline_report_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--group", "D4", "--I", "0", "--nI", "1", "--seed", "5"];
    let a = pipeline_json(dir.path(), "a.json", &args);
    let b = pipeline_json(
        dir.path(),
        "b.json",
        &[&args[..], &["--threads", "1"]].concat(),
    );
    let c = pipeline_json(
        dir.path(),
        "c.json",
        &[&args[..], &["--threads", "3"]].concat(),
    );
    assert_eq!(a, b);
    assert_eq!(a, c);
    let r = ReportJson::parse(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", a);
    assert!(r.invariants_ok);
    assert_eq!(r.quiver_variety, "nonempty");
    assert_eq!(r.seed, 5);
    assert!(r.semistable.unwrap().verify().unwrap());
    assert!(r.v_tilde.unwrap().witness.unwrap().verify().unwrap());
}

#[test]
fn config_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("r.json");
    std::fs::write(
        &cfg,
        format!(
            "group = \"A2\"\nI = [0]\nnI = [1]\nseed = 11\noutput = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = kq(&["pipeline", "run", "--config", c]);
    assert!(o.status.success());
    assert_eq!(
        ReportJson::parse(&std::fs::read_to_string(&out).unwrap())
            .unwrap()
            .seed,
        11
    );
    // flag beats file
    assert!(kq(&["pipeline", "run", "--config", c, "--seed", "12"])
        .status
        .success());
    assert_eq!(
        ReportJson::parse(&std::fs::read_to_string(&out).unwrap())
            .unwrap()
            .seed,
        12
    );
    // env beats file
    let o = Command::new(env!("CARGO_BIN_EXE_kq"))
        .args(["pipeline", "run", "--config", c])
        .env("KQ_SEED", "13")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(
        ReportJson::parse(&std::fs::read_to_string(&out).unwrap())
            .unwrap()
            .seed,
        13
    );
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(
        kq(&["pipeline", "run", "--config", c]).status.code(),
        Some(1)
    );
}

#[test]
fn dot_and_csv_outputs() {
    let o = kq(&["mckay", "dot", "--group", "A2"]);
    assert!(stdout(&o).starts_with("digraph"));
    assert_eq!(stdout(&o).matches("->").count(), 8);
    let o = kq(&[
        "algebra", "basis", "--group", "A1", "--kind", "A_I", "--I", "0", "--cap", "3", "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[0][1], "2");
}
