use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/hospital")
        .join(name)
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hybridsizer"));
    cmd.args(args)
        .env_remove("HYBRIDSIZER_OUT")
        .env_remove("HYBRIDSIZER_JOBS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_grid_only_writes_run_directory() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(
        &[
            "simulate",
            s(&data("scenario_grid_only.json")),
            "--out",
            s(&out),
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let t5 = fs::read_to_string(out.join("tables/T5.csv")).unwrap();
    assert_eq!(
        t5.lines().nth(1).unwrap(),
        "1,Grid,0,0,409335,0,0,409335,6.45M,0.1000"
    );
    assert_eq!(
        fs::read_to_string(out.join("trace/load.csv"))
            .unwrap()
            .lines()
            .count(),
        8761
    );

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["label"], "Grid");
    assert!(
        (summary["dispatch"]["grid_purchase_kwh"].as_f64().unwrap() - 4_093_351.0).abs() <= 1.0
    );

    let m = manifest(&out);
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["exit_code"], 0);
    let inputs = m["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 5);
    assert!(inputs
        .iter()
        .all(|i| i["sha256"].as_str().unwrap().len() == 64));
}

#[test]
fn invalid_scenario_exits_two_with_manifest() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    let text = fs::read_to_string(data("scenario_grid_only.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v.as_object_mut().unwrap().remove("grid");
    fs::write(&bad, v.to_string()).unwrap();
    let out = tmp.path().join("run");

    let o = run(&["validate", s(&bad), "--out", s(&out)], &[]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stdout).contains("generation source"));
    let o = run(&["simulate", s(&bad), "--out", s(&out)], &[]);
    assert_eq!(code(&o), 2);
    let m = manifest(&out);
    assert_eq!(m["exit_code"], 2);
    assert!(m["error"].as_str().unwrap().contains("validation"));
}

#[test]
fn malformed_json_exits_two() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, "{ \"pv\": ").unwrap();
    let o = run(
        &["validate", s(&bad), "--out", s(&tmp.path().join("run"))],
        &[],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn missing_input_exits_one_with_manifest() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(
        &[
            "simulate",
            s(&tmp.path().join("nope.json")),
            "--out",
            s(&out),
        ],
        &[],
    );
    assert_eq!(code(&o), 1);
    assert_eq!(manifest(&out)["exit_code"], 1);
}

#[test]
fn missing_resource_file_exits_one() {
    let tmp = TempDir::new().unwrap();
    let scenario = tmp.path().join("scenario.json");
    fs::copy(data("scenario_grid_only.json"), &scenario).unwrap();
    let o = run(
        &[
            "simulate",
            s(&scenario),
            "--out",
            s(&tmp.path().join("run")),
        ],
        &[],
    );
    assert_eq!(code(&o), 1);
    let resources = data("");
    let o = run(
        &[
            "simulate",
            s(&scenario),
            "--resources",
            s(&resources),
            "--out",
            s(&tmp.path().join("run")),
        ],
        &[],
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn validate_accepts_shipped_files() {
    let tmp = TempDir::new().unwrap();
    for f in [
        "scenario_bg_grid.json",
        "space_grid.json",
        "space_island.json",
    ] {
        let o = run(&["validate", s(&data(f)), "--out", s(tmp.path())], &[]);
        assert_eq!(code(&o), 0, "{f}");
        assert!(String::from_utf8_lossy(&o.stdout).starts_with("ok"));
    }
}

#[test]
fn optimize_output_independent_of_jobs() {
    let tmp = TempDir::new().unwrap();
    let one = tmp.path().join("one");
    let many = tmp.path().join("many");
    let space = data("space_grid.json");
    assert_eq!(
        code(&run(
            &["optimize", s(&space), "--jobs", "1", "--out", s(&one)],
            &[]
        )),
        0
    );
    let o = run(
        &["optimize", s(&space)],
        &[("HYBRIDSIZER_JOBS", "3"), ("HYBRIDSIZER_OUT", s(&many))],
    );
    assert_eq!(code(&o), 0);
    for f in ["T2", "T3", "T4", "T5", "T6", "T7"] {
        let path = format!("tables/{f}.csv");
        assert_eq!(
            fs::read(one.join(&path)).unwrap(),
            fs::read(many.join(&path)).unwrap()
        );
    }
    assert_eq!(
        fs::read(one.join("designs.json")).unwrap(),
        fs::read(many.join("designs.json")).unwrap()
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(one.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["candidates"], 192);
}

#[test]
fn cap_flag_overrides_file() {
    let tmp = TempDir::new().unwrap();
    let feasible = |cap: Option<&str>| {
        let out = tmp.path().join(cap.unwrap_or("file"));
        let space = data("space_grid.json");
        let mut args = vec!["optimize", s(&space), "--out", s(&out)];
        if let Some(c) = cap {
            args.extend(["--cap", c]);
        }
        assert_eq!(code(&run(&args, &[])), 0);
        let summary: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
        (
            summary["reliability_cap"].as_f64().unwrap(),
            summary["feasible"].as_u64().unwrap(),
        )
    };
    let (file_cap, file_n) = feasible(None);
    let (cap, n) = feasible(Some("1.0"));
    assert_eq!(file_cap, 0.001);
    assert_eq!(cap, 1.0);
    assert!(n > file_n);
}

#[test]
fn sweep_writes_one_run_per_value() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    let o = run(
        &[
            "sweep",
            s(&data("space_grid.json")),
            "--parameter",
            "grid.purchase_usd_per_kwh",
            "--values",
            "0.05,0.1,0.2",
            "--out",
            s(&out),
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let winners = fs::read_to_string(out.join("winners.csv")).unwrap();
    assert_eq!(winners.lines().count(), 4);
    assert!(winners.starts_with("parameter,value,feasible,winner,design,npc_usd,coe_usd_per_kwh"));
    let runs = fs::read_dir(out.join("sweeps/grid.purchase_usd_per_kwh"))
        .unwrap()
        .count();
    assert_eq!(runs, 3);

    let o = run(
        &[
            "sweep",
            s(&data("space_grid.json")),
            "--parameter",
            "grid.bogus",
            "--values",
            "1",
            "--out",
            s(&out),
        ],
        &[],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_defaults_to_file_sweeps() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    assert_eq!(
        code(&run(
            &["sweep", s(&data("space_grid.json")), "--out", s(&out)],
            &[]
        )),
        0
    );
    assert_eq!(
        fs::read_to_string(out.join("winners.csv"))
            .unwrap()
            .lines()
            .count(),
        9
    );
}

#[test]
fn render_reproduces_written_files() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("run");
    assert_eq!(
        code(&run(
            &[
                "simulate",
                s(&data("scenario_pv_bg_batt.json")),
                "--out",
                s(&out)
            ],
            &[]
        )),
        0
    );
    let side = tmp.path().join("render");

    let o = run(
        &["render", s(&out), "--table", "t4", "--out", s(&side)],
        &[],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, fs::read(out.join("tables/T4.csv")).unwrap());

    let o = run(
        &["render", s(&out), "--channel", "soc", "--out", s(&side)],
        &[],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, fs::read(out.join("trace/soc.csv")).unwrap());

    assert_eq!(
        code(&run(
            &["render", s(&out), "--table", "T9", "--out", s(&side)],
            &[]
        )),
        2
    );
    assert_eq!(
        code(&run(
            &["render", s(&out), "--channel", "heat", "--out", s(&side)],
            &[]
        )),
        2
    );
    assert_eq!(
        code(&run(
            &[
                "render",
                s(&tmp.path().join("none")),
                "--table",
                "T2",
                "--out",
                s(&side)
            ],
            &[]
        )),
        1
    );
}

#[test]
fn help_documents_precedence() {
    let o = run(&["--help"], &[]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("HYBRIDSIZER_JOBS") && text.contains("command-line flag"));
}
