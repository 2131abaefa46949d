use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn chromlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromlab"))
        .current_dir(dir)
        .env_remove("CHROMLAB_OUT")
        .env_remove("CHROMLAB_FORMAT")
        .env_remove("CHROMLAB_THREADS")
        .env_remove("CHROMLAB_BUDGET_MS")
        .env_remove("CHROMLAB_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn manifest_path(o: &Output, dir: &Path) -> PathBuf {
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().find_map(|l| l.strip_prefix("manifest: ")).expect("manifest line");
    dir.join(line)
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1")
}

fn validate(name: &str, v: &Value) {
    let schema: Value = serde_json::from_slice(&std::fs::read(schema_dir().join(format!("{name}.schema.json"))).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn profile_of_one_thousand() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_out(&chromlab(dir.path(), &["profile", "1000"]));
    assert_eq!(v["a"], 15);
    assert_eq!(v["n_prime"], "1060");
    assert!(dir.path().join("lab-out").is_dir());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(chromlab(p, &["--frobnicate", "profile", "10"]).status.code(), Some(64));
    assert_eq!(chromlab(p, &["profile"]).status.code(), Some(64));
    assert_eq!(chromlab(p, &["--help"]).status.code(), Some(0));
    assert_eq!(chromlab(p, &["profile", "3"]).status.code(), Some(2));
    assert_eq!(chromlab(p, &["poisson-shift", "1000", "0.1", "1000.."]).status.code(), Some(2));
    assert_eq!(chromlab(p, &["find-band", "0.46", "0.47", "10^6", "--cap", "3"]).status.code(), Some(3));
    assert_eq!(chromlab(p, &["couple", "30", "2", "1", "1", "0", "--max-attempts", "2"]).status.code(), Some(3));
}

#[test]
fn couple_writes_pair_and_closes_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let o = chromlab(dir.path(), &["couple", "40", "8", "2", "1", "7"]);
    let v = json_out(&o);
    assert_eq!(v["gap_ok"], true);
    assert_eq!(v["check_ok"], true);
    assert_eq!(v["check"]["count_h"], 2);
    assert_eq!(v["check"]["count_h_prime"], 3);
    for f in v["files"].as_array().unwrap() {
        assert!(dir.path().join("lab-out").join(f.as_str().unwrap()).is_file());
    }
}

#[test]
fn ledger_enumerates_and_telescopes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_out(&chromlab(dir.path(), &["ledger", "0.2", "1000000"]));
    assert_eq!(v["i_max"]["kind"], "exact");
    assert_eq!(v["telescoping_ok"], true);
    assert!(v["crossover_n"]["n"].is_string());
}

#[test]
fn replay_reproduces_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let o = chromlab(dir.path(), &["xk-dist", "24", "6", "120", "3"]);
    let m = manifest_path(&o, dir.path());
    let r = chromlab(dir.path(), &["replay", m.to_str().unwrap()]);
    let v = json_out(&r);
    assert_eq!(v["identical"], true);
    validate("replay", &v);

    let mut man: Value = serde_json::from_slice(&std::fs::read(&m).unwrap()).unwrap();
    man["artifacts"][0]["sha256"] = Value::String("0".repeat(64));
    std::fs::write(&m, serde_json::to_vec(&man).unwrap()).unwrap();
    let r = chromlab(dir.path(), &["--out", "again", "replay", m.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = chromlab(dir.path(), &["--threads", "1", "--out", "one", "chi-interval", "30", "50", "4"]);
    let b = chromlab(dir.path(), &["--threads", "3", "--out", "three", "chi-interval", "30", "50", "4"]);
    let ma: Value = serde_json::from_slice(&std::fs::read(manifest_path(&a, dir.path())).unwrap()).unwrap();
    let mb: Value = serde_json::from_slice(&std::fs::read(manifest_path(&b, dir.path())).unwrap()).unwrap();
    assert_eq!(ma["artifacts"], mb["artifacts"]);
    assert_eq!(ma["threads"], 1);
    assert_eq!(mb["threads"], 3);
}

#[test]
fn precedence_is_flag_then_env_then_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"out": "from-config", "format": "csv", "budget_ms": 5}"#).unwrap();
    let c = cfg.to_str().unwrap();

    let o = chromlab(dir.path(), &["--config", c, "ybound", "10^6", "100"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("t[size],log2_sigma[bits]\n"));
    let m: Value = serde_json::from_slice(&std::fs::read(manifest_path(&o, dir.path())).unwrap()).unwrap();
    assert_eq!(m["budget_ms"], 5);
    assert!(dir.path().join("from-config").is_dir());

    let o = Command::new(env!("CARGO_BIN_EXE_chromlab"))
        .current_dir(dir.path())
        .env("CHROMLAB_FORMAT", "json")
        .env("CHROMLAB_OUT", "from-env")
        .args(["--config", c, "--out", "from-flag", "fgap", "10^6"])
        .output()
        .unwrap();
    json_out(&o);
    assert!(dir.path().join("from-flag").is_dir());
    assert!(!dir.path().join("from-env").exists());

    std::fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(chromlab(dir.path(), &["--config", c, "profile", "10"]).status.code(), Some(2));
}

#[test]
fn outputs_match_shipped_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[(&str, &[&str])] = &[
        ("profile", &["profile", "10^12"]),
        ("find-band", &["find-band", "0.3", "0.5", "10^5"]),
        ("fgap", &["fgap", "10^6"]),
        ("ybound", &["ybound", "10^6", "100"]),
        ("ledger", &["ledger", "0.2", "10^6", "--enumerate-cap", "10"]),
        ("poisson-shift", &["poisson-shift", "1000", "0.1", "1190.."]),
        ("sample", &["sample", "20", "1", "--dimacs"]),
        ("xk-dist", &["xk-dist", "20", "6", "100", "1"]),
        ("couple", &["couple", "14", "6", "1", "1", "2"]),
        ("claim2", &["claim2", "16", "5", "1", "20", "triangle_count", "1"]),
        ("chi-interval", &["chi-interval", "20", "50", "1"]),
    ];
    let columns: Value = serde_json::from_slice(&std::fs::read(schema_dir().join("csv-columns.json")).unwrap()).unwrap();
    for (name, args) in runs {
        let o = chromlab(dir.path(), args);
        let v = json_out(&o);
        validate(name, &v);
        let mpath = manifest_path(&o, dir.path());
        let m: Value = serde_json::from_slice(&std::fs::read(&mpath).unwrap()).unwrap();
        validate("manifest", &m);
        assert_eq!(m["experiment"], *name);
        for art in m["artifacts"].as_array().unwrap() {
            let f = art["file"].as_str().unwrap();
            if let Some(stem) = f.strip_suffix(".csv") {
                let text = std::fs::read_to_string(mpath.parent().unwrap().join(f)).unwrap();
                let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
                let want: Vec<&str> =
                    columns["tables"][*name].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
                assert_eq!(header, want, "{stem}");
            }
        }
    }
}
