use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn pgk(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pgk"));
    cmd.args(args).env_remove("PGK_CONFIG");
    match cache {
        Some(dir) => cmd.env("PGK_CACHE", dir),
        None => cmd.env_remove("PGK_CACHE"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn decided_reduction() {
    let out = pgk(&["reduce", "--p", "7", "--k", "5", "--ap", "7"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "pgk.reduction/1");
    assert_eq!(v["kind"], "irred_ind");
    assert_eq!(v["h"], 4);
    assert_eq!(v["rep"]["schema"], "pgk.galois_ss/1");
}

#[test]
fn undecided_outcomes_exit_three() {
    let unknown = pgk(&["reduce", "--p", "5", "--k", "12", "--ap", "5"], None);
    assert_eq!(unknown.status.code(), Some(3));
    assert_eq!(json(&unknown)["kind"], "unknown");
    let ambiguous = pgk(&["reduce", "--p", "5", "--k", "15", "--ap", "5^(1/2)"], None);
    assert_eq!(ambiguous.status.code(), Some(3), "{}", String::from_utf8_lossy(&ambiguous.stderr));
    let v = json(&ambiguous);
    assert_eq!(v["kind"], "ambiguous");
    assert_eq!(v["case"], "5b-ii");
}

#[test]
fn errors_carry_schema_and_code() {
    let prec = pgk(&["reduce", "--p", "5", "--k", "12", "--ap", "O(5^1)"], None);
    assert_eq!(prec.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&prec.stderr).unwrap();
    assert_eq!(err["schema"], "pgk.error/1");
    assert_eq!(err["error"], "insufficient_precision");
    assert_eq!(pgk(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(pgk(&["reduce", "--p", "4", "--k", "3", "--ap", "4"], None).status.code(), Some(1));
    assert_eq!(pgk(&["--help"], None).status.code(), Some(0));
}

#[test]
fn series_and_structure_commands() {
    let out = pgk(&["series", "psi", "--f", "X"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "pgk.series_result/1");

    let out = pgk(&["admissible", "--p", "5", "--k", "4", "--linv", "1"], None);
    let v = json(&out);
    assert_eq!(v["schema"], "pgk.admissibility/1");
    assert_eq!(v["verdict"], "ADMISSIBLE");
    let v = json(&pgk(&["admissible", "--p", "5", "--k", "4", "--ap", "-3*5^2"], None));
    assert_eq!(v["verdict"], "ADMISSIBLE");

    let out = pgk(&["ext-dim", "--p", "5", "--d1", r#"{"c_p":"1","j":0,"s":"0"}"#, "--d2", r#"{"c_p":"1","j":0,"s":"0"}"#], None);
    let v = json(&out);
    assert_eq!(v["schema"], "pgk.ext_dim/1");
    assert_eq!(v["dim"], 2);

    let out = pgk(&["tree", "--p", "3", "--r", "1", "--radius", "2", "--op", "dim"], None);
    let v = json(&out);
    assert_eq!(v["schema"], "pgk.tree_dim/1");
    assert_eq!(v["dim"], 2 * (1 + 4 + 12));

    let doc = r#"{"p":5,"kind":"split","chars":[{"t":0,"lambda":1},{"t":1,"lambda":1}]}"#;
    let v = json(&pgk(&["correspond", "--input", doc], None));
    assert_eq!(v["schema"], "pgk.gl2_ss/1");
}

#[test]
fn sweep_is_byte_stable_and_cache_transparent() {
    let args = ["sweep", "--p", "5", "--k", "2..12", "--vals", "1/2,1,2"];
    let plain = pgk(&args, None);
    assert_eq!(plain.status.code(), Some(0));
    let text = String::from_utf8(plain.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 34);
    assert_eq!(pgk(&args, None).stdout, plain.stdout);

    let dir = tempfile::tempdir().unwrap();
    let cold = pgk(&args, Some(dir.path()));
    let warm = pgk(&args, Some(dir.path()));
    assert_eq!(cold.stdout, plain.stdout);
    assert_eq!(warm.stdout, plain.stdout);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 33);

    let empty = pgk(&["sweep", "--p", "5", "--k", "3..2", "--vals", "1"], None);
    assert_eq!(String::from_utf8(empty.stdout).unwrap().lines().count(), 1);

    let j = pgk(&["sweep", "--p", "5", "--k", "2..4", "--vals", "1", "--format", "json"], None);
    let v = json(&j);
    assert_eq!(v["schema"], "pgk.sweep/1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn out_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = pgk(&["--out", out.to_str().unwrap(), "reduce", "--p", "7", "--k", "5", "--ap", "7"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["kind"], "irred_ind");

    let cfg = dir.path().join("pgk.toml");
    std::fs::write(&cfg, "p = 7\na = 4\nn = 16\n").unwrap();
    let v = json(&pgk(&["--config", cfg.to_str().unwrap(), "series", "show", "--f", "1 + X"], None));
    assert_eq!(v["p"], 7);
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(pgk(&["--config", cfg.to_str().unwrap(), "series", "show", "--f", "X"], None).status.code(), Some(1));
}
