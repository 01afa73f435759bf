use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bwkb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwkb"))
        .args(args)
        .env_remove("BWKB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn error_json(out: &Output, code: i32) -> Value {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let e: Value = serde_json::from_slice(&out.stderr).expect("structured error");
    assert_eq!(e["error"]["exit_code"], code);
    e
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn missing_config_names_the_path() {
    let out = bwkb(&["solve", "--config", "/does/not/exist.toml"]);
    let e = error_json(&out, 2);
    assert!(e["error"]["message"]
        .as_str()
        .unwrap()
        .contains("/does/not/exist.toml"));
}

#[test]
fn malformed_config_is_a_configuration_failure() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "[params]\nkapa = 2.0\n");
    error_json(&bwkb(&["solve", "--config", &unknown]), 2);
    let negative = write_config(dir.path(), "[params]\nkappa = -1.0\n");
    error_json(&bwkb(&["solve", "--config", &negative]), 2);
    let no_file = write_config(
        dir.path(),
        "[data]\nkind = \"file\"\npath = \"absent.json\"\n",
    );
    error_json(&bwkb(&["expand", "--config", &no_file]), 2);
}

fn collect_numbers(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| collect_numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| collect_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn zero_data_solve_has_zero_norms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[data]\nkind = \"zero\"\n");
    let v = json(&bwkb(&["solve", "--config", &cfg]));
    let mut numbers = Vec::new();
    collect_numbers(&v["norms"], &mut numbers);
    assert!(numbers.len() > 10 && numbers.iter().all(|&x| x == 0.0));
    assert_eq!(v["energy"]["lhs"].as_f64().unwrap(), 0.0);
    assert!(v["recovery_error"].is_null());
}

#[test]
fn manufactured_solve_recovers_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[data]\nkind = \"manufactured\"\nactive_modes = 3\nseed = 11\n[discretization]\nn_modes = 8\nn_points = 48\n",
    );
    let v = json(&bwkb(&["solve", "--config", &cfg, "--eps", "0.1"]));
    for e in v["recovery_error"].as_array().unwrap() {
        assert!(e.as_f64().unwrap() <= 1e-8, "{e}");
    }
}

#[test]
fn manufactured_data_rejected_outside_solve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[data]\nkind = \"manufactured\"\n");
    for cmd in ["expand", "converge", "energy"] {
        error_json(&bwkb(&[cmd, "--config", &cfg]), 2);
    }
}

#[test]
fn expand_zero_data_gives_structural_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[data]\nkind = \"zero\"\n");
    let v = json(&bwkb(&["expand", "--config", &cfg, "--order", "3"]));
    let res = v["residuals"].as_array().unwrap();
    assert_eq!(res.len(), 4);
    for r in res {
        for side in r["degrees"].as_array().unwrap() {
            assert!(side.as_array().unwrap().iter().all(Value::is_null), "{r}");
        }
    }
}

#[test]
fn expand_degrees_within_bounds() {
    let v = json(&bwkb(&["expand", "--order", "2"]));
    let res = v["residuals"].as_array().unwrap();
    for r in res {
        let j = r["order"].as_i64().unwrap();
        for side in r["degrees"].as_array().unwrap() {
            for (d, bound) in side.as_array().unwrap().iter().zip([j, j - 1, j - 2]) {
                if let Some(d) = d.as_i64() {
                    assert!(d <= bound, "order {j}: {side}");
                }
            }
        }
    }
    // Generic data reach the velocity bounds at the top order.
    let top = &res[2]["degrees"][0];
    assert_eq!((top[0].as_i64(), top[1].as_i64()), (Some(2), Some(1)));
}

#[test]
fn expand_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert!(
        bwkb(&["expand", "--order", "3", "--out", a.to_str().unwrap()])
            .status
            .success()
    );
    let threaded = Command::new(env!("CARGO_BIN_EXE_bwkb"))
        .args(["expand", "--order", "3", "--out", b.to_str().unwrap()])
        .env("BWKB_THREADS", "1")
        .status()
        .unwrap();
    assert!(threaded.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn expand_order_is_capped() {
    error_json(&bwkb(&["expand", "--order", "7"]), 2);
}

#[test]
fn converge_meets_the_rate_and_reports_energy() {
    let out = bwkb(&["converge", "--order", "2"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "eps,k,porous_l2,porous_grad,fluid_h1,combined,flagged,fitted_slope,theory_slope"
    );
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let slope: f64 = rows[0][7].parse().unwrap();
    let theory: f64 = rows[0][8].parse().unwrap();
    assert!(slope >= theory - 0.2, "{slope} vs {theory}");

    let energy = text
        .lines()
        .find(|l| l.starts_with("# energy"))
        .expect("energy summary");
    let max_ratio: f64 = energy
        .split_whitespace()
        .find_map(|w| w.strip_prefix("max_ratio="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max_ratio.is_finite() && max_ratio > 0.0);
}

#[test]
fn converge_rejects_bad_eps_lists() {
    let e = error_json(&bwkb(&["converge", "--eps-list", "0.001,0.01,0.1,0.3"]), 2);
    assert!(e["error"]["message"]
        .as_str()
        .unwrap()
        .contains("decreasing"));
    error_json(&bwkb(&["converge", "--eps-list", "0.1,0.01,0.001"]), 2);
}

#[test]
fn energy_json_is_uniform() {
    let v = json(&bwkb(&[
        "energy",
        "--format",
        "json",
        "--eps-list",
        "0.1,0.01,0.001,0.0001",
    ]));
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    let last = v["last_ratio"].as_f64().unwrap();
    let median = v["median_ratio"].as_f64().unwrap();
    assert!(last <= 2.0 * median);
}

#[test]
fn mms_recovers_all_three_problems() {
    let v = json(&bwkb(&["mms"]));
    for key in ["full", "elementary", "mixed"] {
        for e in v[key].as_array().unwrap() {
            assert!(e.as_f64().unwrap() <= 1e-8, "{key}: {e}");
        }
    }
}

#[test]
fn invalid_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_bwkb"))
        .arg("mms")
        .env("BWKB_THREADS", "zero")
        .output()
        .unwrap();
    error_json(&out, 2);
}

#[test]
fn documented_defaults_match_the_built_in_ones() {
    let help = bwkb(&["--help"]);
    let text = String::from_utf8(help.stdout).unwrap();
    let toml: String = text
        .lines()
        .skip_while(|l| !l.trim_start().starts_with("[geometry]"))
        .take_while(|l| !l.starts_with("Environment"))
        .map(|l| format!("{}\n", l.trim_start()))
        .collect();
    assert!(toml.contains("[study]"));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &toml);
    let with = bwkb(&["expand", "--order", "2", "--config", &cfg]);
    let without = bwkb(&["expand", "--order", "2"]);
    assert!(
        with.status.success(),
        "{}",
        String::from_utf8_lossy(&with.stderr)
    );
    assert_eq!(with.stdout, without.stdout);
}
