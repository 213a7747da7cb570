use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn rectdisc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rectdisc")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = rectdisc(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    serde_json::from_str(&out).unwrap()
}

fn result(args: &[&str]) -> Value {
    json(args)["result"].clone()
}

#[test]
fn space_list_names_every_registered_space() {
    let r = result(&["space", "list"]);
    let names: Vec<&str> = r["spaces"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    for want in ["circle", "torus2", "cube3", "sphere", "hamming4"] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
    let cube2 = r["spaces"].as_array().unwrap().iter().find(|s| s["name"] == "cube2").unwrap();
    assert_eq!(cube2["distance_invariant"], false);
}

#[test]
fn partition_torus_smoke() {
    let r = result(&["partition", "--space", "torus2", "--n", "16", "--seed", "7"]);
    assert_eq!(r["cells"].as_array().unwrap().len(), 16);
    assert!(r["avg_diameter"].as_f64().unwrap() > 0.0);
    assert_eq!(r["box_checks"]["bound_holds"], true);
}

#[test]
fn partition_product_density_splits_at_inverse_cdf() {
    // Each axis has CDF φ(z) = z², so the halfway split is φ⁻¹(1/2) = √(1/2).
    let r = result(&["partition", "--space", "cube2", "--density", "product-4z1z2", "--n", "4"]);
    let want = 0.5f64.sqrt();
    for level in r["levels"].as_array().unwrap() {
        for split in level.as_array().unwrap() {
            assert!((split[1].as_f64().unwrap() - want).abs() < 1e-9, "{split}");
        }
    }
    for cell in r["cells"].as_array().unwrap() {
        assert!((cell["measure"].as_f64().unwrap() - 0.25).abs() < 1e-9);
    }
}

#[test]
fn partition_circle_arcs() {
    let r = result(&["partition", "--space", "circle", "--n", "4"]);
    assert_eq!(r["cells"].as_array().unwrap().len(), 4);
    assert!((r["avg_diameter"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    assert_eq!(r["diameter_kind"], "exact");
}

#[test]
fn partition_hamming_needs_a_divisor() {
    let r = result(&["partition", "--space", "hamming3", "--n", "4"]);
    assert_eq!(r["cells"].as_array().unwrap().len(), 4);
    let (code, _, err) = rectdisc(&["partition", "--space", "hamming3", "--n", "3"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn invariance_exact_on_hamming() {
    let r = result(&["invariance", "--space", "hamming4", "--n", "5", "--xi", "uniform-atomic", "--exact"]);
    assert_eq!(r["check"], "exact");
    assert_eq!(r["all_defects_zero_exactly"], true);
    for d in r["defects"].as_array().unwrap() {
        assert_eq!(d["defect_exact"], "0");
    }
}

#[test]
fn invariance_exact_is_chosen_automatically_on_the_circle() {
    let r = result(&["invariance", "--space", "circle", "--n", "8", "--trials", "5"]);
    assert_eq!(r["check"], "exact");
    assert!(r["max_abs_defect"].as_f64().unwrap() < 1e-9);
}

#[test]
fn invariance_on_the_square_is_probabilistic() {
    let r = result(&["invariance", "--space", "cube2", "--n", "16", "--trials", "10000"]);
    assert_eq!(r["check"], "probabilistic");
    assert_eq!(r["within_ci"], true, "{r}");
    assert_eq!(r["distance_invariance"]["invariant"], false);
}

#[test]
fn exit_codes() {
    let (code, _, err) = rectdisc(&["invariance", "--space", "cube2", "--n", "16", "--trials", "1"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = rectdisc(&["invariance", "--space", "cube2", "--n", "4", "--exact"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("not distance-invariant"));
    let (code, _, _) = rectdisc(&["bounds-sweep", "--space", "circle"]);
    assert_eq!(code, 2);
    let (code, _, _) = rectdisc(&["bounds-sweep", "--space", "circle", "--n-list", ""]);
    assert_eq!(code, 2);
    let (code, _, _) = rectdisc(&["partition", "--space", "klein-bottle", "--n", "4"]);
    assert_eq!(code, 2);
    let (code, _, _) = rectdisc(&["partition", "--space", "circle", "--n", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = rectdisc(&["discrepancy", "--space", "circle", "--n", "4", "--xi", "gaussian"]);
    assert_eq!(code, 2);
}

#[test]
fn circle_sweep_gap_is_flat() {
    // N²⟨ρ⟩ − E_N ρ = N² · N · (1/N)³/3 = 1/3 for equal arcs.
    let r = result(&["bounds-sweep", "--space", "circle", "--n-list", "4,8,16,32", "--trials", "50"]);
    let slope = r["summary"]["rho_gap_slope"].as_f64().unwrap();
    assert!(slope.abs() < 0.2, "{slope}");
    for row in r["rows"].as_array().unwrap() {
        assert!((row["rho_gap"].as_f64().unwrap() - 1.0 / 3.0).abs() < 0.03, "{}", row["rho_gap"]);
        assert_eq!(row["bounds"]["rho_bound_holds"], true);
    }
}

#[test]
fn torus_sweep_lambda_slope() {
    let r = result(&["bounds-sweep", "--space", "torus2", "--n-list", "16,64,256,1024", "--trials", "100"]);
    let slope = r["summary"]["lambda_slope"].as_f64().unwrap();
    assert!((slope - 0.5).abs() < 0.15, "{slope}");
    assert_eq!(r["summary"]["predicted_exponent"], 0.5);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    for format in ["json", "csv"] {
        let args = |t: &'static str| {
            vec!["invariance", "--space", "torus2", "--n", "9", "--trials", "50", "--seed", "3", "--threads", t, "--format", format]
        };
        let (_, a, _) = rectdisc(&args("1"));
        let (_, b, _) = rectdisc(&args("3"));
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}

#[test]
fn records_carry_version_seed_config_and_methods() {
    let v = json(&["discrepancy", "--space", "torus2", "--n", "8", "--seed", "11", "--samples", "2000"]);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["config"]["space"], "torus2");
    let rep = &v["result"]["reports"][0];
    assert_eq!(rep["lambda_xi"]["method"]["kind"], "monte-carlo");
    assert!(rep["lambda_xi"]["error"].as_f64().unwrap() > 0.0);

    let (code, csv, _) = rectdisc(&["bounds-sweep", "--space", "circle", "--n-list", "4,8", "--trials", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("version,schema,seed,config,space,d,n,"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn config_file_with_flags_winning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\nspace = \"circle\"\nn = 8\nformat = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&["points", "--config", c]);
    assert_eq!((v["seed"].as_u64(), v["result"]["n"].as_u64()), (Some(5), Some(8)));
    let v = json(&["points", "--config", c, "--seed", "6", "--n", "3"]);
    assert_eq!((v["seed"].as_u64(), v["result"]["n"].as_u64()), (Some(6), Some(3)));

    std::fs::write(&cfg, "spaec = \"circle\"\n").unwrap();
    let (code, _, err) = rectdisc(&["points", "--config", c]);
    assert_eq!(code, 2);
    assert!(err.contains("spaec"));
}

fn circle_rho(points: &[f64]) -> f64 {
    let mut s = 0.0;
    for a in points {
        for b in points {
            let d = (a - b).abs();
            s += d.min(1.0 - d);
        }
    }
    s
}

fn roundtrip(dir: &Path, format: &str) {
    let file = dir.join(format!("pts.{format}"));
    let f = file.to_str().unwrap();
    let (code, _, err) = rectdisc(&["points", "--space", "circle", "--n", "6", "--seed", "2", "--format", format, "--out", f]);
    assert_eq!(code, 0, "{err}");
    let pts = result(&["points", "--space", "circle", "--n", "6", "--seed", "2"]);
    let xs: Vec<f64> = pts["points"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    let r = result(&["discrepancy", "--space", "circle", "--points", f]);
    let rep = &r["reports"][0];
    assert_eq!(rep["n"], 6);
    assert!((rep["rho_sum"]["value"].as_f64().unwrap() - circle_rho(&xs)).abs() < 1e-12);
    assert!(rep["invariance_defect"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn points_roundtrip_through_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    roundtrip(dir.path(), "json");
    roundtrip(dir.path(), "csv");
}

#[test]
fn point_methods() {
    let c = result(&["points", "--space", "circle", "--n", "4", "--method", "centres"]);
    let xs: Vec<f64> = c["points"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    assert_eq!(xs, vec![0.125, 0.375, 0.625, 0.875]);
    let h = result(&["points", "--space", "hamming3", "--n", "5", "--method", "iid"]);
    assert_eq!(h["point_ids"].as_array().unwrap().len(), 5);
    assert_eq!(h["points"][0].as_array().unwrap().len(), 3);
}

#[test]
fn discrepancy_batch_over_n() {
    let r = result(&["discrepancy", "--space", "hamming3", "--n-list", "2,4,8"]);
    let reps = r["reports"].as_array().unwrap();
    assert_eq!(reps.len(), 3);
    for rep in reps {
        assert_eq!(rep["lambda_xi"]["method"]["kind"], "exact");
        assert!(rep["invariance_defect"].as_f64().unwrap().abs() < 1e-9);
    }
}
