use std::process::{Command, Output};

fn syncline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncline")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn catalog_lists_builtin_platforms() {
    let o = syncline(&["catalog", "list", "--platforms"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9, "{text}");
    assert!(text.contains("UAV Fixed Wing") && text.contains("77.9°/s") && text.contains("Survey AUV"));
}

#[test]
fn catalog_show_sensor() {
    let o = syncline(&["catalog", "show", "MRU5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.002°/0.002°/0.002°"));
    let json: serde_json::Value =
        serde_json::from_slice(&syncline(&["catalog", "show", "MRU5", "--json"]).stdout).unwrap();
    assert_eq!(json["kind"], "attitude");
    assert_eq!(json["sigma_rpy_deg"][2], 0.002);
}

#[test]
fn unknown_names_exit_2() {
    assert_eq!(syncline(&["catalog", "show", "Teleporter"]).status.code(), Some(2));
    assert_eq!(syncline(&["tau-crit", "--platforms", "Teleporter"]).status.code(), Some(2));
    assert_eq!(syncline(&["tau-crit", "--sensors", ""]).status.code(), Some(2));
    assert_eq!(syncline(&["simulate"]).status.code(), Some(2));
}

#[test]
fn catalog_file_validation_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"sensors": [{"kind": "position", "name": "bad", "sigma_p_m": -1}]}"#).unwrap();
    let o = syncline(&["--catalog", path.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sensors[0].sigma_p_m"));
}

#[test]
fn catalog_file_overrides_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("car.json");
    std::fs::write(
        &path,
        r#"{"platforms": [{"name": "Car", "v_max_mps": 20, "omega_max_dps": 17.3, "d_m": 50, "b_m": 3}]}"#,
    )
    .unwrap();
    let o = syncline(&["--catalog", path.to_str().unwrap(), "catalog", "show", "Car", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["v_max_mps"], 20.0);
}

#[test]
fn tau_crit_csv_is_raw_seconds() {
    let o = syncline(&["tau-crit", "--csv", "--platforms", "USV", "--sensors", "F9P PVT"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sensor,USV [s]"));
    let value: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    // √3·1.5 / 5
    assert!((value - 3f64.sqrt() * 1.5 / 5.0).abs() < 1e-15);
}

#[test]
fn tau_crit_payload_row() {
    let o = syncline(&["tau-crit", "--json", "--platforms", "Car", "--payload", "F9P RTK,MRU5,VUX1"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["label"].as_str().unwrap().starts_with("payload"));
    assert_eq!(syncline(&["tau-crit", "--payload", "F9P RTK,MRU5"]).status.code(), Some(2));
}

#[test]
fn curve_roof_with_sensor_error_override() {
    let o = syncline(&["curve", "--platform", "Car", "--sensor-error", "0.1", "--tau-min", "1e-9", "--n", "20"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 20);
    // τ → 0: estimation accuracy → 1/0.1.
    assert!((rows[0][3] - 10.0).abs() < 1e-5);
    // Car sync rate 30 + 50·17.3°/s.
    let rate = 30.0 + 50.0 * 17.3f64.to_radians();
    assert!((rows[19][1] - (rate + 0.1)).abs() < 1e-9);
}

#[test]
fn curve_two_points() {
    let text = stdout(&syncline(&["curve", "--platform", "Car", "--n", "2"]));
    assert_eq!(text.lines().next(), Some("tau_s,delta_m,sync_accuracy_per_s,est_accuracy_per_m"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn survey_curves_share_roof() {
    let json = |name: &str| -> serde_json::Value {
        serde_json::from_slice(&syncline(&["curve", "--survey", name, "--json", "--n", "5"]).stdout).unwrap()
    };
    let (large, small) = (json("Large SV"), json("Small SV"));
    assert_eq!(large["roof_per_m"], small["roof_per_m"]);
    let ms = |v: &serde_json::Value| v["tau_crit_s"].as_f64().unwrap() * 1e3;
    assert!((ms(&large) - 16.1).abs() < 0.05, "{}", ms(&large));
    assert!((ms(&small) - 4.6).abs() < 0.05, "{}", ms(&small));
}

#[test]
fn curve_svg_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = (dir.path().join("c.csv"), dir.path().join("c.svg"));
    let o =
        syncline(&["curve", "--survey", "Large SV", "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 101);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("τ_crit 16.1 ms") && svg.contains("roof 1.41 m"));
}

#[test]
fn simulate_fixed_wing_check_passes() {
    let o = syncline(&[
        "simulate",
        "--platform",
        "Fixed Wing",
        "--tau-min",
        "1e-6",
        "--tau-max",
        "0.1",
        "--n",
        "10",
        "--trials",
        "64",
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().all(|r| (0.7..=1.02).contains(&r[3])));
}

#[test]
fn simulate_check_failure_exits_1() {
    // Small standoff distance relative to the lever arms: the GNSS lever
    // pushes the worst case past the closed form.
    let o = syncline(&[
        "simulate",
        "--platform",
        "AUV",
        "--payload",
        "F9P RTK,MRU5,Sonic 2026",
        "--n",
        "3",
        "--trials",
        "32",
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("check failed"));
}

#[test]
fn simulate_zero_noise_at_zero_tau() {
    let o = syncline(&["simulate", "--platform", "Fixed Wing", "--taus", "0", "--zero-noise", "--trials", "64"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert!(rows[0][1] < 1e-9);
    assert_eq!(rows[0][3], 1.0);
}

#[test]
fn simulate_is_byte_stable() {
    let args =
        ["simulate", "--survey", "Small SV", "--mode", "stochastic", "--seed", "11", "--n", "6", "--trials", "40"];
    let a = syncline(&args);
    let b = syncline(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut serial = args.to_vec();
    serial.push("--serial");
    assert_eq!(syncline(&serial).stdout, a.stdout);
    let mut other = args.to_vec();
    other[5] = "12";
    assert_ne!(syncline(&other).stdout, a.stdout);
}

#[test]
fn simulate_check_needs_adversarial_mode() {
    let o =
        syncline(&["simulate", "--platform", "Car", "--mode", "stochastic", "--check", "--n", "2", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_json_has_metadata() {
    let o = syncline(&["simulate", "--platform", "Car", "--n", "2", "--trials", "4", "--seed", "3", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["rng"], "ChaCha8");
    assert_eq!(json["noise_mode"], "adversarial");
    assert_eq!(json["seed"], 3);
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
}
