use std::process::{Command, Output};

fn trimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimer")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, column: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|c| *c == column).unwrap();
    lines.next().unwrap().split(',').nth(k).unwrap().to_string()
}

#[test]
fn report_at_ferrimagnetic_point() {
    let o = trimer(&["report", "--J", "1", "--J1", "0.5", "--h", "0.5", "--T", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(field(&s, "class"), "2-3");
    let n: f64 = field(&s, "n_tri").parse().unwrap();
    assert!((n - 0.403).abs() < 1e-3);
}

#[test]
fn classify_names_the_manifold() {
    let o = trimer(&["classify", "--J", "1", "--J1", "0.5", "--h", "0.5"]);
    assert_eq!(field(&stdout(&o), "ground_state"), "FI^II_3/2-1/2");
}

#[test]
fn real_unit_threshold() {
    let o = trimer(&[
        "threshold", "--units", "real", "--J-cm1", "90.3", "--J1-cm1", "0", "--g", "2.1667", "--B-tesla", "0",
        "--target", "0.1",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    let t: f64 = field(&s, "T_kelvin").parse().unwrap();
    assert!((t - 100.0).abs() < 10.0, "{t}");
    assert_eq!(field(&s, "found"), "true");
}

#[test]
fn gs_map_grid_is_deterministic() {
    let args = [
        "sweep", "--mode", "gs_map", "--x-min", "0", "--x-max", "2", "--x-steps", "3", "--y-min", "0",
        "--y-max", "1", "--y-steps", "3",
    ];
    let a = stdout(&trimer(&args));
    assert_eq!(a.lines().count(), 10);
    assert!(a.starts_with("J,J1,h,T,n_mu_s1,n_s1_s2,n_mu_full,n_s1_full,n_tri,class\n"));
    assert_eq!(a, stdout(&trimer(&args)));
}

#[test]
fn json_output_and_file() {
    let dir = std::env::temp_dir().join(format!("trimer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.json");
    let o = trimer(&[
        "sweep", "--mode", "t_scan", "--J", "1", "--J1", "1.5", "--h", "0.8", "--x-min", "0", "--x-max", "1",
        "--x-steps", "5", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["columns"][8], "n_tri");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn reconstruct_round_trip_through_json() {
    let dir = std::env::temp_dir().join(format!("trimer-obs-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("obs.json");
    let point = ["--J", "1", "--J1", "1.5", "--h", "0.8", "--T", "0.3"];
    let mut emit = vec!["reconstruct", "--emit", "--format", "json", "--out", path.to_str().unwrap()];
    emit.extend(point);
    assert!(trimer(&emit).status.success());
    let obs: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(obs.as_object().unwrap().len(), 9);
    let mut back = vec!["reconstruct", "--observables", path.to_str().unwrap()];
    back.extend(point);
    let via = stdout(&trimer(&back));
    let mut rep = vec!["report"];
    rep.extend(point);
    let direct = stdout(&trimer(&rep));
    let a: f64 = field(&via, "n_tri").parse().unwrap();
    let b: f64 = field(&direct, "n_tri").parse().unwrap();
    assert!((a - b).abs() < 1e-8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(trimer(&["report", "--J", "1", "--J-cm1", "90"]).status.code(), Some(2));
    assert_eq!(trimer(&["report", "--units", "real", "--J", "1", "--J-cm1", "90"]).status.code(), Some(2));
    assert_eq!(trimer(&["report", "--T", "-1"]).status.code(), Some(2));
    assert_eq!(trimer(&["sweep", "--mode", "t_scan", "--x-steps", "1"]).status.code(), Some(2));
    assert_eq!(trimer(&["nonsense"]).status.code(), Some(2));
    assert_eq!(trimer(&["reconstruct", "--T", "1", "--h", "0", "--emit"]).status.code(), Some(0));
    let o = trimer(&["reconstruct", "--observables", "/nonexistent.json", "--T", "1", "--h", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn negative_inputs_parse() {
    let o = trimer(&["report", "--J", "-1", "--J1", "-0.5", "--h", "-0.2", "--T", "0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
