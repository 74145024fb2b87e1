use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hyperelm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperelm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hyperelm(&["--help"]).status.code(), Some(0));
    assert_eq!(hyperelm(&["--version"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(hyperelm(&[]).status.code(), Some(1));
    assert_eq!(hyperelm(&["lorenz", "--lmin", "abc"]).status.code(), Some(1));
    assert_eq!(hyperelm(&["lorenz", "--lmin", "20", "--lmax", "10"]).status.code(), Some(1));
}

#[test]
fn unknown_algebra_is_reported() {
    let o = hyperelm(&["algebra", "show", "sedenion-ish"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sedenion-ish"));
}

#[test]
fn algebra_list_names_the_catalog() {
    let o = hyperelm(&["algebra", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["quaternion", "cd_mp", "cd_pm", "cd_pp", "clifford_1_1", "tessarine", "klein4"] {
        assert!(text.contains(name), "{name} missing from:\n{text}");
    }
}

#[test]
fn lorenz_needs_a_trial() {
    let o = hyperelm(&["lorenz", "--algebras", "quaternion", "--lmin", "11", "--lmax", "11", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lorenz_single_trial_csv() {
    let o = hyperelm(&["lorenz", "--algebras", "quaternion", "--lmin", "11", "--lmax", "13", "--trials", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algebra,L_hyper,L_real_equiv,tnp,seed,train_gain_db,test_gain_db,train_ms")
    );
    let ls: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ls, ["11", "12", "13"]);
}

#[test]
fn lorenz_csv_with_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lorenz.csv");
    let o = hyperelm(&[
        "--seed", "7", "--jobs", "2", "--out", out.to_str().unwrap(),
        "lorenz", "--algebras", "real,quaternion", "--lmin", "11", "--lmax", "12", "--trials", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 2);
    let wins = fs::read_to_string(dir.path().join("lorenz.csv.wins.csv")).unwrap();
    assert!(wins.starts_with("algebra,L_hyper,wins,trials\n"));
    let config: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lorenz.csv.config.json")).unwrap()).unwrap();
    assert_eq!(config["seed"], 7);

    let again = dir.path().join("again.csv");
    let o = hyperelm(&[
        "--seed", "7", "--jobs", "1", "--out", again.to_str().unwrap(),
        "lorenz", "--algebras", "real,quaternion", "--lmin", "11", "--lmax", "12", "--trials", "2",
    ]);
    assert!(o.status.success());
    let strip = |t: &str| t.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&csv), strip(&fs::read_to_string(&again).unwrap()), "results depend on --jobs");
}

#[test]
fn lorenz_json_document() {
    let o = hyperelm(&["--format", "json", "lorenz", "--algebras", "quaternion", "--lmin", "11", "--lmax", "11", "--trials", "1"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 1);
    assert!(doc["config"].is_object());
    assert!(doc["wins"].is_array());
}

#[test]
fn cifar_without_data_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperelm(&["cifar", "--data-dir", dir.path().to_str().unwrap(), "--trials", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn train_then_predict() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("x.csv");
    let targets = dir.path().join("t.csv");
    let model = dir.path().join("model.json");
    // complex entries: two coefficients per column
    let mut x = String::new();
    let mut t = String::new();
    for n in 0..40 {
        let (a, b) = ((n as f64 * 0.37).sin(), (n as f64 * 0.11).cos());
        x.push_str(&format!("{a},{b}\n"));
        t.push_str(&format!("{},{}\n", a * b, a - b));
    }
    write(&inputs, &x);
    write(&targets, &t);

    let o = hyperelm(&[
        "--out", model.to_str().unwrap(), "train", "--algebra", "complex",
        "--inputs", inputs.to_str().unwrap(), "--targets", targets.to_str().unwrap(), "--hidden", "6",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(doc["algebra"]["name"], "complex");
    assert_eq!(doc["W"].as_array().unwrap().len(), 2);

    let o = hyperelm(&["predict", "--model", model.to_str().unwrap(), "--inputs", inputs.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 40);
    assert!(text.lines().all(|l| l.split(',').count() == 2));

    let again = hyperelm(&["predict", "--model", model.to_str().unwrap(), "--inputs", inputs.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn train_requires_out() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.csv");
    write(&x, "1,0\n");
    let p = x.to_str().unwrap();
    let o = hyperelm(&["train", "--algebra", "complex", "--inputs", p, "--targets", p, "--hidden", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn broken_model_files() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.csv");
    write(&x, "1,0,0,0\n");
    let xs = x.to_str().unwrap();

    let missing = dir.path().join("nope.json");
    let o = hyperelm(&["predict", "--model", missing.to_str().unwrap(), "--inputs", xs]);
    assert_eq!(o.status.code(), Some(2));

    let corrupt = dir.path().join("bad.json");
    write(&corrupt, "{\"algebra\": ");
    let o = hyperelm(&["predict", "--model", corrupt.to_str().unwrap(), "--inputs", xs]);
    assert_eq!(o.status.code(), Some(2));
}
