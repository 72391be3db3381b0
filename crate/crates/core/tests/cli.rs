use std::fs;
use std::process::{Command, Output};

fn flowlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowlab")).args(args).env_remove("FLOWLAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = flowlab(&["eval", "catalog", "pvz5", "--point", "1,1"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0.8,0.4\n"));
    let o = flowlab(&["repset", "--y", "1,0"]);
    assert_eq!(stdout(&o), "z=1 x=1,-1\n");
    let o = flowlab(&["verify", "catalog", "pvz5", "--samples", "10000", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status=pass"));
}

#[test]
fn exit_code_contract() {
    assert_eq!(flowlab(&["eval", "quadflow", "a=1", "Q=1,0,1", "--point", "1"]).status.code(), Some(2));
    assert_eq!(flowlab(&["verify", "identity", "--samples", "abc"]).status.code(), Some(2));
    assert_eq!(flowlab(&["fitc", "/nonexistent/file.csv"]).status.code(), Some(2));
    // a loose pass threshold turns into a failure when tightened below round-off
    assert_eq!(flowlab(&["verify", "catalog", "pvz6", "--samples", "2000", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(flowlab(&["iterate", "quad2d", "--x=-400,0", "--n0", "4", "--levels", "2"]).status.code(), Some(1));
}

#[test]
fn seed_flag_beats_environment() {
    let base = ["verify", "catalog", "pvz3", "--samples", "500"];
    let with_env = |seed: &str, extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_flowlab")).args(&args).env("FLOWLAB_SEED", seed).output().unwrap().stdout
    };
    let flag = flowlab(&[&base[..], &["--seed", "3"]].concat()).stdout;
    assert_eq!(with_env("3", &[]), flag);
    assert_eq!(with_env("99", &["--seed", "3"]), flag);
    assert_ne!(with_env("99", &[]), flag);
}

#[test]
fn orbit_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let svg = dir.path().join("orbit.svg");
    let o = flowlab(&["orbit", "canonical1", "--x", "1,-1", "--steps", "20", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z,coord_1,coord_2,is_infinity"));
    assert!(text.lines().any(|l| l == "0,1,-1,0"));
    assert!(text.lines().any(|l| l == "1,1,0,0"));

    let args = ["orbit", "catalog", "pvz5", "--x", "1,1", "--format", "svg", "--steps", "200", "--out"];
    assert_eq!(flowlab(&[&args[..], &[svg.to_str().unwrap()]].concat()).status.code(), Some(0));
    let first = fs::read(&svg).unwrap();
    assert_eq!(flowlab(&[&args[..], &[svg.to_str().unwrap()]].concat()).status.code(), Some(0));
    assert_eq!(fs::read(&svg).unwrap(), first);
    let s = String::from_utf8(first).unwrap();
    assert!(s.starts_with("<?xml") && s.contains("<polyline") && s.trim_end().ends_with("</svg>"));
}

#[test]
fn iterate_history_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let o = flowlab(&[
        "iterate",
        "log1p",
        "--x",
        "2",
        "--n0",
        "1024",
        "--levels",
        "8",
        "--tol",
        "1e-4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("converged=true"));
    let text = fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,coord_1,delta_chordal");
    assert_eq!(rows.len(), 9);
    assert!(rows[1].starts_with("1024,") && rows[1].ends_with(','));
    assert!(rows[8].starts_with("131072,"));

    let o = flowlab(&[
        "iterate",
        "poly",
        "--poly",
        "x1 - 0.5*x1^2 + 0.5*x2^2; x2 - x1*x2",
        "--x",
        "0.5,0.5",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fitc_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.csv");
    let mut body = String::from("u,fu\n");
    for i in 1..=10 {
        let u = i as f64 * 0.9;
        body.push_str(&format!("{u},{}\n", u / (3.0 * u + 1.0)));
    }
    fs::write(&path, body).unwrap();
    let o = flowlab(&["fitc", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let c: f64 = out.lines().next().unwrap().strip_prefix("C=").unwrap().parse().unwrap();
    assert!((c - 3.0).abs() < 1e-12);

    fs::write(&path, "1,2\n2,1\n").unwrap();
    assert_eq!(flowlab(&["fitc", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn conjugate_command() {
    let o = flowlab(&["conjugate", "catalog", "pvz1", "a=1", "b=1", "--ell", "astroid", "--point", "0.3,0.7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("closed_form=catalog pvz7"));
    let o = flowlab(&["conjugate", "quadflow", "a=1,1", "Q=1,0,1", "--ell", "linear 2,0,0,3", "--point", "0.5,-0.25"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status=pass"));
}
