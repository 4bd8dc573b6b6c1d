use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearflow")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["solve", "--element", "q2", "--p", "2", "--case", "1", "--level", "1"]).status.code(), Some(3));
}

#[test]
fn invalid_configuration_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(
        run(&["solve", "--element", "mini", "--p", "0.5", "--case", "1", "--level", "1"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["solve", "--element", "mini", "--p", "2", "--case", "7", "--level", "1"]).status.code(), Some(3));
    assert_eq!(run(&["rates", "--p-min", "3", "--p-max", "2", "--n", "4", "--out", path(&out)]).status.code(), Some(3));
    assert_eq!(run(&["infsup", "--element", "mini", "--max-level", "0", "--out", path(&out)]).status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn solve_writes_errors_and_fields() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, vtk) = (dir.path().join("e.csv"), dir.path().join("u.vtk"));
    let o = run(&[
        "solve",
        "--element",
        "th",
        "--p",
        "2.5",
        "--case",
        "2",
        "--level",
        "2",
        "--out",
        path(&csv),
        "--vtk",
        path(&vtk),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("level,h,ndof_v,ndof_q,e_v,eoc_v"));
    assert_eq!(text.lines().count(), 4);
    let vtk = std::fs::read_to_string(&vtk).unwrap();
    assert!(vtk.starts_with("# vtk DataFile"));
    assert!(vtk.contains("velocity") && vtk.contains("pressure"));
}

#[test]
fn study_writes_one_table_per_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "study",
        "--element",
        "mini",
        "--case",
        "2",
        "--p-list",
        "2.25,3",
        "--max-level",
        "2",
        "--out-dir",
        path(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["eoc_mini_case2_p2.25.csv", "eoc_mini_case2_p3.csv"] {
        assert_eq!(std::fs::read_to_string(dir.path().join(name)).unwrap().lines().count(), 4);
    }
}

#[test]
fn rates_and_infsup_tables() {
    let dir = tempfile::tempdir().unwrap();
    let rates = dir.path().join("r.csv");
    assert!(run(&["rates", "--p-min", "1.5", "--p-max", "3", "--n", "7", "--out", path(&rates)]).status.success());
    assert_eq!(std::fs::read_to_string(&rates).unwrap().lines().count(), 8);

    let inf = dir.path().join("b.csv");
    assert!(run(&["infsup", "--element", "mini", "--max-level", "2", "--out", path(&inf)]).status.success());
    let text = std::fs::read_to_string(&inf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "level,h,ndof_v,ndof_q,beta");
    assert_eq!(lines.len(), 3);
    let beta: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!(beta > 0.3 && beta < 1.0);
}
