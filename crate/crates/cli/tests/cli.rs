use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krylov-bench"))
        .args(args)
        .output()
        .expect("spawn krylov-bench")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_matrix(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

fn diagonal_mtx(n: usize) -> String {
    let mut s = format!("%%MatrixMarket matrix coordinate real general\n{n} {n} {n}\n");
    for i in 1..=n {
        s.push_str(&format!("{i} {i} {i}\n"));
    }
    s
}

#[test]
fn identity_converges_in_one_restart() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("%%MatrixMarket matrix coordinate real general\n5 5 5\n");
    for i in 1..=5 {
        body.push_str(&format!("{i} {i} 1\n"));
    }
    let m = write_matrix(&dir, "eye5.mtx", &body);
    let out = bench(&["--matrix", &m, "--method", "gmres", "--rhs", "ones"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert_eq!(line.lines().count(), 1);
    assert!(
        line.contains("matrix=eye5 n=5 nnz=5 method=gmres iter=1 "),
        "{line}"
    );
    assert!(line.contains("converged=true"));
}

#[test]
fn history_csv_matches_summary() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matrix(&dir, "diag20.mtx", &diagonal_mtx(20));
    let csv = dir.path().join("hist.csv");
    let out = bench(&[
        "--matrix",
        &m,
        "--method",
        "lgmres",
        "--m",
        "3",
        "--l",
        "4",
        "--history",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("restart,relative_residual,elapsed_seconds")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let summary = stdout(&out);
    let iter: usize = summary
        .split_whitespace()
        .find_map(|f| f.strip_prefix("iter="))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows.len(), iter);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), i + 1);
    }
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert!(last <= 1e-8);
    let res: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for w in res[3..].windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-10));
    }
}

#[test]
fn restart_cap_exits_with_two() {
    let out = bench(&[
        "--matrix",
        &fixture("random_general.mtx"),
        "--m",
        "1",
        "--max-restarts",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let line = stdout(&out);
    assert!(line.contains("iter=† "), "{line}");
    assert!(line.contains("converged=false"));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_matrix(
        &dir,
        "bad.mtx",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
    );
    let out = bench(&["--matrix", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.mtx") && err.contains("line 3"), "{err}");

    let m = fixture("tridiag_general.mtx");
    for args in [
        vec!["--matrix", m.as_str(), "--method", "cg"],
        vec!["--matrix", m.as_str(), "--m", "0"],
        vec!["--matrix", m.as_str(), "--method", "llbgmres", "--d", "4"],
        vec!["--matrix", m.as_str(), "--rhs", "random"],
        vec!["--matrix", m.as_str(), "--tol", "-1"],
        vec!["--matrix", "/nonexistent/a.mtx"],
        vec!["--method", "gmres"],
        vec!["--matrix", m.as_str(), "--bogus"],
    ] {
        let out = bench(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn rhs_file_length_is_checked() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "1.5\n-2.0").unwrap();
    let rhs = format!("file={}", f.path().display());
    let out = bench(&["--matrix", &fixture("tridiag_general.mtx"), "--rhs", &rhs]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = bench(&[flag]);
        assert_eq!(out.status.code(), Some(0), "{flag}");
    }
}

#[test]
fn batch_runs_every_method_and_writes_histories() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("h.csv");
    let m = fixture("laplace_symmetric.mtx");
    let out = bench(&[
        "--matrix",
        &m,
        "--method",
        "all",
        "--m",
        "4",
        "--l",
        "3",
        "--history",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    for (line, method) in lines.iter().zip(["gmres", "lbgmres", "lgmres", "llbgmres"]) {
        assert!(line.contains(&format!("method={method} ")), "{line}");
        assert!(dir
            .path()
            .join(format!("h-laplace_symmetric-{method}.csv"))
            .exists());
    }
}

#[test]
fn repeated_runs_give_identical_histories() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture("random_general.mtx");
    let read = |name: &str| {
        let p = dir.path().join(name);
        bench(&[
            "--matrix",
            &m,
            "--method",
            "llbgmres",
            "--m",
            "5",
            "--l",
            "3",
            "--history",
            p.to_str().unwrap(),
        ]);
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_owned())
            .collect::<Vec<_>>()
    };
    assert_eq!(read("a.csv"), read("b.csv"));
}
