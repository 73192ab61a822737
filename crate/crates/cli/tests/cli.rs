use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const THREE_TILES: &str = "wang 3 4\n0 0 1 3\n2 2 3 0\n3 3 0 1\n";

fn polytile(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polytile"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compile_then_audit() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("three.wang"), THREE_TILES).unwrap();
    let o = polytile(
        &["compile", "three.wang", "-o", "out", "--jobs", "2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let manifest = fs::read_to_string(dir.path().join("out/manifest.txt")).unwrap();
    assert!(manifest.contains("locator length 2(n-1)(t+1)+3 = 15"));
    let o = polytile(&["audit", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7/7 orthogonally convex"));
    let o = polytile(&["bn-check", "out/tiny-filler.poly"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("DOES-NOT-TILE"));
}

#[test]
fn audit_flags_a_concave_piece() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("p")).unwrap();
    fs::write(
        dir.path().join("p/u.poly"),
        "poly u 5\n0 0\n1 0\n2 0\n0 1\n2 1\n",
    )
    .unwrap();
    let o = polytile(&["audit", "p"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0/1 orthogonally convex"));
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.wang"), "wang 2 4\n0 0 1\n").unwrap();
    assert_eq!(
        polytile(&["compile", "bad.wang", "-o", "out"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polytile(&["wang-torus", "missing.wang", "--size", "1x1"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        polytile(&["no-such-command"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn wang_torus_and_assembly() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("three.wang"), THREE_TILES).unwrap();
    let o = polytile(&["wang-torus", "three.wang", "--size", "3x1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 1 2\n");
    assert_eq!(
        polytile(&["wang-torus", "three.wang", "--size", "2x2"], dir.path())
            .status
            .code(),
        Some(1)
    );
    let o = polytile(
        &["assemble", "three.wang", "--torus", "3x1", "-o", "t.asm"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = polytile(
        &[
            "verify",
            "--asm",
            "t.asm",
            "--wang",
            "three.wang",
            "--size",
            "3x1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations 0"));
    let o = polytile(
        &[
            "assemble",
            "three.wang",
            "--torus",
            "3x1",
            "--node-limit",
            "5",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn solve_verify_render() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("p")).unwrap();
    fs::write(dir.path().join("p/ell.poly"), "poly ell 3\n0 0\n1 0\n0 1\n").unwrap();
    fs::write(dir.path().join("p/bar.poly"), "poly bar 3\n0 0\n1 0\n2 0\n").unwrap();
    let o = polytile(
        &[
            "solve", "--pieces", "p", "--region", "rect", "3x2", "-o", "s.sol",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = polytile(
        &[
            "verify", "--sol", "s.sol", "--pieces", "p", "--region", "rect 3x2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = polytile(
        &["solve", "--pieces", "p", "--region", "rect", "2x2"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    fs::write(
        dir.path().join("over.sol"),
        "piece bar 0 0\npiece bar 0 0\n",
    )
    .unwrap();
    let o = polytile(
        &[
            "verify", "--sol", "over.sol", "--pieces", "p", "--region", "rect 3x2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let o = polytile(
        &[
            "render",
            "s.sol",
            "--pieces",
            "p",
            "-o",
            "s.svg",
            "--palette",
            "paper",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("s.svg")).unwrap();
    let sol = fs::read_to_string(dir.path().join("s.sol")).unwrap();
    assert_eq!(svg.matches("<g ").count(), sol.lines().count());
}
