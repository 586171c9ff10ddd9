use std::path::Path;
use std::process::{Command, Output};

use cubemill::fixtures;
use cubemill::io::{parse_complex, write_complex};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubemill")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn torus_is_foldable() {
    let o = run(&["fold", "--fixture", "torus4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn gromov_cell_is_npc() {
    let o = run(&["check-npc", "--fixture", "gdelta2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "npc: yes\n");
}

#[test]
fn torus_meridian_is_refused() {
    let x = fixtures::torus(4);
    let e = |a: u32, b: u32| x.lookup(&[a, b]).unwrap().to_string();
    let ids = [
        "0".to_string(),
        e(0, 1),
        "1".into(),
        e(1, 2),
        "2".into(),
        e(2, 3),
        "3".into(),
        e(3, 0),
        "0".into(),
    ];
    let o = run(&["contract", "--fixture", "torus4", "--loop", &ids.join(",")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("Unsupported: non-separating mirror"), "{}", stdout(&o));
}

#[test]
fn contraction_certificates_replay() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.txt");
    let x = fixtures::grid(2, 2);
    let e = |a: u32, b: u32| x.lookup(&[a, b]).unwrap();
    let sq = |c: [u32; 4]| x.lookup(&c).unwrap();
    // around the centre vertex through the four squares
    let centre = 4;
    let l = [
        e(4, 1),
        sq([0, 1, 3, 4]),
        e(3, 4),
        sq([3, 4, 6, 7]),
        e(4, 7),
        sq([4, 5, 7, 8]),
        e(4, 5),
        sq([1, 2, 4, 5]),
        e(4, 1),
    ];
    assert!(x.cell(centre).dim() == 0);
    let ids: Vec<String> = l.iter().map(|v| v.to_string()).collect();
    let o = run(&["contract", "--fixture", "grid2", "--loop", &ids.join(","), "--out", path_str(&cert)]);
    assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    let o = run(&["verify", "--fixture", "grid2", "--certificate", path_str(&cert)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // dropping the moves of the first tile breaks the certificate
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let t = lines.iter().position(|l| *l == "tile").unwrap();
    let end = t + lines[t..].iter().position(|l| *l == "end").unwrap();
    lines.drain(t + 1..end);
    if end > t + 1 {
        std::fs::write(&cert, lines.join("\n")).unwrap();
        let o = run(&["verify", "--fixture", "grid2", "--certificate", path_str(&cert)]);
        assert_eq!(code(&o), 1);
    }
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"kind\":\"cubical\",\n\"cells\":[[0,1],[2,3,]]}").unwrap();
    let o = run(&["validate", path_str(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    std::fs::write(&f, "{\"kind\":\"cubical\",\"cells\":[[0,1,2]]}").unwrap();
    let o = run(&["validate", path_str(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cells[0]"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["validate", "--fixture", "nope"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["contract", "--fixture", "sq1", "--loop", "0,1,0"])), 2);
}

#[test]
fn files_round_trip_canonically() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.json");
    std::fs::write(&f, "{\"kind\":\"cubical\",\"cells\":[[5,4,2,1],[4,3,1,0],[1,0]]}").unwrap();
    let o = run(&["fixture", "grid2"]);
    let canonical = stdout(&o);
    let g = dir.path().join("y.json");
    std::fs::write(&g, &canonical).unwrap();
    let o = run(&["barsub", path_str(&g)]);
    assert_eq!(code(&o), 0);
    let parsed = parse_complex(&canonical).unwrap();
    assert_eq!(write_complex(&parsed), canonical);
    let shuffled = parse_complex(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert_eq!(write_complex(&shuffled), "{\"kind\":\"cubical\",\"cells\":[[0,1,3,4],[1,2,4,5]]}\n");
}

#[test]
fn folding_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let o = run(&["fold", "--fixture", "book3", "--out", path_str(&f)]);
    assert_eq!(code(&o), 0);
    let o = run(&["mirrors", "--fixture", "book3", "--folding", path_str(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tree", "--fixture", "book3"][..],
        &["hyperplanes", "--fixture", "grid2"],
        &["contract", "--fixture", "book3", "--random", "50", "--seed", "9"],
    ] {
        let a = run(args);
        let b = Command::new(env!("CARGO_BIN_EXE_cubemill")).args(args).env("CUBEMILL_THREADS", "1").output().unwrap();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(code(&a), 0);
    }
}

#[test]
fn rose_with_odd_petals_is_not_foldable() {
    assert_eq!(code(&run(&["fold", "--fixture", "rose3"])), 1);
    assert_eq!(code(&run(&["fold", "--fixture", "rose4"])), 0);
}

#[test]
fn gromov_reports_pass() {
    let o = run(&["gromov", "--fixture", "cone4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("tile links match: yes"));
}
