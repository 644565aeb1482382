use std::path::Path;
use std::process::{Command, Output};

fn plgcat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plgcat")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn dunce_hat_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["criterion", "corpus:dunce_hat"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("plgcat = 3\n"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("[x]")).count(), 5);
}

#[test]
fn annulus_fails_criterion_without_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["criterion", "corpus:annulus"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("inapplicable"));
}

#[test]
fn classify_uses_the_strip_cover() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["presentation", "classify", "<a,b|aab>"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("upper = 2 (strip cover"), "{out}");
    assert!(out.contains("plgcat = 2"));
}

#[test]
fn exhausted_budget_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["cover", "search2", "corpus:torus", "--budget", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("Unknown"));
}

#[test]
fn homology_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["homology", "corpus:rp2"], dir.path());
    assert_eq!(stdout(&o), "1 0 0\ntorsion H1: Z/2\n");
    let o = plgcat(&["homology", "corpus:torus"], dir.path());
    assert_eq!(stdout(&o), "1 2 1\n");
}

#[test]
fn analyze_prints_key_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&plgcat(&["analyze", "corpus:dunce_hat"], dir.path()));
    assert!(out.contains("f_vector: (8, 24, 17)"));
    assert!(out.contains("inner_connected: true"));
    assert!(out.lines().all(|l| l.contains(": ")));
}

#[test]
fn input_errors_exit_one_with_a_code() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["homology", "missing.sc"][..], &["corpus", "get", "nope"], &["frobnicate"], &["cover", "search2", "corpus:torus", "--budget", "0"]] {
        let o = plgcat(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with("error[") && err.lines().count() == 1, "{err}");
    }
    std::fs::write(dir.path().join("bad.sc"), "s 0 1\nq 3\n").unwrap();
    let o = plgcat(&["analyze", "bad.sc"], dir.path());
    assert!(stderr(&o).starts_with("error[parse]: line 2"));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let o = plgcat(&["--json", "analyze", "corpus:torus"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["euler_characteristic"], 0);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["cover", "strong", "corpus:octahedron", "-o", "o.cover"][..], &["polygonal", "reduce", "corpus:torus"], &["corpus", "list"]] {
        let a = plgcat(args, dir.path());
        let first = std::fs::read(dir.path().join("o.cover")).ok();
        let b = plgcat(args, dir.path());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(first, std::fs::read(dir.path().join("o.cover")).ok());
    }
}

/// Every file another subcommand writes is accepted by `verify`.
#[test]
fn verify_accepts_emitted_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let runs: [&[&str]; 9] = [
        &["corpus", "get", "torus", "-o", "torus.sc"],
        &["collapse", "corpus:disk12", "-o", "disk.clps"],
        &["collapse", "torus.sc", "--strong", "-o", "torus.clps"],
        &["cover", "strong", "corpus:dunce_hat", "-o", "dunce.cover"],
        &["cover", "search2", "corpus:annulus", "-o", "annulus.cover"],
        &["cover", "normalize", "annulus.cover", "-o", "annulus.n.cover"],
        &["cover", "relocate", "annulus.n.cover", "-o", "annulus.r.cover"],
        &["polygonal", "reduce", "corpus:torus", "-o", "torus.poly"],
        &["polygonal", "realize", "torus.poly", "-o", "torus2.sc"],
    ];
    for args in runs {
        let o = plgcat(args, d);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let file = args.last().unwrap();
        let v = plgcat(&["verify", file], d);
        assert_eq!(v.status.code(), Some(0), "verify {file}: {}", stderr(&v));
        assert!(stdout(&v).starts_with("valid"), "{}", stdout(&v));
    }
    assert!(stdout(&plgcat(&["verify", "disk.clps"], d)).contains("to a point"));
    let o = plgcat(&["presentation", "build", "<a,b|abAB>", "-o", "t.sc"], d);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&plgcat(&["homology", "t.sc"], d)), "1 2 1\n");
}

#[test]
fn verify_rejects_a_tampered_cover() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    plgcat(&["cover", "search2", "corpus:annulus", "-o", "a.cover"], d);
    let text = std::fs::read_to_string(d.join("a.cover")).unwrap();
    let one_piece = &text[..text.find("piece 2").unwrap()];
    std::fs::write(d.join("b.cover"), one_piece).unwrap();
    let o = plgcat(&["verify", "b.cover"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[verify]"), "{}", stderr(&o));
}

#[test]
fn corpus_list_names_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&plgcat(&["corpus", "list"], dir.path()));
    for name in ["dunce_hat", "bing_house", "abAB", "poly_torus"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
