use std::path::PathBuf;
use std::process::Command;

use arbor::{run, Outcome};

fn arbor(args: &[&str]) -> Outcome {
    run(std::iter::once("arbor").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arbor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn bck_of_a_single_edge_is_primitive() {
    let out = arbor(&["coproduct", "--kind", "bck", "I[(1,0)](N[(0,0)])"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "1 ⊗ I[(1,0)](N[(0,0)]) + I[(1,0)](N[(0,0)]) ⊗ 1\n");
}

#[test]
fn star2_of_a_polynomial_letter() {
    let out = arbor(&["product", "--kind", "star2", "X^(1,0)", "I[(1,0)](N[(0,0)])"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // X_0 times the planted tree, the raised node and the lowered edge from the bracket.
    assert_eq!(out.stdout, "-I[(0,0)](N[(0,0)]) + I[(1,0)](N[(0,0)])·X^(1,0) + I[(1,0)](N[(1,0)])\n");
}

#[test]
fn duality_suite_holds() {
    let out = arbor(&["verify", "--suite", "duality", "--max-edges", "3"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.starts_with("PASS duality"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [&["frobnicate"][..], &["product", "--kind", "gl", "1"], &["verify", "--suite", "lie"]] {
        let out = arbor(args);
        assert_eq!(out.code, 2, "{args:?}");
        let last = out.stderr.lines().last().unwrap();
        assert!(last.starts_with("error kind="), "{last}");
    }
    let out = arbor(&["coproduct", "--kind", "bck", "I[(1,0)](N[(0,0)"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error kind=syntax msg="));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = scratch("caps.conf");
    std::fs::write(&cfg, "max-node-dec = 1\nmax-edge-shift = 1\nlmax = 0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let raised = ["product", "--kind", "star2", "X^(1,0)", "I[(0,0)](N[(1,0)])", "--config", cfg];
    let out = arbor(&raised);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("kind=overflow"), "{}", out.stderr);
    let out = arbor(&[&raised[..], &["--max-node-dec", "2"]].concat());
    assert_eq!(out.code, 0, "{}", out.stderr);

    let dbck = ["coproduct", "--kind", "dbck", "I[(0,0)](N[(0,0)]{(0,0):N[(0,0)]})", "--config", cfg];
    let short = arbor(&dbck).stdout;
    let long = arbor(&[&dbck[..], &["--lmax", "1"]].concat()).stdout;
    assert!(long.len() > short.len());
}

#[test]
fn output_is_deterministic() {
    let args = ["iso", "--map", "psi", "I[(1,0)](N[(0,0)]{(0,0):N[(0,0)]})·X^(0,1)", "--max-node-dec", "1", "--max-edge-shift", "1"];
    let a = arbor(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a, arbor(&args));
    assert!(a.stdout.lines().skip(1).all(|l| l.starts_with("# L")));
}

#[test]
fn hairer_kelly_example() {
    let out = arbor(&["iso", "--map", "hk", "N[(1,0)]{(0,0):N[(0,1)]}"]);
    assert_eq!(out.stdout, "N[(1,0)] ⊗ N[(0,1)] + N[(1,0)]{(0,0):N[(0,1)]}\n");
}

#[test]
fn lift_and_translate_round_trip() {
    let pairs = scratch("pairs.txt");
    std::fs::write(&pairs, "# s t\n1/3 3/4\n").unwrap();
    let out = arbor(&["lift", "--path", "t ; 1/2 t^2", "--N", "2", "--pairs", pairs.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("N[(1,0)] := 5/12\n"));
    let input = scratch("lift.char");
    std::fs::write(&input, &out.stdout).unwrap();
    let output = scratch("lift.words");
    let t = arbor(&["translate", "--input", input.to_str().unwrap(), "--map", "psicf", "--output", output.to_str().unwrap()]);
    assert_eq!(t.code, 0, "{}", t.stderr);
    let text = std::fs::read_to_string(&output).unwrap();
    let words = arbor::charfile::CharFile::parse(&text).unwrap();
    assert_eq!(words.side, arbor::charfile::Side::Word);
    assert_eq!(words.meta("s"), Some("1/3"));
    assert!(text.contains("# L0 = "));
    let wrong = arbor(&["translate", "--input", input.to_str().unwrap(), "--map", "psi", "--output", output.to_str().unwrap()]);
    assert_eq!(wrong.code, 2);
}

#[test]
fn normal_form_uses_the_basis_numbering() {
    let caps = ["--max-node-dec", "1", "--max-edge-shift", "1"];
    let basis = arbor(&[&["basis", "--max-grade", "1"][..], &caps].concat());
    let id = basis.stdout.lines().find(|l| l.ends_with("= I[(0,0)](N[(0,0)])")).unwrap().split(' ').next().unwrap().to_string();
    let word = format!("X1 ⊗ {id}");
    let out = arbor(&[&["normalform", &word, "--max-grade", "1"][..], &caps].concat());
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains(&format!("{id} ⊗ X1")), "{}", out.stdout);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_arbor");
    let ok = Command::new(bin).args(["verify", "--suite", "hk"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS hairer-kelly"));
    let bad = Command::new(bin).arg("--no-such-flag").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
