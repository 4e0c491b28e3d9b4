use std::path::Path;
use std::process::{Command, Output};

fn epstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epstab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let ok = epstab(&["bound", "--scenario", "galilean_satellites"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    // diverging series
    let flagged = epstab(&["bound", "--scenario", "main_belt"]);
    assert_eq!(flagged.status.code(), Some(1));

    let missing = epstab(&["bound", "--scenario", "no/such/file.toml"]);
    assert_eq!(missing.status.code(), Some(2));

    let too_big = epstab(&["verify", "--n", "7", "--seed", "1"]);
    assert_eq!(too_big.status.code(), Some(2));
    assert!(!too_big.stderr.is_empty());
}

#[test]
fn invalid_input_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = epstab(&["datasets", "show", "main_belt"]);
    let broken = stdout(&text).replace("gamma = 50.0", "gamma = -50.0");
    let path = write(dir.path(), "neg.toml", &broken);
    let o = epstab(&["bound", "--scenario", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("neg.toml:") && err.contains("gamma"), "{err}");
}

#[test]
fn datasets_are_listed_and_shown() {
    let list = stdout(&epstab(&["datasets", "list"]));
    for name in ["main_belt", "solar_planets", "galilean_satellites", "two_body_test"] {
        assert!(list.contains(name), "{list}");
    }
    let shown = epstab(&["datasets", "show", "solar_planets"]);
    assert_eq!(shown.status.code(), Some(0));
    assert!(stdout(&shown).contains("kind = \"planets\""));
    assert_eq!(epstab(&["datasets", "show", "nothing"]).status.code(), Some(2));
}

#[test]
fn structured_report_reproduces_itself() {
    let dir = tempfile::tempdir().unwrap();
    let first = epstab(&[
        "bound",
        "--scenario",
        "galilean_satellites",
        "--eps",
        "1",
        "--format",
        "structured",
    ]);
    assert_eq!(first.status.code(), Some(0));
    let report: toml::Table = stdout(&first).parse().unwrap();
    let input = report["input"].as_table().unwrap();
    let path = write(dir.path(), "echo.toml", &toml::to_string(input).unwrap());

    let second = epstab(&["bound", "--scenario", &path, "--eps", "1", "--format", "structured"]);
    let again: toml::Table = stdout(&second).parse().unwrap();
    assert_eq!(report["results"], again["results"]);
    assert_eq!(report["input"], again["input"]);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = epstab(&[
        "sweep",
        "--scenario",
        "main_belt",
        "--axis",
        "n",
        "--from",
        "1000",
        "--to",
        "1000000",
        "--points",
        "7",
        "--log",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(matches!(o.status.code(), Some(0 | 1)));
    let mut r = csv::Reader::from_path(&out).unwrap();
    let header = r.headers().unwrap().clone();
    assert_eq!(&header[0], "n");
    assert!(header.iter().any(|h| h == "epsilon"));
    assert_eq!(r.records().count(), 7);
}

#[test]
fn fixed_seed_reproduces_the_sample() {
    let run = || {
        let o = epstab(&[
            "sample",
            "--scenario",
            "two_body_test",
            "--steps",
            "20000",
            "--seed",
            "11",
            "--format",
            "structured",
        ]);
        assert!(matches!(o.status.code(), Some(0 | 1)));
        stdout(&o)
    };
    let a = run();
    assert!(a.contains("seed = 11"));
    assert_eq!(a, run());
}
