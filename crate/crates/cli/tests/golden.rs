use std::path::Path;
use std::process::Command;

#[test]
fn outputs_match_the_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = std::fs::read_to_string(dir.join("cases.txt")).unwrap();
    let mut count = 0;
    for line in cases.lines().filter(|l| !l.trim().is_empty()) {
        let mut words = line.split_whitespace();
        let name = words.next().unwrap();
        let input = dir.join(words.next().unwrap());
        let out = Command::new(env!("CARGO_BIN_EXE_dprolong"))
            .arg("--input")
            .arg(&input)
            .args(words)
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let expected = std::fs::read(dir.join(format!("{name}.out"))).unwrap();
        assert!(out.stdout == expected, "{name}:\n{}", String::from_utf8_lossy(&out.stdout));
        count += 1;
    }
    assert_eq!(count, 10);
}

#[test]
fn exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dprolong");
    let bad = Command::new(bin).args(["--input", "/nonexistent.json", "tau"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let k = Command::new(bin).args(["check", "torsor", "--k", "2"]).output().unwrap();
    assert_eq!(k.status.code(), Some(2));
    let ok = Command::new(bin).args(["check", "identities", "--cases", "5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).ends_with("0 failures, ok\n"));
}
