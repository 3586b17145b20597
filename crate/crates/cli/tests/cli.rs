use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bgcohom"))
}

fn repo_root() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

#[test]
fn run_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("mu3.scn");
    std::fs::write(
        &scn,
        "task = hkr-force\np = 3\ngroup = mu\ndeg_max = 6\n[abutment]\n0 = 3\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let status = bin()
        .args(["run", "--scenario"])
        .arg(&scn)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let json = std::fs::read_to_string(out.join("mu3.json")).unwrap();
    assert!(json.contains("\"target\": \"c^3\""), "{json}");
    let csv = std::fs::read_to_string(out.join("mu3.csv")).unwrap();
    assert!(csv.starts_with("deg,wedge,weight,dim,labels\n"));
}

#[test]
fn parse_failure_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("bad.scn");
    std::fs::write(&scn, "task = nope\np = 3\n").unwrap();
    let status = bin()
        .args(["run", "--scenario"])
        .arg(&scn)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unreachable_abutment_is_exit_five() {
    let dir = tempfile::tempdir().unwrap();
    let scn = dir.path().join("stuck.scn");
    std::fs::write(
        &scn,
        "task = hkr-force\np = 3\ngroup = mu\n[abutment]\n0 = 5\n",
    )
    .unwrap();
    let status = bin()
        .args(["run", "--scenario"])
        .arg(&scn)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(5));
}

#[test]
fn regress_passes_on_shipped_fixtures() {
    let output = bin()
        .args(["regress", "--root"])
        .arg(repo_root())
        .output()
        .unwrap();
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(output.status.success(), "{stdout}");
    assert!(!stdout.contains("FAIL"), "{stdout}");
}

#[test]
fn regress_names_the_corrupted_cell() {
    // copy one scenario + fixture pair, then corrupt a dimension entry
    let dir = tempfile::tempdir().unwrap();
    let scenarios = dir.path().join("scenarios");
    let fixtures = dir.path().join("fixtures");
    std::fs::create_dir_all(&scenarios).unwrap();
    std::fs::create_dir_all(&fixtures).unwrap();
    std::fs::copy(
        repo_root().join("scenarios/ext_p2_s2.scn"),
        scenarios.join("ext_p2_s2.scn"),
    )
    .unwrap();
    for ext in ["json", "csv"] {
        let name = format!("ext_p2_s2.{ext}");
        std::fs::copy(repo_root().join("fixtures").join(&name), fixtures.join(&name)).unwrap();
    }
    let json = fixtures.join("ext_p2_s2.json");
    let good = std::fs::read_to_string(&json).unwrap();
    std::fs::write(&json, good.replace("\"dim\": 1", "\"dim\": 7")).unwrap();
    let output = bin()
        .args(["regress", "--root"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("FAIL  ext_p2_s2"), "{stdout}");
    assert!(stdout.contains("json line"), "{stdout}");
    assert!(stdout.contains("\"dim\": 7"), "{stdout}");
}
