use std::path::{Path, PathBuf};

use evoselect::cli::cmd_compare;
use evoselect::reporting::{read_run, read_run_dir, write_run};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

#[test]
fn compare_matches_golden_tables() {
    let out = tempfile::tempdir().unwrap();
    let mut stdout = Vec::new();
    cmd_compare(&fixtures().join("runs"), out.path(), &mut stdout).unwrap();
    for name in [
        "runtime_table.csv",
        "metrics_table.csv",
        "jaccard_logistic_gina.csv",
        "jaccard_logistic_hiva.csv",
        "jaccard_mlp_gina.csv",
    ] {
        let got = std::fs::read_to_string(out.path().join(name)).unwrap();
        let want = std::fs::read_to_string(fixtures().join("expected").join(name)).unwrap();
        assert_eq!(got, want, "{name}");
        let md = out.path().join(name.replace(".csv", ".md"));
        assert!(md.exists(), "{}", md.display());
    }
    assert!(String::from_utf8(stdout)
        .unwrap()
        .starts_with("6 run files"));
}

#[test]
fn fixture_records_survive_rewrite() {
    let dir = tempfile::tempdir().unwrap();
    for (path, record) in read_run_dir(fixtures().join("runs")).unwrap() {
        let written = write_run(&record, dir.path()).unwrap();
        assert_eq!(written.file_name(), path.file_name());
        assert_eq!(read_run(&written).unwrap(), record);
    }
}

#[test]
fn single_record_gives_single_cells() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("runs/r6.json"), dir.path().join("r6.json")).unwrap();
    let out = tempfile::tempdir().unwrap();
    cmd_compare(dir.path(), out.path(), &mut Vec::new()).unwrap();
    let runtime = std::fs::read_to_string(out.path().join("runtime_table.csv")).unwrap();
    assert_eq!(runtime, "model,algorithm,gina\nmlp,ga-seq,10.000\n");
    let jac = std::fs::read_to_string(out.path().join("jaccard_mlp_gina.csv")).unwrap();
    assert_eq!(jac, ",ga-seq\nga-seq,1.000\n");
}

#[test]
fn mixed_lengths_in_a_group_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("runs/r1.json"), dir.path().join("r1.json")).unwrap();
    let odd = std::fs::read_to_string(fixtures().join("runs/r5.json"))
        .unwrap()
        .replace("\"hiva\"", "\"gina\"")
        .replace("\"r5\"", "\"odd\"");
    std::fs::write(dir.path().join("odd.json"), odd).unwrap();
    let err = cmd_compare(dir.path(), dir.path(), &mut Vec::new())
        .unwrap_err()
        .to_string();
    assert!(err.contains("r1.json") && err.contains("odd.json"), "{err}");
}

#[test]
fn empty_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cmd_compare(dir.path(), dir.path(), &mut Vec::new()).is_err());
}

#[test]
fn malformed_run_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"run_id\": 3}").unwrap();
    let err = read_run_dir(dir.path()).unwrap_err().to_string();
    assert!(err.contains("bad.json"), "{err}");
}
