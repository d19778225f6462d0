mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::{fixture, read_fixture};

fn syncur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncur")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn clean_reports_drops_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.txt");
    let twice = dir.path().join("twice.txt");
    let input = fixture("prep/childes.cha");
    let ages = fixture("prep/childes.ages.tsv");
    let o = syncur(&["clean", "--corpus-type", "childes", "--in", s(&input), "--out", s(&once), "--ages", s(&ages)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("dropped: 25 short, 0 empty"), "{}", stdout(&o));
    let kept = fs::read_to_string(&once).unwrap().lines().count();
    let age_rows = fs::read_to_string(once.with_extension("ages.tsv")).unwrap().lines().count();
    assert_eq!(age_rows, kept + 1);

    let o = syncur(&["clean", "--corpus-type", "childes", "--in", s(&once), "--out", s(&twice)]);
    assert!(o.status.success());
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());
}

#[test]
fn unknown_corpus_type_is_a_usage_error() {
    let o = syncur(&["clean", "--corpus-type", "klingon", "--in", "x", "--out", "y"]);
    assert_eq!(o.status.code(), Some(2));
}

fn table1_files(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf, Vec<String>) {
    let mut sentences = String::new();
    let mut trees = String::new();
    let mut labels = Vec::new();
    for line in read_fixture("table1.tsv").lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        labels.push(cols[0].to_string());
        sentences += &format!("{}\n", cols[1]);
        trees += &format!("{}\n", cols[2]);
    }
    let (sp, tp) = (dir.join("t1.txt"), dir.join("t1.trees"));
    fs::write(&sp, sentences).unwrap();
    fs::write(&tp, trees).unwrap();
    (sp, tp, labels)
}

#[test]
fn classify_table1_has_full_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let (sp, tp, labels) = table1_files(dir.path());
    let out = dir.path().join("out");
    let o = syncur(&["classify", "--sentences", s(&sp), "--trees", s(&tp), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("coverage: 26/26 (100.00%)"), "{}", stdout(&o));
    let lines = fs::read_to_string(out.join("assignments.jsonl")).unwrap();
    for (line, want) in lines.lines().zip(&labels) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["primary"].as_str(), Some(want.as_str()), "{line}");
    }
}

#[test]
fn placeholders_count_against_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let sp = dir.path().join("s.txt");
    let tp = dir.path().join("t.txt");
    fs::write(&sp, "She runs .\nhmm hmm\n").unwrap();
    fs::write(&tp, "(S (NP (PRP She)) (VP (VBZ runs)) (. .))\n(())\n").unwrap();
    let o = syncur(&["classify", "--sentences", s(&sp), "--trees", s(&tp), "--out", s(dir.path())]);
    assert!(stdout(&o).contains("coverage: 1/2 (50.00%)"), "{}", stdout(&o));

    fs::write(&tp, "(S (NP (PRP She)) (VP (VBZ runs)) (. .))\n").unwrap();
    let o = syncur(&["classify", "--sentences", s(&sp), "--trees", s(&tp), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn match_prints_matching_lines() {
    let tree = fixture("fig1/tree.txt");
    let dir = tempfile::tempdir().unwrap();
    let pf = dir.path().join("sub.tgx");
    let fig = read_fixture("fig1/patterns.tgx");
    let sub = &fig[fig.rfind("\n\n").unwrap()..];
    fs::write(&pf, sub).unwrap();
    let o = syncur(&["match", "--pattern-file", s(&pf), "--trees", s(&tree)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\tNP\n");

    let trees = dir.path().join("many.trees");
    fs::write(&trees, format!("{}(())\n(NP (NN dog))\n", read_fixture("fig1/tree.txt"))).unwrap();
    let o = syncur(&["match", "--pattern", "__ !> __", "--trees", s(&trees)]);
    assert_eq!(stdout(&o), "1\tS\n3\tNP\n");

    let o = syncur(&["match", "--pattern", "NP <", "--trees", s(&trees)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 4"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn stats_curriculum_and_sample_from_records() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = fixture("mixed/run.toml");
    let o = syncur(&["classify", "--config", s(&config), "--out", s(d)]);
    assert!(o.status.success());
    let records = d.join("records.jsonl");

    let csv = d.join("age.csv");
    let svg = d.join("age.svg");
    let o = syncur(&["stats", "--config", s(&config), "--group-by", "age", "--out", s(&csv), "--chart", s(&svg)]);
    // Only the CHILDES input carries ages.
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("BNC-Spoken"));

    let o = syncur(&["stats", "--records", s(&records), "--out", s(&csv), "--chart", s(&svg)]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1 + 4 * 14);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let out = d.join("c1.txt");
    let o = syncur(&["curriculum", "--records", s(&records), "--strategy", "C1", "--seed", "3", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 404);
    assert!(d.join("c1.manifest.json").exists());

    let o = syncur(&["curriculum", "--records", s(&records), "--strategy", "C9", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));

    let plan = d.join("plan.toml");
    fs::write(&plan, "strategy = \"C4\"\nholdout_fraction = 1.5\n").unwrap();
    let o = syncur(&["curriculum", "--records", s(&records), "--plan", s(&plan), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));

    let o = syncur(&[
        "sample",
        "--records",
        s(&records),
        "--group",
        "Relative",
        "--train-tokens",
        "60",
        "--val-tokens",
        "10",
        "--out",
        s(d),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(d.join("relative.train.txt").exists() && d.join("relative.val.txt").exists());

    let o = syncur(&["sample", "--records", s(&records), "--group", "Relative", "--out", s(d)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("short by"));
}
