#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::collections::HashMap;
use std::path::PathBuf;

use syncur::catalog::Catalog;
use syncur::config::{load_inputs, LoadedInput, RunConfig};
use syncur::prep::{align_trees, classify_records, LabeledRecord};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn mixed_inputs() -> Vec<LoadedInput> {
    let cfg = RunConfig::load(&fixture("mixed/run.toml")).unwrap();
    load_inputs(&cfg.inputs, &Catalog::bundled()).unwrap()
}

/// (corpus, line) -> label, from the generator's golden file.
pub fn mixed_golden() -> HashMap<(String, u64), String> {
    read_fixture("mixed/golden.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            ((cols[0].to_string(), cols[1].parse().unwrap()), cols[2].to_string())
        })
        .collect()
}

pub fn curriculum_records() -> Vec<LabeledRecord> {
    let (mut records, _) =
        align_trees("fixture", &read_fixture("curriculum/sentences.txt"), &read_fixture("curriculum/trees.txt"))
            .unwrap();
    classify_records(&mut records, &Catalog::bundled());
    records
}
