//! Run configuration shared by the command-line subcommands, and loading of
//! labeled records from sentence/tree file pairs.
//!
//! ```toml
//! catalog_dir = "catalog"      # optional, the bundled catalog otherwise
//! out_dir = "out"
//! seed = 42
//! log_level = "info"
//!
//! [[input]]
//! corpus = "CHILDES"
//! sentences = "childes.txt"
//! trees = "childes.trees"
//! ages = "childes.ages.tsv"    # optional
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CategoryId, MacroCategory};
use crate::prep::{align_trees, attach_ages, classify_records, parse_age_table, LabeledRecord};
use crate::rng::DEFAULT_SEED;

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub catalog_dir: Option<PathBuf>,
    #[serde(default, rename = "input")]
    pub inputs: Vec<InputSpec>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub log_level: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub corpus: String,
    pub sentences: PathBuf,
    pub trees: PathBuf,
    pub ages: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = cfg.catalog_dir.as_mut() {
            rebase(p);
        }
        if let Some(p) = cfg.out_dir.as_mut() {
            rebase(p);
        }
        for input in &mut cfg.inputs {
            rebase(&mut input.sentences);
            rebase(&mut input.trees);
            if let Some(p) = input.ages.as_mut() {
                rebase(p);
            }
        }
        Ok(cfg)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn catalog(&self) -> Result<Catalog> {
        match &self.catalog_dir {
            Some(dir) => Catalog::load(dir).with_context(|| format!("catalog {}", dir.display())),
            None => Ok(Catalog::bundled()),
        }
    }
}

/// Records of one input, plus the number added to its line numbers to make
/// record ids unique across inputs.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub corpus: String,
    pub id_offset: u64,
    pub records: Vec<LabeledRecord>,
}

/// Aligns and classifies every input. Record ids continue across inputs in
/// order: the second input's first line follows the first input's last.
pub fn load_inputs(inputs: &[InputSpec], catalog: &Catalog) -> Result<Vec<LoadedInput>> {
    if inputs.is_empty() {
        bail!("no inputs: give --sentences and --trees, or [[input]] entries in the config");
    }
    let mut out = Vec::with_capacity(inputs.len());
    let mut offset = 0u64;
    for spec in inputs {
        let read = |p: &Path| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
        let sentences = read(&spec.sentences)?;
        let trees = read(&spec.trees)?;
        let (mut records, summary) = align_trees(&spec.corpus, &sentences, &trees)
            .with_context(|| format!("aligning {} with {}", spec.sentences.display(), spec.trees.display()))?;
        log::info!(
            "{}: {} records, {} parsed, {} placeholders, {} malformed",
            spec.corpus,
            summary.records,
            summary.parsed,
            summary.placeholders,
            summary.malformed
        );
        if let Some(ages) = &spec.ages {
            let table = parse_age_table(&read(ages)?).with_context(|| ages.display().to_string())?;
            attach_ages(&mut records, &table);
        }
        classify_records(&mut records, catalog);
        let n = records.len() as u64;
        for r in &mut records {
            r.record_id += offset;
        }
        out.push(LoadedInput { corpus: spec.corpus.clone(), id_offset: offset, records });
        offset += n;
    }
    Ok(out)
}

/// One line of `assignments.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentLine {
    pub corpus: String,
    pub line_no: u64,
    pub text: String,
    pub primary: Option<CategoryId>,
    pub matched: Vec<CategoryId>,
    #[serde(rename = "macro")]
    pub macro_category: Option<MacroCategory>,
}

impl AssignmentLine {
    pub fn new(input: &LoadedInput, record: &LabeledRecord) -> Self {
        let a = record.assignment.as_ref();
        AssignmentLine {
            corpus: input.corpus.clone(),
            line_no: record.record_id - input.id_offset,
            text: record.text.clone(),
            primary: a.and_then(|a| a.primary),
            matched: a.map(|a| a.matched.to_vec()).unwrap_or_default(),
            macro_category: a.and_then(|a| a.macro_category),
        }
    }
}

/// Reads records written one JSON object per line.
pub fn read_records_jsonl(path: &Path) -> Result<Vec<LabeledRecord>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{} line {}", path.display(), i + 1)))
        .collect()
}

pub fn records_to_jsonl(records: &[LabeledRecord]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_paths_resolve_against_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "seed = 7\n[[input]]\ncorpus = \"CHILDES\"\nsentences = \"s.txt\"\ntrees = \"/abs/t.txt\"\n")
            .unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.seed(), 7);
        assert_eq!(cfg.inputs[0].sentences, dir.path().join("s.txt"));
        assert_eq!(cfg.inputs[0].trees, PathBuf::from("/abs/t.txt"));
        assert_eq!(RunConfig::default().seed(), DEFAULT_SEED);
    }

    #[test]
    fn ids_continue_across_inputs() {
        let dir = tempfile::tempdir().unwrap();
        let p = |n: &str| dir.path().join(n);
        fs::write(p("a.txt"), "I run .\nyou run .\n").unwrap();
        fs::write(p("a.trees"), "(S (NP (PRP I)) (VP (VBP run)) (. .))\n(())\n").unwrap();
        fs::write(p("b.txt"), "we run .\n").unwrap();
        fs::write(p("b.trees"), "(S (NP (PRP we)) (VP (VBP run)) (. .))\n").unwrap();
        let inputs = vec![
            InputSpec { corpus: "a".into(), sentences: p("a.txt"), trees: p("a.trees"), ages: None },
            InputSpec { corpus: "b".into(), sentences: p("b.txt"), trees: p("b.trees"), ages: None },
        ];
        let loaded = load_inputs(&inputs, &Catalog::bundled()).unwrap();
        let ids: Vec<u64> = loaded.iter().flat_map(|l| l.records.iter().map(|r| r.record_id)).collect();
        assert_eq!(ids, [1, 2, 3]);
        let line = AssignmentLine::new(&loaded[1], &loaded[1].records[0]);
        assert_eq!(line.line_no, 1);
        assert_eq!(line.primary, Some(CategoryId::SubjectVerb));
    }

    #[test]
    fn records_round_trip_through_jsonl() {
        let dir = tempfile::tempdir().unwrap();
        let (mut recs, _) = align_trees("x", "I run .", "(S (NP (PRP I)) (VP (VBP run)) (. .))").unwrap();
        classify_records(&mut recs, &Catalog::bundled());
        let path = dir.path().join("r.jsonl");
        fs::write(&path, records_to_jsonl(&recs).unwrap()).unwrap();
        assert_eq!(read_records_jsonl(&path).unwrap(), recs);
    }
}
