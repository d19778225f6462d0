//! Training-data orderings: two random baselines and five staged curricula.
//!
//! | strategy | order |
//! |---|---|
//! | B1 | every record, shuffled |
//! | B2 | categorized records, shuffled |
//! | C1 | Simple, then Interrogatives, then Complex; shuffled within each stage |
//! | C2 | non-nested, then nested; shuffled within each stage |
//! | C3 | C2's two pools drawn with a decaying probability of picking the simple pool |
//! | C4 | C1 on a random share of the data, then the held-out rest shuffled |
//! | C5 | half the held-out share, C1 on the rest, the other half |
//!
//! All randomness comes from one [`SeededRng`] per build. Stage boundaries
//! are hard: no record crosses from one stage into another.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{is_complex_for_c2, MacroCategory};
use crate::io::{lines_to_bytes, write_atomic};
use crate::prep::LabeledRecord;
use crate::rng::{SeededRng, DEFAULT_SEED};

#[derive(Debug, Error)]
pub enum CurriculumError {
    #[error("{0}: no eligible records")]
    EmptyEligible(Strategy),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("plan file: {0}")]
    PlanSyntax(#[from] toml::de::Error),
    #[error("record id {0} appears more than once")]
    DuplicateRecordId(u64),
    #[error("record id {0} is not in the record set")]
    UnknownRecordId(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    B1,
    B2,
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Strategy {
    pub const ALL: [Strategy; 7] =
        [Strategy::B1, Strategy::B2, Strategy::C1, Strategy::C2, Strategy::C3, Strategy::C4, Strategy::C5];

    pub fn id(self) -> &'static str {
        match self {
            Strategy::B1 => "B1",
            Strategy::B2 => "B2",
            Strategy::C1 => "C1",
            Strategy::C2 => "C2",
            Strategy::C3 => "C3",
            Strategy::C4 => "C4",
            Strategy::C5 => "C5",
        }
    }

    pub fn default_holdout(self) -> Option<f64> {
        match self {
            Strategy::C4 => Some(0.2),
            Strategy::C5 => Some(0.4),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown strategy {s:?}, expected one of B1 B2 C1 C2 C3 C4 C5"))
    }
}

/// Probability of drawing from the simple pool at step `i` of `n` (C3).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `1 - i/(n-1)`
    #[default]
    Linear,
    /// `(1 + cos(pi * i/(n-1))) / 2`
    Cosine,
    /// 1 for the first half of the steps, 0 after.
    Step,
}

impl Schedule {
    pub fn probability(self, i: usize, n: usize) -> f64 {
        if n <= 1 {
            return 1.0;
        }
        let t = i as f64 / (n - 1) as f64;
        match self {
            Schedule::Linear => 1.0 - t,
            Schedule::Cosine => 0.5 * (1.0 + (PI * t).cos()),
            Schedule::Step => {
                if 2 * i < n {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl FromStr for Schedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Schedule::Linear),
            "cosine" => Ok(Schedule::Cosine),
            "step" => Ok(Schedule::Step),
            other => Err(format!("unknown schedule {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurriculumPlan {
    pub strategy: Strategy,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    strategy: String,
    seed: Option<u64>,
    holdout_fraction: Option<f64>,
    schedule: Option<String>,
}

impl CurriculumPlan {
    /// Plan with the strategy's default parameters.
    pub fn new(strategy: Strategy, seed: u64) -> Self {
        CurriculumPlan {
            strategy,
            seed,
            holdout_fraction: strategy.default_holdout(),
            schedule: (strategy == Strategy::C3).then_some(Schedule::Linear),
        }
    }

    pub fn with_holdout(mut self, fraction: f64) -> Result<Self, CurriculumError> {
        self.holdout_fraction = Some(fraction);
        self.validate()?;
        Ok(self)
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Result<Self, CurriculumError> {
        self.schedule = Some(schedule);
        self.validate()?;
        Ok(self)
    }

    /// Parses a TOML plan:
    ///
    /// ```toml
    /// strategy = "C4"
    /// seed = 7
    /// holdout_fraction = 0.2
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, CurriculumError> {
        let raw: PlanFile = toml::from_str(text)?;
        let strategy: Strategy = raw.strategy.parse().map_err(CurriculumError::InvalidPlan)?;
        let mut plan = CurriculumPlan::new(strategy, raw.seed.unwrap_or(DEFAULT_SEED));
        if let Some(f) = raw.holdout_fraction {
            plan.holdout_fraction = Some(f);
        }
        if let Some(s) = raw.schedule {
            plan.schedule = Some(s.parse().map_err(CurriculumError::InvalidPlan)?);
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), CurriculumError> {
        let holds_out = matches!(self.strategy, Strategy::C4 | Strategy::C5);
        match self.holdout_fraction {
            Some(f) if !holds_out => {
                return Err(CurriculumError::InvalidPlan(format!(
                    "holdout_fraction {f} given for {}, which holds nothing out",
                    self.strategy
                )))
            }
            Some(f) if !(f > 0.0 && f < 1.0) => {
                return Err(CurriculumError::InvalidPlan(format!(
                    "holdout_fraction must lie strictly between 0 and 1, got {f}"
                )))
            }
            None if holds_out => {
                return Err(CurriculumError::InvalidPlan(format!("{} needs a holdout_fraction", self.strategy)))
            }
            _ => {}
        }
        if self.schedule.is_some() && self.strategy != Strategy::C3 {
            return Err(CurriculumError::InvalidPlan(format!(
                "schedule given for {}, only C3 uses one",
                self.strategy
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: String,
    /// Half-open range of sequence positions.
    pub start: usize,
    pub end: usize,
    pub tokens: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub strategy: Strategy,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holdout_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    pub records: usize,
    pub tokens: usize,
    pub excluded_uncategorized: usize,
    pub stages: Vec<Stage>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderedCorpus {
    pub plan: CurriculumPlan,
    /// Record ids in training order.
    pub sequence: Vec<u64>,
    /// Ids of the held-out review records (C4, C5); empty otherwise.
    pub held_out: Vec<u64>,
    pub manifest: Manifest,
}

struct Builder<'a> {
    records: &'a [LabeledRecord],
    sequence: Vec<usize>,
    stages: Vec<Stage>,
    warnings: Vec<String>,
}

impl Builder<'_> {
    fn push_stage(&mut self, name: &str, items: &[usize]) {
        let start = self.sequence.len();
        self.sequence.extend_from_slice(items);
        let tokens = items.iter().map(|&i| self.records[i].token_count).sum();
        self.stages.push(Stage { name: name.to_string(), start, end: self.sequence.len(), tokens });
    }

    /// Simple, Interrogatives and Complex stages, each shuffled. Empty stages
    /// are skipped with a warning.
    fn macro_stages(&mut self, items: &[usize], rng: &mut SeededRng) {
        for m in MacroCategory::ALL {
            let mut stage: Vec<usize> = items
                .iter()
                .copied()
                .filter(|&i| self.records[i].assignment.as_ref().and_then(|a| a.macro_category) == Some(m))
                .collect();
            if stage.is_empty() {
                self.warnings.push(format!("{m} stage is empty and was skipped"));
                continue;
            }
            rng.shuffle(&mut stage);
            self.push_stage(m.name(), &stage);
        }
    }
}

fn is_nested(record: &LabeledRecord) -> bool {
    let Some(assignment) = &record.assignment else { return false };
    match &record.tree {
        Some(tree) => is_complex_for_c2(assignment, tree).unwrap_or(false),
        None => assignment.macro_category == Some(MacroCategory::Complex),
    }
}

/// Orders `records` per the plan. B1 uses every record; the other strategies
/// use only records with a primary label.
pub fn build(plan: &CurriculumPlan, records: &[LabeledRecord]) -> Result<OrderedCorpus, CurriculumError> {
    plan.validate()?;
    let mut seen = HashSet::with_capacity(records.len());
    for r in records {
        if !seen.insert(r.record_id) {
            return Err(CurriculumError::DuplicateRecordId(r.record_id));
        }
    }
    let eligible: Vec<usize> = if plan.strategy == Strategy::B1 {
        (0..records.len()).collect()
    } else {
        (0..records.len()).filter(|&i| records[i].is_categorized()).collect()
    };
    if eligible.is_empty() {
        return Err(CurriculumError::EmptyEligible(plan.strategy));
    }
    let excluded = records.len() - eligible.len();
    let mut rng = SeededRng::new(plan.seed);
    let mut b = Builder { records, sequence: Vec::with_capacity(eligible.len()), stages: vec![], warnings: vec![] };
    let mut held: Vec<usize> = Vec::new();

    match plan.strategy {
        Strategy::B1 | Strategy::B2 => {
            let mut all = eligible;
            rng.shuffle(&mut all);
            b.push_stage("mixed", &all);
        }
        Strategy::C1 => b.macro_stages(&eligible, &mut rng),
        Strategy::C2 | Strategy::C3 => {
            let (mut complex, mut simple): (Vec<usize>, Vec<usize>) =
                eligible.iter().partition(|&&i| is_nested(&records[i]));
            rng.shuffle(&mut simple);
            rng.shuffle(&mut complex);
            if plan.strategy == Strategy::C2 {
                for (name, pool) in [("simple", &simple), ("complex", &complex)] {
                    if pool.is_empty() {
                        b.warnings.push(format!("{name} stage is empty and was skipped"));
                    } else {
                        b.push_stage(name, pool);
                    }
                }
            } else {
                let schedule = plan.schedule.unwrap_or_default();
                let order = gradual_order(&simple, &complex, schedule, &mut rng);
                b.push_stage("gradual", &order);
            }
        }
        Strategy::C4 | Strategy::C5 => {
            let fraction = plan.holdout_fraction.expect("validated");
            let mut pool = eligible;
            rng.shuffle(&mut pool);
            let n_held = (fraction * pool.len() as f64).round() as usize;
            held = pool[..n_held].to_vec();
            let rest = pool[n_held..].to_vec();
            if plan.strategy == Strategy::C4 {
                b.macro_stages(&rest, &mut rng);
                b.push_stage("review", &held);
            } else {
                let (head, tail) = held.split_at(n_held / 2);
                b.push_stage("review-head", head);
                b.macro_stages(&rest, &mut rng);
                b.push_stage("review-tail", tail);
            }
        }
    }

    let sequence: Vec<u64> = b.sequence.iter().map(|&i| records[i].record_id).collect();
    let manifest = Manifest {
        strategy: plan.strategy,
        seed: plan.seed,
        holdout_fraction: plan.holdout_fraction,
        schedule: plan.schedule,
        records: sequence.len(),
        tokens: b.stages.iter().map(|s| s.tokens).sum(),
        excluded_uncategorized: excluded,
        stages: b.stages,
        warnings: b.warnings,
    };
    for w in &manifest.warnings {
        log::warn!("{}: {w}", plan.strategy);
    }
    Ok(OrderedCorpus {
        plan: plan.clone(),
        sequence,
        held_out: held.iter().map(|&i| records[i].record_id).collect(),
        manifest,
    })
}

/// Draws from two pre-shuffled pools without replacement. At step `i` the
/// simple pool is chosen with the schedule's probability; an exhausted pool
/// defers to the other one.
pub fn gradual_order<T: Copy>(simple: &[T], complex: &[T], schedule: Schedule, rng: &mut SeededRng) -> Vec<T> {
    let n = simple.len() + complex.len();
    let (mut s, mut c) = (simple.iter(), complex.iter());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let take_simple = if s.len() == 0 {
            false
        } else if c.len() == 0 {
            true
        } else {
            rng.unit() < schedule.probability(i, n)
        };
        let next = if take_simple { s.next() } else { c.next() };
        out.push(*next.expect("pool sizes add up to n"));
    }
    out
}

/// Path of the manifest written next to a corpus file: `c1.txt` gives
/// `c1.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

/// Writes the ordered sentences, one per line, and the JSON manifest.
pub fn emit_corpus(ordered: &OrderedCorpus, records: &[LabeledRecord], out: &Path) -> Result<PathBuf, CurriculumError> {
    let by_id: HashMap<u64, &LabeledRecord> = records.iter().map(|r| (r.record_id, r)).collect();
    let lines = ordered
        .sequence
        .iter()
        .map(|id| by_id.get(id).map(|r| r.text.as_str()).ok_or(CurriculumError::UnknownRecordId(*id)))
        .collect::<Result<Vec<_>, _>>()?;
    write_atomic(out, &lines_to_bytes(lines))?;
    let manifest = manifest_path(out);
    let mut json = serde_json::to_vec_pretty(&ordered.manifest)?;
    json.push(b'\n');
    write_atomic(&manifest, &json)?;
    Ok(manifest)
}
