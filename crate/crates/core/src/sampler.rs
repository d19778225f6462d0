//! Category-restricted train/validation subsets for the generalization
//! study. A record belongs to a group when its primary label is one of the
//! group's member categories.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::CategoryId;
use crate::io::{lines_to_bytes, write_atomic};
use crate::prep::LabeledRecord;
use crate::rng::SeededRng;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("{group}: pool holds {available} tokens in {records} records, {required} needed (short by {shortfall})")]
    InsufficientPool { group: String, records: usize, available: usize, required: usize, shortfall: usize },
    #[error("record id {0} is not in the record set")]
    UnknownRecordId(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GeneralizationGroup {
    SubjectVerb,
    Modifier,
    Verbal,
    Embedded,
    Infinitives,
    Linked,
    Relative,
    Interrogatives,
}

impl GeneralizationGroup {
    pub const ALL: [GeneralizationGroup; 8] = [
        GeneralizationGroup::SubjectVerb,
        GeneralizationGroup::Modifier,
        GeneralizationGroup::Verbal,
        GeneralizationGroup::Embedded,
        GeneralizationGroup::Infinitives,
        GeneralizationGroup::Linked,
        GeneralizationGroup::Relative,
        GeneralizationGroup::Interrogatives,
    ];

    pub fn id(self) -> &'static str {
        match self {
            GeneralizationGroup::SubjectVerb => "Subject-Verb",
            GeneralizationGroup::Modifier => "Modifier",
            GeneralizationGroup::Verbal => "Verbal",
            GeneralizationGroup::Embedded => "Embedded",
            GeneralizationGroup::Infinitives => "Infinitives",
            GeneralizationGroup::Linked => "Linked",
            GeneralizationGroup::Relative => "Relative",
            GeneralizationGroup::Interrogatives => "Interrogatives",
        }
    }

    pub fn members(self) -> &'static [CategoryId] {
        use CategoryId::*;
        match self {
            GeneralizationGroup::SubjectVerb => &[SubjectVerb],
            GeneralizationGroup::Modifier => &[AdverbsPossessives, Prepositions],
            GeneralizationGroup::Verbal => &[ParticleVerbs, Auxiliaries, Negation, Tense],
            GeneralizationGroup::Embedded => &[EmbeddedClauses],
            GeneralizationGroup::Infinitives => &[ToInfinitives],
            GeneralizationGroup::Linked => &[LinkedClauses],
            GeneralizationGroup::Relative => &[RelativeClauses],
            GeneralizationGroup::Interrogatives => &[Interrogatives],
        }
    }

    fn slug(self) -> String {
        self.id().to_ascii_lowercase()
    }
}

impl fmt::Display for GeneralizationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for GeneralizationGroup {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = |t: &str| t.chars().filter(char::is_ascii_alphanumeric).collect::<String>().to_ascii_lowercase();
        let wanted = norm(s);
        GeneralizationGroup::ALL.into_iter().find(|g| norm(g.id()) == wanted).ok_or_else(|| {
            let ids: Vec<&str> = GeneralizationGroup::ALL.iter().map(|g| g.id()).collect();
            format!("unknown group {s:?}, expected one of {}", ids.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleRequest {
    pub group: GeneralizationGroup,
    pub train_tokens: usize,
    pub val_tokens: usize,
    pub seed: u64,
    /// Adds Fragments to the group's members, for ablations.
    pub include_fragments: bool,
}

impl SampleRequest {
    pub fn new(group: GeneralizationGroup, train_tokens: usize, val_tokens: usize, seed: u64) -> Self {
        SampleRequest { group, train_tokens, val_tokens, seed, include_fragments: false }
    }

    pub fn members(&self) -> Vec<CategoryId> {
        let mut m = self.group.members().to_vec();
        if self.include_fragments {
            m.push(CategoryId::Fragments);
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSummary {
    pub target_tokens: usize,
    pub actual_tokens: usize,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleManifest {
    pub group: GeneralizationGroup,
    pub members: Vec<CategoryId>,
    pub seed: u64,
    pub pool_records: usize,
    pub pool_tokens: usize,
    pub train: SplitSummary,
    pub val: SplitSummary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub train: Vec<u64>,
    pub val: Vec<u64>,
    pub manifest: SampleManifest,
}

/// Shuffles the group's pool and fills the training split until its token
/// total reaches the budget, then the validation split likewise. Each split
/// overshoots its budget by less than its last sentence.
pub fn sample_group(req: &SampleRequest, records: &[LabeledRecord]) -> Result<Sample, SamplerError> {
    let members = req.members();
    let mut pool: Vec<&LabeledRecord> =
        records.iter().filter(|r| r.primary().is_some_and(|c| members.contains(&c))).collect();
    let pool_tokens: usize = pool.iter().map(|r| r.token_count).sum();
    let required = req.train_tokens + req.val_tokens;
    let pool_records = pool.len();
    let shortfall = |available: usize| SamplerError::InsufficientPool {
        group: req.group.to_string(),
        records: pool_records,
        available,
        required,
        shortfall: required.saturating_sub(available),
    };
    if pool_tokens < required {
        return Err(shortfall(pool_tokens));
    }

    let mut rng = SeededRng::new(req.seed);
    rng.shuffle(&mut pool);
    let mut draws = pool.iter();
    let mut fill = |target: usize| {
        let (mut ids, mut total) = (Vec::new(), 0);
        while total < target {
            let Some(r) = draws.next() else { break };
            ids.push(r.record_id);
            total += r.token_count;
        }
        (ids, total)
    };
    let (train, train_total) = fill(req.train_tokens);
    let (val, val_total) = fill(req.val_tokens);
    if val_total < req.val_tokens {
        // The training split's overshoot left too little for validation.
        return Err(shortfall(pool_tokens - (train_total - req.train_tokens)));
    }

    let manifest = SampleManifest {
        group: req.group,
        members,
        seed: req.seed,
        pool_records,
        pool_tokens,
        train: SplitSummary { target_tokens: req.train_tokens, actual_tokens: train_total, records: train.len() },
        val: SplitSummary { target_tokens: req.val_tokens, actual_tokens: val_total, records: val.len() },
    };
    Ok(Sample { train, val, manifest })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleFiles {
    pub train: PathBuf,
    pub val: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<group>.train.txt`, `<group>.val.txt` and `<group>.manifest.json`
/// into `dir`.
pub fn write_sample(sample: &Sample, records: &[LabeledRecord], dir: &Path) -> Result<SampleFiles, SamplerError> {
    let by_id: HashMap<u64, &str> = records.iter().map(|r| (r.record_id, r.text.as_str())).collect();
    let text = |ids: &[u64]| {
        ids.iter()
            .map(|id| by_id.get(id).copied().ok_or(SamplerError::UnknownRecordId(*id)))
            .collect::<Result<Vec<_>, _>>()
            .map(lines_to_bytes)
    };
    let slug = sample.manifest.group.slug();
    let files = SampleFiles {
        train: dir.join(format!("{slug}.train.txt")),
        val: dir.join(format!("{slug}.val.txt")),
        manifest: dir.join(format!("{slug}.manifest.json")),
    };
    write_atomic(&files.train, &text(&sample.train)?)?;
    write_atomic(&files.val, &text(&sample.val)?)?;
    let mut json = serde_json::to_vec_pretty(&sample.manifest)?;
    json.push(b'\n');
    write_atomic(&files.manifest, &json)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::catalog::CategoryAssignment;

    fn rec(id: u64, primary: CategoryId, words: usize) -> LabeledRecord {
        let text = vec!["w"; words].join(" ");
        let mut r = LabeledRecord::new(id, "fixture", &text, None);
        r.assignment = Some(CategoryAssignment {
            matched: vec![primary].into_iter().collect(),
            primary: Some(primary),
            macro_category: Some(primary.macro_category()),
        });
        r
    }

    #[test]
    fn groups_partition_all_but_fragments() {
        let mut seen = HashSet::new();
        for g in GeneralizationGroup::ALL {
            for &c in g.members() {
                assert!(seen.insert(c), "{c} in two groups");
            }
        }
        assert_eq!(seen.len(), 12);
        assert!(!seen.contains(&CategoryId::Fragments));
    }

    #[test]
    fn restricted_disjoint_and_within_budget() {
        let records: Vec<LabeledRecord> =
            (0..200).map(|i| rec(i, CategoryId::ALL[i as usize % 13], 2 + i as usize % 7)).collect();
        let req = SampleRequest::new(GeneralizationGroup::Relative, 40, 10, 3);
        let s = sample_group(&req, &records).unwrap();
        let train: HashSet<u64> = s.train.iter().copied().collect();
        assert!(s.val.iter().all(|id| !train.contains(id)));
        for id in s.train.iter().chain(&s.val) {
            assert_eq!(records[*id as usize].primary(), Some(CategoryId::RelativeClauses));
        }
        assert!(s.manifest.train.actual_tokens >= 40);
        assert_eq!(s.manifest.train.target_tokens, 40);
    }

    #[test]
    fn insufficient_pool_reports_shortfall() {
        let records = vec![rec(1, CategoryId::Tense, 3), rec(2, CategoryId::Negation, 3)];
        let req = SampleRequest::new(GeneralizationGroup::Verbal, 5, 5, 0);
        match sample_group(&req, &records) {
            Err(SamplerError::InsufficientPool { shortfall, available, .. }) => {
                assert_eq!((available, shortfall), (6, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fragments_only_on_request() {
        let records = vec![rec(1, CategoryId::Fragments, 4)];
        let mut req = SampleRequest::new(GeneralizationGroup::SubjectVerb, 2, 0, 0);
        assert!(sample_group(&req, &records).is_err());
        req.include_fragments = true;
        assert_eq!(sample_group(&req, &records).unwrap().train, [1]);
    }

    #[test]
    fn group_names_parse() {
        assert_eq!("subject-verb".parse::<GeneralizationGroup>(), Ok(GeneralizationGroup::SubjectVerb));
        assert_eq!("Relative".parse::<GeneralizationGroup>(), Ok(GeneralizationGroup::Relative));
        assert!("Fragments".parse::<GeneralizationGroup>().is_err());
    }
}
