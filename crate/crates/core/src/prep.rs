//! Corpus ingestion: speaker-label removal, CHAT annotation cleanup, sentence
//! segmentation, short-utterance filtering, and alignment of sentences with
//! their parse trees.
//!
//! CHAT cleanup rules (version 1):
//! - `[...]` annotation spans are removed, including their content;
//! - tokens starting with `&` (fillers `&-um`, fragments `&+fr`, events `&=laughs`) are removed;
//! - tokens starting with `+` (`+...`, `+/.`, `+//?`) are removed;
//! - `xxx`, `yyy` and `www` are removed;
//! - `@` suffixes are cut (`doggie@d` -> `doggie`);
//! - `<` and `>` scope markers are deleted, stray brackets too;
//! - whitespace runs collapse to one space.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{Catalog, CategoryAssignment};
use crate::ptb::{parse_ptb, ParseTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrepError {
    #[error("{sentences} sentence lines but {trees} tree lines")]
    LineCountMismatch { sentences: usize, trees: usize },
    #[error("age table line {line}: negative age {months}")]
    NegativeAge { line: usize, months: i64 },
    #[error("age table line {line}: expected `record_id<TAB>months`")]
    AgeFormat { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CorpusKind {
    Childes,
    BncSpoken,
    OpenSubtitles,
    Switchboard,
    SimpleWiki,
    Gutenberg,
    Other(String),
}

impl CorpusKind {
    pub fn id(&self) -> &str {
        match self {
            CorpusKind::Childes => "CHILDES",
            CorpusKind::BncSpoken => "BNC-Spoken",
            CorpusKind::OpenSubtitles => "OpenSubtitles",
            CorpusKind::Switchboard => "Switchboard",
            CorpusKind::SimpleWiki => "SimpleWiki",
            CorpusKind::Gutenberg => "Gutenberg",
            CorpusKind::Other(name) => name,
        }
    }

    pub fn is_childes(&self) -> bool {
        matches!(self, CorpusKind::Childes)
    }
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CorpusKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match norm.as_str() {
            "childes" => CorpusKind::Childes,
            "bncspoken" | "bnc" => CorpusKind::BncSpoken,
            "opensubtitles" => CorpusKind::OpenSubtitles,
            "switchboard" => CorpusKind::Switchboard,
            "simplewiki" | "simplewikipedia" => CorpusKind::SimpleWiki,
            "gutenberg" => CorpusKind::Gutenberg,
            "" => return Err("empty corpus id".into()),
            _ => CorpusKind::Other(s.trim().to_string()),
        })
    }
}

/// A raw corpus file. Ages, when known, are per input line.
#[derive(Debug, Clone)]
pub struct RawDocument {
    pub corpus: CorpusKind,
    pub lines: Vec<String>,
    pub ages: Option<Vec<Option<u32>>>,
}

impl RawDocument {
    pub fn from_text(corpus: CorpusKind, text: &str) -> Self {
        RawDocument { corpus, lines: text.lines().map(str::to_string).collect(), ages: None }
    }

    /// Attaches ages keyed by 1-based input line.
    pub fn with_ages(mut self, ages: &BTreeMap<u64, u32>) -> Self {
        self.ages = Some((1..=self.lines.len() as u64).map(|n| ages.get(&n).copied()).collect());
        self
    }
}

static CHAT_SPEAKER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*\*[A-Za-z0-9_-]+:[ \t]*").unwrap());
static NAME_SPEAKER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*[A-Z][A-Z0-9_'.-]{0,11}:(?:[ \t]+|$)").unwrap());
static DIALOGUE_DASH: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*-[ \t]+").unwrap());
static BRACKET_SPAN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[[^\[\]]*\]").unwrap());

/// Removes leading speaker tags: CHAT `*MOT:`, uppercase `NAME:` of at most
/// twelve characters, and `- ` dialogue dashes. Repeated tags are all removed.
pub fn strip_speaker_labels(line: &str) -> String {
    let mut rest = line;
    loop {
        let m = [&*CHAT_SPEAKER, &*NAME_SPEAKER, &*DIALOGUE_DASH].iter().find_map(|re| re.find(rest));
        match m {
            Some(m) => rest = &rest[m.end()..],
            None => return rest.to_string(),
        }
    }
}

fn is_unintelligible(token: &str) -> bool {
    matches!(token, "xxx" | "yyy" | "www")
}

/// Applies the CHAT cleanup rules listed in the module docs.
pub fn clean_childes(line: &str) -> String {
    let no_spans = BRACKET_SPAN.replace_all(line, " ");
    let mut kept: Vec<String> = Vec::new();
    for raw in no_spans.split_whitespace() {
        if raw.starts_with('&') || raw.starts_with('+') {
            continue;
        }
        let mut word: String = raw.chars().filter(|c| !matches!(c, '<' | '>' | '[' | ']')).collect();
        if let Some(at) = word.find('@') {
            word.truncate(at);
        }
        if word.is_empty() || is_unintelligible(&word) {
            continue;
        }
        kept.push(word);
    }
    kept.join(" ")
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’')
}

fn is_opener(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '{' | '“' | '‘' | '¿' | '¡')
}

const ABBREVIATIONS: &[&str] = &[
    "Mr", "Mrs", "Ms", "Dr", "Prof", "Sr", "Jr", "St", "Mt", "Rev", "Hon", "Gen", "Col", "Lt", "Sgt", "Capt", "Gov",
    "Sen", "Rep", "vs", "etc", "e.g", "i.e", "Inc", "Ltd", "Co", "No", "Fig", "approx", "Jan", "Feb", "Mar", "Apr",
    "Jun", "Jul", "Aug", "Sep", "Sept", "Oct", "Nov", "Dec",
];

fn is_abbreviation(word: &str) -> bool {
    let word = word.trim_start_matches(is_opener);
    ABBREVIATIONS.contains(&word)
}

/// Splits on `.`, `!`, `?` or `…` followed by whitespace and a capital letter,
/// or by the end of the line. Known abbreviations do not end a sentence.
pub fn segment_sentences(line: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = line.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < chars.len() && (is_terminal(chars[j + 1].1) || is_closer(chars[j + 1].1)) {
            j += 1;
        }
        let end = chars[j].0 + chars[j].1.len_utf8();
        let mut k = j + 1;
        let had_space = k < chars.len() && chars[k].1.is_whitespace();
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = if k == chars.len() {
            true
        } else if had_space {
            let next_word_start = chars[k..].iter().find(|(_, ch)| !is_opener(*ch));
            let capital = next_word_start.is_some_and(|(_, ch)| ch.is_uppercase());
            let single_dot = c == '.' && j == i;
            let word_before = line[start..pos].split_whitespace().last().unwrap_or("");
            capital && !(single_dot && is_abbreviation(word_before))
        } else {
            false
        };
        if boundary {
            let sentence = line[start..end].trim();
            if !sentence.is_empty() {
                out.push(sentence.to_string());
            }
            start = end;
        }
        i = j + 1;
    }
    let tail = line[start..].trim();
    if !tail.is_empty() {
        out.push(tail.to_string());
    }
    out
}

fn is_trailing_punct(c: char) -> bool {
    matches!(c, '.' | ',' | '!' | '?' | ';' | ':' | '…') || is_closer(c)
}

/// Whitespace tokenization with leading and trailing punctuation split off.
/// Runs of periods stay together (`...`).
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let mut core = chunk;
        while let Some(c) = core.chars().next() {
            if is_opener(c) && core.len() > c.len_utf8() {
                tokens.push(c.to_string());
                core = &core[c.len_utf8()..];
            } else {
                break;
            }
        }
        let split = core
            .char_indices()
            .rev()
            .take_while(|(_, c)| is_trailing_punct(*c))
            .last()
            .map(|(i, _)| i)
            .unwrap_or(core.len());
        let (word, punct) = core.split_at(split);
        if !word.is_empty() {
            tokens.push(word.to_string());
        }
        let mut rest = punct;
        while let Some(c) = rest.chars().next() {
            let len = if c == '.' { rest.chars().take_while(|&d| d == '.').count() } else { c.len_utf8() };
            tokens.push(rest[..len].to_string());
            rest = &rest[len..];
        }
    }
    tokens
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FilterSummary {
    pub input: usize,
    pub kept: usize,
    pub short: usize,
    pub empty: usize,
}

/// Drops utterances shorter than two tokens, preserving order.
pub fn filter_short<T: AsRef<str>>(items: Vec<T>) -> (Vec<T>, FilterSummary) {
    let mut summary = FilterSummary { input: items.len(), ..Default::default() };
    let kept: Vec<T> = items
        .into_iter()
        .filter(|item| {
            let text = item.as_ref();
            if text.trim().is_empty() {
                summary.empty += 1;
                false
            } else if tokenize(text).len() < 2 {
                summary.short += 1;
                false
            } else {
                true
            }
        })
        .collect();
    summary.kept = kept.len();
    (kept, summary)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub age_months: Option<u32>,
}

impl AsRef<str> for Sentence {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CleanSummary {
    pub lines: usize,
    /// Lines with no text left after label stripping and cleanup.
    pub empty_lines: usize,
    pub sentences: usize,
    pub short: usize,
    pub kept: usize,
}

impl fmt::Display for CleanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lines: {}, sentences: {}, kept: {}, dropped: {} short, {} empty",
            self.lines, self.sentences, self.kept, self.short, self.empty_lines
        )
    }
}

#[derive(Debug, Clone)]
pub struct CleanOutput {
    pub sentences: Vec<Sentence>,
    pub summary: CleanSummary,
}

/// Runs the cleaning stages appropriate to the corpus.
pub fn clean_document(doc: &RawDocument) -> CleanOutput {
    let mut summary = CleanSummary { lines: doc.lines.len(), ..Default::default() };
    let mut segmented = Vec::new();
    for (idx, line) in doc.lines.iter().enumerate() {
        let stripped = strip_speaker_labels(line);
        let cleaned = if doc.corpus.is_childes() { clean_childes(&stripped) } else { collapse_ws(&stripped) };
        let age = doc.ages.as_ref().and_then(|a| a.get(idx).copied().flatten());
        let parts = segment_sentences(&cleaned);
        if parts.is_empty() {
            summary.empty_lines += 1;
        }
        segmented.extend(parts.into_iter().map(|text| Sentence { text, age_months: age }));
    }
    summary.sentences = segmented.len();
    let (sentences, filter) = filter_short(segmented);
    summary.short = filter.short;
    summary.kept = filter.kept;
    CleanOutput { sentences, summary }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// One sentence flowing through classification, statistics and curricula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub record_id: u64,
    pub corpus_id: String,
    pub text: String,
    pub tokens: Vec<String>,
    pub token_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age_months: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<ParseTree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<CategoryAssignment>,
}

impl LabeledRecord {
    pub fn new(record_id: u64, corpus_id: &str, text: &str, tree: Option<ParseTree>) -> Self {
        let tokens = match &tree {
            Some(t) => t.yield_tokens(),
            None => tokenize(text),
        };
        LabeledRecord {
            record_id,
            corpus_id: corpus_id.to_string(),
            text: text.to_string(),
            token_count: tokens.len(),
            tokens,
            age_months: None,
            tree,
            assignment: None,
        }
    }

    pub fn primary(&self) -> Option<crate::catalog::CategoryId> {
        self.assignment.as_ref().and_then(|a| a.primary)
    }

    pub fn is_categorized(&self) -> bool {
        self.primary().is_some()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AlignSummary {
    pub records: usize,
    pub parsed: usize,
    pub placeholders: usize,
    pub malformed: usize,
}

pub const PARSE_PLACEHOLDER: &str = "(())";

/// Pairs sentence lines with tree lines by line number. Record ids are the
/// 1-based line numbers. `(())` marks a parse failure; malformed trees are
/// logged and the record is kept without a tree.
pub fn align_trees(
    corpus_id: &str,
    sentences: &str,
    trees: &str,
) -> Result<(Vec<LabeledRecord>, AlignSummary), PrepError> {
    let sentence_lines: Vec<&str> = sentences.lines().collect();
    let tree_lines: Vec<&str> = trees.lines().collect();
    if sentence_lines.len() != tree_lines.len() {
        return Err(PrepError::LineCountMismatch { sentences: sentence_lines.len(), trees: tree_lines.len() });
    }
    let mut summary = AlignSummary { records: sentence_lines.len(), ..Default::default() };
    let mut records = Vec::with_capacity(sentence_lines.len());
    for (idx, (text, tree_src)) in sentence_lines.iter().zip(&tree_lines).enumerate() {
        let line_no = idx as u64 + 1;
        let tree_src = tree_src.trim();
        let tree = if tree_src == PARSE_PLACEHOLDER {
            summary.placeholders += 1;
            None
        } else {
            match parse_ptb(tree_src) {
                Ok(tree) => {
                    summary.parsed += 1;
                    Some(tree)
                }
                Err(e) => {
                    log::warn!("{corpus_id} line {line_no}: unparsed tree: {e}");
                    summary.malformed += 1;
                    None
                }
            }
        };
        records.push(LabeledRecord::new(line_no, corpus_id, text.trim(), tree));
    }
    Ok((records, summary))
}

/// Reads `record_id<TAB>months` lines. A non-numeric first line is a header.
pub fn parse_age_table(text: &str) -> Result<BTreeMap<u64, u32>, PrepError> {
    let mut table = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cols = trimmed.split('\t').map(str::trim);
        let (Some(id), Some(months)) = (cols.next(), cols.next()) else {
            return Err(PrepError::AgeFormat { line: line_no });
        };
        let Ok(id) = id.parse::<u64>() else {
            if idx == 0 {
                continue;
            }
            return Err(PrepError::AgeFormat { line: line_no });
        };
        let months: i64 = months.parse().map_err(|_| PrepError::AgeFormat { line: line_no })?;
        if months < 0 {
            return Err(PrepError::NegativeAge { line: line_no, months });
        }
        table.insert(id, months as u32);
    }
    Ok(table)
}

pub fn attach_ages(records: &mut [LabeledRecord], ages: &BTreeMap<u64, u32>) {
    for r in records {
        if let Some(&m) = ages.get(&r.record_id) {
            r.age_months = Some(m);
        }
    }
}

/// Classifies every record that has a tree; records without one stay unlabeled.
pub fn classify_records(records: &mut [LabeledRecord], catalog: &Catalog) {
    records.par_iter_mut().for_each(|r| {
        r.assignment = r.tree.as_ref().map(|t| catalog.classify(t));
    });
}

/// Categorized records over all records, unparsed ones included.
pub fn coverage(records: &[LabeledRecord]) -> (usize, usize) {
    (records.iter().filter(|r| r.is_categorized()).count(), records.len())
}
