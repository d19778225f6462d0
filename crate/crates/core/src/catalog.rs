//! The thirteen syntactic categories, their macro-categories, and sentence
//! classification against a pattern catalog.
//!
//! A catalog directory holds one pattern file per category, named
//! `<nn>_<slug>.tgx`, and a `manifest.toml` binding each slug to its category
//! name, macro-category and priority. The default catalog ships with the crate
//! and is available through [`Catalog::bundled`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ptb::ParseTree;
use crate::tregex::{matches_sentence, parse_pattern_file, Pattern, PatternFileError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MacroCategory {
    Simple,
    Interrogatives,
    Complex,
}

impl MacroCategory {
    /// Developmental stage order: simple, then interrogatives, then complex.
    pub const ALL: [MacroCategory; 3] = [MacroCategory::Simple, MacroCategory::Interrogatives, MacroCategory::Complex];

    pub fn name(self) -> &'static str {
        match self {
            MacroCategory::Simple => "Simple",
            MacroCategory::Interrogatives => "Interrogatives",
            MacroCategory::Complex => "Complex",
        }
    }
}

impl fmt::Display for MacroCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MacroCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MacroCategory::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown macro-category {s:?}"))
    }
}

macro_rules! categories {
    ($($variant:ident => $name:literal, $macro:ident;)*) => {
        /// The thirteen syntactic categories, in table order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum CategoryId {
            $($variant,)*
        }

        impl CategoryId {
            pub const ALL: [CategoryId; 13] = [$(CategoryId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(CategoryId::$variant => $name,)*
                }
            }

            pub fn macro_category(self) -> MacroCategory {
                match self {
                    $(CategoryId::$variant => MacroCategory::$macro,)*
                }
            }
        }
    };
}

categories! {
    SubjectVerb => "Subject-Verb", Simple;
    AdverbsPossessives => "Adverbs & Possessives", Simple;
    Prepositions => "Prepositions", Simple;
    ParticleVerbs => "Particle verbs", Simple;
    Auxiliaries => "Auxiliaries", Simple;
    Negation => "Negation", Simple;
    Tense => "Tense", Simple;
    EmbeddedClauses => "Embedded clauses", Complex;
    ToInfinitives => "To-infinitives", Complex;
    LinkedClauses => "Linked clauses", Complex;
    RelativeClauses => "Relative clauses", Complex;
    Fragments => "Fragments", Complex;
    Interrogatives => "Interrogatives", Interrogatives;
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CategoryId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CategoryId::ALL.into_iter().find(|c| c.name() == s.trim()).ok_or_else(|| format!("unknown category {s:?}"))
    }
}

impl Serialize for CategoryId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for CategoryId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("manifest names unknown category {0:?}")]
    UnknownCategory(String),
    #[error("category {0} listed twice in manifest")]
    DuplicateCategory(CategoryId),
    #[error("category {0} missing from manifest")]
    MissingCategory(CategoryId),
    #[error("category {category} belongs to macro-category {expected}, manifest says {found}")]
    MacroMismatch { category: CategoryId, expected: MacroCategory, found: String },
    #[error("priority {0} assigned twice")]
    DuplicatePriority(u8),
    #[error("priority {0} outside 1..=13")]
    PriorityOutOfRange(i64),
    #[error("Interrogatives must outrank every Simple category ({0} does not rank below it)")]
    InterrogativePrecedence(CategoryId),
    #[error("no pattern file for slug {0:?}")]
    MissingFile(String),
    #[error("{file}: {error}")]
    Compile { file: String, error: PatternFileError },
    #[error("{0}: no patterns")]
    EmptyCategory(String),
    #[error("sentence is uncategorized")]
    Uncategorized,
}

impl CatalogError {
    /// 1-based line of a pattern compile failure, if that is what this is.
    pub fn line(&self) -> Option<usize> {
        match self {
            CatalogError::Compile { error, .. } => Some(error.line()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CategoryPattern {
    pub line: usize,
    pub source: String,
    pub pattern: Pattern,
}

#[derive(Debug, Clone)]
pub struct Category {
    pub id: CategoryId,
    pub slug: String,
    pub priority: u8,
    pub patterns: Vec<CategoryPattern>,
}

impl Category {
    pub fn macro_category(&self) -> MacroCategory {
        self.id.macro_category()
    }

    pub fn matches(&self, tree: &ParseTree) -> bool {
        self.patterns.iter().any(|p| matches_sentence(&p.pattern, tree))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CategoryAssignment {
    /// Matched categories in table order.
    pub matched: Vec<CategoryId>,
    pub primary: Option<CategoryId>,
    #[serde(rename = "macro")]
    pub macro_category: Option<MacroCategory>,
}

impl CategoryAssignment {
    pub fn uncategorized() -> Self {
        Self::default()
    }

    pub fn is_categorized(&self) -> bool {
        self.primary.is_some()
    }
}

#[derive(Debug, Deserialize)]
struct Manifest {
    category: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    slug: String,
    name: String,
    #[serde(rename = "macro")]
    macro_category: String,
    priority: i64,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    /// Sorted by category id.
    categories: Vec<Category>,
}

const BUNDLED_MANIFEST: &str = include_str!("../catalog/manifest.toml");
const BUNDLED_FILES: [(&str, &str); 13] = [
    ("01_subject-verb.tgx", include_str!("../catalog/01_subject-verb.tgx")),
    ("02_adverbs-possessives.tgx", include_str!("../catalog/02_adverbs-possessives.tgx")),
    ("03_prepositions.tgx", include_str!("../catalog/03_prepositions.tgx")),
    ("04_particle-verbs.tgx", include_str!("../catalog/04_particle-verbs.tgx")),
    ("05_auxiliaries.tgx", include_str!("../catalog/05_auxiliaries.tgx")),
    ("06_negation.tgx", include_str!("../catalog/06_negation.tgx")),
    ("07_tense.tgx", include_str!("../catalog/07_tense.tgx")),
    ("08_embedded-clauses.tgx", include_str!("../catalog/08_embedded-clauses.tgx")),
    ("09_to-infinitives.tgx", include_str!("../catalog/09_to-infinitives.tgx")),
    ("10_linked-clauses.tgx", include_str!("../catalog/10_linked-clauses.tgx")),
    ("11_relative-clauses.tgx", include_str!("../catalog/11_relative-clauses.tgx")),
    ("12_fragments.tgx", include_str!("../catalog/12_fragments.tgx")),
    ("13_interrogatives.tgx", include_str!("../catalog/13_interrogatives.tgx")),
];

/// Whether `file_name` is `<nn>_<slug>.tgx`.
fn is_category_file(file_name: &str, slug: &str) -> bool {
    let b = file_name.as_bytes();
    b.len() > 3
        && b[0].is_ascii_digit()
        && b[1].is_ascii_digit()
        && b[2] == b'_'
        && file_name[3..].strip_suffix(".tgx") == Some(slug)
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_sources(BUNDLED_MANIFEST, |slug| {
            BUNDLED_FILES
                .iter()
                .find(|(name, _)| is_category_file(name, slug))
                .map(|(name, text)| Ok(((*name).to_string(), (*text).to_string())))
        })
        .expect("bundled catalog is valid")
    }

    pub fn load(dir: &Path) -> Result<Self, CatalogError> {
        load_catalog(dir)
    }

    /// Builds a catalog from manifest text and a lookup that returns
    /// `(file name, contents)` for a slug.
    pub fn from_sources<F>(manifest: &str, mut lookup: F) -> Result<Self, CatalogError>
    where
        F: FnMut(&str) -> Option<Result<(String, String), CatalogError>>,
    {
        let manifest: Manifest = toml::from_str(manifest).map_err(|e| CatalogError::Manifest(e.to_string()))?;
        let mut seen_ids = HashSet::new();
        let mut seen_priorities = HashSet::new();
        let mut categories = Vec::new();
        for entry in manifest.category {
            let id: CategoryId = entry.name.parse().map_err(|_| CatalogError::UnknownCategory(entry.name.clone()))?;
            if !seen_ids.insert(id) {
                return Err(CatalogError::DuplicateCategory(id));
            }
            let found_macro = entry.macro_category.parse::<MacroCategory>().ok();
            if found_macro != Some(id.macro_category()) {
                return Err(CatalogError::MacroMismatch {
                    category: id,
                    expected: id.macro_category(),
                    found: entry.macro_category.clone(),
                });
            }
            if !(1..=13).contains(&entry.priority) {
                return Err(CatalogError::PriorityOutOfRange(entry.priority));
            }
            let priority = entry.priority as u8;
            if !seen_priorities.insert(priority) {
                return Err(CatalogError::DuplicatePriority(priority));
            }
            let (file, text) = lookup(&entry.slug).ok_or_else(|| CatalogError::MissingFile(entry.slug.clone()))??;
            let patterns =
                parse_pattern_file(&text).map_err(|error| CatalogError::Compile { file: file.clone(), error })?;
            if patterns.is_empty() {
                return Err(CatalogError::EmptyCategory(file));
            }
            categories.push(Category {
                id,
                slug: entry.slug,
                priority,
                patterns: patterns
                    .into_iter()
                    .map(|p| CategoryPattern { line: p.line, source: p.source, pattern: p.pattern })
                    .collect(),
            });
        }
        if let Some(missing) = CategoryId::ALL.into_iter().find(|id| !seen_ids.contains(id)) {
            return Err(CatalogError::MissingCategory(missing));
        }
        categories.sort_by_key(|c| c.id);
        let catalog = Catalog { categories };
        let interrogative = catalog.category(CategoryId::Interrogatives).priority;
        for c in &catalog.categories {
            if c.macro_category() == MacroCategory::Simple && c.priority > interrogative {
                return Err(CatalogError::InterrogativePrecedence(c.id));
            }
        }
        Ok(catalog)
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, id: CategoryId) -> &Category {
        &self.categories[CategoryId::ALL.iter().position(|&c| c == id).expect("known id")]
    }

    pub fn priority(&self, id: CategoryId) -> u8 {
        self.category(id).priority
    }

    pub fn pattern_count(&self) -> usize {
        self.categories.iter().map(|c| c.patterns.len()).sum()
    }

    pub fn classify(&self, tree: &ParseTree) -> CategoryAssignment {
        classify(tree, self)
    }

    /// A copy keeping only the patterns accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(CategoryId, &Pattern) -> bool) -> Catalog {
        let categories = self
            .categories
            .iter()
            .map(|c| Category {
                patterns: c.patterns.iter().filter(|p| keep(c.id, &p.pattern)).cloned().collect(),
                ..c.clone()
            })
            .collect();
        Catalog { categories }
    }
}

pub fn load_catalog(dir: &Path) -> Result<Catalog, CatalogError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CatalogError::Io { path, source }
    };
    let manifest_path = dir.join("manifest.toml");
    let manifest = std::fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .collect();
    names.sort();
    Catalog::from_sources(&manifest, |slug| {
        let name = names.iter().find(|n| is_category_file(n, slug))?;
        let path = dir.join(name);
        Some(std::fs::read_to_string(&path).map(|text| (name.clone(), text)).map_err(io_err(&path)))
    })
}

pub fn classify(tree: &ParseTree, catalog: &Catalog) -> CategoryAssignment {
    let matched: BTreeSet<CategoryId> = catalog.categories.iter().filter(|c| c.matches(tree)).map(|c| c.id).collect();
    let primary = matched.iter().copied().max_by_key(|&id| catalog.priority(id));
    CategoryAssignment {
        matched: matched.into_iter().collect(),
        primary,
        macro_category: primary.map(CategoryId::macro_category),
    }
}

fn is_clause_label(label: &str) -> bool {
    label == "S" || label == "SBAR"
}

/// Splits categorized sentences into simple and complex by nested embedding:
/// complex macro-category, or an interrogative with an S/SBAR node inside
/// another S/SBAR.
pub fn is_complex_for_c2(assignment: &CategoryAssignment, tree: &ParseTree) -> Result<bool, CatalogError> {
    let primary = assignment.primary.ok_or(CatalogError::Uncategorized)?;
    Ok(match primary.macro_category() {
        MacroCategory::Complex => true,
        MacroCategory::Simple => false,
        MacroCategory::Interrogatives => tree.node_ids().any(|id| {
            is_clause_label(tree.label(id)) && {
                let mut cur = tree.parent(id);
                let mut nested = false;
                while let Some(p) = cur {
                    if is_clause_label(tree.label(p)) {
                        nested = true;
                        break;
                    }
                    cur = tree.parent(p);
                }
                nested
            }
        }),
    })
}
