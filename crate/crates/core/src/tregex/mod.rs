//! A tree-regex engine covering the Tregex subset used by the category
//! catalog: dominance, parent/ancestor, nth/only child and sibling relations,
//! `!` negation and `[ a | b ]` disjunction.
//!
//! Matching is existential per relation: a node matches when its label fits
//! the node description and, for every relation, some related node matches
//! the relation's target (for a negated relation, none does).

mod ast;
mod file;
mod matcher;
mod parser;

pub use ast::{LabelRegex, NodeDesc, Pattern, Relation, RelationKind, Term};
pub use file::{parse_pattern_file, PatternFileError, PatternLine};
pub use matcher::{match_nodes, matches_at, matches_sentence};
pub use parser::{compile_pattern, CompileError, CompileErrorKind};
