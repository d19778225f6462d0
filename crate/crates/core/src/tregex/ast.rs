use std::fmt;

use regex::Regex;

/// Node description: what a node's label (or a terminal's token) must look like.
#[derive(Debug, Clone)]
pub enum NodeDesc {
    Literal(String),
    Regex(LabelRegex),
    /// `__`
    Wildcard,
}

#[derive(Debug, Clone)]
pub struct LabelRegex {
    source: String,
    regex: Regex,
}

impl LabelRegex {
    pub fn new(source: &str) -> Result<Self, regex::Error> {
        Ok(LabelRegex { source: source.to_string(), regex: Regex::new(source)? })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn is_match(&self, label: &str) -> bool {
        self.regex.is_match(label)
    }
}

impl PartialEq for LabelRegex {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Eq for LabelRegex {}

impl PartialEq for NodeDesc {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (NodeDesc::Literal(a), NodeDesc::Literal(b)) => a == b,
            (NodeDesc::Regex(a), NodeDesc::Regex(b)) => a == b,
            (NodeDesc::Wildcard, NodeDesc::Wildcard) => true,
            _ => false,
        }
    }
}

impl Eq for NodeDesc {}

impl NodeDesc {
    pub fn matches(&self, label: &str) -> bool {
        match self {
            NodeDesc::Literal(l) => l == label,
            NodeDesc::Regex(r) => r.is_match(label),
            NodeDesc::Wildcard => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `<`
    Child,
    /// `>`
    Parent,
    /// `<<`
    Descendant,
    /// `>>`
    Ancestor,
    /// `<n`, 1-based
    NthChild(usize),
    /// `<:`
    OnlyChild,
    /// `$++`
    FollowingSibling,
    /// `$+`
    ImmediatelyFollowingSibling,
    /// `$--`
    PrecedingSibling,
}

impl RelationKind {
    pub fn symbol(&self) -> String {
        match self {
            RelationKind::Child => "<".into(),
            RelationKind::Parent => ">".into(),
            RelationKind::Descendant => "<<".into(),
            RelationKind::Ancestor => ">>".into(),
            RelationKind::NthChild(n) => format!("<{n}"),
            RelationKind::OnlyChild => "<:".into(),
            RelationKind::FollowingSibling => "$++".into(),
            RelationKind::ImmediatelyFollowingSibling => "$+".into(),
            RelationKind::PrecedingSibling => "$--".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub negated: bool,
    pub target: Pattern,
}

/// A constraint on the anchor node. Top-level terms are conjunctive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Relation(Relation),
    /// `[ g1 | g2 | ... ]`: holds iff some group holds; each group is a conjunction.
    AnyOf(Vec<Vec<Term>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub node: NodeDesc,
    pub terms: Vec<Term>,
}

impl Pattern {
    pub fn new(node: NodeDesc) -> Self {
        Pattern { node, terms: Vec::new() }
    }

    pub fn with(mut self, term: Term) -> Self {
        self.terms.push(term);
        self
    }

    /// Visits every node description in the pattern, the anchor first.
    pub fn for_each_desc<'a>(&'a self, f: &mut impl FnMut(&'a NodeDesc)) {
        f(&self.node);
        fn walk<'a>(terms: &'a [Term], f: &mut impl FnMut(&'a NodeDesc)) {
            for term in terms {
                match term {
                    Term::Relation(r) => r.target.for_each_desc(f),
                    Term::AnyOf(groups) => groups.iter().for_each(|g| walk(g, f)),
                }
            }
        }
        walk(&self.terms, f);
    }
}

impl Relation {
    pub fn new(kind: RelationKind, target: Pattern) -> Self {
        Relation { kind, negated: false, target }
    }

    pub fn negated(kind: RelationKind, target: Pattern) -> Self {
        Relation { kind, negated: true, target }
    }
}

impl fmt::Display for NodeDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeDesc::Literal(l) => f.write_str(l),
            NodeDesc::Regex(r) => write!(f, "/{}/", r.source().replace('/', "\\/")),
            NodeDesc::Wildcard => f.write_str("__"),
        }
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for term in terms {
        f.write_str(" ")?;
        match term {
            Term::Relation(r) => {
                if r.negated {
                    f.write_str("!")?;
                }
                f.write_str(&r.kind.symbol())?;
                if r.target.terms.is_empty() {
                    write!(f, " {}", r.target.node)?;
                } else {
                    write!(f, " ({})", r.target)?;
                }
            }
            Term::AnyOf(groups) => {
                f.write_str("[")?;
                for (i, group) in groups.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" |")?;
                    }
                    write_terms(f, group)?;
                }
                f.write_str(" ]")?;
            }
        }
    }
    Ok(())
}

/// Canonical single-line source; compiles back to an equal pattern.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.node)?;
        write_terms(f, &self.terms)
    }
}
