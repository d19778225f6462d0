//! Penn-Treebank bracketed trees.
//!
//! A [`ParseTree`] is stored as a flat preorder arena: node ids are dense in
//! `0..node_count()` and id `0` is the root. Leaves (preterminals) carry the
//! token of their terminal; internal nodes carry none.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtbError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("structure error at byte {offset}: {message}")]
    Structure { offset: usize, message: String },
}

impl PtbError {
    pub fn offset(&self) -> usize {
        match self {
            PtbError::Syntax { offset, .. } | PtbError::Structure { offset, .. } => *offset,
        }
    }

    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        PtbError::Syntax { offset, message: message.into() }
    }

    fn structure(offset: usize, message: impl Into<String>) -> Self {
        PtbError::Structure { offset, message: message.into() }
    }
}

/// Nested, owned form of a tree. Used to build trees programmatically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constituent {
    Leaf { label: String, token: String },
    Phrase { label: String, children: Vec<Constituent> },
}

impl Constituent {
    pub fn leaf(label: impl Into<String>, token: impl Into<String>) -> Self {
        Constituent::Leaf { label: label.into(), token: token.into() }
    }

    pub fn phrase(label: impl Into<String>, children: Vec<Constituent>) -> Self {
        Constituent::Phrase { label: label.into(), children }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    label: String,
    /// Label as written in the source when it carried function tags or indices.
    raw_label: Option<String>,
    token: Option<String>,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    nodes: Vec<Node>,
}

const ESCAPES: [(&str, &str); 6] =
    [("-LRB-", "("), ("-RRB-", ")"), ("-LCB-", "{"), ("-RCB-", "}"), ("-LSB-", "["), ("-RSB-", "]")];

fn unescape_token(raw: &str) -> String {
    ESCAPES
        .iter()
        .find(|(escaped, _)| *escaped == raw)
        .map(|(_, surface)| (*surface).to_string())
        .unwrap_or_else(|| raw.to_string())
}

fn escape_token(token: &str) -> &str {
    ESCAPES.iter().find(|(_, surface)| *surface == token).map(|(escaped, _)| *escaped).unwrap_or(token)
}

/// Strips function tags and coindexation (`NP-SBJ-1` -> `NP`, `NP=2` -> `NP`).
/// Labels that start with `-` (`-NONE-`, `-LRB-`) are kept whole.
pub fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    match label.find(['-', '=']) {
        Some(idx) if idx > 0 => &label[..idx],
        _ => label,
    }
}

fn is_atom_char(c: char) -> bool {
    !c.is_whitespace() && c != '(' && c != ')'
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(is_atom_char)
}

fn valid_token(token: &str) -> bool {
    if ESCAPES.iter().any(|(escaped, _)| *escaped == token) {
        return false;
    }
    if ESCAPES.iter().any(|(_, surface)| *surface == token) {
        return true;
    }
    !token.is_empty() && token.chars().all(is_atom_char)
}

impl ParseTree {
    /// Builds a tree from its nested form, validating labels and tokens.
    pub fn from_constituent(root: &Constituent) -> Result<Self, PtbError> {
        let mut nodes = Vec::new();
        push_constituent(&mut nodes, root, None)?;
        Ok(ParseTree { nodes })
    }

    pub fn to_constituent(&self) -> Constituent {
        self.constituent_at(0)
    }

    fn constituent_at(&self, id: NodeId) -> Constituent {
        let node = &self.nodes[id];
        let label = node.raw_label.clone().unwrap_or_else(|| node.label.clone());
        match &node.token {
            Some(token) => Constituent::Leaf { label, token: token.clone() },
            None => {
                Constituent::Phrase { label, children: node.children.iter().map(|&c| self.constituent_at(c)).collect() }
            }
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_ids(&self) -> std::ops::Range<NodeId> {
        0..self.nodes.len()
    }

    /// Base label (function tags stripped).
    pub fn label(&self, id: NodeId) -> &str {
        &self.nodes[id].label
    }

    /// Label as it appeared in the bracketed source.
    pub fn raw_label(&self, id: NodeId) -> &str {
        self.nodes[id].raw_label.as_deref().unwrap_or(&self.nodes[id].label)
    }

    pub fn token(&self, id: NodeId) -> Option<&str> {
        self.nodes[id].token.as_deref()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id].parent
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_empty()
    }

    /// Leaf ids in left-to-right order. Preorder already visits leaves in
    /// surface order.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(move |&id| self.is_leaf(id))
    }

    pub fn yield_tokens(&self) -> Vec<String> {
        self.leaves().filter_map(|id| self.token(id).map(str::to_string)).collect()
    }

    /// True if `ancestor` properly dominates `node`.
    pub fn dominates(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = self.parent(node);
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.parent(p);
        }
        false
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write_node(0, &mut out);
        out
    }

    fn write_node(&self, id: NodeId, out: &mut String) {
        out.push('(');
        out.push_str(self.raw_label(id));
        let node = &self.nodes[id];
        if let Some(token) = &node.token {
            out.push(' ');
            out.push_str(escape_token(token));
        }
        for &child in &node.children {
            out.push(' ');
            self.write_node(child, out);
        }
        out.push(')');
    }
}

fn push_constituent(nodes: &mut Vec<Node>, c: &Constituent, parent: Option<NodeId>) -> Result<NodeId, PtbError> {
    let id = nodes.len();
    let (raw, token, kids) = match c {
        Constituent::Leaf { label, token } => {
            if !valid_token(token) {
                return Err(PtbError::structure(0, format!("invalid token {token:?}")));
            }
            (label, Some(token.clone()), &[][..])
        }
        Constituent::Phrase { label, children } => {
            if children.is_empty() {
                return Err(PtbError::structure(0, format!("node {label:?} has no children")));
            }
            (label, None, children.as_slice())
        }
    };
    if !valid_label(raw) {
        return Err(PtbError::structure(0, format!("invalid label {raw:?}")));
    }
    let base = base_label(raw);
    nodes.push(Node {
        label: base.to_string(),
        raw_label: (base != raw).then(|| raw.clone()),
        token,
        parent,
        children: Vec::with_capacity(kids.len()),
    });
    for kid in kids {
        let child = push_constituent(nodes, kid, Some(id))?;
        nodes[id].children.push(child);
    }
    Ok(id)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Lexeme<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&mut self) -> Option<(usize, Lexeme<'a>)> {
        let save = self.pos;
        let next = self.next();
        self.pos = save;
        next
    }

    fn next(&mut self) -> Option<(usize, Lexeme<'a>)> {
        let rest = &self.src[self.pos..];
        let skipped = rest.len() - rest.trim_start().len();
        self.pos += skipped;
        let start = self.pos;
        let c = self.src[start..].chars().next()?;
        match c {
            '(' => {
                self.pos += 1;
                Some((start, Lexeme::Open))
            }
            ')' => {
                self.pos += 1;
                Some((start, Lexeme::Close))
            }
            _ => {
                let len = self.src[start..].find(|c: char| !is_atom_char(c)).unwrap_or(self.src.len() - start);
                self.pos += len;
                Some((start, Lexeme::Atom(&self.src[start..start + len])))
            }
        }
    }
}

/// Parses one bracketed tree. The input must fit on a single line.
pub fn parse_ptb(text: &str) -> Result<ParseTree, PtbError> {
    let trimmed_len = text.trim_end().len();
    if let Some(nl) = text[..trimmed_len].find(['\n', '\r']) {
        return Err(PtbError::syntax(nl, "tree spans multiple lines"));
    }
    let mut lexer = Lexer { src: text, pos: 0 };
    let root = match lexer.next() {
        Some((_, Lexeme::Open)) => parse_node(&mut lexer)?,
        Some((offset, _)) => return Err(PtbError::syntax(offset, "expected '('")),
        None => return Err(PtbError::syntax(text.len(), "empty input")),
    };
    if let Some((offset, _)) = lexer.next() {
        return Err(PtbError::syntax(offset, "trailing input after tree"));
    }
    ParseTree::from_constituent(&root).map_err(|e| match e {
        PtbError::Structure { message, .. } => PtbError::structure(0, message),
        other => other,
    })
}

// Called after the opening paren has been consumed.
fn parse_node(lexer: &mut Lexer<'_>) -> Result<Constituent, PtbError> {
    let open_at = lexer.pos.saturating_sub(1);
    let label = match lexer.peek() {
        Some((_, Lexeme::Atom(a))) => {
            lexer.next();
            a.to_string()
        }
        _ => String::new(),
    };
    let mut children = Vec::new();
    let mut token: Option<String> = None;
    loop {
        match lexer.next() {
            None => return Err(PtbError::syntax(lexer.src.len(), "unbalanced parentheses")),
            Some((_, Lexeme::Close)) => break,
            Some((offset, Lexeme::Open)) => {
                if token.is_some() {
                    return Err(PtbError::structure(offset, "node mixes a token and children"));
                }
                children.push(parse_node(lexer)?);
            }
            Some((offset, Lexeme::Atom(a))) => {
                if token.is_some() || !children.is_empty() {
                    return Err(PtbError::structure(offset, "node mixes a token and children"));
                }
                token = Some(unescape_token(a));
            }
        }
    }
    match (label.is_empty(), token, children.len()) {
        (true, None, 1) => Ok(children.pop().expect("one child")),
        (true, _, _) => Err(PtbError::structure(open_at, "node without label")),
        (false, Some(token), _) => Ok(Constituent::Leaf { label, token }),
        (false, None, 0) => Err(PtbError::structure(open_at, format!("empty node {label:?}"))),
        (false, None, _) => Ok(Constituent::Phrase { label, children }),
    }
}

pub fn serialize_ptb(tree: &ParseTree) -> String {
    tree.serialize()
}

pub fn yield_tokens(tree: &ParseTree) -> Vec<String> {
    tree.yield_tokens()
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl std::str::FromStr for ParseTree {
    type Err = PtbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ptb(s)
    }
}

impl Serialize for ParseTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&ParseTree::serialize(self))
    }
}

impl<'de> Deserialize<'de> for ParseTree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_ptb(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const BECAUSE: &str = "(S (NP (DT My) (NNS feet)) (VP (VBP are) (ADJP (JJ dry)) \
        (SBAR (IN because) (S (NP (PRP I)) (VP (VBP have) (NP (NNS boots)))))) (. .))";

    #[test]
    fn two_leaf_tree() {
        let t = parse_ptb("(S (NP (PRP I)) (VP (VBP run)))").unwrap();
        assert_eq!(t.label(t.root()), "S");
        let kids: Vec<_> = t.children(0).iter().map(|&c| t.label(c)).collect();
        assert_eq!(kids, ["NP", "VP"]);
        assert_eq!(t.yield_tokens(), ["I", "run"]);
    }

    #[test]
    fn because_tree_has_nested_clause() {
        let t = parse_ptb(BECAUSE).unwrap();
        let vp = t.children(0)[1];
        assert_eq!(t.label(vp), "VP");
        let sbar = t.children(vp)[2];
        assert_eq!(t.label(sbar), "SBAR");
        assert!(t.children(sbar).iter().any(|&c| t.label(c) == "S"));
        assert_eq!(t.yield_tokens(), ["My", "feet", "are", "dry", "because", "I", "have", "boots", "."]);
    }

    #[test]
    fn unbalanced_reports_offset() {
        let err = parse_ptb("(S (NP").unwrap_err();
        assert!(matches!(err, PtbError::Syntax { offset: 6, .. }), "{err:?}");
        let err = parse_ptb("(S (NP x)))").unwrap_err();
        assert!(matches!(err, PtbError::Syntax { offset: 10, .. }), "{err:?}");
    }

    #[test]
    fn empty_node_is_structure_error() {
        assert!(matches!(parse_ptb("(S (NP) (VP (VB go)))"), Err(PtbError::Structure { .. })));
        assert!(matches!(parse_ptb("(())"), Err(PtbError::Structure { .. })));
    }

    #[test]
    fn multi_line_rejected() {
        assert!(matches!(parse_ptb("(S\n (NP (NN x)))"), Err(PtbError::Syntax { offset: 2, .. })));
        assert!(parse_ptb("(S (NP (NN x)))\n").is_ok());
    }

    #[test]
    fn single_leaf_serializes() {
        let t = ParseTree::from_constituent(&Constituent::leaf("NN", "dog")).unwrap();
        assert_eq!(t.serialize(), "(NN dog)");
    }

    #[test]
    fn escapes_round_trip() {
        let t = parse_ptb("(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))").unwrap();
        assert_eq!(t.yield_tokens(), ["(", "x", ")"]);
        assert_eq!(t.label(1), "-LRB-");
        assert_eq!(t.serialize(), "(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))");
    }

    #[test]
    fn function_tags_stripped_but_serialized() {
        let src = "(S (NP-SBJ-1 (PRP She)) (VP (VBZ runs)) (. .))";
        let t = parse_ptb(src).unwrap();
        assert_eq!(t.label(1), "NP");
        assert_eq!(t.raw_label(1), "NP-SBJ-1");
        assert_eq!(t.serialize(), src);
        assert_eq!(base_label("-NONE-"), "-NONE-");
        assert_eq!(base_label("NP=2"), "NP");
    }

    #[test]
    fn unlabeled_wrapper_is_unwrapped() {
        let t = parse_ptb("( (S (NP (PRP I)) (VP (VBP run))))").unwrap();
        assert_eq!(t.label(0), "S");
        assert!(parse_ptb("(x y (z))").is_err());
    }

    #[test]
    fn canonical_form_collapses_whitespace() {
        let spaced = BECAUSE.replace(' ', "   ");
        let t = parse_ptb(&spaced).unwrap();
        assert_eq!(t.serialize(), BECAUSE);
    }

    #[test]
    fn preorder_ids_and_parents() {
        let t = parse_ptb(BECAUSE).unwrap();
        for id in t.node_ids().skip(1) {
            let p = t.parent(id).unwrap();
            assert!(p < id);
            assert!(t.children(p).contains(&id));
        }
        assert_eq!(t.leaves().count(), t.yield_tokens().len());
    }
}
