use thiserror::Error;

use super::ast::{LabelRegex, NodeDesc, Pattern, Relation, RelationKind, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern error at byte {position}: {kind}")]
pub struct CompileError {
    pub position: usize,
    pub kind: CompileErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileErrorKind {
    #[error("empty pattern")]
    Empty,
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation without a target node")]
    DanglingRelation,
    #[error("unbalanced `{0}`")]
    Unbalanced(char),
    #[error("invalid regex: {0}")]
    InvalidRegex(String),
    #[error("unsupported tregex feature `{0}`")]
    Unsupported(char),
    #[error("expected {0}")]
    Expected(&'static str),
}

/// Compiles a tregex pattern. Whitespace between elements is ignored.
pub fn compile_pattern(source: &str) -> Result<Pattern, CompileError> {
    let mut p = Parser { src: source, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error(CompileErrorKind::Empty));
    }
    let pattern = p.pattern()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(pattern),
        Some(')') => Err(p.error(CompileErrorKind::Unbalanced(')'))),
        Some(']') => Err(p.error(CompileErrorKind::Unbalanced(']'))),
        Some('|') => Err(p.error(CompileErrorKind::Expected("`|` only inside `[ ]`"))),
        Some(_) => Err(p.error(CompileErrorKind::Expected("relation"))),
    }
}

impl std::str::FromStr for Pattern {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        compile_pattern(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const RESERVED: &[char] = &['(', ')', '[', ']', '|', '!', '<', '>', '/'];
const UNSUPPORTED: &[char] = &['=', '?', '~', '@', '%', '&'];

impl<'a> Parser<'a> {
    fn error(&self, kind: CompileErrorKind) -> CompileError {
        CompileError { position: self.pos, kind }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    // pattern := atom term*
    fn pattern(&mut self) -> Result<Pattern, CompileError> {
        let mut pattern = self.atom()?;
        let more = self.terms()?;
        pattern.terms.extend(more);
        Ok(pattern)
    }

    // atom := '(' pattern ')' | node-desc
    fn atom(&mut self) -> Result<Pattern, CompileError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error(CompileErrorKind::DanglingRelation)),
            Some('(') => {
                let open = self.pos;
                self.bump();
                let inner = self.pattern()?;
                self.skip_ws();
                match self.peek() {
                    Some(')') => {
                        self.bump();
                        Ok(inner)
                    }
                    None => Err(CompileError { position: self.pos.max(open), kind: CompileErrorKind::Unbalanced('(') }),
                    Some(_) => Err(self.error(CompileErrorKind::Expected("relation or `)`"))),
                }
            }
            Some(_) => Ok(Pattern::new(self.node_desc()?)),
        }
    }

    fn node_desc(&mut self) -> Result<NodeDesc, CompileError> {
        let start = self.pos;
        match self.peek() {
            Some('/') => {
                self.bump();
                let mut source = String::new();
                loop {
                    match self.bump() {
                        None => return Err(CompileError { position: start, kind: CompileErrorKind::Unbalanced('/') }),
                        Some('\\') if self.peek() == Some('/') => {
                            self.bump();
                            source.push('/');
                        }
                        Some('/') => break,
                        Some(c) => source.push(c),
                    }
                }
                LabelRegex::new(&source)
                    .map(NodeDesc::Regex)
                    .map_err(|e| CompileError { position: start, kind: CompileErrorKind::InvalidRegex(e.to_string()) })
            }
            Some(c) if c.is_whitespace() || RESERVED.contains(&c) => {
                let kind = match c {
                    ')' => CompileErrorKind::Unbalanced(')'),
                    ']' => CompileErrorKind::Unbalanced(']'),
                    _ => CompileErrorKind::Expected("node description"),
                };
                Err(self.error(kind))
            }
            Some(c) if UNSUPPORTED.contains(&c) => Err(self.error(CompileErrorKind::Unsupported(c))),
            Some('$') if matches!(self.peek_at(1), Some('+') | Some('-')) => {
                Err(self.error(CompileErrorKind::DanglingRelation))
            }
            None => Err(self.error(CompileErrorKind::DanglingRelation)),
            Some(_) => {
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || RESERVED.contains(&c) {
                        break;
                    }
                    if UNSUPPORTED.contains(&c) {
                        return Err(self.error(CompileErrorKind::Unsupported(c)));
                    }
                    // `$` belongs to the label (PRP$) unless it opens a sibling relation.
                    if c == '$' && matches!(self.peek_at(1), Some('+') | Some('-')) {
                        break;
                    }
                    label.push(c);
                    self.bump();
                }
                Ok(if label == "__" { NodeDesc::Wildcard } else { NodeDesc::Literal(label) })
            }
        }
    }

    // Reads terms until `)`, `]`, `|` or end of input.
    fn terms(&mut self) -> Result<Vec<Term>, CompileError> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(')') | Some(']') | Some('|') => return Ok(terms),
                Some('[') => terms.push(self.disjunction()?),
                Some(_) => terms.push(Term::Relation(self.relation()?)),
            }
        }
    }

    fn disjunction(&mut self) -> Result<Term, CompileError> {
        let open = self.pos;
        self.bump();
        let mut groups = Vec::new();
        loop {
            let group = self.terms()?;
            if group.is_empty() {
                return Err(self.error(CompileErrorKind::Expected("relation inside `[ ]`")));
            }
            groups.push(group);
            match self.peek() {
                Some('|') => {
                    self.bump();
                }
                Some(']') => {
                    self.bump();
                    return Ok(Term::AnyOf(groups));
                }
                Some(')') => return Err(self.error(CompileErrorKind::Unbalanced(')'))),
                _ => {
                    return Err(CompileError { position: self.pos.max(open), kind: CompileErrorKind::Unbalanced('[') })
                }
            }
        }
    }

    fn relation(&mut self) -> Result<Relation, CompileError> {
        let negated = if self.peek() == Some('!') {
            self.bump();
            true
        } else {
            false
        };
        let kind = self.relation_kind()?;
        let target = self.atom()?;
        Ok(Relation { kind, negated, target })
    }

    fn relation_kind(&mut self) -> Result<RelationKind, CompileError> {
        let start = self.pos;
        let unknown = |p: &Self, len: usize| CompileError {
            position: start,
            kind: CompileErrorKind::UnknownRelation(p.src[start..(start + len).min(p.src.len())].to_string()),
        };
        match self.peek() {
            Some('<') => {
                self.bump();
                match self.peek() {
                    Some('<') => {
                        self.bump();
                        Ok(RelationKind::Descendant)
                    }
                    Some(':') => {
                        self.bump();
                        Ok(RelationKind::OnlyChild)
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
                        self.pos += digits.len();
                        match digits.parse::<usize>() {
                            Ok(n) if n >= 1 => Ok(RelationKind::NthChild(n)),
                            _ => Err(unknown(self, 1 + digits.len())),
                        }
                    }
                    Some('-' | ',' | '`' | '+' | '#' | '=' | '.') => Err(unknown(self, 2)),
                    _ => Ok(RelationKind::Child),
                }
            }
            Some('>') => {
                self.bump();
                match self.peek() {
                    Some('>') => {
                        self.bump();
                        Ok(RelationKind::Ancestor)
                    }
                    Some(c) if matches!(c, ':' | '-' | ',' | '`' | '+' | '#' | '=' | '.') || c.is_ascii_digit() => {
                        Err(unknown(self, 2))
                    }
                    _ => Ok(RelationKind::Parent),
                }
            }
            Some('$') => {
                let rest = self.rest();
                if rest.starts_with("$++") {
                    self.pos += 3;
                    Ok(RelationKind::FollowingSibling)
                } else if rest.starts_with("$--") {
                    self.pos += 3;
                    Ok(RelationKind::PrecedingSibling)
                } else if rest.starts_with("$+") {
                    self.pos += 2;
                    Ok(RelationKind::ImmediatelyFollowingSibling)
                } else {
                    Err(unknown(self, 2))
                }
            }
            Some(c) if UNSUPPORTED.contains(&c) => Err(self.error(CompileErrorKind::Unsupported(c))),
            Some(_) => {
                let len = self
                    .rest()
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(self.rest().len())
                    .max(1);
                Err(unknown(self, len))
            }
            None => Err(self.error(CompileErrorKind::Expected("relation"))),
        }
    }
}
