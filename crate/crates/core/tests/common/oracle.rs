//! Declarative reference semantics for patterns, evaluated bottom-up over
//! node sets. Relations are defined pairwise from parent pointers and child
//! positions; nothing is shared with the library matcher beyond the AST.

use syncur::ptb::Constituent;
use syncur::tregex::{NodeDesc, Pattern, RelationKind, Term};

pub struct OracleTree {
    labels: Vec<String>,
    parent: Vec<Option<usize>>,
    /// Position among the parent's children.
    index: Vec<usize>,
    child_count: Vec<usize>,
    /// Nodes below this bound are tree nodes in preorder; the rest are tokens.
    tree_nodes: usize,
}

impl OracleTree {
    pub fn new(root: &Constituent) -> Self {
        let mut t = OracleTree { labels: vec![], parent: vec![], index: vec![], child_count: vec![], tree_nodes: 0 };
        let mut tokens = Vec::new();
        t.add(root, None, 0, &mut tokens);
        t.tree_nodes = t.labels.len();
        for (leaf, token) in tokens {
            t.labels.push(token);
            t.parent.push(Some(leaf));
            t.index.push(0);
            t.child_count.push(0);
            t.child_count[leaf] = 1;
        }
        t
    }

    fn add(&mut self, c: &Constituent, parent: Option<usize>, index: usize, tokens: &mut Vec<(usize, String)>) {
        let id = self.labels.len();
        self.parent.push(parent);
        self.index.push(index);
        match c {
            Constituent::Leaf { label, token } => {
                self.labels.push(label.clone());
                self.child_count.push(0);
                tokens.push((id, token.clone()));
            }
            Constituent::Phrase { label, children } => {
                self.labels.push(label.clone());
                self.child_count.push(children.len());
                for (i, ch) in children.iter().enumerate() {
                    self.add(ch, Some(id), i, tokens);
                }
            }
        }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = self.parent[b];
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    fn siblings(&self, a: usize, b: usize) -> bool {
        a != b && self.parent[a].is_some() && self.parent[a] == self.parent[b]
    }

    /// Whether `rel(a, b)` holds, with `a` the anchor.
    fn related(&self, kind: RelationKind, a: usize, b: usize) -> bool {
        match kind {
            RelationKind::Child => self.parent[b] == Some(a),
            RelationKind::Parent => self.parent[a] == Some(b),
            RelationKind::Descendant => self.is_ancestor(a, b),
            RelationKind::Ancestor => self.is_ancestor(b, a),
            RelationKind::NthChild(n) => self.parent[b] == Some(a) && self.index[b] + 1 == n,
            RelationKind::OnlyChild => self.parent[b] == Some(a) && self.child_count[a] == 1,
            RelationKind::FollowingSibling => self.siblings(a, b) && self.index[b] > self.index[a],
            RelationKind::ImmediatelyFollowingSibling => self.siblings(a, b) && self.index[b] == self.index[a] + 1,
            RelationKind::PrecedingSibling => self.siblings(a, b) && self.index[b] < self.index[a],
        }
    }

    fn desc_holds(desc: &NodeDesc, label: &str) -> bool {
        match desc {
            NodeDesc::Wildcard => true,
            NodeDesc::Literal(l) => l == label,
            NodeDesc::Regex(r) => r.is_match(label),
        }
    }

    /// Membership vector of the nodes satisfying `pattern`.
    fn satisfying(&self, pattern: &Pattern) -> Vec<bool> {
        let base: Vec<bool> = self.labels.iter().map(|l| Self::desc_holds(&pattern.node, l)).collect();
        let terms = self.terms_set(&pattern.terms);
        base.iter().zip(terms).map(|(a, b)| *a && b).collect()
    }

    fn terms_set(&self, terms: &[Term]) -> Vec<bool> {
        let mut acc = vec![true; self.len()];
        for term in terms {
            let set = match term {
                Term::Relation(r) => {
                    let targets = self.satisfying(&r.target);
                    (0..self.len())
                        .map(|a| {
                            let exists = (0..self.len()).any(|b| targets[b] && self.related(r.kind, a, b));
                            exists != r.negated
                        })
                        .collect::<Vec<bool>>()
                }
                Term::AnyOf(groups) => {
                    let mut any = vec![false; self.len()];
                    for g in groups {
                        for (x, y) in any.iter_mut().zip(self.terms_set(g)) {
                            *x |= y;
                        }
                    }
                    any
                }
            };
            for (x, y) in acc.iter_mut().zip(set) {
                *x &= y;
            }
        }
        acc
    }

    /// Tree nodes (not tokens) where the pattern matches, ascending.
    pub fn match_nodes(&self, pattern: &Pattern) -> Vec<usize> {
        let sat = self.satisfying(pattern);
        (0..self.tree_nodes).filter(|&i| sat[i]).collect()
    }
}
