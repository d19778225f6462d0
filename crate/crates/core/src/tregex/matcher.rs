use crate::ptb::{NodeId, ParseTree};

use super::ast::{Pattern, Relation, RelationKind, Term};

/// Tree view used during matching. Tokens are terminal nodes hanging below
/// their leaf, so `RB < not` works as in Tregex. Terminal ids follow the tree's
/// own ids; they can be reached through relations but are never reported.
struct View<'t> {
    tree: &'t ParseTree,
    /// Terminal id for each tree node that is a leaf.
    terminal_of: Vec<Option<usize>>,
    /// Leaf id for each terminal, indexed by `terminal - tree.node_count()`.
    leaf_of: Vec<NodeId>,
}

impl<'t> View<'t> {
    fn new(tree: &'t ParseTree) -> Self {
        let n = tree.node_count();
        let mut terminal_of = vec![None; n];
        let mut leaf_of = Vec::new();
        for id in tree.node_ids() {
            if tree.token(id).is_some() {
                terminal_of[id] = Some(n + leaf_of.len());
                leaf_of.push(id);
            }
        }
        View { tree, terminal_of, leaf_of }
    }

    fn is_terminal(&self, v: usize) -> bool {
        v >= self.tree.node_count()
    }

    fn label(&self, v: usize) -> &str {
        if self.is_terminal(v) {
            let leaf = self.leaf_of[v - self.tree.node_count()];
            self.tree.token(leaf).unwrap_or_default()
        } else {
            self.tree.label(v)
        }
    }

    fn children(&self, v: usize) -> &[usize] {
        if self.is_terminal(v) {
            &[]
        } else if let Some(t) = &self.terminal_of[v] {
            std::slice::from_ref(t)
        } else {
            self.tree.children(v)
        }
    }

    fn parent(&self, v: usize) -> Option<usize> {
        if self.is_terminal(v) {
            Some(self.leaf_of[v - self.tree.node_count()])
        } else {
            self.tree.parent(v)
        }
    }

    /// Siblings of `v` (including `v`) and its index among them.
    fn siblings(&self, v: usize) -> Option<(&[usize], usize)> {
        let parent = self.parent(v)?;
        let sibs = self.children(parent);
        let idx = sibs.iter().position(|&s| s == v)?;
        Some((sibs, idx))
    }
}

struct Matcher<'t> {
    view: View<'t>,
}

impl Matcher<'_> {
    fn matches(&self, pattern: &Pattern, v: usize) -> bool {
        pattern.node.matches(self.view.label(v)) && self.terms_hold(&pattern.terms, v)
    }

    fn terms_hold(&self, terms: &[Term], v: usize) -> bool {
        terms.iter().all(|term| match term {
            Term::Relation(r) => self.relation_holds(r, v),
            Term::AnyOf(groups) => groups.iter().any(|g| self.terms_hold(g, v)),
        })
    }

    fn relation_holds(&self, rel: &Relation, v: usize) -> bool {
        self.exists_related(rel.kind, v, &rel.target) != rel.negated
    }

    fn exists_related(&self, kind: RelationKind, v: usize, target: &Pattern) -> bool {
        let view = &self.view;
        let hit = |u: usize| self.matches(target, u);
        match kind {
            RelationKind::Child => view.children(v).iter().any(|&c| hit(c)),
            RelationKind::Parent => view.parent(v).is_some_and(hit),
            RelationKind::Descendant => {
                let mut stack: Vec<usize> = view.children(v).to_vec();
                while let Some(u) = stack.pop() {
                    if hit(u) {
                        return true;
                    }
                    stack.extend_from_slice(view.children(u));
                }
                false
            }
            RelationKind::Ancestor => {
                let mut cur = view.parent(v);
                while let Some(u) = cur {
                    if hit(u) {
                        return true;
                    }
                    cur = view.parent(u);
                }
                false
            }
            RelationKind::NthChild(n) => view.children(v).get(n - 1).is_some_and(|&c| hit(c)),
            RelationKind::OnlyChild => matches!(view.children(v), [only] if hit(*only)),
            RelationKind::FollowingSibling => {
                view.siblings(v).is_some_and(|(sibs, i)| sibs[i + 1..].iter().any(|&s| hit(s)))
            }
            RelationKind::ImmediatelyFollowingSibling => {
                view.siblings(v).is_some_and(|(sibs, i)| sibs.get(i + 1).is_some_and(|&s| hit(s)))
            }
            RelationKind::PrecedingSibling => {
                view.siblings(v).is_some_and(|(sibs, i)| sibs[..i].iter().any(|&s| hit(s)))
            }
        }
    }
}

/// Every tree node at which `pattern` matches, in preorder.
pub fn match_nodes(pattern: &Pattern, tree: &ParseTree) -> Vec<NodeId> {
    let m = Matcher { view: View::new(tree) };
    tree.node_ids().filter(|&id| m.matches(pattern, id)).collect()
}

pub fn matches_sentence(pattern: &Pattern, tree: &ParseTree) -> bool {
    let m = Matcher { view: View::new(tree) };
    tree.node_ids().any(|id| m.matches(pattern, id))
}

/// Whether `pattern` matches with `node` as its anchor.
pub fn matches_at(pattern: &Pattern, tree: &ParseTree, node: NodeId) -> bool {
    Matcher { view: View::new(tree) }.matches(pattern, node)
}

impl Pattern {
    pub fn match_nodes(&self, tree: &ParseTree) -> Vec<NodeId> {
        match_nodes(self, tree)
    }

    pub fn matches_sentence(&self, tree: &ParseTree) -> bool {
        matches_sentence(self, tree)
    }
}
