//! Random trees and patterns for oracle comparisons.

use syncur::ptb::Constituent;
use syncur::rng::SeededRng;
use syncur::tregex::{LabelRegex, NodeDesc, Pattern, Relation, RelationKind, Term};

pub const LABELS: [&str; 6] = ["S", "NP", "VP", "PP", "DT", "NN"];
pub const TOKENS: [&str; 4] = ["the", "dog", "not", "runs"];

fn pick<'a>(rng: &mut SeededRng, items: &[&'a str]) -> &'a str {
    items[rng.below(items.len() as u64) as usize]
}

/// A tree of at most `max_nodes` labeled nodes; leaves carry tokens.
pub fn random_tree(rng: &mut SeededRng, max_nodes: usize) -> Constituent {
    let mut budget = max_nodes.max(1) - 1;
    grow(rng, &mut budget, 0)
}

fn grow(rng: &mut SeededRng, budget: &mut usize, depth: usize) -> Constituent {
    let label = pick(rng, &LABELS);
    if *budget == 0 || depth >= 5 || rng.unit() < 0.3 {
        return Constituent::leaf(label, pick(rng, &TOKENS));
    }
    let want = 1 + rng.below(3) as usize;
    let n = want.min(*budget);
    *budget -= n;
    let mut children = Vec::with_capacity(n);
    for _ in 0..n {
        children.push(grow(rng, budget, depth + 1));
    }
    Constituent::phrase(label, children)
}

pub const KINDS: [RelationKind; 9] = [
    RelationKind::Child,
    RelationKind::Parent,
    RelationKind::Descendant,
    RelationKind::Ancestor,
    RelationKind::NthChild(1),
    RelationKind::OnlyChild,
    RelationKind::FollowingSibling,
    RelationKind::ImmediatelyFollowingSibling,
    RelationKind::PrecedingSibling,
];

fn random_desc(rng: &mut SeededRng) -> NodeDesc {
    match rng.below(10) {
        0..=5 => NodeDesc::Literal(pick(rng, &LABELS).to_string()),
        6 => NodeDesc::Literal(pick(rng, &TOKENS).to_string()),
        7 => NodeDesc::Wildcard,
        _ => {
            let src = pick(rng, &["^N", "P$", "^(S|VP)$", "o", "^[DN]"]);
            NodeDesc::Regex(LabelRegex::new(src).unwrap())
        }
    }
}

fn random_kind(rng: &mut SeededRng) -> RelationKind {
    match KINDS[rng.below(KINDS.len() as u64) as usize] {
        RelationKind::NthChild(_) => RelationKind::NthChild(1 + rng.below(3) as usize),
        k => k,
    }
}

fn random_relation(rng: &mut SeededRng, depth: usize) -> Relation {
    Relation { kind: random_kind(rng), negated: rng.unit() < 0.3, target: random_pattern(rng, depth + 1) }
}

fn random_terms(rng: &mut SeededRng, depth: usize, max: u64) -> Vec<Term> {
    let n = rng.below(max + 1);
    (0..n)
        .map(|_| {
            if depth < 2 && rng.unit() < 0.2 {
                let groups = 2 + rng.below(2);
                Term::AnyOf(
                    (0..groups)
                        .map(|_| {
                            let mut g = random_terms(rng, depth + 1, 2);
                            if g.is_empty() {
                                g.push(Term::Relation(random_relation(rng, depth)));
                            }
                            g
                        })
                        .collect(),
                )
            } else {
                Term::Relation(random_relation(rng, depth))
            }
        })
        .collect()
}

pub fn random_pattern(rng: &mut SeededRng, depth: usize) -> Pattern {
    let node = random_desc(rng);
    let terms = if depth >= 3 { vec![] } else { random_terms(rng, depth, if depth == 0 { 3 } else { 1 }) };
    Pattern { node, terms }
}

/// Relation kinds, negation and disjunction used anywhere in `p`.
#[derive(Default)]
pub struct Coverage {
    pub kinds: std::collections::HashSet<std::mem::Discriminant<RelationKind>>,
    pub negation: bool,
    pub disjunction: bool,
}

impl Coverage {
    pub fn add(&mut self, p: &Pattern) {
        self.terms(&p.terms);
    }

    fn terms(&mut self, terms: &[Term]) {
        for t in terms {
            match t {
                Term::Relation(r) => {
                    self.kinds.insert(std::mem::discriminant(&r.kind));
                    self.negation |= r.negated;
                    self.add(&r.target);
                }
                Term::AnyOf(groups) => {
                    self.disjunction = true;
                    groups.iter().for_each(|g| self.terms(g));
                }
            }
        }
    }

    pub fn complete(&self) -> bool {
        self.kinds.len() == KINDS.len() && self.negation && self.disjunction
    }
}
