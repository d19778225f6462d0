mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::gen::{random_pattern, random_tree, KINDS};
use common::oracle::OracleTree;
use syncur::catalog::Catalog;
use syncur::curriculum::{build, CurriculumPlan, Strategy};
use syncur::prep::{clean_childes, filter_short, segment_sentences, strip_speaker_labels, LabeledRecord};
use syncur::ptb::{parse_ptb, Constituent, ParseTree};
use syncur::rng::SeededRng;
use syncur::sampler::{sample_group, GeneralizationGroup, SampleRequest};
use syncur::stats::{distribution, GroupBy};
use syncur::tregex::{match_nodes, Pattern, Relation, Term};

fn tree_from_seed(seed: u64) -> (Constituent, ParseTree) {
    let c = random_tree(&mut SeededRng::new(seed), 15);
    let t = ParseTree::from_constituent(&c).unwrap();
    (c, t)
}

fn retokenize(c: &Constituent, rng: &mut SeededRng) -> Constituent {
    match c {
        Constituent::Leaf { label, .. } => {
            let len = 1 + rng.below(6) as usize;
            let token: String = (0..len).map(|_| (b'a' + rng.below(26) as u8) as char).collect();
            Constituent::leaf(label.clone(), token)
        }
        Constituent::Phrase { label, children } => {
            Constituent::phrase(label.clone(), children.iter().map(|ch| retokenize(ch, rng)).collect())
        }
    }
}

fn mentions_tokens(p: &Pattern) -> bool {
    let mut found = false;
    p.for_each_desc(&mut |d| found |= d.to_string().chars().any(|c| c.is_ascii_lowercase()));
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ptb_round_trip(seed in any::<u64>()) {
        let (c, tree) = tree_from_seed(seed);
        let text = tree.serialize();
        let again = parse_ptb(&text).unwrap();
        prop_assert_eq!(again.serialize(), text);
        prop_assert_eq!(again.to_constituent(), c);
        prop_assert_eq!(tree.leaves().count(), tree.yield_tokens().len());
    }

    #[test]
    fn negation_is_complement_within_anchor(seed in any::<u64>(), tree_seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let anchor = random_pattern(&mut rng, 2);
        let target = random_pattern(&mut rng, 2);
        let kind = KINDS[rng.below(KINDS.len() as u64) as usize];
        let (_, tree) = tree_from_seed(tree_seed);
        let pos = anchor.clone().with(Term::Relation(Relation::new(kind, target.clone())));
        let neg = anchor.clone().with(Term::Relation(Relation::negated(kind, target)));
        let all: HashSet<usize> = match_nodes(&anchor, &tree).into_iter().collect();
        let p: HashSet<usize> = match_nodes(&pos, &tree).into_iter().collect();
        let n: HashSet<usize> = match_nodes(&neg, &tree).into_iter().collect();
        prop_assert!(p.is_disjoint(&n));
        prop_assert_eq!(p.union(&n).copied().collect::<HashSet<_>>(), all);
    }

    #[test]
    fn matcher_matches_oracle(seed in any::<u64>(), tree_seed in any::<u64>()) {
        let p = random_pattern(&mut SeededRng::new(seed), 0);
        let (c, tree) = tree_from_seed(tree_seed);
        prop_assert_eq!(match_nodes(&p, &tree), OracleTree::new(&c).match_nodes(&p));
    }

    #[test]
    fn structural_classification_ignores_tokens(row in 0usize..26, seed in any::<u64>()) {
        let catalog = Catalog::bundled().filtered(|_, p| !mentions_tokens(p));
        let table = include_str!("../fixtures/table1.tsv");
        let line = table.lines().filter(|l| !l.starts_with('#')).nth(row).unwrap();
        let tree = parse_ptb(line.split('\t').nth(2).unwrap()).unwrap();
        let renamed = ParseTree::from_constituent(&retokenize(&tree.to_constituent(), &mut SeededRng::new(seed))).unwrap();
        prop_assert_eq!(catalog.classify(&tree), catalog.classify(&renamed));
    }

    #[test]
    fn chat_cleanup_is_idempotent(parts in prop::collection::vec(prop::sample::select(vec![
        "doggie", "look", "I", "[!]", "[: ball]", "&-um", "&=laughs", "xxx", "yyy", "+...", "<want>",
        "ball@d", ".", "?", "[/]", "go", "  ", "\t",
    ]), 0..12)) {
        let line = parts.join(" ");
        let once = clean_childes(&line);
        prop_assert_eq!(clean_childes(&once), once.clone());
        let stripped = strip_speaker_labels(&format!("*CHI:\t{line}"));
        prop_assert_eq!(strip_speaker_labels(&stripped), stripped);
    }

    #[test]
    fn segmentation_is_idempotent(parts in prop::collection::vec(prop::sample::select(vec![
        "She runs.", "Mr. Brown came.", "Why?", "ok", "Wait...", "It is 3.5 kg.", "no!", "\"Go.\"",
    ]), 1..5)) {
        let line = parts.join(" ");
        for s in segment_sentences(&line) {
            prop_assert_eq!(segment_sentences(&s), vec![s.clone()]);
        }
    }

    #[test]
    fn short_filter_conserves_counts(items in prop::collection::vec("[a-z .?]{0,12}", 0..30)) {
        let n = items.len();
        let (kept, s) = filter_short(items);
        prop_assert_eq!(s.input, n);
        prop_assert_eq!(s.kept + s.short + s.empty, n);
        prop_assert_eq!(kept.len(), s.kept);
    }
}

fn fixture_records() -> &'static [LabeledRecord] {
    static RECORDS: std::sync::OnceLock<Vec<LabeledRecord>> = std::sync::OnceLock::new();
    RECORDS.get_or_init(common::curriculum_records)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn curricula_are_permutations_of_eligible_records(seed in any::<u64>(), s in 0usize..7) {
        let records = fixture_records();
        let strategy = Strategy::ALL[s];
        let out = build(&CurriculumPlan::new(strategy, seed), records).unwrap();
        let mut got = out.sequence.clone();
        got.sort_unstable();
        let mut want: Vec<u64> = records
            .iter()
            .filter(|r| strategy == Strategy::B1 || r.is_categorized())
            .map(|r| r.record_id)
            .collect();
        want.sort_unstable();
        prop_assert_eq!(got, want);
        prop_assert_eq!(build(&CurriculumPlan::new(strategy, seed), records).unwrap(), out);
    }

    #[test]
    fn distribution_ignores_record_order(seed in any::<u64>()) {
        let records = fixture_records();
        let mut shuffled = records.to_vec();
        SeededRng::new(seed).shuffle(&mut shuffled);
        prop_assert_eq!(
            distribution(records, GroupBy::Corpus).unwrap(),
            distribution(&shuffled, GroupBy::Corpus).unwrap()
        );
    }

    #[test]
    fn samples_are_disjoint_and_restricted(seed in any::<u64>(), g in 0usize..8) {
        let group = GeneralizationGroup::ALL[g];
        let req = SampleRequest::new(group, 120, 30, seed);
        let s = sample_group(&req, fixture_records()).unwrap();
        let train: HashSet<u64> = s.train.iter().copied().collect();
        prop_assert!(s.val.iter().all(|id| !train.contains(id)));
        for id in s.train.iter().chain(&s.val) {
            let r = fixture_records().iter().find(|r| r.record_id == *id).unwrap();
            prop_assert!(group.members().contains(&r.primary().unwrap()));
        }
    }
}
