//! Builds every curriculum over the curriculum fixture and prints its stages.
use syncur::catalog::Catalog;
use syncur::curriculum::{build, CurriculumPlan, Strategy};
use syncur::prep::{align_trees, classify_records};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mut records, _) = align_trees(
        "mixed",
        include_str!("../fixtures/curriculum/sentences.txt"),
        include_str!("../fixtures/curriculum/trees.txt"),
    )?;
    classify_records(&mut records, &Catalog::bundled());
    for strategy in Strategy::ALL {
        let ordered = build(&CurriculumPlan::new(strategy, 42), &records)?;
        let m = &ordered.manifest;
        let stages: Vec<String> = m.stages.iter().map(|s| format!("{}[{}..{}]", s.name, s.start, s.end)).collect();
        println!("{:<3} records={:<5} tokens={:<6} {}", strategy.id(), m.records, m.tokens, stages.join(" "));
        for w in &m.warnings {
            println!("    warning: {w}");
        }
    }
    Ok(())
}
