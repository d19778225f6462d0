//! Draws train/validation subsets for each generalization group.
use syncur::catalog::Catalog;
use syncur::prep::{align_trees, classify_records};
use syncur::sampler::{sample_group, GeneralizationGroup, SampleRequest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (mut records, _) = align_trees(
        "mixed",
        include_str!("../fixtures/curriculum/sentences.txt"),
        include_str!("../fixtures/curriculum/trees.txt"),
    )?;
    classify_records(&mut records, &Catalog::bundled());
    for group in GeneralizationGroup::ALL {
        match sample_group(&SampleRequest::new(group, 250, 50, 42), &records) {
            Ok(s) => {
                let m = &s.manifest;
                println!(
                    "{:<22} pool {:>4} records, train {} tok / {} rec, val {} tok / {} rec",
                    group.id(),
                    m.pool_records,
                    m.train.actual_tokens,
                    m.train.records,
                    m.val.actual_tokens,
                    m.val.records
                );
            }
            Err(e) => println!("{:<22} {e}", group.id()),
        }
    }
    Ok(())
}
