//! Cleans a CHAT transcript and prints the cleanup summary.
use syncur::prep::{clean_document, parse_age_table, CorpusKind, RawDocument};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = include_str!("../fixtures/prep/childes.cha");
    let ages = parse_age_table(include_str!("../fixtures/prep/childes.ages.tsv"))?;
    let doc = RawDocument::from_text(CorpusKind::Childes, text).with_ages(&ages);
    let out = clean_document(&doc);
    for s in out.sentences.iter().take(10) {
        let age = s.age_months.map(|m| format!("{m}m")).unwrap_or_default();
        println!("{age:>5}  {}", s.text);
    }
    println!("...");
    println!("{}", out.summary);
    Ok(())
}
