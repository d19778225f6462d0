//! Classifies the example sentences with the bundled catalog.
use syncur::catalog::Catalog;
use syncur::ptb::parse_ptb;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let catalog = Catalog::bundled();
    let table = include_str!("../fixtures/table1.tsv");
    let mut agree = 0;
    let mut total = 0;
    for line in table.lines().filter(|l| !l.starts_with('#')) {
        let cols: Vec<&str> = line.split('\t').collect();
        let tree = parse_ptb(cols[2])?;
        let a = catalog.classify(&tree);
        let got = a.primary.map(|c| c.name()).unwrap_or("Uncategorized");
        let macro_name = a.macro_category.map(|m| m.name()).unwrap_or("-");
        total += 1;
        agree += usize::from(got == cols[0]);
        println!("{got:<16} {macro_name:<15} {}", cols[1]);
    }
    println!("{agree}/{total} agree with the reference labels");
    Ok(())
}
