//! Parses a bracketed tree, walks it, and prints it back.
use syncur::ptb::parse_ptb;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = "( (S (NP-SBJ (DT The) (NN dog)) (VP (VBD saw) (NP (PRP me))) (. .)) )";
    let tree = parse_ptb(text)?;
    println!("serialized: {}", tree.serialize());
    println!("tokens:     {}", tree.yield_tokens().join(" "));
    for id in tree.node_ids() {
        let depth = std::iter::successors(tree.parent(id), |&p| tree.parent(p)).count();
        match tree.token(id) {
            Some(tok) => println!("{}{} {tok}", "  ".repeat(depth), tree.label(id)),
            None => println!("{}{}", "  ".repeat(depth), tree.label(id)),
        }
    }
    Ok(())
}
