//! Compiles a few patterns and reports which nodes of a tree they match.
use syncur::ptb::parse_ptb;
use syncur::tregex::{compile_pattern, match_nodes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree =
        parse_ptb("(S (NP (PRP I)) (VP (VBP know) (SBAR (WHNP (WP what)) (S (NP (PRP you)) (VP (VBP need))))) (. .))")?;
    for src in ["NP", "NP $++ VP", "VP << SBAR", "S !> __", "VP <1 /^VB/", "NP !<< PRP"] {
        let pattern = compile_pattern(src)?;
        let hits: Vec<String> =
            match_nodes(&pattern, &tree).into_iter().map(|id| format!("{}#{id}", tree.label(id))).collect();
        println!("{src:<14} {}", hits.join(" "));
    }
    match compile_pattern("NP <") {
        Err(e) => println!("bad pattern: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
