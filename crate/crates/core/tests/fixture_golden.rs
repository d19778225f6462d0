mod common;

use common::{mixed_golden, mixed_inputs};

#[test]
fn mixed_fixture_labels_match_golden() {
    let golden = mixed_golden();
    let mut seen = 0;
    let mut wrong = Vec::new();
    for input in mixed_inputs() {
        for r in &input.records {
            let line = r.record_id - input.id_offset;
            let want = &golden[&(input.corpus.clone(), line)];
            let got = match (&r.tree, r.primary()) {
                (None, _) => "Unparsed".to_string(),
                (Some(_), None) => "Uncategorized".to_string(),
                (Some(_), Some(c)) => c.name().to_string(),
            };
            if &got != want {
                wrong.push(format!("{} {line}: want {want}, got {got}: {}", input.corpus, r.text));
            }
            seen += 1;
        }
    }
    assert_eq!(seen, golden.len());
    assert!(wrong.is_empty(), "{}", wrong.join("\n"));
}
