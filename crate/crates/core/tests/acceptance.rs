//! The acceptance checklist, one line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion report even when everything passes.

use lieg2::verify::run_all;

#[test]
fn acceptance_criteria() {
    let outcomes = run_all();
    assert_eq!(outcomes.len(), 11);
    let mut failures = Vec::new();
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:2} ({}): {} - {}", o.index, o.tag, status, o.title);
        for d in &o.details {
            println!("    {d}");
        }
        if !o.pass {
            failures.push(format!("criterion {} ({}): {:?}", o.index, o.tag, o.details));
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
