use waring_core::reproduce::{paper_examples, run_case};

#[test]
fn every_worked_example_reproduces() {
    let mut failed = Vec::new();
    for case in paper_examples() {
        let r = run_case(&case);
        println!("{} {}: {}", if r.passed { "ok  " } else { "FAIL" }, r.name, r.detail);
        if !r.passed {
            failed.push(r.name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
