//! One line per acceptance criterion. Set `FGVA_BLESS=1` to rewrite the
//! golden fixtures before checking them.

use std::path::Path;

use fgva_core::gen::DEFAULT_SEED;
use fgva_core::report::combine;
use fgva_core::suite::{criteria, golden_suite, golden_tables, precision_regression, Outcome};
use fgva_core::Verdict;

fn line(o: &Outcome) -> bool {
    let v = o.verdict();
    let detail = o.first_problem().map(|r| format!("  [{}]", r.to_json_line())).unwrap_or_default();
    println!("criterion {:>2} {:<40} {}{}", o.criterion, o.title, if v == Verdict::Pass { "PASS" } else { "FAIL" }, detail);
    v == Verdict::Pass
}

fn main() {
    if std::env::var_os("FGVA_BLESS").is_some() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/golden");
        for (name, text) in golden_tables().expect("golden tables") {
            std::fs::write(dir.join(name), text).expect("write fixture");
        }
    }
    let base = criteria(0, DEFAULT_SEED);
    let bumped = criteria(2, DEFAULT_SEED);
    let mut ok = true;
    for o in &base {
        ok &= line(o);
    }
    ok &= line(&precision_regression(&base, &bumped));
    let golden = golden_suite();
    let gv = combine(&golden);
    println!("golden fixtures {:<42} {}", "", if gv == Verdict::Pass { "PASS" } else { "FAIL" });
    ok &= gv == Verdict::Pass;
    if !ok {
        eprintln!("acceptance criteria failed");
        std::process::exit(1);
    }
}
