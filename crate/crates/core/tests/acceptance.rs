use std::process::ExitCode;
use std::time::Instant;

use census::verify::{self, CRITERIA, DEFAULT_SEED};

// Filters on the command line pick criteria by id or name, e.g. `-- 8 kraft`.
fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        assert_eq!(c.0 as usize, i + 1);
        let id = c.0;
        if !filters.is_empty()
            && !filters
                .iter()
                .any(|f| f == &id.to_string() || c.1.contains(f.as_str()))
        {
            continue;
        }
        let start = Instant::now();
        let r = verify::run_one(id, DEFAULT_SEED).expect("criterion id from the table");
        if !r.passed {
            failed += 1;
        }
        ran += 1;
        println!("{} ({:.1}s)", r.line(), start.elapsed().as_secs_f64());
    }
    println!(
        "acceptance: {} passed, {failed} failed of {ran}",
        ran - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
