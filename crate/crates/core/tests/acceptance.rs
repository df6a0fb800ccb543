use std::process::ExitCode;

use toeplitz_core::verify::run_all;
use toeplitz_core::ToeplitzShift;

fn main() -> ExitCode {
    let shift = ToeplitzShift::default();
    let results = run_all(&shift);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
