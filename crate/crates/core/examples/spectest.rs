use mink_core::verify::{format_check, run, Suite};
use mink_core::PrecisionConfig;
fn main() {
    let t0 = std::time::Instant::now();
    let report = run(Suite::Full, &PrecisionConfig::default()).unwrap();
    for c in &report.checks {
        println!("{}", format_check(c));
    }
    println!("passed {} failed {} in {:.1}s", report.passed, report.failed, t0.elapsed().as_secs_f64());
}
