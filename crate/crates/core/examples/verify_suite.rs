//! The full self-check suite the command line runs under `verify`.

use gowers::cli::verify_suite;

fn main() -> gowers::Result<()> {
    let report = verify_suite(2, 7, 3)?;
    let failed = report.failures().count();
    println!("{}: {} checks, {failed} failed", report.name, report.checks.len());
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}
