//! Counting k-term progressions in sets and comparing with the random prediction.

use gowers::apcount::ApReport;
use gowers::genmeasure::{generate_set, GeneratorKind, GeneratorSpec};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let n = 257;
    println!("{}", ApReport::csv_header());
    for kind in [GeneratorKind::Random, GeneratorKind::Interval, GeneratorKind::Quadratic] {
        let set = generate_set(&GeneratorSpec::new(kind, n, 0.3, 21))?;
        for k in 3..=4 {
            println!("{}", ApReport::for_indicator(&set, n, k, Budget::default())?.csv_row());
        }
    }
    Ok(())
}
