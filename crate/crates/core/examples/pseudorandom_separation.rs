//! Random sets behave pseudorandomly while an interval of the same density does
//! not: the progression density, the uniformity ratio and the telescoped terms.

use gowers::apcount::{relsz_experiment, ExperimentConfig, DEFAULT_DEVIATION_THRESHOLD};
use gowers::genmeasure::{GeneratorKind, GeneratorSpec};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    for (kind, seed) in [(GeneratorKind::Random, 1), (GeneratorKind::Random, 2), (GeneratorKind::Interval, 0)] {
        let spec = GeneratorSpec::new(kind, 101, 0.3, seed);
        let cfg = ExperimentConfig { r: 2, spec, threshold: DEFAULT_DEVIATION_THRESHOLD };
        let out = relsz_experiment(&cfg, Budget::default())?;
        println!(
            "{kind:?} seed {seed}: Lambda_3 = {:.4}  ratio = {:.3}  pseudorandom = {}",
            out.ap.density, out.hypothesis.ratio, out.pseudorandom
        );
        for j in 0..=2 {
            let term = out.report.measurement(&format!("term[{j}]")).unwrap_or(f64::NAN);
            println!("  term[{j}] = {term:+.6}");
        }
    }
    Ok(())
}
