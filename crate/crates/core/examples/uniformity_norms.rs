//! U^k norms of a balanced random set against an interval, by both engines.
//!
//! ```text
//! cargo run --example uniformity_norms
//! ```

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::gowersnorm::{u_norm_brute, u_norm_fast};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let n = 31;
    for kind in [GeneratorKind::Random, GeneratorKind::Interval, GeneratorKind::Quadratic] {
        let nu = generate(&GeneratorSpec::new(kind, n, 0.5, 3))?;
        let f = nu.centered();
        println!("{kind:?} (|S| = {})", nu.support().len());
        for k in 1..=3 {
            let fast = u_norm_fast(&f, k)?;
            let brute = u_norm_brute(&f, k, Budget::default())?;
            println!("  U^{k}: fast {fast:.12}  brute {brute:.12}");
        }
    }
    Ok(())
}
