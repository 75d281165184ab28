//! The averaged weight nu' on the top edge and its distance from 1.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::represent;
use gowers::linform::{nu_prime, nu_prime_l2_dev};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    for kind in [GeneratorKind::Constant, GeneratorKind::Random, GeneratorKind::Interval] {
        let nu = generate(&GeneratorSpec::new(kind, 13, 0.5, 4))?;
        let w = represent(&nu, 2)?;
        let np = nu_prime(&w, Budget::default())?;
        let dev = nu_prime_l2_dev(&w, Budget::default())?;
        let (lo, hi) = np.values().iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        println!("{kind:?}: nu' in [{lo:.4}, {hi:.4}], E(nu' - 1)^2 = {dev:.6}");
    }
    Ok(())
}
