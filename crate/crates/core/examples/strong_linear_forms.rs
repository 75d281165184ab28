//! The Cauchy-Schwarz chain for a product of bounded functions weighted by a
//! represented measure, with the base vertex doubled.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::represent;
use gowers::linform::{chain_verify, slf_lhs, Cap, SlfInstance};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 7, 0.5, 1))?;
    let w = represent(&nu, 2)?;
    let inst = SlfInstance::seeded(w, vec![[Cap::Nu, Cap::One], [Cap::Nu, Cap::Nu]], 3)?;
    println!("lhs = {:.9}", slf_lhs(&inst, Budget::default())?);
    let report = chain_verify(&inst, Budget::default())?;
    for c in &report.checks {
        println!("{:<32} {:>14.6e} <= {:>14.6e}  {}", c.label, c.lhs, c.rhs, if c.pass { "ok" } else { "FAIL" });
    }
    for m in &report.measurements {
        println!("{} = {:.6}", m.label, m.value);
    }
    Ok(())
}
