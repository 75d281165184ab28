//! Products of edge weights with two copies of each vertex: the telescoping
//! identity over every exponent choice, and the chain bound for one edge.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::represent;
use gowers::linform::{lf2_chain_verify, lf2_expectation, lf2_telescoping, Lf2Exponents};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 7, 0.5, 12))?;
    let w = represent(&nu, 2)?;
    let budget = Budget::default();
    let mut worst: f64 = 0.0;
    for exps in Lf2Exponents::all(2) {
        let value = lf2_expectation(&w, &exps, budget)?;
        let report = lf2_telescoping(&w, &exps, budget)?;
        assert!(report.passed());
        worst = worst.max((value - 1.0).abs());
    }
    println!("max |E - 1| over all exponent choices: {worst:.6}");

    let exps = Lf2Exponents::ones(2);
    let report = lf2_chain_verify(&w, 1, &exps, budget)?;
    for c in &report.checks {
        println!("{:<28} {:.6e} vs {:.6e}  {}", c.label, c.lhs, c.rhs, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
