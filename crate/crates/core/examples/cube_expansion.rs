//! Cube expectations of a represented edge weight: every exponent pattern on a
//! 2-edge, its binomial expansion into centered terms, and the box-norm bound.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::represent;
use gowers::linform::{binomial_expansion_identity, cube_centered_bound, cube_expectation, CubePattern};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 13, 0.5, 8))?;
    let w = represent(&nu, 2)?;
    let nu_e = w.weight(0);
    let budget = Budget::default();
    for pat in CubePattern::all(nu_e.edge().to_vec()).filter(|p| !p.is_zero()) {
        let plain = cube_expectation(nu_e, &pat, budget)?;
        let expansion = binomial_expansion_identity(nu_e, &pat, budget)?;
        let bound = cube_centered_bound(nu_e, &pat, budget)?;
        println!(
            "{pat}: E = {plain:.6}  expansion {}  centered bound {}",
            if expansion.passed() { "ok" } else { "FAIL" },
            if bound.passed() { "ok" } else { "FAIL" },
        );
    }
    Ok(())
}
