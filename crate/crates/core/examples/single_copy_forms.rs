//! The single-copy variant of the chain, swept over every choice of caps.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::represent;
use gowers::linform::{slf_single_chain_verify, Cap, SlfSingleInstance};
use gowers::Budget;

fn main() -> gowers::Result<()> {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 11, 0.4, 6))?;
    let w = represent(&nu, 2)?;
    for caps in [[Cap::One, Cap::One], [Cap::One, Cap::Nu], [Cap::Nu, Cap::One], [Cap::Nu, Cap::Nu]] {
        let inst = SlfSingleInstance::seeded(w.clone(), caps.to_vec(), 9)?;
        let report = slf_single_chain_verify(&inst, Budget::default())?;
        let lhs = report.measurement("lhs").unwrap_or(f64::NAN);
        let bound = report.measurement("composed_bound").unwrap_or(f64::NAN);
        println!("caps {caps:?}: |lhs| = {:.6}  bound = {bound:.6}  passed = {}", lhs.abs(), report.passed());
    }
    Ok(())
}
