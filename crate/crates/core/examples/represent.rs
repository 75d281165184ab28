//! Lifting a measure on Z_N to a weighted hypergraph whose linear forms trace
//! out arithmetic progressions.

use gowers::genmeasure::{generate, GeneratorKind, GeneratorSpec};
use gowers::hypersystem::{ap_values, represent};

fn main() -> gowers::Result<()> {
    let nu = generate(&GeneratorSpec::new(GeneratorKind::Random, 11, 0.4, 2))?;
    let w = represent(&nu, 3)?;
    println!("r = {}, dims = {:?}, sup = {:.3}", w.r(), w.system().dims(), w.sup());
    for j in 0..=w.r() {
        let e = w.weight(j);
        let mean = e.values().iter().sum::<f64>() / e.len() as f64;
        println!("e_{j} = {:?}: mean weight {mean:.6}", e.edge());
    }
    for x in [[1, 2, 3, 4], [0, 0, 0, 5], [10, 9, 8, 7]] {
        let ap = ap_values(&x, &w)?;
        println!("x = {x:?} -> progression {:?} with difference {}", ap.y, ap.d);
    }
    Ok(())
}
