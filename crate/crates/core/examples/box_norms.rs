//! Box norms of functions on a 3-edge and the Gowers-Cauchy-Schwarz inequality.

use gowers::genmeasure::{random_edge_fn, seeded_rng};
use gowers::gowersnorm::{box_norm_brute, gcs_verify};
use gowers::{Budget, EdgeFn};

fn main() -> gowers::Result<()> {
    let mut rng = seeded_rng(5);
    let edge = vec![0, 1, 2];
    let dims = vec![4, 5, 3];
    let gs: Vec<EdgeFn> = (0..8)
        .map(|_| random_edge_fn(edge.clone(), dims.clone(), -1.0, 1.0, &mut rng))
        .collect::<gowers::Result<_>>()?;
    for (w, g) in gs.iter().enumerate() {
        println!("||g_{w}||_box = {:.6}", box_norm_brute(g, Budget::default())?);
    }
    let report = gcs_verify(&gs, Budget::default())?;
    for c in &report.checks {
        println!("{}: {:.3e} <= {:.3e} ({})", c.label, c.lhs, c.rhs, if c.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
