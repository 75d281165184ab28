//! The two Cauchy-Schwarz steps behind the box-norm inequality on a 2-edge,
//! evaluated by direct loops on random functions and compared with the library.

use gowers::genmeasure::{random_edge_fn, seeded_rng};
use gowers::gowersnorm::{box_norm_brute, gcs_verify};
use gowers::{Budget, EdgeFn};

/// `E_{y,y'} [E_x a(x,y) b(x,y')] [E_{x'} c(x',y) d(x',y')]`
fn corner_sum(a: &EdgeFn, b: &EdgeFn, c: &EdgeFn, d: &EdgeFn, n: usize) -> f64 {
    let mut total = 0.0;
    for y in 0..n {
        for y2 in 0..n {
            let left: f64 = (0..n).map(|x| a.at(&[x, y]) * b.at(&[x, y2])).sum::<f64>() / n as f64;
            let right: f64 = (0..n).map(|x| c.at(&[x, y]) * d.at(&[x, y2])).sum::<f64>() / n as f64;
            total += left * right;
        }
    }
    total / (n * n) as f64
}

#[test]
fn two_step_chain() {
    let n = 6;
    for seed in 0..20 {
        let mut rng = seeded_rng(seed);
        let g: Vec<EdgeFn> = (0..4).map(|_| random_edge_fn(vec![0, 1], vec![n, n], -1.0, 1.0, &mut rng).unwrap()).collect();
        // g[w] is evaluated at (x^{(w & 1)}, y^{(w >> 1)})
        let lhs = corner_sum(&g[0], &g[2], &g[1], &g[3], n);
        let a = corner_sum(&g[0], &g[2], &g[0], &g[2], n);
        let b = corner_sum(&g[1], &g[3], &g[1], &g[3], n);
        // first step: Cauchy-Schwarz over (y, y')
        assert!(lhs.abs() <= (a * b).sqrt() + 1e-12);

        // second step: each factor swaps the roles of x and y and splits again
        let norms: Vec<f64> = g.iter().map(|f| box_norm_brute(f, Budget::UNLIMITED).unwrap()).collect();
        assert!(a <= norms[0].powi(2) * norms[2].powi(2) + 1e-12);
        assert!(b <= norms[1].powi(2) * norms[3].powi(2) + 1e-12);

        let rep = gcs_verify(&g, Budget::UNLIMITED).unwrap();
        let check = &rep.checks[0];
        assert!((check.lhs - lhs.abs()).abs() < 1e-12, "{} vs {}", check.lhs, lhs);
        assert!((check.rhs - norms.iter().product::<f64>()).abs() < 1e-12);
        assert!(check.pass);
    }
}
