//! The averaged weight `nu'_{e_0}(x_{e_0}) = E_{x_0}[prod_{j >= 1} nu_{e_j}(x_{e_j})]`.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gowersnorm::{advance, EdgeFn};
use crate::hypersystem::WeightedHypergraph;
use crate::sum::KahanSum;

pub fn nu_prime_cost(w: &WeightedHypergraph) -> u128 {
    let points: u128 = w.system().dims().iter().map(|&d| d as u128).product();
    points.saturating_mul(w.r() as u128)
}

/// `nu'` as a function on `e_0 = {1, ..., r}`.
pub fn nu_prime(w: &WeightedHypergraph, budget: Budget) -> Result<EdgeFn> {
    budget.check(nu_prime_cost(w))?;
    let r = w.r();
    let dims = w.system().dims();
    let n0 = dims[0];
    let edge: Vec<usize> = (1..=r).collect();
    let out_dims = dims[1..].to_vec();
    let total: usize = out_dims.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut x = vec![0usize; r];
    let mut proj = vec![0usize; r];
    for _ in 0..total {
        let mut acc = KahanSum::new();
        for x0 in 0..n0 {
            let mut prod = 1.0;
            for j in 1..=r {
                // e_j = {0, ..., r} \ {j}, coordinates in ascending vertex order
                proj[0] = x0;
                for (k, v) in (1..).zip((1..=r).filter(|&v| v != j)) {
                    proj[k] = x[v - 1];
                }
                prod *= w.weight(j).at(&proj);
            }
            acc.add(prod);
        }
        values.push(acc.total() / n0 as f64);
        advance(&mut x, &out_dims);
    }
    EdgeFn::new(edge, out_dims, values)
}

/// `E[(nu' - 1)^2]`. The expansion `E[nu'^2] - 2 E[nu'] + 1` is computed
/// alongside and must agree to `1e-9`.
pub fn nu_prime_l2_dev(w: &WeightedHypergraph, budget: Budget) -> Result<f64> {
    let np = nu_prime(w, budget)?;
    let vals = np.values();
    let n = vals.len() as f64;
    let dev: KahanSum = vals.iter().map(|&v| (v - 1.0) * (v - 1.0)).collect();
    let sq: KahanSum = vals.iter().map(|&v| v * v).collect();
    let first: KahanSum = vals.iter().copied().collect();
    let dev = dev.total() / n;
    let expanded = sq.total() / n - 2.0 * first.total() / n + 1.0;
    if (dev - expanded).abs() > 1e-9 * dev.abs().max(1.0) {
        return Err(Error::NumericalInconsistency { context: "nu_prime_l2_dev", value: dev - expanded });
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::Measure;
    use crate::hypersystem::{represent, HypergraphSystem};

    const B: Budget = Budget::DEFAULT;

    #[test]
    fn constant_gives_one() {
        let w = WeightedHypergraph::constant(HypergraphSystem::cyclic(3, 4).unwrap(), 1.0).unwrap();
        let np = nu_prime(&w, B).unwrap();
        assert!(np.values().iter().all(|&v| v == 1.0));
        assert_eq!(nu_prime_l2_dev(&w, B).unwrap(), 0.0);
    }

    #[test]
    fn r2_formula() {
        let w = represent(&Measure::from_set(&[0, 2, 3], 5).unwrap(), 2).unwrap();
        let np = nu_prime(&w, B).unwrap();
        for x1 in 0..5 {
            for x2 in 0..5 {
                let want: f64 =
                    (0..5).map(|x0| w.weight(1).at(&[x0, x2]) * w.weight(2).at(&[x0, x1])).sum::<f64>() / 5.0;
                assert!((np.at(&[x1, x2]) - want).abs() < 1e-12);
            }
        }
        assert_eq!(np.edge(), &[1, 2]);
    }

    #[test]
    fn singleton_deviates() {
        let w = represent(&Measure::from_set(&[0], 5).unwrap(), 2).unwrap();
        assert!(nu_prime_l2_dev(&w, B).unwrap() > 1.0);
    }
}
