//! Gowers `U^k` norms of functions on Z_N.

use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::budget::{self, Budget};
use crate::cyclic::{self, CyclicFn};
use crate::error::{Error, Result};
use crate::sum::KahanSum;

/// Absolute tolerance below zero tolerated on a cube average before taking
/// its root. Anything more negative is reported as an inconsistency.
pub const CLAMP_TOLERANCE: f64 = 1e-9;

pub(crate) fn clamp_cube_average(avg: f64, context: &'static str) -> Result<f64> {
    if avg >= 0.0 {
        Ok(avg)
    } else if avg >= -CLAMP_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NumericalInconsistency { context, value: avg })
    }
}

pub(crate) fn root(power: f64, order: usize) -> f64 {
    power.powf(1.0 / (1u64 << order) as f64)
}

/// Number of elementary products performed by [`u_norm_brute`].
pub fn u_brute_cost(n: usize, k: usize) -> u128 {
    budget::pow(n, k + 1).saturating_mul(1u128 << k.min(100))
}

/// `E[prod_{omega in {0,1}^k} f(x_0 + omega . x)]` over all `x_0, x_1, ..., x_k`,
/// enumerated directly.
pub fn u_power_brute(f: &CyclicFn, k: usize, budget: Budget) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroOrder);
    }
    let n = f.modulus();
    budget.check(u_brute_cost(n, k))?;
    let v = f.values();
    let cube = 1usize << k;
    let mut x = vec![0usize; k + 1];
    let mut pts = vec![0usize; cube];
    let mut acc = KahanSum::new();
    let total = n.pow((k + 1) as u32);
    for _ in 0..total {
        pts[0] = x[0];
        for i in 0..k {
            let h = x[i + 1];
            let half = 1usize << i;
            for w in 0..half {
                let p = pts[w] + h;
                pts[w | half] = if p >= n { p - n } else { p };
            }
        }
        let mut prod = 1.0;
        for &p in &pts {
            prod *= v[p];
        }
        acc.add(prod);
        // odometer over (x_0, ..., x_k), last fastest
        for i in (0..=k).rev() {
            x[i] += 1;
            if x[i] < n {
                break;
            }
            x[i] = 0;
        }
    }
    Ok(acc.total() / total as f64)
}

/// `||f||_{U^k}` by direct enumeration of all `N^{k+1}` cube configurations.
pub fn u_norm_brute(f: &CyclicFn, k: usize, budget: Budget) -> Result<f64> {
    let avg = u_power_brute(f, k, budget)?;
    Ok(root(clamp_cube_average(avg, "u_norm_brute")?, k))
}

/// `||f||_{U^k}^{2^k}` via `||f||_{U^k}^{2^k} = E_h ||Delta_h f||_{U^{k-1}}^{2^{k-1}}`,
/// bottoming out at `sum |f^|^4` for `k = 2`.
pub fn u_power_fast(f: &CyclicFn, k: usize) -> Result<f64> {
    match k {
        0 => Err(Error::ZeroOrder),
        1 => Ok(f.mean().powi(2)),
        _ => {
            let fft = FftPlanner::new().plan_fft_forward(f.modulus());
            Ok(power_recursive(&fft, f, k))
        }
    }
}

fn power_recursive(fft: &Arc<dyn Fft<f64>>, f: &CyclicFn, k: usize) -> f64 {
    if k == 2 {
        return cyclic::dft_with(fft, f).fourth_moment();
    }
    let n = f.modulus();
    let mut acc = KahanSum::new();
    for h in 0..n {
        acc.add(power_recursive(fft, &cyclic::difference_unchecked(f, h), k - 1));
    }
    acc.total() / n as f64
}

/// `||f||_{U^k}`; `k = 1` is `|E f|`, `k = 2` uses the FFT, higher orders
/// recurse through difference functions.
pub fn u_norm_fast(f: &CyclicFn, k: usize) -> Result<f64> {
    match k {
        0 => Err(Error::ZeroOrder),
        1 => Ok(f.mean().abs()),
        _ => Ok(root(clamp_cube_average(u_power_fast(f, k)?, "u_norm_fast")?, k)),
    }
}
