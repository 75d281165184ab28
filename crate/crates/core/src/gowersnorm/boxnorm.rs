//! Box norms `U^e` on product sets and the Gowers-Cauchy-Schwarz check.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::report::{Check, VerificationReport, INEQUALITY_SLACK};
use crate::sum::KahanSum;

use super::edge::{strides, CubeVertex, EdgeFn};
use super::uniform::{clamp_cube_average, root};

/// Elementary products for one cube average over an edge with these dims.
pub fn cube_cost(dims: &[usize]) -> u128 {
    let size: u128 = dims.iter().map(|&d| d as u128).product();
    size.saturating_mul(size).saturating_mul(1u128 << dims.len().min(100))
}

/// `E[prod_omega h_omega(x_e^{(omega)})]` over `x_e^{(0)}, x_e^{(1)} in V_e`.
///
/// `factors` is indexed by [`CubeVertex`] mask; `None` stands for the constant
/// function 1. Every present factor must live on `dims`. The `2|e|` free
/// coordinates are enumerated vertex by vertex in ascending label order,
/// copy 0 before copy 1, last coordinate fastest.
pub(crate) fn cube_average(dims: &[usize], factors: &[Option<&[f64]>], budget: Budget) -> Result<f64> {
    let m = dims.len();
    debug_assert_eq!(factors.len(), 1 << m);
    budget.check(cube_cost(dims))?;
    let st = strides(dims);
    let mut digit_dims = Vec::with_capacity(2 * m);
    for &d in dims {
        digit_dims.push(d);
        digit_dims.push(d);
    }
    let present: Vec<(usize, &[f64])> =
        factors.iter().enumerate().filter_map(|(w, f)| f.map(|v| (w, v))).collect();
    let size: usize = dims.iter().product();
    let total = size * size;
    let mut digits = vec![0usize; 2 * m];
    let mut offsets = vec![0usize; 1 << m];
    let mut acc = KahanSum::new();
    for _ in 0..total {
        offsets[0] = (0..m).map(|i| st[i] * digits[2 * i]).sum();
        for i in 0..m {
            let half = 1usize << i;
            let (lo, hi) = (digits[2 * i], digits[2 * i + 1]);
            for w in 0..half {
                offsets[w | half] = offsets[w] + st[i] * hi - st[i] * lo;
            }
        }
        let mut prod = 1.0;
        for &(w, vals) in &present {
            prod *= vals[offsets[w]];
        }
        acc.add(prod);
        super::edge::advance(&mut digits, &digit_dims);
    }
    Ok(acc.total() / total as f64)
}

/// `||g||_{U^e}^{2^{|e|}}`, the unrooted cube average.
pub fn box_power_brute(g: &EdgeFn, budget: Budget) -> Result<f64> {
    let factors = vec![Some(g.values()); 1 << g.arity()];
    cube_average(g.dims(), &factors, budget)
}

/// `||g||_{U^e}` by direct enumeration of both copies of every coordinate.
pub fn box_norm_brute(g: &EdgeFn, budget: Budget) -> Result<f64> {
    if g.arity() == 0 {
        return Ok(g.values()[0].abs());
    }
    let avg = clamp_cube_average(box_power_brute(g, budget)?, "box_norm_brute")?;
    Ok(root(avg, g.arity()))
}

/// Checks `|E[prod_omega g_omega(x_e^{(omega)})]| <= prod_omega ||g_omega||_{U^e}`.
///
/// `gs[w]` is the function attached to the cube vertex with mask `w`.
pub fn gcs_verify(gs: &[EdgeFn], budget: Budget) -> Result<VerificationReport> {
    let first = gs.first().ok_or_else(|| Error::ShapeMismatch("no functions given".into()))?;
    let m = first.arity();
    if gs.len() != 1 << m {
        return Err(Error::ShapeMismatch(format!("expected {} functions for |e| = {m}, got {}", 1 << m, gs.len())));
    }
    if let Some(bad) = gs.iter().position(|g| !g.same_shape(first)) {
        return Err(Error::ShapeMismatch(format!("function {bad} lives on a different edge or dims")));
    }
    budget.check(cube_cost(first.dims()).saturating_mul(gs.len() as u128 + 1))?;

    let factors: Vec<Option<&[f64]>> = gs.iter().map(|g| Some(g.values())).collect();
    let lhs = cube_average(first.dims(), &factors, Budget::UNLIMITED)?.abs();
    let mut rhs = 1.0;
    let mut report = VerificationReport::new("gcs");
    for (w, g) in CubeVertex::all(m).zip(gs) {
        let norm = box_norm_brute(g, Budget::UNLIMITED)?;
        report.measure(format!("norm[{}]", w.0), norm);
        rhs *= norm;
    }
    report.push(Check::le("gowers-cauchy-schwarz", lhs, rhs, INEQUALITY_SLACK));
    Ok(report)
}

/// Cost of [`gcs_verify`] on functions with these dims.
pub fn gcs_cost(dims: &[usize]) -> u128 {
    cube_cost(dims).saturating_mul((1u128 << dims.len()) + 1)
}
