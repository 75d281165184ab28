//! Strong linear forms: the doubled-`x_0` expectation against `nu_{e_0} - 1`,
//! the `Q_d` family that connects it to `||nu_{e_0} - 1||_{U^{e_0}}` by
//! exact Cauchy-Schwarz steps, and the single-copy variant.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::genmeasure::{seeded_rng, unit_f64};
use crate::gowersnorm::{box_power_brute, clamp_cube_average, cube_cost, root, strides, EdgeFn};
use crate::hypersystem::WeightedHypergraph;
use crate::report::{Check, VerificationReport, INEQUALITY_SLACK};
use crate::sum::KahanSum;

use super::engine::{self, Factor, Layout};

/// Tolerance on the pointwise bound `E[Ybar^2] <= E[Ybar] sup^m`, which holds
/// exactly in real arithmetic and so only needs to absorb rounding.
pub const POINTWISE_SLACK: f64 = 1e-12;

/// The function dominating `g_e^{(iota)}`: the constant 1 or `nu_e` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cap {
    One,
    Nu,
}

impl std::str::FromStr for Cap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" => Ok(Cap::One),
            "nu" => Ok(Cap::Nu),
            other => Err(Error::InvalidSpec(format!("cap must be \"one\" or \"nu\", got {other:?}"))),
        }
    }
}

fn cap_fn(w: &WeightedHypergraph, j: usize, cap: Cap) -> EdgeFn {
    match cap {
        Cap::Nu => w.weight(j).clone(),
        Cap::One => w.weight(j).map(|_| 1.0).expect("constant is finite"),
    }
}

fn check_dominated(w: &WeightedHypergraph, j: usize, copy: usize, cap: Cap, g: &EdgeFn) -> Result<()> {
    let nu = w.weight(j);
    if !g.same_shape(nu) {
        return Err(Error::ShapeMismatch(format!("g for e_{j} copy {copy} does not live on e_{j}")));
    }
    let bad = g.values().iter().zip(nu.values()).position(|(&gv, &nv)| {
        let c = match cap {
            Cap::One => 1.0,
            Cap::Nu => nv,
        };
        !(0.0..=c).contains(&gv)
    });
    match bad {
        Some(index) => Err(Error::CapViolated { edge: j, copy, index }),
        None => Ok(()),
    }
}

/// `nu` together with functions `0 <= g_e^{(iota)} <= cap` for every edge
/// `e_j`, `j = 1..=r`, and copy `iota in {0, 1}`. Index `j - 1` of `caps`
/// and `gs` refers to `e_j`; `e_0` carries no function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlfInstance {
    hypergraph: WeightedHypergraph,
    caps: Vec<[Cap; 2]>,
    gs: Vec<[EdgeFn; 2]>,
}

#[derive(Deserialize)]
struct SlfInstanceRepr {
    hypergraph: WeightedHypergraph,
    caps: Vec<[Cap; 2]>,
    gs: Vec<[EdgeFn; 2]>,
}

impl<'de> Deserialize<'de> for SlfInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SlfInstanceRepr::deserialize(d)?;
        SlfInstance::new(r.hypergraph, r.caps, r.gs).map_err(serde::de::Error::custom)
    }
}

impl SlfInstance {
    pub fn new(hypergraph: WeightedHypergraph, caps: Vec<[Cap; 2]>, gs: Vec<[EdgeFn; 2]>) -> Result<Self> {
        let r = hypergraph.r();
        if caps.len() != r || gs.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "need caps and functions for {r} edges, got {} and {}",
                caps.len(),
                gs.len()
            )));
        }
        for j in 1..=r {
            for copy in 0..2 {
                check_dominated(&hypergraph, j, copy, caps[j - 1][copy], &gs[j - 1][copy])?;
            }
        }
        Ok(SlfInstance { hypergraph, caps, gs })
    }

    /// Every `g` equal to its cap.
    pub fn at_caps(hypergraph: WeightedHypergraph, caps: Vec<[Cap; 2]>) -> Result<Self> {
        let r = hypergraph.r();
        if caps.len() != r {
            return Err(Error::ShapeMismatch(format!("need caps for {r} edges, got {}", caps.len())));
        }
        let gs = (1..=r)
            .map(|j| [cap_fn(&hypergraph, j, caps[j - 1][0]), cap_fn(&hypergraph, j, caps[j - 1][1])])
            .collect();
        Self::new(hypergraph, caps, gs)
    }

    /// `g = u * cap` with `u` uniform in `[0, 1)` entrywise, from a seeded stream.
    pub fn seeded(hypergraph: WeightedHypergraph, caps: Vec<[Cap; 2]>, seed: u64) -> Result<Self> {
        let r = hypergraph.r();
        if caps.len() != r {
            return Err(Error::ShapeMismatch(format!("need caps for {r} edges, got {}", caps.len())));
        }
        let mut rng = seeded_rng(seed);
        let mut gs = Vec::with_capacity(r);
        for j in 1..=r {
            let mut pair = Vec::with_capacity(2);
            for &c in &caps[j - 1] {
                let cap = cap_fn(&hypergraph, j, c);
                let vals = cap.values().iter().map(|&c| unit_f64(&mut rng) * c).collect();
                pair.push(EdgeFn::new(cap.edge().to_vec(), cap.dims().to_vec(), vals)?);
            }
            let [a, b]: [EdgeFn; 2] = pair.try_into().expect("two copies");
            gs.push([a, b]);
        }
        Self::new(hypergraph, caps, gs)
    }

    pub fn hypergraph(&self) -> &WeightedHypergraph {
        &self.hypergraph
    }

    pub fn r(&self) -> usize {
        self.hypergraph.r()
    }

    pub fn cap(&self, j: usize, copy: usize) -> Cap {
        self.caps[j - 1][copy]
    }

    /// `g_{e_j}^{(copy)}`.
    pub fn g(&self, j: usize, copy: usize) -> &EdgeFn {
        &self.gs[j - 1][copy]
    }

    fn chain(&self) -> Chain<'_> {
        Chain {
            w: &self.hypergraph,
            x0_copies: 2,
            gs: self.gs.iter().map(|p| p.iter().collect()).collect(),
            caps: self.caps.iter().map(|p| p.to_vec()).collect(),
        }
    }
}

/// `nu` with one function `0 <= g_e <= cap` per edge `e_j`, `j = 1..=r`,
/// all sharing a single copy of `x_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlfSingleInstance {
    hypergraph: WeightedHypergraph,
    caps: Vec<Cap>,
    gs: Vec<EdgeFn>,
}

#[derive(Deserialize)]
struct SlfSingleRepr {
    hypergraph: WeightedHypergraph,
    caps: Vec<Cap>,
    gs: Vec<EdgeFn>,
}

impl<'de> Deserialize<'de> for SlfSingleInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SlfSingleRepr::deserialize(d)?;
        SlfSingleInstance::new(r.hypergraph, r.caps, r.gs).map_err(serde::de::Error::custom)
    }
}

impl SlfSingleInstance {
    pub fn new(hypergraph: WeightedHypergraph, caps: Vec<Cap>, gs: Vec<EdgeFn>) -> Result<Self> {
        let r = hypergraph.r();
        if caps.len() != r || gs.len() != r {
            return Err(Error::ShapeMismatch(format!(
                "need caps and functions for {r} edges, got {} and {}",
                caps.len(),
                gs.len()
            )));
        }
        for j in 1..=r {
            check_dominated(&hypergraph, j, 0, caps[j - 1], &gs[j - 1])?;
        }
        Ok(SlfSingleInstance { hypergraph, caps, gs })
    }

    pub fn at_caps(hypergraph: WeightedHypergraph, caps: Vec<Cap>) -> Result<Self> {
        let gs = (1..=hypergraph.r()).zip(&caps).map(|(j, &c)| cap_fn(&hypergraph, j, c)).collect();
        Self::new(hypergraph, caps, gs)
    }

    pub fn seeded(hypergraph: WeightedHypergraph, caps: Vec<Cap>, seed: u64) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        let gs = (1..=hypergraph.r())
            .zip(&caps)
            .map(|(j, &c)| {
                let cap = cap_fn(&hypergraph, j, c);
                let vals = cap.values().iter().map(|&v| unit_f64(&mut rng) * v).collect();
                EdgeFn::new(cap.edge().to_vec(), cap.dims().to_vec(), vals)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(hypergraph, caps, gs)
    }

    pub fn hypergraph(&self) -> &WeightedHypergraph {
        &self.hypergraph
    }

    pub fn g(&self, j: usize) -> &EdgeFn {
        &self.gs[j - 1]
    }

    fn chain(&self) -> Chain<'_> {
        Chain {
            w: &self.hypergraph,
            x0_copies: 1,
            gs: self.gs.iter().map(|g| vec![g]).collect(),
            caps: self.caps.iter().map(|&c| vec![c]).collect(),
        }
    }
}

/// Validates `d` as a subset of `e_0 = {1, ..., r}` and returns it sorted.
fn subset_of_e0(d: &[usize], r: usize) -> Result<Vec<usize>> {
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d.len() || sorted.iter().any(|&v| v == 0 || v > r) {
        return Err(Error::InvalidSubset(d.to_vec()));
    }
    Ok(sorted)
}

fn mask_to_set(mask: usize, r: usize) -> Vec<usize> {
    (1..=r).filter(|v| (mask >> (v - 1)) & 1 == 1).collect()
}

/// Which copy of `v` the cube vertex `omega` (over the sorted set `d`) selects.
fn omega_copy(d: &[usize], omega: usize, v: usize) -> usize {
    match d.iter().position(|&u| u == v) {
        Some(pos) => (omega >> pos) & 1,
        None => 0,
    }
}

/// `E[Ybar]`, `E[Ybar^2]` and the pointwise cap `sup^m E[Ybar]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct YbarMoments {
    pub mean: f64,
    pub mean_sq: f64,
    /// `sup^m`, `m` the number of factors of `Ybar` (at most `2^{|d|+1}`).
    pub cap_factor: f64,
    pub cap: f64,
}

/// Shared description of the doubled (`x0_copies = 2`) and single-copy
/// (`x0_copies = 1`) chains.
struct Chain<'a> {
    w: &'a WeightedHypergraph,
    x0_copies: usize,
    /// `gs[j - 1][iota]`
    gs: Vec<Vec<&'a EdgeFn>>,
    caps: Vec<Vec<Cap>>,
}

impl<'a> Chain<'a> {
    fn r(&self) -> usize {
        self.w.r()
    }

    fn q_layout(&self, d: &[usize]) -> Layout {
        let r = self.r();
        let copies: Vec<usize> =
            (0..=r).map(|v| if v == 0 { self.x0_copies } else if d.contains(&v) { 2 } else { 1 }).collect();
        Layout::new(self.w.system().dims(), &copies)
    }

    /// `X_d Y_d` as factors.
    fn q_factors(&self, layout: &Layout, d: &[usize]) -> Vec<Factor<'a>> {
        let r = self.r();
        let cube = 1usize << d.len();
        let mut out = Vec::new();
        for omega in 0..cube {
            out.push(Factor::centered(layout, self.w.weight(0), |v| omega_copy(d, omega, v)));
        }
        for j in (1..=r).filter(|j| !d.contains(j)) {
            for iota in 0..self.x0_copies {
                for omega in 0..cube {
                    out.push(Factor::raw(layout, self.gs[j - 1][iota], |v| {
                        if v == 0 {
                            iota
                        } else {
                            omega_copy(d, omega, v)
                        }
                    }));
                }
            }
        }
        out
    }

    fn q_cost(&self, d: &[usize]) -> u128 {
        let layout = self.q_layout(d);
        let factors = self.q_factors(&layout, d).len();
        engine::cost(&layout, factors)
    }

    fn q(&self, d: &[usize], budget: Budget) -> Result<f64> {
        let layout = self.q_layout(d);
        let factors = self.q_factors(&layout, d);
        engine::expectation(&layout, &factors, budget)
    }

    fn ybar_layout(&self, d: &[usize], j: usize) -> Layout {
        let r = self.r();
        let copies: Vec<usize> = (0..=r)
            .map(|v| match v {
                0 => self.x0_copies,
                v if v == j => 0,
                v if d.contains(&v) => 2,
                _ => 1,
            })
            .collect();
        Layout::new(self.w.system().dims(), &copies)
    }

    fn ybar_factors(&self, layout: &Layout, d: &[usize], j: usize) -> Vec<Factor<'a>> {
        let cube = 1usize << d.len();
        let mut out = Vec::new();
        for iota in 0..self.x0_copies {
            if self.caps[j - 1][iota] == Cap::One {
                continue;
            }
            for omega in 0..cube {
                out.push(Factor::raw(layout, self.w.weight(j), |v| if v == 0 { iota } else { omega_copy(d, omega, v) }));
            }
        }
        out
    }

    fn ybar_cost(&self, d: &[usize], j: usize) -> u128 {
        let layout = self.ybar_layout(d, j);
        engine::cost(&layout, self.ybar_factors(&layout, d, j).len())
    }

    fn ybar(&self, d: &[usize], j: usize, budget: Budget) -> Result<YbarMoments> {
        let layout = self.ybar_layout(d, j);
        let factors = self.ybar_factors(&layout, d, j);
        let m = engine::moments(&layout, &factors, budget)?;
        let cap_factor = self.w.sup().powi(factors.len() as i32);
        Ok(YbarMoments { mean: m.mean, mean_sq: m.mean_sq, cap_factor, cap: cap_factor * m.mean })
    }

    fn verify_cost(&self, lhs_cost: u128) -> u128 {
        let r = self.r();
        let full = (1usize << r) - 1;
        let mut total = lhs_cost.saturating_add(cube_cost(self.w.weight(0).dims()));
        for mask in 0..=full {
            let d = mask_to_set(mask, r);
            total = total.saturating_add(self.q_cost(&d));
            for j in (1..=r).filter(|j| !d.contains(j)) {
                total = total.saturating_add(self.ybar_cost(&d, j));
            }
        }
        total
    }

    /// Runs every Cauchy-Schwarz step and the composed bound. `lhs` is the
    /// independently computed target expectation.
    fn verify(&self, name: &str, lhs: f64) -> Result<VerificationReport> {
        let r = self.r();
        let full = (1usize << r) - 1;
        let unlimited = Budget::UNLIMITED;
        let q: Vec<f64> = (0..=full).map(|m| self.q(&mask_to_set(m, r), unlimited)).collect::<Result<_>>()?;
        let sup = self.w.sup();
        let mut report = VerificationReport::new(name);

        report.push(Check::eq("q_empty=lhs", q[0], lhs, 1e-9));
        let box_power = box_power_brute(&self.w.centered(0), unlimited)?;
        report.push(Check::eq("q_full=box_norm_power", q[full], box_power, 1e-9));

        let mut path_factors = Vec::with_capacity(r);
        for mask in 0..full {
            let d = mask_to_set(mask, r);
            for j in (1..=r).filter(|j| !d.contains(j)) {
                let y = self.ybar(&d, j, unlimited)?;
                let next = q[mask | 1 << (j - 1)];
                let tag = format!("d={d:?},j={j}");
                report.push(Check::le(format!("cauchy-schwarz[{tag}]"), q[mask] * q[mask], next * y.mean_sq, INEQUALITY_SLACK));
                report.push(Check::le(format!("pointwise[{tag}]"), y.mean_sq, y.cap, POINTWISE_SLACK));
                report.measure(format!("ybar_sq[{tag}]"), y.mean_sq);
                // ascending path {} -> {1} -> {1,2} -> ...
                if mask == (1 << d.len()) - 1 && j == d.len() + 1 {
                    path_factors.push(y.mean_sq);
                }
            }
        }

        let mut composed = q[full].abs().powf(1.0 / (1u64 << r) as f64);
        for (k, b) in path_factors.iter().enumerate() {
            composed *= b.max(0.0).powf(1.0 / (1u64 << (k + 1)) as f64);
        }
        report.push(Check::le("composed-bound", lhs.abs(), composed, INEQUALITY_SLACK));

        let norm = root(clamp_cube_average(box_power, "chain_verify")?, r);
        let sup_power = if self.x0_copies == 2 { r as f64 } else { r as f64 / 2.0 };
        let reference = norm * sup.powf(sup_power);
        report
            .measure("lhs", lhs)
            .measure("norm", norm)
            .measure("sup", sup)
            .measure("composed_bound", composed)
            .measure("reference_bound", reference);
        if reference > 0.0 {
            report.measure("ratio", lhs.abs() / reference);
        }
        Ok(report)
    }
}

fn slf_lhs_cost(w: &WeightedHypergraph, x0_copies: usize) -> u128 {
    let dims = w.system().dims();
    let r = w.r();
    let assignments: u128 = (dims[0] as u128).pow(x0_copies as u32) * dims[1..].iter().map(|&d| d as u128).product::<u128>();
    assignments.saturating_mul((x0_copies * r + 1) as u128)
}

/// Elementary products for [`slf_lhs`].
pub fn slf_cost(inst: &SlfInstance) -> u128 {
    slf_lhs_cost(&inst.hypergraph, 2)
}

/// Offsets of `x_{e_j \ {0}}` inside `g_{e_j}` for a point `x_{e_0}` given in
/// vertex order `1..=r`, plus the stride of vertex 0.
fn edge_offsets(g: &EdgeFn, j: usize, x: &[usize]) -> (usize, usize) {
    let st = strides(g.dims());
    let mut off = 0;
    for (axis, &v) in g.edge().iter().enumerate().skip(1) {
        debug_assert_ne!(v, j);
        off += st[axis] * x[v - 1];
    }
    (off, st[0])
}

/// `E[(nu_{e_0}(x_{e_0}) - 1) prod_iota prod_{j >= 1} g_{e_j}^{(iota)}(x_0^{(iota)}, x_{e_j \ {0}})]`,
/// signed, by direct nested enumeration.
pub fn slf_lhs(inst: &SlfInstance, budget: Budget) -> Result<f64> {
    budget.check(slf_cost(inst))?;
    let w = &inst.hypergraph;
    let r = w.r();
    let dims = w.system().dims();
    let n0 = dims[0];
    let nu0 = w.weight(0);
    let mut x = vec![0usize; r];
    let total: usize = dims[1..].iter().product();
    let mut acc = KahanSum::new();
    let mut offs = vec![[(0usize, 0usize); 2]; r];
    for _ in 0..total {
        let centered = nu0.at(&x) - 1.0;
        for j in 1..=r {
            for (iota, slot) in offs[j - 1].iter_mut().enumerate() {
                *slot = edge_offsets(inst.g(j, iota), j, &x);
            }
        }
        for a in 0..n0 {
            for b in 0..n0 {
                let mut prod = centered;
                for j in 1..=r {
                    let [(o0, s0), (o1, s1)] = offs[j - 1];
                    prod *= inst.g(j, 0).values()[o0 + s0 * a];
                    prod *= inst.g(j, 1).values()[o1 + s1 * b];
                }
                acc.add(prod);
            }
        }
        crate::gowersnorm::advance(&mut x, &dims[1..]);
    }
    Ok(acc.total() / (total * n0 * n0) as f64)
}

/// `Q_d = E[X_d Y_d]` for `d` a subset of `e_0 = {1, ..., r}`.
pub fn q_value(inst: &SlfInstance, d: &[usize], budget: Budget) -> Result<f64> {
    let d = subset_of_e0(d, inst.r())?;
    inst.chain().q(&d, budget)
}

/// Moments of `Ybar_d^{not j}`, the factors of `Y_d` without `x_j` with every
/// `g` replaced by its cap, over the free variables other than `x_j`.
pub fn ybar_sq_expectation(inst: &SlfInstance, d: &[usize], j: usize, budget: Budget) -> Result<YbarMoments> {
    let d = subset_of_e0(d, inst.r())?;
    if j == 0 || j > inst.r() || d.contains(&j) {
        return Err(Error::InvalidVertex { vertex: j, reason: "must lie in e_0 \\ d" });
    }
    inst.chain().ybar(&d, j, budget)
}

/// Checks every step `Q_d^2 <= Q_{d+j} E[Ybar_d^{not j}^2]` for `d` a proper
/// subset of `e_0` and `j` outside it, the pointwise bound on each
/// `E[Ybar^2]`, both endpoint identities, and the bound on `|Q_empty|`
/// composed along the ascending path. The comparison against
/// `||nu_{e_0} - 1|| sup^r` is reported as a measured ratio.
pub fn chain_verify(inst: &SlfInstance, budget: Budget) -> Result<VerificationReport> {
    let chain = inst.chain();
    budget.check(chain.verify_cost(slf_cost(inst)))?;
    let lhs = slf_lhs(inst, Budget::UNLIMITED)?;
    chain.verify("slf-chain", lhs)
}

/// Elementary products for [`chain_verify`].
pub fn chain_cost(inst: &SlfInstance) -> u128 {
    inst.chain().verify_cost(slf_cost(inst))
}

/// Elementary products for [`slf_single_lhs`].
pub fn slf_single_cost(inst: &SlfSingleInstance) -> u128 {
    slf_lhs_cost(&inst.hypergraph, 1)
}

/// `E[(nu_{e_0}(x_{e_0}) - 1) prod_{j >= 1} g_{e_j}(x_{e_j})]` over `x_J`.
pub fn slf_single_lhs(inst: &SlfSingleInstance, budget: Budget) -> Result<f64> {
    budget.check(slf_single_cost(inst))?;
    let w = &inst.hypergraph;
    let r = w.r();
    let dims = w.system().dims();
    let mut x = vec![0usize; r + 1];
    let total: usize = dims.iter().product();
    let mut acc = KahanSum::new();
    let mut proj = Vec::with_capacity(r);
    for _ in 0..total {
        proj.clear();
        proj.extend_from_slice(&x[1..]);
        let mut prod = w.weight(0).at(&proj) - 1.0;
        for j in 1..=r {
            proj.clear();
            proj.extend(x.iter().enumerate().filter(|&(v, _)| v != j).map(|(_, &xv)| xv));
            prod *= inst.g(j).at(&proj);
        }
        acc.add(prod);
        crate::gowersnorm::advance(&mut x, dims);
    }
    Ok(acc.total() / total as f64)
}

pub fn slf_single_q_value(inst: &SlfSingleInstance, d: &[usize], budget: Budget) -> Result<f64> {
    let d = subset_of_e0(d, inst.hypergraph.r())?;
    inst.chain().q(&d, budget)
}

pub fn slf_single_ybar(inst: &SlfSingleInstance, d: &[usize], j: usize, budget: Budget) -> Result<YbarMoments> {
    let r = inst.hypergraph.r();
    let d = subset_of_e0(d, r)?;
    if j == 0 || j > r || d.contains(&j) {
        return Err(Error::InvalidVertex { vertex: j, reason: "must lie in e_0 \\ d" });
    }
    inst.chain().ybar(&d, j, budget)
}

/// Single-copy counterpart of [`chain_verify`]: each `Ybar` carries at most
/// `2^{|d|}` factors, and the reference bound uses `sup^{r/2}`.
pub fn slf_single_chain_verify(inst: &SlfSingleInstance, budget: Budget) -> Result<VerificationReport> {
    let chain = inst.chain();
    budget.check(chain.verify_cost(slf_single_cost(inst)))?;
    let lhs = slf_single_lhs(inst, Budget::UNLIMITED)?;
    chain.verify("slf-single-chain", lhs)
}

pub fn slf_single_chain_cost(inst: &SlfSingleInstance) -> u128 {
    inst.chain().verify_cost(slf_single_cost(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::Measure;
    use crate::hypersystem::represent;

    const B: Budget = Budget::DEFAULT;

    fn nu7() -> WeightedHypergraph {
        represent(&Measure::from_set(&[0, 1, 3, 4], 7).unwrap(), 2).unwrap()
    }

    #[test]
    fn uniform_nu_gives_zero() {
        let w = represent(&Measure::uniform(5).unwrap(), 2).unwrap();
        let inst = SlfInstance::seeded(w, vec![[Cap::Nu, Cap::One]; 2], 3).unwrap();
        assert_eq!(slf_lhs(&inst, B).unwrap(), 0.0);
        for d in [vec![], vec![1], vec![2], vec![1, 2]] {
            assert_eq!(q_value(&inst, &d, B).unwrap(), 0.0);
        }
        let rep = chain_verify(&inst, B).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn zero_g_gives_zero() {
        let w = nu7();
        let mut inst = SlfInstance::at_caps(w, vec![[Cap::Nu; 2]; 2]).unwrap();
        inst.gs[1][0] = inst.gs[1][0].map(|_| 0.0).unwrap();
        assert_eq!(slf_lhs(&inst, B).unwrap(), 0.0);
    }

    #[test]
    fn endpoints_match() {
        let inst = SlfInstance::seeded(nu7(), vec![[Cap::Nu; 2]; 2], 11).unwrap();
        let lhs = slf_lhs(&inst, B).unwrap();
        let q0 = q_value(&inst, &[], B).unwrap();
        assert!((lhs - q0).abs() < 1e-12, "{lhs} vs {q0}");
        let qf = q_value(&inst, &[2, 1], B).unwrap();
        let p = box_power_brute(&inst.hypergraph.centered(0), B).unwrap();
        assert!((qf - p).abs() <= 1e-9 * p.max(1.0));
    }

    #[test]
    fn ybar_degenerate_caps() {
        let inst = SlfInstance::seeded(nu7(), vec![[Cap::One; 2]; 2], 1).unwrap();
        let y = ybar_sq_expectation(&inst, &[1], 2, B).unwrap();
        assert_eq!((y.mean, y.mean_sq), (1.0, 1.0));
        let w = represent(&Measure::uniform(5).unwrap(), 2).unwrap();
        let inst = SlfInstance::at_caps(w, vec![[Cap::Nu; 2]; 2]).unwrap();
        let y = ybar_sq_expectation(&inst, &[], 1, B).unwrap();
        assert_eq!((y.mean, y.mean_sq), (1.0, 1.0));
    }

    #[test]
    fn chain_passes_on_random_instance() {
        let inst = SlfInstance::seeded(nu7(), vec![[Cap::Nu; 2]; 2], 5).unwrap();
        let rep = chain_verify(&inst, B).unwrap();
        assert!(rep.passed(), "{:#?}", rep.failures().collect::<Vec<_>>());
        let steps = rep.checks.iter().filter(|c| c.label.starts_with("cauchy-schwarz")).count();
        assert_eq!(steps, 4);
    }

    #[test]
    fn invalid_subsets() {
        let inst = SlfInstance::at_caps(nu7(), vec![[Cap::Nu; 2]; 2]).unwrap();
        assert!(matches!(q_value(&inst, &[0], B), Err(Error::InvalidSubset(_))));
        assert!(matches!(q_value(&inst, &[3], B), Err(Error::InvalidSubset(_))));
        assert!(matches!(q_value(&inst, &[1, 1], B), Err(Error::InvalidSubset(_))));
        assert!(ybar_sq_expectation(&inst, &[1], 1, B).is_err());
    }

    #[test]
    fn cap_violation_rejected() {
        let w = nu7();
        let caps = vec![[Cap::One; 2]; 2];
        let mut gs: Vec<[EdgeFn; 2]> = (1..=2).map(|j| [cap_fn(&w, j, Cap::One), cap_fn(&w, j, Cap::One)]).collect();
        gs[0][1] = gs[0][1].map(|_| 1.5).unwrap();
        assert!(matches!(SlfInstance::new(w, caps, gs), Err(Error::CapViolated { edge: 1, copy: 1, .. })));
    }

    #[test]
    fn single_degenerate_values() {
        let w = nu7();
        let inst = SlfSingleInstance::at_caps(w.clone(), vec![Cap::One; 2]).unwrap();
        let mean = crate::sum::mean(w.weight(0).values());
        assert!((slf_single_lhs(&inst, B).unwrap() - (mean - 1.0)).abs() < 1e-15);
        let u = represent(&Measure::uniform(7).unwrap(), 2).unwrap();
        let inst = SlfSingleInstance::seeded(u, vec![Cap::Nu; 2], 2).unwrap();
        assert_eq!(slf_single_lhs(&inst, B).unwrap(), 0.0);
    }

    #[test]
    fn single_chain_passes() {
        let inst = SlfSingleInstance::seeded(nu7(), vec![Cap::Nu, Cap::One], 9).unwrap();
        let rep = slf_single_chain_verify(&inst, B).unwrap();
        assert!(rep.passed(), "{:#?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn budget_is_enforced() {
        let inst = SlfInstance::at_caps(nu7(), vec![[Cap::Nu; 2]; 2]).unwrap();
        assert!(matches!(chain_verify(&inst, Budget(1000)), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(slf_lhs(&inst, Budget(10)), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn json_round_trip() {
        let w = represent(&Measure::from_set(&[0, 2], 3).unwrap(), 2).unwrap();
        let inst = SlfInstance::seeded(w, vec![[Cap::Nu, Cap::One]; 2], 4).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        assert!(s.contains(r#""caps":[["nu","one"],["nu","one"]]"#));
        let back: SlfInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back.gs, inst.gs);
    }
}
