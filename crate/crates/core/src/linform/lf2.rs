//! Expectations with two copies `x_0^{(0)}, x_0^{(1)}` of vertex 0:
//! `E[prod_{j >= 1} prod_iota nu_{e_j}(x_0^{(iota)}, x_{e_j \ {0}})^{n_{j,iota}}]`,
//! their centered terms, and the Cauchy-Schwarz chain bounding those terms.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gowersnorm::{box_power_brute, clamp_cube_average, cube_cost, root};
use crate::hypersystem::WeightedHypergraph;
use crate::report::{Check, VerificationReport, INEQUALITY_SLACK};
use crate::sum::KahanSum;

use super::cube::{cube_expectation, CubePattern};
use super::engine::{self, Factor, Layout};
use super::slf::POINTWISE_SLACK;

/// Exponents `n_{j,iota} in {0, 1}` for `j = 1..=r`, `iota in {0, 1}`;
/// entry `j - 1` holds `[n_{j,0}, n_{j,1}]`.
///
/// In [`lf2_term`] for vertex `j`, `n_{j,0}` is ignored: the centered factor
/// `nu_{e_j}(x_0^{(0)}, .) - 1` takes its place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lf2Exponents {
    exponents: Vec<[u8; 2]>,
}

#[derive(Deserialize)]
struct Lf2Repr {
    exponents: Vec<[u8; 2]>,
}

impl<'de> Deserialize<'de> for Lf2Exponents {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Lf2Exponents::new(Lf2Repr::deserialize(d)?.exponents).map_err(serde::de::Error::custom)
    }
}

impl Lf2Exponents {
    pub fn new(exponents: Vec<[u8; 2]>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::ShapeMismatch("need exponents for at least one edge".into()));
        }
        if exponents.iter().flatten().any(|&n| n > 1) {
            return Err(Error::ShapeMismatch("exponents must be 0 or 1".into()));
        }
        Ok(Lf2Exponents { exponents })
    }

    pub fn ones(r: usize) -> Self {
        Lf2Exponents { exponents: vec![[1, 1]; r] }
    }

    pub fn zeros(r: usize) -> Self {
        Lf2Exponents { exponents: vec![[0, 0]; r] }
    }

    /// Bit `2 (j - 1) + iota` of `bits` gives `n_{j,iota}`.
    pub fn from_bits(r: usize, bits: u64) -> Self {
        let exponents = (0..r).map(|k| [((bits >> (2 * k)) & 1) as u8, ((bits >> (2 * k + 1)) & 1) as u8]).collect();
        Lf2Exponents { exponents }
    }

    /// All `4^r` choices.
    pub fn all(r: usize) -> impl Iterator<Item = Lf2Exponents> {
        (0..1u64 << (2 * r)).map(move |b| Self::from_bits(r, b))
    }

    pub fn r(&self) -> usize {
        self.exponents.len()
    }

    pub fn get(&self, j: usize, iota: usize) -> u8 {
        self.exponents[j - 1][iota]
    }

    pub fn set(&mut self, j: usize, iota: usize, n: u8) {
        self.exponents[j - 1][iota] = n.min(1);
    }

    /// The same exponents with the two copies of `x_0` exchanged.
    pub fn swapped(&self) -> Self {
        Lf2Exponents { exponents: self.exponents.iter().map(|&[a, b]| [b, a]).collect() }
    }

    fn check_against(&self, w: &WeightedHypergraph) -> Result<()> {
        if self.r() != w.r() {
            return Err(Error::ShapeMismatch(format!("{} exponent pairs for r = {}", self.r(), w.r())));
        }
        Ok(())
    }
}

fn doubled_x0_layout(w: &WeightedHypergraph) -> Layout {
    let mut copies = vec![1; w.r() + 1];
    copies[0] = 2;
    Layout::new(w.system().dims(), &copies)
}

fn check_vertex(w: &WeightedHypergraph, j: usize) -> Result<()> {
    if j == 0 || j > w.r() {
        return Err(Error::InvalidVertex { vertex: j, reason: "must lie in 1..=r" });
    }
    Ok(())
}

pub fn lf2_cost(w: &WeightedHypergraph) -> u128 {
    engine::cost(&doubled_x0_layout(w), 2 * w.r())
}

/// `E[prod_j prod_iota nu_{e_j}(x_0^{(iota)}, x_{e_j \ {0}})^{n_{j,iota}}]`.
pub fn lf2_expectation(w: &WeightedHypergraph, exps: &Lf2Exponents, budget: Budget) -> Result<f64> {
    exps.check_against(w)?;
    let layout = doubled_x0_layout(w);
    let mut factors = Vec::new();
    for j in 1..=w.r() {
        for iota in 0..2 {
            if exps.get(j, iota) == 1 {
                factors.push(Factor::raw(&layout, w.weight(j), |v| if v == 0 { iota } else { 0 }));
            }
        }
    }
    engine::expectation(&layout, &factors, budget)
}

/// `E[(nu_{e_j}(x_0^{(0)}, .) - 1) prod_{(i, iota) != (j, 0)} nu_{e_i}(x_0^{(iota)}, .)^{n_{i,iota}}]`.
pub fn lf2_term(w: &WeightedHypergraph, j: usize, exps: &Lf2Exponents, budget: Budget) -> Result<f64> {
    exps.check_against(w)?;
    check_vertex(w, j)?;
    let layout = doubled_x0_layout(w);
    let mut factors = vec![Factor::centered(&layout, w.weight(j), |_| 0)];
    for i in 1..=w.r() {
        for iota in 0..2 {
            if (i, iota) != (j, 0) && exps.get(i, iota) == 1 {
                factors.push(Factor::raw(&layout, w.weight(i), |v| if v == 0 { iota } else { 0 }));
            }
        }
    }
    engine::expectation(&layout, &factors, budget)
}

/// Checks `lf2_expectation(n) - 1 = sum_t lf2_term(...)`, obtained by turning
/// the factors `nu = (nu - 1) + 1` into centered ones one at a time. A factor
/// on copy `x_0^{(1)}` is handled by exchanging the two copies.
pub fn lf2_telescoping(w: &WeightedHypergraph, exps: &Lf2Exponents, budget: Budget) -> Result<VerificationReport> {
    exps.check_against(w)?;
    let support: Vec<(usize, usize)> =
        (1..=w.r()).flat_map(|j| [(j, 0), (j, 1)]).filter(|&(j, iota)| exps.get(j, iota) == 1).collect();
    budget.check(lf2_cost(w).saturating_mul(support.len() as u128 + 1))?;

    let total = lf2_expectation(w, exps, Budget::UNLIMITED)?;
    let mut rest = exps.clone();
    let mut sum = KahanSum::new();
    for &(j, iota) in &support {
        rest.set(j, iota, 0);
        let term = if iota == 0 {
            lf2_term(w, j, &rest, Budget::UNLIMITED)?
        } else {
            lf2_term(w, j, &rest.swapped(), Budget::UNLIMITED)?
        };
        sum.add(term);
    }
    let mut report = VerificationReport::new("doubled-telescoping");
    report.measure("expectation", total).measure("terms", support.len() as f64);
    report.push(Check::eq("telescoping", sum.total() + 1.0, total, 1e-9));
    Ok(report)
}

/// The quantities `Q_d`, `d` a subset of `D = e_j \ {0}`, obtained from the
/// term for vertex `j` by doubling the vertices of `d`.
struct Lf2Chain<'a> {
    w: &'a WeightedHypergraph,
    j: usize,
    exps: &'a Lf2Exponents,
    /// `D`, ascending
    verts: Vec<usize>,
}

fn omega_copy(d: &[usize], omega: usize, v: usize) -> usize {
    match d.iter().position(|&u| u == v) {
        Some(pos) => (omega >> pos) & 1,
        None => 0,
    }
}

impl<'a> Lf2Chain<'a> {
    fn subset(&self, mask: usize) -> Vec<usize> {
        self.verts.iter().enumerate().filter(|(b, _)| (mask >> b) & 1 == 1).map(|(_, &v)| v).collect()
    }

    fn layout(&self, d: &[usize], without: Option<usize>) -> Layout {
        let copies: Vec<usize> = (0..=self.w.r())
            .map(|v| match v {
                0 => 2,
                v if Some(v) == without => 0,
                v if d.contains(&v) => 2,
                _ => 1,
            })
            .collect();
        Layout::new(self.w.system().dims(), &copies)
    }

    fn q_factors(&self, layout: &Layout, d: &[usize]) -> Vec<Factor<'a>> {
        let cube = 1usize << d.len();
        let nu_j = self.w.weight(self.j);
        let mut out = Vec::new();
        for omega in 0..cube {
            out.push(Factor::centered(layout, nu_j, |v| if v == 0 { 0 } else { omega_copy(d, omega, v) }));
            if self.exps.get(self.j, 1) == 1 {
                out.push(Factor::raw(layout, nu_j, |v| if v == 0 { 1 } else { omega_copy(d, omega, v) }));
            }
        }
        for &i in self.verts.iter().filter(|i| !d.contains(i)) {
            out.extend(self.edge_factors(layout, d, i));
        }
        out
    }

    /// `prod_iota prod_omega nu_{e_i}(x_0^{(iota)}, x^{(omega)})^{n_{i,iota}}`.
    fn edge_factors(&self, layout: &Layout, d: &[usize], i: usize) -> Vec<Factor<'a>> {
        let mut out = Vec::new();
        for iota in 0..2 {
            if self.exps.get(i, iota) == 0 {
                continue;
            }
            for omega in 0..1usize << d.len() {
                out.push(Factor::raw(layout, self.w.weight(i), |v| if v == 0 { iota } else { omega_copy(d, omega, v) }));
            }
        }
        out
    }

    fn q(&self, d: &[usize]) -> Result<f64> {
        let layout = self.layout(d, None);
        let f = self.q_factors(&layout, d);
        engine::expectation(&layout, &f, Budget::UNLIMITED)
    }

    fn ybar(&self, d: &[usize], v: usize) -> Result<(engine::Moments, usize)> {
        let layout = self.layout(d, Some(v));
        let f = self.edge_factors(&layout, d, v);
        Ok((engine::moments(&layout, &f, Budget::UNLIMITED)?, f.len()))
    }

    fn cost(&self) -> u128 {
        let full = (1usize << self.verts.len()) - 1;
        let mut total = cube_cost(self.w.weight(self.j).dims()).saturating_mul(2);
        for mask in 0..=full {
            let d = self.subset(mask);
            let layout = self.layout(&d, None);
            total = total.saturating_add(engine::cost(&layout, self.q_factors(&layout, &d).len()));
            for &v in self.verts.iter().filter(|v| !d.contains(v)) {
                let layout = self.layout(&d, Some(v));
                total = total.saturating_add(engine::cost(&layout, self.edge_factors(&layout, &d, v).len()));
            }
        }
        total
    }
}

pub fn lf2_chain_cost(w: &WeightedHypergraph, j: usize, exps: &Lf2Exponents) -> Result<u128> {
    exps.check_against(w)?;
    check_vertex(w, j)?;
    let verts = (1..=w.r()).filter(|&v| v != j).collect();
    Ok(Lf2Chain { w, j, exps, verts }.cost().saturating_add(lf2_cost(w)))
}

/// Bounds `lf2_term(w, j, exps)` by doubling the vertices of `e_j \ {0}` one
/// at a time (each step an exact Cauchy-Schwarz inequality, checked together
/// with its pointwise bound), then splitting the fully doubled quantity into
/// `||nu_{e_j} - 1||_{U^{e_j}}^{2^{r-1}}` and a cube expectation of
/// `nu_{e_j}` on the `x_0^{(1)}` side, whose exponent is read as `n_{j,1}`.
pub fn lf2_chain_verify(w: &WeightedHypergraph, j: usize, exps: &Lf2Exponents, budget: Budget) -> Result<VerificationReport> {
    budget.check(lf2_chain_cost(w, j, exps)?)?;
    let verts: Vec<usize> = (1..=w.r()).filter(|&v| v != j).collect();
    let m = verts.len();
    let chain = Lf2Chain { w, j, exps, verts };
    let full = (1usize << m) - 1;
    let q: Vec<f64> = (0..=full).map(|mask| chain.q(&chain.subset(mask))).collect::<Result<_>>()?;
    let term = lf2_term(w, j, exps, Budget::UNLIMITED)?;
    let sup = w.sup();

    let mut report = VerificationReport::new("doubled-chain");
    report.note(format!("the x_0^(1) copies of nu_e{j} carry exponent n_(e{j},1) = {}", exps.get(j, 1)));
    report.push(Check::eq("q_empty=term", q[0], term, 1e-9));

    let mut path = Vec::with_capacity(m);
    for mask in 0..full {
        let d = chain.subset(mask);
        for (b, &v) in chain.verts.iter().enumerate().filter(|(b, _)| (mask >> b) & 1 == 0) {
            let (y, nfactors) = chain.ybar(&d, v)?;
            let next = q[mask | 1 << b];
            let tag = format!("d={d:?},v={v}");
            report.push(Check::le(format!("cauchy-schwarz[{tag}]"), q[mask] * q[mask], next * y.mean_sq, INEQUALITY_SLACK));
            let cap = y.mean * sup.powi(nfactors as i32);
            report.push(Check::le(format!("pointwise[{tag}]"), y.mean_sq, cap, POINTWISE_SLACK));
            report.measure(format!("ybar_sq[{tag}]"), y.mean_sq);
            if mask == (1 << b) - 1 {
                path.push(y.mean_sq);
            }
        }
    }

    let centered = w.centered(j);
    let box_power = box_power_brute(&centered, Budget::UNLIMITED)?;
    let side = if exps.get(j, 1) == 1 { CubePattern::full(centered.edge().to_vec()) } else { CubePattern::empty(centered.edge().to_vec()) };
    let cube = cube_expectation(w.weight(j), &side, Budget::UNLIMITED)?;
    report.push(Check::le("final-split", q[full].abs(), (box_power.max(0.0) * cube.max(0.0)).sqrt(), INEQUALITY_SLACK));

    let path_product: f64 =
        path.iter().enumerate().map(|(k, b)| b.max(0.0).powf(1.0 / (1u64 << (k + 1)) as f64)).product();
    let chained = q[full].abs().powf(1.0 / (1u64 << m) as f64) * path_product;
    report.push(Check::le("composed-bound", term.abs(), chained, INEQUALITY_SLACK));

    let r = w.r();
    let norm = root(clamp_cube_average(box_power, "lf2_chain_verify")?, r);
    let split_bound = norm * cube.max(0.0).powf(1.0 / (1u64 << r) as f64) * path_product;
    report.push(Check::le("split-bound", term.abs(), split_bound, INEQUALITY_SLACK));

    report
        .measure("term", term)
        .measure("norm", norm)
        .measure("sup", sup)
        .measure("cube_side", cube)
        .measure("composed_bound", chained)
        .measure("split_bound", split_bound)
        .measure("norm_sup_r_minus_1", norm * sup.powi(r as i32 - 1))
        .measure("norm_sup_r", norm * sup.powi(r as i32));
    Ok(report)
}
