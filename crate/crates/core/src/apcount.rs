//! Arithmetic-progression densities on Z_N and the experiment comparing a
//! measure's progression count with its uniformity.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cyclic::{CyclicFn, Measure};
use crate::error::{Error, Result};
use crate::genmeasure::{generate, GeneratorSpec};
use crate::gowersnorm::{box_norm_brute, u_norm_fast};
use crate::hypersystem::represent;
use crate::linform::{slf_single_cost, slf_single_lhs, Cap, SlfSingleInstance};
use crate::report::{Check, VerificationReport};
use crate::sum::KahanSum;

/// Deviation `|Lambda - 1|` above which [`relsz_experiment`] calls a measure
/// non-pseudorandom.
pub const DEFAULT_DEVIATION_THRESHOLD: f64 = 0.25;

pub fn ap_cost(n: usize, k: usize) -> u128 {
    (n as u128).pow(2).saturating_mul(k.max(1) as u128)
}

fn common_modulus(fs: &[&CyclicFn]) -> Result<usize> {
    let first = fs.first().ok_or_else(|| Error::ShapeMismatch("need at least one function".into()))?;
    let n = first.modulus();
    if let Some(f) = fs.iter().find(|f| f.modulus() != n) {
        return Err(Error::ShapeMismatch(format!("moduli {n} and {} differ", f.modulus())));
    }
    Ok(n)
}

/// `Lambda_k(f_0, ..., f_{k-1}) = E_{a,d in Z_N} prod_j f_j(a + j d)`, including `d = 0`.
pub fn ap_density(fs: &[&CyclicFn], budget: Budget) -> Result<f64> {
    let n = common_modulus(fs)?;
    budget.check(ap_cost(n, fs.len()))?;
    let mut acc = KahanSum::new();
    for a in 0..n {
        for d in 0..n {
            let mut prod = 1.0;
            let mut x = a;
            for f in fs {
                prod *= f.at(x);
                x = (x + d) % n;
            }
            acc.add(prod);
        }
    }
    Ok(acc.total() / (n * n) as f64)
}

/// Number of `(a, d)` with every `a + j d`, `j < k`, in `members`, split into
/// `d = 0` and `d != 0`.
fn count_progressions(members: &[usize], n: usize, k: usize) -> (u64, u64) {
    let mut inside = vec![false; n];
    for &m in members {
        inside[m] = true;
    }
    let trivial = members.len() as u64;
    let mut nontrivial = 0;
    for a in 0..n {
        for d in 1..n {
            if (0..k).all(|j| inside[(a + j * d) % n]) {
                nontrivial += 1;
            }
        }
    }
    (trivial, nontrivial)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApReport {
    pub k: usize,
    pub n: usize,
    pub density: f64,
    /// Progressions with `d = 0` inside the support.
    pub trivial_count: u64,
    pub nontrivial_count: u64,
    pub prediction: f64,
    pub ratio: f64,
}

impl ApReport {
    /// `Lambda_k(1_S)` against the random prediction `p^k`, `p = |S| / N`.
    pub fn for_indicator(members: &[usize], n: usize, k: usize, budget: Budget) -> Result<Self> {
        let nu = Measure::from_set(members, n)?;
        let support = nu.support();
        let ind = CyclicFn::from_fn(n, |x| if nu.values()[x] > 0.0 { 1.0 } else { 0.0 })?;
        let density = ap_density(&vec![&ind; k], budget)?;
        let (trivial_count, nontrivial_count) = count_progressions(&support, n, k);
        let prediction = nu.p().powi(k as i32);
        Ok(ApReport { k, n, density, trivial_count, nontrivial_count, prediction, ratio: density / prediction })
    }

    /// `Lambda_k(nu)` against the prediction 1; counts refer to the support of `nu`.
    pub fn for_measure(nu: &Measure, k: usize, budget: Budget) -> Result<Self> {
        let n = nu.modulus();
        let density = ap_density(&vec![nu.func(); k], budget)?;
        let (trivial_count, nontrivial_count) = count_progressions(&nu.support(), n, k);
        Ok(ApReport { k, n, density, trivial_count, nontrivial_count, prediction: 1.0, ratio: density })
    }

    pub fn csv_header() -> &'static str {
        "k,n,density,trivial_count,nontrivial_count,prediction,ratio"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{},{},{:e},{:e}",
            self.k, self.n, self.density, self.trivial_count, self.nontrivial_count, self.prediction, self.ratio
        )
    }
}

/// `||nu - 1||_{U^r}` relative to `p^r` and to `p^{r/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRatio {
    pub r: usize,
    pub norm: f64,
    pub p: f64,
    pub ratio: f64,
    pub half_ratio: f64,
}

pub fn hypothesis_ratio(nu: &Measure, r: usize) -> Result<HypothesisRatio> {
    let norm = u_norm_fast(&nu.centered(), r)?;
    let p = nu.p();
    Ok(HypothesisRatio { r, norm, p, ratio: norm / p.powi(r as i32), half_ratio: norm / p.powf(r as f64 / 2.0) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub r: usize,
    pub spec: GeneratorSpec,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_DEVIATION_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentOutcome {
    pub ap: ApReport,
    pub hypothesis: HypothesisRatio,
    /// `|Lambda_{r+1}(nu) - 1|`
    pub deviation: f64,
    pub pseudorandom: bool,
    pub report: VerificationReport,
}

pub fn telescoping_cost(n: usize, r: usize) -> u128 {
    crate::budget::pow(n, r + 1).saturating_mul((r * (r + 1)) as u128)
}

/// Writes `Lambda_{r+1}(nu) - 1` as `sum_j E[(nu_{e_j} - 1) prod_{i > j} nu_{e_i}]`
/// over the represented hypergraph, each term a single-copy expectation with
/// `e_j` moved to the base edge, and checks the sum against `lambda - 1`.
pub fn lambda_telescoping(nu: &Measure, r: usize, lambda: f64, budget: Budget) -> Result<VerificationReport> {
    budget.check(telescoping_cost(nu.modulus(), r))?;
    let w = represent(nu, r)?;
    let sup = w.sup();
    let mut report = VerificationReport::new("progression-telescoping");
    let mut sum = KahanSum::new();
    for j in 0..=r {
        let swapped = w.swap_vertices(0, j)?;
        let caps = (1..=r)
            .map(|i| {
                let original = if i == j { 0 } else { i };
                if original > j {
                    Cap::Nu
                } else {
                    Cap::One
                }
            })
            .collect();
        let inst = SlfSingleInstance::at_caps(swapped, caps)?;
        debug_assert!(slf_single_cost(&inst) <= telescoping_cost(nu.modulus(), r));
        let term = slf_single_lhs(&inst, Budget::UNLIMITED)?;
        let norm = box_norm_brute(&w.centered(j), Budget::UNLIMITED)?;
        report
            .measure(format!("term[{j}]"), term)
            .measure(format!("reference[{j}]"), norm * sup.powf(r as f64 / 2.0));
        sum.add(term);
    }
    report.push(Check::eq("telescoping", sum.total(), lambda - 1.0, 1e-9));
    Ok(report)
}

/// Generates `nu`, computes `Lambda_{r+1}(nu)`, the hypothesis ratios and the
/// telescoped decomposition of `Lambda - 1`, and flags the measure as
/// non-pseudorandom when `|Lambda - 1|` exceeds `cfg.threshold`.
pub fn relsz_experiment(cfg: &ExperimentConfig, budget: Budget) -> Result<ExperimentOutcome> {
    let nu = generate(&cfg.spec)?;
    let r = cfg.r;
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    let ap = ApReport::for_measure(&nu, r + 1, budget)?;
    let hypothesis = hypothesis_ratio(&nu, r)?;
    let deviation = (ap.density - 1.0).abs();
    let mut report = lambda_telescoping(&nu, r, ap.density, budget)?;
    report.name = "experiment".into();
    report
        .measure("density", ap.density)
        .measure("deviation", deviation)
        .measure("norm", hypothesis.norm)
        .measure("ratio", hypothesis.ratio)
        .measure("half_ratio", hypothesis.half_ratio);
    let pseudorandom = deviation <= cfg.threshold;
    if !pseudorandom {
        report.note(format!("non-pseudorandom: |Lambda - 1| = {deviation:.6} exceeds {}", cfg.threshold));
    }
    Ok(ExperimentOutcome { ap, hypothesis, deviation, pseudorandom, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmeasure::GeneratorKind;

    const B: Budget = Budget::DEFAULT;

    #[test]
    fn constant_density_is_one() {
        let one = CyclicFn::constant(9, 1.0).unwrap();
        assert_eq!(ap_density(&[&one, &one, &one], B).unwrap(), 1.0);
    }

    #[test]
    fn singleton_density() {
        let delta = CyclicFn::from_fn(7, |x| if x == 0 { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(ap_density(&[&delta; 3], B).unwrap(), 1.0 / 49.0);
        let rep = ApReport::for_indicator(&[0], 7, 3, B).unwrap();
        assert_eq!((rep.trivial_count, rep.nontrivial_count), (1, 0));
    }

    #[test]
    fn indicator_counts_round_trip() {
        let members = [0, 1, 2, 5, 7, 8];
        let rep = ApReport::for_indicator(&members, 11, 3, B).unwrap();
        let total = rep.density * 121.0;
        assert_eq!(total.round(), total);
        assert_eq!(total as u64, rep.trivial_count + rep.nontrivial_count);
    }

    #[test]
    fn modulus_mismatch() {
        let a = CyclicFn::constant(5, 1.0).unwrap();
        let b = CyclicFn::constant(6, 1.0).unwrap();
        assert!(matches!(ap_density(&[&a, &b], B), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn hypothesis_of_uniform_is_zero() {
        let h = hypothesis_ratio(&Measure::uniform(31).unwrap(), 2).unwrap();
        assert_eq!((h.ratio, h.half_ratio), (0.0, 0.0));
    }

    #[test]
    fn experiment_constant_and_interval() {
        let cfg = ExperimentConfig { r: 2, spec: GeneratorSpec::new(GeneratorKind::Constant, 13, 1.0, 0), threshold: 0.25 };
        let out = relsz_experiment(&cfg, B).unwrap();
        assert_eq!(out.ap.density, 1.0);
        assert_eq!(out.deviation, 0.0);
        assert!(out.pseudorandom && out.report.passed());

        let cfg = ExperimentConfig { spec: GeneratorSpec::new(GeneratorKind::Interval, 101, 0.3, 0), ..cfg };
        let out = relsz_experiment(&cfg, B).unwrap();
        assert!(!out.pseudorandom);
        assert!(out.report.passed(), "{:?}", out.report.checks);
    }

    #[test]
    fn csv_row_shape() {
        let rep = ApReport::for_indicator(&[0, 1], 5, 3, B).unwrap();
        assert_eq!(rep.csv_row().split(',').count(), ApReport::csv_header().split(',').count());
    }
}
