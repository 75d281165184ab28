//! Cube-product expectations `E[prod_omega nu_e(x_e^{(omega)})^{n_omega}]`
//! and their centered counterparts.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gowersnorm::{box_norm_brute, cube_average, cube_cost, CubeVertex, EdgeFn};
use crate::report::{Check, VerificationReport, INEQUALITY_SLACK};

/// Exponents `n_omega in {0,1}` for every `omega in {0,1}^e`, indexed by
/// [`CubeVertex`] mask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubePattern {
    edge: Vec<usize>,
    exponents: Vec<u8>,
}

impl CubePattern {
    pub fn new(edge: Vec<usize>, exponents: Vec<u8>) -> Result<Self> {
        if exponents.len() != 1 << edge.len() {
            return Err(Error::ShapeMismatch(format!(
                "pattern on |e| = {} needs {} exponents, got {}",
                edge.len(),
                1 << edge.len(),
                exponents.len()
            )));
        }
        if exponents.iter().any(|&n| n > 1) {
            return Err(Error::ShapeMismatch("exponents must be 0 or 1".into()));
        }
        Ok(CubePattern { edge, exponents })
    }

    pub fn full(edge: Vec<usize>) -> Self {
        let len = 1 << edge.len();
        CubePattern { edge, exponents: vec![1; len] }
    }

    pub fn empty(edge: Vec<usize>) -> Self {
        let len = 1 << edge.len();
        CubePattern { edge, exponents: vec![0; len] }
    }

    /// Pattern with `n_omega = 1` exactly when bit `omega` of `support` is set.
    pub fn from_support(edge: Vec<usize>, support: u64) -> Self {
        let len = 1 << edge.len();
        let exponents = (0..len).map(|w| ((support >> w) & 1) as u8).collect();
        CubePattern { edge, exponents }
    }

    /// Parses a string of `0`/`1` characters; character `w` is `n_omega` for mask `w`.
    pub fn parse(edge: Vec<usize>, bits: &str) -> Result<Self> {
        let exponents = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::ShapeMismatch(format!("pattern character {c:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(edge, exponents)
    }

    /// Every pattern on an edge of this arity (`2^{2^|e|}` of them).
    pub fn all(edge: Vec<usize>) -> impl Iterator<Item = CubePattern> {
        let count = 1u64 << (1 << edge.len());
        (0..count).map(move |s| CubePattern::from_support(edge.clone(), s))
    }

    pub fn edge(&self) -> &[usize] {
        &self.edge
    }

    pub fn exponent(&self, w: CubeVertex) -> u8 {
        self.exponents[w.0 as usize]
    }

    pub fn support(&self) -> Vec<CubeVertex> {
        self.exponents.iter().enumerate().filter(|(_, &n)| n == 1).map(|(w, _)| CubeVertex(w as u32)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.iter().all(|&n| n == 0)
    }

    fn check_on(&self, g: &EdgeFn) -> Result<()> {
        if self.edge != g.edge() {
            return Err(Error::ShapeMismatch(format!("pattern edge {:?} vs function edge {:?}", self.edge, g.edge())));
        }
        Ok(())
    }
}

impl std::fmt::Display for CubePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.exponents.iter().try_for_each(|n| write!(f, "{n}"))
    }
}

/// `E[prod_omega nu_e(x_e^{(omega)})^{n_omega}]`.
pub fn cube_expectation(nu_e: &EdgeFn, pat: &CubePattern, budget: Budget) -> Result<f64> {
    pat.check_on(nu_e)?;
    let factors: Vec<Option<&[f64]>> =
        pat.exponents.iter().map(|&n| (n == 1).then_some(nu_e.values())).collect();
    cube_average(nu_e.dims(), &factors, budget)
}

/// `E[prod_omega (nu_e(x_e^{(omega)}) - 1)^{n_omega}]` for a nonzero pattern.
pub fn cube_centered_expectation(nu_e: &EdgeFn, pat: &CubePattern, budget: Budget) -> Result<f64> {
    pat.check_on(nu_e)?;
    if pat.is_zero() {
        return Err(Error::AllZeroPattern);
    }
    centered_unchecked(&nu_e.sub_constant(1.0), pat, budget)
}

fn centered_unchecked(centered: &EdgeFn, pat: &CubePattern, budget: Budget) -> Result<f64> {
    let factors: Vec<Option<&[f64]>> =
        pat.exponents.iter().map(|&n| (n == 1).then_some(centered.values())).collect();
    cube_average(centered.dims(), &factors, budget)
}

/// Checks `|E[prod (nu_e - 1)^{n_omega}]| <= ||nu_e - 1||_{U^e}^s` with
/// `s = #{omega : n_omega = 1}`; the missing factors are the constant 1,
/// whose box norm is 1.
pub fn cube_centered_bound(nu_e: &EdgeFn, pat: &CubePattern, budget: Budget) -> Result<VerificationReport> {
    let value = cube_centered_expectation(nu_e, pat, budget)?;
    let norm = box_norm_brute(&nu_e.sub_constant(1.0), budget)?;
    let s = pat.support().len() as i32;
    let mut report = VerificationReport::new("cube-centered-bound");
    report.measure("value", value).measure("norm", norm);
    report.push(Check::le("centered-gcs", value.abs(), norm.powi(s), INEQUALITY_SLACK));
    Ok(report)
}

/// Checks that expanding each `nu = (nu - 1) + 1` recovers the raw
/// expectation: `E[prod nu^{n}] = sum_{T subset of supp} E[prod_{omega in T} (nu - 1)]`,
/// the empty subset contributing 1.
pub fn binomial_expansion_identity(nu_e: &EdgeFn, pat: &CubePattern, budget: Budget) -> Result<VerificationReport> {
    pat.check_on(nu_e)?;
    let support = pat.support();
    let terms = 1u128 << support.len();
    budget.check(cube_cost(nu_e.dims()).saturating_mul(terms + 1))?;

    let raw = cube_expectation(nu_e, pat, Budget::UNLIMITED)?;
    let centered = nu_e.sub_constant(1.0);
    let mut expansion = crate::sum::KahanSum::new();
    expansion.add(1.0);
    for t in 1..terms as u64 {
        let mut sub = CubePattern::empty(pat.edge.clone());
        for (b, w) in support.iter().enumerate() {
            if (t >> b) & 1 == 1 {
                sub.exponents[w.0 as usize] = 1;
            }
        }
        expansion.add(centered_unchecked(&centered, &sub, Budget::UNLIMITED)?);
    }
    let mut report = VerificationReport::new("binomial-expansion");
    report.measure("subset_terms", terms as f64);
    report.push(Check::eq("expansion", expansion.total(), raw, 1e-9));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Budget = Budget::DEFAULT;

    fn sample() -> EdgeFn {
        EdgeFn::from_fn(vec![1, 2], vec![3, 3], |x| ((x[0] * 5 + x[1] * 3) % 4) as f64 * 0.6).unwrap()
    }

    #[test]
    fn ones_give_one() {
        let g = EdgeFn::constant(vec![1, 2], vec![4, 4], 1.0).unwrap();
        for pat in CubePattern::all(vec![1, 2]) {
            assert_eq!(cube_expectation(&g, &pat, B).unwrap(), 1.0);
            if !pat.is_zero() {
                assert_eq!(cube_centered_expectation(&g, &pat, B).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn empty_pattern() {
        let g = sample();
        assert_eq!(cube_expectation(&g, &CubePattern::empty(vec![1, 2]), B).unwrap(), 1.0);
        assert!(matches!(
            cube_centered_expectation(&g, &CubePattern::empty(vec![1, 2]), B),
            Err(Error::AllZeroPattern)
        ));
    }

    #[test]
    fn single_exponent_is_marginal_mean() {
        let g = sample();
        let mean = crate::sum::mean(g.values());
        for w in 0..4 {
            let pat = CubePattern::from_support(vec![1, 2], 1 << w);
            let c = cube_centered_expectation(&g, &pat, B).unwrap();
            assert!((c - (mean - 1.0)).abs() < 1e-14);
            let rep = binomial_expansion_identity(&g, &pat, B).unwrap();
            assert!(rep.passed());
        }
    }

    #[test]
    fn full_centered_is_box_power() {
        let g = sample();
        let c = cube_centered_expectation(&g, &CubePattern::full(vec![1, 2]), B).unwrap();
        let norm = box_norm_brute(&g.sub_constant(1.0), B).unwrap();
        assert!((c - norm.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn expansion_over_all_patterns() {
        let g = sample();
        for pat in CubePattern::all(vec![1, 2]) {
            let rep = binomial_expansion_identity(&g, &pat, B).unwrap();
            assert!(rep.passed(), "{pat:?}: {:?}", rep.checks);
            if !pat.is_zero() {
                assert!(cube_centered_bound(&g, &pat, B).unwrap().passed());
            }
        }
    }

    #[test]
    fn parse_and_validate() {
        let p = CubePattern::parse(vec![0, 1], "1001").unwrap();
        assert_eq!(p.support(), vec![CubeVertex(0), CubeVertex(3)]);
        assert!(CubePattern::parse(vec![0, 1], "101").is_err());
        assert!(CubePattern::parse(vec![0, 1], "10x1").is_err());
        let g = sample();
        assert!(cube_expectation(&g, &p, B).is_err());
    }
}
