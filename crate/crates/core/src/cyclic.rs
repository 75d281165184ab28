//! Real functions on Z_N, nonnegative measures, and the normalized DFT.

use std::collections::BTreeSet;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{self, KahanSum};

/// A real-valued function on Z_N, stored densely as `values[x] = f(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicFn {
    #[serde(rename = "n")]
    modulus: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct CyclicFnRepr {
    n: usize,
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for CyclicFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CyclicFnRepr::deserialize(d)?;
        CyclicFn::with_modulus(repr.n, repr.values).map_err(serde::de::Error::custom)
    }
}

impl CyclicFn {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_modulus(values.len(), values)
    }

    pub fn with_modulus(modulus: usize, values: Vec<f64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if values.len() != modulus {
            return Err(Error::LengthMismatch { expected: modulus, actual: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(CyclicFn { modulus, values })
    }

    pub fn constant(modulus: usize, c: f64) -> Result<Self> {
        Self::with_modulus(modulus, vec![c; modulus])
    }

    pub fn from_fn(modulus: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::with_modulus(modulus, (0..modulus).map(f).collect())
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `f(x mod N)`.
    #[inline]
    pub fn at(&self, x: usize) -> f64 {
        self.values[x % self.modulus]
    }

    pub fn mean(&self) -> f64 {
        sum::mean(&self.values)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::with_modulus(self.modulus, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    /// `x -> f(x + a)`.
    pub fn translate(&self, a: usize) -> Self {
        let n = self.modulus;
        CyclicFn { modulus: n, values: (0..n).map(|x| self.values[(x + a) % n]).collect() }
    }

    pub fn sub_constant(&self, c: f64) -> Self {
        CyclicFn { modulus: self.modulus, values: self.values.iter().map(|v| v - c).collect() }
    }
}

/// `x -> f(x) * f(x + h mod N)`.
pub fn difference_fn(f: &CyclicFn, h: usize) -> Result<CyclicFn> {
    let n = f.modulus;
    if h >= n {
        return Err(Error::OutOfRange { value: h as u64, modulus: n });
    }
    Ok(difference_unchecked(f, h))
}

pub(crate) fn difference_unchecked(f: &CyclicFn, h: usize) -> CyclicFn {
    let n = f.modulus;
    let v = &f.values;
    let values = (0..n).map(|x| v[x] * v[(x + h) % n]).collect();
    CyclicFn { modulus: n, values }
}

/// A nonnegative function on Z_N with its sup norm and `p = 1 / sup`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    func: CyclicFn,
    sup: f64,
    p: f64,
    support_size: Option<usize>,
}

impl Measure {
    pub fn new(func: CyclicFn) -> Result<Self> {
        if let Some((index, &value)) = func.values.iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativeValue { index, value });
        }
        let sup = func.values.iter().fold(0.0f64, |m, &v| m.max(v));
        if sup <= 0.0 {
            return Err(Error::ZeroMeasure);
        }
        if sup < 1.0 {
            log::warn!("measure has sup {sup} < 1; p = 1/sup exceeds 1");
        }
        Ok(Measure { func, sup, p: 1.0 / sup, support_size: None })
    }

    /// `nu = (N/|S|) 1_S`, the normalized indicator of `S`.
    pub fn from_set(members: &[usize], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= n) {
            return Err(Error::OutOfRange { value: bad as u64, modulus: n });
        }
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let weight = n as f64 / set.len() as f64;
        let mut values = vec![0.0; n];
        for &m in &set {
            values[m] = weight;
        }
        let func = CyclicFn { modulus: n, values };
        Ok(Measure { func, sup: weight, p: set.len() as f64 / n as f64, support_size: Some(set.len()) })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_set(&(0..n).collect::<Vec<_>>(), n)
    }

    pub fn func(&self) -> &CyclicFn {
        &self.func
    }

    pub fn modulus(&self) -> usize {
        self.func.modulus
    }

    pub fn values(&self) -> &[f64] {
        &self.func.values
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `nu - 1`.
    pub fn centered(&self) -> CyclicFn {
        self.func.sub_constant(1.0)
    }

    /// `|S|` for measures built from a set.
    pub fn support_size(&self) -> Option<usize> {
        self.support_size
    }

    /// Support of the measure, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.modulus()).filter(|&x| self.func.values[x] > 0.0).collect()
    }

    /// `E nu` as a reduced fraction, computed in integer arithmetic; only
    /// available for set-built measures, whose weight is the rational `N/|S|`.
    pub fn exact_mean(&self) -> Option<(u128, u128)> {
        let size = self.support_size? as u128;
        let n = self.modulus() as u128;
        // sum_x nu(x) = |S| * (N / |S|), then divide by N
        let (num, den) = (size * n, size * n);
        let g = gcd(num, den);
        Some((num / g, den / g))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A set of residues mod N, serialized as `{"n": N, "members": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueSet {
    pub n: usize,
    pub members: Vec<usize>,
}

impl ResidueSet {
    pub fn to_measure(&self) -> Result<Measure> {
        Measure::from_set(&self.members, self.n)
    }
}

/// Normalized Fourier coefficients `f^(xi) = E_x f(x) e(-x xi / N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    modulus: usize,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `sum_xi |f^(xi)|^2`, which equals `E f^2`.
    pub fn energy(&self) -> f64 {
        sum::sum(self.coefficients.iter().map(|c| c.norm_sqr()))
    }

    /// `sum_xi |f^(xi)|^4`, which equals `||f||_{U^2}^4` for real `f`.
    pub fn fourth_moment(&self) -> f64 {
        sum::sum(self.coefficients.iter().map(|c| c.norm_sqr() * c.norm_sqr()))
    }
}

pub fn dft(f: &CyclicFn) -> Spectrum {
    let fft = FftPlanner::new().plan_fft_forward(f.modulus);
    dft_with(&fft, f)
}

pub(crate) fn dft_with(fft: &Arc<dyn Fft<f64>>, f: &CyclicFn) -> Spectrum {
    let n = f.modulus;
    let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Spectrum { modulus: n, coefficients: buf }
}

/// `f(x) = sum_xi f^(xi) e(x xi / N)`, keeping the real part.
pub fn inverse_dft(s: &Spectrum) -> Result<CyclicFn> {
    let fft = FftPlanner::new().plan_fft_inverse(s.modulus);
    let mut buf = s.coefficients.clone();
    fft.process(&mut buf);
    CyclicFn::with_modulus(s.modulus, buf.iter().map(|c| c.re).collect())
}

/// Direct `O(N^2)` evaluation of the normalized transform.
pub fn dft_naive(f: &CyclicFn) -> Spectrum {
    let n = f.modulus;
    let coefficients = (0..n)
        .map(|xi| {
            let mut re = KahanSum::new();
            let mut im = KahanSum::new();
            for (x, &v) in f.values.iter().enumerate() {
                let theta = -2.0 * std::f64::consts::PI * ((x * xi) % n) as f64 / n as f64;
                re.add(v * theta.cos());
                im.add(v * theta.sin());
            }
            Complex64::new(re.total() / n as f64, im.total() / n as f64)
        })
        .collect();
    Spectrum { modulus: n, coefficients }
}
