//! The complete `r`-uniform hypergraph on `J = {0, ..., r}` and weighted
//! hypergraphs on it, including the norm-preserving representation of a
//! measure on Z_N.

use serde::{Deserialize, Serialize};

use crate::cyclic::{CyclicFn, Measure};
use crate::error::{Error, Result};
use crate::gowersnorm::EdgeFn;

/// Vertices `J = {0, ..., r}` with vertex sets `V_j` of size `dims[j]`, and
/// edges `e_j = J \ {j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphSystem {
    r: usize,
    dims: Vec<usize>,
}

impl HypergraphSystem {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::ShapeMismatch("need at least two vertices (r >= 1)".into()));
        }
        if dims.contains(&0) {
            return Err(Error::ShapeMismatch("vertex sets must be nonempty".into()));
        }
        Ok(HypergraphSystem { r: dims.len() - 1, dims })
    }

    /// Every `V_j = Z_N`.
    pub fn cyclic(r: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; r + 1])
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.r
    }

    /// `e_j = J \ {j}`, ascending.
    pub fn edge(&self, j: usize) -> Vec<usize> {
        self.vertices().filter(|&i| i != j).collect()
    }

    pub fn edge_dims(&self, j: usize) -> Vec<usize> {
        self.edge(j).iter().map(|&i| self.dims[i]).collect()
    }
}

/// One nonnegative [`EdgeFn`] per edge `e_j`, indexed by `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedHypergraph {
    system: HypergraphSystem,
    weights: Vec<EdgeFn>,
    sup: f64,
    /// Modulus when built by [`represent`].
    represented: Option<usize>,
}

impl WeightedHypergraph {
    pub fn new(system: HypergraphSystem, weights: Vec<EdgeFn>) -> Result<Self> {
        if weights.len() != system.r + 1 {
            return Err(Error::ShapeMismatch(format!(
                "expected {} edge weights, got {}",
                system.r + 1,
                weights.len()
            )));
        }
        for (j, w) in weights.iter().enumerate() {
            if w.edge() != system.edge(j).as_slice() || w.dims() != system.edge_dims(j).as_slice() {
                return Err(Error::ShapeMismatch(format!("weight {j} does not live on e_{j}")));
            }
            if let Some(index) = w.values().iter().position(|&v| v < 0.0) {
                return Err(Error::NegativeValue { index, value: w.values()[index] });
            }
        }
        let sup = weights.iter().map(EdgeFn::sup).fold(0.0f64, f64::max);
        if sup <= 0.0 {
            return Err(Error::ZeroMeasure);
        }
        Ok(WeightedHypergraph { system, weights, sup, represented: None })
    }

    pub fn constant(system: HypergraphSystem, c: f64) -> Result<Self> {
        let weights = system
            .vertices()
            .map(|j| EdgeFn::constant(system.edge(j), system.edge_dims(j), c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(system, weights)
    }

    pub fn system(&self) -> &HypergraphSystem {
        &self.system
    }

    pub fn r(&self) -> usize {
        self.system.r
    }

    /// `nu_{e_j}`.
    pub fn weight(&self, j: usize) -> &EdgeFn {
        &self.weights[j]
    }

    pub fn weights(&self) -> &[EdgeFn] {
        &self.weights
    }

    /// `nu_{e_j} - 1`.
    pub fn centered(&self, j: usize) -> EdgeFn {
        self.weights[j].sub_constant(1.0)
    }

    /// Largest weight value, without the `< 1` warning of [`sup_norm`].
    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn is_representation(&self) -> bool {
        self.represented.is_some()
    }

    /// Relabels vertices `a <-> b`; the weight on `e_a` moves to `e_b`.
    pub fn swap_vertices(&self, a: usize, b: usize) -> Result<Self> {
        let r = self.system.r;
        if a > r || b > r {
            return Err(Error::InvalidVertex { vertex: a.max(b), reason: "not in J" });
        }
        let sigma = |v: usize| if v == a { b } else if v == b { a } else { v };
        let mut dims = self.system.dims.clone();
        dims.swap(a, b);
        let system = HypergraphSystem::new(dims)?;
        let weights = (0..=r)
            .map(|j| self.weights[sigma(j)].relabel(sigma))
            .collect::<Result<Vec<_>>>()?;
        Self::new(system, weights)
    }
}

/// `||nu||_inf`: the largest value taken by any `nu_e`.
pub fn sup_norm(w: &WeightedHypergraph) -> f64 {
    if w.sup < 1.0 {
        log::warn!("weighted hypergraph has sup {} < 1", w.sup);
    }
    w.sup
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficient of `x_i` in the linear form attached to `e_j`: `(j - i) mod N`.
pub fn form_coefficient(j: usize, i: usize, n: usize) -> usize {
    (j as i64 - i as i64).rem_euclid(n as i64) as usize
}

/// The linear form `psi_j(x_{e_j}) = sum_{i != j} (j - i) x_i mod N`, with
/// `x` the full point of `Z_N^{r+1}`.
pub fn psi(j: usize, x: &[usize], n: usize) -> usize {
    x.iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(i, &xi)| form_coefficient(j, i, n) * xi % n)
        .sum::<usize>()
        % n
}

/// Represents `nu` as the weighted hypergraph `nu_{e_j}(x_{e_j}) = nu(psi_j(x_{e_j}))`
/// on `V_j = Z_N`. The values `psi_0, ..., psi_r` at any point form an
/// arithmetic progression with difference `sum_i x_i`.
pub fn represent(nu: &Measure, r: usize) -> Result<WeightedHypergraph> {
    let n = nu.modulus();
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if !is_prime(n) {
        return Err(Error::CompositeModulus(n));
    }
    if n <= r {
        return Err(Error::ModulusTooSmall { n, r });
    }
    let system = HypergraphSystem::cyclic(r, n)?;
    let values = nu.values();
    let weights = system
        .vertices()
        .map(|j| {
            let edge = system.edge(j);
            let coeffs: Vec<usize> = edge.iter().map(|&i| form_coefficient(j, i, n)).collect();
            EdgeFn::from_fn(edge, system.edge_dims(j), |x| {
                let y = x.iter().zip(&coeffs).map(|(xi, c)| xi * c % n).sum::<usize>() % n;
                values[y]
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = WeightedHypergraph::new(system, weights)?;
    w.represented = Some(n);
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApValues {
    /// `y_j = psi_j(x_{e_j})`.
    pub y: Vec<usize>,
    /// Common difference `sum_i x_i mod N`.
    pub d: usize,
}

/// Evaluates every linear form at `x` and confirms they form a progression.
pub fn ap_values(x: &[usize], w: &WeightedHypergraph) -> Result<ApValues> {
    let n = w.represented.ok_or(Error::NotRepresentation)?;
    let r = w.r();
    if x.len() != r + 1 {
        return Err(Error::ShapeMismatch(format!("point has {} coordinates, expected {}", x.len(), r + 1)));
    }
    if let Some(&bad) = x.iter().find(|&&xi| xi >= n) {
        return Err(Error::OutOfRange { value: bad as u64, modulus: n });
    }
    let y: Vec<usize> = (0..=r).map(|j| psi(j, x, n)).collect();
    let d = x.iter().sum::<usize>() % n;
    for pair in y.windows(2) {
        let step = (pair[1] + n - pair[0]) % n;
        if step != d {
            return Err(Error::NumericalInconsistency { context: "ap_values", value: step as f64 });
        }
    }
    Ok(ApValues { y, d })
}

#[derive(Serialize, Deserialize)]
struct EdgeEntry {
    edge: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct WeightedHypergraphRepr {
    r: usize,
    dims: Vec<usize>,
    edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    represented: Option<usize>,
}

impl Serialize for WeightedHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightedHypergraphRepr {
            r: self.system.r,
            dims: self.system.dims.clone(),
            edges: self
                .weights
                .iter()
                .map(|w| EdgeEntry { edge: w.edge().to_vec(), values: w.values().to_vec() })
                .collect(),
            represented: self.represented,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = WeightedHypergraphRepr::deserialize(d)?;
        let system = HypergraphSystem::new(repr.dims).map_err(D::Error::custom)?;
        if system.r != repr.r {
            return Err(D::Error::custom(format!("r = {} disagrees with {} dims", repr.r, system.r + 1)));
        }
        let mut slots: Vec<Option<EdgeFn>> = vec![None; system.r + 1];
        for entry in repr.edges {
            let j = (0..=system.r)
                .find(|&j| system.edge(j) == entry.edge)
                .ok_or_else(|| D::Error::custom(format!("{:?} is not an edge of the system", entry.edge)))?;
            let f = EdgeFn::new(entry.edge, system.edge_dims(j), entry.values).map_err(D::Error::custom)?;
            slots[j] = Some(f);
        }
        let weights = slots
            .into_iter()
            .enumerate()
            .map(|(j, s)| s.ok_or_else(|| D::Error::custom(format!("missing weight for e_{j}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let w = WeightedHypergraph::new(system, weights).map_err(D::Error::custom)?;
        match repr.represented {
            None => Ok(w),
            Some(n) => {
                let rebuilt = rerepresent(&w, n).map_err(D::Error::custom)?;
                if rebuilt.weights != w.weights {
                    return Err(D::Error::custom(format!("weights are not the representation of a measure on Z_{n}")));
                }
                Ok(rebuilt)
            }
        }
    }
}

/// Reads `nu(y) = nu_{e_0}(-y, 0, ..., 0)` back off `w` and represents it again.
fn rerepresent(w: &WeightedHypergraph, n: usize) -> Result<WeightedHypergraph> {
    let r = w.r();
    if r == 0 {
        return Err(Error::ZeroOrder);
    }
    if w.system.dims.iter().any(|&d| d != n) {
        return Err(Error::ShapeMismatch(format!("represented weights must live on Z_{n}")));
    }
    let stride = n.pow(r as u32 - 1);
    let base = w.weights[0].values();
    let values = (0..n).map(|y| base[(n - y) % n * stride]).collect();
    represent(&Measure::new(CyclicFn::new(values)?)?, r)
}
