use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real function on `V_e = prod_{j in e} V_j`, stored as a dense row-major
/// tensor whose axes follow the (ascending) vertex labels of `e`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeFn {
    edge: Vec<usize>,
    dims: Vec<usize>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct EdgeFnRepr {
    edge: Vec<usize>,
    dims: Vec<usize>,
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for EdgeFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = EdgeFnRepr::deserialize(d)?;
        EdgeFn::new(r.edge, r.dims, r.values).map_err(serde::de::Error::custom)
    }
}

impl EdgeFn {
    pub fn new(edge: Vec<usize>, dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if !edge.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::ShapeMismatch(format!("edge {edge:?} must be strictly ascending")));
        }
        if edge.len() != dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "edge has {} vertices but {} dims were given",
                edge.len(),
                dims.len()
            )));
        }
        if dims.contains(&0) {
            return Err(Error::ShapeMismatch("vertex sets must be nonempty".into()));
        }
        let size: usize = dims.iter().product();
        if values.len() != size {
            return Err(Error::LengthMismatch { expected: size, actual: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(EdgeFn { edge, dims, values })
    }

    /// Builds `g` from a closure over the coordinates `x_e` (in edge order).
    pub fn from_fn(edge: Vec<usize>, dims: Vec<usize>, f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let size: usize = dims.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..size {
            values.push(f(&idx));
            advance(&mut idx, &dims);
        }
        Self::new(edge, dims, values)
    }

    pub fn constant(edge: Vec<usize>, dims: Vec<usize>, c: f64) -> Result<Self> {
        let size = dims.iter().product();
        Self::new(edge, dims, vec![c; size])
    }

    pub fn edge(&self) -> &[usize] {
        &self.edge
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn arity(&self) -> usize {
        self.edge.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Row-major strides, last axis fastest.
    pub fn strides(&self) -> Vec<usize> {
        strides(&self.dims)
    }

    pub fn at(&self, coords: &[usize]) -> f64 {
        let idx = coords.iter().zip(self.strides()).map(|(c, s)| c * s).sum::<usize>();
        self.values[idx]
    }

    pub fn same_shape(&self, other: &EdgeFn) -> bool {
        self.edge == other.edge && self.dims == other.dims
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.edge.clone(), self.dims.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn sub_constant(&self, c: f64) -> Self {
        EdgeFn {
            edge: self.edge.clone(),
            dims: self.dims.clone(),
            values: self.values.iter().map(|v| v - c).collect(),
        }
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Renames every vertex through `map` and transposes axes so that the
    /// new labels are ascending again.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<Self> {
        let mut order: Vec<(usize, usize)> = self.edge.iter().enumerate().map(|(axis, &v)| (map(v), axis)).collect();
        order.sort_unstable();
        let new_edge: Vec<usize> = order.iter().map(|&(v, _)| v).collect();
        let new_dims: Vec<usize> = order.iter().map(|&(_, a)| self.dims[a]).collect();
        let old_strides = self.strides();
        let mut old_coords = vec![0usize; self.arity()];
        let values = {
            let mut out = Vec::with_capacity(self.len());
            let mut idx = vec![0usize; new_dims.len()];
            for _ in 0..self.len() {
                for (k, &(_, axis)) in order.iter().enumerate() {
                    old_coords[axis] = idx[k];
                }
                let flat: usize = old_coords.iter().zip(&old_strides).map(|(c, s)| c * s).sum();
                out.push(self.values[flat]);
                advance(&mut idx, &new_dims);
            }
            out
        };
        Self::new(new_edge, new_dims, values)
    }
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Row-major odometer step; wraps to all zeros after the last index.
#[inline]
pub(crate) fn advance(idx: &mut [usize], dims: &[usize]) {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < dims[i] {
            return;
        }
        idx[i] = 0;
    }
}

/// A vertex `omega in {0,1}^e` of the combinatorial cube, as a bitmask:
/// bit `i` selects the copy used for the `i`-th vertex of `e` (ascending).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CubeVertex(pub u32);

impl CubeVertex {
    #[inline]
    pub fn bit(self, i: usize) -> usize {
        ((self.0 >> i) & 1) as usize
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// All `2^arity` vertices in mask order.
    pub fn all(arity: usize) -> impl Iterator<Item = CubeVertex> {
        (0..1u32 << arity).map(CubeVertex)
    }
}
