//! Enumeration of product expectations over vertex copies.
//!
//! A quantity is described by a [`Layout`], which says how many independent
//! copies of each vertex variable are free, and a list of [`Factor`]s, each an
//! edge function evaluated at one chosen copy per vertex. Free variables are
//! enumerated copies-of-vertex-0 first, then vertices ascending, copy 0
//! before copy 1, last slot fastest.

use crate::budget::Budget;
use crate::error::Result;
use crate::gowersnorm::{advance, EdgeFn};
use crate::sum::KahanSum;

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    /// `first_slot[v]`, or `None` when vertex `v` is not free.
    first_slot: Vec<Option<usize>>,
    copies: Vec<usize>,
    sizes: Vec<usize>,
}

impl Layout {
    /// `copies[v]` independent copies of `x_v`, each ranging over `dims[v]`.
    pub fn new(dims: &[usize], copies: &[usize]) -> Self {
        let mut first_slot = Vec::with_capacity(dims.len());
        let mut sizes = Vec::new();
        for (&d, &c) in dims.iter().zip(copies) {
            first_slot.push((c > 0).then_some(sizes.len()));
            sizes.extend(std::iter::repeat_n(d, c));
        }
        Layout { first_slot, copies: copies.to_vec(), sizes }
    }

    pub fn slot(&self, vertex: usize, copy: usize) -> usize {
        debug_assert!(copy < self.copies[vertex], "vertex {vertex} has no copy {copy}");
        self.first_slot[vertex].expect("vertex is not free") + copy
    }

    pub fn assignments(&self) -> u128 {
        self.sizes.iter().map(|&s| s as u128).product()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Factor<'a> {
    values: &'a [f64],
    shift: f64,
    terms: Vec<(usize, usize)>,
}

impl<'a> Factor<'a> {
    /// `g(x_e)` with the copy of each vertex chosen by `copy_of`.
    pub fn raw(layout: &Layout, g: &'a EdgeFn, copy_of: impl Fn(usize) -> usize) -> Self {
        Self::build(layout, g, 0.0, copy_of)
    }

    /// `g(x_e) - 1`.
    pub fn centered(layout: &Layout, g: &'a EdgeFn, copy_of: impl Fn(usize) -> usize) -> Self {
        Self::build(layout, g, 1.0, copy_of)
    }

    fn build(layout: &Layout, g: &'a EdgeFn, shift: f64, copy_of: impl Fn(usize) -> usize) -> Self {
        let terms = g
            .edge()
            .iter()
            .zip(g.strides())
            .map(|(&v, stride)| (layout.slot(v, copy_of(v)), stride))
            .collect();
        Factor { values: g.values(), shift, terms }
    }
}

/// First and second moments of the product over all assignments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Moments {
    pub mean: f64,
    pub mean_sq: f64,
}

pub(crate) fn cost(layout: &Layout, factors: usize) -> u128 {
    layout.assignments().saturating_mul(factors.max(1) as u128)
}

pub(crate) fn moments(layout: &Layout, factors: &[Factor], budget: Budget) -> Result<Moments> {
    budget.check(cost(layout, factors.len()))?;
    let total = layout.assignments() as usize;
    let mut slots = vec![0usize; layout.sizes.len()];
    let mut first = KahanSum::new();
    let mut second = KahanSum::new();
    for _ in 0..total {
        let mut prod = 1.0;
        for f in factors {
            let idx: usize = f.terms.iter().map(|&(s, st)| slots[s] * st).sum();
            prod *= f.values[idx] - f.shift;
        }
        first.add(prod);
        second.add(prod * prod);
        advance(&mut slots, &layout.sizes);
    }
    Ok(Moments { mean: first.total() / total as f64, mean_sq: second.total() / total as f64 })
}

pub(crate) fn expectation(layout: &Layout, factors: &[Factor], budget: Budget) -> Result<f64> {
    Ok(moments(layout, factors, budget)?.mean)
}
