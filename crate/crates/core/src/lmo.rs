//! Linear minimization over the cone/slice intersection.
//!
//! The minimum of `zᵀg` over the slice part of the cone is attained at a
//! lifted generator, so the oracle is a single `O(mn)` scan:
//! `min over ẑᵀy > 0 of (ẑᵀẑ)(yᵀg)/(ẑᵀy)`. Only the winner is lifted.

use rayon::prelude::*;

use crate::error::{check_dim, Result};
use crate::instance::Instance;
use crate::vector::{dot, scaled};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LmoResult<T> {
    pub generator_index: usize,
    pub lambda: T,
    /// `lambda · generators[generator_index]`, on the slice.
    pub point: Vec<T>,
    /// `pointᵀ gradient`.
    pub objective: T,
}

/// Oracle over an explicit generator list with `ẑᵀy` cached per generator.
#[derive(Debug, Clone)]
pub struct LinearOracle<'a, T> {
    instance: &'a Instance<T>,
    /// `(index, ẑᵀy)` for every generator with `ẑᵀy > 0`, in index order.
    usable: Vec<(usize, T)>,
}

impl<'a, T: Scalar> LinearOracle<'a, T> {
    pub fn new(instance: &'a Instance<T>) -> Self {
        let target = instance.target();
        let usable = instance
            .generators()
            .iter()
            .enumerate()
            .filter_map(|(i, y)| {
                let inner = dot(target, y);
                (inner > T::zero()).then_some((i, inner))
            })
            .collect();
        Self { instance, usable }
    }

    pub fn instance(&self) -> &'a Instance<T> {
        self.instance
    }

    /// Number of generators with `ẑᵀy > 0`.
    pub fn candidates(&self) -> usize {
        self.usable.len()
    }

    fn score(&self, &(i, inner): &(usize, T), gradient: &[T]) -> (T, usize) {
        let y = self.instance.generator(i);
        (self.instance.target_norm_sq() * dot(y, gradient) / inner, i)
    }

    fn finish(&self, best: Option<(T, usize)>) -> Option<LmoResult<T>> {
        let (objective, generator_index) = best?;
        let inner = self.usable[self
            .usable
            .binary_search_by_key(&generator_index, |&(i, _)| i)
            .expect("winner is a usable generator")]
        .1;
        let lambda = self.instance.target_norm_sq() / inner;
        Some(LmoResult {
            generator_index,
            lambda,
            point: scaled(self.instance.generator(generator_index), lambda),
            objective,
        })
    }

    /// Sequential scan; ties go to the smallest generator index.
    pub fn minimize(&self, gradient: &[T]) -> Result<Option<LmoResult<T>>> {
        check_dim("gradient", self.instance.dim(), gradient.len())?;
        let mut best: Option<(T, usize)> = None;
        for entry in &self.usable {
            let cand = self.score(entry, gradient);
            if best.is_none_or(|(b, _)| cand.0 < b) {
                best = Some(cand);
            }
        }
        Ok(self.finish(best))
    }

    /// Data-parallel scan. Reduces on `(objective, index)` so the answer is
    /// identical to [`LinearOracle::minimize`].
    pub fn minimize_par(&self, gradient: &[T]) -> Result<Option<LmoResult<T>>> {
        check_dim("gradient", self.instance.dim(), gradient.len())?;
        let best = self
            .usable
            .par_iter()
            .map(|entry| self.score(entry, gradient))
            .reduce_with(|a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            });
        Ok(self.finish(best))
    }
}

/// One-shot oracle call. Returns `None` only if no generator has `ẑᵀy > 0`.
pub fn solve_lmo<T: Scalar>(
    gradient: &[T],
    instance: &Instance<T>,
) -> Result<Option<LmoResult<T>>> {
    LinearOracle::new(instance).minimize(gradient)
}

/// Frank-Wolfe duality gap `gᵀ(z − s)`. May be a rounding error below zero;
/// callers clamp it when reporting.
pub fn duality_gap<T: Scalar>(z: &[T], gradient: &[T], lmo_point: &[T]) -> Result<T> {
    check_dim("duality_gap: gradient", z.len(), gradient.len())?;
    check_dim("duality_gap: lmo_point", z.len(), lmo_point.len())?;
    Ok(gradient
        .iter()
        .zip(z.iter().zip(lmo_point))
        .map(|(&g, (&zi, &si))| g * (zi - si))
        .sum())
}
