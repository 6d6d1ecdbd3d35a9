//! Frank-Wolfe on the slice, followed by the scale-back to the cone.
//!
//! The objective is `f(z) = ‖z − ẑ‖²` over the part of the cone lying on
//! `ẑᵀz = ẑᵀẑ`. The gradient is taken as `z − ẑ` (the factor 2 is dropped);
//! the oracle argmin, the line search and the gap stopping rule are all
//! invariant to that scaling.

use std::collections::BTreeMap;

use crate::certificate::{diameter_bound, BoundCertificate};
use crate::error::{ConeError, Result};
use crate::instance::Instance;
use crate::lmo::{duality_gap, LinearOracle, LmoResult};
use crate::slice::{check_reachability, lift_to_slice, scale_back};
use crate::vector::{dist_sq, dot, norm_sq, sub};
use crate::Scalar;

/// Drift of `ẑᵀz` off the slice beyond this (relative) is a numerical failure.
const SLICE_DRIFT_TOLERANCE: f64 = 1e-6;
/// Negative iterate entries down to `-this · max|z|` are rounding and clamped.
const NEGATIVE_CLAMP_TOLERANCE: f64 = 1e-12;
/// `‖s − z‖` below this fraction of `max(‖z‖, ‖s‖)` is a degenerate segment.
const DEGENERATE_SEGMENT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepRule {
    /// Closed-form minimizer of the objective along the segment.
    #[default]
    ExactLineSearch,
    /// `γₖ = 2 / (k + 2)`.
    Diminishing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// Stop when the duality gap is at most `gap_tolerance · ẑᵀẑ`.
    pub gap_tolerance: T,
    /// Oracle-call budget; `None` means `10·n + 1000`.
    pub max_iterations: Option<usize>,
    pub step_rule: StepRule,
    /// Keep one [`IterationRecord`] per oracle call.
    pub record_history: bool,
    /// Also store the iterate in each record (implies `record_history`).
    pub record_iterates: bool,
    /// Run each oracle scan with rayon.
    pub parallel_lmo: bool,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            gap_tolerance: T::tol(1e-8),
            max_iterations: None,
            step_rule: StepRule::ExactLineSearch,
            record_history: false,
            record_iterates: false,
            parallel_lmo: false,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn with_history(mut self) -> Self {
        self.record_history = true;
        self
    }

    pub fn with_iterates(mut self) -> Self {
        self.record_history = true;
        self.record_iterates = true;
        self
    }

    pub fn iteration_budget(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n + 1000)
    }

    fn validate(&self) -> Result<()> {
        if !(self.gap_tolerance > T::zero()) || !self.gap_tolerance.is_finite() {
            return Err(ConeError::InvalidParameter(format!(
                "gap_tolerance must be positive and finite, got {}",
                self.gap_tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(ConeError::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIterations,
    TargetUnreachable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIterations => "MaxIterations",
            Status::TargetUnreachable => "TargetUnreachable",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State at the `k`-th oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub k: usize,
    /// `‖z⁽ᵏ⁾ − ẑ‖²`.
    pub objective: T,
    /// Raw (unclamped) duality gap at `z⁽ᵏ⁾`.
    pub gap: T,
    pub lmo_index: usize,
    /// Step taken towards the oracle point; zero on the final record.
    pub step: T,
    pub iterate: Option<Vec<T>>,
}

/// One generator's share of the answer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportEntry<T> {
    pub index: usize,
    /// Convex weight of the lifted generator in `z**`.
    pub weight: T,
    /// Cone coefficient: `z* = Σ coefficient · y`.
    pub coefficient: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub status: Status,
    pub z_star: Vec<T>,
    pub z_slice: Option<Vec<T>>,
    pub distance: T,
    pub distance_sq: T,
    /// Number of oracle calls.
    pub iterations: usize,
    /// Duality gap at the final iterate, clamped at zero.
    pub final_gap: T,
    pub certificate: Option<BoundCertificate<T>>,
    /// Generators with positive weight, in index order.
    pub support: Vec<SupportEntry<T>>,
    pub history: Option<Vec<IterationRecord<T>>>,
}

/// `z⁽⁰⁾`: the lift of the smallest-index generator with `ẑᵀy > 0`.
pub fn initial_point<T: Scalar>(instance: &Instance<T>) -> Result<Vec<T>> {
    let witness = check_reachability(instance)
        .witness_index
        .ok_or(ConeError::Unreachable)?;
    Ok(lift_to_slice(instance.generator(witness), instance.target())?.point)
}

/// Exact minimizer over `γ ∈ [0, 1]` of `‖z + γ(s − z) − ẑ‖²`.
pub fn line_search<T: Scalar>(z: &[T], s: &[T], target: &[T]) -> T {
    let direction = sub(s, z);
    let dd = norm_sq(&direction);
    let scale = norm_sq(z).max(norm_sq(s));
    let tol = T::tol(DEGENERATE_SEGMENT_TOLERANCE);
    if dd <= tol * tol * scale {
        return T::zero();
    }
    let residual = sub(target, z);
    (dot(&residual, &direction) / dd)
        .max(T::zero())
        .min(T::one())
}

pub fn solve<T: Scalar>(instance: &Instance<T>, config: &SolverConfig<T>) -> Result<Solution<T>> {
    config.validate()?;
    let target = instance.target();
    let target_norm_sq = instance.target_norm_sq();

    let Some(witness) = check_reachability(instance).witness_index else {
        return Ok(Solution {
            status: Status::TargetUnreachable,
            z_star: vec![T::zero(); instance.dim()],
            z_slice: None,
            distance: target_norm_sq.sqrt(),
            distance_sq: target_norm_sq,
            iterations: 0,
            final_gap: T::zero(),
            certificate: None,
            support: Vec::new(),
            history: config.record_history.then(Vec::new),
        });
    };

    let certificate = diameter_bound(instance)?;
    let oracle = LinearOracle::new(instance);
    let budget = config.iteration_budget(instance.dim());
    let stop_gap = config.gap_tolerance * target_norm_sq;
    let record = config.record_history || config.record_iterates;

    let mut z = lift_to_slice(instance.generator(witness), target)?.point;
    let mut weights: BTreeMap<usize, T> = BTreeMap::from([(witness, T::one())]);
    let mut history = Vec::new();
    let mut calls = 0usize;

    let (status, final_gap) = loop {
        let k = calls;
        let gradient = sub(&z, target);
        let s = if config.parallel_lmo {
            oracle.minimize_par(&gradient)?
        } else {
            oracle.minimize(&gradient)?
        };
        let s: LmoResult<T> = s.ok_or(ConeError::Unreachable)?;
        calls += 1;
        let gap = duality_gap(&z, &gradient, &s.point)?;

        let done = if gap <= stop_gap {
            Some(Status::Converged)
        } else if calls >= budget {
            Some(Status::MaxIterations)
        } else {
            None
        };

        let step = match (done, config.step_rule) {
            (Some(_), _) => T::zero(),
            (None, StepRule::ExactLineSearch) => line_search(&z, &s.point, target),
            (None, StepRule::Diminishing) => T::lit(2.0) / T::lit(k as f64 + 2.0),
        };

        if record {
            history.push(IterationRecord {
                k,
                objective: norm_sq(&gradient),
                gap,
                lmo_index: s.generator_index,
                step,
                iterate: config.record_iterates.then(|| z.clone()),
            });
        }

        if let Some(status) = done {
            break (status, gap.max(T::zero()));
        }

        advance(&mut z, &s.point, step);
        update_weights(&mut weights, s.generator_index, step);
        check_iterate(&mut z, target, target_norm_sq, k + 1)?;
    };

    let z_star = scale_back(&z, target)?;
    let scale = target_norm_sq / norm_sq(&z);
    let distance_sq = dist_sq(&z_star, target);
    let support = weights
        .into_iter()
        .filter(|&(_, w)| w > T::zero())
        .map(|(index, weight)| {
            let lambda = target_norm_sq / dot(target, instance.generator(index));
            SupportEntry {
                index,
                weight,
                coefficient: scale * weight * lambda,
            }
        })
        .collect();

    Ok(Solution {
        status,
        z_star,
        z_slice: Some(z),
        distance: distance_sq.sqrt(),
        distance_sq,
        iterations: calls,
        final_gap,
        certificate: Some(certificate),
        support,
        history: record.then_some(history),
    })
}

/// `z ← (1 − γ) z + γ s`; the convex form keeps nonnegative inputs nonnegative.
fn advance<T: Scalar>(z: &mut [T], s: &[T], step: T) {
    let keep = T::one() - step;
    for (zi, &si) in z.iter_mut().zip(s) {
        *zi = keep * *zi + step * si;
    }
}

fn update_weights<T: Scalar>(weights: &mut BTreeMap<usize, T>, index: usize, step: T) {
    if step >= T::one() {
        weights.clear();
    } else {
        let keep = T::one() - step;
        weights.values_mut().for_each(|w| *w = *w * keep);
    }
    if step > T::zero() {
        let w = weights.entry(index).or_insert_with(T::zero);
        *w = *w + step;
    }
    weights.retain(|_, w| *w > T::zero());
}

fn check_iterate<T: Scalar>(z: &mut [T], target: &[T], target_norm_sq: T, k: usize) -> Result<()> {
    let drift = (dot(target, z) - target_norm_sq).abs() / target_norm_sq;
    if !(drift <= T::tol(SLICE_DRIFT_TOLERANCE)) {
        return Err(ConeError::NumericalFailure(format!(
            "iterate {k} drifted off the slice (relative residual {:e})",
            drift.as_f64()
        )));
    }
    let largest = z.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    let floor = -T::tol(NEGATIVE_CLAMP_TOLERANCE) * largest;
    for (j, zj) in z.iter_mut().enumerate() {
        if *zj < T::zero() {
            if *zj < floor {
                return Err(ConeError::NumericalFailure(format!(
                    "iterate {k} has negative entry {zj} at coordinate {j}"
                )));
            }
            *zj = T::zero();
        }
    }
    Ok(())
}
