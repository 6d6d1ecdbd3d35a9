//! Brute-force nonnegative least squares used as ground truth in tests and
//! by `verify`. Never called from the solve path.
//!
//! Some optimal combination `Σ λᵢ yⁱ` uses at most `n` linearly independent
//! generators, and on its support the unconstrained least-squares solution
//! is that optimum. So we walk every independent support of size `≤ n` in
//! lexicographic order, solve the restricted least squares with an
//! incrementally grown Cholesky factor of the Gram matrix, keep the
//! nonnegative solutions and return the best. Adding a vector to a
//! dependent set keeps it dependent, so dependent branches are cut whole.

use crate::error::{ConeError, Result};
use crate::instance::Instance;
use crate::slice::scale_back;
use crate::solver::{Solution, Status};
use crate::vector::{dist_sq, dot, norm, norm_sq};
use crate::Scalar;

pub const MAX_GENERATORS: usize = 50;
pub const MAX_DIMENSION: usize = 12;
/// Relative Cholesky pivot below which a generator counts as dependent.
const RANK_TOLERANCE: f64 = 1e-10;
/// Improvements smaller than this fraction of `ẑᵀẑ` do not replace an
/// earlier (lexicographically smaller) support.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution<T> {
    /// `λᵢ ≥ 0` for every generator (zero off the support).
    pub coefficients: Vec<T>,
    pub point: Vec<T>,
    pub distance_sq: T,
    pub support: Vec<usize>,
}

struct Search<'a, T> {
    instance: &'a Instance<T>,
    max_support: usize,
    tie_tol: T,
    rank_tol: T,
    chosen: Vec<usize>,
    /// Rows of the lower-triangular factor, row `i` has `i + 1` entries.
    factor: Vec<Vec<T>>,
    /// `L⁻¹ Sᵀẑ`; `‖ẑ‖² − ‖w‖²` is the restricted residual.
    w: Vec<T>,
    best_value: T,
    best_support: Vec<usize>,
    best_lambda: Vec<T>,
}

impl<T: Scalar> Search<'_, T> {
    fn run(&mut self, start: usize) {
        if self.chosen.len() == self.max_support {
            return;
        }
        let depth = self.chosen.len();
        for j in start..self.instance.len() {
            let y = self.instance.generator(j);
            let d = norm_sq(y);
            if d <= T::zero() {
                continue;
            }
            let mut l = Vec::with_capacity(depth + 1);
            for i in 0..depth {
                let b = dot(self.instance.generator(self.chosen[i]), y);
                let partial: T = (0..i).map(|p| self.factor[i][p] * l[p]).sum();
                l.push((b - partial) / self.factor[i][i]);
            }
            let pivot_sq = d - norm_sq(&l);
            if !(pivot_sq > self.rank_tol * d) {
                continue;
            }
            let pivot = pivot_sq.sqrt();
            let c = dot(self.instance.target(), y);
            let w_new = (c - dot(&l, &self.w)) / pivot;
            l.push(pivot);

            self.chosen.push(j);
            self.factor.push(l);
            self.w.push(w_new);
            self.consider();
            self.run(j + 1);
            self.w.pop();
            self.factor.pop();
            self.chosen.pop();
        }
    }

    fn consider(&mut self) {
        let k = self.chosen.len();
        // Back substitution Lᵀ λ = w.
        let mut lambda = vec![T::zero(); k];
        for i in (0..k).rev() {
            let tail: T = (i + 1..k).map(|r| self.factor[r][i] * lambda[r]).sum();
            lambda[i] = (self.w[i] - tail) / self.factor[i][i];
            if lambda[i] < T::zero() {
                return;
            }
        }
        let value = (self.instance.target_norm_sq() - norm_sq(&self.w)).max(T::zero());
        if value < self.best_value - self.tie_tol {
            self.best_value = value;
            self.best_support = self.chosen.clone();
            self.best_lambda = lambda;
        }
    }
}

pub fn nnls_bruteforce<T: Scalar>(instance: &Instance<T>) -> Result<NnlsSolution<T>> {
    if instance.len() > MAX_GENERATORS {
        return Err(ConeError::CapacityExceeded {
            what: "generators",
            value: instance.len(),
            cap: MAX_GENERATORS,
        });
    }
    if instance.dim() > MAX_DIMENSION {
        return Err(ConeError::CapacityExceeded {
            what: "dimension",
            value: instance.dim(),
            cap: MAX_DIMENSION,
        });
    }
    let target_norm_sq = instance.target_norm_sq();
    let mut search = Search {
        instance,
        max_support: instance.dim().min(MAX_DIMENSION),
        tie_tol: T::tol(TIE_TOLERANCE) * target_norm_sq,
        rank_tol: T::tol(RANK_TOLERANCE),
        chosen: Vec::new(),
        factor: Vec::new(),
        w: Vec::new(),
        best_value: target_norm_sq,
        best_support: Vec::new(),
        best_lambda: Vec::new(),
    };
    search.run(0);

    let mut coefficients = vec![T::zero(); instance.len()];
    let mut point = vec![T::zero(); instance.dim()];
    for (&i, &l) in search.best_support.iter().zip(&search.best_lambda) {
        coefficients[i] = l;
        for (p, &y) in point.iter_mut().zip(instance.generator(i)) {
            *p = *p + l * y;
        }
    }
    let distance_sq = dist_sq(&point, instance.target());
    let support = search
        .best_support
        .iter()
        .zip(&search.best_lambda)
        .filter(|&(_, &l)| l > T::zero())
        .map(|(&i, _)| i)
        .collect();
    Ok(NnlsSolution {
        coefficients,
        point,
        distance_sq,
        support,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub oracle_distance_sq: f64,
    pub checks: Vec<Check>,
}

fn check(name: &'static str, residual: f64, threshold: f64) -> Check {
    Check {
        name,
        residual,
        threshold,
        passed: residual <= threshold,
    }
}

/// Cross-checks a solver answer against [`nnls_bruteforce`] and against the
/// algebraic relations any correct answer must satisfy.
pub fn verify_solution<T: Scalar>(
    candidate: &Solution<T>,
    instance: &Instance<T>,
    tolerance: T,
) -> Result<VerificationReport> {
    let oracle = nnls_bruteforce(instance)?;
    let target = instance.target();
    let tt = instance.target_norm_sq();
    let tol = tolerance.as_f64();
    let z = &candidate.z_star;
    if z.len() != instance.dim() {
        return Err(ConeError::DimensionMismatch {
            context: "candidate z_star".into(),
            expected: instance.dim(),
            found: z.len(),
        });
    }

    let oracle_d = oracle.distance_sq.as_f64();
    let cand_d = candidate.distance_sq.as_f64();
    let mut checks = vec![check(
        "distance",
        (cand_d - oracle_d).abs(),
        tol * (1.0 + oracle_d),
    )];

    let own_d = dist_sq(z, target).as_f64();
    checks.push(check(
        "distance_consistency",
        (own_d - cand_d).abs(),
        tol * (1.0 + cand_d),
    ));

    let scale = norm(target).as_f64();
    let membership = {
        let mut recon = vec![T::zero(); instance.dim()];
        let mut valid = true;
        for e in &candidate.support {
            if e.index >= instance.len() || !(e.coefficient >= T::zero()) {
                valid = false;
                break;
            }
            for (r, &y) in recon.iter_mut().zip(instance.generator(e.index)) {
                *r = *r + e.coefficient * y;
            }
        }
        if valid {
            dist_sq(&recon, z).sqrt().as_f64()
        } else {
            f64::INFINITY
        }
    };
    checks.push(check("cone_membership", membership, tol * (1.0 + scale)));

    let residual: Vec<T> = target.iter().zip(z).map(|(&t, &x)| t - x).collect();
    checks.push(check(
        "projection_identity",
        dot(&residual, z).abs().as_f64(),
        tol * tt.as_f64(),
    ));

    let scale_back_residual = match (&candidate.z_slice, candidate.status) {
        (Some(zs), _) => match scale_back(zs, target) {
            Ok(expected) => dist_sq(&expected, z).sqrt().as_f64(),
            Err(_) => f64::INFINITY,
        },
        (None, Status::TargetUnreachable) => norm(z).as_f64(),
        (None, _) => f64::INFINITY,
    };
    checks.push(check("scale_back", scale_back_residual, tol * scale));

    Ok(VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        oracle_distance_sq: oracle_d,
        checks,
    })
}
