//! Generator sets given implicitly as the 0/1 solutions of a system of
//! linear constraints, materialized by exhaustive enumeration.

use std::fmt;

use rayon::prelude::*;

use crate::error::{check_dim, ConeError, Result};
use crate::Scalar;

/// Default upper limit on the number of binary variables we will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Hard ceiling for the cap itself (the enumeration is indexed by `u64`).
const MAX_ENUMERATION_CAP: usize = 40;

/// Bits enumerated per half when building partial-sum tables.
const HALF_BITS: usize = 12;

/// Relative slack used when testing a row, scaled by the row's magnitude.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Sense {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "<=" => Ok(Sense::Le),
            "=" | "==" => Ok(Sense::Eq),
            ">=" => Ok(Sense::Ge),
            other => Err(ConeError::InvalidParameter(format!(
                "unknown constraint sense {other:?} (expected \"<=\", \"=\" or \">=\")"
            ))),
        }
    }
}

/// `coeffsᵀ y  (sense)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpRow<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

impl<T: Scalar> BlpRow<T> {
    fn slack(&self) -> T {
        let magnitude = T::one()
            .max(self.rhs.abs())
            .max(self.coeffs.iter().map(|c| c.abs()).sum());
        T::tol(FEASIBILITY_TOLERANCE) * magnitude
    }

    fn accepts(&self, lhs: T, slack: T) -> bool {
        match self.sense {
            Sense::Le => lhs <= self.rhs + slack,
            Sense::Ge => lhs >= self.rhs - slack,
            Sense::Eq => (lhs - self.rhs).abs() <= slack,
        }
    }

    /// Evaluates the row at a single point.
    pub fn is_satisfied(&self, y: &[T]) -> bool {
        let lhs = self.coeffs.iter().zip(y).map(|(&a, &x)| a * x).sum();
        self.accepts(lhs, self.slack())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlpSystem<T> {
    n: usize,
    rows: Vec<BlpRow<T>>,
}

impl<T: Scalar> BlpSystem<T> {
    pub fn new(n: usize, rows: Vec<BlpRow<T>>) -> Result<Self> {
        if n == 0 {
            return Err(ConeError::InvalidParameter(
                "a binary system needs at least one variable".into(),
            ));
        }
        for (r, row) in rows.iter().enumerate() {
            check_dim(&format!("rows[{r}].coeffs"), n, row.coeffs.len())?;
            let finite = row.rhs.is_finite() && row.coeffs.iter().all(|c| c.is_finite());
            if !finite {
                return Err(ConeError::NonFinite {
                    location: format!("rows[{r}]"),
                });
            }
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[BlpRow<T>] {
        &self.rows
    }

    pub fn is_feasible(&self, y: &[T]) -> bool {
        self.rows.iter().all(|row| row.is_satisfied(y))
    }
}

/// All feasible binary points in lexicographic order (`y₁` most significant),
/// with the default cap of [`DEFAULT_ENUMERATION_CAP`] variables.
pub fn enumerate_blp<T: Scalar>(system: &BlpSystem<T>) -> Result<Vec<Vec<T>>> {
    enumerate_blp_capped(system, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_blp_capped<T: Scalar>(system: &BlpSystem<T>, cap: usize) -> Result<Vec<Vec<T>>> {
    let cap = cap.min(MAX_ENUMERATION_CAP);
    let n = system.n;
    if n > cap {
        return Err(ConeError::CapacityExceeded {
            what: "binary variables",
            value: n,
            cap,
        });
    }

    // Variable j sits at bit (n - 1 - j) of the mask, so counting upward is
    // lexicographic order. Split the mask into high and low halves and
    // tabulate each row's partial sums over both halves.
    let lo_bits = n.min(HALF_BITS);
    let hi_bits = n - lo_bits;
    let tables: Vec<(Vec<T>, Vec<T>, T)> = system
        .rows
        .iter()
        .map(|row| {
            // Low half covers variables n-lo_bits..n, high half 0..hi_bits.
            let lo = partial_sums(&row.coeffs[hi_bits..]);
            let hi = partial_sums(&row.coeffs[..hi_bits]);
            (hi, lo, row.slack())
        })
        .collect();

    let scan_high = |h: usize| -> Vec<Vec<T>> {
        (0..1usize << lo_bits)
            .filter(|&l| {
                system
                    .rows
                    .iter()
                    .zip(&tables)
                    .all(|(row, (hi, lo, slack))| row.accepts(hi[h] + lo[l], *slack))
            })
            .map(|l| decode((h << lo_bits) | l, n))
            .collect()
    };

    let highs = 0..1usize << hi_bits;
    let chunks: Vec<Vec<Vec<T>>> = if hi_bits >= 4 {
        highs.into_par_iter().map(scan_high).collect()
    } else {
        highs.map(scan_high).collect()
    };
    Ok(chunks.into_iter().flatten().collect())
}

/// `sums[mask] = Σ coeffs[j]` over the bits of `mask`, bit `(len-1-j)` ↔ `j`.
fn partial_sums<T: Scalar>(coeffs: &[T]) -> Vec<T> {
    let len = coeffs.len();
    let mut sums = vec![T::zero(); 1 << len];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + coeffs[len - 1 - low];
    }
    sums
}

fn decode<T: Scalar>(mask: usize, n: usize) -> Vec<T> {
    (0..n)
        .map(|j| {
            if mask >> (n - 1 - j) & 1 == 1 {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect()
}
