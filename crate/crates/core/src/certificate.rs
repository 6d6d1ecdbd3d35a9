//! A-priori bounds on the region every oracle answer lives in.

use crate::error::{ConeError, Result};
use crate::instance::Instance;
use crate::vector::dot;
use crate::Scalar;

/// `ρ = max yᵀy / (ẑᵀy)²` over generators with `ẑᵀy > 0`, and the squared
/// diameter bound `2ρ(ẑᵀẑ)²` it implies for the hull of lifted generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCertificate<T> {
    pub rho: T,
    pub diam_sq_bound: T,
    pub target_norm_sq: T,
}

impl<T: Scalar> BoundCertificate<T> {
    /// Upper bound on `f(z⁽ᵏ⁾) − f(z**)`: `2 · diam_sq_bound / (k + 2)`.
    pub fn gap_bound_at(&self, k: usize) -> T {
        T::lit(2.0) * self.diam_sq_bound / T::lit(k as f64 + 2.0)
    }

    /// Upper bound on `‖s‖²` for any lifted generator `s`: `ρ(ẑᵀẑ)²`.
    pub fn lifted_norm_sq_bound(&self) -> T {
        self.rho * self.target_norm_sq * self.target_norm_sq
    }
}

pub fn diameter_bound<T: Scalar>(instance: &Instance<T>) -> Result<BoundCertificate<T>> {
    let target = instance.target();
    let rho = instance
        .generators()
        .iter()
        .filter_map(|y| {
            let inner = dot(target, y);
            (inner > T::zero()).then(|| dot(y, y) / (inner * inner))
        })
        .fold(None, |acc: Option<T>, r| Some(acc.map_or(r, |a| a.max(r))))
        .ok_or(ConeError::Unreachable)?;
    let target_norm_sq = instance.target_norm_sq();
    Ok(BoundCertificate {
        rho,
        diam_sq_bound: T::lit(2.0) * rho * target_norm_sq * target_norm_sq,
        target_norm_sq,
    })
}
