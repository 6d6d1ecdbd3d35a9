//! The hyperplane slice `{z ≥ 0 : ẑᵀz = ẑᵀẑ}` and the maps between it and
//! the cone: reachability, lifting generators onto the slice, and scaling a
//! slice optimum back to the cone optimum.

use crate::error::{check_dim, ConeError, Result};
use crate::instance::Instance;
use crate::vector::{dot, is_zero, norm_sq, scaled};
use crate::Scalar;

/// Whether the slice meets the cone at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub reachable: bool,
    /// Smallest generator index with `ẑᵀy > 0`.
    pub witness_index: Option<usize>,
}

/// The slice intersects the cone iff some generator has a strictly positive
/// inner product with the target; otherwise the cone optimum is `0`.
///
/// The comparison is exact. Inner products of nonnegative vectors cannot
/// cancel, so there is no tolerance to choose.
pub fn check_reachability<T: Scalar>(instance: &Instance<T>) -> FeasibilityReport {
    let target = instance.target();
    let witness_index = instance
        .generators()
        .iter()
        .position(|y| dot(target, y) > T::zero());
    FeasibilityReport {
        reachable: witness_index.is_some(),
        witness_index,
    }
}

/// A generator moved onto the slice: `point = lambda · y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift<T> {
    pub lambda: T,
    pub point: Vec<T>,
}

/// Scales `y` by `λ = ẑᵀẑ / ẑᵀy` so that it lands on the slice.
pub fn lift_to_slice<T: Scalar>(y: &[T], target: &[T]) -> Result<Lift<T>> {
    check_dim("lift_to_slice", target.len(), y.len())?;
    let inner = dot(target, y);
    if !(inner > T::zero()) {
        return Err(ConeError::NotLiftable {
            inner_product: inner.as_f64(),
        });
    }
    let lambda = norm_sq(target) / inner;
    Ok(Lift {
        lambda,
        point: scaled(y, lambda),
    })
}

/// Default relative slice-membership tolerance for [`scale_back`].
pub const SCALE_BACK_TOLERANCE: f64 = 1e-9;

/// Maps a slice point `z**` to `z* = (ẑᵀẑ / z**ᵀz**) · z**`, the projection
/// of the target onto the ray through `z**`.
pub fn scale_back<T: Scalar>(z_slice: &[T], target: &[T]) -> Result<Vec<T>> {
    scale_back_within(z_slice, target, T::tol(SCALE_BACK_TOLERANCE))
}

/// [`scale_back`] with an explicit relative tolerance on `ẑᵀz** = ẑᵀẑ`.
pub fn scale_back_within<T: Scalar>(z_slice: &[T], target: &[T], rel_tol: T) -> Result<Vec<T>> {
    check_dim("scale_back", target.len(), z_slice.len())?;
    if is_zero(z_slice) {
        return Err(ConeError::ZeroPoint);
    }
    let target_norm_sq = norm_sq(target);
    let residual = (dot(target, z_slice) - target_norm_sq).abs() / target_norm_sq;
    if !(residual <= rel_tol) {
        return Err(ConeError::OffSlice {
            residual: residual.as_f64(),
            tolerance: rel_tol.as_f64(),
        });
    }
    Ok(scaled(z_slice, target_norm_sq / norm_sq(z_slice)))
}

/// Extreme points and extreme directions of the slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceGeometry<T> {
    pub target_norm_sq: T,
    /// `(ẑᵀẑ / ẑᵢ) · eⁱ` for every `i` in `vertex_indices`.
    pub vertices: Vec<Vec<T>>,
    /// Coordinates with `ẑᵢ = 0`; each contributes the direction `eⁱ`.
    pub ray_indices: Vec<usize>,
    /// Coordinates with `ẑᵢ > 0`.
    pub vertex_indices: Vec<usize>,
}

impl<T: Scalar> SliceGeometry<T> {
    pub fn dim(&self) -> usize {
        self.ray_indices.len() + self.vertex_indices.len()
    }

    /// Unit directions `eⁱ` for the ray coordinates.
    pub fn ray_directions(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        self.ray_indices
            .iter()
            .map(|&i| {
                let mut e = vec![T::zero(); n];
                e[i] = T::one();
                e
            })
            .collect()
    }
}

/// Materializes the vertices of the slice. `O(n²)` memory; diagnostics only.
pub fn slice_geometry<T: Scalar>(target: &[T]) -> Result<SliceGeometry<T>> {
    for (j, &x) in target.iter().enumerate() {
        if !x.is_finite() {
            return Err(ConeError::NonFinite {
                location: format!("target[{j}]"),
            });
        }
        if x < T::zero() {
            return Err(ConeError::Negative {
                location: format!("target[{j}]"),
                value: x.as_f64(),
            });
        }
    }
    if target.is_empty() || is_zero(target) {
        return Err(ConeError::ZeroTarget);
    }
    let n = target.len();
    let target_norm_sq = norm_sq(target);
    let (vertex_indices, ray_indices): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| target[i] > T::zero());
    let vertices = vertex_indices
        .iter()
        .map(|&i| {
            let mut v = vec![T::zero(); n];
            v[i] = target_norm_sq / target[i];
            v
        })
        .collect();
    Ok(SliceGeometry {
        target_norm_sq,
        vertices,
        ray_indices,
        vertex_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn golden() -> Instance<f64> {
        Instance::new(
            vec![
                vec![1.0, 1.0, 2.0],
                vec![0.0, 2.0, 3.0],
                vec![2.0, 1.0, 3.0],
                vec![3.0, 0.0, 2.0],
                vec![0.0, 0.0, 2.0],
            ],
            vec![1.0, 1.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn reachability_examples() {
        let r = check_reachability(&golden());
        assert!(r.reachable);
        assert_eq!(r.witness_index, Some(0));

        let orth = Instance::new(vec![vec![0.0, 0.0, 2.0]], vec![1.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            check_reachability(&orth),
            FeasibilityReport {
                reachable: false,
                witness_index: None
            }
        );

        let orth2 = Instance::new(vec![vec![1.0, 0.0]], vec![0.0, 1.0]).unwrap();
        assert!(!check_reachability(&orth2).reachable);
    }

    #[test]
    fn witness_skips_orthogonal_prefix() {
        let inst = Instance::new(
            vec![
                vec![0.0, 0.0, 2.0],
                vec![0.0, 0.0, 0.0],
                vec![3.0, 0.0, 2.0],
            ],
            vec![1.0, 1.0, 0.0],
        )
        .unwrap();
        assert_eq!(check_reachability(&inst).witness_index, Some(2));
    }

    #[test]
    fn lift_examples() {
        let t = [1.0, 1.0, 0.0];
        let l = lift_to_slice(&[1.0, 1.0, 2.0], &t).unwrap();
        assert_eq!(l.lambda, 1.0);
        assert_eq!(l.point, vec![1.0, 1.0, 2.0]);

        let l = lift_to_slice(&[3.0, 0.0, 2.0], &t).unwrap();
        assert_relative_eq!(l.lambda, 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(l.point[0], 2.0, max_relative = 1e-15);
        assert_eq!(l.point[1], 0.0);
        assert_relative_eq!(l.point[2], 4.0 / 3.0, max_relative = 1e-15);

        let t = [0.3, 2.0, 0.0, 5.5];
        let l = lift_to_slice(&t, &t).unwrap();
        assert_eq!(l.lambda, 1.0);
        assert_eq!(l.point, t.to_vec());
    }

    #[test]
    fn lift_rejects_orthogonal_and_mismatched() {
        assert!(matches!(
            lift_to_slice(&[0.0, 0.0, 2.0], &[1.0, 1.0, 0.0]),
            Err(ConeError::NotLiftable { .. })
        ));
        assert!(matches!(
            lift_to_slice(&[1.0, 1.0], &[1.0, 1.0, 0.0]),
            Err(ConeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scale_back_examples() {
        let t = [1.0, 1.0, 0.0];
        let z = scale_back(&[17.0 / 11.0, 5.0 / 11.0, 18.0 / 11.0], &t).unwrap();
        for (a, b) in z.iter().zip([17.0 / 29.0, 5.0 / 29.0, 18.0 / 29.0]) {
            assert_relative_eq!(*a, b, max_relative = 1e-14);
        }
        assert_eq!(scale_back(&t, &t).unwrap(), t.to_vec());
        assert!(matches!(
            scale_back(&[2.0, 2.0, 0.0], &t),
            Err(ConeError::OffSlice { .. })
        ));
        assert_eq!(scale_back(&[0.0, 0.0, 0.0], &t), Err(ConeError::ZeroPoint));
    }

    #[test]
    fn geometry_examples() {
        let g = slice_geometry(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(g.vertices, vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]]);
        assert_eq!(g.ray_indices, vec![2]);
        assert_eq!(g.vertex_indices, vec![0, 1]);
        assert_eq!(g.ray_directions(), vec![vec![0.0, 0.0, 1.0]]);

        let g = slice_geometry(&[1.0]).unwrap();
        assert_eq!(g.vertices, vec![vec![1.0]]);
        assert!(g.ray_indices.is_empty());

        let g = slice_geometry(&[0.0, 3.0]).unwrap();
        assert_eq!(g.vertices, vec![vec![0.0, 3.0]]);
        assert_eq!(g.ray_indices, vec![0]);

        assert_eq!(slice_geometry(&[0.0, 0.0]), Err(ConeError::ZeroTarget));
        assert!(matches!(
            slice_geometry(&[1.0, -1.0]),
            Err(ConeError::Negative { .. })
        ));
    }
}
