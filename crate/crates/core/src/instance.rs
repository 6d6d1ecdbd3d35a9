//! The problem datum: a finite generator set and a target point, all in the
//! nonnegative orthant.

use crate::error::{ConeError, Result};
use crate::vector::{dot, is_zero};
use crate::Scalar;

/// Generators `y¹..yᵐ` and target `ẑ`, validated on construction.
///
/// Invariants: every vector has the same dimension `n`, all entries are
/// finite and nonnegative, at least one generator is nonzero and the target
/// is nonzero. Zero generators are allowed; they never take part in a
/// solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    generators: Vec<Vec<T>>,
    target: Vec<T>,
    target_norm_sq: T,
}

impl<T: Scalar> Instance<T> {
    pub fn new(generators: Vec<Vec<T>>, target: Vec<T>) -> Result<Self> {
        if generators.is_empty() {
            return Err(ConeError::NoGenerators);
        }
        let n = target.len();
        if n == 0 {
            return Err(ConeError::InvalidParameter(
                "target must have at least one coordinate".into(),
            ));
        }
        validate_entries(&target, |j| format!("target[{j}]"))?;
        for (i, y) in generators.iter().enumerate() {
            if y.len() != n {
                return Err(ConeError::DimensionMismatch {
                    context: format!("generators[{i}]"),
                    expected: n,
                    found: y.len(),
                });
            }
            validate_entries(y, |j| format!("generators[{i}][{j}]"))?;
        }
        if generators.iter().all(|y| is_zero(y)) {
            return Err(ConeError::AllGeneratorsZero);
        }
        if is_zero(&target) {
            return Err(ConeError::ZeroTarget);
        }
        let target_norm_sq = dot(&target, &target);
        Ok(Self {
            generators,
            target,
            target_norm_sq,
        })
    }

    pub fn generators(&self) -> &[Vec<T>] {
        &self.generators
    }

    pub fn generator(&self, index: usize) -> &[T] {
        &self.generators[index]
    }

    pub fn target(&self) -> &[T] {
        &self.target
    }

    /// `ẑᵀẑ`, the scale every relative tolerance refers to.
    pub fn target_norm_sq(&self) -> T {
        self.target_norm_sq
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Number of generators `m`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Same generators, new target.
    pub fn with_target(&self, target: Vec<T>) -> Result<Self> {
        Self::new(self.generators.clone(), target)
    }

    pub fn into_parts(self) -> (Vec<Vec<T>>, Vec<T>) {
        (self.generators, self.target)
    }
}

fn validate_entries<T: Scalar>(v: &[T], location: impl Fn(usize) -> String) -> Result<()> {
    for (j, &x) in v.iter().enumerate() {
        if !x.is_finite() {
            return Err(ConeError::NonFinite {
                location: location(j),
            });
        }
        if x < T::zero() {
            return Err(ConeError::Negative {
                location: location(j),
                value: x.as_f64(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_zero_generator_alongside_nonzero() {
        let inst = Instance::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![1.0, 1.0]).unwrap();
        assert_eq!(inst.len(), 2);
        assert_eq!(inst.dim(), 2);
        assert_eq!(inst.target_norm_sq(), 2.0);
    }

    #[test]
    fn rejects_invalid_data() {
        assert_eq!(
            Instance::<f64>::new(vec![], vec![1.0]),
            Err(ConeError::NoGenerators)
        );
        assert_eq!(
            Instance::new(vec![vec![0.0, 0.0]], vec![1.0, 1.0]),
            Err(ConeError::AllGeneratorsZero)
        );
        assert_eq!(
            Instance::new(vec![vec![1.0, 0.0]], vec![0.0, 0.0]),
            Err(ConeError::ZeroTarget)
        );
        assert!(matches!(
            Instance::new(vec![vec![1.0, 0.0], vec![1.0]], vec![1.0, 1.0]),
            Err(ConeError::DimensionMismatch { found: 1, .. })
        ));
        match Instance::new(vec![vec![1.0, -0.5]], vec![1.0, 1.0]) {
            Err(ConeError::Negative { location, .. }) => assert_eq!(location, "generators[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Instance::new(vec![vec![1.0, f64::NAN]], vec![1.0, 1.0]),
            Err(ConeError::NonFinite { .. })
        ));
        assert!(matches!(
            Instance::new(vec![vec![1.0, 0.0]], vec![f64::INFINITY, 1.0]),
            Err(ConeError::NonFinite { .. })
        ));
    }
}
