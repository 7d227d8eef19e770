//! Minimal linear-space interface shared by vector and matrix decisions.

use nalgebra::DMatrix;

/// Decision variables the generic wrappers (acceleration, harness) operate on.
pub trait Point: Clone + std::fmt::Debug + Send + Sync {
    fn zeros_like(&self) -> Self;
    /// `a * self + b * other`
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self;
    fn scaled(&self, k: f64) -> Self {
        self.lincomb(k, self, 0.0)
    }
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn is_finite(&self) -> bool;
}

impl Point for Vec<f64> {
    fn zeros_like(&self) -> Self {
        vec![0.0; self.len()]
    }

    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        debug_assert_eq!(self.len(), other.len());
        self.iter().zip(other).map(|(x, y)| a * x + b * y).collect()
    }

    fn len(&self) -> usize {
        Vec::len(self)
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl Point for DMatrix<f64> {
    fn zeros_like(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }

    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        self * a + other * b
    }

    fn len(&self) -> usize {
        self.nrows() * self.ncols()
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}
