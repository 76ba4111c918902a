//! Closed intervals spanned by two states.

use crate::{CoreError, Result};

/// The closed interval with end points `w` and `k`, in either order.
///
/// Membership is characterised by `(w − z)(z − k) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    w: f64,
    k: f64,
}

/// Builds the interval spanned by `w` and `k`.
pub fn interval_hull(w: f64, k: f64) -> Result<Interval> {
    if !(w.is_finite() && k.is_finite()) {
        return Err(CoreError::InvalidInput(format!(
            "interval endpoints must be finite, got ({w}, {k})"
        )));
    }
    Ok(Interval { w, k })
}

impl Interval {
    pub fn lo(&self) -> f64 {
        self.w.min(self.k)
    }

    pub fn hi(&self) -> f64 {
        self.w.max(self.k)
    }

    pub fn len(&self) -> f64 {
        self.hi() - self.lo()
    }

    pub fn is_degenerate(&self) -> bool {
        self.w == self.k
    }

    /// Membership test via the defining product inequality.
    pub fn contains(&self, z: f64) -> bool {
        (self.w - z) * (z - self.k) >= 0.0
    }

    /// Distance from `u` to the interval; zero inside.
    pub fn distance(&self, u: f64) -> f64 {
        if u < self.lo() {
            self.lo() - u
        } else if u > self.hi() {
            u - self.hi()
        } else {
            0.0
        }
    }

    /// `n` uniformly spaced points including both end points.
    ///
    /// A degenerate interval yields a single point regardless of `n`.
    pub fn uniform_grid(&self, n: usize) -> Vec<f64> {
        if self.is_degenerate() || n < 2 {
            return vec![self.w];
        }
        let (lo, hi) = (self.lo(), self.hi());
        let step = (hi - lo) / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        // Pin the last point to the end point exactly.
        *pts.last_mut().unwrap() = hi;
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_interval() {
        let i = interval_hull(2.0, 2.0).unwrap();
        assert_eq!(i.lo(), 2.0);
        assert_eq!(i.hi(), 2.0);
        assert!(i.contains(2.0));
        assert!(!i.contains(2.0 + 1e-12));
        assert_eq!(i.uniform_grid(5), vec![2.0]);
    }

    #[test]
    fn ordering_is_normalised() {
        let i = interval_hull(-1.0, 1.0).unwrap();
        assert_eq!((i.lo(), i.hi()), (-1.0, 1.0));
        let j = interval_hull(1.0, -1.0).unwrap();
        assert_eq!((j.lo(), j.hi()), (-1.0, 1.0));
    }

    #[test]
    fn membership_product_formula() {
        let i = interval_hull(-1.0, 1.0).unwrap();
        // (w − z)(z − k) = (−1 − 0.5)(0.5 − 1) = 0.75 ≥ 0.
        assert_eq!((-1.0 - 0.5f64) * (0.5 - 1.0), 0.75);
        assert!(i.contains(0.5));
        assert!(i.contains(-1.0));
        assert!(i.contains(1.0));
        assert!(!i.contains(1.5));
    }

    #[test]
    fn grid_includes_endpoints() {
        let i = interval_hull(0.0, 1.0).unwrap();
        let g = i.uniform_grid(5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[4], 1.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(interval_hull(f64::NAN, 0.0).is_err());
        assert!(interval_hull(0.0, f64::INFINITY).is_err());
    }
}
