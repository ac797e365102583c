//! Uniform one-dimensional grids.

use crate::error::{Error, Result};

/// Uniform grid of `n` nodes with spacing `h`; node `k` sits at exactly
/// `x_min + k h`.
///
/// The origin-avoiding variant shifts every node half a cell to the right
/// of the requested lower bound, so a half-line domain `(0, L]` never
/// samples `x = 0` (the centrifugal `-1/(4x^2)` term would be singular
/// there). In that variant the spacing is `(x_max - x_min)/(n - 1/2)` so
/// the upper bound stays on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
    h: f64,
    origin_shifted: bool,
}

impl Grid1D {
    /// Plain uniform grid on `[x_min, x_max]` with both endpoints as nodes.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        Self::validate(x_min, x_max, n)?;
        let h = (x_max - x_min) / (n as f64 - 1.0);
        Ok(Grid1D { x_min, x_max, n, h, origin_shifted: false })
    }

    /// Grid shifted by `h/2` off the lower bound: nodes at
    /// `x_min + h/2 + k h`, spacing `h = (x_max - x_min)/(n - 1/2)`, last
    /// node exactly at `x_max`.
    pub fn avoiding_origin(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        Self::validate(x_min, x_max, n)?;
        let h = (x_max - x_min) / (n as f64 - 0.5);
        Ok(Grid1D { x_min: x_min + 0.5 * h, x_max, n, h, origin_shifted: true })
    }

    /// Dispatch on the `avoid_origin` flag.
    pub fn build(x_min: f64, x_max: f64, n: usize, avoid_origin: bool) -> Result<Self> {
        if avoid_origin {
            Self::avoiding_origin(x_min, x_max, n)
        } else {
            Self::new(x_min, x_max, n)
        }
    }

    fn validate(x_min: f64, x_max: f64, n: usize) -> Result<()> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if x_min >= x_max {
            return Err(Error::invalid(format!(
                "grid needs x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 3 {
            return Err(Error::invalid(format!("grid needs at least 3 nodes, got {n}")));
        }
        Ok(())
    }

    /// Coordinate of the first node.
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Coordinate of the last node.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn origin_shifted(&self) -> bool {
        self.origin_shifted
    }

    /// Coordinate of node `k`.
    pub fn node(&self, k: usize) -> f64 {
        debug_assert!(k < self.n);
        self.x_min + k as f64 * self.h
    }

    /// Lower edge of the covered span. For a shifted grid this is the
    /// requested bound half a cell below the first node, so cumulative
    /// integrals may be anchored at the true domain edge (e.g. `x = 0`).
    pub fn span_start(&self) -> f64 {
        if self.origin_shifted {
            self.x_min - 0.5 * self.h
        } else {
            self.x_min
        }
    }

    pub fn span_end(&self) -> f64 {
        self.x_max
    }

    pub fn contains(&self, x: f64) -> bool {
        let pad = 1e-9 * self.h;
        x >= self.span_start() - pad && x <= self.span_end() + pad
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.node(k))
    }

    /// Index of the node nearest to `x`.
    pub fn nearest_node(&self, x: f64) -> usize {
        let k = ((x - self.x_min) / self.h).round();
        (k.max(0.0) as usize).min(self.n - 1)
    }

    /// Two grids carry compatible samplings.
    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.n == other.n
            && (self.x_min - other.x_min).abs() <= 1e-12 * self.h
            && (self.h - other.h).abs() <= 1e-12 * self.h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_grid_nodes() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(1), 0.5);
        assert_eq!(g.node(2), 1.0);
    }

    #[test]
    fn reference_grid_spacing() {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        assert!((g.spacing() - 0.008).abs() < 1e-15);
    }

    #[test]
    fn shifted_grid_avoids_origin() {
        let g = Grid1D::avoiding_origin(0.0, 10.0, 1000).unwrap();
        let h = 10.0 / 999.5;
        assert!((g.spacing() - h).abs() < 1e-15);
        assert!((g.node(0) - h / 2.0).abs() < 1e-15);
        assert!((g.node(0) - 0.0050025).abs() < 1e-6);
        assert!((g.node(999) - 10.0).abs() < 1e-12);
        assert!(g.nodes().all(|x| x != 0.0));
        assert_eq!(g.span_start(), 0.0);
    }

    #[test]
    fn node_coordinates_have_no_drift() {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        for k in 0..2001 {
            // one multiply-add from exact inputs: at most a unit roundoff
            let exact = -8.0 + k as f64 * g.spacing();
            assert_eq!(g.node(k), exact);
        }
        assert!((g.node(2000) - 8.0).abs() <= 8.0 * f64::EPSILON);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(Grid1D::new(0.0, 1.0, 2).is_err());
        assert!(Grid1D::new(1.0, 0.0, 10).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, f64::INFINITY, 10).is_err());
    }
}
