//! Real-valued samples of a function on a grid, with optional masked nodes.
//!
//! A `ScalarField` is the common currency of the pipeline: charge density,
//! cumulative charge, field branches, potentials, `w`, `eta`, `gamma`,
//! seed data and eigenvectors are all fields on a shared grid. A node may
//! be masked (excluded) where a quantity is undefined, e.g. `E- = -phi0
//! rho/Q` at charge-neutral points or `ln u^2` where `u` vanishes; masks
//! propagate through arithmetic and are excluded from verification norms.

use crate::error::{Error, Result};
use crate::numerics::grid::Grid1D;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid1D,
    values: Vec<f64>,
    /// `None` means every node is valid. `Some(m)`: `m[k]` true = valid.
    mask: Option<Vec<bool>>,
}

impl ScalarField {
    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field length {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "field values must be finite; mask nodes explicitly instead",
            ));
        }
        Ok(ScalarField { grid, values, mask: None })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        ScalarField { grid, values, mask: None }
    }

    pub fn constant(grid: Grid1D, c: f64) -> Self {
        ScalarField { grid, values: vec![c; grid.len()], mask: None }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Build with an explicit mask; masked slots store 0.0.
    pub fn from_masked_values(grid: Grid1D, values: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        if values.len() != grid.len() || valid.len() != grid.len() {
            return Err(Error::invalid("values/mask length does not match grid size"));
        }
        let values = values
            .into_iter()
            .zip(valid.iter())
            .map(|(v, &ok)| if ok { v } else { 0.0 })
            .collect::<Vec<_>>();
        if values
            .iter()
            .zip(valid.iter())
            .any(|(v, &ok)| ok && !v.is_finite())
        {
            return Err(Error::invalid("unmasked field values must be finite"));
        }
        let mask = if valid.iter().all(|&b| b) { None } else { Some(valid) };
        Ok(ScalarField { grid, values, mask })
    }

    pub fn grid(&self) -> &Grid1D {
        self.grid_ref()
    }

    fn grid_ref(&self) -> &Grid1D {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn x(&self, k: usize) -> f64 {
        self.grid.node(k)
    }

    pub fn is_valid(&self, k: usize) -> bool {
        self.mask.as_ref().map_or(true, |m| m[k])
    }

    pub fn has_mask(&self) -> bool {
        self.mask.is_some()
    }

    pub fn valid_count(&self) -> usize {
        match &self.mask {
            None => self.len(),
            Some(m) => m.iter().filter(|&&b| b).count(),
        }
    }

    /// Value at the node nearest to `x` (panics only via indexing contract).
    pub fn value_near(&self, x: f64) -> f64 {
        self.values[self.grid.nearest_node(x)]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| if self.is_valid(k) { f(v) } else { 0.0 })
            .collect();
        ScalarField { grid: self.grid, values, mask: self.mask.clone() }
    }

    /// Pointwise combination; masks union.
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        self.check_same_grid(other)?;
        let mut mask = merge_masks(&self.mask, &other.mask);
        let values = (0..self.len())
            .map(|k| {
                let ok = mask.as_ref().map_or(true, |m| m[k]);
                if ok {
                    let v = f(self.values[k], other.values[k]);
                    if v.is_finite() {
                        v
                    } else {
                        mask_out(&mut mask, self.len(), k);
                        0.0
                    }
                } else {
                    0.0
                }
            })
            .collect();
        Ok(ScalarField { grid: self.grid, values, mask })
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        self.map(|v| c * v)
    }

    pub fn offset(&self, c: f64) -> ScalarField {
        self.map(|v| v + c)
    }

    /// Pointwise quotient; nodes where `|denominator|` is not above `floor`
    /// are masked.
    pub fn div_masked(&self, den: &ScalarField, floor: f64) -> Result<ScalarField> {
        self.check_same_grid(den)?;
        let mut mask = merge_masks(&self.mask, &den.mask);
        let values = (0..self.len())
            .map(|k| {
                let ok = mask.as_ref().map_or(true, |m| m[k]) && den.values[k].abs() > floor;
                if ok {
                    self.values[k] / den.values[k]
                } else {
                    mask_out(&mut mask, self.len(), k);
                    0.0
                }
            })
            .collect();
        Ok(ScalarField { grid: self.grid, values, mask })
    }

    /// Mask every node where `pred(x, value)` holds.
    pub fn masked_where(&self, pred: impl Fn(f64, f64) -> bool) -> ScalarField {
        let mut mask = self.mask.clone().unwrap_or_else(|| vec![true; self.len()]);
        let mut values = self.values.clone();
        for k in 0..self.len() {
            if mask[k] && pred(self.grid.node(k), values[k]) {
                mask[k] = false;
                values[k] = 0.0;
            }
        }
        let mask = if mask.iter().all(|&b| b) { None } else { Some(mask) };
        ScalarField { grid: self.grid, values, mask }
    }

    /// Mask tracked from another field.
    pub fn with_mask_of(&self, other: &ScalarField) -> ScalarField {
        let mask = merge_masks(&self.mask, &other.mask);
        let mut values = self.values.clone();
        if let Some(m) = &mask {
            for (v, &ok) in values.iter_mut().zip(m) {
                if !ok {
                    *v = 0.0;
                }
            }
        }
        ScalarField { grid: self.grid, values, mask }
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| self.is_valid(*k))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }

    /// Grid L2 norm `sqrt(sum v^2 h)` over valid nodes.
    pub fn norm_l2(&self) -> f64 {
        let h = self.grid.spacing();
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(k, _)| self.is_valid(*k))
            .map(|(_, v)| v * v)
            .sum();
        (s * h).sqrt()
    }

    /// Rescale to unit grid L2 norm; sign fixed so the largest-magnitude
    /// entry is positive (deterministic orientation).
    pub fn normalized(&self) -> Result<ScalarField> {
        let n = self.norm_l2();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NumericalFailure("cannot normalize a zero field".into()));
        }
        let mut out = self.scale(1.0 / n);
        let k_max = (0..out.len())
            .filter(|&k| out.is_valid(k))
            .max_by(|&a, &b| out.values[a].abs().total_cmp(&out.values[b].abs()))
            .unwrap_or(0);
        if out.values[k_max] < 0.0 {
            out = out.scale(-1.0);
        }
        Ok(out)
    }

    pub fn check_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "[{}, {}] n={} vs [{}, {}] n={}",
                self.grid.x_min(),
                self.grid.x_max(),
                self.grid.len(),
                other.grid.x_min(),
                other.grid.x_max(),
                other.grid.len()
            )))
        }
    }
}

fn merge_masks(a: &Option<Vec<bool>>, b: &Option<Vec<bool>>) -> Option<Vec<bool>> {
    match (a, b) {
        (None, None) => None,
        (Some(m), None) | (None, Some(m)) => Some(m.clone()),
        (Some(ma), Some(mb)) => Some(ma.iter().zip(mb).map(|(&x, &y)| x && y).collect()),
    }
}

fn mask_out(mask: &mut Option<Vec<bool>>, n: usize, k: usize) {
    match mask {
        Some(m) => m[k] = false,
        None => {
            let mut m = vec![true; n];
            m[k] = false;
            *mask = Some(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_length_mismatch_and_nonfinite() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        assert!(ScalarField::from_values(g, vec![0.0; 4]).is_err());
        assert!(ScalarField::from_values(g, vec![f64::NAN; 5]).is_err());
    }

    #[test]
    fn masked_division() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        let num = ScalarField::constant(g, 1.0);
        let den = ScalarField::from_values(g, vec![1.0, 0.0, 2.0, 1e-20, 4.0]).unwrap();
        let q = num.div_masked(&den, 1e-12).unwrap();
        assert!(q.is_valid(0) && q.is_valid(2) && q.is_valid(4));
        assert!(!q.is_valid(1) && !q.is_valid(3));
        assert_eq!(q.value(2), 0.5);
        assert_eq!(q.valid_count(), 3);
    }

    #[test]
    fn mask_propagates_through_arithmetic() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        let a = ScalarField::constant(g, 2.0).masked_where(|x, _| x > 0.9);
        let b = ScalarField::constant(g, 3.0);
        let s = a.add(&b).unwrap();
        assert!(!s.is_valid(3));
        assert_eq!(s.value(0), 5.0);
    }

    #[test]
    fn normalization_is_unit_and_oriented() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let f = ScalarField::from_fn(g, |x| -(x * (1.0 - x)));
        let n = f.normalized().unwrap();
        assert!((n.norm_l2() - 1.0).abs() < 1e-14);
        assert!(n.value(50) > 0.0);
    }
}
