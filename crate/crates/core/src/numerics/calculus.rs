//! Finite differences and trapezoidal quadrature.
//!
//! Everything here is 2nd-order accurate so all residual tolerances live
//! on one O(h^2) budget: central stencils at interior nodes, one-sided
//! 2nd-order stencils at the two boundary nodes, trapezoidal cumulative
//! integrals with an exact partial cell when the anchor sits off-grid.

use crate::error::{Error, Result};
use crate::numerics::field::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOrder {
    First,
    Second,
}

/// Finite-difference derivative of 2nd-order accuracy.
///
/// Interior: central stencils, exact on quadratics. Boundaries: one-sided
/// 3-point (first derivative) and 4-point (second derivative) stencils,
/// also exact on quadratics. A node is masked in the output when any node
/// of its stencil is masked in the input.
pub fn differentiate(f: &ScalarField, order: DiffOrder) -> ScalarField {
    let n = f.len();
    let h = f.grid().spacing();
    let v = f.values();
    let mut out = vec![0.0; n];
    match order {
        DiffOrder::First => {
            for k in 1..n - 1 {
                out[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
            }
            out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        }
        DiffOrder::Second => {
            let h2 = h * h;
            for k in 1..n - 1 {
                out[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
            }
            out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
            out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
        }
    }
    if !f.has_mask() {
        return ScalarField::from_masked_values(*f.grid(), out, vec![true; n])
            .expect("derivative of a finite field is finite");
    }
    // stencil-wide mask propagation
    let reach = match order {
        DiffOrder::First => 1usize,
        DiffOrder::Second => 1,
    };
    let boundary_reach = match order {
        DiffOrder::First => 2usize,
        DiffOrder::Second => 3,
    };
    let mut valid = vec![true; n];
    for k in 0..n {
        let (lo, hi) = if k == 0 {
            (0, boundary_reach.min(n - 1))
        } else if k == n - 1 {
            (n - 1 - boundary_reach.min(n - 1), n - 1)
        } else {
            (k - reach, k + reach)
        };
        valid[k] = (lo..=hi).all(|j| f.is_valid(j));
    }
    for (o, &ok) in out.iter_mut().zip(&valid) {
        if !ok {
            *o = 0.0;
        }
    }
    ScalarField::from_masked_values(*f.grid(), out, valid).expect("lengths match")
}

/// Trapezoidal integral over the whole grid (valid nodes assumed contiguous).
pub fn integrate(f: &ScalarField) -> f64 {
    let h = f.grid().spacing();
    let v = f.values();
    let mut s = 0.0;
    for k in 1..v.len() {
        s += 0.5 * h * (v[k] + v[k - 1]);
    }
    s
}

/// Cumulative trapezoidal integral `F(x) = int_{x0}^{x} f dy` plus step
/// contributions: each jump `(p, q)` adds `q [x > p] - q [x0 > p]`, so point
/// charges enter the cumulative charge without ever being sampled.
///
/// `F(x0) = 0`. The anchor may sit anywhere in the grid span, including the
/// half-cell below the first node of an origin-avoiding grid; the partial
/// cell is integrated with a linearly interpolated (or extrapolated)
/// integrand value, which keeps the result exact for affine `f`.
pub fn integrate_cumulative(
    f: &ScalarField,
    x0: f64,
    jumps: &[(f64, f64)],
) -> Result<ScalarField> {
    let grid = *f.grid();
    let n = f.len();
    let h = grid.spacing();
    if !grid.contains(x0) {
        return Err(Error::invalid(format!(
            "integration anchor {x0} outside grid span [{}, {}]",
            grid.span_start(),
            grid.span_end()
        )));
    }
    for &(p, _) in jumps {
        if !grid.contains(p) {
            return Err(Error::invalid(format!(
                "jump position {p} outside grid span [{}, {}]",
                grid.span_start(),
                grid.span_end()
            )));
        }
    }
    let v = f.values();
    let mut prefix = vec![0.0; n];
    for k in 1..n {
        prefix[k] = prefix[k - 1] + 0.5 * h * (v[k] + v[k - 1]);
    }
    // value of the running integral at the anchor
    let base = if x0 <= grid.node(0) {
        let t = grid.node(0) - x0;
        let f_at = v[0] - (v[1] - v[0]) / h * t;
        -0.5 * t * (f_at + v[0])
    } else if x0 >= grid.node(n - 1) {
        let t = x0 - grid.node(n - 1);
        let f_at = v[n - 1] + (v[n - 1] - v[n - 2]) / h * t;
        prefix[n - 1] + 0.5 * t * (v[n - 1] + f_at)
    } else {
        let j = (((x0 - grid.node(0)) / h).floor() as usize).min(n - 2);
        let t = x0 - grid.node(j);
        let f_at = v[j] + (v[j + 1] - v[j]) / h * t;
        prefix[j] + 0.5 * t * (v[j] + f_at)
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = grid.node(k);
        let mut val = prefix[k] - base;
        for &(p, q) in jumps {
            if x > p {
                val += q;
            }
            if x0 > p {
                val -= q;
            }
        }
        out.push(val);
    }
    let field = ScalarField::from_values(grid, out)?;
    Ok(if f.has_mask() { field.with_mask_of(f) } else { field })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid1D;
    use approx::assert_abs_diff_eq;

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Grid1D::new(-1.0, 1.0, 41).unwrap();
        let f = ScalarField::constant(g, 3.7);
        let d = differentiate(&f, DiffOrder::First);
        assert!(d.values().iter().all(|&v| v.abs() < 1e-13));
    }

    #[test]
    fn stencils_exact_on_quadratics() {
        let g = Grid1D::new(-2.0, 3.0, 57).unwrap();
        let f = ScalarField::from_fn(g, |x| 1.5 * x * x - 2.0 * x + 0.25);
        let d1 = differentiate(&f, DiffOrder::First);
        let d2 = differentiate(&f, DiffOrder::Second);
        for k in 0..g.len() {
            let x = g.node(k);
            assert_abs_diff_eq!(d1.value(k), 3.0 * x - 2.0, epsilon = 1e-11);
            assert_abs_diff_eq!(d2.value(k), 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn sine_derivative_accuracy() {
        let g = Grid1D::new(0.0, std::f64::consts::PI, 201).unwrap();
        let f = ScalarField::from_fn(g, f64::sin);
        let d = differentiate(&f, DiffOrder::First);
        let err = (0..g.len())
            .map(|k| (d.value(k) - g.node(k).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 5e-4, "max |f' - cos| = {err}");
    }

    #[test]
    fn trapezoid_exact_on_constants() {
        let g = Grid1D::new(0.0, 2.0, 11).unwrap();
        let f = ScalarField::constant(g, 1.0);
        let cum = integrate_cumulative(&f, 0.0, &[]).unwrap();
        assert_abs_diff_eq!(cum.value(10), 2.0, epsilon = 1e-14);
        assert_eq!(cum.value(0), 0.0);
    }

    #[test]
    fn jump_contributions() {
        let g = Grid1D::new(-2.0, 2.0, 41).unwrap();
        let f = ScalarField::zeros(g);
        let cum = integrate_cumulative(&f, -2.0, &[(0.0, 1.0)]).unwrap();
        for k in 0..g.len() {
            let want = if g.node(k) > 0.0 { 1.0 } else { 0.0 };
            assert_eq!(cum.value(k), want, "x = {}", g.node(k));
        }
    }

    #[test]
    fn gaussian_total_mass_via_erf_oracle() {
        // independent oracle: int_{-8}^{8} exp(-x^2)/sqrt(pi) = erf(8) (mpmath),
        // which is 1 to well below 1e-10
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        let f = ScalarField::from_fn(g, |x| (-x * x).exp() / std::f64::consts::PI.sqrt());
        let cum = integrate_cumulative(&f, -8.0, &[]).unwrap();
        assert_abs_diff_eq!(cum.value(g.len() - 1), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn cumulative_additive_across_subintervals() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let f = ScalarField::from_fn(g, |x| (3.0 * x).sin() + 0.5);
        let a_c = integrate_cumulative(&f, 0.0, &[]).unwrap();
        let a_b = integrate_cumulative(&f, 0.0, &[]).unwrap().value(50);
        let b_c = integrate_cumulative(&f, g.node(50), &[]).unwrap();
        for k in 0..g.len() {
            assert_abs_diff_eq!(a_c.value(k), a_b + b_c.value(k), epsilon = 1e-13);
        }
    }

    #[test]
    fn off_grid_anchor_partial_cell_exact_for_affine() {
        // anchor at the true origin of a shifted grid
        let g = Grid1D::avoiding_origin(0.0, 1.0, 101).unwrap();
        let f = ScalarField::from_fn(g, |x| 2.0 * x + 1.0);
        let cum = integrate_cumulative(&f, 0.0, &[]).unwrap();
        for k in (0..g.len()).step_by(17) {
            let x = g.node(k);
            assert_abs_diff_eq!(cum.value(k), x * x + x, epsilon = 1e-13);
        }
    }

    #[test]
    fn anchor_outside_span_rejected() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let f = ScalarField::zeros(g);
        assert!(integrate_cumulative(&f, -0.5, &[]).is_err());
        assert!(integrate_cumulative(&f, 0.5, &[(2.0, 1.0)]).is_err());
    }
}
