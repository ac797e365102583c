//! Symmetric tridiagonal operators and a Sturm-bisection eigensolver.
//!
//! `-d^2/dx^2 + V` under the standard 3-point stencil is symmetric
//! tridiagonal; Dirichlet zeros sit one spacing outside the grid (ghost
//! nodes), so a hard-wall problem on `[0, L]` is discretized on the grid
//! of its interior points. Only a handful of lowest eigenvalues are ever
//! needed here, so bisection on the Sturm count plus inverse iteration
//! beats a full QL sweep.

use crate::error::{Error, Result};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;

#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    grid: Grid1D,
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: ScalarField,
}

impl TridiagonalOperator {
    /// 3-point discretization of `-d^2/dx^2 + V` with implicit Dirichlet
    /// ghost nodes. Masked potential nodes are rejected; restrict the grid
    /// before assembling.
    pub fn schrodinger(potential: &ScalarField) -> Result<Self> {
        if potential.has_mask() {
            return Err(Error::invalid(
                "potential has masked nodes; restrict the grid before building the operator",
            ));
        }
        let h = potential.grid().spacing();
        let n = potential.len();
        let inv_h2 = 1.0 / (h * h);
        let diag = potential.values().iter().map(|&v| 2.0 * inv_h2 + v).collect();
        let offdiag = vec![-inv_h2; n - 1];
        Ok(TridiagonalOperator { diag, offdiag, grid: *potential.grid() })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product.
    pub fn apply(&self, f: &ScalarField) -> Result<ScalarField> {
        if f.len() != self.len() {
            return Err(Error::GridMismatch("operator/field size mismatch".into()));
        }
        let v = f.values();
        let n = self.len();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let mut s = self.diag[k] * v[k];
            if k > 0 {
                s += self.offdiag[k - 1] * v[k - 1];
            }
            if k + 1 < n {
                s += self.offdiag[k] * v[k + 1];
            }
            out[k] = s;
        }
        let field = ScalarField::from_values(self.grid, out)?;
        Ok(if f.has_mask() { field.with_mask_of(f) } else { field })
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::MAX;
        let mut hi = f64::MIN;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo - 1.0, hi + 1.0)
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence via
    /// the LDL^T pivot recurrence, LAPACK-style pivot clamping).
    pub fn count_below(&self, lambda: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0usize;
        let mut q = self.diag[0] - lambda;
        // a vanishing pivot is treated as negative (Sylvester inertia at
        // an exact eigenvalue of a leading minor)
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            q = (self.diag[i] - lambda) - self.offdiag[i - 1] * self.offdiag[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn pivmin(&self) -> f64 {
        let max_e2 = self
            .offdiag
            .iter()
            .map(|e| e * e)
            .fold(1.0f64, f64::max);
        (f64::MIN_POSITIVE * max_e2).max(f64::MIN_POSITIVE)
    }

    fn scale(&self) -> f64 {
        let d = self.diag.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let e = self.offdiag.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        (d + 2.0 * e).max(1.0)
    }
}

const BISECTION_BUDGET: usize = 200;
const INVERSE_ITERATIONS: usize = 4;

/// `k` smallest eigenvalues (ascending) with eigenvectors normalized to
/// unit grid norm `sum psi^2 h = 1`.
///
/// Eigenvalues by bisection on the Sturm count, eigenvectors by inverse
/// iteration with a pivoted banded solve; near-degenerate vectors are
/// re-orthogonalized against already-converged ones.
pub fn lowest_eigenpairs(op: &TridiagonalOperator, k: usize) -> Result<Vec<Eigenpair>> {
    let n = op.len();
    if k == 0 || 4 * k > n {
        return Err(Error::invalid(format!(
            "requested {k} eigenpairs of an order-{n} operator; need 1 <= k <= n/4"
        )));
    }
    let (lo, hi) = op.gershgorin();
    let scale = op.scale();
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        let mut a = lo;
        let mut b = hi;
        let mut converged = false;
        for _ in 0..BISECTION_BUDGET {
            let mid = 0.5 * (a + b);
            if b - a < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                converged = true;
                break;
            }
            if op.count_below(mid) <= j {
                a = mid;
            } else {
                b = mid;
            }
        }
        if !converged && b - a >= 1e-10 * scale {
            return Err(Error::NumericalFailure(format!(
                "bisection for eigenvalue {j} did not converge (bracket width {})",
                b - a
            )));
        }
        values.push(0.5 * (a + b));
    }

    let h = op.grid().spacing();
    let mut pairs: Vec<Eigenpair> = Vec::with_capacity(k);
    for &lambda in values.iter() {
        let shift = lambda + 1e-12 * scale;
        let mut v = vec![1.0; n];
        normalize(&mut v);
        for _ in 0..INVERSE_ITERATIONS {
            v = solve_shifted(op, shift, &v)?;
            for (jj, prev) in pairs.iter().enumerate() {
                if (values[jj] - lambda).abs() < 1e-6 * scale {
                    let pv = prev.vector.values();
                    let dot: f64 = v.iter().zip(pv).map(|(a, b)| a * b).sum();
                    let pp: f64 = pv.iter().map(|p| p * p).sum();
                    for (vi, &pi) in v.iter_mut().zip(pv) {
                        *vi -= dot * pi / pp;
                    }
                }
            }
            normalize(&mut v);
        }
        // grid normalization and deterministic sign
        let s: f64 = v.iter().map(|x| x * x).sum::<f64>() * h;
        let inv = 1.0 / s.sqrt();
        for x in v.iter_mut() {
            *x *= inv;
        }
        let k_max = (0..n)
            .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
            .unwrap_or(0);
        if v[k_max] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        pairs.push(Eigenpair {
            value: lambda,
            vector: ScalarField::from_values(*op.grid(), v)?,
        });
    }
    Ok(pairs)
}

fn normalize(v: &mut [f64]) {
    let n = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
}

/// Solve `(T - shift) v = rhs` by banded LU with partial pivoting; the
/// pivoting introduces one extra superdiagonal of fill.
fn solve_shifted(op: &TridiagonalOperator, shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = op.len();
    let mut sub = vec![0.0; n];
    let mut diag: Vec<f64> = op.diag.iter().map(|d| d - shift).collect();
    let mut sup = vec![0.0; n];
    let mut sup2 = vec![0.0; n];
    let mut x = rhs.to_vec();
    sub[1..n].copy_from_slice(&op.offdiag);
    sup[..n - 1].copy_from_slice(&op.offdiag);

    for i in 0..n - 1 {
        if sub[i + 1].abs() > diag[i].abs() {
            // full row swap; the pattern (col i, i+1, i+2) moves along
            std::mem::swap(&mut diag[i], &mut sub[i + 1]);
            std::mem::swap(&mut sup[i], &mut diag[i + 1]);
            std::mem::swap(&mut sup2[i], &mut sup[i + 1]);
            x.swap(i, i + 1);
        }
        let piv = if diag[i] != 0.0 { diag[i] } else { 1e-300 };
        let m = sub[i + 1] / piv;
        diag[i + 1] -= m * sup[i];
        sup[i + 1] -= m * sup2[i];
        x[i + 1] -= m * x[i];
    }
    let mut v = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= sup[i] * v[i + 1];
        }
        if i + 2 < n {
            s -= sup2[i] * v[i + 2];
        }
        let piv = if diag[i] != 0.0 { diag[i] } else { 1e-300 };
        v[i] = s / piv;
        if !v[i].is_finite() {
            return Err(Error::NumericalFailure(
                "inverse iteration solve produced a non-finite component".into(),
            ));
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stencil_matrix_entries() {
        let g = Grid1D::new(0.0, 2.0, 3).unwrap(); // h = 1
        let v = ScalarField::zeros(g);
        let op = TridiagonalOperator::schrodinger(&v).unwrap();
        assert_eq!(op.diag(), &[2.0, 2.0, 2.0]);
        assert_eq!(op.offdiag(), &[-1.0, -1.0]);
    }

    #[test]
    fn diag_carries_potential() {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        let v = ScalarField::from_fn(g, |x| x * x - 1.0);
        let op = TridiagonalOperator::schrodinger(&v).unwrap();
        let h2 = g.spacing() * g.spacing();
        for k in (0..g.len()).step_by(400) {
            let x = g.node(k);
            assert_abs_diff_eq!(op.diag()[k], 2.0 / h2 + x * x - 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_masked_potential() {
        let g = Grid1D::new(0.0, 1.0, 11).unwrap();
        let v = ScalarField::constant(g, 1.0).masked_where(|x, _| x < 0.2);
        assert!(TridiagonalOperator::schrodinger(&v).is_err());
    }

    #[test]
    fn sturm_count_small_matrix() {
        // [[1,-1],[-1,3]] has eigenvalues 2 -+ sqrt(2)
        let g = Grid1D::new(0.0, 2.0, 3).unwrap();
        let mut op = TridiagonalOperator::schrodinger(&ScalarField::zeros(g)).unwrap();
        op.diag = vec![1.0, 3.0];
        op.offdiag = vec![-1.0];
        assert_eq!(op.count_below(0.0), 0);
        assert_eq!(op.count_below(1.0), 1);
        assert_eq!(op.count_below(4.0), 2);
    }

    #[test]
    fn particle_in_a_box_spectrum() {
        // box [0, pi]: grid the interior points, ghost Dirichlet at 0 and pi
        let n_cells = 2000usize;
        let h = std::f64::consts::PI / n_cells as f64;
        let g = Grid1D::new(h, std::f64::consts::PI - h, n_cells - 1).unwrap();
        let op = TridiagonalOperator::schrodinger(&ScalarField::zeros(g)).unwrap();
        let pairs = lowest_eigenpairs(&op, 3).unwrap();
        for (m, pair) in pairs.iter().enumerate() {
            let want = ((m + 1) * (m + 1)) as f64;
            assert_abs_diff_eq!(pair.value, want, epsilon = 1e-2);
        }
    }

    #[test]
    fn shifted_oscillator_spectrum() {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        let v = ScalarField::from_fn(g, |x| x * x - 1.0);
        let op = TridiagonalOperator::schrodinger(&v).unwrap();
        let pairs = lowest_eigenpairs(&op, 4).unwrap();
        for (m, pair) in pairs.iter().enumerate() {
            assert_abs_diff_eq!(pair.value, 2.0 * m as f64, epsilon = 1e-3);
        }
    }

    #[test]
    fn eigenvectors_orthonormal_and_ground_state_nodeless() {
        let g = Grid1D::new(-8.0, 8.0, 1201).unwrap();
        let v = ScalarField::from_fn(g, |x| x * x - 1.0);
        let op = TridiagonalOperator::schrodinger(&v).unwrap();
        let pairs = lowest_eigenpairs(&op, 4).unwrap();
        let h = g.spacing();
        for i in 0..4 {
            let vi = pairs[i].vector.values();
            let norm: f64 = vi.iter().map(|a| a * a).sum::<f64>() * h;
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
            for j in 0..i {
                let vj = pairs[j].vector.values();
                let dot: f64 = vi.iter().zip(vj).map(|(a, b)| a * b).sum::<f64>() * h;
                assert!(dot.abs() < 1e-8, "<v{i}, v{j}> = {dot}");
            }
        }
        // interior sign changes of the ground state
        let gs = pairs[0].vector.values();
        let flips = gs
            .windows(2)
            .filter(|w| w[0].abs() > 1e-10 && w[1].abs() > 1e-10 && w[0] * w[1] < 0.0)
            .count();
        assert_eq!(flips, 0);
        // eigen-residual against the matrix
        let psi = &pairs[1].vector;
        let hv = op.apply(psi).unwrap();
        let resid = hv.sub(&psi.scale(pairs[1].value)).unwrap().norm_l2();
        assert!(resid < 1e-8, "residual {resid}");
    }

    #[test]
    fn k_bounds_enforced() {
        let g = Grid1D::new(0.0, 1.0, 16).unwrap();
        let op = TridiagonalOperator::schrodinger(&ScalarField::zeros(g)).unwrap();
        assert!(lowest_eigenpairs(&op, 0).is_err());
        assert!(lowest_eigenpairs(&op, 5).is_err());
        assert!(lowest_eigenpairs(&op, 4).is_ok());
    }
}
