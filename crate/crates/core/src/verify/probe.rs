//! Square-integrability probe via nested tail windows.

use crate::numerics::field::ScalarField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    Divergent,
    Convergent,
}

#[derive(Debug, Clone)]
pub struct ProbeOutcome {
    pub classification: Divergence,
    /// `int |f|^2` over nested windows of doubling width extending toward
    /// the boundary (last entry hugs the boundary).
    pub tail_integrals: Vec<f64>,
}

/// Growth factor between consecutive tail windows that flags divergence.
pub const DIVERGENCE_RATIO: f64 = 1.5;

/// Classify boundary behavior of `|f|^2`.
///
/// Windows are anchored a quarter span inside the grid and double toward
/// the probed boundary; each integral contains the previous one, so the
/// sequence increases monotonically. `Divergent` when the last three values
/// are strictly increasing with consecutive ratios of at least 1.5: the
/// sliver closest to the boundary then dominates everything accumulated
/// before it, which is exactly how a non-normalizable tail behaves. Masked
/// nodes contribute zero.
pub fn square_integrability_probe(f: &ScalarField, side: Side) -> ProbeOutcome {
    let n = f.len();
    let h = f.grid().spacing();
    let anchor = (n / 4).max(8).min(n - 1);
    let mut widths = Vec::new();
    let mut w = anchor;
    while w >= 2 {
        widths.push(w);
        w /= 2;
    }
    widths.reverse();
    let sq = |k: usize| {
        if f.is_valid(k) {
            let v = f.value(k);
            v * v
        } else {
            0.0
        }
    };
    let mut vals = Vec::with_capacity(widths.len());
    for &w in &widths {
        let (lo, hi) = match side {
            Side::Left => (anchor - w, anchor),
            Side::Right => (n - 1 - anchor, n - 1 - anchor + w),
        };
        let mut s = 0.0;
        for k in lo..hi {
            s += 0.5 * h * (sq(k) + sq(k + 1));
        }
        vals.push(s);
    }
    // widths grow away from the anchor; reorder so the last window is the
    // one reaching the boundary
    let classification = if vals.len() >= 3 {
        let m = vals.len();
        let (a, b, c) = (vals[m - 3], vals[m - 2], vals[m - 1]);
        if a < b && b < c && b >= DIVERGENCE_RATIO * a && c >= DIVERGENCE_RATIO * b {
            Divergence::Divergent
        } else {
            Divergence::Convergent
        }
    } else {
        Divergence::Convergent
    };
    ProbeOutcome { classification, tail_integrals: vals }
}
