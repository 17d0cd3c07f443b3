//! One-dimensional derivative-free minimization.

/// 1 / golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` or after `max_iter`
/// iterations and returns the midpoint of the final bracket.
pub fn golden_section<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while (hi - lo) > tol && iter < max_iter {
        iter += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of [`grid_bracket`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    /// The best grid point is interior: the minimum lies in `[lo, hi]`.
    Interior { lo: f64, hi: f64 },
    /// The best grid point is on the edge of the scanned range.
    Edge { at: f64 },
}

/// Scans `points` evenly spaced values on `[lo, hi]` and brackets the best one
/// by its neighbours.
pub fn grid_bracket<F>(f: F, lo: f64, hi: f64, points: usize) -> Bracket
where
    F: Fn(f64) -> f64,
{
    assert!(points >= 3, "grid needs at least three points");
    let step = (hi - lo) / (points - 1) as f64;
    let at = |i: usize| lo + step * i as f64;
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for i in 0..points {
        let value = f(at(i));
        // strict comparison keeps the first minimum on plateaus
        if value < best_value {
            best = i;
            best_value = value;
        }
    }
    if best == 0 || best == points - 1 {
        Bracket::Edge { at: at(best) }
    } else {
        Bracket::Interior {
            lo: at(best - 1),
            hi: at(best + 1),
        }
    }
}
