//! One-dimensional maximization: uniform grid scan followed by
//! golden-section refinement around the best grid point.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping when the bracket is narrower than `tol`.
pub fn golden_max(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Maximum {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        // ties move right so the left (smaller) argument survives
        if f1 >= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        Maximum { arg: x1, value: f1 }
    } else {
        Maximum { arg: x2, value: f2 }
    }
}

/// Maximizes `f` over `[lo, hi]`: scan `points` equispaced nodes (both ends
/// included), then refine between the neighbours of the best node to `tol`.
/// The smallest argument wins ties, and the refined point only replaces the
/// grid point when it is strictly better.
pub fn grid_golden_max(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
    tol: f64,
) -> Maximum {
    assert!(points >= 2, "grid needs at least two points");
    let h = (hi - lo) / (points - 1) as f64;
    let mut best = Maximum { arg: lo, value: f(lo) };
    for i in 1..points {
        let x = if i == points - 1 { hi } else { lo + i as f64 * h };
        let v = f(x);
        if v > best.value {
            best = Maximum { arg: x, value: v };
        }
    }
    let a = (best.arg - h).max(lo);
    let b = (best.arg + h).min(hi);
    let refined = golden_max(&mut f, a, b, tol);
    if refined.value > best.value {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let m = grid_golden_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 11, 1e-10);
        assert!((m.arg - 0.3).abs() < 1e-8);
        assert!(m.value.abs() < 1e-15);
    }

    #[test]
    fn picks_global_over_local() {
        let f = |x: f64| (-(x - 0.1).powi(2) * 400.0).exp() * 0.5 + (-(x - 0.8).powi(2) * 400.0).exp();
        let m = grid_golden_max(f, 0.0, 1.0, 50, 1e-9);
        assert!((m.arg - 0.8).abs() < 1e-6);
    }

    #[test]
    fn constant_ties_break_to_smallest() {
        let m = grid_golden_max(|_| 0.0, 0.0, 1.0, 20, 1e-6);
        assert_eq!(m.arg, 0.0);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn endpoint_maximum() {
        let m = grid_golden_max(|x| x, 0.0, 2.0, 5, 1e-9);
        assert_eq!(m.arg, 2.0);
    }
}
