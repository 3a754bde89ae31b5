//! Per-tuple maximization of `||F(T)||` over the parameters of a family.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::calculus::fd_direct_unchecked;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::optimize::{golden_max, grid_golden_max};
use crate::tuple::MatrixTuple;

pub const ALPHA_TOL: f64 = 1e-6;
/// Right end of the `alpha` scan; the supremum over `[0, 1)` may sit at `1`.
pub const ALPHA_MAX: f64 = 1.0 - 1e-12;
const PHASE_TOL: f64 = 1e-6;
const FD_SWEEPS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaOptimum {
    pub alpha: f64,
    pub value: f64,
}

fn require_pair(t: &MatrixTuple) -> Result<(&ComplexMatrix, &ComplexMatrix)> {
    if t.d() != 2 {
        return Err(Error::Dimension(format!("maps act on pairs, tuple has d = {}", t.d())));
    }
    Ok((t.matrix(0), t.matrix(1)))
}

/// Maximizes `||F_alpha(T)||` over `alpha in [0, 1)`: `grid` points on
/// `[0, ALPHA_MAX]`, then golden-section refinement to `1e-6`.
pub fn optimize_alpha(t: &MatrixTuple, grid: usize) -> Result<AlphaOptimum> {
    if grid < 2 {
        return Err(Error::ParamOutOfRange(format!("alpha grid {grid} < 2")));
    }
    let (t1, t2) = require_pair(t)?;
    let sq = t1 * t1;
    let norm_at = |alpha: f64| {
        let a2 = alpha * alpha;
        (&sq + &t2.scale_re(2.0 * (1.0 - a2).sqrt())).operator_norm() / (2.0 - a2)
    };
    let m = grid_golden_max(norm_at, 0.0, ALPHA_MAX, grid, ALPHA_TOL);
    Ok(AlphaOptimum { alpha: m.arg, value: m.value })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdOptimum {
    #[serde(with = "crate::wire::c64")]
    pub tau: C64,
    #[serde(with = "crate::wire::c64")]
    pub omega: C64,
    pub value: f64,
    /// Parameter points skipped as near-poles.
    pub poles_skipped: u64,
}

/// Maximizes `||F_{tau,omega}(T)||` with `tau` on the circle and `omega`
/// on the circle (or in the closed disc with `full_disc`).
///
/// The phase grid has `grid` points in total, split evenly between the two
/// phases (`sqrt(grid)` each); in full-disc mode the same count of radii is
/// added. Coordinate-wise golden-section sweeps refine the best grid point.
/// Points whose denominator is numerically singular are skipped.
pub fn optimize_fd_params(t: &MatrixTuple, grid: usize, full_disc: bool) -> Result<FdOptimum> {
    let (t1, t2) = require_pair(t)?;
    let m = ((grid as f64).sqrt().round() as usize).max(2);
    let mut poles = 0u64;
    let mut eval = |p: [f64; 3]| -> f64 {
        let tau = C64::from_polar(1.0, p[0]);
        let omega = C64::from_polar(p[2], p[1]);
        match fd_direct_unchecked(tau, omega, t1, t2) {
            Ok(r) => r.value.operator_norm(),
            Err(_) => {
                poles += 1;
                f64::NEG_INFINITY
            }
        }
    };

    let radii: Vec<f64> =
        if full_disc { (0..m).map(|l| (l + 1) as f64 / m as f64).collect() } else { vec![1.0] };
    let h = TAU / m as f64;
    let mut best = ([0.0, 0.0, 1.0], f64::NEG_INFINITY);
    for i in 0..m {
        for j in 0..m {
            for &r in &radii {
                let p = [i as f64 * h, j as f64 * h, r];
                let v = eval(p);
                if v > best.1 {
                    best = (p, v);
                }
            }
        }
    }
    if !best.1.is_finite() {
        return Err(Error::NearPoleMatrix { cond: f64::INFINITY });
    }

    let (mut x, mut fx) = best;
    let dims = if full_disc { 3 } else { 2 };
    for sweep in 0..FD_SWEEPS {
        let width = if sweep == 0 { 1.0 } else { 0.25 };
        for k in 0..dims {
            let (lo, hi) = if k == 2 {
                let dr = width / m as f64;
                ((x[2] - dr).max(0.0), (x[2] + dr).min(1.0))
            } else {
                (x[k] - width * h, x[k] + width * h)
            };
            let mut line = |c: f64| {
                let mut y = x;
                y[k] = c;
                eval(y)
            };
            let r = golden_max(&mut line, lo, hi, PHASE_TOL);
            if r.value > fx {
                x[k] = r.arg;
                fx = r.value;
            }
        }
    }
    let wrap = |a: f64| a.rem_euclid(TAU);
    Ok(FdOptimum {
        tau: C64::from_polar(1.0, wrap(x[0])),
        omega: C64::from_polar(x[2], wrap(x[1])),
        value: fx,
        poles_skipped: poles,
    })
}
