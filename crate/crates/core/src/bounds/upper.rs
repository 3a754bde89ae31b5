//! Upper bound for `||F_alpha(T)||` over normalized commuting blocks.
//!
//! After the maximum-modulus normalization `||x||^2 + |y|^2 = 1` the
//! quantity to bound is
//! `(cos(theta) + k sin(theta))^2 + sin(theta)^2` with
//! `k = 2 N / (2 - alpha^2)` and `N = ||A1 beta1 + 2 sqrt(1-alpha^2) beta2||`.
//! With `s = sqrt(1-alpha^2)` and the block zero pattern,
//! `N^2 = |a1 c1 + b1 e1 + 2 s c2|^2 + |2 s e2|^2`, which aligned phases
//! maximize, so the inner problem runs over nonnegative moduli.
//! The `theta` maximum is the top eigenvalue of `[[1, k], [k, k^2 + 1]]`.

use serde::{Deserialize, Serialize};

use crate::block::{BlockForm, ConstraintSet};
use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::optimize::grid_golden_max;

/// Lattice points per hyperspherical angle for the inner seeds.
pub const INNER_LATTICE: usize = 8;
const ASCENT_STARTS: usize = 4;
const ASCENT_STEP: f64 = 0.05;
const ASCENT_MAX_ITERS: usize = 4000;
pub const MIN_GRID: usize = 50;

// Indices into the modulus vector, in `BlockForm` field order.
const A1: usize = 0;
const B1: usize = 1;
const C1: usize = 2;
const E1: usize = 3;
const A2: usize = 4;
const B2: usize = 5;
const C2: usize = 6;
const D2: usize = 7;
const E2: usize = 8;
const VARS: usize = 9;
/// Entries that enter `N`.
const ACTIVE: [usize; 6] = [A1, B1, C1, E1, C2, E2];

type Moduli = [f64; VARS];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub constraints: ConstraintSet,
    pub grid: usize,
    pub value: f64,
    pub alpha: f64,
    /// Maximal `N` at `alpha`.
    pub n_max: f64,
    pub theta: f64,
    /// Maximizing entries (real, nonnegative).
    pub entries: BlockForm,
}

/// The two row groups of `set`, as index lists.
fn groups(set: ConstraintSet) -> [&'static [usize]; 2] {
    match set {
        ConstraintSet::PaperPrinted => [&[A1, B1, C1, C2], &[E1, E2]],
        ConstraintSet::FullRowContraction => [&[A1, B1, C1, A2, B2, C2], &[E1, D2, E2]],
    }
}

fn n_squared(v: &Moduli, s: f64) -> f64 {
    let x = v[A1] * v[C1] + v[B1] * v[E1] + 2.0 * s * v[C2];
    let y = 2.0 * s * v[E2];
    x * x + y * y
}

fn gradient(v: &Moduli, s: f64) -> Moduli {
    let x = v[A1] * v[C1] + v[B1] * v[E1] + 2.0 * s * v[C2];
    let mut g = [0.0; VARS];
    g[A1] = 2.0 * x * v[C1];
    g[C1] = 2.0 * x * v[A1];
    g[B1] = 2.0 * x * v[E1];
    g[E1] = 2.0 * x * v[B1];
    g[C2] = 4.0 * s * x;
    g[E2] = 8.0 * s * s * v[E2];
    g
}

/// Euclidean projection onto the feasible set: nonnegative moduli, each
/// group in its closed unit ball, entries outside both groups zero.
fn project(v: &mut Moduli, set: ConstraintSet) {
    let gs = groups(set);
    for (i, x) in v.iter_mut().enumerate() {
        *x = if gs.iter().any(|g| g.contains(&i)) { x.max(0.0) } else { 0.0 };
    }
    for g in gs {
        let r = g.iter().map(|&i| v[i] * v[i]).sum::<f64>().sqrt();
        if r > 1.0 {
            for &i in g {
                v[i] /= r;
            }
        }
    }
}

/// Points of the nonnegative orthant of `S^{k-1}` on a hyperspherical angle
/// lattice with `m` points per angle, endpoints included.
fn orthant_lattice(k: usize, m: usize) -> Vec<Vec<f64>> {
    if k == 1 {
        return vec![vec![1.0]];
    }
    let step = std::f64::consts::FRAC_PI_2 / (m - 1) as f64;
    let mut out = Vec::new();
    for j in 0..m {
        let phi = j as f64 * step;
        for mut tail in orthant_lattice(k - 1, m) {
            tail.iter_mut().for_each(|t| *t *= phi.sin());
            tail.insert(0, phi.cos());
            out.push(tail);
        }
    }
    out
}

/// Lattice seeds over the entries that enter `N`; the rest stay zero.
fn seeds(set: ConstraintSet) -> Vec<Moduli> {
    let [g1, g2] = groups(set).map(|g| g.iter().copied().filter(|i| ACTIVE.contains(i)).collect::<Vec<_>>());
    let l1 = orthant_lattice(g1.len(), INNER_LATTICE);
    let l2 = orthant_lattice(g2.len(), INNER_LATTICE);
    let mut out = Vec::with_capacity(l1.len() * l2.len());
    for p in &l1 {
        for q in &l2 {
            let mut v = [0.0; VARS];
            g1.iter().zip(p).for_each(|(&i, &x)| v[i] = x);
            g2.iter().zip(q).for_each(|(&i, &x)| v[i] = x);
            out.push(v);
        }
    }
    out
}

fn ascend(mut v: Moduli, s: f64, set: ConstraintSet) -> (f64, Moduli) {
    let mut f = n_squared(&v, s);
    for _ in 0..ASCENT_MAX_ITERS {
        let g = gradient(&v, s);
        let mut w = v;
        w.iter_mut().zip(g).for_each(|(x, gi)| *x += ASCENT_STEP * gi);
        project(&mut w, set);
        let fw = n_squared(&w, s);
        let moved = v.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if fw < f {
            break;
        }
        (v, f) = (w, fw);
        if moved < 1e-14 {
            break;
        }
    }
    (f, v)
}

/// `max N^2` at fixed `s = sqrt(1 - alpha^2)`: lattice scan, then projected
/// gradient ascent from the best few lattice points.
fn inner_max(s: f64, set: ConstraintSet, lattice: &[Moduli]) -> (f64, Moduli) {
    let mut scored: Vec<(f64, usize)> = lattice.iter().enumerate().map(|(i, v)| (n_squared(v, s), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = (f64::NEG_INFINITY, [0.0; VARS]);
    for &(_, i) in scored.iter().take(ASCENT_STARTS) {
        let cand = ascend(lattice[i], s, set);
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best
}

/// `max_theta (cos + k sin)^2 + sin^2` and its maximizer.
pub fn theta_max(k: f64) -> (f64, f64) {
    let tr = k * k + 2.0;
    let lam = 0.5 * (tr + (tr * tr - 4.0).sqrt());
    (lam, (lam - 1.0).atan2(k))
}

fn k_of(alpha: f64, n: f64) -> f64 {
    2.0 * n / (2.0 - alpha * alpha)
}

/// Square root of the maximum of the normalized bound over block entries
/// satisfying `set` and over `alpha in [0, 1)`. `grid` is the number of
/// `alpha` grid points before golden-section refinement.
pub fn upper_bound_main2(set: ConstraintSet, grid: usize) -> Result<UpperBound> {
    if grid < MIN_GRID {
        return Err(Error::ParamOutOfRange(format!("grid {grid} < {MIN_GRID}")));
    }
    let lattice = seeds(set);
    let objective = |alpha: f64| {
        let s = (1.0 - alpha * alpha).sqrt();
        let (n2, _) = inner_max(s, set, &lattice);
        theta_max(k_of(alpha, n2.sqrt())).0
    };
    let hi = 1.0 - 1.0 / grid as f64;
    let best = grid_golden_max(objective, 0.0, hi, grid, 1e-9);

    let s = (1.0 - best.arg * best.arg).sqrt();
    let (n2, v) = inner_max(s, set, &lattice);
    let n_max = n2.sqrt();
    let (lam, theta) = theta_max(k_of(best.arg, n_max));
    let re = |i: usize| C64::new(v[i], 0.0);
    Ok(UpperBound {
        constraints: set,
        grid,
        value: lam.sqrt(),
        alpha: best.arg,
        n_max,
        theta,
        entries: BlockForm {
            a1: re(A1),
            b1: re(B1),
            c1: re(C1),
            e1: re(E1),
            a2: re(A2),
            b2: re(B2),
            c2: re(C2),
            d2: re(D2),
            e2: re(E2),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROOT2_PLUS_ROOT3: f64 = 3.146_264_369_941_972;

    #[test]
    fn printed_set_gives_root2_plus_root3() {
        let u = upper_bound_main2(ConstraintSet::PaperPrinted, 100).unwrap();
        assert!((u.value - ROOT2_PLUS_ROOT3).abs() < 1e-9, "{}", u.value);
        assert!(u.alpha < 1e-6);
        assert!((u.n_max - 2.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!(u.entries.satisfies(ConstraintSet::PaperPrinted, 1e-12));
    }

    #[test]
    fn closed_form_at_pattern() {
        // c2 = e2 = 1, alpha = 0: N = 2 sqrt 2, k = 2 sqrt 2, lambda = 5 + 2 sqrt 6
        let (lam, _) = theta_max(2.0 * 2f64.sqrt());
        assert!((lam - (5.0 + 2.0 * 6f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn theta_maximizer_is_attained() {
        for k in [0.0, 0.3, 1.0, 2.8] {
            let (lam, th) = theta_max(k);
            let q = (th.cos() + k * th.sin()).powi(2) + th.sin().powi(2);
            assert!((q - lam).abs() < 1e-12);
        }
    }

    #[test]
    fn full_set_is_feasible_and_not_larger() {
        let u = upper_bound_main2(ConstraintSet::FullRowContraction, 60).unwrap();
        assert!(u.entries.satisfies(ConstraintSet::FullRowContraction, 1e-12));
        assert!(u.value <= ROOT2_PLUS_ROOT3 + 1e-9);
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(orthant_lattice(1, 8).len(), 1);
        assert_eq!(orthant_lattice(2, 8).len(), 8);
        assert!(orthant_lattice(4, 8).iter().all(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14));
        assert_eq!(seeds(ConstraintSet::PaperPrinted).len(), 8 * 8 * 8 * 8);
    }

    #[test]
    fn rejects_small_grid() {
        assert!(upper_bound_main2(ConstraintSet::PaperPrinted, 10).is_err());
    }
}
