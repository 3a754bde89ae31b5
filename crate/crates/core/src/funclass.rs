//! Scalar maps from the unit ball of `C^2` to the disc: the extremal
//! interpolation families `F_ND`, `F_D`, and their compositions with ball
//! and disc automorphisms.
//!
//! A [`ScalarMap`] is a chain written outermost-first, in ordinary
//! composition order: `[m, h, A, U]` means `m(h(A(U z)))`. Reading from
//! the right, a chain is a run of ball-to-ball stages, exactly one
//! disc-valued stage, then a run of disc automorphisms.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE};

pub type Point = [C64; 2];

/// Slack on `||z|| <= 1` for evaluation inputs.
pub const POINT_TOL: f64 = 1e-9;
/// `|2(1 - tau z1) - omega^2 z2^2|` below this is a pole.
pub const POLE_FLOOR: f64 = 1e-14;
const UNIMODULAR_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn norm(z: &Point) -> f64 {
    (z[0].norm_sqr() + z[1].norm_sqr()).sqrt()
}

fn check_point(z: &Point) -> Result<()> {
    let n = norm(z);
    if n > 1.0 + POINT_TOL || !n.is_finite() {
        return Err(Error::ParamOutOfRange(format!("point norm {n} outside the closed ball")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!("alpha = {alpha} not in [0, 1)")));
    }
    Ok(())
}

fn check_fd(tau: C64, omega: C64) -> Result<()> {
    if (tau.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::ParamOutOfRange(format!("|tau| = {} is not 1", tau.norm())));
    }
    if omega.norm() > 1.0 + UNIMODULAR_TOL {
        return Err(Error::ParamOutOfRange(format!("|omega| = {} exceeds 1", omega.norm())));
    }
    Ok(())
}

/// `F_alpha(z) = (z1^2 + 2 sqrt(1 - alpha^2) z2) / (2 - alpha^2)`.
pub fn eval_fnd(alpha: f64, z: &Point) -> Result<C64> {
    check_alpha(alpha)?;
    check_point(z)?;
    Ok(fnd_raw(alpha, z))
}

#[inline]
pub(crate) fn fnd_raw(alpha: f64, z: &Point) -> C64 {
    let a2 = alpha * alpha;
    (z[0] * z[0] + 2.0 * (1.0 - a2).sqrt() * z[1]) / (2.0 - a2)
}

/// `F_{tau,omega}(z) = (2 z1 (1 - tau z1) - conj(tau) omega^2 z2^2) / (2 (1 - tau z1) - omega^2 z2^2)`.
pub fn eval_fd(tau: C64, omega: C64, z: &Point) -> Result<C64> {
    check_fd(tau, omega)?;
    check_point(z)?;
    let w2 = omega * omega * z[1] * z[1];
    let one_minus = ONE - tau * z[0];
    let den = 2.0 * one_minus - w2;
    if den.norm() <= POLE_FLOOR {
        return Err(Error::NearPole { modulus: den.norm() });
    }
    Ok((2.0 * z[0] * one_minus - tau.conj() * w2) / den)
}

/// `e^{i theta} (z - t) / (1 - conj(t) z)`.
pub fn eval_disc_auto(t: C64, theta: f64, z: C64) -> Result<C64> {
    if t.norm() >= 1.0 {
        return Err(Error::ParamOutOfRange(format!("|t| = {} must be below 1", t.norm())));
    }
    if z.norm() > 1.0 + POINT_TOL {
        return Err(Error::ParamOutOfRange(format!("|z| = {} outside the closed disc", z.norm())));
    }
    Ok(C64::from_polar(1.0, theta) * (z - t) / (ONE - t.conj() * z))
}

/// Involutive ball automorphism `phi_a` exchanging `0` and `a`:
///
/// `phi_a(z) = (a - P_a z - sqrt(1 - |a|^2) Q_a z) / (1 - <z, a>)`
///
/// with `P_a` the orthogonal projection onto `C a` and `Q_a = I - P_a`.
/// `phi_0` is taken to be the identity.
pub fn eval_ball_auto(a: &Point, z: &Point) -> Result<Point> {
    let aa = a[0].norm_sqr() + a[1].norm_sqr();
    if aa >= 1.0 || !aa.is_finite() {
        return Err(Error::ParamOutOfRange(format!("|a| = {} must be below 1", aa.sqrt())));
    }
    check_point(z)?;
    if aa == 0.0 {
        return Ok(*z);
    }
    let za = z[0] * a[0].conj() + z[1] * a[1].conj();
    let s = (1.0 - aa).sqrt();
    let den = ONE - za;
    let proj = [a[0] * (za / aa), a[1] * (za / aa)];
    Ok([
        (a[0] - proj[0] - s * (z[0] - proj[0])) / den,
        (a[1] - proj[1] - s * (z[1] - proj[1])) / den,
    ])
}

fn apply_unitary(u: &ComplexMatrix, z: &Point) -> Point {
    [u[(0, 0)] * z[0] + u[(0, 1)] * z[1], u[(1, 0)] * z[0] + u[(1, 1)] * z[1]]
}

/// Serde helper for a point of `C^2`.
mod point_wire {
    use super::Point;
    use crate::wire::{from_wire, to_wire, ComplexWire};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        [to_wire(p[0]), to_wire(p[1])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let [x, y] = <[ComplexWire; 2]>::deserialize(d)?;
        Ok([from_wire(x).map_err(D::Error::custom)?, from_wire(y).map_err(D::Error::custom)?])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Stage {
    Fnd {
        alpha: f64,
    },
    Fd {
        #[serde(with = "crate::wire::c64")]
        tau: C64,
        #[serde(with = "crate::wire::c64")]
        omega: C64,
    },
    DiscAuto {
        #[serde(with = "crate::wire::c64")]
        t: C64,
        theta: f64,
    },
    BallAuto {
        #[serde(with = "point_wire")]
        a: Point,
    },
    Unitary {
        #[serde(rename = "U")]
        u: ComplexMatrix,
    },
    /// `z -> z_index`.
    Projection {
        index: usize,
    },
    Constant {
        #[serde(with = "crate::wire::c64")]
        value: C64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StageKind {
    Ball,
    Scalar,
    Disc,
}

impl Stage {
    fn kind(&self) -> StageKind {
        match self {
            Stage::BallAuto { .. } | Stage::Unitary { .. } => StageKind::Ball,
            Stage::DiscAuto { .. } => StageKind::Disc,
            Stage::Fnd { .. } | Stage::Fd { .. } | Stage::Projection { .. } | Stage::Constant { .. } => {
                StageKind::Scalar
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Stage::Fnd { alpha } => check_alpha(*alpha),
            Stage::Fd { tau, omega } => check_fd(*tau, *omega),
            Stage::DiscAuto { t, theta } => {
                if t.norm() >= 1.0 || !theta.is_finite() {
                    return Err(Error::ParamOutOfRange(format!("disc automorphism t = {t}")));
                }
                Ok(())
            }
            Stage::BallAuto { a } => {
                if norm(a) >= 1.0 {
                    return Err(Error::ParamOutOfRange(format!("|a| = {} must be below 1", norm(a))));
                }
                Ok(())
            }
            Stage::Unitary { u } => {
                if u.n() != 2 {
                    return Err(Error::Dimension("coordinate unitary must be 2x2".into()));
                }
                let defect = (u.gram() - ComplexMatrix::identity(2)).max_abs();
                if defect > UNITARY_TOL {
                    return Err(Error::ParamOutOfRange(format!("U is not unitary ({defect:.3e})")));
                }
                Ok(())
            }
            Stage::Projection { index } => {
                if *index > 1 {
                    return Err(Error::ParamOutOfRange(format!("projection index {index}")));
                }
                Ok(())
            }
            Stage::Constant { value } => {
                if value.norm() > 1.0 {
                    return Err(Error::ParamOutOfRange(format!("|constant| = {} > 1", value.norm())));
                }
                Ok(())
            }
        }
    }
}

/// Intermediate value while walking a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Value {
    Point(Point),
    Scalar(C64),
}

fn apply_stage(stage: &Stage, v: Value) -> Result<Value> {
    let bad = || Error::MalformedChain(format!("{stage:?} received the wrong kind of input"));
    Ok(match (stage, v) {
        (Stage::Fnd { alpha }, Value::Point(z)) => Value::Scalar(eval_fnd(*alpha, &z)?),
        (Stage::Fd { tau, omega }, Value::Point(z)) => Value::Scalar(eval_fd(*tau, *omega, &z)?),
        (Stage::Projection { index }, Value::Point(z)) => {
            check_point(&z)?;
            Value::Scalar(z[*index])
        }
        (Stage::Constant { value }, Value::Point(_)) => Value::Scalar(*value),
        (Stage::DiscAuto { t, theta }, Value::Scalar(z)) => Value::Scalar(eval_disc_auto(*t, *theta, z)?),
        (Stage::BallAuto { a }, Value::Point(z)) => Value::Point(eval_ball_auto(a, &z)?),
        (Stage::Unitary { u }, Value::Point(z)) => {
            check_point(&z)?;
            Value::Point(apply_unitary(u, &z))
        }
        _ => return Err(bad()),
    })
}

/// Applies `stages` right to left.
pub fn eval_stages(stages: &[Stage], input: Value) -> Result<Value> {
    stages.iter().rev().try_fold(input, |v, s| apply_stage(s, v))
}

/// Holomorphic map from the ball of `C^2` into the closed disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainWire", into = "ChainWire")]
pub struct ScalarMap {
    chain: Vec<Stage>,
    scalar_at: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainWire {
    chain: Vec<Stage>,
}

impl TryFrom<ChainWire> for ScalarMap {
    type Error = Error;
    fn try_from(w: ChainWire) -> Result<Self> {
        ScalarMap::new(w.chain)
    }
}

impl From<ScalarMap> for ChainWire {
    fn from(m: ScalarMap) -> Self {
        ChainWire { chain: m.chain }
    }
}

impl ScalarMap {
    pub fn new(chain: Vec<Stage>) -> Result<Self> {
        for s in &chain {
            s.validate()?;
        }
        let scalars: Vec<usize> =
            chain.iter().enumerate().filter(|(_, s)| s.kind() == StageKind::Scalar).map(|(i, _)| i).collect();
        let [scalar_at] = scalars[..] else {
            return Err(Error::MalformedChain(format!(
                "expected exactly one disc-valued stage, found {}",
                scalars.len()
            )));
        };
        if let Some(i) = chain[..scalar_at].iter().position(|s| s.kind() != StageKind::Disc) {
            return Err(Error::MalformedChain(format!(
                "stage {i} is applied after the disc-valued stage but is not a disc automorphism"
            )));
        }
        if let Some(i) = chain[scalar_at + 1..].iter().position(|s| s.kind() != StageKind::Ball) {
            return Err(Error::MalformedChain(format!(
                "stage {} feeds the disc-valued stage but is not a ball map",
                scalar_at + 1 + i
            )));
        }
        Ok(Self { chain, scalar_at })
    }

    pub fn fnd(alpha: f64) -> Result<Self> {
        Self::new(vec![Stage::Fnd { alpha }])
    }

    pub fn fd(tau: C64, omega: C64) -> Result<Self> {
        Self::new(vec![Stage::Fd { tau, omega }])
    }

    pub fn projection(index: usize) -> Result<Self> {
        Self::new(vec![Stage::Projection { index }])
    }

    pub fn constant(value: C64) -> Result<Self> {
        Self::new(vec![Stage::Constant { value }])
    }

    pub fn chain(&self) -> &[Stage] {
        &self.chain
    }

    /// The single disc-valued stage.
    pub fn core(&self) -> &Stage {
        &self.chain[self.scalar_at]
    }

    /// Disc automorphisms applied after the core, outermost first.
    pub fn outer(&self) -> &[Stage] {
        &self.chain[..self.scalar_at]
    }

    /// Ball stages applied before the core, outermost first.
    pub fn inner(&self) -> BallMap {
        BallMap { stages: self.chain[self.scalar_at + 1..].to_vec() }
    }

    /// `m o self`.
    pub fn then_disc_auto(&self, t: C64, theta: f64) -> Result<Self> {
        let mut chain = vec![Stage::DiscAuto { t, theta }];
        chain.extend(self.chain.iter().cloned());
        Self::new(chain)
    }

    /// `self o b`.
    pub fn after(&self, b: &BallMap) -> Result<Self> {
        let mut chain = self.chain.clone();
        chain.extend(b.stages.iter().cloned());
        Self::new(chain)
    }

    pub fn eval(&self, z: &Point) -> Result<C64> {
        match eval_stages(&self.chain, Value::Point(*z))? {
            Value::Scalar(v) => Ok(v),
            Value::Point(_) => unreachable!("validated chain ends in a scalar"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map serialization is infallible")
    }
}

/// Composition of ball automorphisms and coordinate unitaries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BallMap {
    stages: Vec<Stage>,
}

impl BallMap {
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        for (i, s) in stages.iter().enumerate() {
            s.validate()?;
            if s.kind() != StageKind::Ball {
                return Err(Error::MalformedChain(format!("stage {i} is not a ball map")));
            }
        }
        Ok(Self { stages })
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn apply(&self, z: &Point) -> Result<Point> {
        match eval_stages(&self.stages, Value::Point(*z))? {
            Value::Point(p) => Ok(p),
            Value::Scalar(_) => unreachable!("ball stages return points"),
        }
    }
}

// R2 low-discrepancy increments (inverse powers of the plastic number).
const R2_A1: f64 = 0.754_877_666_246_692_8;
const R2_A2: f64 = 0.569_840_290_998_053_3;

fn sphere_at(eta: f64, phi1: f64, phi2: f64) -> Point {
    [C64::from_polar(eta.cos(), phi1), C64::from_polar(eta.sin(), phi2)]
}

/// Estimates `sup |m|` over the ball by maximum modulus on the sphere:
/// a quasi-uniform grid of `resolution^2` sphere points, then pattern-search
/// ascent from the best few. Points where `m` cannot be evaluated (poles on
/// the sphere) are skipped.
pub fn sup_on_ball(m: &ScalarMap, resolution: usize) -> Result<f64> {
    if resolution < 10 {
        return Err(Error::ParamOutOfRange(format!("resolution {resolution} < 10")));
    }
    let modulus = |p: [f64; 3]| {
        m.eval(&sphere_at(p[0], p[1], p[2])).map(|v| v.norm()).unwrap_or(f64::NEG_INFINITY)
    };
    let count = resolution * resolution;
    let mut best: Vec<(f64, [f64; 3])> = Vec::with_capacity(count);
    for i in 0..count {
        // |z1|^2 stratified uniformly matches the surface measure
        let u = (i as f64 + 0.5) / count as f64;
        let p = [
            u.sqrt().acos(),
            TAU * (0.5 + i as f64 * R2_A1).fract(),
            TAU * (0.5 + i as f64 * R2_A2).fract(),
        ];
        best.push((modulus(p), p));
    }
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    best.truncate(8);

    let mut sup = best.first().map_or(f64::NEG_INFINITY, |b| b.0);
    for &(start_val, start) in &best {
        if !start_val.is_finite() {
            continue;
        }
        let (mut x, mut fx) = (start, start_val);
        let mut step = [0.5 * PI / resolution as f64, TAU / resolution as f64, TAU / resolution as f64];
        while step[1] > 1e-10 {
            let mut moved = false;
            for k in 0..3 {
                for dir in [1.0, -1.0] {
                    let mut y = x;
                    y[k] += dir * step[k];
                    y[0] = y[0].clamp(0.0, 0.5 * PI);
                    let fy = modulus(y);
                    if fy > fx {
                        (x, fx) = (y, fy);
                        moved = true;
                    }
                }
            }
            if !moved {
                for s in &mut step {
                    *s *= 0.5;
                }
            }
        }
        sup = sup.max(fx);
    }
    Ok(sup.max(0.0))
}

/// Ball map sending `w` to `0` and `z` to `(x, 0)` with `x > 0`, plus `x`
/// (the pseudo-hyperbolic distance between `z` and `w`).
pub fn normalize_pair(z: &Point, w: &Point) -> Result<(BallMap, f64)> {
    if norm(z) >= 1.0 || norm(w) >= 1.0 {
        return Err(Error::ParamOutOfRange("points must lie in the open ball".into()));
    }
    if (z[0] - w[0]).norm() + (z[1] - w[1]).norm() < 1e-15 {
        return Err(Error::DegenerateInput("z and w coincide".into()));
    }
    let moved = eval_ball_auto(w, z)?;
    let x = norm(&moved);
    let u = ComplexMatrix::from_rows(&[
        [moved[0].conj() / x, moved[1].conj() / x],
        [-moved[1] / x, moved[0] / x],
    ])?;
    let map = BallMap::new(vec![Stage::Unitary { u }, Stage::BallAuto { a: *w }])?;
    Ok((map, x))
}

/// Unitary `diag(d0, d1)`.
pub fn diagonal_unitary(d0: C64, d1: C64) -> ComplexMatrix {
    ComplexMatrix::diag(&[d0, d1])
}
