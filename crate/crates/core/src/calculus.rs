//! Functional calculus of scalar maps on commuting pairs.
//!
//! The spectral route `P diag(f(lambda_k)) P^-1` is the primary path; the
//! direct matrix formulas for `F_ND`, `F_D` and Mobius maps exist to
//! cross-check it.

use serde::{Deserialize, Serialize};

use crate::block::BlockForm;
use crate::error::{Error, Result};
use crate::funclass::{eval_ball_auto, Point, ScalarMap};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::tuple::{MatrixTuple, SpectralData};

/// Denominators of `F_D` with a worse condition number are treated as poles.
pub const DENOMINATOR_COND_MAX: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    Direct,
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixFunctionResult {
    pub value: ComplexMatrix,
    pub method: Method,
    /// `cond(P)` for spectral evaluation, `cond` of the inverted denominator
    /// for rational direct evaluation, `1` otherwise.
    pub condition_used: f64,
}

fn require_pair(t: &MatrixTuple) -> Result<()> {
    if t.d() != 2 {
        return Err(Error::Dimension(format!("maps act on pairs, tuple has d = {}", t.d())));
    }
    Ok(())
}

/// `m(T) = P diag(m(lambda_1), ..., m(lambda_n)) P^-1`. Ball stages of the
/// chain move the joint spectrum; the core and disc stages then act on
/// scalars, so no matrix inverse beyond `P^-1` is ever formed.
pub fn apply_spectral(m: &ScalarMap, t: &MatrixTuple) -> Result<MatrixFunctionResult> {
    require_pair(t)?;
    let s = t.spectral().ok_or(Error::NoSpectralData)?;
    let values = s
        .points()
        .iter()
        .map(|pt| m.eval(&[pt[0], pt[1]]))
        .collect::<Result<Vec<_>>>()?;
    let p_inv = s.p().inverse()?;
    Ok(MatrixFunctionResult {
        value: s.p() * ComplexMatrix::diag(&values) * p_inv,
        method: Method::Spectral,
        condition_used: s.p().operator_norm() * p_inv.operator_norm(),
    })
}

/// `(T1^2 + 2 sqrt(1 - alpha^2) T2) / (2 - alpha^2)` without validation.
#[inline]
pub fn fnd_matrix(alpha: f64, t1: &ComplexMatrix, t2: &ComplexMatrix) -> ComplexMatrix {
    let a2 = alpha * alpha;
    let num = t1 * t1 + t2.scale_re(2.0 * (1.0 - a2).sqrt());
    num.scale_re((2.0 - a2).recip())
}

pub fn apply_fnd_direct(alpha: f64, t: &MatrixTuple) -> Result<MatrixFunctionResult> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!("alpha = {alpha} not in [0, 1)")));
    }
    require_pair(t)?;
    Ok(MatrixFunctionResult {
        value: fnd_matrix(alpha, t.matrix(0), t.matrix(1)),
        method: Method::Direct,
        condition_used: 1.0,
    })
}

/// Numerator and denominator of `F_{tau,omega}(T)`.
pub fn fd_parts(
    tau: C64,
    omega: C64,
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
) -> (ComplexMatrix, ComplexMatrix) {
    let n = t1.n();
    let w2 = (t2 * t2).scale(omega * omega);
    let one_minus = ComplexMatrix::identity(n) - t1.scale(tau);
    let num = (t1 * one_minus).scale_re(2.0) - w2.scale(tau.conj());
    let den = one_minus.scale_re(2.0) - w2;
    (num, den)
}

/// `num(T) den(T)^-1`; both factors are polynomials in the commuting pair,
/// so the left and right quotients agree.
pub fn apply_fd_direct(tau: C64, omega: C64, t: &MatrixTuple) -> Result<MatrixFunctionResult> {
    if (tau.norm() - 1.0).abs() > 1e-12 || omega.norm() > 1.0 + 1e-12 {
        return Err(Error::ParamOutOfRange(format!("tau = {tau}, omega = {omega}")));
    }
    require_pair(t)?;
    fd_direct_unchecked(tau, omega, t.matrix(0), t.matrix(1))
}

pub(crate) fn fd_direct_unchecked(
    tau: C64,
    omega: C64,
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
) -> Result<MatrixFunctionResult> {
    let (num, den) = fd_parts(tau, omega, t1, t2);
    let den_inv = den.inverse().map_err(|_| Error::NearPoleMatrix { cond: f64::INFINITY })?;
    let cond = den.operator_norm() * den_inv.operator_norm();
    if !(cond <= DENOMINATOR_COND_MAX) {
        return Err(Error::NearPoleMatrix { cond });
    }
    Ok(MatrixFunctionResult { value: num * den_inv, method: Method::Direct, condition_used: cond })
}

/// `e^{i theta} (M - t I) (I - conj(t) M)^-1`.
pub fn mobius_matrix(t: C64, theta: f64, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if t.norm() >= 1.0 {
        return Err(Error::ParamOutOfRange(format!("|t| = {} must be below 1", t.norm())));
    }
    let den = ComplexMatrix::identity(m.n()) - m.scale(t.conj());
    Ok((m.shift(-t) * den.inverse()?).scale(C64::from_polar(1.0, theta)))
}

/// `[[top_left, top_right], [0, corner]]` as a `3x3` matrix.
fn assemble(top_left: &ComplexMatrix, top_right: [C64; 2], corner: C64) -> ComplexMatrix {
    ComplexMatrix::from_fn(3, |i, j| match (i, j) {
        (0..=1, 0..=1) => top_left[(i, j)],
        (0..=1, 2) => top_right[i],
        (2, 2) => corner,
        _ => ZERO,
    })
}

/// `A1 beta1 + 2 sqrt(1 - alpha^2) beta2`.
fn block_column(b: &BlockForm, alpha: f64) -> [C64; 2] {
    let s2 = 2.0 * (1.0 - alpha * alpha).sqrt();
    let a1b1 = b.a1_block().mul_vec(&b.beta1());
    let beta2 = b.beta2();
    [a1b1[0] + s2 * beta2[0], a1b1[1] + s2 * beta2[1]]
}

/// `F_alpha(T)` from the block decomposition:
/// `[[F_alpha(A1, A2), (A1 beta1 + 2 sqrt(1-alpha^2) beta2)/(2-alpha^2)], [0, 0]]`.
pub fn block_eval_fnd(b: &BlockForm, alpha: f64) -> ComplexMatrix {
    let k = (2.0 - alpha * alpha).recip();
    let col = block_column(b, alpha);
    assemble(&fnd_matrix(alpha, &b.a1_block(), &b.a2_block()), [col[0] * k, col[1] * k], ZERO)
}

/// `m_t(F_alpha(T))` with `m_t(z) = (z - t)/(1 - conj(t) z)`, from blocks:
/// top-left `m_t(F_alpha(A))`, top-right
/// `(conj(t) m_t(F_alpha(A)) + I)(A1 beta1 + 2 sqrt(1-alpha^2) beta2)/(2-alpha^2)`,
/// bottom-right `-t`.
pub fn block_eval_mobius_fnd(b: &BlockForm, alpha: f64, t: C64) -> Result<ComplexMatrix> {
    let inner = fnd_matrix(alpha, &b.a1_block(), &b.a2_block());
    let top_left = mobius_matrix(t, 0.0, &inner)?;
    let k = (2.0 - alpha * alpha).recip();
    let col = block_column(b, alpha);
    let col = [col[0] * k, col[1] * k];
    let top_right = top_left.scale(t.conj()).shift(ONE).mul_vec(&col);
    Ok(assemble(&top_left, [top_right[0], top_right[1]], -t))
}

/// Composes the tuple with the ball automorphism `phi_a` by moving its
/// joint spectrum; `P` is kept.
pub fn apply_ball_auto_tuple(a: &Point, t: &MatrixTuple) -> Result<MatrixTuple> {
    require_pair(t)?;
    let s = t.spectral().ok_or(Error::NoSpectralData)?;
    let moved = s
        .points()
        .iter()
        .map(|pt| eval_ball_auto(a, &[pt[0], pt[1]]))
        .collect::<Result<Vec<_>>>()?;
    let diagonals = (0..2).map(|j| moved.iter().map(|p| p[j]).collect()).collect();
    MatrixTuple::from_spectral(SpectralData::new(*s.p(), diagonals)?, f64::INFINITY)
}

/// Polynomial in two variables, `sum c_{ij} z1^i z2^j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: Vec<(u32, u32, C64)>,
}

impl Polynomial {
    pub fn new(terms: Vec<(u32, u32, C64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(u32, u32, C64)] {
        &self.terms
    }

    pub fn eval(&self, z: &Point) -> C64 {
        self.terms.iter().map(|&(i, j, c)| c * z[0].powu(i) * z[1].powu(j)).sum()
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(i, j, c) in &self.terms {
            for &(k, l, d) in &other.terms {
                terms.push((i + k, j + l, c * d));
            }
        }
        Self { terms }
    }

    /// `p(T1, T2)` by matrix powers.
    pub fn apply_direct(&self, t: &MatrixTuple) -> Result<ComplexMatrix> {
        require_pair(t)?;
        let n = t.n();
        let pow = |m: &ComplexMatrix, k: u32| {
            (0..k).fold(ComplexMatrix::identity(n), |acc, _| acc * m)
        };
        let mut out = ComplexMatrix::zeros(n);
        for &(i, j, c) in &self.terms {
            out += &(pow(t.matrix(0), i) * pow(t.matrix(1), j)).scale(c);
        }
        Ok(out)
    }

    /// `P diag(p(lambda_k)) P^-1`.
    pub fn apply_spectral(&self, t: &MatrixTuple) -> Result<ComplexMatrix> {
        require_pair(t)?;
        let s = t.spectral().ok_or(Error::NoSpectralData)?;
        let values: Vec<C64> = s.points().iter().map(|pt| self.eval(&[pt[0], pt[1]])).collect();
        Ok(s.p() * ComplexMatrix::diag(&values) * s.p().inverse()?)
    }
}
