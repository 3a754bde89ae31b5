//! Commuting matrix tuples, their spectral factorization, and the
//! row-contraction predicate `sum_j T_j T_j^* <= I`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::rng::{ball_point, complex_gaussian, SpectrumSampling};

/// Relative commutator defect accepted as "commuting".
pub const COMMUTE_TOL: f64 = 1e-10;
/// Slack on `||lambda|| <= 1` for joint-spectrum points.
pub const BALL_TOL: f64 = 1e-9;
/// Transition-matrix conditioning accepted by the search.
pub const SEARCH_COND_MAX: f64 = 1e3;
/// Transition-matrix conditioning accepted on validation-only paths.
pub const VALIDATION_COND_MAX: f64 = 1e8;
/// Resampling budget of [`random_spectral_tuple`].
pub const MAX_REJECTIONS: usize = 100;

/// Transition matrix `P` and the diagonals of `D_1..D_d` in
/// `T_j = P D_j P^-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    p: ComplexMatrix,
    diagonals: Vec<Vec<C64>>,
}

impl SpectralData {
    pub fn new(p: ComplexMatrix, diagonals: Vec<Vec<C64>>) -> Result<Self> {
        if diagonals.is_empty() {
            return Err(Error::Dimension("spectral data needs at least one diagonal".into()));
        }
        for (j, diag) in diagonals.iter().enumerate() {
            if diag.len() != p.n() {
                return Err(Error::Dimension(format!(
                    "diagonal {j} has {} entries, transition matrix is {}x{}",
                    diag.len(),
                    p.n(),
                    p.n()
                )));
            }
            if diag.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::ParamOutOfRange(format!("diagonal {j} is not finite")));
            }
        }
        if !p.is_finite() {
            return Err(Error::ParamOutOfRange("transition matrix is not finite".into()));
        }
        let s = Self { p, diagonals };
        for k in 0..s.n() {
            let norm = point_norm(&s.point(k));
            if norm > 1.0 + BALL_TOL {
                return Err(Error::SpectrumOutsideBall { index: k, norm });
            }
        }
        Ok(s)
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn diagonals(&self) -> &[Vec<C64>] {
        &self.diagonals
    }

    pub fn d(&self) -> usize {
        self.diagonals.len()
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    /// Joint eigenvalue `(lambda^1_k, ..., lambda^d_k)`.
    pub fn point(&self, k: usize) -> Vec<C64> {
        self.diagonals.iter().map(|diag| diag[k]).collect()
    }

    pub fn points(&self) -> Vec<Vec<C64>> {
        (0..self.n()).map(|k| self.point(k)).collect()
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            p: self.p,
            diagonals: self
                .diagonals
                .iter()
                .map(|diag| diag.iter().map(|v| v * s).collect())
                .collect(),
        }
    }
}

pub(crate) fn point_norm(z: &[C64]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// A `d`-tuple of equally sized matrices, optionally with the spectral data
/// it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    matrices: Vec<ComplexMatrix>,
    spectral: Option<SpectralData>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::Dimension("a tuple needs at least one matrix".into()));
        };
        let n = first.n();
        if let Some(bad) = matrices.iter().position(|m| m.n() != n) {
            return Err(Error::Dimension(format!("matrix {bad} differs in size from matrix 0")));
        }
        if matrices.iter().any(|m| !m.is_finite()) {
            return Err(Error::ParamOutOfRange("tuple has non-finite entries".into()));
        }
        Ok(Self { matrices, spectral: None })
    }

    /// Attaches spectral data without recomputing the matrices; use
    /// [`MatrixTuple::spectral_consistency`] to check it.
    pub fn with_spectral(matrices: Vec<ComplexMatrix>, spectral: SpectralData) -> Result<Self> {
        let mut t = Self::new(matrices)?;
        if spectral.d() != t.d() || spectral.n() != t.n() {
            return Err(Error::Dimension(format!(
                "spectral data is {}x{}, tuple is {}x{}",
                spectral.d(),
                spectral.n(),
                t.d(),
                t.n()
            )));
        }
        t.spectral = Some(spectral);
        Ok(t)
    }

    /// `T_j = P diag(diagonals[j]) P^-1`, rejecting `P` whose condition
    /// number exceeds `cond_max`.
    pub fn from_spectral(s: SpectralData, cond_max: f64) -> Result<Self> {
        let p_inv = s.p.inverse()?;
        let cond = s.p.operator_norm() * p_inv.operator_norm();
        if cond > cond_max {
            return Err(Error::ConditionExceeded { cond, bound: cond_max });
        }
        let matrices = s
            .diagonals
            .iter()
            .map(|diag| s.p * ComplexMatrix::diag(diag) * p_inv)
            .collect();
        Ok(Self { matrices, spectral: Some(s) })
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn n(&self) -> usize {
        self.matrices[0].n()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &ComplexMatrix {
        &self.matrices[j]
    }

    pub fn spectral(&self) -> Option<&SpectralData> {
        self.spectral.as_ref()
    }

    pub fn into_spectral(self) -> Option<SpectralData> {
        self.spectral
    }

    /// Largest `||T_i T_j - T_j T_i||` over pairs.
    pub fn commutator_defect(&self) -> f64 {
        self.pairs().map(|(a, b)| a.commutator(b).operator_norm()).fold(0.0, f64::max)
    }

    /// Commutator defect scaled by `max(1, ||T_i|| ||T_j||)`.
    pub fn relative_commutator_defect(&self) -> f64 {
        self.pairs()
            .map(|(a, b)| {
                let scale = (a.operator_norm() * b.operator_norm()).max(1.0);
                a.commutator(b).operator_norm() / scale
            })
            .fold(0.0, f64::max)
    }

    pub fn is_commuting(&self) -> bool {
        self.relative_commutator_defect() <= COMMUTE_TOL
    }

    fn pairs(&self) -> impl Iterator<Item = (&ComplexMatrix, &ComplexMatrix)> {
        let m = &self.matrices;
        (0..m.len()).flat_map(move |i| (i + 1..m.len()).map(move |j| (&m[i], &m[j])))
    }

    /// `lambda_max(sum_j T_j T_j^*)`; the tuple is a row contraction iff this
    /// is at most one.
    pub fn row_contraction_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.n());
        for m in &self.matrices {
            sum += &m.outer_gram();
        }
        sum.hermitian_eigenvalues_unchecked()[0]
    }

    /// `lambda_max(sum_j T_j^* T_j)`, the row-contraction defect of the
    /// adjoint tuple.
    pub fn column_contraction_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.n());
        for m in &self.matrices {
            sum += &m.gram();
        }
        sum.hermitian_eigenvalues_unchecked()[0]
    }

    /// `(T_1^*, ..., T_d^*)`. Spectral data carries over as
    /// `((P^-1)^*, conj(diagonals))`.
    pub fn adjoint(&self) -> Self {
        let matrices = self.matrices.iter().map(ComplexMatrix::adjoint).collect();
        let spectral = self.spectral.as_ref().and_then(|s| {
            let q = s.p.inverse().ok()?.adjoint();
            let diagonals = s
                .diagonals
                .iter()
                .map(|diag| diag.iter().map(|v| v.conj()).collect())
                .collect();
            Some(SpectralData { p: q, diagonals })
        });
        Self { matrices, spectral }
    }

    /// Largest `||T_j - P D_j P^-1|| / max(1, ||T_j||)`, or `None` without
    /// spectral data.
    pub fn spectral_consistency(&self) -> Option<Result<f64>> {
        let s = self.spectral.as_ref()?;
        Some(s.p.inverse().map(|p_inv| {
            self.matrices
                .iter()
                .zip(&s.diagonals)
                .map(|(t, diag)| {
                    let rebuilt = s.p * ComplexMatrix::diag(diag) * p_inv;
                    (t - rebuilt).operator_norm() / t.operator_norm().max(1.0)
                })
                .fold(0.0, f64::max)
        }))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrices: self.matrices.iter().map(|m| m.scale_re(s)).collect(),
            spectral: self.spectral.as_ref().map(|sp| sp.scaled(s)),
        }
    }

    /// Rescales so the row-contraction defect is exactly one.
    pub fn scale_to_boundary(&self) -> Result<Self> {
        let defect = self.row_contraction_defect();
        if !(defect > 0.0) {
            return Err(Error::ZeroTuple);
        }
        Ok(self.scaled(defect.sqrt().recip()))
    }
}

/// Random commuting row contraction on the boundary (`defect == 1`), built in
/// diagonalized form: complex-Gaussian `P` resampled until
/// `cond(P) <= cond_max`, joint spectrum drawn in the unit ball of `C^d`.
pub fn random_spectral_tuple<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    n: usize,
    cond_max: f64,
    mode: SpectrumSampling,
) -> Result<MatrixTuple> {
    if d == 0 {
        return Err(Error::Dimension("tuple length must be at least 1".into()));
    }
    if n != 2 && n != 3 {
        return Err(Error::Dimension(format!("matrix size must be 2 or 3, got {n}")));
    }
    let mut p = None;
    for _ in 0..MAX_REJECTIONS {
        let candidate = ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng));
        if matches!(candidate.condition_estimate(), Ok(c) if c <= cond_max) {
            p = Some(candidate);
            break;
        }
    }
    let p = p.ok_or(Error::RejectionExhausted { attempts: MAX_REJECTIONS })?;

    let points: Vec<Vec<C64>> = (0..n).map(|_| ball_point(rng, d, mode)).collect();
    let diagonals = (0..d).map(|j| points.iter().map(|pt| pt[j]).collect()).collect();
    let spectral = SpectralData::new(p, diagonals)?;
    MatrixTuple::from_spectral(spectral, f64::INFINITY)?.scale_to_boundary()
}
