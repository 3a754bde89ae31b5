//! Dense complex matrices of size 2 and 3.
//!
//! Storage is a fixed `3x3` array so values are `Copy` and never touch the
//! heap; only the leading `n x n` block is meaningful.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Relative asymmetry accepted by [`ComplexMatrix::hermitian_max_eig`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// `|det M|` must exceed `SINGULAR_FLOOR * ||M||^n` for inversion.
pub const SINGULAR_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    e: [[C64; 3]; 3],
}

fn check_dim(n: usize) {
    assert!(n == 2 || n == 3, "matrix size must be 2 or 3, got {n}");
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        check_dim(n);
        Self { n, e: [[ZERO; 3]; 3] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.e[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.e[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.e[i][i] = v;
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged input, unsupported sizes
    /// and non-finite entries.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n != 2 && n != 3 {
            return Err(Error::Dimension(format!("matrix must have 2 or 3 rows, got {n}")));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::ParamOutOfRange(format!("entry ({i},{j}) is not finite")));
                }
                m.e[i][j] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|i| self.e[i][..self.n].to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.n).map(|i| self.e[i][i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).map(move |j| self.e[i][j]))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.e[j][i].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(self.n, |i, j| self.e[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(self.n, |i, j| self.e[i][j] * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.e[i][i]).sum()
    }

    /// `self + s * I`
    pub fn shift(&self, s: C64) -> Self {
        let mut m = *self;
        for i in 0..self.n {
            m.e[i][i] += s;
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.e[i][j] * v[j]).sum())
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn det(&self) -> C64 {
        let e = &self.e;
        match self.n {
            2 => e[0][0] * e[1][1] - e[0][1] * e[1][0],
            _ => {
                e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
                    - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
                    + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
            }
        }
    }

    /// Classical adjoint (transposed cofactor matrix).
    pub fn adjugate(&self) -> Self {
        let e = &self.e;
        match self.n {
            2 => {
                let mut m = Self::zeros(2);
                m.e[0][0] = e[1][1];
                m.e[0][1] = -e[0][1];
                m.e[1][0] = -e[1][0];
                m.e[1][1] = e[0][0];
                m
            }
            _ => Self::from_fn(3, |i, j| {
                // cofactor of (j, i)
                let (r0, r1) = other_two(j);
                let (c0, c1) = other_two(i);
                let minor = e[r0][c0] * e[r1][c1] - e[r0][c1] * e[r1][c0];
                if (i + j) % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            }),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let floor = SINGULAR_FLOOR * self.operator_norm().powi(self.n as i32);
        if !(det.norm() > floor) {
            return Err(Error::Singular { det: det.norm(), floor });
        }
        Ok(self.adjugate().scale(det.inv()))
    }

    /// `M* M`, assembled so the result is exactly Hermitian.
    pub fn gram(&self) -> Self {
        let n = self.n;
        let mut g = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: C64 = (0..n).map(|k| self.e[k][i].conj() * self.e[k][j]).sum();
                g.e[i][j] = v;
                g.e[j][i] = v.conj();
            }
            g.e[i][i].im = 0.0;
        }
        g
    }

    /// `M M*`, exactly Hermitian.
    pub fn outer_gram(&self) -> Self {
        let n = self.n;
        let mut g = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: C64 = (0..n).map(|k| self.e[i][k] * self.e[j][k].conj()).sum();
                g.e[i][j] = v;
                g.e[j][i] = v.conj();
            }
            g.e[i][i].im = 0.0;
        }
        g
    }

    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                worst = worst.max((self.e[i][j] - self.e[j][i].conj()).norm());
            }
        }
        worst
    }

    /// Largest eigenvalue of a Hermitian matrix.
    pub fn hermitian_max_eig(&self) -> Result<f64> {
        let asym = self.hermitian_asymmetry();
        if asym > HERMITIAN_TOL * self.max_abs() {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(self.hermitian_eigenvalues_unchecked()[0])
    }

    /// All eigenvalues in descending order. Only the Hermitian part of `self`
    /// is read (real diagonal, upper triangle).
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let asym = self.hermitian_asymmetry();
        if asym > HERMITIAN_TOL * self.max_abs() {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(self.hermitian_eigenvalues_unchecked()[..self.n].to_vec())
    }

    pub(crate) fn hermitian_eigenvalues_unchecked(&self) -> [f64; 3] {
        let e = &self.e;
        if self.n == 2 {
            let (a, d) = (e[0][0].re, e[1][1].re);
            let mid = 0.5 * (a + d);
            let rad = (0.5 * (a - d)).hypot(e[0][1].norm());
            return [mid + rad, mid - rad, f64::NAN];
        }

        let (a, b, c) = (e[0][0].re, e[1][1].re, e[2][2].re);
        let (h01, h02, h12) = (e[0][1], e[0][2], e[1][2]);
        let p1 = h01.norm_sqr() + h02.norm_sqr() + h12.norm_sqr();
        let q = (a + b + c) / 3.0;
        let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
        if p2 == 0.0 {
            return [q, q, q];
        }
        if p1 == 0.0 {
            let mut d = [a, b, c];
            d.sort_by(|x, y| y.total_cmp(x));
            return d;
        }
        let p = (p2 / 6.0).sqrt();
        let (ba, bb, bc) = ((a - q) / p, (b - q) / p, (c - q) / p);
        let (b01, b02, b12) = (h01 / p, h02 / p, h12 / p);
        // det of the Hermitian matrix (H - qI)/p; real by construction
        let det = ba * bb * bc + 2.0 * (b01 * b12 * b02.conj()).re
            - ba * b12.norm_sqr()
            - bb * b02.norm_sqr()
            - bc * b01.norm_sqr();
        let r = (0.5 * det).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let hi = q + 2.0 * p * phi.cos();
        let lo = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        let mid = 3.0 * q - hi - lo;
        [hi, mid, lo]
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.gram().hermitian_eigenvalues_unchecked()[0].max(0.0).sqrt()
    }

    /// `||M|| * ||M^-1||`
    pub fn condition_estimate(&self) -> Result<f64> {
        Ok(self.operator_norm() * self.inverse()?.operator_norm())
    }
}

fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.n && j < self.n);
        &self.e[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.e[i][j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix::from_fn(self.n, |i, j| self.e[i][j] + rhs.e[i][j])
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix::from_fn(self.n, |i, j| self.e[i][j] - rhs.e[i][j])
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| self.e[i][k] * rhs.e[k][j]).sum())
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for ComplexMatrix {
            type Output = ComplexMatrix;
            #[inline]
            fn $f(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            #[inline]
            fn $f(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                (&self).$f(rhs)
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            #[inline]
            fn $f(self, rhs: ComplexMatrix) -> ComplexMatrix {
                self.$f(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        *self = &*self + rhs;
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn adjoint_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.adjoint(), i3);
        let m = ComplexMatrix::diag(&[c(0.0, 1.0), ZERO, ZERO]);
        assert_eq!(m.adjoint(), ComplexMatrix::diag(&[c(0.0, -1.0), ZERO, ZERO]));
        let r = ComplexMatrix::from_fn(3, |i, j| c(i as f64 + 0.5, j as f64 - 1.25));
        assert_eq!(r.adjoint().adjoint(), r);
        assert_eq!(r.adjoint()[(0, 2)], r[(2, 0)].conj());
    }

    #[test]
    fn hermitian_max_eig_examples() {
        assert_eq!(ComplexMatrix::identity(3).hermitian_max_eig().unwrap(), 1.0);
        let d = ComplexMatrix::diag(&[c(0.25, 0.0), c(0.5, 0.0), ZERO]);
        assert_eq!(d.hermitian_max_eig().unwrap(), 0.5);
        let h = ComplexMatrix::from_rows(&[[c(2.0, 0.0), ONE], [ONE, c(2.0, 0.0)]]).unwrap();
        assert!((h.hermitian_max_eig().unwrap() - 3.0).abs() < 1e-15);
        let pair = ComplexMatrix::diag(&[ONE, ONE, ZERO]);
        assert!((pair.hermitian_max_eig().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_eigs_dense_three() {
        // eigenvalues 1, 2, 4 of [[2,1,1],[1,2,1],[1,1,2]] are 1,1,4
        let h = ComplexMatrix::from_fn(3, |i, j| if i == j { c(2.0, 0.0) } else { ONE });
        let ev = h.hermitian_eigenvalues().unwrap();
        assert!((ev[0] - 4.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-7);
        assert!((ev[2] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[[ONE, ONE], [ZERO, ONE]]).unwrap();
        assert!(matches!(m.hermitian_max_eig(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn operator_norm_examples() {
        assert!((ComplexMatrix::identity(3).operator_norm() - 1.0).abs() < 1e-15);
        let m = ComplexMatrix::from_rows(&[[ZERO, c(2.0, 0.0)], [ZERO, ZERO]]).unwrap();
        assert_eq!(m.operator_norm(), 2.0);
        // a permutation times phases is unitary
        let u = ComplexMatrix::from_rows(&[
            [ZERO, C64::from_polar(1.0, 0.3), ZERO],
            [ZERO, ZERO, C64::from_polar(1.0, -1.1)],
            [C64::from_polar(1.0, 2.0), ZERO, ZERO],
        ])
        .unwrap();
        assert!((u.operator_norm() - 1.0).abs() < 1e-12);
        assert!((u.condition_estimate().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.inverse().unwrap(), i3);
        let d = ComplexMatrix::diag(&[c(2.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)]);
        let want = ComplexMatrix::diag(&[c(0.5, 0.0), c(0.25, 0.0), c(0.2, 0.0)]);
        assert!(close(&d.inverse().unwrap(), &want, 1e-16));
        let m = ComplexMatrix::from_rows(&[[c(1.0, 2.0), c(0.0, -1.0)], [c(3.0, 0.5), c(-2.0, 0.0)]])
            .unwrap();
        assert!(close(&(m * m.inverse().unwrap()), &ComplexMatrix::identity(2), 1e-14));
    }

    #[test]
    fn singular_is_typed_error() {
        let m = ComplexMatrix::from_fn(3, |i, j| c((i * 3 + j) as f64, 0.0));
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
        assert!(matches!(ComplexMatrix::zeros(2).inverse(), Err(Error::Singular { .. })));
    }

    #[test]
    fn condition_of_diagonal() {
        let d = ComplexMatrix::diag(&[c(10.0, 0.0), ONE, c(0.1, 0.0)]);
        assert!((d.condition_estimate().unwrap() - 100.0).abs() < 1e-10);
        assert!((ComplexMatrix::identity(3).condition_estimate().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_rows_validates() {
        assert!(ComplexMatrix::from_rows(&[vec![ONE]]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![ONE, ONE], vec![ONE]]).is_err());
        assert!(ComplexMatrix::from_rows(&[[ONE, c(f64::NAN, 0.0)], [ONE, ONE]]).is_err());
    }
}
