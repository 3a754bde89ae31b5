//! Upper-triangular normal form of a commuting `3x3` pair with joint
//! spectrum `{(a1, a2), (0, d2), (0, 0)}`:
//!
//! ```text
//! T1 = [a1 b1 c1]    T2 = [a2 b2 c2]
//!      [ 0  0 e1]         [ 0 d2 e2]
//!      [ 0  0  0]         [ 0  0  0]
//! ```
//!
//! and its block view `T_i = [[A_i, beta_i], [0, 0]]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};
use crate::rng::unit_phase;
use crate::tuple::MatrixTuple;

/// Below this `|a1|` the commuting completion is not solved for.
pub const A1_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockForm {
    #[serde(with = "crate::wire::c64")]
    pub a1: C64,
    #[serde(with = "crate::wire::c64")]
    pub b1: C64,
    #[serde(with = "crate::wire::c64")]
    pub c1: C64,
    #[serde(with = "crate::wire::c64")]
    pub e1: C64,
    #[serde(with = "crate::wire::c64")]
    pub a2: C64,
    #[serde(with = "crate::wire::c64")]
    pub b2: C64,
    #[serde(with = "crate::wire::c64")]
    pub c2: C64,
    #[serde(with = "crate::wire::c64")]
    pub d2: C64,
    #[serde(with = "crate::wire::c64")]
    pub e2: C64,
}

/// Which inequalities on block entries count as "row contractive".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintSet {
    /// `|a1|^2+|b1|^2+|c1|^2+|c2|^2 <= 1`, `|e1|^2+|e2|^2 <= 1`.
    PaperPrinted,
    /// Row norms of `[T1 T2]`:
    /// `|a1|^2+|b1|^2+|c1|^2+|a2|^2+|b2|^2+|c2|^2 <= 1`,
    /// `|e1|^2+|d2|^2+|e2|^2 <= 1`.
    FullRowContraction,
}

impl ConstraintSet {
    pub fn name(self) -> &'static str {
        match self {
            ConstraintSet::PaperPrinted => "paper_printed",
            ConstraintSet::FullRowContraction => "full_row_contraction",
        }
    }
}

impl BlockForm {
    pub fn zero() -> Self {
        Self {
            a1: ZERO,
            b1: ZERO,
            c1: ZERO,
            e1: ZERO,
            a2: ZERO,
            b2: ZERO,
            c2: ZERO,
            d2: ZERO,
            e2: ZERO,
        }
    }

    pub fn a1_block(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => self.a1,
            (0, 1) => self.b1,
            _ => ZERO,
        })
    }

    pub fn a2_block(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => self.a2,
            (0, 1) => self.b2,
            (1, 1) => self.d2,
            _ => ZERO,
        })
    }

    pub fn beta1(&self) -> [C64; 2] {
        [self.c1, self.e1]
    }

    pub fn beta2(&self) -> [C64; 2] {
        [self.c2, self.e2]
    }

    pub fn to_tuple(&self) -> MatrixTuple {
        let t1 = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 0) => self.a1,
            (0, 1) => self.b1,
            (0, 2) => self.c1,
            (1, 2) => self.e1,
            _ => ZERO,
        });
        let t2 = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 0) => self.a2,
            (0, 1) => self.b2,
            (0, 2) => self.c2,
            (1, 1) => self.d2,
            (1, 2) => self.e2,
            _ => ZERO,
        });
        MatrixTuple::new(vec![t1, t2]).expect("block entries are finite")
    }

    /// Joint spectrum read off the diagonals.
    pub fn joint_spectrum(&self) -> [[C64; 2]; 3] {
        [[self.a1, self.a2], [ZERO, self.d2], [ZERO, ZERO]]
    }

    /// Entries `(1,2)`, `(1,3)`, `(2,3)` of `T1 T2 - T2 T1`; all other
    /// entries vanish identically for this zero pattern.
    pub fn commutator_residuals(&self) -> [C64; 3] {
        [
            self.a1 * self.b2 + self.b1 * self.d2 - self.a2 * self.b1,
            self.a1 * self.c2 + self.b1 * self.e2 - self.a2 * self.c1 - self.b2 * self.e1,
            -self.d2 * self.e1,
        ]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            a1: self.a1 * s,
            b1: self.b1 * s,
            c1: self.c1 * s,
            e1: self.e1 * s,
            a2: self.a2 * s,
            b2: self.b2 * s,
            c2: self.c2 * s,
            d2: self.d2 * s,
            e2: self.e2 * s,
        }
    }

    /// Squared left-hand sides of the two inequalities of `set`.
    pub fn constraint_values(&self, set: ConstraintSet) -> (f64, f64) {
        let sq = |vs: &[C64]| vs.iter().map(|v| v.norm_sqr()).sum::<f64>();
        match set {
            ConstraintSet::PaperPrinted => {
                (sq(&[self.a1, self.b1, self.c1, self.c2]), sq(&[self.e1, self.e2]))
            }
            ConstraintSet::FullRowContraction => (
                sq(&[self.a1, self.b1, self.c1, self.a2, self.b2, self.c2]),
                sq(&[self.e1, self.d2, self.e2]),
            ),
        }
    }

    pub fn satisfies(&self, set: ConstraintSet, tol: f64) -> bool {
        let (r1, r2) = self.constraint_values(set);
        r1 <= 1.0 + tol && r2 <= 1.0 + tol
    }

    /// Uniform rescaling to row-contraction defect one. Uniform scaling
    /// keeps the commutator equations (homogeneous of degree two) intact.
    pub fn scale_to_boundary(&self) -> Result<Self> {
        let defect = self.to_tuple().row_contraction_defect();
        if !(defect > 0.0) {
            return Err(Error::ZeroTuple);
        }
        Ok(self.scaled(defect.sqrt().recip()))
    }

    /// Fills `b2` and `c2` so the pair commutes, given the other entries.
    ///
    /// Commutativity for this zero pattern is
    /// `a1 b2 + b1 d2 = a2 b1`, `a1 c2 + b1 e2 = a2 c1 + b2 e1`, `d2 e1 = 0`.
    pub fn complete_commuting(mut self) -> Result<Self> {
        if self.a1.norm() < A1_FLOOR {
            return Err(Error::CommutationUnsatisfiable { a1_abs: self.a1.norm() });
        }
        if self.d2 != ZERO && self.e1 != ZERO {
            return Err(Error::CommutationUnsatisfiable { a1_abs: self.a1.norm() });
        }
        self.b2 = self.b1 * (self.a2 - self.d2) / self.a1;
        self.c2 = (self.a2 * self.c1 + self.b2 * self.e1 - self.b1 * self.e2) / self.a1;
        Ok(self)
    }
}

/// Random commuting block pair with row-contraction defect one.
///
/// `a1, b1, c1, a2, e2` get uniform radii in `[0, 1)` and uniform phases,
/// `d2` is real in `(0, 1]`, `e1 = 0` (forced by `d2 e1 = 0`), and `b2, c2`
/// are solved from the commutator equations.
pub fn random_block_tuple<R: Rng + ?Sized>(rng: &mut R) -> Result<BlockForm> {
    let draw = |rng: &mut R| unit_phase(rng) * rng.random::<f64>();
    let free = BlockForm {
        a1: draw(rng),
        b1: draw(rng),
        c1: draw(rng),
        e1: ZERO,
        a2: draw(rng),
        b2: ZERO,
        c2: ZERO,
        d2: C64::new(1.0 - rng.random::<f64>(), 0.0),
        e2: draw(rng),
    };
    free.complete_commuting()?.scale_to_boundary()
}
