//! The printed counterexample tuple `T = (P D1 P^-1, P D2 P^-1)`.

use serde::{Deserialize, Serialize};

use crate::bounds::params::{optimize_alpha, AlphaOptimum};
use crate::calculus::fnd_matrix;
use crate::matrix::{ComplexMatrix, C64};
use crate::tuple::{MatrixTuple, SpectralData};

pub const EXAMPLE_ALPHA: f64 = 0.707107;
pub const EXAMPLE_NORM: f64 = 1.11767;
pub const EXAMPLE_NORM_TOL: f64 = 5e-3;
pub const EXAMPLE_COMMUTE_TOL: f64 = 1e-12;
pub const EXAMPLE_ROW_TOL: f64 = 1e-2;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub const EXAMPLE_D1: [C64; 3] = [c(0.289, 0.31), c(0.02, -0.08), c(-0.22, -0.12)];
pub const EXAMPLE_D2: [C64; 3] = [c(0.008, 0.18), c(-0.03, -0.08), c(0.08, 0.13)];
pub const EXAMPLE_P: [[C64; 3]; 3] = [
    [c(0.1, -0.15), c(0.15, 0.58), c(0.48, 0.4)],
    [c(-0.01, -0.67), c(0.11, 0.53), c(0.17, 0.64)],
    [c(0.18, 0.69), c(-0.07, -0.57), c(-0.26, -0.3)],
];

pub fn example1_tuple() -> MatrixTuple {
    let p = ComplexMatrix::from_rows(&EXAMPLE_P).expect("3x3 literal");
    let s = SpectralData::new(p, vec![EXAMPLE_D1.to_vec(), EXAMPLE_D2.to_vec()]).expect("points in the ball");
    MatrixTuple::from_spectral(s, f64::INFINITY).expect("P is invertible")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example1Report {
    pub alpha: f64,
    pub norm: f64,
    pub target: f64,
    pub norm_tol: f64,
    pub commutator_defect: f64,
    /// `lambda_max(sum T_j T_j^*)`.
    pub row_contraction_defect: f64,
    /// `lambda_max(sum T_j^* T_j)`, the row defect of the adjoint tuple.
    pub column_contraction_defect: f64,
    /// `||F_alpha(T^*)||`, equal to `norm` since `F_alpha` has real coefficients.
    pub adjoint_norm: f64,
    pub cond_p: f64,
    pub optimized: AlphaOptimum,
    pub norm_pass: bool,
    pub commute_pass: bool,
    pub row_contraction_pass: bool,
    pub passed: bool,
}

pub fn verify_example1() -> Example1Report {
    let t = example1_tuple();
    let norm = fnd_matrix(EXAMPLE_ALPHA, t.matrix(0), t.matrix(1)).operator_norm();
    let adj = t.adjoint();
    let adjoint_norm = fnd_matrix(EXAMPLE_ALPHA, adj.matrix(0), adj.matrix(1)).operator_norm();
    let commutator_defect = t.commutator_defect();
    let row = t.row_contraction_defect();
    let p = t.spectral().expect("built from spectral data").p();
    let cond_p = p.condition_estimate().expect("P is invertible");
    let optimized = optimize_alpha(&t, 200).expect("pair");

    let norm_pass = (norm - EXAMPLE_NORM).abs() <= EXAMPLE_NORM_TOL;
    let commute_pass = commutator_defect <= EXAMPLE_COMMUTE_TOL;
    let row_contraction_pass = row <= 1.0 + EXAMPLE_ROW_TOL;
    Example1Report {
        alpha: EXAMPLE_ALPHA,
        norm,
        target: EXAMPLE_NORM,
        norm_tol: EXAMPLE_NORM_TOL,
        commutator_defect,
        row_contraction_defect: row,
        column_contraction_defect: t.column_contraction_defect(),
        adjoint_norm,
        cond_p,
        optimized,
        norm_pass,
        commute_pass,
        row_contraction_pass,
        passed: norm_pass && commute_pass && row_contraction_pass,
    }
}
