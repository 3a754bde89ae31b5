use serde::{Deserialize, Serialize};

use crate::optimize::grid_golden_max;

pub const LEMMA_GRID: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSupremum {
    pub value: f64,
    pub argmax_alpha: f64,
}

/// `max (u + 2 sqrt(1-alpha^2) v) / (2 - alpha^2)` over the closed quarter
/// disc `u, v >= 0, u^2 + v^2 <= 1`; by Cauchy-Schwarz this is
/// `sqrt(5 - 4 alpha^2) / (2 - alpha^2)`.
pub fn lemma_inner(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    (5.0 - 4.0 * a2).sqrt() / (2.0 - a2)
}

/// Supremum over `alpha in [0, 1)` of [`lemma_inner`].
pub fn lemma_fnd_supremum() -> LemmaSupremum {
    let hi = 1.0 - 1.0 / LEMMA_GRID as f64;
    let m = grid_golden_max(lemma_inner, 0.0, hi, LEMMA_GRID, 1e-12);
    LemmaSupremum { value: m.value, argmax_alpha: m.arg }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_two_over_root_three() {
        let s = lemma_fnd_supremum();
        assert!((s.value - 2.0 / 3f64.sqrt()).abs() < 1e-12, "{}", s.value);
        assert!((s.argmax_alpha - 0.5f64.sqrt()).abs() < 1e-5, "{}", s.argmax_alpha);
    }

    #[test]
    fn endpoint_value() {
        assert!((lemma_inner(0.0) - 5f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(lemma_inner(0.0) < lemma_fnd_supremum().value);
    }
}
