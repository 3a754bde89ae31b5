use proptest::prelude::*;
use rand::Rng;
use vnball::matrix::{ComplexMatrix, C64};
use vnball::rng::{complex_gaussian, seeded};

fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Largest eigenvalue of `M^* M` by power iteration, written against plain
/// arrays so it shares no code with the closed-form solver.
fn power_iteration_norm(m: &ComplexMatrix, rng: &mut impl Rng) -> f64 {
    let n = m.n();
    let g: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| m[(k, i)].conj() * m[(k, j)]).sum()).collect())
        .collect();
    let mut v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let mut lambda = 0.0;
    for _ in 0..3000 {
        let w: Vec<C64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * v[j]).sum()).collect();
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = w.into_iter().map(|x| x / norm).collect();
    }
    lambda.sqrt()
}

#[test]
fn operator_norm_matches_power_iteration() {
    let mut rng = seeded(2024);
    for k in 0..1000 {
        let n = 2 + k % 2;
        let m = random_matrix(&mut rng, n);
        let exact = m.operator_norm();
        let oracle = power_iteration_norm(&m, &mut rng);
        assert!((exact - oracle).abs() <= 1e-8 * exact.max(1.0), "{exact} vs {oracle}");
    }
}

#[test]
fn eigenvalues_match_trace_and_determinant() {
    let mut rng = seeded(77);
    for _ in 0..1000 {
        let a = random_matrix(&mut rng, 3);
        let h = &a + &a.adjoint();
        let eig = h.hermitian_eigenvalues().unwrap();
        let sum: f64 = eig.iter().sum();
        let prod: f64 = eig.iter().product();
        let scale = h.frobenius().max(1.0);
        assert!((sum - h.trace().re).abs() <= 1e-12 * scale);
        assert!((prod - h.det().re).abs() <= 1e-11 * scale.powi(3));
        assert!(eig.windows(2).all(|w| w[0] >= w[1]));
    }
}

proptest! {
    #[test]
    fn norm_is_submultiplicative(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        prop_assert!((&a * &b).operator_norm() <= a.operator_norm() * b.operator_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn rayleigh_quotient_is_below_top_eigenvalue(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed);
        let a = random_matrix(&mut rng, n);
        let top = a.gram().hermitian_max_eig().unwrap();
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
        let av = a.mul_vec(&v);
        let q = av.iter().map(|x| x.norm_sqr()).sum::<f64>() / v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        prop_assert!(q <= top * (1.0 + 1e-12));
    }

    #[test]
    fn inverse_is_an_involution(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = seeded(seed);
        let a = random_matrix(&mut rng, n);
        prop_assume!(a.condition_estimate().unwrap() < 1e4);
        let back = a.inverse().unwrap().inverse().unwrap();
        prop_assert!((&back - &a).operator_norm() <= 1e-9 * a.operator_norm());
        let id = &a * &a.inverse().unwrap();
        prop_assert!((&id - &ComplexMatrix::identity(n)).operator_norm() <= 1e-10);
    }
}
