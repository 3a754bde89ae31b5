//! For commuting row-contractive `2x2` pairs, every map into the disc has
//! `||m(T)|| <= 1`.

use proptest::prelude::*;
use rand::Rng;
use vnball::calculus::apply_spectral;
use vnball::funclass::{ScalarMap, Stage};
use vnball::matrix::ComplexMatrix;
use vnball::rng::{ball_point, seeded, sphere_point, unit_phase, SpectrumSampling};
use vnball::tuple::random_spectral_tuple;

fn chain(rng: &mut impl Rng) -> ScalarMap {
    let core = match rng.random_range(0..3) {
        0 => Stage::Fnd { alpha: rng.random::<f64>() },
        1 => Stage::Fd { tau: unit_phase(rng), omega: unit_phase(rng) * rng.random::<f64>().sqrt() },
        _ => Stage::Projection { index: rng.random_range(0..2) },
    };
    let a = ball_point(rng, 2, SpectrumSampling::Uniform);
    let [p, q] = sphere_point(rng);
    let u = ComplexMatrix::from_rows(&[[p, q], [-q.conj(), p.conj()]]).unwrap();
    ScalarMap::new(vec![
        Stage::DiscAuto { t: unit_phase(rng) * rng.random::<f64>() * 0.95, theta: rng.random::<f64>() * 6.3 },
        core,
        Stage::BallAuto { a: [a[0] * 0.95, a[1] * 0.95] },
        Stage::Unitary { u },
    ])
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn chains_are_contractive_on_pairs(seed in any::<u64>(), bias in any::<bool>()) {
        let mut rng = seeded(seed);
        let mode = if bias { SpectrumSampling::BoundaryBiased } else { SpectrumSampling::Uniform };
        let t = random_spectral_tuple(&mut rng, 2, 2, 1e3, mode).unwrap();
        let m = chain(&mut rng);
        if let Ok(r) = apply_spectral(&m, &t) {
            prop_assert!(r.value.operator_norm() <= 1.0 + 1e-6, "{}", r.value.operator_norm());
        }
    }
}

#[test]
fn chains_evaluate_and_stay_contractive() {
    let mut rng = seeded(2);
    let mut evaluated = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let t = random_spectral_tuple(&mut rng, 2, 2, 1e3, SpectrumSampling::Uniform).unwrap();
        if let Ok(r) = apply_spectral(&chain(&mut rng), &t) {
            evaluated += 1;
            worst = worst.max(r.value.operator_norm());
        }
    }
    assert!(evaluated >= 9_900, "{evaluated}");
    assert!(worst <= 1.0 + 1e-6, "{worst}");
}
