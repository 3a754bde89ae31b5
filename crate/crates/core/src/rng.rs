//! Seeded random streams and the complex samplers built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::C64;

/// Every random draw in the crate goes through this generator, so equal
/// seeds give bit-identical output on every platform.
pub type Stream = ChaCha8Rng;

pub fn seeded(seed: u64) -> Stream {
    Stream::seed_from_u64(seed)
}

/// Independent stream for one sample index; reproducible from
/// `(seed, index)` alone, whatever the partitioning of the work.
pub fn derived(seed: u64, index: u64) -> Stream {
    let mut rng = Stream::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// How radii are drawn for points of the ball in `C^d`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSampling {
    /// Uniform with respect to volume: `r = u^(1/2d)`.
    #[default]
    Uniform,
    /// Heavier mass near the sphere: `r = u^(1/4d)`.
    BoundaryBiased,
}

pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, d: usize, mode: SpectrumSampling) -> Vec<C64> {
    let mut z: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let exponent = match mode {
        SpectrumSampling::Uniform => 1.0 / (2 * d) as f64,
        SpectrumSampling::BoundaryBiased => 1.0 / (4 * d) as f64,
    };
    let r = u.powf(exponent);
    if norm > 0.0 {
        for v in &mut z {
            *v *= r / norm;
        }
    }
    z
}

/// Uniform point on the unit sphere of `C^2`.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R) -> [C64; 2] {
    loop {
        let z = [complex_gaussian(rng), complex_gaussian(rng)];
        let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        if n > 1e-12 {
            return [z[0] / n, z[1] / n];
        }
    }
}
