//! Seeded random source for test matrices.
//!
//! The stream is ChaCha20 (`rand_chacha`, seeded through `seed_from_u64`)
//! feeding a Box-Muller transform. Both steps are platform independent, so
//! a seed fixes the output everywhere. Changing either step invalidates
//! the golden files under `tests/golden`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::linalg::{Complex3Vector, ComplexMatrix3, C64, ZERO};
use crate::parametrization::UnitaryParams;
use crate::rotations::RotationAngles;

pub const ALGORITHM: &str = "chacha20+box-muller";

#[derive(Debug, Clone)]
pub struct SeededGenerator {
    seed: u64,
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl SeededGenerator {
    pub fn new(seed: u64) -> Self {
        SeededGenerator {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        ALGORITHM
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let re = self.standard_normal();
        let im = self.standard_normal();
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn complex_gaussian_matrix(&mut self) -> ComplexMatrix3 {
        let mut m = ComplexMatrix3::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = self.complex_normal();
            }
        }
        m
    }

    /// Parameters drawn uniformly over their declared ranges.
    pub fn params(&mut self) -> UnitaryParams {
        self.params_with_margin(0.0)
    }

    /// Parameters drawn uniformly while staying `margin` away from the
    /// degenerate values of χ, μ, θ and the ends of the φ range.
    pub fn params_with_margin(&mut self, margin: f64) -> UnitaryParams {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        let sign = if self.uniform() < 0.5 { -1.0 } else { 1.0 };
        let theta_sign = if self.uniform() < 0.5 { -1.0 } else { 1.0 };
        UnitaryParams {
            rotation: RotationAngles {
                phi: self.uniform_in(-PI, PI),
                theta: theta_sign * self.uniform_in(margin, FRAC_PI_2 - margin),
                varphi: self.uniform_in(margin, PI - margin),
            },
            chi: sign * self.uniform_in(margin, FRAC_PI_4 - margin),
            mu: self.uniform_in(margin, FRAC_PI_2 - margin),
            alpha1: self.uniform_in(-PI, PI),
            alpha2: self.uniform_in(-PI, PI),
            alpha3: self.uniform_in(-PI, PI),
            beta2: self.uniform_in(-PI, PI),
        }
    }

    /// Hermitian matrix with independent Gaussian entries.
    pub fn hermitian(&mut self) -> ComplexMatrix3 {
        let g = self.complex_gaussian_matrix();
        (g + g.adjoint()).scale_re(0.5)
    }

    /// Positive semidefinite Hermitian matrix `G G^H`, trace normalized to 1.
    pub fn hermitian_psd(&mut self) -> ComplexMatrix3 {
        let g = self.complex_gaussian_matrix();
        let r = g * g.adjoint();
        r.scale_re(1.0 / r.trace().re)
    }
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Gaussian matrix.
///
/// Each column is orthogonalized twice against the previous ones. The
/// implied triangular factor has a positive real diagonal, which is the
/// phase convention that makes the result Haar distributed.
pub fn generate_haar_unitary(g: &mut SeededGenerator) -> ComplexMatrix3 {
    let z = g.complex_gaussian_matrix();
    let mut cols = [Complex3Vector([ZERO; 3]); 3];
    for k in 0..3 {
        let mut v = z.col(k);
        for _ in 0..2 {
            for q in cols.iter().take(k) {
                let proj = q.inner(&v);
                v = v - q.scale(proj);
            }
        }
        cols[k] = v.scale(C64::new(1.0 / v.norm(), 0.0));
    }
    ComplexMatrix3::from_cols(cols)
}
