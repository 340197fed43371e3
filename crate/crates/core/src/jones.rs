//! 3D Jones vectors, the canonical basis attached to a polarization
//! ellipse, and the two completion vectors that extend a Jones vector to
//! an orthonormal frame.
//!
//! Phases are taken on the full circle `(-π, π]`. Restricting them to
//! `[0, π]` would leave part of the unit sphere unreachable.

use crate::linalg::{cis, Complex3Vector, C64, I, ZERO};
use crate::rotations::{compose_rotation, RotationAngles};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub intensity: f64,
    pub gamma: f64,
    /// Ellipticity angle in `[-π/4, π/4]`; its sign is the handedness.
    pub chi: f64,
}

impl EllipseParams {
    /// Unit intensity.
    pub const fn unit(gamma: f64, chi: f64) -> Self {
        EllipseParams {
            intensity: 1.0,
            gamma,
            chi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompletionParams {
    pub mu: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta2: f64,
}

pub fn intrinsic_jones(p: EllipseParams) -> Complex3Vector {
    let (s, c) = p.chi.sin_cos();
    let k = cis(p.gamma) * p.intensity.sqrt();
    Complex3Vector::new(k * c, k * I * s, ZERO)
}

pub fn jones_in_frame(p: EllipseParams, r: RotationAngles) -> Complex3Vector {
    compose_rotation(r).to_complex().mul_vec(&intrinsic_jones(p))
}

/// `(n1, n2, n3)`: the Jones vector itself, the orthogonal state of
/// opposite handedness in the same plane, and the state along the normal.
pub fn canonical_basis(
    chi: f64,
    gammas: [f64; 3],
) -> (Complex3Vector, Complex3Vector, Complex3Vector) {
    let (s, c) = chi.sin_cos();
    let n1 = intrinsic_jones(EllipseParams::unit(gammas[0], chi));
    let g2 = cis(gammas[1]);
    let n2 = Complex3Vector::new(g2 * I * s, g2 * c, ZERO);
    let n3 = Complex3Vector::new(ZERO, ZERO, cis(gammas[2]));
    (n1, n2, n3)
}

pub fn completion_v2(chi: f64, c: CompletionParams) -> Complex3Vector {
    let (sx, cx) = chi.sin_cos();
    let (sm, cm) = c.mu.sin_cos();
    let a2 = cis(c.alpha2);
    Complex3Vector::new(a2 * I * (cm * sx), a2 * (cm * cx), cis(c.beta2) * sm)
}

pub fn completion_v3(chi: f64, c: CompletionParams) -> Complex3Vector {
    let (sx, cx) = chi.sin_cos();
    let (sm, cm) = c.mu.sin_cos();
    let a3 = cis(c.alpha3);
    Complex3Vector::new(
        a3 * I * (sm * sx),
        a3 * (sm * cx),
        -cis(c.beta2 - c.alpha2 + c.alpha3) * cm,
    )
}

/// `ε^T ε`, the unconjugated self-product. For a unit Jones vector with
/// global phase γ and ellipticity χ it equals `e^{2iγ} cos 2χ` in any frame.
pub fn self_product(v: &Complex3Vector) -> C64 {
    v.bilinear(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix3;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn close(a: &Complex3Vector, b: &Complex3Vector, eps: f64) {
        let d = (*a - *b).norm();
        assert!(d <= eps, "{a:?} vs {b:?}: {d:e}");
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn intrinsic_examples() {
        close(
            &intrinsic_jones(EllipseParams::unit(0.0, 0.0)),
            &Complex3Vector::from_real([1.0, 0.0, 0.0]),
            0.0,
        );
        close(
            &intrinsic_jones(EllipseParams::unit(0.0, FRAC_PI_4)),
            &Complex3Vector::new(c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2), ZERO),
            2e-16,
        );
        let v = intrinsic_jones(EllipseParams {
            intensity: 4.0,
            gamma: FRAC_PI_2,
            chi: -FRAC_PI_4,
        });
        close(&v, &Complex3Vector::new(c(0.0, SQRT_2), c(SQRT_2, 0.0), ZERO), 1e-15);
        assert_eq!(v[2], ZERO);
    }

    #[test]
    fn frame_examples() {
        let p = EllipseParams::unit(0.4, 0.2);
        close(&jones_in_frame(p, RotationAngles::default()), &intrinsic_jones(p), 0.0);
        let v = jones_in_frame(EllipseParams::unit(0.0, 0.0), RotationAngles::new(0.0, FRAC_PI_2, 0.0));
        close(&v, &Complex3Vector::from_real([0.0, 0.0, -1.0]), 1e-16);
    }

    #[test]
    fn frame_matches_explicit_components() {
        let (phi, theta, varphi, chi) = (0.4, 0.5, 0.6, 0.3);
        let v = jones_in_frame(EllipseParams::unit(0.0, chi), RotationAngles::new(phi, theta, varphi));
        let (sp, cp) = f64::sin_cos(phi);
        let (st, ct) = f64::sin_cos(theta);
        let (sv, cv) = f64::sin_cos(varphi);
        let (sx, cx) = f64::sin_cos(chi);
        let a = [cx * (cp * ct * cv + sp * sv), cx * (-sp * ct * cv + cp * sv), -cx * st * cv];
        let b = [sx * (-cp * ct * sv + sp * cv), sx * (sp * ct * sv + cp * cv), sx * st * sv];
        for k in 0..3 {
            assert_abs_diff_eq!(v[k].re, a[k], epsilon = 1e-15);
            assert_abs_diff_eq!(v[k].im, b[k], epsilon = 1e-15);
        }
    }

    #[test]
    fn self_product_is_frame_invariant() {
        let p = EllipseParams::unit(0.7, -0.3);
        let v = jones_in_frame(p, RotationAngles::new(1.0, -0.2, 2.0));
        let expected = cis(2.0 * 0.7) * (2.0 * -0.3f64).cos();
        assert_abs_diff_eq!((self_product(&v) - expected).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn basis_examples() {
        let (n1, n2, n3) = canonical_basis(0.0, [0.0; 3]);
        close(&n1, &Complex3Vector::from_real([1.0, 0.0, 0.0]), 0.0);
        close(&n2, &Complex3Vector::from_real([0.0, 1.0, 0.0]), 0.0);
        close(&n3, &Complex3Vector::from_real([0.0, 0.0, 1.0]), 0.0);

        let h = FRAC_1_SQRT_2;
        let (n1, n2, _) = canonical_basis(FRAC_PI_4, [0.0; 3]);
        close(&n1, &Complex3Vector::new(c(h, 0.0), c(0.0, h), ZERO), 2e-16);
        close(&n2, &Complex3Vector::new(c(0.0, h), c(h, 0.0), ZERO), 2e-16);
    }

    #[test]
    fn completion_reductions() {
        let chi = 0.3;
        let v2 = completion_v2(chi, CompletionParams::default());
        close(&v2, &canonical_basis(chi, [0.0; 3]).1, 1e-16);

        let p = CompletionParams {
            mu: FRAC_PI_2,
            ..Default::default()
        };
        close(&completion_v2(chi, p), &Complex3Vector::from_real([0.0, 0.0, 1.0]), 1e-16);
        close(&completion_v3(chi, p), &canonical_basis(chi, [0.0; 3]).1, 1e-16);

        let p = CompletionParams {
            beta2: PI,
            ..Default::default()
        };
        close(&completion_v3(0.0, p), &Complex3Vector::from_real([0.0, 0.0, 1.0]), 1e-15);
    }

    #[test]
    fn frame_is_unitary_for_sampled_parameters() {
        for k in 0..100 {
            let t = k as f64;
            let chi = FRAC_PI_4 * (0.37 * t).sin();
            let cp = CompletionParams {
                mu: FRAC_PI_2 * (0.5 + 0.5 * (1.3 * t).sin()),
                alpha2: PI * (0.71 * t).sin(),
                alpha3: PI * (1.9 * t).cos(),
                beta2: PI * (0.23 * t).sin(),
            };
            let n1 = canonical_basis(chi, [0.5 * t, 0.0, 0.0]).0;
            let m = ComplexMatrix3::from_cols([n1, completion_v2(chi, cp), completion_v3(chi, cp)]);
            assert!(m.unitarity_distance() <= 1e-14);
            assert!(n1.inner(&completion_v2(chi, cp)).norm() <= 1e-15);
        }
    }
}
