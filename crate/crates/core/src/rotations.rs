//! Proper orthogonal matrices built from three Euler-type angles.
//!
//! The composed rotation is
//!
//! ```text
//!     [ cϕ cθ cφ + sϕ sφ    -cϕ cθ sφ + sϕ cφ    cϕ sθ ]
//! Q = [ -sϕ cθ cφ + cϕ sφ    sϕ cθ sφ + cϕ cφ   -sϕ sθ ]
//!     [ -sθ cφ               sθ sφ               cθ    ]
//! ```
//!
//! which equals `rot_z(-ϕ) · rot_y(-θ) · rot_z(φ)`. Its third column is the
//! normal of the polarization plane and its first column is the major axis.

use std::f64::consts::{PI, TAU};
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix3, Tolerances};

/// Below this value of `|sin θ|` the angles ϕ and φ are not separable.
///
/// It is kept far below the general degeneracy gate: dropping φ at
/// `sin θ = s` costs up to `2s` in reconstruction accuracy.
pub const GIMBAL_GATE: f64 = 1e-14;

/// A 3x3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealMatrix3(pub [[f64; 3]; 3]);

impl RealMatrix3 {
    pub fn identity() -> Self {
        RealMatrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn from_cols(cols: [[f64; 3]; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (c, col) in cols.iter().enumerate() {
            for r in 0..3 {
                m[r][c] = col[r];
            }
        }
        RealMatrix3(m)
    }

    pub fn col(&self, c: usize) -> [f64; 3] {
        [self.0[0][c], self.0[1][c], self.0[2][c]]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        RealMatrix3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn mul_vec(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = &self.0;
        [0, 1, 2].map(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                s += (self.0[r][c] - other.0[r][c]).powi(2);
            }
        }
        s.sqrt()
    }

    /// `||Q^T Q - I||_F`.
    pub fn orthogonality_distance(&self) -> f64 {
        (self.transpose() * *self).frobenius_distance(&Self::identity())
    }

    pub fn is_proper_orthogonal(&self, tol: f64) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
            && self.orthogonality_distance() <= tol
            && (self.det() - 1.0).abs() <= tol
    }

    pub fn to_complex(&self) -> ComplexMatrix3 {
        ComplexMatrix3::from_real(self.0)
    }
}

impl Mul for RealMatrix3 {
    type Output = RealMatrix3;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        RealMatrix3(m)
    }
}

/// The angle triple (ϕ, θ, φ).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotationAngles {
    pub phi: f64,
    pub theta: f64,
    pub varphi: f64,
}

impl RotationAngles {
    pub const fn new(phi: f64, theta: f64, varphi: f64) -> Self {
        RotationAngles { phi, theta, varphi }
    }
}

/// Result of [`extract_rotation_angles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleExtraction {
    pub angles: RotationAngles,
    /// Set when `|sin θ|` is below [`GIMBAL_GATE`]; φ is then 0 and ϕ
    /// carries the whole in-plane rotation.
    pub gimbal_degenerate: bool,
}

pub fn rot_z(angle: f64) -> RealMatrix3 {
    let (s, c) = angle.sin_cos();
    RealMatrix3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

pub fn rot_y(angle: f64) -> RealMatrix3 {
    let (s, c) = angle.sin_cos();
    RealMatrix3([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])
}

pub fn compose_rotation(a: RotationAngles) -> RealMatrix3 {
    let (sp, cp) = a.phi.sin_cos();
    let (st, ct) = a.theta.sin_cos();
    let (sv, cv) = a.varphi.sin_cos();
    RealMatrix3([
        [cp * ct * cv + sp * sv, -cp * ct * sv + sp * cv, cp * st],
        [-sp * ct * cv + cp * sv, sp * ct * sv + cp * cv, -sp * st],
        [-st * cv, st * sv, ct],
    ])
}

/// Wrap into `(-π, π]`, mapping `-0.0` to `0.0`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    let r = if r > PI { r - TAU } else { r };
    r + 0.0
}

/// Bring φ into `[0, π)` using `(ϕ, θ, φ) ~ (ϕ + π, -θ, φ - π)`, then wrap ϕ.
pub fn canonicalize_angles(a: RotationAngles) -> RotationAngles {
    let mut phi = a.phi;
    let mut theta = a.theta;
    let mut varphi = wrap_angle(a.varphi);
    if varphi < 0.0 {
        varphi += PI;
        phi += PI;
        theta = -theta;
    }
    if varphi >= PI {
        varphi -= PI;
        phi += PI;
        theta = -theta;
    }
    RotationAngles {
        phi: wrap_angle(phi),
        theta: theta + 0.0,
        varphi: varphi + 0.0,
    }
}

pub fn extract_rotation_angles(q: &RealMatrix3) -> Result<AngleExtraction> {
    extract_rotation_angles_with(q, &Tolerances::default())
}

pub fn extract_rotation_angles_with(q: &RealMatrix3, tol: &Tolerances) -> Result<AngleExtraction> {
    if !q.is_proper_orthogonal(tol.unitarity) {
        return Err(Error::NotOrthogonal {
            distance: q.orthogonality_distance(),
            det: q.det(),
        });
    }
    Ok(angles_unchecked(q))
}

/// Angle extraction without the orthogonality precondition check.
///
/// θ comes out in `[0, π]` before canonicalization and so exceeds π/2
/// exactly when `Q33 < 0`. ϕ is read from the third column and φ from the
/// rotation-invariant combinations of the upper-left block, which stay
/// accurate as `sin θ` shrinks.
pub(crate) fn angles_unchecked(q: &RealMatrix3) -> AngleExtraction {
    let m = &q.0;
    let s = m[0][2].hypot(m[1][2]);
    let theta = s.atan2(m[2][2]);
    let gimbal = s <= GIMBAL_GATE;

    // (1 + cθ) e^{i(ϕ-φ)} and (1 - cθ) e^{i(ϕ+φ)} from the 2x2 block.
    let diff = (m[0][1] - m[1][0]).atan2(m[0][0] + m[1][1]);
    let sum = (m[0][1] + m[1][0]).atan2(m[1][1] - m[0][0]);

    let (phi, varphi) = if gimbal {
        if m[2][2] >= 0.0 {
            (diff, 0.0)
        } else {
            (sum, 0.0)
        }
    } else {
        let phi = (-m[1][2]).atan2(m[0][2]);
        let varphi = if m[2][2] >= 0.0 { phi - diff } else { sum - phi };
        (phi, varphi)
    };

    AngleExtraction {
        angles: canonicalize_angles(RotationAngles { phi, theta, varphi }),
        gimbal_degenerate: gimbal,
    }
}
