//! Nine-parameter chart of U(3): composition, canonical representatives
//! and recovery of the parameters from a unitary.
//!
//! A unitary is written `U = Q · V1` where `Q` is the rotation of
//! [`crate::rotations`] and `V1` is the core matrix whose columns are the
//! Jones vector `n1(χ, α1)` and the completion vectors `v2`, `v3`.
//!
//! Several tuples compose to the same matrix:
//!
//! * `Q·Rz(π)` with every α shifted by π (the sign of the major axis),
//! * `Q·diag(1, -1, -1)` with `χ → -χ` and α2, α3, β2 shifted by π
//!   (the side of the plane the normal points to),
//! * for a circle, any in-plane rotation of `Q` absorbed by the α phases,
//! * for a line, any rotation about the major axis absorbed by the core.
//!
//! [`canonicalize_params`] picks one representative: the normal `Q e3` is
//! lexicographically positive over `(z, y, x)`, the major axis `Q e1` is
//! lexicographically positive over `(x, y, z)`, circles and lines use
//! `φ = 0`, and the unused phase at `μ = 0` or `μ = π/2` is zero.

mod recovery;

pub use recovery::{
    extract_core_params, extract_core_params_with, normalize_global_phase,
    normalize_global_phase_with, recover_first_column, recover_first_column_with, recover_params,
    recover_params_with, sign_of_chi, Branch, ColumnDecomposition, FirstColumn,
    PhaseNormalization, RecoveryReport,
};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::jones::{completion_v2, completion_v3, intrinsic_jones, CompletionParams, EllipseParams};
use crate::linalg::{ComplexMatrix3, Tolerances, C64, I};
use crate::rotations::{
    angles_unchecked, compose_rotation, wrap_angle, RealMatrix3, RotationAngles,
};

/// `|χ|` or `||χ| - π/4|` below this is treated as exactly linear or
/// circular by [`canonicalize_params`]. Snapping moves `U` by at most this.
pub const CHI_SNAP: f64 = 4.0 * f64::EPSILON;

/// `sin μ` or `cos μ` below this is snapped to an exact boundary.
pub const MU_SNAP: f64 = 1e-14;

/// Parameters of the core matrix `V1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoreParams {
    pub chi: f64,
    pub mu: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta2: f64,
}

/// All nine parameters: three rotation angles, χ, μ and four phases.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UnitaryParams {
    pub rotation: RotationAngles,
    pub chi: f64,
    pub mu: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta2: f64,
}

impl UnitaryParams {
    /// The tuple composing to the identity.
    pub fn identity() -> Self {
        UnitaryParams {
            beta2: PI,
            ..Default::default()
        }
    }

    pub fn from_parts(rotation: RotationAngles, core: CoreParams) -> Self {
        UnitaryParams {
            rotation,
            chi: core.chi,
            mu: core.mu,
            alpha1: core.alpha1,
            alpha2: core.alpha2,
            alpha3: core.alpha3,
            beta2: core.beta2,
        }
    }

    pub fn core(&self) -> CoreParams {
        CoreParams {
            chi: self.chi,
            mu: self.mu,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            alpha3: self.alpha3,
            beta2: self.beta2,
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.rotation.phi,
            self.rotation.theta,
            self.rotation.varphi,
            self.chi,
            self.mu,
            self.alpha1,
            self.alpha2,
            self.alpha3,
            self.beta2,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

pub fn compose_core(chi: f64, mu: f64, alpha1: f64, alpha2: f64, alpha3: f64, beta2: f64) -> ComplexMatrix3 {
    let n1 = intrinsic_jones(EllipseParams::unit(alpha1, chi));
    let c = CompletionParams {
        mu,
        alpha2,
        alpha3,
        beta2,
    };
    ComplexMatrix3::from_cols([n1, completion_v2(chi, c), completion_v3(chi, c)])
}

pub fn compose_core_params(c: &CoreParams) -> ComplexMatrix3 {
    compose_core(c.chi, c.mu, c.alpha1, c.alpha2, c.alpha3, c.beta2)
}

/// `Q · V1`.
pub fn compose_unitary(p: &UnitaryParams) -> ComplexMatrix3 {
    compose_rotation(p.rotation).to_complex() * compose_core_params(&p.core())
}

pub fn canonicalize_params(p: &UnitaryParams) -> UnitaryParams {
    canonicalize_params_with(p, &Tolerances::default())
}

/// Canonical representative of the tuples composing to the same matrix.
///
/// Frame decisions are made on `Q` and `χ` alone. The core parameters are
/// then re-read from `Q_c^T U`, which absorbs every phase shift the frame
/// change implies.
pub fn canonicalize_params_with(p: &UnitaryParams, tol: &Tolerances) -> UnitaryParams {
    let u = compose_unitary(p);
    let (chi, q) = canonical_frame(p.chi, &compose_rotation(p.rotation), tol.degeneracy);
    core_in_frame(&u, chi, &q)
}

/// Reads the core parameters of `u` in the frame `q` and packages them
/// with the angles of `q`.
pub(crate) fn core_in_frame(u: &ComplexMatrix3, chi: f64, q: &RealMatrix3) -> UnitaryParams {
    let angles = angles_unchecked(q).angles;
    let q = compose_rotation(angles);
    let v1 = q.transpose().to_complex() * *u;
    UnitaryParams::from_parts(angles, core_from_v1(&v1, chi))
}

/// Core parameters from `V1 = Q^T U` without structural validation.
pub(crate) fn core_from_v1(v: &ComplexMatrix3, chi: f64) -> CoreParams {
    let (sx, cx) = chi.sin_cos();
    // Projections onto the in-plane pair n1 = (cχ, i sχ, 0), n2 = (i sχ, cχ, 0).
    let on_n1 = |col: usize| v.at(1, col) * cx - I * v.at(2, col) * sx;
    let on_n2 = |col: usize| v.at(2, col) * cx - I * v.at(1, col) * sx;
    let w1 = on_n1(1);
    let w2 = on_n2(2);
    let w3 = on_n2(3);
    let v32 = v.at(3, 2);
    let v33 = v.at(3, 3);

    let s = 0.5 * (v32.norm() + w3.norm());
    let c = 0.5 * (v33.norm() + w2.norm());
    let alpha1 = w1.arg();

    let (mu, alpha2, alpha3, beta2) = if s <= MU_SNAP {
        // v3 = -e^{iδ} e3 and β2 carries δ = β2 - α2 + α3.
        let alpha2 = w2.arg();
        (0.0, alpha2, 0.0, (-v33).arg() + alpha2)
    } else if c <= MU_SNAP {
        (FRAC_PI_2, 0.0, w3.arg(), v32.arg())
    } else {
        let (alpha2, alpha3) = (w2.arg(), w3.arg());
        // Read β2 from whichever of v32, v33 carries more weight; the
        // other follows from δ = β2 - α2 + α3.
        let beta2 = if s >= c {
            v32.arg()
        } else {
            (-v33).arg() + alpha2 - alpha3
        };
        (s.atan2(c), alpha2, alpha3, beta2)
    };

    CoreParams {
        chi,
        mu,
        alpha1: wrap_angle(alpha1),
        alpha2: wrap_angle(alpha2),
        alpha3: wrap_angle(alpha3),
        beta2: wrap_angle(beta2),
    }
}

// --- frame helpers -------------------------------------------------------

/// Scan order for the ellipse normal.
pub(crate) const NORMAL_ORDER: [usize; 3] = [2, 1, 0];
/// Scan order for the major axis.
pub(crate) const AXIS_ORDER: [usize; 3] = [0, 1, 2];

/// Sign of the first component, in `order`, whose magnitude exceeds `gate`.
pub(crate) fn leading_sign(v: &[f64; 3], order: [usize; 3], gate: f64) -> f64 {
    order
        .iter()
        .map(|&k| v[k])
        .find(|x| x.abs() > gate)
        .map_or(0.0, f64::signum)
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn scale3(a: &[f64; 3], k: f64) -> [f64; 3] {
    a.map(|x| x * k)
}

/// Frame of a linear state with major axis `q1`, using `φ = 0`.
pub(crate) fn linear_frame(q1: &[f64; 3], gate: f64) -> RealMatrix3 {
    let h = q1[0].hypot(q1[1]);
    let theta = (-q1[2]).atan2(h);
    let phi = if h <= gate { 0.0 } else { (-q1[1]).atan2(q1[0]) };
    compose_rotation(RotationAngles::new(phi, theta, 0.0))
}

/// Frame of a circular state with normal `n`, using `φ = 0` and a major
/// axis that is lexicographically positive.
pub(crate) fn circular_frame(n: &[f64; 3], gate: f64) -> RealMatrix3 {
    let h = n[0].hypot(n[1]);
    let theta = h.atan2(n[2]);
    let phi = if h <= gate { 0.0 } else { (-n[1]).atan2(n[0]) };
    let q = compose_rotation(RotationAngles::new(phi, theta, 0.0));
    if leading_sign(&q.col(0), AXIS_ORDER, gate) < 0.0 {
        compose_rotation(RotationAngles::new(phi + PI, -theta, 0.0))
    } else {
        q
    }
}

fn flip_normal(q: &RealMatrix3) -> RealMatrix3 {
    *q * RealMatrix3([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
}

fn flip_axis(q: &RealMatrix3) -> RealMatrix3 {
    *q * RealMatrix3([[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
}

/// Canonical `(χ, Q)` among the frames describing the same first column.
pub(crate) fn canonical_frame(chi: f64, q: &RealMatrix3, gate: f64) -> (f64, RealMatrix3) {
    if chi.abs() <= CHI_SNAP {
        let mut q1 = q.col(0);
        if leading_sign(&q1, AXIS_ORDER, gate) < 0.0 {
            q1 = scale3(&q1, -1.0);
        }
        return (0.0, linear_frame(&q1, gate));
    }

    let circular = (chi.abs() - FRAC_PI_4).abs() <= CHI_SNAP;
    let mut chi = if circular { FRAC_PI_4.copysign(chi) } else { chi };
    let mut q = *q;
    if leading_sign(&q.col(2), NORMAL_ORDER, gate) < 0.0 {
        q = flip_normal(&q);
        chi = -chi;
    }
    if circular {
        return (chi, circular_frame(&q.col(2), gate));
    }
    if leading_sign(&q.col(0), AXIS_ORDER, gate) < 0.0 {
        q = flip_axis(&q);
    }
    (chi, q)
}

/// Phase-fitted distance between `e^{iα} Q n1(χ)` and `w`.
pub(crate) fn first_column_residual(chi: f64, q: &RealMatrix3, w: &crate::linalg::Complex3Vector) -> f64 {
    let model = q
        .to_complex()
        .mul_vec(&intrinsic_jones(EllipseParams::unit(0.0, chi)));
    let overlap = model.inner(w);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    (*w - model.scale(phase)).norm()
}
