use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use super::{
    canonical_frame, circular_frame, core_from_v1, cross, dot, first_column_residual,
    leading_sign, linear_frame, norm3, scale3, CoreParams, UnitaryParams, AXIS_ORDER,
    NORMAL_ORDER,
};
use crate::error::{Error, RecoveryStep, Result};
use crate::jones::self_product;
use crate::linalg::{cis, Complex3Vector, ComplexMatrix3, Tolerances};
use crate::rotations::{canonicalize_angles, compose_rotation, RealMatrix3, RotationAngles};

/// A trigonometric solution is accepted outright below this first-column
/// residual; above it the frame-based route is tried as well.
const TRIG_ACCEPT: f64 = 1e-13;

/// Real and imaginary parts of a phase-normalized first column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnDecomposition {
    pub a: [f64; 3],
    pub b: [f64; 3],
}

impl ColumnDecomposition {
    pub fn new(w: &Complex3Vector) -> Self {
        ColumnDecomposition { a: w.re(), b: w.im() }
    }

    /// `|a|^2 + |b|^2`, which is `cos²χ + sin²χ`.
    pub fn norm_identity(&self) -> f64 {
        dot(&self.a, &self.a) + dot(&self.b, &self.b)
    }
}

/// Which case of the sign-of-χ dispatch fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `a3 ≠ 0, b3 ≠ 0`.
    A,
    /// `a3 = b3 = 0` with `χ = 0`.
    B1,
    /// `a3 = b3 = 0` with `sin θ = 0`.
    B2,
    /// `a3 = 0, b3 ≠ 0`.
    C,
    /// `b3 = 0` because `χ = 0`.
    D1,
    /// `b3 = 0` because `sin φ = 0`.
    D2,
    /// `χ = ±π/4`, recovered from the ellipse normal.
    Circular,
}

impl Branch {
    pub const ALL: [Branch; 7] = [
        Branch::A,
        Branch::B1,
        Branch::B2,
        Branch::C,
        Branch::D1,
        Branch::D2,
        Branch::Circular,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Branch::A => "a",
            Branch::B1 => "b1",
            Branch::B2 => "b2",
            Branch::C => "c",
            Branch::D1 => "d1",
            Branch::D2 => "d2",
            Branch::Circular => "circular",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNormalization {
    pub alpha1: f64,
    pub normalized: Complex3Vector,
    /// `u1^T u1` vanished, so the half-angle rule was unavailable.
    pub circular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstColumn {
    pub chi: f64,
    pub rotation: RotationAngles,
    pub branch: Branch,
    /// Phase-fitted distance between the model column and the input.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryReport {
    pub params: UnitaryParams,
    /// `||compose_unitary(params) - U||_F`.
    pub residual: f64,
    pub branch: Branch,
    pub global_phase_alpha1_degenerate: bool,
    /// `cos²χ + sin²χ` evaluated from the two square-root forms.
    pub chi_norm_identity: f64,
}

pub fn normalize_global_phase(u1: &Complex3Vector) -> Result<PhaseNormalization> {
    normalize_global_phase_with(u1, &Tolerances::default())
}

/// Remove the global phase from a unit first column.
///
/// `u1^T u1 = e^{2iα1} cos 2χ` in every frame, so `α1 = ½ arg(u1^T u1)` up
/// to π. The π is fixed by making the real part lexicographically
/// nonnegative. When the self-product vanishes the column is circular and
/// the first non-negligible component is made real and positive instead.
pub fn normalize_global_phase_with(u1: &Complex3Vector, tol: &Tolerances) -> Result<PhaseNormalization> {
    let norm = u1.norm();
    if !u1.is_finite() || (norm - 1.0).abs() > tol.degeneracy {
        return Err(Error::NotUnit { norm });
    }
    let s = self_product(u1);
    if s.norm() < tol.degeneracy {
        let k = (0..3).find(|&k| u1[k].norm() > tol.degeneracy).unwrap_or(0);
        let alpha1 = u1[k].arg();
        return Ok(PhaseNormalization {
            alpha1: crate::rotations::wrap_angle(alpha1),
            normalized: u1.scale(cis(-alpha1)),
            circular: true,
        });
    }
    Ok(half_angle_normalization(u1, tol.degeneracy))
}

fn half_angle_normalization(u1: &Complex3Vector, gate: f64) -> PhaseNormalization {
    let mut alpha1 = 0.5 * self_product(u1).arg();
    let mut w = u1.scale(cis(-alpha1));
    if leading_sign(&w.re(), AXIS_ORDER, gate) < 0.0 {
        alpha1 += PI;
        w = Complex3Vector(w.0.map(|z| -z));
    }
    PhaseNormalization {
        alpha1: crate::rotations::wrap_angle(alpha1),
        normalized: w,
        circular: false,
    }
}

/// Sign of χ (`-1`, `0` or `+1`) and the case that decided it.
///
/// Cases b2, c and d2 read the sign from the products `a1 b2` and
/// `-a2 b1`. Case a uses the orientation of `a × b`, which is parallel to
/// the ellipse normal; that normal is kept on the upper side. Ties and
/// vanishing products also fall back to the orientation test.
pub fn sign_of_chi(d: &ColumnDecomposition, gate: f64) -> (f64, Branch) {
    let (a, b) = (&d.a, &d.b);
    let a3_zero = a[2].abs() <= gate;
    let b3_zero = b[2].abs() <= gate;
    if norm3(b) <= gate {
        return (0.0, if a3_zero { Branch::B1 } else { Branch::D1 });
    }
    let branch = match (a3_zero, b3_zero) {
        (false, false) => Branch::A,
        (true, true) => Branch::B2,
        (true, false) => Branch::C,
        (false, true) => Branch::D2,
    };

    let n = cross(a, b);
    let nn = norm3(&n);
    let orientation = if nn > 0.0 {
        leading_sign(&scale3(&n, 1.0 / nn), NORMAL_ORDER, gate)
    } else {
        0.0
    };

    let sign = if branch == Branch::A {
        orientation
    } else {
        let p = a[0] * b[1];
        let q = -a[1] * b[0];
        let big = if p.abs() >= q.abs() { p } else { q };
        if big.abs() > gate * norm3(a) * norm3(b) {
            big.signum()
        } else {
            orientation
        }
    };
    (if sign == 0.0 { 1.0 } else { sign }, branch)
}

pub fn recover_first_column(w: &Complex3Vector) -> Result<FirstColumn> {
    recover_first_column_with(w, &Tolerances::default())
}

/// χ and the rotation from a phase-normalized first column.
///
/// The trigonometric solution is tried first. If its reconstruction is not
/// within `1e-13` the frame built directly from `a` and `b` is also
/// evaluated and the better of the two is kept.
pub fn recover_first_column_with(w: &Complex3Vector, tol: &Tolerances) -> Result<FirstColumn> {
    let gate = tol.degeneracy;
    let d = ColumnDecomposition::new(w);
    let (na, nb) = (norm3(&d.a), norm3(&d.b));

    let identity = d.norm_identity();
    if !w.is_finite() || (identity - 1.0).abs() > gate {
        return Err(Error::Inconsistent(format!(
            "cos²χ + sin²χ = {identity} from the two norm forms"
        )));
    }
    let ab = dot(&d.a, &d.b);
    if ab.abs() > gate || nb > na + gate {
        return Err(Error::Inconsistent(format!(
            "real and imaginary parts are not a phase-normalized ellipse (a·b = {ab:e}, |a| = {na}, |b| = {nb})"
        )));
    }

    let circular = (na - nb).abs() <= gate;
    let (sign, dispatched) = sign_of_chi(&d, gate);
    let branch = if circular { Branch::Circular } else { dispatched };

    let candidate = |chi: f64, q: RealMatrix3| {
        let rotation = crate::rotations::angles_unchecked(&q).angles;
        let residual = first_column_residual(chi, &compose_rotation(rotation), w);
        FirstColumn {
            chi,
            rotation,
            branch,
            residual,
        }
    };

    let primary = if circular {
        let (chi, q) = frame_route(&d, gate);
        candidate(chi, q)
    } else if sign == 0.0 {
        candidate(0.0, linear_frame(&scale3(&d.a, 1.0 / na), gate))
    } else {
        let chi = sign * nb.atan2(na);
        candidate(chi, compose_rotation(trig_route(&d, chi, branch)))
    };
    if primary.residual <= TRIG_ACCEPT {
        return Ok(primary);
    }

    let mut alternatives = vec![primary];
    let (chi, q) = frame_route(&d, gate);
    alternatives.push(candidate(chi, q));
    if circular {
        let chi = sign * nb.atan2(na);
        alternatives.push(candidate(chi, compose_rotation(trig_route(&d, chi, dispatched))));
    }
    Ok(alternatives
        .into_iter()
        .reduce(|best, c| if c.residual < best.residual { c } else { best })
        .expect("at least one candidate"))
}

/// Closed-form solution of the trigonometric system for a column with
/// `χ ≠ 0`.
fn trig_route(d: &ColumnDecomposition, chi: f64, branch: Branch) -> RotationAngles {
    let (a, b) = (&d.a, &d.b);
    let (sx, cx) = chi.sin_cos();
    let varphi = if branch == Branch::B2 {
        0.0
    } else {
        let v = (b[2] * cx).atan2(-a[2] * sx).rem_euclid(PI);
        if v >= PI {
            0.0
        } else {
            v
        }
    };
    let (sv, cv) = varphi.sin_cos();

    let s = a[0] * sv / cx + b[0] * cv / sx;
    let c = a[1] * sv / cx + b[1] * cv / sx;
    let s_prime = a[0] * cv / cx - b[0] * sv / sx;
    let c_prime = a[1] * cv / cx - b[1] * sv / sx;

    let phi = (s - c_prime).atan2(c + s_prime);
    let (sp, cp) = phi.sin_cos();
    let sin_theta = sv * b[2] / sx - cv * a[2] / cx;
    let cos_theta = cp * s_prime - sp * c_prime;
    canonicalize_angles(RotationAngles::new(phi, sin_theta.atan2(cos_theta), varphi))
}

/// Builds the frame directly from the axes `a`, `b` of the ellipse.
fn frame_route(d: &ColumnDecomposition, gate: f64) -> (f64, RealMatrix3) {
    let (a, b) = (&d.a, &d.b);
    let (na, nb) = (norm3(a), norm3(b));
    let q1 = scale3(a, 1.0 / na);
    if nb <= gate {
        return (0.0, linear_frame(&q1, gate));
    }
    if (na - nb).abs() <= gate {
        let n = cross(a, b);
        let n = scale3(&n, 1.0 / norm3(&n));
        let s = if leading_sign(&n, NORMAL_ORDER, gate) < 0.0 { -1.0 } else { 1.0 };
        return (s * FRAC_PI_4, circular_frame(&scale3(&n, s), gate));
    }
    let k = dot(b, &q1);
    let mut q2 = [b[0] - k * q1[0], b[1] - k * q1[1], b[2] - k * q1[2]];
    q2 = scale3(&q2, 1.0 / norm3(&q2));
    let mut q3 = cross(&q1, &q2);
    let s = if leading_sign(&q3, NORMAL_ORDER, gate) < 0.0 { -1.0 } else { 1.0 };
    if s < 0.0 {
        q2 = scale3(&q2, -1.0);
        q3 = scale3(&q3, -1.0);
    }
    (s * nb.atan2(na), RealMatrix3::from_cols([q1, q2, q3]))
}

pub fn extract_core_params(v1: &ComplexMatrix3, chi: f64) -> Result<CoreParams> {
    extract_core_params_with(v1, chi, &Tolerances::default())
}

/// Core parameters from `V1 = Q^T U`.
///
/// μ is read from `|v32|` and `|v33|` together with the in-plane
/// projections of columns 2 and 3, β2 from `arg v32`. At `μ = 0` the phase
/// α3 is set to zero and β2 carries `δ = β2 - α2 + α3`; at `μ = π/2` α2 is
/// set to zero.
pub fn extract_core_params_with(v1: &ComplexMatrix3, chi: f64, tol: &Tolerances) -> Result<CoreParams> {
    let v31 = v1.at(3, 1).norm();
    if !v1.is_finite() || v31 > tol.recovery {
        return Err(Error::StructureViolation { v31 });
    }
    if !v1.is_unitary(tol.recovery) {
        return Err(Error::NotUnitary {
            distance: v1.unitarity_distance(),
        });
    }
    Ok(core_from_v1(v1, chi))
}

pub fn recover_params(u: &ComplexMatrix3) -> Result<RecoveryReport> {
    recover_params_with(u, &Tolerances::default())
}

/// Recovers the canonical parameters of a unitary.
///
/// The global phase is removed from the first column, χ and the rotation
/// are solved from it, and the remaining parameters are read from
/// `Q^T U`. Errors from each stage carry the stage name.
pub fn recover_params_with(u: &ComplexMatrix3, tol: &Tolerances) -> Result<RecoveryReport> {
    if !u.is_unitary(tol.unitarity) {
        return Err(Error::NotUnitary {
            distance: if u.is_finite() { u.unitarity_distance() } else { f64::INFINITY },
        });
    }
    let u1 = u.col(0);
    let phase = normalize_global_phase_with(&u1, tol).map_err(Error::at(RecoveryStep::GlobalPhase))?;

    let mut column = recover_first_column_with(&phase.normalized, tol).map_err(Error::at(RecoveryStep::FirstColumn))?;
    if phase.circular && column.residual > TRIG_ACCEPT {
        // Nearly circular: the half-angle phase may still be informative.
        let alt = half_angle_normalization(&u1, tol.degeneracy);
        if let Ok(c) = recover_first_column_with(&alt.normalized, tol) {
            if c.residual < column.residual {
                column = FirstColumn {
                    branch: Branch::Circular,
                    ..c
                };
            }
        }
    }

    let (chi, q) = canonical_frame(column.chi, &compose_rotation(column.rotation), tol.degeneracy);
    let rotation = crate::rotations::angles_unchecked(&q).angles;
    let v1 = compose_rotation(rotation).transpose().to_complex() * *u;
    let core = extract_core_params_with(&v1, chi, tol).map_err(Error::at(RecoveryStep::CoreMatrix))?;
    let params = UnitaryParams::from_parts(rotation, core);

    let residual = super::compose_unitary(&params).distance(u);
    if residual.is_nan() || residual > tol.recovery {
        return Err(Error::ToleranceExceeded {
            residual,
            tolerance: tol.recovery,
        });
    }
    Ok(RecoveryReport {
        params,
        residual,
        branch: column.branch,
        global_phase_alpha1_degenerate: phase.circular,
        chi_norm_identity: ColumnDecomposition::new(&phase.normalized).norm_identity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::{generate_haar_unitary, SeededGenerator};
    use crate::jones::{jones_in_frame, EllipseParams};
    use crate::parametrization::{canonicalize_params, compose_core, compose_unitary};
    use crate::linalg::C64;
    use crate::rotations::wrap_angle;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn params(angles: [f64; 3], core: [f64; 6]) -> UnitaryParams {
        UnitaryParams::from_parts(
            RotationAngles::new(angles[0], angles[1], angles[2]),
            CoreParams {
                chi: core[0],
                mu: core[1],
                alpha1: core[2],
                alpha2: core[3],
                alpha3: core[4],
                beta2: core[5],
            },
        )
    }

    fn column(chi: f64, angles: [f64; 3]) -> Complex3Vector {
        jones_in_frame(
            EllipseParams::unit(0.0, chi),
            RotationAngles::new(angles[0], angles[1], angles[2]),
        )
    }

    #[test]
    fn identity_recovers_canonical_zero() {
        let r = recover_params(&ComplexMatrix3::identity()).unwrap();
        assert_eq!(r.params, UnitaryParams::identity());
        // Only the rounding of e^{iπ} remains.
        assert!(r.residual <= 2e-16);
        assert_eq!(r.branch, Branch::B1);
        assert!(!r.global_phase_alpha1_degenerate);
    }

    #[test]
    fn global_phase_examples() {
        let n = normalize_global_phase(&Complex3Vector::from_real([1.0, 0.0, 0.0])).unwrap();
        assert_eq!(n.alpha1, 0.0);
        assert!(!n.circular);

        let u1 = column(0.2, [0.0; 3]).scale(cis(FRAC_PI_3));
        let n = normalize_global_phase(&u1).unwrap();
        assert_abs_diff_eq!(n.alpha1, FRAC_PI_3, epsilon = 1e-15);
        assert!((n.normalized - column(0.2, [0.0; 3])).norm() < 1e-15);

        let n = normalize_global_phase(&column(FRAC_PI_4, [0.0; 3])).unwrap();
        assert!(n.circular);

        assert!(matches!(
            normalize_global_phase(&Complex3Vector::from_real([1.0, 1.0, 0.0])),
            Err(Error::NotUnit { .. })
        ));
    }

    #[test]
    fn first_column_examples() {
        let f = recover_first_column(&Complex3Vector::from_real([1.0, 0.0, 0.0])).unwrap();
        assert_eq!(f.chi, 0.0);
        assert_eq!(f.rotation, RotationAngles::new(0.0, 0.0, 0.0));

        let f = recover_first_column(&Complex3Vector::from_real([0.0, 0.0, 1.0])).unwrap();
        assert_eq!(f.chi, 0.0);
        assert_abs_diff_eq!(f.rotation.theta.abs(), FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(f.rotation.varphi, 0.0);
        assert!(f.residual < 1e-15);

        let f = recover_first_column(&column(0.3, [0.4, 0.5, 0.6])).unwrap();
        assert_eq!(f.branch, Branch::A);
        assert_abs_diff_eq!(f.chi, 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(f.rotation.phi, 0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(f.rotation.theta, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(f.rotation.varphi, 0.6, epsilon = 1e-14);
    }

    #[test]
    fn first_column_rejects_unnormalized_phase() {
        let w = column(0.3, [0.4, 0.5, 0.6]).scale(cis(0.7));
        assert!(matches!(recover_first_column(&w), Err(Error::Inconsistent(_))));
        let w = column(0.3, [0.4, 0.5, 0.6]).scale(C64::new(1.1, 0.0));
        assert!(matches!(recover_first_column(&w), Err(Error::Inconsistent(_))));
    }

    /// Column with prescribed `a3`, `b3` at `ϕ = 0.3`.
    fn decomposition_with(a3: f64, b3: f64, chi: f64) -> ColumnDecomposition {
        let (sx, cx) = chi.sin_cos();
        // a3 = -cχ sθ cφ, b3 = sχ sθ sφ.
        let varphi = (b3 / sx).atan2(-a3 / cx);
        let st = (-a3 / cx) / varphi.cos();
        let d = ColumnDecomposition::new(&column(chi, [0.3, st.asin(), varphi]));
        assert_abs_diff_eq!(d.a[2], a3, epsilon = 1e-14);
        assert_abs_diff_eq!(d.b[2], b3, epsilon = 1e-14);
        d
    }

    #[test]
    fn sign_table_case_a() {
        let d = decomposition_with(-0.5, -0.3, -0.6);
        assert_eq!(sign_of_chi(&d, 1e-10), (-1.0, Branch::A));
        let d = decomposition_with(0.5, -0.3, 0.6);
        assert_eq!(sign_of_chi(&d, 1e-10), (1.0, Branch::A));
    }

    #[test]
    fn sign_table_cases_b_c_d() {
        // a3 = b3 = 0 with a1 > 0, b2 > 0.
        let d = ColumnDecomposition::new(&column(0.4, [0.0, 0.0, 0.0]));
        assert!(d.a[0] > 0.0 && d.b[1] > 0.0);
        assert_eq!(sign_of_chi(&d, 1e-10), (1.0, Branch::B2));
        // a3 = 0 (φ = π/2), b3 ≠ 0.
        let d = ColumnDecomposition::new(&column(0.4, [FRAC_PI_2, 0.5, FRAC_PI_2]));
        assert!(d.a[2].abs() < 1e-16 && d.b[2].abs() > 0.1);
        assert!(d.a[0] > 0.0 && d.b[1] > 0.0);
        assert_eq!(sign_of_chi(&d, 1e-10), (1.0, Branch::C));
        // b3 = 0 with χ = 0, then with φ = 0.
        let d = ColumnDecomposition::new(&column(0.0, [0.2, 0.5, 0.9]));
        assert_eq!(sign_of_chi(&d, 1e-10), (0.0, Branch::D1));
        let d = ColumnDecomposition::new(&column(-0.4, [0.2, 0.5, 0.0]));
        assert_eq!(sign_of_chi(&d, 1e-10), (-1.0, Branch::D2));
        let d = ColumnDecomposition::new(&column(0.0, [0.2, 0.0, 0.9]));
        assert_eq!(sign_of_chi(&d, 1e-10), (0.0, Branch::B1));
    }

    #[test]
    fn core_extraction_examples() {
        let c = extract_core_params(&ComplexMatrix3::identity(), 0.0).unwrap();
        assert_eq!((c.mu, c.alpha1, c.alpha2, c.alpha3, c.beta2), (0.0, 0.0, 0.0, 0.0, PI));

        let v = compose_core(0.2, 0.8, 0.1, -0.4, 0.9, 1.3);
        let c = extract_core_params(&v, 0.2).unwrap();
        for (x, y) in [(c.mu, 0.8), (c.alpha1, 0.1), (c.alpha2, -0.4), (c.alpha3, 0.9), (c.beta2, 1.3)] {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14);
        }

        let v = compose_core(0.2, FRAC_PI_2, 0.1, -0.4, 0.9, 1.3);
        let c = extract_core_params(&v, 0.2).unwrap();
        assert_eq!(c.alpha2, 0.0);
        assert_eq!(c.mu, FRAC_PI_2);
        assert!(crate::parametrization::compose_core_params(&c).distance(&v) < 1e-15);
    }

    #[test]
    fn core_extraction_rejects_structure_violation() {
        let u = compose_unitary(&params([0.4, 0.5, 0.6], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]));
        assert!(matches!(
            extract_core_params(&u, 0.3),
            Err(Error::StructureViolation { .. })
        ));
    }

    #[test]
    fn recover_rejects_non_unitary() {
        let e = recover_params(&ComplexMatrix3::diag([1.0, 1.0, 1.1])).unwrap_err();
        assert!(matches!(e, Error::NotUnitary { .. }));
    }

    #[test]
    fn haar_samples_round_trip() {
        let mut g = SeededGenerator::new(1);
        for _ in 0..2000 {
            let u = generate_haar_unitary(&mut g);
            let r = recover_params(&u).unwrap();
            assert!(r.residual <= 1e-10);
            assert!((r.chi_norm_identity - 1.0).abs() <= 1e-12);
        }
    }

    fn assert_same_params(a: &UnitaryParams, b: &UnitaryParams, eps: f64) {
        let pairs = [
            (a.rotation.phi, b.rotation.phi),
            (a.rotation.theta, b.rotation.theta),
            (a.rotation.varphi, b.rotation.varphi),
            (a.chi, b.chi),
            (a.mu, b.mu),
            (a.alpha1, b.alpha1),
            (a.alpha2, b.alpha2),
            (a.alpha3, b.alpha3),
            (a.beta2, b.beta2),
        ];
        for (x, y) in pairs {
            assert!(wrap_angle(x - y).abs() <= eps, "{a:?}\n{b:?}");
        }
    }

    #[test]
    fn interior_params_round_trip() {
        let mut g = SeededGenerator::new(2);
        for _ in 0..2000 {
            let p = g.params_with_margin(1e-3);
            let r = recover_params(&compose_unitary(&p)).unwrap();
            assert_same_params(&canonicalize_params(&r.params), &canonicalize_params(&p), 1e-9);
        }
    }

    #[test]
    fn degenerate_params_round_trip() {
        let cases = [
            params([0.4, 0.5, 0.6], [FRAC_PI_4, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [-FRAC_PI_4, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.0, 0.6], [FRAC_PI_4, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [0.0, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.0, 0.6], [0.3, 0.0, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, FRAC_PI_2, 0.6], [0.3, FRAC_PI_2, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, -FRAC_PI_2, 0.0], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.0, 0.0, 0.0], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, FRAC_PI_2], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]),
        ];
        for p in cases {
            let u = compose_unitary(&p);
            let r = recover_params(&u).unwrap();
            assert!(r.residual <= 1e-13, "{p:?}: {:e}", r.residual);
            assert_same_params(&r.params, &canonicalize_params(&p), 1e-9);
        }
    }

    #[test]
    fn near_gate_inputs_recover() {
        let cases = [
            params([0.4, 0.5, 0.6], [1e-11, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [1e-9, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [FRAC_PI_4 - 1e-12, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [FRAC_PI_4 - 1e-9, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 1e-12, 0.6], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 1e-11], [0.3, 0.7, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [0.3, 1e-13, 0.1, 0.2, 0.3, 0.4]),
            params([0.4, 0.5, 0.6], [0.3, FRAC_PI_2 - 1e-13, 0.1, 0.2, 0.3, 0.4]),
        ];
        for p in cases {
            let r = recover_params(&compose_unitary(&p));
            assert!(r.as_ref().is_ok_and(|r| r.residual <= 1e-10), "{p:?}: {r:?}");
        }
    }
}
