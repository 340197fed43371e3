//! Characteristic decomposition of 3x3 coherency matrices and the
//! regularity analysis of its middle component.

use crate::error::{Error, Result};
use crate::jones::{completion_v2, completion_v3, intrinsic_jones, CompletionParams, EllipseParams};
use crate::linalg::{
    eig_hermitian3_with, outer_product, ComplexMatrix3, EigenDecomposition, Tolerances, C64,
};
use crate::parametrization::{leading_sign, NORMAL_ORDER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityIndices {
    pub p1: f64,
    pub p2: f64,
}

/// `trace · (P1 R_p + (P2 - P1) R_m + (1 - P2) R_u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicComponents {
    pub trace: f64,
    pub rp_hat: ComplexMatrix3,
    pub rm_hat: ComplexMatrix3,
    pub ru_hat: ComplexMatrix3,
    pub coefficients: [f64; 3],
    pub purity: PurityIndices,
    pub eigen: EigenDecomposition,
}

impl CharacteristicComponents {
    pub fn reconstruct(&self) -> ComplexMatrix3 {
        let [c1, c2, c3] = self.coefficients;
        (self.rp_hat.scale_re(c1) + self.rm_hat.scale_re(c2) + self.ru_hat.scale_re(c3))
            .scale_re(self.trace)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityReport {
    /// Eigenvalues of `Re(R_m)`, nonincreasing.
    pub m_hat: [f64; 3],
    pub chi_m: f64,
    pub regular: bool,
    /// `||Im(R_m)||_F`.
    pub im_norm: f64,
}

/// Indices of polarimetric purity from the normalized spectrum.
///
/// Eigenvalues within rounding of zero may come out slightly negative;
/// they are clamped so that `0 <= P1 <= P2 <= 1` holds exactly.
pub fn purity_indices(e: &EigenDecomposition) -> PurityIndices {
    let l = e.eigenvalues.map(|x| x.max(0.0));
    let t: f64 = l.iter().sum();
    let [l1, l2, l3] = l.map(|x| x / t);
    PurityIndices {
        p1: (l1 - l2).clamp(0.0, 1.0),
        p2: (l1 + l2 - 2.0 * l3).clamp(0.0, 1.0),
    }
}

pub fn characteristic_decomposition(r: &ComplexMatrix3) -> Result<CharacteristicComponents> {
    characteristic_decomposition_with(r, &Tolerances::default())
}

pub fn characteristic_decomposition_with(
    r: &ComplexMatrix3,
    tol: &Tolerances,
) -> Result<CharacteristicComponents> {
    let eigen = eig_hermitian3_with(r, tol)?;
    let scale = r.frobenius_norm().max(f64::MIN_POSITIVE);
    let min = eigen.eigenvalues[2];
    if min < -tol.unitarity * scale.max(1.0) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    let trace = eigen.trace();
    if trace.is_nan() || trace <= 0.0 {
        return Err(Error::ZeroTrace);
    }

    let purity = purity_indices(&eigen);
    let u1 = eigen.eigenvectors.col(0);
    let u2 = eigen.eigenvectors.col(1);
    let rp_hat = outer_product(&u1);
    let rm_hat = (rp_hat + outer_product(&u2)).scale_re(0.5);
    Ok(CharacteristicComponents {
        trace,
        rp_hat,
        rm_hat,
        ru_hat: ComplexMatrix3::diag([1.0 / 3.0; 3]),
        coefficients: [purity.p1, purity.p2 - purity.p1, 1.0 - purity.p2],
        purity,
        eigen,
    })
}

pub fn middle_component(u: &ComplexMatrix3) -> Result<ComplexMatrix3> {
    middle_component_with(u, &Tolerances::default())
}

/// `½ (u1 u1^H + u2 u2^H)` for the first two columns of a unitary.
pub fn middle_component_with(u: &ComplexMatrix3, tol: &Tolerances) -> Result<ComplexMatrix3> {
    if !u.is_unitary(tol.unitarity) {
        return Err(Error::NotUnitary {
            distance: u.unitarity_distance(),
        });
    }
    Ok((outer_product(&u.col(0)) + outer_product(&u.col(1))).scale_re(0.5))
}

/// Middle component in the intrinsic frame. It depends on χ only.
pub fn intrinsic_middle(chi: f64) -> ComplexMatrix3 {
    let (s, c) = chi.sin_cos();
    let k = 0.5 * c * s;
    let mut m = ComplexMatrix3::diag([0.5 * s * s, 0.5 * c * c, 0.5]);
    m.0[0][1] = C64::new(0.0, k);
    m.0[1][0] = C64::new(0.0, -k);
    m
}

/// Intrinsic-frame unitary whose first two columns are the completion
/// vectors and whose last column is the Jones vector `n1(χ, α1)`.
pub fn intrinsic_u3(chi: f64, c: CompletionParams, alpha1: f64) -> ComplexMatrix3 {
    ComplexMatrix3::from_cols([
        completion_v2(chi, c),
        completion_v3(chi, c),
        intrinsic_jones(EllipseParams::unit(alpha1, chi)),
    ])
}

/// `||Im(R_m)||_F` at `|χ| = g`, the threshold matching a χ gate of `g`.
pub fn im_norm_gate(g: f64) -> f64 {
    (2.0 * g).sin() / (2.0 * std::f64::consts::SQRT_2)
}

pub fn regularity_report(r: &ComplexMatrix3) -> Result<RegularityReport> {
    regularity_report_with(r, &Tolerances::default())
}

/// Spectrum of `Re(R_m)` and the ellipticity χ_m of the middle component.
///
/// For a middle component with ellipticity χ the spectrum of its real part
/// is `(1/2, cos²χ/2, sin²χ/2)` and its imaginary part is antisymmetric
/// with axial vector `sin 2χ / 4` along the ellipse normal. χ_m is taken
/// from both: `|χ_m| = ½ atan2(4|a|, 2(m2 - m3))`, which stays accurate near
/// `χ = 0` where the eigenvalue form alone loses half the digits. Its sign
/// is the orientation of the axial vector, with the normal on the upper
/// side as in the parametrization.
pub fn regularity_report_with(r: &ComplexMatrix3, tol: &Tolerances) -> Result<RegularityReport> {
    let rm = characteristic_decomposition_with(r, tol)?.rm_hat;
    Ok(regularity_of_middle(&rm, tol))
}

pub(crate) fn regularity_of_middle(rm: &ComplexMatrix3, tol: &Tolerances) -> RegularityReport {
    let re = eig_hermitian3_with(&rm.real_part(), tol)
        .expect("real part of a Hermitian matrix is symmetric")
        .eigenvalues;
    let im = rm.imag_part();
    let axial = [im[1][2], im[2][0], im[0][1]];
    let len = (axial[0].powi(2) + axial[1].powi(2) + axial[2].powi(2)).sqrt();
    let magnitude = 0.5 * (4.0 * len).atan2(2.0 * (re[1] - re[2]));
    let sign = if len > 0.0 {
        leading_sign(&axial.map(|x| x / len), NORMAL_ORDER, tol.degeneracy)
    } else {
        0.0
    };
    let chi_m = if sign < 0.0 { -magnitude } else { magnitude };
    RegularityReport {
        m_hat: re,
        chi_m,
        regular: chi_m.abs() <= tol.regularity,
        im_norm: std::f64::consts::SQRT_2 * len,
    }
}
