//! Fixed-size complex vectors and matrices, structural checks, and a
//! cyclic Jacobi eigensolver for 3x3 Hermitian matrices.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Numerical gates shared across the crate. Every check that takes a
/// tolerance has a `_with` variant accepting one of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Gate for unitarity, orthogonality and Hermiticity checks.
    pub unitarity: f64,
    /// Gate below which a quantity is treated as exactly zero when
    /// dispatching on degenerate cases.
    pub degeneracy: f64,
    /// Largest accepted reconstruction residual for parameter recovery.
    pub recovery: f64,
    /// Largest `|χ_m|` for which a coherency matrix counts as regular.
    pub regularity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity: 1e-12,
            degeneracy: 1e-10,
            recovery: 1e-10,
            regularity: 1e-8,
        }
    }
}

/// `e^{i angle}`.
#[inline]
pub fn cis(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}

/// A three-component complex vector (a 3D Jones vector when unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3Vector(pub [C64; 3]);

impl Complex3Vector {
    pub const fn new(x: C64, y: C64, z: C64) -> Self {
        Complex3Vector([x, y, z])
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Complex3Vector(v.map(|x| C64::new(x, 0.0)))
    }

    pub fn re(&self) -> [f64; 3] {
        self.0.map(|z| z.re)
    }

    pub fn im(&self) -> [f64; 3] {
        self.0.map(|z| z.im)
    }

    /// Hermitian inner product `<self, other> = sum conj(self_k) other_k`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Unconjugated bilinear product `self^T other`.
    pub fn bilinear(&self, other: &Self) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: C64) -> Self {
        Complex3Vector(self.0.map(|z| z * k))
    }

    pub fn conj(&self) -> Self {
        Complex3Vector(self.0.map(|z| z.conj()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }
}

impl Index<usize> for Complex3Vector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Sub for Complex3Vector {
    type Output = Complex3Vector;
    fn sub(self, rhs: Self) -> Self {
        Complex3Vector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

/// A 3x3 complex matrix stored row-major. `m[(r, c)]` indexes from zero;
/// [`ComplexMatrix3::at`] uses the one-based `v_ij` naming.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix3(pub [[C64; 3]; 3]);

impl ComplexMatrix3 {
    pub const fn zeros() -> Self {
        ComplexMatrix3([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([1.0, 1.0, 1.0])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::zeros();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn from_parts(re: [[f64; 3]; 3], im: [[f64; 3]; 3]) -> Self {
        let mut m = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = C64::new(re[r][c], im[r][c]);
            }
        }
        m
    }

    pub fn from_real(re: [[f64; 3]; 3]) -> Self {
        Self::from_parts(re, [[0.0; 3]; 3])
    }

    pub fn from_cols(cols: [Complex3Vector; 3]) -> Self {
        let mut m = Self::zeros();
        for (c, col) in cols.iter().enumerate() {
            for r in 0..3 {
                m.0[r][c] = col.0[r];
            }
        }
        m
    }

    pub fn col(&self, c: usize) -> Complex3Vector {
        Complex3Vector([self.0[0][c], self.0[1][c], self.0[2][c]])
    }

    /// One-based element accessor: `at(3, 2)` is `v_32`.
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.0[row - 1][col - 1]
    }

    pub fn re(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(|z| z.re))
    }

    pub fn im(&self) -> [[f64; 3]; 3] {
        self.0.map(|row| row.map(|z| z.im))
    }

    /// Real part as a complex matrix with zero imaginary part.
    pub fn real_part(&self) -> Self {
        Self::from_real(self.re())
    }

    pub fn imag_part(&self) -> [[f64; 3]; 3] {
        self.im()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[c][r] = self.0[r][c];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[c][r] = self.0[r][c].conj();
            }
        }
        m
    }

    pub fn scale(&self, k: C64) -> Self {
        ComplexMatrix3(self.0.map(|row| row.map(|z| z * k)))
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn mul_vec(&self, v: &Complex3Vector) -> Complex3Vector {
        let mut out = [ZERO; 3];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|c| self.0[r][c] * v.0[c]).sum();
        }
        Complex3Vector(out)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `||M^H M - I||_F`.
    pub fn unitarity_distance(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).frobenius_norm()
    }

    /// `||M - M^H||_F`.
    pub fn hermiticity_distance(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_finite() && self.unitarity_distance() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_finite() && self.hermiticity_distance() <= tol * self.frobenius_norm().max(1.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix3 {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix3 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}

impl Mul for ComplexMatrix3 {
    type Output = ComplexMatrix3;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = (0..3).map(|k| self.0[r][k] * rhs.0[k][c]).sum();
            }
        }
        m
    }
}

impl Add for ComplexMatrix3 {
    type Output = ComplexMatrix3;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] += rhs.0[r][c];
            }
        }
        m
    }
}

impl Sub for ComplexMatrix3 {
    type Output = ComplexMatrix3;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] -= rhs.0[r][c];
            }
        }
        m
    }
}

impl Neg for ComplexMatrix3 {
    type Output = ComplexMatrix3;
    fn neg(self) -> Self {
        self.scale_re(-1.0)
    }
}

/// `v ⊗ v^H`: Hermitian, positive semidefinite, rank at most one.
pub fn outer_product(v: &Complex3Vector) -> ComplexMatrix3 {
    let mut m = ComplexMatrix3::zeros();
    for r in 0..3 {
        for c in 0..3 {
            m.0[r][c] = v.0[r] * v.0[c].conj();
        }
    }
    m
}

/// Diagnostic summary of a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    pub unitarity_distance: f64,
    pub hermiticity_distance: f64,
    pub det: C64,
    pub trace: C64,
}

pub fn matrix_norms_and_checks(m: &ComplexMatrix3) -> StructureReport {
    StructureReport {
        unitarity_distance: m.unitarity_distance(),
        hermiticity_distance: m.hermiticity_distance(),
        det: m.det(),
        trace: m.trace(),
    }
}

/// Eigenvalues in nonincreasing order with the matching eigenvector columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: [f64; 3],
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: ComplexMatrix3,
}

impl EigenDecomposition {
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `λ_i / tr R`, or `None` when the trace vanishes.
    pub fn normalized(&self) -> Option<[f64; 3]> {
        let t = self.trace();
        if t.abs() <= f64::MIN_POSITIVE {
            return None;
        }
        Some(self.eigenvalues.map(|l| l / t))
    }

    /// `U diag(λ) U^H`.
    pub fn reconstruct(&self) -> ComplexMatrix3 {
        let u = self.eigenvectors;
        u * ComplexMatrix3::diag(self.eigenvalues) * u.adjoint()
    }
}

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TARGET: f64 = 1e-14;

fn off_diagonal_norm(a: &ComplexMatrix3) -> f64 {
    let mut s = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            if r != c {
                s += a.0[r][c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn eig_hermitian3(r: &ComplexMatrix3) -> Result<EigenDecomposition> {
    eig_hermitian3_with(r, &Tolerances::default())
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a
/// diagonal unitary, then applies the real symmetric Jacobi rotation.
/// Iteration stops once the off-diagonal Frobenius norm drops below
/// `1e-14 * ||R||_F`.
pub fn eig_hermitian3_with(r: &ComplexMatrix3, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !r.is_finite() {
        return Err(Error::NotHermitian {
            distance: f64::INFINITY,
        });
    }
    if !r.is_hermitian(tol.unitarity) {
        return Err(Error::NotHermitian {
            distance: r.hermiticity_distance(),
        });
    }

    // Work on the exactly Hermitian part.
    let mut a = (*r + r.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix3::identity();
    let target = OFF_DIAGONAL_TARGET * a.frobenius_norm();

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: off_diagonal_norm(&a),
            });
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a.0[p][q];
            let mag = apq.norm();
            if mag == 0.0 {
                continue;
            }
            let alpha = a.0[p][p].re;
            let beta = a.0[q][q].re;
            let tau = (beta - alpha) / (2.0 * mag);
            let t = if tau == 0.0 {
                1.0
            } else {
                tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            let phase = (apq / mag).conj();

            // G = D J with D = diag(.., e^{-i arg a_pq} at q, ..).
            let mut g = ComplexMatrix3::identity();
            g.0[p][p] = C64::new(c, 0.0);
            g.0[p][q] = C64::new(s, 0.0);
            g.0[q][p] = phase * -s;
            g.0[q][q] = phase * c;

            a = g.adjoint() * a * g;
            a.0[p][q] = ZERO;
            a.0[q][p] = ZERO;
            for k in 0..3 {
                a.0[k][k] = C64::new(a.0[k][k].re, 0.0);
            }
            v = v * g;
        }
        sweeps += 1;
    }

    let diag = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re];
    let mut order = [0usize, 1, 2];
    // Stable, so ties keep the Jacobi output order.
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut eigenvalues = [0.0; 3];
    let mut cols = [Complex3Vector([ZERO; 3]); 3];
    for (k, &i) in order.iter().enumerate() {
        eigenvalues[k] = diag[i];
        cols[k] = fix_phase(v.col(i));
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix3::from_cols(cols),
    })
}

/// Rotate the phase of `v` so that its largest-magnitude component is real
/// and positive. Near-ties resolve to the lowest index.
fn fix_phase(v: Complex3Vector) -> Complex3Vector {
    let mags = v.0.map(|z| z.norm());
    let max = mags.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return v;
    }
    let k = mags
        .iter()
        .position(|&m| m >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let phase = v.0[k].conj() / mags[k];
    let mut out = v.scale(phase);
    out.0[k] = C64::new(out.0[k].norm(), 0.0);
    out
}
