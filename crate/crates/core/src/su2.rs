//! su(2)-valued fields along contours: the anti-symmetrized Maurer–Cartan
//! form, its contour integral and the resulting degree.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMat2 = Matrix2<Complex64>;

/// Relative singularity guard on `λ = a² + |b|²`.
pub const SINGULAR_REL_TOL: f64 = 1e-12;
/// Angle jumps within this distance of `π` make the winding ambiguous.
pub const UNDERSAMPLING_TOL: f64 = 1e-9;

/// Hermitian traceless `[[a, b], [b̄, -a]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2Element {
    pub a: f64,
    pub b: Complex64,
}

impl Su2Element {
    pub fn new(a: f64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        Self::new(a, Complex64::new(b, 0.0))
    }

    /// From a real traceless 2×2 matrix, using its symmetric part.
    pub fn from_real_traceless(m: &crate::basis::Mat2) -> Self {
        Self::real(0.5 * (m[(0, 0)] - m[(1, 1)]), 0.5 * (m[(0, 1)] + m[(1, 0)]))
    }

    /// Rejects matrices that are not Hermitian and traceless within `tol`.
    pub fn from_matrix(m: &CMat2, tol: f64) -> Result<Self> {
        let herm = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let trace = m.trace().norm();
        if herm > tol || trace > tol {
            return Err(Error::InvalidArgument(format!(
                "not Hermitian traceless (hermiticity {herm:.3e}, trace {trace:.3e})"
            )));
        }
        Ok(Self::new(
            0.5 * (m[(0, 0)].re - m[(1, 1)].re),
            0.5 * (m[(0, 1)] + m[(1, 0)].conj()),
        ))
    }

    pub fn matrix(&self) -> CMat2 {
        let a = Complex64::new(self.a, 0.0);
        CMat2::new(a, self.b, self.b.conj(), -a)
    }

    /// `M² = λ·Id`.
    pub fn lambda(&self) -> f64 {
        self.a * self.a + self.b.norm_sqr()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.a, c * self.b)
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        Self::new(0.5 * (self.a + other.a), 0.5 * (self.b + other.b))
    }

    /// `Q* M Q` for a unitary `Q`.
    pub fn conjugate_by(&self, q: &CMat2) -> Self {
        let m = q.adjoint() * self.matrix() * q;
        Self::new(
            0.5 * (m[(0, 0)].re - m[(1, 1)].re),
            0.5 * (m[(0, 1)] + m[(1, 0)].conj()),
        )
    }
}

/// `½(M_mid⁻¹ ΔM − ΔM M_mid⁻¹)` for one segment.
pub fn rho_increment(m0: &Su2Element, m1: &Su2Element) -> Result<CMat2> {
    let scale = m0.lambda().max(m1.lambda());
    increment(m0, m1, SINGULAR_REL_TOL * scale, 0)
}

fn increment(m0: &Su2Element, m1: &Su2Element, eps: f64, segment: usize) -> Result<CMat2> {
    let mid = m0.midpoint(m1);
    let lambda = mid.lambda();
    if !(lambda > eps) {
        return Err(Error::SingularSegment { segment, lambda });
    }
    let inv = mid.matrix().unscale(lambda);
    let dm = m1.matrix() - m0.matrix();
    Ok((inv * dm - dm * inv).scale(0.5))
}

/// Cyclic samples of a field along a closed contour.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourField {
    samples: Vec<Su2Element>,
}

impl ContourField {
    pub fn new(samples: Vec<Su2Element>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "a closed contour needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|s| !(s.a.is_finite() && s.b.re.is_finite() && s.b.im.is_finite()))
        {
            return Err(Error::NonFinite("contour sample"));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[Su2Element] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn min_lambda(&self) -> f64 {
        self.samples
            .iter()
            .map(Su2Element::lambda)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_lambda(&self) -> f64 {
        self.samples
            .iter()
            .map(Su2Element::lambda)
            .fold(0.0, f64::max)
    }

    pub fn is_regular(&self) -> bool {
        self.min_lambda() > SINGULAR_REL_TOL * self.max_lambda()
    }

    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self { samples }
    }

    pub fn rotated(&self, start: usize) -> Self {
        let mut samples = self.samples.clone();
        let k = start % samples.len();
        samples.rotate_left(k);
        Self { samples }
    }

    pub fn map(&self, f: impl Fn(&Su2Element) -> Su2Element) -> Self {
        Self {
            samples: self.samples.iter().map(f).collect(),
        }
    }

    /// `Σ_t ρ(M_t, M_{t+1})` over the closed contour (not yet divided by 2π).
    pub fn circulation(&self) -> Result<CMat2> {
        let eps = SINGULAR_REL_TOL * self.max_lambda();
        let t = self.samples.len();
        let mut sum = CMat2::zeros();
        for i in 0..t {
            sum += increment(&self.samples[i], &self.samples[(i + 1) % t], eps, i)?;
        }
        Ok(sum)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub samples: usize,
    /// `Re det((1/2π) Σ ρ)`.
    pub s_squared: f64,
    /// `√s²` signed by the (1,2) entry of the integral.
    pub s: f64,
    pub winding: Option<i64>,
    pub min_lambda: f64,
    #[serde(skip)]
    pub integral: CMat2,
}

impl DegreeReport {
    pub fn s_abs(&self) -> f64 {
        self.s.abs()
    }
}

pub fn contour_degree(field: &ContourField) -> Result<DegreeReport> {
    let integral = field.circulation()?.unscale(TAU);
    let s_squared = integral.determinant().re;
    let sign = if integral[(0, 1)].re < 0.0 { -1.0 } else { 1.0 };
    let winding = winding_oracle(field).ok();
    Ok(DegreeReport {
        samples: field.len(),
        s_squared,
        s: sign * s_squared.max(0.0).sqrt(),
        winding,
        min_lambda: field.min_lambda(),
        integral,
    })
}

/// Integer winding of `(a, Re b)`, from angle differences wrapped into
/// `(−π, π]`.
pub fn winding_oracle(field: &ContourField) -> Result<i64> {
    let samples = field.samples();
    let scale = field.max_lambda().sqrt();
    let eps = SINGULAR_REL_TOL * field.max_lambda();
    for (i, s) in samples.iter().enumerate() {
        if s.b.im.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::ComplexSample(i));
        }
        if !(s.lambda() > eps) {
            return Err(Error::SingularSegment {
                segment: i,
                lambda: s.lambda(),
            });
        }
    }
    let t = samples.len();
    let mut total = 0.0;
    for i in 0..t {
        let (p, q) = (&samples[i], &samples[(i + 1) % t]);
        let jump = wrap_angle(q.b.re.atan2(q.a) - p.b.re.atan2(p.a));
        if jump.abs() >= PI - UNDERSAMPLING_TOL {
            return Err(Error::UnderSampled { segment: i, jump });
        }
        total += jump;
    }
    Ok((total / TAU).round() as i64)
}

/// Wraps into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// `M_a(θ) = [[a cos nθ, sin nθ], [sin nθ, −a cos nθ]]` at `θ_t = 2πt/T`.
pub fn synthetic_field(n: i64, a: f64, samples: usize) -> Result<ContourField> {
    if a == 0.0 || !a.is_finite() {
        return Err(Error::InvalidArgument(
            "synthetic field needs a finite non-zero a".into(),
        ));
    }
    if samples < 3 {
        return Err(Error::InvalidArgument(format!(
            "synthetic field needs at least 3 samples, got {samples}"
        )));
    }
    ContourField::new(
        (0..samples)
            .map(|t| {
                let theta = TAU * t as f64 / samples as f64;
                let (s, c) = (n as f64 * theta).sin_cos();
                Su2Element::real(a * c, s)
            })
            .collect(),
    )
}

/// Four corner samples of a square plaquette of side `h`, counterclockwise
/// from the lower-left corner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plaquette {
    pub corners: [Su2Element; 4],
    pub h: f64,
}

impl Plaquette {
    pub fn sample(f: impl Fn(f64, f64) -> Su2Element, x: f64, y: f64, h: f64) -> Self {
        Self {
            corners: [f(x, y), f(x + h, y), f(x + h, y + h), f(x, y + h)],
            h,
        }
    }
}

/// `‖circulation + [ρ_x, ρ_y]‖_F / h²`, the discrete `dρ + [ρ, ρ]`.
///
/// `ρ_x` and `ρ_y` average the two parallel edges.
pub fn flatness_residual(p: &Plaquette) -> Result<f64> {
    let c = &p.corners;
    let max = c.iter().map(Su2Element::lambda).fold(0.0, f64::max);
    for (i, m) in c.iter().enumerate() {
        if !(m.lambda() > SINGULAR_REL_TOL * max) {
            return Err(Error::SingularCorner(i));
        }
    }
    let eps = SINGULAR_REL_TOL * max;
    let e01 = increment(&c[0], &c[1], eps, 0)?;
    let e12 = increment(&c[1], &c[2], eps, 1)?;
    let e23 = increment(&c[2], &c[3], eps, 2)?;
    let e30 = increment(&c[3], &c[0], eps, 3)?;
    let circulation = e01 + e12 + e23 + e30;
    let rho_x = (e01 - e23).scale(0.5);
    let rho_y = (e12 - e30).scale(0.5);
    let bracket = rho_x * rho_y - rho_y * rho_x;
    Ok((circulation + bracket).norm() / (p.h * p.h))
}

/// `v ↦ ½(v₁σˣ + v₂σʸ + v₃σᶻ)`.
pub fn bloch_to_su2(v: &Vector3<f64>) -> Su2Element {
    Su2Element::new(0.5 * v.z, Complex64::new(0.5 * v.x, -0.5 * v.y))
}

pub fn su2_to_bloch(m: &Su2Element) -> Vector3<f64> {
    Vector3::new(2.0 * m.b.re, -2.0 * m.b.im, 2.0 * m.a)
}

/// The bracket `−i[X, Y]`, under which [`bloch_to_su2`] carries the cross
/// product: `θ(v × w) = −i[θ(v), θ(w)]`.
pub fn su2_bracket(x: &Su2Element, y: &Su2Element) -> Su2Element {
    let (mx, my) = (x.matrix(), y.matrix());
    let c = (mx * my - my * mx) * Complex64::new(0.0, -1.0);
    Su2Element::new(c[(0, 0)].re, c[(0, 1)])
}
