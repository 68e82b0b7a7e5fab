//! Rank-one compression of boundary spins.

use crate::basis::{i_sigma_y, sigma_x, sigma_z, Mat2};

/// The orthogonal projector `Π(θ)` onto the line at angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompressionProjector {
    pub theta: f64,
    pub matrix: Mat2,
}

impl CompressionProjector {
    pub fn new(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            theta,
            matrix: Mat2::new(c * c, s * c, s * c, s * s),
        }
    }

    /// `Π σ Π`, computed directly.
    pub fn compress(&self, sigma: &Mat2) -> Mat2 {
        self.matrix * sigma * self.matrix
    }

    /// `σˣ(θ) = sin(2θ) Π(θ)`.
    pub fn sigma_x(&self) -> Mat2 {
        (2.0 * self.theta).sin() * self.matrix
    }

    /// `σʸ(θ) = 0`; the compressed `iσʸ` vanishes as well.
    pub fn sigma_y(&self) -> Mat2 {
        Mat2::zeros()
    }

    /// `σᶻ(θ) = cos(2θ) Π(θ)`.
    pub fn sigma_z(&self) -> Mat2 {
        (2.0 * self.theta).cos() * self.matrix
    }

    /// Max-norm residuals of `Π² = Π`, `Πᵀ = Π` and `Tr Π = 1`.
    pub fn projector_residual(&self) -> f64 {
        let m = self.matrix;
        let idem = (m * m - m).abs().max();
        let sym = (m - m.transpose()).abs().max();
        let tr = (m.trace() - 1.0).abs();
        idem.max(sym).max(tr)
    }

    /// Largest mismatch between the closed forms and `Π σ Π`.
    pub fn closed_form_residual(&self) -> f64 {
        let x = (self.sigma_x() - self.compress(&sigma_x())).abs().max();
        let y = (self.sigma_y() - self.compress(&i_sigma_y())).abs().max();
        let z = (self.sigma_z() - self.compress(&sigma_z())).abs().max();
        x.max(y).max(z)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use proptest::prelude::*;

    use super::*;

    #[test]
    fn theta_zero() {
        let p = CompressionProjector::new(0.0);
        assert_eq!(p.matrix, Mat2::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(p.sigma_x(), Mat2::zeros());
    }

    #[test]
    fn theta_quarter() {
        let p = CompressionProjector::new(FRAC_PI_4);
        assert!((p.matrix - Mat2::repeat(0.5)).abs().max() < 1e-15);
        assert!((p.sigma_x() - p.matrix).abs().max() < 1e-15);
    }

    proptest! {
        #[test]
        fn closed_forms_and_projector(theta in -10.0f64..10.0) {
            let p = CompressionProjector::new(theta);
            prop_assert!(p.projector_residual() < 1e-12);
            prop_assert!(p.closed_form_residual() < 1e-12);
            let z = (p.compress(&sigma_z()) - (2.0 * theta).cos() * p.matrix).abs().max();
            prop_assert!(z < 1e-12);
        }
    }
}
