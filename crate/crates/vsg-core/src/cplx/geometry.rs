//! Geometric pole decomposition of a complex-coefficient quadratic.
//!
//! The poles of `a2 s^2 + a1 s + a0` with real positive `a2` can be written
//! `-M [e^{j phi} +/- sqrt(e^{-j2 phi} + j mu)]` where `M = |a1/(2 a2)|` and
//! `phi = arg(a1)`. The scalar `mu` measures how far the radicand is pushed
//! off the unit circle: its sign decides whether the dominant pole crosses
//! into the right half plane, which makes it a direct stability margin for
//! gain tuning.

use num_complex::Complex64;

use crate::cplx::poly::{dominant_pair, CPoly};
use crate::error::{Error, Result};

/// Geometric quantities of a second-order complex-coefficient denominator.
#[derive(Debug, Clone, Copy)]
pub struct PoleGeometry {
    /// Pole scale `|a1 / (2 a2)|`, in 1/s.
    pub m: f64,
    /// Angle of `a1`, in radians.
    pub phi: f64,
    /// Dimensionless margin scalar. Real-valued whenever `a0 a2` is purely
    /// imaginary, which holds for the voltage-loop family; kept complex so
    /// off-family coefficients remain representable.
    pub mu: Complex64,
    /// Non-dominant pole.
    pub lambda1: Complex64,
    /// Dominant pole (largest real part).
    pub lambda2: Complex64,
}

impl PoleGeometry {
    /// Decomposes `a2 s^2 + a1 s + a0`.
    ///
    /// Requires `a2` real and positive (the derivation divides by `a2` and
    /// conjugates only `a1`) and `a1` nonzero (the normalization `|a1|^2`
    /// and the angle are otherwise undefined).
    pub fn from_coefficients(a0: Complex64, a1: Complex64, a2: Complex64) -> Result<Self> {
        if a2.norm() == 0.0 {
            return Err(Error::DegenerateOrder);
        }
        if a2.im.abs() > 1e-12 * a2.norm() || a2.re <= 0.0 {
            return Err(Error::InvalidParameter(
                "pole geometry requires a real, positive leading coefficient".into(),
            ));
        }
        if a1.norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "pole geometry is undefined for a vanishing first-order coefficient".into(),
            ));
        }
        let a2r = a2.re;
        let m = a1.norm() / (2.0 * a2r);
        let phi = a1.arg();
        // a1^2 - 4 a0 a2 = conj(a1)^2 + j |a1|^2 mu defines mu; dividing by
        // (2 a2)^2 turns the quadratic-formula radicand into
        // M^2 (e^{-j2 phi} + j mu).
        let mu = (a1 * a1 - 4.0 * a0 * a2 - a1.conj() * a1.conj())
            / (Complex64::i() * a1.norm_sqr());
        let radical = (Complex64::from_polar(1.0, -2.0 * phi) + Complex64::i() * mu).sqrt();
        let unit = Complex64::from_polar(1.0, phi);
        let (lambda1, lambda2) = dominant_pair(-m * (unit + radical), -m * (unit - radical));
        Ok(PoleGeometry {
            m,
            phi,
            mu,
            lambda1,
            lambda2,
        })
    }

    /// Decomposes the denominator of a second-order transfer function given
    /// by ascending coefficients.
    pub fn from_denominator(den: &CPoly) -> Result<Self> {
        if den.degree() != 2 {
            return Err(Error::InvalidParameter(format!(
                "pole geometry requires a quadratic, found degree {}",
                den.degree()
            )));
        }
        Self::from_coefficients(den.coeffs()[0], den.coeffs()[1], den.coeffs()[2])
    }

    /// True when the margin scalar predicts a stable dominant pole.
    pub fn predicts_stable(&self) -> bool {
        self.mu.re > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::poly::poles_quadratic;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometry_matches_quadratic_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let a0 = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let a1 = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let a2 = c(rng.gen_range(0.1..3.0), 0.0);
            if a1.norm() < 1e-3 {
                continue;
            }
            let geo = PoleGeometry::from_coefficients(a0, a1, a2).unwrap();
            let (l1, l2) = poles_quadratic(a0, a1, a2).unwrap();
            let scale = l1.norm().max(l2.norm()).max(1e-30);
            assert!(
                (geo.lambda1 - l1).norm() < 1e-9 * scale,
                "lambda1 mismatch: {} vs {l1}",
                geo.lambda1
            );
            assert!(
                (geo.lambda2 - l2).norm() < 1e-9 * scale,
                "lambda2 mismatch: {} vs {l2}",
                geo.lambda2
            );
        }
    }

    #[test]
    fn mu_is_real_for_imaginary_a0() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..100 {
            let a0 = c(0.0, rng.gen_range(-5.0..5.0));
            let a1 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let a2 = c(rng.gen_range(0.2..2.0), 0.0);
            if a1.norm() < 1e-3 {
                continue;
            }
            let geo = PoleGeometry::from_coefficients(a0, a1, a2).unwrap();
            assert!(
                geo.mu.im.abs() < 1e-12 * geo.mu.norm().max(1.0),
                "mu should be real, got {}",
                geo.mu
            );
            assert!(geo.m >= 0.0);
        }
    }

    #[test]
    fn rejects_complex_or_nonpositive_leading_coefficient() {
        assert!(PoleGeometry::from_coefficients(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.5)).is_err());
        assert!(PoleGeometry::from_coefficients(c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)).is_err());
        assert!(PoleGeometry::from_coefficients(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }
}
