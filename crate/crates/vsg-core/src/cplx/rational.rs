//! Rational transfer functions with complex coefficients.

use num_complex::Complex64;

use crate::cplx::poly::{dominant_pair, poles_quadratic, CPoly};
use crate::cplx::ss::CStateSpace;
use crate::error::{Error, Result};

/// Ratio of complex-coefficient polynomials in `s`.
#[derive(Debug, Clone)]
pub struct CRational {
    num: CPoly,
    den: CPoly,
}

impl CRational {
    /// Builds `num / den`. The denominator must be a nonzero polynomial and
    /// all coefficients must be finite.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateOrder);
        }
        for c in num.coeffs().iter().chain(den.coeffs()) {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::InvalidParameter(
                    "non-finite transfer-function coefficient".into(),
                ));
            }
        }
        Ok(CRational { num, den })
    }

    /// Builds from ascending-power coefficient slices.
    pub fn from_coeffs(num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        Self::new(CPoly::new(num.to_vec()), CPoly::new(den.to_vec()))
    }

    /// Constant gain.
    pub fn constant(k: Complex64) -> Self {
        CRational {
            num: CPoly::constant(k),
            den: CPoly::constant(Complex64::new(1.0, 0.0)),
        }
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        CRational {
            num: CPoly::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]),
            den: CPoly::constant(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    /// True when numerator degree does not exceed denominator degree.
    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    /// Scales numerator and denominator so the denominator is monic.
    pub fn normalized(&self) -> CRational {
        let lead = self.den.leading();
        CRational {
            num: self.num.scale(lead.inv()),
            den: self.den.scale(lead.inv()),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Gain at `s = 0`.
    pub fn dc_gain(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &CRational) -> CRational {
        CRational {
            num: self
                .num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &CRational) -> CRational {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CRational {
        CRational {
            num: self.num.scale(Complex64::new(-1.0, 0.0)),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &CRational) -> CRational {
        CRational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn div(&self, other: &CRational) -> Result<CRational> {
        if other.num.is_zero() {
            return Err(Error::DegenerateOrder);
        }
        Ok(CRational {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        })
    }

    pub fn scale(&self, k: Complex64) -> CRational {
        CRational {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Closed loop `self / (1 + self * h)` with negative feedback through `h`.
    pub fn feedback(&self, h: &CRational) -> Result<CRational> {
        let den = self
            .den
            .mul(&h.den)
            .add(&self.num.mul(&h.num));
        if den.is_zero() {
            return Err(Error::IllPosedInterconnection);
        }
        Ok(CRational {
            num: self.num.mul(&h.den),
            den,
        })
    }

    /// Closed loop `self / (1 + self)`.
    pub fn unity_feedback(&self) -> Result<CRational> {
        self.feedback(&CRational::constant(Complex64::new(1.0, 0.0)))
    }

    /// Denominator roots.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        self.den.roots()
    }

    /// Numerator roots.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        self.num.roots()
    }

    /// Frequency response `G(j omega)` over signed frequencies.
    ///
    /// Complex-coefficient systems respond differently to positive and
    /// negative frequencies, so no conjugate shortcut is taken. Evaluation
    /// within `1e-9` (relative) of a pole is rejected, naming the frequency.
    pub fn freq_response(&self, omegas: &[f64]) -> Result<Vec<Complex64>> {
        let poles = self.poles()?;
        omegas
            .iter()
            .map(|&w| {
                let s = Complex64::new(0.0, w);
                for &p in &poles {
                    if (s - p).norm() <= 1e-9 * p.norm().max(1.0) {
                        return Err(Error::FrequencyAtPole { omega: w });
                    }
                }
                Ok(self.eval(s))
            })
            .collect()
    }

    /// Control-canonical state-space realization.
    ///
    /// For denominator degree `n`, `A` carries the normalized denominator
    /// coefficients along its first row with an identity sub-diagonal,
    /// `B = e1`, and `C` holds the (feedthrough-corrected) numerator
    /// coefficients. Improper systems are rejected.
    pub fn realize_control_canonical(&self) -> Result<CStateSpace> {
        if !self.is_proper() {
            return Err(Error::ImproperTransferFunction {
                num: self.num.degree(),
                den: self.den.degree(),
            });
        }
        let n = self.den.degree();
        if n == 0 {
            return Err(Error::DegenerateOrder);
        }
        let an = self.den.leading();
        let d = if self.num.degree() == n {
            self.num.leading() / an
        } else {
            Complex64::new(0.0, 0.0)
        };
        // Remove the feedthrough so the remaining numerator is strictly proper.
        let reduced = self.num.sub(&self.den.scale(d));
        let mut a = nalgebra::DMatrix::<Complex64>::zeros(n, n);
        for k in 0..n {
            a[(0, k)] = -self.den.coeffs()[n - 1 - k] / an;
            if k + 1 < n {
                a[(k + 1, k)] = Complex64::new(1.0, 0.0);
            }
        }
        let mut b = nalgebra::DMatrix::<Complex64>::zeros(n, 1);
        b[(0, 0)] = Complex64::new(1.0, 0.0);
        let mut c = nalgebra::DMatrix::<Complex64>::zeros(1, n);
        for k in 0..n {
            let coeff = reduced
                .coeffs()
                .get(n - 1 - k)
                .copied()
                .unwrap_or_else(|| Complex64::new(0.0, 0.0));
            c[(0, k)] = coeff / an;
        }
        CStateSpace::new(a, b, c, d)
    }

    /// Unit-step response of the second-order family
    /// `(b1 s + b0) / (a2 s^2 + a1 s + a0)` with `b0 = a0`, evaluated through
    /// its closed form
    /// `1 - [l1 e^{l2 t} - l2 e^{l1 t} - (b1/a0) l1 l2 (e^{l1 t} - e^{l2 t})] / (l1 - l2)`.
    ///
    /// Starts at exactly 0 and settles (when stable) at `b0/a0 = 1`.
    /// A defective pole pair makes the form singular and is rejected so the
    /// caller can integrate the realization instead.
    pub fn step_response_exact(&self, times: &[f64]) -> Result<Vec<Complex64>> {
        if self.den.degree() != 2 {
            return Err(Error::InvalidParameter(
                "closed-form step response requires a second-order denominator".into(),
            ));
        }
        if self.num.degree() >= 2 && !self.num.is_zero() {
            return Err(Error::InvalidParameter(
                "closed-form step response requires zero feedthrough".into(),
            ));
        }
        let a0 = self.den.coeffs()[0];
        let a1 = self.den.coeffs()[1];
        let a2 = self.den.coeffs()[2];
        let b0 = self.num.coeffs()[0];
        let b1 = self
            .num
            .coeffs()
            .get(1)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0));
        if (b0 - a0).norm() > 1e-9 * a0.norm().max(b0.norm()) {
            return Err(Error::InvalidParameter(
                "closed-form step response requires matching zeroth-order coefficients".into(),
            ));
        }
        let (l1, l2) = poles_quadratic(a0, a1, a2)?;
        if (l1 - l2).norm() < 1e-8 * l1.norm().max(l2.norm()) {
            return Err(Error::DefectivePoles { lambda: l1 });
        }
        let ratio = b1 / a0;
        let dl = l1 - l2;
        Ok(times
            .iter()
            .map(|&t| {
                let e1 = (l1 * t).exp();
                let e2 = (l2 * t).exp();
                Complex64::new(1.0, 0.0)
                    - (l1 * e2 - l2 * e1 - ratio * l1 * l2 * (e1 - e2)) / dl
            })
            .collect())
    }
}

/// Dominant-pole step estimate `1 - e^{l2 t} (1 - j l2 / omega1)`.
///
/// Valid after the fast pole has decayed; the caller asserts the pole
/// separation.
pub fn step_response_dominant(lambda2: Complex64, omega1: f64, times: &[f64]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let correction = one - Complex64::i() * lambda2 / omega1;
    times
        .iter()
        .map(|&t| one - (lambda2 * t).exp() * correction)
        .collect()
}

/// Orders the two poles of a second-order denominator dominantly.
pub fn dominant_poles(tf: &CRational) -> Result<(Complex64, Complex64)> {
    let poles = tf.poles()?;
    if poles.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a second-order denominator, found degree {}",
            poles.len()
        )));
    }
    Ok(dominant_pair(poles[0], poles[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::poly::CPoly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_order_realization_is_identity_case() {
        let tf = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let ss = tf.realize_control_canonical().unwrap();
        assert_eq!(ss.order(), 1);
        assert!((ss.a()[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((ss.b()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((ss.c()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(ss.d(), c(0.0, 0.0));
    }

    #[test]
    fn improper_tf_rejected() {
        let tf = CRational::from_coeffs(
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            &[c(1.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            tf.realize_control_canonical(),
            Err(Error::ImproperTransferFunction { num: 2, den: 1 })
        ));
    }

    #[test]
    fn third_order_realization_matches_direct_evaluation() {
        let tf = CRational::from_coeffs(
            &[c(0.4, -1.2), c(1.0, 0.3), c(0.0, 0.7)],
            &[c(2.0, 0.5), c(-0.3, 1.1), c(1.4, -0.2), c(1.0, 1.0)],
        )
        .unwrap();
        let ss = tf.realize_control_canonical().unwrap();
        let omegas: Vec<f64> = (0..20)
            .map(|k| 10f64.powf(-1.0 + 3.0 * k as f64 / 19.0))
            .collect();
        let direct = tf.freq_response(&omegas).unwrap();
        let realized = ss.freq_response(&omegas).unwrap();
        for (g_direct, g_ss) in direct.iter().zip(&realized) {
            assert!(
                (g_direct - g_ss).norm() <= 1e-10 * g_direct.norm(),
                "realization mismatch: {g_direct} vs {g_ss}"
            );
        }
    }

    #[test]
    fn proper_with_feedthrough_matches_direct_evaluation() {
        let tf = CRational::from_coeffs(
            &[c(1.0, -0.5), c(0.2, 0.9), c(0.5, 0.5)],
            &[c(3.0, 0.0), c(1.0, -1.0), c(1.0, 0.0)],
        )
        .unwrap();
        let ss = tf.realize_control_canonical().unwrap();
        for w in [-7.3, -1.0, 0.0, 0.4, 12.0] {
            let g = tf.eval(c(0.0, w));
            let r = ss.freq_response(&[w]).unwrap()[0];
            assert!((g - r).norm() <= 1e-10 * g.norm().max(1.0));
        }
    }

    #[test]
    fn freq_response_rejects_pole_evaluation() {
        // 1/(s + j): pole at -j, so omega = -1 is singular.
        let tf = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let err = tf.freq_response(&[-1.0]).unwrap_err();
        match err {
            Error::FrequencyAtPole { omega } => assert_eq!(omega, -1.0),
            other => panic!("unexpected error {other}"),
        }
        // The opposite branch is far from the pole and must evaluate.
        let g = tf.freq_response(&[1.0]).unwrap()[0];
        assert!((g.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn no_conjugate_symmetry_for_complex_coefficients() {
        let tf = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let g = tf.freq_response(&[2.0, -2.0]).unwrap();
        assert!((g[0] - g[1].conj()).norm() > 0.1);
    }

    #[test]
    fn series_cancellation_evaluates_cleanly() {
        // 1/(s+1) * (s+1)/(s+2) responds as 1/(s+2).
        let g1 = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let g2 = CRational::from_coeffs(
            &[c(1.0, 0.0), c(1.0, 0.0)],
            &[c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let series = g1.mul(&g2);
        let target = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        for w in [0.0, 0.7, -3.0, 11.0] {
            let s = c(0.0, w);
            assert!((series.eval(s) - target.eval(s)).norm() < 1e-12);
        }
    }

    #[test]
    fn step_response_starts_at_zero_and_settles_at_dc_gain() {
        let num = CPoly::new(vec![c(2.0, 3.0), c(0.5, -0.2)]);
        let den = CPoly::new(vec![c(2.0, 3.0), c(2.0, 0.4), c(1.0, 0.0)]);
        let tf = CRational::new(num, den).unwrap();
        // Slowest pole has real part ~ -0.06, so settling to 1e-9 needs t > 350.
        let y = tf.step_response_exact(&[0.0, 600.0]).unwrap();
        assert!(y[0].norm() < 1e-12);
        assert!((y[1] - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn defective_pair_rejected() {
        // (s + 1)^2 denominator with matching zeroth coefficients.
        let tf = CRational::from_coeffs(
            &[c(1.0, 0.0)],
            &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            tf.step_response_exact(&[0.1]),
            Err(Error::DefectivePoles { .. })
        ));
    }

    #[test]
    fn dominant_estimate_degenerate_pole_is_flat_zero() {
        let y = step_response_dominant(c(0.0, 0.0), 100.0, &[0.0, 1.0, 10.0]);
        for v in y {
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn feedback_composes_polynomials() {
        // g/(1+g) for g = 1/(s+1) is 1/(s+2).
        let g = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let cl = g.unity_feedback().unwrap();
        for w in [0.0, 1.0, -4.5] {
            let s = c(0.0, w);
            assert!((cl.eval(s) - (s + 2.0).inv()).norm() < 1e-12);
        }
    }
}
