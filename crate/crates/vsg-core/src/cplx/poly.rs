//! Polynomials with complex coefficients and root extraction.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Polynomial in `s` with complex coefficients stored in ascending powers.
///
/// The coefficient vector is kept trimmed: the leading (highest-power)
/// coefficient is nonzero unless the polynomial is identically zero, which is
/// stored as the single coefficient `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    /// Builds a polynomial from ascending-power coefficients, trimming
    /// trailing zeros.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        CPoly { coeffs }
    }

    /// Builds a polynomial from real ascending-power coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Constant polynomial.
    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// Monic polynomial with the given roots, scaled by `leading`.
    pub fn from_roots(leading: Complex64, roots: &[Complex64]) -> Self {
        let mut p = CPoly::constant(leading);
        for &r in roots {
            p = p.mul(&CPoly::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    /// Ascending-power coefficients.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree after trimming; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True if all coefficients are zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// Leading (highest-power) coefficient.
    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap()
    }

    /// Largest coefficient magnitude; 0 only for the zero polynomial.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation at `s`.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    /// Derivative with respect to `s`.
    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() == 1 {
            return CPoly::constant(Complex64::new(0.0, 0.0));
        }
        CPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, k: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k] += c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            out[k] += c;
        }
        CPoly::new(out)
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        if self.is_zero() || other.is_zero() {
            return CPoly::constant(Complex64::new(0.0, 0.0));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::new(out)
    }

    /// Multiplies by `s^k`.
    pub fn shift_up(&self, k: usize) -> CPoly {
        let mut out = vec![Complex64::new(0.0, 0.0); k];
        out.extend_from_slice(&self.coeffs);
        CPoly::new(out)
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> CPoly {
        self.scale(Complex64::new(1.0, 0.0) / self.leading())
    }

    /// Deflates by a known root via synthetic division, ignoring the
    /// remainder.
    fn deflate(&self, root: Complex64) -> CPoly {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = self.coeffs[k] + acc * root;
            out[k - 1] = acc;
        }
        CPoly::new(out)
    }

    /// Residual of `z` as a root, scaled to be comparable across magnitudes:
    /// `|p(z)| / (max|c| * max(1, |z|)^degree)`.
    pub fn scaled_residual(&self, z: Complex64) -> f64 {
        let scale = self.max_coeff_norm() * z.norm().max(1.0).powi(self.degree() as i32);
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / scale
    }

    /// All complex roots, with multiplicity.
    ///
    /// Degrees one and two are solved in closed form. Higher degrees use
    /// simultaneous Aberth iteration with a companion-matrix fallback; every
    /// returned root is Newton-polished and satisfies a scaled residual below
    /// `1e-8`.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        if self.is_zero() || self.degree() == 0 {
            return Ok(Vec::new());
        }
        // Exact zero roots are peeled off first; they are common (pure
        // integrators) and stabilize the iterative solvers.
        let mut zero_count = 0usize;
        let mut work = self.clone();
        while work.degree() > 0 && work.coeffs[0].norm() == 0.0 {
            work = CPoly::new(work.coeffs[1..].to_vec());
            zero_count += 1;
        }
        let mut roots = vec![Complex64::new(0.0, 0.0); zero_count];
        match work.degree() {
            0 => {}
            1 => roots.push(-work.coeffs[0] / work.coeffs[1]),
            2 => {
                let (l1, l2) = quadratic_roots(work.coeffs[0], work.coeffs[1], work.coeffs[2]);
                roots.push(l1);
                roots.push(l2);
            }
            _ => {
                let monic = work.monic();
                let found = aberth(&monic).or_else(|| companion_roots(&monic));
                match found {
                    Some(mut rs) => {
                        for z in rs.iter_mut() {
                            *z = newton_polish(&monic, *z);
                        }
                        let worst = rs
                            .iter()
                            .map(|&z| monic.scaled_residual(z))
                            .fold(0.0, f64::max);
                        if worst > 1e-8 {
                            return Err(Error::RootFindingFailed {
                                best_residual: worst,
                            });
                        }
                        roots.append(&mut rs);
                    }
                    None => {
                        return Err(Error::RootFindingFailed {
                            best_residual: f64::NAN,
                        })
                    }
                }
            }
        }
        Ok(roots)
    }
}

/// Roots of `a2 s^2 + a1 s + a0` in an unspecified order, using the
/// cancellation-free variant of the quadratic formula.
fn quadratic_roots(a0: Complex64, a1: Complex64, a2: Complex64) -> (Complex64, Complex64) {
    let disc = (a1 * a1 - 4.0 * a0 * a2).sqrt();
    // Pick the sign that avoids subtracting nearly equal quantities.
    let q = if (a1 + disc).norm() >= (a1 - disc).norm() {
        -0.5 * (a1 + disc)
    } else {
        -0.5 * (a1 - disc)
    };
    if q.norm() == 0.0 {
        // a1 = 0 and a0 a2 = 0: double root at the origin or +/- pair.
        return (
            -(a1 + disc) / (2.0 * a2),
            -(a1 - disc) / (2.0 * a2),
        );
    }
    (q / a2, a0 / q)
}

/// Roots of the quadratic `a2 s^2 + a1 s + a0`, ordered as
/// `(lambda1, lambda2)` with `lambda2` dominant.
///
/// Errors if `a2 = 0` since the system order would degenerate.
pub fn poles_quadratic(
    a0: Complex64,
    a1: Complex64,
    a2: Complex64,
) -> Result<(Complex64, Complex64)> {
    if a2.norm() == 0.0 {
        return Err(Error::DegenerateOrder);
    }
    let (r1, r2) = quadratic_roots(a0, a1, a2);
    Ok(dominant_pair(r1, r2))
}

/// Orders a pole pair as `(lambda1, lambda2)` with `lambda2` dominant:
/// largest real part, ties broken by larger `|Im|`, then by larger `Im`.
/// The deterministic tie-breaks keep regression output stable.
pub fn dominant_pair(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if dominates(b, a) {
        (a, b)
    } else {
        (b, a)
    }
}

fn dominates(x: Complex64, y: Complex64) -> bool {
    if x.re != y.re {
        return x.re > y.re;
    }
    if x.im.abs() != y.im.abs() {
        return x.im.abs() > y.im.abs();
    }
    x.im >= y.im
}

fn newton_polish(monic: &CPoly, z0: Complex64) -> Complex64 {
    let dp = monic.derivative();
    let mut z = z0;
    let mut best = z;
    let mut best_res = monic.eval(z).norm();
    for _ in 0..8 {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        z -= monic.eval(z) / d;
        let r = monic.eval(z).norm();
        if r < best_res {
            best_res = r;
            best = z;
        }
    }
    best
}

/// Simultaneous (Aberth) root iteration on a monic polynomial. Returns
/// `None` when the iteration stalls so the caller can fall back.
fn aberth(monic: &CPoly) -> Option<Vec<Complex64>> {
    let n = monic.degree();
    let dp = monic.derivative();
    // Cauchy bound on root magnitudes; staggered radii and a phase offset
    // avoid the symmetric stall configurations.
    let bound = 1.0
        + monic.coeffs[..n]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let radius = bound * (0.3 + 0.7 * (k as f64 + 1.0) / n as f64);
            let angle = 2.0 * PI * k as f64 / n as f64 + 0.41;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..300 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let pz = monic.eval(z[i]);
            let mut dpz = dp.eval(z[i]);
            if dpz.norm() == 0.0 {
                dpz = Complex64::new(1e-300, 0.0);
            }
            let w = pz / dpz;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        s += Complex64::new(1e12, 0.0);
                    } else {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * s;
            let dz = if denom.norm() < 1e-12 { w } else { w / denom };
            z[i] -= dz;
            max_step = max_step.max(dz.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    let worst = z.iter().map(|&r| monic.scaled_residual(r)).fold(0.0, f64::max);
    if worst < 1e-9 {
        Some(z)
    } else {
        None
    }
}

/// Companion-matrix root extraction.
///
/// The complex companion matrix is embedded as the real block matrix
/// `[[Re, -Im], [Im, Re]]` whose spectrum is the union of the companion
/// spectrum and its conjugate. The true roots are selected greedily by
/// residual with synthetic deflation between picks, which keeps conjugate
/// ghosts from being chosen twice.
fn companion_roots(monic: &CPoly) -> Option<Vec<Complex64>> {
    let n = monic.degree();
    let mut re = DMatrix::<f64>::zeros(n, n);
    let mut im = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        re[(i, n - 1)] = -monic.coeffs[i].re;
        im[(i, n - 1)] = -monic.coeffs[i].im;
        if i + 1 < n {
            re[(i + 1, i)] = 1.0;
        }
    }
    let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
    emb.view_mut((0, 0), (n, n)).copy_from(&re);
    emb.view_mut((0, n), (n, n)).copy_from(&(-&im));
    emb.view_mut((n, 0), (n, n)).copy_from(&im);
    emb.view_mut((n, n), (n, n)).copy_from(&re);
    let mut candidates: Vec<Complex64> = emb.complex_eigenvalues().iter().copied().collect();

    let mut work = monic.clone();
    let mut roots = Vec::with_capacity(n);
    for _ in 0..n {
        let (best_idx, _) = candidates
            .iter()
            .enumerate()
            .map(|(k, &c)| (k, work.eval(c).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        let root = newton_polish(monic, candidates.swap_remove(best_idx));
        work = work.deflate(root);
        roots.push(root);
    }
    Some(roots)
}
