//! State-space realizations: complex single-channel systems and their real
//! two-channel (dq) embeddings, plus block interconnection.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-input single-output complex-coefficient state space
/// `dx = A x + B u`, `y = C x + D u` with complex states and signals.
#[derive(Debug, Clone)]
pub struct CStateSpace {
    a: DMatrix<Complex64>,
    b: DMatrix<Complex64>,
    c: DMatrix<Complex64>,
    d: Complex64,
}

impl CStateSpace {
    pub fn new(
        a: DMatrix<Complex64>,
        b: DMatrix<Complex64>,
        c: DMatrix<Complex64>,
        d: Complex64,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || b.nrows() != n || b.ncols() != 1 || c.nrows() != 1 || c.ncols() != n {
            return Err(Error::InvalidParameter(
                "inconsistent state-space dimensions".into(),
            ));
        }
        Ok(CStateSpace { a, b, c, d })
    }

    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<Complex64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<Complex64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn d(&self) -> Complex64 {
        self.d
    }

    /// Eigenvalues of `A`.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>> {
        self.a
            .clone()
            .eigenvalues()
            .map(|v| v.iter().copied().collect())
            .ok_or(Error::SingularSystem {
                context: "complex eigenvalue computation",
            })
    }

    /// Frequency response by solving `(j omega I - A) x = B` per frequency.
    pub fn freq_response(&self, omegas: &[f64]) -> Result<Vec<Complex64>> {
        let n = self.order();
        omegas
            .iter()
            .map(|&w| {
                let mut m = -self.a.clone();
                for k in 0..n {
                    m[(k, k)] += Complex64::new(0.0, w);
                }
                let rhs = DVector::from_column_slice(self.b.as_slice());
                let x = m
                    .lu()
                    .solve(&rhs)
                    .ok_or(Error::FrequencyAtPole { omega: w })?;
                Ok((&self.c * &x)[(0, 0)] + self.d)
            })
            .collect()
    }

    /// Real two-channel embedding `[[Re, -Im], [Im, Re]]` of every matrix.
    ///
    /// The embedded system maps `(Re u, Im u)` to `(Re y, Im y)` and its
    /// spectrum is the union of `eig(A)` and its conjugate.
    pub fn embed_real(&self) -> RealStateSpace {
        RealStateSpace {
            a: embed(&self.a),
            b: embed(&self.b),
            c: embed(&self.c),
            d: embed(&DMatrix::from_element(1, 1, self.d)),
        }
    }
}

fn embed(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    let mut out = DMatrix::<f64>::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            out[(i, j)] = m[(i, j)].re;
            out[(i, j + c)] = -m[(i, j)].im;
            out[(i + r, j)] = m[(i, j)].im;
            out[(i + r, j + c)] = m[(i, j)].re;
        }
    }
    out
}

/// Real-coefficient multi-input multi-output state space.
#[derive(Debug, Clone)]
pub struct RealStateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl RealStateSpace {
    pub fn new(
        a: DMatrix<f64>,
        b: DMatrix<f64>,
        c: DMatrix<f64>,
        d: DMatrix<f64>,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n
            || b.nrows() != n
            || c.ncols() != n
            || d.nrows() != c.nrows()
            || d.ncols() != b.ncols()
        {
            return Err(Error::InvalidParameter(
                "inconsistent state-space dimensions".into(),
            ));
        }
        Ok(RealStateSpace { a, b, c, d })
    }

    /// Stateless gain block `y = D u`.
    pub fn from_static_gain(d: DMatrix<f64>) -> Self {
        let (p, m) = d.shape();
        RealStateSpace {
            a: DMatrix::zeros(0, 0),
            b: DMatrix::zeros(0, m),
            c: DMatrix::zeros(p, 0),
            d,
        }
    }

    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_inputs(&self) -> usize {
        self.b.ncols()
    }

    pub fn n_outputs(&self) -> usize {
        self.c.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    /// Full complex spectrum of `A`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.a.nrows() == 0 {
            return Vec::new();
        }
        self.a.complex_eigenvalues().iter().copied().collect()
    }

    /// All outputs of the response to input channel `iu` at one signed
    /// frequency.
    pub fn freq_response_column(&self, omega: f64, iu: usize) -> Result<DVector<Complex64>> {
        let n = self.n_states();
        if n == 0 {
            return Ok(DVector::from_iterator(
                self.n_outputs(),
                self.d.column(iu).iter().map(|&v| Complex64::new(v, 0.0)),
            ));
        }
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(-self.a[(i, j)], 0.0);
            }
            m[(i, i)] += Complex64::new(0.0, omega);
        }
        let rhs = DVector::from_iterator(
            n,
            self.b.column(iu).iter().map(|&v| Complex64::new(v, 0.0)),
        );
        let x = m
            .lu()
            .solve(&rhs)
            .ok_or(Error::FrequencyAtPole { omega })?;
        let mut y = DVector::from_element(self.n_outputs(), Complex64::new(0.0, 0.0));
        for p in 0..self.n_outputs() {
            let mut acc = Complex64::new(self.d[(p, iu)], 0.0);
            for j in 0..n {
                acc += Complex64::new(self.c[(p, j)], 0.0) * x[j];
            }
            y[p] = acc;
        }
        Ok(y)
    }

    /// Scalar frequency response from input `iu` to output `iy`.
    pub fn freq_response(&self, omega: f64, iu: usize, iy: usize) -> Result<Complex64> {
        Ok(self.freq_response_column(omega, iu)?[iy])
    }

    /// Unit-step response on input `iu`: exact zero-order-hold propagation
    /// through the matrix exponential of the augmented `[[A, b], [0, 0]]`.
    ///
    /// `times` must be non-decreasing and non-negative; the step is applied
    /// at `t = 0` with zero initial state. Returns one output vector per
    /// sample time.
    pub fn step_response(&self, iu: usize, times: &[f64]) -> Result<Vec<DVector<f64>>> {
        let n = self.n_states();
        let mut aug = DMatrix::<f64>::zeros(n + 1, n + 1);
        aug.view_mut((0, 0), (n, n)).copy_from(&self.a);
        for i in 0..n {
            aug[(i, n)] = self.b[(i, iu)];
        }
        let mut cache: HashMap<u64, DMatrix<f64>> = HashMap::new();
        let mut x = DVector::<f64>::zeros(n + 1);
        x[n] = 1.0; // constant unit input carried as an extra state
        let mut out = Vec::with_capacity(times.len());
        let mut t_prev = 0.0f64;
        for &t in times {
            if t < t_prev {
                return Err(Error::InvalidParameter(
                    "step-response sample times must be non-decreasing and non-negative".into(),
                ));
            }
            let h = t - t_prev;
            if h > 0.0 {
                let phi = cache
                    .entry(h.to_bits())
                    .or_insert_with(|| expm(&(&aug * h)));
                x = &*phi * &x;
            }
            t_prev = t;
            let mut y = DVector::<f64>::zeros(self.n_outputs());
            for p in 0..self.n_outputs() {
                let mut acc = self.d[(p, iu)];
                for j in 0..n {
                    acc += self.c[(p, j)] * x[j];
                }
                y[p] = acc;
            }
            out.push(y);
        }
        Ok(out)
    }

    /// Fixed-step fourth-order Runge-Kutta integration under an arbitrary
    /// input signal. Returns the output trajectory sampled at
    /// `t0 + k dt` for `k = 0..=steps`.
    pub fn simulate_rk4<F>(
        &self,
        input: F,
        t0: f64,
        dt: f64,
        steps: usize,
    ) -> Vec<DVector<f64>>
    where
        F: Fn(f64) -> DVector<f64>,
    {
        let n = self.n_states();
        let mut x = DVector::<f64>::zeros(n);
        let output = |x: &DVector<f64>, u: &DVector<f64>| &self.c * x + &self.d * u;
        let deriv = |x: &DVector<f64>, u: &DVector<f64>| &self.a * x + &self.b * u;
        let mut out = Vec::with_capacity(steps + 1);
        out.push(output(&x, &input(t0)));
        for k in 0..steps {
            let t = t0 + k as f64 * dt;
            let u1 = input(t);
            let u2 = input(t + 0.5 * dt);
            let u3 = input(t + dt);
            let k1 = deriv(&x, &u1);
            let k2 = deriv(&(&x + &k1 * (0.5 * dt)), &u2);
            let k3 = deriv(&(&x + &k2 * (0.5 * dt)), &u2);
            let k4 = deriv(&(&x + &k3 * dt), &u3);
            x += (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0);
            out.push(output(&x, &input(t + dt)));
        }
        out
    }

    /// Series composition: `self` drives `next`.
    pub fn series(&self, next: &RealStateSpace) -> Result<RealStateSpace> {
        if next.n_inputs() != self.n_outputs() {
            return Err(Error::InvalidParameter(
                "series interconnection dimension mismatch".into(),
            ));
        }
        let (n1, n2) = (self.n_states(), next.n_states());
        let mut a = DMatrix::<f64>::zeros(n1 + n2, n1 + n2);
        a.view_mut((0, 0), (n1, n1)).copy_from(&self.a);
        a.view_mut((n1, 0), (n2, n1)).copy_from(&(&next.b * &self.c));
        a.view_mut((n1, n1), (n2, n2)).copy_from(&next.a);
        let mut b = DMatrix::<f64>::zeros(n1 + n2, self.n_inputs());
        b.view_mut((0, 0), (n1, self.n_inputs())).copy_from(&self.b);
        b.view_mut((n1, 0), (n2, self.n_inputs()))
            .copy_from(&(&next.b * &self.d));
        let mut c = DMatrix::<f64>::zeros(next.n_outputs(), n1 + n2);
        c.view_mut((0, 0), (next.n_outputs(), n1))
            .copy_from(&(&next.d * &self.c));
        c.view_mut((0, n1), (next.n_outputs(), n2)).copy_from(&next.c);
        let d = &next.d * &self.d;
        RealStateSpace::new(a, b, c, d)
    }

    /// Negative feedback: `self` in the forward path, `h` fed by the output
    /// and subtracted from the reference input. Rejects algebraically
    /// ill-posed loops (singular `I + D D_h`).
    pub fn feedback(&self, h: &RealStateSpace) -> Result<RealStateSpace> {
        if h.n_inputs() != self.n_outputs() || h.n_outputs() != self.n_inputs() {
            return Err(Error::InvalidParameter(
                "feedback interconnection dimension mismatch".into(),
            ));
        }
        let p = self.n_outputs();
        let loop_gain = DMatrix::<f64>::identity(p, p) + &self.d * &h.d;
        let s = loop_gain
            .lu()
            .try_inverse()
            .ok_or(Error::IllPosedInterconnection)?;
        let (ng, nh) = (self.n_states(), h.n_states());
        let m = self.n_inputs();
        let sdg = &s * &self.d; // S D_g
        let i_minus = DMatrix::<f64>::identity(m, m) - &h.d * &sdg;
        let mut a = DMatrix::<f64>::zeros(ng + nh, ng + nh);
        a.view_mut((0, 0), (ng, ng))
            .copy_from(&(&self.a - &self.b * &h.d * &s * &self.c));
        a.view_mut((0, ng), (ng, nh))
            .copy_from(&(-(&self.b * &i_minus * &h.c)));
        a.view_mut((ng, 0), (nh, ng)).copy_from(&(&h.b * &s * &self.c));
        a.view_mut((ng, ng), (nh, nh))
            .copy_from(&(&h.a - &h.b * &sdg * &h.c));
        let mut b = DMatrix::<f64>::zeros(ng + nh, m);
        b.view_mut((0, 0), (ng, m)).copy_from(&(&self.b * &i_minus));
        b.view_mut((ng, 0), (nh, m)).copy_from(&(&h.b * &sdg));
        let mut c = DMatrix::<f64>::zeros(p, ng + nh);
        c.view_mut((0, 0), (p, ng)).copy_from(&(&s * &self.c));
        c.view_mut((0, ng), (p, nh))
            .copy_from(&(-(&sdg * &h.c)));
        let d = sdg.clone();
        RealStateSpace::new(a, b, c, d)
    }

    /// Negative unity feedback around a square system.
    pub fn unity_feedback(&self) -> Result<RealStateSpace> {
        if self.n_inputs() != self.n_outputs() {
            return Err(Error::InvalidParameter(
                "unity feedback requires a square system".into(),
            ));
        }
        self.feedback(&RealStateSpace::from_static_gain(DMatrix::identity(
            self.n_inputs(),
            self.n_inputs(),
        )))
    }
}

/// Matrix exponential by scaling and squaring with a 6th-order Pade
/// approximant; adequate for the modest orders and norms used here.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = m.amax() * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let a = m / 2f64.powi(squarings as i32);
    // Pade(6,6): N(a) / N(-a) with coefficients 6!k!/(12!(6-k)!k!) pattern.
    let coeffs = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665280.0,
    ];
    let mut pow = DMatrix::<f64>::identity(n, n);
    let mut num = DMatrix::<f64>::identity(n, n) * coeffs[0];
    let mut den = DMatrix::<f64>::identity(n, n) * coeffs[0];
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        pow = &pow * &a;
        num += &pow * ck;
        if k % 2 == 0 {
            den += &pow * ck;
        } else {
            den -= &pow * ck;
        }
    }
    let mut e = den
        .lu()
        .solve(&num)
        .expect("Pade denominator is nonsingular after scaling");
    for _ in 0..squarings {
        e = &e * &e;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::rational::CRational;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn first_order(pole: Complex64) -> CStateSpace {
        CStateSpace::new(
            DMatrix::from_element(1, 1, pole),
            DMatrix::from_element(1, 1, c(1.0, 0.0)),
            DMatrix::from_element(1, 1, c(1.0, 0.0)),
            c(0.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn complex_integrator_embeds_to_double_integrator() {
        let sys = first_order(c(0.0, 0.0));
        let emb = sys.embed_real();
        assert_eq!(emb.n_states(), 2);
        assert_eq!(emb.n_inputs(), 2);
        for ev in emb.eigenvalues() {
            assert!(ev.norm() < 1e-12);
        }
    }

    #[test]
    fn grid_admittance_pole_embeds_to_conjugate_pair() {
        let w1 = 100.0 * std::f64::consts::PI;
        let sys = first_order(c(0.0, -w1));
        let mut eigs = sys.embed_real().eigenvalues();
        eigs.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((eigs[0] - c(0.0, -w1)).norm() < 1e-8 * w1);
        assert!((eigs[1] - c(0.0, w1)).norm() < 1e-8 * w1);
    }

    #[test]
    fn embedding_spectrum_is_union_with_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let n = 4;
            let a = DMatrix::from_fn(n, n, |_, _| {
                c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            });
            let sys = CStateSpace::new(
                a.clone(),
                DMatrix::from_element(n, 1, c(1.0, 0.0)),
                DMatrix::from_element(1, n, c(1.0, 0.0)),
                c(0.0, 0.0),
            )
            .unwrap();
            let complex_eigs = sys.eigenvalues().unwrap();
            let mut expected: Vec<Complex64> = complex_eigs
                .iter()
                .flat_map(|&e| [e, e.conj()])
                .collect();
            let mut found = sys.embed_real().eigenvalues();
            let sort = |v: &mut Vec<Complex64>| {
                v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap())
            };
            sort(&mut expected);
            sort(&mut found);
            for (e, f) in expected.iter().zip(&found) {
                assert!((e - f).norm() < 1e-8, "spectrum mismatch {e} vs {f}");
            }
        }
    }

    #[test]
    fn embedded_system_tracks_complex_system_on_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let tf = CRational::from_coeffs(
            &[c(1.0, -0.4), c(0.3, 0.0)],
            &[c(2.0, 1.0), c(1.2, -0.3), c(1.0, 0.0)],
        )
        .unwrap();
        let sys = tf.realize_control_canonical().unwrap();
        let emb = sys.embed_real();
        let dt = 1e-3;
        let steps = 400;
        let samples: Vec<Complex64> = (0..=steps + 1)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        // Piecewise-constant input over full RK4 steps keeps both
        // integrations on identical data.
        let u_of = |t: f64| samples[(t / dt + 1e-9) as usize];

        // Complex RK4, mirroring RealStateSpace::simulate_rk4.
        let n = sys.order();
        let mut x = DVector::<Complex64>::from_element(n, c(0.0, 0.0));
        let deriv = |x: &DVector<Complex64>, u: Complex64| {
            sys.a() * x + DVector::from_column_slice(sys.b().as_slice()) * u
        };
        let mut y_complex = Vec::with_capacity(steps + 1);
        let out_of = |x: &DVector<Complex64>, u: Complex64| {
            let mut acc = sys.d() * u;
            for j in 0..n {
                acc += sys.c()[(0, j)] * x[j];
            }
            acc
        };
        y_complex.push(out_of(&x, u_of(0.0)));
        for k in 0..steps {
            let t = k as f64 * dt;
            let (u1, u2, u3) = (u_of(t), u_of(t + 0.5 * dt), u_of(t + dt));
            let k1 = deriv(&x, u1);
            let k2 = deriv(&(&x + &k1 * c(0.5 * dt, 0.0)), u2);
            let k3 = deriv(&(&x + &k2 * c(0.5 * dt, 0.0)), u2);
            let k4 = deriv(&(&x + &k3 * c(dt, 0.0)), u3);
            x += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
            y_complex.push(out_of(&x, u_of(t + dt)));
        }

        let y_real = emb.simulate_rk4(
            |t| {
                let u = u_of(t);
                DVector::from_column_slice(&[u.re, u.im])
            },
            0.0,
            dt,
            steps,
        );
        for (yc, yr) in y_complex.iter().zip(&y_real) {
            assert!((yc.re - yr[0]).abs() < 1e-10);
            assert!((yc.im - yr[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn series_blocks_match_rational_composition() {
        let g1 = CRational::from_coeffs(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let g2 = CRational::from_coeffs(
            &[c(1.0, 0.0), c(1.0, 0.0)],
            &[c(2.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let chain = g1
            .realize_control_canonical()
            .unwrap()
            .embed_real()
            .series(&g2.realize_control_canonical().unwrap().embed_real())
            .unwrap();
        for w in [0.0, 0.5, -2.7, 14.0] {
            let expect = (c(0.0, w) + 2.0).inv();
            let got = chain.freq_response(w, 0, 0).unwrap()
                + c(0.0, 1.0) * chain.freq_response(w, 0, 1).unwrap();
            assert!(
                (got - expect).norm() < 1e-8 * expect.norm().max(1.0),
                "series mismatch at {w}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn unity_feedback_matches_rational_closed_form() {
        let g = CRational::from_coeffs(
            &[c(3.0, 1.0), c(0.5, -0.7)],
            &[c(1.0, -2.0), c(0.4, 0.1), c(1.0, 0.0)],
        )
        .unwrap();
        let closed_rational = g.unity_feedback().unwrap();
        let closed_blocks = g
            .realize_control_canonical()
            .unwrap()
            .embed_real()
            .unity_feedback()
            .unwrap();
        let omegas: Vec<f64> = (0..20).map(|k| -30.0 + 3.3 * k as f64).collect();
        for &w in &omegas {
            let expect = closed_rational.eval(c(0.0, w));
            // First real input column carries Re u; response to the complex
            // unit input is column 0 plus j times column 1 of outputs.
            let got = closed_blocks.freq_response(w, 0, 0).unwrap()
                + c(0.0, 1.0) * closed_blocks.freq_response(w, 0, 1).unwrap();
            assert!(
                (got - expect).norm() < 1e-8 * expect.norm().max(1.0),
                "feedback mismatch at {w}"
            );
        }
    }

    #[test]
    fn ill_posed_algebraic_loop_rejected() {
        // Static gain -1 in unity feedback gives I + D = 0.
        let g = RealStateSpace::from_static_gain(DMatrix::from_element(1, 1, -1.0));
        assert!(matches!(
            g.unity_feedback(),
            Err(Error::IllPosedInterconnection)
        ));
    }

    #[test]
    fn expm_matches_scalar_and_rotation() {
        let m = DMatrix::from_element(1, 1, -0.7);
        assert!((expm(&m)[(0, 0)] - (-0.7f64).exp()).abs() < 1e-12);
        // Rotation generator: exp([[0, -w], [w, 0]]) is a rotation by w.
        let w = 2.1;
        let rot = expm(&DMatrix::from_row_slice(2, 2, &[0.0, -w, w, 0.0]));
        assert!((rot[(0, 0)] - w.cos()).abs() < 1e-12);
        assert!((rot[(1, 0)] - w.sin()).abs() < 1e-12);
    }

    #[test]
    fn step_response_matches_rk4() {
        let tf = CRational::from_coeffs(
            &[c(2.0, 1.0), c(0.3, -0.1)],
            &[c(2.0, 1.0), c(1.0, 0.5), c(1.0, 0.0)],
        )
        .unwrap();
        let emb = tf.realize_control_canonical().unwrap().embed_real();
        let dt = 1e-4;
        let steps = 2000;
        let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
        let exact = emb.step_response(0, &times).unwrap();
        let rk4 = emb.simulate_rk4(
            |_| DVector::from_column_slice(&[1.0, 0.0]),
            0.0,
            dt,
            steps,
        );
        for (a, b) in exact.iter().zip(&rk4) {
            assert!((a[0] - b[0]).abs() < 1e-9);
            assert!((a[1] - b[1]).abs() < 1e-9);
        }
    }
}
