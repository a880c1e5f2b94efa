//! Full small-signal state-space model of the converter, filter, grid
//! branch, cascaded voltage/current PIs, power loops, and the optional
//! voltage-angle compensator, linearized about an operating point.
//!
//! Circuit states are kept in the grid synchronous frame; controller states
//! live in the inverter frame. The two frames are linked through the steady
//! vectors and the relative-angle state. States with no dynamic effect at
//! the given gains (current-loop integrator at `k_ii = 0`, reactive filter
//! at `k_q = 0`) are omitted so the spectrum carries no dead integrators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cplx::{poles_quadratic, RealStateSpace};
use crate::error::Result;
use crate::model::OperatingPoint;
use crate::params::{CompensatorMode, PowerLoop, VsgParams};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Input and output index names of the state space built by [`full_ssm`].
pub mod io {
    /// d-axis voltage reference perturbation, p.u.
    pub const IN_V_REF_D: usize = 0;
    /// Active-power reference perturbation, p.u.
    pub const IN_P_REF: usize = 1;
    /// Grid-source voltage perturbation, d component (grid frame), p.u.
    pub const IN_VN_D: usize = 2;
    /// Grid-source voltage perturbation, q component (grid frame), p.u.
    pub const IN_VN_Q: usize = 3;
    /// Grid frequency perturbation, p.u. speed.
    pub const IN_OMEGA_G: usize = 4;
    /// Number of inputs.
    pub const N_INPUTS: usize = 5;

    /// PoC voltage, d component (grid frame).
    pub const OUT_VC_D: usize = 0;
    /// PoC voltage, q component (grid frame).
    pub const OUT_VC_Q: usize = 1;
    /// Grid current, d component (grid frame).
    pub const OUT_IG_D: usize = 2;
    /// Grid current, q component (grid frame).
    pub const OUT_IG_Q: usize = 3;
    /// Active-power perturbation at the PoC.
    pub const OUT_P_E: usize = 4;
    /// Reactive-power perturbation at the PoC.
    pub const OUT_Q_E: usize = 5;
    /// Relative angle perturbation (inverter frame ahead of grid).
    pub const OUT_DELTA: usize = 6;
    /// Number of outputs.
    pub const N_OUTPUTS: usize = 7;
}

struct Slots {
    is: usize,
    vc: usize,
    ig: usize,
    xi_v: usize,
    xi_i: Option<usize>,
    comp: Option<usize>,
    delta: usize,
    domega: Option<usize>,
    xi_q: Option<usize>,
    n: usize,
}

fn layout(p: &VsgParams) -> Slots {
    let mut n = 8;
    let xi_i = if p.k_ii != 0.0 {
        n += 2;
        Some(n - 2)
    } else {
        None
    };
    let comp = match p.compensator {
        CompensatorMode::Off => None,
        CompensatorMode::AngleRotation => {
            n += 1;
            Some(n - 1)
        }
        CompensatorMode::VoltageInjection => {
            n += 2;
            Some(n - 2)
        }
    };
    let delta = n;
    n += 1;
    let domega = match p.power_loop {
        PowerLoop::Swing { .. } => {
            n += 1;
            Some(n - 1)
        }
        PowerLoop::Droop { .. } => None,
    };
    let xi_q = if p.k_q != 0.0 {
        n += 1;
        Some(n - 1)
    } else {
        None
    };
    Slots {
        is: 0,
        vc: 2,
        ig: 4,
        xi_v: 6,
        xi_i,
        comp,
        delta,
        domega,
        xi_q,
        n,
    }
}

/// Build the linearized model with inputs and outputs indexed by [`io`].
pub fn full_ssm(p: &VsgParams, op: &OperatingPoint) -> Result<RealStateSpace> {
    p.validate()?;
    let slots = layout(p);
    let n = slots.n;
    let ec = Complex64::from_polar(1.0, -op.delta0);
    let es = ec.conj();
    let ig0s = op.ig0 * es;
    let vc0s = op.vc0 * es;
    let (ls, lg, cf) = (p.ls(), p.lg(), p.cf());
    let zg = p.zg();
    let corner = p.k_ip * p.k_vi;

    let cplx = |x: &[f64], at: usize| Complex64::new(x[at], x[at + 1]);
    let eval = |x: &[f64], u: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let is_s = cplx(x, slots.is);
        let vc_s = cplx(x, slots.vc);
        let ig_s = cplx(x, slots.ig);
        let xi_v = cplx(x, slots.xi_v);
        let xi_i = slots.xi_i.map_or(Complex64::ZERO, |at| cplx(x, at));
        let delta = x[slots.delta];
        let domega = slots.domega.map_or(0.0, |at| x[at]);
        let xi_q = slots.xi_q.map_or(0.0, |at| x[at]);
        let (du_vr, du_pr, dw_g) = (u[io::IN_V_REF_D], u[io::IN_P_REF], u[io::IN_OMEGA_G]);
        let dvn = Complex64::new(u[io::IN_VN_D], u[io::IN_VN_Q]);

        // Measurement-frame angle: relative angle plus any compensator shift.
        let ddm = match p.compensator {
            CompensatorMode::AngleRotation => delta + x[slots.comp.unwrap()],
            _ => delta,
        };
        let is_c = ec * is_s - J * op.is0 * ddm;
        let vc_c = ec * vc_s - J * op.vc0 * ddm;
        let ig_c = ec * ig_s - J * op.ig0 * ddm;

        let vr = Complex64::new(du_vr + xi_q, 0.0);
        let err_v = vr - vc_c;
        let i_ref = p.k_vp * err_v + p.k_vi * xi_v + J * p.bf() * vc_c + p.beta_v * ig_c;
        let err_i = i_ref - p.beta_k * is_c;
        let mut vs_c = p.k_ip * err_i + p.k_ii * xi_i + J * p.xf() * is_c;
        if p.compensator == CompensatorMode::VoltageInjection {
            vs_c -= J * cplx(x, slots.comp.unwrap());
        }
        let vs_s = es * (vs_c + J * op.vs0 * ddm);

        let d_is = (vs_s - vc_s - J * p.x_s * is_s) / ls;
        let d_vc = (is_s - ig_s - J * p.b_c * vc_s) / cf;
        let d_ig = (vc_s - dvn - zg * ig_s) / lg;
        let d_p = (ig0s.conj() * vc_s).re + (vc0s.conj() * ig_s).re;
        let d_q = (vc_s * ig0s.conj()).im + (vc0s * ig_s.conj()).im;

        let mut dx = vec![0.0; n];
        let put = |dx: &mut [f64], at: usize, z: Complex64| {
            dx[at] = z.re;
            dx[at + 1] = z.im;
        };
        put(&mut dx, slots.is, d_is);
        put(&mut dx, slots.vc, d_vc);
        put(&mut dx, slots.ig, d_ig);
        put(&mut dx, slots.xi_v, err_v);
        if let Some(at) = slots.xi_i {
            put(&mut dx, at, err_i);
        }
        match p.compensator {
            CompensatorMode::AngleRotation => {
                let at = slots.comp.unwrap();
                dx[at] = corner * (-err_v.re - x[at]);
            }
            CompensatorMode::VoltageInjection => {
                let at = slots.comp.unwrap();
                put(&mut dx, at, corner * (err_v - cplx(x, at)));
            }
            CompensatorMode::Off => {}
        }
        match p.power_loop {
            PowerLoop::Swing { h, d } => {
                dx[slots.delta] = p.omega1 * domega - p.omega1 * dw_g;
                dx[slots.domega.unwrap()] = (du_pr - d_p - d * domega) / (2.0 * h);
            }
            PowerLoop::Droop { k_d } => {
                dx[slots.delta] = p.omega1 * k_d * (du_pr - d_p) - p.omega1 * dw_g;
            }
        }
        if let Some(at) = slots.xi_q {
            dx[at] = p.omega_q * (p.k_q * (-d_q) - xi_q);
        }

        let y = vec![vc_s.re, vc_s.im, ig_s.re, ig_s.im, d_p, d_q, delta];
        (dx, y)
    };

    let zero_x = vec![0.0; n];
    let zero_u = vec![0.0; io::N_INPUTS];
    let mut a = DMatrix::zeros(n, n);
    let mut c = DMatrix::zeros(io::N_OUTPUTS, n);
    for j in 0..n {
        let mut x = zero_x.clone();
        x[j] = 1.0;
        let (dx, y) = eval(&x, &zero_u);
        for i in 0..n {
            a[(i, j)] = dx[i];
        }
        for i in 0..io::N_OUTPUTS {
            c[(i, j)] = y[i];
        }
    }
    let mut b = DMatrix::zeros(n, io::N_INPUTS);
    let mut d = DMatrix::zeros(io::N_OUTPUTS, io::N_INPUTS);
    for j in 0..io::N_INPUTS {
        let mut u = zero_u.clone();
        u[j] = 1.0;
        let (dx, y) = eval(&zero_x, &u);
        for i in 0..n {
            b[(i, j)] = dx[i];
        }
        for i in 0..io::N_OUTPUTS {
            d[(i, j)] = y[i];
        }
    }
    RealStateSpace::new(a, b, c, d)
}

/// Poles of the reduced power loop with the PoC voltage held rigid, so the
/// only dynamics are the angle law against the static synchronizing
/// stiffness `K = v_c0 · V_n · cos(δ0) / X_g`.
pub fn rigid_voltage_power_poles(p: &VsgParams, op: &OperatingPoint) -> Result<Vec<Complex64>> {
    let k_sync = op.vc0.re * op.vn0.norm() * op.delta0.cos() / p.x_g;
    match p.power_loop {
        PowerLoop::Swing { h, d } => {
            let (l1, l2) = poles_quadratic(
                Complex64::new(p.omega1 * k_sync, 0.0),
                Complex64::new(d, 0.0),
                Complex64::new(2.0 * h, 0.0),
            )?;
            Ok(vec![l1, l2])
        }
        PowerLoop::Droop { k_d } => Ok(vec![Complex64::new(-p.omega1 * k_d * k_sync, 0.0)]),
    }
}
