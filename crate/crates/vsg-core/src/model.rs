//! Transfer-function constructions for the voltage-controlled converter:
//! open-loop plant, closed-loop voltage response and its pole geometry, the
//! voltage-angle compensator, frame-coupling terms, steady-state solution,
//! and the voltage-to-power coupling pair.
//!
//! The closed-loop voltage family uses a documented reduced contract: the
//! voltage controller is integral-only (`k_vi/s`), the current controller is
//! proportional-only (`k_ip`), and the grid series resistance is dropped.
//! The plant itself and the frame-coupling blocks keep the full parameter
//! set.

use num_complex::Complex64;

use crate::cplx::{CPoly, CRational, PoleGeometry};
use crate::error::{Error, Result};
use crate::params::{PowerLoop, VsgParams};

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Quiescent solution of the converter-filter-grid phasor network with the
/// inverter dq frame aligned to the PoC voltage (its q component is zero).
#[derive(Debug, Clone, Copy)]
pub struct OperatingPoint {
    /// Angle of the inverter frame ahead of the grid source, rad.
    pub delta0: f64,
    /// PoC voltage phasor; real-valued by frame alignment.
    pub vc0: Complex64,
    /// Grid-branch current phasor.
    pub ig0: Complex64,
    /// Converter-side current phasor (grid current plus capacitor current).
    pub is0: Complex64,
    /// Converter terminal voltage phasor.
    pub vs0: Complex64,
    /// Grid source voltage phasor seen from the inverter frame.
    pub vn0: Complex64,
    /// Active power delivered at the PoC, p.u.
    pub p0: f64,
    /// Reactive power delivered at the PoC, p.u.
    pub q0: f64,
}

fn require_grid_reactance(p: &VsgParams) -> Result<()> {
    if p.x_g <= 0.0 {
        return Err(Error::InvalidParameter(
            "x_g must be positive: the voltage-loop family is undefined into a \
             zero grid impedance"
                .into(),
        ));
    }
    Ok(())
}

/// Open-loop plant seen by the voltage controller:
/// `L_P = (s L_s + k̃_c k_ip) / (s L_g + R_g + j X_g)`.
///
/// The single pole sits at `−R_g/L_g − jω1`; the high-frequency gain is
/// `L_s/L_g`.
pub fn plant_open_loop(p: &VsgParams) -> Result<CRational> {
    require_grid_reactance(p)?;
    let num = CPoly::new(vec![
        p.kc() * p.k_ip,
        Complex64::new(p.ls(), 0.0),
    ]);
    let den = CPoly::new(vec![
        Complex64::new(p.r_g, p.x_g),
        Complex64::new(p.lg(), 0.0),
    ]);
    CRational::new(num, den)
}

/// Second-order coefficients `(a0, a1, a2)` of the reduced closed-loop
/// voltage denominator, with numerator `b0 = a0`, `b1 = L_g k_ip k_vi`.
pub fn closed_loop_coefficients(p: &VsgParams) -> (Complex64, Complex64, Complex64, Complex64) {
    let kc = p.kc();
    let a0 = J * p.x_g * p.k_ip * p.k_vi;
    let b1 = Complex64::new(p.lg() * p.k_ip * p.k_vi, 0.0);
    let a1 = Complex64::new(
        kc.re * p.k_ip + p.lg() * p.k_ip * p.k_vi,
        p.x_g + kc.im * p.k_ip,
    );
    let a2 = Complex64::new(p.lg() + p.ls(), 0.0);
    (a0, b1, a1, a2)
}

/// Closed-loop voltage reference-tracking transfer function
/// `(b0 + b1 s) / (a0 + a1 s + a2 s²)` under the reduced contract, together
/// with the pole geometry of its denominator.
///
/// `a0 = b0` holds structurally, so the DC gain is exactly one.
pub fn voltage_closed_loop(p: &VsgParams) -> Result<(CRational, PoleGeometry)> {
    require_grid_reactance(p)?;
    let (a0, b1, a1, a2) = closed_loop_coefficients(p);
    let tf = CRational::new(CPoly::new(vec![a0, b1]), CPoly::new(vec![a0, a1, a2]))?;
    let geometry = PoleGeometry::from_coefficients(a0, a1, a2)?;
    Ok((tf, geometry))
}

/// First-order voltage-angle compensator `1 / (1 + s/(k_ip k_vi))`: unit DC
/// gain with a single real pole at `−k_ip·k_vi`.
pub fn compensator_ctf(p: &VsgParams) -> CRational {
    let corner = Complex64::new(p.k_ip * p.k_vi, 0.0);
    CRational::from_coeffs(&[corner], &[corner, Complex64::new(1.0, 0.0)])
        .expect("positive gain product yields a nonzero denominator")
}

/// Closed loop of the forward term `(C_i C_v − j·c_vtheta)` against the
/// lossless plant under unity feedback, for an arbitrary compensator block.
pub fn closed_loop_with_compensator(
    p: &VsgParams,
    c_vtheta: &CRational,
) -> Result<CRational> {
    require_grid_reactance(p)?;
    let mut lossless = p.clone();
    lossless.r_g = 0.0;
    let l_p = plant_open_loop(&lossless)?;
    let civ = CRational::from_coeffs(
        &[Complex64::new(p.k_ip * p.k_vi, 0.0)],
        &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    )?;
    let forward = civ
        .sub(&c_vtheta.scale(J))
        .div(&l_p.add(&CRational::constant(Complex64::new(1.0, 0.0))))?;
    forward.unity_feedback()
}

/// Closed-loop voltage transfer function with the first-order voltage-angle
/// compensator injected at the forward summing point.
pub fn compensated_closed_loop(p: &VsgParams) -> Result<CRational> {
    closed_loop_with_compensator(p, &compensator_ctf(p))
}

/// Coupling from an inverter-frame angle perturbation into the voltage loop:
/// `[(C_i⁻¹ + C_v)·v_c0 + k̃_c·i_g0]·C_i` with the full PI controllers.
pub fn angle_coupling_tf(p: &VsgParams, op: &OperatingPoint) -> CRational {
    let c_i = pi_tf(p.k_ip, p.k_ii);
    let c_v = pi_tf(p.k_vp, p.k_vi);
    let c_i_inv = CRational::constant(Complex64::new(1.0, 0.0))
        .div(&c_i)
        .expect("PI controller has a nonzero numerator");
    c_i_inv
        .add(&c_v)
        .scale(op.vc0)
        .add(&CRational::constant(p.kc() * op.ig0))
        .mul(&c_i)
}

/// PI controller `kp + ki/s`, collapsing to a constant when `ki = 0`.
fn pi_tf(kp: f64, ki: f64) -> CRational {
    if ki == 0.0 {
        CRational::constant(Complex64::new(kp, 0.0))
    } else {
        CRational::from_coeffs(
            &[Complex64::new(ki, 0.0), Complex64::new(kp, 0.0)],
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        )
        .expect("linear denominator is nonzero")
    }
}

/// Newton solution of the quiescent phasor network: finds the power angle
/// delivering `p_ref` at the PoC with |v_c| = `v_ref` against a grid source
/// of magnitude `v_grid`.
pub fn steady_state(
    p: &VsgParams,
    p_ref: f64,
    v_ref: f64,
    v_grid: f64,
) -> Result<OperatingPoint> {
    let zg = p.zg();
    if zg.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "grid branch impedance is zero; the dispatch problem is singular".into(),
        ));
    }
    let vc = Complex64::new(v_ref, 0.0);
    let pe = |delta: f64| -> f64 {
        let vn = v_grid * Complex64::new(0.0, -delta).exp();
        let ig = (vc - vn) / zg;
        (vc * ig.conj()).re
    };
    let mut delta = 0.0;
    let mut iterations = 0;
    for it in 0..60 {
        iterations = it + 1;
        let f = pe(delta) - p_ref;
        let h = 1e-7;
        let fp = (pe(delta + h) - pe(delta - h)) / (2.0 * h);
        if fp.abs() < 1e-30 {
            break;
        }
        let step = f / fp;
        delta -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    let residual = (pe(delta) - p_ref).abs();
    if !residual.is_finite() || residual > 1e-10 {
        return Err(Error::SteadyStateNoConvergence {
            residual,
            iterations,
        });
    }
    let vn = v_grid * Complex64::new(0.0, -delta).exp();
    let ig = (vc - vn) / zg;
    let is = ig + J * p.b_c * vc;
    let vs = vc + J * p.x_s * is;
    Ok(OperatingPoint {
        delta0: delta,
        vc0: vc,
        ig0: ig,
        is0: is,
        vs0: vs,
        vn0: vn,
        p0: (vc * ig.conj()).re,
        q0: (vc * ig.conj()).im,
    })
}

/// The two real-rational coefficients mapping PoC dq voltage perturbations
/// to the active-power perturbation:
/// `ΔP = [i_gd0 + (sL_g+R_g)v_cd0/Δ]·Δv_cd + [i_gq0 + X_g v_cd0/Δ]·Δv_cq`
/// with `Δ = (sL_g+R_g)² + X_g²`.
///
/// The dq components here live in the frame aligned with the steady PoC
/// voltage (v_cq0 = 0); rotate perturbations into that frame before
/// composing when the operating point has a nonzero power angle.
pub fn voltage_to_power_coupling(
    op: &OperatingPoint,
    p: &VsgParams,
) -> (CRational, CRational) {
    let lg = p.lg();
    let den = CPoly::from_real(&[
        p.r_g * p.r_g + p.x_g * p.x_g,
        2.0 * lg * p.r_g,
        lg * lg,
    ]);
    let vcd0 = op.vc0.re;
    let d_dynamic = CRational::new(
        CPoly::from_real(&[p.r_g * vcd0, lg * vcd0]),
        den.clone(),
    )
    .expect("grid impedance magnitude is nonzero");
    let q_dynamic = CRational::new(CPoly::from_real(&[p.x_g * vcd0]), den)
        .expect("grid impedance magnitude is nonzero");
    let d_coef = CRational::constant(Complex64::new(op.ig0.re, 0.0)).add(&d_dynamic);
    let q_coef = CRational::constant(Complex64::new(op.ig0.im, 0.0)).add(&q_dynamic);
    (d_coef, q_coef)
}

/// Bundle of every loop block used by the analyses, constructed once from a
/// parameter set and operating point.
///
/// `c_v`/`c_i` and the closed-loop family follow the reduced contract
/// (integral-only voltage PI, proportional-only current PI, lossless grid);
/// the frame-coupling and return-ratio blocks use the full PI pair.
#[derive(Debug, Clone)]
pub struct LoopSet {
    /// Open-loop plant seen by the voltage controller.
    pub l_p: CRational,
    /// Loop transfer `C_i C_v / (L_P + 1)` under the reduced contract.
    pub g_open: CRational,
    /// Closed-loop voltage reference-tracking transfer function.
    pub g_cl: CRational,
    /// Closed loop with the voltage-angle compensator in the forward path.
    pub g_cl_comp: CRational,
    /// Pole geometry of `g_cl`'s denominator.
    pub geometry: PoleGeometry,
    /// Reduced voltage controller `k_vi/s`.
    pub c_v: CRational,
    /// Reduced current controller `k_ip`.
    pub c_i: CRational,
    /// First-order voltage-angle compensator.
    pub c_vtheta: CRational,
    /// Active-power loop `Δθ/ΔP`: swing `ω1/(2Hs² + Ds)` or droop `k_d ω1/s`.
    pub c_p: CRational,
    /// Reactive droop `k_q ω_Q/(s + ω_Q)`.
    pub c_q: CRational,
    /// Frame-angle coupling into the voltage loop (full PI).
    pub angle_coupling: CRational,
    /// Voltage-loop return ratio of the grid-connected plant, full form.
    pub t_g_full: CRational,
    /// Return ratio with capacitor dynamics and decoupling residuals dropped.
    pub t_g_approx: CRational,
}

impl LoopSet {
    /// Construct every block for the given parameters and operating point.
    pub fn build(p: &VsgParams, op: &OperatingPoint) -> Result<LoopSet> {
        let l_p = plant_open_loop(p)?;
        let one = CRational::constant(Complex64::new(1.0, 0.0));
        let c_v = pi_tf(0.0, p.k_vi);
        let c_i = CRational::constant(Complex64::new(p.k_ip, 0.0));
        let g_open = c_i.mul(&c_v).div(&l_p.add(&one))?;
        let (g_cl, geometry) = voltage_closed_loop(p)?;
        let c_vtheta = compensator_ctf(p);
        let g_cl_comp = compensated_closed_loop(p)?;
        let c_p = match p.power_loop {
            PowerLoop::Swing { h, d } => CRational::from_coeffs(
                &[Complex64::new(p.omega1, 0.0)],
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(d, 0.0),
                    Complex64::new(2.0 * h, 0.0),
                ],
            )?,
            PowerLoop::Droop { k_d } => CRational::from_coeffs(
                &[Complex64::new(k_d * p.omega1, 0.0)],
                &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            )?,
        };
        let c_q = CRational::from_coeffs(
            &[Complex64::new(p.k_q * p.omega_q, 0.0)],
            &[Complex64::new(p.omega_q, 0.0), Complex64::new(1.0, 0.0)],
        )?;
        let angle_coupling = angle_coupling_tf(p, op);

        // Return ratio: 1 + (sLs + k_c C_i + jX_D) Y_g + (sLs + b_k C_i + jX_D) G_Cf
        // with full-PI C_i, grid admittance Y_g, and capacitor admittance G_Cf.
        let c_i_full = pi_tf(p.k_ip, p.k_ii);
        let s_ls = CRational::from_coeffs(
            &[Complex64::new(0.0, 0.0), Complex64::new(p.ls(), 0.0)],
            &[Complex64::new(1.0, 0.0)],
        )?;
        let x_delta = Complex64::new(0.0, p.x_s - p.xf());
        let y_g = one.div(&CRational::from_coeffs(
            &[Complex64::new(p.r_g, p.x_g), Complex64::new(p.lg(), 0.0)],
            &[Complex64::new(1.0, 0.0)],
        )?)?;
        let g_cf = CRational::from_coeffs(
            &[Complex64::new(0.0, p.b_c), Complex64::new(p.cf(), 0.0)],
            &[Complex64::new(1.0, 0.0)],
        )?;
        let branch_g = s_ls
            .add(&c_i_full.scale(p.kc()))
            .add(&CRational::constant(x_delta));
        let branch_c = s_ls
            .add(&c_i_full.scale(p.beta_k))
            .add(&CRational::constant(x_delta));
        let t_g_full = one.add(&branch_g.mul(&y_g)).add(&branch_c.mul(&g_cf));
        let t_g_approx = one.add(&s_ls.add(&c_i_full.scale(p.kc())).mul(&y_g));

        Ok(LoopSet {
            l_p,
            g_open,
            g_cl,
            g_cl_comp,
            geometry,
            c_v,
            c_i,
            c_vtheta,
            c_p,
            c_q,
            angle_coupling,
            t_g_full,
            t_g_approx,
        })
    }
}
