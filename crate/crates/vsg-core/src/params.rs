//! Converter, grid, and controller parameter set shared by every layer of the
//! crate, expressed in per-unit on the converter base.
//!
//! Reactances and susceptances are per-unit at the nominal frequency; the
//! corresponding time-domain inductances and capacitances (in seconds) are
//! obtained by dividing by the nominal angular frequency.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Outer active-power loop variant driving the converter angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerLoop {
    /// Swing dynamics: `2H dΔω/dt = (P_ref − P_e) − D·Δω`, `dθ/dt = ω1(1 + Δω)`.
    Swing {
        /// Inertia constant in seconds.
        h: f64,
        /// Damping coefficient in p.u. power per p.u. speed.
        d: f64,
    },
    /// First-order frequency droop: `Δω = k_d (P_ref − P_e)` feeding the same
    /// angle integrator, with no inertial state.
    Droop {
        /// Droop gain in p.u. speed per p.u. power.
        k_d: f64,
    },
}

/// How the voltage-angle compensator output enters the control loop.
///
/// Both realizations share the same first-order state
/// `dx/dt = k_ip k_vi (−e_d − x)` driven by the d-axis voltage error; they
/// differ in where the state acts on the converter command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompensatorMode {
    /// Compensator disabled; the state is held at zero.
    Off,
    /// The state acts as an angle correction: measurements are rotated into a
    /// frame advanced by `x` and the voltage command is rotated back.
    AngleRotation,
    /// The state is injected additively as `−j·x` at the voltage-command
    /// summing point.
    VoltageInjection,
}

/// Complete parameter set of the voltage-controlled converter behind an
/// L-C-L(grid) network against an infinite bus.
#[derive(Debug, Clone, PartialEq)]
pub struct VsgParams {
    /// Nominal angular frequency in rad/s.
    pub omega1: f64,
    /// Converter-side filter reactance, p.u.
    pub x_s: f64,
    /// Grid-side (line) reactance, p.u.
    pub x_g: f64,
    /// Grid-side series resistance, p.u.
    pub r_g: f64,
    /// Filter-capacitor susceptance, p.u.
    pub b_c: f64,
    /// Current-loop proportional gain.
    pub k_ip: f64,
    /// Current-loop integral gain.
    pub k_ii: f64,
    /// Voltage-loop proportional gain.
    pub k_vp: f64,
    /// Voltage-loop integral gain.
    pub k_vi: f64,
    /// Grid-current feed gain into the current reference (β_v position).
    pub beta_v: Complex64,
    /// Converter-current feedback scaling (β_k position).
    pub beta_k: Complex64,
    /// Current-loop decoupling reactance; `None` uses `x_s`.
    pub x_f: Option<f64>,
    /// Voltage-loop decoupling susceptance; `None` uses `b_c`.
    pub b_f: Option<f64>,
    /// Active-power loop variant.
    pub power_loop: PowerLoop,
    /// Reactive-droop gain, p.u. voltage per p.u. reactive power.
    pub k_q: f64,
    /// Reactive-droop filter corner, rad/s.
    pub omega_q: f64,
    /// Voltage-angle compensator realization.
    pub compensator: CompensatorMode,
}

impl VsgParams {
    /// Simulation-scale base case: 690 V / 1 MVA converter on a nominal
    /// inductive grid with the high-bandwidth voltage-loop gain.
    pub fn table_i() -> Self {
        Self {
            omega1: 2.0 * std::f64::consts::PI * 50.0,
            x_s: 0.10,
            x_g: 0.30,
            r_g: 1e-3,
            b_c: 0.01,
            k_ip: 0.4776,
            k_ii: 15.0,
            k_vp: 0.0,
            k_vi: 800.0,
            beta_v: Complex64::new(0.5, 0.0),
            beta_k: Complex64::new(1.0, 0.0),
            x_f: None,
            b_f: None,
            power_loop: PowerLoop::Swing { h: 1.0, d: 66.67 },
            k_q: 0.0,
            omega_q: 2.0 * std::f64::consts::PI * 10.0,
            compensator: CompensatorMode::Off,
        }
    }

    /// Symmetry-optimum cascade tuning of the same plant: low-bandwidth
    /// voltage loop used as the sluggish reference design.
    pub fn so_tuned() -> Self {
        Self {
            k_vi: 22.1,
            k_ip: 0.796,
            ..Self::table_i()
        }
    }

    /// Experiment-scale parameters (125 V / 1 kVA base) with the nominal
    /// 15 mH line inductor and measured series resistance.
    pub fn exp_nominal() -> Self {
        let base = Self::table_i();
        let z_b = 125.0 * 125.0 / 1000.0;
        Self {
            x_g: base.omega1 * 0.015 / z_b,
            r_g: 0.533 / z_b,
            b_c: base.omega1 * 4e-6 * z_b,
            ..base
        }
    }

    /// Experiment-scale strong-grid variant: 2 mH line inductor.
    pub fn exp_strong() -> Self {
        let base = Self::table_i();
        let z_b = 125.0 * 125.0 / 1000.0;
        Self {
            x_g: base.omega1 * 0.002 / z_b,
            r_g: 0.216 / z_b,
            b_c: base.omega1 * 4e-6 * z_b,
            ..base
        }
    }

    /// Converter-side filter inductance in seconds (p.u. reactance over ω1).
    pub fn ls(&self) -> f64 {
        self.x_s / self.omega1
    }

    /// Grid-side inductance in seconds.
    pub fn lg(&self) -> f64 {
        self.x_g / self.omega1
    }

    /// Filter capacitance in seconds.
    pub fn cf(&self) -> f64 {
        self.b_c / self.omega1
    }

    /// Complex grid branch impedance `r_g + j x_g`, p.u.
    pub fn zg(&self) -> Complex64 {
        Complex64::new(self.r_g, self.x_g)
    }

    /// Effective current-loop decoupling reactance.
    pub fn xf(&self) -> f64 {
        self.x_f.unwrap_or(self.x_s)
    }

    /// Effective voltage-loop decoupling susceptance.
    pub fn bf(&self) -> f64 {
        self.b_f.unwrap_or(self.b_c)
    }

    /// Complex current feeding gain `k̃_c = β_k − β_v`.
    pub fn kc(&self) -> Complex64 {
        self.beta_k - self.beta_v
    }

    /// Install a complex feeding gain: the real part is carried by the
    /// converter-current scaling and the imaginary part by a purely
    /// imaginary grid-current feed, so `kc()` reproduces the argument.
    pub fn set_kc(&mut self, kc: Complex64) {
        self.beta_k = Complex64::new(kc.re, 0.0);
        self.beta_v = Complex64::new(0.0, -kc.im);
    }

    /// Reject non-physical or degenerate parameter combinations.
    pub fn validate(&self) -> Result<()> {
        let positive: [(&str, f64); 5] = [
            ("omega1", self.omega1),
            ("x_s", self.x_s),
            ("b_c", self.b_c),
            ("k_ip", self.k_ip),
            ("k_vi", self.k_vi),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let nonnegative: [(&str, f64); 5] = [
            ("x_g", self.x_g),
            ("r_g", self.r_g),
            ("k_ii", self.k_ii),
            ("k_vp", self.k_vp),
            ("k_q", self.k_q),
        ];
        for (name, value) in nonnegative {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative and finite, got {value}"
                )));
            }
        }
        if !(self.omega_q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_q must be positive, got {}",
                self.omega_q
            )));
        }
        match self.power_loop {
            PowerLoop::Swing { h, d } => {
                if !(h > 0.0) || !(d >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "swing loop requires h > 0 and d >= 0, got h={h}, d={d}"
                    )));
                }
            }
            PowerLoop::Droop { k_d } => {
                if !(k_d > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "droop loop requires k_d > 0, got {k_d}"
                    )));
                }
            }
        }
        if !self.beta_v.is_finite() || !self.beta_k.is_finite() {
            return Err(Error::InvalidParameter(
                "beta_v and beta_k must be finite".into(),
            ));
        }
        Ok(())
    }
}
