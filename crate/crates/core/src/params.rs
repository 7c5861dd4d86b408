//! System parameters and the scalar formulas derived from them.

use core::f64::consts::PI;

use crate::constants::{C_LIGHT, HBAR, K_B, K_E};
use crate::steady_state::{self, SteadyState};
use crate::{Complex64, Error, Result};

/// Every physical input of the model.
///
/// Frequencies and rates are angular, in rad/s. `detuning` is the
/// effective detuning Δ (already including the radiation-pressure shift)
/// and is an input, not solved for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Mechanical frequency of the mirror oscillator B₁ (rad/s).
    pub omega_m1: f64,
    /// Mechanical frequency of the charged oscillator B₂ (rad/s).
    pub omega_m2: f64,
    /// Mechanical damping of B₁ (rad/s).
    pub gamma_m1: f64,
    /// Mechanical damping of B₂ (rad/s).
    pub gamma_m2: f64,
    /// Cavity amplitude decay rate κ (1/s).
    pub kappa: f64,
    /// Effective mass of B₁ (kg).
    pub mass: f64,
    /// Cavity length L (m).
    pub cavity_length: f64,
    /// Driving laser wavelength (m).
    pub laser_wavelength: f64,
    /// Driving laser power P (W).
    pub power: f64,
    /// Effective cavity detuning Δ (rad/s).
    pub detuning: f64,
    /// Coulomb coupling λ (rad/s); any sign.
    pub coulomb_lambda: f64,
    /// OPA nonlinear gain C_g (1/s).
    pub opa_gain: f64,
    /// Phase θ of the OPA pump (rad).
    pub opa_phase: f64,
    /// Bath temperature (K).
    pub temperature: f64,
}

impl SystemParams {
    /// Mechanical frequency of the experimental baseline, 2π × 100 MHz.
    pub const BASELINE_OMEGA_M: f64 = 200.0 * PI * 1e6;

    /// The experimental baseline: ω_m = 200π×10⁶ rad/s, γ_m = 200π rad/s,
    /// κ = 8.81×10⁷ 1/s, m = 5 ng, L = 1 mm, 810 nm at 50 mW, T = 4 mK,
    /// λ = 0.95ω_m, Δ = ω_m, OPA off.
    pub fn baseline() -> Self {
        let wm = Self::BASELINE_OMEGA_M;
        SystemParams {
            omega_m1: wm,
            omega_m2: wm,
            gamma_m1: 200.0 * PI,
            gamma_m2: 200.0 * PI,
            kappa: 8.81e7,
            mass: 5e-12,
            cavity_length: 1e-3,
            laser_wavelength: 810e-9,
            power: 50e-3,
            detuning: wm,
            coulomb_lambda: 0.95 * wm,
            opa_gain: 0.0,
            opa_phase: 0.0,
            temperature: 4e-3,
        }
    }

    /// Checks the invariants; every consumer of parameters calls this.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            (self.omega_m1, "omega_m1 must be > 0"),
            (self.omega_m2, "omega_m2 must be > 0"),
            (self.gamma_m1, "gamma_m1 must be > 0"),
            (self.gamma_m2, "gamma_m2 must be > 0"),
            (self.kappa, "kappa must be > 0"),
            (self.mass, "mass must be > 0"),
            (self.cavity_length, "cavity_length must be > 0"),
            (self.laser_wavelength, "laser_wavelength must be > 0"),
        ];
        for (v, msg) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(msg));
            }
        }
        let non_negative = [
            (self.power, "power must be >= 0"),
            (self.opa_gain, "opa_gain must be >= 0"),
            (self.temperature, "temperature must be >= 0"),
        ];
        for (v, msg) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(msg));
            }
        }
        for (v, msg) in [
            (self.detuning, "detuning must be finite"),
            (self.coulomb_lambda, "coulomb_lambda must be finite"),
            (self.opa_phase, "opa_phase must be finite"),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(msg));
            }
        }
        if self.coulomb_lambda * self.coulomb_lambda >= self.omega_m1 * self.omega_m2 {
            return Err(Error::InvalidParams(
                "coulomb_lambda^2 must be < omega_m1 * omega_m2",
            ));
        }
        Ok(())
    }

    /// Angular frequency of the driving laser, 2πc/λ₀.
    pub fn omega_laser(&self) -> f64 {
        2.0 * PI * C_LIGHT / self.laser_wavelength
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::baseline()
    }
}

/// Intermediates computed from [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Cavity resonance (rad/s); taken equal to `omega_l`.
    pub omega_c: f64,
    /// Laser frequency (rad/s).
    pub omega_l: f64,
    /// Drive amplitude E (1/s).
    pub drive_e: f64,
    /// Single-photon optomechanical coupling G₀ (rad/s).
    pub g0: f64,
    /// Mean thermal phonon number of B₁'s bath.
    pub nbar: f64,
    /// Mean thermal phonon number of B₂'s bath.
    pub nbar2: f64,
    /// Steady intracavity amplitude c_s.
    pub c_s: Complex64,
    /// Steady displacement of B₁.
    pub q1s: f64,
    /// Steady displacement of B₂.
    pub q2s: f64,
    /// Effective optomechanical coupling G_m = √2·G₀·|c_s| (rad/s).
    pub g_m: f64,
}

impl DerivedQuantities {
    /// The steady-state part as a [`SteadyState`].
    pub fn steady_state(&self) -> SteadyState {
        SteadyState {
            c_s: self.c_s,
            q1s: self.q1s,
            q2s: self.q2s,
            g_m: self.g_m,
        }
    }
}

/// Bose-Einstein occupation 1/(exp(ħω/k_BT) − 1); exactly 0 at T = 0.
pub fn thermal_occupation(omega_m: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_m / (K_B * temperature);
    1.0 / libm::expm1(x)
}

/// Drive amplitude E = √(2κP/ħω_L).
pub fn drive_amplitude(power: f64, kappa: f64, omega_l: f64) -> f64 {
    libm::sqrt(2.0 * kappa * power / (HBAR * omega_l))
}

/// Single-photon coupling G₀ = (ω_c/L)·√(ħ/(m·ω_m)).
pub fn single_photon_coupling(omega_c: f64, cavity_length: f64, mass: f64, omega_m: f64) -> f64 {
    (omega_c / cavity_length) * libm::sqrt(HBAR / (mass * omega_m))
}

/// Reduced Coulomb coupling λ = 2k_e·C₁U₁·C₂U₂/(ħ·d₀³) from electrode
/// capacitances (F), bias voltages (V) and the equilibrium separation (m).
pub fn coulomb_strength(c1: f64, u1: f64, c2: f64, u2: f64, d0: f64) -> f64 {
    2.0 * K_E * ((c1 * u1) * (c2 * u2)) / (HBAR * d0 * d0 * d0)
}

/// Computes all [`DerivedQuantities`] for a validated parameter set.
pub fn derive(params: &SystemParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let omega_l = params.omega_laser();
    let omega_c = omega_l;
    let drive_e = drive_amplitude(params.power, params.kappa, omega_l);
    let g0 = single_photon_coupling(omega_c, params.cavity_length, params.mass, params.omega_m1);
    let nbar = thermal_occupation(params.omega_m1, params.temperature);
    let nbar2 = thermal_occupation(params.omega_m2, params.temperature);
    let c_s = steady_state::cavity_amplitude(
        params.detuning,
        params.kappa,
        params.opa_gain,
        params.opa_phase,
        drive_e,
    )?;
    let (q1s, q2s) = steady_state::displacements(
        g0,
        c_s,
        params.omega_m1,
        params.omega_m2,
        params.coulomb_lambda,
    )?;
    Ok(DerivedQuantities {
        omega_c,
        omega_l,
        drive_e,
        g0,
        nbar,
        nbar2,
        c_s,
        q1s,
        q2s,
        g_m: steady_state::effective_coupling(g0, c_s),
    })
}
