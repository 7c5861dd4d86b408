//! Classical steady-state mean values of the driven cavity and the two
//! oscillators. The momenta vanish in steady state and are not stored.

use crate::{Complex64, Error, Result};

/// Relative guard (against κ²) on κ² + Δ² − 4C_g².
pub const THRESHOLD_EPS: f64 = 1e-9;

/// Steady mean values around which the dynamics is linearized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    /// Intracavity amplitude.
    pub c_s: Complex64,
    /// Displacement of B₁.
    pub q1s: f64,
    /// Displacement of B₂.
    pub q2s: f64,
    /// Effective coupling √2·G₀·|c_s| (rad/s).
    pub g_m: f64,
}

/// c_s = (κ − iΔ + 2C_g e^{iθ})·E / (κ² + Δ² − 4C_g²).
///
/// Fails with [`Error::ThresholdSingularity`] when the denominator is at or
/// below `THRESHOLD_EPS·κ²`, i.e. at or above the parametric threshold.
pub fn cavity_amplitude(
    detuning: f64,
    kappa: f64,
    opa_gain: f64,
    opa_phase: f64,
    drive_e: f64,
) -> Result<Complex64> {
    let denominator = kappa * kappa + detuning * detuning - 4.0 * opa_gain * opa_gain;
    if !(denominator > THRESHOLD_EPS * kappa * kappa) {
        return Err(Error::ThresholdSingularity { denominator });
    }
    let pump = Complex64::from_polar(2.0 * opa_gain, opa_phase);
    let numerator = Complex64::new(kappa, -detuning) + pump;
    Ok(numerator * (drive_e / denominator))
}

/// q1s = G₀|c_s|²/(ω_m1 − λ²/ω_m2), q2s = −(λ/ω_m2)·q1s.
pub fn displacements(
    g0: f64,
    c_s: Complex64,
    omega_m1: f64,
    omega_m2: f64,
    lambda: f64,
) -> Result<(f64, f64)> {
    if !(omega_m1 * omega_m2 - lambda * lambda > 0.0) {
        return Err(Error::DegenerateNormalMode);
    }
    let q1s = g0 * c_s.norm_sqr() / (omega_m1 - lambda * lambda / omega_m2);
    let q2s = -(lambda / omega_m2) * q1s;
    Ok((q1s, q2s))
}

/// G_m = √2·G₀·|c_s|. The modulus is used, so the result does not depend
/// on the phase reference of the cavity field.
pub fn effective_coupling(g0: f64, c_s: Complex64) -> f64 {
    core::f64::consts::SQRT_2 * g0 * c_s.norm()
}
