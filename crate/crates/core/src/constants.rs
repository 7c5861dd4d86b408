//! CODATA 2018 physical constants (SI).

/// Reduced Planck constant ħ (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant k_B (J/K).
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum (m/s).
pub const C_LIGHT: f64 = 299_792_458.0;

/// Coulomb constant k_e = 1/(4πε₀) (N·m²/C²).
pub const K_E: f64 = 8.987_551_792_3e9;

/// The constants as a value, for callers that want to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħ (J·s)
    pub hbar: f64,
    /// k_B (J/K)
    pub k_b: f64,
    /// c (m/s)
    pub c_light: f64,
    /// k_e (N·m²/C²)
    pub k_e: f64,
}

/// The compiled-in CODATA values.
pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    k_b: K_B,
    c_light: C_LIGHT,
    k_e: K_E,
};
