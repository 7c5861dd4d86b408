//! Logarithmic negativity of the two mechanical modes.

use crate::linear_dynamics::CovarianceMatrix;
use crate::smallmat::{self, Mat};
use crate::{Error, Result};

/// 2×2 block.
pub type Block2 = [[f64; 2]; 2];

/// Mechanical 4×4 covariance in block form [[Φ₁, Φ₃], [Φ₃ᵀ, Φ₂]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCovariance {
    /// Oscillator B₁ block.
    pub phi1: Block2,
    /// Oscillator B₂ block.
    pub phi2: Block2,
    /// Cross block.
    pub phi3: Block2,
}

impl ReducedCovariance {
    /// Assembled 4×4 matrix.
    pub fn to_mat(&self) -> Mat {
        Mat::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
            (true, true) => self.phi1[i][j],
            (false, false) => self.phi2[i - 2][j - 2],
            (true, false) => self.phi3[i][j - 2],
            (false, true) => self.phi3[j][i - 2],
        })
    }
}

/// Entanglement figures of merit for the two oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    /// Σ = det Φ₁ + det Φ₂ − 2 det Φ₃.
    pub sigma: f64,
    /// Smallest symplectic eigenvalue of the partial transpose, ϱ.
    pub varrho: f64,
    /// E_N = max(0, −ln 2ϱ).
    pub log_negativity: f64,
    /// ϱ < ½.
    pub entangled: bool,
}

fn det2(b: &Block2) -> f64 {
    b[0][0] * b[1][1] - b[0][1] * b[1][0]
}

/// Rows and columns 0..4 of `v`, split into Φ₁, Φ₂, Φ₃.
pub fn reduce_mechanical(v: &CovarianceMatrix) -> Result<ReducedCovariance> {
    let m = v.mat();
    if m.rows() < 4 {
        return Err(Error::Dimension("covariance must have at least 4 rows"));
    }
    let block = |r: usize, c: usize| [[m[(r, c)], m[(r, c + 1)]], [m[(r + 1, c)], m[(r + 1, c + 1)]]];
    Ok(ReducedCovariance {
        phi1: block(0, 0),
        phi2: block(2, 2),
        phi3: block(0, 2),
    })
}

/// ϱ = 2^{-1/2}·{Σ − [Σ² − 4 det Ṽ]^{1/2}}^{1/2} and E_N = max(0, −ln 2ϱ).
///
/// Radicands within ε = 10⁻¹²·max(1, Σ²) below zero are clamped to zero;
/// anything more negative, or ϱ = 0, is [`Error::NonPhysicalState`].
pub fn log_negativity(r: &ReducedCovariance) -> Result<EntanglementResult> {
    let sigma = det2(&r.phi1) + det2(&r.phi2) - 2.0 * det2(&r.phi3);
    let det_v = smallmat::det(&r.to_mat())?;
    if !sigma.is_finite() || !det_v.is_finite() {
        return Err(Error::NonPhysicalState);
    }
    let eps = 1e-12 * f64::max(1.0, sigma * sigma);
    let disc = sigma * sigma - 4.0 * det_v;
    if disc < -eps {
        return Err(Error::NonPhysicalState);
    }
    let inner = sigma - libm::sqrt(disc.max(0.0));
    if inner < -eps {
        return Err(Error::NonPhysicalState);
    }
    let varrho = libm::sqrt(inner.max(0.0)) / core::f64::consts::SQRT_2;
    if varrho == 0.0 {
        return Err(Error::NonPhysicalState);
    }
    let log_negativity = f64::max(0.0, -libm::log(2.0 * varrho));
    Ok(EntanglementResult {
        sigma,
        varrho,
        log_negativity,
        entangled: varrho < 0.5,
    })
}
