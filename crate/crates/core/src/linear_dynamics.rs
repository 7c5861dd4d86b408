//! Linearized fluctuation dynamics: drift and diffusion matrices, the
//! eigenvalue stability test, the steady-state covariance from the
//! Lyapunov equation M·V + V·Mᵀ + D = 0, and a fixed-step RK4 integrator
//! of V̇ = M·V + V·Mᵀ + D used to cross-check it.
//!
//! Quadrature order is (δq₁, δp₁, δq₂, δp₂, δX, δY).

use alloc::vec::Vec;

use crate::params::SystemParams;
use crate::smallmat::{self, Mat};
use crate::{Complex64, Error, Result};

/// Stability margin of drifts built by [`build_drift`], relative to ω_m1.
pub const STABILITY_MARGIN_REL: f64 = 1e-9;

/// Largest system order handled by the Lyapunov solver and integrator.
pub const MAX_ORDER: usize = 6;

/// Drift matrix M of the linearized Langevin equations.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix {
    m: Mat,
    margin: f64,
}

impl DriftMatrix {
    /// Wraps an arbitrary square matrix of order ≤ 6 with zero stability
    /// margin (stable ⟺ every real part < 0).
    pub fn from_mat(m: Mat) -> Result<Self> {
        if !m.is_square() || m.rows() > MAX_ORDER {
            return Err(Error::Dimension("drift must be square with order <= 6"));
        }
        Ok(DriftMatrix { m, margin: 0.0 })
    }

    /// Replaces the stability margin ε: stable ⟺ every real part < −ε.
    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin.abs();
        self
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &Mat {
        &self.m
    }

    /// Stability margin ε.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// System order.
    pub fn order(&self) -> usize {
        self.m.rows()
    }
}

/// Diffusion matrix D of the noise sources.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix(Mat);

impl DiffusionMatrix {
    /// Wraps an arbitrary square matrix.
    pub fn from_mat(d: Mat) -> Result<Self> {
        if !d.is_square() || d.rows() > MAX_ORDER {
            return Err(Error::Dimension("diffusion must be square with order <= 6"));
        }
        Ok(DiffusionMatrix(d))
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &Mat {
        &self.0
    }
}

/// Symmetric matrix of symmetrized second moments of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(Mat);

impl CovarianceMatrix {
    /// Wraps a square matrix, symmetrizing it.
    pub fn from_mat(v: Mat) -> Result<Self> {
        if !v.is_square() || v.rows() > MAX_ORDER {
            return Err(Error::Dimension("covariance must be square with order <= 6"));
        }
        Ok(CovarianceMatrix(v.symmetrized()?))
    }

    /// Thermal/vacuum product state diag[n̄₁+½, n̄₁+½, n̄₂+½, n̄₂+½, ½, ½].
    pub fn thermal_vacuum(nbar1: f64, nbar2: f64) -> Self {
        let (a, b) = (nbar1 + 0.5, nbar2 + 0.5);
        CovarianceMatrix(Mat::diag(&[a, a, b, b, 0.5, 0.5]))
    }

    /// The underlying matrix.
    pub fn mat(&self) -> &Mat {
        &self.0
    }

    /// Cholesky test for positive definiteness.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.0.rows();
        let mut l = Mat::zeros(n, n);
        for j in 0..n {
            let mut d = self.0[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) {
                return false;
            }
            let djj = libm::sqrt(d);
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = self.0[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        true
    }
}

/// Outcome of the eigenvalue stability test.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Every eigenvalue has real part below −`margin`.
    pub stable: bool,
    /// Largest real part (1/s).
    pub max_real_part: f64,
    /// Margin ε used for the decision.
    pub margin: f64,
    /// All eigenvalues of M.
    pub eigenvalues: Vec<Complex64>,
}

/// Drift matrix for the given parameters and effective coupling G_m.
///
/// The stability margin is `STABILITY_MARGIN_REL·ω_m1`.
pub fn build_drift(params: &SystemParams, g_m: f64) -> DriftMatrix {
    let p = params;
    let (c2, s2) = (2.0 * p.opa_gain * libm::cos(p.opa_phase), 2.0 * p.opa_gain * libm::sin(p.opa_phase));
    let mut m = Mat::zeros(6, 6);
    m[(0, 1)] = p.omega_m1;
    m[(1, 0)] = -p.omega_m1;
    m[(1, 1)] = -p.gamma_m1;
    m[(1, 2)] = -p.coulomb_lambda;
    m[(1, 4)] = g_m;
    m[(2, 3)] = p.omega_m2;
    m[(3, 0)] = -p.coulomb_lambda;
    m[(3, 2)] = -p.omega_m2;
    m[(3, 3)] = -p.gamma_m2;
    m[(4, 4)] = c2 - p.kappa;
    m[(4, 5)] = s2 + p.detuning;
    m[(5, 0)] = g_m;
    m[(5, 4)] = s2 - p.detuning;
    m[(5, 5)] = -(c2 + p.kappa);
    DriftMatrix { m, margin: STABILITY_MARGIN_REL * p.omega_m1.abs() }
}

/// D = diag[0, γ_m1(2n̄₁+1), 0, γ_m2(2n̄₂+1), κ, κ].
pub fn build_diffusion(params: &SystemParams, nbar1: f64, nbar2: f64) -> DiffusionMatrix {
    DiffusionMatrix(Mat::diag(&[
        0.0,
        params.gamma_m1 * (2.0 * nbar1 + 1.0),
        0.0,
        params.gamma_m2 * (2.0 * nbar2 + 1.0),
        params.kappa,
        params.kappa,
    ]))
}

/// Eigenvalues of M and the stability verdict.
pub fn stability(m: &DriftMatrix) -> Result<StabilityReport> {
    let eigenvalues = smallmat::eigenvalues(&m.m)?;
    let max_real_part = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        stable: max_real_part < -m.margin,
        max_real_part,
        margin: m.margin,
        eigenvalues,
    })
}

/// ‖M·V + V·Mᵀ + D‖_F.
pub fn lyapunov_residual(m: &DriftMatrix, d: &DiffusionMatrix, v: &CovarianceMatrix) -> Result<f64> {
    let mv = m.m.matmul(&v.0)?;
    let r = mv.add(&mv.transpose())?.add(&d.0)?;
    Ok(smallmat::frob_norm(&r))
}

/// Steady-state covariance: solves M·V + V·Mᵀ = −D through the vectorized
/// system (M⊗I + I⊗M)·vec(V) = −vec(D), then symmetrizes.
///
/// Refuses with [`Error::UnstableSystem`] unless [`stability`] says stable.
pub fn steady_covariance(m: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let n = m.order();
    if d.0.rows() != n {
        return Err(Error::Dimension("drift and diffusion orders differ"));
    }
    let report = stability(m)?;
    if !report.stable {
        return Err(Error::UnstableSystem { max_real_part: report.max_real_part });
    }
    let eye = Mat::identity(n);
    let a = smallmat::kron(&m.m, &eye)?.add(&smallmat::kron(&eye, &m.m)?)?;
    let rhs: Vec<f64> = d.0.as_slice().iter().map(|x| -x).collect();
    let x = smallmat::solve(&a, &rhs)?;
    let v = Mat::new(n, n, x).map_err(|_| Error::SingularSolve)?;
    Ok(CovarianceMatrix(v.symmetrized()?))
}

/// Spectral norm ‖M‖₂ = √λ_max(MᵀM).
pub fn spectral_norm(m: &Mat) -> Result<f64> {
    let g = m.transpose().matmul(m)?;
    let ev = smallmat::eigenvalues(&g)?;
    Ok(libm::sqrt(ev.iter().map(|z| z.re).fold(0.0, f64::max)))
}

/// Largest step accepted by [`evolve_covariance`]: 0.1/‖M‖₂.
pub fn max_step(m: &DriftMatrix) -> Result<f64> {
    let norm = spectral_norm(&m.m)?;
    Ok(if norm > 0.0 { 0.1 / norm } else { f64::INFINITY })
}

/// Entries of a packed symmetric 6×6 matrix.
const PACKED: usize = MAX_ORDER * (MAX_ORDER + 1) / 2;

type Packed = [f64; PACKED];
type PackedOp = [[f64; PACKED]; PACKED];

fn packed_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * MAX_ORDER - i * (i + 1) / 2 + j
}

/// The Lyapunov operator V ↦ M·V + V·Mᵀ on packed symmetric matrices.
fn lyapunov_operator(m: &Mat) -> PackedOp {
    let n = m.rows();
    let mut op = [[0.0; PACKED]; PACKED];
    for i in 0..n {
        for j in i..n {
            let row = &mut op[packed_index(i, j)];
            for k in 0..n {
                row[packed_index(k, j)] += m[(i, k)];
                row[packed_index(i, k)] += m[(j, k)];
            }
        }
    }
    op
}

fn op_mul(a: &PackedOp, b: &PackedOp) -> PackedOp {
    let mut out = [[0.0; PACKED]; PACKED];
    for (oi, ai) in out.iter_mut().zip(a) {
        for (k, &aik) in ai.iter().enumerate() {
            if aik != 0.0 {
                for (o, bkj) in oi.iter_mut().zip(&b[k]) {
                    *o += aik * bkj;
                }
            }
        }
    }
    out
}

/// I + s·A
fn op_identity_plus(a: &PackedOp, s: f64) -> PackedOp {
    let mut out = [[0.0; PACKED]; PACKED];
    for (i, (oi, ai)) in out.iter_mut().zip(a).enumerate() {
        for (o, x) in oi.iter_mut().zip(ai) {
            *o = s * x;
        }
        oi[i] += 1.0;
    }
    out
}

fn op_apply(a: &PackedOp, x: &Packed) -> Packed {
    let mut out = [0.0; PACKED];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(x).map(|(r, v)| r * v).sum();
    }
    out
}

/// Integrates V̇ = M·V + V·Mᵀ + D from `v0` over `[0, t_end]` with
/// classical RK4 and equal steps no longer than `dt`.
///
/// V is kept in packed symmetric form, so it is symmetric after every
/// step. The right-hand side is linear with constant coefficients, so
/// one RK4 step is the affine map v ↦ R·v + c with R = I + hL·φ(hL),
/// c = h·φ(hL)·d and φ(z) = 1 + z/2 + z²/6 + z³/24; R and c are formed
/// once and then applied `ceil(t_end/dt)` times.
pub fn evolve_covariance(
    m: &DriftMatrix,
    d: &DiffusionMatrix,
    v0: &CovarianceMatrix,
    t_end: f64,
    dt: f64,
) -> Result<CovarianceMatrix> {
    let n = m.order();
    if d.0.rows() != n || v0.0.rows() != n {
        return Err(Error::Dimension("drift, diffusion and covariance orders differ"));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Dimension("t_end must be finite and >= 0"));
    }
    let bound = max_step(m)?;
    if !(dt > 0.0) || dt > bound {
        return Err(Error::StepTooLarge { dt, bound });
    }
    if t_end == 0.0 {
        return Ok(v0.clone());
    }
    let steps = libm::ceil(t_end / dt) as u64;
    let h = t_end / steps as f64;

    let l = lyapunov_operator(&m.m);
    // Horner: φ(hL) = I + hL/2·(I + hL/3·(I + hL/4))
    let phi = op_identity_plus(&op_mul(&l, &op_identity_plus(&op_mul(&l, &op_identity_plus(&l, h / 4.0)), h / 3.0)), h / 2.0);
    let step_op = op_identity_plus(&op_mul(&l, &phi), h);
    let mut forcing = [0.0; PACKED];
    let mut v = [0.0; PACKED];
    for i in 0..n {
        for j in i..n {
            forcing[packed_index(i, j)] = 0.5 * (d.0[(i, j)] + d.0[(j, i)]);
            v[packed_index(i, j)] = 0.5 * (v0.0[(i, j)] + v0.0[(j, i)]);
        }
    }
    let mut forcing = op_apply(&phi, &forcing);
    for f in forcing.iter_mut() {
        *f *= h;
    }

    // column form: v ← c + Σ_k v_k·R[:, k]
    let mut columns = [[0.0; PACKED]; PACKED];
    for (i, row) in step_op.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            columns[k][i] = x;
        }
    }
    for _ in 0..steps {
        let mut next = forcing;
        for (col, &vk) in columns.iter().zip(&v) {
            for (x, c) in next.iter_mut().zip(col) {
                *x += vk * c;
            }
        }
        v = next;
    }
    let out = Mat::from_fn(n, n, |i, j| v[packed_index(i, j)]);
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(CovarianceMatrix(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive, thermal_occupation};
    use core::f64::consts::PI;
    use proptest::prelude::*;

    fn drift(m: Mat) -> DriftMatrix {
        DriftMatrix::from_mat(m).unwrap()
    }

    fn diffusion(d: Mat) -> DiffusionMatrix {
        DiffusionMatrix::from_mat(d).unwrap()
    }

    fn baseline_at(lambda: f64, detuning: f64, gain: f64, phase: f64) -> SystemParams {
        let base = SystemParams::baseline();
        SystemParams {
            coulomb_lambda: lambda * base.omega_m1,
            detuning: detuning * base.omega_m1,
            opa_gain: gain,
            opa_phase: phase,
            ..base
        }
    }

    /// Positions of the potentially nonzero entries of the drift matrix.
    const PATTERN: [(usize, usize); 14] = [
        (0, 1),
        (1, 0),
        (1, 1),
        (1, 2),
        (1, 4),
        (2, 3),
        (3, 0),
        (3, 2),
        (3, 3),
        (4, 4),
        (4, 5),
        (5, 0),
        (5, 4),
        (5, 5),
    ];

    #[test]
    fn decoupled_drift_is_block_diagonal() {
        let p = SystemParams { coulomb_lambda: 0.0, ..baseline_at(0.0, 0.7, 0.0, 0.0) };
        let m = build_drift(&p, 0.0);
        for i in 0..6 {
            for j in 0..6 {
                if i / 2 != j / 2 {
                    assert_eq!(m.mat()[(i, j)], 0.0, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn cavity_block_at_zero_phase() {
        let p = baseline_at(0.5, 0.3, 3e7, 0.0);
        let m = build_drift(&p, 1e6);
        let (g, k, d) = (p.opa_gain, p.kappa, p.detuning);
        assert_eq!(m.mat()[(4, 4)], 2.0 * g - k);
        assert_eq!(m.mat()[(4, 5)], d);
        assert_eq!(m.mat()[(5, 4)], -d);
        assert_eq!(m.mat()[(5, 5)], -(2.0 * g + k));
    }

    #[test]
    fn baseline_drift_entries() {
        let p = baseline_at(0.95, 0.75, 2e7, PI / 16.0);
        let g_m = derive(&p).unwrap().g_m;
        let m = build_drift(&p, g_m);
        let wm = p.omega_m1;
        // hand-evaluated: 2C_g cos(π/16) = 3.9231411e7, 2C_g sin(π/16) = 7.8036128e6
        let c2 = 4e7 * 0.980_785_280_403_230_4;
        let s2 = 4e7 * 0.195_090_322_016_128_26;
        let expect = [
            ((0, 1), wm),
            ((1, 0), -wm),
            ((1, 1), -200.0 * PI),
            ((1, 2), -0.95 * wm),
            ((1, 4), g_m),
            ((3, 0), -0.95 * wm),
            ((4, 4), c2 - 8.81e7),
            ((4, 5), s2 + 0.75 * wm),
            ((5, 0), g_m),
            ((5, 4), s2 - 0.75 * wm),
            ((5, 5), -(c2 + 8.81e7)),
        ];
        for ((i, j), v) in expect {
            let got = m.mat()[(i, j)];
            assert!((got - v).abs() <= 1e-12 * v.abs(), "({i},{j}): {got} vs {v}");
        }
        for i in 0..6 {
            for j in 0..6 {
                if !PATTERN.contains(&(i, j)) {
                    assert_eq!(m.mat()[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn diffusion_cases() {
        let p = SystemParams::baseline();
        let d = build_diffusion(&p, 0.0, 0.0);
        assert_eq!(d.mat(), &Mat::diag(&[0.0, p.gamma_m1, 0.0, p.gamma_m2, p.kappa, p.kappa]));
        let d = build_diffusion(&p, 0.431, 0.431);
        assert!((d.mat()[(1, 1)] - 200.0 * PI * 1.862).abs() < 1e-9);
        assert!((d.mat()[(3, 3)] - 1.17e3).abs() < 5.0);
        let p0 = SystemParams { gamma_m1: 0.0, gamma_m2: 0.0, ..p };
        let d = build_diffusion(&p0, 3.0, 3.0);
        assert_eq!(d.mat(), &Mat::diag(&[0.0, 0.0, 0.0, 0.0, p.kappa, p.kappa]));
    }

    #[test]
    fn negative_identity_is_stable() {
        let r = stability(&drift(Mat::identity(6).scale(-1.0))).unwrap();
        assert!(r.stable);
        assert_eq!(r.max_real_part, -1.0);
        assert_eq!(r.eigenvalues.len(), 6);
    }

    #[test]
    fn above_threshold_is_unstable() {
        // g_m = 0, θ = 0, Δ = 0, 2C_g = 1.5κ
        let base = SystemParams::baseline();
        let p = SystemParams { detuning: 0.0, opa_gain: 0.75 * base.kappa, ..base };
        let m = build_drift(&p, 0.0);
        let r = stability(&m).unwrap();
        assert!(!r.stable);
        assert!((r.max_real_part - 0.5 * base.kappa).abs() < 1e-6 * base.kappa);
        let d = build_diffusion(&p, 0.0, 0.0);
        assert!(matches!(steady_covariance(&m, &d), Err(Error::UnstableSystem { .. })));
    }

    #[test]
    fn scalar_lyapunov() {
        let v = steady_covariance(&drift(Mat::identity(6).scale(-1.0)), &diffusion(Mat::identity(6))).unwrap();
        assert_eq!(v.mat(), &Mat::identity(6).scale(0.5));
    }

    #[test]
    fn decoupled_modes() {
        let ms = [-1.0, -2.5, -0.3, -7.0];
        let ds = [2.0, 0.5, 1.0, 3.0];
        let v = steady_covariance(&drift(Mat::diag(&ms)), &diffusion(Mat::diag(&ds))).unwrap();
        for i in 0..4 {
            assert!((v.mat()[(i, i)] + ds[i] / (2.0 * ms[i])).abs() < 1e-15);
        }
    }

    #[test]
    fn baseline_fig2_point_residual_and_definiteness() {
        let p = baseline_at(0.95, 0.9, 0.0, 0.0);
        let dq = derive(&p).unwrap();
        let m = build_drift(&p, dq.g_m);
        let d = build_diffusion(&p, dq.nbar, dq.nbar2);
        let v = steady_covariance(&m, &d).unwrap();
        let res = lyapunov_residual(&m, &d, &v).unwrap();
        assert!(res <= 1e-9 * smallmat::frob_norm(d.mat()), "{res}");
        assert!(v.is_positive_definite());
    }

    #[test]
    fn decoupled_block_is_thermal() {
        let p = SystemParams { coulomb_lambda: 0.0, ..baseline_at(0.0, 0.8, 0.0, 0.0) };
        let n = thermal_occupation(p.omega_m1, p.temperature);
        let v = steady_covariance(&build_drift(&p, 0.0), &build_diffusion(&p, n, n)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = match (i == j, i < 4) {
                    (true, true) => n + 0.5,
                    (true, false) => 0.5,
                    _ => 0.0,
                };
                assert!((v.mat()[(i, j)] - expected).abs() <= 1e-9 * (n + 0.5), "({i},{j})");
            }
        }
    }

    #[test]
    fn scalar_transient() {
        let m = drift(Mat::identity(6).scale(-1.0));
        let d = diffusion(Mat::identity(6));
        let v0 = CovarianceMatrix::from_mat(Mat::zeros(6, 6)).unwrap();
        let t = 1.3;
        let v = evolve_covariance(&m, &d, &v0, t, 0.01).unwrap();
        let expected = 0.5 * (1.0 - (-2.0 * t).exp());
        for i in 0..6 {
            assert!((v.mat()[(i, i)] - expected).abs() < 1e-9);
        }
        assert_eq!(evolve_covariance(&m, &d, &v0, 0.0, 0.01).unwrap(), v0);
    }

    #[test]
    fn transient_step_bound() {
        let m = drift(Mat::identity(2).scale(-4.0));
        let d = diffusion(Mat::identity(2));
        let v0 = CovarianceMatrix::from_mat(Mat::zeros(2, 2)).unwrap();
        assert!((max_step(&m).unwrap() - 0.025).abs() < 1e-15);
        assert!(matches!(
            evolve_covariance(&m, &d, &v0, 1.0, 0.03),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(matches!(
            evolve_covariance(&m, &d, &v0, 1.0, 0.0),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn transient_reaches_steady_state_on_small_system() {
        // damped oscillator + detuned cavity, moderate stiffness
        let m = drift(
            Mat::from_rows(&[
                [0.0, 3.0, 0.0, 0.0],
                [-3.0, -0.4, 0.5, 0.0],
                [0.0, 0.0, -1.0, 2.0],
                [0.5, 0.0, -2.0, -1.0],
            ])
            .unwrap(),
        );
        let d = diffusion(Mat::diag(&[0.0, 0.8, 1.0, 1.0]));
        let r = stability(&m).unwrap();
        assert!(r.stable);
        let v_inf = steady_covariance(&m, &d).unwrap();
        let v0 = CovarianceMatrix::from_mat(Mat::identity(4).scale(0.5)).unwrap();
        let t_end = 10.0 / r.max_real_part.abs();
        let v = evolve_covariance(&m, &d, &v0, t_end, max_step(&m).unwrap()).unwrap();
        let err = smallmat::frob_norm(&v.mat().sub(v_inf.mat()).unwrap());
        assert!(err <= 1e-6 * smallmat::frob_norm(v_inf.mat()), "{err}");
    }

    proptest! {
        #[test]
        fn drift_pattern_and_periodicity(
            lam in -0.99f64..0.99, det in 0.0f64..2.0, gain in 0.0f64..1.2e8,
            phase in -PI..PI, g_m in 0.0f64..1e7
        ) {
            let p = baseline_at(lam, det, gain, phase);
            let m = build_drift(&p, g_m);
            let shifted = build_drift(&SystemParams { opa_phase: phase + 2.0 * PI, ..p }, g_m);
            for i in 0..6 {
                for j in 0..6 {
                    if !PATTERN.contains(&(i, j)) {
                        prop_assert_eq!(m.mat()[(i, j)], 0.0);
                    }
                    // θ + 2π is itself rounded, so agreement is to a few ulps of
                    // 2C_g plus the rounding of the sum with κ or Δ
                    let (a, b) = (m.mat()[(i, j)], shifted.mat()[(i, j)]);
                    prop_assert!((a - b).abs() <= 1e-14 * (1.0 + 2.0 * p.opa_gain + a.abs().max(b.abs())));
                }
            }
            prop_assert_eq!(m.mat()[(1, 2)], m.mat()[(3, 0)]);
            prop_assert_eq!(m.mat()[(1, 4)], m.mat()[(5, 0)]);
        }

        #[test]
        fn opa_off_is_phase_independent(det in 0.0f64..2.0, phase in -PI..PI) {
            let p = baseline_at(0.95, det, 0.0, 0.0);
            let q = SystemParams { opa_phase: phase, ..p };
            let (dp, dq) = (derive(&p).unwrap(), derive(&q).unwrap());
            prop_assert_eq!(dp.g_m, dq.g_m);
            prop_assert_eq!(build_drift(&p, dp.g_m), build_drift(&q, dq.g_m));
        }

        #[test]
        fn lyapunov_residual_and_linearity(
            lam in -0.95f64..0.95, det in 0.05f64..2.0, alpha in 0.1f64..10.0
        ) {
            let p = baseline_at(lam, det, 0.0, 0.0);
            let dq = derive(&p).unwrap();
            let m = build_drift(&p, dq.g_m);
            prop_assume!(stability(&m).unwrap().stable);
            let d = build_diffusion(&p, dq.nbar, dq.nbar2);
            let v = steady_covariance(&m, &d).unwrap();
            let dn = smallmat::frob_norm(d.mat());
            prop_assert!(lyapunov_residual(&m, &d, &v).unwrap() <= 1e-9 * dn);
            let d2 = DiffusionMatrix::from_mat(d.mat().scale(alpha)).unwrap();
            let v2 = steady_covariance(&m, &d2).unwrap();
            let diff = smallmat::frob_norm(&v2.mat().sub(&v.mat().scale(alpha)).unwrap());
            prop_assert!(diff <= 1e-9 * smallmat::frob_norm(v2.mat()));
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert_eq!(v.mat()[(i, j)], v.mat()[(j, i)]);
                }
            }
        }
    }
}
