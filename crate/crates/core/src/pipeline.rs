//! One grid point, end to end: derive → drift/diffusion → stability →
//! steady covariance → reduction → logarithmic negativity.

use crate::entanglement::{self, EntanglementResult, ReducedCovariance};
use crate::linear_dynamics::{self, CovarianceMatrix, StabilityReport};
use crate::params::{self, DerivedQuantities, SystemParams};
use crate::{Error, Result};

/// Everything computed for one parameter set. Fields stay `None` past the
/// stage that failed; `error` names that failure.
#[derive(Debug, Clone, PartialEq)]
pub struct PointReport {
    /// Thermal occupation of B₁'s bath, when the parameters are valid.
    pub nbar: Option<f64>,
    /// Derived quantities including the steady state.
    pub derived: Option<DerivedQuantities>,
    /// Stability of the drift. Above the parametric threshold this is
    /// evaluated with G_m = 0.
    pub stability: Option<StabilityReport>,
    /// Steady covariance (stable points only).
    pub covariance: Option<CovarianceMatrix>,
    /// Mechanical block of the covariance.
    pub reduced: Option<ReducedCovariance>,
    /// Entanglement of the two oscillators.
    pub entanglement: Option<EntanglementResult>,
    /// First failure, if any.
    pub error: Option<Error>,
}

impl PointReport {
    fn empty() -> Self {
        PointReport {
            nbar: None,
            derived: None,
            stability: None,
            covariance: None,
            reduced: None,
            entanglement: None,
            error: None,
        }
    }

    /// 0 on success, otherwise [`Error::code`].
    pub fn error_code(&self) -> u8 {
        self.error.map_or(0, |e| e.code())
    }
}

/// Runs the full pipeline; physics failures land in [`PointReport::error`].
pub fn evaluate(p: &SystemParams) -> PointReport {
    let mut out = PointReport::empty();
    if let Err(e) = p.validate() {
        out.error = Some(e);
        return out;
    }
    let nbar1 = params::thermal_occupation(p.omega_m1, p.temperature);
    let nbar2 = params::thermal_occupation(p.omega_m2, p.temperature);
    out.nbar = Some(nbar1);
    let g_m = match params::derive(p) {
        Ok(d) => {
            out.derived = Some(d);
            d.g_m
        }
        Err(e) => {
            out.error = Some(e);
            if matches!(e, Error::ThresholdSingularity { .. }) {
                out.stability = linear_dynamics::stability(&linear_dynamics::build_drift(p, 0.0)).ok();
            }
            return out;
        }
    };
    let drift = linear_dynamics::build_drift(p, g_m);
    let report = match linear_dynamics::stability(&drift) {
        Ok(r) => r,
        Err(e) => {
            out.error = Some(e);
            return out;
        }
    };
    let stable = report.stable;
    let max_real_part = report.max_real_part;
    out.stability = Some(report);
    if !stable {
        out.error = Some(Error::UnstableSystem { max_real_part });
        return out;
    }
    let diffusion = linear_dynamics::build_diffusion(p, nbar1, nbar2);
    let result = linear_dynamics::steady_covariance(&drift, &diffusion).and_then(|v| {
        let r = entanglement::reduce_mechanical(&v)?;
        let e = entanglement::log_negativity(&r)?;
        Ok((v, r, e))
    });
    match result {
        Ok((v, r, e)) => {
            out.covariance = Some(v);
            out.reduced = Some(r);
            out.entanglement = Some(e);
        }
        Err(e) => out.error = Some(e),
    }
    out
}

/// E_N for one parameter set, or the failure that prevented it.
pub fn log_negativity_at(p: &SystemParams) -> Result<f64> {
    let report = evaluate(p);
    match (report.entanglement, report.error) {
        (Some(e), None) => Ok(e.log_negativity),
        (_, Some(err)) => Err(err),
        (None, None) => unreachable!("pipeline produced neither result nor error"),
    }
}
