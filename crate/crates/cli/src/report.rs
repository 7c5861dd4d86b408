//! JSON documents printed by `point` and `critical-temp`.

use omn_core::params::SystemParams;
use omn_core::pipeline::PointReport;
use omn_core::{Error, Result as CoreResult};
use serde_json::{json, Value};

use crate::config::ParamKey;

pub fn params_json(p: &SystemParams) -> Value {
    let m = ParamKey::ALL
        .into_iter()
        .filter(|k| !k.is_relative())
        .map(|k| (k.name().to_string(), Value::from(k.get(p))))
        .collect();
    Value::Object(m)
}

pub fn error_json(e: &Error) -> Value {
    json!({ "code": e.code(), "name": e.name(), "message": e.to_string() })
}

/// Everything the pipeline produced for one point.
pub fn point_json(p: &SystemParams, r: &PointReport) -> Value {
    let derived = r.derived.map(|d| {
        json!({
            "omega_c": d.omega_c,
            "omega_l": d.omega_l,
            "drive_e": d.drive_e,
            "g0": d.g0,
            "nbar": d.nbar,
            "nbar2": d.nbar2,
            "c_s_re": d.c_s.re,
            "c_s_im": d.c_s.im,
            "abs_c_s": d.c_s.norm(),
            "q1s": d.q1s,
            "q2s": d.q2s,
            "g_m": d.g_m,
        })
    });
    let stability = r.stability.as_ref().map(|s| {
        json!({
            "stable": s.stable,
            "max_real_part": s.max_real_part,
            "margin": s.margin,
            "eigenvalues": s.eigenvalues.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
        })
    });
    let entanglement = r.entanglement.map(|e| {
        json!({
            "sigma": e.sigma,
            "varrho": e.varrho,
            "log_negativity": e.log_negativity,
            "entangled": e.entangled,
        })
    });
    json!({
        "params": params_json(p),
        "derived": derived,
        "stability": stability,
        "entanglement": entanglement,
        "error": r.error.as_ref().map(error_json),
    })
}

pub fn critical_json(t_lo: f64, t_hi: f64, tol: f64, result: &CoreResult<f64>) -> Value {
    json!({
        "t_lo": t_lo,
        "t_hi": t_hi,
        "tol": tol,
        "critical_temperature": result.as_ref().ok(),
        "error": result.as_ref().err().map(error_json),
    })
}
