//! Temperature at which the steady-state entanglement dies.

use alloc::vec::Vec;

use crate::params::SystemParams;
use crate::pipeline::log_negativity_at;
use crate::{Error, Result};

/// Points in the coarse temperature scan.
pub const COARSE_POINTS: usize = 32;

/// Locates the temperature in `[t_lo, t_hi]` where E_N falls to zero.
///
/// A 32-point linear scan brackets the last transition from E_N > 0 to
/// E_N = 0; bisection then shrinks the bracket to at most `tol` and the
/// midpoint is returned. The temperature in `params` is ignored.
pub fn critical_temperature(params: &SystemParams, t_lo: f64, t_hi: f64, tol: f64) -> Result<f64> {
    if !(t_lo > 0.0 && t_hi > t_lo && tol > 0.0) || !t_hi.is_finite() {
        return Err(Error::InvalidParams("need 0 < t_lo < t_hi and tol > 0"));
    }
    let en = |t: f64| log_negativity_at(&SystemParams { temperature: t, ..*params });
    if en(t_lo)? <= 0.0 {
        return Err(Error::NoEntanglementAtFloor);
    }
    if en(t_hi)? > 0.0 {
        return Err(Error::NoDeathBelowCeiling);
    }
    let step = (t_hi - t_lo) / (COARSE_POINTS - 1) as f64;
    let temps: Vec<f64> = (0..COARSE_POINTS)
        .map(|i| if i + 1 == COARSE_POINTS { t_hi } else { t_lo + step * i as f64 })
        .collect();
    let mut values = Vec::with_capacity(COARSE_POINTS);
    for &t in &temps {
        values.push(en(t)?);
    }
    let i = (0..COARSE_POINTS - 1)
        .rev()
        .find(|&i| values[i] > 0.0 && values[i + 1] <= 0.0)
        .ok_or(Error::NoDeathBelowCeiling)?;
    let (mut lo, mut hi) = (temps[i], temps[i + 1]);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if en(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
