//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use omn::config::{Axis, ParamKey};
use omn::figures::{self, Figure};
use omn::sweep::{run_sweep, SweepRow, SweepSpec};
use omn_core::critical::critical_temperature;
use omn_core::entanglement::{log_negativity, reduce_mechanical, ReducedCovariance};
use omn_core::linear_dynamics::{
    build_diffusion, build_drift, evolve_covariance, lyapunov_residual, max_step, stability, steady_covariance,
    CovarianceMatrix,
};
use omn_core::params::{derive, SystemParams};
use omn_core::smallmat::frob_norm;
use omn_core::Error;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;
/// (outer axis value, [(inner axis value, E_N)])
type Curve = (f64, Vec<(f64, f64)>);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn figure_rows(figure: Figure) -> (SweepSpec, Vec<SweepRow>) {
    let spec = figure.spec("unused.csv".into(), 1);
    let rows = run_sweep(&spec).expect("figure sweep");
    (spec, rows)
}

/// Rows grouped by the outer axis value, each as (inner value, E_N).
fn curves(rows: &[SweepRow]) -> Vec<Curve> {
    let mut out: Vec<Curve> = Vec::new();
    for r in rows {
        let pt = (r.coords[1], r.log_negativity.unwrap_or(f64::NAN));
        match out.last_mut() {
            Some((k, c)) if *k == r.coords[0] => c.push(pt),
            _ => out.push((r.coords[0], vec![pt])),
        }
    }
    out
}

struct CurveStats {
    max: f64,
    argmax: f64,
    width: f64,
}

fn stats(curve: &[(f64, f64)]) -> CurveStats {
    let (argmax, max) = curve.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let positive: Vec<f64> = curve.iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
    let width = match (positive.first(), positive.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    CurveStats { max, argmax, width }
}

fn tmsv(r: f64) -> ReducedCovariance {
    let (c, s) = (0.5 * (2.0 * r).cosh(), 0.5 * (2.0 * r).sinh());
    ReducedCovariance { phi1: [[c, 0.0], [0.0, c]], phi2: [[c, 0.0], [0.0, c]], phi3: [[s, 0.0], [0.0, -s]] }
}

fn diagonal(a: f64, b: f64) -> ReducedCovariance {
    ReducedCovariance { phi1: [[a, 0.0], [0.0, a]], phi2: [[b, 0.0], [0.0, b]], phi3: [[0.0; 2]; 2] }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for r in [0.1, 0.5, 1.0] {
        let e = log_negativity(&tmsv(r)).map_err(|e| e.to_string())?;
        worst = worst.max((e.log_negativity - 2.0 * r).abs());
    }
    let vacuum = log_negativity(&diagonal(0.5, 0.5)).map_err(|e| e.to_string())?.log_negativity;
    let thermal = log_negativity(&diagonal(2.5, 1.3)).map_err(|e| e.to_string())?.log_negativity;
    let elapsed = start.elapsed();
    check(
        worst <= 1e-9 && vacuum == 0.0 && thermal == 0.0 && elapsed < Duration::from_millis(1),
        format!("max |E_N - 2r| = {worst:.2e}, vacuum {vacuum}, thermal {thermal}, {elapsed:?}"),
    )
}

fn criterion_2() -> Outcome {
    let spec = Figure::Fig2.spec("unused.csv".into(), 1);
    let start = Instant::now();
    let rows = run_sweep(&spec).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (coords, row) in spec.grid().iter().zip(&rows) {
        let p = spec.point_params(coords);
        let result = (|| {
            let dq = derive(&p)?;
            let m = build_drift(&p, dq.g_m);
            let d = build_diffusion(&p, dq.nbar, dq.nbar2);
            let v = steady_covariance(&m, &d)?;
            let rel = lyapunov_residual(&m, &d, &v)? / frob_norm(d.mat());
            let symmetric = v.mat().sub(&v.mat().transpose())?.max_abs() == 0.0;
            Ok::<_, Error>((rel, symmetric && v.is_positive_definite()))
        })();
        match result {
            Ok((rel, spd)) => {
                worst = worst.max(rel);
                if rel > 1e-9 || !spd || row.error_code != 0 {
                    failures.push(format!("{coords:?}"));
                }
            }
            Err(e) => failures.push(format!("{coords:?}: {e}")),
        }
    }
    check(
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "{} points, worst relative residual {worst:.2e}, {} failing, dataset in {elapsed:.2?}",
            rows.len(),
            failures.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let spec = Figure::Fig2.spec("unused.csv".into(), 1);
    let rows = run_sweep(&spec).map_err(|e| e.to_string())?;
    let stable: Vec<Vec<f64>> =
        rows.iter().filter(|r| r.error_code == 0 && r.stable == Some(true)).map(|r| r.coords.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let picks: Vec<&Vec<f64>> = stable.choose_multiple(&mut rng, 5).collect();
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for coords in picks {
        let p = spec.point_params(coords);
        let dq = derive(&p).map_err(|e| e.to_string())?;
        let m = build_drift(&p, dq.g_m);
        let d = build_diffusion(&p, dq.nbar, dq.nbar2);
        let report = stability(&m).map_err(|e| e.to_string())?;
        let v_inf = steady_covariance(&m, &d).map_err(|e| e.to_string())?;
        let v0 = CovarianceMatrix::thermal_vacuum(dq.nbar, dq.nbar2);
        let t_end = 10.0 / report.max_real_part.abs();
        let v = evolve_covariance(&m, &d, &v0, t_end, max_step(&m).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let rel = frob_norm(&v.mat().sub(v_inf.mat()).unwrap()) / frob_norm(v_inf.mat());
        worst = worst.max(rel);
        notes.push(format!("(λ/ω_m {}, Δ/ω_m {}) {rel:.1e}", coords[0], coords[1]));
    }
    check(notes.len() == 5 && worst <= 1e-6, format!("worst relative error {worst:.2e}; {}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let spec = SweepSpec {
        base: SystemParams { coulomb_lambda: 0.0, ..SystemParams::baseline() },
        base_relative: Vec::new(),
        axes: vec![Axis {
            key: ParamKey::DetuningInOmegaM,
            values: omn::config::linspace(0.0, figures::DETUNING_MAX, figures::DETUNING_POINTS),
        }],
        output_path: "unused.csv".into(),
        parallel: 1,
    };
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for coords in spec.grid() {
        let p = spec.point_params(&coords);
        let outcome = (|| {
            let dq = derive(&p)?;
            let m = build_drift(&p, dq.g_m);
            let v = steady_covariance(&m, &build_diffusion(&p, dq.nbar, dq.nbar2))?;
            let r = reduce_mechanical(&v)?;
            let cross = frob_norm(&omn_core::smallmat::Mat::from_rows(&[&r.phi3[0], &r.phi3[1]])?);
            Ok::<_, Error>((cross / frob_norm(&r.to_mat()), log_negativity(&r)?.log_negativity))
        })();
        match outcome {
            Ok((ratio, en)) => {
                worst = worst.max(ratio);
                if ratio > 1e-9 || en != 0.0 {
                    bad.push(coords[0]);
                }
            }
            Err(_) => bad.push(coords[0]),
        }
    }
    check(
        bad.is_empty(),
        format!("{} Δ points, worst ‖Φ₃‖/‖Ṽ‖ = {worst:.1e}, {} violations", figures::DETUNING_POINTS, bad.len()),
    )
}

fn criterion_5() -> Outcome {
    let (_, rows) = figure_rows(Figure::Fig2);
    let s: Vec<CurveStats> = curves(&rows).iter().map(|(_, c)| stats(c)).collect();
    let ok = s[2].max > s[1].max
        && s[1].max > s[0].max
        && s[0].max > 0.0
        && s[0].width < s[1].width
        && s[1].width < s[2].width;
    check(
        ok,
        format!(
            "λ/ω_m 0.3, 0.5, 0.95: max E_N {:.4}, {:.4}, {:.4}; width/ω_m {:.3}, {:.3}, {:.3}",
            s[0].max, s[1].max, s[2].max, s[0].width, s[1].width, s[2].width
        ),
    )
}

fn criterion_6() -> Outcome {
    let (_, rows) = figure_rows(Figure::Fig3);
    let s: Vec<CurveStats> = curves(&rows).iter().map(|(_, c)| stats(c)).collect();
    let ok = s.windows(2).all(|w| w[1].max <= w[0].max && w[1].width <= w[0].width && w[1].argmax >= w[0].argmax);
    let fmt = |f: &dyn Fn(&CurveStats) -> f64| s.iter().map(|x| format!("{:.3}", f(x))).collect::<Vec<_>>().join(" ");
    check(
        ok,
        format!(
            "max [{}], width [{}], argmax [{}]",
            fmt(&|x| x.max),
            fmt(&|x| x.width),
            fmt(&|x| x.argmax)
        ),
    )
}

fn criterion_7() -> Outcome {
    let (_, rows) = figure_rows(Figure::Fig4);
    let at = |curve: &[(f64, f64)], x: f64| curve.iter().find(|p| p.0 == x).map(|p| p.1).unwrap_or(f64::NAN);
    let c = curves(&rows);
    let resonant: Vec<f64> = c.iter().map(|(_, curve)| at(curve, 1.0)).collect();
    let below: Vec<f64> = c.iter().map(|(_, curve)| at(curve, 0.75)).collect();
    let hi = resonant.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = resonant.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    let increasing = below.windows(2).all(|w| w[1] > w[0]);
    check(
        spread <= 0.05 && increasing && lo > 0.0,
        format!("spread at Δ = ω_m {:.2}% {resonant:.4?}; at Δ = 0.75ω_m {below:.4?}", spread * 100.0),
    )
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut tc = Vec::new();
    for figure in [Figure::Fig5a, Figure::Fig5b] {
        let (spec, rows) = figure_rows(figure);
        let ceiling = *spec.axes[1].values.last().unwrap();
        for (power, curve) in curves(&rows) {
            let monotone = curve.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9);
            ok &= monotone && curve.iter().all(|p| p.1.is_finite());
            let p = SystemParams { power, ..figure.base() };
            let t = critical_temperature(&p, figures::TEMPERATURE_FLOOR, ceiling, 1e-7).map_err(|e| e.to_string())?;
            tc.push((figure, power, t));
        }
    }
    let get = |f: Figure, p: f64| tc.iter().find(|x| x.0 == f && x.1 == p).map(|x| x.2).unwrap();
    for f in [Figure::Fig5a, Figure::Fig5b] {
        ok &= get(f, 0.1) > get(f, 0.03);
        notes.push(format!(
            "{f} T_c/mK [{}]",
            figures::FIG5_POWERS.iter().map(|&p| format!("{:.2}", get(f, p) * 1e3)).collect::<Vec<_>>().join(" ")
        ));
    }
    ok &= get(Figure::Fig5b, 0.05) > get(Figure::Fig5a, 0.05);
    ok &= tc.iter().all(|x| x.2 > 4e-3);
    check(ok, format!("E_N(T) non-increasing in all 8 families; {}", notes.join("; ")))
}

fn criterion_9() -> Outcome {
    let base = SystemParams::baseline();
    let p = SystemParams { detuning: 0.0, opa_phase: 0.0, opa_gain: 0.75 * base.kappa, ..base };
    let m = build_drift(&p, 0.0);
    let report = stability(&m).map_err(|e| e.to_string())?;
    let refused = matches!(
        steady_covariance(&m, &build_diffusion(&p, 0.0, 0.0)),
        Err(Error::UnstableSystem { .. })
    );
    let spec = SweepSpec {
        base: SystemParams { detuning: 0.0, ..base },
        base_relative: Vec::new(),
        axes: vec![Axis { key: ParamKey::OpaGain, values: vec![0.0, 0.75 * base.kappa, 0.1 * base.kappa] }],
        output_path: "unused.csv".into(),
        parallel: 1,
    };
    let rows = run_sweep(&spec).map_err(|e| e.to_string())?;
    let flagged = &rows[1];
    let row_ok = rows.len() == 3
        && flagged.stable == Some(false)
        && flagged.error_code != 0
        && flagged.log_negativity.is_none()
        && rows[0].error_code == 0
        && rows[2].error_code == 0;
    check(
        !report.stable && refused && row_ok,
        format!(
            "max Re λ = {:.3e}, steady_covariance refused: {refused}, sweep rows {} with flagged error_code {}",
            report.max_real_part,
            rows.len(),
            flagged.error_code
        ),
    )
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |workers: &str, name: &str| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_omn"))
            .args(["fig3", "--parallel", workers, "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("fig3 --parallel {workers} exited with {status}"));
        }
        std::fs::read(Path::new(&out)).map_err(|e| e.to_string())
    };
    let a = run("1", "p1.csv")?;
    let b = run("8", "p8.csv")?;
    check(a == b && !a.is_empty(), format!("{} bytes each, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("analytic entanglement oracle", criterion_1),
        ("Lyapunov correctness on fig2", criterion_2),
        ("transient vs steady state", criterion_3),
        ("no Coulomb coupling, no entanglement", criterion_4),
        ("fig2 ordering in λ", criterion_5),
        ("fig3 OPA suppression", criterion_6),
        ("fig4 phase behaviour", criterion_7),
        ("fig5 thermal robustness", criterion_8),
        ("instability guard", criterion_9),
        ("determinism across worker counts", criterion_10),
    ];
    // criterion 1 times a sub-millisecond computation; warm up first
    let _ = log_negativity(&tmsv(0.3));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {:>2} {name}: {detail} ({:.2?})", i + 1, start.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
