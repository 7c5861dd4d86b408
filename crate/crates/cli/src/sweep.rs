//! Grid evaluation and CSV/JSON output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use omn_core::pipeline::{self, PointReport};
use omn_core::params::SystemParams;
use omn_core::Error;
use serde_json::{Map, Value};

use crate::config::{apply_assignments, Axis, Config, ParamKey};
use crate::error::{CliError, Result};

/// Columns following the axis columns, in output order.
pub const DERIVED_COLUMNS: [&str; 10] = [
    "nbar",
    "abs_c_s",
    "q1s",
    "g_m",
    "stable",
    "max_real_part",
    "sigma",
    "varrho",
    "log_negativity",
    "error_code",
];

/// A fully specified grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub base_relative: Vec<(ParamKey, f64)>,
    pub axes: Vec<Axis>,
    pub output_path: PathBuf,
    pub parallel: usize,
}

impl SweepSpec {
    /// Builds a spec from a parsed config. `out` and `parallel` override the
    /// file's `output` and `parallel` entries; `OMN_PARALLEL` comes next.
    pub fn from_config(config: Config, out: Option<PathBuf>, parallel: Option<usize>) -> Result<Self> {
        let output_path = out
            .or(config.output)
            .ok_or_else(|| CliError::config("no output path: pass --out or set `output`"))?;
        let spec = SweepSpec {
            base: config.base,
            base_relative: config.base_relative,
            axes: config.axes,
            output_path,
            parallel: match parallel.or(config.parallel) {
                Some(n) => n,
                None => env_parallelism()?.unwrap_or_else(default_parallelism),
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.parallel == 0 {
            return Err(CliError::config("parallel must be >= 1"));
        }
        for (i, axis) in self.axes.iter().enumerate() {
            if axis.values.is_empty() {
                return Err(CliError::config(format!("axis {} has no values", axis.key)));
            }
            if self.axes[..i].iter().any(|a| a.key.target() == axis.key.target()) {
                return Err(CliError::config(format!("axis {} is swept twice", axis.key.target())));
            }
        }
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Axis values of every grid point, first axis outermost.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        points
    }

    /// Parameters of one grid point.
    pub fn point_params(&self, coords: &[f64]) -> SystemParams {
        let mut p = self.base;
        let mut assignments: Vec<(ParamKey, f64)> = self
            .base_relative
            .iter()
            .copied()
            .filter(|(k, _)| !self.axes.iter().any(|a| a.key.target() == k.target()))
            .collect();
        assignments.extend(self.axes.iter().zip(coords).map(|(a, &v)| (a.key, v)));
        apply_assignments(&mut p, assignments);
        p
    }
}

/// Name of the environment variable holding the default worker count.
pub const PARALLEL_ENV: &str = "OMN_PARALLEL";

/// Worker count from `OMN_PARALLEL`, if set.
pub fn env_parallelism() -> Result<Option<usize>> {
    match std::env::var(PARALLEL_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::config(format!("{PARALLEL_ENV}={v}: expected a positive integer"))),
        },
        Err(_) => Ok(None),
    }
}

/// Worker count when neither a flag nor the config sets one.
pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub nbar: Option<f64>,
    pub abs_c_s: Option<f64>,
    pub q1s: Option<f64>,
    pub g_m: Option<f64>,
    pub stable: Option<bool>,
    pub max_real_part: Option<f64>,
    pub sigma: Option<f64>,
    pub varrho: Option<f64>,
    pub log_negativity: Option<f64>,
    pub error_code: u8,
}

impl SweepRow {
    pub fn from_report(coords: Vec<f64>, r: &PointReport) -> Self {
        let threshold = matches!(r.error, Some(Error::ThresholdSingularity { .. }));
        let ent = r.entanglement.filter(|_| r.error.is_none());
        SweepRow {
            coords,
            nbar: r.nbar,
            abs_c_s: r.derived.map(|d| d.c_s.norm()),
            q1s: r.derived.map(|d| d.q1s),
            // above threshold the drift is assessed with G_m = 0
            g_m: r.derived.map(|d| d.g_m).or(threshold.then_some(0.0)),
            stable: r.stability.as_ref().map(|s| s.stable),
            max_real_part: r.stability.as_ref().map(|s| s.max_real_part),
            sigma: ent.map(|e| e.sigma),
            varrho: ent.map(|e| e.varrho),
            log_negativity: ent.map(|e| e.log_negativity),
            error_code: r.error_code(),
        }
    }

    fn cells(&self) -> Vec<String> {
        let f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        let mut out: Vec<String> = self.coords.iter().map(|&v| format_float(v)).collect();
        out.extend([
            f(self.nbar),
            f(self.abs_c_s),
            f(self.q1s),
            f(self.g_m),
            self.stable.map(|s| u8::from(s).to_string()).unwrap_or_default(),
            f(self.max_real_part),
            f(self.sigma),
            f(self.varrho),
            f(self.log_negativity),
            self.error_code.to_string(),
        ]);
        out
    }

    fn json(&self, axes: &[Axis]) -> Value {
        let f = |v: Option<f64>| v.map_or(Value::Null, Value::from);
        let mut m = Map::new();
        for (axis, &v) in axes.iter().zip(&self.coords) {
            m.insert(axis.key.name().into(), v.into());
        }
        m.insert("nbar".into(), f(self.nbar));
        m.insert("abs_c_s".into(), f(self.abs_c_s));
        m.insert("q1s".into(), f(self.q1s));
        m.insert("g_m".into(), f(self.g_m));
        m.insert("stable".into(), self.stable.map_or(Value::Null, |s| u8::from(s).into()));
        m.insert("max_real_part".into(), f(self.max_real_part));
        m.insert("sigma".into(), f(self.sigma));
        m.insert("varrho".into(), f(self.varrho));
        m.insert("log_negativity".into(), f(self.log_negativity));
        m.insert("error_code".into(), self.error_code.into());
        Value::Object(m)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Evaluates every grid point on `spec.parallel` workers. Rows come back in
/// grid order whatever the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points: Vec<(Vec<f64>, SystemParams)> = spec
        .grid()
        .into_iter()
        .map(|c| {
            let p = spec.point_params(&c);
            (c, p)
        })
        .collect();
    Ok(map_parallel(spec.parallel, points, |(coords, p)| {
        SweepRow::from_report(coords, &pipeline::evaluate(&p))
    }))
}

/// Order-preserving parallel map on a dedicated pool of `workers` threads.
pub fn map_parallel<T, U, F>(workers: usize, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    if workers <= 1 {
        return items.into_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
        Err(_) => items.into_iter().map(f).collect(),
    }
}

/// Header row for a set of axes.
pub fn header(axes: &[Axis]) -> Vec<&'static str> {
    axes.iter().map(|a| a.key.name()).chain(DERIVED_COLUMNS).collect()
}

/// Writes rows as CSV.
pub fn write_csv<W: Write>(out: W, axes: &[Axis], rows: &[SweepRow]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header(axes))?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes rows as a JSON array of objects keyed like the CSV header.
pub fn write_json<W: Write>(mut out: W, axes: &[Axis], rows: &[SweepRow]) -> std::io::Result<()> {
    let doc = Value::Array(rows.iter().map(|r| r.json(axes)).collect());
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// Writes to `path`, as JSON when it ends in `.json` and CSV otherwise.
pub fn write_table(path: &Path, axes: &[Axis], rows: &[SweepRow]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let w = BufWriter::new(file);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        write_json(w, axes, rows).map_err(|e| CliError::io(path, e))
    } else {
        write_csv(w, axes, rows).map_err(|source| CliError::Csv { path: path.to_path_buf(), source })
    }
}
