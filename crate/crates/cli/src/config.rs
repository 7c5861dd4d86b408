//! Flat `key = value` configuration files.
//!
//! ```text
//! # comment
//! output = fig.csv
//! parallel = 4
//! base.power = 80e-3
//! base.coulomb_lambda_in_omega_m = 0.95
//! base.opa_phase = pi / 16
//! axes.opa_gain = list(0, 2e7, 5e7)
//! axes.detuning = linspace(0, 2, 401) * omega_m1
//! ```
//!
//! Values are arithmetic expressions over numbers, `pi`, `omega_m1`,
//! `omega_m2` (`omega_m` is `omega_m1`) and the list constructors
//! `linspace(start, stop, n)` and `list(a, b, ...)`; a list times or
//! divided by a scalar scales every element. `base.*` values must be
//! scalars; `axes.*` values are lists (a scalar is a one-element list).
//! Axes are swept in the order they appear, the first one outermost.
//!
//! Keys ending in `_in_omega_m` (`detuning_in_omega_m`,
//! `coulomb_lambda_in_omega_m`) are multiples of ω_m1. Giving both a raw key
//! and its `_in_omega_m` twin in the same section is an error.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use omn_core::params::SystemParams;

use crate::error::{CliError, Result};

/// A sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKey {
    OmegaM1,
    OmegaM2,
    GammaM1,
    GammaM2,
    Kappa,
    Mass,
    CavityLength,
    LaserWavelength,
    Power,
    Detuning,
    DetuningInOmegaM,
    CoulombLambda,
    CoulombLambdaInOmegaM,
    OpaGain,
    OpaPhase,
    Temperature,
}

impl ParamKey {
    pub const ALL: [ParamKey; 16] = [
        ParamKey::OmegaM1,
        ParamKey::OmegaM2,
        ParamKey::GammaM1,
        ParamKey::GammaM2,
        ParamKey::Kappa,
        ParamKey::Mass,
        ParamKey::CavityLength,
        ParamKey::LaserWavelength,
        ParamKey::Power,
        ParamKey::Detuning,
        ParamKey::DetuningInOmegaM,
        ParamKey::CoulombLambda,
        ParamKey::CoulombLambdaInOmegaM,
        ParamKey::OpaGain,
        ParamKey::OpaPhase,
        ParamKey::Temperature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamKey::OmegaM1 => "omega_m1",
            ParamKey::OmegaM2 => "omega_m2",
            ParamKey::GammaM1 => "gamma_m1",
            ParamKey::GammaM2 => "gamma_m2",
            ParamKey::Kappa => "kappa",
            ParamKey::Mass => "mass",
            ParamKey::CavityLength => "cavity_length",
            ParamKey::LaserWavelength => "laser_wavelength",
            ParamKey::Power => "power",
            ParamKey::Detuning => "detuning",
            ParamKey::DetuningInOmegaM => "detuning_in_omega_m",
            ParamKey::CoulombLambda => "coulomb_lambda",
            ParamKey::CoulombLambdaInOmegaM => "coulomb_lambda_in_omega_m",
            ParamKey::OpaGain => "opa_gain",
            ParamKey::OpaPhase => "opa_phase",
            ParamKey::Temperature => "temperature",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Whether the value is a multiple of ω_m1.
    pub fn is_relative(self) -> bool {
        matches!(self, ParamKey::DetuningInOmegaM | ParamKey::CoulombLambdaInOmegaM)
    }

    /// The raw key a relative key targets, or `self`.
    pub fn target(self) -> ParamKey {
        match self {
            ParamKey::DetuningInOmegaM => ParamKey::Detuning,
            ParamKey::CoulombLambdaInOmegaM => ParamKey::CoulombLambda,
            k => k,
        }
    }

    /// Current value of the targeted raw parameter.
    pub fn get(self, p: &SystemParams) -> f64 {
        let mut copy = *p;
        *self.slot(&mut copy)
    }

    fn slot(self, p: &mut SystemParams) -> &mut f64 {
        match self.target() {
            ParamKey::OmegaM1 => &mut p.omega_m1,
            ParamKey::OmegaM2 => &mut p.omega_m2,
            ParamKey::GammaM1 => &mut p.gamma_m1,
            ParamKey::GammaM2 => &mut p.gamma_m2,
            ParamKey::Kappa => &mut p.kappa,
            ParamKey::Mass => &mut p.mass,
            ParamKey::CavityLength => &mut p.cavity_length,
            ParamKey::LaserWavelength => &mut p.laser_wavelength,
            ParamKey::Power => &mut p.power,
            ParamKey::Detuning => &mut p.detuning,
            ParamKey::CoulombLambda => &mut p.coulomb_lambda,
            ParamKey::OpaGain => &mut p.opa_gain,
            ParamKey::OpaPhase => &mut p.opa_phase,
            ParamKey::Temperature => &mut p.temperature,
            ParamKey::DetuningInOmegaM | ParamKey::CoulombLambdaInOmegaM => unreachable!(),
        }
    }
}

impl fmt::Display for ParamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sets the given `(key, value)` pairs on `params`. Relative keys are
/// resolved last, against the resulting ω_m1.
pub fn apply_assignments(params: &mut SystemParams, assignments: impl IntoIterator<Item = (ParamKey, f64)> + Clone) {
    for (key, value) in assignments.clone() {
        if !key.is_relative() {
            *key.slot(params) = value;
        }
    }
    let omega = params.omega_m1;
    for (key, value) in assignments {
        if key.is_relative() {
            *key.slot(params) = value * omega;
        }
    }
}

/// One swept parameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: ParamKey,
    pub values: Vec<f64>,
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub base: SystemParams,
    /// `base.*_in_omega_m` entries, kept so sweeps over ω_m1 can rescale them.
    pub base_relative: Vec<(ParamKey, f64)>,
    pub axes: Vec<Axis>,
    pub output: Option<PathBuf>,
    pub parallel: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(f64),
    List(Vec<f64>),
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    value: &'a str,
}

fn line_error(line: &Line<'_>, msg: impl fmt::Display) -> CliError {
    CliError::config(format!("line {}: {}: {msg}", line.number, line.key))
}

/// Parses configuration text.
pub fn parse(text: &str) -> Result<Config> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`", i + 1)))?;
        lines.push(Line { number: i + 1, key: key.trim(), value: value.trim() });
    }

    let mut seen = HashSet::new();
    for line in &lines {
        if !seen.insert(line.key) {
            return Err(line_error(line, "duplicate key"));
        }
    }

    let mut output = None;
    let mut parallel = None;
    let mut base_entries = Vec::new();
    let mut axis_entries = Vec::new();
    for line in &lines {
        if line.key == "output" {
            let path = line.value.trim_matches('"');
            if path.is_empty() {
                return Err(line_error(line, "empty path"));
            }
            output = Some(PathBuf::from(path));
        } else if line.key == "parallel" {
            let n: usize = line.value.parse().map_err(|_| line_error(line, "expected a positive integer"))?;
            if n == 0 {
                return Err(line_error(line, "must be >= 1"));
            }
            parallel = Some(n);
        } else if let Some(name) = line.key.strip_prefix("base.") {
            let key = ParamKey::from_name(name).ok_or_else(|| line_error(line, "unknown parameter"))?;
            base_entries.push((key, line));
        } else if let Some(name) = line.key.strip_prefix("axes.") {
            let key = ParamKey::from_name(name).ok_or_else(|| line_error(line, "unknown parameter"))?;
            axis_entries.push((key, line));
        } else {
            return Err(line_error(line, "unknown key"));
        }
    }
    for entries in [&base_entries, &axis_entries] {
        let targets: Vec<_> = entries.iter().map(|(k, _)| k.target()).collect();
        for (i, (key, line)) in entries.iter().enumerate() {
            if targets[..i].contains(&key.target()) {
                return Err(line_error(
                    line,
                    format!("conflicts with another key setting {}", key.target()),
                ));
            }
        }
    }

    // ω_m1 and ω_m2 first: other expressions may refer to them
    let mut scope = Scope { omega_m1: None, omega_m2: None };
    let mut assignments = Vec::new();
    for (key, line) in base_entries.iter().filter(|(k, _)| matches!(k, ParamKey::OmegaM1 | ParamKey::OmegaM2)) {
        let v = eval_scalar(line, &scope)?;
        assignments.push((*key, v));
    }
    let mut base = SystemParams::baseline();
    apply_assignments(&mut base, assignments.iter().copied());
    scope = Scope { omega_m1: Some(base.omega_m1), omega_m2: Some(base.omega_m2) };
    for (key, line) in base_entries.iter().filter(|(k, _)| !matches!(k, ParamKey::OmegaM1 | ParamKey::OmegaM2)) {
        let v = eval_scalar(line, &scope)?;
        assignments.push((*key, v));
    }
    apply_assignments(&mut base, assignments.iter().copied());
    let base_relative = assignments.into_iter().filter(|(k, _)| k.is_relative()).collect();

    let mut axes = Vec::new();
    for (key, line) in &axis_entries {
        let values = match eval(line, &scope)? {
            Value::Scalar(v) => vec![v],
            Value::List(v) => v,
        };
        if values.is_empty() {
            return Err(line_error(line, "empty value list"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(line_error(line, "non-finite value"));
        }
        axes.push(Axis { key: *key, values });
    }
    Ok(Config { base, base_relative, axes, output, parallel })
}

struct Scope {
    omega_m1: Option<f64>,
    omega_m2: Option<f64>,
}

fn eval_scalar(line: &Line<'_>, scope: &Scope) -> Result<f64> {
    match eval(line, scope)? {
        Value::Scalar(v) if v.is_finite() => Ok(v),
        Value::Scalar(_) => Err(line_error(line, "non-finite value")),
        Value::List(_) => Err(line_error(line, "expected a scalar, found a list")),
    }
}

fn eval(line: &Line<'_>, scope: &Scope) -> Result<Value> {
    let tokens = tokenize(line.value).map_err(|e| line_error(line, e))?;
    let mut parser = Parser { tokens, pos: 0, scope };
    let v = parser.expr().map_err(|e| line_error(line, e))?;
    if parser.pos != parser.tokens.len() {
        return Err(line_error(line, "trailing input"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().map_err(|_| format!("bad number `{text}`"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser<'s> {
    tokens: Vec<Token>,
    pos: usize,
    scope: &'s Scope,
}

type PResult<T> = std::result::Result<T, String>;

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, op: char) -> PResult<()> {
        if self.peek_op() == Some(op) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> PResult<Value> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Value> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Value> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return binary('*', Value::Scalar(-1.0), self.unary()?);
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Value> {
        let token = self.tokens.get(self.pos).cloned().ok_or("unexpected end of value")?;
        self.pos += 1;
        match token {
            Token::Num(v) => Ok(Value::Scalar(v)),
            Token::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Token::Ident(name) if self.peek_op() == Some('(') => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.peek_op() != Some(')') {
                    loop {
                        match self.expr()? {
                            Value::Scalar(v) => args.push(v),
                            Value::List(_) => return Err("list arguments must be scalars".into()),
                        }
                        if self.peek_op() == Some(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(')')?;
                call(&name, &args)
            }
            Token::Ident(name) => match name.as_str() {
                "pi" => Ok(Value::Scalar(PI)),
                "omega_m" | "omega_m1" => {
                    self.scope.omega_m1.map(Value::Scalar).ok_or_else(|| format!("`{name}` is not available here"))
                }
                "omega_m2" => self.scope.omega_m2.map(Value::Scalar).ok_or_else(|| "`omega_m2` is not available here".into()),
                _ => Err(format!("unknown name `{name}`")),
            },
            Token::Op(c) => Err(format!("unexpected `{c}`")),
        }
    }
}

fn call(name: &str, args: &[f64]) -> PResult<Value> {
    match name {
        "linspace" => {
            let [start, stop, n] = args else {
                return Err("linspace takes (start, stop, n)".into());
            };
            if *n < 1.0 || n.fract() != 0.0 {
                return Err("linspace count must be a positive integer".into());
            }
            Ok(Value::List(linspace(*start, *stop, *n as usize)))
        }
        "list" => Ok(Value::List(args.to_vec())),
        _ => Err(format!("unknown function `{name}`")),
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| if i + 1 == n { stop } else { start + step * i as f64 }).collect()
        }
    }
}

fn binary(op: char, lhs: Value, rhs: Value) -> PResult<Value> {
    let f = |a: f64, b: f64| match op {
        '+' => a + b,
        '-' => a - b,
        '*' => a * b,
        _ => a / b,
    };
    match (lhs, rhs) {
        (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(f(a, b))),
        (Value::List(a), Value::Scalar(b)) => Ok(Value::List(a.into_iter().map(|x| f(x, b)).collect())),
        (Value::Scalar(a), Value::List(b)) if op == '*' => Ok(Value::List(b.into_iter().map(|x| f(a, x)).collect())),
        _ => Err(format!("unsupported list operation `{op}`")),
    }
}
