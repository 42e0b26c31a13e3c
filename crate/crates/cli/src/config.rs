//! `key = value` run configuration with strict keys and command-dependent
//! defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rkdg_core::experiments::FlatMode;
use rkdg_core::spectral::DeltaMethod;
use rkdg_core::Variant;

use crate::error::{CliError, Result};

/// Recognised keys, in echo order.
pub const KEYS: &[&str] = &[
    "command",
    "r",
    "k",
    "variant",
    "dim",
    "N",
    "perturb",
    "seed",
    "cfl",
    "tau",
    "T",
    "m",
    "flat",
    "quadrature",
    "delta_method",
    "samples",
    "output",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Accuracy,
    Regularity,
    Stability,
    Cfl,
    PropTests,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Accuracy => "accuracy",
            Command::Regularity => "regularity",
            Command::Stability => "stability",
            Command::Cfl => "cfl",
            Command::PropTests => "prop-tests",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(Command::Accuracy),
            "regularity" => Ok(Command::Regularity),
            "stability" => Ok(Command::Stability),
            "cfl" => Ok(Command::Cfl),
            "prop-tests" => Ok(Command::PropTests),
            _ => Err(CliError::invalid(
                "command",
                s,
                "expected accuracy, regularity, stability, cfl or prop-tests",
            )),
        }
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub r: Vec<usize>,
    /// `None` pairs every `r` with `k = r - 1`
    pub k: Option<Vec<usize>>,
    pub variants: Vec<Variant>,
    pub dim: usize,
    pub n_list: Vec<usize>,
    pub perturb: f64,
    pub seed: u64,
    /// CFL grid for stability sweeps, or a single CFL step rule for accuracy
    pub cfl: Vec<f64>,
    pub tau: Option<f64>,
    /// `None` is the command default
    pub t_final: Option<f64>,
    pub m: Vec<usize>,
    pub flat: Vec<FlatMode>,
    pub quadrature: Option<usize>,
    pub delta_method: DeltaMethod,
    pub samples: usize,
    /// `None` writes to stdout
    pub output: Option<PathBuf>,
}

/// Parse `key = value` lines. Blank lines and `#` comments are skipped.
pub fn parse_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Syntax {
            line: i + 1,
            msg: format!("expected `key = value`, found `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        check_key(key)?;
        if out.iter().any(|(k, _)| k == key) {
            return Err(CliError::DuplicateKey(key.to_string()));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

/// Parse a `key=value` command-line override.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| CliError::Syntax { line: 0, msg: format!("expected KEY=VALUE, found `{s}`") })?;
    let key = key.trim();
    check_key(key)?;
    Ok((key.to_string(), value.trim().to_string()))
}

fn check_key(key: &str) -> Result<()> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(CliError::UnknownKey(key.to_string()))
    }
}

/// Merge file settings with flag overrides and resolve defaults.
pub fn resolve(file: &[(String, String)], flags: &[(String, String)]) -> Result<RunConfig> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for (k, v) in file.iter().chain(flags) {
        check_key(k)?;
        map.insert(k.as_str(), v.as_str());
    }
    let get = |k: &str| map.get(k).copied();

    let command: Command = get("command").ok_or(CliError::MissingCommand)?.parse()?;
    let dim = match get("dim") {
        None => 1,
        Some(v) => match v {
            "1" => 1,
            "2" => 2,
            _ => return Err(CliError::invalid("dim", v, "expected 1 or 2")),
        },
    };
    let r = match get("r") {
        Some(v) => uint_list("r", v)?,
        None => match command {
            Command::Accuracy => vec![2, 3, 4, 5],
            Command::Regularity => vec![2, 3],
            Command::Stability => vec![2],
            Command::Cfl => (2..=8).collect(),
            Command::PropTests => vec![2, 3, 4],
        },
    };
    if let Some(&bad) = r.iter().find(|&&x| x == 0) {
        return Err(CliError::invalid("r", &bad.to_string(), "orders start at 1"));
    }
    let k = match get("k") {
        None | Some("auto") => None,
        Some(v) => Some(uint_list("k", v)?),
    };
    let variants = match get("variant") {
        None | Some("both") => vec![Variant::Standard, Variant::Sda],
        Some(v) => v
            .split(',')
            .map(|s| s.trim().parse::<Variant>().map_err(|e| CliError::invalid("variant", v, e.to_string())))
            .collect::<Result<Vec<_>>>()?,
    };
    let n_list = match get("N") {
        Some(v) => uint_list("N", v)?,
        None => match (command, dim) {
            (Command::Accuracy, _) => vec![20, 40, 80, 160, 320],
            (Command::Regularity, 1) => vec![80, 160, 320, 640, 1280],
            (Command::Regularity, _) => vec![20, 40, 80, 160, 320],
            (Command::Stability, 1) => vec![16, 32, 64],
            (Command::Stability, _) => vec![4, 8, 16],
            (Command::PropTests, 1) => vec![8],
            (Command::PropTests, _) => vec![4],
            (Command::Cfl, _) => Vec::new(),
        },
    };
    if n_list.contains(&0) {
        return Err(CliError::invalid("N", get("N").unwrap_or(""), "resolutions must be positive"));
    }
    let perturb = match get("perturb") {
        Some(v) => float("perturb", v)?,
        None => 0.0,
    };
    let seed = match get("seed") {
        Some(v) => v.parse().map_err(|_| CliError::invalid("seed", v, "expected an unsigned integer"))?,
        None => 0,
    };
    let cfl = match get("cfl") {
        Some(v) => float_list("cfl", v)?,
        None if command == Command::Stability => vec![0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
        None => Vec::new(),
    };
    let tau = get("tau").map(|v| positive("tau", v)).transpose()?;
    let t_final = get("T").map(|v| float("T", v)).transpose()?;
    if let (Some(t), Some(v)) = (t_final, get("T")) {
        if t < 0.0 {
            return Err(CliError::invalid("T", v, "final time must be >= 0"));
        }
    }
    let m = match get("m") {
        Some(v) => uint_list("m", v)?,
        None => vec![1],
    };
    if m.contains(&0) {
        return Err(CliError::invalid("m", get("m").unwrap_or(""), "step counts start at 1"));
    }
    let flat = match get("flat") {
        None | Some("both") => vec![FlatMode::EqualR, FlatMode::RPlusOne],
        Some(v) => v
            .split(',')
            .map(|s| match s.trim() {
                "r" => Ok(FlatMode::EqualR),
                "r+1" => Ok(FlatMode::RPlusOne),
                _ => Err(CliError::invalid("flat", v, "expected r, r+1 or both")),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let quadrature = match get("quadrature") {
        None | Some("auto") => None,
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::invalid("quadrature", v, "expected a positive point count or auto")),
        },
    };
    let delta_method = match get("delta_method") {
        None | Some("auto") => DeltaMethod::Auto,
        Some("fourier") => DeltaMethod::Fourier,
        Some("dense") => DeltaMethod::Dense,
        Some("power") => DeltaMethod::PowerIteration,
        Some(v) => return Err(CliError::invalid("delta_method", v, "expected auto, fourier, dense or power")),
    };
    let samples = match get("samples") {
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(CliError::invalid("samples", v, "expected a positive integer")),
        },
        None => 8,
    };
    let output = match get("output") {
        None | Some("-") => None,
        Some(v) => Some(PathBuf::from(v)),
    };

    let cfg = RunConfig {
        command,
        r,
        k,
        variants,
        dim,
        n_list,
        perturb,
        seed,
        cfl,
        tau,
        t_final,
        m,
        flat,
        quadrature,
        delta_method,
        samples,
        output,
    };
    cfg.check_conflicts()?;
    Ok(cfg)
}

impl RunConfig {
    fn check_conflicts(&self) -> Result<()> {
        let conflict = |msg: &str| Err(CliError::Conflict(msg.to_string()));
        match self.command {
            Command::Accuracy => {
                if !self.cfl.is_empty() && self.tau.is_some() {
                    return conflict("`cfl` and `tau` both set the time step");
                }
                if self.cfl.len() > 1 {
                    return conflict("accuracy runs take a single `cfl` value");
                }
            }
            Command::Regularity => {
                if !self.cfl.is_empty() || self.tau.is_some() {
                    return conflict("regularity runs use the fixed time-step rule; drop `cfl` and `tau`");
                }
                if self.perturb != 0.0 {
                    return conflict("regularity runs use uniform meshes");
                }
            }
            Command::Stability => {
                if self.tau.is_some() {
                    return conflict("stability sweeps are parameterised by `cfl`, not `tau`");
                }
                if self.cfl.is_empty() {
                    return conflict("stability sweeps need at least one `cfl` value");
                }
                if self.perturb != 0.0 {
                    return conflict("stability sweeps use uniform meshes");
                }
            }
            Command::Cfl => {
                if self.dim != 1 {
                    return conflict("Fourier CFL numbers are computed in 1D only");
                }
            }
            Command::PropTests => {}
        }
        if self.perturb != 0.0 && self.dim != 1 {
            return conflict("mesh perturbation is available in 1D only");
        }
        if !(0.0..0.5).contains(&self.perturb) {
            return Err(CliError::invalid("perturb", &self.perturb.to_string(), "expected a fraction in [0, 0.5)"));
        }
        Ok(())
    }

    /// `(variant, r, k)` in output order: variant, then `r`, then `k`.
    pub fn methods(&self) -> Vec<(Variant, usize, usize)> {
        let mut out = Vec::new();
        for &v in &self.variants {
            for &r in &self.r {
                match &self.k {
                    None => out.push((v, r, r - 1)),
                    Some(ks) => out.extend(ks.iter().map(|&k| (v, r, k))),
                }
            }
        }
        out
    }

    /// One-line canonical form of every resolved setting.
    pub fn echo(&self) -> String {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let flist = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let parts = [
            ("command", self.command.to_string()),
            ("r", list(&self.r)),
            ("k", self.k.as_deref().map(list).unwrap_or_else(|| "auto".into())),
            ("variant", self.variants.iter().map(|v| v.name()).collect::<Vec<_>>().join(",")),
            ("dim", self.dim.to_string()),
            ("N", list(&self.n_list)),
            ("perturb", self.perturb.to_string()),
            ("seed", self.seed.to_string()),
            ("cfl", flist(&self.cfl)),
            ("tau", self.tau.map(|t| t.to_string()).unwrap_or_default()),
            ("T", self.t_final.map(|t| t.to_string()).unwrap_or_else(|| "auto".into())),
            ("m", list(&self.m)),
            (
                "flat",
                self.flat
                    .iter()
                    .map(|f| match f {
                        FlatMode::EqualR => "r",
                        FlatMode::RPlusOne => "r+1",
                    })
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("quadrature", self.quadrature.map(|q| q.to_string()).unwrap_or_else(|| "auto".into())),
            (
                "delta_method",
                match self.delta_method {
                    DeltaMethod::Auto => "auto",
                    DeltaMethod::Fourier => "fourier",
                    DeltaMethod::Dense => "dense",
                    DeltaMethod::PowerIteration => "power",
                }
                .into(),
            ),
            ("samples", self.samples.to_string()),
            (
                "output",
                self.output.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "-".into()),
            ),
        ];
        parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("; ")
    }
}

fn uint_list(key: &str, v: &str) -> Result<Vec<usize>> {
    let out = v
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CliError::invalid(key, v, "expected a comma-separated list of integers"))?;
    if out.is_empty() {
        return Err(CliError::invalid(key, v, "empty list"));
    }
    Ok(out)
}

fn float(key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::invalid(key, v, "expected a finite number")),
    }
}

fn positive(key: &str, v: &str) -> Result<f64> {
    let x = float(key, v)?;
    if x <= 0.0 {
        return Err(CliError::invalid(key, v, "expected a positive number"));
    }
    Ok(x)
}

/// Comma list, or `start:step:stop` with `stop` included up to rounding.
fn float_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = v.split(':').collect();
    let out = match parts.as_slice() {
        [start, step, stop] => {
            let (a, h, b) = (positive(key, start)?, positive(key, step)?, positive(key, stop)?);
            if b < a {
                return Err(CliError::invalid(key, v, "range end lies below its start"));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err(CliError::invalid(key, v, "range has too many points"));
            }
            (0..=n).map(|i| a + i as f64 * h).collect()
        }
        [_] => v.split(',').map(|s| positive(key, s.trim())).collect::<Result<Vec<_>>>()?,
        _ => return Err(CliError::invalid(key, v, "expected a list or start:step:stop")),
    };
    Ok(out)
}
