//! Run configuration: defaults, an optional `key=value` file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use ptsusy::{make_problem, ProblemParams};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Config(format!("format must be json or csv, got {other:?}"))),
        }
    }
}

pub const DEFAULT_LEVELS: usize = 3;
pub const DEFAULT_GRID: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_G_HI: f64 = 20.0;
pub const MIN_GRID: usize = 100;

/// Partially specified settings; later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub big_l: Option<f64>,
    pub l: Option<f64>,
    pub g: Option<f64>,
    pub n_levels: Option<usize>,
    pub grid_points: Option<usize>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    /// Well half-widths for `gc-scan`.
    pub ls: Option<Vec<f64>>,
    /// Upper end of the coupling bracket for `gc-scan`.
    pub g_hi: Option<f64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse {key} = {value:?}")))
}

pub fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect()
}

impl Settings {
    /// Parses `key = value` lines. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got {line:?}", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "L" => s.big_l = Some(parse_value(key, value)?),
                "l" => s.l = Some(parse_value(key, value)?),
                "g" => s.g = Some(parse_value(key, value)?),
                "n" => s.n_levels = Some(parse_value(key, value)?),
                "grid" => s.grid_points = Some(parse_value(key, value)?),
                "tol" => s.tolerance = Some(parse_value(key, value)?),
                "format" => s.format = Some(value.parse()?),
                "out" => s.out = Some(PathBuf::from(value)),
                "ls" => s.ls = Some(parse_list(key, value)?),
                "g_hi" => s.g_hi = Some(parse_value(key, value)?),
                other => return Err(CliError::Config(format!("line {}: unknown key {other:?}", i + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `self` with every field set in `top` replaced.
    pub fn overridden_by(self, top: Settings) -> Settings {
        Settings {
            big_l: top.big_l.or(self.big_l),
            l: top.l.or(self.l),
            g: top.g.or(self.g),
            n_levels: top.n_levels.or(self.n_levels),
            grid_points: top.grid_points.or(self.grid_points),
            tolerance: top.tolerance.or(self.tolerance),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
            ls: top.ls.or(self.ls),
            g_hi: top.g_hi.or(self.g_hi),
        }
    }

    fn common(&self) -> Result<(usize, usize, f64), CliError> {
        let n_levels = self.n_levels.unwrap_or(DEFAULT_LEVELS);
        let grid_points = self.grid_points.unwrap_or(DEFAULT_GRID);
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOL);
        if n_levels < 1 {
            return Err(CliError::Config("n >= 1 violated".into()));
        }
        if grid_points < MIN_GRID {
            return Err(CliError::Config(format!("grid >= {MIN_GRID} violated: {grid_points}")));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(CliError::Config(format!("tol > 0 violated: {tolerance}")));
        }
        Ok((n_levels, grid_points, tolerance))
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Config(format!("missing --{name}")));
        let (n_levels, grid_points, tolerance) = self.common()?;
        let params = make_problem(need(self.big_l, "L")?, need(self.l, "l")?, need(self.g, "g")?)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(RunConfig {
            params,
            n_levels,
            grid_points,
            tolerance,
            output_format: self.format.unwrap_or_default(),
            output_path: self.out.clone(),
        })
    }

    pub fn scan_config(&self) -> Result<ScanConfig, CliError> {
        let (_, _, tolerance) = self.common()?;
        let big_l = self.big_l.ok_or_else(|| CliError::Config("missing --L".into()))?;
        let ls = match (&self.ls, self.l) {
            (Some(ls), _) if !ls.is_empty() => ls.clone(),
            (_, Some(l)) => vec![l],
            _ => return Err(CliError::Config("missing --ls (or --l)".into())),
        };
        let g_hi = self.g_hi.unwrap_or(DEFAULT_G_HI);
        if !(g_hi > 0.0 && g_hi.is_finite()) {
            return Err(CliError::Config(format!("g_hi > 0 violated: {g_hi}")));
        }
        if !(big_l > 0.0 && big_l.is_finite()) {
            return Err(CliError::Config(format!("L > 0 violated: {big_l}")));
        }
        Ok(ScanConfig {
            big_l,
            ls,
            g_hi,
            tolerance,
            output_format: self.format.unwrap_or_default(),
            output_path: self.out.clone(),
        })
    }
}

/// Validated settings for the single-point commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ProblemParams,
    pub n_levels: usize,
    pub grid_points: usize,
    pub tolerance: f64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

/// Validated settings for `gc-scan`. Individual `l` values are checked
/// per row so that one bad value yields an error row, not a config error.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub big_l: f64,
    pub ls: Vec<f64>,
    pub g_hi: f64,
    pub tolerance: f64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = Settings::parse("# sweep\nL = 1\nl=0.5\ng = 2\nformat = csv\nls = 0.1, 0.2\n").unwrap();
        let flags = Settings {
            g: Some(3.0),
            ..Settings::default()
        };
        let s = file.overridden_by(flags);
        let rc = s.run_config().unwrap();
        assert_eq!(rc.params.coupling(), 3.0);
        assert_eq!(rc.params.well_half_width(), 0.5);
        assert_eq!(rc.output_format, Format::Csv);
        assert_eq!(rc.n_levels, DEFAULT_LEVELS);
        assert_eq!(s.ls, Some(vec![0.1, 0.2]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Settings::parse("L 1").is_err());
        assert!(Settings::parse("colour = red").is_err());
        assert!(Settings::parse("g = two").is_err());
        let s = Settings::parse("L=1\nl=2\ng=1").unwrap();
        assert!(s.run_config().is_err());
        let s = Settings::parse("L=1\nl=0.5\ng=1\ngrid=50").unwrap();
        assert!(s.run_config().is_err());
        let s = Settings::parse("L=1\nl=0.5\ng=1\nn=0").unwrap();
        assert!(s.run_config().is_err());
        assert!(Settings::parse("l=0.5\ng=1").unwrap().run_config().is_err());
    }
}
