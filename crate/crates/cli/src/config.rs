//! Sweep settings from a TOML file, a preset and command-line flags, in
//! increasing order of precedence.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use watson::sweep::{Preset, SweepConfig, Target, ThetaGrid};

/// Environment variable naming the directory sweeps are written to when
/// `--out` is not given.
pub const OUT_DIR_ENV: &str = "WATSON_OUT_DIR";

/// A string or a list of strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

/// Keys accepted in a config file; all optional. Angles are in units of π.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub spec: Option<OneOrMany>,
    pub r: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub theta_range: Option<[f64; 2]>,
    pub points: Option<usize>,
    pub delta: Option<f64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag values; `None` leaves the file or preset value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub specs: Vec<String>,
    pub r: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub theta_range: Option<(f64, f64)>,
    pub points: Option<usize>,
    pub delta: Option<f64>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Everything `sweep` needs after merging.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub config: SweepConfig,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Resolved> {
    let preset_name = flags.preset.or(file.preset);
    let preset = match &preset_name {
        Some(p) => p.parse::<Preset>().map_err(|e| anyhow::anyhow!("{e}"))?,
        None => Preset::Fig1a,
    };
    let mut config = preset.config();

    let spec_names = if !flags.specs.is_empty() {
        Some(flags.specs)
    } else {
        file.spec.map(OneOrMany::into_vec)
    };
    if let Some(names) = &spec_names {
        config.targets = names
            .iter()
            .map(|s| s.parse::<Target>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    if let Some(r) = flags.r.or(file.r) {
        config.r = r;
    }
    if let Some(x) = flags.x.or(file.x) {
        config.x_values = x;
    }
    let range = flags.theta_range.or(file.theta_range.map(|[a, b]| (a, b)));
    let points = flags.points.or(file.points);
    if range.is_some() || points.is_some() {
        let (start, stop) = range.unwrap_or((config.theta.start, config.theta.stop));
        config.theta = ThetaGrid::new(start, stop, points.unwrap_or(config.theta.points));
    }
    if let Some(d) = flags.delta.or(file.delta) {
        config.delta = d * PI;
    }
    if let Some(t) = flags.tol.or(file.tol) {
        config.tol = t;
    }
    config.validate().map_err(|e| anyhow::anyhow!("invalid sweep configuration: {e}"))?;

    let name = match (&preset_name, &spec_names) {
        (Some(p), None) => p.to_ascii_lowercase(),
        _ => "sweep".to_string(),
    };
    let jobs = flags.jobs.or(file.jobs);
    if jobs == Some(0) {
        bail!("invalid sweep configuration: invalid parameter jobs: must be at least 1");
    }
    Ok(Resolved {
        name,
        config,
        jobs,
        out: flags.out.or(file.out),
    })
}

/// Where the CSV goes: the `--out` path (a directory gets `<name>.csv`), else
/// `<name>.csv` in the directory named by [`OUT_DIR_ENV`], else standard output.
pub fn output_path(out: Option<&Path>, env_dir: Option<&Path>, name: &str) -> Option<PathBuf> {
    let file = format!("{name}.csv");
    match (out, env_dir) {
        (Some(p), _) if p.is_dir() => Some(p.join(file)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(file)),
        (None, None) => None,
    }
}

/// `start:stop` or `start,stop`, in units of π.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .or_else(|| s.split_once(','))
        .ok_or_else(|| format!("expected start:stop, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    Ok((num(a)?, num(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_preset() {
        let file: FileConfig = toml::from_str(
            r#"
            preset = "fig2a"
            r = 0.5
            x = [10.0, 12.0]
            theta_range = [0.0, 0.3]
            points = 4
            "#,
        )
        .unwrap();
        let flags = Overrides {
            r: Some(0.7),
            points: Some(7),
            ..Default::default()
        };
        let res = resolve(file, flags).unwrap();
        assert_eq!(res.name, "fig2a");
        assert_eq!(res.config.r, 0.7);
        assert_eq!(res.config.x_values, vec![10.0, 12.0]);
        assert_eq!(res.config.theta, ThetaGrid::new(0.0, 0.3, 7));
        assert_eq!(res.config.targets.len(), 2);
    }

    #[test]
    fn spec_replaces_preset_targets() {
        let file: FileConfig = toml::from_str(r#"spec = ["struve", "pole:0.25"]"#).unwrap();
        let res = resolve(file, Overrides::default()).unwrap();
        assert_eq!(res.name, "sweep");
        assert_eq!(res.config.targets.len(), 2);
        assert_eq!(res.config.targets[1].to_string(), "pole:0.25");
    }

    #[test]
    fn delta_in_pi_units() {
        let flags = Overrides {
            delta: Some(0.05),
            theta_range: Some((0.0, 0.45)),
            ..Default::default()
        };
        let res = resolve(FileConfig::default(), flags).unwrap();
        assert!((res.config.delta - 0.05 * PI).abs() < 1e-15);
    }

    #[test]
    fn invalid_values_name_the_field() {
        let flags = Overrides {
            r: Some(1.5),
            ..Default::default()
        };
        let err = resolve(FileConfig::default(), flags).unwrap_err().to_string();
        assert!(err.contains("parameter r"), "{err}");
        assert!(toml::from_str::<FileConfig>("speed = 3").is_err());
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_range("0:0.48").unwrap(), (0.0, 0.48));
        assert_eq!(parse_range("-0.2, 0.2").unwrap(), (-0.2, 0.2));
        assert!(parse_range("0.1").is_err());
    }

    #[test]
    fn output_locations() {
        let dir = std::env::temp_dir();
        assert_eq!(output_path(None, None, "fig1a"), None);
        assert_eq!(output_path(None, Some(&dir), "fig1a"), Some(dir.join("fig1a.csv")));
        assert_eq!(output_path(Some(&dir), None, "e1"), Some(dir.join("e1.csv")));
        let f = Path::new("some/file.csv");
        assert_eq!(output_path(Some(f), Some(&dir), "e1"), Some(f.to_path_buf()));
    }
}
