use std::path::Path;

use xy_core::{MomentumGrid, QuenchKind};
use xy_static::LegOrder;

use crate::error::CliError;

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: Option<usize>,
}

/// Resolved parameters for one command: defaults, then file entries, then
/// command-line flags, with later sources overriding earlier ones.
#[derive(Debug, Clone)]
pub struct RunConfig {
    command: String,
    entries: Vec<Entry>,
}

impl RunConfig {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            entries: Vec::new(),
        }
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    /// Folds defaults in; existing keys are left untouched.
    pub fn defaults(&mut self, pairs: &[(&str, &str)]) {
        for (k, v) in pairs {
            if self.lookup(k).is_none() {
                self.entries.push(Entry {
                    key: (*k).to_owned(),
                    value: (*v).to_owned(),
                    line: None,
                });
            }
        }
    }

    /// Parses a `key=value` file with `#` comments and folds it in. Values
    /// from the file override defaults already present.
    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let stripped = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            }
            .trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or(CliError::MalformedLine { line })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::MalformedLine { line });
            }
            self.set(key, value.trim(), Some(line));
        }
        Ok(())
    }

    /// Applies one command-line flag, overriding defaults and file values.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) {
        self.set(key, value.into(), None);
    }

    /// Applies a `key=value` override string (the `--set` form).
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            CliError::usage(format!("override `{pair}` is not of the form key=value"))
        })?;
        self.set_flag(key.trim(), value.trim());
        Ok(())
    }

    fn set(&mut self, key: &str, value: impl Into<String>, line: Option<usize>) {
        let value = value.into();
        match self.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => {
                e.value = value;
                e.line = line;
            }
            None => self.entries.push(Entry {
                key: key.to_owned(),
                value,
                line,
            }),
        }
    }

    fn lookup(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    /// Rejects the first key outside the command's allowed set.
    pub fn validate_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(CliError::UnknownKey {
                    key: e.key.clone(),
                    line: e.line,
                });
            }
        }
        Ok(())
    }

    /// Every resolved key-value pair, in first-seen order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|e| (e.key.as_str(), e.value.as_str()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lookup(key).map(|e| e.value.as_str())
    }

    fn invalid(&self, key: &str, message: impl Into<String>) -> CliError {
        CliError::InvalidValue {
            key: key.to_owned(),
            line: self.lookup(key).and_then(|e| e.line),
            message: message.into(),
        }
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| CliError::MissingKey {
            key: key.to_owned(),
        })
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, CliError> {
        let raw = self.require(key)?;
        raw.parse::<f64>()
            .map_err(|_| self.invalid(key, format!("`{raw}` is not a number")))
    }

    pub fn require_usize(&self, key: &str) -> Result<usize, CliError> {
        let raw = self.require(key)?;
        raw.parse::<usize>()
            .map_err(|_| self.invalid(key, format!("`{raw}` is not a non-negative integer")))
    }

    /// Comma-separated list of numbers.
    pub fn require_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| self.invalid(key, format!("`{s}` is not a number")))
            })
            .collect()
    }

    pub fn require_list_usize(&self, key: &str) -> Result<Vec<usize>, CliError> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| self.invalid(key, format!("`{s}` is not an integer")))
            })
            .collect()
    }

    /// A single number or a `start:end:count` range.
    pub fn require_axis(&self, key: &str) -> Result<Axis, CliError> {
        let raw = self.require(key)?;
        parse_axis(raw).ok_or_else(|| {
            self.invalid(
                key,
                format!("`{raw}` is neither a number nor `start:end:count`"),
            )
        })
    }

    /// A `start:end:count` range with at least two points.
    pub fn require_range(&self, key: &str) -> Result<Vec<f64>, CliError> {
        match self.require_axis(key)? {
            Axis::Range { values } if values.len() >= 2 => Ok(values),
            _ => Err(self.invalid(key, "expected a `start:end:count` range")),
        }
    }

    /// The most permissive numeric shape: a single number, a comma list,
    /// or a `start:end:count` range.
    pub fn require_values(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let raw = self.require(key)?;
        if raw.contains(':') {
            return Ok(self.require_axis(key)?.values());
        }
        let values = self.require_list(key)?;
        if values.is_empty() {
            return Err(self.invalid(key, "expected at least one value"));
        }
        Ok(values)
    }

    /// Momentum grid spec: `thermo`, `thermo:<abs_tol>`, or `finite:<n>`.
    pub fn require_grid(&self, key: &str) -> Result<MomentumGrid, CliError> {
        let raw = self.require(key)?;
        if raw == "thermo" {
            return Ok(MomentumGrid::thermo());
        }
        if let Some(tol) = raw.strip_prefix("thermo:") {
            let tol: f64 = tol
                .parse()
                .map_err(|_| self.invalid(key, format!("`{raw}`: tolerance is not a number")))?;
            if !(tol.is_finite() && tol > 0.0) {
                return Err(self.invalid(key, "tolerance must be positive"));
            }
            return Ok(MomentumGrid::thermo_with_tol(tol));
        }
        if let Some(n) = raw.strip_prefix("finite:") {
            let n: usize = n
                .parse()
                .map_err(|_| self.invalid(key, format!("`{raw}`: length is not an integer")))?;
            return MomentumGrid::finite(n)
                .map_err(|e| self.invalid(key, e.to_string()));
        }
        Err(self.invalid(
            key,
            format!("`{raw}` is not `thermo`, `thermo:<tol>`, or `finite:<n>`"),
        ))
    }

    /// Quench kind: `transverse` or `anisotropic`.
    pub fn require_kind(&self, key: &str) -> Result<QuenchKind, CliError> {
        match self.require(key)? {
            "transverse" => Ok(QuenchKind::Transverse),
            "anisotropic" => Ok(QuenchKind::Anisotropic),
            other => Err(self.invalid(
                key,
                format!("`{other}` is not `transverse` or `anisotropic`"),
            )),
        }
    }

    /// Leg order for the two-leg route: `h-first` or `gamma-first`.
    pub fn require_order(&self, key: &str) -> Result<LegOrder, CliError> {
        match self.require(key)? {
            "h-first" => Ok(LegOrder::HFirst),
            "gamma-first" => Ok(LegOrder::GammaFirst),
            other => Err(self.invalid(key, format!("`{other}` is not `h-first` or `gamma-first`"))),
        }
    }
}

/// One sweep axis: a fixed value or an inclusive linear range.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Single(f64),
    Range { values: Vec<f64> },
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Single(v) => vec![*v],
            Self::Range { values } => values.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Single(_) => 1,
            Self::Range { values } => values.len(),
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, Self::Range { .. })
    }
}

fn parse_axis(raw: &str) -> Option<Axis> {
    if let Ok(v) = raw.parse::<f64>() {
        return Some(Axis::Single(v));
    }
    let mut parts = raw.split(':');
    let start: f64 = parts.next()?.trim().parse().ok()?;
    let end: f64 = parts.next()?.trim().parse().ok()?;
    let count: usize = parts.next()?.trim().parse().ok()?;
    if parts.next().is_some() || count < 2 || !start.is_finite() || !end.is_finite() {
        return None;
    }
    Some(Axis::Range {
        values: linspace(start, end, count),
    })
}

/// `count` evenly spaced points with exact endpoints.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let step = (end - start) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                end
            } else {
                start + step * i as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "run.cfg", "h = 0.5\ngamma=0.3 # trailing note\n");
        let mut cfg = RunConfig::new("quench");
        cfg.defaults(&[("h", "0.1"), ("delta", "0.1")]);
        cfg.load_file(&path).unwrap();
        cfg.set_flag("h", "0.8");
        assert_eq!(cfg.require_f64("h").unwrap(), 0.8);
        assert_eq!(cfg.require_f64("gamma").unwrap(), 0.3);
        assert_eq!(cfg.require_f64("delta").unwrap(), 0.1);
    }

    #[test]
    fn unknown_keys_are_named_with_their_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "run.cfg", "# comment\nh=0.5\ngama=0.5\n");
        let mut cfg = RunConfig::new("quench");
        cfg.load_file(&path).unwrap();
        let err = cfg.validate_keys(&["h", "gamma"]).unwrap_err();
        match err {
            CliError::UnknownKey { key, line } => {
                assert_eq!(key, "gama");
                assert_eq!(line, Some(3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "run.cfg", "h=0.5\njust words\n");
        let mut cfg = RunConfig::new("quench");
        let err = cfg.load_file(&path).unwrap_err();
        assert!(matches!(err, CliError::MalformedLine { line: 2 }));
    }

    #[test]
    fn axis_parses_singles_and_ranges() {
        assert_eq!(parse_axis("0.5"), Some(Axis::Single(0.5)));
        let axis = parse_axis("0:1:5").unwrap();
        assert_eq!(axis.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_axis("0:1").is_none());
        assert!(parse_axis("0:1:1").is_none());
        assert!(parse_axis("a:1:5").is_none());
    }

    #[test]
    fn linspace_hits_both_endpoints_exactly() {
        let xs = linspace(-2.0, 2.0, 401);
        assert_eq!(xs[0], -2.0);
        assert_eq!(*xs.last().unwrap(), 2.0);
        assert_eq!(xs.len(), 401);
        assert!((xs[200]).abs() < 1e-12);
    }

    #[test]
    fn grid_specs_cover_all_three_forms() {
        let mut cfg = RunConfig::new("quench");
        cfg.defaults(&[("grid", "thermo")]);
        assert!(matches!(
            cfg.require_grid("grid").unwrap(),
            MomentumGrid::ThermoLimit { .. }
        ));
        cfg.set_flag("grid", "thermo:1e-8");
        assert!(matches!(
            cfg.require_grid("grid").unwrap(),
            MomentumGrid::ThermoLimit { abs_tol } if abs_tol == 1e-8
        ));
        cfg.set_flag("grid", "finite:1001");
        assert!(matches!(
            cfg.require_grid("grid").unwrap(),
            MomentumGrid::FiniteChain { n: 1001 }
        ));
        cfg.set_flag("grid", "finite:1000");
        assert!(cfg.require_grid("grid").is_err());
        cfg.set_flag("grid", "mesh");
        assert!(cfg.require_grid("grid").is_err());
    }

    #[test]
    fn missing_keys_are_reported_by_name() {
        let cfg = RunConfig::new("static");
        let err = cfg.require_f64("c1").unwrap_err();
        assert!(matches!(err, CliError::MissingKey { key } if key == "c1"));
    }
}
