use std::path::PathBuf;
use thiserror::Error;

fn place(line: &Option<usize>) -> String {
    match line {
        Some(l) => format!(" (line {l})"),
        None => " (command line)".to_owned(),
    }
}

/// Front-end failures, split by exit code: configuration problems exit
/// with 2, numerical or output failures with 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown key `{key}`{}", place(line))]
    UnknownKey { key: String, line: Option<usize> },
    #[error("line {line}: expected `key=value`")]
    MalformedLine { line: usize },
    #[error("missing required key `{key}`")]
    MissingKey { key: String },
    #[error("key `{key}`{}: {message}", place(line))]
    InvalidValue {
        key: String,
        line: Option<usize>,
        message: String,
    },
    #[error("{message}")]
    Usage { message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{message}")]
    Compute { message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage {
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for configuration mistakes, 3 for numerical or output failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::UnknownKey { .. }
            | Self::MalformedLine { .. }
            | Self::MissingKey { .. }
            | Self::InvalidValue { .. }
            | Self::Usage { .. } => 2,
            Self::Io { .. } | Self::Compute { .. } => 3,
        }
    }
}

macro_rules! from_compute {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                Self::Compute {
                    message: e.to_string(),
                }
            }
        }
    )*};
}

from_compute!(
    xy_core::CoreError,
    xy_static::StaticError,
    xy_quench::QuenchError,
    xy_metric::MetricError,
    xy_geodesic::GeodesicError,
    xy_scaling::ScalingError
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_split_config_from_compute() {
        let config = CliError::UnknownKey {
            key: "gama".into(),
            line: Some(3),
        };
        assert_eq!(config.exit_code(), 2);
        assert_eq!(CliError::usage("bad figure").exit_code(), 2);
        let compute = CliError::Compute {
            message: "quadrature stalled".into(),
        };
        assert_eq!(compute.exit_code(), 3);
        let io = CliError::io("out.csv", std::io::Error::other("disk full"));
        assert_eq!(io.exit_code(), 3);
    }

    #[test]
    fn messages_carry_key_and_line() {
        let e = CliError::UnknownKey {
            key: "gama".into(),
            line: Some(7),
        };
        let text = e.to_string();
        assert!(text.contains("gama") && text.contains("line 7"), "{text}");
        let e = CliError::UnknownKey {
            key: "gama".into(),
            line: None,
        };
        assert!(e.to_string().contains("command line"));
    }
}
