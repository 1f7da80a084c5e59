//! Metric fields over the (t, h) plane and the registry that selects one
//! by name at run time.

use crate::error::GeodesicError;
use xy_core::{ModelParams, MomentumGrid, QuenchSpec};
use xy_metric::{qim_closed, qim_sum, Coords, Metric2D, Regime};

/// Determinant magnitude below which the metric counts as singular.
pub const DET_FLOOR: f64 = 1e-12;

/// Coordinate box a field is defined on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub t_min: f64,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl Domain {
    pub fn contains(&self, t: f64, x: f64) -> bool {
        t >= self.t_min && t <= self.t_max && x >= self.x_min && x <= self.x_max
    }
}

/// A metric evaluator on the (t, coupling) plane, total on its domain away
/// from masked points.
pub trait MetricField: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, t: f64, x: f64) -> Result<Metric2D, GeodesicError>;
    fn domain(&self) -> Domain;
    /// Points where geodesic integration may proceed. The default accepts
    /// any invertible metric; fields that are Riemannian only on a patch
    /// tighten this to positive definiteness.
    fn admissible(&self, t: f64, x: f64) -> bool {
        match self.evaluate(t, x) {
            Ok(m) => m.det().abs() > DET_FLOOR,
            Err(_) => false,
        }
    }
}

/// Oscillatory near-quench closed form of a transverse quench, evaluated at
/// running base field h. Indefinite for t > 0, so admissibility asks only
/// for invertibility.
pub struct SmallTimeField {
    gamma: f64,
    quench: QuenchSpec,
}

impl SmallTimeField {
    pub fn new(gamma: f64, delta: f64) -> Result<Self, GeodesicError> {
        if !gamma.is_finite() {
            return Err(GeodesicError::InvalidField {
                reason: "anisotropy must be finite",
            });
        }
        let quench = QuenchSpec::transverse(delta).map_err(|_| GeodesicError::InvalidField {
            reason: "quench size must be finite",
        })?;
        Ok(Self { gamma, quench })
    }
}

impl MetricField for SmallTimeField {
    fn name(&self) -> &'static str {
        "small-time"
    }

    fn evaluate(&self, t: f64, x: f64) -> Result<Metric2D, GeodesicError> {
        let p = ModelParams::new(x, self.gamma).map_err(xy_metric::MetricError::from)?;
        Ok(qim_closed(p, self.quench, t, Regime::SmallTime, Coords::TimeField)?)
    }

    fn domain(&self) -> Domain {
        Domain {
            t_min: 0.0,
            t_max: 1e9,
            x_min: -1.0,
            x_max: 1.0,
        }
    }
}

/// Dephased secular closed form of a transverse quench. Defined inside
/// |h| < 1 and Riemannian only where the coupling block is positive, so the
/// mask demands positive definiteness.
pub struct LargeTimeField {
    gamma: f64,
    quench: QuenchSpec,
}

impl LargeTimeField {
    pub fn new(gamma: f64, delta: f64) -> Result<Self, GeodesicError> {
        if !gamma.is_finite() || gamma == 0.0 {
            return Err(GeodesicError::InvalidField {
                reason: "the dephased closed form needs a nonzero finite anisotropy",
            });
        }
        let quench = QuenchSpec::transverse(delta).map_err(|_| GeodesicError::InvalidField {
            reason: "quench size must be finite",
        })?;
        Ok(Self { gamma, quench })
    }
}

impl MetricField for LargeTimeField {
    fn name(&self) -> &'static str {
        "large-time"
    }

    fn evaluate(&self, t: f64, x: f64) -> Result<Metric2D, GeodesicError> {
        let p = ModelParams::new(x, self.gamma).map_err(xy_metric::MetricError::from)?;
        Ok(qim_closed(p, self.quench, t, Regime::LargeTime, Coords::TimeField)?)
    }

    fn domain(&self) -> Domain {
        Domain {
            t_min: 0.0,
            t_max: 1e9,
            x_min: -1.0,
            x_max: 1.0,
        }
    }

    fn admissible(&self, t: f64, x: f64) -> bool {
        match self.evaluate(t, x) {
            Ok(m) => m.det().abs() > DET_FLOOR && m.is_positive_definite(),
            Err(_) => false,
        }
    }
}

/// Mode-summed metric of the evolved state on a momentum grid. The full
/// metric, static part included; the closed fields above use conventions of
/// their regimes, so compare like with like.
pub struct NumericField {
    gamma: f64,
    quench: QuenchSpec,
    grid: MomentumGrid,
}

impl NumericField {
    pub fn new(gamma: f64, delta: f64, grid: MomentumGrid) -> Result<Self, GeodesicError> {
        if !gamma.is_finite() {
            return Err(GeodesicError::InvalidField {
                reason: "anisotropy must be finite",
            });
        }
        let quench = QuenchSpec::transverse(delta).map_err(|_| GeodesicError::InvalidField {
            reason: "quench size must be finite",
        })?;
        Ok(Self {
            gamma,
            quench,
            grid,
        })
    }
}

impl MetricField for NumericField {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn evaluate(&self, t: f64, x: f64) -> Result<Metric2D, GeodesicError> {
        let p = ModelParams::new(x, self.gamma).map_err(xy_metric::MetricError::from)?;
        Ok(qim_sum(p, self.quench, t, Coords::TimeField, &self.grid)?)
    }

    fn domain(&self) -> Domain {
        Domain {
            t_min: 0.0,
            t_max: 1e9,
            x_min: -1.0,
            x_max: 1.0,
        }
    }
}

/// Shared inputs the registry hands to field constructors.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub gamma: f64,
    pub delta: f64,
    /// Momentum grid for mode-summed evaluators; closed forms ignore it.
    pub grid: MomentumGrid,
}

impl FieldConfig {
    pub fn new(gamma: f64, delta: f64) -> Self {
        Self {
            gamma,
            delta,
            grid: MomentumGrid::thermo(),
        }
    }
}

type FieldBuilder = fn(&FieldConfig) -> Result<Box<dyn MetricField>, GeodesicError>;

/// Name-indexed collection of metric field constructors; variants are
/// selected at run time by string name.
pub struct FieldRegistry {
    entries: Vec<(&'static str, FieldBuilder)>,
}

impl FieldRegistry {
    /// Registry holding the built-in fields: `small-time`, `large-time`,
    /// and `numeric`.
    pub fn standard() -> Self {
        let mut reg = Self {
            entries: Vec::new(),
        };
        reg.register("small-time", |c| {
            Ok(Box::new(SmallTimeField::new(c.gamma, c.delta)?))
        });
        reg.register("large-time", |c| {
            Ok(Box::new(LargeTimeField::new(c.gamma, c.delta)?))
        });
        reg.register("numeric", |c| {
            Ok(Box::new(NumericField::new(c.gamma, c.delta, c.grid.clone())?))
        });
        reg
    }

    pub fn register(&mut self, name: &'static str, builder: FieldBuilder) {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, builder));
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn build(
        &self,
        name: &str,
        config: &FieldConfig,
    ) -> Result<Box<dyn MetricField>, GeodesicError> {
        match self.entries.iter().find(|(n, _)| *n == name) {
            Some((_, builder)) => builder(config),
            None => Err(GeodesicError::UnknownField {
                name: name.to_owned(),
                known: self.names().join(", "),
            }),
        }
    }
}
