//! Scaling runs over chain length and over the distance to a transition
//! line, with least-squares fits discriminating the competing laws.

use rayon::prelude::*;
use xy_core::{ModelParams, QuenchSpec};

use crate::derive::{dcn_dparam, LambdaSel, TimeRegime, MIN_SIZE};
use crate::error::ScalingError;

/// Derivatives of the total complexity measured across chain lengths at a
/// fixed quench and time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRun {
    pub sizes: Vec<usize>,
    pub lambda_sel: LambdaSel,
    pub base: ModelParams,
    pub quench: QuenchSpec,
    pub t: f64,
    pub regime: TimeRegime,
    pub derivatives: Vec<f64>,
}

impl ScalingRun {
    pub fn measure(
        base: ModelParams,
        quench: QuenchSpec,
        t: f64,
        sizes: &[usize],
        sel: LambdaSel,
        regime: TimeRegime,
    ) -> Result<Self, ScalingError> {
        for (index, &n) in sizes.iter().enumerate() {
            let increasing = index == 0 || sizes[index - 1] < n;
            if n < MIN_SIZE || n % 2 == 0 || !increasing {
                return Err(ScalingError::InvalidSizes { index, n });
            }
        }
        let derivatives = sizes
            .par_iter()
            .map(|&n| dcn_dparam(base, quench, t, n, sel, regime))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            sizes: sizes.to_vec(),
            lambda_sel: sel,
            base,
            quench,
            t,
            regime,
            derivatives,
        })
    }
}

/// Least-squares line of derivative against chain length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_size_scaling(run: &ScalingRun) -> Result<SizeFit, ScalingError> {
    if run.sizes.len() < 4 {
        return Err(ScalingError::InsufficientData {
            got: run.sizes.len(),
            need: 4,
        });
    }
    let xs: Vec<f64> = run.sizes.iter().map(|&n| n as f64).collect();
    let (slope, intercept, r_squared) = linreg(&xs, &run.derivatives);
    Ok(SizeFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Per-site derivatives measured while the quenched coupling walks toward
/// the nearest transition line.
///
/// Each distance `d` places the quenched coupling at `1 - d` (field sweep)
/// or at `d` (anisotropy sweep); the untouched coupling comes from the
/// template point.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalApproach {
    pub distances: Vec<f64>,
    pub scaled: Vec<f64>,
}

impl CriticalApproach {
    pub fn measure(
        template: ModelParams,
        quench: QuenchSpec,
        t: f64,
        n: usize,
        sel: LambdaSel,
        regime: TimeRegime,
        distances: &[f64],
    ) -> Result<Self, ScalingError> {
        for (index, &d) in distances.iter().enumerate() {
            if !d.is_finite() || d <= 0.0 {
                return Err(ScalingError::InvalidDistance { index, value: d });
            }
        }
        let scaled = distances
            .par_iter()
            .map(|&d| {
                let base = match sel {
                    LambdaSel::Field => ModelParams::new(1.0 - d - quench.delta, template.gamma),
                    LambdaSel::Anisotropy => ModelParams::new(template.h, d - quench.delta),
                }?;
                Ok(dcn_dparam(base, quench, t, n, sel, regime)? / n as f64)
            })
            .collect::<Result<Vec<_>, ScalingError>>()?;
        Ok(Self {
            distances: distances.to_vec(),
            scaled,
        })
    }
}

/// The two candidate laws for the near-transition derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Linear,
    Logarithmic,
}

/// Winning law with its line parameters; the loser's goodness is kept for
/// reporting the discrimination margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawFit {
    pub law: Law,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub competing_r_squared: f64,
}

pub fn fit_law(approach: &CriticalApproach) -> Result<LawFit, ScalingError> {
    if approach.distances.len() < 4 {
        return Err(ScalingError::InsufficientData {
            got: approach.distances.len(),
            need: 4,
        });
    }
    let logs: Vec<f64> = approach.distances.iter().map(|d| d.ln()).collect();
    let lin = linreg(&approach.distances, &approach.scaled);
    let log = linreg(&logs, &approach.scaled);
    let (winner, loser, law) = if log.2 > lin.2 {
        (log, lin, Law::Logarithmic)
    } else {
        (lin, log, Law::Linear)
    };
    Ok(LawFit {
        law,
        slope: winner.0,
        intercept: winner.1,
        r_squared: winner.2,
        competing_r_squared: loser.2,
    })
}

pub(crate) fn linreg(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r_squared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use xy_core::CoreError;

    fn synthetic_run(sizes: &[usize], f: impl Fn(f64) -> f64) -> ScalingRun {
        ScalingRun {
            sizes: sizes.to_vec(),
            lambda_sel: LambdaSel::Field,
            base: ModelParams::new(0.8, 0.5).unwrap(),
            quench: QuenchSpec::transverse(0.1).unwrap(),
            t: 1.0,
            regime: TimeRegime::Auto,
            derivatives: sizes.iter().map(|&n| f(n as f64)).collect(),
        }
    }

    #[test]
    fn size_fit_requires_four_points() {
        let run = synthetic_run(&[101, 103, 105], |n| n);
        assert_eq!(
            fit_size_scaling(&run).unwrap_err(),
            ScalingError::InsufficientData { got: 3, need: 4 }
        );
    }

    #[test]
    fn invalid_size_lists_are_rejected() {
        let q = QuenchSpec::transverse(0.1).unwrap();
        let base = ModelParams::new(0.8, 0.5).unwrap();
        for (sizes, index) in [
            (vec![99usize, 101, 103, 105], 0),
            (vec![101, 102, 103, 105], 1),
            (vec![101, 103, 103, 105], 2),
        ] {
            let err = ScalingRun::measure(base, q, 1.0, &sizes, LambdaSel::Field, TimeRegime::Auto)
                .unwrap_err();
            match err {
                ScalingError::InvalidSizes { index: i, .. } => assert_eq!(i, index),
                other => panic!("unexpected {other}"),
            }
        }
    }

    #[test]
    fn distances_must_be_positive() {
        let q = QuenchSpec::transverse(0.1).unwrap();
        let base = ModelParams::new(0.8, 0.5).unwrap();
        let err = CriticalApproach::measure(
            base,
            q,
            0.5,
            101,
            LambdaSel::Field,
            TimeRegime::Auto,
            &[0.1, 0.0],
        )
        .unwrap_err();
        assert_eq!(err, ScalingError::InvalidDistance { index: 1, value: 0.0 });
    }

    #[test]
    fn law_fit_requires_four_points() {
        let a = CriticalApproach {
            distances: vec![0.1, 0.2, 0.3],
            scaled: vec![1.0, 2.0, 3.0],
        };
        assert_eq!(
            fit_law(&a).unwrap_err(),
            ScalingError::InsufficientData { got: 3, need: 4 }
        );
    }

    #[test]
    fn synthetic_log_data_selects_the_logarithmic_law() {
        let distances: Vec<f64> = (1..=8).map(|i| 0.02 * i as f64).collect();
        let scaled: Vec<f64> = distances.iter().map(|d| 2.0 * d.ln() - 0.3).collect();
        let fit = fit_law(&CriticalApproach { distances, scaled }).unwrap();
        assert_eq!(fit.law, Law::Logarithmic);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert!((fit.slope - 2.0).abs() < 1e-10);
        assert!(fit.competing_r_squared < fit.r_squared);
    }

    proptest! {
        #[test]
        fn exactly_linear_input_recovers_slope_one_r2_one(
            a in 0.01f64..10.0,
            b in -5.0f64..5.0,
        ) {
            let run = synthetic_run(&[501, 1001, 2001, 4001], |n| a * n + b);
            let fit = fit_size_scaling(&run).unwrap();
            prop_assert!((fit.slope - a).abs() <= 1e-8 * a);
            prop_assert!((fit.intercept - b).abs() <= 1e-6 * (1.0 + b.abs()));
            prop_assert!(fit.r_squared > 1.0 - 1e-12);
        }

        #[test]
        fn exactly_linear_approach_prefers_the_linear_law(
            a in 0.1f64..10.0,
            b in -5.0f64..5.0,
        ) {
            let distances: Vec<f64> = (1..=8).map(|i| 0.02 * i as f64).collect();
            let scaled: Vec<f64> = distances.iter().map(|d| a * d + b).collect();
            let fit = fit_law(&CriticalApproach { distances, scaled }).unwrap();
            prop_assert_eq!(fit.law, Law::Linear);
            prop_assert!(fit.r_squared > 1.0 - 1e-12);
        }
    }

    #[test]
    fn measure_propagates_compute_errors() {
        let base = ModelParams::new(0.9, 0.5).unwrap();
        let q = QuenchSpec::transverse(0.09995).unwrap();
        let err = ScalingRun::measure(
            base,
            q,
            0.5,
            &[101, 103, 105, 107],
            LambdaSel::Field,
            TimeRegime::Auto,
        )
        .unwrap_err();
        assert!(matches!(err, ScalingError::Core(CoreError::GaplessMode { .. })));
    }
}
