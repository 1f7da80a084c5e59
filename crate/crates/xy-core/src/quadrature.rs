//! Globally adaptive Gauss-Kronrod quadrature (7-point Gauss, 15-point
//! Kronrod) for vector-valued integrands.
//!
//! The integrand may fail (a gapless mode, a stencil failure); evaluation
//! short-circuits on the first error. The accepted panels are re-summed in
//! position order with pairwise summation, so the result is independent of
//! the order in which the adaptive loop happened to refine them.

use std::collections::BinaryHeap;

use crate::sum;

/// Default absolute tolerance on the integral.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default cap on the number of panel subdivisions.
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 1 << 16;

/// Positive abscissae of the 15-point Kronrod rule on [-1, 1], ascending from
/// the centre node. Every second entry (indices 0, 2, 4, 6) is also a node of
/// the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

/// Kronrod weights aligned with `XGK`.
const WGK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// Gauss weights for the nodes at `XGK` indices 0, 2, 4, 6.
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome<const M: usize> {
    pub value: [f64; M],
    pub error_estimate: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

/// Why an adaptive integration did not produce a value.
#[derive(Debug)]
pub enum QuadError<E> {
    /// The integrand itself failed at some abscissa.
    Integrand(E),
    /// The subdivision budget ran out (or an interval shrank to roundoff
    /// width) before the tolerance was met.
    DidNotConverge {
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },
}

struct Panel<const M: usize> {
    a: f64,
    b: f64,
    value: [f64; M],
    error: f64,
}

/// Max-heap ordering on the panel error, with the left endpoint as a
/// deterministic tie-break.
struct HeapEntry {
    error: f64,
    a: f64,
    index: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq() && self.a.total_cmp(&other.a).is_eq()
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

/// QUADPACK-style rescaling of the raw Gauss/Kronrod difference into a
/// conservative error estimate.
fn rescale_error(raw: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = raw.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One 15-point Kronrod evaluation of `f` over [a, b].
fn kronrod_panel<const M: usize, E>(
    f: &mut impl FnMut(f64) -> Result<[f64; M], E>,
    a: f64,
    b: f64,
) -> Result<Panel<M>, E> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(centre)?;
    let mut f_lo = [[0.0; M]; 7];
    let mut f_hi = [[0.0; M]; 7];
    for i in 1..8 {
        let off = half * XGK[i];
        f_lo[i - 1] = f(centre - off)?;
        f_hi[i - 1] = f(centre + off)?;
    }

    let mut value = [0.0; M];
    let mut raw = [0.0; M];
    let mut res_abs = [0.0; M];
    for j in 0..M {
        let mut kron = WGK[0] * fc[j];
        let mut gauss = WG[0] * fc[j];
        let mut abs_acc = WGK[0] * fc[j].abs();
        for i in 1..8 {
            let pair = f_lo[i - 1][j] + f_hi[i - 1][j];
            kron += WGK[i] * pair;
            abs_acc += WGK[i] * (f_lo[i - 1][j].abs() + f_hi[i - 1][j].abs());
            if i % 2 == 0 {
                gauss += WG[i / 2] * pair;
            }
        }
        value[j] = kron * half;
        raw[j] = (kron - gauss) * half;
        res_abs[j] = abs_acc * half.abs();
    }

    let mut error = 0.0f64;
    for j in 0..M {
        let mean = value[j] / (b - a);
        let mut asc = WGK[0] * (fc[j] - mean).abs();
        for i in 1..8 {
            asc += WGK[i] * ((f_lo[i - 1][j] - mean).abs() + (f_hi[i - 1][j] - mean).abs());
        }
        let res_asc = asc * half.abs();
        error = error.max(rescale_error(raw[j], res_abs[j], res_asc));
    }

    Ok(Panel {
        a,
        b,
        value,
        error,
    })
}

/// Integrate `f` over [a, b] to the requested absolute tolerance.
pub fn integrate_vec<const M: usize, E, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadOutcome<M>, QuadError<E>>
where
    F: FnMut(f64) -> Result<[f64; M], E>,
{
    let span = (b - a).abs();
    let min_width = span * 1e-14;

    let mut panels: Vec<Panel<M>> = Vec::new();
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    let mut evaluations = 15usize;
    let mut subdivisions = 0usize;

    let first = kronrod_panel(&mut f, a, b).map_err(QuadError::Integrand)?;
    heap.push(HeapEntry {
        error: first.error,
        a: first.a,
        index: 0,
    });
    panels.push(first);

    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        if total_error <= abs_tol {
            break;
        }
        let worst = heap.pop().expect("heap tracks every live panel");
        let (wa, wb) = {
            let p = &panels[worst.index];
            (p.a, p.b)
        };
        if subdivisions >= max_subdivisions || (wb - wa).abs() <= min_width {
            return Err(QuadError::DidNotConverge {
                achieved: total_error,
                requested: abs_tol,
                subdivisions,
            });
        }
        let mid = 0.5 * (wa + wb);
        let left = kronrod_panel(&mut f, wa, mid).map_err(QuadError::Integrand)?;
        let right = kronrod_panel(&mut f, mid, wb).map_err(QuadError::Integrand)?;
        evaluations += 30;
        subdivisions += 1;

        heap.push(HeapEntry {
            error: left.error,
            a: left.a,
            index: worst.index,
        });
        panels[worst.index] = left;
        heap.push(HeapEntry {
            error: right.error,
            a: right.a,
            index: panels.len(),
        });
        panels.push(right);
    }

    // Deterministic reduction: order panels by position, then pairwise-sum
    // each component.
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = [0.0; M];
    let mut scratch = Vec::with_capacity(panels.len());
    for (j, slot) in value.iter_mut().enumerate() {
        scratch.clear();
        scratch.extend(panels.iter().map(|p| p.value[j]));
        *slot = sum::pairwise_sum(&scratch);
    }
    let error_estimate = panels.iter().map(|p| p.error).sum();

    Ok(QuadOutcome {
        value,
        error_estimate,
        evaluations,
        subdivisions,
    })
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<E, F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadOutcome<1>, QuadError<E>>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    integrate_vec(move |k| f(k).map(|v| [v]), a, b, abs_tol, max_subdivisions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::convert::Infallible;
    use std::f64::consts::PI;

    fn run(f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> QuadOutcome<1> {
        let mut f = f;
        integrate(
            |k| Ok::<f64, Infallible>(f(k)),
            a,
            b,
            tol,
            DEFAULT_MAX_SUBDIVISIONS,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_is_exact() {
        // A single 15-point panel integrates degree-22 polynomials exactly.
        let out = run(|x| x.powi(5) - 3.0 * x.powi(3) + x, 0.0, 2.0, 1e-12);
        let exact = 64.0 / 6.0 - 3.0 * 4.0 + 2.0;
        assert_relative_eq!(out.value[0], exact, max_relative = 1e-14);
        assert_eq!(out.subdivisions, 0);
    }

    #[test]
    fn oscillatory_integrand_converges() {
        let out = run(|x| (40.0 * x).sin(), 0.0, PI, 1e-12);
        let exact = (1.0 - (40.0 * PI).cos()) / 40.0;
        assert_relative_eq!(out.value[0], exact, epsilon = 1e-11);
    }

    #[test]
    fn near_singular_endpoint_converges() {
        // Integrable inverse square root singularity at 0.
        let out = run(|x| 1.0 / x.sqrt().max(1e-300), 1e-12, 1.0, 1e-9);
        assert_relative_eq!(out.value[0], 2.0 * (1.0 - 1e-6), epsilon = 1e-7);
    }

    #[test]
    fn budget_exhaustion_reports_failure() {
        let res = integrate(
            |x: f64| Ok::<f64, Infallible>(1.0 / (x - 0.5).abs().max(1e-300)),
            0.0,
            1.0,
            1e-10,
            24,
        );
        match res {
            Err(QuadError::DidNotConverge { subdivisions, .. }) => assert!(subdivisions <= 24),
            other => panic!("expected DidNotConverge, got {other:?}"),
        }
    }

    #[test]
    fn integrand_error_short_circuits() {
        #[derive(Debug, PartialEq)]
        struct Boom;
        let res = integrate(
            |x: f64| if x > 0.9 { Err(Boom) } else { Ok(x) },
            0.0,
            1.0,
            1e-10,
            DEFAULT_MAX_SUBDIVISIONS,
        );
        assert!(matches!(res, Err(QuadError::Integrand(Boom))));
    }

    #[test]
    fn vector_components_match_scalar_runs() {
        let out = integrate_vec(
            |x| Ok::<[f64; 2], Infallible>([x.cos(), x * x]),
            0.0,
            1.0,
            1e-12,
            DEFAULT_MAX_SUBDIVISIONS,
        )
        .unwrap();
        assert_relative_eq!(out.value[0], 1.0f64.sin(), epsilon = 1e-13);
        assert_relative_eq!(out.value[1], 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn result_is_deterministic() {
        let f = |x: f64| (x * 37.0).sin() / (1.0 + x * x);
        let a = run(f, 0.0, PI, 1e-11);
        let b = run(f, 0.0, PI, 1e-11);
        assert_eq!(a.value[0].to_bits(), b.value[0].to_bits());
    }
}
