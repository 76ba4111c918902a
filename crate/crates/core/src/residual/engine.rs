//! Shared quadrature machinery for the definition residuals.
//!
//! Interior space-time terms have the shape
//! `∫∫ [A(u) ∂ₜφ + B(t,x,u) ∂ₓφ + C(t,x,u) φ] dx dt`. On discrete fields the
//! field factors are frozen per space-time rectangle (cell × step, value at
//! the rectangle centre for the explicit `(t,x)` dependence) while the
//! test-function factors are integrated in closed form; the `∂ₜ`/`∂ₓ` factors
//! telescope, so compatible constant fields yield exact zeros. On
//! candidate-backed fields all terms are integrated adaptively against the
//! closed form, with kink levels split by bisection.

use std::collections::BTreeMap;

use crate::quad;
use crate::solver::{extract_trace, Field1D, IBVPProblem, Side, TraceSeries};
use crate::{CoreError, Result};

use super::TestFunction;

/// Interior integrand coefficients for one definition/entropy/state.
pub(crate) struct InteriorSpec<'a> {
    /// Multiplies `∂ₜφ`.
    pub coef_dt: &'a (dyn Fn(f64, f64, f64) -> f64 + Sync),
    /// Multiplies `∂ₓφ`.
    pub coef_dx: &'a (dyn Fn(f64, f64, f64) -> f64 + Sync),
    /// Multiplies `φ`.
    pub coef_zero: &'a (dyn Fn(f64, f64, f64) -> f64 + Sync),
    /// States where the coefficients kink as functions of `u`.
    pub kinks: &'a [f64],
    /// Whether the coefficients depend on `(t, x)` only through `u`
    /// (autonomous flux and pairs built from it).
    pub autonomous: bool,
}

pub(crate) struct TermValue {
    pub value: f64,
    pub error: f64,
}

/// Validates that the test function is usable on this field: it must vanish
/// at the final time unless flagged terminal, and must overlap the domain.
pub(crate) fn validate_support(
    field: &Field1D,
    phi: &TestFunction,
    allow_terminal: bool,
) -> Result<()> {
    let t_end = field.final_time();
    let ((t0, t1), (x0, x1)) = phi.support();
    if t1 <= 0.0 || t0 >= t_end + 1e-12 {
        return Err(CoreError::SupportMismatch(format!(
            "test function '{}' has time support [{t0}, {t1}] outside the field horizon [0, {t_end}]",
            phi.id
        )));
    }
    let (a, b) = field.domain();
    if x1 <= a || x0 >= b {
        return Err(CoreError::SupportMismatch(format!(
            "test function '{}' has spatial support [{x0}, {x1}] outside the domain [{a}, {b}]",
            phi.id
        )));
    }
    if !phi.vanishes_at_time(t_end) && !(allow_terminal && phi.terminal) {
        return Err(CoreError::SupportMismatch(format!(
            "test function '{}' does not vanish at the final time {t_end}; \
             use the terminal variant where supported",
            phi.id
        )));
    }
    Ok(())
}

pub(crate) fn interior(field: &Field1D, phi: &TestFunction, spec: &InteriorSpec) -> TermValue {
    if let Some(u) = field.candidate() {
        interior_candidate(field, u, phi, spec)
    } else {
        interior_discrete(field, phi, spec)
    }
}

fn interior_discrete(field: &Field1D, phi: &TestFunction, spec: &InteriorSpec) -> TermValue {
    let ((ts0, ts1), (xs0, xs1)) = phi.support();
    let (a, _b) = field.domain();
    let dx = field.dx();
    let m = field.cells();
    let times = field.times();

    // Cell index window intersecting the support.
    let i_lo = (((xs0 - a) / dx).floor().max(0.0)) as usize;
    let i_hi = (((xs1 - a) / dx).ceil() as usize).min(m);
    if i_lo >= i_hi {
        return TermValue { value: 0.0, error: 0.0 };
    }

    let mut value = 0.0;
    // Keyed accumulation per distinct state for autonomous coefficients.
    let mut acc: BTreeMap<u64, (f64, f64, f64)> = BTreeMap::new();

    for n in 0..times.len().saturating_sub(1) {
        let (t0, t1) = (times[n], times[n + 1]);
        if t1 <= ts0 || t0 >= ts1 {
            continue;
        }
        let tmid = 0.5 * (t0 + t1);
        let snap = field.snapshot(n);
        for i in i_lo..i_hi {
            let (xl, xr) = (a + i as f64 * dx, a + (i + 1) as f64 * dx);
            let dphi_t = phi.int_x(t1, xl, xr) - phi.int_x(t0, xl, xr);
            let dphi_x = phi.int_t(xr, t0, t1) - phi.int_t(xl, t0, t1);
            let phi_rect = phi.int_rect(t0, t1, xl, xr);
            if dphi_t == 0.0 && dphi_x == 0.0 && phi_rect == 0.0 {
                continue;
            }
            let u = snap[i];
            if spec.autonomous {
                let slot = acc.entry(u.to_bits()).or_insert((0.0, 0.0, 0.0));
                slot.0 += dphi_t;
                slot.1 += dphi_x;
                slot.2 += phi_rect;
            } else {
                let xc = a + (i as f64 + 0.5) * dx;
                value += (spec.coef_dt)(u, tmid, xc) * dphi_t
                    + (spec.coef_dx)(u, tmid, xc) * dphi_x
                    + (spec.coef_zero)(u, tmid, xc) * phi_rect;
            }
        }
    }
    for (bits, (wt, wx, w0)) in acc {
        let u = f64::from_bits(bits);
        value += (spec.coef_dt)(u, 0.0, 0.0) * wt
            + (spec.coef_dx)(u, 0.0, 0.0) * wx
            + (spec.coef_zero)(u, 0.0, 0.0) * w0;
    }
    // The test-function factors are exact; only rounding remains.
    TermValue { value, error: 1e-14 * value.abs().max(1.0) * 1e-1 }
}

/// Roots of `u(t,·) = level` located by sign scanning plus bisection.
fn level_crossings(
    u: &(dyn Fn(f64, f64) -> f64 + Send + Sync),
    t: f64,
    x0: f64,
    x1: f64,
    levels: &[f64],
    out: &mut Vec<f64>,
) {
    out.clear();
    const SCAN: usize = 48;
    for &k in levels {
        let mut prev_x = x0;
        let mut prev_s = u(t, x0) - k;
        for i in 1..=SCAN {
            let x = x0 + (x1 - x0) * i as f64 / SCAN as f64;
            let s = u(t, x) - k;
            if prev_s == 0.0 {
                out.push(prev_x);
            } else if prev_s * s < 0.0 {
                // Bisect.
                let (mut lo, mut hi, mut slo) = (prev_x, x, prev_s);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let sm = u(t, mid) - k;
                    if sm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if slo * sm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        slo = sm;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_s = s;
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
}

fn interior_candidate(
    field: &Field1D,
    u: &(dyn Fn(f64, f64) -> f64 + Send + Sync),
    phi: &TestFunction,
    spec: &InteriorSpec,
) -> TermValue {
    let ((ts0, ts1), (xs0, xs1)) = phi.support();
    let (a, b) = field.domain();
    let t_end = field.final_time();
    let (t0, t1) = (ts0.max(0.0), ts1.min(t_end));
    let (x0, x1) = (xs0.max(a), xs1.min(b));
    if t0 >= t1 || x0 >= x1 {
        return TermValue { value: 0.0, error: 0.0 };
    }
    let inner = |t: f64| -> f64 {
        let mut local_breaks = Vec::new();
        level_crossings(u, t, x0, x1, spec.kinks, &mut local_breaks);
        quad::adaptive_with_breaks(
            |x| {
                let uu = u(t, x);
                (spec.coef_dt)(uu, t, x) * phi.dt(t, x)
                    + (spec.coef_dx)(uu, t, x) * phi.dx(t, x)
                    + (spec.coef_zero)(uu, t, x) * phi.eval(t, x)
            },
            x0,
            x1,
            &local_breaks,
            1e-12,
            1e-10,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
    };
    match quad::adaptive(inner, t0, t1, 1e-11, 1e-9) {
        Ok(q) => TermValue { value: q.value, error: q.error_estimate },
        Err(_) => TermValue { value: f64::NAN, error: f64::INFINITY },
    }
}

/// `∫ g(u₀(x)) φ(0,x) dx` over the domain.
pub(crate) fn initial_term(
    field: &Field1D,
    problem: &IBVPProblem,
    phi: &TestFunction,
    g: &dyn Fn(f64) -> f64,
) -> TermValue {
    if phi.vanishes_at_time(0.0) {
        return TermValue { value: 0.0, error: 0.0 };
    }
    let (a, b) = field.domain();
    let ((_, _), (xs0, xs1)) = phi.support();
    let (x0, x1) = (xs0.max(a), xs1.min(b));
    if x0 >= x1 {
        return TermValue { value: 0.0, error: 0.0 };
    }
    match quad::adaptive(|x| g(problem.u0(x)) * phi.eval(0.0, x), x0, x1, 1e-12, 1e-10) {
        Ok(q) => TermValue { value: q.value, error: q.error_estimate },
        Err(_) => TermValue { value: f64::NAN, error: f64::INFINITY },
    }
}

/// Terminal-time term `−∫ g(u(T,x)) φ(T,x) dx`.
pub(crate) fn terminal_term(
    field: &Field1D,
    phi: &TestFunction,
    g: &dyn Fn(f64) -> f64,
) -> TermValue {
    let t_end = field.final_time();
    if phi.vanishes_at_time(t_end) {
        return TermValue { value: 0.0, error: 0.0 };
    }
    if let Some(u) = field.candidate() {
        let (a, b) = field.domain();
        match quad::adaptive(|x| g(u(t_end, x)) * phi.eval(t_end, x), a, b, 1e-12, 1e-10) {
            Ok(q) => TermValue { value: -q.value, error: q.error_estimate },
            Err(_) => TermValue { value: f64::NAN, error: f64::INFINITY },
        }
    } else {
        let (a, _) = field.domain();
        let dx = field.dx();
        let snap = field.final_snapshot();
        let mut v = 0.0;
        for (i, &ui) in snap.iter().enumerate() {
            let (xl, xr) = (a + i as f64 * dx, a + (i + 1) as f64 * dx);
            v += g(ui) * phi.int_x(t_end, xl, xr);
        }
        TermValue { value: -v, error: 1e-15 * v.abs().max(1.0) }
    }
}

/// Boundary trace source for the boundary integrals.
pub(crate) enum TraceSource {
    /// No trace needed (datum-only boundary terms).
    None,
    /// Extracted series; values piecewise constant per step.
    Series(TraceSeries),
    /// Exact boundary values of a candidate field.
    Exact,
}

pub(crate) fn trace_source(field: &Field1D, side: Side, needed: bool) -> Result<TraceSource> {
    if !needed {
        return Ok(TraceSource::None);
    }
    if field.candidate().is_some() {
        return Ok(TraceSource::Exact);
    }
    Ok(TraceSource::Series(extract_trace(field, side, true)?))
}

/// `∫₀ᵀ g(t, tr(t), u_b(t)) φ(t, ξ_side) dt` for one end point.
///
/// Discrete fields freeze `g` per step at the step's left stamp and integrate
/// `φ` exactly over the step; candidate fields integrate adaptively.
pub(crate) fn boundary_term(
    field: &Field1D,
    problem: &IBVPProblem,
    phi: &TestFunction,
    side: Side,
    trace: &TraceSource,
    g: &dyn Fn(f64, f64, f64) -> f64,
) -> TermValue {
    let xe = side.coordinate(field.domain());
    let ((ts0, ts1), (xs0, xs1)) = phi.support();
    if xe < xs0 || xe > xs1 {
        return TermValue { value: 0.0, error: 0.0 };
    }
    let t_end = field.final_time();
    match trace {
        TraceSource::Exact => {
            let u = field.candidate().expect("exact trace requires a candidate");
            let (t0, t1) = (ts0.max(0.0), ts1.min(t_end));
            if t0 >= t1 {
                return TermValue { value: 0.0, error: 0.0 };
            }
            match quad::adaptive(
                |t| g(t, u(t, xe), problem.ub(side, t)) * phi.eval(t, xe),
                t0,
                t1,
                1e-12,
                1e-10,
            ) {
                Ok(q) => TermValue { value: q.value, error: q.error_estimate },
                Err(_) => TermValue { value: f64::NAN, error: f64::INFINITY },
            }
        }
        _ => {
            let times = field.times();
            let mut v = 0.0;
            for n in 0..times.len().saturating_sub(1) {
                let (t0, t1) = (times[n], times[n + 1]);
                if t1 <= ts0 || t0 >= ts1 {
                    continue;
                }
                let w = phi.int_t(xe, t0, t1);
                if w == 0.0 {
                    continue;
                }
                let tr = match trace {
                    TraceSource::Series(s) => s.values[n],
                    _ => f64::NAN,
                };
                v += g(times[n], tr, problem.ub(side, times[n])) * w;
            }
            TermValue { value: v, error: 1e-15 * v.abs().max(1.0) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::catalog;
    use crate::solver::{solve, Grid1D};

    fn constant_problem() -> (IBVPProblem, Field1D) {
        let fl = catalog("burgers").unwrap();
        let p = IBVPProblem::new(fl, |_| 1.0, |_| 1.0, |_| -1.0, (0.0, 1.0), 1.0).unwrap();
        let f = solve(&p, Grid1D::new(32, 0.45).unwrap()).unwrap();
        (p, f)
    }

    #[test]
    fn interior_telescopes_to_zero_on_constant_fields() {
        let (_, field) = constant_problem();
        let phi = TestFunction::separable("int", 0.5, 0.3, 0.5, 0.3).unwrap();
        // A(u) = u, B = u², C = 0: for constant u the dt and dx factors
        // telescope over the support to exactly zero.
        let spec = InteriorSpec {
            coef_dt: &|u, _, _| u,
            coef_dx: &|u, _, _| u * u,
            coef_zero: &|_, _, _| 0.0,
            kinks: &[],
            autonomous: true,
        };
        let term = interior(&field, &phi, &spec);
        assert!(term.value.abs() < 1e-15, "value = {}", term.value);
    }

    #[test]
    fn interior_boundary_touching_bump_reduces_to_time_integral() {
        let (_, field) = constant_problem();
        // Support sticks out at the right end point: the dx factor telescopes
        // to the boundary line integral of φ.
        let phi = TestFunction::separable("bdry", 0.5, 0.3, 1.0, 0.25).unwrap();
        let spec = InteriorSpec {
            coef_dt: &|_, _, _| 0.0,
            coef_dx: &|_, _, _| 1.0,
            coef_zero: &|_, _, _| 0.0,
            kinks: &[],
            autonomous: true,
        };
        let term = interior(&field, &phi, &spec);
        let expect = quad::adaptive(|t| phi.eval(t, 1.0), 0.2, 0.8, 1e-13, 1e-13).unwrap().value;
        assert!((term.value - expect).abs() < 1e-12, "{} vs {expect}", term.value);
    }

    #[test]
    fn support_validation() {
        let (_, field) = constant_problem();
        let late = TestFunction::separable("late", 1.2, 0.1, 0.5, 0.2).unwrap();
        assert!(validate_support(&field, &late, false).is_err());
        let spans_end = TestFunction::separable("spans", 1.0, 0.2, 0.5, 0.2).unwrap();
        assert!(validate_support(&field, &spans_end, false).is_err());
        let terminal = spans_end.with_terminal(true);
        assert!(validate_support(&field, &terminal, true).is_ok());
        let ok = TestFunction::separable("ok", 0.5, 0.3, 0.5, 0.2).unwrap();
        assert!(validate_support(&field, &ok, false).is_ok());
    }

    #[test]
    fn candidate_interior_matches_discrete_on_smooth_data() {
        // Same constant field, one discrete and one candidate-backed.
        let discrete = Field1D::from_samples((0.0, 1.0), 16, vec![0.0, 0.5, 1.0], vec![vec![0.7; 16]; 3]).unwrap();
        let candidate = Field1D::from_candidate(|_, _| 0.7, (0.0, 1.0), 1.0, 16, 2).unwrap();
        let phi = TestFunction::separable("int", 0.5, 0.25, 0.5, 0.25).unwrap();
        let spec = InteriorSpec {
            coef_dt: &|u, _, _| u * u,
            coef_dx: &|u, _, _| u,
            coef_zero: &|u, _, _| u,
            kinks: &[],
            autonomous: true,
        };
        let a = interior(&discrete, &phi, &spec);
        let b = interior(&candidate, &phi, &spec);
        assert!((a.value - b.value).abs() < 1e-9, "{} vs {}", a.value, b.value);
    }
}
