//! Discrete boundary-limit estimates.
//!
//! The boundary conditions can be phrased as essential limits of
//! `∫∫ Q(t, ξ, u(t, ξ − ρν), u_b) · ν β` as the offset `ρ` shrinks. The
//! near-boundary log stores the field at two fixed offsets; evaluating the
//! weighted integral at each offset and extrapolating linearly to `ρ = 0`
//! realises the limit at field resolution.

use serde::Serialize;

use crate::entropy::BoundaryEntropyPair;
use crate::flux::FluxVec;
use crate::solver::{Field1D, IBVPProblem, Side};
use crate::{CoreError, Result};

use super::ResidualSettings;

/// What to integrate along the boundary.
pub enum BoundaryProbe<'a> {
    /// `Q(t, ξ, u(t, ξ−ρν), u_b(t,ξ)) · ν` for a boundary pair.
    Pair(&'a BoundaryEntropyPair),
    /// The flux-comparison function at fixed `k`.
    FluxComparison { k: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    /// `(offset, integral value)` per logged offset level.
    pub offsets: Vec<(f64, f64)>,
    /// Linear extrapolation of the first two levels to `ρ = 0`.
    pub extrapolated: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Evaluates the β-weighted boundary integral at every logged offset and
/// extrapolates to the boundary.
///
/// `beta` is a nonnegative weight per time and side; time integration is the
/// per-step rule of the field log.
pub fn boundary_limit_check(
    field: &Field1D,
    problem: &IBVPProblem,
    probe: &BoundaryProbe,
    beta: &dyn Fn(f64, Side) -> f64,
    settings: &ResidualSettings,
) -> Result<LimitReport> {
    let offsets = field.trace_offsets().to_vec();
    if offsets.len() < 2 {
        return Err(CoreError::MissingTrace(
            "boundary-limit check needs at least two offset levels".into(),
        ));
    }
    let times = field.times();
    if times.len() < 2 {
        return Err(CoreError::MissingTrace("field needs at least two snapshots".into()));
    }
    let flux = &problem.flux;
    let mut buf = FluxVec::from_elem(0.0, 1);
    let mut values = Vec::with_capacity(offsets.len());
    for (j, &rho) in offsets.iter().enumerate() {
        let mut integral = 0.0;
        for n in 0..times.len() - 1 {
            let dt = times[n + 1] - times[n];
            let t = times[n];
            for side in [Side::Left, Side::Right] {
                let w = beta(t, side);
                if w == 0.0 {
                    continue;
                }
                let xe = side.coordinate(field.domain());
                let nu = side.normal();
                let u_off = field.trace_value(side, n, j);
                let ub = problem.ub(side, t);
                let q_dot_nu = match probe {
                    BoundaryProbe::Pair(pair) => {
                        pair.q_into(t, &[xe], u_off, ub, &mut buf);
                        buf[0] * nu
                    }
                    BoundaryProbe::FluxComparison { k } => crate::boundary::flux_comparison_dot(
                        flux,
                        t,
                        &[xe],
                        u_off,
                        ub,
                        *k,
                        crate::boundary::FluxComparisonForm::Piecewise,
                        &[nu],
                    ),
                };
                integral += q_dot_nu * w * dt;
            }
        }
        values.push((rho, integral));
    }
    let (r1, i1) = values[0];
    let (r2, i2) = values[1];
    let extrapolated = i1 + (i1 - i2) * r1 / (r2 - r1);
    let tolerance = settings.floor();
    Ok(LimitReport { offsets: values, extrapolated, tolerance, pass: extrapolated >= -tolerance })
}
