//! Godunov numerical flux and the time-stepping loop.

use crate::flux::FluxModel;
use crate::{CoreError, Result};

use super::{cell_averages, Field1D, Grid1D, IBVPProblem, Side};

/// Exact-Riemann scalar Godunov flux:
/// `min_{u ∈ [uL,uR]} f(t,x,u)` for `uL ≤ uR`, `max_{u ∈ [uR,uL]} f` otherwise.
///
/// Extrema are located by a 33-point scan plus golden-section refinement
/// around the best bracket. Consistency `godunov(c,c) = f(c)` is exact.
pub fn godunov_numflux(flux: &FluxModel, t: f64, x_interface: f64, ul: f64, ur: f64) -> f64 {
    debug_assert_eq!(flux.space_dim(), 1);
    if ul == ur {
        return flux.f1(t, x_interface, ul);
    }
    let minimise = ul < ur;
    let (lo, hi) = if minimise { (ul, ur) } else { (ur, ul) };
    let eval = |u: f64| {
        let v = flux.f1(t, x_interface, u);
        if minimise {
            v
        } else {
            -v
        }
    };

    const SCAN: usize = 33;
    let mut best_i = 0;
    let mut best_v = f64::INFINITY;
    let node = |i: usize| lo + (hi - lo) * i as f64 / (SCAN - 1) as f64;
    for i in 0..SCAN {
        let v = eval(node(i));
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    // Refine inside the bracketing neighbours by golden-section search.
    let mut a = node(best_i.saturating_sub(1));
    let mut b = node((best_i + 1).min(SCAN - 1));
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    for _ in 0..60 {
        if b - a < 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = eval(d);
        }
    }
    let refined = fc.min(fd).min(best_v);
    if minimise {
        refined
    } else {
        -refined
    }
}

/// Sup of |∂ᵤf| over the current state range and the domain (coarse grid).
fn wave_speed_bound(flux: &FluxModel, t: f64, domain: (f64, f64), u_lo: f64, u_hi: f64) -> f64 {
    let mut sup = 0.0f64;
    const NU: usize = 65;
    const NX: usize = 9;
    for ix in 0..NX {
        let x = domain.0 + (domain.1 - domain.0) * ix as f64 / (NX - 1) as f64;
        for iu in 0..NU {
            let u = if u_hi > u_lo {
                u_lo + (u_hi - u_lo) * iu as f64 / (NU - 1) as f64
            } else {
                u_lo
            };
            sup = sup.max(flux.df1(t, x, u).abs());
        }
    }
    sup
}

/// Runs the scheme to the problem horizon.
///
/// Ghost cells carry the boundary data at the current time; the CFL step is
/// recomputed every step from the current field range (data included). The
/// returned field logs boundary-adjacent values at every step and records the
/// worst per-step conservation defect.
pub fn solve(problem: &IBVPProblem, grid: Grid1D) -> Result<Field1D> {
    let (a, b) = problem.domain;
    let m = grid.cells;
    let dx = (b - a) / m as f64;
    let flux = &problem.flux;

    let mut u = cell_averages(&|x| problem.u0(x), a, dx, m);
    let blow_up_limit = 1e3 * problem.data_bound().max(1e-6);

    let mut field = Field1D::empty(a, b, m);
    field.push_snapshot(0.0, &u);

    let mut fluxes = vec![0.0; m + 1];
    let mut t = 0.0;
    while t < problem.horizon - 1e-14 * problem.horizon {
        let gl = problem.ub(Side::Left, t);
        let gr = problem.ub(Side::Right, t);
        let (mut lo, mut hi) = (gl.min(gr), gl.max(gr));
        for &v in &u {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let speed = wave_speed_bound(flux, t, problem.domain, lo, hi);
        let dt_cfl = if speed > 0.0 { grid.cfl * dx / speed } else { problem.horizon - t };
        let dt = dt_cfl.min(problem.horizon - t);
        if !(dt > 1e-14 * problem.horizon) {
            return Err(CoreError::CflUnderflow { t, dt });
        }

        for i in 0..=m {
            let x_if = a + i as f64 * dx;
            let ul = if i == 0 { gl } else { u[i - 1] };
            let ur = if i == m { gr } else { u[i] };
            fluxes[i] = godunov_numflux(flux, t, x_if, ul, ur);
        }

        let mass_before: f64 = u.iter().sum::<f64>() * dx;
        let lambda = dt / dx;
        for i in 0..m {
            u[i] -= lambda * (fluxes[i + 1] - fluxes[i]);
        }
        // First-order splitting for the source term.
        let mut source_mass = 0.0;
        for i in 0..m {
            let x = a + (i as f64 + 0.5) * dx;
            let s = flux.source(t, &[x], u[i]);
            u[i] += dt * s;
            source_mass += s * dx;
        }
        let mass_after: f64 = u.iter().sum::<f64>() * dx;
        let expected = mass_before - dt * (fluxes[m] - fluxes[0]) + dt * source_mass;
        let scale = mass_after.abs().max(mass_before.abs()).max(1.0);
        field.conservation_defect =
            field.conservation_defect.max((mass_after - expected).abs() / scale);

        for &v in &u {
            if !v.is_finite() || v.abs() > blow_up_limit {
                return Err(CoreError::BlowUp { t, magnitude: v.abs(), limit: blow_up_limit });
            }
        }

        t += dt;
        field.push_snapshot(t, &u);
    }
    Ok(field)
}
