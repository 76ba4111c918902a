//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair drives recursive bisection; the
//! error estimate on each panel is the difference between the two rules.
//! Default tolerances are absolute 1e-10 and relative 1e-8. Callers that know
//! kink locations pass them as break points so panels never straddle them.

use crate::{CoreError, Result};

/// Default absolute tolerance for entropy-flux integrals.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;
/// Default relative tolerance for entropy-flux integrals.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

const MAX_DEPTH: usize = 52;

// Kronrod 15 abscissae on [-1, 1] (non-negative half; symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

// Kronrod 15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss 7 weights; the Gauss nodes are XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64, usize) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(mid - x) + f(mid + x);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs(), 15)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: usize,
}

/// Integrates `f` over `[a, b]` (orientation respected) to the given tolerances.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let (lo, hi, flip) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let q = adaptive_segments(&mut f, &[lo, hi], abs_tol, rel_tol)?;
    Ok(Quadrature { value: flip * q.value, ..q })
}

/// Integrates `f` over `[a, b]` splitting panels at interior `breaks`.
pub fn adaptive_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let (lo, hi, flip) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut edges = vec![lo];
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|c| *c > lo && *c < hi).collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    edges.extend(cuts);
    edges.push(hi);
    let q = adaptive_segments(&mut f, &edges, abs_tol, rel_tol)?;
    Ok(Quadrature { value: flip * q.value, ..q })
}

fn adaptive_segments<F: FnMut(f64) -> f64>(
    f: &mut F,
    edges: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature> {
    let mut stack: Vec<Panel> = Vec::new();
    let mut evals = 0usize;
    for pair in edges.windows(2) {
        let (v, e, n) = gk15(f, pair[0], pair[1]);
        evals += n;
        stack.push(Panel { a: pair[0], b: pair[1], value: v, error: e, depth: 0 });
    }

    loop {
        let total: f64 = stack.iter().map(|p| p.value).sum();
        let error: f64 = stack.iter().map(|p| p.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if error <= tol {
            return Ok(Quadrature { value: total, error_estimate: error, evaluations: evals });
        }
        // Split the worst panel.
        let worst = stack
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let p = stack.swap_remove(worst);
        if p.depth >= MAX_DEPTH || p.b - p.a < f64::EPSILON * (p.b.abs() + p.a.abs() + 1.0) {
            return Err(CoreError::QuadratureNonConvergence {
                a: edges[0],
                b: *edges.last().unwrap(),
                estimate: error,
                tolerance: tol,
                evals,
            });
        }
        let mid = 0.5 * (p.a + p.b);
        for (xa, xb) in [(p.a, mid), (mid, p.b)] {
            let (v, e, n) = gk15(f, xa, xb);
            evals += n;
            stack.push(Panel { a: xa, b: xb, value: v, error: e, depth: p.depth + 1 });
        }
    }
}

/// Vector-valued variant: `f` fills `out` with the integrand components.
///
/// The adaptive partition is shared across components; the error estimate is
/// the component-wise maximum.
pub fn adaptive_vec<F>(
    dim: usize,
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    out: &mut [f64],
) -> Result<f64>
where
    F: FnMut(f64, &mut [f64]),
{
    assert_eq!(out.len(), dim);
    out.fill(0.0);
    if a == b {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    // Reuse the scalar driver per component; panels are cheap at this scale
    // and the shared-partition optimisation is not worth the bookkeeping.
    for j in 0..dim {
        let q = adaptive_with_breaks(
            |z| {
                let mut buf = smallvec::SmallVec::<[f64; 4]>::from_elem(0.0, dim);
                f(z, &mut buf);
                buf[j]
            },
            a,
            b,
            breaks,
            abs_tol,
            rel_tol,
        )?;
        out[j] = q.value;
        worst = worst.max(q.error_estimate);
    }
    Ok(worst)
}

/// Tensor Gauss panel rule on rectangles with 4-way adaptive refinement.
///
/// Used for space-time integrals of closed-form fields. The panel estimate is
/// a 7x7 Gauss product rule; refinement compares it against the sum over the
/// four half-rectangles.
pub fn adaptive_rect<F>(
    mut f: F,
    t_range: (f64, f64),
    x_range: (f64, f64),
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature>
where
    F: FnMut(f64, f64) -> f64,
{
    const G7X: [f64; 7] = [
        -0.949107912342758524526189684047851,
        -0.741531185599394439863864773280788,
        -0.405845151377397166906606412076961,
        0.0,
        0.405845151377397166906606412076961,
        0.741531185599394439863864773280788,
        0.949107912342758524526189684047851,
    ];
    const G7W: [f64; 7] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
        0.381830050505118944950369775488975,
        0.279705391489276667901467771423780,
        0.129484966168869693270611432679082,
    ];

    fn panel<F: FnMut(f64, f64) -> f64>(
        f: &mut F,
        (t0, t1): (f64, f64),
        (x0, x1): (f64, f64),
    ) -> f64 {
        let (ht, hx) = (0.5 * (t1 - t0), 0.5 * (x1 - x0));
        let (mt, mx) = (0.5 * (t0 + t1), 0.5 * (x0 + x1));
        let mut acc = 0.0;
        for (ti, wi) in G7X.iter().zip(G7W) {
            let t = mt + ht * ti;
            let mut row = 0.0;
            for (xj, wj) in G7X.iter().zip(G7W) {
                row += wj * f(t, mx + hx * xj);
            }
            acc += wi * row;
        }
        acc * ht * hx
    }

    struct Cell {
        t: (f64, f64),
        x: (f64, f64),
        value: f64,
        error: f64,
        depth: usize,
    }

    fn refine<F: FnMut(f64, f64) -> f64>(f: &mut F, c: &Cell) -> (f64, [Cell; 4]) {
        let tm = 0.5 * (c.t.0 + c.t.1);
        let xm = 0.5 * (c.x.0 + c.x.1);
        let quads = [
            ((c.t.0, tm), (c.x.0, xm)),
            ((c.t.0, tm), (xm, c.x.1)),
            ((tm, c.t.1), (c.x.0, xm)),
            ((tm, c.t.1), (xm, c.x.1)),
        ];
        let mut sum = 0.0;
        let cells = quads.map(|(tr, xr)| {
            let v = panel(f, tr, xr);
            sum += v;
            Cell { t: tr, x: xr, value: v, error: 0.0, depth: c.depth + 1 }
        });
        (sum, cells)
    }

    let v0 = panel(&mut f, t_range, x_range);
    let mut evals = 49usize;
    let mut stack = vec![Cell { t: t_range, x: x_range, value: v0, error: v0.abs().max(1.0), depth: 0 }];
    const MAX_DEPTH_2D: usize = 11;

    loop {
        let total: f64 = stack.iter().map(|c| c.value).sum();
        let error: f64 = stack.iter().map(|c| c.error).sum();
        let tol = abs_tol.max(rel_tol * total.abs());
        if error <= tol && stack.iter().all(|c| c.depth > 0) {
            return Ok(Quadrature { value: total, error_estimate: error, evaluations: evals });
        }
        let worst = stack
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let c = stack.swap_remove(worst);
        if c.depth >= MAX_DEPTH_2D {
            // Accept the refined value; the leftover estimate is reported.
            let total: f64 = stack.iter().map(|x| x.value).sum::<f64>() + c.value;
            let error: f64 = stack.iter().map(|x| x.error).sum::<f64>() + c.error;
            return Ok(Quadrature { value: total, error_estimate: error, evaluations: evals });
        }
        let (sum, children) = refine(&mut f, &c);
        evals += 4 * 49;
        let defect = (sum - c.value).abs();
        for mut child in children {
            // Distribute the parent defect by share of magnitude.
            child.error = defect * 0.25 + 1e-300;
            stack.push(child);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        // GK15 integrates degree <= 22 exactly on one panel.
        let q = adaptive(|x| x * x * x * x, 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((q.value - 0.2).abs() < 1e-14);
        let q = adaptive(|x| 7.0 * x.powi(6) - 3.0 * x * x, -1.0, 2.0, 1e-12, 1e-12).unwrap();
        assert!((q.value - (129.0 - 9.0)).abs() < 1e-11 * 120.0);
    }

    #[test]
    fn respects_orientation() {
        let fwd = adaptive(|x| x.sin(), 0.0, 2.0, 1e-12, 1e-12).unwrap();
        let bwd = adaptive(|x| x.sin(), 2.0, 0.0, 1e-12, 1e-12).unwrap();
        assert!((fwd.value + bwd.value).abs() < 1e-14);
        assert!((fwd.value - (1.0 - 2.0f64.cos())).abs() < 1e-13);
    }

    #[test]
    fn kinked_integrand_with_breaks() {
        // ∫_{-1}^{1} |x| dx = 1, kink at 0.
        let q = adaptive_with_breaks(|x| x.abs(), -1.0, 1.0, &[0.0], 1e-12, 1e-12).unwrap();
        assert!((q.value - 1.0).abs() < 1e-14);
        // Same without the break: adaptivity still converges.
        let q = adaptive(|x| x.abs(), -1.0, 1.0, 1e-10, 1e-10).unwrap();
        assert!((q.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bump_mass_matches_closed_form() {
        // ∫_{-1}^{1} (1 - s²)³ ds = 32/35, validates the node table.
        let q = adaptive(|s| (1.0 - s * s).powi(3), -1.0, 1.0, 1e-13, 1e-13).unwrap();
        assert!((q.value - 32.0 / 35.0).abs() < 1e-14);
    }

    #[test]
    fn empty_interval_is_zero() {
        let q = adaptive(|_| 1.0, 3.0, 3.0, 1e-12, 1e-12).unwrap();
        assert_eq!(q.value, 0.0);
        assert_eq!(q.evaluations, 0);
    }

    #[test]
    fn vector_integrand() {
        let mut out = [0.0; 2];
        adaptive_vec(
            2,
            |x, o| {
                o[0] = x;
                o[1] = x * x;
            },
            0.0,
            1.0,
            &[],
            1e-12,
            1e-12,
            &mut out,
        )
        .unwrap();
        assert!((out[0] - 0.5).abs() < 1e-14);
        assert!((out[1] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rect_rule_smooth() {
        let q = adaptive_rect(|t, x| (t * x).exp(), (0.0, 1.0), (0.0, 1.0), 1e-12, 1e-10).unwrap();
        // ∫∫ e^{tx} = ∫ (e^t - 1)/t dt ≈ 1.3179021514544038949
        assert!((q.value - 1.3179021514544038949).abs() < 1e-10);
    }

    #[test]
    fn rect_rule_kinked() {
        // ∫_0^1∫_0^1 |x - t| dx dt = 1/3.
        let q = adaptive_rect(|t, x| (x - t).abs(), (0.0, 1.0), (0.0, 1.0), 1e-9, 1e-9).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-8, "got {}", q.value);
    }
}
