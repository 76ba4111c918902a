//! Numerical verification of the defining pair properties.
//!
//! Each invariant is probed on quasi-random samples from a declared box; the
//! report records the worst violation per property. Violations are report
//! content, not errors.

use serde::Serialize;

use crate::flux::FluxModel;
use crate::quad::{self, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::sampling::SampleBox;

use super::{BoundaryEntropyPair, EntropyPair};

/// Single verified property.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub max_violation: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Verification report for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub label: String,
    pub checks: Vec<PropertyCheck>,
}

impl PairReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.max_violation).fold(0.0, f64::max)
    }
}

/// Evaluation region for verification.
#[derive(Clone, Debug)]
pub struct VerifyBox {
    pub t_end: f64,
    pub x_box: Vec<(f64, f64)>,
    pub u_bound: f64,
}

impl VerifyBox {
    pub fn unit(space_dim: usize) -> Self {
        Self { t_end: 1.0, x_box: vec![(-1.0, 1.0); space_dim], u_bound: 2.0 }
    }
}

const CONVEXITY_TOL: f64 = 1e-10;
const COMPAT_TOL: f64 = 1e-7;
const DIAGONAL_TOL: f64 = 1e-9;

fn check(name: &str, max_violation: f64, samples: usize, tol: f64) -> PropertyCheck {
    PropertyCheck { name: name.into(), max_violation, samples, pass: max_violation <= tol }
}

/// Verifies convexity of `η` and flux compatibility over `samples`
/// quasi-random draws.
///
/// Compatibility is checked in integral form: for sampled `(t, x, a, b)`,
/// `q(t,x,b) − q(t,x,a)` must equal `∫ₐᵇ η′(λ) ∂ᵤf(t,x,λ) dλ` to quadrature
/// tolerance.
pub fn verify_entropy_pair(
    pair: &EntropyPair,
    flux: &FluxModel,
    samples: usize,
    region: &VerifyBox,
) -> PairReport {
    let dim = flux.space_dim();
    // Dimensions: t, x…, three states for the convexity triple.
    let mut dims = vec![(0.0, region.t_end)];
    dims.extend_from_slice(&region.x_box);
    dims.push((-region.u_bound, region.u_bound));
    dims.push((-region.u_bound, region.u_bound));
    dims.push((0.0, 1.0)); // convexity weight
    let sbox = SampleBox::new(dims);

    let mut convexity = 0.0f64;
    let mut compat = 0.0f64;
    let mut p = Vec::new();
    for i in 0..samples {
        sbox.point(i, &mut p);
        let t = p[0];
        let x = &p[1..1 + dim];
        let (a, b, theta) = (p[1 + dim], p[2 + dim], p[3 + dim]);

        let mid = theta * a + (1.0 - theta) * b;
        let bound = theta * pair.eta(a) + (1.0 - theta) * pair.eta(b);
        convexity = convexity.max(pair.eta(mid) - bound);

        let qa = pair.q_vec(t, x, a);
        let qb = pair.q_vec(t, x, b);
        for j in 0..dim {
            let integral = quad::adaptive_with_breaks(
                |lam| pair.eta_prime(lam) * flux.df_du_vec(t, x, lam)[j],
                a,
                b,
                pair.kink_levels(),
                DEFAULT_ABS_TOL,
                DEFAULT_REL_TOL,
            );
            if let Ok(q) = integral {
                compat = compat.max(((qb[j] - qa[j]) - q.value).abs());
            } else {
                compat = f64::INFINITY;
            }
        }
    }

    PairReport {
        label: pair.label().to_string(),
        checks: vec![
            check("eta convex", convexity, samples, CONVEXITY_TOL),
            check("flux compatibility (integral form)", compat, samples, COMPAT_TOL),
        ],
    }
}

/// Verifies the boundary-pair properties: per-`w` convexity, nonnegativity,
/// first-order vanishing on the diagonal, and integral-form compatibility.
pub fn verify_boundary_pair(
    pair: &BoundaryEntropyPair,
    flux: &FluxModel,
    samples: usize,
    region: &VerifyBox,
) -> PairReport {
    let dim = flux.space_dim();
    let mut dims = vec![(0.0, region.t_end)];
    dims.extend_from_slice(&region.x_box);
    dims.push((-region.u_bound, region.u_bound)); // w
    dims.push((-region.u_bound, region.u_bound)); // a
    dims.push((-region.u_bound, region.u_bound)); // b
    dims.push((0.0, 1.0));
    let sbox = SampleBox::new(dims);

    let mut convexity = 0.0f64;
    let mut nonneg = 0.0f64;
    let mut diag = 0.0f64;
    let mut compat = 0.0f64;
    let mut p = Vec::new();
    for i in 0..samples {
        sbox.point(i, &mut p);
        let t = p[0];
        let x = &p[1..1 + dim];
        let (w, a, b, theta) = (p[1 + dim], p[2 + dim], p[3 + dim], p[4 + dim]);

        let mid = theta * a + (1.0 - theta) * b;
        let bound = theta * pair.h(a, w) + (1.0 - theta) * pair.h(b, w);
        convexity = convexity.max(pair.h(mid, w) - bound);

        nonneg = nonneg.max(-pair.h(a, w));

        diag = diag.max(pair.h(w, w).abs());
        diag = diag.max(pair.dh_dz(w, w).abs());
        let qww = pair.q_vec(t, x, w, w);
        for j in 0..dim {
            diag = diag.max(qww[j].abs());
        }

        let qa = pair.q_vec(t, x, a, w);
        let qb = pair.q_vec(t, x, b, w);
        for j in 0..dim {
            let integral = quad::adaptive_with_breaks(
                |lam| pair.dh_dz(lam, w) * flux.df_du_vec(t, x, lam)[j],
                a,
                b,
                &[w],
                DEFAULT_ABS_TOL,
                DEFAULT_REL_TOL,
            );
            if let Ok(q) = integral {
                compat = compat.max(((qb[j] - qa[j]) - q.value).abs());
            } else {
                compat = f64::INFINITY;
            }
        }
    }

    PairReport {
        label: pair.label().to_string(),
        checks: vec![
            check("z -> H(z,w) convex", convexity, samples, CONVEXITY_TOL),
            check("H nonnegative", nonneg, samples, 0.0),
            check("diagonal vanishing (H, dH, Q)", diag, samples, DIAGONAL_TOL),
            check("flux compatibility (integral form)", compat, samples, COMPAT_TOL),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{kruzkov_pair, quadratic_pair, smoothed_semi_pair, EntropyPair};
    use crate::flux::catalog;
    use crate::sign::Sign;

    #[test]
    fn kruzkov_passes_all_checks() {
        let fl = catalog("burgers").unwrap();
        let pair = kruzkov_pair(&fl, 0.3);
        let report = verify_entropy_pair(&pair, &fl, 200, &VerifyBox::unit(1));
        assert!(report.all_pass(), "{report:?}");
        assert!(report.worst() < 1e-9);
    }

    #[test]
    fn quadratic_passes_all_checks() {
        let fl = catalog("nonautonomous-demo").unwrap();
        let pair = quadratic_pair(&fl, -0.4);
        let report = verify_entropy_pair(&pair, &fl, 100, &VerifyBox::unit(1));
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn corrupted_pair_is_flagged() {
        // η(u) = u³ is not convex on ℝ.
        let fl = catalog("burgers").unwrap();
        let bad = EntropyPair::new(
            "cubic (non-convex)",
            1,
            |u| u * u * u,
            |u| 3.0 * u * u,
            |_, _, _, out| out.fill(0.0),
            |_, _, _| 0.0,
        );
        let report = verify_entropy_pair(&bad, &fl, 200, &VerifyBox::unit(1));
        assert!(!report.all_pass());
        assert!(report.checks[0].max_violation > 0.1, "{report:?}");
    }

    #[test]
    fn smoothed_semi_passes_boundary_checks() {
        let fl = catalog("burgers").unwrap();
        let pair = smoothed_semi_pair(&fl, Sign::Plus, 10).unwrap();
        let report = verify_boundary_pair(&pair, &fl, 150, &VerifyBox::unit(1));
        assert!(report.all_pass(), "{report:?}");
    }
}
