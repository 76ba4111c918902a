//! The flux-comparison function `𝓕(t, x, z, w, k)`.
//!
//! Three algebraically identical closed forms are provided; their agreement
//! to near machine precision is one of the crate's checked invariants.
//! `𝓕` vanishes exactly whenever `z` lies between `w` and `k`, and
//! `𝓕(t,ξ,tr u, u_b, k) · ν ≥ 0` for all `k` is one of the equivalent
//! admissibility conditions.

use crate::flux::{FluxModel, FluxVec};
use crate::sign::{sgn, sgn_minus, sgn_plus};

/// Evaluation route for `𝓕`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FluxComparisonForm {
    /// Six-case table in the ordering of `z`, `w`, `k`.
    Piecewise,
    /// `½[sgn(z−w)(f(z)−f(w)) − sgn(k−w)(f(k)−f(w)) + sgn(z−k)(f(z)−f(k))]`.
    SignAverage,
    /// `sgn⁺(z−max)(f(z)−f(max)) + sgn⁻(z−min)(f(z)−f(min))` with
    /// `max/min` of `{w, k}`.
    SemiSign,
}

pub const ALL_FORMS: [FluxComparisonForm; 3] =
    [FluxComparisonForm::Piecewise, FluxComparisonForm::SignAverage, FluxComparisonForm::SemiSign];

/// Evaluates `𝓕(t,x,z,w,k)` into `out`.
pub fn flux_comparison(
    flux: &FluxModel,
    t: f64,
    x: &[f64],
    z: f64,
    w: f64,
    k: f64,
    form: FluxComparisonForm,
    out: &mut [f64],
) {
    let dim = flux.space_dim();
    debug_assert_eq!(out.len(), dim);
    match form {
        FluxComparisonForm::Piecewise => {
            // The two zero rows are returned without touching the flux.
            if (z >= w && z <= k) || (z >= k && z <= w) {
                out.fill(0.0);
                return;
            }
            let (p, q) = if z <= w && w <= k {
                (w, z) // f(w) − f(z)
            } else if w <= k && k <= z {
                (z, k) // f(z) − f(k)
            } else if z <= k && k <= w {
                (k, z) // f(k) − f(z)
            } else {
                debug_assert!(k <= w && w <= z);
                (z, w) // f(z) − f(w)
            };
            let fp = flux.f_vec(t, x, p);
            let fq = flux.f_vec(t, x, q);
            for j in 0..dim {
                out[j] = fp[j] - fq[j];
            }
        }
        FluxComparisonForm::SignAverage => {
            let fz = flux.f_vec(t, x, z);
            let fw = flux.f_vec(t, x, w);
            let fk = flux.f_vec(t, x, k);
            let (szw, skw, szk) = (sgn(z - w), sgn(k - w), sgn(z - k));
            for j in 0..dim {
                out[j] = 0.5
                    * (szw * (fz[j] - fw[j]) - skw * (fk[j] - fw[j]) + szk * (fz[j] - fk[j]));
            }
        }
        FluxComparisonForm::SemiSign => {
            let hi = w.max(k);
            let lo = w.min(k);
            let sp = sgn_plus(z - hi);
            let sm = sgn_minus(z - lo);
            if sp == 0.0 && sm == 0.0 {
                out.fill(0.0);
                return;
            }
            let fz = flux.f_vec(t, x, z);
            let fhi = if sp != 0.0 { flux.f_vec(t, x, hi) } else { FluxVec::new() };
            let flo = if sm != 0.0 { flux.f_vec(t, x, lo) } else { FluxVec::new() };
            for j in 0..dim {
                let mut v = 0.0;
                if sp != 0.0 {
                    v += sp * (fz[j] - fhi[j]);
                }
                if sm != 0.0 {
                    v += sm * (fz[j] - flo[j]);
                }
                out[j] = v;
            }
        }
    }
}

/// `𝓕(t,x,z,w,k) · nu`.
pub fn flux_comparison_dot(
    flux: &FluxModel,
    t: f64,
    x: &[f64],
    z: f64,
    w: f64,
    k: f64,
    form: FluxComparisonForm,
    nu: &[f64],
) -> f64 {
    let mut buf = FluxVec::from_elem(0.0, flux.space_dim());
    flux_comparison(flux, t, x, z, w, k, form, &mut buf);
    buf.iter().zip(nu).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::catalog;
    use proptest::prelude::*;

    #[test]
    fn zero_between_w_and_k() {
        let fl = catalog("burgers").unwrap();
        let mut out = [f64::NAN];
        for form in ALL_FORMS {
            flux_comparison(&fl, 0.0, &[0.0], 0.5, 0.0, 1.0, form, &mut out);
            assert_eq!(out[0], 0.0, "{form:?}");
        }
    }

    #[test]
    fn burgers_case_row() {
        // z = 2, w = 0, k = 1 (w ≤ k ≤ z): f(2) − f(1) = 1.5.
        let fl = catalog("burgers").unwrap();
        let mut out = [0.0];
        for form in ALL_FORMS {
            flux_comparison(&fl, 0.0, &[0.0], 2.0, 0.0, 1.0, form, &mut out);
            assert!((out[0] - 1.5).abs() < 1e-15, "{form:?}: {}", out[0]);
        }
    }

    #[test]
    fn coincident_arguments() {
        let fl = catalog("burgers").unwrap();
        let mut out = [0.0];
        for form in ALL_FORMS {
            flux_comparison(&fl, 0.0, &[0.0], 0.7, 0.7, 0.7, form, &mut out);
            assert_eq!(out[0], 0.0);
        }
    }

    proptest! {
        #[test]
        fn three_forms_agree(
            z in -2.5f64..2.5,
            w in -2.5f64..2.5,
            k in -2.5f64..2.5,
            t in 0.0f64..1.0,
            x in -2.0f64..2.0,
        ) {
            for flux_name in ["burgers", "nonautonomous-demo"] {
                let fl = catalog(flux_name).unwrap();
                let xs = [x];
                let mut a = [0.0];
                let mut b = [0.0];
                let mut c = [0.0];
                flux_comparison(&fl, t, &xs, z, w, k, FluxComparisonForm::Piecewise, &mut a);
                flux_comparison(&fl, t, &xs, z, w, k, FluxComparisonForm::SignAverage, &mut b);
                flux_comparison(&fl, t, &xs, z, w, k, FluxComparisonForm::SemiSign, &mut c);
                prop_assert!((a[0] - b[0]).abs() <= 1e-12);
                prop_assert!((a[0] - c[0]).abs() <= 1e-12);
            }
        }

        #[test]
        fn zero_on_hull_is_exact(
            w in -2.5f64..2.5,
            k in -2.5f64..2.5,
            theta in 0.0f64..1.0,
        ) {
            let fl = catalog("burgers").unwrap();
            let z = theta * w + (1.0 - theta) * k;
            let mut out = [0.0];
            flux_comparison(&fl, 0.0, &[0.0], z, w, k, FluxComparisonForm::Piecewise, &mut out);
            prop_assert_eq!(out[0], 0.0);
        }
    }
}
