//! Entropy–entropy flux pairs.
//!
//! An [`EntropyPair`] `(η, q)` couples a convex entropy with a flux that is
//! compatible with the balance-law flux: `∂ᵤq(t,x,z) = η′(z) ∂ᵤf(t,x,z)`.
//! A [`BoundaryEntropyPair`] `(H, Q)` is the two-argument analogue vanishing
//! to first order on the diagonal: `H(w,w) = 0`, `∂₁H(w,w) = 0`,
//! `Q(t,x,w,w) = 0`, with `z ↦ H(z,w)` convex (hence `H ≥ 0`).
//!
//! [`families`] provides the Kruzhkov and semi-Kruzhkov pairs, the smoothed
//! approximating sequences that connect Lipschitz and smooth entropies, the
//! interval-distance family, and the clipped-and-mollified shift family.
//! [`verify`] runs the defining properties numerically over sample boxes.

pub mod families;
pub mod verify;

use std::fmt;
use std::sync::Arc;

use crate::flux::FluxVec;

pub use families::{
    distance_pair_family, kruzkov_pair, quadratic_pair, semi_kruzkov_pair, shifted_pair_family,
    shifted_pair_limit, smooth_abs_family, smoothed_semi_pair,
};
pub use verify::{verify_boundary_pair, verify_entropy_pair, PairReport, PropertyCheck};

type EtaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type QFn = Arc<dyn Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync>;
type DivQFn = Arc<dyn Fn(f64, &[f64], f64) -> f64 + Send + Sync>;
type HFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type BQFn = Arc<dyn Fn(f64, &[f64], f64, f64, &mut [f64]) + Send + Sync>;
type BDivQFn = Arc<dyn Fn(f64, &[f64], f64, f64) -> f64 + Send + Sync>;

/// Classical entropy–entropy flux pair `(η, q)`.
#[derive(Clone)]
pub struct EntropyPair {
    label: String,
    space_dim: usize,
    eta: EtaFn,
    eta_prime: EtaFn,
    q: QFn,
    div_q: DivQFn,
    /// States where `η′` is discontinuous or kinked; quadrature split hints.
    kinks: Vec<f64>,
}

impl fmt::Debug for EntropyPair {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(w, "EntropyPair({})", self.label)
    }
}

impl EntropyPair {
    pub fn new(
        label: impl Into<String>,
        space_dim: usize,
        eta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        eta_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64, &[f64], f64, &mut [f64]) + Send + Sync + 'static,
        div_q: impl Fn(f64, &[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            space_dim,
            eta: Arc::new(eta),
            eta_prime: Arc::new(eta_prime),
            q: Arc::new(q),
            div_q: Arc::new(div_q),
            kinks: Vec::new(),
        }
    }

    pub fn with_kinks(mut self, kinks: Vec<f64>) -> Self {
        self.kinks = kinks;
        self
    }

    pub fn kink_levels(&self) -> &[f64] {
        &self.kinks
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn eta(&self, z: f64) -> f64 {
        (self.eta)(z)
    }

    pub fn eta_prime(&self, z: f64) -> f64 {
        (self.eta_prime)(z)
    }

    pub fn q_into(&self, t: f64, x: &[f64], u: f64, out: &mut [f64]) {
        (self.q)(t, x, u, out)
    }

    pub fn q_vec(&self, t: f64, x: &[f64], u: f64) -> FluxVec {
        let mut out = FluxVec::from_elem(0.0, self.space_dim);
        self.q_into(t, x, u, &mut out);
        out
    }

    /// `q(t,x,u) · nu`.
    pub fn q_dot(&self, t: f64, x: &[f64], u: f64, nu: &[f64]) -> f64 {
        self.q_vec(t, x, u).iter().zip(nu).map(|(a, b)| a * b).sum()
    }

    pub fn div_q(&self, t: f64, x: &[f64], u: f64) -> f64 {
        (self.div_q)(t, x, u)
    }
}

/// Boundary entropy–entropy flux pair `(H, Q)`.
#[derive(Clone)]
pub struct BoundaryEntropyPair {
    label: String,
    space_dim: usize,
    h: HFn,
    dh_dz: HFn,
    q: BQFn,
    div_q: BDivQFn,
}

impl fmt::Debug for BoundaryEntropyPair {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(w, "BoundaryEntropyPair({})", self.label)
    }
}

impl BoundaryEntropyPair {
    pub fn new(
        label: impl Into<String>,
        space_dim: usize,
        h: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        dh_dz: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64, &[f64], f64, f64, &mut [f64]) + Send + Sync + 'static,
        div_q: impl Fn(f64, &[f64], f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            space_dim,
            h: Arc::new(h),
            dh_dz: Arc::new(dh_dz),
            q: Arc::new(q),
            div_q: Arc::new(div_q),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn h(&self, z: f64, w: f64) -> f64 {
        (self.h)(z, w)
    }

    pub fn dh_dz(&self, z: f64, w: f64) -> f64 {
        (self.dh_dz)(z, w)
    }

    pub fn q_into(&self, t: f64, x: &[f64], z: f64, w: f64, out: &mut [f64]) {
        (self.q)(t, x, z, w, out)
    }

    pub fn q_vec(&self, t: f64, x: &[f64], z: f64, w: f64) -> FluxVec {
        let mut out = FluxVec::from_elem(0.0, self.space_dim);
        self.q_into(t, x, z, w, &mut out);
        out
    }

    /// `Q(t,x,z,w) · nu`.
    pub fn q_dot(&self, t: f64, x: &[f64], z: f64, w: f64, nu: &[f64]) -> f64 {
        self.q_vec(t, x, z, w).iter().zip(nu).map(|(a, b)| a * b).sum()
    }

    pub fn div_q(&self, t: f64, x: &[f64], z: f64, w: f64) -> f64 {
        (self.div_q)(t, x, z, w)
    }

    /// The classical pair `z ↦ (H(z,w₀), Q(t,x,z,w₀))` at frozen second slot.
    pub fn freeze(&self, w0: f64) -> EntropyPair {
        let h = Arc::clone(&self.h);
        let dh = Arc::clone(&self.dh_dz);
        let q = Arc::clone(&self.q);
        let dq = Arc::clone(&self.div_q);
        EntropyPair {
            label: format!("{}|w={}", self.label, w0),
            space_dim: self.space_dim,
            eta: Arc::new(move |z| h(z, w0)),
            eta_prime: Arc::new(move |z| dh(z, w0)),
            q: Arc::new(move |t, x: &[f64], u, out: &mut [f64]| q(t, x, u, w0, out)),
            div_q: Arc::new(move |t, x: &[f64], u| dq(t, x, u, w0)),
            kinks: vec![w0],
        }
    }
}
