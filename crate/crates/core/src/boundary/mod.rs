//! Pointwise boundary admissibility.
//!
//! Whether a boundary trace/datum pair is admissible can be phrased in
//! several equivalent ways: the BLN inequality over the interval spanned by
//! trace and datum, a sign-difference form over all states, nonnegativity of
//! the flux-comparison function along the outward normal, the Dubois–LeFloch
//! entropy-pair inequality, and a zero-entropy form using entropies vanishing
//! at the datum. [`checks`] implements each as an executable verdict;
//! [`sweep`] cross-checks that they agree on random samples.

pub mod checks;
pub mod fcomp;
pub mod sweep;

use serde::Serialize;

use crate::{CoreError, Result};

pub use checks::{
    check_bln, check_dubois_lefloch, check_flux_comparison, check_sign_form, check_strong_bc,
    check_zero_entropy, default_dubois_family, illustrative_dubois_family, CheckSettings,
};
pub use fcomp::{flux_comparison, flux_comparison_dot, FluxComparisonForm};
pub use sweep::{equivalence_sweep, SweepOptions, SweepReport};

/// Everything a pointwise admissibility check consumes: a boundary point, the
/// unit outward normal, the solution trace and the boundary datum there.
#[derive(Clone, Debug, Serialize)]
pub struct BoundarySample {
    pub t: f64,
    pub xi: Vec<f64>,
    pub nu: Vec<f64>,
    pub trace_u: f64,
    pub datum_ub: f64,
}

impl BoundarySample {
    pub fn new(t: f64, xi: Vec<f64>, nu: Vec<f64>, trace_u: f64, datum_ub: f64) -> Result<Self> {
        if xi.len() != nu.len() {
            return Err(CoreError::InvalidInput(format!(
                "boundary point dimension {} does not match normal dimension {}",
                xi.len(),
                nu.len()
            )));
        }
        let norm: f64 = nu.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidInput(format!(
                "outward normal must be unit length, |nu| = {norm}"
            )));
        }
        let all_finite = t.is_finite()
            && trace_u.is_finite()
            && datum_ub.is_finite()
            && xi.iter().chain(nu.iter()).all(|c| c.is_finite());
        if !all_finite {
            return Err(CoreError::InvalidInput("boundary sample has non-finite fields".into()));
        }
        Ok(Self { t, xi, nu, trace_u, datum_ub })
    }

    /// 1D sample at a single end point with normal `±1`.
    pub fn scalar(t: f64, xi: f64, nu: f64, trace_u: f64, datum_ub: f64) -> Result<Self> {
        Self::new(t, vec![xi], vec![nu], trace_u, datum_ub)
    }
}

/// Which admissibility condition produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionId {
    Bln,
    SignForm,
    FluxComparison,
    DuboisLefloch,
    ZeroEntropy,
    StrongBc,
}

impl ConditionId {
    pub fn label(self) -> &'static str {
        match self {
            ConditionId::Bln => "bln",
            ConditionId::SignForm => "sign-form",
            ConditionId::FluxComparison => "flux-comparison",
            ConditionId::DuboisLefloch => "dubois-lefloch",
            ConditionId::ZeroEntropy => "zero-entropy",
            ConditionId::StrongBc => "strong-bc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible,
    Violated,
}

/// Outcome of one pointwise check.
#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub condition: ConditionId,
    pub verdict: Verdict,
    /// State at which the most negative left-hand side was found.
    pub worst_k: Option<f64>,
    /// Most negative left-hand side over the scanned family.
    pub worst_value: f64,
    pub k_grid_size: usize,
    /// Verdict threshold actually used (negated: verdicts compare against
    /// `-tolerance`).
    pub tolerance: f64,
}

impl AdmissibilityReport {
    pub(crate) fn from_scan(
        condition: ConditionId,
        worst_k: Option<f64>,
        worst_value: f64,
        k_grid_size: usize,
        tolerance: f64,
    ) -> Self {
        let verdict =
            if worst_value < -tolerance { Verdict::Violated } else { Verdict::Admissible };
        Self { condition, verdict, worst_k, worst_value, k_grid_size, tolerance }
    }

    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_validation() {
        assert!(BoundarySample::scalar(0.0, 1.0, 1.0, 0.5, -0.5).is_ok());
        assert!(BoundarySample::scalar(0.0, 1.0, 0.7, 0.5, -0.5).is_err());
        assert!(BoundarySample::scalar(0.0, 1.0, -1.0, f64::NAN, 0.0).is_err());
        // 2D unit normal.
        let s = BoundarySample::new(
            0.0,
            vec![1.0, 0.0],
            vec![std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
            0.0,
            1.0,
        );
        assert!(s.is_ok());
    }

    #[test]
    fn verdict_threshold() {
        let r = AdmissibilityReport::from_scan(ConditionId::Bln, Some(0.0), -1e-8, 257, 1e-9);
        assert_eq!(r.verdict, Verdict::Violated);
        let r = AdmissibilityReport::from_scan(ConditionId::Bln, Some(0.0), -1e-10, 257, 1e-9);
        assert_eq!(r.verdict, Verdict::Admissible);
    }
}
