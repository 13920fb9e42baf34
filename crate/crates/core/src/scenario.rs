//! Illumination scenarios: source kind, photon budgets, mode counts,
//! detection efficiencies and the object/bath geometry.
//!
//! All photon numbers are per pixel and per frame. `n` is the mean photon
//! count actually detected at the reference detector, so the per-mode source
//! occupancy is μ₁ = n/(η·m); likewise μ_β = n_beta/(η_β·m_beta) for the
//! bath. The object is a beam splitter of power reflectivity `tau`, fixed at
//! 0.5 by the covariance-matrix route (see [`crate::illumination`]); the
//! counting route accepts any value in [0, 1].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The two source types under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SourceKind {
    /// Twin beams: two-mode squeezed vacuum, photon numbers on the two arms
    /// perfectly correlated before loss.
    Twb,
    /// Correlated thermal beams: one thermal beam split on a balanced beam
    /// splitter, the strongest classically correlated reference.
    Thb,
}

impl SourceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SourceKind::Twb => "TWB",
            SourceKind::Thb => "THB",
        }
    }
}

fn default_tau() -> f64 {
    0.5
}

fn default_n_pix() -> u32 {
    80
}

/// A full illumination configuration.
///
/// Serializes as a JSON object with exactly these snake_case field names;
/// unknown keys are rejected. `tau` and `n_pix` may be omitted and default
/// to 0.5 and 80.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub source_kind: SourceKind,
    /// Mean photon count per pixel at the reference detector.
    pub n: f64,
    /// Source modes per pixel.
    pub m: u64,
    /// Mean bath photon count per pixel at the signal detector.
    pub n_beta: f64,
    /// Bath modes per pixel.
    pub m_beta: u64,
    /// Detection efficiency for the source light, in (0, 1].
    pub eta: f64,
    /// Detection efficiency for the bath light, in (0, 1].
    pub eta_beta: f64,
    /// Object power reflectivity, in [0, 1].
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Whether the object is in the beam.
    pub object_present: bool,
    /// Pixel pairs per frame (used by frame-level estimators only).
    #[serde(default = "default_n_pix")]
    pub n_pix: u32,
}

/// Per-mode mean occupancies implied by a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOccupancy {
    /// μ₁ = n/(η·m), per source mode.
    pub mu1: f64,
    /// μ_β = n_beta/(η_β·m_beta), per bath mode; 0 when there is no bath.
    pub mu_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("field {field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },
    #[error("field {field} = {value} is outside {expected}")]
    OutOfRange {
        field: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("m must be at least 1")]
    NoSourceModes,
    #[error("n_beta = {n_beta} requires at least one bath mode (m_beta = 0)")]
    BathPhotonsWithoutModes { n_beta: f64 },
}

impl Scenario {
    /// Checks every field invariant; all analytic operations call this
    /// before computing.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (field, value) in [
            ("n", self.n),
            ("n_beta", self.n_beta),
            ("eta", self.eta),
            ("eta_beta", self.eta_beta),
            ("tau", self.tau),
        ] {
            if !value.is_finite() {
                return Err(ScenarioError::NonFinite { field, value });
            }
        }
        if self.m == 0 {
            return Err(ScenarioError::NoSourceModes);
        }
        if self.n < 0.0 {
            return Err(ScenarioError::OutOfRange {
                field: "n",
                value: self.n,
                expected: "[0, inf)",
            });
        }
        if self.n_beta < 0.0 {
            return Err(ScenarioError::OutOfRange {
                field: "n_beta",
                value: self.n_beta,
                expected: "[0, inf)",
            });
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(ScenarioError::OutOfRange {
                field: "eta",
                value: self.eta,
                expected: "(0, 1]",
            });
        }
        if !(self.eta_beta > 0.0 && self.eta_beta <= 1.0) {
            return Err(ScenarioError::OutOfRange {
                field: "eta_beta",
                value: self.eta_beta,
                expected: "(0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(ScenarioError::OutOfRange {
                field: "tau",
                value: self.tau,
                expected: "[0, 1]",
            });
        }
        if self.m_beta == 0 && self.n_beta > 0.0 {
            return Err(ScenarioError::BathPhotonsWithoutModes {
                n_beta: self.n_beta,
            });
        }
        if self.n_pix == 0 {
            return Err(ScenarioError::OutOfRange {
                field: "n_pix",
                value: 0.0,
                expected: "[1, 2^32)",
            });
        }
        Ok(())
    }

    /// Per-mode occupancies μ₁ and μ_β.
    pub fn mu_per_mode(&self) -> Result<ModeOccupancy, ScenarioError> {
        self.validate()?;
        let mu1 = self.n / (self.eta * self.m as f64);
        let mu_beta = if self.m_beta == 0 {
            0.0
        } else {
            self.n_beta / (self.eta_beta * self.m_beta as f64)
        };
        Ok(ModeOccupancy { mu1, mu_beta })
    }

    /// The same scenario with the object flag replaced.
    pub fn with_object(&self, present: bool) -> Scenario {
        Scenario {
            object_present: present,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Scenario {
        Scenario {
            source_kind: SourceKind::Twb,
            n: 4000.0,
            m: 90000,
            n_beta: 5000.0,
            m_beta: 50,
            eta: 0.38,
            eta_beta: 0.5,
            tau: 0.5,
            object_present: true,
            n_pix: 80,
        }
    }

    #[test]
    fn valid_scenario_passes_and_yields_occupancies() {
        let s = base();
        s.validate().unwrap();
        let occ = s.mu_per_mode().unwrap();
        assert_eq!(occ.mu1, 4000.0 / (0.38 * 90000.0));
        assert_eq!(occ.mu_beta, 5000.0 / (0.5 * 50.0));
    }

    #[test]
    fn bath_photons_without_modes_are_rejected() {
        let s = Scenario {
            m_beta: 0,
            ..base()
        };
        assert_eq!(
            s.validate(),
            Err(ScenarioError::BathPhotonsWithoutModes { n_beta: 5000.0 })
        );
    }

    #[test]
    fn empty_bath_has_zero_occupancy() {
        let s = Scenario {
            n_beta: 0.0,
            m_beta: 0,
            ..base()
        };
        assert_eq!(s.mu_per_mode().unwrap().mu_beta, 0.0);
    }

    #[test]
    fn efficiency_bounds_are_enforced() {
        for eta in [0.0, -0.1, 1.5, f64::NAN] {
            let s = Scenario { eta, ..base() };
            assert!(s.validate().is_err(), "eta = {eta} should be rejected");
        }
    }

    #[test]
    fn json_round_trip_preserves_all_fields() {
        let s = base();
        let text = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        assert!(text.contains("\"source_kind\":\"TWB\""));
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = r#"{
            "source_kind": "THB", "n": 1.0, "m": 1, "n_beta": 0.0,
            "m_beta": 0, "eta": 1.0, "eta_beta": 1.0,
            "object_present": true, "mystery": 3
        }"#;
        let err = serde_json::from_str::<Scenario>(text).unwrap_err();
        assert!(err.to_string().contains("mystery"), "got: {err}");
    }

    #[test]
    fn tau_and_n_pix_default_when_omitted() {
        let text = r#"{
            "source_kind": "TWB", "n": 1.0, "m": 2, "n_beta": 0.0,
            "m_beta": 0, "eta": 0.5, "eta_beta": 0.5, "object_present": false
        }"#;
        let s: Scenario = serde_json::from_str(text).unwrap();
        assert_eq!(s.tau, 0.5);
        assert_eq!(s.n_pix, 80);
        assert!(!s.object_present);
    }
}
