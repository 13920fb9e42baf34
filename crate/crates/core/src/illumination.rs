//! Effective covariance matrix of a detected pixel pair and the analytic
//! figure-of-merit ratios built on it.
//!
//! A pixel collects `m` source modes, plus `m_beta` bath modes on the signal
//! arm. Per-pixel quadrature statistics are those of one effective mode
//! pair: reference-arm quadratures summed over modes and normalized by √m,
//! signal-arm quadratures by √(m + m_beta). For a balanced object (τ = 1/2)
//! the standard-form entries close over the scenario parameters alone, which
//! is what [`effective_cm`] evaluates. The signal-arm variance is computed
//! twice, once from per-mode occupancies and once from detected photon
//! numbers; the routes must agree or the call fails.

use crate::gaussian::{mutual_info_renyi2, CmError, TwoModeCM};
use crate::scenario::{Scenario, ScenarioError, SourceKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IlluminationError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Cm(#[from] CmError),
    #[error("covariance-matrix route requires tau = 0.5, got {tau}")]
    UnsupportedReflectivity { tau: f64 },
    #[error("expected a {} scenario, got {}", expected.as_str(), got.as_str())]
    SourceKindMismatch {
        expected: SourceKind,
        got: SourceKind,
    },
    #[error("scenarios must share {field}, got {left} vs {right}")]
    GeometryMismatch {
        field: &'static str,
        left: f64,
        right: f64,
    },
    #[error("ratio is defined for object-present scenarios only")]
    ObjectAbsent,
    #[error("thermal-beam occupancy is zero, ratio is undefined")]
    ZeroThermalOccupancy,
    #[error("internal invariant broken: {what}")]
    InternalInvariant { what: String },
}

/// A scenario bundled with its effective standard-form covariance matrix.
#[derive(Debug, Clone)]
pub struct EffectiveCM {
    cm: TwoModeCM,
    scenario: Scenario,
}

impl EffectiveCM {
    pub fn cm(&self) -> &TwoModeCM {
        &self.cm
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Quadrature variance of the reference (bright) arm, the `a` entry.
    pub fn bright_arm_variance(&self) -> f64 {
        self.cm.a()
    }

    /// Quadrature variance of the signal arm including the bath, the `b`
    /// entry.
    pub fn bath_arm_variance(&self) -> f64 {
        self.cm.b()
    }
}

/// Builds the effective two-mode covariance matrix for a scenario.
///
/// The entries are
///
/// * a = 1 + 2η·μ₁,
/// * b = 1 + (η·μ₁·m + 2η_β·μ_β·m_β)/(m + m_β), reducing to the bath term
///   alone when the object is absent (the source never reaches the signal
///   detector),
/// * c = ±d = η·√(μ₁² + μ₁)·√(2m/(m + m_β)) for twin beams (c > 0 > d),
/// * c = d = η·μ₁·√(2m/(m + m_β)) for thermal beams.
///
/// Only τ = 1/2 is supported here: the balanced-split factor is folded into
/// the closed forms above. The counting observables in
/// [`crate::photon_stats`] accept any τ.
pub fn effective_cm(scenario: &Scenario) -> Result<EffectiveCM, IlluminationError> {
    let occ = scenario.mu_per_mode()?;
    if scenario.tau != 0.5 {
        return Err(IlluminationError::UnsupportedReflectivity { tau: scenario.tau });
    }
    let m = scenario.m as f64;
    let m_beta = scenario.m_beta as f64;
    let modes = m + m_beta;
    let bath = 2.0 * scenario.eta_beta * occ.mu_beta * m_beta / modes;

    let a = 1.0 + 2.0 * scenario.eta * occ.mu1;
    let (b, c, d) = if scenario.object_present {
        let b = 1.0 + (scenario.eta * occ.mu1 * m) / modes + bath;
        let b_detected = 1.0 + (scenario.n + 2.0 * scenario.n_beta) / modes;
        if (b - b_detected).abs() > 1e-9 * b_detected {
            return Err(IlluminationError::InternalInvariant {
                what: format!("signal-arm variance routes disagree: {b} vs {b_detected}"),
            });
        }
        let geom = (2.0 * m / modes).sqrt();
        let c = match scenario.source_kind {
            SourceKind::Twb => scenario.eta * (occ.mu1 * occ.mu1 + occ.mu1).sqrt() * geom,
            SourceKind::Thb => scenario.eta * occ.mu1 * geom,
        };
        let d = match scenario.source_kind {
            SourceKind::Twb => -c,
            SourceKind::Thb => c,
        };
        (b, c, d)
    } else {
        (1.0 + bath, 0.0, 0.0)
    };

    let cm = TwoModeCM::new(a, b, c, d)?;
    Ok(EffectiveCM {
        cm,
        scenario: scenario.clone(),
    })
}

fn expect_kind(s: &Scenario, expected: SourceKind) -> Result<(), IlluminationError> {
    if s.source_kind != expected {
        return Err(IlluminationError::SourceKindMismatch {
            expected,
            got: s.source_kind,
        });
    }
    Ok(())
}

fn require_shared_geometry(twb: &Scenario, thb: &Scenario) -> Result<(), IlluminationError> {
    let pairs = [
        ("m", twb.m as f64, thb.m as f64),
        ("m_beta", twb.m_beta as f64, thb.m_beta as f64),
        ("eta", twb.eta, thb.eta),
    ];
    for (field, left, right) in pairs {
        if left != right {
            return Err(IlluminationError::GeometryMismatch { field, left, right });
        }
    }
    Ok(())
}

/// Large-bath limit of the SNR ratio between a twin-beam and a thermal-beam
/// scenario sharing the same mode counts and source efficiency:
/// (μ_T² + μ_T)/μ_θ², with μ_T the twin-beam and μ_θ the thermal per-mode
/// occupancy.
pub fn asymptotic_ratio(twb: &Scenario, thb: &Scenario) -> Result<f64, IlluminationError> {
    expect_kind(twb, SourceKind::Twb)?;
    expect_kind(thb, SourceKind::Thb)?;
    require_shared_geometry(twb, thb)?;
    let mu_t = twb.mu_per_mode()?.mu1;
    let mu_h = thb.mu_per_mode()?.mu1;
    if mu_h == 0.0 {
        return Err(IlluminationError::ZeroThermalOccupancy);
    }
    Ok((mu_t * mu_t + mu_t) / (mu_h * mu_h))
}

/// Ratio of Rényi-2 mutual informations, twin beams over thermal beams, for
/// two object-present scenarios sharing the same geometry.
pub fn mi_ratio(twb: &Scenario, thb: &Scenario) -> Result<f64, IlluminationError> {
    expect_kind(twb, SourceKind::Twb)?;
    expect_kind(thb, SourceKind::Thb)?;
    require_shared_geometry(twb, thb)?;
    if !(twb.object_present && thb.object_present) {
        return Err(IlluminationError::ObjectAbsent);
    }
    let mi_t = mutual_info_renyi2(effective_cm(twb)?.cm());
    let mi_h = mutual_info_renyi2(effective_cm(thb)?.cm());
    if mi_h == 0.0 {
        return Err(IlluminationError::ZeroThermalOccupancy);
    }
    Ok(mi_t / mi_h)
}
