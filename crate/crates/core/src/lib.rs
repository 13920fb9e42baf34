//! Analytic and Monte Carlo toolkit for correlated-beam illumination of a
//! weakly reflecting object in a thermal bath.
//!
//! Two source types are compared throughout: twin beams (`TWB`, two-mode
//! squeezed vacuum with perfectly correlated photon numbers per mode pair)
//! and correlated thermal beams (`THB`, one thermal beam split on a balanced
//! beam splitter, the strongest classically correlated reference). For both,
//! the crate computes
//!
//! * the effective two-mode covariance matrix of the detected light and the
//!   Rényi-2 mutual information it carries ([`gaussian`], [`illumination`]),
//! * exact photon-counting moments at the two detectors, the covariance
//!   observable Δ, its signal-to-noise ratio, the Cauchy-Schwarz parameter ε
//!   and the noise reduction factor ([`photon_stats`]),
//! * Monte Carlo estimates of all of the above from per-mode count sampling
//!   and from quadrature sampling, with reproducible counter-based RNG
//!   streams ([`montecarlo`]).
//!
//! # Conventions
//!
//! Quadratures are q = (a + a†)/√2, p = i(a† − a)/√2 and covariance matrices
//! are symmetrized and mean-subtracted, scaled so that the vacuum CM is the
//! identity: σ_kj = ⟨δR_kδR_j + δR_jδR_k⟩. A thermal mode with mean photon
//! number n therefore has marginal variance 2n + 1. Entropies are natural
//! logarithms (nats).
//!
//! Mode ordering for two-mode matrices is (q1, p1, q2, p2), mode 1 being the
//! reference (bright) arm and mode 2 the signal arm that carries the bath.

#![forbid(unsafe_code)]

pub mod gaussian;
pub mod illumination;
pub mod montecarlo;
pub mod photon_stats;
pub mod scenario;

pub use gaussian::{mutual_info_renyi2, renyi2_entropy, SymplecticSpectrum, TwoModeCM};
pub use illumination::{asymptotic_ratio, effective_cm, mi_ratio, EffectiveCM};
pub use montecarlo::{
    estimate, estimate_count_bundle, CountBundle, CountStat, EstimatorConvention, MCConfig,
    MCEstimate, Quantity, StreamMode,
};
pub use photon_stats::{
    cauchy_schwarz_epsilon, count_moments, delta_stats, noise_reduction_factor, per_mode_moments,
    snr, snr_frame, snr_ratio, snr_ratio_dominant_bath, CountMoments, DeltaStats, PerModeMoments,
};
pub use scenario::{Scenario, SourceKind};
