//! Exact photon-counting statistics at the two detectors.
//!
//! Everything here is closed form. Detector counts are sums over
//! independent source mode pairs, plus independent bath modes on the signal
//! arm, so joint moments compose from per-pair moments. Per-pair moments
//! come from conditional count distributions: for twin beams the pair
//! photon number is geometric and each detector sees an independent
//! binomial thinning of it; for split thermal beams the counts are Poisson
//! at rates proportional to one exponentially distributed intensity. Either
//! way the conditional moments are polynomials in the latent variable, so
//! raw joint count moments are dot products of polynomial coefficients with
//! latent power moments; central moments, cumulants and the product
//! variance follow algebraically. docs/derivation.md walks through the full
//! composition, which the Monte Carlo module cross-checks by sampling.
//!
//! Index convention for mixed moments: the signal detector comes first, so
//! `m21` is E[δN_s²·δN_r].

use crate::scenario::{Scenario, ScenarioError, SourceKind};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("all detectors see vacuum, the observable is undefined")]
    AllVacuum,
    #[error("normally ordered variance is not positive ({value}), epsilon is undefined")]
    ZeroNormallyOrderedVariance { value: f64 },
    #[error("mean photon counts sum to zero, noise reduction factor is undefined")]
    ZeroMeanCounts,
    #[error("denominator SNR is zero, ratio is undefined")]
    ZeroReferenceSnr,
    #[error("scenarios must share {field}, got {left} vs {right}")]
    EnvironmentMismatch {
        field: &'static str,
        left: f64,
        right: f64,
    },
}

// Polynomial in the latent per-pair variable, coefficients lowest degree
// first. Conditional count moments have degree <= 2, products degree <= 4.
type Poly = [f64; 5];

fn poly_mul(x: &Poly, y: &Poly) -> Poly {
    let mut out = [0.0; 5];
    for i in 0..5 {
        for j in 0..5 - i {
            out[i + j] += x[i] * y[j];
        }
    }
    out
}

fn poly_dot(p: &Poly, latent_moments: &[f64; 5]) -> f64 {
    p.iter().zip(latent_moments).map(|(c, m)| c * m).sum()
}

// E[X^k | v] for X ~ Binomial(v, p), as a polynomial in v.
fn binomial_conditional(k: usize, p: f64) -> Poly {
    match k {
        0 => [1.0, 0.0, 0.0, 0.0, 0.0],
        1 => [0.0, p, 0.0, 0.0, 0.0],
        2 => [0.0, p * (1.0 - p), p * p, 0.0, 0.0],
        _ => unreachable!("conditional moments are needed up to order 2"),
    }
}

// E[X^k | v] for X ~ Poisson(p·v), as a polynomial in v.
fn poisson_conditional(k: usize, p: f64) -> Poly {
    match k {
        0 => [1.0, 0.0, 0.0, 0.0, 0.0],
        1 => [0.0, p, 0.0, 0.0, 0.0],
        2 => [0.0, p, p * p, 0.0, 0.0],
        _ => unreachable!("conditional moments are needed up to order 2"),
    }
}

// E[n^k] for a geometric photon number with mean mu (thermal mode).
fn thermal_power_moments(mu: f64) -> [f64; 5] {
    let m2 = mu * mu;
    let m3 = m2 * mu;
    let m4 = m3 * mu;
    [
        1.0,
        mu,
        2.0 * m2 + mu,
        6.0 * m3 + 6.0 * m2 + mu,
        24.0 * m4 + 36.0 * m3 + 14.0 * m2 + mu,
    ]
}

// E[I^k] for an exponential intensity with mean mu.
fn exponential_power_moments(mu: f64) -> [f64; 5] {
    let m2 = mu * mu;
    let m3 = m2 * mu;
    let m4 = m3 * mu;
    [1.0, mu, 2.0 * m2, 6.0 * m3, 24.0 * m4]
}

const CHOOSE: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]];

fn central_moment(raw: &[[f64; 3]; 3], a: usize, b: usize) -> f64 {
    let ms = raw[1][0];
    let mr = raw[0][1];
    let mut acc = 0.0;
    for i in 0..=a {
        for j in 0..=b {
            acc += CHOOSE[a][i]
                * CHOOSE[b][j]
                * (-ms).powi((a - i) as i32)
                * (-mr).powi((b - j) as i32)
                * raw[i][j];
        }
    }
    acc
}

// Joint central moments of the detected counts from one source mode pair,
// signal index first: c_ab = E[δs^a δr^b]. p_r and p_s are the end-to-end
// detection probabilities of the two arms.
#[derive(Debug, Clone, Copy)]
struct PairJoint {
    mean_s: f64,
    mean_r: f64,
    c20: f64,
    c02: f64,
    c11: f64,
    c21: f64,
    c12: f64,
    c22: f64,
}

fn pair_joint(kind: SourceKind, mu: f64, p_r: f64, p_s: f64) -> PairJoint {
    let latent = match kind {
        SourceKind::Twb => thermal_power_moments(mu),
        SourceKind::Thb => exponential_power_moments(mu),
    };
    let conditional = |k: usize, p: f64| match kind {
        SourceKind::Twb => binomial_conditional(k, p),
        SourceKind::Thb => poisson_conditional(k, p),
    };
    let mut raw = [[0.0f64; 3]; 3];
    for (a, row) in raw.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = poly_dot(
                &poly_mul(&conditional(a, p_s), &conditional(b, p_r)),
                &latent,
            );
        }
    }
    PairJoint {
        mean_s: raw[1][0],
        mean_r: raw[0][1],
        c20: central_moment(&raw, 2, 0),
        c02: central_moment(&raw, 0, 2),
        c11: central_moment(&raw, 1, 1),
        c21: central_moment(&raw, 2, 1),
        c12: central_moment(&raw, 1, 2),
        c22: central_moment(&raw, 2, 2),
    }
}

// Joint central moments of the per-pixel totals, up to the mixed fourth
// order the product variance needs. Third central moments and fourth joint
// cumulants add over independent contributions; the bath, being independent
// of the reference arm, touches none of the mixed ones.
#[derive(Debug, Clone, Copy)]
struct TotalMoments {
    mean_s: f64,
    mean_r: f64,
    var_s: f64,
    var_r: f64,
    cov_sr: f64,
    m21: f64,
    m12: f64,
    m22: f64,
}

impl TotalMoments {
    // Var(N_s·N_r) expanded in central moments:
    // ⟨N_s⟩²δ²N_r + ⟨N_r⟩²δ²N_s + 2⟨N_s⟩⟨N_r⟩cov + 2⟨N_s⟩m12 + 2⟨N_r⟩m21
    // + m22 − cov².
    fn product_variance(&self) -> f64 {
        self.mean_s * self.mean_s * self.var_r
            + self.mean_r * self.mean_r * self.var_s
            + 2.0 * self.mean_s * self.mean_r * self.cov_sr
            + 2.0 * self.mean_s * self.m12
            + 2.0 * self.mean_r * self.m21
            + self.m22
            - self.cov_sr * self.cov_sr
    }
}

pub(crate) fn signal_arm_probability(scenario: &Scenario) -> f64 {
    if scenario.object_present {
        scenario.eta * scenario.tau
    } else {
        0.0
    }
}

fn total_moments(scenario: &Scenario) -> Result<TotalMoments, StatsError> {
    let occ = scenario.mu_per_mode()?;
    let pair = pair_joint(
        scenario.source_kind,
        occ.mu1,
        scenario.eta,
        signal_arm_probability(scenario),
    );
    let m = scenario.m as f64;
    let bath_var = if scenario.m_beta == 0 {
        0.0
    } else {
        scenario.n_beta * (1.0 + scenario.n_beta / scenario.m_beta as f64)
    };
    let var_s = m * pair.c20 + bath_var;
    let var_r = m * pair.c02;
    let cov_sr = m * pair.c11;
    let pair_k22 = pair.c22 - pair.c20 * pair.c02 - 2.0 * pair.c11 * pair.c11;
    Ok(TotalMoments {
        mean_s: m * pair.mean_s + scenario.n_beta,
        mean_r: m * pair.mean_r,
        var_s,
        var_r,
        cov_sr,
        m21: m * pair.c21,
        m12: m * pair.c12,
        m22: m * pair_k22 + var_s * var_r + 2.0 * cov_sr * cov_sr,
    })
}

/// Per-mode detected means and variances, and the count covariance of one
/// detected mode pair. Counts are thermal mode by mode, so every variance
/// is n(1 + n) for its mean n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerModeMoments {
    /// Reference-arm mean per source mode, η·μ₁.
    pub mean_r: f64,
    /// Signal-arm source contribution per mode: η·τ·μ₁ with the object
    /// present, 0 without it.
    pub mean_s: f64,
    /// Detected mean per bath mode, η_β·μ_β.
    pub mean_beta: f64,
    pub var_r: f64,
    pub var_s: f64,
    pub var_beta: f64,
    /// Per-pair count covariance: η²τ·μ₁(μ₁+1) for twin beams, η²τ·μ₁² for
    /// thermal beams, 0 with the object absent.
    pub cov: f64,
}

pub fn per_mode_moments(scenario: &Scenario) -> Result<PerModeMoments, StatsError> {
    let occ = scenario.mu_per_mode()?;
    let pair = pair_joint(
        scenario.source_kind,
        occ.mu1,
        scenario.eta,
        signal_arm_probability(scenario),
    );
    let mean_beta = scenario.eta_beta * occ.mu_beta;
    Ok(PerModeMoments {
        mean_r: pair.mean_r,
        mean_s: pair.mean_s,
        mean_beta,
        var_r: pair.c02,
        var_s: pair.c20,
        var_beta: mean_beta * (1.0 + mean_beta),
        cov: pair.c11,
    })
}

/// Per-pixel detector count moments for the scenario's object setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountMoments {
    pub mean_s: f64,
    pub mean_r: f64,
    pub var_s: f64,
    pub var_r: f64,
    pub cov_sr: f64,
}

pub fn count_moments(scenario: &Scenario) -> Result<CountMoments, StatsError> {
    let t = total_moments(scenario)?;
    Ok(CountMoments {
        mean_s: t.mean_s,
        mean_r: t.mean_r,
        var_s: t.var_s,
        var_r: t.var_r,
        cov_sr: t.cov_sr,
    })
}

/// Moments of the covariance observable Δ = N_sN_r − ⟨N_s⟩⟨N_r⟩ for one
/// pixel pair, in both object configurations.
///
/// The subtracted term is the product of the true (calibrated) means, a
/// constant, so ⟨Δ⟩ is the count covariance and δ²Δ = δ²(N_sN_r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaStats {
    pub mean_in: f64,
    /// Exactly 0: the arms are independent without the object.
    pub mean_out: f64,
    pub var_in: f64,
    pub var_out: f64,
}

/// Δ moments for both object configurations of a scenario's geometry. The
/// input's own `object_present` flag is not consulted.
pub fn delta_stats(scenario: &Scenario) -> Result<DeltaStats, StatsError> {
    let t_in = total_moments(&scenario.with_object(true))?;
    let t_out = total_moments(&scenario.with_object(false))?;
    Ok(DeltaStats {
        mean_in: t_in.cov_sr,
        mean_out: t_out.cov_sr,
        var_in: t_in.product_variance(),
        var_out: t_out.product_variance(),
    })
}

/// Single-pixel-pair SNR of the Δ observable,
/// |⟨Δ_in⟩ − ⟨Δ_out⟩| / √(δ²Δ_in + δ²Δ_out).
///
/// Zero photon numbers on the reference arm zero the numerator and the
/// denominator together; the SNR is then 0 by convention unless every
/// detector sees vacuum, which is a domain error.
pub fn snr(scenario: &Scenario) -> Result<f64, StatsError> {
    let d = delta_stats(scenario)?;
    let noise = d.var_in + d.var_out;
    if noise == 0.0 {
        return if scenario.n == 0.0 && scenario.n_beta == 0.0 {
            Err(StatsError::AllVacuum)
        } else {
            Ok(0.0)
        };
    }
    Ok((d.mean_in - d.mean_out).abs() / noise.sqrt())
}

/// Frame-level SNR: √n_pix times the per-pair value.
pub fn snr_frame(scenario: &Scenario) -> Result<f64, StatsError> {
    Ok((scenario.n_pix as f64).sqrt() * snr(scenario)?)
}

fn require_shared_environment(left: &Scenario, right: &Scenario) -> Result<(), StatsError> {
    let pairs = [
        ("m", left.m as f64, right.m as f64),
        ("m_beta", left.m_beta as f64, right.m_beta as f64),
        ("n_beta", left.n_beta, right.n_beta),
        ("eta", left.eta, right.eta),
        ("eta_beta", left.eta_beta, right.eta_beta),
        ("tau", left.tau, right.tau),
    ];
    for (field, l, r) in pairs {
        if l != r {
            return Err(StatsError::EnvironmentMismatch {
                field,
                left: l,
                right: r,
            });
        }
    }
    Ok(())
}

/// Ratio of the two scenarios' SNRs (numerator first). The scenarios must
/// share the bath and the detection geometry; only source kind and photon
/// number may differ.
pub fn snr_ratio(numerator: &Scenario, denominator: &Scenario) -> Result<f64, StatsError> {
    require_shared_environment(numerator, denominator)?;
    let s_num = snr(numerator)?;
    let s_den = snr(denominator)?;
    if s_den == 0.0 {
        return Err(StatsError::ZeroReferenceSnr);
    }
    Ok(s_num / s_den)
}

/// Ratio of the Δ means alone, |⟨Δ_in − Δ_out⟩| over |⟨Δ_in − Δ_out⟩|: the
/// value [`snr_ratio`] approaches when the bath dominates the noise in both
/// denominators equally.
pub fn snr_ratio_dominant_bath(
    numerator: &Scenario,
    denominator: &Scenario,
) -> Result<f64, StatsError> {
    require_shared_environment(numerator, denominator)?;
    let d_num = delta_stats(numerator)?;
    let d_den = delta_stats(denominator)?;
    let den = (d_den.mean_in - d_den.mean_out).abs();
    if den == 0.0 {
        return Err(StatsError::ZeroReferenceSnr);
    }
    Ok((d_num.mean_in - d_num.mean_out).abs() / den)
}

/// Cauchy-Schwarz parameter ε = cov_sr / √(⟨:δ²N_s:⟩⟨:δ²N_r:⟩) with the
/// normally ordered variances ⟨:δ²N:⟩ = δ²N − ⟨N⟩. Values above 1 certify
/// nonclassical correlations.
pub fn cauchy_schwarz_epsilon(scenario: &Scenario) -> Result<f64, StatsError> {
    let m = count_moments(scenario)?;
    let ordered_s = m.var_s - m.mean_s;
    let ordered_r = m.var_r - m.mean_r;
    if ordered_s <= 0.0 || ordered_r <= 0.0 {
        return Err(StatsError::ZeroNormallyOrderedVariance {
            value: ordered_s.min(ordered_r),
        });
    }
    Ok(m.cov_sr / (ordered_s * ordered_r).sqrt())
}

/// Noise reduction factor ⟨δ²(N_s − N_r)⟩ / ⟨N_s + N_r⟩. Values below 1
/// indicate sub-shot-noise correlations.
pub fn noise_reduction_factor(scenario: &Scenario) -> Result<f64, StatsError> {
    let m = count_moments(scenario)?;
    let total = m.mean_s + m.mean_r;
    if total == 0.0 {
        return Err(StatsError::ZeroMeanCounts);
    }
    Ok((m.var_s + m.var_r - 2.0 * m.cov_sr) / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::illumination::asymptotic_ratio;
    use approx::assert_relative_eq;

    fn bare(kind: SourceKind, mu1: f64, eta: f64, tau: f64) -> Scenario {
        Scenario {
            source_kind: kind,
            n: eta * mu1,
            m: 1,
            n_beta: 0.0,
            m_beta: 0,
            eta,
            eta_beta: 1.0,
            tau,
            object_present: true,
            n_pix: 80,
        }
    }

    fn fig2(kind: SourceKind, n_beta: f64) -> Scenario {
        Scenario {
            source_kind: kind,
            n: 4000.0,
            m: 90000,
            n_beta,
            m_beta: 50,
            eta: 0.38,
            eta_beta: 0.5,
            tau: 0.5,
            object_present: true,
            n_pix: 80,
        }
    }

    #[test]
    fn per_pair_covariance_closed_forms() {
        let twb = per_mode_moments(&bare(SourceKind::Twb, 0.1, 1.0, 0.5)).unwrap();
        assert_relative_eq!(twb.cov, 0.055, max_relative = 1e-14);
        assert_relative_eq!(twb.mean_r, 0.1, max_relative = 1e-15);
        assert_relative_eq!(twb.mean_s, 0.05, max_relative = 1e-15);
        assert_relative_eq!(twb.var_r, 0.1 * 1.1, max_relative = 1e-14);
        assert_relative_eq!(twb.var_s, 0.05 * 1.05, max_relative = 1e-14);

        let thb = per_mode_moments(&bare(SourceKind::Thb, 0.1, 1.0, 0.5)).unwrap();
        assert_relative_eq!(thb.cov, 0.005, max_relative = 1e-14);
        assert_relative_eq!(thb.var_r, 0.1 * 1.1, max_relative = 1e-14);

        let split = per_mode_moments(&bare(SourceKind::Thb, 0.2, 1.0, 1.0)).unwrap();
        assert_relative_eq!(split.cov, 0.04, max_relative = 1e-14);
    }

    #[test]
    fn dark_source_has_all_zero_moments() {
        for kind in [SourceKind::Twb, SourceKind::Thb] {
            let m = per_mode_moments(&bare(kind, 0.0, 1.0, 0.5)).unwrap();
            assert_eq!(
                (m.mean_r, m.mean_s, m.var_r, m.var_s, m.cov),
                (0.0, 0.0, 0.0, 0.0, 0.0)
            );
        }
    }

    #[test]
    fn reference_mean_equals_detected_photon_number() {
        for kind in [SourceKind::Twb, SourceKind::Thb] {
            for (n, m) in [(4000.0, 90000), (19.0, 500), (0.19, 1)] {
                let s = Scenario {
                    source_kind: kind,
                    n,
                    m,
                    ..fig2(kind, 5000.0)
                };
                let c = count_moments(&s).unwrap();
                assert_relative_eq!(c.mean_r, n, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn absent_object_zeroes_the_covariance_only() {
        let s = fig2(SourceKind::Twb, 5000.0).with_object(false);
        let c = count_moments(&s).unwrap();
        assert_eq!(c.cov_sr, 0.0);
        assert_eq!(c.mean_s, 5000.0);
        assert!(c.var_s > c.mean_s);
        assert_relative_eq!(c.mean_r, 4000.0, max_relative = 1e-12);
    }

    #[test]
    fn detector_counts_are_super_poissonian() {
        for kind in [SourceKind::Twb, SourceKind::Thb] {
            for n_beta in [0.0, 5000.0] {
                let c = count_moments(&fig2(kind, n_beta)).unwrap();
                assert!(c.var_s >= c.mean_s);
                assert!(c.var_r >= c.mean_r);
            }
        }
    }

    #[test]
    fn delta_mean_out_is_exactly_zero() {
        for kind in [SourceKind::Twb, SourceKind::Thb] {
            let d = delta_stats(&fig2(kind, 5000.0)).unwrap();
            assert_eq!(d.mean_out, 0.0);
            let c = count_moments(&fig2(kind, 5000.0)).unwrap();
            assert_eq!(d.mean_in, c.cov_sr);
            assert!(d.var_in > 0.0 && d.var_out > 0.0);
        }
    }

    #[test]
    fn vacuum_delta_is_identically_zero() {
        let vacuum = Scenario {
            n: 0.0,
            n_beta: 0.0,
            m_beta: 0,
            ..fig2(SourceKind::Twb, 0.0)
        };
        let d = delta_stats(&vacuum).unwrap();
        assert_eq!(
            (d.mean_in, d.mean_out, d.var_in, d.var_out),
            (0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(snr(&vacuum).unwrap_err(), StatsError::AllVacuum);
    }

    #[test]
    fn dark_source_in_a_bright_bath_has_zero_snr() {
        let s = Scenario {
            n: 0.0,
            ..fig2(SourceKind::Thb, 5000.0)
        };
        assert_eq!(snr(&s).unwrap(), 0.0);
    }

    #[test]
    fn snr_decreases_with_bath_strength() {
        for kind in [SourceKind::Twb, SourceKind::Thb] {
            let values: Vec<f64> = [1e2, 1e3, 1e4, 1e5]
                .iter()
                .map(|&n_beta| snr(&fig2(kind, n_beta)).unwrap())
                .collect();
            for pair in values.windows(2) {
                assert!(pair[0] > pair[1], "{values:?}");
            }
        }
    }

    #[test]
    fn frame_snr_scales_with_pixel_count() {
        let s = fig2(SourceKind::Twb, 5000.0);
        assert_relative_eq!(
            snr_frame(&s).unwrap(),
            80.0_f64.sqrt() * snr(&s).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn snr_ratio_of_a_scenario_with_itself_is_one() {
        let s = fig2(SourceKind::Twb, 5000.0);
        assert_eq!(snr_ratio(&s, &s).unwrap(), 1.0);
    }

    #[test]
    fn snr_ratio_rejects_different_environments() {
        let twb = fig2(SourceKind::Twb, 5000.0);
        let thb = Scenario {
            n_beta: 6000.0,
            ..fig2(SourceKind::Thb, 5000.0)
        };
        assert_eq!(
            snr_ratio(&twb, &thb).unwrap_err(),
            StatsError::EnvironmentMismatch {
                field: "n_beta",
                left: 5000.0,
                right: 6000.0
            }
        );
    }

    #[test]
    fn dominant_bath_ratio_equals_the_asymptotic_closed_form() {
        let twb = Scenario {
            n: 4232.0,
            m_beta: 1300,
            ..fig2(SourceKind::Twb, 1e6)
        };
        let thb = Scenario {
            n: 3278.0,
            m_beta: 1300,
            ..fig2(SourceKind::Thb, 1e6)
        };
        let ratio = snr_ratio_dominant_bath(&twb, &thb).unwrap();
        assert_relative_eq!(
            ratio,
            asymptotic_ratio(&twb, &thb).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(ratio, 15.136335531010628, max_relative = 1e-12);
    }

    #[test]
    fn epsilon_closed_forms_without_bath() {
        let thb = cauchy_schwarz_epsilon(&bare(SourceKind::Thb, 0.3, 0.7, 0.5)).unwrap();
        assert_relative_eq!(thb, 1.0, max_relative = 1e-12);

        let mu = 0.11695906432748538;
        let twb = cauchy_schwarz_epsilon(&bare(SourceKind::Twb, mu, 0.38, 0.5)).unwrap();
        assert_relative_eq!(twb, (mu + 1.0) / mu, max_relative = 1e-12);
        assert!(twb > 1.0);
    }

    #[test]
    fn bath_pushes_epsilon_classical() {
        let thb = cauchy_schwarz_epsilon(&fig2(SourceKind::Thb, 5000.0)).unwrap();
        assert!(thb < 1.0);
        for n_beta in [1e4, 1e5, 1e6] {
            let twb = Scenario {
                n: 4232.0,
                m_beta: 1300,
                ..fig2(SourceKind::Twb, n_beta)
            };
            let eps = cauchy_schwarz_epsilon(&twb).unwrap();
            assert!(eps <= 1.0, "n_beta = {n_beta}: {eps}");
        }
    }

    #[test]
    fn epsilon_needs_light_on_both_arms() {
        let dark = Scenario {
            n: 0.0,
            ..fig2(SourceKind::Twb, 5000.0)
        };
        assert!(matches!(
            cauchy_schwarz_epsilon(&dark),
            Err(StatsError::ZeroNormallyOrderedVariance { .. })
        ));
    }

    #[test]
    fn noise_reduction_closed_forms() {
        let perfect = noise_reduction_factor(&bare(SourceKind::Twb, 0.4, 1.0, 1.0)).unwrap();
        assert_eq!(perfect, 0.0);

        for mu in [0.05, 0.5, 5.0] {
            let thb = noise_reduction_factor(&bare(SourceKind::Thb, mu, 0.6, 0.5)).unwrap();
            assert!(thb >= 1.0, "mu = {mu}: {thb}");
        }

        let dominated = Scenario {
            n: 4232.0,
            m_beta: 1300,
            ..fig2(SourceKind::Twb, 1e6)
        };
        assert!(noise_reduction_factor(&dominated).unwrap() > 1.0);

        let vacuum = bare(SourceKind::Twb, 0.0, 1.0, 0.5);
        assert_eq!(
            noise_reduction_factor(&vacuum).unwrap_err(),
            StatsError::ZeroMeanCounts
        );
    }
}
