//! Cross-checks by a different route than the library's own algebra:
//! truncated probability sums for the per-pair counting statistics, an
//! explicit mode-by-mode construction of the effective covariance matrix,
//! and reference values frozen from a 50-digit evaluation of the Gaussian
//! expressions.

use approx::assert_relative_eq;
use quill_core::{
    asymptotic_ratio, count_moments, delta_stats, effective_cm, mutual_info_renyi2, Scenario,
    SourceKind,
};

fn scenario(kind: SourceKind, n: f64, m: u64, eta: f64, tau: f64) -> Scenario {
    Scenario {
        source_kind: kind,
        n,
        m,
        n_beta: 0.0,
        m_beta: 0,
        eta,
        eta_beta: 1.0,
        tau,
        object_present: true,
        n_pix: 80,
    }
}

fn fig2_scenario(kind: SourceKind, n_beta: f64) -> Scenario {
    Scenario {
        source_kind: kind,
        n: 4000.0,
        m: 90_000,
        n_beta,
        m_beta: 50,
        eta: 0.38,
        eta_beta: 0.5,
        tau: 0.5,
        object_present: true,
        n_pix: 80,
    }
}

// Raw-moment accumulator over an explicit joint pmf. The truncations
// leave tail mass far below the comparison tolerances, so raw sums serve
// directly as moments.
#[derive(Default)]
struct Acc {
    mass: f64,
    s1: f64,
    r1: f64,
    s2: f64,
    r2: f64,
    sr: f64,
    srsr: f64,
}

impl Acc {
    fn push(&mut self, w: f64, s: f64, r: f64) {
        self.mass += w;
        self.s1 += w * s;
        self.r1 += w * r;
        self.s2 += w * s * s;
        self.r2 += w * r * r;
        let product = s * r;
        self.sr += w * product;
        self.srsr += w * product * product;
    }

    fn var_s(&self) -> f64 {
        self.s2 - self.s1 * self.s1
    }

    fn var_r(&self) -> f64 {
        self.r2 - self.r1 * self.r1
    }

    fn cov(&self) -> f64 {
        self.sr - self.s1 * self.r1
    }

    fn product_var(&self) -> f64 {
        self.srsr - self.sr * self.sr
    }
}

fn geometric_pmf(mu: f64, n_max: u64) -> Vec<f64> {
    let ratio = mu / (1.0 + mu);
    let mut p = 1.0 / (1.0 + mu);
    (0..=n_max)
        .map(|_| {
            let out = p;
            p *= ratio;
            out
        })
        .collect()
}

fn binomial_pmf(n: u64, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n as usize + 1];
    if p == 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if p == 1.0 {
        pmf[n as usize] = 1.0;
        return pmf;
    }
    let odds = p / (1.0 - p);
    let mut cur = (1.0 - p).powi(n as i32);
    for k in 0..=n {
        pmf[k as usize] = cur;
        cur *= (n - k) as f64 / (k + 1) as f64 * odds;
    }
    pmf
}

// Twin-beam pair: geometric photon number n, then conditionally
// independent binomial thinnings to the two detectors.
fn twin_beam_truncated(mu: f64, p_s: f64, p_r: f64, n_max: u64) -> Acc {
    let geometric = geometric_pmf(mu, n_max);
    let mut acc = Acc::default();
    for (n, &pn) in geometric.iter().enumerate() {
        let signal = binomial_pmf(n as u64, p_s);
        let reference = binomial_pmf(n as u64, p_r);
        for (s, &ps) in signal.iter().enumerate() {
            if ps == 0.0 {
                continue;
            }
            for (r, &pr) in reference.iter().enumerate() {
                acc.push(pn * ps * pr, s as f64, r as f64);
            }
        }
    }
    acc
}

// Split thermal pair: marginalizing the exponential intensity out of the
// two conditional Poissons gives the closed form
//   P(s, r) = p_s^s p_r^r (s + r)! / (s! r! μ (1/μ + p_s + p_r)^{s+r+1}).
fn split_thermal_truncated(mu: f64, p_s: f64, p_r: f64, max: usize) -> Acc {
    let mut ln_fact = vec![0.0f64; 2 * max + 1];
    for k in 1..ln_fact.len() {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let ln_rate = (1.0 / mu + p_s + p_r).ln();
    let mut acc = Acc::default();
    for s in 0..=max {
        for r in 0..=max {
            let ln_p = s as f64 * p_s.ln() + r as f64 * p_r.ln() + ln_fact[s + r]
                - ln_fact[s]
                - ln_fact[r]
                - mu.ln()
                - (s + r + 1) as f64 * ln_rate;
            acc.push(ln_p.exp(), s as f64, r as f64);
        }
    }
    acc
}

#[test]
fn truncated_twin_beam_sum_reproduces_the_pair_moments() {
    // μ₁ = 0.1 at unit reference efficiency and a balanced split.
    let s = scenario(SourceKind::Twb, 0.1, 1, 1.0, 0.5);
    let acc = twin_beam_truncated(0.1, 0.5, 1.0, 60);
    assert!(acc.mass > 1.0 - 1e-12);
    assert_relative_eq!(acc.cov(), 0.055, max_relative = 1e-8);
    let analytic = count_moments(&s).unwrap();
    assert_relative_eq!(acc.s1, analytic.mean_s, max_relative = 1e-8);
    assert_relative_eq!(acc.r1, analytic.mean_r, max_relative = 1e-8);
    assert_relative_eq!(acc.var_s(), analytic.var_s, max_relative = 1e-8);
    assert_relative_eq!(acc.var_r(), analytic.var_r, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), analytic.cov_sr, max_relative = 1e-8);
}

#[test]
fn truncated_twin_beam_sum_reproduces_the_product_variance() {
    let s = scenario(SourceKind::Twb, 0.1, 1, 1.0, 0.5);
    let acc = twin_beam_truncated(0.1, 0.5, 1.0, 60);
    let delta = delta_stats(&s).unwrap();
    assert_relative_eq!(acc.product_var(), delta.var_in, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), delta.mean_in, max_relative = 1e-8);
}

#[test]
fn truncated_twin_beam_sum_covers_lossy_unbalanced_detection() {
    let s = scenario(SourceKind::Twb, 0.3, 1, 0.6, 0.5);
    // N = 0.3 at η = 0.6 and M = 1 puts μ₁ at 0.5.
    let acc = twin_beam_truncated(0.5, 0.3, 0.6, 150);
    assert!(acc.mass > 1.0 - 1e-12);
    let analytic = count_moments(&s).unwrap();
    let delta = delta_stats(&s).unwrap();
    assert_relative_eq!(acc.cov(), 0.135, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), analytic.cov_sr, max_relative = 1e-8);
    assert_relative_eq!(acc.var_s(), analytic.var_s, max_relative = 1e-8);
    assert_relative_eq!(acc.product_var(), delta.var_in, max_relative = 1e-8);
}

#[test]
fn split_thermal_joint_reproduces_the_pair_moments() {
    // μ₁ = 0.2 with both detection probabilities at 1.
    let s = scenario(SourceKind::Thb, 0.2, 1, 1.0, 1.0);
    let acc = split_thermal_truncated(0.2, 1.0, 1.0, 200);
    assert!(acc.mass > 1.0 - 1e-12);
    assert_relative_eq!(acc.cov(), 0.04, max_relative = 1e-8);
    let analytic = count_moments(&s).unwrap();
    assert_relative_eq!(acc.s1, analytic.mean_s, max_relative = 1e-8);
    assert_relative_eq!(acc.r1, analytic.mean_r, max_relative = 1e-8);
    assert_relative_eq!(acc.var_s(), analytic.var_s, max_relative = 1e-8);
    assert_relative_eq!(acc.var_r(), analytic.var_r, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), analytic.cov_sr, max_relative = 1e-8);
}

#[test]
fn split_thermal_joint_reproduces_the_product_variance() {
    let s = scenario(SourceKind::Thb, 0.2, 1, 1.0, 1.0);
    let acc = split_thermal_truncated(0.2, 1.0, 1.0, 200);
    let delta = delta_stats(&s).unwrap();
    assert_relative_eq!(acc.product_var(), delta.var_in, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), delta.mean_in, max_relative = 1e-8);
}

#[test]
fn split_thermal_joint_covers_lossy_unbalanced_detection() {
    let s = scenario(SourceKind::Thb, 0.3, 1, 0.6, 0.5);
    let acc = split_thermal_truncated(0.5, 0.3, 0.6, 200);
    assert!(acc.mass > 1.0 - 1e-12);
    let analytic = count_moments(&s).unwrap();
    let delta = delta_stats(&s).unwrap();
    // η²τμ² at η = 0.6, τ = 0.5, μ = 0.5.
    assert_relative_eq!(acc.cov(), 0.045, max_relative = 1e-8);
    assert_relative_eq!(acc.cov(), analytic.cov_sr, max_relative = 1e-8);
    assert_relative_eq!(acc.var_r(), analytic.var_r, max_relative = 1e-8);
    assert_relative_eq!(acc.product_var(), delta.var_in, max_relative = 1e-8);
}

// Collective-mode construction: the reference mode averages the M source
// modes, the signal mode averages all M + M_β modes reaching its
// detector. Every covariance entry is accumulated term by term from the
// per-mode blocks, with per-mode losses √(η_i η_j) on the correlations.
fn mode_sum_cm(s: &Scenario) -> (f64, f64, f64, f64) {
    let occ = s.mu_per_mode().unwrap();
    let modes = (s.m + s.m_beta) as f64;
    let norm_r = 1.0 / (s.m as f64).sqrt();
    let norm_s = 1.0 / modes.sqrt();
    let (c0, d0) = match s.source_kind {
        SourceKind::Twb => {
            let c = 2.0 * (occ.mu1 * (occ.mu1 + 1.0)).sqrt();
            (c, -c)
        }
        SourceKind::Thb => (2.0 * occ.mu1, 2.0 * occ.mu1),
    };
    let eta_r = s.eta;
    let eta_s = s.eta * s.tau;
    let loss = (eta_r * eta_s).sqrt();
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0.0;
    let mut d = 0.0;
    for _ in 0..s.m {
        a += norm_r * norm_r * (1.0 + 2.0 * eta_r * occ.mu1);
        if s.object_present {
            b += norm_s * norm_s * (1.0 + 2.0 * eta_s * occ.mu1);
            c += norm_r * norm_s * loss * c0;
            d += norm_r * norm_s * loss * d0;
        } else {
            // the signal detector port sees vacuum in these slots
            b += norm_s * norm_s;
        }
    }
    for _ in 0..s.m_beta {
        b += norm_s * norm_s * (1.0 + 2.0 * s.eta_beta * occ.mu_beta);
    }
    (a, b, c, d)
}

#[test]
fn mode_sum_construction_matches_the_effective_cm() {
    for kind in [SourceKind::Twb, SourceKind::Thb] {
        for n_beta in [0.0, 5000.0, 1e6] {
            for present in [true, false] {
                let s = Scenario {
                    object_present: present,
                    ..fig2_scenario(kind, n_beta)
                };
                let eff = effective_cm(&s).unwrap();
                let (a, b, c, d) = mode_sum_cm(&s);
                assert_relative_eq!(a, eff.cm().a(), max_relative = 1e-10);
                assert_relative_eq!(b, eff.cm().b(), max_relative = 1e-10);
                if c == 0.0 {
                    assert_eq!(eff.cm().c(), 0.0);
                    assert_eq!(eff.cm().d(), 0.0);
                } else {
                    assert_relative_eq!(c, eff.cm().c(), max_relative = 1e-10);
                    assert_relative_eq!(d, eff.cm().d(), max_relative = 1e-10);
                }
            }
        }
    }
}

#[test]
fn frozen_gaussian_reference_values_hold() {
    let twb = fig2_scenario(SourceKind::Twb, 5000.0);
    let thb = fig2_scenario(SourceKind::Thb, 5000.0);
    let mi_twb = mutual_info_renyi2(effective_cm(&twb).unwrap().cm());
    let mi_thb = mutual_info_renyi2(effective_cm(&thb).unwrap().cm());
    assert_relative_eq!(mi_twb, 3.0428169626759051e-2, max_relative = 1e-12);
    assert_relative_eq!(mi_thb, 3.143143174466537e-3, max_relative = 1e-12);

    let fig3_twb = Scenario {
        n: 4232.0,
        m_beta: 1300,
        n_beta: 1e6,
        ..fig2_scenario(SourceKind::Twb, 1e6)
    };
    let fig3_thb = Scenario {
        n: 3278.0,
        m_beta: 1300,
        n_beta: 1e6,
        ..fig2_scenario(SourceKind::Thb, 1e6)
    };
    assert_relative_eq!(
        asymptotic_ratio(&fig3_twb, &fig3_thb).unwrap(),
        15.136335531010628,
        max_relative = 1e-12
    );

    let equal_twb = fig2_scenario(SourceKind::Twb, 1e6);
    let equal_thb = fig2_scenario(SourceKind::Thb, 1e6);
    assert_relative_eq!(
        asymptotic_ratio(&equal_twb, &equal_thb).unwrap(),
        9.55,
        max_relative = 1e-13
    );
}
