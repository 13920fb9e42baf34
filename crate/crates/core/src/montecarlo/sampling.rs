//! Samplers for the detection model: photon counts in the count basis and
//! effective-mode quadratures from the Gaussian description.
//!
//! Counts are never derived from quadrature draws. Counting moments beyond
//! second order are not reproduced by sampling a covariance matrix, so the
//! count samplers simulate the per-mode photon statistics directly and the
//! quadrature sampler is reserved for covariance and mutual-information
//! estimation, where Gaussian sampling is exact.

use crate::gaussian::TwoModeCM;
use crate::illumination::{effective_cm, IlluminationError};
use crate::photon_stats::signal_arm_probability;
use crate::scenario::{Scenario, SourceKind};
use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};

/// Photon counts at the two detectors for one pixel and one shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountSample {
    pub n_s: u64,
    pub n_r: u64,
}

// Geometric photon number with mean mu, P(n) = μⁿ/(1+μ)^{n+1}, by
// inversion: n = floor(ln U / ln(μ/(1+μ))), U uniform on (0,1]. The
// closed unit endpoint keeps ln U finite.
fn sample_geometric(mu: f64, rng: &mut impl Rng) -> u64 {
    if mu == 0.0 {
        return 0;
    }
    let u: f64 = 1.0 - rng.random::<f64>();
    (u.ln() / (mu / (1.0 + mu)).ln()).floor() as u64
}

// Exponential intensity with mean mu by inversion.
fn sample_exponential(mu: f64, rng: &mut impl Rng) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let u: f64 = 1.0 - rng.random::<f64>();
    -mu * u.ln()
}

fn sample_binomial(n: u64, p: f64, rng: &mut impl Rng) -> u64 {
    if n == 0 || p == 0.0 {
        return 0;
    }
    Binomial::new(n, p)
        .expect("detection probability is in [0, 1]")
        .sample(rng)
}

fn sample_poisson(rate: f64, rng: &mut impl Rng) -> u64 {
    if rate == 0.0 {
        return 0;
    }
    let count: f64 = Poisson::new(rate)
        .expect("rate is positive and finite")
        .sample(rng);
    count as u64
}

// Bath contribution to the signal detector: per bath mode, Poisson counts
// on an exponentially distributed intensity (exact for a thermal state
// under loss).
fn sample_bath(scenario: &Scenario, mu_beta: f64, rng: &mut impl Rng) -> u64 {
    let mut total = 0;
    for _ in 0..scenario.m_beta {
        let intensity = sample_exponential(mu_beta, rng);
        total += sample_poisson(scenario.eta_beta * intensity, rng);
    }
    total
}

/// One shot of both detector counts for a twin-beam scenario.
///
/// Per source pair the photon number is geometric with mean μ₁ and each
/// detector sees an independent binomial thinning of it: η on the reference
/// arm, η·τ on the signal arm when the object is present (no signal-arm
/// draw when it is absent). Bath modes then add thermal counts to the
/// signal detector. The draw order (source pairs first, then bath modes) is
/// fixed as part of the reproducibility contract.
///
/// # Panics
/// If the scenario is invalid or not twin-beam.
pub fn sample_twb_counts(scenario: &Scenario, rng: &mut impl Rng) -> CountSample {
    assert_eq!(
        scenario.source_kind,
        SourceKind::Twb,
        "twin-beam sampler called on a {} scenario",
        scenario.source_kind.as_str()
    );
    let occ = scenario.mu_per_mode().expect("scenario is valid");
    let p_s = signal_arm_probability(scenario);
    let mut n_r = 0;
    let mut n_s = 0;
    for _ in 0..scenario.m {
        let n = sample_geometric(occ.mu1, rng);
        n_r += sample_binomial(n, scenario.eta, rng);
        if p_s > 0.0 {
            n_s += sample_binomial(n, p_s, rng);
        }
    }
    n_s += sample_bath(scenario, occ.mu_beta, rng);
    CountSample { n_s, n_r }
}

/// One shot of both detector counts for a thermal-beam scenario.
///
/// Per source mode pair one intensity is drawn exponentially with mean μ₁
/// and the two detectors see independent Poisson counts at rates η·I and
/// η·τ·I (exact sampling of the positive P-representation). Bath and draw
/// order as in [`sample_twb_counts`].
///
/// # Panics
/// If the scenario is invalid or not thermal-beam.
pub fn sample_thb_counts(scenario: &Scenario, rng: &mut impl Rng) -> CountSample {
    assert_eq!(
        scenario.source_kind,
        SourceKind::Thb,
        "thermal-beam sampler called on a {} scenario",
        scenario.source_kind.as_str()
    );
    let occ = scenario.mu_per_mode().expect("scenario is valid");
    let p_s = signal_arm_probability(scenario);
    let mut n_r = 0;
    let mut n_s = 0;
    for _ in 0..scenario.m {
        let intensity = sample_exponential(occ.mu1, rng);
        n_r += sample_poisson(scenario.eta * intensity, rng);
        if p_s > 0.0 {
            n_s += sample_poisson(p_s * intensity, rng);
        }
    }
    n_s += sample_bath(scenario, occ.mu_beta, rng);
    CountSample { n_s, n_r }
}

/// Dispatches to the sampler matching the scenario's source kind.
pub fn sample_counts(scenario: &Scenario, rng: &mut impl Rng) -> CountSample {
    match scenario.source_kind {
        SourceKind::Twb => sample_twb_counts(scenario, rng),
        SourceKind::Thb => sample_thb_counts(scenario, rng),
    }
}

/// Draws (q1, p1, q2, p2) from the zero-mean Gaussian with a standard-form
/// covariance matrix, via per-block 2×2 Cholesky factors.
#[derive(Debug, Clone)]
pub struct QuadratureSampler {
    l11: f64,
    lq21: f64,
    lq22: f64,
    lp21: f64,
    lp22: f64,
}

impl QuadratureSampler {
    pub fn new(cm: &TwoModeCM) -> Self {
        let a = cm.a();
        let l11 = a.sqrt();
        // ab − c² > 0 and ab − d² > 0 hold for every constructed
        // TwoModeCM, so both second pivots are real.
        QuadratureSampler {
            l11,
            lq21: cm.c() / l11,
            lq22: (cm.b() - cm.c() * cm.c() / a).sqrt(),
            lp21: cm.d() / l11,
            lp22: (cm.b() - cm.d() * cm.d() / a).sqrt(),
        }
    }

    /// One sample, consuming four standard-normal draws in the order
    /// (q1, p1, q2 extra, p2 extra).
    pub fn sample(&self, rng: &mut impl Rng) -> [f64; 4] {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let z3: f64 = rng.sample(StandardNormal);
        let z4: f64 = rng.sample(StandardNormal);
        [
            self.l11 * z1,
            self.l11 * z2,
            self.lq21 * z1 + self.lq22 * z3,
            self.lp21 * z2 + self.lp22 * z4,
        ]
    }
}

/// Builds the scenario's effective covariance matrix and draws one
/// quadrature 4-vector from it. For sampling loops construct one
/// [`QuadratureSampler`] instead.
pub fn sample_effective_quadratures(
    scenario: &Scenario,
    rng: &mut impl Rng,
) -> Result<[f64; 4], IlluminationError> {
    Ok(QuadratureSampler::new(effective_cm(scenario)?.cm()).sample(rng))
}
