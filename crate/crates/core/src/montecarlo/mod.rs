//! Monte Carlo estimation of photon-count statistics and Gaussian
//! mutual information.
//!
//! Two samplers, deliberately split. Detector counts are simulated in the
//! count basis (geometric pair numbers with binomial thinning for twin
//! beams, exponential intensities with Poisson counts for thermal beams),
//! which reproduces the counting statistics to all orders. Quadratures
//! are drawn from the effective covariance matrix, which is exact for
//! covariance and mutual-information estimates and for nothing else:
//! deriving count moments from quadrature draws would smuggle in Gaussian
//! fourth moments, so no estimator here does that.
//!
//! Reproducibility contract: every shot draws from a ChaCha stream keyed
//! by (seed, domain, shot index), with the domain in the top byte of the
//! stream id. Domain 0 is the scenario as given, domain 1 its
//! object-absent counterpart, domain 2 the quadrature sampler. Shots are
//! split into contiguous batches; each batch accumulates in shot order
//! with compensated summation and batch sums are folded in batch order,
//! so a given config produces bitwise identical results at any worker
//! count. Standard errors come from the spread of per-batch estimates.

use crate::illumination::{effective_cm, IlluminationError};
use crate::photon_stats::{count_moments, StatsError};
use crate::scenario::{Scenario, ScenarioError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub mod sampling;

pub use sampling::{
    sample_counts, sample_effective_quadratures, sample_thb_counts, sample_twb_counts,
    CountSample, QuadratureSampler,
};

#[derive(Debug, Error)]
pub enum MCError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Illumination(#[from] IlluminationError),
    #[error("{shots} shots cannot fill {batches} batches with two shots each")]
    InsufficientShots { shots: u64, batches: u32 },
    #[error("{batches} batches requested, at least {MIN_BATCHES} needed for a stable standard error")]
    TooFewBatches { batches: u32 },
    #[error("per-frame estimators need at least 2 pixels per frame, got {pixels}")]
    TooFewPixels { pixels: u32 },
    #[error("{shots} shots do not split into frames of {pixels} pixels with two frames in each of {batches} batches")]
    FrameMismatch { shots: u64, pixels: u32, batches: u32 },
}

/// How per-shot random streams advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamMode {
    /// Reseed from (seed, domain, shot) for every shot. Draws are
    /// addressable by shot index, so any partitioning of the shot range
    /// sees identical values.
    PerShotCounter,
    /// Seed once per batch at its first shot and draw sequentially.
    /// Cheaper per shot; still deterministic because batch boundaries
    /// depend only on the config.
    Sequential,
}

/// Which moments enter the Δ-based quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorConvention {
    /// Pooled sample moments over all shots, with the calibrated means of
    /// each configuration supplying Δ's constant offset.
    Population,
    /// Per-frame sample covariance (divisor pixels − 1), one Δ value per
    /// frame of pixels. Affects only Δ mean, Δ variance and the
    /// signal-to-noise ratio; the other quantities are frame-free.
    EmpiricalPerFrame,
}

/// Fewest batches accepted for the standard-error estimate.
pub const MIN_BATCHES: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCConfig {
    pub seed: u64,
    pub shots: u64,
    /// Pixels per frame for the per-frame convention. Defaults to the
    /// scenario's `n_pix` when unset.
    pub pixels: Option<u32>,
    pub batches: u32,
    pub stream_mode: StreamMode,
    pub convention: EstimatorConvention,
}

impl MCConfig {
    pub fn new(seed: u64, shots: u64) -> Self {
        MCConfig {
            seed,
            shots,
            pixels: None,
            batches: MIN_BATCHES,
            stream_mode: StreamMode::PerShotCounter,
            convention: EstimatorConvention::Population,
        }
    }

    fn validate(&self) -> Result<(), MCError> {
        if self.batches < MIN_BATCHES {
            return Err(MCError::TooFewBatches {
                batches: self.batches,
            });
        }
        if self.shots < 2 * self.batches as u64 {
            return Err(MCError::InsufficientShots {
                shots: self.shots,
                batches: self.batches,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Deviation from `reference` in units of the standard error. A zero
    /// standard error gives 0 on exact agreement and infinity otherwise,
    /// so degenerate estimates still rank correctly in a |z| test.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            return if self.value == reference {
                0.0
            } else {
                f64::INFINITY
            };
        }
        (self.value - reference) / self.std_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountStat {
    MeanS,
    MeanR,
    VarS,
    VarR,
    CovSr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Snr,
    Epsilon,
    Nrf,
    DeltaMean,
    DeltaVar,
    Count(CountStat),
    Mi,
}

const DOMAIN_GIVEN: u8 = 0;
const DOMAIN_ABSENT: u8 = 1;
const DOMAIN_QUADRATURE: u8 = 2;

/// The generator for one (seed, domain, shot) key. Shot indices occupy
/// the low 56 bits of the stream id, the domain the top byte.
pub fn shot_rng(seed: u64, domain: u8, shot: u64) -> ChaCha8Rng {
    debug_assert!(shot < 1 << 56, "shot index overflows the stream id");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 56) | shot);
    rng
}

// One generator per domain, reseeded per shot or advanced sequentially
// depending on the stream mode.
struct ShotStreams<'a> {
    seed: u64,
    mode: StreamMode,
    domains: &'a [u8],
    rngs: Vec<ChaCha8Rng>,
}

impl<'a> ShotStreams<'a> {
    fn new(seed: u64, mode: StreamMode, domains: &'a [u8], first_shot: u64) -> Self {
        let rngs = domains
            .iter()
            .map(|&d| shot_rng(seed, d, first_shot))
            .collect();
        ShotStreams {
            seed,
            mode,
            domains,
            rngs,
        }
    }

    fn for_shot(&mut self, shot: u64) -> &mut [ChaCha8Rng] {
        if self.mode == StreamMode::PerShotCounter {
            for (rng, &domain) in self.rngs.iter_mut().zip(self.domains) {
                *rng = shot_rng(self.seed, domain, shot);
            }
        }
        &mut self.rngs
    }
}

// Componentwise Kahan accumulator over K running sums.
struct Kahan<const K: usize> {
    sum: [f64; K],
    compensation: [f64; K],
}

impl<const K: usize> Kahan<K> {
    fn zero() -> Self {
        Kahan {
            sum: [0.0; K],
            compensation: [0.0; K],
        }
    }

    fn add(&mut self, values: [f64; K]) {
        for i in 0..K {
            let y = values[i] - self.compensation[i];
            let t = self.sum[i] + y;
            self.compensation[i] = (t - self.sum[i]) - y;
            self.sum[i] = t;
        }
    }
}

// Contiguous (start, len) ranges covering 0..units, sizes differing by at
// most one.
fn batch_ranges(units: u64, batches: u32) -> Vec<(u64, u64)> {
    let b = batches as u64;
    let base = units / b;
    let rem = units % b;
    (0..b)
        .map(|i| (i * base + i.min(rem), base + u64::from(i < rem)))
        .collect()
}

// Runs `unit_fn` over every unit, batched and in parallel, returning the
// pooled sums and the per-batch (sums, unit count) in batch order. The
// fold order is fixed by the batch structure, never by the scheduler.
fn run_batches<const K: usize, F>(
    cfg: &MCConfig,
    units: u64,
    shots_per_unit: u64,
    domains: &[u8],
    unit_fn: F,
) -> ([f64; K], Vec<([f64; K], u64)>)
where
    F: Fn(u64, &mut ShotStreams) -> [f64; K] + Sync,
{
    let per_batch: Vec<([f64; K], u64)> = batch_ranges(units, cfg.batches)
        .into_par_iter()
        .map(|(start, len)| {
            let mut streams =
                ShotStreams::new(cfg.seed, cfg.stream_mode, domains, start * shots_per_unit);
            let mut acc = Kahan::<K>::zero();
            for unit in start..start + len {
                acc.add(unit_fn(unit, &mut streams));
            }
            (acc.sum, len)
        })
        .collect();
    let mut total = Kahan::<K>::zero();
    for (sums, _) in &per_batch {
        total.add(*sums);
    }
    (total.sum, per_batch)
}

// Applies `value_fn` to the pooled sums for the point estimate and to
// each batch for the standard error (sample deviation of batch values
// over √batches).
fn finish<const K: usize>(
    cfg: &MCConfig,
    n_units: u64,
    total: &[f64; K],
    per_batch: &[([f64; K], u64)],
    value_fn: impl Fn(&[f64; K], f64) -> f64,
) -> MCEstimate {
    let value = value_fn(total, n_units as f64);
    let batch_values: Vec<f64> = per_batch
        .iter()
        .map(|(sums, len)| value_fn(sums, *len as f64))
        .collect();
    let b = batch_values.len() as f64;
    let mean = batch_values.iter().sum::<f64>() / b;
    let ss: f64 = batch_values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let std_error = (ss / (b - 1.0)).sqrt() / b.sqrt();
    MCEstimate {
        value,
        std_error,
        n_samples: n_units,
        seed: cfg.seed,
    }
}

// Per-shot accumulator slots for one configuration:
// [s, r, s², r², sr, (sr)²].
fn count_slots(c: CountSample) -> [f64; 6] {
    let s = c.n_s as f64;
    let r = c.n_r as f64;
    let sr = s * r;
    [s, r, s * s, r * r, sr, sr * sr]
}

struct CountBlock {
    mean_s: f64,
    mean_r: f64,
    var_s: f64,
    var_r: f64,
    cov: f64,
    product_mean: f64,
    product_var: f64,
}

fn count_block(sums: &[f64], n: f64) -> CountBlock {
    let mean_s = sums[0] / n;
    let mean_r = sums[1] / n;
    let product_mean = sums[4] / n;
    CountBlock {
        mean_s,
        mean_r,
        var_s: sums[2] / n - mean_s * mean_s,
        var_r: sums[3] / n - mean_r * mean_r,
        cov: product_mean - mean_s * mean_r,
        product_mean,
        product_var: sums[5] / n - product_mean * product_mean,
    }
}

fn count_pass_single(scenario: &Scenario, cfg: &MCConfig) -> ([f64; 6], Vec<([f64; 6], u64)>) {
    run_batches(cfg, cfg.shots, 1, &[DOMAIN_GIVEN], |shot, streams| {
        let rngs = streams.for_shot(shot);
        count_slots(sample_counts(scenario, &mut rngs[0]))
    })
}

fn count_pass_dual(
    scenario: &Scenario,
    absent: &Scenario,
    cfg: &MCConfig,
) -> ([f64; 12], Vec<([f64; 12], u64)>) {
    run_batches(
        cfg,
        cfg.shots,
        1,
        &[DOMAIN_GIVEN, DOMAIN_ABSENT],
        |shot, streams| {
            let rngs = streams.for_shot(shot);
            let given = count_slots(sample_counts(scenario, &mut rngs[0]));
            let other = count_slots(sample_counts(absent, &mut rngs[1]));
            let mut out = [0.0; 12];
            out[..6].copy_from_slice(&given);
            out[6..].copy_from_slice(&other);
            out
        },
    )
}

fn epsilon_value(b: &CountBlock) -> f64 {
    let ordered_s = b.var_s - b.mean_s;
    let ordered_r = b.var_r - b.mean_r;
    if ordered_s <= 0.0 || ordered_r <= 0.0 {
        return f64::NAN;
    }
    b.cov / (ordered_s * ordered_r).sqrt()
}

fn nrf_value(b: &CountBlock) -> f64 {
    let denom = b.mean_s + b.mean_r;
    if denom == 0.0 {
        return f64::NAN;
    }
    (b.var_s + b.var_r - 2.0 * b.cov) / denom
}

fn snr_value(block_in: &CountBlock, block_out: &CountBlock, off_in: f64, off_out: f64) -> f64 {
    let diff = (block_in.product_mean - off_in) - (block_out.product_mean - off_out);
    let noise = block_in.product_var + block_out.product_var;
    if noise == 0.0 {
        return if diff == 0.0 { 0.0 } else { f64::NAN };
    }
    diff.abs() / noise.sqrt()
}

// Per-frame sums feeding the sample covariance Δ̂.
struct FrameAcc {
    sum_s: f64,
    sum_r: f64,
    sum_sr: f64,
}

impl FrameAcc {
    fn zero() -> Self {
        FrameAcc {
            sum_s: 0.0,
            sum_r: 0.0,
            sum_sr: 0.0,
        }
    }

    fn push(&mut self, c: CountSample) {
        let s = c.n_s as f64;
        let r = c.n_r as f64;
        self.sum_s += s;
        self.sum_r += r;
        self.sum_sr += s * r;
    }

    fn delta(&self, pixels: u64) -> f64 {
        let p = pixels as f64;
        (self.sum_sr - self.sum_s * self.sum_r / p) / (p - 1.0)
    }
}

fn frame_layout(scenario: &Scenario, cfg: &MCConfig) -> Result<(u32, u64), MCError> {
    let pixels = cfg.pixels.unwrap_or(scenario.n_pix);
    if pixels < 2 {
        return Err(MCError::TooFewPixels { pixels });
    }
    let p = pixels as u64;
    let frames = cfg.shots / p;
    if cfg.shots % p != 0 || frames < 2 * cfg.batches as u64 {
        return Err(MCError::FrameMismatch {
            shots: cfg.shots,
            pixels,
            batches: cfg.batches,
        });
    }
    Ok((pixels, frames))
}

fn frame_pass_single(
    scenario: &Scenario,
    pixels: u32,
    frames: u64,
    cfg: &MCConfig,
) -> ([f64; 2], Vec<([f64; 2], u64)>) {
    let p = pixels as u64;
    run_batches(cfg, frames, p, &[DOMAIN_GIVEN], move |frame, streams| {
        let mut acc = FrameAcc::zero();
        for k in 0..p {
            let rngs = streams.for_shot(frame * p + k);
            acc.push(sample_counts(scenario, &mut rngs[0]));
        }
        let d = acc.delta(p);
        [d, d * d]
    })
}

fn frame_pass_dual(
    scenario: &Scenario,
    absent: &Scenario,
    pixels: u32,
    frames: u64,
    cfg: &MCConfig,
) -> ([f64; 4], Vec<([f64; 4], u64)>) {
    let p = pixels as u64;
    run_batches(
        cfg,
        frames,
        p,
        &[DOMAIN_GIVEN, DOMAIN_ABSENT],
        move |frame, streams| {
            let mut acc_in = FrameAcc::zero();
            let mut acc_out = FrameAcc::zero();
            for k in 0..p {
                let rngs = streams.for_shot(frame * p + k);
                acc_in.push(sample_counts(scenario, &mut rngs[0]));
                acc_out.push(sample_counts(absent, &mut rngs[1]));
            }
            let d_in = acc_in.delta(p);
            let d_out = acc_out.delta(p);
            [d_in, d_in * d_in, d_out, d_out * d_out]
        },
    )
}

fn calibrated_offset(scenario: &Scenario) -> Result<f64, MCError> {
    let m = count_moments(scenario)?;
    Ok(m.mean_s * m.mean_r)
}

/// Monte Carlo estimate of one quantity under the given config.
///
/// Count moments, ε and the noise reduction factor are always pooled over
/// all shots; `cfg.convention` switches only the Δ-based quantities
/// between the pooled and the per-frame estimator. The signal-to-noise
/// ratio simulates the object-present and object-absent configurations
/// side by side on independent streams, so a scenario given with the
/// object absent estimates an SNR consistent with zero.
pub fn estimate(
    scenario: &Scenario,
    quantity: Quantity,
    cfg: &MCConfig,
) -> Result<MCEstimate, MCError> {
    scenario.validate()?;
    cfg.validate()?;
    match (quantity, cfg.convention) {
        (Quantity::Mi, _) => estimate_mi(scenario, cfg),
        (Quantity::Count(stat), _) => {
            let (total, per_batch) = count_pass_single(scenario, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, move |s, n| {
                let b = count_block(&s[..6], n);
                match stat {
                    CountStat::MeanS => b.mean_s,
                    CountStat::MeanR => b.mean_r,
                    CountStat::VarS => b.var_s,
                    CountStat::VarR => b.var_r,
                    CountStat::CovSr => b.cov,
                }
            }))
        }
        (Quantity::Epsilon, _) => {
            let (total, per_batch) = count_pass_single(scenario, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, |s, n| {
                epsilon_value(&count_block(&s[..6], n))
            }))
        }
        (Quantity::Nrf, _) => {
            let (total, per_batch) = count_pass_single(scenario, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, |s, n| {
                nrf_value(&count_block(&s[..6], n))
            }))
        }
        (Quantity::DeltaMean, EstimatorConvention::Population) => {
            let off = calibrated_offset(scenario)?;
            let (total, per_batch) = count_pass_single(scenario, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, move |s, n| {
                count_block(&s[..6], n).product_mean - off
            }))
        }
        (Quantity::DeltaVar, EstimatorConvention::Population) => {
            let (total, per_batch) = count_pass_single(scenario, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, |s, n| {
                count_block(&s[..6], n).product_var
            }))
        }
        (Quantity::Snr, EstimatorConvention::Population) => {
            let absent = scenario.with_object(false);
            let off_in = calibrated_offset(scenario)?;
            let off_out = calibrated_offset(&absent)?;
            let (total, per_batch) = count_pass_dual(scenario, &absent, cfg);
            Ok(finish(cfg, cfg.shots, &total, &per_batch, move |s, n| {
                snr_value(
                    &count_block(&s[..6], n),
                    &count_block(&s[6..], n),
                    off_in,
                    off_out,
                )
            }))
        }
        (Quantity::DeltaMean, EstimatorConvention::EmpiricalPerFrame) => {
            let (pixels, frames) = frame_layout(scenario, cfg)?;
            let (total, per_batch) = frame_pass_single(scenario, pixels, frames, cfg);
            Ok(finish(cfg, frames, &total, &per_batch, |s, n| s[0] / n))
        }
        (Quantity::DeltaVar, EstimatorConvention::EmpiricalPerFrame) => {
            let (pixels, frames) = frame_layout(scenario, cfg)?;
            let (total, per_batch) = frame_pass_single(scenario, pixels, frames, cfg);
            Ok(finish(cfg, frames, &total, &per_batch, |s, n| {
                let mean = s[0] / n;
                s[1] / n - mean * mean
            }))
        }
        (Quantity::Snr, EstimatorConvention::EmpiricalPerFrame) => {
            let absent = scenario.with_object(false);
            let (pixels, frames) = frame_layout(scenario, cfg)?;
            let (total, per_batch) = frame_pass_dual(scenario, &absent, pixels, frames, cfg);
            Ok(finish(cfg, frames, &total, &per_batch, |s, n| {
                let mean_in = s[0] / n;
                let mean_out = s[2] / n;
                let var_in = s[1] / n - mean_in * mean_in;
                let var_out = s[3] / n - mean_out * mean_out;
                let noise = var_in + var_out;
                if noise == 0.0 {
                    return if mean_in == mean_out { 0.0 } else { f64::NAN };
                }
                (mean_in - mean_out).abs() / noise.sqrt()
            }))
        }
    }
}

fn estimate_mi(scenario: &Scenario, cfg: &MCConfig) -> Result<MCEstimate, MCError> {
    let sampler = QuadratureSampler::new(effective_cm(scenario)?.cm());
    let (total, per_batch) = run_batches(
        cfg,
        cfg.shots,
        1,
        &[DOMAIN_QUADRATURE],
        move |shot, streams| {
            let rngs = streams.for_shot(shot);
            let v = sampler.sample(&mut rngs[0]);
            [
                v[0] * v[0],
                v[1] * v[1],
                v[2] * v[2],
                v[3] * v[3],
                v[0] * v[2],
                v[1] * v[3],
            ]
        },
    );
    Ok(finish(cfg, cfg.shots, &total, &per_batch, |s, n| {
        // Standard-form symmetry is imposed on the estimate: â pools both
        // quadratures of mode 1, b̂ of mode 2.
        let a = (s[0] + s[1]) / (2.0 * n);
        let b = (s[2] + s[3]) / (2.0 * n);
        let c = s[4] / n;
        let d = s[5] / n;
        let ab = a * b;
        -0.5 * ((-c * c / ab).ln_1p() + (-d * d / ab).ln_1p())
    }))
}

/// Every count-statistics estimate from a single paired pass, object
/// present and absent sharing the shot budget on independent streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountBundle {
    pub mean_s: MCEstimate,
    pub mean_r: MCEstimate,
    pub var_s: MCEstimate,
    pub var_r: MCEstimate,
    pub cov_sr: MCEstimate,
    pub delta_mean: MCEstimate,
    pub delta_var: MCEstimate,
    pub snr: MCEstimate,
    pub epsilon: MCEstimate,
    pub nrf: MCEstimate,
}

/// Estimates the whole count bundle at once. Always uses the population
/// convention regardless of `cfg.convention`: the bundle exists to
/// cross-check the closed-form moments, which are population quantities.
pub fn estimate_count_bundle(scenario: &Scenario, cfg: &MCConfig) -> Result<CountBundle, MCError> {
    scenario.validate()?;
    cfg.validate()?;
    let absent = scenario.with_object(false);
    let off_in = calibrated_offset(scenario)?;
    let off_out = calibrated_offset(&absent)?;
    let (total, per_batch) = count_pass_dual(scenario, &absent, cfg);
    let shots = cfg.shots;
    let stat = |f: fn(&CountBlock) -> f64| {
        finish(cfg, shots, &total, &per_batch, move |s, n| {
            f(&count_block(&s[..6], n))
        })
    };
    Ok(CountBundle {
        mean_s: stat(|b| b.mean_s),
        mean_r: stat(|b| b.mean_r),
        var_s: stat(|b| b.var_s),
        var_r: stat(|b| b.var_r),
        cov_sr: stat(|b| b.cov),
        delta_mean: finish(cfg, shots, &total, &per_batch, move |s, n| {
            count_block(&s[..6], n).product_mean - off_in
        }),
        delta_var: stat(|b| b.product_var),
        snr: finish(cfg, shots, &total, &per_batch, move |s, n| {
            snr_value(
                &count_block(&s[..6], n),
                &count_block(&s[6..], n),
                off_in,
                off_out,
            )
        }),
        epsilon: stat(|b| epsilon_value(b)),
        nrf: stat(|b| nrf_value(b)),
    })
}
