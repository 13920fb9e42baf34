//! Monte Carlo validation campaign: every closed form with a sampler-side
//! estimator, checked on a fixed set of instances spanning single-mode and
//! multimode sources with no bath, a bath comparable to the source, and a
//! bath that dominates it, for both source kinds.
//!
//! Statistical policy: each row's z = (estimate - analytic)/SE should be
//! roughly standard normal, so strays happen. Rows with |z| > 3 are rerun
//! once on a fresh derived seed. After reruns the campaign fails if any
//! |z| > 4, or if more than ceil(rows/30) rows sit in (3, 4].
//!
//! Instance shot counts are sized so the closed-form signal is actually
//! resolved by the sampler (the dominant-bath instances need the most,
//! since the Δ noise grows with the square of the bath brightness while
//! the signal does not).

use crate::args::ValidateArgs;
use crate::CliError;
use quill_core::{
    cauchy_schwarz_epsilon, count_moments, delta_stats, effective_cm, estimate,
    estimate_count_bundle, mutual_info_renyi2, noise_reduction_factor, snr, MCConfig, MCEstimate,
    Quantity, Scenario, SourceKind,
};
use std::fmt::Write;
use std::time::Instant;

/// Weyl-style spacing: consecutive instances land far apart in seed space.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
/// Added on rerun so a fresh seed cannot collide with another instance.
const RERUN_SALT: u64 = 0xA076_1D64_78BD_642F;

/// Quadrature shots for the mutual-information row. Much cheaper per shot
/// than the count passes (no per-mode loop), so one size fits all instances.
const MI_SHOTS: u64 = 1_000_000;

pub struct Instance {
    pub label: String,
    pub scenario: Scenario,
    pub shots: u64,
}

fn instance(
    label: &str,
    kind: SourceKind,
    mu1: f64,
    m: u64,
    mu_beta: f64,
    m_beta: u64,
    shots: u64,
) -> Instance {
    let eta = 0.38;
    let eta_beta = 0.5;
    Instance {
        label: format!("{}-{label}", kind.as_str().to_lowercase()),
        scenario: Scenario {
            source_kind: kind,
            n: eta * mu1 * m as f64,
            m,
            n_beta: eta_beta * mu_beta * m_beta as f64,
            m_beta,
            eta,
            eta_beta,
            tau: 0.5,
            object_present: true,
            n_pix: 80,
        },
        shots,
    }
}

/// The standard campaign. Labels carry the regime; occupancies are chosen
/// so every per-mode statistic differs measurably between the kinds.
///
/// Shot counts are per instance because two quantities set very different
/// floors. The Δ mean must clear its own sampling noise, which grows with
/// the square of the bath brightness while the signal does not (the hot
/// instances). And the epsilon denominators are variance excesses over the
/// mean that every single batch must resolve, or the batch value is
/// undefined; at 0.1 photons per mode that excess is tiny, so the dim
/// multimode instances get more shots than the bright one.
pub fn standard_suite() -> Vec<Instance> {
    let mut suite = Vec::new();
    for kind in [SourceKind::Twb, SourceKind::Thb] {
        // single source mode at half a photon per mode, N = 0.19
        suite.push(instance("m1-no-bath", kind, 0.5, 1, 0.0, 0, 2_000_000));
        suite.push(instance("m1-mid-bath", kind, 0.5, 1, 1.0, 3, 2_000_000));
        suite.push(instance("m1-hot-bath", kind, 0.5, 1, 20.0, 3, 10_000_000));
        // 500 source modes: bright with no bath, then a tenth of a photon
        // per mode against a comparable and a dominant bath
        suite.push(instance("m500-no-bath", kind, 0.5, 500, 0.0, 0, 200_000));
        suite.push(instance("m500-mid-bath", kind, 0.1, 500, 2.0, 20, 1_000_000));
        suite.push(instance("m500-hot-bath", kind, 0.1, 500, 50.0, 20, 1_000_000));
    }
    // all detectors dark: every moment is exactly zero and the samplers
    // must reproduce that without any tolerance
    suite.push(Instance {
        label: "vacuum".into(),
        scenario: Scenario {
            source_kind: SourceKind::Twb,
            n: 0.0,
            m: 1,
            n_beta: 0.0,
            m_beta: 0,
            eta: 0.38,
            eta_beta: 0.5,
            tau: 0.5,
            object_present: true,
            n_pix: 80,
        },
        shots: 200_000,
    });
    suite
}

#[derive(Debug, Clone)]
struct RowData {
    quantity: &'static str,
    analytic: f64,
    estimate: MCEstimate,
    reran: bool,
}

impl RowData {
    fn z(&self) -> f64 {
        self.estimate.z_score(self.analytic)
    }
}

pub struct Row {
    pub instance: String,
    pub quantity: &'static str,
    pub analytic: f64,
    pub estimate: MCEstimate,
    pub z: f64,
    pub reran: bool,
}

/// A one-sided consistency check: the estimate may sit below the bound by
/// any amount, and up to 3 standard errors above it.
pub struct BoundRow {
    pub instance: String,
    pub value: f64,
    pub std_error: f64,
    pub pass: bool,
}

pub struct SuiteReport {
    pub rows: Vec<Row>,
    pub bounds: Vec<BoundRow>,
    pub reruns: usize,
    pub outliers: usize,
    pub failures: usize,
    pub allowance: usize,
    pub passed: bool,
}

fn mc_err(e: impl std::fmt::Display) -> CliError {
    CliError::usage(e)
}

/// One full pass over an instance: a dual count pass feeding the ten count
/// statistics, and a quadrature pass for the mutual information. The row
/// list and its order are deterministic for a given scenario, which the
/// rerun logic relies on.
fn measured_rows(
    scenario: &Scenario,
    shots: u64,
    mi_shots: u64,
    seed: u64,
) -> Result<Vec<RowData>, CliError> {
    let cfg = MCConfig::new(seed, shots);
    let bundle = estimate_count_bundle(scenario, &cfg).map_err(mc_err)?;
    let moments = count_moments(scenario).map_err(mc_err)?;
    let delta = delta_stats(scenario).map_err(mc_err)?;

    let row = |quantity, analytic, estimate| RowData {
        quantity,
        analytic,
        estimate,
        reran: false,
    };
    let mut rows = vec![
        row("mean_s", moments.mean_s, bundle.mean_s),
        row("mean_r", moments.mean_r, bundle.mean_r),
        row("var_s", moments.var_s, bundle.var_s),
        row("var_r", moments.var_r, bundle.var_r),
        row("cov_sr", moments.cov_sr, bundle.cov_sr),
        row("delta_mean", delta.mean_in, bundle.delta_mean),
        row("delta_var", delta.var_in, bundle.delta_var),
    ];
    // the ratio quantities divide by source moments, so they only make
    // sense with source light; the vacuum instance stops here
    if scenario.n > 0.0 {
        rows.push(row("snr", snr(scenario).map_err(mc_err)?, bundle.snr));
        rows.push(row(
            "epsilon",
            cauchy_schwarz_epsilon(scenario).map_err(mc_err)?,
            bundle.epsilon,
        ));
        rows.push(row(
            "nrf",
            noise_reduction_factor(scenario).map_err(mc_err)?,
            bundle.nrf,
        ));
        let mi_cfg = MCConfig::new(seed, mi_shots);
        let mi_est = estimate(scenario, Quantity::Mi, &mi_cfg).map_err(mc_err)?;
        let cm = effective_cm(scenario).map_err(mc_err)?;
        rows.push(row("mi", mutual_info_renyi2(cm.cm()), mi_est));
    }
    Ok(rows)
}

pub fn run_suite(base_seed: u64, shots_override: Option<u64>) -> Result<SuiteReport, CliError> {
    let suite = standard_suite();
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    let mut reruns = 0usize;

    for (idx, inst) in suite.iter().enumerate() {
        let shots = shots_override.unwrap_or(inst.shots);
        let mi_shots = shots_override.unwrap_or(MI_SHOTS);
        let seed = base_seed.wrapping_add((idx as u64 + 1).wrapping_mul(SEED_STRIDE));
        let started = Instant::now();
        let mut measured = measured_rows(&inst.scenario, shots, mi_shots, seed)?;

        // a non-finite z (an undefined batch value poisoning the SE, or a
        // zero SE with a mismatched value) is as rerun-worthy as a large one
        let stray = |r: &RowData| !r.z().is_finite() || r.z().abs() > 3.0;
        let strays: Vec<usize> = measured
            .iter()
            .enumerate()
            .filter(|(_, r)| stray(r))
            .map(|(i, _)| i)
            .collect();
        if !strays.is_empty() {
            let fresh = measured_rows(
                &inst.scenario,
                shots,
                mi_shots,
                seed.wrapping_add(RERUN_SALT),
            )?;
            for &i in &strays {
                debug_assert_eq!(fresh[i].quantity, measured[i].quantity);
                measured[i] = RowData {
                    reran: true,
                    ..fresh[i].clone()
                };
                reruns += 1;
            }
        }

        if inst.scenario.source_kind == SourceKind::Thb && inst.scenario.n > 0.0 {
            let eps = measured
                .iter()
                .find(|r| r.quantity == "epsilon")
                .expect("thb instances carry an epsilon row");
            bounds.push(BoundRow {
                instance: inst.label.clone(),
                value: eps.estimate.value,
                std_error: eps.estimate.std_error,
                pass: eps.analytic <= 1.0 + 1e-9
                    && eps.estimate.value <= 1.0 + 3.0 * eps.estimate.std_error,
            });
        }

        for r in measured {
            rows.push(Row {
                instance: inst.label.clone(),
                quantity: r.quantity,
                analytic: r.analytic,
                z: r.z(),
                estimate: r.estimate,
                reran: r.reran,
            });
        }
        eprintln!(
            "[{}/{}] {} done in {:.1}s",
            idx + 1,
            suite.len(),
            inst.label,
            started.elapsed().as_secs_f64()
        );
    }

    // NaN must land in failures, so count by the complement of passing
    let failures = rows.iter().filter(|r| !(r.z.abs() <= 4.0)).count();
    let outliers = rows
        .iter()
        .filter(|r| r.z.abs() > 3.0 && r.z.abs() <= 4.0)
        .count();
    let allowance = rows.len().div_ceil(30);
    let bounds_ok = bounds.iter().all(|b| b.pass);
    let passed = failures == 0 && outliers <= allowance && bounds_ok;
    Ok(SuiteReport {
        rows,
        bounds,
        reruns,
        outliers,
        failures,
        allowance,
        passed,
    })
}

/// The deterministic part of the output. Progress and timing go to stderr;
/// everything here depends only on the seed and shot counts, so two runs
/// with the same inputs print identical reports.
pub fn render_report(report: &SuiteReport, base_seed: u64, shots_override: Option<u64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "count/quadrature Monte Carlo vs closed forms");
    let _ = writeln!(
        out,
        "  convention: population moments pooled over all shots"
    );
    let _ = writeln!(
        out,
        "  streams:    one counter-keyed stream per shot, independent of batching"
    );
    let _ = writeln!(
        out,
        "  policy:     |z| > 3 rows rerun once on a fresh seed; fail on any |z| > 4, or more than {} rows in (3, 4]",
        report.allowance
    );
    match shots_override {
        Some(k) => {
            let _ = writeln!(out, "  seed: {base_seed}   shots: {k} (override)");
        }
        None => {
            let _ = writeln!(out, "  seed: {base_seed}   shots: per instance");
        }
    }
    let _ = writeln!(out);

    let name_w = report
        .rows
        .iter()
        .map(|r| r.instance.len())
        .max()
        .unwrap_or(8);
    let _ = writeln!(
        out,
        "{:<name_w$}  {:<10}  {:>14}  {:>14}  {:>9}  {:>7}",
        "instance", "quantity", "analytic", "estimate", "std err", "z"
    );
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:<name_w$}  {:<10}  {:>14.6e}  {:>14.6e}  {:>9.2e}  {:>+7.2}{}",
            r.instance,
            r.quantity,
            r.analytic,
            r.estimate.value,
            r.estimate.std_error,
            r.z,
            if r.reran { "  (rerun)" } else { "" }
        );
    }
    let _ = writeln!(out);
    for b in &report.bounds {
        let _ = writeln!(
            out,
            "epsilon <= 1 bound  {:<name_w$}  {:.6e} + 3 * {:.2e}  {}",
            b.instance,
            b.value,
            b.std_error,
            if b.pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        out,
        "rows: {}  reruns: {}  outliers (3 < |z| <= 4): {} of {} allowed  failures (|z| > 4): {}",
        report.rows.len(),
        report.reruns,
        report.outliers,
        report.allowance,
        report.failures
    );
    let _ = writeln!(out, "{}", if report.passed { "PASS" } else { "FAIL" });
    out
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let seed = crate::resolve_seed(args.seed)?;
    let report = run_suite(seed, args.shots)?;
    print!("{}", render_report(&report, seed, args.shots));
    if report.passed {
        Ok(())
    } else {
        Err(CliError::validation(format!(
            "{} rows beyond |z| = 4, {} rows in (3, 4] with {} allowed, {} bound checks failed",
            report.failures,
            report.outliers,
            report.allowance,
            report.bounds.iter().filter(|b| !b.pass).count()
        )))
    }
}
