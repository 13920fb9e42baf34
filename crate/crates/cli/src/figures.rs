//! The two canonical comparisons.
//!
//! `figure2`: both sources at the same detected brightness, so every
//! per-mode advantage of the twin beams shows up directly in the ratios and
//! both ratio curves share one dominant-bath plateau.
//!
//! `figure3`: deliberately unequal brightness (the twin-beam source
//! brighter), which splits the SNR and MI plateaus away from the closed-form
//! asymptote; the asymptote line is still drawn as the common reference.

use crate::args::{FigureArgs, ScenarioOverrides};
use crate::grid;
use crate::sweep::{render_csv, sweep_table, SweepRow, COLUMNS};
use crate::svg::{self, Plot, Series};
use crate::CliError;
use quill_core::{Scenario, SourceKind};
use std::path::Path;

/// Equal-brightness defaults: N = 4000 over M = 90000 modes for both
/// sources, a 50-mode bath, eta = 0.38 on the source path.
fn equal_brightness_bases() -> (Scenario, Scenario) {
    let twb = Scenario {
        source_kind: SourceKind::Twb,
        n: 4000.0,
        m: 90_000,
        n_beta: 0.0, // swept
        m_beta: 50,
        eta: 0.38,
        eta_beta: 0.5,
        tau: 0.5,
        object_present: true,
        n_pix: 80,
    };
    let thb = Scenario {
        source_kind: SourceKind::Thb,
        ..twb.clone()
    };
    (twb, thb)
}

/// Unequal-brightness defaults: twin beams at N = 4232, thermal beams at
/// N = 3278, bath spread over 1300 modes.
fn unequal_brightness_bases() -> (Scenario, Scenario) {
    let (mut twb, mut thb) = equal_brightness_bases();
    twb.n = 4232.0;
    thb.n = 3278.0;
    twb.m_beta = 1300;
    thb.m_beta = 1300;
    (twb, thb)
}

fn apply_overrides(ov: &ScenarioOverrides, twb: &mut Scenario, thb: &mut Scenario) {
    if let Some(n) = ov.n {
        twb.n = n;
        thb.n = n;
    }
    if let Some(n) = ov.n_twb {
        twb.n = n;
    }
    if let Some(n) = ov.n_thb {
        thb.n = n;
    }
    for s in [&mut *twb, &mut *thb] {
        if let Some(m) = ov.m {
            s.m = m;
        }
        if let Some(m_beta) = ov.m_beta {
            s.m_beta = m_beta;
        }
        if let Some(eta) = ov.eta {
            s.eta = eta;
        }
        if let Some(eta_beta) = ov.eta_beta {
            s.eta_beta = eta_beta;
        }
        if let Some(tau) = ov.tau {
            s.tau = tau;
        }
        if let Some(n_pix) = ov.n_pix {
            s.n_pix = n_pix;
        }
    }
}

fn resolve_grid(args: &FigureArgs) -> Result<Vec<f64>, CliError> {
    match &args.grid {
        Some(text) => grid::parse_grid(text),
        None => Ok(grid::default_grid()),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))
}

fn ratio_plot(rows: &[SweepRow], title: &str) -> Plot {
    Plot {
        title: title.to_string(),
        x_label: "bath photons per pixel".into(),
        y_label: "twin-beam / thermal-beam ratio".into(),
        log_y: false,
        series: vec![
            Series {
                label: "R_SNR".into(),
                color: "#1565c0",
                dashed: false,
                points: rows.iter().map(|r| (r.n_beta, r.r_snr)).collect(),
            },
            Series {
                label: "R_MI".into(),
                color: "#c62828",
                dashed: true,
                points: rows.iter().map(|r| (r.n_beta, r.r_mi)).collect(),
            },
            Series {
                label: "asymptote".into(),
                color: "#757575",
                dashed: true,
                points: rows.iter().map(|r| (r.n_beta, r.asymptote)).collect(),
            },
        ],
    }
}

fn curves_plot(rows: &[SweepRow], title: &str) -> Plot {
    Plot {
        title: title.to_string(),
        x_label: "bath photons per pixel".into(),
        y_label: "per-pair SNR / MI (nats)".into(),
        log_y: true,
        series: vec![
            Series {
                label: "SNR TWB".into(),
                color: "#1565c0",
                dashed: false,
                points: rows.iter().map(|r| (r.n_beta, r.snr_twb)).collect(),
            },
            Series {
                label: "SNR THB".into(),
                color: "#2e7d32",
                dashed: false,
                points: rows.iter().map(|r| (r.n_beta, r.snr_thb)).collect(),
            },
            Series {
                label: "MI TWB".into(),
                color: "#c62828",
                dashed: true,
                points: rows.iter().map(|r| (r.n_beta, r.mi_twb)).collect(),
            },
            Series {
                label: "MI THB".into(),
                color: "#ef6c00",
                dashed: true,
                points: rows.iter().map(|r| (r.n_beta, r.mi_thb)).collect(),
            },
        ],
    }
}

pub fn cmd_figure2(args: &FigureArgs) -> Result<(), CliError> {
    let (mut twb, mut thb) = equal_brightness_bases();
    apply_overrides(&args.overrides, &mut twb, &mut thb);
    let grid = resolve_grid(args)?;
    let rows = sweep_table(&twb, &thb, &grid)?;
    ensure_out_dir(&args.out)?;
    write_text(&args.out.join("figure2.csv"), &render_csv(&rows, &COLUMNS))?;
    if args.format.svg() {
        let plot = ratio_plot(&rows, "Equal-brightness SNR and MI ratios vs bath");
        write_text(&args.out.join("figure2.svg"), &svg::render(&plot))?;
    }
    println!("dominant-bath asymptote: {}", rows[0].asymptote);
    Ok(())
}

pub fn cmd_figure3(args: &FigureArgs) -> Result<(), CliError> {
    let (mut twb, mut thb) = unequal_brightness_bases();
    apply_overrides(&args.overrides, &mut twb, &mut thb);
    let grid = resolve_grid(args)?;
    let rows = sweep_table(&twb, &thb, &grid)?;
    ensure_out_dir(&args.out)?;
    println!("theory curves only; no measured data or uncertainty bands are generated");
    write_text(&args.out.join("figure3.csv"), &render_csv(&rows, &COLUMNS))?;
    if args.format.svg() {
        let curves = curves_plot(&rows, "Per-pair SNR and MI vs bath, unequal brightness");
        write_text(&args.out.join("figure3_curves.svg"), &svg::render(&curves))?;
        let ratios = ratio_plot(&rows, "SNR and MI ratios vs bath, unequal brightness");
        write_text(&args.out.join("figure3_ratios.svg"), &svg::render(&ratios))?;
    }
    println!(
        "asymptotic enhancement (dominant bath): {}",
        rows[0].asymptote
    );
    Ok(())
}

/// The figure bases with overrides applied: figure2 defaults when
/// `equal_brightness`, figure3 defaults otherwise. Public so tests can pin
/// the exact operating points the commands run at.
pub fn bases(equal_brightness: bool, ov: &ScenarioOverrides) -> (Scenario, Scenario) {
    let (mut twb, mut thb) = if equal_brightness {
        equal_brightness_bases()
    } else {
        unequal_brightness_bases()
    };
    apply_overrides(ov, &mut twb, &mut thb);
    (twb, thb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_touch_the_right_fields() {
        let ov = ScenarioOverrides {
            n: Some(100.0),
            n_thb: Some(80.0),
            m: Some(1000),
            eta: Some(0.5),
            ..Default::default()
        };
        let (twb, thb) = bases(true, &ov);
        assert_eq!(twb.n, 100.0);
        assert_eq!(thb.n, 80.0); // specific beats shared
        assert_eq!(twb.m, 1000);
        assert_eq!(thb.m, 1000);
        assert_eq!(twb.eta, 0.5);
        assert_eq!(twb.m_beta, 50);
    }

    #[test]
    fn default_bases_validate() {
        for equal in [true, false] {
            let (twb, thb) = bases(equal, &ScenarioOverrides::default());
            twb.validate().unwrap();
            thb.validate().unwrap();
            assert_eq!(twb.source_kind, SourceKind::Twb);
            assert_eq!(thb.source_kind, SourceKind::Thb);
        }
    }
}
