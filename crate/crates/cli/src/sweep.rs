//! The ratio table behind the figure and sweep commands.
//!
//! One row per bath grid point: per-pair SNR and Rényi-2 mutual information
//! for both sources, their ratios, and the dominant-bath asymptote (constant
//! across rows, kept as a column so a plotted table is self-contained).

use crate::args::SweepArgs;
use crate::grid::log_grid;
use crate::CliError;
use quill_core::{effective_cm, mi_ratio, mutual_info_renyi2, snr, snr_ratio, Scenario, SourceKind};
use serde::Deserialize;
use std::fmt::Write;

/// Canonical column order. Spec `outputs` entries must come from this list;
/// an empty list means all of them.
pub const COLUMNS: [&str; 8] = [
    "N_beta", "SNR_TWB", "SNR_THB", "MI_TWB", "MI_THB", "R_SNR", "R_MI", "asymptote",
];

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n_beta: f64,
    pub snr_twb: f64,
    pub snr_thb: f64,
    pub mi_twb: f64,
    pub mi_thb: f64,
    pub r_snr: f64,
    pub r_mi: f64,
    pub asymptote: f64,
}

impl SweepRow {
    fn column(&self, name: &str) -> f64 {
        match name {
            "N_beta" => self.n_beta,
            "SNR_TWB" => self.snr_twb,
            "SNR_THB" => self.snr_thb,
            "MI_TWB" => self.mi_twb,
            "MI_THB" => self.mi_thb,
            "R_SNR" => self.r_snr,
            "R_MI" => self.r_mi,
            "asymptote" => self.asymptote,
            _ => unreachable!("columns are validated before rendering"),
        }
    }
}

/// Evaluates the closed forms over a bath grid. The SNR columns are the
/// per-pair quantity; multiply by sqrt(n_pix) for a frame.
pub fn sweep_table(
    twb: &Scenario,
    thb: &Scenario,
    grid: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    let asymptote = quill_core::asymptotic_ratio(twb, thb).map_err(CliError::usage)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &n_beta in grid {
        let context = |e: &dyn std::fmt::Display| format!("at n_beta = {n_beta}: {e}");
        let t = Scenario {
            n_beta,
            ..twb.clone()
        };
        let h = Scenario {
            n_beta,
            ..thb.clone()
        };
        rows.push(SweepRow {
            n_beta,
            snr_twb: snr(&t).map_err(|e| CliError::usage(context(&e)))?,
            snr_thb: snr(&h).map_err(|e| CliError::usage(context(&e)))?,
            mi_twb: mutual_info_renyi2(effective_cm(&t).map_err(|e| CliError::usage(context(&e)))?.cm()),
            mi_thb: mutual_info_renyi2(effective_cm(&h).map_err(|e| CliError::usage(context(&e)))?.cm()),
            r_snr: snr_ratio(&t, &h).map_err(|e| CliError::usage(context(&e)))?,
            r_mi: mi_ratio(&t, &h).map_err(|e| CliError::usage(context(&e)))?,
            asymptote,
        });
    }
    Ok(rows)
}

/// Renders rows as CSV: `{:.16e}` cells (17 significant digits, enough to
/// round-trip an f64 exactly), comma separated, LF line endings, no locale
/// dependence anywhere.
pub fn render_csv(rows: &[SweepRow], columns: &[&str]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * columns.len() * 26);
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        for (i, col) in columns.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.16e}", row.column(col));
        }
        out.push('\n');
    }
    out
}

/// On-disk sweep description:
///
/// ```json
/// {
///   "twb": { "source_kind": "TWB", "n": 4000.0, "m": 90000, ... },
///   "thb": { "source_kind": "THB", ... },
///   "sweep": { "variable": "n_beta", "min": 10.0, "max": 1e7, "count": 60 },
///   "outputs": ["N_beta", "R_SNR"]
/// }
/// ```
///
/// Unknown keys anywhere are an error; a misspelled field must not silently
/// fall back to a default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub twb: Scenario,
    pub thb: Scenario,
    pub sweep: SweepAxis,
    #[serde(default)]
    pub outputs: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Axes the table knows how to vary. Only the bath brightness today; the
/// enum exists so a spec asking for anything else fails at parse time
/// instead of being silently ignored.
#[derive(Debug, Clone, Copy, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "n_beta")]
    NBeta,
}

/// Maps requested output names onto [`COLUMNS`] entries, keeping the
/// requested order. Empty means everything in canonical order.
pub fn resolve_columns(outputs: &[String]) -> Result<Vec<&'static str>, CliError> {
    if outputs.is_empty() {
        return Ok(COLUMNS.to_vec());
    }
    outputs
        .iter()
        .map(|name| {
            COLUMNS
                .iter()
                .find(|c| *c == name)
                .copied()
                .ok_or_else(|| {
                    CliError::usage(format!(
                        "unknown output column {name:?}; valid columns: {}",
                        COLUMNS.join(", ")
                    ))
                })
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::io(format!("reading {}", args.spec.display()), e))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.spec.display())))?;
    let columns = resolve_columns(&spec.outputs)?;
    for (label, scenario, want) in [
        ("twb", &spec.twb, SourceKind::Twb),
        ("thb", &spec.thb, SourceKind::Thb),
    ] {
        scenario
            .validate()
            .map_err(|e| CliError::usage(format!("{label} scenario: {e}")))?;
        if scenario.source_kind != want {
            return Err(CliError::usage(format!(
                "{label} scenario must have source_kind {}",
                want.as_str()
            )));
        }
    }
    let grid = log_grid(spec.sweep.min, spec.sweep.max, spec.sweep.count)?;
    let rows = sweep_table(&spec.twb, &spec.thb, &grid)?;
    let csv = render_csv(&rows, &columns);
    match &args.out {
        None => print!("{csv}"),
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
            let path = dir.join("sweep.csv");
            std::fs::write(&path, csv)
                .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bases() -> (Scenario, Scenario) {
        let twb = Scenario {
            source_kind: SourceKind::Twb,
            n: 4000.0,
            m: 90_000,
            n_beta: 0.0,
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

    #[test]
    fn csv_cells_carry_seventeen_significant_digits() {
        let (twb, thb) = bases();
        let rows = sweep_table(&twb, &thb, &[100.0]).unwrap();
        let csv = render_csv(&rows, &COLUMNS);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[0], "1.0000000000000000e2");
        // every cell survives a parse round trip bit for bit
        for (cell, col) in cells.iter().zip(COLUMNS) {
            let back: f64 = cell.parse().unwrap();
            assert_eq!(back.to_bits(), rows[0].column(col).to_bits(), "{col}");
        }
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn column_subset_keeps_request_order() {
        let picked =
            resolve_columns(&["R_MI".to_string(), "N_beta".to_string()]).unwrap();
        assert_eq!(picked, vec!["R_MI", "N_beta"]);
        assert!(resolve_columns(&["snr_twb".to_string()]).is_err());
        assert_eq!(resolve_columns(&[]).unwrap(), COLUMNS.to_vec());
    }

    #[test]
    fn spec_rejects_unknown_keys() {
        let text = r#"{
            "twb": {"source_kind": "TWB", "n": 1.0, "m": 10, "n_beta": 0.0,
                    "m_beta": 0, "eta": 0.5, "eta_beta": 0.5,
                    "object_present": true},
            "thb": {"source_kind": "THB", "n": 1.0, "m": 10, "n_beta": 0.0,
                    "m_beta": 0, "eta": 0.5, "eta_beta": 0.5,
                    "object_present": true},
            "sweep": {"variable": "n_beta", "min": 1.0, "max": 10.0, "count": 3},
            "extra": 1
        }"#;
        let err = serde_json::from_str::<SweepSpec>(text).unwrap_err();
        assert!(err.to_string().contains("extra"));
        let bad_axis = r#"{"variable": "mu_beta", "min": 1.0, "max": 2.0, "count": 2}"#;
        assert!(serde_json::from_str::<SweepAxis>(bad_axis).is_err());
    }

    #[test]
    fn asymptote_column_is_constant_and_ratios_exceed_one() {
        let (twb, thb) = bases();
        let grid = crate::grid::log_grid(10.0, 1e7, 9).unwrap();
        let rows = sweep_table(&twb, &thb, &grid).unwrap();
        for row in &rows {
            assert_eq!(row.asymptote.to_bits(), rows[0].asymptote.to_bits());
            assert!(row.r_snr > 1.0);
            assert!(row.r_mi > 1.0);
        }
        let last = rows.last().unwrap();
        assert!((last.r_mi / last.asymptote - 1.0).abs() < 1e-2);
    }
}
