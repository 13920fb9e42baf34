//! Log-spaced sweep grids.
//!
//! The figure commands and JSON sweep specs must produce byte-identical
//! tables for the same axis, so every caller funnels through [`log_grid`].

use crate::CliError;

pub const DEFAULT_MIN: f64 = 10.0;
pub const DEFAULT_MAX: f64 = 1e7;
pub const DEFAULT_COUNT: usize = 60;

/// The figure axis: 60 points over [10, 1e7].
pub fn default_grid() -> Vec<f64> {
    log_grid(DEFAULT_MIN, DEFAULT_MAX, DEFAULT_COUNT).expect("default axis is valid")
}

/// Parses a MIN:MAX:COUNT axis description.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [min, max, count] = parts.as_slice() else {
        return Err(CliError::usage(format!(
            "grid must be MIN:MAX:COUNT, got {text:?}"
        )));
    };
    let min: f64 = min
        .parse()
        .map_err(|_| CliError::usage(format!("grid minimum {min:?} is not a number")))?;
    let max: f64 = max
        .parse()
        .map_err(|_| CliError::usage(format!("grid maximum {max:?} is not a number")))?;
    let count: usize = count
        .parse()
        .map_err(|_| CliError::usage(format!("grid count {count:?} is not an integer")))?;
    log_grid(min, max, count)
}

/// `count` log-spaced points from `min` to `max` inclusive:
/// x_i = min * (max/min)^(i / (count - 1)).
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>, CliError> {
    if !min.is_finite() || !max.is_finite() || min <= 0.0 {
        return Err(CliError::usage(format!(
            "grid bounds must be finite and positive, got {min}:{max}"
        )));
    }
    if max <= min {
        return Err(CliError::usage(format!(
            "grid maximum must exceed the minimum, got {min}:{max}"
        )));
    }
    if count == 0 {
        return Err(CliError::usage("grid has no points (count = 0)"));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let ratio = max / min;
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| min * ratio.powf(i as f64 / last))
        .collect())
}
