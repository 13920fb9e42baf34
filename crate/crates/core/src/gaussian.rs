//! Two-mode Gaussian covariance matrices in standard form, their symplectic
//! spectrum and Rényi-2 information quantities.
//!
//! Everything in this module works on the standard form
//!
//! ```text
//!         | a  0  c  0 |
//!   sigma = | 0  a  0  d |      ordering (q1, p1, q2, p2)
//!         | c  0  b  0 |
//!         | 0  d  0  b |
//! ```
//!
//! with vacuum = identity (see the crate docs for the scaling convention).
//! The determinant then factorizes as det σ = (ab − c²)(ab − d²) and the
//! Rényi-2 entropy is S₂ = ½ ln det σ.

use thiserror::Error;

/// Tolerance on the uncertainty bound ν₋ ≥ 1 used by constructors and
/// physicality checks.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Absolute tolerance when verifying that a raw 4×4 matrix is in standard
/// form.
pub const STANDARD_FORM_TOL: f64 = 1e-12;

/// Errors for covariance construction and spectral evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmError {
    #[error("covariance entries must be finite")]
    NonFinite,
    #[error("marginal variance {value} lies below the vacuum limit 1")]
    MarginalBelowVacuum { value: f64 },
    #[error("covariance is not positive definite (ab-c^2 = {det_q:e}, ab-d^2 = {det_p:e})")]
    NotPositiveDefinite { det_q: f64, det_p: f64 },
    #[error("minimum symplectic eigenvalue {nu_minus} violates the uncertainty bound 1")]
    UncertaintyViolated { nu_minus: f64 },
    #[error("matrix entry ({row},{col}) deviates from two-mode standard form by {deviation:e}")]
    NotStandardForm {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("symplectic discriminant {0:e} is negative beyond numerical tolerance")]
    NegativeDiscriminant(f64),
}

/// Outcome of a physicality check on candidate standard-form entries.
///
/// `Physical` carries the minimum symplectic eigenvalue; the remaining
/// variants are reason codes for the rejection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhysicalityVerdict {
    Physical { nu_minus: f64 },
    NonFinite,
    MarginalBelowVacuum { value: f64 },
    NotPositiveDefinite { det_q: f64, det_p: f64 },
    UncertaintyViolated { nu_minus: f64 },
}

impl PhysicalityVerdict {
    pub fn is_physical(&self) -> bool {
        matches!(self, PhysicalityVerdict::Physical { .. })
    }

    fn into_error(self) -> CmError {
        match self {
            PhysicalityVerdict::Physical { .. } => {
                unreachable!("physical verdict is not an error")
            }
            PhysicalityVerdict::NonFinite => CmError::NonFinite,
            PhysicalityVerdict::MarginalBelowVacuum { value } => {
                CmError::MarginalBelowVacuum { value }
            }
            PhysicalityVerdict::NotPositiveDefinite { det_q, det_p } => {
                CmError::NotPositiveDefinite { det_q, det_p }
            }
            PhysicalityVerdict::UncertaintyViolated { nu_minus } => {
                CmError::UncertaintyViolated { nu_minus }
            }
        }
    }
}

/// Checks whether the candidate entries (a, b, c, d) describe a physical
/// two-mode state: finite entries, marginals at or above vacuum, positive
/// definiteness, and ν₋ ≥ 1 − tol.
pub fn check_physical(a: f64, b: f64, c: f64, d: f64, tol: f64) -> PhysicalityVerdict {
    if ![a, b, c, d].iter().all(|x| x.is_finite()) {
        return PhysicalityVerdict::NonFinite;
    }
    let min_marginal = a.min(b);
    if min_marginal < 1.0 - tol {
        return PhysicalityVerdict::MarginalBelowVacuum {
            value: min_marginal,
        };
    }
    let det_q = a * b - c * c;
    let det_p = a * b - d * d;
    if det_q <= 0.0 || det_p <= 0.0 {
        return PhysicalityVerdict::NotPositiveDefinite { det_q, det_p };
    }
    match nu_minus_squared(a, b, c, d) {
        // disc beyond tolerance cannot happen once pd holds, but stay defensive
        Err(_) => PhysicalityVerdict::NotPositiveDefinite { det_q, det_p },
        Ok(nu2) => {
            let nu_minus = nu2.max(0.0).sqrt();
            if nu_minus < 1.0 - tol {
                PhysicalityVerdict::UncertaintyViolated { nu_minus }
            } else {
                PhysicalityVerdict::Physical { nu_minus }
            }
        }
    }
}

fn nu_minus_squared(a: f64, b: f64, c: f64, d: f64) -> Result<f64, CmError> {
    let det = (a * b - c * c) * (a * b - d * d);
    let delta = a * a + b * b + 2.0 * c * d;
    let disc = delta * delta - 4.0 * det;
    if disc < 0.0 {
        // allow roundoff-scale negatives only
        if disc > -1e-9 * delta.powi(2).max(1.0) {
            return Ok(delta / 2.0);
        }
        return Err(CmError::NegativeDiscriminant(disc));
    }
    Ok((delta - disc.sqrt()) / 2.0)
}

/// The two symplectic eigenvalues of a two-mode covariance matrix,
/// ν₋ ≤ ν₊. A physical state has ν₋ ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

/// A two-mode covariance matrix in standard form, ordering (q1, p1, q2, p2).
///
/// Construction enforces physicality (ν₋ ≥ 1 − [`PHYSICALITY_TOL`]), so a
/// value of this type always describes a valid quantum state; operations on
/// it are therefore infallible. Mode 1 is the reference/bright arm, mode 2
/// the signal arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TwoModeCM {
    /// Builds a standard-form CM from its four defining entries, rejecting
    /// non-physical input with the violated check.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, CmError> {
        let verdict = check_physical(a, b, c, d, PHYSICALITY_TOL);
        if verdict.is_physical() {
            Ok(TwoModeCM { a, b, c, d })
        } else {
            Err(verdict.into_error())
        }
    }

    /// Accepts an arbitrary 4×4 matrix, verifying that it is in standard
    /// form within [`STANDARD_FORM_TOL`] (absolute, entrywise) before
    /// delegating to [`TwoModeCM::new`].
    pub fn from_matrix(m: &[[f64; 4]; 4]) -> Result<Self, CmError> {
        let a = (m[0][0] + m[1][1]) / 2.0;
        let b = (m[2][2] + m[3][3]) / 2.0;
        let c = (m[0][2] + m[2][0]) / 2.0;
        let d = (m[1][3] + m[3][1]) / 2.0;
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(CmError::NonFinite);
        }
        let expected = pattern(a, b, c, d);
        for (i, row) in m.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                let deviation = (entry - expected[i][j]).abs();
                if !(deviation <= STANDARD_FORM_TOL) {
                    return Err(CmError::NotStandardForm {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        TwoModeCM::new(a, b, c, d)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// The full 4×4 matrix in (q1, p1, q2, p2) ordering.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        pattern(self.a, self.b, self.c, self.d)
    }

    /// det σ = (ab − c²)(ab − d²).
    pub fn det(&self) -> f64 {
        let ab = self.a * self.b;
        (ab - self.c * self.c) * (ab - self.d * self.d)
    }

    /// Re-checks physicality against a caller-supplied tolerance.
    pub fn is_physical(&self, tol: f64) -> bool {
        check_physical(self.a, self.b, self.c, self.d, tol).is_physical()
    }

    /// Symplectic eigenvalues from the closed form
    /// ν±² = (Δ ± √(Δ² − 4 det σ))/2 with Δ = a² + b² + 2cd.
    pub fn symplectic_eigenvalues(&self) -> Result<SymplecticSpectrum, CmError> {
        let det = self.det();
        let delta = self.a * self.a + self.b * self.b + 2.0 * self.c * self.d;
        let disc = delta * delta - 4.0 * det;
        let root = if disc >= 0.0 {
            disc.sqrt()
        } else if disc > -1e-9 * delta.powi(2).max(1.0) {
            0.0
        } else {
            return Err(CmError::NegativeDiscriminant(disc));
        };
        let nu_minus = ((delta - root) / 2.0).max(0.0).sqrt();
        let nu_plus = ((delta + root) / 2.0).sqrt();
        Ok(SymplecticSpectrum { nu_minus, nu_plus })
    }
}

fn pattern(a: f64, b: f64, c: f64, d: f64) -> [[f64; 4]; 4] {
    [
        [a, 0.0, c, 0.0],
        [0.0, a, 0.0, d],
        [c, 0.0, b, 0.0],
        [0.0, d, 0.0, b],
    ]
}

/// Rényi-2 entropy S₂ = ½ ln det σ of a two-mode state, in nats.
pub fn renyi2_entropy(cm: &TwoModeCM) -> f64 {
    let ab = cm.a * cm.b;
    0.5 * ((ab - cm.c * cm.c).ln() + (ab - cm.d * cm.d).ln())
}

/// Rényi-2 entropy of a single mode with marginal variance v (det = v²),
/// so S₂ = ln v. Rejects variances below the vacuum limit; values within
/// tolerance below 1 clamp to exactly 0.
pub fn renyi2_entropy_single_mode(v: f64) -> Result<f64, CmError> {
    if !v.is_finite() {
        return Err(CmError::NonFinite);
    }
    if v < 1.0 - PHYSICALITY_TOL {
        return Err(CmError::MarginalBelowVacuum { value: v });
    }
    Ok(v.ln().max(0.0))
}

/// Rényi-2 mutual information MI = S₂(ρ₁) + S₂(ρ₂) − S₂(ρ₁₂)
///                              = ½ ln[a²b² / ((ab − c²)(ab − d²))].
///
/// Evaluated as −½[ln1p(−c²/ab) + ln1p(−d²/ab)], which is exact 0 for
/// c = d = 0, nonnegative for every physical CM, and stable for the tiny
/// correlations left by a dominant bath.
pub fn mutual_info_renyi2(cm: &TwoModeCM) -> f64 {
    let ab = cm.a * cm.b;
    -0.5 * ((-cm.c * cm.c / ab).ln_1p() + (-cm.d * cm.d / ab).ln_1p())
}
