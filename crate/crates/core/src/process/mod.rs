//! The bi-Poisson Markov process: marginals `π_t`, transition kernels
//! `P_{s,t}(x, ·)`, and the checks that they form a quadratic harness.

mod bivariate;
mod checks;
mod coeffs;
mod harness;
mod path;

pub use bivariate::{phi0, phi1, phi1_from_phi0, phi2, BivariateSeries};
pub use checks::{
    chapman_kolmogorov_residual, conditional_moment_poly, martingale_residual,
    martingale_residual_exact, reversal_check, support_violation,
};
pub use coeffs::{
    bipoisson_variance_coeffs, conditional_variance_direct, conditional_variance_from_coeffs,
    regression_coeffs, variance_coeffs, Quadratic, RegressionCoeffs, VarCoeffs,
};
pub use harness::{
    harness_quadrature, harness_residuals, harness_series, HarnessReport, HarnessResiduals,
    SeriesHarness,
};
pub use path::{paths_to_csv, sample_path, sample_paths, PathSample};

use crate::error::Result;
use crate::recurrences::ProcessParams;
use crate::spectra::{
    gauss_rule, jacobi_of_marginal, jacobi_of_transition, spectral_measure, MeasureKind,
    QuadratureRule, SpectralMeasure,
};

/// Law of `X_t`; `X_0 = 0`.
pub fn marginal(params: &ProcessParams<f64>, t: f64) -> Result<SpectralMeasure> {
    if t == 0.0 {
        return Ok(SpectralMeasure::dirac(0.0));
    }
    let j = jacobi_of_marginal(params, &t)?;
    spectral_measure(&j, params, MeasureKind::Marginal { t })
}

/// Law of `X_t` given `X_s = x`.
pub fn transition(params: &ProcessParams<f64>, x: f64, s: f64, t: f64) -> Result<SpectralMeasure> {
    let j = jacobi_of_transition(params, &x, &s, &t)?;
    spectral_measure(&j, params, MeasureKind::Transition { x, s, t })
}

/// Nodes per quadrature level for integrands of degree `deg`.
pub fn nodes_for_degree(deg: usize) -> usize {
    (deg + 2).max(12)
}

/// Gauss rule for `π_t` (a single node at 0 when `t = 0`).
pub fn marginal_rule(params: &ProcessParams<f64>, t: f64, n: usize) -> Result<QuadratureRule> {
    if t == 0.0 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![1.0],
        });
    }
    gauss_rule(&jacobi_of_marginal(params, &t)?, n)
}

/// Gauss rule for `P_{s,t}(x, ·)`.
pub fn transition_rule(
    params: &ProcessParams<f64>,
    x: f64,
    s: f64,
    t: f64,
    n: usize,
) -> Result<QuadratureRule> {
    gauss_rule(&jacobi_of_transition(params, &x, &s, &t)?, n)
}
