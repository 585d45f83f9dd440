//! Linear regressions and quadratic conditional variances, checked in weak
//! form against `p_n(X_s; s)` and `p_m(X_u; u)`:
//!
//! * `E(p_n X_t p_m) = a E(X_s p_n p_m) + b E(p_n X_u p_m)`,
//! * `E(p_n X_t² p_m) = A E(X_s² p_n p_m) + B E(X_s p_n X_u p_m) + C E(p_n X_u² p_m)
//!   + α E(X_s p_n p_m) + β E(p_n X_u p_m) + D E(p_n p_m)`.
//!
//! Two independent routes: generating-function series (exact over the
//! rationals) and nested Gauss quadrature over the constructed kernels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrences::{p_family, ProcessParams, RingParams};
use crate::scalar::Scalar;

use super::bivariate::{phi0, phi1, phi2, BivariateSeries};
use super::coeffs::{bipoisson_variance_coeffs, regression_coeffs};
use super::{marginal_rule, nodes_for_degree, transition_rule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnessResiduals {
    pub lr_residual: f64,
    pub qv_residual: f64,
    /// `(n, m)` where each residual is largest.
    pub lr_cell: Option<(usize, usize)>,
    pub qv_cell: Option<(usize, usize)>,
}

impl HarnessResiduals {
    pub fn max_residual(&self) -> f64 {
        self.lr_residual.max(self.qv_residual)
    }

    /// Error naming the failing cell, if a residual exceeds `tol`.
    pub fn check(&self, tol: f64) -> Result<()> {
        for (name, residual, cell) in [
            ("linear regression", self.lr_residual, self.lr_cell),
            ("quadratic variance", self.qv_residual, self.qv_cell),
        ] {
            if residual > tol {
                let (n, m) = cell.unwrap_or((0, 0));
                return Err(Error::CellFailed {
                    check: name.into(),
                    n,
                    m,
                    residual,
                });
            }
        }
        Ok(())
    }
}

/// The two identities as series `lhs − rhs`; both vanish identically.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesHarness<S> {
    pub lr: BivariateSeries<S>,
    pub qv: BivariateSeries<S>,
}

impl<S: Scalar> SeriesHarness<S> {
    pub fn is_exact_zero(&self) -> bool {
        self.lr.is_zero() && self.qv.is_zero()
    }

    pub fn residuals(&self) -> HarnessResiduals {
        let lr = self.lr.worst_cell();
        let qv = self.qv.worst_cell();
        HarnessResiduals {
            lr_residual: lr.map_or(0.0, |c| c.2),
            qv_residual: qv.map_or(0.0, |c| c.2),
            lr_cell: lr.map(|c| (c.0, c.1)),
            qv_cell: qv.map(|c| (c.0, c.1)),
        }
    }
}

fn check_times<S: Scalar>(s: &S, t: &S, u: &S) -> Result<()> {
    if *s > S::zero() && s < t && t < u {
        Ok(())
    } else {
        Err(Error::TimeOrder(format!(
            "0 < s < t < u (got {}, {}, {})",
            s.to_f64(),
            t.to_f64(),
            u.to_f64()
        )))
    }
}

/// Series route, coefficients `n, m ≤ order`.
pub fn harness_series<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    u: &S,
    order: usize,
) -> Result<SeriesHarness<S>> {
    check_times(s, t, u)?;
    let reg = regression_coeffs(s, t, u)?;
    let var = bipoisson_variance_coeffs(params, s, t, u)?;

    let phi1_s = phi1(params, s, s, order);
    let phi1_u = phi1(params, s, u, order);
    let lr = &(&phi1(params, s, t, order) - &phi1_s.scale(&reg.a)) - &phi1_u.scale(&reg.b);

    let rhs = [
        phi2(params, s, s, s, order)?.scale(&var.a),
        phi2(params, s, s, u, order)?.scale(&var.b),
        phi2(params, s, u, u, order)?.scale(&var.c),
        phi0(params, s, order).scale(&var.d),
        phi1_s.scale(&var.alpha),
        phi1_u.scale(&var.beta),
    ]
    .iter()
    .fold(BivariateSeries::zero(order), |acc, term| &acc + term);
    let qv = &phi2(params, s, t, t, order)? - &rhs;
    Ok(SeriesHarness { lr, qv })
}

/// Quadrature route for `n, m ≤ max_nm`: the left sides integrate over
/// `π_s`, `P_{s,t}` and `P_{t,u}`; the right sides over `π_s` and `P_{s,u}`.
#[allow(clippy::needless_range_loop)]
pub fn harness_quadrature(
    params: &ProcessParams<f64>,
    s: f64,
    t: f64,
    u: f64,
    max_nm: usize,
) -> Result<HarnessResiduals> {
    check_times(&s, &t, &u)?;
    let reg = regression_coeffs(&s, &t, &u)?;
    let var = bipoisson_variance_coeffs(params, &s, &t, &u)?;
    let ring = RingParams::embed(params, |v| v);
    let ps = p_family(&ring, &s, max_nm);
    let pu = p_family(&ring, &u, max_nm);
    let nodes = nodes_for_degree(2 * max_nm + 2);
    let size = max_nm + 1;

    // left[j][n][m] = E(p_n(X_s) X_t^j p_m(X_u)), j = 1, 2.
    // right[i][k][n][m] = E(X_s^i p_n(X_s) X_u^k p_m(X_u)).
    let mut left = vec![vec![vec![0.0; size]; size]; 3];
    let mut right = vec![vec![vec![vec![0.0; size]; size]; 3]; 3];

    let outer = marginal_rule(params, s, nodes)?;
    for (&x, &wx) in outer.nodes.iter().zip(&outer.weights) {
        let pn_x: Vec<f64> = ps.iter().map(|p| p.eval_f64(x)).collect();

        // ∫ y^j (∫ p_m(z) P_{t,u}(y,dz)) P_{s,t}(x,dy)
        let middle = transition_rule(params, x, s, t, nodes)?;
        let mut nested = vec![vec![0.0; size]; 3];
        for (&y, &wy) in middle.nodes.iter().zip(&middle.weights) {
            let inner = transition_rule(params, y, t, u, nodes)?;
            for m in 0..size {
                let pm = inner.integrate(|z| pu[m].eval_f64(z));
                for (j, row) in nested.iter_mut().enumerate() {
                    row[m] += wy * y.powi(j as i32) * pm;
                }
            }
        }
        let direct = transition_rule(params, x, s, u, nodes)?;
        let mut direct_moments = vec![vec![0.0; size]; 3];
        for (k, row) in direct_moments.iter_mut().enumerate() {
            for (m, cell) in row.iter_mut().enumerate() {
                *cell = direct.integrate(|z| z.powi(k as i32) * pu[m].eval_f64(z));
            }
        }
        for n in 0..size {
            for m in 0..size {
                for j in 0..3 {
                    left[j][n][m] += wx * pn_x[n] * nested[j][m];
                }
                for i in 0..3 {
                    for k in 0..3 - i {
                        right[i][k][n][m] += wx * x.powi(i as i32) * pn_x[n] * direct_moments[k][m];
                    }
                }
            }
        }
    }

    let mut out = HarnessResiduals {
        lr_residual: 0.0,
        qv_residual: 0.0,
        lr_cell: None,
        qv_cell: None,
    };
    for n in 0..size {
        for m in 0..size {
            let lr = left[1][n][m] - reg.a * right[1][0][n][m] - reg.b * right[0][1][n][m];
            let qv = left[2][n][m]
                - (var.a * right[2][0][n][m]
                    + var.b * right[1][1][n][m]
                    + var.c * right[0][2][n][m]
                    + var.alpha * right[1][0][n][m]
                    + var.beta * right[0][1][n][m]
                    + var.d * right[0][0][n][m]);
            if lr.abs() > out.lr_residual {
                out.lr_residual = lr.abs();
                out.lr_cell = Some((n, m));
            }
            if qv.abs() > out.qv_residual {
                out.qv_residual = qv.abs();
                out.qv_cell = Some((n, m));
            }
        }
    }
    Ok(out)
}

/// Both routes in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub series: HarnessResiduals,
    pub quadrature: HarnessResiduals,
}

impl HarnessReport {
    pub fn max_residual(&self) -> f64 {
        self.series
            .max_residual()
            .max(self.quadrature.max_residual())
    }
}

pub fn harness_residuals(
    params: &ProcessParams<f64>,
    s: f64,
    t: f64,
    u: f64,
    n: usize,
) -> Result<HarnessReport> {
    Ok(HarnessReport {
        series: harness_series(params, &s, &t, &u, n)?.residuals(),
        quadrature: harness_quadrature(params, s, t, u, n)?,
    })
}
