//! Quadrature checks of the process: kernel consistency, martingale
//! polynomials, polynomial conditional moments and time reversal.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrences::{p_family, ProcessParams, RingParams};
use crate::scalar::{Rational, Scalar};
use crate::spectra::{jacobi_of_transition, moments};

use super::{marginal, marginal_rule, nodes_for_degree, transition_rule};

fn check_order(s: f64, t: f64) -> Result<()> {
    if s >= 0.0 && s < t {
        Ok(())
    } else {
        Err(Error::TimeOrder(format!("0 <= s < t (got {s}, {t})")))
    }
}

/// `p_0(·; t), …, p_n(·; t)`; at `t = 0` the recurrence still makes sense.
fn p_polys<S: Scalar>(params: &ProcessParams<S>, t: &S, n: usize) -> Vec<Poly<S>> {
    p_family(&RingParams::embed(params, |v| v), t, n)
}

/// Largest `|∫y^k P_{s,u}(x,dy) − ∬ y^k P_{t,u}(y',dy) P_{s,t}(x,dy')|` over
/// `k ≤ deg` and `x` among the Gauss nodes of `π_s`, divided by
/// `max(1, |∫y^k P_{s,u}(x,dy)|)` since high moments reach 1e8 and beyond.
pub fn chapman_kolmogorov_residual(
    params: &ProcessParams<f64>,
    s: f64,
    t: f64,
    u: f64,
    deg: usize,
) -> Result<f64> {
    check_order(s, t)?;
    check_order(t, u)?;
    let n = nodes_for_degree(deg);
    let outer = marginal_rule(params, s, n)?;
    let mut worst = 0.0f64;
    for &x in &outer.nodes {
        let direct = transition_rule(params, x, s, u, n)?;
        let first = transition_rule(params, x, s, t, n)?;
        let mut nested = vec![0.0; deg + 1];
        for (&y, &w) in first.nodes.iter().zip(&first.weights) {
            let second = transition_rule(params, y, t, u, n)?;
            for (k, acc) in nested.iter_mut().enumerate() {
                *acc += w * second.integrate(|z| z.powi(k as i32));
            }
        }
        for (k, value) in nested.iter().enumerate() {
            let lhs = direct.integrate(|z| z.powi(k as i32));
            worst = worst.max((lhs - value).abs() / lhs.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Largest `|∫p_n(y;t) P_{s,t}(x,dy) − p_n(x;s)|` over `1 ≤ n ≤ max_n` and
/// `x` among the Gauss nodes of `π_s`.
pub fn martingale_residual(
    params: &ProcessParams<f64>,
    s: f64,
    t: f64,
    max_n: usize,
) -> Result<f64> {
    check_order(s, t)?;
    let later = p_polys(params, &t, max_n);
    let earlier = p_polys(params, &s, max_n);
    let nodes = nodes_for_degree(max_n);
    let outer = marginal_rule(params, s, nodes)?;
    let mut worst = 0.0f64;
    for &x in &outer.nodes {
        let kernel = transition_rule(params, x, s, t, nodes)?;
        for n in 1..=max_n {
            let lhs = kernel.integrate(|y| later[n].eval_f64(y));
            worst = worst.max((lhs - earlier[n].eval_f64(x)).abs());
        }
    }
    Ok(worst)
}

/// Exact version at a given starting point: integrates `p_n(·; t)` against
/// the exact moments of `P_{s,t}(x, ·)`. Returns the largest `|difference|`.
pub fn martingale_residual_exact(
    params: &ProcessParams<Rational>,
    x: &Rational,
    s: &Rational,
    t: &Rational,
    max_n: usize,
) -> Result<Rational> {
    let j = jacobi_of_transition(params, x, s, t)?;
    let m = moments(&j, max_n);
    let later = p_polys(params, t, max_n);
    let earlier = p_polys(params, s, max_n);
    let mut worst = Rational::from_int(0);
    for n in 1..=max_n {
        let integral = later[n]
            .coeffs()
            .iter()
            .zip(&m)
            .fold(Rational::from_int(0), |acc, (c, mk)| acc + c * mk);
        let diff = Scalar::abs(&(integral - earlier[n].eval(x)));
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}

/// Smallest value of `1 + ηx` over the 40-node Gauss rule and the atoms of
/// `π_t`.
pub fn support_violation(params: &ProcessParams<f64>, t: f64) -> Result<f64> {
    let rule = marginal_rule(params, t, 40)?;
    let measure = marginal(params, t)?;
    let points = rule
        .nodes
        .iter()
        .copied()
        .chain(measure.atoms.iter().map(|a| a.location));
    Ok(points
        .map(|x| 1.0 + params.eta * x)
        .fold(f64::INFINITY, f64::min))
}

/// Fits `x ↦ E(X_tⁿ | X_s = x)` by a degree-`n` polynomial through `n + 1`
/// Chebyshev points spanning the support of `π_s`, then checks it at `2n`
/// further points and that it is monic.
pub fn conditional_moment_poly(
    params: &ProcessParams<f64>,
    s: f64,
    t: f64,
    n: usize,
) -> Result<Poly<f64>> {
    check_order(s, t)?;
    let (lo, hi) = if s == 0.0 {
        // π_0 = δ_0; use a window of starting points inside 1 + ηx ≥ 0.
        let right = if params.eta < 0.0 {
            (-1.0 / params.eta).min(1.0)
        } else {
            1.0
        };
        (0.0, right)
    } else {
        marginal(params, s)?.hull()
    };
    let nodes = nodes_for_degree(n);
    let target = |x: f64| -> Result<f64> {
        let rule = transition_rule(params, x, s, t, nodes)?;
        Ok(rule.integrate(|y| y.powi(n as i32)))
    };
    let chebyshev = |count: usize, k: usize| {
        let angle = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * count) as f64;
        0.5 * (lo + hi) - 0.5 * (hi - lo) * angle.cos()
    };
    let xs: Vec<f64> = (0..=n).map(|k| chebyshev(n + 1, k)).collect();
    let ys = xs
        .iter()
        .map(|&x| target(x))
        .collect::<Result<Vec<f64>>>()?;
    let fit = newton_interpolant(&xs, &ys);

    let lead = fit.coeff(n);
    if (lead - 1.0).abs() > 1e-9 {
        return Err(Error::NotPolynomial {
            n,
            detail: format!("leading coefficient {lead}"),
        });
    }
    for k in 0..2 * n {
        let x = chebyshev(2 * n, k);
        let value = target(x)?;
        let residual = (fit.eval_f64(x) - value).abs() / value.abs().max(1.0);
        if residual > 1e-9 {
            return Err(Error::NotPolynomial {
                n,
                detail: format!("residual {residual:e} at x = {x}"),
            });
        }
    }
    Ok(fit)
}

/// Interpolating polynomial in monomial form via divided differences.
fn newton_interpolant(xs: &[f64], ys: &[f64]) -> Poly<f64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // Horner in Newton form: p = dd[n-1]; p = p (x − x_i) + dd[i].
    let mut p = Poly::new(vec![dd[n - 1]]);
    for i in (0..n - 1).rev() {
        p = p * Poly::linear_root(xs[i]) + Poly::new(vec![dd[i]]);
    }
    p
}

/// For `η = θ`, compares `E(X_{t1}^j X_{t2}^k)` with the same moment of
/// `(t1 X_{1/t1}, t2 X_{1/t2})` for `j + k ≤ deg`; returns the largest
/// absolute difference.
pub fn reversal_check(params: &ProcessParams<f64>, t1: f64, t2: f64, deg: usize) -> Result<f64> {
    if params.eta != params.theta {
        return Err(Error::InvalidParams(format!(
            "time reversal needs eta = theta (got {} and {})",
            params.eta, params.theta
        )));
    }
    if !(t1 > 0.0 && t1 < t2) {
        return Err(Error::TimeOrder(format!("0 < t1 < t2 (got {t1}, {t2})")));
    }
    let nodes = nodes_for_degree(deg);
    // mixed[j][k] = E(A^j B^k) with A at the earlier time.
    let mixed = |early: f64, late: f64| -> Result<Vec<Vec<f64>>> {
        let mut out = vec![vec![0.0; deg + 1]; deg + 1];
        let outer = marginal_rule(params, early, nodes)?;
        for (&x, &wx) in outer.nodes.iter().zip(&outer.weights) {
            let inner = transition_rule(params, x, early, late, nodes)?;
            for (j, row) in out.iter_mut().enumerate() {
                for (k, cell) in row.iter_mut().enumerate().take(deg + 1 - j) {
                    *cell += wx * x.powi(j as i32) * inner.integrate(|y| y.powi(k as i32));
                }
            }
        }
        Ok(out)
    };
    let forward = mixed(t1, t2)?;
    let backward = mixed(1.0 / t2, 1.0 / t1)?;
    let mut worst = 0.0f64;
    for j in 0..=deg {
        for k in 0..=deg - j {
            // X_{1/t2} carries the power of the later time t2.
            let reversed = t1.powi(j as i32) * t2.powi(k as i32) * backward[k][j];
            worst = worst.max((forward[j][k] - reversed).abs());
        }
    }
    Ok(worst)
}
