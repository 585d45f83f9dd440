//! Regression and conditional-variance coefficients of a quadratic harness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrences::ProcessParams;
use crate::scalar::Scalar;

/// `E(X_t | X_s, X_u) = a X_s + b X_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionCoeffs<S> {
    pub a: S,
    pub b: S,
}

/// `E(X_t² | X_s, X_u) = A X_s² + B X_s X_u + C X_u² + D + α X_s + β X_u`,
/// together with the background parameters `(q, σ, τ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarCoeffs<S> {
    #[serde(rename = "A")]
    pub a: S,
    #[serde(rename = "B")]
    pub b: S,
    #[serde(rename = "C")]
    pub c: S,
    #[serde(rename = "D")]
    pub d: S,
    pub alpha: S,
    pub beta: S,
    pub q: S,
    pub sigma: S,
    pub tau: S,
}

fn ordered<S: Scalar>(s: &S, t: &S, u: &S) -> Result<()> {
    if *s >= S::zero() && s < t && t < u {
        Ok(())
    } else {
        Err(Error::TimeOrder(format!(
            "0 <= s < t < u (got {}, {}, {})",
            s.to_f64(),
            t.to_f64(),
            u.to_f64()
        )))
    }
}

/// `a = (u−t)/(u−s)`, `b = (t−s)/(u−s)`.
pub fn regression_coeffs<S: Scalar>(s: &S, t: &S, u: &S) -> Result<RegressionCoeffs<S>> {
    ordered(s, t, u)?;
    let span = u.clone() - s.clone();
    Ok(RegressionCoeffs {
        a: (u.clone() - t.clone()) / span.clone(),
        b: (t.clone() - s.clone()) / span,
    })
}

/// The six coefficients for general `(q, σ, τ)`. Times may touch
/// (`t = s` or `t = u`) to allow boundary checks.
#[allow(clippy::too_many_arguments)]
pub fn variance_coeffs<S: Scalar>(
    q: &S,
    sigma: &S,
    tau: &S,
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    u: &S,
) -> Result<VarCoeffs<S>> {
    if !(*s >= S::zero() && s <= t && t <= u && s < u) {
        return Err(Error::TimeOrder(format!(
            "0 <= s <= t <= u, s < u (got {}, {}, {})",
            s.to_f64(),
            t.to_f64(),
            u.to_f64()
        )));
    }
    let one = S::one();
    let den =
        u.clone() * (one.clone() + sigma.clone() * s.clone()) + tau.clone() - q.clone() * s.clone();
    if den.is_zero() || (!S::EXACT && den.to_f64().abs() < 1e-300) {
        return Err(Error::InvalidParams(
            "u(1 + sigma s) + tau - q s vanishes".into(),
        ));
    }
    let span = u.clone() - s.clone();
    let (ut, ts) = (u.clone() - t.clone(), t.clone() - s.clone());
    let bridge = ut.clone() * ts.clone() / den.clone();
    let a = ut.clone()
        * (u.clone() * (one.clone() + sigma.clone() * t.clone()) + tau.clone()
            - q.clone() * t.clone())
        / (span.clone() * den.clone());
    let b = ut * ts.clone() * (one.clone() + q.clone()) / (span.clone() * den.clone());
    let c = ts
        * (t.clone() * (one + sigma.clone() * s.clone()) + tau.clone() - q.clone() * s.clone())
        / (span.clone() * den);
    let alpha =
        bridge.clone() * (u.clone() * params.eta.clone() - params.theta.clone()) / span.clone();
    let beta = bridge.clone() * (params.theta.clone() - s.clone() * params.eta.clone()) / span;
    Ok(VarCoeffs {
        a,
        b,
        c,
        d: bridge,
        alpha,
        beta,
        q: q.clone(),
        sigma: sigma.clone(),
        tau: tau.clone(),
    })
}

/// The free bi-Poisson coefficients (`q = σ = τ = 0`) in their simplified
/// form, written independently of [`variance_coeffs`].
pub fn bipoisson_variance_coeffs<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    u: &S,
) -> Result<VarCoeffs<S>> {
    ordered(s, t, u)?;
    let span = u.clone() - s.clone();
    let (ts, ut) = (t.clone() - s.clone(), u.clone() - t.clone());
    let su = span.clone() * u.clone();
    Ok(VarCoeffs {
        a: ut.clone() / span,
        b: ts.clone() * ut.clone() / su.clone(),
        c: ts.clone() * t.clone() / su.clone(),
        d: ts.clone() * ut.clone() / u.clone(),
        alpha: ts.clone() * ut.clone() * (u.clone() * params.eta.clone() - params.theta.clone())
            / su.clone(),
        beta: ts
            * (t.clone() - u.clone())
            * (s.clone() * params.eta.clone() - params.theta.clone())
            / su,
        q: S::zero(),
        sigma: S::zero(),
        tau: S::zero(),
    })
}

/// A quadratic form in `(X_s, X_u)`:
/// `[x_s², x_s x_u, x_u², 1, x_s, x_u]` coefficients.
pub type Quadratic<S> = [S; 6];

/// `Var(X_t | X_s, X_u)` as `E(X_t²|·) − (E(X_t|·))²` from the coefficients.
pub fn conditional_variance_from_coeffs<S: Scalar>(
    reg: &RegressionCoeffs<S>,
    var: &VarCoeffs<S>,
) -> Quadratic<S> {
    let two = S::from_int(2);
    [
        var.a.clone() - reg.a.clone() * reg.a.clone(),
        var.b.clone() - two * reg.a.clone() * reg.b.clone(),
        var.c.clone() - reg.b.clone() * reg.b.clone(),
        var.d.clone(),
        var.alpha.clone(),
        var.beta.clone(),
    ]
}

/// The conditional variance written directly as
/// `K (1 + σ v² + η v + τ w² + θ w + (1−q) w (s X_u − u X_s)/(u−s))` with
/// `v = (u X_s − s X_u)/(u−s)`, `w = (X_u − X_s)/(u−s)`, expanded.
#[allow(clippy::too_many_arguments)]
pub fn conditional_variance_direct<S: Scalar>(
    q: &S,
    sigma: &S,
    tau: &S,
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    u: &S,
) -> Quadratic<S> {
    let one = S::one();
    let two = S::from_int(2);
    let span = u.clone() - s.clone();
    let span2 = span.clone() * span.clone();
    let den =
        u.clone() * (one.clone() + sigma.clone() * s.clone()) + tau.clone() - q.clone() * s.clone();
    let k = (u.clone() - t.clone()) * (t.clone() - s.clone()) / den;
    let free = one - q.clone();
    let xs2 = sigma.clone() * u.clone() * u.clone() + tau.clone() + free.clone() * u.clone();
    let xsxu = -(two.clone() * sigma.clone() * u.clone() * s.clone())
        - two * tau.clone()
        - free.clone() * (u.clone() + s.clone());
    let xu2 = sigma.clone() * s.clone() * s.clone() + tau.clone() + free * s.clone();
    [
        k.clone() * xs2 / span2.clone(),
        k.clone() * xsxu / span2.clone(),
        k.clone() * xu2 / span2,
        k.clone(),
        k.clone() * (params.eta.clone() * u.clone() - params.theta.clone()) / span.clone(),
        k * (params.theta.clone() - params.eta.clone() * s.clone()) / span,
    ]
}
