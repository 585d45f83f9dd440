//! Orthogonal polynomial families of the bi-Poisson process.
//!
//! * `p_n(x; t)`: monic polynomials orthogonal for the marginal law at `t`.
//! * `Q_n(y; x, t, s)`: orthogonal for the transition law from `x` at time `s`.
//! * `B_n(y; x, t, s)`: the auxiliary family relating `Q` at different times.
//!
//! The builders are generic over the coefficient [`Ring`], so the same
//! recurrence can be evaluated with numeric parameters or with symbolic ones
//! (a parameter that is itself a polynomial variable).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};
use crate::series::FormalSeries;

/// The pair `(η, θ)` of a free bi-Poisson process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams<S> {
    pub eta: S,
    pub theta: S,
}

impl<S: Scalar> ProcessParams<S> {
    /// Checks `1 + ηθ ≥ 0`.
    pub fn new(eta: S, theta: S) -> Result<Self> {
        let params = Self { eta, theta };
        params.validate()?;
        Ok(params)
    }

    /// Constructs without validation. Polynomial identities hold for any
    /// parameters; only measure construction needs `1 + ηθ ≥ 0`.
    pub fn unchecked(eta: S, theta: S) -> Self {
        Self { eta, theta }
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.one_plus_eta_theta();
        let ok = if S::EXACT {
            c >= S::zero()
        } else {
            c.to_f64() >= -1e-14
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "1 + eta*theta = {} < 0",
                c.to_f64()
            )))
        }
    }

    pub fn one_plus_eta_theta(&self) -> S {
        S::one() + self.eta.clone() * self.theta.clone()
    }

    pub fn to_f64(&self) -> ProcessParams<f64> {
        ProcessParams {
            eta: self.eta.to_f64(),
            theta: self.theta.to_f64(),
        }
    }
}

/// Parameters embedded in an arbitrary coefficient ring, so that `x` (or any
/// time) may itself be a polynomial variable.
#[derive(Debug, Clone)]
pub struct RingParams<R> {
    pub eta: R,
    pub theta: R,
}

impl<R: Ring> RingParams<R> {
    pub fn embed<S: Scalar>(params: &ProcessParams<S>, f: impl Fn(S) -> R) -> Self {
        Self {
            eta: f(params.eta.clone()),
            theta: f(params.theta.clone()),
        }
    }
}

/// `Q_0, …, Q_n` in the variable `y`, with coefficients in `R`.
///
/// No ordering of `s`, `t` is assumed; the identity checks evaluate the
/// recurrence at `t = 0` as well.
pub fn q_family<R: Ring>(p: &RingParams<R>, x: &R, t: &R, s: &R, n: usize) -> Vec<Poly<R>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Poly::one());
    if n == 0 {
        return out;
    }
    let y = Poly::<R>::x();
    out.push(Poly::linear_root(x.clone()));
    let dt = t.clone() - s.clone();
    let b1 = dt.clone() * p.eta.clone() + p.theta.clone();
    let a1 = dt * (R::one() + x.clone() * p.eta.clone());
    let b_tail = t.clone() * p.eta.clone() + p.theta.clone();
    let a_tail = t.clone() * (R::one() + p.eta.clone() * p.theta.clone());
    for k in 1..n {
        let (b, a) = if k == 1 {
            (&b1, &a1)
        } else {
            (&b_tail, &a_tail)
        };
        let next = &(y.clone() - Poly::constant(b.clone())) * &out[k] - out[k - 1].scale(a);
        out.push(next);
    }
    out
}

/// `p_0, …, p_n` for the marginal at time `t`: `p_n(x; t) = Q_n(x; 0, t, 0)`.
pub fn p_family<R: Ring>(p: &RingParams<R>, t: &R, n: usize) -> Vec<Poly<R>> {
    q_family(p, &R::zero(), t, &R::zero(), n)
}

/// `B_0, …, B_n` from `B_0 = 1`, `B_1 = Q_1 − (t−s)η`, `B_k = Q_k − tη B_{k−1}`.
pub fn b_family<R: Ring>(p: &RingParams<R>, x: &R, t: &R, s: &R, n: usize) -> Vec<Poly<R>> {
    let q = q_family(p, x, t, s, n);
    let mut out: Vec<Poly<R>> = Vec::with_capacity(n + 1);
    out.push(Poly::one());
    for k in 1..=n {
        let lag = if k == 1 {
            (t.clone() - s.clone()) * p.eta.clone()
        } else {
            t.clone() * p.eta.clone()
        };
        let prev = out[k - 1].scale(&lag);
        out.push(q[k].clone() - prev);
    }
    out
}

/// Closed form of `Σ ζⁿ Q_n(var; x, t, s)` expanded to `order`; `var` is the
/// element playing the role of the polynomial variable.
pub fn phi_closed_form<R: Ring>(
    p: &RingParams<R>,
    var: &R,
    x: &R,
    t: &R,
    s: &R,
    order: usize,
) -> Result<FormalSeries<R>> {
    let (eta, theta) = (&p.eta, &p.theta);
    let tail_b = t.clone() * eta.clone() + theta.clone();
    let num = Poly::new(vec![
        R::one(),
        tail_b.clone() - x.clone(),
        s.clone() + s.clone() * var.clone() * eta.clone() - t.clone() * x.clone() * eta.clone()
            + t.clone() * eta.clone() * theta.clone(),
    ]);
    let den = phi_denominator(p, var, t);
    FormalSeries::rational(&num, &den, order)
}

/// Closed form of `Σ ζⁿ B_n(var; x, t, s)`.
pub fn psi_closed_form<R: Ring>(
    p: &RingParams<R>,
    var: &R,
    x: &R,
    t: &R,
    s: &R,
    order: usize,
) -> Result<FormalSeries<R>> {
    let (eta, theta) = (&p.eta, &p.theta);
    let num = Poly::new(vec![
        R::one(),
        s.clone() * eta.clone() + theta.clone() - x.clone(),
        s.clone() * (R::one() + eta.clone() * theta.clone()),
    ]);
    let den = phi_denominator(p, var, t);
    FormalSeries::rational(&num, &den, order)
}

fn phi_denominator<R: Ring>(p: &RingParams<R>, var: &R, t: &R) -> Poly<R> {
    let (eta, theta) = (&p.eta, &p.theta);
    Poly::new(vec![
        R::one(),
        t.clone() * eta.clone() + theta.clone() - var.clone(),
        t.clone() * (R::one() + eta.clone() * theta.clone()),
    ])
}

fn check_times<S: Scalar>(s: &S, t: &S) -> Result<()> {
    if s < t {
        Ok(())
    } else {
        Err(Error::TimeOrder(format!(
            "s < t (got s = {}, t = {})",
            s.to_f64(),
            t.to_f64()
        )))
    }
}

fn scalar_params<S: Scalar>(params: &ProcessParams<S>) -> RingParams<S> {
    RingParams::embed(params, |v| v)
}

/// `p_n(x; t)` as a polynomial in `x`.
pub fn poly_p<S: Scalar>(params: &ProcessParams<S>, t: &S, n: usize) -> Result<Poly<S>> {
    if *t <= S::zero() {
        return Err(Error::TimeOrder(format!("t > 0 (got {})", t.to_f64())));
    }
    Ok(p_family(&scalar_params(params), t, n)
        .pop()
        .expect("nonempty"))
}

/// `Q_n(y; x, t, s)` as a polynomial in `y`.
pub fn poly_q<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    n: usize,
) -> Result<Poly<S>> {
    check_times(s, t)?;
    Ok(q_family(&scalar_params(params), x, t, s, n)
        .pop()
        .expect("nonempty"))
}

/// `B_n(y; x, t, s)` as a polynomial in `y`.
pub fn poly_b<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    n: usize,
) -> Result<Poly<S>> {
    check_times(s, t)?;
    Ok(b_family(&scalar_params(params), x, t, s, n)
        .pop()
        .expect("nonempty"))
}

/// `B̃_k(x; s) = B_k(0; x, 0, s)` for `k = 0..=n`, as polynomials in `x`.
pub fn b_tilde_family<S: Scalar>(params: &ProcessParams<S>, s: &S, n: usize) -> Vec<Poly<S>> {
    let symbolic = RingParams::embed(params, Poly::constant);
    let x = Poly::<S>::x();
    b_family(&symbolic, &x, &Poly::zero(), &Poly::constant(s.clone()), n)
        .into_iter()
        .map(|b| b.eval(&Poly::zero()))
        .collect()
}

/// `Σ_{n ≤ order} ζⁿ Q_n(y; x, t, s)` built from the recurrence.
pub fn genfun_phi<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    order: usize,
) -> Result<FormalSeries<Poly<S>>> {
    check_times(s, t)?;
    Ok(FormalSeries::new(
        q_family(&scalar_params(params), x, t, s, order),
        order,
    ))
}

/// `Σ_{n ≤ order} ζⁿ B_n(y; x, t, s)` built from the recurrence.
pub fn genfun_psi<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    order: usize,
) -> Result<FormalSeries<Poly<S>>> {
    check_times(s, t)?;
    Ok(FormalSeries::new(
        b_family(&scalar_params(params), x, t, s, order),
        order,
    ))
}

/// Closed form of the `Q` generating function with coefficients in `y`.
pub fn phi_series<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    order: usize,
) -> Result<FormalSeries<Poly<S>>> {
    let p = RingParams::embed(params, Poly::constant);
    phi_closed_form(
        &p,
        &Poly::x(),
        &Poly::constant(x.clone()),
        &Poly::constant(t.clone()),
        &Poly::constant(s.clone()),
        order,
    )
}

/// Closed form of the `B` generating function with coefficients in `y`.
pub fn psi_series<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    t: &S,
    s: &S,
    order: usize,
) -> Result<FormalSeries<Poly<S>>> {
    let p = RingParams::embed(params, Poly::constant);
    psi_closed_form(
        &p,
        &Poly::x(),
        &Poly::constant(x.clone()),
        &Poly::constant(t.clone()),
        &Poly::constant(s.clone()),
        order,
    )
}

/// One line of an identity report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub n: usize,
    /// Largest coefficient of `lhs − rhs`.
    pub residual: f64,
    /// In exact mode, whether `lhs − rhs` is identically zero.
    pub exact_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub exact: bool,
    pub checks: Vec<IdentityCheck>,
    pub max_residual: f64,
}

impl IdentityReport {
    /// Exact mode passes only on identically zero residuals; float mode on
    /// residuals below `tol` relative to the coefficient scale.
    pub fn passed(&self, tol: f64) -> bool {
        if self.exact {
            self.checks.iter().all(|c| c.exact_zero)
        } else {
            self.max_residual <= tol
        }
    }

    /// The first failing check, as an error.
    pub fn first_failure(&self, tol: f64) -> Option<Error> {
        self.checks
            .iter()
            .find(|c| {
                if self.exact {
                    !c.exact_zero
                } else {
                    c.residual > tol
                }
            })
            .map(|c| Error::IdentityFailed {
                identity: c.identity.clone(),
                n: c.n,
                residual: c.residual,
            })
    }
}

struct Collector {
    checks: Vec<IdentityCheck>,
}

impl Collector {
    fn push<R: Ring>(&mut self, identity: &str, n: usize, diff: &R, scale: f64) {
        self.checks.push(IdentityCheck {
            identity: identity.to_string(),
            n,
            residual: diff.magnitude() / scale.max(1.0),
            exact_zero: diff.is_zero(),
        });
    }

    fn push_series<R: Ring>(&mut self, identity: &str, diff: &FormalSeries<R>, scale: f64) {
        for (n, c) in diff.coeffs().iter().enumerate() {
            self.push(identity, n, c, scale);
        }
    }
}

type Bi<S> = Poly<Poly<S>>;

/// Verifies, for all `n ≤ max_n`:
///
/// * `Q_n(z;x,u,s) = Q_n(y;x,t,s) + Σ_{k<n} B_k(y;x,t,s) Q_{n−k}(z;y,u,t)`
///   as a polynomial identity in `(y, z)`;
/// * `Q_n(y;x,t,s) = Σ_k B̃_{n−k}(x;s)(p_k(y;t) − p_k(x;s))` in `(x, y)`;
/// * the generating-function relation
///   `φ(z,x,u,s) − φ(y,x,t,s) = ψ(y,x,t,s)(φ(z,y,u,t) − 1)` and
///   `ψ(y,x,t,s) ψ(x,y,s,t) = 1` as series identities;
/// * agreement of the closed forms of `φ`, `ψ` with the recurrences;
/// * monicity of `p_n`, `Q_n` and affinity of `B̃_k`.
///
/// Residuals are relative to the largest coefficient of the terms involved.
pub fn verify_identities<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    u: &S,
    x: &S,
    max_n: usize,
) -> Result<IdentityReport> {
    if !(*s >= S::zero() && s < t && t < u) {
        return Err(Error::TimeOrder("0 <= s < t < u".into()));
    }
    if max_n < 1 {
        return Err(Error::InvalidParams("N >= 1".into()));
    }
    let mut out = Collector { checks: Vec::new() };

    // Bivariate coefficients: outer variable z (or y), inner variable y (or x).
    let lift = |v: &S| -> Bi<S> { Poly::constant(Poly::constant(v.clone())) };
    let inner_var: Bi<S> = Poly::constant(Poly::x());
    let outer_var: Bi<S> = Poly::x();
    let bp = RingParams::embed(params, |v| Poly::constant(Poly::constant(v)));
    let sp = scalar_params(params);
    let poly_params = RingParams::embed(params, Poly::constant);

    // Q_n(z; x, u, s) with x numeric: polys in z with constant (in y) coefficients.
    let q_zxus: Vec<Bi<S>> = q_family(&sp, x, u, s, max_n)
        .iter()
        .map(|q| q.map(|c| Poly::constant(c.clone())))
        .collect();
    // Q_n(y; x, t, s), B_k(y; x, t, s): polys in y, constant in z.
    let q_yxts = q_family(&sp, x, t, s, max_n);
    let b_yxts = b_family(&sp, x, t, s, max_n);
    // Q_m(z; y, u, t) with y symbolic.
    let q_zyut = q_family(
        &poly_params,
        &Poly::x(),
        &Poly::constant(u.clone()),
        &Poly::constant(t.clone()),
        max_n,
    );

    for n in 0..=max_n {
        let lhs = q_zxus[n].clone();
        let mut rhs: Bi<S> = Poly::constant(q_yxts[n].clone());
        for k in 0..n {
            rhs = rhs + &Poly::constant(b_yxts[k].clone()) * &q_zyut[n - k];
        }
        let scale = lhs.magnitude().max(rhs.magnitude());
        out.push("Qn", n, &(lhs - rhs), scale);
    }

    // Q_n(y; x, t, s) with x symbolic: outer y, inner x.
    let q_sym = q_family(
        &poly_params,
        &Poly::x(),
        &Poly::constant(t.clone()),
        &Poly::constant(s.clone()),
        max_n,
    );
    let p_t = p_family(&sp, t, max_n);
    let p_s = p_family(&sp, s, max_n);
    let b_tilde = b_tilde_family(params, s, max_n);
    for n in 1..=max_n {
        let mut rhs: Bi<S> = Poly::zero();
        for k in 0..=n {
            let diff: Bi<S> =
                p_t[k].map(|c| Poly::constant(c.clone())) - Poly::constant(p_s[k].clone());
            rhs = rhs + &Poly::constant(b_tilde[n - k].clone()) * &diff;
        }
        let lhs = q_sym[n].clone();
        let scale = lhs.magnitude().max(rhs.magnitude());
        out.push("Q-p", n, &(lhs - rhs), scale);
    }
    for (k, b) in b_tilde.iter().enumerate() {
        let degree_excess = b.coeffs().iter().skip(2).fold(S::zero(), |m, c| {
            let a = c.abs();
            if a > m {
                a
            } else {
                m
            }
        });
        out.push("affine B~", k, &degree_excess, 1.0);
    }

    // Generating-function relation, with z outer and y inner.
    let phi_zxus = phi_closed_form(&bp, &outer_var, &lift(x), &lift(u), &lift(s), max_n)?;
    let phi_yxts = phi_closed_form(&bp, &inner_var, &lift(x), &lift(t), &lift(s), max_n)?;
    let psi_yxts = psi_closed_form(&bp, &inner_var, &lift(x), &lift(t), &lift(s), max_n)?;
    let phi_zyut = phi_closed_form(&bp, &outer_var, &inner_var, &lift(u), &lift(t), max_n)?;
    let lhs = &phi_zxus - &phi_yxts;
    let rhs = &psi_yxts * &(&phi_zyut - &FormalSeries::one(max_n));
    let scale = scale_of(&lhs).max(scale_of(&rhs));
    out.push_series("87", &(&lhs - &rhs), scale);

    // ψ(y,x,t,s) ψ(x,y,s,t) = 1 with y outer and x inner.
    let psi_a = psi_closed_form(&bp, &outer_var, &inner_var, &lift(t), &lift(s), max_n)?;
    let psi_b = psi_closed_form(&bp, &inner_var, &outer_var, &lift(s), &lift(t), max_n)?;
    let prod = &psi_a * &psi_b;
    let scale = scale_of(&psi_a).max(scale_of(&psi_b));
    out.push_series("psi*psi=1", &(&prod - &FormalSeries::one(max_n)), scale);

    // Closed forms against the recurrences.
    let phi_rec = genfun_phi(params, x, t, s, max_n)?;
    let phi_cf = phi_series(params, x, t, s, max_n)?;
    out.push_series("phi closed form", &(&phi_rec - &phi_cf), scale_of(&phi_rec));
    let psi_rec = genfun_psi(params, x, t, s, max_n)?;
    let psi_cf = psi_series(params, x, t, s, max_n)?;
    out.push_series("psi closed form", &(&psi_rec - &psi_cf), scale_of(&psi_rec));

    for n in 1..=max_n {
        let lead_q = q_yxts[n].leading() - S::one();
        out.push("monic Q", n, &lead_q, 1.0);
        let lead_p = p_t[n].leading() - S::one();
        out.push("monic p", n, &lead_p, 1.0);
    }

    let max_residual = out.checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        exact: S::EXACT,
        checks: out.checks,
        max_residual,
    })
}

fn scale_of<R: Ring>(series: &FormalSeries<R>) -> f64 {
    crate::scalar::max_magnitude(series.coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn poly(c: &[Rational]) -> Poly<Rational> {
        Poly::new(c.to_vec())
    }

    fn params(eta: Rational, theta: Rational) -> ProcessParams<Rational> {
        ProcessParams::unchecked(eta, theta)
    }

    #[test]
    fn p1_and_p2() {
        let pr = params(q(1, 2), q(1, 3));
        let t = q(2, 1);
        assert_eq!(poly_p(&pr, &t, 0).unwrap(), Poly::one());
        assert_eq!(poly_p(&pr, &t, 1).unwrap(), Poly::x());
        // x² − (tη+θ)x − t
        let b = t.clone() * q(1, 2) + q(1, 3);
        assert_eq!(
            poly_p(&pr, &t, 2).unwrap(),
            poly(&[-t.clone(), -b, q(1, 1)])
        );
    }

    #[test]
    fn p3_for_semicircle() {
        let pr = params(q(0, 1), q(0, 1));
        let t = q(5, 2);
        let expect = poly(&[q(0, 1), -(q(2, 1) * t.clone()), q(0, 1), q(1, 1)]);
        assert_eq!(poly_p(&pr, &t, 3).unwrap(), expect);
    }

    #[test]
    fn q_low_degrees() {
        let pr = params(q(1, 2), q(1, 3));
        let (x, t, s) = (q(1, 5), q(2, 1), q(1, 1));
        assert_eq!(
            poly_q(&pr, &x, &t, &s, 1).unwrap(),
            poly(&[-x.clone(), q(1, 1)])
        );
        // x = 0, s = 0 reduces to p_n.
        for n in 0..8 {
            assert_eq!(
                poly_q(&pr, &q(0, 1), &t, &q(0, 1), n).unwrap(),
                poly_p(&pr, &t, n).unwrap()
            );
        }
    }

    #[test]
    fn q2_for_free_case() {
        // η = θ = 0: y² − xy − (t−s)
        let pr = params(q(0, 1), q(0, 1));
        let (x, t, s) = (q(3, 7), q(5, 2), q(1, 2));
        let expect = poly(&[-(t.clone() - s.clone()), -x.clone(), q(1, 1)]);
        assert_eq!(poly_q(&pr, &x, &t, &s, 2).unwrap(), expect);
    }

    #[test]
    fn rejects_unordered_times() {
        let pr = params(q(1, 2), q(1, 3));
        assert!(poly_q(&pr, &q(0, 1), &q(1, 1), &q(1, 1), 2).is_err());
        assert!(poly_b(&pr, &q(0, 1), &q(1, 1), &q(2, 1), 2).is_err());
        assert!(poly_p(&pr, &q(0, 1), 2).is_err());
    }

    #[test]
    fn b_low_degrees() {
        let pr = params(q(1, 2), q(1, 3));
        let (x, t, s) = (q(1, 5), q(2, 1), q(1, 1));
        assert_eq!(poly_b(&pr, &x, &t, &s, 0).unwrap(), Poly::one());
        let shift = (t.clone() - s.clone()) * q(1, 2);
        assert_eq!(
            poly_b(&pr, &x, &t, &s, 1).unwrap(),
            poly(&[-x.clone() - shift, q(1, 1)])
        );
    }

    #[test]
    fn b_equals_q_without_eta() {
        let pr = params(q(0, 1), q(2, 3));
        let (x, t, s) = (q(-1, 4), q(3, 1), q(1, 2));
        for n in 0..10 {
            assert_eq!(
                poly_b(&pr, &x, &t, &s, n).unwrap(),
                poly_q(&pr, &x, &t, &s, n).unwrap()
            );
        }
    }

    #[test]
    fn b_tilde_is_affine() {
        let pr = params(q(3, 2), q(-1, 3));
        for b in b_tilde_family(&pr, &q(7, 4), 12) {
            assert!(b.degree().unwrap_or(0) <= 1, "{b:?}");
        }
    }

    #[test]
    fn generating_functions_low_orders() {
        let pr = params(q(1, 2), q(1, 3));
        let (x, t, s) = (q(1, 5), q(2, 1), q(1, 1));
        let phi0 = genfun_phi(&pr, &x, &t, &s, 0).unwrap();
        assert_eq!(phi0.coeffs(), &[Poly::one()]);
        let phi = phi_series(&pr, &x, &t, &s, 1).unwrap();
        assert_eq!(phi.coeff(1), poly(&[-x.clone(), q(1, 1)]));
        let psi = psi_series(&pr, &x, &t, &s, 3).unwrap();
        assert_eq!(psi.coeff(0), Poly::one());
    }

    #[test]
    fn phi_closed_form_matches_recurrence_exactly() {
        let pr = params(q(1, 2), q(1, 3));
        let (x, t, s) = (q(1, 5), q(2, 1), q(1, 1));
        assert_eq!(
            genfun_phi(&pr, &x, &t, &s, 8).unwrap(),
            phi_series(&pr, &x, &t, &s, 8).unwrap()
        );
        assert_eq!(
            genfun_psi(&pr, &x, &t, &s, 8).unwrap(),
            psi_series(&pr, &x, &t, &s, 8).unwrap()
        );
    }

    #[test]
    fn psi_equals_phi_without_eta() {
        let pr = params(q(0, 1), q(1, 3));
        let (x, t, s) = (q(1, 5), q(2, 1), q(1, 1));
        assert_eq!(
            psi_series(&pr, &x, &t, &s, 6).unwrap(),
            phi_series(&pr, &x, &t, &s, 6).unwrap()
        );
    }

    #[test]
    fn identities_hold_exactly() {
        let pr = params(q(1, 2), q(1, 3));
        let report = verify_identities(&pr, &q(1, 1), &q(2, 1), &q(3, 1), &q(1, 5), 10).unwrap();
        assert!(report.passed(0.0), "{:?}", report.first_failure(0.0));
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn identities_hold_in_float_mode() {
        let pr = ProcessParams::unchecked(0.7, -0.4);
        let report = verify_identities(&pr, &0.5, &1.25, &2.0, &0.3, 12).unwrap();
        assert!(report.passed(1e-12), "{:?}", report.first_failure(1e-12));
    }

    #[test]
    fn identity_verifier_rejects_bad_times() {
        let pr = params(q(1, 2), q(1, 3));
        assert!(verify_identities(&pr, &q(2, 1), &q(1, 1), &q(3, 1), &q(0, 1), 4).is_err());
    }

    #[test]
    fn validation_of_params() {
        assert!(ProcessParams::new(q(-1, 1), q(1, 1)).is_ok());
        assert!(ProcessParams::new(q(-2, 1), q(1, 1)).is_err());
        assert!(ProcessParams::new(-2.0, 1.0).is_err());
    }
}
