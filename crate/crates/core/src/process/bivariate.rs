//! Double generating functions of mixed moments,
//! `Σ z1ⁿ z2ᵐ E(p_n(X_s; s) · (…) · p_m(X_u; u))`, truncated to the box
//! `n, m ≤ N`.

use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrences::ProcessParams;
use crate::scalar::{max_magnitude, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BivariateSeries<R> {
    order: usize,
    /// Row-major: index `n * (order + 1) + m` holds the `z1ⁿ z2ᵐ` coefficient.
    coeffs: Vec<R>,
}

impl<R: Ring> BivariateSeries<R> {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![R::zero(); (order + 1) * (order + 1)],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize, m: usize) -> R {
        if n > self.order || m > self.order {
            return R::zero();
        }
        self.coeffs[n * (self.order + 1) + m].clone()
    }

    fn set(&mut self, n: usize, m: usize, value: R) {
        let width = self.order + 1;
        self.coeffs[n * width + m] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut out = Self::zero(order);
        for n in 0..=order.min(self.order) {
            for m in 0..=order.min(self.order) {
                out.set(n, m, self.coeff(n, m));
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Series with a single coefficient.
    pub fn monomial(order: usize, n: usize, m: usize, c: R) -> Self {
        let mut out = Self::zero(order);
        if n <= order && m <= order {
            out.set(n, m, c);
        }
        out
    }

    /// `Σ_k c^k (z1 z2)^k · self`, i.e. division by `1 − c z1 z2`.
    pub fn div_one_minus_diag(&self, c: &R) -> Self {
        let mut out = self.clone();
        for n in 1..=self.order {
            for m in 1..=self.order {
                let carried = out.coeff(n - 1, m - 1) * c.clone();
                out.set(n, m, out.coeff(n, m) + carried);
            }
        }
        out
    }

    /// `self(z1, 0)`, as a series with only the `m = 0` column.
    pub fn at_z2_zero(&self) -> Self {
        let mut out = Self::zero(self.order);
        for n in 0..=self.order {
            out.set(n, 0, self.coeff(n, 0));
        }
        out
    }

    /// `(self − self(z1, 0)) / z2`. The last column is unknown afterwards, so
    /// the order drops by one.
    pub fn shift_down_z2(&self) -> Self {
        let order = self.order.saturating_sub(1);
        let mut out = Self::zero(order);
        for n in 0..=order {
            for m in 0..=order {
                out.set(n, m, self.coeff(n, m + 1));
            }
        }
        out
    }

    /// Multiplication by `z2`.
    pub fn mul_z2(&self) -> Self {
        let mut out = Self::zero(self.order);
        for n in 0..=self.order {
            for m in 1..=self.order {
                out.set(n, m, self.coeff(n, m - 1));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_magnitude(&self) -> f64 {
        max_magnitude(&self.coeffs)
    }

    /// Cell `(n, m)` with the largest magnitude, if nonzero.
    pub fn worst_cell(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for n in 0..=self.order {
            for m in 0..=self.order {
                let v = self.coeff(n, m).magnitude();
                if v > 0.0 && best.is_none_or(|b| v > b.2) {
                    best = Some((n, m, v));
                }
            }
        }
        best
    }
}

impl<R: Ring> Add<&BivariateSeries<R>> for &BivariateSeries<R> {
    type Output = BivariateSeries<R>;
    fn add(self, rhs: &BivariateSeries<R>) -> BivariateSeries<R> {
        let order = self.order.min(rhs.order);
        let mut out = BivariateSeries::zero(order);
        for n in 0..=order {
            for m in 0..=order {
                out.set(n, m, self.coeff(n, m) + rhs.coeff(n, m));
            }
        }
        out
    }
}

impl<R: Ring> Sub<&BivariateSeries<R>> for &BivariateSeries<R> {
    type Output = BivariateSeries<R>;
    fn sub(self, rhs: &BivariateSeries<R>) -> BivariateSeries<R> {
        let order = self.order.min(rhs.order);
        let mut out = BivariateSeries::zero(order);
        for n in 0..=order {
            for m in 0..=order {
                out.set(n, m, self.coeff(n, m) - rhs.coeff(n, m));
            }
        }
        out
    }
}

fn diag_ratio<S: Scalar>(params: &ProcessParams<S>, s: &S) -> S {
    s.clone() * params.one_plus_eta_theta()
}

/// `φ0 = Σ z1ⁿ z2ᵐ E(p_n(X_s) p_m(X_u)) = (1 − z1z2 ηθ s)/(1 − z1z2 s(1+ηθ))`.
pub fn phi0<S: Scalar>(params: &ProcessParams<S>, s: &S, order: usize) -> BivariateSeries<S> {
    let eta_theta = params.eta.clone() * params.theta.clone();
    let num = &BivariateSeries::monomial(order, 0, 0, S::one())
        - &BivariateSeries::monomial(order, 1, 1, eta_theta * s.clone());
    num.div_one_minus_diag(&diag_ratio(params, s))
}

/// `φ1 = Σ z1ⁿ z2ᵐ E(p_n(X_s) X_t p_m(X_u))`, `s ≤ t ≤ u`:
/// `(s z1 + t z2 + s z1 z2 (tη+θ)) / (1 − s z1 z2 (1+ηθ))`.
pub fn phi1<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    order: usize,
) -> BivariateSeries<S> {
    let b = t.clone() * params.eta.clone() + params.theta.clone();
    let num = &(&BivariateSeries::monomial(order, 1, 0, s.clone())
        + &BivariateSeries::monomial(order, 0, 1, t.clone()))
        + &BivariateSeries::monomial(order, 1, 1, s.clone() * b);
    num.div_one_minus_diag(&diag_ratio(params, s))
}

/// `φ1` obtained from `φ0` by one step of the recurrence in `m`, as a check
/// on the closed form:
/// `(1/z2 + tη+θ)(φ0 − φ0(z1,0)) + z2 t(1+ηθ) φ0 − ηθ t z2`.
pub fn phi1_from_phi0<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    order: usize,
) -> BivariateSeries<S> {
    let base = phi0(params, s, order + 1);
    step_in_m(params, &base, t, order)
}

/// `φ2 = Σ z1ⁿ z2ᵐ E(p_n(X_s) X_{t1} X_{t2} p_m(X_u))`, `s ≤ t1 ≤ t2 ≤ u`:
/// `(1/z2 + t2η+θ)(φ1 − φ1(z1,0)) + z2 t2(1+ηθ) φ1 − z1 z2 s t2 ηθ`,
/// with `φ1 = φ1(s, t1)`.
///
/// The last term comes from `a_1 = t2` differing from the tail value
/// `t2(1+ηθ)` by `t2 ηθ`, weighted by `φ1(z1, 0) = s z1`.
pub fn phi2<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t1: &S,
    t2: &S,
    order: usize,
) -> Result<BivariateSeries<S>> {
    if !(s <= t1 && t1 <= t2) {
        return Err(Error::TimeOrder("s <= t1 <= t2".into()));
    }
    let base = phi1(params, s, t1, order + 1);
    Ok(step_in_m(params, &base, t2, order))
}

/// Replaces `p_m(X; t)` in the `m` index of `base` by `X p_m(X; t)`,
/// expanded with the recurrence at time `t`. `base` must have order
/// `order + 1`.
fn step_in_m<S: Scalar>(
    params: &ProcessParams<S>,
    base: &BivariateSeries<S>,
    t: &S,
    order: usize,
) -> BivariateSeries<S> {
    let b = t.clone() * params.eta.clone() + params.theta.clone();
    let tail_a = t.clone() * params.one_plus_eta_theta();
    let eta_theta = params.eta.clone() * params.theta.clone();
    let tail = (base - &base.at_z2_zero()).truncate(order);
    let shifted = base.shift_down_z2().truncate(order);
    let mut out = &(&shifted + &tail.scale(&b)) + &base.mul_z2().truncate(order).scale(&tail_a);
    // Correction for a_1 = t instead of the tail value: −ηθ t z2 base(z1, 0).
    let correction = base
        .at_z2_zero()
        .mul_z2()
        .truncate(order)
        .scale(&(eta_theta * t.clone()));
    out = &out - &correction;
    out
}
