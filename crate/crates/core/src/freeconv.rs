//! Cauchy-transform calculus on truncated moment series: inverse
//! transforms, r- and R-transforms, free and c-convolution.
//!
//! With `x = 1/z` the Cauchy transform of a measure with moments `m_n` is
//! `g(1/x) = h(x) = x Σ m_n xⁿ`. Writing `H` for the compositional inverse
//! of `h`, the inverse of `g` is `k = 1/H`, so
//!
//! * `r(w) = k(w) − 1/w = ((H/w)⁻¹ − 1)/w`,
//! * `R(w) = k_μ(w) − 1/G_ν(k_μ(w)) = ((H_μ/w)⁻¹ − (h_ν∘H_μ/w)⁻¹)/w`.
//!
//! Everything happens on truncated series, exactly over the rationals.
//! Moments `m_0..m_N` determine the transforms to order `N − 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrences::ProcessParams;
use crate::scalar::Scalar;
use crate::series::FormalSeries;
use crate::spectra::{jacobi_of_marginal, moments};

/// Moments `m_0 = 1, m_1, …, m_N` of a probability measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSeries<S> {
    moments: Vec<S>,
}

impl<S: Scalar> MomentSeries<S> {
    pub fn new(moments: Vec<S>) -> Result<Self> {
        if moments.first() != Some(&S::one()) {
            return Err(Error::Series(
                "moment sequence must start with m_0 = 1".into(),
            ));
        }
        Ok(Self { moments })
    }

    /// Moments of the point mass at `c`.
    pub fn dirac(c: &S, order: usize) -> Self {
        let mut moments = vec![S::one()];
        for k in 1..=order {
            moments.push(moments[k - 1].clone() * c.clone());
        }
        Self { moments }
    }

    pub fn order(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[S] {
        &self.moments
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            moments: self.moments[..=order.min(self.order())].to_vec(),
        }
    }

    /// Moments of `X + c`: `Σ_k C(n,k) c^{n−k} m_k`.
    pub fn shift(&self, c: &S) -> Self {
        let n_max = self.order();
        let mut powers = vec![S::one()];
        for k in 1..=n_max {
            powers.push(powers[k - 1].clone() * c.clone());
        }
        let mut binom = vec![S::one()];
        let mut out = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n > 0 {
                let mut next = vec![S::one(); n + 1];
                for k in 1..n {
                    next[k] = binom[k - 1].clone() + binom[k].clone();
                }
                binom = next;
            }
            let mut acc = S::zero();
            for k in 0..=n {
                acc = acc + binom[k].clone() * powers[n - k].clone() * self.moments[k].clone();
            }
            out.push(acc);
        }
        Self { moments: out }
    }

    /// Whether every Hankel matrix `(m_{i+j})` that fits is positive
    /// semidefinite (to `tol` relative to the moment scale in float mode).
    #[allow(clippy::needless_range_loop)]
    pub fn hankel_psd(&self, tol: f64) -> bool {
        let size = self.order() / 2 + 1;
        let scale = self
            .moments
            .iter()
            .map(|m| m.to_f64().abs())
            .fold(1.0, f64::max);
        let small = |v: &S| {
            if S::EXACT {
                v.is_zero()
            } else {
                v.to_f64().abs() <= tol * scale
            }
        };
        let mut a: Vec<Vec<S>> = (0..size)
            .map(|i| (0..size).map(|j| self.moments[i + j].clone()).collect())
            .collect();
        for k in 0..size {
            let pivot = a[k][k].clone();
            if small(&pivot) {
                // A zero pivot forces the rest of its row to vanish.
                if (k + 1..size).any(|j| !small(&a[k][j])) {
                    return false;
                }
                continue;
            }
            if pivot < S::zero() {
                return false;
            }
            for i in k + 1..size {
                let factor = a[i][k].clone() / pivot.clone();
                for j in k..size {
                    let v = a[i][j].clone() - factor.clone() * a[k][j].clone();
                    a[i][j] = v;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.moments.iter().map(Scalar::to_json).collect())
    }
}

/// `h(x) = g(1/x) = Σ m_n x^{n+1}`, to order `N + 1`. Coefficient `k` is the
/// `1/z^k` coefficient of the Cauchy transform.
pub fn g_series<S: Scalar>(m: &MomentSeries<S>) -> FormalSeries<S> {
    let mut coeffs = vec![S::zero()];
    coeffs.extend(m.moments.iter().cloned());
    FormalSeries::new(coeffs, m.order() + 1)
}

/// Moments back from `h`.
fn moments_of_h<S: Scalar>(h: &FormalSeries<S>) -> Result<MomentSeries<S>> {
    MomentSeries::new(h.div_var_pow(1)?.into_coeffs())
}

/// `(H/w)⁻¹` where `H` inverts `h`; `k(w) = (H/w)⁻¹ / w`.
fn k_times_w<S: Scalar>(h: &FormalSeries<S>) -> Result<FormalSeries<S>> {
    if h.coeff(1) != S::one() {
        return Err(Error::Series(
            "Cauchy transform must start with 1/z to be inverted at infinity".into(),
        ));
    }
    h.reversion()?.div_var_pow(1)?.inverse()
}

/// Regular part of the inverse Cauchy transform: `k(w) = 1/w + r(w)`.
/// `r` has order `N − 1`; its coefficients are the free cumulants.
pub fn k_series<S: Scalar>(g: &FormalSeries<S>) -> Result<FormalSeries<S>> {
    let kw = k_times_w(g)?;
    (&kw - &FormalSeries::one(kw.order())).div_var_pow(1)
}

/// The r-transform `k(w) − 1/w` of a measure.
pub fn r_transform<S: Scalar>(m: &MomentSeries<S>) -> Result<FormalSeries<S>> {
    k_series(&g_series(m))
}

/// `R = k_μ − 1/(G_ν ∘ k_μ)` for the pair `(μ, ν)`.
pub fn cr_transform<S: Scalar>(
    mu: &MomentSeries<S>,
    nu: &MomentSeries<S>,
) -> Result<FormalSeries<S>> {
    let order = mu.order().min(nu.order());
    let h_mu = g_series(&mu.truncate(order));
    let h_nu = g_series(&nu.truncate(order));
    let big_h = h_mu.reversion()?;
    let left = k_times_w(&h_mu)?;
    let right = h_nu.compose(&big_h)?.div_var_pow(1)?.inverse()?;
    (&left - &right).div_var_pow(1)
}

/// `h∘H − w` and `H∘h − x`, both zero when the inversion is right.
pub fn inversion_residuals<S: Scalar>(
    m: &MomentSeries<S>,
) -> Result<(FormalSeries<S>, FormalSeries<S>)> {
    let h = g_series(m);
    let big_h = h.reversion()?;
    let order = h.order();
    let id = FormalSeries::var(order);
    Ok((&h.compose(&big_h)? - &id, &big_h.compose(&h)? - &id))
}

/// `h` from an r-transform: `H = w/(1 + w r)`, `h = H^{<−1>}`.
fn h_from_r<S: Scalar>(r: &FormalSeries<S>) -> Result<FormalSeries<S>> {
    let order = r.order() + 1;
    let one_plus_wr =
        &FormalSeries::one(order) + &FormalSeries::new(r.coeffs().to_vec(), order).mul_var_pow(1);
    let big_h = FormalSeries::new(one_plus_wr.inverse()?.into_coeffs(), order + 1).mul_var_pow(1);
    big_h.reversion()
}

/// `μ1 ⊞ μ2` through additivity of r-transforms.
pub fn free_convolve<S: Scalar>(
    m1: &MomentSeries<S>,
    m2: &MomentSeries<S>,
) -> Result<MomentSeries<S>> {
    let r = &r_transform(m1)? + &r_transform(m2)?;
    moments_of_h(&h_from_r(&r)?)
}

/// Measure with a given r-transform.
pub fn moments_from_r<S: Scalar>(r: &FormalSeries<S>) -> Result<MomentSeries<S>> {
    moments_of_h(&h_from_r(r)?)
}

/// Second component with Cauchy transform `1/(z − R(g(z)))`, where `g`
/// belongs to `mu`: in `x = 1/z`, `M_ν(x) = 1/(1 − x R(h_μ(x)))`.
pub fn moments_from_cr<S: Scalar>(
    mu: &MomentSeries<S>,
    big_r: &FormalSeries<S>,
) -> Result<MomentSeries<S>> {
    let order = big_r.order() + 1;
    let h = g_series(mu);
    let composed = big_r.compose(&h)?;
    let x_r = FormalSeries::new(composed.into_coeffs(), order).mul_var_pow(1);
    let m = (&FormalSeries::one(order) - &x_r).inverse()?;
    MomentSeries::new(m.into_coeffs())
}

/// `(μ1, ν1) ⊠ (μ2, ν2)`: free convolution on the first component, `R`
/// additive on the second.
pub fn c_convolve<S: Scalar>(
    pair1: &(MomentSeries<S>, MomentSeries<S>),
    pair2: &(MomentSeries<S>, MomentSeries<S>),
) -> Result<(MomentSeries<S>, MomentSeries<S>)> {
    let mu = free_convolve(&pair1.0, &pair2.0)?;
    let big_r = &cr_transform(&pair1.0, &pair1.1)? + &cr_transform(&pair2.0, &pair2.1)?;
    let nu = moments_from_cr(&mu, &big_r)?;
    Ok((mu, nu))
}

/// Moments `m_0..m_N` of `π_t`, exact in rational mode.
pub fn marginal_moments<S: Scalar>(
    params: &ProcessParams<S>,
    t: &S,
    order: usize,
) -> Result<MomentSeries<S>> {
    if t.is_zero() {
        return Ok(MomentSeries::dirac(&S::zero(), order));
    }
    MomentSeries::new(moments(&jacobi_of_marginal(params, t)?, order))
}

/// For `θ = 1`: moments of `(ℒ(Y_t + t(1+η)), ℒ(X_t + t))`, where `Y` is the
/// free Poisson process `(η, θ) = (0, 1)` run at time `t(1+η)`, i.e. free
/// Poisson with rate `t(1+η)` and jump size 1, and `X` the bi-Poisson
/// process.
pub fn bipoisson_pair_moments<S: Scalar>(
    params: &ProcessParams<S>,
    t: &S,
    order: usize,
) -> Result<(MomentSeries<S>, MomentSeries<S>)> {
    if params.theta != S::one() {
        return Err(Error::InvalidParams(format!(
            "the c-convolution semigroup needs theta = 1 (got {})",
            params.theta.to_f64()
        )));
    }
    params.validate()?;
    let rate = t.clone() * (S::one() + params.eta.clone());
    let poisson = ProcessParams::new(S::zero(), S::one())?;
    let first = marginal_moments(&poisson, &rate, order)?.shift(&rate);
    let second = marginal_moments(params, t, order)?.shift(t);
    Ok((first, second))
}

/// Largest gap between `pair(s) ⊠ pair(t)` and `pair(s + t)` over both
/// components and moments up to `order`, relative to `max(1, |m_n|)`.
/// Exactly zero over the rationals.
pub fn semigroup_residual<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    order: usize,
) -> Result<f64> {
    // One extra moment feeds the transforms up to the requested order.
    let work = order + 1;
    let left = c_convolve(
        &bipoisson_pair_moments(params, s, work)?,
        &bipoisson_pair_moments(params, t, work)?,
    )?;
    let right = bipoisson_pair_moments(params, &(s.clone() + t.clone()), work)?;
    let gap = |a: &MomentSeries<S>, b: &MomentSeries<S>| {
        a.moments()
            .iter()
            .zip(b.moments())
            .take(order + 1)
            .map(|(x, y)| (x.clone() - y.clone()).magnitude() / y.magnitude().max(1.0))
            .fold(0.0, f64::max)
    };
    Ok(gap(&left.0, &right.0).max(gap(&left.1, &right.1)))
}

/// `√(1 + u)` for a series `u` with zero constant term.
fn sqrt_one_plus<S: Scalar>(u: &FormalSeries<S>) -> Result<FormalSeries<S>> {
    let order = u.order();
    let half = S::from_ratio(1, 2);
    let mut coeff = S::one();
    let mut binomial = vec![S::one()];
    for k in 1..=order {
        coeff = coeff * (half.clone() - S::from_int(k as i64 - 1)) / S::from_int(k as i64);
        binomial.push(coeff.clone());
    }
    FormalSeries::new(binomial, order).compose(u)
}

/// Moments of `π_t` read off the expansion at infinity of the algebraic
/// formula for its Cauchy transform,
/// `G = (z(1+2ηθ) + b − √((z−b)² − 4a)) / (2(1+zη)(t+zθ))` with
/// `b = tη+θ`, `a = t(1+ηθ)`. Independent of the Jacobi machinery.
pub fn marginal_moments_closed_form<S: Scalar>(
    params: &ProcessParams<S>,
    t: &S,
    order: usize,
) -> Result<MomentSeries<S>> {
    let (eta, theta) = (params.eta.clone(), params.theta.clone());
    let b = t.clone() * eta.clone() + theta.clone();
    let a = t.clone() * params.one_plus_eta_theta();
    // With x = 1/z: G = x N(x) / (2 (x+η)(tx+θ)),
    // N = (1+2ηθ) + b x − (1 − b x) √(1 − 4a x²/(1 − b x)²).
    let work = order + 4;
    let one_minus_bx = FormalSeries::from_poly(&Poly::new(vec![S::one(), -b.clone()]), work);
    let inv = one_minus_bx.inverse()?;
    let x2 = FormalSeries::var(work).mul_var_pow(1);
    let u = (&(&x2 * &inv) * &inv).scale(&(S::from_int(-4) * a));
    let root = sqrt_one_plus(&u)?;
    let two = S::from_int(2);
    let lead = S::one() + two.clone() * eta.clone() * theta.clone();
    let numer =
        &FormalSeries::from_poly(&Poly::new(vec![lead, b]), work) - &(&one_minus_bx * &root);
    let denom = FormalSeries::from_poly(
        &(Poly::new(vec![eta, S::one()]) * Poly::new(vec![theta, t.clone()])).scale(&two),
        work,
    );
    // Cancel the common power of x (present when ηθ = 0).
    let shift = denom.coeffs().iter().take_while(|c| c.is_zero()).count();
    let numer = numer.div_var_pow(shift)?;
    let denom = denom.div_var_pow(shift)?;
    let m = numer.truncate(order).div(&denom.truncate(order))?;
    MomentSeries::new(m.into_coeffs())
}
