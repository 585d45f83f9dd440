//! Truncated formal power series `c_0 + c_1 ζ + … + c_N ζ^N`.
//!
//! Arithmetic is closed at the truncation order: binary operations truncate
//! to the smaller of the two orders.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> FormalSeries<R> {
    /// Series with the given coefficients, padded or cut to `order`.
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.resize(order + 1, R::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: R, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    /// The formal variable `ζ`.
    pub fn var(order: usize) -> Self {
        Self::new(vec![R::zero(), R::one()], order)
    }

    /// Expansion of a polynomial in `ζ`.
    pub fn from_poly(p: &Poly<R>, order: usize) -> Self {
        Self::new(p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> FormalSeries<T> {
        FormalSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiplication by `ζ^k`, keeping the order.
    pub fn mul_var_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs, self.order())
    }

    /// Division by `ζ^k`; the order drops by `k`. Fails unless the first `k`
    /// coefficients vanish.
    pub fn div_var_pow(&self, k: usize) -> Result<Self> {
        if k > self.order() || !self.coeffs[..k].iter().all(Zero::is_zero) {
            return Err(Error::Series(format!("not divisible by ζ^{k}")));
        }
        Ok(Self {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0_inv = self.coeffs[0]
            .try_inverse()
            .ok_or_else(|| Error::Series("constant term is not a unit".into()))?;
        let n = self.order();
        let mut out: Vec<R> = Vec::with_capacity(n + 1);
        out.push(c0_inv.clone());
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc = acc + self.coeffs[j].clone() * out[k - j].clone();
                }
            }
            out.push(-(acc * c0_inv.clone()));
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    /// Expansion of `num / den` to the given order.
    pub fn rational(num: &Poly<R>, den: &Poly<R>, order: usize) -> Result<Self> {
        Self::from_poly(num, order).div(&Self::from_poly(den, order))
    }

    /// Composition `self(inner(ζ))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series(
                "inner series of a composition must vanish at 0".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }
}

impl<S: Scalar> FormalSeries<S> {
    pub fn derivative(&self) -> Self {
        let order = self.order();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_int(k as i64))
            .collect();
        Self::new(coeffs, order.saturating_sub(1))
    }

    /// Compositional inverse `g` with `self(g(ζ)) = ζ`, by Newton iteration
    /// with doubling precision. Requires `c_0 = 0` and `c_1 ≠ 0`.
    pub fn reversion(&self) -> Result<Self> {
        let order = self.order();
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("reversion needs a zero constant term".into()));
        }
        let c1_inv = self
            .coeff(1)
            .try_inverse()
            .ok_or_else(|| Error::Series("reversion needs a nonzero linear term".into()))?;
        let mut g = Self::new(vec![S::zero(), c1_inv], order);
        let mut precision = 1;
        while precision < order {
            precision = (2 * precision).min(order);
            let f = self.truncate(precision);
            let gp = g.truncate(precision);
            let residual = &f.compose(&gp)? - &Self::var(precision);
            let slope = f.derivative().extend(precision).compose(&gp)?;
            let step = residual.div(&slope)?;
            g = (&gp - &step).extend(order);
        }
        Ok(g)
    }

    /// Zero-pads to a higher order (used when a derivative lost one degree).
    fn extend(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    pub fn to_f64(&self) -> FormalSeries<f64> {
        self.map(Scalar::to_f64)
    }
}

impl<R: Ring> Add<&FormalSeries<R>> for &FormalSeries<R> {
    type Output = FormalSeries<R>;

    fn add(self, rhs: &FormalSeries<R>) -> FormalSeries<R> {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
                .collect(),
        }
    }
}

impl<R: Ring> Sub<&FormalSeries<R>> for &FormalSeries<R> {
    type Output = FormalSeries<R>;

    fn sub(self, rhs: &FormalSeries<R>) -> FormalSeries<R> {
        let order = self.order().min(rhs.order());
        FormalSeries {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
                .collect(),
        }
    }
}

impl<R: Ring> Neg for &FormalSeries<R> {
    type Output = FormalSeries<R>;

    fn neg(self) -> FormalSeries<R> {
        FormalSeries {
            coeffs: self.coeffs.iter().cloned().map(Neg::neg).collect(),
        }
    }
}

impl<R: Ring> Mul<&FormalSeries<R>> for &FormalSeries<R> {
    type Output = FormalSeries<R>;

    fn mul(self, rhs: &FormalSeries<R>) -> FormalSeries<R> {
        let order = self.order().min(rhs.order());
        let mut out = vec![R::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        FormalSeries { coeffs: out }
    }
}

impl<R: Ring> Mul for FormalSeries<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}
