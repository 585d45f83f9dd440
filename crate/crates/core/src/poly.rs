//! Dense univariate polynomials over a [`Ring`], constant term first.
//!
//! `Poly<Poly<S>>` is used for bivariate identities: the outer variable
//! carries coefficients that are themselves polynomials in the inner one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{Ring, Scalar};

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    /// Builds a polynomial from coefficients (constant term first); trailing
    /// zeros are dropped.
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `x - c`.
    pub fn linear_root(c: R) -> Self {
        Self::new(vec![-c, R::one()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(R::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Applies `f` to every coefficient.
    pub fn map<T: Ring>(&self, f: impl Fn(&R) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Poly<S> {
    pub fn to_f64(&self) -> Poly<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

impl<R: Ring> Default for Poly<R> {
    fn default() -> Self {
        Self { coeffs: Vec::new() }
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(Neg::neg).collect(),
        }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<R: Ring> Mul<&Poly<R>> for &Poly<R> {
    type Output = Poly<R>;

    fn mul(self, rhs: &Poly<R>) -> Poly<R> {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn try_inverse(&self) -> Option<Self> {
        match self.coeffs.len() {
            1 => self.coeffs[0].try_inverse().map(Self::constant),
            _ => None,
        }
    }

    fn magnitude(&self) -> f64 {
        crate::scalar::max_magnitude(&self.coeffs)
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c:?})"),
                1 => format!("({c:?})x"),
                _ => format!("({c:?})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(c: &[i64]) -> Poly<Rational> {
        Poly::new(c.iter().map(|&v| Rational::from_int(v)).collect())
    }

    #[test]
    fn arithmetic_trims_and_multiplies() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.clone() * b.clone(), p(&[-1, 0, 1]));
        assert_eq!(a.clone() - a.clone(), Poly::zero());
        assert_eq!((a.clone() + b).degree(), Some(1));
        assert_eq!(a.shift(), p(&[0, 1, 1]));
    }

    #[test]
    fn horner_evaluation() {
        let f = p(&[2, -3, 1]);
        assert_eq!(f.eval(&Rational::from_int(2)), Rational::from_int(0));
        assert_eq!(f.eval_f64(3.0), 2.0);
    }

    #[test]
    fn nested_polys_form_a_ring() {
        let y: Poly<Rational> = Poly::x();
        let outer: Poly<Poly<Rational>> = Poly::new(vec![y.clone(), Poly::one()]);
        let sq = outer.clone() * outer;
        assert_eq!(sq.coeff(0), y.clone() * y.clone());
        assert_eq!(sq.coeff(1), y.scale(&Rational::from_int(2)));
        assert!(sq.is_monic());
    }
}
