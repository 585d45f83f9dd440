//! From three-term recurrence data to probability measures.
//!
//! A [`JacobiSpec`] encodes `x p_n = p_{n+1} + b_n p_n + a_n p_{n-1}` with
//! coefficients that become constant from some index on. Its orthogonality
//! measure is recovered through the continued-fraction Cauchy transform:
//! the absolutely continuous part by Stieltjes inversion, atoms as the real
//! poles of the transform.

mod integrate;
mod marginal;
mod measure;
mod roots;
mod sample;
pub mod tridiag;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrences::ProcessParams;
use crate::scalar::Scalar;

pub use integrate::{adaptive_gauss, gauss_legendre_10};
pub use marginal::{
    eps_rule_weights, marginal_cauchy_closed, marginal_density_closed, p_weight_closed, EpsWeights,
};
pub use measure::{
    atom_weight_by_limit, spectral_measure, AcPart, Atom, MeasureJson, MeasureKind, SpectralMeasure,
};
pub use roots::roots as poly_roots;
pub use sample::{sample, MeasureSampler};

/// Relative threshold below which a float off-diagonal coefficient counts
/// as zero (finite-support case).
pub const ZERO_COUPLING_TOL: f64 = 1e-14;

/// Three-term recurrence coefficients with a constant tail.
///
/// `b[k]` is `b_k` for `k < b.len()`, `a[k-1]` is `a_k` for `k ≤ a.len()`;
/// all further coefficients equal `(b_tail, a_tail)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpec<S> {
    pub b: Vec<S>,
    pub a: Vec<S>,
    pub b_tail: S,
    pub a_tail: S,
}

impl<S: Scalar> JacobiSpec<S> {
    pub fn new(b: Vec<S>, a: Vec<S>, b_tail: S, a_tail: S) -> Result<Self> {
        let spec = Self {
            b,
            a,
            b_tail,
            a_tail,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        let scale = self
            .a
            .iter()
            .chain(std::iter::once(&self.a_tail))
            .map(|v| v.to_f64().abs())
            .fold(1.0, f64::max);
        for (k, v) in self
            .a
            .iter()
            .chain(std::iter::once(&self.a_tail))
            .enumerate()
        {
            let negative = if S::EXACT {
                *v < S::zero()
            } else {
                v.to_f64() < -ZERO_COUPLING_TOL * scale
            };
            if negative {
                return Err(Error::InvalidParams(format!(
                    "off-diagonal coefficient a_{} = {} is negative",
                    k + 1,
                    v.to_f64()
                )));
            }
        }
        Ok(())
    }

    /// `b_k`.
    pub fn b(&self, k: usize) -> S {
        self.b
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.b_tail.clone())
    }

    /// `a_k` for `k ≥ 1`.
    pub fn a(&self, k: usize) -> S {
        assert!(k >= 1, "a_0 is undefined");
        self.a
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| self.a_tail.clone())
    }

    /// Smallest `K` with `b_k = b_tail` and `a_{k+1} = a_tail` for all `k ≥ K`.
    pub fn tail_start(&self) -> usize {
        let mut k = self.b.len().max(self.a.len());
        while k > 0 && self.b(k - 1) == self.b_tail && self.a(k) == self.a_tail {
            k -= 1;
        }
        k
    }

    /// Size of the finite Jacobi block when some `a_k` vanishes (the
    /// measure is then purely atomic with at most that many atoms).
    pub fn finite_block(&self) -> Option<usize> {
        let scale = self
            .a
            .iter()
            .chain(std::iter::once(&self.a_tail))
            .map(|v| v.to_f64().abs())
            .fold(1.0, f64::max);
        let is_zero = |v: &S| {
            if S::EXACT {
                v.is_zero()
            } else {
                v.to_f64() <= ZERO_COUPLING_TOL * scale
            }
        };
        (1..=self.a.len() + 1).find(|&k| is_zero(&self.a(k)))
    }

    pub fn to_f64(&self) -> JacobiSpec<f64> {
        JacobiSpec {
            b: self.b.iter().map(Scalar::to_f64).collect(),
            a: self.a.iter().map(Scalar::to_f64).collect(),
            b_tail: self.b_tail.to_f64(),
            a_tail: self.a_tail.to_f64(),
        }
    }
}

/// Recurrence data of the marginal law `π_t`:
/// `b = (0, tη+θ)`, `a = (t)`, tail `(tη+θ, t(1+ηθ))`.
pub fn jacobi_of_marginal<S: Scalar>(params: &ProcessParams<S>, t: &S) -> Result<JacobiSpec<S>> {
    params.validate()?;
    if *t <= S::zero() {
        return Err(Error::TimeOrder(format!("t > 0 (got {})", t.to_f64())));
    }
    let b_tail = t.clone() * params.eta.clone() + params.theta.clone();
    let a_tail = t.clone() * params.one_plus_eta_theta();
    JacobiSpec::new(
        vec![S::zero(), b_tail.clone()],
        vec![t.clone()],
        b_tail,
        clamp_nonnegative(a_tail),
    )
}

/// Recurrence data of the transition law `P_{s,t}(x, ·)`:
/// `b = (x, (t−s)η+θ, tη+θ)`, `a = ((t−s)(1+xη), t(1+ηθ))`.
pub fn jacobi_of_transition<S: Scalar>(
    params: &ProcessParams<S>,
    x: &S,
    s: &S,
    t: &S,
) -> Result<JacobiSpec<S>> {
    params.validate()?;
    if !(*s >= S::zero() && s < t) {
        return Err(Error::TimeOrder(format!(
            "0 <= s < t (got s = {}, t = {})",
            s.to_f64(),
            t.to_f64()
        )));
    }
    let one_plus_x_eta = S::one() + x.clone() * params.eta.clone();
    let outside = if S::EXACT {
        one_plus_x_eta < S::zero()
    } else {
        one_plus_x_eta.to_f64() < -1e-12
    };
    if outside {
        return Err(Error::OutsideSupport {
            x: x.to_f64(),
            value: one_plus_x_eta.to_f64(),
        });
    }
    let dt = t.clone() - s.clone();
    let b_tail = t.clone() * params.eta.clone() + params.theta.clone();
    let a_tail = clamp_nonnegative(t.clone() * params.one_plus_eta_theta());
    JacobiSpec::new(
        vec![
            x.clone(),
            dt.clone() * params.eta.clone() + params.theta.clone(),
            b_tail.clone(),
        ],
        vec![clamp_nonnegative(dt * one_plus_x_eta), a_tail.clone()],
        b_tail,
        a_tail,
    )
}

/// Rounding can leave `1 + ηθ` or `1 + xη` a hair below zero in float mode.
fn clamp_nonnegative<S: Scalar>(v: S) -> S {
    if !S::EXACT && v < S::zero() && v.to_f64() > -1e-12 {
        S::zero()
    } else {
        v
    }
}

/// Root of `w = 1/(z − b − a w)` that vanishes as `|z| → ∞`.
fn tail_root(z: Complex64, b_tail: f64, a_tail: f64) -> Result<Complex64> {
    let shifted = z - b_tail;
    if a_tail == 0.0 {
        return Ok(shifted.inv());
    }
    let disc = shifted * shifted - 4.0 * a_tail;
    if z.im == 0.0 && (disc.norm() < 1e-14 || disc.re < 0.0) {
        return Err(Error::BranchAmbiguous(format!("{z}")));
    }
    let root = disc.sqrt();
    // The larger of shifted ± root in modulus gives the small root stably.
    let big = if (shifted + root).norm() >= (shifted - root).norm() {
        shifted + root
    } else {
        shifted - root
    };
    Ok(2.0 / big)
}

fn backward(j: &JacobiSpec<f64>, z: Complex64, mut w: Complex64) -> Complex64 {
    for k in (0..j.tail_start()).rev() {
        w = (z - j.b(k) - j.a(k + 1) * w).inv();
    }
    w
}

/// Cauchy transform `G(z) = ∫ μ(dx)/(z − x)` by the continued fraction.
pub fn cauchy_transform(j: &JacobiSpec<f64>, z: Complex64) -> Result<Complex64> {
    let w = tail_root(z, j.b_tail, j.a_tail)?;
    Ok(backward(j, z, w))
}

/// Boundary value `G(x + i0)` for `x` strictly inside the tail band.
pub(crate) fn cauchy_boundary(j: &JacobiSpec<f64>, x: f64) -> Complex64 {
    let shifted = x - j.b_tail;
    let gap = (4.0 * j.a_tail - shifted * shifted).max(0.0);
    let w = Complex64::new(shifted, -gap.sqrt()) / (2.0 * j.a_tail);
    backward(j, Complex64::new(x, 0.0), w)
}

/// [`cauchy_boundary`] at `x = b∞ − 2√a∞ cos φ`, with the tail root taken
/// straight from the angle so the band edges lose no digits.
pub(crate) fn cauchy_boundary_angle(j: &JacobiSpec<f64>, phi: f64) -> (f64, Complex64) {
    let root = j.a_tail.sqrt();
    let x = j.b_tail - 2.0 * root * phi.cos();
    let w = -Complex64::new(phi.cos(), phi.sin()) / root;
    (x, backward(j, Complex64::new(x, 0.0), w))
}

/// Nodes and weights of an N-point Gauss rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gauss rule from the leading `n × n` Jacobi matrix (capped at the size
/// of a finite block).
pub fn gauss_rule(j: &JacobiSpec<f64>, n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidParams("quadrature needs N >= 1".into()));
    }
    let n = j.finite_block().map_or(n, |m| n.min(m));
    let diag: Vec<f64> = (0..n).map(|k| j.b(k)).collect();
    let off: Vec<f64> = (1..n).map(|k| j.a(k).max(0.0).sqrt()).collect();
    let eig = tridiag::eigen(&diag, &off)?;
    let weights: Vec<f64> = eig.first_components.iter().map(|c| c * c).collect();
    let total: f64 = weights.iter().sum();
    Ok(QuadratureRule {
        nodes: eig.values,
        weights: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Moments `m_0, …, m_n`, exact in rational mode.
///
/// Tracks `x^k` in the orthogonal basis; the moment is the `p_0` coordinate.
pub fn moments<S: Scalar>(j: &JacobiSpec<S>, n: usize) -> Vec<S> {
    let size = n + 2;
    let b: Vec<S> = (0..size).map(|k| j.b(k)).collect();
    let a: Vec<S> = (0..size)
        .map(|k| if k == 0 { S::zero() } else { j.a(k) })
        .collect();
    let mut coords = vec![S::zero(); size];
    coords[0] = S::one();
    let mut out = Vec::with_capacity(n + 1);
    for step in 0..=n {
        out.push(coords[0].clone());
        if step == n {
            break;
        }
        let mut next = vec![S::zero(); size];
        let reach = (step + 1).min(size - 1);
        for k in 0..=reach {
            let c = &coords[k];
            if c.is_zero() {
                continue;
            }
            if k + 1 < size {
                next[k + 1] = next[k + 1].clone() + c.clone();
            }
            next[k] = next[k].clone() + b[k].clone() * c.clone();
            if k >= 1 {
                next[k - 1] = next[k - 1].clone() + a[k].clone() * c.clone();
            }
        }
        coords = next;
    }
    out
}

/// Squared norms `E p_k² = a_1 ⋯ a_k` for `k = 0..=n`.
pub fn norms<S: Scalar>(j: &JacobiSpec<S>, n: usize) -> Vec<S> {
    let mut out = vec![S::one()];
    for k in 1..=n {
        let prev = out[k - 1].clone();
        out.push(prev * j.a(k));
    }
    out
}

/// Monic orthogonal polynomials `P_0, …, P_n` of a Jacobi spec.
pub fn orthogonal_polys<S: Scalar>(j: &JacobiSpec<S>, n: usize) -> Vec<Poly<S>> {
    let mut out: Vec<Poly<S>> = vec![Poly::constant(S::one())];
    if n == 0 {
        return out;
    }
    out.push(Poly::linear_root(j.b(0)));
    for k in 1..n {
        let next = &Poly::linear_root(j.b(k)) * &out[k] - out[k - 1].scale(&j.a(k));
        out.push(next);
    }
    out
}
