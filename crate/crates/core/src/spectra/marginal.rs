//! Closed forms for the marginal law `π_t`, used as an independent check on
//! the continued-fraction machinery.

use num_complex::Complex64;

use super::integrate::adaptive_gauss;
use crate::error::{Error, Result};
use crate::recurrences::ProcessParams;

/// `G(z)` from the algebraic formula, with the square root branch that
/// makes `G(z) ~ 1/z` at infinity.
pub fn marginal_cauchy_closed(params: &ProcessParams<f64>, t: f64, z: Complex64) -> Complex64 {
    let (eta, theta) = (params.eta, params.theta);
    let b = t * eta + theta;
    let a = t * (1.0 + eta * theta);
    let shifted = z - b;
    let root = shifted * (Complex64::new(1.0, 0.0) - 4.0 * a / (shifted * shifted)).sqrt();
    let numer = z * (1.0 + 2.0 * eta * theta) + b - root;
    let denom = 2.0 * (1.0 + z * eta) * (t + z * theta);
    numer / denom
}

/// Absolutely continuous density of `π_t`, `−Im G(x+i0)/π`. Note there is
/// no factor `t` in front: with one the semicircle case would have mass `t`.
pub fn marginal_density_closed(params: &ProcessParams<f64>, t: f64, x: f64) -> f64 {
    let (eta, theta) = (params.eta, params.theta);
    let b = t * eta + theta;
    let a = t * (1.0 + eta * theta);
    let gap = 4.0 * a - (x - b) * (x - b);
    if gap <= 0.0 {
        return 0.0;
    }
    gap.sqrt() / (2.0 * std::f64::consts::PI * (x * eta + 1.0) * (x * theta + t))
}

/// Weight of the atom at `−t/θ`: `(θ² − (1+ηθ)t)₊ / (θ² − tηθ)`.
pub fn p_weight_closed(params: &ProcessParams<f64>, t: f64) -> f64 {
    let (eta, theta) = (params.eta, params.theta);
    if theta == 0.0 {
        return 0.0;
    }
    let numer = theta * theta - (1.0 + eta * theta) * t;
    if numer <= 0.0 {
        0.0
    } else {
        numer / (theta * theta - t * eta * theta)
    }
}

/// Atom weights chosen by the sign rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsWeights {
    /// Weight at `−t/θ`.
    pub p: f64,
    /// Weight at `−1/η`.
    pub q: f64,
    pub eps_p: i8,
    pub eps_q: i8,
    /// Common sign when one sign works for both, `None` if they differ.
    pub shared: Option<i8>,
    /// Number of sign combinations landing both weights in `[0, 1]`.
    pub admissible_in_unit_interval: usize,
}

fn p_candidate(eta: f64, theta: f64, t: f64, eps: f64) -> f64 {
    let d = (1.0 + eta * theta) * t - theta * theta;
    (-d / theta + eps * d.abs() / theta.abs()) / (2.0 * (theta - eta * t))
}

fn q_candidate(eta: f64, theta: f64, t: f64, eps: f64) -> f64 {
    let d = t - (1.0 + eta * theta) / (eta * eta);
    (eta * d + eps * eta.abs() * d.abs()) / (2.0 * (eta * t - theta))
}

/// Atom weights from the signed formulas.
///
/// One shared sign does not always work: at `(η, θ) = (1, −1/2)` and
/// `t = 1/10` both signs put the pair in `[0, 1]` and one of them is wrong.
/// So each weight gets its own sign, and a pair is accepted only if it lies
/// in `[0, 1]`, completes the absolutely continuous mass to one and gives
/// mean zero. Exactly one pair must survive.
pub fn eps_rule_weights(params: &ProcessParams<f64>, t: f64) -> Result<EpsWeights> {
    let (eta, theta) = (params.eta, params.theta);
    let in_unit = |v: f64| (-1e-12..=1.0 + 1e-12).contains(&v);
    let (ac_mass, ac_mean) = ac_mass_and_mean(params, t);

    let signs = [1i8, -1];
    let p_of = |e: i8| {
        if theta == 0.0 {
            Some(0.0)
        } else {
            let v = p_candidate(eta, theta, t, e as f64);
            v.is_finite().then_some(v)
        }
    };
    let q_of = |e: i8| {
        if eta == 0.0 {
            Some(0.0)
        } else {
            let v = q_candidate(eta, theta, t, e as f64);
            v.is_finite().then_some(v)
        }
    };

    let mut unit_count = 0;
    let mut survivors: Vec<EpsWeights> = Vec::new();
    for &ep in &signs {
        for &eq in &signs {
            let (Some(p), Some(q)) = (p_of(ep), q_of(eq)) else {
                continue;
            };
            if !(in_unit(p) && in_unit(q)) {
                continue;
            }
            unit_count += 1;
            let mass = p + q + ac_mass;
            let mut mean = ac_mean;
            if theta != 0.0 {
                mean += p * (-t / theta);
            }
            if eta != 0.0 {
                mean += q * (-1.0 / eta);
            }
            if (mass - 1.0).abs() > 1e-8 || mean.abs() > 1e-8 * (1.0 + t) {
                continue;
            }
            let candidate = EpsWeights {
                p: p.max(0.0),
                q: q.max(0.0),
                eps_p: ep,
                eps_q: eq,
                shared: None,
                admissible_in_unit_interval: 0,
            };
            let duplicate = survivors
                .iter()
                .any(|s| (s.p - candidate.p).abs() < 1e-12 && (s.q - candidate.q).abs() < 1e-12);
            if !duplicate {
                survivors.push(candidate);
            }
        }
    }
    match survivors.as_slice() {
        [one] => {
            let mut w = *one;
            w.admissible_in_unit_interval = unit_count;
            w.shared = signs.iter().copied().find(|&e| {
                let same =
                    |a: Option<f64>, b: f64| a.is_some_and(|v| (v.max(0.0) - b).abs() < 1e-12);
                same(p_of(e), w.p) && same(q_of(e), w.q)
            });
            Ok(w)
        }
        [] => Err(Error::EpsilonRule(format!(
            "no sign choice is consistent at eta={eta}, theta={theta}, t={t}"
        ))),
        _ => Err(Error::EpsilonRule(format!(
            "{} distinct weight pairs survive at eta={eta}, theta={theta}, t={t}",
            survivors.len()
        ))),
    }
}

/// Mass and first moment of the closed-form density.
fn ac_mass_and_mean(params: &ProcessParams<f64>, t: f64) -> (f64, f64) {
    let a = t * (1.0 + params.eta * params.theta);
    if a <= 0.0 {
        return (0.0, 0.0);
    }
    let c = t * params.eta + params.theta;
    let h = 2.0 * a.sqrt();
    let pi = std::f64::consts::PI;
    let weight = |phi: f64| {
        let x = c - h * phi.cos();
        (x, marginal_density_closed(params, t, x) * h * phi.sin())
    };
    let mass = adaptive_gauss(&|phi| weight(phi).1, 0.0, pi, 1e-13);
    let mean = adaptive_gauss(
        &|phi| {
            let (x, w) = weight(phi);
            x * w
        },
        0.0,
        pi,
        1e-13,
    );
    (mass, mean)
}
