use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrate::adaptive_gauss;
use super::roots::roots;
use super::{cauchy_boundary, cauchy_boundary_angle, tridiag, JacobiSpec};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recurrences::ProcessParams;

/// Atoms lighter than this are discarded.
pub const MIN_ATOM_WEIGHT: f64 = 1e-12;

const DENSITY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// Absolutely continuous part: density `−Im G(x+i0)/π` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AcPart {
    pub support: (f64, f64),
    pub mass: f64,
    jacobi: JacobiSpec<f64>,
}

impl AcPart {
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if x <= lo || x >= hi {
            return 0.0;
        }
        (-cauchy_boundary(&self.jacobi, x).im / std::f64::consts::PI).max(0.0)
    }

    /// `(x, density(x) dx/dφ)` at `x = c − h cos φ`.
    pub(crate) fn density_at_angle(&self, phi: f64) -> (f64, f64) {
        if phi <= 0.0 {
            return (self.support.0, 0.0);
        }
        if phi >= std::f64::consts::PI {
            return (self.support.1, 0.0);
        }
        let (x, g) = cauchy_boundary_angle(&self.jacobi, phi);
        let h = 0.5 * (self.support.1 - self.support.0);
        (x, (-g.im / std::f64::consts::PI).max(0.0) * h * phi.sin())
    }

    /// `∫ f(x) density(x) dx`, computed in the angle variable
    /// `x = c − h cos φ`, which removes the square-root edges.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let integrand = |phi: f64| {
            let (x, d) = self.density_at_angle(phi);
            if d == 0.0 {
                0.0
            } else {
                f(x) * d
            }
        };
        adaptive_gauss(&integrand, 0.0, std::f64::consts::PI, DENSITY_TOL)
    }
}

/// A compactly supported probability measure: density plus atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub ac: Option<AcPart>,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    Marginal { t: f64 },
    Transition { x: f64, s: f64, t: f64 },
}

/// JSON form: `{ac_support, density_samples, atoms}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub ac_support: Option<[f64; 2]>,
    pub density_samples: Vec<[f64; 2]>,
    pub atoms: Vec<[f64; 2]>,
}

impl SpectralMeasure {
    /// Orthogonality measure of `j`.
    pub fn from_jacobi(j: &JacobiSpec<f64>) -> Result<Self> {
        if let Some(block) = j.finite_block() {
            return Self::finite(j, block);
        }
        let half_width = 2.0 * j.a_tail.sqrt();
        let support = (j.b_tail - half_width, j.b_tail + half_width);
        let atoms = find_atoms(j, support)?;
        let mut ac = AcPart {
            support,
            mass: 0.0,
            jacobi: j.clone(),
        };
        ac.mass = ac.integrate(|_| 1.0);
        Ok(Self {
            ac: Some(ac),
            atoms,
        })
    }

    fn finite(j: &JacobiSpec<f64>, block: usize) -> Result<Self> {
        let diag: Vec<f64> = (0..block).map(|k| j.b(k)).collect();
        let off: Vec<f64> = (1..block).map(|k| j.a(k).sqrt()).collect();
        let eig = tridiag::eigen(&diag, &off)?;
        let atoms = eig
            .values
            .iter()
            .zip(&eig.first_components)
            .map(|(&location, &c)| Atom {
                location,
                weight: c * c,
            })
            .filter(|a| a.weight > MIN_ATOM_WEIGHT)
            .collect();
        Ok(Self { ac: None, atoms })
    }

    /// A single point mass.
    pub fn dirac(location: f64) -> Self {
        Self {
            ac: None,
            atoms: vec![Atom {
                location,
                weight: 1.0,
            }],
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.ac.as_ref().map_or(0.0, |ac| ac.density(x))
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn ac_mass(&self) -> f64 {
        self.ac.as_ref().map_or(0.0, |ac| ac.mass)
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.ac_mass()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let discrete: f64 = self.atoms.iter().map(|a| a.weight * f(a.location)).sum();
        discrete + self.ac.as_ref().map_or(0.0, |ac| ac.integrate(&f))
    }

    pub fn moment(&self, k: u32) -> f64 {
        self.integrate(|x| x.powi(k as i32))
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.integrate(|x| (x - m) * (x - m))
    }

    /// Smallest interval containing the support.
    pub fn hull(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let Some(ac) = &self.ac {
            lo = lo.min(ac.support.0);
            hi = hi.max(ac.support.1);
        }
        for a in &self.atoms {
            lo = lo.min(a.location);
            hi = hi.max(a.location);
        }
        (lo, hi)
    }

    /// Serializable form with `samples` equally spaced interior density points.
    pub fn to_json(&self, samples: usize) -> MeasureJson {
        let density_samples = match &self.ac {
            Some(ac) if samples > 0 => {
                let (lo, hi) = ac.support;
                (0..samples)
                    .map(|k| {
                        let x = lo + (hi - lo) * (k as f64 + 0.5) / samples as f64;
                        [x, ac.density(x)]
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        MeasureJson {
            ac_support: self.ac.as_ref().map(|ac| [ac.support.0, ac.support.1]),
            density_samples,
            atoms: self.atoms.iter().map(|a| [a.location, a.weight]).collect(),
        }
    }
}

/// `G = (α + β w)/(γ + δ w)` with polynomial coefficients in `z`, where `w`
/// is the tail continued fraction.
struct Mobius {
    alpha: Poly<f64>,
    beta: Poly<f64>,
    gamma: Poly<f64>,
    delta: Poly<f64>,
}

impl Mobius {
    fn of(j: &JacobiSpec<f64>) -> Self {
        let mut m = Mobius {
            alpha: Poly::new(vec![]),
            beta: Poly::new(vec![1.0]),
            gamma: Poly::new(vec![1.0]),
            delta: Poly::new(vec![]),
        };
        for k in (0..j.tail_start()).rev() {
            let shift = Poly::linear_root(j.b(k));
            let a = j.a(k + 1);
            let gamma = &shift * &m.gamma - m.alpha.scale(&a);
            let delta = &shift * &m.delta - m.beta.scale(&a);
            m = Mobius {
                alpha: m.gamma,
                beta: m.delta,
                gamma,
                delta,
            };
        }
        m
    }
}

/// Real tail root with `w → 0` at infinity, for `x` outside the band.
fn real_tail_root(x: f64, b_tail: f64, a_tail: f64) -> f64 {
    let shifted = x - b_tail;
    if a_tail == 0.0 {
        return 1.0 / shifted;
    }
    let root = (shifted * shifted - 4.0 * a_tail).max(0.0).sqrt();
    2.0 / (shifted + root.copysign(shifted))
}

/// Atoms are real poles of `G` off the band: zeros of `γ + δ w` on the
/// physical branch of `w`. Eliminating `w` through its quadratic gives the
/// candidate polynomial `a∞ γ² + (z − b∞) γ δ + δ²`; candidates on the other
/// branch are discarded. Weights are residues.
fn find_atoms(j: &JacobiSpec<f64>, band: (f64, f64)) -> Result<Vec<Atom>> {
    let m = Mobius::of(j);
    let shifted = Poly::linear_root(j.b_tail);
    let candidate = (&m.gamma * &m.gamma).scale(&j.a_tail)
        + &(&shifted * &m.gamma) * &m.delta
        + &m.delta * &m.delta;
    let (lo, hi) = band;
    let scale = 1.0 + lo.abs().max(hi.abs());
    let mut atoms: Vec<Atom> = Vec::new();
    for z in roots(&candidate) {
        if z.im.abs() > 1e-7 * (1.0 + z.re.abs()) {
            continue;
        }
        let x = z.re;
        let edge_gap = (x - lo).abs().min((x - hi).abs());
        if (x > lo && x < hi) || edge_gap < 1e-9 * scale {
            continue;
        }
        if atoms.iter().any(|a| (a.location - x).abs() < 1e-9 * scale) {
            continue;
        }
        let w = real_tail_root(x, j.b_tail, j.a_tail);
        let gamma = m.gamma.eval(&x);
        let delta = m.delta.eval(&x);
        let denom = gamma + delta * w;
        if denom.abs() > 1e-7 * (gamma.abs() + (delta * w).abs() + 1e-300) {
            // Pole of the other branch.
            continue;
        }
        let dw = w / (2.0 * j.a_tail * w - (x - j.b_tail));
        let slope = m.gamma.derivative().eval(&x) + m.delta.derivative().eval(&x) * w + delta * dw;
        let numer = m.alpha.eval(&x) + m.beta.eval(&x) * w;
        let weight = numer / slope;
        if !(-1e-12..=1.0 + 1e-12).contains(&weight) || !weight.is_finite() {
            return Err(Error::AtomWeight {
                location: x,
                weight,
            });
        }
        if weight > MIN_ATOM_WEIGHT {
            atoms.push(Atom {
                location: x,
                weight,
            });
        }
    }
    atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(atoms)
}

/// Spectral measure with the structural checks for bi-Poisson laws: for a
/// marginal, atoms may only sit at `−t/θ` or `−1/η`, and the whole support
/// must satisfy `1 + ηx ≥ 0`.
pub fn spectral_measure(
    j: &JacobiSpec<f64>,
    params: &ProcessParams<f64>,
    kind: MeasureKind,
) -> Result<SpectralMeasure> {
    let measure = SpectralMeasure::from_jacobi(j)?;
    if let MeasureKind::Marginal { t } = kind {
        let mut candidates = Vec::new();
        if params.theta != 0.0 {
            candidates.push(-t / params.theta);
        }
        if params.eta != 0.0 {
            candidates.push(-1.0 / params.eta);
        }
        for atom in &measure.atoms {
            let known = candidates
                .iter()
                .any(|c| (c - atom.location).abs() <= 1e-8 * (1.0 + c.abs()));
            if !known {
                return Err(Error::AtomWeight {
                    location: atom.location,
                    weight: atom.weight,
                });
            }
        }
        let mut points: Vec<f64> = measure.atoms.iter().map(|a| a.location).collect();
        if let Some(ac) = &measure.ac {
            points.extend([ac.support.0, ac.support.1]);
        }
        for x in points {
            let value = 1.0 + params.eta * x;
            if value < -1e-12 * (1.0 + (params.eta * x).abs()) {
                return Err(Error::OutsideSupport { x, value });
            }
        }
    }
    Ok(measure)
}

/// Weight of an atom read off the transform near the real axis,
/// `−ε Im G(x + iε)`; used as a cross-check of residues.
pub fn atom_weight_by_limit(j: &JacobiSpec<f64>, x: f64, eps: f64) -> Result<f64> {
    let g = super::cauchy_transform(j, Complex64::new(x, eps))?;
    Ok(-eps * g.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{jacobi_of_marginal, jacobi_of_transition};

    fn marginal(eta: f64, theta: f64, t: f64) -> SpectralMeasure {
        let pr = ProcessParams::new(eta, theta).unwrap();
        let j = jacobi_of_marginal(&pr, &t).unwrap();
        spectral_measure(&j, &pr, MeasureKind::Marginal { t }).unwrap()
    }

    #[test]
    fn threshold_edge_is_integrable() {
        // At t = θ²/(1+ηθ) the atom sits on the band edge with weight 0 and
        // the density blows up like an inverse square root there.
        for (eta, theta, t) in [(1.0, 1.0, 0.5), (1.0, 1.0, 2.0), (0.5, 2.0, 2.0)] {
            let m = marginal(eta, theta, t);
            assert!(m.atoms.is_empty());
            assert!(
                (m.total_mass() - 1.0).abs() < 1e-10,
                "{eta} {theta} {t}: {}",
                m.total_mass()
            );
            assert!((m.variance() - t).abs() < 1e-9);
        }
    }

    #[test]
    fn semicircle() {
        let m = marginal(0.0, 0.0, 1.0);
        assert!(m.atoms.is_empty());
        assert_eq!(m.ac.as_ref().unwrap().support, (-2.0, 2.0));
        for x in [-1.5, -0.3, 0.0, 0.9, 1.99] {
            let expect = (4.0f64 - x * x).sqrt() / (2.0 * std::f64::consts::PI);
            assert!((m.density(x) - expect).abs() < 1e-13);
        }
        assert!((m.total_mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn one_atom_case() {
        // p(t) = (1 − 2t)/(1 − t) at t = 1/4.
        let m = marginal(1.0, 1.0, 0.25);
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].location + 0.25).abs() < 1e-12);
        assert!((m.atoms[0].weight - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.total_mass() - 1.0).abs() < 1e-9);
        let pr = ProcessParams::new(1.0, 1.0).unwrap();
        let j = jacobi_of_marginal(&pr, &0.25).unwrap();
        let limit = atom_weight_by_limit(&j, -0.25, 1e-9).unwrap();
        assert!((limit - 2.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn degenerate_two_point() {
        let t = 3.0;
        let m = marginal(-1.0, 1.0, t);
        assert!(m.ac.is_none());
        assert_eq!(m.atoms.len(), 2);
        assert!((m.atoms[0].location + t).abs() < 1e-12);
        assert!((m.atoms[0].weight - 1.0 / (1.0 + t)).abs() < 1e-12);
        assert!((m.atoms[1].location - 1.0).abs() < 1e-12);
        assert!((m.atoms[1].weight - t / (1.0 + t)).abs() < 1e-12);
    }

    #[test]
    fn kernel_from_boundary_atom_is_a_point_mass() {
        let pr = ProcessParams::new(1.0, 1.0).unwrap();
        let j = jacobi_of_transition(&pr, &-1.0, &1.0, &2.0).unwrap();
        let m = SpectralMeasure::from_jacobi(&j).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.atoms[0].location, -1.0);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn transition_moments() {
        let pr = ProcessParams::new(0.5, 1.0 / 3.0).unwrap();
        let (x, s, t) = (0.4, 0.5, 1.5);
        let j = jacobi_of_transition(&pr, &x, &s, &t).unwrap();
        let m = SpectralMeasure::from_jacobi(&j).unwrap();
        assert!((m.total_mass() - 1.0).abs() < 1e-9);
        assert!((m.mean() - x).abs() < 1e-9);
        assert!((m.variance() - (t - s) * (1.0 + x * pr.eta)).abs() < 1e-9);
    }

    #[test]
    fn json_shape() {
        let m = marginal(1.0, 1.0, 0.25);
        let json = m.to_json(16);
        assert_eq!(json.density_samples.len(), 16);
        assert_eq!(json.atoms.len(), 1);
        let text = serde_json::to_string(&json).unwrap();
        let back: MeasureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.atoms.len(), 1);
        assert!((back.atoms[0][1] - json.atoms[0][1]).abs() < 1e-15);
    }
}
