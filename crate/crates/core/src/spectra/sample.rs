//! Drawing from a [`SpectralMeasure`].
//!
//! Atoms are picked categorically. The continuous part is inverted through
//! a tabulated CDF in the angle variable `x = c − h cos φ`, in which the
//! density has no square-root edges. The table is a piecewise cubic Hermite
//! interpolant with exact slopes, refined until its midpoint error is below
//! `1e-9`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integrate::gauss_legendre_10;
use super::measure::{AcPart, SpectralMeasure};

const CDF_TOL: f64 = 1e-9;
const INITIAL_CELLS: usize = 64;
const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone)]
struct CdfTable {
    center: f64,
    half_width: f64,
    /// Angles, cumulative mass and slope at each knot.
    phi: Vec<f64>,
    cdf: Vec<f64>,
    slope: Vec<f64>,
}

impl CdfTable {
    fn build(ac: &AcPart) -> Self {
        let (lo, hi) = ac.support;
        let center = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo);
        let f = |phi: f64| ac.density_at_angle(phi).1;

        let mut knots = vec![(0.0, f(0.0))];
        let mut cells: Vec<(f64, f64)> = Vec::new();
        let step = std::f64::consts::PI / INITIAL_CELLS as f64;
        for k in 0..INITIAL_CELLS {
            let a = k as f64 * step;
            let b = if k + 1 == INITIAL_CELLS {
                std::f64::consts::PI
            } else {
                (k + 1) as f64 * step
            };
            refine(&f, a, b, f(a), f(b), MAX_DEPTH, &mut cells);
        }
        let mut phi = vec![0.0];
        let mut cdf = vec![0.0];
        let mut total = 0.0;
        for (b, mass) in cells {
            total += mass;
            phi.push(b);
            cdf.push(total);
            knots.push((b, f(b)));
        }
        let slope = knots.into_iter().map(|(_, s)| s).collect();
        Self {
            center,
            half_width,
            phi,
            cdf,
            slope,
        }
    }

    fn total(&self) -> f64 {
        *self.cdf.last().unwrap_or(&0.0)
    }

    /// Cumulative mass at `φ` inside cell `k`.
    fn hermite(&self, k: usize, phi: f64) -> f64 {
        let (a, b) = (self.phi[k], self.phi[k + 1]);
        hermite(
            a,
            b,
            self.cdf[k],
            self.cdf[k + 1],
            self.slope[k],
            self.slope[k + 1],
            phi,
        )
    }

    /// `x` with tabulated mass `u` to its left.
    fn invert(&self, u: f64) -> f64 {
        let k = match self.cdf.partition_point(|&c| c <= u) {
            0 => 0,
            n => (n - 1).min(self.phi.len() - 2),
        };
        // The interpolant is monotone enough on a refined cell for bisection.
        let (mut a, mut b) = (self.phi[k], self.phi[k + 1]);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if self.hermite(k, m) < u {
                a = m;
            } else {
                b = m;
            }
        }
        self.center - self.half_width * (0.5 * (a + b)).cos()
    }
}

fn hermite(a: f64, b: f64, fa: f64, fb: f64, da: f64, db: f64, x: f64) -> f64 {
    let h = b - a;
    let s = (x - a) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * fa
        + (s3 - 2.0 * s2 + s) * h * da
        + (-2.0 * s3 + 3.0 * s2) * fb
        + (s3 - s2) * h * db
}

/// Splits `[a, b]` until the Hermite midpoint value agrees with quadrature.
/// Pushes `(right end, cell mass)` in order.
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    depth: u32,
    out: &mut Vec<(f64, f64)>,
) {
    let m = 0.5 * (a + b);
    let left = gauss_legendre_10(f, a, m);
    let right = gauss_legendre_10(f, m, b);
    let fm = f(m);
    let predicted = hermite(a, b, 0.0, left + right, fa, fb, m);
    if depth == 0 || (predicted - left).abs() < CDF_TOL {
        out.push((b, left + right));
        return;
    }
    refine(f, a, m, fa, fm, depth - 1, out);
    refine(f, m, b, fm, fb, depth - 1, out);
}

/// Reusable sampler; the table is built once.
#[derive(Debug, Clone)]
pub struct MeasureSampler {
    atoms: Vec<(f64, f64)>,
    table: Option<CdfTable>,
    total: f64,
}

impl MeasureSampler {
    pub fn new(measure: &SpectralMeasure) -> Self {
        let atoms: Vec<(f64, f64)> = measure
            .atoms
            .iter()
            .map(|a| (a.location, a.weight))
            .collect();
        let table = measure.ac.as_ref().map(CdfTable::build);
        let total =
            atoms.iter().map(|a| a.1).sum::<f64>() + table.as_ref().map_or(0.0, CdfTable::total);
        Self {
            atoms,
            table,
            total,
        }
    }

    /// True when there is no continuous part.
    pub fn is_atomic(&self) -> bool {
        self.table.is_none()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut u = rng.gen::<f64>() * self.total;
        for &(location, weight) in &self.atoms {
            if u < weight {
                return location;
            }
            u -= weight;
        }
        match &self.table {
            Some(table) => table.invert(u.min(table.total())),
            // Rounding at the end of the atom list.
            None => self.atoms.last().map_or(f64::NAN, |a| a.0),
        }
    }
}

/// `n` independent draws from `measure`, reproducible from `seed`.
pub fn sample(measure: &SpectralMeasure, seed: u64, n: usize) -> Vec<f64> {
    let sampler = MeasureSampler::new(measure);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sampler.draw(&mut rng)).collect()
}
