//! All complex roots of a real polynomial (Aberth–Ehrlich iteration).

use num_complex::Complex64;

use crate::poly::Poly;

/// Drops leading coefficients that are negligible relative to the largest.
pub(crate) fn trim_relative(p: &Poly<f64>, rel: f64) -> Poly<f64> {
    let scale = p.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut coeffs = p.coeffs().to_vec();
    while coeffs.last().is_some_and(|c| c.abs() <= rel * scale) {
        coeffs.pop();
    }
    Poly::new(coeffs)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        slope = slope * z + value;
        value = value * z + c;
    }
    (value, slope)
}

pub fn roots(p: &Poly<f64>) -> Vec<Complex64> {
    let p = trim_relative(p, 1e-13);
    let Some(degree) = p.degree() else {
        return Vec::new();
    };
    if degree == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let monic: Vec<f64> = p.coeffs().iter().map(|c| c / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..degree].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / degree as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let (value, slope) = eval_with_derivative(&monic, z[i]);
            if value == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = value / slope;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // Newton polish.
    for root in z.iter_mut() {
        for _ in 0..3 {
            let (value, slope) = eval_with_derivative(&monic, *root);
            if slope.norm() == 0.0 {
                break;
            }
            let step = value / slope;
            if step.is_finite() {
                *root -= step;
            }
        }
    }
    z
}
