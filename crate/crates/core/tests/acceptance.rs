//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bipoisson::freeconv::{
    bipoisson_pair_moments, c_convolve, cr_transform, marginal_moments_closed_form, r_transform,
};
use bipoisson::process::{
    bipoisson_variance_coeffs, chapman_kolmogorov_residual, conditional_moment_poly,
    harness_quadrature, harness_series, marginal, martingale_residual, paths_to_csv,
    reversal_check, sample_paths, support_violation, transition_rule, variance_coeffs,
};
use bipoisson::recurrences::verify_identities;
use bipoisson::spectra::{
    atom_weight_by_limit, jacobi_of_marginal, p_weight_closed, sample, SpectralMeasure,
};
use bipoisson::{ProcessParams, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn pf(eta: f64, theta: f64) -> ProcessParams<f64> {
    ProcessParams::new(eta, theta).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s as f64, || {
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64())
    })
}

// 1 ------------------------------------------------------------------------

fn identities() -> Outcome {
    let start = Instant::now();
    let points = [
        (q(0, 1), q(0, 1)),
        (q(1, 2), q(0, 1)),
        (q(0, 1), q(1, 2)),
        (q(-3, 2), q(0, 1)),
        (q(0, 1), q(-2, 1)),
        (q(1, 1), q(1, 1)),
        (q(1, 2), q(1, 3)),
        (q(2, 1), q(3, 1)),
        (q(1, 4), q(1, 4)),
        (q(5, 1), q(1, 5)),
        (q(-1, 2), q(1, 1)),
        (q(1, 1), q(-1, 2)),
        (q(3, 2), q(-1, 3)),
        (q(-1, 3), q(2, 1)),
        (q(-1, 4), q(-1, 2)),
        (q(-1, 2), q(-1, 2)),
        (q(-1, 1), q(1, 1)),
        (q(1, 1), q(-1, 1)),
        (q(2, 1), q(-1, 2)),
        (q(-1, 3), q(3, 1)),
        (q(-4, 1), q(1, 4)),
    ];
    let time_sets = [
        (q(1, 3), q(1, 1), q(2, 1), q(1, 2)),
        (q(0, 1), q(1, 2), q(3, 2), q(-1, 3)),
    ];
    let mut reports = 0;
    for (eta, theta) in &points {
        let p = ProcessParams::new(eta.clone(), theta.clone()).unwrap();
        for (s, t, u, x) in &time_sets {
            let r = verify_identities(&p, s, t, u, x, 12).map_err(|e| e.to_string())?;
            if let Some(e) = r.first_failure(0.0) {
                return Err(format!("(eta, theta) = ({eta}, {theta}): {e}"));
            }
            ensure(r.exact && r.max_residual == 0.0, || {
                "nonzero exact residual".into()
            })?;
            reports += 1;
        }
    }
    within(start.elapsed(), 30)?;
    Ok(format!(
        "{} parameter points, {reports} reports, n <= 12, all residuals exactly 0",
        points.len()
    ))
}

// 2 ------------------------------------------------------------------------

fn measure_contract() -> Outcome {
    let start = Instant::now();
    let values = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let times = [0.1, 0.5, 1.0, 2.0];
    let (mut worst_mass, mut worst_mean, mut worst_var) = (0.0f64, 0.0f64, 0.0f64);
    let mut worst_support = f64::INFINITY;
    for &eta in &values {
        for &theta in &values {
            let p = pf(eta, theta);
            for &t in &times {
                let m = marginal(&p, t).map_err(|e| e.to_string())?;
                worst_mass = worst_mass.max((m.total_mass() - 1.0).abs());
                worst_mean = worst_mean.max(m.mean().abs());
                worst_var = worst_var.max((m.variance() - t).abs());
                for a in &m.atoms {
                    ensure((0.0..=1.0).contains(&a.weight), || {
                        format!("atom weight {} at ({eta}, {theta}, {t})", a.weight)
                    })?;
                }
                worst_support =
                    worst_support.min(support_violation(&p, t).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(worst_mass <= 1e-8, || format!("mass off by {worst_mass:e}"))?;
    ensure(worst_mean <= 1e-9, || format!("mean off by {worst_mean:e}"))?;
    ensure(worst_var <= 1e-9, || {
        format!("variance off by {worst_var:e}")
    })?;
    ensure(worst_support >= -1e-12, || {
        format!("1 + eta x = {worst_support:e}")
    })?;
    within(start.elapsed(), 30)?;
    Ok(format!(
        "100 measures: |mass-1| {worst_mass:.1e}, |mean| {worst_mean:.1e}, |var-t| {worst_var:.1e}, min 1+eta x {worst_support:.1e}"
    ))
}

// 3 ------------------------------------------------------------------------

fn atom_at(m: &SpectralMeasure, x: f64) -> Option<f64> {
    m.atoms
        .iter()
        .find(|a| (a.location - x).abs() < 1e-9 * (1.0 + x.abs()))
        .map(|a| a.weight)
}

fn atom_weights() -> Outcome {
    // (eta, theta, times); every time lies outside the window of the atom
    // at −1/eta, so p is the only atom and 1 − ∫density isolates it.
    let cases: [(f64, f64, &[f64]); 6] = [
        (0.0, 1.0, &[0.1, 0.3, 0.5, 0.8, 1.5]),
        (0.0, 2.0, &[0.5, 1.0, 2.0, 3.0, 5.0]),
        (0.5, 1.0, &[0.1, 0.3, 0.6, 1.0]),
        (1.0, 1.0, &[0.1, 0.25, 0.4, 1.0]),
        (-0.5, 1.0, &[0.5, 1.0, 1.5]),
        (0.5, -1.0, &[0.2, 0.7, 1.5]),
    ];
    let mut worst = 0.0f64;
    let mut compared = 0;
    for (eta, theta, times) in cases {
        let p = pf(eta, theta);
        for &t in times {
            let m = marginal(&p, t).map_err(|e| e.to_string())?;
            let closed = p_weight_closed(&p, t);
            let residue = atom_at(&m, -t / theta).unwrap_or(0.0);
            let others: f64 = m
                .atoms
                .iter()
                .filter(|a| (a.location + t / theta).abs() > 1e-9)
                .map(|a| a.weight)
                .sum();
            ensure(others == 0.0, || {
                format!("unexpected second atom at ({eta}, {theta}, {t})")
            })?;
            let from_density = 1.0 - m.ac.as_ref().map_or(0.0, |ac| ac.mass);
            let j = jacobi_of_marginal(&p, &t).map_err(|e| e.to_string())?;
            let from_limit = if closed > 0.0 {
                atom_weight_by_limit(&j, -t / theta, 1e-10).map_err(|e| e.to_string())?
            } else {
                0.0
            };
            for v in [residue, from_density, from_limit] {
                worst = worst.max((v - closed).abs());
            }
            compared += 1;
        }
    }
    ensure(worst <= 1e-8, || format!("weights disagree by {worst:e}"))?;

    // Threshold t* = θ²/(1+ηθ) located by scanning t.
    let mut worst_gap = 0.0f64;
    for (eta, theta) in [
        (0.0, 1.0),
        (0.5, 1.0),
        (1.0, 1.0),
        (-0.5, 1.0),
        (0.5, -1.0),
        (1.0, 0.5),
    ] {
        let p = pf(eta, theta);
        let threshold = theta * theta / (1.0 + eta * theta);
        let steps = 200;
        let dt = 2.0 * threshold / steps as f64;
        let mut found = None;
        for k in 1..=steps {
            let t = k as f64 * dt;
            let m = marginal(&p, t).map_err(|e| e.to_string())?;
            if atom_at(&m, -t / theta).is_none() {
                found = Some(t);
                break;
            }
        }
        let t_found = found.ok_or_else(|| format!("no threshold found for ({eta}, {theta})"))?;
        let gap = (t_found - threshold).abs();
        ensure(gap <= dt, || {
            format!("threshold {t_found} vs {threshold} for ({eta}, {theta})")
        })?;
        worst_gap = worst_gap.max(gap / dt);
    }
    Ok(format!(
        "{compared} (eta, theta, t) points, three routes agree to {worst:.1e}; thresholds found within {worst_gap:.2} grid steps"
    ))
}

// 4, 5 ---------------------------------------------------------------------

const KERNEL_POINTS: [(f64, f64); 6] = [
    (0.0, 0.0),
    (0.5, 1.0),
    (1.0, 0.5),
    (-0.5, 1.0),
    (1.0, -0.5),
    (-1.0, 1.0),
];
const TRIPLES: [(f64, f64, f64); 12] = [
    (0.25, 0.5, 1.0),
    (0.5, 1.0, 1.5),
    (1.0, 1.5, 2.0),
    (0.1, 0.2, 0.3),
    (0.5, 0.75, 2.0),
    (1.0, 2.0, 3.0),
    (0.2, 1.0, 1.2),
    (0.05, 0.5, 0.6),
    (1.5, 2.0, 2.5),
    (0.3, 0.9, 1.8),
    (2.0, 2.5, 4.0),
    (0.75, 1.25, 3.0),
];

fn chapman() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (eta, theta) in KERNEL_POINTS {
        for (s, t, u) in TRIPLES {
            let r = chapman_kolmogorov_residual(&pf(eta, theta), s, t, u, 8)
                .map_err(|e| e.to_string())?;
            ensure(r < 1e-8, || {
                format!("residual {r:e} at ({eta}, {theta}), ({s}, {t}, {u})")
            })?;
            worst = worst.max(r);
        }
    }
    within(start.elapsed(), 60)?;
    Ok(format!(
        "72 cells, deg <= 8, max relative residual {worst:.1e}"
    ))
}

fn martingale() -> Outcome {
    let mut worst = 0.0f64;
    for (eta, theta) in KERNEL_POINTS {
        for (s, t, _) in TRIPLES {
            let r = martingale_residual(&pf(eta, theta), s, t, 8).map_err(|e| e.to_string())?;
            ensure(r < 1e-8, || {
                format!("residual {r:e} at ({eta}, {theta}), ({s}, {t})")
            })?;
            worst = worst.max(r);
        }
    }
    Ok(format!("72 cells, n <= 8, max residual {worst:.1e}"))
}

// 6 ------------------------------------------------------------------------

fn harness() -> Outcome {
    let points = [
        (q(1, 2), q(1, 1)),
        (q(0, 1), q(0, 1)),
        (q(1, 1), q(-1, 2)),
        (q(-1, 1), q(1, 1)),
        (q(2, 1), q(1, 3)),
        (q(1, 2), q(1, 3)),
    ];
    let times = [(q(1, 2), q(1, 1), q(2, 1)), (q(1, 1), q(2, 1), q(3, 1))];
    let mut worst = 0.0f64;
    for (eta, theta) in &points {
        let p = ProcessParams::new(eta.clone(), theta.clone()).unwrap();
        for (s, t, u) in &times {
            let h = harness_series(&p, s, t, u, 10).map_err(|e| e.to_string())?;
            ensure(h.is_exact_zero(), || {
                format!("series residual {:?} at ({eta}, {theta})", h.residuals())
            })?;
            let r = harness_quadrature(&p.to_f64(), s.to_f64(), t.to_f64(), u.to_f64(), 6)
                .map_err(|e| e.to_string())?;
            r.check(1e-8)
                .map_err(|e| format!("({eta}, {theta}): {e}"))?;
            worst = worst.max(r.max_residual());
        }
    }
    Ok(format!(
        "{} points x 2 time triples: series exactly 0 to order 10, quadrature max {worst:.1e} for n, m <= 6",
        points.len()
    ))
}

// 7 ------------------------------------------------------------------------

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=12);
    q(rng.gen_range(lo * den..=hi * den), den)
}

fn coefficients() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 50 {
        let eta = random_rational(&mut rng, -2, 2);
        let theta = random_rational(&mut rng, -2, 2);
        let Ok(p) = ProcessParams::new(eta, theta) else {
            continue;
        };
        let mut ts = [
            random_rational(&mut rng, 0, 5),
            random_rational(&mut rng, 0, 5),
            random_rational(&mut rng, 0, 5),
        ];
        ts.sort();
        let [s, t, u] = ts;
        if !(s < t && t < u) {
            continue;
        }
        let zero = q(0, 1);
        let general =
            variance_coeffs(&zero, &zero, &zero, &p, &s, &t, &u).map_err(|e| e.to_string())?;
        let display = bipoisson_variance_coeffs(&p, &s, &t, &u).map_err(|e| e.to_string())?;
        let pairs = [
            ("A", &general.a, &display.a),
            ("B", &general.b, &display.b),
            ("C", &general.c, &display.c),
            ("D", &general.d, &display.d),
            ("alpha", &general.alpha, &display.alpha),
            ("beta", &general.beta, &display.beta),
        ];
        for (name, g, d) in pairs {
            ensure(g == d, || {
                format!("{name}: {g} vs {d} at s,t,u = {s}, {t}, {u}")
            })?;
        }
        done += 1;
    }
    Ok("50 random rational (eta, theta, s, t, u): all six coefficients equal exactly".into())
}

// 8 ------------------------------------------------------------------------

fn lemma_z() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_lead = 0.0f64;
    let mut worst_fit = 0.0f64;
    for (eta, theta) in [
        (0.5, 1.0 / 3.0),
        (0.0, 0.0),
        (1.0, 1.0),
        (-0.5, 1.0),
        (-1.0, 1.0),
    ] {
        let p = pf(eta, theta);
        for (s, t) in [(0.5, 1.0), (1.0, 2.5), (0.0, 1.0)] {
            let (lo, hi) = if s == 0.0 {
                (0.0, 1.0)
            } else {
                marginal(&p, s).map_err(|e| e.to_string())?.hull()
            };
            for n in 1..=6 {
                let poly = conditional_moment_poly(&p, s, t, n).map_err(|e| e.to_string())?;
                ensure(poly.degree() == Some(n), || {
                    format!("degree {:?} for n = {n}", poly.degree())
                })?;
                worst_lead = worst_lead.max((poly.leading() - 1.0).abs());
                for _ in 0..8 {
                    let x: f64 = rng.gen_range(lo..=hi);
                    let rule = transition_rule(&p, x, s, t, 12).map_err(|e| e.to_string())?;
                    let direct = rule.integrate(|y| y.powi(n as i32));
                    let fit = poly.eval_f64(x);
                    worst_fit = worst_fit.max((fit - direct).abs() / direct.abs().max(1.0));
                }
                if n == 2 {
                    // E(X_t² | X_s = x) = x² + (t − s)(1 + ηx).
                    let expect = [t - s, (t - s) * eta, 1.0];
                    for (k, e) in expect.iter().enumerate() {
                        worst_fit = worst_fit.max((poly.coeff(k) - *e).abs());
                    }
                }
            }
        }
    }
    ensure(worst_lead <= 1e-9, || {
        format!("leading coefficient off by {worst_lead:e}")
    })?;
    ensure(worst_fit < 1e-9, || {
        format!("off-grid residual {worst_fit:e}")
    })?;
    Ok(format!(
        "n <= 6 at 15 (params, s, t) cells: |lead-1| {worst_lead:.1e}, off-grid residual {worst_fit:.1e}"
    ))
}

// 9 ------------------------------------------------------------------------

fn reversal() -> Outcome {
    let mut worst = 0.0f64;
    for v in [0.5, 1.0] {
        for (t1, t2) in [(1.0, 2.0), (0.5, 3.0)] {
            let r = reversal_check(&pf(v, v), t1, t2, 4).map_err(|e| e.to_string())?;
            ensure(r < 1e-8, || {
                format!("residual {r:e} at eta = theta = {v}, ({t1}, {t2})")
            })?;
            worst = worst.max(r);
        }
    }
    Ok(format!(
        "eta = theta in {{1/2, 1}}, two time pairs, j + k <= 4: max residual {worst:.1e}"
    ))
}

// 10 -----------------------------------------------------------------------

fn semigroup() -> Outcome {
    let etas = [q(-1, 1), q(-1, 2), q(0, 1), q(1, 2), q(1, 1)];
    let times = [q(1, 2), q(1, 1), q(2, 1)];
    for eta in &etas {
        let p = ProcessParams::new(eta.clone(), q(1, 1)).unwrap();
        for t in &times {
            // Eleven moments give transform coefficients 0..=10.
            let (mu, nu) = bipoisson_pair_moments(&p, t, 12).map_err(|e| e.to_string())?;
            let r = r_transform(&mu).map_err(|e| e.to_string())?;
            let big_r = cr_transform(&mu, &nu).map_err(|e| e.to_string())?;
            let rate = t.clone() * (q(1, 1) + eta.clone());
            for k in 0..=10 {
                ensure(r.coeff(k) == rate, || {
                    format!("r_{k} = {} at eta {eta}, t {t}", r.coeff(k))
                })?;
                ensure(big_r.coeff(k) == *t, || {
                    format!("R_{k} = {} at eta {eta}, t {t}", big_r.coeff(k))
                })?;
            }
        }
        for s in &times {
            for t in &times {
                let left = c_convolve(
                    &bipoisson_pair_moments(&p, s, 11).map_err(|e| e.to_string())?,
                    &bipoisson_pair_moments(&p, t, 11).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                let right = bipoisson_pair_moments(&p, &(s.clone() + t.clone()), 11)
                    .map_err(|e| e.to_string())?;
                for (a, b) in [(&left.0, &right.0), (&left.1, &right.1)] {
                    ensure(a.moments()[..=10] == b.moments()[..=10], || {
                        format!(
                            "pair({s}) c-conv pair({t}) != pair({}) at eta {eta}",
                            s.clone() + t.clone()
                        )
                    })?;
                }
            }
        }
    }
    Ok("r = t(1+eta)/(1-w), R = t/(1-w) to order 10; 45 pair convolutions exact".into())
}

// 11 -----------------------------------------------------------------------

/// Sample moments 1..=4 and atom frequencies against exact values, in units
/// of the CLT standard error. Returns the largest z-score.
fn mc_check(xs: &[f64], exact: &[f64], atoms: &[(f64, f64)], label: &str) -> Result<f64, String> {
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    for k in 1..=4 {
        let est = xs.iter().map(|x| x.powi(k as i32)).sum::<f64>() / n;
        // Degenerate moments (X² ≡ 1 on {−1, 1}) have no spread at all.
        let sd = ((exact[2 * k] - exact[k] * exact[k]).max(0.0) / n)
            .sqrt()
            .max(1e-12 * (1.0 + exact[k].abs()));
        let z = (est - exact[k]).abs() / sd;
        ensure(z <= 3.0, || {
            format!("{label}: m_{k} = {est} vs {} ({z:.2} sd)", exact[k])
        })?;
        worst = worst.max(z);
    }
    for &(loc, w) in atoms {
        let freq = xs
            .iter()
            .filter(|&&x| (x - loc).abs() < 1e-9 * (1.0 + loc.abs()))
            .count() as f64
            / n;
        let sd = (w * (1.0 - w) / n).sqrt();
        let z = if sd > 0.0 {
            (freq - w).abs() / sd
        } else {
            (freq - w).abs() * 1e12
        };
        ensure(z <= 3.0, || {
            format!("{label}: atom {loc} frequency {freq} vs {w} ({z:.2} sd)")
        })?;
        worst = worst.max(z);
    }
    Ok(worst)
}

fn exact_moments(eta: Rational, theta: Rational, t: Rational) -> Vec<f64> {
    let p = ProcessParams::new(eta, theta).unwrap();
    marginal_moments_closed_form(&p, &t, 8)
        .unwrap()
        .moments()
        .iter()
        .map(Scalar::to_f64)
        .collect()
}

fn monte_carlo() -> Outcome {
    let n = 200_000;
    let mut worst = 0.0f64;
    let cases = [
        (q(0, 1), q(0, 1), q(1, 1)),
        (q(1, 1), q(1, 1), q(1, 4)),
        (q(1, 2), q(1, 3), q(1, 1)),
        (q(1, 1), q(1, 1), q(3, 1)),
        (q(-1, 1), q(1, 1), q(2, 1)),
    ];
    for (seed, (eta, theta, t)) in cases.iter().enumerate() {
        let p = ProcessParams::new(eta.to_f64(), theta.to_f64()).unwrap();
        let m = marginal(&p, t.to_f64()).map_err(|e| e.to_string())?;
        let xs = sample(&m, 100 + seed as u64, n);
        let atoms: Vec<(f64, f64)> = m.atoms.iter().map(|a| (a.location, a.weight)).collect();
        let exact = exact_moments(eta.clone(), theta.clone(), t.clone());
        let label = format!("pi_t at ({eta}, {theta}, t = {t})");
        worst = worst.max(mc_check(&xs, &exact, &atoms, &label)?);
    }
    // The atom at −t/θ has the closed-form weight.
    let p = pf(1.0, 1.0);
    let xs = sample(&marginal(&p, 0.25).unwrap(), 7, n);
    worst = worst.max(mc_check(
        &xs,
        &exact_moments(q(1, 1), q(1, 1), q(1, 4)),
        &[(-0.25, p_weight_closed(&p, 0.25))],
        "closed-form atom",
    )?);

    // Whole paths: the two-point chain with 1e5 paths, a continuous one
    // with fewer (every step builds a fresh inverse-CDF table).
    let times = [1.0, 2.0, 3.0];
    let degenerate = sample_paths(&pf(-1.0, 1.0), &times, 5, 100_000).map_err(|e| e.to_string())?;
    for (k, &t) in times.iter().enumerate() {
        let xs: Vec<f64> = degenerate.iter().map(|path| path.values[k]).collect();
        let exact = exact_moments(q(-1, 1), q(1, 1), q(k as i64 + 1, 1));
        let atoms = [(-t, 1.0 / (1.0 + t)), (1.0, t / (1.0 + t))];
        worst = worst.max(mc_check(
            &xs,
            &exact,
            &atoms,
            &format!("two-point chain at t = {t}"),
        )?);
    }
    let smooth =
        sample_paths(&pf(0.5, 1.0 / 3.0), &[0.5, 2.0], 6, 10_000).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = smooth.iter().map(|path| path.values[1]).collect();
    worst = worst.max(mc_check(
        &xs,
        &exact_moments(q(1, 2), q(1, 3), q(2, 1)),
        &[],
        "continuous chain at t = 2",
    )?);

    // Byte-exact reproducibility.
    let a = paths_to_csv(&sample_paths(&pf(0.5, 1.0), &times, 42, 200).unwrap(), 42);
    let b = paths_to_csv(&sample_paths(&pf(0.5, 1.0), &times, 42, 200).unwrap(), 42);
    let c = paths_to_csv(&sample_paths(&pf(0.5, 1.0), &times, 43, 200).unwrap(), 43);
    ensure(a == b, || "same seed gave different CSV".into())?;
    ensure(a != c, || "different seeds gave the same CSV".into())?;
    ensure(
        sample(&marginal(&p, 1.0).unwrap(), 9, 1000)
            == sample(&marginal(&p, 1.0).unwrap(), 9, 1000),
        || "marginal sampler not reproducible".into(),
    )?;
    Ok(format!(
        "2e5 draws at 6 marginals, 1e5 two-point paths, 1e4 continuous paths: worst |z| {worst:.2} <= 3; seeded output byte-identical"
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("algebraic identities", identities),
        ("measure contract", measure_contract),
        ("atom weight formula", atom_weights),
        ("Chapman-Kolmogorov", chapman),
        ("martingale polynomials", martingale),
        ("harness equations", harness),
        ("coefficient consistency", coefficients),
        ("conditional moments", lemma_z),
        ("time reversal", reversal),
        ("c-convolution semigroup", semigroup),
        ("Monte Carlo", monte_carlo),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name}: {detail} [{secs:.1} s]",
                k + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name}: {detail} [{secs:.1} s]",
                    k + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        total.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
