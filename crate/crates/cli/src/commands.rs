//! describe, support-plot, sample and convolve.

use bipoisson::freeconv::{
    bipoisson_pair_moments, c_convolve, cr_transform, r_transform, semigroup_residual, MomentSeries,
};
use bipoisson::process::{marginal, paths_to_csv, sample_paths};
use bipoisson::{FormalSeries, ProcessParams, Scalar};
use serde_json::{json, Value};

use crate::CliResult;

/// Atoms closer than this to a curve are attributed to it.
const ATOM_MATCH: f64 = 1e-9;

pub fn describe(params: &ProcessParams<f64>, t: f64, samples: usize) -> CliResult<Value> {
    if t < 0.0 {
        return Err(crate::Failure::Input(format!(
            "t must be nonnegative (got {t})"
        )));
    }
    let measure = marginal(params, t)?;
    let body = measure.to_json(samples);
    Ok(json!({
        "eta": params.eta,
        "theta": params.theta,
        "t": t,
        "total_mass": measure.total_mass(),
        "mean": measure.mean(),
        "variance": measure.variance(),
        "ac_support": body.ac_support,
        "density_samples": body.density_samples,
        "atoms": body.atoms,
    }))
}

/// Curve name, location at t, analytic activity window.
type Curve = (&'static str, Box<dyn Fn(f64) -> f64>, Value);

pub fn support_plot(params: &ProcessParams<f64>, t_max: f64, n: usize) -> CliResult<Value> {
    if t_max.is_nan() || t_max <= 0.0 || n == 0 {
        return Err(crate::Failure::Input("need t > 0 and n >= 1".into()));
    }
    let (eta, theta) = (params.eta, params.theta);
    let c = params.one_plus_eta_theta();
    let degenerate = c.abs() < 1e-14;
    let grid: Vec<f64> = (0..=n).map(|k| t_max * k as f64 / n as f64).collect();

    let mut curves: Vec<Curve> = Vec::new();
    if theta != 0.0 {
        let end = if degenerate {
            Value::Null
        } else {
            json!(theta * theta / c)
        };
        curves.push(("-t/theta", Box::new(move |t| -t / theta), json!([0.0, end])));
    }
    if eta != 0.0 {
        curves.push((
            "-1/eta",
            Box::new(move |_| -1.0 / eta),
            json!([c / (eta * eta), Value::Null]),
        ));
    }

    let mut bands = Vec::with_capacity(grid.len());
    let mut points: Vec<Vec<[f64; 3]>> = vec![Vec::new(); curves.len()];
    for &t in &grid {
        let measure = marginal(params, t)?;
        bands.push(match &measure.ac {
            Some(ac) => json!([ac.support.0, ac.support.1]),
            None => Value::Null,
        });
        if t == 0.0 {
            continue;
        }
        for atom in &measure.atoms {
            if let Some(k) = curves
                .iter()
                .position(|(_, loc, _)| (loc(t) - atom.location).abs() < ATOM_MATCH * (1.0 + t))
            {
                points[k].push([t, atom.location, atom.weight]);
            }
        }
    }
    let atom_curves: Vec<Value> = curves
        .iter()
        .zip(points)
        .map(|((name, _, window), pts)| {
            json!({ "location": name, "active_window": window, "points": pts })
        })
        .collect();
    Ok(json!({
        "eta": eta,
        "theta": theta,
        "degenerate": degenerate,
        "t_grid": grid,
        "support_bands": bands,
        "atom_curves": atom_curves,
    }))
}

pub fn sample(
    params: &ProcessParams<f64>,
    times: &[f64],
    n: usize,
    seed: u64,
) -> CliResult<String> {
    let paths = sample_paths(params, times, seed, n)?;
    Ok(paths_to_csv(&paths, seed))
}

fn pair_json<S: Scalar>(pair: &(MomentSeries<S>, MomentSeries<S>)) -> Value {
    json!({ "first": pair.0.to_json(), "second": pair.1.to_json() })
}

fn series_json<S: Scalar>(series: &FormalSeries<S>) -> Value {
    Value::Array(series.coeffs().iter().map(Scalar::to_json).collect())
}

/// Returns the report and whether the semigroup identity held.
pub fn convolve<S: Scalar>(
    params: &ProcessParams<S>,
    s: &S,
    t: &S,
    order: usize,
) -> CliResult<(Value, bool)> {
    if !(*s > S::zero() && *t > S::zero()) {
        return Err(crate::Failure::Input("s and t must be positive".into()));
    }
    let pair_s = bipoisson_pair_moments(params, s, order + 1)?;
    let pair_t = bipoisson_pair_moments(params, t, order + 1)?;
    let sum = c_convolve(&pair_s, &pair_t)?;
    let direct = bipoisson_pair_moments(params, &(s.clone() + t.clone()), order + 1)?;
    let residual = semigroup_residual(params, s, t, order)?;
    let pass = if S::EXACT {
        residual == 0.0
    } else {
        residual < 1e-9
    };
    let trim = |p: &(MomentSeries<S>, MomentSeries<S>)| (p.0.truncate(order), p.1.truncate(order));
    let report = json!({
        "eta": params.eta.to_json(),
        "theta": params.theta.to_json(),
        "s": s.to_json(),
        "t": t.to_json(),
        "order": order,
        "exact": S::EXACT,
        "pair_s": pair_json(&trim(&pair_s)),
        "pair_t": pair_json(&trim(&pair_t)),
        "convolution": pair_json(&trim(&sum)),
        "pair_s_plus_t": pair_json(&trim(&direct)),
        "r": series_json(&r_transform(&sum.0)?),
        "R": series_json(&cr_transform(&sum.0, &sum.1)?),
        "max_residual": residual,
        "pass": pass,
    });
    Ok((report, pass))
}
