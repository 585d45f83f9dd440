//! Sampling the process at finitely many times.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrences::ProcessParams;
use crate::spectra::MeasureSampler;

use super::{marginal, transition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub seed: u64,
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::TimeOrder("at least one time".into()));
    }
    if times[0] <= 0.0 || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::TimeOrder(format!(
            "strictly increasing positive times (got {times:?})"
        )));
    }
    Ok(())
}

/// `count` independent paths observed at `times`, all drawn from one
/// generator seeded with `seed`.
pub fn sample_paths(
    params: &ProcessParams<f64>,
    times: &[f64],
    seed: u64,
    count: usize,
) -> Result<Vec<PathSample>> {
    check_times(times)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = MeasureSampler::new(&marginal(params, times[0])?);
    // Kernels leaving an atom are reused; other starting points are unique.
    let mut cache: Vec<HashMap<u64, MeasureSampler>> = vec![HashMap::new(); times.len()];
    let mut paths = Vec::with_capacity(count);
    for _ in 0..count {
        let mut values = Vec::with_capacity(times.len());
        let mut x = first.draw(&mut rng);
        values.push(x);
        for k in 1..times.len() {
            let (s, t) = (times[k - 1], times[k]);
            let key = x.to_bits();
            let y = match cache[k].get(&key) {
                Some(sampler) => sampler.draw(&mut rng),
                None => {
                    let sampler = MeasureSampler::new(&transition(params, x, s, t)?);
                    let y = sampler.draw(&mut rng);
                    if sampler.is_atomic() {
                        cache[k].insert(key, sampler);
                    }
                    y
                }
            };
            values.push(y);
            x = y;
        }
        paths.push(PathSample {
            times: times.to_vec(),
            values,
            seed,
        });
    }
    Ok(paths)
}

/// One path.
pub fn sample_path(params: &ProcessParams<f64>, times: &[f64], seed: u64) -> Result<PathSample> {
    Ok(sample_paths(params, times, seed, 1)?.remove(0))
}

/// CSV with a `# seed=<n>` comment, a `time,value` header, and one row per
/// observation; paths follow one another.
pub fn paths_to_csv(paths: &[PathSample], seed: u64) -> String {
    let mut out = format!("# seed={seed}\ntime,value\n");
    for path in paths {
        for (t, v) in path.times.iter().zip(&path.values) {
            let _ = writeln!(out, "{t},{v}");
        }
    }
    out
}
