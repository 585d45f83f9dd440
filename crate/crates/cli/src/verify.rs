//! Verification suites over fixed grids. Each grid cell becomes one entry
//! in the report; cells may run on several threads but are reported in
//! grid order.

use bipoisson::freeconv::semigroup_residual;
use bipoisson::process::{
    chapman_kolmogorov_residual, harness_quadrature, harness_series, martingale_residual,
    reversal_check,
};
use bipoisson::recurrences::verify_identities;
use bipoisson::{Error, ProcessParams, Rational, Scalar};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{CliResult, Failure};

const KERNEL_TOL: f64 = 1e-8;
const FLOAT_IDENTITY_TOL: f64 = 1e-9;

/// Parameter points for the algebraic identities: η = 0, θ = 0, ηθ < 0
/// and 1 + ηθ = 0 all occur.
const IDENTITY_POINTS: [(i64, i64, i64, i64); 20] = [
    (0, 1, 0, 1),
    (1, 2, 0, 1),
    (0, 1, 1, 2),
    (1, 1, 1, 1),
    (1, 2, 1, 3),
    (-1, 2, 1, 1),
    (1, 1, -1, 2),
    (-1, 1, 1, 1),
    (1, 1, -1, 1),
    (2, 1, -1, 2),
    (-1, 3, 3, 1),
    (2, 1, 3, 1),
    (-1, 4, -1, 2),
    (3, 2, -1, 3),
    (1, 3, 2, 1),
    (0, 1, -2, 1),
    (-2, 1, 0, 1),
    (1, 4, 1, 4),
    (-1, 2, -1, 2),
    (5, 1, 1, 5),
];
const IDENTITY_TIMES: [(i64, i64); 4] = [(1, 3), (1, 1), (2, 1), (1, 2)];

/// Kernel suites; the last point has 1 + ηθ = 0.
const KERNEL_POINTS: [(i64, i64, i64, i64); 6] = [
    (0, 1, 0, 1),
    (1, 2, 1, 1),
    (1, 1, 1, 2),
    (-1, 2, 1, 1),
    (1, 1, -1, 2),
    (-1, 1, 1, 1),
];
const KERNEL_TRIPLES: [(f64, f64, f64); 12] = [
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

const HARNESS_POINTS: [(i64, i64, i64, i64); 5] = [
    (1, 2, 1, 1),
    (0, 1, 0, 1),
    (1, 1, -1, 2),
    (-1, 1, 1, 1),
    (2, 1, 1, 3),
];
const HARNESS_TIMES: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

const REVERSAL_POINTS: [(i64, i64); 2] = [(1, 2), (1, 1)];
const REVERSAL_PAIRS: [(f64, f64); 2] = [(0.5, 2.0), (1.0, 3.0)];

const SEMIGROUP_ETAS: [(i64, i64); 5] = [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)];
const SEMIGROUP_TIMES: [(i64, i64); 3] = [(1, 2), (1, 1), (2, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Identities,
    Chapman,
    Martingale,
    Harness,
    Reversal,
    Semigroup,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Identities,
        SuiteName::Chapman,
        SuiteName::Martingale,
        SuiteName::Harness,
        SuiteName::Reversal,
        SuiteName::Semigroup,
    ];

    fn name(self) -> &'static str {
        match self {
            SuiteName::Identities => "identities",
            SuiteName::Chapman => "chapman",
            SuiteName::Martingale => "martingale",
            SuiteName::Harness => "harness",
            SuiteName::Reversal => "reversal",
            SuiteName::Semigroup => "semigroup",
        }
    }
}

pub struct Config {
    pub exact: bool,
    /// A single user-chosen point replacing the built-in grid.
    pub params: Option<ProcessParams<Rational>>,
    pub order: Option<usize>,
    pub deg: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: String,
    pub params: Value,
    pub grid: Value,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub failing_cell: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suites: Vec<&'static str>,
    pub mode: &'static str,
    pub pass: bool,
    pub max_residual: f64,
    pub checks: Vec<CheckResult>,
}

type Cell = Box<dyn Fn() -> CheckResult + Send + Sync>;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn params_json(p: &ProcessParams<Rational>, exact: bool) -> Value {
    if exact {
        json!({ "eta": p.eta.to_json(), "theta": p.theta.to_json() })
    } else {
        json!({ "eta": p.eta.to_f64(), "theta": p.theta.to_f64() })
    }
}

fn points(config: &Config, defaults: &[(i64, i64, i64, i64)]) -> Vec<ProcessParams<Rational>> {
    match &config.params {
        Some(p) => vec![p.clone()],
        None => defaults
            .iter()
            .map(|&(a, b, c, d)| ProcessParams::unchecked(q(a, b), q(c, d)))
            .collect(),
    }
}

/// Turns a residual or error into a report entry.
fn finish(
    suite: SuiteName,
    check: &str,
    params: Value,
    grid: Value,
    tolerance: f64,
    outcome: bipoisson::Result<(f64, bool, Option<Value>)>,
) -> CheckResult {
    let (max_residual, pass, failing_cell) = match outcome {
        Ok(v) => v,
        Err(e) => (
            f64::INFINITY,
            false,
            Some(json!({ "error": e.to_string() })),
        ),
    };
    CheckResult {
        suite: suite.name(),
        check: check.into(),
        params,
        grid,
        max_residual,
        tolerance,
        pass,
        failing_cell,
    }
}

fn identity_cells(config: &Config) -> Vec<Cell> {
    let order = config.order.unwrap_or(12);
    let exact = config.exact;
    let [s, t, u, x] = IDENTITY_TIMES.map(|(a, b)| q(a, b));
    points(config, &IDENTITY_POINTS)
        .into_iter()
        .map(|p| {
            let (s, t, u, x) = (s.clone(), t.clone(), u.clone(), x.clone());
            Box::new(move || {
                let grid = json!({ "s": s.to_json(), "t": t.to_json(), "u": u.to_json(), "x": x.to_json(), "max_n": order });
                let tol = if exact { 0.0 } else { FLOAT_IDENTITY_TOL };
                let report = if exact {
                    verify_identities(&p, &s, &t, &u, &x, order)
                } else {
                    verify_identities(&p.to_f64(), &s.to_f64(), &t.to_f64(), &u.to_f64(), &x.to_f64(), order)
                };
                let outcome = report.map(|r| {
                    let failing = r.first_failure(tol).map(|e| match e {
                        Error::IdentityFailed { identity, n, .. } => json!({ "identity": identity, "n": n }),
                        other => json!({ "error": other.to_string() }),
                    });
                    (r.max_residual, r.passed(tol), failing)
                });
                finish(SuiteName::Identities, "algebraic identities", params_json(&p, exact), grid, tol, outcome)
            }) as Cell
        })
        .collect()
}

fn kernel_cells(config: &Config, suite: SuiteName) -> Vec<Cell> {
    let deg = config.deg.unwrap_or(8);
    let exact = config.exact;
    let mut cells: Vec<Cell> = Vec::new();
    for p in points(config, &KERNEL_POINTS) {
        for &(s, t, u) in &KERNEL_TRIPLES {
            let p = p.clone();
            cells.push(Box::new(move || {
                let pf = p.to_f64();
                let (check, grid, outcome) = match suite {
                    SuiteName::Chapman => (
                        "Chapman-Kolmogorov",
                        json!({ "s": s, "t": t, "u": u, "deg": deg }),
                        chapman_kolmogorov_residual(&pf, s, t, u, deg),
                    ),
                    _ => (
                        "martingale polynomials",
                        json!({ "s": s, "t": t, "max_n": deg }),
                        martingale_residual(&pf, s, t, deg),
                    ),
                };
                let outcome = outcome.map(|r| {
                    let pass = r < KERNEL_TOL;
                    (r, pass, (!pass).then(|| grid.clone()))
                });
                finish(
                    suite,
                    check,
                    params_json(&p, exact),
                    grid,
                    KERNEL_TOL,
                    outcome,
                )
            }));
        }
    }
    cells
}

fn harness_cells(config: &Config) -> Vec<Cell> {
    let order = config.order.unwrap_or(10);
    let deg = config.deg.unwrap_or(6);
    let exact = config.exact;
    let [s, t, u] = HARNESS_TIMES.map(|(a, b)| q(a, b));
    let mut cells: Vec<Cell> = Vec::new();
    for p in points(config, &HARNESS_POINTS) {
        let (p2, s2, t2, u2) = (p.clone(), s.clone(), t.clone(), u.clone());
        cells.push(Box::new(move || {
            let grid =
                json!({ "s": s2.to_json(), "t": t2.to_json(), "u": u2.to_json(), "order": order });
            let tol = if exact { 0.0 } else { KERNEL_TOL };
            let outcome = if exact {
                harness_series(&p2, &s2, &t2, &u2, order)
                    .map(|h| (h.is_exact_zero(), h.residuals()))
            } else {
                harness_series(
                    &p2.to_f64(),
                    &s2.to_f64(),
                    &t2.to_f64(),
                    &u2.to_f64(),
                    order,
                )
                .map(|h| {
                    let r = h.residuals();
                    (r.check(tol).is_ok(), r)
                })
            }
            .map(|(pass, r)| (r.max_residual(), pass, (!pass).then(|| cells_json(&r))));
            finish(
                SuiteName::Harness,
                "harness series",
                params_json(&p2, exact),
                grid,
                tol,
                outcome,
            )
        }));
        let (sf, tf, uf) = (s.to_f64(), t.to_f64(), u.to_f64());
        cells.push(Box::new(move || {
            let grid = json!({ "s": sf, "t": tf, "u": uf, "max_nm": deg });
            let outcome = harness_quadrature(&p.to_f64(), sf, tf, uf, deg).map(|r| {
                let pass = r.check(KERNEL_TOL).is_ok();
                (r.max_residual(), pass, (!pass).then(|| cells_json(&r)))
            });
            finish(
                SuiteName::Harness,
                "harness quadrature",
                params_json(&p, exact),
                grid,
                KERNEL_TOL,
                outcome,
            )
        }));
    }
    cells
}

fn cells_json(r: &bipoisson::process::HarnessResiduals) -> Value {
    json!({
        "linear_regression": { "n_m": r.lr_cell, "residual": r.lr_residual },
        "quadratic_variance": { "n_m": r.qv_cell, "residual": r.qv_residual },
    })
}

fn reversal_cells(config: &Config) -> CliResult<Vec<Cell>> {
    let deg = config.deg.unwrap_or(4);
    let exact = config.exact;
    let pts: Vec<ProcessParams<Rational>> = match &config.params {
        Some(p) if p.eta != p.theta => {
            return Err(Failure::Input(format!(
                "reversal needs eta = theta (got {} and {})",
                p.eta.to_json(),
                p.theta.to_json()
            )))
        }
        Some(p) => vec![p.clone()],
        None => REVERSAL_POINTS
            .iter()
            .map(|&(a, b)| ProcessParams::unchecked(q(a, b), q(a, b)))
            .collect(),
    };
    let mut cells: Vec<Cell> = Vec::new();
    for p in pts {
        for &(t1, t2) in &REVERSAL_PAIRS {
            let p = p.clone();
            cells.push(Box::new(move || {
                let grid = json!({ "t1": t1, "t2": t2, "max_j_plus_k": deg });
                let outcome = reversal_check(&p.to_f64(), t1, t2, deg).map(|r| {
                    let pass = r < KERNEL_TOL;
                    (r, pass, (!pass).then(|| grid.clone()))
                });
                finish(
                    SuiteName::Reversal,
                    "time reversal",
                    params_json(&p, exact),
                    grid,
                    KERNEL_TOL,
                    outcome,
                )
            }));
        }
    }
    Ok(cells)
}

fn semigroup_cells(config: &Config) -> CliResult<Vec<Cell>> {
    let order = config.order.unwrap_or(10);
    let exact = config.exact;
    let pts: Vec<ProcessParams<Rational>> = match &config.params {
        Some(p) if p.theta != q(1, 1) => {
            return Err(Failure::Input(format!(
                "the semigroup needs theta = 1 (got {})",
                p.theta.to_json()
            )))
        }
        Some(p) => vec![p.clone()],
        None => SEMIGROUP_ETAS
            .iter()
            .map(|&(a, b)| ProcessParams::unchecked(q(a, b), q(1, 1)))
            .collect(),
    };
    let mut cells: Vec<Cell> = Vec::new();
    for p in pts {
        for s in SEMIGROUP_TIMES {
            for t in SEMIGROUP_TIMES {
                let p = p.clone();
                let (s, t) = (q(s.0, s.1), q(t.0, t.1));
                cells.push(Box::new(move || {
                    let grid = json!({ "s": s.to_json(), "t": t.to_json(), "order": order });
                    let tol = if exact { 0.0 } else { 1e-9 };
                    let outcome = if exact {
                        semigroup_residual(&p, &s, &t, order)
                    } else {
                        semigroup_residual(&p.to_f64(), &s.to_f64(), &t.to_f64(), order)
                    }
                    .map(|r| {
                        let pass = if exact { r == 0.0 } else { r < tol };
                        (r, pass, (!pass).then(|| grid.clone()))
                    });
                    finish(
                        SuiteName::Semigroup,
                        "c-convolution semigroup",
                        params_json(&p, exact),
                        grid,
                        tol,
                        outcome,
                    )
                }));
            }
        }
    }
    Ok(cells)
}

pub fn run(suites: &[SuiteName], config: &Config, threads: usize) -> CliResult<Report> {
    let mut cells: Vec<Cell> = Vec::new();
    for &suite in suites {
        cells.extend(match suite {
            SuiteName::Identities => identity_cells(config),
            SuiteName::Chapman | SuiteName::Martingale => kernel_cells(config, suite),
            SuiteName::Harness => harness_cells(config),
            SuiteName::Reversal => reversal_cells(config)?,
            SuiteName::Semigroup => semigroup_cells(config)?,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Input(format!("cannot start {threads} threads: {e}")))?;
    let checks: Vec<CheckResult> = pool.install(|| cells.par_iter().map(|cell| cell()).collect());
    Ok(Report {
        suites: suites.iter().map(|s| s.name()).collect(),
        mode: if config.exact { "exact" } else { "float" },
        pass: checks.iter().all(|c| c.pass),
        max_residual: checks.iter().map(|c| c.max_residual).fold(0.0, f64::max),
        checks,
    })
}
