//! One-dimensional quadrature helpers.

/// Adaptive ten-point Gauss–Legendre on bisected panels. A panel is
/// accepted when splitting it changes its value by at most its share of
/// `tol`, or by roundoff level, or after 40 bisections.
pub fn adaptive_gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    recurse(f, a, b, gauss_legendre_10(f, a, b), tol, 40)
}

fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss_legendre_10(f, a, m);
    let right = gauss_legendre_10(f, m, b);
    let fine = left + right;
    let floor = 1e-14 * (left.abs() + right.abs());
    if depth == 0 || (fine - whole).abs() <= tol.max(floor) {
        return fine;
    }
    recurse(f, a, m, left, 0.5 * tol, depth - 1) + recurse(f, m, b, right, 0.5 * tol, depth - 1)
}

/// Ten-point Gauss–Legendre nodes and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const GL10: [(f64, f64); 5] = [
    (0.148_874_338_981_631_21, 0.295_524_224_714_752_87),
    (0.433_395_394_129_247_19, 0.269_266_719_309_996_36),
    (0.679_409_568_299_024_41, 0.219_086_362_515_982_04),
    (0.865_063_366_688_984_51, 0.149_451_349_150_580_59),
    (0.973_906_528_517_171_72, 0.066_671_344_308_688_14),
];

/// Ten-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre_10(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * GL10
        .iter()
        .map(|&(x, w)| w * (f(mid - half * x) + f(mid + half * x)))
        .sum::<f64>()
}
