//! Small derivative-free optimizers and root finders.

use rand::Rng;

use crate::error::{Error, Result};

/// Maximizes a unimodal `f` on `[a, b]`; returns (argmax, max).
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Grid scan followed by golden-section refinement around the best cell.
pub fn scan_max(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize, tol: f64) -> (f64, f64) {
    let n = points.max(2);
    let h = (b - a) / (n - 1) as f64;
    let mut best = (a, f(a));
    for i in 1..n {
        let x = a + h * i as f64;
        let y = f(x);
        if y > best.1 {
            best = (x, y);
        }
    }
    let lo = (best.0 - h).max(a);
    let hi = (best.0 + h).min(b);
    let refined = golden_max(&f, lo, hi, tol);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

/// Root of `f` on `[a, b]` by bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Optimizer(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a) < tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Best point found by a local search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

/// Coordinate pattern search maximizing `f` from `x0`.
pub fn coordinate_ascent(
    f: &impl Fn(&[f64]) -> f64,
    x0: Vec<f64>,
    step: f64,
    tol: f64,
    max_evals: usize,
) -> SearchResult {
    let mut x = x0;
    let mut fx = f(&x);
    let mut h = step;
    let mut evals = 1;
    while h > tol && evals < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + dir * h;
                let y = f(&x);
                evals += 1;
                if y > fx {
                    fx = y;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    SearchResult { x, value: fx, converged: h <= tol }
}

/// Coordinate ascent from `starts` random points in [−1, 1]^n; keeps the best.
pub fn multistart(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    starts: usize,
    rng: &mut impl Rng,
    tol: f64,
) -> SearchResult {
    let mut best: Option<SearchResult> = None;
    for _ in 0..starts.max(1) {
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = coordinate_ascent(&f, x0, 0.5, tol, 200_000);
        if best.as_ref().map_or(true, |b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.expect("at least one start")
}
