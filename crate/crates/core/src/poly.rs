//! Dense univariate polynomials stored as ascending coefficient slices.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `(p(x), p'(x), p''(x))` by a single Horner pass.
pub fn eval_with_derivs(p: &[f64], x: f64) -> (f64, f64, f64) {
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &c in p.iter().rev() {
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + v;
        v = v * x + c;
    }
    (v, d1, d2)
}

pub fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Monic polynomial `prod (x - r_i)`.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    roots
        .iter()
        .fold(vec![1.0], |acc, &r| mul(&acc, &[-r, 1.0]))
}

fn trim(p: &[f64]) -> &[f64] {
    let end = p.iter().rposition(|c| *c != 0.0).map_or(0, |i| i + 1);
    &p[..end]
}

/// All complex roots from the eigenvalues of the companion matrix.
///
/// Returns `None` if the Schur iteration fails.
pub fn roots(p: &[f64]) -> Option<Vec<Complex64>> {
    let p = trim(p);
    if p.len() < 2 {
        return Some(Vec::new());
    }
    let deg = p.len() - 1;
    let lead = p[deg];
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -p[i] / lead;
    }
    let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 10_000)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

/// Real roots (imaginary part below `imag_tol`), Newton-polished and sorted.
pub fn real_roots(p: &[f64], imag_tol: f64) -> Option<Vec<f64>> {
    let dp = derivative(p);
    let mut out: Vec<f64> = roots(p)?
        .into_iter()
        .filter(|z| z.im.abs() < imag_tol)
        .map(|z| polish(p, &dp, z.re))
        .collect();
    out.sort_by(f64::total_cmp);
    Some(out)
}

fn polish(p: &[f64], dp: &[f64], mut x: f64) -> f64 {
    for _ in 0..8 {
        let d = eval(dp, x);
        if d == 0.0 {
            break;
        }
        let step = eval(p, x) / d;
        let next = x - step;
        if !next.is_finite() || eval(p, next).abs() > eval(p, x).abs() {
            break;
        }
        x = next;
        if step.abs() <= f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    x
}
