//! Independent reference arithmetic for the integration tests.
//!
//! Polynomials are ascending coefficient vectors in `x` on the `x < 0`
//! branch. Nothing here calls into the crate's own polynomial helpers.

#![allow(dead_code)]

pub fn add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len().max(q.len())];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in q.iter().enumerate() {
        out[i] += c;
    }
    out
}

pub fn scale(p: &[f64], k: f64) -> Vec<f64> {
    p.iter().map(|c| c * k).collect()
}

pub fn mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

pub fn deriv(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

pub fn horner(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `prod (x - r_i)`.
pub fn from_roots(roots: &[f64]) -> Vec<f64> {
    roots.iter().fold(vec![1.0], |acc, r| mul(&acc, &[-r, 1.0]))
}

/// `W` on `x < 0` for the quartic family: `x^3/3 + a x^2 + b x`.
pub fn quartic_w(a: f64, b: f64) -> Vec<f64> {
    vec![0.0, b, a, 1.0 / 3.0]
}

/// `V` on `x < 0` for the quartic family, coefficients from the gauge data.
pub fn quartic_v(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (s, r, q) = (
        4.0 * a,
        4.0 * a * a + 2.0 * b,
        4.0 * a * b + 2.0 * n as f64 + 2.0,
    );
    // x^4 - s|x|^3 + r x^2 - q|x| with |x| = -x
    vec![0.0, q, r, s, 1.0]
}

/// `W` on `x < 0` for the sextic family: `-x^4/4 + a x^3 + b x^2 + c x`.
pub fn sextic_w(a: f64, b: f64, c: f64) -> Vec<f64> {
    vec![0.0, c, b, a, -0.25]
}

pub fn sextic_v(a: f64, b: f64, c: f64, n: usize, root_sum: f64) -> Vec<f64> {
    let n = n as f64;
    let u = -6.0 * a;
    let t = 9.0 * a * a - 4.0 * b;
    let s = 12.0 * a * b - 2.0 * c;
    let r = 4.0 * b * b + 6.0 * a * c - 2.0 * n - 3.0;
    let q = -2.0 * root_sum + 6.0 * a * (n + 1.0) + 4.0 * b * c;
    vec![0.0, q, r, s, t, u, 1.0]
}

/// `-phi'' - 2 W' phi' + (V - W'' - W'^2 - E) phi`, which vanishes exactly
/// when `e^W phi` solves `-psi'' + V psi = E psi`.
pub fn heun_remainder(w: &[f64], v: &[f64], phi: &[f64], energy: f64) -> Vec<f64> {
    let w1 = deriv(w);
    let w2 = deriv(&w1);
    let d1 = deriv(phi);
    let d2 = deriv(&d1);
    let mut pot = add(v, &scale(&w2, -1.0));
    pot = add(&pot, &scale(&mul(&w1, &w1), -1.0));
    pot = add(&pot, &[-energy]);
    let mut out = scale(&d2, -1.0);
    out = add(&out, &scale(&mul(&w1, &d1), -2.0));
    add(&out, &mul(&pot, phi))
}

/// Largest remainder coefficient relative to the largest term it cancels.
pub fn relative_remainder(w: &[f64], v: &[f64], phi: &[f64], energy: f64) -> f64 {
    let rem = heun_remainder(w, v, phi, energy);
    let scale = 1f64
        .max(energy.abs())
        .max(v.iter().fold(0f64, |m, c| m.max(c.abs())))
        * phi.iter().fold(0f64, |m, c| m.max(c.abs())).max(1.0);
    rem.iter().fold(0f64, |m, c| m.max(c.abs())) / scale
}

/// Real roots of `f` on `[lo, hi]` by sign-change scan and bisection.
pub fn bisection_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize) -> Vec<f64> {
    let step = (hi - lo) / cells as f64;
    let mut out = Vec::new();
    for i in 0..cells {
        let (mut x0, mut x1) = (lo + i as f64 * step, lo + (i + 1) as f64 * step);
        let (mut f0, f1) = (f(x0), f(x1));
        if f0 == 0.0 {
            out.push(x0);
            continue;
        }
        // a root on the right edge is picked up by the next cell
        if f0 * f1 > 0.0 || f1 == 0.0 {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (x0 + x1);
            if m <= x0 || m >= x1 {
                break;
            }
            let fm = f(m);
            if f0 * fm <= 0.0 {
                x1 = m;
            } else {
                x0 = m;
                f0 = fm;
            }
        }
        out.push(0.5 * (x0 + x1));
    }
    out
}

/// Exact `(n + 1) x (n + 1)` matrix of the quartic gauge operator acting on
/// monomials, built by applying the differential operator
/// `-d^2 - 2(x^2 + 2ax + b) d + 2n x - b^2 - 2a` to each `x^k`.
pub fn quartic_operator_by_differentiation(a: f64, b: f64, n: usize) -> Vec<Vec<f64>> {
    let q = 4.0 * a * b + 2.0 * n as f64 + 2.0;
    let mut m = vec![vec![0.0; n + 1]; n + 1];
    for k in 0..=n {
        let mut mono = vec![0.0; k + 1];
        mono[k] = 1.0;
        let d1 = deriv(&mono);
        let d2 = deriv(&d1);
        let mut img = scale(&d2, -1.0);
        img = add(&img, &scale(&mul(&[2.0 * b, 4.0 * a, 2.0], &d1), -1.0));
        img = add(
            &img,
            &mul(&[-b * b - 2.0 * a, q - 4.0 * a * b - 2.0], &mono),
        );
        for (j, c) in img.iter().enumerate() {
            if j <= n {
                m[j][k] = *c;
            } else {
                assert!(c.abs() < 1e-12, "operator leaves the degree-{n} space");
            }
        }
    }
    m
}
