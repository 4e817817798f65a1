//! Symmetrized sextic oscillator
//! `V(x) = x^6 - u|x|^5 + t x^4 - s|x|^3 + r x^2 - q|x|` solved through the
//! roots of the polynomial factor (functional Bethe ansatz).
//!
//! Gauge factor `W(x) = -x^4/4 - a|x|^3 + b x^2 - c|x|` with
//! `u = -6a`, `t = 9a^2 - 4b`, `s = 12ab - 2c`, `r = 4b^2 + 6ac - 2n - 3` and
//! `q = -2 sum x_i + 6a(n+1) + 4bc`. The roots `x_i` of `phi` on `x < 0`
//! obey
//!
//! ```text
//! sum_{j != i} 1/(x_i - x_j) - x_i^3 + 3a x_i^2 + 2b x_i + c = 0
//! ```
//!
//! and the energy is `E = 2 sum x_i^2 - 6a sum x_i - 2b(2n+1) - c^2`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QesError, Result};
use crate::eval;
use crate::poly;
use crate::state::{
    Family, Gauge, Parity, ParityCategory, PotentialSpec, Provenance, QesState, CONSTRAINT_TOL,
};

/// Residual tolerance for the Bethe ansatz equations.
pub const BAE_TOL: f64 = 1e-10;
/// Imaginary-part cutoff for the quartic equations in `c`.
pub const C_ROOT_IMAG_TOL: f64 = 1e-10;
pub const MAX_BETHE_DEGREE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SexticModel {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: usize,
}

impl SexticModel {
    pub fn new(a: f64, b: f64, c: f64, n: usize) -> Self {
        Self { a, b, c, n }
    }

    pub fn u(&self) -> f64 {
        -6.0 * self.a
    }

    pub fn t(&self) -> f64 {
        9.0 * self.a * self.a - 4.0 * self.b
    }

    pub fn s(&self) -> f64 {
        12.0 * self.a * self.b - 2.0 * self.c
    }

    pub fn r(&self) -> f64 {
        4.0 * self.b * self.b + 6.0 * self.a * self.c - 2.0 * self.n as f64 - 3.0
    }

    /// `q` given the sum of the Bethe roots.
    pub fn q(&self, root_sum: f64) -> f64 {
        -2.0 * root_sum + 6.0 * self.a * (self.n as f64 + 1.0) + 4.0 * self.b * self.c
    }

    pub fn potential(&self, root_sum: f64) -> PotentialSpec {
        PotentialSpec::Sextic {
            u: self.u(),
            t: self.t(),
            s: self.s(),
            r: self.r(),
            q: self.q(root_sum),
        }
    }

    pub fn gauge(&self) -> Gauge {
        Gauge::sextic(self.a, self.b, self.c)
    }

    /// `E` from the power sums `sum x_i` and `sum x_i^2`.
    fn energy(&self, sum: f64, sum_sq: f64) -> f64 {
        2.0 * sum_sq
            - 6.0 * self.a * sum
            - 2.0 * self.b * (2.0 * self.n as f64 + 1.0)
            - self.c * self.c
    }
}

/// Real, pairwise distinct roots of `phi` on the `x < 0` branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheRoots(Vec<f64>);

impl BetheRoots {
    /// Rejects nearly coincident roots: `min |x_i - x_j| <= 1e-8 (1 + max |x_i|)`.
    pub fn new(roots: Vec<f64>) -> Result<Self> {
        let scale = 1.0 + roots.iter().fold(0f64, |m, x| m.max(x.abs()));
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if (roots[i] - roots[j]).abs() <= 1e-8 * scale {
                    return Err(QesError::CoincidentRoots { i, j });
                }
            }
        }
        Ok(Self(roots))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Monic `phi(x) = prod (x - x_i)`, ascending coefficients.
    pub fn polynomial(&self) -> Vec<f64> {
        poly::from_roots(&self.0)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(QesError::LengthMismatch { expected, got });
    }
    Ok(())
}

/// `(u, t, s, r, q)` for `model` with the roots attached.
pub fn sextic_potential_coeffs(model: &SexticModel, roots: &BetheRoots) -> Result<PotentialSpec> {
    check_len(model.n, roots.len())?;
    Ok(model.potential(roots.as_slice().iter().sum()))
}

/// Left-hand sides of the Bethe ansatz equations.
pub fn bethe_residuals(roots: &[f64], a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(roots.len());
    for (i, &xi) in roots.iter().enumerate() {
        let mut pair = 0.0;
        for (j, &xj) in roots.iter().enumerate() {
            if i != j {
                if xi == xj {
                    return Err(QesError::CoincidentRoots {
                        i: i.min(j),
                        j: i.max(j),
                    });
                }
                pair += 1.0 / (xi - xj);
            }
        }
        out.push(pair - xi * xi * xi + 3.0 * a * xi * xi + 2.0 * b * xi + c);
    }
    Ok(out)
}

/// Same as [`bethe_residuals`] for complex root sets (conjugate pairs).
pub fn bethe_residuals_complex(
    roots: &[Complex64],
    a: f64,
    b: f64,
    c: f64,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(roots.len());
    for (i, &xi) in roots.iter().enumerate() {
        let mut pair = Complex64::new(0.0, 0.0);
        for (j, &xj) in roots.iter().enumerate() {
            if i != j {
                if xi == xj {
                    return Err(QesError::CoincidentRoots {
                        i: i.min(j),
                        j: i.max(j),
                    });
                }
                pair += (xi - xj).inv();
            }
        }
        out.push(pair - xi * xi * xi + 3.0 * a * xi * xi + 2.0 * b * xi + c);
    }
    Ok(out)
}

/// Multistart Newton settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetheConfig {
    pub starts: usize,
    pub seed: u64,
    /// Half-width of the sampling box; `None` uses
    /// `2 + |a| + sqrt(1 + |b|) + |c|`.
    pub box_radius: Option<f64>,
    pub max_iter: usize,
}

impl Default for BetheConfig {
    fn default() -> Self {
        Self {
            starts: 200,
            seed: 0,
            box_radius: None,
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetheSolution {
    /// Distinct converged root sets, each sorted ascending; the list is in
    /// lexicographic order.
    pub root_sets: Vec<BetheRoots>,
    pub failed_starts: usize,
    /// Converged starts dropped for nearly coincident roots.
    pub degenerate_starts: usize,
}

enum StartOutcome {
    Converged(Vec<f64>),
    Degenerate,
    Failed,
}

fn residual_norm(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn max_abs(r: &[f64]) -> f64 {
    r.iter().fold(0f64, |m, x| m.max(x.abs()))
}

fn newton_bethe(mut x: Vec<f64>, a: f64, b: f64, c: f64, max_iter: usize) -> StartOutcome {
    let n = x.len();
    let Ok(mut f) = bethe_residuals(&x, a, b, c) else {
        return StartOutcome::Failed;
    };
    for _ in 0..max_iter {
        let converged = max_abs(&f) < BAE_TOL;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let mut diag = -(3.0 * x[i] * x[i] - 6.0 * a * x[i] - 2.0 * b);
            for j in 0..n {
                if i != j {
                    let w = 1.0 / (x[i] - x[j]).powi(2);
                    diag -= w;
                    jac[(i, j)] = w;
                }
            }
            jac[(i, i)] = diag;
        }
        let rhs = -DVector::from_column_slice(&f);
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let size = x.iter().fold(1f64, |m, v| m.max(v.abs()));
        if converged && step.amax() <= 1e-14 * size {
            break;
        }
        let f0 = residual_norm(&f);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = x
                .iter()
                .zip(step.iter())
                .map(|(xi, di)| xi + t * di)
                .collect();
            if let Ok(ft) = bethe_residuals(&trial, a, b, c) {
                let nt = residual_norm(&ft);
                if nt.is_finite() && (nt < (1.0 - 1e-4 * t) * f0 || (converged && nt <= f0)) {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if max_abs(&f) >= BAE_TOL {
        return StartOutcome::Failed;
    }
    x.sort_by(f64::total_cmp);
    match BetheRoots::new(x.clone()) {
        Ok(_) => StartOutcome::Converged(x),
        Err(_) => StartOutcome::Degenerate,
    }
}

/// Real solutions of the degree-`n` Bethe ansatz equations by damped Newton
/// from `cfg.starts` seeded random starts. Deterministic for a fixed seed.
pub fn solve_bethe(n: usize, a: f64, b: f64, c: f64, cfg: &BetheConfig) -> Result<BetheSolution> {
    if n > MAX_BETHE_DEGREE {
        return Err(QesError::Domain(format!(
            "Bethe degree {n} exceeds the supported maximum {MAX_BETHE_DEGREE}"
        )));
    }
    if n == 0 {
        return Ok(BetheSolution {
            root_sets: vec![BetheRoots(Vec::new())],
            failed_starts: 0,
            degenerate_starts: 0,
        });
    }
    let radius = cfg
        .box_radius
        .unwrap_or(2.0 + a.abs() + (1.0 + b.abs()).sqrt() + c.abs());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<Vec<f64>> = (0..cfg.starts)
        .map(|_| {
            let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
            x.sort_by(f64::total_cmp);
            x
        })
        .collect();

    let outcomes: Vec<StartOutcome> = starts
        .into_par_iter()
        .map(|x0| newton_bethe(x0, a, b, c, cfg.max_iter))
        .collect();

    let mut sets: Vec<Vec<f64>> = Vec::new();
    let (mut failed, mut degenerate) = (0, 0);
    for outcome in outcomes {
        match outcome {
            StartOutcome::Converged(x) => {
                let dup = sets
                    .iter()
                    .any(|s| s.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-6));
                if !dup {
                    sets.push(x);
                }
            }
            StartOutcome::Degenerate => degenerate += 1,
            StartOutcome::Failed => failed += 1,
        }
    }
    sets.sort_by(|p, q| {
        p.iter()
            .zip(q)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(BetheSolution {
        root_sets: sets.into_iter().map(BetheRoots).collect(),
        failed_starts: failed,
        degenerate_starts: degenerate,
    })
}

/// `E = 2 sum x_i^2 - 6a sum x_i - 2b(2n+1) - c^2`.
pub fn sextic_energy(roots: &BetheRoots, a: f64, b: f64, c: f64, n: usize) -> Result<f64> {
    check_len(n, roots.len())?;
    let xs = roots.as_slice();
    let sum: f64 = xs.iter().sum();
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    Ok(SexticModel::new(a, b, c, n).energy(sum, sum_sq))
}

fn constraint_holds(coeffs: &[f64], c: f64, parity: Parity) -> bool {
    let v0 = coeffs.first().copied().unwrap_or(0.0);
    let v1 = coeffs.get(1).copied().unwrap_or(0.0);
    let scale = 1f64.max(v0.abs()).max(v1.abs());
    let raw = match parity {
        Parity::Even => v1 + c * v0,
        Parity::Odd => v0,
    };
    raw.abs() <= CONSTRAINT_TOL * scale
}

/// Matching constraint `v_1 + c v_0 = 0` (even) or `v_0 = 0` (odd) on
/// `phi = prod (x - x_i)`.
pub fn sextic_matching_filter(roots: &BetheRoots, c: f64, parity: Parity) -> bool {
    constraint_holds(&roots.polynomial(), c, parity)
}

pub fn classify_parity_category(n: usize, parity: Parity) -> ParityCategory {
    if parity == Parity::of_degree(n) {
        ParityCategory::Natural
    } else {
        ParityCategory::Unnatural
    }
}

/// Root set of a sextic state: real roots, or one conjugate pair for n = 2.
#[derive(Debug, Clone)]
struct RootData {
    roots: Vec<Complex64>,
    coeffs: Vec<f64>,
    sum: f64,
    sum_sq: f64,
}

impl RootData {
    fn real(xs: &[f64]) -> Self {
        Self {
            roots: xs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            coeffs: poly::from_roots(xs),
            sum: xs.iter().sum(),
            sum_sq: xs.iter().map(|x| x * x).sum(),
        }
    }

    /// Roots of `x^2 - sigma x + pi`.
    fn quadratic(sigma: f64, pi: f64) -> Self {
        let disc = sigma * sigma - 4.0 * pi;
        let roots = if disc >= 0.0 {
            let d = disc.sqrt();
            vec![
                Complex64::new(0.5 * (sigma - d), 0.0),
                Complex64::new(0.5 * (sigma + d), 0.0),
            ]
        } else {
            let d = (-disc).sqrt();
            vec![
                Complex64::new(0.5 * sigma, -0.5 * d),
                Complex64::new(0.5 * sigma, 0.5 * d),
            ]
        };
        Self {
            roots,
            coeffs: vec![pi, -sigma, 1.0],
            sum: sigma,
            sum_sq: sigma * sigma - 2.0 * pi,
        }
    }
}

fn build_state(
    model: SexticModel,
    parity: Parity,
    data: RootData,
    provenance: Provenance,
) -> Result<QesState> {
    let mut notes = Vec::new();
    let residuals = bethe_residuals_complex(&data.roots, model.a, model.b, model.c)?;
    let worst = residuals.iter().fold(0f64, |m, z| m.max(z.norm()));
    if worst > BAE_TOL {
        notes.push(format!("Bethe residual {worst:e} above tolerance"));
    }
    if data.roots.iter().any(|z| z.im != 0.0) {
        notes.push("Bethe roots form a complex-conjugate pair".to_string());
    }
    let mut state = QesState {
        family: Family::Sextic,
        n: model.n,
        energy: model.energy(data.sum, data.sum_sq),
        parity: None,
        coeffs: data.coeffs,
        gauge: model.gauge(),
        potential: model.potential(data.sum),
        roots: Some(data.roots),
        node_count: None,
        category: Some(classify_parity_category(model.n, parity)),
        provenance,
        notes,
    };
    if !constraint_holds(&state.coeffs, model.c, parity) {
        return Err(QesError::Domain(format!(
            "sextic state violates the matching constraint (residual {:e})",
            state.constraint_residual(parity)
        )));
    }
    state.parity = Some(parity);
    state.node_count = Some(eval::count_nodes(
        &state,
        eval::default_window(Family::Sextic),
        eval::DEFAULT_NODE_SAMPLES,
    )?);
    Ok(state)
}

/// Real nonzero roots `c` of `k c^4 + 2b c^2 + 3a c - 1 = 0`.
pub fn gauge_c_roots(leading: f64, a: f64, b: f64) -> Result<Vec<f64>> {
    let coeffs = [-1.0, 3.0 * a, 2.0 * b, 0.0, leading];
    let roots = poly::real_roots(&coeffs, C_ROOT_IMAG_TOL).ok_or_else(|| {
        QesError::Domain("companion-matrix iteration did not converge".to_string())
    })?;
    Ok(roots.into_iter().filter(|c| c.abs() > 1e-12).collect())
}

/// All admissible states of the worked sextic families:
/// `(0, even)`, `(1, odd)`, `(1, even)`, `(2, odd)`, `(2, even)` at given
/// `(a, b)`. `c` is determined by the family.
pub fn sextic_family_solve(n: usize, parity: Parity, a: f64, b: f64) -> Result<Vec<QesState>> {
    let mut states = Vec::new();
    match (n, parity) {
        (0, Parity::Even) => {
            let model = SexticModel::new(a, b, 0.0, 0);
            states.push(build_state(
                model,
                parity,
                RootData::real(&[]),
                Provenance::ClosedForm,
            )?);
        }
        (1, Parity::Odd) => {
            let model = SexticModel::new(a, b, 0.0, 1);
            states.push(build_state(
                model,
                parity,
                RootData::real(&[0.0]),
                Provenance::ClosedForm,
            )?);
        }
        (1, Parity::Even) => {
            for c in gauge_c_roots(1.0, a, b)? {
                let model = SexticModel::new(a, b, c, 1);
                states.push(build_state(
                    model,
                    parity,
                    RootData::real(&[1.0 / c]),
                    Provenance::ClosedForm,
                )?);
            }
        }
        (2, Parity::Odd) => {
            for c in gauge_c_roots(2.0, a, b)? {
                let model = SexticModel::new(a, b, c, 2);
                let mut xs = [0.0, 1.0 / c];
                xs.sort_by(f64::total_cmp);
                states.push(build_state(
                    model,
                    parity,
                    RootData::real(&xs),
                    Provenance::ClosedForm,
                )?);
            }
        }
        (2, Parity::Even) => {
            for (sigma, pi) in even_pair_solutions(a, b) {
                let c = sigma / pi;
                let data = RootData::quadratic(sigma, pi);
                let excluded = data
                    .roots
                    .iter()
                    .any(|z| z.norm() < 1e-8 || (z - Complex64::new(1.0 / c, 0.0)).norm() < 1e-8);
                if excluded {
                    continue;
                }
                states.push(build_state(
                    SexticModel::new(a, b, c, 2),
                    parity,
                    data,
                    Provenance::Bethe,
                )?);
            }
        }
        _ => {
            return Err(QesError::Unsupported {
                family: Family::Sextic,
                n,
                parity,
            })
        }
    }
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(states)
}

/// Solutions `(sigma, pi) = (x1 + x2, x1 x2)` of the n = 2 even system
///
/// ```text
/// P(x1) = -P(x2) = 1/(x1 - x2),   x1 + x2 = c x1 x2,
/// P(x)  = x^3 - 3a x^2 - 2b x - c.
/// ```
///
/// In symmetric coordinates, with `c = sigma/pi` and `A = sigma^2 - 3a sigma - 2b`:
///
/// ```text
/// (sigma^2 - 4 pi)(A - pi) = 2
/// pi (sigma^3 - 3 sigma pi - 3a sigma^2 + 6a pi - 2b sigma) = 2 sigma
/// ```
///
/// The first is a quadratic in `pi` with discriminant
/// `(sigma^2 - 4A)^2 + 32 > 0`, so both branches are real for every `sigma`;
/// the second is scanned for sign changes along each branch. Conjugate root
/// pairs (`sigma^2 < 4 pi`) are included.
fn even_pair_solutions(a: f64, b: f64) -> Vec<(f64, f64)> {
    let branch = |sigma: f64, sign: f64| -> f64 {
        let big_a = sigma * sigma - 3.0 * a * sigma - 2.0 * b;
        let lin = sigma * sigma + 4.0 * big_a;
        let disc = (sigma * sigma - 4.0 * big_a).powi(2) + 32.0;
        (lin + sign * disc.sqrt()) / 8.0
    };
    let g = |sigma: f64, pi: f64| -> f64 {
        pi * (sigma.powi(3) - 3.0 * sigma * pi - 3.0 * a * sigma * sigma + 6.0 * a * pi
            - 2.0 * b * sigma)
            - 2.0 * sigma
    };
    let span = 10.0 * (2.0 + a.abs() + (1.0 + b.abs()).sqrt());
    let intervals = 40_000usize;
    let at = |i: usize| span * (2.0 * i as f64 - intervals as f64) / intervals as f64;

    let mut out: Vec<(f64, f64)> = Vec::new();
    for sign in [-1.0, 1.0] {
        let h = |sigma: f64| g(sigma, branch(sigma, sign));
        let mut prev = (at(0), h(at(0)));
        if prev.1 == 0.0 {
            out.push((prev.0, branch(prev.0, sign)));
        }
        for i in 1..=intervals {
            let x = at(i);
            let y = h(x);
            if y == 0.0 {
                out.push((x, branch(x, sign)));
            } else if prev.1 * y < 0.0 {
                let root = bisect(&h, prev.0, x, prev.1);
                out.push((root, branch(root, sign)));
            }
            prev = (x, y);
        }
    }
    out.retain(|&(_, pi)| pi.abs() > 1e-12);
    out.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    out.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9);
    out
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// Generic path: solve the degree-`n` Bethe equations at fixed `(a, b, c)`
/// and keep root sets satisfying the `parity` matching constraint.
pub fn sextic_bethe_states(
    n: usize,
    parity: Parity,
    a: f64,
    b: f64,
    c: f64,
    cfg: &BetheConfig,
) -> Result<(Vec<QesState>, BetheSolution)> {
    let solution = solve_bethe(n, a, b, c, cfg)?;
    let mut states = Vec::new();
    for roots in &solution.root_sets {
        if sextic_matching_filter(roots, c, parity) {
            states.push(build_state(
                SexticModel::new(a, b, c, n),
                parity,
                RootData::real(roots.as_slice()),
                Provenance::Bethe,
            )?);
        }
    }
    states.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok((states, solution))
}
