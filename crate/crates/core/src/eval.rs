//! Pointwise evaluation of symmetrized potentials and QES wavefunctions.
//!
//! Everything is computed on the `x < 0` branch, where `W` and `phi` are
//! ordinary polynomials, and reflected to `x > 0` with the state's parity.

use crate::error::{QesError, Result};
use crate::poly;
use crate::state::{Family, Parity, PotentialSpec, QesState};

pub const DEFAULT_NODE_SAMPLES: usize = 20_001;

/// Half-width of the node-counting / normalization window.
pub fn default_window(family: Family) -> f64 {
    match family {
        Family::Quartic => 6.0,
        Family::Sextic => 4.0,
    }
}

/// Points closer than this to the origin are excluded from residual grids.
pub const ORIGIN_EXCLUSION: f64 = 1e-3;

/// `W(x)`, even in `x`.
pub fn gauge_exponent(x: f64, state: &QesState) -> f64 {
    poly::eval(
        &state.gauge.negative_branch_exponent(state.family),
        -x.abs(),
    )
}

/// Symmetrized potential `V(x)`; exactly even.
pub fn potential_value(x: f64, spec: &PotentialSpec) -> f64 {
    poly::eval(&spec.negative_branch(), -x.abs())
}

/// `psi = e^W phi` prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    exponent: Vec<f64>,
    phi: Vec<f64>,
    parity: Parity,
}

/// `(psi, psi', psi'')` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub slope: f64,
    pub curvature: f64,
}

impl Wavefunction {
    pub fn new(state: &QesState) -> Result<Self> {
        let parity = state.parity.ok_or(QesError::MissingParity)?;
        Ok(Self {
            exponent: state.gauge.negative_branch_exponent(state.family),
            phi: state.coeffs.clone(),
            parity,
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Analytic jet on the `x < 0` branch (also used as the left limit at 0).
    fn left_jet(&self, x: f64) -> Jet {
        let (w, w1, w2) = poly::eval_with_derivs(&self.exponent, x);
        let (p, p1, p2) = poly::eval_with_derivs(&self.phi, x);
        let e = w.exp();
        Jet {
            value: e * p,
            slope: e * (w1 * p + p1),
            curvature: e * (p2 + 2.0 * w1 * p1 + (w2 + w1 * w1) * p),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left_jet(x).value
        } else if x > 0.0 {
            self.parity.epsilon() * self.left_jet(-x).value
        } else {
            match self.parity {
                Parity::Even => self.phi[0],
                Parity::Odd => 0.0,
            }
        }
    }

    /// Analytic `(psi, psi', psi'')` away from the origin.
    pub fn jet(&self, x: f64) -> Jet {
        if x < 0.0 {
            self.left_jet(x)
        } else {
            let eps = self.parity.epsilon();
            let j = self.left_jet(-x);
            Jet {
                value: eps * j.value,
                slope: -eps * j.slope,
                curvature: eps * j.curvature,
            }
        }
    }

    /// One-sided `(psi, psi')` at `0^-` and `0^+`.
    pub fn at_origin(&self) -> ((f64, f64), (f64, f64)) {
        let left = self.left_jet(0.0);
        let eps = self.parity.epsilon();
        (
            (left.value, left.slope),
            (eps * left.value, -eps * left.slope),
        )
    }
}

pub fn wavefunction_value(x: f64, state: &QesState) -> Result<f64> {
    Ok(Wavefunction::new(state)?.value(x))
}

/// Node positions: strict sign changes of `psi` on a uniform grid over
/// `[-window, window]`, each located by bisection.
pub fn node_positions(state: &QesState, window: f64, samples: usize) -> Result<Vec<f64>> {
    if !(window > 0.0) || samples < 1000 {
        return Err(QesError::Domain(
            "node counting needs window > 0 and at least 1000 samples".to_string(),
        ));
    }
    let psi = Wavefunction::new(state)?;
    let h = 2.0 * window / (samples - 1) as f64;
    let mut nodes = Vec::new();
    // last nonzero sample
    let mut last: Option<(f64, f64)> = None;
    for i in 0..samples {
        let x = -window + i as f64 * h;
        let y = psi.value(x);
        if y == 0.0 {
            continue;
        }
        if let Some((xl, yl)) = last {
            if yl.signum() != y.signum() {
                nodes.push(bisect_node(&psi, xl, x, yl));
            }
        }
        last = Some((x, y));
    }
    Ok(nodes)
}

fn bisect_node(psi: &Wavefunction, mut lo: f64, mut hi: f64, y_lo: f64) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let y = psi.value(mid);
        if y == 0.0 {
            return mid;
        }
        if y.signum() == y_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn count_nodes(state: &QesState, window: f64, samples: usize) -> Result<usize> {
    Ok(node_positions(state, window, samples)?.len())
}

/// `max |-psi'' + (V - E) psi| / max |psi|` over `grid`, with analytic
/// derivatives. Points within [`ORIGIN_EXCLUSION`] of 0 are skipped.
pub fn schrodinger_residual(state: &QesState, spec: &PotentialSpec, grid: &[f64]) -> Result<f64> {
    let psi = Wavefunction::new(state)?;
    let (mut worst, mut peak) = (0f64, 0f64);
    for &x in grid.iter().filter(|x| x.abs() >= ORIGIN_EXCLUSION) {
        let j = psi.jet(x);
        let v = potential_value(x, spec);
        worst = worst.max((-j.curvature + (v - state.energy) * j.value).abs());
        peak = peak.max(j.value.abs());
    }
    if peak == 0.0 {
        return Err(QesError::Domain(
            "wavefunction vanishes on grid".to_string(),
        ));
    }
    Ok(worst / peak)
}

/// `samples` equispaced points from `lo` to `hi`; a grid symmetric about 0
/// is exactly antisymmetric in floating point.
pub fn uniform_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let m = samples.max(2) - 1;
    (0..=m)
        .map(|i| (lo * (m - i) as f64 + hi * i as f64) / m as f64)
        .collect()
}

/// Composite Simpson rule with `intervals` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, intervals: usize) -> f64 {
    let m = intervals.max(2) + intervals % 2;
    let h = (hi - lo) / m as f64;
    let inner: f64 = (1..m)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(lo + i as f64 * h)
        })
        .sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

/// `∫ psi^2` over `[-window, window]`.
pub fn norm_squared(state: &QesState, window: f64) -> Result<f64> {
    let psi = Wavefunction::new(state)?;
    Ok(simpson(|x| psi.value(x).powi(2), -window, window, 20_000))
}

/// Factor giving unit L2 norm with `psi(0^+ + delta) > 0`.
pub fn normalization(state: &QesState, window: f64) -> Result<f64> {
    let psi = Wavefunction::new(state)?;
    let norm = norm_squared(state, window)?.sqrt();
    let mut sign = 1.0;
    for delta in [1e-6, 1e-4, 1e-2] {
        let y = psi.value(delta);
        if y != 0.0 {
            sign = y.signum();
            break;
        }
    }
    Ok(sign / norm)
}

/// Sampled curve `(x_i, y_i)` with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(QesError::Domain("grid length mismatch".to_string()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(QesError::Domain("grid not strictly increasing".to_string()));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }
}

/// Normalized `psi` sampled on `[-window, window]`.
pub fn sample_wavefunction(state: &QesState, window: f64, samples: usize) -> Result<GridFunction> {
    let psi = Wavefunction::new(state)?;
    let k = normalization(state, window)?;
    let xs = uniform_grid(-window, window, samples);
    let ys = xs.iter().map(|&x| k * psi.value(x)).collect();
    GridFunction::new(xs, ys)
}

pub fn sample_potential(spec: &PotentialSpec, window: f64, samples: usize) -> Result<GridFunction> {
    let xs = uniform_grid(-window, window, samples);
    let ys = xs.iter().map(|&x| potential_value(x, spec)).collect();
    GridFunction::new(xs, ys)
}
