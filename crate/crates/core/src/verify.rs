//! Finite-difference cross-check of QES eigenpairs.
//!
//! `-psi'' + V psi = E psi` is discretized on the half line `[0, L]` with a
//! uniform step `h = L/N`. Even states use a Neumann closure at the origin
//! (ghost point `psi_{-1} = psi_1`), odd states a Dirichlet one; `psi(L) = 0`
//! in both sectors. The lowest eigenvalues of the symmetric tridiagonal
//! matrix are found by Sturm-sequence bisection, at `N` and `2N`, and
//! Richardson-extrapolated.

use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::eval::{self, potential_value};
use crate::state::{Family, Parity, PotentialSpec, QesState};

/// Grid changes above this between `N` and `2N` mark a spectrum unconverged.
pub const RICHARDSON_LIMIT: f64 = 1e-3;
/// A QES energy farther than this from every eigenvalue is unmatched.
pub const MATCH_WINDOW: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub length: f64,
    pub points: usize,
    pub parity: Parity,
    pub count: usize,
}

impl FdConfig {
    /// `L = 8` (quartic) or `5` (sextic), `N = 4000`, six eigenvalues.
    pub fn for_family(family: Family, parity: Parity) -> Self {
        let length = match family {
            Family::Quartic => 8.0,
            Family::Sextic => 5.0,
        };
        Self {
            length,
            points: 4000,
            parity,
            count: 6,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || self.points < 200 || self.count == 0 {
            return Err(QesError::Domain(format!(
                "invalid finite-difference config (L={}, N={}, k={})",
                self.length, self.points, self.count
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineSpectrum {
    /// Richardson-extrapolated eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `|lambda(N) - lambda(2N)|` per eigenvalue.
    pub grid_changes: Vec<f64>,
    /// Largest entry of `grid_changes`.
    pub max_grid_change: f64,
    pub converged: bool,
}

/// Lowest `count` eigenvalues of the symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off`.
pub fn tridiagonal_lowest(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n {
        return Err(QesError::Tridiagonal("off-diagonal length".to_string()));
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return Err(QesError::Tridiagonal("non-finite matrix entry".to_string()));
    }
    let count = count.min(n);
    // Gershgorin bounds
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * hi.abs().max(lo.abs()) * 1e-10);
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            q = diag[i] - x - off[i - 1] * off[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut out = Vec::with_capacity(count);
    let mut floor = lo;
    for k in 0..count {
        let (mut a, mut b) = (floor, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if below(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = 0.5 * (a + b);
        out.push(lambda);
        floor = a;
    }
    Ok(out)
}

fn raw_spectrum<V: Fn(f64) -> f64>(
    v: &V,
    length: f64,
    points: usize,
    parity: Parity,
    count: usize,
) -> Result<Vec<f64>> {
    let h = length / points as f64;
    let inv_h2 = 1.0 / (h * h);
    // Interior unknowns psi_i at x_i = i h, i < N; psi_N = 0.
    let first = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let diag: Vec<f64> = (first..points)
        .map(|i| 2.0 * inv_h2 + v(i as f64 * h))
        .collect();
    let mut off = vec![-inv_h2; diag.len() - 1];
    if parity == Parity::Even {
        // Ghost point doubles the coupling in row 0; symmetrized by rescaling psi_0.
        off[0] = -std::f64::consts::SQRT_2 * inv_h2;
    }
    tridiagonal_lowest(&diag, &off, count)
}

/// Half-line spectrum for an arbitrary even potential given on `x >= 0`.
pub fn fd_halfline_spectrum_with<V: Fn(f64) -> f64>(
    v: V,
    cfg: &FdConfig,
) -> Result<HalfLineSpectrum> {
    cfg.validate()?;
    let coarse = raw_spectrum(&v, cfg.length, cfg.points, cfg.parity, cfg.count)?;
    let fine = raw_spectrum(&v, cfg.length, 2 * cfg.points, cfg.parity, cfg.count)?;
    let grid_changes: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c - f).abs())
        .collect();
    let max_grid_change = grid_changes.iter().copied().fold(0.0, f64::max);
    let eigenvalues = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(HalfLineSpectrum {
        eigenvalues,
        grid_changes,
        max_grid_change,
        converged: max_grid_change <= RICHARDSON_LIMIT,
    })
}

pub fn fd_halfline_spectrum(spec: &PotentialSpec, cfg: &FdConfig) -> Result<HalfLineSpectrum> {
    fd_halfline_spectrum_with(|x| potential_value(x, spec), cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub parity: Parity,
    pub even_eigenvalues: Vec<f64>,
    pub odd_eigenvalues: Vec<f64>,
    pub qes_energy: f64,
    /// Nearest eigenvalue in the state's own parity sector.
    pub fd_energy: f64,
    /// Rank of `fd_energy` in the merged ascending spectrum.
    pub matched_index: Option<usize>,
    pub node_count: usize,
    pub abs_error: f64,
    /// `|lambda(N) - lambda(2N)|` of the matched eigenvalue.
    pub grid_change: f64,
    pub converged: bool,
}

impl SpectrumReport {
    pub fn index_matches_nodes(&self) -> bool {
        self.matched_index == Some(self.node_count)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.converged && self.abs_error <= tol && self.index_matches_nodes()
    }
}

/// Compare a QES state with the finite-difference spectrum of `spec`.
///
/// `cfg.parity` is ignored; both sectors are computed. The state's
/// eigenvalue is located in its own sector and ranked in the merged
/// spectrum; the rank should equal the node count. Convergence is judged
/// on the matched eigenvalue only: higher levels of a sextic well move by
/// more than the limit at the default grid and are context, not claims.
pub fn verify_state(
    state: &QesState,
    spec: &PotentialSpec,
    cfg: &FdConfig,
) -> Result<SpectrumReport> {
    let parity = state.parity.ok_or(QesError::MissingParity)?;
    let nodes = eval::count_nodes(
        state,
        eval::default_window(state.family),
        eval::DEFAULT_NODE_SAMPLES,
    )?;
    let count = cfg.count.max(nodes + 2);
    let even = fd_halfline_spectrum(
        spec,
        &FdConfig {
            parity: Parity::Even,
            count,
            ..*cfg
        },
    )?;
    let odd = fd_halfline_spectrum(
        spec,
        &FdConfig {
            parity: Parity::Odd,
            count,
            ..*cfg
        },
    )?;
    let own = match parity {
        Parity::Even => (&even.eigenvalues, &even.grid_changes),
        Parity::Odd => (&odd.eigenvalues, &odd.grid_changes),
    };
    let (own, own_changes) = own;
    let nearest = own.iter().enumerate().min_by(|(_, x), (_, y)| {
        (*x - state.energy)
            .abs()
            .total_cmp(&(*y - state.energy).abs())
    });
    let (fd_energy, grid_change) = match nearest {
        Some((i, &e)) => (e, own_changes[i]),
        None => (f64::NAN, f64::NAN),
    };
    let abs_error = (fd_energy - state.energy).abs();
    let within = abs_error <= MATCH_WINDOW;

    let mut merged: Vec<f64> = even
        .eigenvalues
        .iter()
        .chain(&odd.eigenvalues)
        .copied()
        .collect();
    merged.sort_by(f64::total_cmp);
    let matched_index = if within {
        merged.iter().position(|&e| e == fd_energy)
    } else {
        None
    };
    Ok(SpectrumReport {
        parity,
        even_eigenvalues: even.eigenvalues,
        odd_eigenvalues: odd.eigenvalues,
        qes_energy: state.energy,
        fd_energy,
        matched_index,
        node_count: nodes,
        abs_error,
        grid_change,
        converged: within && grid_change <= RICHARDSON_LIMIT,
    })
}
