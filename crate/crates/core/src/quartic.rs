//! Symmetrized quartic oscillator `V(x) = x^4 - s|x|^3 + r x^2 - q|x|`.
//!
//! With gauge factor `W(x) = -|x|^3/3 + a x^2 - b|x|` and
//! `s = 4a`, `r = 4a^2 + 2b`, `q = 4ab + 2n + 2`, polynomial solutions of
//! degree `n` are eigenvectors of the sl(2) operator from
//! [`crate::algebra::quartic_gauge_operator`]. Admissible states are those
//! whose coefficients also satisfy the matching condition at the origin:
//! `v_1 + b v_0 = 0` (even) or `v_0 = 0` (odd).

use crate::algebra::{diagonalize, quartic_gauge_operator, RepDimension};
use crate::error::{QesError, Result};
use crate::eval;
use crate::state::{monic, Family, Gauge, Parity, PotentialSpec, Provenance, QesState};

pub const MAX_SECTOR_DEGREE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticModel {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl QuarticModel {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        Self { a, b, n }
    }

    pub fn s(&self) -> f64 {
        4.0 * self.a
    }

    pub fn r(&self) -> f64 {
        4.0 * self.a * self.a + 2.0 * self.b
    }

    pub fn q(&self) -> f64 {
        4.0 * self.a * self.b + 2.0 * self.n as f64 + 2.0
    }

    pub fn potential(&self) -> PotentialSpec {
        PotentialSpec::Quartic {
            s: self.s(),
            r: self.r(),
            q: self.q(),
        }
    }
}

/// `(s, r, q) = (4a, 4a^2 + 2b, 4ab + 2n + 2)`.
pub fn quartic_potential_coeffs(a: f64, b: f64, n: usize) -> (f64, f64, f64) {
    let m = QuarticModel::new(a, b, n);
    (m.s(), m.r(), m.q())
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticSector {
    /// Real eigenstates, ascending in energy, parity not yet assigned.
    pub states: Vec<QesState>,
    /// Eigenvalues of the gauge operator dropped for being complex.
    pub complex_eigenvalues: usize,
}

/// Diagonalize the degree-`n` gauge operator at `(a, b)` and turn every real
/// eigenvector into a monic candidate state. No parity filtering.
pub fn solve_quartic_sector(a: f64, b: f64, n: usize) -> Result<QuarticSector> {
    if n > MAX_SECTOR_DEGREE {
        return Err(QesError::Domain(format!(
            "degree {n} exceeds the supported maximum {MAX_SECTOR_DEGREE}"
        )));
    }
    let model = QuarticModel::new(a, b, n);
    let spectrum = diagonalize(&quartic_gauge_operator(a, b, RepDimension(n)))?;
    let states = spectrum
        .pairs
        .into_iter()
        .map(|pair| {
            let mut notes = Vec::new();
            if pair.defective {
                notes.push("double eigenvalue with a single eigenvector".to_string());
            }
            QesState {
                family: Family::Quartic,
                n,
                energy: pair.eigenvalue,
                parity: None,
                coeffs: monic(&pair.eigenvector),
                gauge: Gauge::quartic(a, b),
                potential: model.potential(),
                roots: None,
                node_count: None,
                category: None,
                provenance: Provenance::Matrix,
                notes,
            }
        })
        .collect();
    Ok(QuarticSector {
        states,
        complex_eigenvalues: spectrum.complex_count,
    })
}

/// Check the matching constraint for `parity`; on success record the parity
/// on the state.
pub fn matching_filter(state: &mut QesState, parity: Parity) -> bool {
    debug_assert_eq!(state.family, Family::Quartic);
    let ok = state.satisfies_constraint(parity);
    if ok {
        state.parity = Some(parity);
    }
    ok
}

/// The gauge parameter held fixed when picking a closed-form family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedParameter {
    A(f64),
    B(f64),
}

/// Closed-form admissible states for `(n, parity)` in
/// `{(0, even), (1, odd), (1, even)}`.
///
/// * `(0, even)`, fixed `a`: `b = 0`, `E = -2a`, `phi = 1`.
/// * `(1, odd)`, fixed `a`: `b = 0`, `E = -6a`, `phi = x`.
/// * `(1, even)`, fixed `b != 0`: `a = -(b^3 + 1)/(2b)`, `E = (2b^3 + 1)/b`,
///   `phi = x - 1/b` on `x < 0`, i.e. `psi ~ |x| + 1/b`.
pub fn quartic_family_solve(
    n: usize,
    parity: Parity,
    fixed: FixedParameter,
) -> Result<Vec<QesState>> {
    let (a, b, energy, coeffs) = match (n, parity, fixed) {
        (0, Parity::Even, FixedParameter::A(a)) => (a, 0.0, -2.0 * a, vec![1.0]),
        (1, Parity::Odd, FixedParameter::A(a)) => (a, 0.0, -6.0 * a, vec![0.0, 1.0]),
        (1, Parity::Even, FixedParameter::B(b)) => {
            if b == 0.0 {
                return Err(QesError::Domain(
                    "the n=1 even family needs b != 0".to_string(),
                ));
            }
            let a = -(b * b * b + 1.0) / (2.0 * b);
            (a, b, (2.0 * b * b * b + 1.0) / b, vec![-1.0 / b, 1.0])
        }
        (0, Parity::Even, _) | (1, _, _) => {
            let needed = if (n, parity) == (1, Parity::Even) {
                "b"
            } else {
                "a"
            };
            return Err(QesError::Domain(format!(
                "family n={n} {parity} is parametrized by fixed `{needed}`"
            )));
        }
        _ => {
            return Err(QesError::Unsupported {
                family: Family::Quartic,
                n,
                parity,
            })
        }
    };
    let model = QuarticModel::new(a, b, n);
    let mut state = QesState {
        family: Family::Quartic,
        n,
        // `+ 0.0` turns `-0.0` at `a = 0` into `0.0`
        energy: energy + 0.0,
        parity: None,
        coeffs,
        gauge: Gauge::quartic(a, b),
        potential: model.potential(),
        roots: None,
        node_count: None,
        category: None,
        provenance: Provenance::ClosedForm,
        notes: Vec::new(),
    };
    if !matching_filter(&mut state, parity) {
        return Err(QesError::Domain(format!(
            "closed-form state violates the matching constraint (residual {:e})",
            state.constraint_residual(parity)
        )));
    }
    if n == 1 && parity == Parity::Even && (a * a - b).abs() <= 1e-12 * a.abs().max(1.0) {
        state
            .notes
            .push("a^2 = b: both sign branches give this same state".to_string());
    }
    state.node_count = Some(eval::count_nodes(
        &state,
        eval::default_window(Family::Quartic),
        eval::DEFAULT_NODE_SAMPLES,
    )?);
    Ok(vec![state])
}

/// Scan range and resolution for the numeric constraint search in `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSearch {
    pub b_min: f64,
    pub b_max: f64,
    pub step: f64,
    /// Final bracket width in `b`.
    pub tol: f64,
}

impl Default for ConstraintSearch {
    fn default() -> Self {
        Self {
            b_min: -5.0,
            b_max: 5.0,
            step: 1e-2,
            tol: 1e-10,
        }
    }
}

/// Signed constraint residual along one eigen-branch.
fn branch_residual(state: &QesState, parity: Parity) -> f64 {
    let v0 = state.coeffs[0];
    match parity {
        Parity::Even => state.coeffs.get(1).copied().unwrap_or(0.0) + state.gauge.b * v0,
        Parity::Odd => v0,
    }
}

fn nearest(states: &[QesState], energy: f64) -> Option<&QesState> {
    states.iter().min_by(|x, y| {
        (x.energy - energy)
            .abs()
            .total_cmp(&(y.energy - energy).abs())
    })
}

/// Find values of `b` (at fixed `a`) where some real eigen-branch of the
/// degree-`n` operator satisfies the `parity` matching constraint.
///
/// Branches are followed by nearest-eigenvalue continuation between grid
/// steps; sign changes of the residual are refined by bisection. Intervals
/// where the number of real eigenvalues changes are skipped.
pub fn quartic_constraint_search(
    a: f64,
    n: usize,
    parity: Parity,
    search: &ConstraintSearch,
) -> Result<Vec<QesState>> {
    if !(search.b_max > search.b_min) || !(search.step > 0.0) {
        return Err(QesError::Domain("empty b range".to_string()));
    }
    let steps = ((search.b_max - search.b_min) / search.step).ceil() as usize;
    let grid = (0..=steps).map(|i| (search.b_min + i as f64 * search.step).min(search.b_max));

    let mut found: Vec<QesState> = Vec::new();
    let mut prev: Option<(f64, Vec<QesState>)> = None;
    for b in grid {
        let cur = solve_quartic_sector(a, b, n)?.states;
        for s in &cur {
            if branch_residual(s, parity) == 0.0 {
                push_unique(&mut found, s.clone(), parity);
            }
        }
        if let Some((b_prev, prev_states)) = &prev {
            if prev_states.len() == cur.len() {
                for (p, c) in prev_states.iter().zip(&cur) {
                    let (gp, gc) = (branch_residual(p, parity), branch_residual(c, parity));
                    if gp * gc < 0.0 {
                        if let Some(s) = refine(a, n, parity, (*b_prev, p), (b, c), search.tol)? {
                            push_unique(&mut found, s, parity);
                        }
                    }
                }
            }
        }
        prev = Some((b, cur));
    }

    for s in &mut found {
        s.node_count = Some(eval::count_nodes(
            s,
            eval::default_window(Family::Quartic),
            eval::DEFAULT_NODE_SAMPLES,
        )?);
    }
    found.sort_by(|x, y| {
        x.gauge
            .b
            .total_cmp(&y.gauge.b)
            .then(x.energy.total_cmp(&y.energy))
    });
    Ok(found)
}

fn refine(
    a: f64,
    n: usize,
    parity: Parity,
    lo: (f64, &QesState),
    hi: (f64, &QesState),
    tol: f64,
) -> Result<Option<QesState>> {
    let (mut b_lo, mut e_lo, mut g_lo) = (lo.0, lo.1.energy, branch_residual(lo.1, parity));
    let (mut b_hi, mut e_hi) = (hi.0, hi.1.energy);
    let mut best = hi.1.clone();
    for _ in 0..200 {
        let width = b_hi - b_lo;
        if width <= tol.min(1e-13 * b_hi.abs().max(1.0)) {
            break;
        }
        let b_mid = 0.5 * (b_lo + b_hi);
        if b_mid <= b_lo || b_mid >= b_hi {
            break;
        }
        let guess = e_lo + (e_hi - e_lo) * (b_mid - b_lo) / width;
        let states = solve_quartic_sector(a, b_mid, n)?.states;
        let Some(mid) = nearest(&states, guess) else {
            return Ok(None);
        };
        let g_mid = branch_residual(mid, parity);
        best = mid.clone();
        if g_mid == 0.0 {
            break;
        }
        if g_lo * g_mid < 0.0 {
            b_hi = b_mid;
            e_hi = mid.energy;
        } else {
            b_lo = b_mid;
            e_lo = mid.energy;
            g_lo = g_mid;
        }
    }
    if !best.satisfies_constraint(parity) {
        // A jump between branches, not a genuine zero.
        return Ok(None);
    }
    best.parity = Some(parity);
    Ok(Some(best))
}

fn push_unique(found: &mut Vec<QesState>, mut s: QesState, parity: Parity) {
    if !matching_filter(&mut s, parity) {
        return;
    }
    let dup = found
        .iter()
        .any(|f| (f.gauge.b - s.gauge.b).abs() < 1e-8 && (f.energy - s.energy).abs() < 1e-8);
    if !dup {
        found.push(s);
    }
}
