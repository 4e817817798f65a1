//! Shared domain types: parity labels, gauge parameters, potentials and the
//! `QesState` record produced by every solver path.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Absolute/relative tolerance for the matching constraint at `x = 0`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Quartic,
    Sextic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Quartic => f.write_str("quartic"),
            Family::Sextic => f.write_str("sextic"),
        }
    }
}

/// Parity `epsilon` of a symmetrized eigenfunction: `psi(-x) = epsilon psi(x)`.
///
/// Even states obey a Neumann condition at the origin, odd states a
/// Dirichlet condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn epsilon(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Parity of `(-1)^n`.
    pub fn of_degree(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "even" | "+1" | "+" => Ok(Parity::Even),
            "odd" | "-1" | "-" => Ok(Parity::Odd),
            other => Err(format!("unknown parity `{other}` (expected even/odd)")),
        }
    }
}

/// Natural parity means `epsilon = (-1)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityCategory {
    Natural,
    Unnatural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Matrix,
    Bethe,
}

/// Gauge parameters of `W(x)`. `c` is only present for the sextic family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl Gauge {
    pub fn quartic(a: f64, b: f64) -> Self {
        Self { a, b, c: None }
    }

    pub fn sextic(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c: Some(c) }
    }

    /// Coefficient of `|x|` in `-W`, i.e. the slope `W'(0^-)`.
    pub fn linear(&self, family: Family) -> f64 {
        match family {
            Family::Quartic => self.b,
            Family::Sextic => self.c.unwrap_or(0.0),
        }
    }

    /// `W(x)` on `x < 0` as ascending polynomial coefficients.
    pub fn negative_branch_exponent(&self, family: Family) -> Vec<f64> {
        match family {
            // -|x|^3/3 + a x^2 - b|x|  with |x| = -x
            Family::Quartic => vec![0.0, self.b, self.a, 1.0 / 3.0],
            // -x^4/4 - a|x|^3 + b x^2 - c|x|
            Family::Sextic => vec![0.0, self.c.unwrap_or(0.0), self.b, self.a, -0.25],
        }
    }
}

/// Coefficients of a symmetrized potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum PotentialSpec {
    /// `x^4 - s|x|^3 + r x^2 - q|x|`
    Quartic { s: f64, r: f64, q: f64 },
    /// `x^6 - u|x|^5 + t x^4 - s|x|^3 + r x^2 - q|x|`
    Sextic {
        u: f64,
        t: f64,
        s: f64,
        r: f64,
        q: f64,
    },
}

impl PotentialSpec {
    pub fn family(&self) -> Family {
        match self {
            PotentialSpec::Quartic { .. } => Family::Quartic,
            PotentialSpec::Sextic { .. } => Family::Sextic,
        }
    }

    /// `(s, r, q)` or `(u, t, s, r, q)` in declaration order.
    pub fn coefficients(&self) -> Vec<f64> {
        match *self {
            PotentialSpec::Quartic { s, r, q } => vec![s, r, q],
            PotentialSpec::Sextic { u, t, s, r, q } => vec![u, t, s, r, q],
        }
    }

    /// `V(x)` restricted to `x < 0`, as ascending polynomial coefficients in `x`.
    pub fn negative_branch(&self) -> Vec<f64> {
        match *self {
            PotentialSpec::Quartic { s, r, q } => vec![0.0, q, r, s, 1.0],
            PotentialSpec::Sextic { u, t, s, r, q } => vec![0.0, q, r, s, t, u, 1.0],
        }
    }
}

/// One admissible (or candidate) QES eigenpair.
///
/// `coeffs` holds `v_0..v_n` of `phi` on the `x < 0` branch in ascending
/// degree, normalized monic. `parity` is `None` until the matching
/// constraint has been checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QesState {
    pub family: Family,
    pub n: usize,
    pub energy: f64,
    pub parity: Option<Parity>,
    pub coeffs: Vec<f64>,
    pub gauge: Gauge,
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Complex64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<ParityCategory>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl QesState {
    /// Residual of the matching constraint for `parity`, scaled by
    /// `max(1, |v0|, |v1|)`.
    pub fn constraint_residual(&self, parity: Parity) -> f64 {
        let v0 = self.coeffs.first().copied().unwrap_or(0.0);
        let v1 = self.coeffs.get(1).copied().unwrap_or(0.0);
        let scale = 1f64.max(v0.abs()).max(v1.abs());
        let raw = match parity {
            Parity::Even => v1 + self.gauge.linear(self.family) * v0,
            Parity::Odd => v0,
        };
        raw.abs() / scale
    }

    pub fn satisfies_constraint(&self, parity: Parity) -> bool {
        self.constraint_residual(parity) <= CONSTRAINT_TOL
    }
}

/// Scale `v` so its highest-degree nonzero coefficient is `+1`.
pub fn monic(v: &[f64]) -> Vec<f64> {
    let scale = v.iter().fold(0f64, |m, x| m.max(x.abs()));
    let lead = v
        .iter()
        .rev()
        .find(|x| x.abs() > 1e-12 * scale)
        .copied()
        .unwrap_or(1.0);
    v.iter().map(|x| x / lead).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_parses_cli_spellings() {
        assert_eq!("even".parse::<Parity>().unwrap(), Parity::Even);
        assert_eq!("odd".parse::<Parity>().unwrap(), Parity::Odd);
        assert!("up".parse::<Parity>().is_err());
    }

    #[test]
    fn monic_scales_leading_coefficient() {
        assert_eq!(monic(&[1.0, 0.5]), vec![2.0, 1.0]);
        assert_eq!(monic(&[-3.0, 0.0]), vec![1.0, -0.0]);
    }

    #[test]
    fn potential_branch_matches_abs_form() {
        let spec = PotentialSpec::Sextic {
            u: 1.5,
            t: -2.0,
            s: 0.25,
            r: 3.0,
            q: -0.5,
        };
        let x: f64 = -1.3;
        let ax = x.abs();
        let direct = x.powi(6) - 1.5 * ax.powi(5) - 2.0 * x.powi(4) - 0.25 * ax.powi(3)
            + 3.0 * x * x
            + 0.5 * ax;
        let branch = crate::poly::eval(&spec.negative_branch(), x);
        assert!((direct - branch).abs() < 1e-12);
    }
}
