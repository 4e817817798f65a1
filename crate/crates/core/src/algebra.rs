//! Finite-dimensional sl(2,R) representation on polynomials of degree `<= n`
//! and the gauge-rotated quartic operator built from it.
//!
//! Matrices act on coefficient vectors `(v_0, ..., v_n)` of
//! `phi(x) = sum v_k x^k`, basis ordered by ascending degree: column `k` is
//! the image of `x^k`.

use nalgebra::{DMatrix, DVector};

use crate::error::{QesError, Result};

/// Imaginary parts below this are treated as real eigenvalues.
pub const IMAG_TOL: f64 = 1e-9;

/// Polynomial degree cutoff `n`; the representation has dimension `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RepDimension(pub usize);

impl RepDimension {
    pub fn degree(self) -> usize {
        self.0
    }

    pub fn size(self) -> usize {
        self.0 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `J+ = x^2 d/dx - n x`
    Raising,
    /// `J0 = x d/dx - n/2`
    Neutral,
    /// `J- = d/dx`
    Lowering,
}

/// Square real matrix in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator(pub DMatrix<f64>);

impl DenseOperator {
    pub fn zeros(size: usize) -> Self {
        Self(DMatrix::zeros(size, size))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.0 * DVector::from_column_slice(v))
            .as_slice()
            .to_vec()
    }

    pub fn compose(&self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 * &rhs.0)
    }

    pub fn scaled(&self, k: f64) -> DenseOperator {
        DenseOperator(&self.0 * k)
    }

    pub fn plus(&self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 + &rhs.0)
    }

    pub fn minus(&self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator(&self.0 - &rhs.0)
    }

    pub fn commutator(&self, rhs: &DenseOperator) -> DenseOperator {
        self.compose(rhs).minus(&rhs.compose(self))
    }

    fn inf_norm(&self) -> f64 {
        self.0
            .row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Matrix of `J+`, `J0` or `J-` acting on `P_{n+1} = <1, x, ..., x^n>`.
pub fn generator_matrix(kind: Generator, dim: RepDimension) -> DenseOperator {
    let n = dim.degree();
    let mut m = DenseOperator::zeros(dim.size());
    for k in 0..=n {
        match kind {
            Generator::Raising => {
                if k < n {
                    m.0[(k + 1, k)] = k as f64 - n as f64;
                }
            }
            Generator::Neutral => m.0[(k, k)] = k as f64 - n as f64 / 2.0,
            Generator::Lowering => {
                if k > 0 {
                    m.0[(k - 1, k)] = k as f64;
                }
            }
        }
    }
    m
}

/// `h = -J-J- - 2J+ - 4a J0 - 2b J- - 2(n+1)a - b^2`.
///
/// With `s = 4a`, `r = 4a^2 + 2b`, `q = 4ab + 2n + 2` this is the operator
/// `-d^2 - 2(x^2 + 2ax + b) d + (q - 4ab - 2)x - b^2 - 2a` restricted to
/// polynomials of degree `<= n`.
pub fn quartic_gauge_operator(a: f64, b: f64, dim: RepDimension) -> DenseOperator {
    let jp = generator_matrix(Generator::Raising, dim);
    let j0 = generator_matrix(Generator::Neutral, dim);
    let jm = generator_matrix(Generator::Lowering, dim);
    let shift = -2.0 * (dim.degree() as f64 + 1.0) * a - b * b;
    let mut h = jm
        .compose(&jm)
        .scaled(-1.0)
        .minus(&jp.scaled(2.0))
        .minus(&j0.scaled(4.0 * a))
        .minus(&jm.scaled(2.0 * b));
    for k in 0..dim.size() {
        h.0[(k, k)] += shift;
    }
    h
}

/// A real eigenpair. The eigenvector is scaled so that its largest-magnitude
/// component is `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub eigenvalue: f64,
    pub eigenvector: Vec<f64>,
    /// Set when the eigenvalue is a numerically merged double root with a
    /// single eigenvector (Jordan block).
    pub defective: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Real eigenpairs, ascending.
    pub pairs: Vec<EigenPair>,
    /// Number of eigenvalues with `|Im| >= IMAG_TOL` that were left out.
    pub complex_count: usize,
}

/// All real eigenpairs of a general (non-symmetric) real matrix.
///
/// Eigenvalues come from a real Schur decomposition; eigenvectors from
/// shifted inverse iteration. A near-real complex pair (or a near-equal real
/// pair) sharing one eigenvector is reported once with `defective = true`.
pub fn diagonalize(op: &DenseOperator) -> Result<Spectrum> {
    let size = op.size();
    if size == 0 {
        return Ok(Spectrum {
            pairs: Vec::new(),
            complex_count: 0,
        });
    }
    let scale = op.inf_norm().max(1.0);
    let schur = nalgebra::linalg::Schur::try_new(op.0.clone(), f64::EPSILON, 10_000 * size)
        .ok_or_else(|| QesError::NoConvergence { matrix: op.clone() })?;
    let eigs = schur.complex_eigenvalues();

    let mut candidates: Vec<(f64, bool)> = Vec::new();
    let mut complex_count = 0;
    for z in eigs.iter() {
        if z.im.abs() < IMAG_TOL {
            candidates.push((z.re, false));
        } else if z.im.abs() < 1e-6 * scale && is_singular_at(op, z.re, scale) {
            // One member of a split Jordan pair; keep the upper one only.
            if z.im > 0.0 {
                candidates.push((z.re, true));
            }
        } else {
            complex_count += 1;
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut pairs: Vec<EigenPair> = Vec::with_capacity(candidates.len());
    for (lambda, defective) in candidates {
        let v = inverse_iteration(op, lambda, scale)
            .ok_or_else(|| QesError::NoConvergence { matrix: op.clone() })?;
        if let Some(last) = pairs.last_mut() {
            let close = (lambda - last.eigenvalue).abs() < 1e-6 * scale;
            if close && parallel(&last.eigenvector, &v) {
                last.eigenvalue = 0.5 * (last.eigenvalue + lambda);
                last.defective = true;
                continue;
            }
        }
        pairs.push(EigenPair {
            eigenvalue: lambda,
            eigenvector: v,
            defective,
        });
    }
    // Inverse iteration is only sqrt(eps)-accurate on a Jordan block; the
    // null vector of the shifted matrix is not.
    for pair in pairs.iter_mut().filter(|p| p.defective) {
        if let Some(v) = null_vector(op, pair.eigenvalue) {
            pair.eigenvector = v;
        }
    }
    Ok(Spectrum {
        pairs,
        complex_count,
    })
}

fn null_vector(op: &DenseOperator, lambda: f64) -> Option<Vec<f64>> {
    let size = op.size();
    let svd = (&op.0 - DMatrix::identity(size, size) * lambda).svd(false, true);
    let v_t = svd.v_t.as_ref()?;
    let k = svd.singular_values.argmin().0;
    let v: Vec<f64> = v_t.row(k).iter().copied().collect();
    v.iter().all(|x| x.is_finite()).then(|| normalize_inf(&v))
}

fn is_singular_at(op: &DenseOperator, lambda: f64, scale: f64) -> bool {
    let shifted = &op.0 - DMatrix::identity(op.size(), op.size()) * lambda;
    let sv = shifted.singular_values();
    sv.iter().copied().fold(f64::INFINITY, f64::min) <= 1e-9 * scale
}

fn parallel(u: &[f64], v: &[f64]) -> bool {
    let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
    let nu: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot.abs() / (nu * nv)) > 1.0 - 1e-8
}

fn inverse_iteration(op: &DenseOperator, lambda: f64, scale: f64) -> Option<Vec<f64>> {
    let size = op.size();
    // An exactly singular shifted matrix can leave a zero pivot; back off.
    for offset in [1e-10, 1e-8, 1e-6] {
        let mu = lambda + offset * scale;
        let lu = (&op.0 - DMatrix::identity(size, size) * mu).lu();
        let mut v = DVector::from_fn(size, |i, _| 1.0 / (i as f64 + 1.0));
        let mut ok = true;
        for _ in 0..4 {
            let Some(mut w) = lu.solve(&v) else {
                ok = false;
                break;
            };
            let m = w.amax();
            if !m.is_finite() || m == 0.0 {
                ok = false;
                break;
            }
            w /= m;
            v = w;
        }
        if ok {
            return Some(normalize_inf(v.as_slice()));
        }
    }
    None
}

/// Scale so the largest-magnitude component equals `+1`.
fn normalize_inf(v: &[f64]) -> Vec<f64> {
    let (mut best, mut idx) = (0.0, 0);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    let pivot = v[idx];
    v.iter().map(|x| x / pivot).collect()
}
