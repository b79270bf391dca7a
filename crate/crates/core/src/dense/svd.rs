use super::matrix::{dot, norm2};
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Sweep limit for one-sided Jacobi.
pub const MAX_SWEEPS: usize = 60;

/// Singular values below `PINV_RANK_TOL * σ_max` are treated as zero by [`pseudoinverse`].
pub const PINV_RANK_TOL: f64 = 1e-12;

/// Thin SVD `M = U diag(σ) Vᵀ` with `k = min(rows, cols)` triplets,
/// singular values sorted non-increasing.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows × k`, orthonormal columns.
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    /// `cols × k`, orthonormal columns.
    pub v: DenseMatrix,
}

/// Ordered singular values of a matrix, together with its dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    source_dims: (usize, usize),
}

impl SingularSpectrum {
    /// Validates that values are finite, non-negative, non-increasing and at
    /// most `min(rows, cols)` long.
    pub fn new(values: Vec<f64>, source_dims: (usize, usize)) -> Result<Self> {
        let (rows, cols) = source_dims;
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimensions { rows, cols });
        }
        if values.len() > rows.min(cols) {
            return Err(Error::InvalidSpectrum(format!(
                "{} values exceed min dimension {}",
                values.len(),
                rows.min(cols)
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "value {v} is not a finite non-negative number"
            )));
        }
        if let Some(w) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "values not non-increasing at index {w}"
            )));
        }
        Ok(Self {
            values,
            source_dims,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    pub fn min_dim(&self) -> usize {
        self.source_dims.0.min(self.source_dims.1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of squared singular values, i.e. `‖M‖_F²`.
    pub fn total_energy(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi.
///
/// Column pairs are rotated until every pair is orthogonal to a relative
/// tolerance of `max(1e-15, sqrt(rows) · ε_mach)`. Wide matrices are handled
/// through their transpose.
pub fn svd(m: &DenseMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let Svd { u, sigma, v } = svd_tall(&m.transpose())?;
        return Ok(Svd { u: v, sigma, v: u });
    }
    svd_tall(m)
}

fn svd_tall(m: &DenseMatrix) -> Result<Svd> {
    let (rows, cols) = m.dims();
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(cols);
    let tol = 1e-15f64.max((rows as f64).sqrt() * f64::EPSILON);

    let mut converged = cols == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in p + 1..cols {
                if rotate_pair(&mut a, &mut v, p, q, tol) {
                    rotated = true;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = (0..cols).map(|j| norm2(a.col(j))).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    // stable sort keeps index order on ties
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u = DenseMatrix::zeros(rows, cols);
    let mut vs = DenseMatrix::zeros(cols, cols);
    let mut missing = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        vs.col_mut(k).copy_from_slice(v.col(j));
        let s = norms[j];
        if s > 0.0 {
            for (dst, src) in u.col_mut(k).iter_mut().zip(a.col(j)) {
                *dst = src / s;
            }
        } else {
            missing.push(k);
        }
    }
    if !missing.is_empty() {
        complete_orthonormal(&mut u, &missing);
    }
    Ok(Svd { u, sigma, v: vs })
}

/// Applies one Jacobi rotation to columns `p`, `q`. Returns whether it rotated.
fn rotate_pair(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, tol: f64) -> bool {
    let alpha = dot(a.col(p), a.col(p));
    let beta = dot(a.col(q), a.col(q));
    let gamma = dot(a.col(p), a.col(q));
    if gamma.abs() <= tol * (alpha * beta).sqrt() || gamma.abs() < f64::MIN_POSITIVE {
        return false;
    }
    let zeta = (beta - alpha) / (2.0 * gamma);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    rotate_columns(a, p, q, c, s);
    rotate_columns(v, p, q, c, s);
    true
}

fn rotate_columns(m: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let (xp, xq) = m.column_pair_mut(p, q);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (yp, yq) = (*a, *b);
        *a = c * yp - s * yq;
        *b = s * yp + c * yq;
    }
}

/// Fills the listed columns of `u` with unit vectors orthogonal to all other
/// columns, trying standard basis vectors in order.
fn complete_orthonormal(u: &mut DenseMatrix, missing: &[usize]) {
    let rows = u.rows();
    let mut filled: Vec<usize> = (0..u.cols()).filter(|k| !missing.contains(k)).collect();
    let mut candidate = 0;
    for &k in missing {
        while candidate < rows {
            let mut x = vec![0.0; rows];
            x[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for &f in &filled {
                    let w = dot(u.col(f), &x);
                    for (xi, ui) in x.iter_mut().zip(u.col(f)) {
                        *xi -= w * ui;
                    }
                }
            }
            let n = norm2(&x);
            if n > 0.5 {
                for (dst, xi) in u.col_mut(k).iter_mut().zip(&x) {
                    *dst = xi / n;
                }
                filled.push(k);
                break;
            }
        }
    }
}

/// Full non-increasing spectrum of `m`, of length `min(rows, cols)`.
pub fn singular_values(m: &DenseMatrix) -> Result<SingularSpectrum> {
    let Svd { sigma, .. } = svd(m)?;
    Ok(SingularSpectrum {
        values: sigma,
        source_dims: m.dims(),
    })
}

/// Moore–Penrose pseudoinverse through the SVD; singular values below
/// `1e-12 · σ_max` are dropped.
pub fn pseudoinverse(m: &DenseMatrix) -> Result<DenseMatrix> {
    let Svd { u, sigma, v } = svd(m)?;
    let (rows, cols) = m.dims();
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cutoff = PINV_RANK_TOL * smax;
    let mut out = DenseMatrix::zeros(cols, rows);
    for (k, &s) in sigma.iter().enumerate() {
        if s == 0.0 || s < cutoff {
            continue;
        }
        let inv = 1.0 / s;
        // out += (v_k / s) u_kᵀ
        for j in 0..rows {
            let w = inv * u.get(j, k);
            if w == 0.0 {
                continue;
            }
            for (dst, vi) in out.col_mut(j).iter_mut().zip(v.col(k)) {
                *dst += w * vi;
            }
        }
    }
    Ok(out)
}
