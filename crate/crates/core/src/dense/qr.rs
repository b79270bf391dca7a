use super::matrix::{axpy, dot, norm2};
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Thin Householder QR of a tall matrix.
///
/// Returns `Q` (`m × n`, orthonormal columns) and `R` (`n × n`, upper
/// triangular) with `Q R = M`. Signs are fixed so `diag(R) ≥ 0`, which makes
/// the factorization unique for full-rank input. Rank-deficient input still
/// yields an orthonormal `Q`, since it is a product of reflectors.
pub fn thin_qr(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (rows, cols) = m.dims();
    if rows < cols {
        return Err(Error::WideMatrix {
            op: "thin_qr",
            rows,
            cols,
        });
    }

    let mut work = m.clone();
    // reflector k acts on rows k.. and is stored unnormalized with its tau
    let mut reflectors: Vec<(Vec<f64>, f64)> = Vec::with_capacity(cols);
    let mut r = DenseMatrix::zeros(cols, cols);

    for k in 0..cols {
        let x = &work.col(k)[k..];
        let alpha = norm2(x);
        if alpha == 0.0 {
            reflectors.push((Vec::new(), 0.0));
            for j in k..cols {
                r.set(k, j, work.get(k, j));
            }
            continue;
        }
        let beta = if x[0] >= 0.0 { -alpha } else { alpha };
        let mut v = x.to_vec();
        v[0] -= beta;
        let vtv = dot(&v, &v);
        let tau = 2.0 / vtv;

        work.set(k, k, beta);
        for i in k + 1..rows {
            work.set(i, k, 0.0);
        }
        for j in k + 1..cols {
            let col = &mut work.col_mut(j)[k..];
            let w = tau * dot(&v, col);
            axpy(-w, &v, col);
        }
        for j in k..cols {
            r.set(k, j, work.get(k, j));
        }
        reflectors.push((v, tau));
    }

    let mut q = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        q.set(j, j, 1.0);
    }
    for (k, (v, tau)) in reflectors.iter().enumerate().rev() {
        if *tau == 0.0 {
            continue;
        }
        for j in k..cols {
            let col = &mut q.col_mut(j)[k..];
            let w = tau * dot(v, col);
            axpy(-w, v, col);
        }
    }

    for k in 0..cols {
        if r.get(k, k) < 0.0 {
            for j in k..cols {
                r.set(k, j, -r.get(k, j));
            }
            for v in q.col_mut(k) {
                *v = -*v;
            }
        }
    }
    Ok((q, r))
}
