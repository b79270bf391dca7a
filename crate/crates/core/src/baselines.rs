//! Deterministic rank-`r` approximations used as reference points.

use crate::dense::{svd, DenseMatrix, Svd};
use crate::error::{Error, Result};
use crate::rangefinder::{FactoredApproximation, Method};

fn check_rank(f: &DenseMatrix, r: usize) -> Result<()> {
    if r == 0 || r > f.min_dim() {
        Err(Error::RankOutOfRange {
            rank: r,
            max: f.min_dim(),
        })
    } else {
        Ok(())
    }
}

/// Best rank-`r` approximation: `H = U_r`, `T = Σ_r V_rᵀ`.
pub fn truncated_svd(f: &DenseMatrix, r: usize) -> Result<FactoredApproximation> {
    check_rank(f, r)?;
    let Svd { u, sigma, v } = svd(f)?;
    let h = u.columns(0, r)?;
    let t = DenseMatrix::from_fn(r, f.cols(), |i, j| sigma[i] * v.get(j, i));
    FactoredApproximation::new(h, t, r, 0, None, Method::TruncatedSvd)
}

/// Greedy pivoted column selection.
///
/// Repeatedly takes the column with the largest residual norm (lowest index on
/// ties), normalizes it into the basis and projects it out of every column.
/// `T = Hᵀ F`.
pub fn column_select(f: &DenseMatrix, r: usize) -> Result<FactoredApproximation> {
    check_rank(f, r)?;
    let (rows, cols) = f.dims();
    let mut residual = f.clone();
    let mut picked = vec![false; cols];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(r);

    for _ in 0..r {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..cols).filter(|&j| !picked[j]) {
            let n = residual.col(j).iter().map(|v| v * v).sum::<f64>();
            if best.is_none_or(|(_, b)| n > b) {
                best = Some((j, n));
            }
        }
        let Some((j, norm_sq)) = best else { break };
        picked[j] = true;
        if norm_sq == 0.0 {
            break;
        }
        let mut q = residual.col(j).to_vec();
        // second Gram-Schmidt pass keeps q orthogonal to earlier picks
        for b in &basis {
            let w: f64 = b.iter().zip(&q).map(|(x, y)| x * y).sum();
            q.iter_mut().zip(b).for_each(|(qi, bi)| *qi -= w * bi);
        }
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            break;
        }
        q.iter_mut().for_each(|v| *v /= n);
        for c in 0..cols {
            let col = residual.col_mut(c);
            let w: f64 = q.iter().zip(col.iter()).map(|(x, y)| x * y).sum();
            col.iter_mut().zip(&q).for_each(|(ci, qi)| *ci -= w * qi);
        }
        basis.push(q);
    }

    // rank ran out before r picks: pad with standard basis directions
    let mut e = 0;
    while basis.len() < r {
        let mut x = vec![0.0; rows];
        x[e] = 1.0;
        e += 1;
        for _ in 0..2 {
            for b in &basis {
                let w: f64 = b.iter().zip(&x).map(|(p, q)| p * q).sum();
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= w * bi);
            }
        }
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.5 {
            x.iter_mut().for_each(|v| *v /= n);
            basis.push(x);
        }
    }

    let h = DenseMatrix::from_col_major(rows, r, basis.concat())?;
    let t = h.t_matmul(f)?;
    FactoredApproximation::new(h, t, r, 0, None, Method::ColumnSelect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{gaussian_matrix, singular_values};
    use crate::planner::tail_energy;
    use crate::rangefinder::approximation_error;

    #[test]
    fn truncated_svd_on_diagonal() {
        let f = DenseMatrix::diag(&[3.0, 2.0, 1.0]).unwrap();
        let a = truncated_svd(&f, 2).unwrap();
        let e = approximation_error(&f, &a).unwrap();
        assert!((e * e - 1.0).abs() < 1e-14);
        assert_eq!(a.method(), Method::TruncatedSvd);
    }

    #[test]
    fn truncated_svd_full_rank_is_exact() {
        let f = gaussian_matrix(9, 6, 2);
        let a = truncated_svd(&f, 6).unwrap();
        assert!(approximation_error(&f, &a).unwrap() <= 1e-9 * f.frobenius_norm());
    }

    #[test]
    fn truncated_svd_hits_tail_energy() {
        let f = gaussian_matrix(20, 15, 8);
        let a = truncated_svd(&f, 5).unwrap();
        let e = approximation_error(&f, &a).unwrap();
        let tau = tail_energy(&singular_values(&f).unwrap(), 5);
        assert!((e * e - tau).abs() <= 1e-8 * tau);
    }

    #[test]
    fn column_select_on_diagonal() {
        let f = DenseMatrix::diag(&[3.0, 2.0, 1.0]).unwrap();
        let a = column_select(&f, 2).unwrap();
        // picks columns 0 and 1, i.e. e1 and e2
        assert_eq!(a.h().col(0), &[1.0, 0.0, 0.0]);
        assert_eq!(a.h().col(1), &[0.0, 1.0, 0.0]);
        let e = approximation_error(&f, &a).unwrap();
        assert!((e * e - 1.0).abs() < 1e-14);
    }

    #[test]
    fn column_select_rank_one_and_ties() {
        let u = gaussian_matrix(7, 1, 1);
        let v = gaussian_matrix(1, 5, 2);
        let f = u.matmul(&v).unwrap();
        let a = column_select(&f, 1).unwrap();
        assert!(approximation_error(&f, &a).unwrap() <= 1e-9 * f.frobenius_norm());

        // equal norms everywhere: lowest index wins
        let f = DenseMatrix::identity(4);
        let a = column_select(&f, 2).unwrap();
        assert_eq!(a.h().col(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(a.h().col(1), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn column_select_pads_when_rank_runs_out() {
        let u = gaussian_matrix(6, 1, 3);
        let f = u.matmul(&gaussian_matrix(1, 4, 4)).unwrap();
        let a = column_select(&f, 3).unwrap();
        assert_eq!(a.width(), 3);
        assert!(a.h().orthonormality_defect() < 1e-12);
        let z = column_select(&DenseMatrix::zeros(4, 3), 2).unwrap();
        assert!(z.h().orthonormality_defect() < 1e-12);
    }

    #[test]
    fn column_select_never_beats_svd() {
        for seed in 0..5 {
            let f = gaussian_matrix(12, 9, seed);
            for r in 1..=9 {
                let cs = approximation_error(&f, &column_select(&f, r).unwrap()).unwrap();
                let sv = approximation_error(&f, &truncated_svd(&f, r).unwrap()).unwrap();
                assert!(cs >= sv - 1e-10, "seed {seed} r {r}: {cs} < {sv}");
            }
        }
    }

    #[test]
    fn rank_checks() {
        let f = gaussian_matrix(4, 3, 1);
        assert!(truncated_svd(&f, 0).is_err());
        assert!(column_select(&f, 4).is_err());
    }

    #[test]
    fn deterministic() {
        let f = gaussian_matrix(10, 8, 5);
        assert_eq!(column_select(&f, 3).unwrap(), column_select(&f, 3).unwrap());
        assert_eq!(truncated_svd(&f, 3).unwrap(), truncated_svd(&f, 3).unwrap());
    }
}
