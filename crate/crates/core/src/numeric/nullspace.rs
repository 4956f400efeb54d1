use super::matrix::Matrix;
use super::scalar::Scalar;

/// Relative pivot threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Rank and a basis of the right null space of `a`.
///
/// Gauss-Jordan elimination with full pivoting on primal values. Basis
/// vector `f` has a unit entry at the `f`-th free column and zeros at the
/// other free columns, so no orthogonalization is involved and dual parts
/// propagate through the elimination unchanged in structure.
pub fn null_space<S: Scalar>(a: &Matrix<S>) -> (usize, Vec<Vec<S>>) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w: Vec<Vec<S>> = (0..rows).map(|i| a.row(i)).collect();
    let mut perm: Vec<usize> = (0..cols).collect();
    let scale = a.as_slice().iter().fold(0.0_f64, |m, s| m.max(s.value().abs()));
    let threshold = RANK_TOL * scale;
    let mut rank = 0;
    while rank < rows.min(cols) {
        let mut best = (rank, rank, -1.0);
        for (i, row) in w.iter().enumerate().skip(rank) {
            for (j, v) in row.iter().enumerate().skip(rank) {
                let mag = v.value().abs();
                if mag > best.2 {
                    best = (i, j, mag);
                }
            }
        }
        if best.2 <= threshold || best.2 == 0.0 {
            break;
        }
        w.swap(rank, best.0);
        for row in w.iter_mut() {
            row.swap(rank, best.1);
        }
        perm.swap(rank, best.1);
        let p = w[rank][rank].clone();
        for v in w[rank].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = w[rank].clone();
        for (i, row) in w.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            let f = row[rank].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
        rank += 1;
    }
    let basis = (rank..cols)
        .map(|f| {
            let mut x = vec![S::zero(); cols];
            x[perm[f]] = S::one();
            for r in 0..rank {
                x[perm[r]] = -w[r][f].clone();
            }
            x
        })
        .collect();
    (rank, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Dual1;

    #[test]
    fn rank_and_kernel_of_rank_two_matrix() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![1.0, 0.0, 1.0]]).unwrap();
        let (rank, basis) = null_space(&a);
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 1);
        let r = a.mul_vec(&basis[0]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn coordinate_rows_give_coordinate_kernel() {
        let a = Matrix::from_rows(&[vec![0.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        let (rank, basis) = null_space(&a);
        assert_eq!(rank, 2);
        assert_eq!(basis, vec![vec![0.0, 1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]]);
    }

    #[test]
    fn dual_kernel_stays_in_kernel_to_first_order() {
        // a(t) = [1, t], kernel (-t, 1), derivative (-1, 0)
        let t = Dual1::variable(0.3, 0, 1);
        let a = Matrix::from_vec(1, 2, vec![Dual1::constant(1.0), t]).unwrap();
        let (_, basis) = null_space(&a);
        assert!((basis[0][0].value + 0.3).abs() < 1e-15);
        assert_eq!(basis[0][0].d(0), -1.0);
        assert_eq!(basis[0][1].d(0), 0.0);
    }
}
