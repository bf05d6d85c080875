//! Minimal exact linear algebra over the rationals, used for expressing
//! folded roots in the folded simple basis and for counting graded pieces.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::scalars::Rat;

/// Solves `M·x = rhs` for an `n × m` matrix given by columns, by Gaussian
/// elimination. Returns `None` when the system is inconsistent or the
/// solution is not unique.
pub(crate) fn solve_columns(columns: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let m = columns.len();
    let n = rhs.len();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = alloc::vec![None; m];
    let mut next_row = 0;
    for col in 0..m {
        let Some(p) = (next_row..n).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(next_row, p);
        let inv = aug[next_row][col].recip();
        for x in aug[next_row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != next_row && !aug[i][col].is_zero() {
                let factor = aug[i][col].clone();
                for j in 0..=m {
                    let delta = &factor * &aug[next_row][j];
                    aug[i][j] = &aug[i][j] - &delta;
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
    }
    // Inconsistent if any zero row has a nonzero tail.
    for row in aug.iter().skip(next_row) {
        if !row[m].is_zero() {
            return None;
        }
    }
    // Unique solution requires every column to carry a pivot.
    let mut x = alloc::vec![Rat::zero(); m];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        match pivot {
            Some(row) => x[col] = aug[*row][m].clone(),
            None => return None,
        }
    }
    Some(x)
}

/// Dimension of the kernel of the `rows × cols` matrix.
pub(crate) fn kernel_dim(rows: &[Vec<Rat>], cols: usize) -> usize {
    let mut mat: Vec<Vec<Rat>> = rows.to_vec();
    let n = mat.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..n).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = mat[rank][col].recip();
        for x in mat[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != rank && !mat[i][col].is_zero() {
                let factor = mat[i][col].clone();
                for j in 0..cols {
                    let delta = &factor * &mat[rank][j];
                    mat[i][j] = &mat[i][j] - &delta;
                }
            }
        }
        rank += 1;
    }
    cols - rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, rat_int};
    use alloc::vec;

    #[test]
    fn solves_a_consistent_overdetermined_system() {
        // Columns (1,0,1) and (0,1,1); rhs = 2·c₀ + 3·c₁.
        let cols = vec![
            vec![rat_int(1), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ];
        let rhs = vec![rat_int(2), rat_int(3), rat_int(5)];
        assert_eq!(solve_columns(&cols, &rhs), Some(vec![rat_int(2), rat_int(3)]));
    }

    #[test]
    fn rejects_inconsistent_rhs() {
        let cols = vec![vec![rat_int(1), rat_int(1)]];
        let rhs = vec![rat_int(1), rat_int(2)];
        assert_eq!(solve_columns(&cols, &rhs), None);
    }

    #[test]
    fn kernel_dimension_counts_free_columns() {
        // x + y = 0 has a one-dimensional kernel in two variables.
        let rows = vec![vec![rat_int(1), rat_int(1)]];
        assert_eq!(kernel_dim(&rows, 2), 1);
        let rows2 = vec![vec![rat(1, 2), rat_int(0)], vec![rat_int(0), rat_int(3)]];
        assert_eq!(kernel_dim(&rows2, 2), 0);
    }
}
