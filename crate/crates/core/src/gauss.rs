//! Exact dense linear algebra over a field: Gaussian elimination for
//! (possibly overdetermined) systems with consistency checking.

use crate::field::Field;
use crate::error::Error;
use crate::Result;

/// Solve `A x = b` exactly. Rows may exceed columns; the system must be
/// consistent and of full column rank, otherwise an error naming the
/// offending row/minor is returned.
pub fn solve<K: Field>(a: &[Vec<K>], b: &[K]) -> Result<Vec<K>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "matrix/vector size mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<K>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_rows = Vec::with_capacity(cols);
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            return Err(Error::SingularSystem(format!(
                "no pivot in column {col}"
            )));
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for j in col..=cols {
            m[row][j] = m[row][j].clone() * inv.clone();
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=cols {
                    m[r][j] = m[r][j].clone() - f.clone() * m[row][j].clone();
                }
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Remaining rows must have vanished entirely.
    for r in row..rows {
        if !m[r][cols].is_zero() {
            return Err(Error::SingularSystem(format!(
                "inconsistent row {r}"
            )));
        }
    }
    Ok((0..cols).map(|c| m[pivot_rows[c]][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn solves_overdetermined_consistent_system() {
        // x + y = 3, x - y = 1, 2x = 4
        let a = vec![
            vec![Scalar::int(1), Scalar::int(1)],
            vec![Scalar::int(1), Scalar::int(-1)],
            vec![Scalar::int(2), Scalar::int(0)],
        ];
        let b = vec![Scalar::int(3), Scalar::int(1), Scalar::int(4)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![Scalar::int(2), Scalar::int(1)]);
    }

    #[test]
    fn rejects_inconsistent_system() {
        let a = vec![vec![Scalar::int(1)], vec![Scalar::int(1)]];
        let b = vec![Scalar::int(1), Scalar::int(2)];
        assert!(matches!(solve(&a, &b), Err(Error::SingularSystem(_))));
    }
}
