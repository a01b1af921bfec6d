//! Small exact linear-algebra kernel over the rationals (row reduction).

use num_traits::Zero;

use crate::scalar::Scalar;

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    /// Consistent, with a solution space of the given dimension.
    Underdetermined { free: usize },
    Inconsistent,
}

/// Reduces `rows` in place to reduced row-echelon form; returns the pivot columns.
pub fn row_reduce(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for k in c..ncols {
                    let delta = &factor * &rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Solution {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent;
    }
    if pivots.len() < n {
        return Solution::Underdetermined { free: n - pivots.len() };
    }
    Solution::Unique(aug.iter().take(n).map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&m(&[])), 0);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
    }

    #[test]
    fn solve_cases() {
        let a = m(&[&[2, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[int(3), int(0)]), Solution::Unique(vec![int(1), int(1)]));
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &[int(1), int(3)]), Solution::Inconsistent);
        assert_eq!(solve(&a, &[int(1), int(2)]), Solution::Underdetermined { free: 1 });
    }
}
