//! Dense Gaussian elimination over an exact field.

use super::poly::Field;

/// Row-reduces `rows` in place and returns the rank.
pub fn row_reduce<C: Field>(rows: &mut [Vec<C>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv();
        for x in rows[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank<C: Field>(rows: &[Vec<C>]) -> usize {
    row_reduce(&mut rows.to_vec())
}

pub fn determinant<C: Field>(rows: &[Vec<C>]) -> C {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = C::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return C::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = det.neg();
        }
        det = det.mul(&a[col][col]);
        let inv = a[col][col].inv();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].mul(&inv);
            for c in col..n {
                let delta = a[col][c].mul(&factor);
                a[r][c] = a[r][c].sub(&delta);
            }
        }
    }
    det
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse<C: Field>(rows: &[Vec<C>]) -> Option<Vec<Vec<C>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<C>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            row
        })
        .collect();
    row_reduce(&mut aug);
    for (i, row) in aug.iter().enumerate() {
        if !row[i].is_one() {
            return None;
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, Rational};

    fn m(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&a), int(1));
        assert_eq!(inverse(&a).unwrap(), m(&[&[1, -1], &[-1, 2]]));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&s), int(0));
        assert!(inverse(&s).is_none());
        assert_eq!(rank(&s), 1);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), int(-1));
    }
}
