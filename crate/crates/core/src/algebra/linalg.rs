//! Small dense exact linear algebra over ℚ, plus permutation-sum
//! determinants for matrices over any commutative ring.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Determinant by Gaussian elimination with exact pivoting.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Exact inverse, or `None` for a singular matrix.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let identity: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    solve_many(m, &identity)
}

/// Solves `m · X = rhs` column by column (Gauss–Jordan). `None` if singular.
pub fn solve_many(m: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let width = rhs.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Rational>> =
        m.iter().zip(rhs).map(|(row, r)| row.iter().chain(r.iter()).cloned().collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let inv = a[col][col].recip();
        for c in col..n + width {
            a[col][c] *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n + width {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// All permutations of `0..n` in lexicographic order, with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn determinant_matches_permutation_sum() {
        let a = m(&[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        let by_perm: Rational = permutations(3)
            .into_iter()
            .map(|(p, s)| {
                let prod: Rational = (0..3).map(|i| a[i][p[i]].clone()).product();
                prod * int(s as i64)
            })
            .sum();
        assert_eq!(determinant(&a), by_perm);
        assert_eq!(determinant(&m(&[&[1, 1], &[1, -1]])), int(-2));
        assert_eq!(determinant(&m(&[&[1, 0], &[1, 0]])), int(0));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = vec![vec![int(1), frac(1, 2)], vec![int(3), int(-1)]];
        let inv = inverse(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let v: Rational = (0..2).map(|k| &a[i][k] * &inv[k][j]).sum();
                assert_eq!(v, if i == j { int(1) } else { int(0) });
            }
        }
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], (vec![0, 1, 2], 1));
        assert_eq!(p[1], (vec![0, 2, 1], -1));
        assert_eq!(p.iter().map(|(_, s)| s).sum::<i32>(), 0);
    }
}
