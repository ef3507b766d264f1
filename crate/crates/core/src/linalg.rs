//! Small dense exact linear algebra.

use crate::poly::MultiPoly;
use crate::rational::Rational;

pub type Mat = Vec<Vec<Rational>>;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
pub fn rref(rows: &mut Mat) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let d = &rows[r][k] * &f;
                    rows[i][k] = &rows[i][k] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{x : a x = 0}`, where `a` has `ncols` columns.
pub fn nullspace(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows: Mat = a.to_vec();
    let pivots = rref(&mut rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Rational::zero(); ncols];
        x[free] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -&rows[r][free];
        }
        out.push(x);
    }
    out
}

pub fn rank(mut rows: Mat) -> usize {
    rref(&mut rows).len()
}

/// Rank over the field of rational functions in the polynomial variables.
///
/// Fraction-free elimination: rows are combined as `p*row_j - a*row_i`, so
/// every entry stays a polynomial and zero tests are exact.
pub fn rank_poly(mut rows: Vec<Vec<MultiPoly>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Prefer the pivot with the fewest terms to limit growth.
        let Some(p) = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].num_terms())
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..nrows {
            if rows[i][c].is_zero() {
                continue;
            }
            let a = rows[i][c].clone();
            for k in c..ncols {
                rows[i][k] = &(&pivot * &rows[i][k]) - &(&a * &rows[r][k]);
            }
        }
        r += 1;
    }
    r
}

/// A solution of `a x = b`, if one exists.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][ncols].clone();
    }
    Some(x)
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &Mat) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for k in c..n {
                let d = &a[c][k] * &f;
                a[i][k] = &a[i][k] - &d;
            }
        }
    }
    det
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = Rational::zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            s = &s + &(&a[i][t] * &b[t][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarTable;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn rank_and_solve() {
        let m = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert_eq!(rank(m.clone()), 1);
        assert!(solve(&m, &[r(1), r(3)]).is_none());
        assert_eq!(solve(&m, &[r(1), r(2)]).unwrap(), vec![r(1), r(0)]);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = vec![vec![r(2), r(1)], vec![r(1), r(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(matmul(&m, &inv), identity(2));
        assert_eq!(determinant(&m), r(1));
        assert!(inverse(&vec![vec![r(1), r(1)], vec![r(1), r(1)]]).is_none());
    }

    #[test]
    fn generic_rank_over_function_field() {
        let t = VarTable::new(["b", "f"]).unwrap();
        let p = |s: &str| MultiPoly::parse(s, &t).unwrap();
        // [[b, f], [b^2, b*f]] has rank 1; [[b, 1], [1, f]] has rank 2.
        assert_eq!(
            rank_poly(vec![vec![p("b"), p("f")], vec![p("b^2"), p("b*f")]]),
            1
        );
        assert_eq!(
            rank_poly(vec![vec![p("b"), p("1")], vec![p("1"), p("f")]]),
            2
        );
    }
}
