//! Exact integer linear algebra: determinants, Hermite and Smith forms,
//! integer kernels. Everything is over `BigInt`; nothing here rounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn transpose(m: &[Vec<BigInt>]) -> IntMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bilinear form `xᵀ G y`.
pub fn bilinear(gram: &[Vec<BigInt>], x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() || gram[i][j].is_zero() {
                continue;
            }
            acc += xi * &gram[i][j] * yj;
        }
    }
    acc
}

/// `B · G · Bᵀ` for a basis given as rows.
pub fn congruence(basis: &[Vec<BigInt>], gram: &[Vec<BigInt>]) -> IntMatrix {
    basis
        .iter()
        .map(|x| basis.iter().map(|y| bilinear(gram, x, y)).collect())
        .collect()
}

pub fn is_square(m: &[Vec<BigInt>]) -> bool {
    m.iter().all(|row| row.len() == m.len())
}

pub fn is_symmetric(m: &[Vec<BigInt>]) -> bool {
    is_square(m) && (0..m.len()).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Extended gcd with nonnegative gcd: returns `(g, s, t)` with `s·a + t·b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Basis (as rows) of the integer kernel `{x ∈ ℤⁿ : A x = 0}`.
///
/// Column operations with a unimodular transform bring `A` to column echelon
/// form; the transform columns past the rank span the kernel. Since the
/// transform is unimodular the kernel basis is automatically saturated.
pub fn kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    // columns of the stacked matrix [A; I], stored column-major
    let m = a.len();
    let mut cols: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut c: Vec<BigInt> = a.iter().map(|row| row[j].clone()).collect();
            c.extend((0..ncols).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();

    let mut pivot = 0;
    for i in 0..m {
        if pivot == ncols {
            break;
        }
        for q in pivot + 1..ncols {
            if cols[q][i].is_zero() {
                continue;
            }
            let a_p = cols[pivot][i].clone();
            let b_q = cols[q][i].clone();
            let (g, s, t) = ext_gcd(&a_p, &b_q);
            let (u, w) = (-(&b_q / &g), &a_p / &g);
            let new_p: Vec<BigInt> = cols[pivot]
                .iter()
                .zip(&cols[q])
                .map(|(x, y)| &s * x + &t * y)
                .collect();
            let new_q: Vec<BigInt> = cols[pivot]
                .iter()
                .zip(&cols[q])
                .map(|(x, y)| &u * x + &w * y)
                .collect();
            cols[pivot] = new_p;
            cols[q] = new_q;
        }
        if !cols[pivot][i].is_zero() {
            pivot += 1;
        }
    }
    cols[pivot..].iter().map(|c| c[m..].to_vec()).collect()
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Zero rows are dropped, pivots are positive, and entries above a pivot are
/// reduced into `[0, pivot)`; the result depends only on the row lattice.
pub fn row_hnf(m: &[Vec<BigInt>]) -> IntMatrix {
    let mut rows: IntMatrix = m.to_vec();
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // gcd-combine everything below into row r
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let a = rows[r][c].clone();
            let b = rows[i][c].clone();
            let (g, s, t) = ext_gcd(&a, &b);
            let (u, w) = (-(&b / &g), &a / &g);
            let new_r: Vec<BigInt> = rows[r].iter().zip(&rows[i]).map(|(x, y)| &s * x + &t * y).collect();
            let new_i: Vec<BigInt> = rows[r].iter().zip(&rows[i]).map(|(x, y)| &u * x + &w * y).collect();
            rows[r] = new_r;
            rows[i] = new_i;
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let p = rows[r][c].clone();
        for i in 0..r {
            let q = rows[i][c].div_floor(&p);
            if !q.is_zero() {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    row_hnf(m).len()
}

/// Nonzero invariant factors (Smith normal form diagonal), ascending by divisibility.
pub fn smith_invariants(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: IntMatrix = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&p);
                if !q.is_zero() {
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&p);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let y = row[t].clone();
                        row[j] -= &q * y;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the rest of the block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&p));
                match bad {
                    Some((i, _)) => {
                        let src = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&src) {
                            *x += y;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // bring the new smallest entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Solves the square system `A x = b` over ℚ. `None` when `A` is singular.
pub fn solve_rational(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.push(BigRational::from_integer(rhs.clone()));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&from_i64(&[&[-2, -1], &[-1, 2]])), BigInt::from(-5));
        assert_eq!(det(&from_i64(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det(&from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])), BigInt::from(-1));
        assert_eq!(det(&from_i64(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            det(&from_i64(&[&[2, 7, 1], &[3, -1, 4], &[0, 5, 6]])),
            BigInt::from(2 * (-6 - 20) - 7 * (18) + 15)
        );
    }

    #[test]
    fn kernel_of_row() {
        let k = kernel(&from_i64(&[&[2, 2, -2]]), 3);
        assert_eq!(k.len(), 2);
        assert_eq!(row_hnf(&k), from_i64(&[&[1, 0, 1], &[0, 1, 1]]));
        for v in &k {
            assert!(dot(&big(&[2, 2, -2]), v).is_zero());
        }
    }

    #[test]
    fn kernel_is_saturated() {
        // 6x + 10y + 15z = 0 has a saturated kernel of rank 2
        let k = kernel(&from_i64(&[&[6, 10, 15]]), 3);
        assert_eq!(k.len(), 2);
        assert_eq!(smith_invariants(&k), big(&[1, 1]));
    }

    #[test]
    fn hnf_canonical() {
        let a = from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let h = row_hnf(&a);
        let shuffled = row_hnf(&from_i64(&[&[10, -4, -16], &[2, 4, 4], &[-4, 10, 16]]));
        assert_eq!(h, shuffled);
        assert_eq!(smith_invariants(&a), big(&[2, 6, 12]));
    }

    #[test]
    fn rational_solve() {
        let a = from_i64(&[&[2, 1], &[1, 3]]);
        let x = solve_rational(&a, &big(&[3, 5])).unwrap();
        assert_eq!(x[0], BigRational::new(4.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(7.into(), 5.into()));
        assert!(solve_rational(&from_i64(&[&[1, 2], &[2, 4]]), &big(&[1, 1])).is_none());
    }
}
