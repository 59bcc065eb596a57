//! Smith normal form over the integers by exact row/column reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `left * a * right = d`, with `d` diagonal.
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    determinant(a).abs().is_one()
}

/// Computes the Smith normal form of an `m x n` matrix given as rows.
pub fn smith_normal_form(a: &IntMatrix, ncols: usize) -> SmithForm {
    let m = a.len();
    let n = ncols;
    let mut d = a.clone();
    let mut left = identity(m);
    let mut right = identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero()
                        && pivot.is_none_or(|(pi, pj)| x.abs() < d[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(left, right, d, t);
            };
            d.swap(t, pi);
            left.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in right.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..m {
                let q = &d[i][t] / &d[t][t];
                if !q.is_zero() {
                    sub_row(&mut d, i, t, &q);
                    sub_row(&mut left, i, t, &q);
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = &d[t][j] / &d[t][t];
                if !q.is_zero() {
                    sub_col(&mut d, j, t, &q);
                    sub_col(&mut right, j, t, &q);
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i);
                    add_row(&mut left, t, i);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in left[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(left, right, d, m.min(n))
}

fn finish(left: IntMatrix, right: IntMatrix, d: IntMatrix, upto: usize) -> SmithForm {
    let divisors = (0..upto)
        .map(|i| d[i][i].clone())
        .take_while(|x| !x.is_zero())
        .collect();
    SmithForm {
        left,
        right,
        d,
        divisors,
    }
}

fn sub_row(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    let src_row = m[src].clone();
    for (x, s) in m[target].iter_mut().zip(src_row) {
        *x -= q * s;
    }
}

fn add_row(m: &mut IntMatrix, target: usize, src: usize) {
    let src_row = m[src].clone();
    for (x, s) in m[target].iter_mut().zip(src_row) {
        *x += s;
    }
}

fn sub_col(m: &mut IntMatrix, target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * s;
    }
}

/// Exact check of `left * a * right = d` with both transforms unimodular
/// and `d` diagonal with the divisibility chain.
pub fn verify(a: &IntMatrix, ncols: usize, f: &SmithForm) -> bool {
    let m = a.len();
    let lad = mul(&mul(&f.left, a, m, ncols), &f.right, ncols, ncols);
    if lad != f.d {
        return false;
    }
    for (i, row) in f.d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return false;
            }
        }
    }
    let chain = f.divisors.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
    chain && f.divisors.iter().all(|x| x.is_positive()) && is_unimodular(&f.left) && is_unimodular(&f.right)
}
