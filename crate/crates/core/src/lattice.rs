//! Exact integer lattice routines: Hermite normal form, kernels, saturation,
//! unimodular completion and LLL reduction.

use crate::arith::BigRat;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix, row major.
pub type IMat = Vec<Vec<BigInt>>;

pub fn to_imat(rows: &[Vec<i64>]) -> IMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn transpose(m: &IMat, cols: usize) -> IMat {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row echelon form on the first `ncols` columns by unimodular row operations;
/// pivots are positive and entries above a pivot are reduced into `[0, pivot)`.
/// Returns the rank (pivot rows come first).
fn echelon(a: &mut IMat, ncols: usize) -> usize {
    let rows = a.len();
    let mut pr = 0;
    for c in 0..ncols {
        if pr == rows {
            break;
        }
        loop {
            // smallest nonzero entry in column c at or below pr
            let mut best: Option<usize> = None;
            for r in pr..rows {
                if !a[r][c].is_zero() && best.map(|b| a[r][c].abs() < a[b][c].abs()).unwrap_or(true) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap(pr, b);
            let mut done = true;
            for r in pr + 1..rows {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[pr][c]);
                let (head, tail) = a.split_at_mut(r);
                for (x, y) in tail[0].iter_mut().zip(head[pr].iter()) {
                    *x -= &q * y;
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr < rows && !a[pr][c].is_zero() {
            if a[pr][c].is_negative() {
                for x in a[pr].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..pr {
                let q = a[r][c].div_floor(&a[pr][c]);
                if !q.is_zero() {
                    let (head, tail) = a.split_at_mut(pr);
                    for (x, y) in head[r].iter_mut().zip(tail[0].iter()) {
                        *x -= &q * y;
                    }
                }
            }
            pr += 1;
        }
    }
    pr
}

/// Nonzero rows of the row Hermite normal form.
pub fn row_hnf(m: &IMat) -> IMat {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let r = echelon(&mut a, cols);
    a.truncate(r);
    a
}

pub fn rank(m: &IMat) -> usize {
    row_hnf(m).len()
}

/// Basis (in Hermite normal form) of `{v in Z^rows : v M = 0}`.
pub fn left_kernel(m: &IMat, cols: usize) -> IMat {
    let w = m.len();
    let mut a: IMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..w).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rk = echelon(&mut a, cols);
    let ker: IMat = a[rk..].iter().map(|r| r[cols..].to_vec()).collect();
    row_hnf(&ker)
}

/// The saturation `Z^dim  ∩  Q-span(rows)`, in Hermite normal form.
pub fn saturate(rows: &IMat, dim: usize) -> IMat {
    if rows.is_empty() {
        return Vec::new();
    }
    let rt = transpose(rows, dim);
    let n = left_kernel(&rt, rows.len());
    if n.is_empty() {
        return identity(dim);
    }
    let nt = transpose(&n, dim);
    left_kernel(&nt, n.len())
}

/// Determinant by fraction-free elimination.
pub fn det(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square integer matrix over `Q`.
pub fn inverse_rat(m: &IMat) -> Option<Vec<Vec<BigRat>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRat>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRat> = r.iter().map(|x| BigRat::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRat::one() } else { BigRat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (lo, hi) = if i < c { a.split_at_mut(c) } else { a.split_at_mut(i) };
                let (src, dst) = if i < c { (&hi[0], &mut lo[i]) } else { (&lo[c], &mut hi[0]) };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of a unimodular matrix.
pub fn inverse_unimodular(m: &IMat) -> Option<IMat> {
    let inv = inverse_rat(m)?;
    let mut out = Vec::new();
    for r in inv {
        let mut row = Vec::new();
        for x in r {
            if !x.is_integer() {
                return None;
            }
            row.push(x.to_integer());
        }
        out.push(row);
    }
    Some(out)
}

/// Rows `C` with `[B; C]` unimodular, for a saturated full-row-rank `B`.
///
/// Prefers unit vectors (lexicographically first index set whose
/// complementary minor of `B` is `±1`); falls back to a column Hermite
/// transform.
pub fn unimodular_complement(b: &IMat, dim: usize) -> IMat {
    let r = b.len();
    let s = dim - r;
    if s == 0 {
        return Vec::new();
    }
    if r == 0 {
        return identity(dim);
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        let comp: Vec<usize> = (0..dim).filter(|i| !idx.contains(i)).collect();
        let minor: IMat = b.iter().map(|row| comp.iter().map(|&j| row[j].clone()).collect()).collect();
        if det(&minor).abs().is_one() {
            return idx
                .iter()
                .map(|&i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect();
        }
        let mut j = s;
        loop {
            if j == 0 {
                return column_complement(b, dim);
            }
            j -= 1;
            if idx[j] < dim - s + j {
                idx[j] += 1;
                for l in j + 1..s {
                    idx[l] = idx[l - 1] + 1;
                }
                break;
            }
        }
    }
}

fn column_complement(b: &IMat, dim: usize) -> IMat {
    let r = b.len();
    // V B^T = [H; 0] with V unimodular, so B = [H^T 0] (V^T)^{-1}
    let bt = transpose(b, dim);
    let mut a: IMat = bt
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut x = row.clone();
            x.extend((0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            x
        })
        .collect();
    echelon(&mut a, r);
    let v: IMat = a.iter().map(|row| row[r..].to_vec()).collect();
    let vinv = inverse_unimodular(&v).expect("unimodular transform");
    let u_inv = transpose(&vinv, dim);
    u_inv[r..].to_vec()
}

fn dot(a: &[BigRat], b: &[BigRat]) -> BigRat {
    a.iter().zip(b.iter()).fold(BigRat::zero(), |acc, (x, y)| acc + x * y)
}

/// LLL reduction (`delta = 3/4`) of linearly independent integer rows.
pub fn lll(basis: &IMat) -> IMat {
    let n = basis.len();
    if n <= 1 {
        return basis.clone();
    }
    let mut b: IMat = basis.clone();
    let delta = BigRat::new(BigInt::from(3), BigInt::from(4));
    let to_rat = |v: &Vec<BigInt>| -> Vec<BigRat> { v.iter().map(|x| BigRat::from_integer(x.clone())).collect() };
    let gso = |b: &IMat| -> (Vec<Vec<BigRat>>, Vec<Vec<BigRat>>, Vec<BigRat>) {
        let mut bs: Vec<Vec<BigRat>> = Vec::new();
        let mut mu = vec![vec![BigRat::zero(); n]; n];
        let mut nb = Vec::new();
        for i in 0..n {
            let bi = to_rat(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                mu[i][j] = dot(&bi, &bs[j]) / &nb[j];
                for (x, y) in v.iter_mut().zip(bs[j].iter()) {
                    *x -= &mu[i][j] * y;
                }
            }
            nb.push(dot(&v, &v));
            bs.push(v);
        }
        (bs, mu, nb)
    };
    let (_, mut mu, mut nb) = gso(&b);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if !q.is_zero() {
                let qi = q.to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(bj.iter()) {
                    *x -= &qi * y;
                }
                for l in 0..=j {
                    let t = if l == j { BigRat::one() } else { mu[j][l].clone() };
                    mu[k][l] -= &q * t;
                }
            }
        }
        let lhs = &nb[k] + &mu[k][k - 1] * &mu[k][k - 1] * &nb[k - 1];
        if lhs >= &delta * &nb[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let r = gso(&b);
            mu = r.1;
            nb = r.2;
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    b
}

pub fn mat_mul(a: &IMat, b: &IMat, bcols: usize) -> IMat {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| row.iter().zip(b.iter()).fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}
