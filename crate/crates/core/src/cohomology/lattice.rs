//! Integer matrices and lattices with exact big-integer entries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major matrix.
pub type Matrix = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mul(a: &Matrix, b: &Matrix, inner: usize, bcols: usize) -> Matrix {
    let mut out = zeros(a.len(), bcols);
    for (i, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for j in 0..bcols {
                out[i][j] += &row[k] * &b[k][j];
            }
        }
    }
    out
}

pub fn sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn combine(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    // rows[target] -= q * rows[source]
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

/// Brings `rows` into row echelon form over `Z` using unimodular row
/// operations that only look at the first `width` columns (later columns
/// are carried along). Returns the pivot columns; rows past the last pivot
/// are zero in the first `width` columns.
fn echelon(rows: &mut [Vec<BigInt>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[r][c]);
                    combine(rows, i, r, &q);
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if !q.is_zero() {
                    combine(rows, i, r, &q);
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Hermite basis of the lattice spanned by the given vectors.
pub fn row_basis(vectors: &[Vec<BigInt>], dim: usize) -> Matrix {
    let mut rows = vectors.to_vec();
    let rank = echelon(&mut rows, dim).len();
    rows.truncate(rank);
    rows
}

/// Basis of `{x in Z^n : F x = 0}` for the `m x n` matrix `F`.
pub fn kernel(f: &Matrix, n: usize) -> Matrix {
    let m = f.len();
    let mut rows: Matrix = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = f.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = echelon(&mut rows, m).len();
    let ker: Vec<Vec<BigInt>> = rows[rank..].iter().map(|r| r[m..].to_vec()).collect();
    row_basis(&ker, n)
}

/// Integer coordinates of `v` in an echelon basis, if `v` lies in the lattice.
pub fn coordinates(basis: &Matrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut v = v.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for row in basis {
        let p = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = v[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &q * y;
        }
        out.push(q);
    }
    v.iter().all(|x| x.is_zero()).then_some(out)
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of the Smith normal form.
pub fn smith_invariants(m: &Matrix, ncols: usize) -> Vec<BigInt> {
    let mut a = m.clone();
    let nrows = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let pos = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()));
        let Some((pi, pj)) = pos else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nrows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    combine(&mut a, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..ncols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut() {
                        let s = row[t].clone();
                        row[j] -= &q * s;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                // the pivot must divide the rest of the block
                let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
                match bad {
                    Some(i) => {
                        let src = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&src) {
                            *x += y;
                        }
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let pos = (t..nrows)
                .map(|i| (i, t))
                .chain((t..ncols).map(|j| (t, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
                .expect("pivot row is nonzero");
            a.swap(t, pos.0);
            for row in a.iter_mut() {
                row.swap(t, pos.1);
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
