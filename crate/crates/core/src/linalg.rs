//! Exact linear algebra over the rationals and the integers.
//!
//! Matrices are plain `Vec` of rows. Everything here is small (rank <= 4 in
//! practice) so the algorithms favour clarity over asymptotics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_q(v: &[i64]) -> QVec {
    v.iter().map(|&x| q(x)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn mat_vec(m: &[QVec], v: &[Q]) -> QVec {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Integer vector if every entry is integral.
pub fn to_int(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
        .collect()
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Q]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Parse `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parse a comma separated rational vector such as `"1/2,0"`.
pub fn parse_qvec(s: &str) -> Result<QVec> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_qvec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

/// Reduce `rows` in place to reduced row echelon form and return the pivot
/// columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<QVec>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Canonical basis (RREF rows) of the span of `vectors`.
pub fn span_basis(vectors: &[QVec]) -> Vec<QVec> {
    let mut rows = vectors.to_vec();
    rref(&mut rows);
    rows
}

pub fn rank(vectors: &[QVec]) -> usize {
    span_basis(vectors).len()
}

pub fn in_span(basis: &[QVec], v: &[Q]) -> bool {
    let mut rows = basis.to_vec();
    let r = rank(&rows);
    rows.push(v.to_vec());
    rank(&rows) == r
}

/// One solution of `a x = b` (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve(a: &[QVec], b: &[Q], ncols: usize) -> Option<QVec> {
    let mut aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &c) in aug.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &[QVec], ncols: usize) -> Vec<QVec> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(ncols);
            v[f] = Q::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &[QVec]) -> Option<Vec<QVec>> {
    let n = m.len();
    let mut aug: Vec<QVec> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &[QVec]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| if g.is_zero() { 0 } else { (x / &g).to_i64().expect("coordinate overflow") })
        .collect()
}

/// Primitive direction normalised so that the first nonzero entry is positive.
pub fn line_direction(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return v.to_vec();
    }
    let sign = v.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    v.iter().map(|x| sign * x / g).collect()
}

/// Basis of the integer kernel `{x in Z^n : a x = 0}` by unimodular column
/// reduction.
pub fn int_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let m = a.len();
    let mut mat: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    // u is stored by columns: u[j] is column j.
    let mut col = 0;
    for row in 0..m {
        if col == n {
            break;
        }
        loop {
            let best = (col..n).filter(|&j| mat[row][j] != 0).min_by_key(|&j| mat[row][j].abs());
            let Some(best) = best else { break };
            swap_cols(&mut mat, &mut u, col, best);
            let mut done = true;
            for j in col + 1..n {
                if mat[row][j] != 0 {
                    let f = mat[row][j].div_euclid(mat[row][col]);
                    sub_col(&mut mat, &mut u, j, col, f);
                    if mat[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    (col..n)
        .map(|j| u[j].iter().map(|&x| i64::try_from(x).expect("kernel overflow")).collect())
        .collect()
}

fn swap_cols(mat: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in mat.iter_mut() {
        row.swap(a, b);
    }
    u.swap(a, b);
}

fn sub_col(mat: &mut [Vec<i128>], u: &mut [Vec<i128>], target: usize, src: usize, f: i128) {
    for row in mat.iter_mut() {
        row[target] -= f * row[src];
    }
    let s = u[src].clone();
    for (t, x) in u[target].iter_mut().zip(s) {
        *t -= f * x;
    }
}

/// Hermite basis of the full-rank lattice generated by `gens` in `Z^n`.
///
/// Returns vectors `b_0..b_{n-1}` with `b_j[i] = 0` for `i < j`, `b_j[j] > 0`
/// and `0 <= b_i[j] < b_j[j]` for `i < j`, which makes the basis unique.
pub fn hermite_basis(gens: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let mut rows: Vec<Vec<i128>> = gens.iter().map(|g| g.iter().map(|&x| x as i128).collect()).collect();
    let mut basis: Vec<Vec<i128>> = Vec::with_capacity(n);
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pivot = rows[p].clone();
            for &i in &nz {
                if i != p {
                    let f = rows[i][c].div_euclid(pivot[c]);
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        let Some(p) = (0..rows.len()).find(|&i| rows[i][c] != 0) else {
            return Err(Error::InvalidLattice("period generators are not of full rank".into()));
        };
        let mut b = rows.swap_remove(p);
        if b[c] < 0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        basis.push(b);
    }
    for j in 0..n {
        for i in 0..j {
            let f = basis[i][j].div_euclid(basis[j][j]);
            if f != 0 {
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(&bj) {
                    *x -= f * y;
                }
            }
        }
    }
    Ok(basis
        .into_iter()
        .map(|b| b.into_iter().map(|x| i64::try_from(x).expect("lattice overflow")).collect())
        .collect())
}

/// Canonical representative of `x` modulo a Hermite basis.
pub fn reduce_mod_hermite(x: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    let mut y = x.to_vec();
    for (j, b) in basis.iter().enumerate() {
        let f = y[j].div_euclid(b[j]);
        if f != 0 {
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi -= f * bi;
            }
        }
    }
    y
}

pub fn floor_q(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("overflow")
}

pub fn ceil_q(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("overflow")
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_solve() {
        let a = vec![to_q(&[1, 2]), to_q(&[2, 4])];
        assert_eq!(rank(&a), 1);
        assert!(solve(&a, &[q(1), q(3)], 2).is_none());
        let x = solve(&a, &[q(1), q(2)], 2).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let a = vec![to_q(&[1, 1, 0])];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot(&a[0], &v).is_zero());
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![q(2), q(-1)], vec![q(-1), q(2)]];
        assert_eq!(determinant(&m), q(3));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][0], qf(2, 3));
        assert_eq!(inv[0][1], qf(1, 3));
        assert!(inverse(&[to_q(&[1, 2]), to_q(&[2, 4])]).is_none());
    }

    #[test]
    fn integer_kernel() {
        let k = int_kernel(&[vec![2, 4]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(line_direction(&k[0]), vec![2, -1]);
        let k = int_kernel(&[], 2);
        assert_eq!(k.len(), 2);
        let k = int_kernel(&[vec![1, 0], vec![0, 3]], 2);
        assert!(k.is_empty());
    }

    #[test]
    fn hermite_of_parity_lattice() {
        // {(a,b) : a = b mod 2}
        let b = hermite_basis(&[vec![2, 0], vec![0, 2], vec![1, 1]], 2).unwrap();
        assert_eq!(b, vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(reduce_mod_hermite(&[5, 2], &b), vec![0, 1]);
        assert_eq!(reduce_mod_hermite(&[4, 2], &b), vec![0, 0]);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_q("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(parse_qvec("1/2, 0").unwrap(), vec![qf(1, 2), q(0)]);
        assert!(parse_q("1/0").is_err());
        assert_eq!(fmt_q(&qf(4, 2)), "2");
        assert_eq!(fmt_q(&qf(-1, 3)), "-1/3");
    }
}
