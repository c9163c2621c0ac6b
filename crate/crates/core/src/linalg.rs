//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{LabError, Result};
use crate::rational::Rational;

/// Scales every row by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    /// Original indices of the rows chosen as pivots; these rows form a basis of the row space.
    pub pivot_rows: Vec<usize>,
}

/// Fraction-free (Bareiss) elimination. Pivots are taken column by column from the lowest
/// original row index still available.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> RankResult {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut ids: Vec<usize> = (0..m.len()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| ids[i]);
        let Some(piv) = piv else { continue };
        m.swap(r, piv);
        ids.swap(r, piv);
        for i in r + 1..m.len() {
            for j in col + 1..cols {
                let num = &m[r][col] * &m[i][j] - &m[i][col] * &m[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    RankResult { rank: r, pivot_rows: ids[..r].to_vec() }
}

pub fn rational_rank(rows: &[Vec<Rational>]) -> RankResult {
    bareiss_rank(&integer_rows(rows))
}

/// Inverse of a square matrix by Gauss–Jordan elimination.
pub fn inverse(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let d = m.len();
    if m.iter().any(|r| r.len() != d) {
        return Err(LabError::invalid("matrix must be square"));
    }
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&i| !a[i][col].is_zero()).ok_or(LabError::DependentBasis)?;
        a.swap(col, piv);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * d {
                    let delta = &f * &a[col][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[d..].to_vec()).collect())
}
