//! Counting lattice points `Σ t_i v_i` near a target.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{LabError, Result};
use crate::linalg::inverse;
use crate::rational::Rational;

pub const LATTICE_BOX_BUDGET: u128 = 10_000_000;

/// Number of `t ∈ Z^d` with `‖Σ t_i v_i - x‖_∞ < z`.
///
/// The candidates form the box `|t_i - c_i| <= z·‖row_i(B⁻¹)‖_1` around `c = B⁻¹x`, where
/// the columns of `B` are the basis vectors; each candidate is then checked exactly.
pub fn lattice_count(basis: &[Vec<Rational>], x: &[Rational], z: &Rational) -> Result<u64> {
    let d = basis.len();
    if d == 0 {
        return Err(LabError::invalid("lattice basis is empty"));
    }
    if basis.iter().any(|v| v.len() != d) || x.len() != d {
        return Err(LabError::invalid(format!("lattice basis and target must live in dimension {d}")));
    }
    if *z < Rational::one() {
        return Err(LabError::invalid(format!("lattice radius {z} is below 1")));
    }
    // rows of B are coordinates, columns are basis vectors
    let b: Vec<Vec<Rational>> = (0..d).map(|k| basis.iter().map(|v| v[k].clone()).collect()).collect();
    let inv = inverse(&b)?;

    let mut ranges = Vec::with_capacity(d);
    let mut points: u128 = 1;
    for row in &inv {
        let c: Rational = row.iter().zip(x).map(|(a, b)| a * b).sum();
        let w: Rational = z * row.iter().map(|a| a.abs()).sum::<Rational>();
        let lo = (&c - &w).ceil().to_integer();
        let hi = (&c + &w).floor().to_integer();
        let width = if hi < lo { BigInt::zero() } else { &hi - &lo + 1 };
        let width = width.to_u128().unwrap_or(u128::MAX);
        points = points.saturating_mul(width);
        if points > LATTICE_BOX_BUDGET {
            return Err(LabError::capacity("lattice box points", points, LATTICE_BOX_BUDGET));
        }
        if width == 0 {
            return Ok(0);
        }
        let lo = lo.to_i64().ok_or_else(|| LabError::capacity("lattice box corner", &lo, i64::MAX))?;
        ranges.push((lo, lo + width as i64 - 1));
    }

    // scale everything by a common denominator so the membership test is integral
    let mut den = z.denom().clone();
    for q in basis.iter().flatten().chain(x) {
        den = den.lcm(q.denom());
    }
    let scale = |q: &Rational| -> Result<i128> {
        let s = q.numer() * (&den / q.denom());
        s.to_i64()
            .map(i128::from)
            .ok_or_else(|| LabError::capacity("scaled lattice entry", &s, i64::MAX))
    };
    let cols: Vec<Vec<i128>> = basis.iter().map(|v| v.iter().map(scale).collect()).collect::<Result<_>>()?;
    let target: Vec<i128> = x.iter().map(scale).collect::<Result<_>>()?;
    let bound = scale(z)?;

    let mut count = 0u64;
    let mut t: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let inside = (0..d).all(|k| {
            let s: i128 = (0..d).map(|i| i128::from(t[i]) * cols[i][k]).sum::<i128>() - target[k];
            s.abs() < bound
        });
        count += u64::from(inside);
        let mut i = 0;
        loop {
            if i == d {
                return Ok(count);
            }
            if t[i] < ranges[i].1 {
                t[i] += 1;
                break;
            }
            t[i] = ranges[i].0;
            i += 1;
        }
    }
}
