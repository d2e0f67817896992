//! Exact linear solves by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LinError {
    #[error("system is singular: column {0} has no pivot")]
    Singular(usize),
    #[error("overdetermined system is inconsistent at equation {0}")]
    Inconsistent(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Scales a rational row to coprime-free integers (multiplies by the lcm of denominators).
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |d, r| d.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&den / r.denom())).collect()
}

/// Solves `a · x = b` for `x`. `a` may have more rows than columns; the extra
/// equations must then be consistent with the solution, and the index of the
/// first violated equation is reported otherwise.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>, LinError> {
    let m = a.len();
    if b.len() != m {
        return Err(LinError::Shape(format!("{m} equations but {} right-hand sides", b.len())));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(LinError::Shape("ragged coefficient matrix".into()));
    }
    if m < n {
        return Err(LinError::Singular(m));
    }
    let mut rows: Vec<(usize, Vec<BigInt>)> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (r, rhs))| {
            let mut full = r.clone();
            full.push(rhs.clone());
            (i, integer_row(&full))
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..m).find(|&i| !rows[i].1[k].is_zero()).ok_or(LinError::Singular(k))?;
        rows.swap(k, p);
        let (head, tail) = rows.split_at_mut(k + 1);
        let pivot_row = &head[k].1;
        for (_, row) in tail.iter_mut() {
            for j in k + 1..=n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    for (orig, row) in &rows[n..] {
        if !row[n].is_zero() {
            return Err(LinError::Inconsistent(*orig));
        }
    }

    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let row = &rows[k].1;
        let mut acc = Rational::from_integer(row[n].clone());
        for j in k + 1..n {
            acc -= Rational::from_integer(row[j].clone()) * &x[j];
        }
        x[k] = acc / Rational::from_integer(row[k].clone());
    }
    Ok(x)
}
