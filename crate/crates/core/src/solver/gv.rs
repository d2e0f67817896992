//! Multicover resummation between Gromov–Witten and Gopakumar–Vafa invariants:
//!
//! `Σ_g n^GW_(g,d) λ^(2g−2) q^d = Σ_(g,d,k) n^GV_(g,d) (1/k)(2 sin(kλ/2))^(2g−2) q^(kd)`,
//!
//! so `n^GW_(g,d) = Σ_(k|d) k^(2g−3) Σ_(h≤g) s_(h,g−h) n^GV_(h,d/k)` with
//! `s_(h,m) = [x^(2m)] (sin(x/2)/(x/2))^(2h−2)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::tables::Table;
use crate::rational::{factorial, Rational};
use crate::series::{Series, Var};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GvError {
    #[error("missing lower entry (genus {0}, degree {1})")]
    Missing(u32, i64),
}

/// `[u^m] (sin(x/2)/(x/2))^(2h−2)` with `u = x²`, for `m ≤ m_max`.
fn sinc_power(h: u32, m_max: u32) -> Vec<Rational> {
    let order = m_max as i64 + 1;
    let coeffs: Vec<Rational> = (0..order)
        .map(|j| {
            let den = BigInt::from(4).pow(j as u32) * factorial(2 * j as u64 + 1);
            let c = Rational::new(BigInt::one(), den);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let sinc = Series::from_coeffs(Var::Y, coeffs);
    let p = sinc.pow(2 * h as i64 - 2).expect("sinc has unit constant term");
    (0..order).map(|m| p.coeff(m).expect("within window")).collect()
}

/// `s_(h,m)`.
pub fn multicover_coefficient(h: u32, m: u32) -> Rational {
    sinc_power(h, m)[m as usize].clone()
}

fn coefficient_table(g_max: u32) -> Vec<Vec<Rational>> {
    (0..=g_max).map(|h| sinc_power(h, g_max - h)).collect()
}

fn k_power(k: i64, e: i64) -> Rational {
    let b = Rational::from_integer(BigInt::from(k));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        Rational::one() / num_traits::pow(b, (-e) as usize)
    }
}

fn divisors(d: i64) -> impl Iterator<Item = i64> {
    (1..=d).filter(move |k| d % k == 0)
}

/// `n^GW_(g,d)` for `g ≤ g_max`, `1 ≤ d ≤ d_max` from Gopakumar–Vafa data.
pub fn gw_from_gv(gv: &Table, g_max: u32, d_max: i64) -> Result<Table, GvError> {
    let s = coefficient_table(g_max);
    let mut out = Table::new();
    for g in 0..=g_max {
        for d in 1..=d_max {
            let mut total = Rational::zero();
            for k in divisors(d) {
                let mut inner = Rational::zero();
                for h in 0..=g {
                    let v = gv.get(&(h, d / k)).ok_or(GvError::Missing(h, d / k))?;
                    inner += &s[h as usize][(g - h) as usize] * v;
                }
                total += k_power(k, 2 * g as i64 - 3) * inner;
            }
            out.insert((g, d), total);
        }
    }
    Ok(out)
}

/// Inverse of [`gw_from_gv`], solved triangularly in `(g, d)`.
pub fn gv_from_gw(gw: &Table, g_max: u32, d_max: i64) -> Result<Table, GvError> {
    let s = coefficient_table(g_max);
    let mut gv = Table::new();
    for g in 0..=g_max {
        for d in 1..=d_max {
            let mut rest = gw.get(&(g, d)).ok_or(GvError::Missing(g, d))?.clone();
            for k in divisors(d) {
                for h in 0..=g {
                    if k == 1 && h == g {
                        continue;
                    }
                    let v = &gv[&(h, d / k)];
                    rest -= k_power(k, 2 * g as i64 - 3) * &s[h as usize][(g - h) as usize] * v;
                }
            }
            gv.insert((g, d), rest);
        }
    }
    Ok(gv)
}

/// `n^GW_(g,d)` from Gopakumar–Vafa data covering genus `≤ g` and degrees dividing `d`.
pub fn gw_entry(gv: &Table, g: u32, d: i64) -> Result<Rational, GvError> {
    let s = coefficient_table(g);
    let mut total = Rational::zero();
    for k in divisors(d) {
        for h in 0..=g {
            let v = gv.get(&(h, d / k)).ok_or(GvError::Missing(h, d / k))?;
            total += k_power(k, 2 * g as i64 - 3) * &s[h as usize][(g - h) as usize] * v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    #[test]
    fn multicover_coefficients() {
        assert_eq!(multicover_coefficient(0, 1), q(1, 12));
        assert_eq!(multicover_coefficient(1, 3), int(0));
        assert_eq!(multicover_coefficient(2, 1), q(-1, 12));
        assert_eq!(multicover_coefficient(3, 0), int(1));
    }

    #[test]
    fn small_cross_checks() {
        let gv = Table::from([((0, 1), int(3)), ((0, 2), int(-6)), ((1, 1), int(0)), ((1, 2), int(0))]);
        let gw = gw_from_gv(&gv, 1, 2).unwrap();
        assert_eq!(gw[&(0, 2)], q(-45, 8));
        assert_eq!(gw[&(1, 1)], q(1, 4));
        assert_eq!(gv_from_gw(&gw, 1, 2).unwrap(), gv);
        let gv = Table::from([((0, 1), int(3))]);
        assert_eq!(gw_entry(&gv, 0, 1).unwrap(), int(3));
        assert_eq!(gw_from_gv(&gv, 1, 1).unwrap_err(), GvError::Missing(1, 1));
    }
}
