//! Picard–Fuchs operators and their power-series solutions in every chart.
//!
//! An operator is stored as `Σ_j y^j P_j(θ)`. Rewritten in a chart variable
//! `z`, it sends `z^k` to a Laurent polynomial; matching the lowest nonvanishing
//! exponent gives a coefficient recurrence whose indicial positions carry the
//! initial data.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::chart::{collect, theta_monomial, y_power_poly};
use crate::rational::{int, Rational};
use crate::series::{Series, SeriesError, Var};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PfError {
    #[error("recurrence degenerates at exponent {0}: an indicial position is forced to a nonzero value")]
    Degenerate(i64),
    #[error("initial value at non-indicial exponent {0} contradicts the recurrence")]
    BadInitial(i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `Σ_j y^j P_j(θ)`, with `P_j` given by its coefficients in θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    pub terms: Vec<Vec<Rational>>,
}

impl Operator {
    /// `θ³ + 3yθ(3θ+1)(3θ+2)`.
    pub fn third_order() -> Operator {
        Operator { terms: vec![ints(&[0, 0, 0, 1]), ints(&[0, 6, 27, 27])] }
    }

    /// `θ² + 3y(3θ+1)(3θ+2)`; annihilates θ of every solution of the third-order operator.
    pub fn second_order() -> Operator {
        Operator { terms: vec![ints(&[0, 0, 1]), ints(&[6, 27, 27])] }
    }

    /// Image of `z^k` in the chart variable `var`.
    pub fn on_monomial(&self, var: Var, k: i64) -> Vec<(i64, Rational)> {
        let mut out = Vec::new();
        for (j, p) in self.terms.iter().enumerate() {
            // P_j(θ) z^k
            let mut power = vec![(k, Rational::from_integer(1.into()))];
            let mut acc: Vec<(i64, Rational)> = Vec::new();
            for (deg, c) in p.iter().enumerate() {
                if deg > 0 {
                    let mut next = Vec::new();
                    for (e, a) in &power {
                        for (e2, b) in theta_monomial(var, *e) {
                            next.push((e2, a * b));
                        }
                    }
                    power = collect(next);
                }
                if !c.is_zero() {
                    acc.extend(power.iter().map(|(e, a)| (*e, a * c)));
                }
            }
            let acc = collect(acc);
            for (e1, c1) in y_power_poly(var, j as u32) {
                for (e2, c2) in &acc {
                    out.push((e1 + e2, &c1 * c2));
                }
            }
        }
        collect(out)
    }

    /// Applies the operator to a series in a chart variable.
    pub fn apply(&self, f: &Series) -> Result<Series, SeriesError> {
        let var = f.var();
        let mut total: Option<Series> = None;
        for (j, p) in self.terms.iter().enumerate() {
            let mut power = f.clone();
            let mut acc: Option<Series> = None;
            for (deg, c) in p.iter().enumerate() {
                if deg > 0 {
                    power = super::chart::theta(&power)?;
                }
                if !c.is_zero() {
                    let term = power.scale(c);
                    acc = Some(match acc {
                        Some(a) => a.checked_add(&term)?,
                        None => term,
                    });
                }
            }
            let Some(acc) = acc else { continue };
            let poly = y_power_poly(var, j as u32);
            let top = poly.iter().map(|t| t.0).max().unwrap_or(0);
            let yj = Series::polynomial(var, &poly, acc.relative_order() + top + 1);
            let term = acc.checked_mul(&yj)?;
            total = Some(match total {
                Some(t) => t.checked_add(&term)?,
                None => term,
            });
        }
        Ok(total.unwrap_or_else(|| Series::zero(var, f.order())))
    }

    /// Lowest exponent shift `s0` such that `[z^(k+s0)] L(z^k)` is not
    /// identically zero as a function of `k`.
    fn shift(&self, var: Var) -> i64 {
        (20..26)
            .map(|k| self.on_monomial(var, k).first().map_or(i64::MAX, |t| t.0 - k))
            .min()
            .unwrap()
    }

    /// Recurrence view of the operator in a chart.
    pub fn recurrence(&self, var: Var) -> Recurrence {
        Recurrence { op: self.clone(), var, shift: self.shift(var) }
    }
}

fn ints(c: &[i64]) -> Vec<Rational> {
    c.iter().map(|&x| int(x)).collect()
}

/// Coefficient recurrence for holomorphic solutions `Σ_{k≥0} a_k z^k`.
#[derive(Clone, Debug)]
pub struct Recurrence {
    op: Operator,
    var: Var,
    shift: i64,
}

impl Recurrence {
    pub fn var(&self) -> Var {
        self.var
    }

    /// Coefficient `ℓ(k)` multiplying `a_k` in the equation that determines it.
    pub fn leading(&self, k: i64) -> Rational {
        coeff_at(&self.op.on_monomial(self.var, k), k + self.shift)
    }

    /// Exponents `0 ≤ k < bound` where `ℓ(k) = 0`; these carry free data.
    pub fn indicial(&self, bound: i64) -> Vec<i64> {
        (0..bound).filter(|&k| self.leading(k).is_zero()).collect()
    }

    /// Solves for `a_0 .. a_(order-1)`. Indicial positions take their value
    /// from `initial` (default zero); values given at other positions must
    /// agree with the recurrence.
    pub fn solve(&self, initial: &BTreeMap<i64, Rational>, order: i64) -> Result<Series, PfError> {
        let images: Vec<Vec<(i64, Rational)>> =
            (0..order).map(|k| self.op.on_monomial(self.var, k)).collect();
        let mut a: Vec<Rational> = Vec::with_capacity(order as usize);
        for k in 0..order {
            let m = k + self.shift;
            let mut rest = Rational::zero();
            for (kp, ak) in a.iter().enumerate() {
                if !ak.is_zero() {
                    rest += ak * coeff_at(&images[kp], m);
                }
            }
            let lead = coeff_at(&images[k as usize], m);
            let value = if lead.is_zero() {
                if !rest.is_zero() {
                    return Err(PfError::Degenerate(k));
                }
                initial.get(&k).cloned().unwrap_or_else(Rational::zero)
            } else {
                let v = -rest / lead;
                if let Some(given) = initial.get(&k) {
                    if *given != v {
                        return Err(PfError::BadInitial(k));
                    }
                }
                v
            };
            a.push(value);
        }
        Ok(Series::from_coeffs(self.var, a))
    }
}

fn coeff_at(p: &[(i64, Rational)], e: i64) -> Rational {
    p.iter().find(|t| t.0 == e).map_or_else(Rational::zero, |t| t.1.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn lr_second_order_recurrence() {
        // d² a_d = −3(3d−1)(3d−2) a_{d−1}
        let rec = Operator::second_order().recurrence(Var::Y);
        for d in 1..8i64 {
            assert_eq!(rec.leading(d), int(d * d));
            let img = Operator::second_order().on_monomial(Var::Y, d - 1);
            assert_eq!(coeff_at(&img, d), int(3 * (3 * d - 1) * (3 * d - 2)));
        }
        let init = BTreeMap::from([(0, int(1))]);
        let s = rec.solve(&init, 4).unwrap();
        assert_eq!(s, Series::from_ints(Var::Y, &[1, -6, 90, -1680]));
    }

    #[test]
    fn constants_solve_third_order() {
        for var in [Var::Y, Var::OrbY, Var::S] {
            let one = Series::one(var, 10);
            assert!(Operator::third_order().apply(&one).unwrap().is_zero_window());
        }
    }

    #[test]
    fn indicial_positions() {
        assert_eq!(Operator::third_order().recurrence(Var::Y).indicial(6), vec![0]);
        assert_eq!(Operator::third_order().recurrence(Var::OrbY).indicial(6), vec![0, 1, 2]);
        assert_eq!(Operator::second_order().recurrence(Var::OrbY).indicial(6), vec![1, 2]);
        assert_eq!(Operator::third_order().recurrence(Var::S).indicial(6), vec![0, 1]);
    }

    #[test]
    fn solution_is_annihilated() {
        let rec = Operator::third_order().recurrence(Var::S);
        let x = rec.solve(&BTreeMap::from([(1, int(1))]), 12).unwrap();
        assert_eq!(x.coeff(2).unwrap(), q(11, 18));
        let l = Operator::third_order().apply(&x).unwrap();
        assert!(l.is_zero_window(), "{l}");
    }
}
