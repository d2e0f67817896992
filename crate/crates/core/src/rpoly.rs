//! Polynomials in `R = (1+27y)⁻¹` with rational coefficients.
//!
//! Algebraic-frame correlators are rational in `y` with poles only at the
//! conifold, and in the θ-frame they are polynomials in `R`. The derivation
//! `θR = R² − R` keeps the ring closed.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{int, Rational};
use crate::series::{Series, SeriesError};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RPoly {
    /// `coeffs[i]` multiplies `R^i`.
    coeffs: Vec<Rational>,
}

impl RPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> RPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RPoly { coeffs }
    }

    pub fn zero() -> RPoly {
        RPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> RPoly {
        RPoly::new(vec![c])
    }

    pub fn monomial(i: usize, c: Rational) -> RPoly {
        let mut v = vec![Rational::zero(); i + 1];
        v[i] = c;
        RPoly::new(v)
    }

    pub fn r() -> RPoly {
        RPoly::monomial(1, Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power of `R` with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &RPoly) -> RPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RPoly) -> RPoly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &RPoly) -> RPoly {
        if self.is_zero() || o.is_zero() {
            return RPoly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RPoly::new(v)
    }

    pub fn scale(&self, c: &Rational) -> RPoly {
        RPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `θp = p'(R)·(R² − R)`.
    pub fn theta(&self) -> RPoly {
        let d = RPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect(),
        );
        d.mul(&RPoly::new(vec![Rational::zero(), -Rational::one(), Rational::one()]))
    }

    /// Evaluates at a series for `R`.
    pub fn eval(&self, r: &Series) -> Result<Series, SeriesError> {
        let mut acc = Series::zero(r.var(), r.order().max(r.relative_order()) + 1);
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(r)?.add_constant(c);
        }
        Ok(acc)
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*R"),
                _ => format!("({c})*R^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mirror::chart::{r_series, theta};
    use crate::rational::q;
    use crate::series::Var;

    #[test]
    fn theta_matches_series() {
        let p = RPoly::new(vec![q(1, 2), int(-3), q(5, 7), int(2)]);
        for var in [Var::Y, Var::W, Var::S] {
            let r = r_series(var, 12).unwrap();
            let lhs = p.theta().eval(&r).unwrap();
            let rhs = theta(&p.eval(&r).unwrap()).unwrap();
            assert!(lhs.agrees_with(&rhs), "{var}");
        }
    }

    #[test]
    fn ring_ops() {
        let a = RPoly::new(vec![int(1), int(1)]);
        let b = RPoly::new(vec![int(1), int(-1)]);
        assert_eq!(a.mul(&b), RPoly::new(vec![int(1), int(0), int(-1)]));
        assert_eq!(a.sub(&a), RPoly::zero());
        assert_eq!(RPoly::r().theta(), RPoly::new(vec![int(0), int(-1), int(1)]));
    }
}
