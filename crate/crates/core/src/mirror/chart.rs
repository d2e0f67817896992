//! The three charts on the mirror moduli space and the exact geometry of
//! `θ = y d/dy`, `y` and `R = (1+27y)⁻¹` in each chart variable.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{int, q, Rational};
use crate::series::{Series, SeriesError, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    LargeRadius,
    Orbifold,
    Conifold,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::LargeRadius, Chart::Orbifold, Chart::Conifold];

    /// Local variable: `y`, `𝔶` (with `y = 𝔶⁻³`) or `s = 1 + 27y`.
    pub fn var(self) -> Var {
        match self {
            Chart::LargeRadius => Var::Y,
            Chart::Orbifold => Var::OrbY,
            Chart::Conifold => Var::S,
        }
    }

    /// Variable in which θ-frame correlators are stored. On the orbifold chart
    /// these only involve `𝔶³`, so they are kept in `w = 𝔶³`.
    pub fn work_var(self) -> Var {
        match self {
            Chart::Orbifold => Var::W,
            c => c.var(),
        }
    }

    /// Flat coordinate variable `q₁`, `𝔱` or `x_con`.
    pub fn flat_var(self) -> Var {
        match self {
            Chart::LargeRadius => Var::Q,
            Chart::Orbifold => Var::OrbT,
            Chart::Conifold => Var::XCon,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Chart::LargeRadius => "lr",
            Chart::Orbifold => "orb",
            Chart::Conifold => "con",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Chart {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lr" => Ok(Chart::LargeRadius),
            "orb" => Ok(Chart::Orbifold),
            "con" => Ok(Chart::Conifold),
            _ => Err(format!("unknown chart {s:?}")),
        }
    }
}

fn not_a_chart(v: Var) -> SeriesError {
    SeriesError::Precondition(format!("{v} is not a chart variable"))
}

/// `θ = y d/dy` written in the variable of `f`.
pub fn theta(f: &Series) -> Result<Series, SeriesError> {
    match f.var() {
        Var::Y => f.theta(),
        Var::OrbY => Ok(f.theta()?.scale(&q(-1, 3))),
        Var::W => Ok(-f.theta()?),
        Var::S => {
            let d = f.derive()?;
            d.shift(1).checked_sub(&d)
        }
        v => Err(not_a_chart(v)),
    }
}

/// Image of the monomial `z^k` under θ, as a sparse Laurent polynomial.
pub(crate) fn theta_monomial(var: Var, k: i64) -> Vec<(i64, Rational)> {
    match var {
        Var::Y => vec![(k, int(k))],
        Var::OrbY => vec![(k, q(-k, 3))],
        Var::W => vec![(k, int(-k))],
        Var::S => vec![(k, int(k)), (k - 1, int(-k))],
        v => panic!("{v} is not a chart variable"),
    }
}

/// `y^j` as a sparse Laurent polynomial in the chart variable.
pub(crate) fn y_power_poly(var: Var, j: u32) -> Vec<(i64, Rational)> {
    match var {
        Var::Y => vec![(j as i64, Rational::one())],
        Var::OrbY => vec![(-3 * j as i64, Rational::one())],
        Var::W => vec![(-(j as i64), Rational::one())],
        Var::S => {
            // ((s - 1)/27)^j
            let mut p = vec![(0i64, Rational::one())];
            for _ in 0..j {
                let mut next: Vec<(i64, Rational)> = Vec::new();
                for (e, c) in &p {
                    next.push((e + 1, c / int(27)));
                    next.push((*e, -c / int(27)));
                }
                p = collect(next);
            }
            p
        }
        v => panic!("{v} is not a chart variable"),
    }
}

pub(crate) fn collect(terms: Vec<(i64, Rational)>) -> Vec<(i64, Rational)> {
    let mut map = std::collections::BTreeMap::new();
    for (e, c) in terms {
        *map.entry(e).or_insert_with(Rational::zero) += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `y` in the chart variable, to the given truncation order.
pub fn y_series(var: Var, order: i64) -> Result<Series, SeriesError> {
    match var {
        Var::Y | Var::OrbY | Var::W | Var::S => Ok(Series::polynomial(var, &y_power_poly(var, 1), order)),
        v => Err(not_a_chart(v)),
    }
}

/// `1 + 27y` in the chart variable.
pub fn disc_series(var: Var, order: i64) -> Result<Series, SeriesError> {
    Ok(y_series(var, order)?.scale(&int(27)).add_constant(&Rational::one()))
}

/// `R = (1 + 27y)⁻¹` in the chart variable, known to the given order.
pub fn r_series(var: Var, order: i64) -> Result<Series, SeriesError> {
    match var {
        // 1/(1+27y) has valuation 0; keep `order` coefficients.
        Var::Y => disc_series(var, order)?.inverse(),
        // w/(w+27): valuation 1.
        Var::W => Ok(Series::polynomial(var, &[(0, int(27)), (1, int(1))], order - 1)
            .inverse()?
            .shift(1)),
        Var::OrbY => Ok(Series::polynomial(var, &[(0, int(27)), (3, int(1))], order - 3)
            .inverse()?
            .shift(3)),
        Var::S => Ok(Series::monomial(var, -1, Rational::one(), order)),
        v => Err(not_a_chart(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_r_identity_all_charts() {
        // θR = R² − R
        for var in [Var::Y, Var::OrbY, Var::W, Var::S] {
            let r = r_series(var, 16).unwrap();
            let lhs = theta(&r).unwrap();
            let rhs = r.checked_mul(&r).unwrap().checked_sub(&r).unwrap();
            assert!(lhs.agrees_with(&rhs), "{var}");
            assert!(lhs.order() >= 14, "{var} {}", lhs.order());
        }
    }

    #[test]
    fn r_times_disc_is_one() {
        for var in [Var::Y, Var::OrbY, Var::W, Var::S] {
            let p = r_series(var, 12).unwrap().checked_mul(&disc_series(var, 12).unwrap()).unwrap();
            assert!(p.agrees_with(&Series::one(var, 100)), "{var}: {p}");
        }
    }

    #[test]
    fn theta_matches_monomial_rule() {
        for var in [Var::Y, Var::OrbY, Var::W, Var::S] {
            let m = Series::monomial(var, 4, int(1), 10);
            let t = theta(&m).unwrap();
            let expect = Series::polynomial(var, &theta_monomial(var, 4), t.order());
            assert!(t.agrees_with(&expect));
        }
    }
}
