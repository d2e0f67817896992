//! Chart-local geometric inputs: mirror maps, Yukawa couplings, algebraic
//! propagators, genus-one one-forms and the modular test series.
//!
//! Correlators are handled in the θ-frame `(dy/y)^⊗n`, where they are rational
//! in `y` and only the connection `Γ = θ²x/θx` of the flat coordinate enters.
//! Flat frames are reached by dividing by powers of `θx`.

pub mod chart;
pub mod pf;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use chart::Chart;
use chart::{disc_series, r_series, theta, y_series};
use pf::{Operator, PfError};

use crate::rational::{self, int, q, Rational};
use crate::series::{Series, SeriesError, Var};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum MirrorError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error("the two constructions of the {0} flat coordinate disagree at exponent {1}")]
    Disagreement(Chart, i64),
    #[error("order {got} too small, need at least {need}")]
    OrderTooSmall { got: i64, need: i64 },
    #[error("{0}")]
    Shape(String),
}

type Result<T> = std::result::Result<T, MirrorError>;

/// Mirror-map data of one chart: `θx` and the single-valued part of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatCoordinate {
    pub chart: Chart,
    /// `θx` in the chart variable.
    pub theta_x: Series,
    /// `t − log y`, `𝔱(𝔶)` or `x_con(s)`.
    pub regular: Series,
}

/// `g(y) = Σ (3d−1)!/(d!)³ (−1)^(d+1) y^d`.
pub fn g_series(order: i64) -> Series {
    let coeffs = (0..order)
        .map(|d| {
            if d == 0 {
                return Rational::zero();
            }
            let num = rational::factorial(3 * d as u64 - 1);
            let den = rational::factorial(d as u64).pow(3);
            let sign = if d % 2 == 1 { 1 } else { -1 };
            Rational::new(num * sign, den)
        })
        .collect();
    Series::from_coeffs(Var::Y, coeffs)
}

pub fn mirror_map_lr(order: i64) -> Result<FlatCoordinate> {
    if order < 2 {
        return Err(MirrorError::OrderTooSmall { got: order, need: 2 });
    }
    let rec = Operator::second_order().recurrence(Var::Y);
    let theta_x = rec.solve(&BTreeMap::from([(0, int(1))]), order)?;
    let regular = theta_x.add_constant(&-Rational::one()).theta_primitive()?;
    Ok(FlatCoordinate { chart: Chart::LargeRadius, theta_x, regular })
}

/// `𝔱(𝔶) = Σ (−1)^n ∏_{j<n}(1/3+j)³ / (3n+1)! 𝔶^(3n+1)`.
pub fn orbifold_closed_form(order: i64) -> Series {
    let mut coeffs = vec![Rational::zero(); order.max(0) as usize];
    let mut prod = Rational::one();
    let mut n = 0i64;
    while 3 * n + 1 < order {
        let c = &prod / Rational::from_integer(rational::factorial(3 * n as u64 + 1));
        coeffs[(3 * n + 1) as usize] = if n % 2 == 0 { c } else { -c };
        let f = q(1, 3) + int(n);
        prod = prod * &f * &f * &f;
        n += 1;
    }
    Series::from_coeffs(Var::OrbY, coeffs)
}

pub fn mirror_map_orb(order: i64) -> Result<FlatCoordinate> {
    if order < 5 {
        return Err(MirrorError::OrderTooSmall { got: order, need: 5 });
    }
    let closed = orbifold_closed_form(order);
    let rec = Operator::second_order().recurrence(Var::OrbY);
    let theta_x = rec.solve(&BTreeMap::from([(1, q(-1, 3)), (2, Rational::zero())]), order)?;
    // θ = −(1/3)𝔶 d/d𝔶, so 𝔱 = −3 · (𝔶 d/d𝔶)⁻¹ θ𝔱.
    let from_pf = theta_x.theta_primitive()?.scale(&int(-3));
    let diff = from_pf.checked_sub(&closed)?;
    if !diff.is_zero_window() {
        return Err(MirrorError::Disagreement(Chart::Orbifold, diff.valuation()));
    }
    Ok(FlatCoordinate { chart: Chart::Orbifold, theta_x, regular: closed })
}

pub fn mirror_map_con(order: i64) -> Result<FlatCoordinate> {
    if order < 5 {
        return Err(MirrorError::OrderTooSmall { got: order, need: 5 });
    }
    let rec = Operator::third_order().recurrence(Var::S);
    let regular = rec.solve(&BTreeMap::from([(0, Rational::zero()), (1, Rational::one())]), order)?;
    let theta_x = theta(&regular)?;
    Ok(FlatCoordinate { chart: Chart::Conifold, theta_x, regular })
}

pub fn mirror_map(chart: Chart, order: i64) -> Result<FlatCoordinate> {
    match chart {
        Chart::LargeRadius => mirror_map_lr(order),
        Chart::Orbifold => mirror_map_orb(order),
        Chart::Conifold => mirror_map_con(order),
    }
}

impl FlatCoordinate {
    /// The flat coordinate as a series in the chart variable: `q₁ = y·e^(t − log y)`
    /// at large radius, the regular part elsewhere.
    pub fn flat_series(&self) -> Result<Series> {
        Ok(match self.chart {
            Chart::LargeRadius => self.regular.exp()?.shift(1),
            _ => self.regular.clone(),
        })
    }

    /// Chart variable as a series in the flat variable: `y(q₁)`, `𝔶(𝔱)`, `s(x_con)`.
    pub fn inverse(&self) -> Result<Series> {
        Ok(self.flat_series()?.reverse()?.with_var(self.chart.flat_var()))
    }

    /// Connection `Γ = θ²x/θx` in the chart's work variable.
    pub fn connection(&self) -> Result<Series> {
        let g = theta(&self.theta_x)?.checked_div(&self.theta_x)?;
        Ok(match self.chart {
            Chart::Orbifold => g.deflate(3)?.with_var(Var::W),
            _ => g,
        })
    }
}

/// Re-expresses a work-variable series in the chart variable (`w = 𝔶³`).
pub fn work_to_chart(f: &Series) -> Series {
    match f.var() {
        Var::W => f.substitute_power(3).with_var(Var::OrbY),
        _ => f.clone(),
    }
}

/// Re-expands a series in a chart (or work) variable in the flat coordinate,
/// given the inverse mirror map of [`FlatCoordinate::inverse`].
pub fn to_flat(f: &Series, inverse: &Series) -> Result<Series> {
    Ok(work_to_chart(f).compose(inverse)?)
}

/// Frame of a tensor-valued series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// `(dy/y)^⊗n`, dual to θ.
    Theta,
    /// `(dx_♥)^⊗n` for the chart's flat coordinate.
    Flat,
}

/// Yukawa coupling in the θ-frame, `−R/3`, in the given chart or work variable.
pub fn yukawa_theta(var: Var, order: i64) -> Result<Series> {
    Ok(r_series(var, order)?.scale(&q(-1, 3)))
}

/// Yukawa coupling in the chart's canonical frame: `(dy/y)^⊗3` at large radius,
/// `d𝔶^⊗3` at the orbifold point (a series in `𝔶`), `dx_con^⊗3` at the conifold
/// (a Laurent series in `x_con`).
pub fn yukawa(chart: Chart, order: i64) -> Result<Series> {
    match chart {
        Chart::LargeRadius => yukawa_theta(Var::Y, order),
        Chart::Orbifold => {
            // 9/(𝔶³ + 27)
            let d = Series::polynomial(Var::OrbY, &[(0, int(27)), (3, int(1))], order);
            Ok(d.inverse()?.scale(&int(9)))
        }
        Chart::Conifold => {
            let flat = mirror_map_con(order + 2)?;
            let c = yukawa_theta(Var::S, order + 2)?.checked_div(&flat.theta_x.pow(3)?)?;
            Ok(c.compose(&flat.inverse()?)?)
        }
    }
}

/// `Δ_{alg,♥}` in the chart's work variable and θ⊗θ frame:
/// `3(1+27y)Γ + 27y + 3a`.
pub fn propagator_theta(gamma: &Series, a: &Rational) -> Result<Series> {
    let var = gamma.var();
    let n = gamma.order() + 2;
    let d = disc_series(var, n)?.checked_mul(gamma)?.scale(&int(3));
    let y27 = y_series(var, n)?.scale(&int(27));
    Ok(d.checked_add(&y27)?.add_constant(&(a * int(3))))
}

/// Residual of the propagator equation
/// `(1+27y)θΔ + Δ²/3 − 2(a+9y)Δ − 9(1−6a)y + 3a²`, which vanishes identically.
pub fn propagator_ode_residual(gamma: &Series, a: &Rational) -> Result<Series> {
    let var = gamma.var();
    let n = gamma.order() + 4;
    let d = propagator_theta(gamma, a)?;
    let y = y_series(var, n)?;
    let lhs = disc_series(var, n)?.checked_mul(&theta(&d)?)?;
    let quad = d.checked_mul(&d)?.scale(&q(1, 3));
    let lin = y.scale(&int(9)).add_constant(a).checked_mul(&d)?.scale(&int(2));
    let c = y.scale(&(int(9) * (int(1) - int(6) * a))).add_constant(&(-int(3) * a * a));
    Ok(lhs.checked_add(&quad)?.checked_sub(&lin)?.checked_sub(&c)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagatorSeries {
    pub chart: Chart,
    pub frame: Frame,
    pub series: Series,
    pub a: Rational,
}

/// Algebraic propagator `Δ_{alg,♥}` in the chart variable, θ⊗θ frame.
pub fn propagator_alg(flat: &FlatCoordinate, a: &Rational) -> Result<PropagatorSeries> {
    let series = work_to_chart(&propagator_theta(&flat.connection()?, a)?);
    Ok(PropagatorSeries { chart: flat.chart, frame: Frame::Theta, series, a: a.clone() })
}

impl PropagatorSeries {
    /// Converts between θ⊗θ and the flat frame `(∂_x)^⊗2` by `(θx)^∓2`.
    pub fn to_frame(&self, frame: Frame, flat: &FlatCoordinate) -> Result<PropagatorSeries> {
        if flat.chart != self.chart {
            return Err(MirrorError::Shape(format!(
                "propagator on {} but flat coordinate on {}",
                self.chart, flat.chart
            )));
        }
        let t2 = flat.theta_x.pow(2)?;
        let series = match (self.frame, frame) {
            (a, b) if a == b => self.series.clone(),
            (Frame::Theta, Frame::Flat) => self.series.checked_div(&t2)?,
            (Frame::Flat, Frame::Theta) => self.series.checked_mul(&t2)?,
            _ => unreachable!(),
        };
        Ok(PropagatorSeries { series, frame, ..self.clone() })
    }
}

/// Genus-one one-point function at large radius in the θ-frame:
/// `−½Γ − (1/12)(1 + 27yR)`.
pub fn genus_one_lr_theta(flat: &FlatCoordinate) -> Result<Series> {
    let gamma = flat.connection()?;
    let n = gamma.order();
    let yr = y_series(Var::Y, n)?.checked_mul(&r_series(Var::Y, n)?)?;
    let bracket = yr.scale(&int(27)).add_constant(&Rational::one()).scale(&q(-1, 12));
    Ok(gamma.scale(&q(-1, 2)).checked_add(&bracket)?)
}

/// The constant `c` with `Ĉ^(1)_{alg,1} = c·R`, obtained by transforming the
/// large-radius closed form with the propagator `−Δ_{alg,LR}`.
pub fn genus_one_alg_constant(a: &Rational) -> Result<Rational> {
    let flat = mirror_map_lr(12)?;
    let delta = propagator_theta(&flat.connection()?, a)?;
    let r = r_series(Var::Y, 12)?;
    // Ĉ_alg = Ĉ_LR + ½(−Δ)(−R/3)
    let alg = genus_one_lr_theta(&flat)?.checked_add(&delta.checked_mul(&r)?.scale(&q(1, 6)))?;
    let ratio = alg.checked_div(&r)?;
    let c = ratio.coeff(0)?;
    if !ratio.add_constant(&-c.clone()).is_zero_window() {
        return Err(MirrorError::Shape("genus-one algebraic correlator is not a multiple of R".into()));
    }
    Ok(c)
}

/// Genus-one one-point function of chart ♥ in the θ-frame, `cR − Δ_{alg,♥}R/6`,
/// in the chart's work variable.
pub fn genus_one_theta(gamma: &Series, a: &Rational) -> Result<Series> {
    let c = genus_one_alg_constant(a)?;
    let delta = propagator_theta(gamma, a)?;
    let r = r_series(gamma.var(), gamma.order() + 2)?;
    Ok(r.scale(&c).checked_sub(&delta.checked_mul(&r)?.scale(&q(1, 6)))?)
}

/// `∂_x F¹_♥` in the chart's flat frame as a series in the chart variable.
pub fn genus_one_form(flat: &FlatCoordinate, a: &Rational) -> Result<Series> {
    let th = match flat.chart {
        Chart::LargeRadius => genus_one_lr_theta(flat)?,
        _ => work_to_chart(&genus_one_theta(&flat.connection()?, a)?),
    };
    Ok(th.checked_div(&flat.theta_x)?)
}

/// `Q(q₁) = −q₁ exp(−3 Σ d² n_{0,d} q₁^d)` from the genus-zero large-radius data.
pub fn modular_q(order: i64) -> Result<Series> {
    let flat = mirror_map_lr(order + 1)?;
    let c3 = yukawa_theta(Var::Y, order + 1)?.checked_div(&flat.theta_x.pow(3)?)?;
    let c3q = c3.compose(&flat.inverse()?)?;
    let inner = c3q.add_constant(&q(1, 3)).theta_primitive()?.truncate(order - 1);
    Ok(inner.scale(&int(-3)).exp()?.shift(1).scale(&int(-1)))
}

/// `E₂ = 1 − 24 Σ σ₁(n) Q^n` as a `q₁`-series.
pub fn e2_series(order: i64) -> Result<Series> {
    let big_q = modular_q(order)?;
    let sigma: Vec<Rational> = (0..order)
        .map(|n| if n == 0 { Rational::zero() } else { int((1..=n).filter(|d| n % d == 0).sum()) })
        .collect();
    let s = Series::from_coeffs(Var::Q, sigma).compose(&big_q)?;
    Ok(s.scale(&int(-24)).add_constant(&Rational::one()))
}

/// `η²⁴ = Q ∏ (1 − Q^n)²⁴` as a `q₁`-series.
pub fn eta24_series(order: i64) -> Result<Series> {
    let big_q = modular_q(order)?;
    let mut prod = Series::one(Var::Q, order);
    for n in 1..order {
        let f = Series::polynomial(Var::Q, &[(0, int(1)), (n, int(-1))], order);
        prod = prod.checked_mul(&f.pow(24)?)?;
    }
    Ok(prod.shift(1).truncate(order).compose(&big_q)?)
}

/// `θt((1+108y)θt + 12(1+27y)θ²t)` re-expanded in `q₁`.
pub fn e2_from_mirror(order: i64) -> Result<Series> {
    let flat = mirror_map_lr(order)?;
    let t1 = &flat.theta_x;
    let t2 = theta(t1)?;
    let a = Series::polynomial(Var::Y, &[(0, int(1)), (1, int(108))], order).checked_mul(t1)?;
    let b = disc_series(Var::Y, order)?.checked_mul(&t2)?.scale(&int(12));
    Ok(t1.checked_mul(&a.checked_add(&b)?)?.compose(&flat.inverse()?)?)
}

/// `−y(1+27y)³(θt)¹²` re-expanded in `q₁`.
pub fn eta24_from_mirror(order: i64) -> Result<Series> {
    let flat = mirror_map_lr(order)?;
    let f = disc_series(Var::Y, order)?
        .pow(3)?
        .checked_mul(&flat.theta_x.pow(12)?)?
        .shift(1)
        .scale(&int(-1))
        .truncate(order);
    Ok(f.compose(&flat.inverse()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lr_flat_coordinate() {
        let f = mirror_map_lr(10).unwrap();
        assert_eq!(f.theta_x.coeff_range(0, 4).unwrap(), vec![int(1), int(-6), int(90), int(-1680)]);
        // θ(t − log y) = −3θg
        let lhs = f.regular.theta().unwrap();
        let rhs = g_series(10).theta().unwrap().scale(&int(-3));
        assert_eq!(lhs, rhs);
        assert_eq!(g_series(4).coeff_range(1, 4).unwrap(), vec![int(2), int(-15), q(560, 3)]);
    }

    #[test]
    fn orbifold_flat_coordinate() {
        let f = mirror_map_orb(20).unwrap();
        assert_eq!(f.regular.coeff(1).unwrap(), int(1));
        assert_eq!(f.regular.coeff(4).unwrap(), q(-1, 648));
        f.regular.check_support(1, 3).unwrap();
        assert_eq!(f.theta_x.coeff(0).unwrap(), int(0));
    }

    #[test]
    fn conifold_flat_coordinate() {
        let f = mirror_map_con(8).unwrap();
        assert_eq!(
            f.regular.coeff_range(1, 6).unwrap(),
            vec![int(1), q(11, 18), q(109, 243), q(9389, 26244), q(88351, 295245)]
        );
        let inv = f.inverse().unwrap();
        assert_eq!(inv.coeff_range(1, 5).unwrap(), vec![int(1), q(-11, 18), q(145, 486), q(-6733, 52488)]);
    }

    #[test]
    fn second_order_annihilates_theta_x() {
        for chart in Chart::ALL {
            let f = mirror_map(chart, 24).unwrap();
            let l = Operator::second_order().apply(&f.theta_x).unwrap();
            assert!(l.is_zero_window(), "{chart}: {l}");
            assert!(l.order() >= 20, "{chart}");
        }
    }

    #[test]
    fn propagator_ode_all_charts() {
        for chart in Chart::ALL {
            let flat = mirror_map(chart, if chart == Chart::Orbifold { 54 } else { 18 }).unwrap();
            for a in [int(0), q(1, 12), q(1, 3)] {
                let res = propagator_ode_residual(&flat.connection().unwrap(), &a).unwrap();
                assert!(res.is_zero_window(), "{chart}: {res}");
                assert!(res.order() >= 15, "{chart}: order {}", res.order());
            }
        }
    }

    #[test]
    fn propagator_values() {
        let a = q(1, 12);
        let lr = propagator_alg(&mirror_map_lr(8).unwrap(), &a).unwrap();
        assert_eq!(lr.series.coeff(0).unwrap(), &a * int(3));
        let con = propagator_alg(&mirror_map_con(8).unwrap(), &a).unwrap();
        assert!(con.series.valuation() >= 0);
        let orb = mirror_map_orb(30).unwrap();
        let p = propagator_alg(&orb, &a).unwrap();
        assert!(p.series.valuation() >= 0);
        let back = p.to_frame(Frame::Flat, &orb).unwrap().to_frame(Frame::Theta, &orb).unwrap();
        assert!(back.series.agrees_with(&p.series));
    }

    #[test]
    fn yukawa_values() {
        let flat = mirror_map_lr(6).unwrap();
        let c3 = yukawa(Chart::LargeRadius, 6).unwrap().checked_div(&flat.theta_x.pow(3).unwrap()).unwrap();
        let c3q = c3.compose(&flat.inverse().unwrap()).unwrap();
        assert_eq!(c3q.coeff(0).unwrap(), q(-1, 3));
        assert_eq!(c3q.coeff(1).unwrap(), int(3));
        let con = yukawa(Chart::Conifold, 8).unwrap();
        assert_eq!(con.coeff_range(-1, 2).unwrap(), vec![q(1, 3), q(-1, 54), q(1, 2916)]);
        let orb = mirror_map_orb(12).unwrap();
        let y = yukawa(Chart::Orbifold, 12).unwrap().checked_mul(&orb.regular.derive().unwrap().pow(-3).unwrap()).unwrap();
        assert_eq!(y.compose(&orb.inverse().unwrap()).unwrap().coeff(0).unwrap(), q(1, 3));
    }

    #[test]
    fn genus_one_constant() {
        assert_eq!(genus_one_alg_constant(&q(1, 12)).unwrap(), q(-1, 24));
        assert_eq!(genus_one_alg_constant(&int(0)).unwrap(), q(-1, 12));
    }

    #[test]
    fn genus_one_forms() {
        let a = q(1, 12);
        let lr = mirror_map_lr(6).unwrap();
        let f = genus_one_form(&lr, &a).unwrap().compose(&lr.inverse().unwrap()).unwrap();
        assert_eq!(f.coeff_range(0, 3).unwrap(), vec![q(-1, 12), q(1, 4), q(-3, 4)]);
        let con = mirror_map_con(8).unwrap();
        let f = genus_one_form(&con, &a).unwrap().compose(&con.inverse().unwrap()).unwrap();
        assert_eq!(f.coeff_range(-1, 2).unwrap(), vec![q(-1, 12), q(5, 216), q(-1, 11664)]);
        let orb = mirror_map_orb(24).unwrap();
        let f = genus_one_form(&orb, &a).unwrap().compose(&orb.inverse().unwrap()).unwrap();
        assert_eq!(f.coeff(0).unwrap(), int(0));
        // ∂F¹ = Σ n_{1,k} 𝔱^(k−1)/(k−1)!, n_{1,6} = 1/243
        assert_eq!(f.coeff(5).unwrap() * int(120), q(1, 243));
    }

    #[test]
    fn modular_identities() {
        let e2 = e2_series(16).unwrap();
        assert_eq!(e2.coeff(0).unwrap(), int(1));
        assert!(e2.agrees_with(&e2_from_mirror(16).unwrap()));
        assert!(e2.order() >= 16);
        let eta = eta24_series(16).unwrap();
        assert!(eta.agrees_with(&eta24_from_mirror(16).unwrap()));
        assert!(eta.order() >= 16);
    }
}
