//! Genus-by-genus pipeline: fit the holomorphic ambiguity, seal correlators in
//! all three charts, and extract the invariant tables.
//!
//! At genus `g` the algebraic 0-point function is `Σ c_i R^i`. In every chart
//! `Ĉ_♥^(g)_0 = Σ c_i R^i − S_♥`, where `S_♥` sums the graphs with at least one
//! edge, lower-genus ♥ vertices and propagator `−Δ_{alg,♥}`. The constants
//! `c_i` are fixed by low-degree large-radius invariants, by the conifold gap,
//! or by both.

pub mod cache;
pub mod gv;
pub mod tables;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fock::{self, edge_sum, extend_jets, wick_transform, CorrelatorFamily, FockError, Polarization};
use crate::linalg::{self, LinError};
use crate::mirror::chart::r_series;
use crate::mirror::{self, work_to_chart, Chart, FlatCoordinate, Frame, MirrorError, PropagatorSeries};
use crate::rational::{bernoulli, binomial, factorial, int, q, Rational};
use crate::rpoly::RPoly;
use crate::series::{Series, SeriesError};
use gv::GvError;
use tables::{reference, InvariantTables, Table};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SolverError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Gv(#[from] GvError),
    #[error("genus {g}: ambiguity conditions are inconsistent at {condition}")]
    Inconsistent { g: u32, condition: Condition },
    #[error("genus {g}: ambiguity system is singular")]
    Singular { g: u32 },
    #[error("invalid inputs: {0}")]
    Inputs(String),
    #[error("graph sum and Wick transform disagree on {chart} at genus {g}")]
    OracleMismatch { chart: Chart, g: u32 },
    #[error("{0}")]
    Support(String),
    #[error("window too small: {0}")]
    Precision(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// Which conditions fix the holomorphic ambiguity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `n_(g,d)` for `0 ≤ d ≤ 2g−2`.
    GwInput,
    /// `n_(g,0)` and the conifold gap.
    Gap,
    /// Low-degree invariants and the gap together, checked for consistency.
    #[default]
    Joint,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::GwInput => "gw-input",
            Mode::Gap => "gap",
            Mode::Joint => "joint",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Mode::GwInput, Mode::Gap, Mode::Joint]
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected gw-input, gap or joint)"))
    }
}

/// One ambiguity condition, for error reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Coefficient of `y^k` at large radius.
    LargeRadius(i64),
    /// Coefficient of `x_con^k` at the conifold.
    Gap(i64),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::LargeRadius(k) => write!(f, "large-radius coefficient y^{k}"),
            Condition::Gap(k) => write!(f, "conifold coefficient x_con^{k}"),
        }
    }
}

/// Genus-`g` inputs: Gopakumar–Vafa invariants at degrees `1..=2g−2` and the
/// degree-0 invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusInputs {
    pub g: u32,
    pub gv_low: BTreeMap<u32, Rational>,
    pub gw0: Option<Rational>,
    pub mode: Mode,
}

impl GenusInputs {
    /// Embedded Gopakumar–Vafa inputs with `n_(g,0) = 0`.
    pub fn defaults(g: u32, mode: Mode) -> GenusInputs {
        GenusInputs { g, gv_low: reference().gv_inputs(g), gw0: Some(Rational::zero()), mode }
    }

    pub fn validate(&self) -> Result<()> {
        if self.g < 2 {
            return Err(SolverError::Inputs(format!("genus {} needs no inputs", self.g)));
        }
        let need_gv = matches!(self.mode, Mode::GwInput | Mode::Joint);
        let need_gw0 = matches!(self.mode, Mode::GwInput | Mode::Gap);
        if need_gv {
            for d in 1..=2 * self.g - 2 {
                if !self.gv_low.contains_key(&d) {
                    return Err(SolverError::Inputs(format!(
                        "genus {} in {} mode needs the Gopakumar-Vafa invariant of degree {d}",
                        self.g, self.mode
                    )));
                }
            }
        }
        if need_gw0 && self.gw0.is_none() {
            return Err(SolverError::Inputs(format!("genus {} in {} mode needs n_(g,0)", self.g, self.mode)));
        }
        Ok(())
    }
}

/// `Σ c_i (1+27y)^(−i)` for `0 ≤ i ≤ 2g−2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityFunction {
    pub g: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub a: Rational,
    #[serde(with = "crate::rational::serde_vec")]
    pub coeffs: Vec<Rational>,
}

impl AmbiguityFunction {
    pub fn to_rpoly(&self) -> RPoly {
        RPoly::new(self.coeffs.clone())
    }
}

/// Series windows: `y`-coefficients at large radius, `w = 𝔶³` coefficients at
/// the orbifold point and `s`-coefficients at the conifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub lr: i64,
    pub orb: i64,
    pub con: i64,
}

impl Orders {
    /// Windows sufficient for the requested table ranges, with guard terms.
    pub fn for_ranges(max_genus: u32, max_degree: i64, max_insertions: i64, con_max: i64) -> Orders {
        let d = max_degree.max(2 * max_genus as i64 - 2);
        Orders {
            lr: d + 5,
            orb: max_insertions / 3 + 2,
            con: con_max + 4 * max_genus as i64 + 10,
        }
    }

    pub fn get(&self, chart: Chart) -> i64 {
        match chart {
            Chart::LargeRadius => self.lr,
            Chart::Orbifold => self.orb,
            Chart::Conifold => self.con,
        }
    }

    pub fn set(&mut self, chart: Chart, v: i64) {
        match chart {
            Chart::LargeRadius => self.lr = v,
            Chart::Orbifold => self.orb = v,
            Chart::Conifold => self.con = v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub a: Rational,
    pub max_genus: u32,
    pub max_degree: i64,
    pub max_insertions: i64,
    /// Highest conifold Laurent degree reported.
    pub con_max: i64,
    pub orders: Orders,
    /// Re-derive every edge sum with the graph enumeration for `g ≤ 4`.
    pub check_oracle: bool,
}

impl SolverConfig {
    pub fn new(max_genus: u32) -> SolverConfig {
        let (d, k, c) = (15, 27, 4);
        SolverConfig {
            a: q(1, 12),
            max_genus,
            max_degree: d,
            max_insertions: k,
            con_max: c,
            orders: Orders::for_ranges(max_genus, d, k, c),
            check_oracle: false,
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::new(7)
    }
}

/// Per-chart state: mirror data and the sealed θ-frame family.
#[derive(Clone, Debug)]
pub struct ChartState {
    pub chart: Chart,
    pub flat: FlatCoordinate,
    /// Connection `θ²x/θx` in the work variable.
    pub gamma: Series,
    /// `Δ_{alg,♥}` in the θ⊗θ frame and the work variable.
    pub prop: PropagatorSeries,
    /// `R` in the work variable.
    pub r: Series,
    /// Chart variable as a series in the flat coordinate.
    pub inverse: Series,
    pub family: CorrelatorFamily<Series>,
    /// `S_♥` by genus.
    pub edge_sums: BTreeMap<u32, Series>,
}

impl ChartState {
    fn new(chart: Chart, order: i64, a: &Rational) -> Result<ChartState> {
        let chart_order = match chart {
            Chart::Orbifold => 3 * order + 6,
            _ => order + 2,
        };
        let flat = mirror::mirror_map(chart, chart_order)?;
        let gamma = flat.connection()?.truncate(order);
        let var = gamma.var();
        let prop = PropagatorSeries {
            chart,
            frame: Frame::Theta,
            series: mirror::propagator_theta(&gamma, a)?.truncate(order),
            a: a.clone(),
        };
        let r = r_series(var, order)?;
        let inverse = flat.inverse()?;
        let mut family = CorrelatorFamily::new(chart.into(), chart, Frame::Theta);
        family.insert(0, 3, mirror::yukawa_theta(var, order)?)?;
        let g1 = match chart {
            Chart::LargeRadius => mirror::genus_one_lr_theta(&flat)?.truncate(order),
            _ => mirror::genus_one_theta(&gamma, a)?.truncate(order),
        };
        family.insert(1, 1, g1)?;
        Ok(ChartState { chart, flat, gamma, prop, r, inverse, family, edge_sums: BTreeMap::new() })
    }

    fn extend(&mut self, g: u32, n_from: u32, n_to: u32) -> Result<()> {
        if n_to > n_from {
            extend_jets(&mut self.family, &self.gamma, g, n_from, n_to)?;
        }
        Ok(())
    }

    /// `S_♥` at genus `g` from the sealed lower genera, by the Wick route.
    fn compute_edge_sum(&self, g: u32, check_oracle: bool) -> Result<Series> {
        let lower = self.family.filtered(|h, _| h < g);
        let minus = -&self.prop.series;
        let w = wick_transform(&lower, &minus, g, 0);
        let s = w.entry(g, 0)?.clone();
        if check_oracle && g <= 4 {
            let graphs = edge_sum(&lower, &minus, g, 0)?.expect("genus ≥ 2 has graphs with edges");
            if graphs != s {
                return Err(SolverError::OracleMismatch { chart: self.chart, g });
            }
        }
        Ok(s)
    }

    fn amb_series(&self, amb: &AmbiguityFunction) -> Result<Series> {
        Ok(amb.to_rpoly().eval(&self.r)?)
    }

    /// Flat-frame correlator `C^(g)_n` re-expanded in the flat coordinate.
    pub fn flat_correlator(&self, g: u32, n: u32) -> Result<Series> {
        let e = work_to_chart(self.family.entry(g, n)?);
        let f = e.checked_div(&self.flat.theta_x.pow(n as i64)?)?;
        Ok(f.compose(&self.inverse)?)
    }
}

fn ambiguity_rows_lr(ks: std::ops::RangeInclusive<i64>, cols: std::ops::RangeInclusive<usize>) -> Vec<Vec<Rational>> {
    // [y^k] (1+27y)^(−i) = C(i+k−1, k)(−27)^k
    ks.map(|k| {
        cols.clone()
            .map(|i| {
                if i == 0 {
                    return if k == 0 { Rational::one() } else { Rational::zero() };
                }
                let b = binomial((i as i64 + k - 1) as u64, k as u64);
                Rational::from_integer(b * BigInt::from(-27).pow(k as u32))
            })
            .collect()
    })
    .collect()
}

/// `B_(2g) 3^(g−1) / (2g(2g−2))`.
pub fn gap_leading(g: u32) -> Rational {
    let b = bernoulli(2 * g as usize)[2 * g as usize].clone();
    b * Rational::from_integer(BigInt::from(3).pow(g - 1)) / int(2 * g as i64 * (2 * g as i64 - 2))
}

pub struct Solver {
    pub config: SolverConfig,
    pub charts: Vec<ChartState>,
    pub ambiguities: BTreeMap<u32, AmbiguityFunction>,
    /// Large-radius invariants of sealed genera, `d ≤ max(max_degree, 2·max_genus−2)`.
    gw_lr: Table,
    gv_lr: Table,
    sealed: u32,
}

impl Solver {
    /// Seals genus 0 and 1 from the closed forms.
    pub fn new(config: SolverConfig) -> Result<Solver> {
        let charts: Vec<ChartState> = Chart::ALL
            .par_iter()
            .map(|&c| ChartState::new(c, config.orders.get(c), &config.a))
            .collect::<Result<_>>()?;
        let mut s = Solver {
            config,
            charts,
            ambiguities: BTreeMap::new(),
            gw_lr: Table::new(),
            gv_lr: Table::new(),
            sealed: 1,
        };
        let top = s.config.max_genus;
        s.charts.par_iter_mut().try_for_each(|c| -> Result<()> {
            c.extend(0, 3, (2 * top).max(5))?;
            c.extend(1, 1, (2 * top).saturating_sub(2).max(3))
        })?;
        for g in 0..=1 {
            s.record_lr(g)?;
        }
        Ok(s)
    }

    pub fn sealed_genus(&self) -> u32 {
        self.sealed
    }

    pub fn chart(&self, chart: Chart) -> &ChartState {
        &self.charts[Chart::ALL.iter().position(|&c| c == chart).expect("all charts present")]
    }

    fn lr_degree(&self) -> i64 {
        self.config.max_degree.max(2 * self.config.max_genus as i64 - 2)
    }

    fn record_lr(&mut self, g: u32) -> Result<()> {
        let d = self.lr_degree();
        for (k, v) in self.extract_gw_lr(g, d)? {
            self.gw_lr.insert((g, k), v);
        }
        self.gv_lr = gv::gv_from_gw(&self.gw_lr, g, d)?;
        Ok(())
    }

    /// Large-radius Gromov–Witten invariants of genus `g` at degrees `1..=d_max`.
    pub fn extract_gw_lr(&self, g: u32, d_max: i64) -> Result<BTreeMap<i64, Rational>> {
        let c = self.chart(Chart::LargeRadius);
        let (n, weight): (u32, fn(i64) -> Rational) = match g {
            0 => (3, |d| Rational::one() / int(d * d * d)),
            1 => (1, |d| Rational::one() / int(d)),
            _ => (0, |_| Rational::one()),
        };
        let f = c.flat_correlator(g, n)?;
        if f.order() <= d_max {
            return Err(SolverError::Precision(format!(
                "large-radius genus {g} known to q^{} but degree {d_max} requested",
                f.order() - 1
            )));
        }
        (1..=d_max).map(|d| Ok((d, f.coeff(d)? * weight(d)))).collect()
    }

    /// Orbifold invariants `n^orb_(g,k)` for `k ≡ 0 mod 3`, `3 ≤ k ≤ k_max`.
    pub fn extract_gw_orb(&self, g: u32, k_max: i64) -> Result<BTreeMap<i64, Rational>> {
        let c = self.chart(Chart::Orbifold);
        let n: i64 = match g {
            0 => 3,
            1 => 1,
            _ => 0,
        };
        let f = c.flat_correlator(g, n as u32)?;
        f.check_support((-n).rem_euclid(3), 3)
            .map_err(|e| SolverError::Support(format!("orbifold genus {g}: {e}")))?;
        if f.order() <= k_max - n {
            return Err(SolverError::Precision(format!(
                "orbifold genus {g} known to 𝔱^{} but {k_max} insertions requested",
                f.order() - 1 + n
            )));
        }
        (1..=k_max / 3)
            .map(|j| {
                let k = 3 * j;
                let c = f.coeff(k - n)? * Rational::from_integer(factorial((k - n) as u64));
                Ok((k, c))
            })
            .collect()
    }

    /// Conifold Laurent coefficients of `F_g(x_con)` at degrees `lo..=hi`, after
    /// checking that nothing below `2 − 2g` occurs.
    pub fn extract_gw_con(&self, g: u32, lo: i64, hi: i64) -> Result<BTreeMap<i64, Rational>> {
        if g < 2 {
            return Err(SolverError::Inputs("conifold tables start at genus 2".into()));
        }
        let f = self.chart(Chart::Conifold).flat_correlator(g, 0)?;
        if f.valuation() < 2 - 2 * g as i64 {
            return Err(SolverError::Support(format!(
                "conifold genus {g} has a pole of order {} beyond the gap",
                -f.valuation()
            )));
        }
        if f.order() <= hi {
            return Err(SolverError::Precision(format!(
                "conifold genus {g} known to x_con^{} but degree {hi} requested",
                f.order() - 1
            )));
        }
        (lo..=hi).map(|k| Ok((k, f.coeff(k)?))).collect()
    }

    /// Edge sums at genus `g` in all charts.
    pub fn edge_sums(&mut self, g: u32) -> Result<()> {
        let check = self.config.check_oracle;
        self.charts.par_iter_mut().try_for_each(|c| -> Result<()> {
            if !c.edge_sums.contains_key(&g) {
                let s = c.compute_edge_sum(g, check)?;
                c.edge_sums.insert(g, s);
            }
            Ok(())
        })
    }

    /// Fixes `c_0..c_(2g−2)` at genus `g = sealed + 1`.
    pub fn ambiguity_solve(&mut self, inputs: &GenusInputs) -> Result<AmbiguityFunction> {
        inputs.validate()?;
        let g = inputs.g;
        if g != self.sealed + 1 {
            return Err(SolverError::Inputs(format!("genus {g} requested but genus {} is sealed", self.sealed)));
        }
        self.edge_sums(g)?;
        let top = 2 * g as i64 - 2;
        let gw0 = inputs.gw0.clone().unwrap_or_else(Rational::zero);

        // Large-radius rows: [y^k](Σ c_i R^i) = [y^k](Σ_d n_(g,d) q^d + S_LR).
        let lr = self.chart(Chart::LargeRadius);
        let s_lr = &lr.edge_sums[&g];
        let lr_rhs = |gw: &BTreeMap<u32, Rational>| -> Result<Vec<Rational>> {
            let qy = lr.flat.flat_series()?;
            let mut f = Series::constant(qy.var(), gw0.clone(), top + 1);
            for (&d, v) in gw {
                f = f.checked_add(&qy.pow(d as i64)?.scale(v))?;
            }
            let f = f.checked_add(s_lr)?;
            (0..=top).map(|k| Ok(f.coeff(k)?)).collect()
        };

        // Gap rows: [x^k](Σ c_i s(x)^(−i)) = [x^k](S_con∘s) + target_k for 2−2g ≤ k ≤ −1.
        let gap_rows = || -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
            let con = self.chart(Chart::Conifold);
            let s_x = &con.inverse;
            let s_con = con.edge_sums[&g].compose(s_x)?;
            let pows: Vec<Series> = (1..=top).map(|i| s_x.pow(-i)).collect::<std::result::Result<_, _>>()?;
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for k in 2 - 2 * g as i64..=-1 {
                rows.push(pows.iter().map(|p| p.coeff(k)).collect::<std::result::Result<Vec<_>, _>>()?);
                let target = if k == 2 - 2 * g as i64 { gap_leading(g) } else { Rational::zero() };
                rhs.push(s_con.coeff(k)? + target);
            }
            Ok((rows, rhs))
        };

        let gw_low = || -> Result<BTreeMap<u32, Rational>> {
            let mut gv_all = self.gv_lr.clone();
            gv_all.extend(inputs.gv_low.iter().map(|(&d, v)| ((g, d as i64), v.clone())));
            (1..=top as u32).map(|d| Ok((d, gv::gw_entry(&gv_all, g, d as i64)?))).collect()
        };

        let map_err = |e: LinError, labels: &[Condition]| match e {
            LinError::Inconsistent(i) => SolverError::Inconsistent { g, condition: labels[i] },
            _ => SolverError::Singular { g },
        };

        let coeffs = match inputs.mode {
            Mode::GwInput => {
                let rows = ambiguity_rows_lr(0..=top, 0..=top as usize);
                let labels: Vec<Condition> = (0..=top).map(Condition::LargeRadius).collect();
                linalg::solve(&rows, &lr_rhs(&gw_low()?)?).map_err(|e| map_err(e, &labels))?
            }
            Mode::Gap | Mode::Joint => {
                let (mut rows, mut rhs) = gap_rows()?;
                let mut labels: Vec<Condition> = (2 - 2 * g as i64..=-1).map(Condition::Gap).collect();
                let lr_vals = if inputs.mode == Mode::Joint { lr_rhs(&gw_low()?)? } else { lr_rhs(&BTreeMap::new())? };
                if inputs.mode == Mode::Joint {
                    rows.extend(ambiguity_rows_lr(1..=top, 1..=top as usize));
                    rhs.extend(lr_vals[1..].iter().cloned());
                    labels.extend((1..=top).map(Condition::LargeRadius));
                }
                let tail = linalg::solve(&rows, &rhs).map_err(|e| map_err(e, &labels))?;
                // c_0 from the y⁰ condition: Σ c_i = n_(g,0) + S_LR(0).
                let c0 = tail.iter().fold(lr_vals[0].clone(), |acc, c| acc - c);
                std::iter::once(c0).chain(tail).collect()
            }
        };
        Ok(AmbiguityFunction { g, a: self.config.a.clone(), coeffs })
    }

    /// Seals genus `g = sealed + 1` in all charts with a fixed ambiguity.
    pub fn seal_genus(&mut self, amb: AmbiguityFunction) -> Result<()> {
        let g = amb.g;
        if g != self.sealed + 1 {
            return Err(SolverError::Inputs(format!("genus {g} requested but genus {} is sealed", self.sealed)));
        }
        self.edge_sums(g)?;
        let n_to = (2 * (self.config.max_genus.saturating_sub(g))).max(2);
        self.charts.par_iter_mut().try_for_each(|c| -> Result<()> {
            let f = c.amb_series(&amb)?.checked_sub(&c.edge_sums[&g])?;
            c.family.insert(g, 0, f)?;
            c.extend(g, 0, n_to)
        })?;
        self.ambiguities.insert(g, amb);
        self.sealed = g;
        self.record_lr(g)?;
        Ok(())
    }

    /// Extends every sealed genus `h ≤ g_max` to at least `n_max + 2(g_max − h)`
    /// insertions in all charts, enough for transforms up to `(g_max, n_max)`.
    pub fn ensure_jets(&mut self, g_max: u32, n_max: u32) -> Result<()> {
        let top = g_max.min(self.sealed);
        self.charts.par_iter_mut().try_for_each(|c| -> Result<()> {
            for h in 0..=top {
                let want = n_max + 2 * (g_max - h);
                let have = c.family.entries().keys().filter(|k| k.0 == h).map(|k| k.1).max().expect("sealed");
                c.extend(h, have, want)?;
            }
            Ok(())
        })
    }

    /// Seals genus `g` from stored 0-point series (one per chart, in
    /// [`Chart::ALL`] order) without recomputing edge sums.
    pub fn seal_loaded(&mut self, amb: AmbiguityFunction, zero_point: Vec<Series>) -> Result<()> {
        let g = amb.g;
        if g != self.sealed + 1 || zero_point.len() != self.charts.len() {
            return Err(SolverError::Inputs(format!("cannot load genus {g} after genus {}", self.sealed)));
        }
        let n_to = (2 * (self.config.max_genus.saturating_sub(g))).max(2);
        self.charts.par_iter_mut().zip(zero_point).try_for_each(|(c, f)| -> Result<()> {
            if f.var() != c.gamma.var() {
                return Err(SolverError::Cache(format!("stored {} series is in {}", c.chart, f.var())));
            }
            c.family.insert(g, 0, f)?;
            c.extend(g, 0, n_to)
        })?;
        self.ambiguities.insert(g, amb);
        self.sealed = g;
        self.record_lr(g)?;
        Ok(())
    }

    /// Solves and seals the next genus.
    pub fn step(&mut self, inputs: &GenusInputs) -> Result<&AmbiguityFunction> {
        let amb = self.ambiguity_solve(inputs)?;
        self.seal_genus(amb)?;
        Ok(&self.ambiguities[&inputs.g])
    }

    /// All five tables over the configured ranges for the sealed genera.
    pub fn tables(&self) -> Result<InvariantTables> {
        let cfg = &self.config;
        let top = self.sealed;
        let per_genus: Vec<Result<InvariantTables>> = (0..=top)
            .into_par_iter()
            .map(|g| {
                let mut t = InvariantTables::default();
                for (d, v) in self.extract_gw_lr(g, cfg.max_degree)? {
                    t.gw_y.insert((g, d), v);
                }
                for (k, v) in self.extract_gw_orb(g, cfg.max_insertions)? {
                    t.gw_orb.insert((g, k), v);
                }
                if g >= 2 {
                    let lo = 2 - 2 * cfg.max_genus.max(g) as i64;
                    for (k, v) in self.extract_gw_con(g, lo, cfg.con_max)? {
                        t.gw_con.insert((g, k), v);
                    }
                    let amb = &self.ambiguities[&g];
                    let width = 2 * cfg.max_genus.max(g) as usize - 2;
                    for i in 0..=width {
                        let c = amb.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                        t.ambiguity.insert((g, i as i64), c);
                    }
                }
                Ok(t)
            })
            .collect();
        let mut out = InvariantTables::default();
        for t in per_genus {
            let t = t?;
            out.gw_y.extend(t.gw_y);
            out.gw_orb.extend(t.gw_orb);
            out.gw_con.extend(t.gw_con);
            out.ambiguity.extend(t.ambiguity);
        }
        out.gv_y = gv::gv_from_gw(&out.gw_y, top, cfg.max_degree)?;
        Ok(out)
    }
}

/// Genus inputs keyed by genus.
pub type InputSet = BTreeMap<u32, GenusInputs>;

/// Embedded defaults for `2 ≤ g ≤ max_genus`.
pub fn default_inputs(max_genus: u32, mode: Mode) -> InputSet {
    (2..=max_genus).map(|g| (g, GenusInputs::defaults(g, mode))).collect()
}

/// Runs the whole pipeline up to `config.max_genus`.
pub fn run(config: SolverConfig, inputs: &InputSet) -> Result<(Solver, InvariantTables)> {
    let mut s = Solver::new(config)?;
    for g in 2..=s.config.max_genus {
        let inp = inputs.get(&g).ok_or_else(|| SolverError::Inputs(format!("no inputs for genus {g}")))?;
        s.step(inp)?;
    }
    let t = s.tables()?;
    Ok((s, t))
}

/// Alg-side family evaluated from the sealed ambiguities (for the anomaly check).
pub fn algebraic_family(s: &Solver, g_max: u32, n_max: u32) -> Result<CorrelatorFamily<RPoly>> {
    let amb: BTreeMap<u32, RPoly> = s.ambiguities.iter().map(|(&g, a)| (g, a.to_rpoly())).collect();
    Ok(fock::anomaly_family(&s.config.a, &amb, g_max, n_max)?)
}

/// `Polarization` of a chart, re-exported for callers that only use the solver.
pub fn polarization(chart: Chart) -> Polarization {
    chart.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_leading_values() {
        assert_eq!(gap_leading(2), q(-1, 80));
        assert_eq!(gap_leading(3), q(1, 112));
        assert_eq!(gap_leading(4), q(-3, 160));
    }

    #[test]
    fn genus_two_all_modes() {
        let mut cfg = SolverConfig::new(2);
        cfg.check_oracle = true;
        for mode in [Mode::GwInput, Mode::Gap, Mode::Joint] {
            let mut s = Solver::new(cfg.clone()).unwrap();
            let amb = s.ambiguity_solve(&GenusInputs::defaults(2, mode)).unwrap();
            assert_eq!(amb.coeffs, vec![q(-1, 2160), q(1, 4320), q(-1, 7680)], "{mode}");
        }
    }
}
