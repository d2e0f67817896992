//! Verification suites run by the CLI and the acceptance tests.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::tables::{reference, InvariantTables, TableKind};
use super::{gap_leading, Result, Solver, SolverConfig, SolverError};
use crate::fock::{self, feynman_transform, transform, wick_transform, Polarization};
use crate::graphs::{brute_force_oracle, enumerate};
use crate::linalg::{self, LinError};
use crate::mirror::{self, Chart};
use crate::rational::{self, binomial, int, Rational};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// A table cell that differs from the reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub table: TableKind,
    pub genus: u32,
    pub index: i64,
    pub expected: Rational,
    pub got: Option<Rational>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let got = self.got.as_ref().map_or("missing".to_string(), rational::to_canonical);
        write!(
            f,
            "{} genus {} {} {}: expected {}, got {}",
            self.table,
            self.genus,
            self.table.index_name(),
            self.index,
            rational::to_canonical(&self.expected),
            got
        )
    }
}

/// Reference cells of `kind` within the ranges of `config`.
fn in_range(kind: TableKind, config: &SolverConfig, g: u32, i: i64) -> bool {
    if g > config.max_genus {
        return false;
    }
    match kind {
        TableKind::GwY | TableKind::GvY => i <= config.max_degree,
        TableKind::GwOrb => i <= config.max_insertions,
        TableKind::GwCon => i <= config.con_max && i >= 2 - 2 * config.max_genus as i64,
        TableKind::Ambiguity => i <= 2 * config.max_genus as i64 - 2,
    }
}

/// Cell-by-cell comparison with the embedded reference tables.
pub fn table_mismatches(tables: &InvariantTables, kind: TableKind, config: &SolverConfig) -> (usize, Vec<Mismatch>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for e in reference().entries(kind) {
        if !in_range(kind, config, e.genus, e.index) {
            continue;
        }
        checked += 1;
        let got = tables.get(kind).get(&(e.genus, e.index));
        if got != Some(&e.value) {
            bad.push(Mismatch { table: kind, genus: e.genus, index: e.index, expected: e.value.clone(), got: got.cloned() });
        }
    }
    (checked, bad)
}

pub fn verify_tables(tables: &InvariantTables, config: &SolverConfig) -> Report {
    let mut r = Report::default();
    for kind in TableKind::ALL {
        let (n, bad) = table_mismatches(tables, kind, config);
        let detail = match bad.first() {
            None => format!("{n} entries match"),
            Some(m) => format!("{} of {n} entries differ; first: {m}", bad.len()),
        };
        r.push(format!("table {kind}"), bad.is_empty(), detail);
    }
    let non_int: Vec<_> = tables.gv_y.iter().filter(|(_, v)| !rational::is_integer(v)).collect();
    r.push(
        "gv integrality",
        non_int.is_empty(),
        match non_int.first() {
            None => format!("all {} Gopakumar-Vafa invariants are integers", tables.gv_y.len()),
            Some(((g, d), v)) => format!("genus {g} degree {d} is {v}"),
        },
    );
    let off: Vec<_> = tables.gw_orb.keys().filter(|(_, k)| k % 3 != 0).collect();
    r.push("orbifold support", off.is_empty(), format!("{} entries off k ≡ 0 mod 3", off.len()));
    r
}

/// Conifold gap at genus `g`: `F_g = B_(2g) 3^(g−1)/(2g(2g−2)) x_con^(2−2g) + O(1)`.
pub fn verify_gap(solver: &Solver, g: u32) -> Result<Report> {
    let mut r = Report::default();
    let f = solver.chart(Chart::Conifold).flat_correlator(g, 0)?;
    let lead = 2 - 2 * g as i64;
    let expected = gap_leading(g);
    let got = f.coeff(lead)?;
    r.push(
        format!("gap genus {g} leading"),
        f.valuation() == lead && got == expected,
        format!("x_con^{lead}: expected {expected}, got {got}"),
    );
    let nonzero: Vec<i64> = (lead + 1..0).filter(|&k| !f.coeff(k).map(|c| c.is_zero()).unwrap_or(false)).collect();
    r.push(
        format!("gap genus {g} vanishing"),
        nonzero.is_empty(),
        if nonzero.is_empty() {
            format!("x_con^{}..x_con^-1 vanish", lead + 1)
        } else {
            format!("nonzero at x_con^{:?}", nonzero)
        },
    );
    Ok(r)
}

pub fn verify_e2(order: i64) -> Result<Report> {
    let mut r = Report::default();
    let lhs = mirror::e2_series(order + 1)?;
    let rhs = mirror::e2_from_mirror(order + 1)?;
    let d = lhs.checked_sub(&rhs)?;
    r.push("E2 identity", d.is_zero_window() && d.order() > order, format!("equal through q^{}", d.order() - 1));
    Ok(r)
}

pub fn verify_eta(order: i64) -> Result<Report> {
    let mut r = Report::default();
    let lhs = mirror::eta24_series(order + 1)?;
    let rhs = mirror::eta24_from_mirror(order + 1)?;
    let d = lhs.checked_sub(&rhs)?;
    r.push("eta^24 identity", d.is_zero_window() && d.order() > order, format!("equal through q^{}", d.order() - 1));
    Ok(r)
}

/// The propagator equation in every chart, to `order` coefficients in the
/// chart variable (the orbifold chart is checked in `w = 𝔶³`).
pub fn verify_propagator_ode(order: i64, a_values: &[Rational]) -> Result<Report> {
    let mut r = Report::default();
    for chart in Chart::ALL {
        let n = if chart == Chart::Orbifold { 3 * order + 9 } else { order + 2 };
        let flat = mirror::mirror_map(chart, n)?;
        let gamma = flat.connection()?;
        for a in a_values {
            let res = mirror::propagator_ode_residual(&gamma, a)?;
            r.push(
                format!("propagator equation {chart} a={a}"),
                res.is_zero_window() && res.order() > order,
                format!("residual vanishes through order {}", res.order() - 1),
            );
        }
    }
    Ok(r)
}

/// Graph sums against the Wick route on the pipeline families for `g ≤ g_max`,
/// `n ≤ n_max`, with the propagator used by the pipeline.
pub fn verify_oracle(solver: &mut Solver, g_max: u32, n_max: u32) -> Result<Report> {
    let g_max = g_max.min(solver.sealed_genus());
    solver.ensure_jets(g_max, n_max)?;
    let mut r = Report::default();
    for c in &solver.charts {
        let fam = c.family.filtered(|h, _| h <= g_max);
        let minus = -&c.prop.series;
        let wick = wick_transform(&fam, &minus, g_max, n_max);
        let mut agree = 0;
        let mut first_bad = None;
        for g in 0..=g_max {
            for n in 0..=n_max {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                let graphs = feynman_transform(&fam, &minus, g, n)?;
                if wick.get(g, n) == Some(&graphs) {
                    agree += 1;
                } else if first_bad.is_none() {
                    first_bad = Some((g, n));
                }
            }
        }
        r.push(
            format!("graph sum vs Wick {}", c.chart),
            first_bad.is_none(),
            match first_bad {
                None => format!("{agree} correlators agree for g ≤ {g_max}, n ≤ {n_max}"),
                Some((g, n)) => format!("first disagreement at ({g}, {n})"),
            },
        );
    }
    Ok(r)
}

/// Alg-side correlators from the anomaly recursion against the transforms of
/// every chart's family, for `g ≤ g_max`, `n ≤ n_max`.
pub fn verify_anomaly(solver: &mut Solver, g_max: u32, n_max: u32) -> Result<Report> {
    let g_max = g_max.min(solver.sealed_genus());
    solver.ensure_jets(g_max, n_max)?;
    let alg = super::algebraic_family(solver, g_max, n_max)?;
    let mut r = Report::default();
    for c in &solver.charts {
        let fam = c.family.filtered(|h, _| h <= g_max);
        let moved = transform(&fam, Polarization::Algebraic, &c.prop, g_max, n_max)?;
        let evaluated = fock::evaluate(&alg, c.chart, c.r.var(), c.r.order())?;
        let mut first_bad = None;
        let mut agree = 0;
        for (&(g, n), s) in moved.entries() {
            let Some(e) = evaluated.get(g, n) else { continue };
            if s.agrees_with(e) {
                agree += 1;
            } else if first_bad.is_none() {
                first_bad = Some((g, n));
            }
        }
        r.push(
            format!("anomaly recursion vs {} transform", c.chart),
            first_bad.is_none() && agree > 0,
            match first_bad {
                None => format!("{agree} alg-side correlators agree for g ≤ {g_max}, n ≤ {n_max}"),
                Some((g, n)) => format!("first disagreement at ({g}, {n})"),
            },
        );
    }
    Ok(r)
}

/// Propagator additivity as transform composition, on the large-radius family:
/// `T[3(a₁−a₂)] ∘ T[−Δ_{alg(a₁)}] = T[−Δ_{alg(a₂)}]`, and the round trip
/// `♥ → alg → ♥` in every chart, at `(1,1)` and `(2,0)`.
pub fn verify_cocycle(solver: &mut Solver, a2: &Rational) -> Result<Report> {
    let mut r = Report::default();
    if solver.sealed_genus() < 2 {
        return Err(SolverError::Inputs("cocycle check needs genus 2 sealed".into()));
    }
    solver.ensure_jets(2, 1)?;
    let a1 = solver.config.a.clone();
    let points = [(1u32, 1u32), (2, 0)];
    for c in &solver.charts {
        let fam = c.family.filtered(|h, _| h <= 2);
        let d1 = -&c.prop.series;
        let shift = (&a1 - a2) * int(3);
        let step = wick_transform(&fam, &d1, 2, 4);
        let shifted = Series::constant(d1.var(), shift.clone(), d1.order());
        let two = wick_transform(&step, &shifted, 2, 1);
        let direct = wick_transform(&fam, &d1.add_constant(&shift), 2, 1);
        let back = wick_transform(&step, &c.prop.series, 2, 1);
        let ok_sum = points.iter().all(|&(g, n)| two.get(g, n) == direct.get(g, n));
        let ok_round = points.iter().all(|&(g, n)| match (back.get(g, n), fam.get(g, n)) {
            (Some(x), Some(y)) => x.agrees_with(y),
            _ => false,
        });
        r.push(format!("cocycle {}", c.chart), ok_sum, format!("a = {a1} then shift to a = {a2}"));
        r.push(format!("round trip {}", c.chart), ok_round, "to the algebraic opposite and back");
    }
    Ok(r)
}

/// Every `(g, n)` with `g ≤ 3` the brute-force oracle is run on: `n ≤ 3` below
/// genus 3 and `n ≤ 2` at genus 3.
pub const GRAPH_CASES: [(u32, usize); 12] =
    [(0, 3), (1, 1), (1, 2), (1, 3), (2, 0), (2, 1), (2, 2), (2, 3), (3, 0), (3, 1), (3, 2), (0, 4)];

/// Class counts and automorphism orders of the graph enumeration against the
/// brute-force oracle.
pub fn verify_graphs(cases: &[(u32, usize)]) -> Result<Report> {
    let mut r = Report::default();
    for &(g, n) in cases {
        let a = enumerate(g, n).map_err(crate::fock::FockError::from)?;
        let b = brute_force_oracle(g, n).map_err(crate::fock::FockError::from)?;
        let mut auts_a: Vec<u64> = a.iter().map(|x| x.aut).collect();
        let mut auts_b: Vec<u64> = b.iter().map(|x| x.aut).collect();
        auts_a.sort_unstable();
        auts_b.sort_unstable();
        r.push(
            format!("stable graphs ({g}, {n})"),
            a.len() == b.len() && auts_a == auts_b,
            format!("{} classes enumerated, {} by brute force", a.len(), b.len()),
        );
    }
    Ok(r)
}

/// Polynomial in `(Δ, R)`: `(i, j) → coefficient of Δ^i R^j`.
pub type Poly2 = BTreeMap<(u32, u32), Rational>;

fn p2_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut out = Poly2::new();
    for ((i1, j1), c1) in a {
        for ((i2, j2), c2) in b {
            *out.entry((i1 + i2, j1 + j2)).or_insert_with(Rational::zero) += c1 * c2;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn p2_add_scaled(acc: &mut Poly2, a: &Poly2, s: &Rational) {
    for (k, c) in a {
        *acc.entry(*k).or_insert_with(Rational::zero) += c * s;
    }
    acc.retain(|_, v| !v.is_zero());
}

fn p2_d_delta(a: &Poly2) -> Poly2 {
    a.iter().filter(|((i, _), _)| *i > 0).map(|(&(i, j), c)| ((i - 1, j), c * int(i as i64))).collect()
}

/// Fits the large-radius θ-frame correlator `Ĉ^(g)_n` as a polynomial in
/// `Δ_{alg,LR}` and `R` with `deg_Δ ≤ 3g−3+n`, `deg_R ≤ 2g−2+n`; the fit must
/// hold on the whole window.
pub fn finite_generation_fit(solver: &Solver, g: u32, n: u32) -> Result<Poly2> {
    let c = solver.chart(Chart::LargeRadius);
    let target = c.family.entry(g, n)?;
    let (di, dj) = (3 * g + n - 3, 2 * g + n - 2);
    let basis: Vec<((u32, u32), Series)> = {
        let dp: Vec<Series> = (0..=di).map(|i| c.prop.series.pow(i as i64)).collect::<std::result::Result<_, _>>()?;
        let rp: Vec<Series> = (0..=dj).map(|j| c.r.pow(j as i64)).collect::<std::result::Result<_, _>>()?;
        let mut v = Vec::new();
        for i in 0..=di {
            for j in 0..=dj {
                v.push(((i, j), dp[i as usize].checked_mul(&rp[j as usize])?));
            }
        }
        v
    };
    let window = basis.iter().map(|b| b.1.order()).chain([target.order()]).min().unwrap_or(0);
    if window < basis.len() as i64 + 4 {
        return Err(SolverError::Precision(format!(
            "finite generation at ({g}, {n}) needs {} coefficients, have {window}",
            basis.len() + 4
        )));
    }
    let rows: Vec<Vec<Rational>> =
        (0..window).map(|k| basis.iter().map(|b| b.1.coeff(k)).collect::<std::result::Result<_, _>>()).collect::<std::result::Result<_, _>>()?;
    let rhs: Vec<Rational> = (0..window).map(|k| target.coeff(k)).collect::<std::result::Result<_, _>>()?;
    let x = linalg::solve(&rows, &rhs).map_err(|e| match e {
        LinError::Inconsistent(k) => {
            SolverError::Support(format!("finite generation at ({g}, {n}) leaves a residual at y^{k}"))
        }
        other => SolverError::Support(format!("finite generation at ({g}, {n}): {other}")),
    })?;
    Ok(basis.iter().map(|b| b.0).zip(x).filter(|(_, c)| !c.is_zero()).collect())
}

/// Fits `f_(g,n)` for `g ≤ g_max` (with enough insertions at lower genus) and
/// checks `∂f_(g,n)/∂Δ = ½Σ C(n,i) f_(h,i+1) f_(g−h,n−i+1) + ½f_(g−1,n+2)`.
pub fn verify_finite_generation(a: &Rational, g_max: u32, n_max: u32) -> Result<Report> {
    let mut need = 0;
    for g in 0..=g_max {
        let n = n_max + 2 * (g_max - g);
        need = need.max((3 * g + n - 2) * (2 * g + n - 1));
    }
    let mut cfg = SolverConfig::new(g_max.max(2));
    cfg.a = a.clone();
    cfg.orders.lr = need as i64 + 8;
    cfg.max_degree = 4;
    let mut s = Solver::new(cfg)?;
    for g in 2..=g_max {
        s.step(&super::GenusInputs::defaults(g, super::Mode::Joint))?;
    }
    s.ensure_jets(g_max, n_max)?;

    let mut fits: BTreeMap<(u32, u32), Poly2> = BTreeMap::new();
    for g in 0..=g_max {
        for n in 0..=n_max + 2 * (g_max - g) {
            if 2 * g as i64 - 2 + n as i64 > 0 {
                fits.insert((g, n), finite_generation_fit(&s, g, n)?);
            }
        }
    }
    let mut r = Report::default();
    r.push("finite generation fits", true, format!("{} correlators fitted within the degree bounds", fits.len()));
    let half = crate::rational::q(1, 2);
    for g in 1..=g_max {
        for n in 0..=n_max {
            let Some(f) = fits.get(&(g, n)) else { continue };
            let mut rhs = Poly2::new();
            for h in 0..=g {
                for i in 0..=n {
                    let (Some(x), Some(y)) = (fits.get(&(h, i + 1)), fits.get(&(g - h, n - i + 1))) else { continue };
                    p2_add_scaled(&mut rhs, &p2_mul(x, y), &(Rational::from_integer(binomial(n as u64, i as u64)) * &half));
                }
            }
            if let Some(x) = fits.get(&(g - 1, n + 2)) {
                p2_add_scaled(&mut rhs, x, &half);
            }
            let lhs = p2_d_delta(f);
            r.push(format!("d/dDelta recursion ({g}, {n})"), lhs == rhs, format!("{} terms", lhs.len()));
        }
    }
    Ok(r)
}
