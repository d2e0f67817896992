//! The transformation rule between opposite line bundles.
//!
//! A change of opposite acts on a correlator family by the Feynman rule: a sum
//! over connected stable graphs with vertices decorated by source correlators,
//! edges by the propagator `Δ`, and weight `1/|Aut Γ|`. Two independent
//! implementations are provided. [`feynman_transform`] enumerates graphs. The
//! Wick route ([`wick_transform`]) exponentiates the jet potential
//! `W(v) = Σ ℏ^(g−1) C_(g,n) vⁿ/n!`, applies `exp(ℏΔ/2 ∂²_v)` and takes the
//! logarithm. It grades `ℏ^a v^b` by `2a + b`, which keeps every step finite.
//!
//! The pipeline works in the θ-frame `(dy/y)^⊗n` of each chart. Frame factors
//! cancel in the graph sums as long as entries and propagator share a frame.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphs::{enumerate, GraphError};
use crate::mirror::chart::theta;
use crate::mirror::{self, work_to_chart, Chart, FlatCoordinate, Frame, MirrorError, PropagatorSeries};
use crate::rational::{binomial, factorial, int, q, Rational};
use crate::rpoly::RPoly;
use crate::series::{Series, SeriesError, Var};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FockError {
    #[error("source family has no entry ({0}, {1})")]
    MissingEntry(u32, u32),
    #[error("(g, n) = ({0}, {1}) is unstable")]
    Unstable(u32, u32),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
}

type Result<T> = std::result::Result<T, FockError>;

/// Commutative coefficient ring of a correlator family. Units are never
/// needed, so series of bounded precision qualify.
pub trait Coefficient: Clone + Send + Sync {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Coefficient for RPoly {
    fn add(&self, o: &Self) -> Self {
        RPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RPoly::mul(self, o)
    }
    fn scale(&self, c: &Rational) -> Self {
        RPoly::scale(self, c)
    }
}

/// Panics on a variable mismatch; the checked entry points validate variables
/// before any arithmetic happens.
impl Coefficient for Series {
    fn add(&self, o: &Self) -> Self {
        self.checked_add(o).expect("series variables validated")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("series variables validated")
    }
    fn scale(&self, c: &Rational) -> Self {
        Series::scale(self, c)
    }
}

fn acc<C: Coefficient>(slot: &mut Option<C>, x: C) {
    *slot = Some(match slot.take() {
        Some(s) => s.add(&x),
        None => x,
    });
}

/// The opposite line bundle a family is polarized by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    LargeRadius,
    Orbifold,
    Conifold,
    Algebraic,
}

impl From<Chart> for Polarization {
    fn from(c: Chart) -> Self {
        match c {
            Chart::LargeRadius => Polarization::LargeRadius,
            Chart::Orbifold => Polarization::Orbifold,
            Chart::Conifold => Polarization::Conifold,
        }
    }
}

/// Correlators `C^(g)_n` of one polarization, expanded in one chart and frame.
/// Polynomial-in-`R` families are chart independent and carry
/// [`Chart::LargeRadius`] by convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatorFamily<C = Series> {
    pub polarization: Polarization,
    pub chart: Chart,
    pub frame: Frame,
    entries: BTreeMap<(u32, u32), C>,
}

fn check_stable(g: u32, n: u32) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(FockError::Unstable(g, n));
    }
    Ok(())
}

impl<C> CorrelatorFamily<C> {
    pub fn new(polarization: Polarization, chart: Chart, frame: Frame) -> Self {
        CorrelatorFamily { polarization, chart, frame, entries: BTreeMap::new() }
    }

    pub fn get(&self, g: u32, n: u32) -> Option<&C> {
        self.entries.get(&(g, n))
    }

    pub fn entry(&self, g: u32, n: u32) -> Result<&C> {
        self.get(g, n).ok_or(FockError::MissingEntry(g, n))
    }

    pub fn insert(&mut self, g: u32, n: u32, c: C) -> Result<()> {
        check_stable(g, n)?;
        self.entries.insert((g, n), c);
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), C> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_genus(&self) -> Option<u32> {
        self.entries.keys().map(|k| k.0).max()
    }

    /// Copy keeping only the entries accepted by `keep`.
    pub fn filtered(&self, keep: impl Fn(u32, u32) -> bool) -> Self
    where
        C: Clone,
    {
        CorrelatorFamily {
            entries: self.entries.iter().filter(|(k, _)| keep(k.0, k.1)).map(|(k, v)| (*k, v.clone())).collect(),
            ..*self
        }
    }

    fn with_entries<D>(&self, polarization: Polarization, entries: BTreeMap<(u32, u32), D>) -> CorrelatorFamily<D> {
        CorrelatorFamily { polarization, chart: self.chart, frame: self.frame, entries }
    }
}

fn prop_powers<C: Coefficient>(prop: &C, max: usize) -> Vec<C> {
    let mut pw: Vec<C> = Vec::with_capacity(max);
    for i in 0..max {
        let next = if i == 0 { prop.clone() } else { pw[i - 1].mul(prop) };
        pw.push(next);
    }
    pw
}

fn graph_sum<C: Coefficient>(
    src: &CorrelatorFamily<C>,
    prop: &C,
    g: u32,
    n: u32,
    trivial: bool,
) -> Result<Option<C>> {
    let graphs = enumerate(g, n as usize)?;
    let max_e = graphs.iter().map(|gr| gr.n_edges()).max().unwrap_or(0);
    let pw = prop_powers(prop, max_e);
    let terms: Vec<Result<C>> = graphs
        .par_iter()
        .filter(|gr| trivial || gr.n_edges() > 0)
        .map(|gr| {
            let mut term: Option<C> = gr.n_edges().checked_sub(1).map(|e| pw[e].clone());
            for (gv, nv) in gr.vertex_types() {
                let c = src.entry(gv, nv)?;
                term = Some(match term {
                    Some(t) => t.mul(c),
                    None => c.clone(),
                });
            }
            let w = Rational::new(1.into(), gr.aut.into());
            Ok(term.expect("graphs have a vertex").scale(&w))
        })
        .collect();
    let mut out = None;
    for t in terms {
        acc(&mut out, t?);
    }
    Ok(out)
}

/// `T[Δ](src)` at `(g, n)` by explicit graph enumeration, including the
/// trivial graph `src(g, n)`.
pub fn feynman_transform<C: Coefficient>(src: &CorrelatorFamily<C>, prop: &C, g: u32, n: u32) -> Result<C> {
    check_stable(g, n)?;
    Ok(graph_sum(src, prop, g, n, true)?.expect("the trivial graph always contributes"))
}

/// The graphs of [`feynman_transform`] with at least one edge. `None` when
/// `(g, n)` has no such graph.
pub fn edge_sum<C: Coefficient>(src: &CorrelatorFamily<C>, prop: &C, g: u32, n: u32) -> Result<Option<C>> {
    check_stable(g, n)?;
    graph_sum(src, prop, g, n, false)
}

/// Homogeneous piece of a jet: `(ℏ-power, v-power) → coefficient`.
type Graded<C> = BTreeMap<(i64, u32), C>;

fn mul_into<C: Coefficient>(out: &mut Graded<C>, x: &Graded<C>, y: &Graded<C>, s: &Rational, v_max: Option<u32>) {
    for ((a1, b1), c1) in x {
        for ((a2, b2), c2) in y {
            let b = b1 + b2;
            if v_max.is_some_and(|m| b > m) {
                continue;
            }
            let t = c1.mul(c2).scale(s);
            let key = (a1 + a2, b);
            match out.get_mut(&key) {
                Some(e) => *e = e.add(&t),
                None => {
                    out.insert(key, t);
                }
            }
        }
    }
}

/// `T[Δ](src)` for every stable `(g, n)` with `g ≤ g_max`, `n ≤ v_max`,
/// computed as `log exp(ℏΔ/2 ∂²_v) exp(W)`. Entries missing from `src` count
/// as zero, and outputs that receive no contribution are omitted.
pub fn wick_transform<C: Coefficient>(src: &CorrelatorFamily<C>, prop: &C, g_max: u32, v_max: u32) -> CorrelatorFamily<C> {
    let top = 2 * g_max as i64 - 2 + v_max as i64;
    let mut out = BTreeMap::new();
    if top <= 0 {
        return src.with_entries(src.polarization, out);
    }
    let k_max = top as usize;

    let mut w: Vec<Graded<C>> = vec![Graded::new(); k_max + 1];
    for (&(g, n), c) in &src.entries {
        let k = 2 * g as i64 - 2 + n as i64;
        if k <= top {
            let inv = Rational::new(1.into(), factorial(n as u64));
            w[k as usize].insert((g as i64 - 1, n), c.scale(&inv));
        }
    }

    // exp: E_k = W_k + (1/k) Σ_{j<k} j W_j E_{k−j}
    let mut e: Vec<Graded<C>> = vec![Graded::new(); k_max + 1];
    for k in 1..=k_max {
        let mut ek = w[k].clone();
        for j in 1..k {
            mul_into(&mut ek, &w[j], &e[k - j], &q(j as i64, k as i64), None);
        }
        e[k] = ek;
    }

    // heat: ℏ^a v^b ↦ Σ_m Δ^m/(2^m m!) · b!/(b−2m)! ℏ^(a+m) v^(b−2m)
    let max_b = e.iter().flat_map(|m| m.keys().map(|k| k.1)).max().unwrap_or(0);
    let pw = prop_powers(prop, (max_b / 2) as usize);
    let mut z: Vec<Graded<C>> = vec![Graded::new(); k_max + 1];
    for k in 1..=k_max {
        let mut zk: Graded<C> = Graded::new();
        for (&(a, b), c) in &e[k] {
            for m in 0..=b / 2 {
                if b - 2 * m > v_max {
                    continue;
                }
                let coef = Rational::new(
                    factorial(b as u64),
                    factorial((b - 2 * m) as u64) * factorial(m as u64) * num_bigint::BigInt::from(2).pow(m),
                );
                let t = if m == 0 { c.scale(&coef) } else { c.mul(&pw[m as usize - 1]).scale(&coef) };
                let key = (a + m as i64, b - 2 * m);
                match zk.get_mut(&key) {
                    Some(x) => *x = x.add(&t),
                    None => {
                        zk.insert(key, t);
                    }
                }
            }
        }
        z[k] = zk;
    }

    // log: L_k = Z_k − (1/k) Σ_{j<k} j L_j Z_{k−j}
    let mut l: Vec<Graded<C>> = vec![Graded::new(); k_max + 1];
    for k in 1..=k_max {
        let mut lk = z[k].clone();
        for j in 1..k {
            mul_into(&mut lk, &l[j], &z[k - j], &q(-(j as i64), k as i64), Some(v_max));
        }
        l[k] = lk;
    }

    for lk in &l {
        for (&(a, b), c) in lk {
            let g = a + 1;
            if g >= 0 && g <= g_max as i64 && b <= v_max {
                out.insert((g as u32, b), c.scale(&Rational::from_integer(factorial(b as u64))));
            }
        }
    }
    src.with_entries(src.polarization, out)
}

fn check_series_family(src: &CorrelatorFamily<Series>, prop: &PropagatorSeries) -> Result<()> {
    if src.chart != prop.chart || src.frame != prop.frame {
        return Err(FockError::FrameMismatch(format!(
            "family on {} {:?}, propagator on {} {:?}",
            src.chart, src.frame, prop.chart, prop.frame
        )));
    }
    let var = prop.series.var();
    if let Some(((g, n), s)) = src.entries.iter().find(|(_, s)| s.var() != var) {
        return Err(FockError::FrameMismatch(format!(
            "entry ({g}, {n}) is a series in {} but the propagator is in {var}",
            s.var()
        )));
    }
    Ok(())
}

/// Signed propagator `Δ(P_src, P_tgt)` from `Δ_{alg,♥}`: `+Δ` from the
/// algebraic opposite to ♥ and `−Δ` back.
fn directed(src: Polarization, target: Polarization, prop: &PropagatorSeries) -> Result<Series> {
    let heart = Polarization::from(prop.chart);
    match (src, target) {
        (Polarization::Algebraic, t) if t == heart => Ok(prop.series.clone()),
        (s, Polarization::Algebraic) if s == heart => Ok(-&prop.series),
        (s, t) if s == t => Ok(Series::zero(prop.series.var(), prop.series.order())),
        _ => Err(FockError::FrameMismatch(format!(
            "no propagator from {src:?} to {target:?} through Δ(alg, {})",
            prop.chart
        ))),
    }
}

/// Transforms a series family to `target` with the algebraic propagator of
/// its chart, by the Wick route. The propagator is `Δ_{alg,♥}`; its sign is
/// chosen by the direction of the change.
pub fn transform(
    src: &CorrelatorFamily<Series>,
    target: Polarization,
    prop: &PropagatorSeries,
    g_max: u32,
    v_max: u32,
) -> Result<CorrelatorFamily<Series>> {
    check_series_family(src, prop)?;
    let d = directed(src.polarization, target, prop)?;
    let mut out = wick_transform(src, &d, g_max, v_max);
    out.polarization = target;
    Ok(out)
}

/// Graph-sum counterpart of [`transform`] at a single `(g, n)`.
pub fn transform_graphs(
    src: &CorrelatorFamily<Series>,
    target: Polarization,
    prop: &PropagatorSeries,
    g: u32,
    n: u32,
) -> Result<Series> {
    check_series_family(src, prop)?;
    let d = directed(src.polarization, target, prop)?;
    feynman_transform(src, &d, g, n)
}

/// Fills `(g, n_from+1..=n_to)` from `(g, n_from)` by Jetness in the θ-frame:
/// `Ĉ_(n+1) = θĈ_n − nΓĈ_n` with `Γ = θ²x/θx`.
pub fn extend_jets(family: &mut CorrelatorFamily<Series>, gamma: &Series, g: u32, n_from: u32, n_to: u32) -> Result<()> {
    if family.frame != Frame::Theta {
        return Err(FockError::FrameMismatch("jet extension runs in the θ-frame".into()));
    }
    let mut cur = family.entry(g, n_from)?.clone();
    if cur.var() != gamma.var() {
        return Err(FockError::FrameMismatch(format!("entries in {}, connection in {}", cur.var(), gamma.var())));
    }
    for n in n_from..n_to {
        let next = theta(&cur)?.checked_sub(&gamma.checked_mul(&cur)?.scale(&int(n as i64)))?;
        family.insert(g, n + 1, next.clone())?;
        cur = next;
    }
    Ok(())
}

/// Moves a series family between the θ-frame and the flat frame by
/// `(θx)^(∓n)`. Orbifold θ-frame entries live in `w = 𝔶³`, flat-frame ones
/// in `𝔶`.
pub fn change_frame(
    family: &CorrelatorFamily<Series>,
    target: Frame,
    flat: &FlatCoordinate,
) -> Result<CorrelatorFamily<Series>> {
    if flat.chart != family.chart {
        return Err(FockError::FrameMismatch(format!(
            "family on {}, flat coordinate on {}",
            family.chart, flat.chart
        )));
    }
    if family.frame == target {
        return Ok(family.clone());
    }
    let mut entries = BTreeMap::new();
    for (&(g, n), s) in &family.entries {
        let tn = flat.theta_x.pow(n as i64)?;
        let e = match target {
            Frame::Flat => work_to_chart(s).checked_div(&tn)?,
            Frame::Theta => {
                let e = s.checked_mul(&tn)?;
                if flat.chart == Chart::Orbifold {
                    e.deflate(3)?.with_var(Var::W)
                } else {
                    e
                }
            }
        };
        entries.insert((g, n), e);
    }
    let mut out = family.with_entries(family.polarization, entries);
    out.frame = target;
    Ok(out)
}

/// Converts a propagator between frames, keeping orbifold θ-frame data in `w`.
pub fn change_propagator_frame(prop: &PropagatorSeries, target: Frame, flat: &FlatCoordinate) -> Result<PropagatorSeries> {
    let mut p = prop.clone();
    if p.series.var() == Var::W {
        p.series = work_to_chart(&p.series);
    }
    let mut out = p.to_frame(target, flat)?;
    if prop.series.var() == Var::W && target == Frame::Theta {
        out.series = out.series.deflate(3)?.with_var(Var::W);
    }
    Ok(out)
}

/// Alg-side base cases: `Ĉ^(0)_3 = −R/3` and `Ĉ^(1)_1 = cR`.
pub fn algebraic_base(a: &Rational) -> Result<CorrelatorFamily<RPoly>> {
    let mut f = CorrelatorFamily::new(Polarization::Algebraic, Chart::LargeRadius, Frame::Theta);
    f.insert(0, 3, RPoly::monomial(1, q(-1, 3)))?;
    f.insert(1, 1, RPoly::monomial(1, mirror::genus_one_alg_constant(a)?))?;
    Ok(f)
}

/// One step of the anomaly recursion for alg-side correlators:
///
/// `Ĉ^(g)_(n+1) = θĈ^(g)_n + n(aR + (1−R)/3)Ĉ^(g)_n
///   + ½((1−6a)(1−R)/3 − 3a²R)·(Σ C(n,i) Ĉ^(h)_(i+1) Ĉ^(g−h)_(n−i+1) + Ĉ^(g−1)_(n+2))`
///
/// with unstable entries read as zero.
pub fn anomaly_step(alg: &CorrelatorFamily<RPoly>, g: u32, n: u32, a: &Rational) -> Result<RPoly> {
    let cur = alg.entry(g, n)?;
    let one = Rational::one();
    let third = q(1, 3);
    // a·R + (1−R)/3
    let conn = RPoly::new(vec![third.clone(), a - &third]);
    // ((1−6a)(1−R)/3 − 3a²R)/2
    let k = (&one - a * int(6)) * &third;
    let curv = RPoly::new(vec![k.clone(), -&k - a * a * int(3)]).scale(&q(1, 2));

    let stable = |h: u32, m: u32| 2 * h as i64 - 2 + m as i64 > 0;

    let mut bracket = RPoly::zero();
    for h in 0..=g {
        for i in 0..=n {
            let (k, j) = (g - h, n - i);
            if !stable(h, i + 1) || !stable(k, j + 1) {
                continue;
            }
            let x = alg.entry(h, i + 1)?.mul(alg.entry(k, j + 1)?);
            bracket = bracket.add(&x.scale(&Rational::from_integer(binomial(n as u64, i as u64))));
        }
    }
    if g > 0 {
        bracket = bracket.add(alg.entry(g - 1, n + 2)?);
    }
    Ok(cur.theta().add(&conn.mul(cur).scale(&int(n as i64))).add(&curv.mul(&bracket)))
}

/// Alg-side family for `g ≤ g_max`, `n ≤ n_max` from the base cases and the
/// 0-point ambiguities `amb[g]` for `2 ≤ g ≤ g_max`.
pub fn anomaly_family(
    a: &Rational,
    amb: &BTreeMap<u32, RPoly>,
    g_max: u32,
    n_max: u32,
) -> Result<CorrelatorFamily<RPoly>> {
    let mut f = algebraic_base(a)?;
    for g in 2..=g_max {
        let c = amb.get(&g).ok_or(FockError::MissingEntry(g, 0))?;
        f.insert(g, 0, c.clone())?;
    }
    for g in 0..=g_max {
        // genus g must reach n_max + 2(g_max − g) for the Ĉ^(g−1)_(n+2) terms above it
        let top = n_max + 2 * (g_max - g);
        let start = match g {
            0 => 3,
            1 => 1,
            _ => 0,
        };
        for n in start..top {
            let next = anomaly_step(&f, g, n, a)?;
            f.insert(g, n + 1, next)?;
        }
    }
    Ok(f)
}

/// Evaluates a polynomial-in-`R` family as series in `var`.
pub fn evaluate(family: &CorrelatorFamily<RPoly>, chart: Chart, var: Var, order: i64) -> Result<CorrelatorFamily<Series>> {
    let r = mirror::chart::r_series(var, order)?;
    let mut entries = BTreeMap::new();
    for (&k, p) in &family.entries {
        entries.insert(k, p.eval(&r)?);
    }
    let mut out = family.with_entries(family.polarization, entries);
    out.chart = chart;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use std::collections::BTreeSet;

    /// Polynomials in named symbols, enough to read off graph weights.
    #[derive(Clone, Debug, PartialEq, Eq)]
    struct Sym(BTreeMap<Vec<&'static str>, Rational>);

    impl Sym {
        fn var(s: &'static str) -> Sym {
            Sym(BTreeMap::from([(vec![s], Rational::one())]))
        }
        fn coeff(&self, m: &[&'static str]) -> Rational {
            let mut k = m.to_vec();
            k.sort_unstable();
            self.0.get(&k).cloned().unwrap_or_else(Rational::zero)
        }
    }

    impl Coefficient for Sym {
        fn add(&self, o: &Self) -> Self {
            let mut m = self.0.clone();
            for (k, v) in &o.0 {
                *m.entry(k.clone()).or_insert_with(Rational::zero) += v;
            }
            m.retain(|_, v| !v.is_zero());
            Sym(m)
        }
        fn mul(&self, o: &Self) -> Self {
            let mut m: BTreeMap<Vec<&'static str>, Rational> = BTreeMap::new();
            for (k1, v1) in &self.0 {
                for (k2, v2) in &o.0 {
                    let mut k = k1.clone();
                    k.extend(k2);
                    k.sort_unstable();
                    *m.entry(k).or_insert_with(Rational::zero) += v1 * v2;
                }
            }
            m.retain(|_, v| !v.is_zero());
            Sym(m)
        }
        fn scale(&self, c: &Rational) -> Self {
            Sym(self.0.iter().map(|(k, v)| (k.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect())
        }
    }

    const NAMES: [(u32, u32, &str); 12] = [
        (0, 3, "c03"),
        (0, 4, "c04"),
        (0, 5, "c05"),
        (0, 6, "c06"),
        (1, 1, "c11"),
        (1, 2, "c12"),
        (1, 3, "c13"),
        (1, 4, "c14"),
        (2, 0, "c20"),
        (2, 1, "c21"),
        (2, 2, "c22"),
        (3, 0, "c30"),
    ];

    fn symbolic(max_deg: i64) -> CorrelatorFamily<Sym> {
        let mut f = CorrelatorFamily::new(Polarization::LargeRadius, Chart::LargeRadius, Frame::Theta);
        for (g, n, s) in NAMES {
            if 2 * g as i64 - 2 + n as i64 <= max_deg {
                f.insert(g, n, Sym::var(s)).unwrap();
            }
        }
        f
    }

    #[test]
    fn one_one_and_genus_two() {
        let src = symbolic(4);
        let d = Sym::var("d");
        let t11 = feynman_transform(&src, &d, 1, 1).unwrap();
        assert_eq!(t11, Sym::var("c11").add(&Sym::var("d").mul(&Sym::var("c03")).scale(&q(1, 2))));

        let t20 = feynman_transform(&src, &d, 2, 0).unwrap();
        assert_eq!(t20.0.len(), 6);
        assert_eq!(t20.coeff(&["c20"]), q(1, 1));
        assert_eq!(t20.coeff(&["d", "c12"]), q(1, 2));
        assert_eq!(t20.coeff(&["d", "c11", "c11"]), q(1, 2));
        assert_eq!(t20.coeff(&["d", "d", "c03", "c11"]), q(1, 2));
        assert_eq!(t20.coeff(&["d", "d", "c04"]), q(1, 8));
        assert_eq!(t20.coeff(&["d", "d", "d", "c03", "c03"]), q(5, 24));
    }

    #[test]
    fn zero_propagator_is_identity() {
        let src = symbolic(4);
        let zero = Sym(BTreeMap::new());
        for (g, n, s) in NAMES.iter().filter(|(g, n, _)| 2 * *g as i64 - 2 + *n as i64 <= 4) {
            assert_eq!(feynman_transform(&src, &zero, *g, *n).unwrap(), Sym::var(s), "({g},{n})");
        }
        let w = wick_transform(&src, &zero, 2, 2);
        for (&(g, n), v) in w.entries() {
            assert_eq!(v, src.get(g, n).unwrap());
        }
    }

    #[test]
    fn wick_matches_graphs_symbolically() {
        let src = symbolic(4);
        let d = Sym::var("d");
        let w = wick_transform(&src, &d, 3, 2);
        let mut seen = BTreeSet::new();
        for g in 0..=3u32 {
            for n in 0..=2u32 {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                let deg = 2 * g as i64 - 2 + n as i64;
                if deg > 4 {
                    continue;
                }
                let f = feynman_transform(&src, &d, g, n);
                match f {
                    Ok(v) => assert_eq!(w.get(g, n), Some(&v), "({g},{n})"),
                    // some vertex of this type is not in the symbolic family
                    Err(FockError::MissingEntry(..)) => continue,
                    Err(e) => panic!("{e}"),
                }
                seen.insert((g, n));
            }
        }
        assert!(seen.contains(&(2, 0)) && seen.contains(&(2, 2)) && seen.contains(&(3, 0)));
    }

    #[test]
    fn wick_one_loop_from_cubic_vertex() {
        let mut src = CorrelatorFamily::new(Polarization::LargeRadius, Chart::LargeRadius, Frame::Theta);
        src.insert(0, 3, q(5, 1)).unwrap();
        let w = wick_transform(&src, &q(7, 1), 1, 3);
        assert_eq!(w.get(1, 1), Some(&(q(1, 2) * q(7, 1) * q(5, 1))));
        assert_eq!(w.get(0, 3), Some(&q(5, 1)));
    }

    #[test]
    fn cocycle_on_symbols() {
        let src = symbolic(4);
        let d1 = Sym::var("d");
        let d2 = Sym::var("e");
        let one = wick_transform(&wick_transform(&src, &d1, 3, 6), &d2, 3, 2);
        let both = wick_transform(&src, &d1.add(&d2), 3, 2);
        for k in [(1, 1), (2, 0), (2, 1), (1, 2), (3, 0)] {
            assert_eq!(one.get(k.0, k.1), both.get(k.0, k.1), "{k:?}");
        }
    }

    #[test]
    fn anomaly_genus_zero_and_one_shapes() {
        for a in [q(0, 1), q(1, 12), q(1, 3)] {
            let f = anomaly_family(&a, &BTreeMap::new(), 1, 4).unwrap();
            let c = mirror::genus_one_alg_constant(&a).unwrap();
            assert_eq!(f.get(1, 1), Some(&RPoly::monomial(1, c)));
            for (&(g, n), p) in f.entries() {
                let lo = p.low_degree().unwrap_or(usize::MAX);
                let hi = p.degree().unwrap_or(0);
                assert!(lo >= (n as usize).div_ceil(3), "({g},{n}) {p}");
                assert!(hi as i64 <= 2 * g as i64 - 2 + n as i64, "({g},{n}) {p}");
            }
        }
    }
}
