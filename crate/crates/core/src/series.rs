//! Truncated Laurent series with exact rational coefficients.
//!
//! A [`Series`] stores the coefficients of `var^val .. var^(order-1)`; every
//! higher coefficient is unknown. Power series are the case `val >= 0`.
//! The representation is normalized so that the leading stored coefficient is
//! nonzero, and a series with no nonzero known coefficient is stored as the
//! empty window `O(var^order)` with `val == order`.
//!
//! Output orders of all operations:
//!
//! | op | output order |
//! |----|--------------|
//! | `a ± b` | `min(order_a, order_b)` |
//! | `a · b` | `min(order_a + val_b, order_b + val_a)` |
//! | `1 / a` | `order_a - 2·val_a` (relative order kept) |
//! | `derive` | `order - 1` |
//! | `theta` | `order` |
//! | `compose(f, g)` | `min(order_f·val_g, k·val_g + order_g - val_g)` over the nonzero `f_k`, `k != 0` |
//! | `reverse` | `order` |
//! | `exp`, `log` | `order` |

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

/// Chart and bookkeeping variables a series can be expanded in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Large-radius variable `y`.
    Y,
    /// Orbifold variable `𝔶 = y^(-1/3)`.
    OrbY,
    /// Cube of the orbifold variable, `w = 𝔶³ = 1/y`.
    W,
    /// Conifold variable `s = 1 + 27y`.
    S,
    /// Large-radius exponentiated flat coordinate `q₁ = e^t`.
    Q,
    /// Orbifold flat coordinate `𝔱`.
    OrbT,
    /// Conifold flat coordinate `x_con`.
    XCon,
}

impl Var {
    pub fn label(self) -> &'static str {
        match self {
            Var::Y => "y",
            Var::OrbY => "yorb",
            Var::W => "w",
            Var::S => "s",
            Var::Q => "q",
            Var::OrbT => "torb",
            Var::XCon => "xcon",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Var {
    type Err = SeriesError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "y" => Var::Y,
            "yorb" => Var::OrbY,
            "w" => Var::W,
            "s" => Var::S,
            "q" => Var::Q,
            "torb" => Var::OrbT,
            "xcon" => Var::XCon,
            _ => return Err(SeriesError::UnknownVar(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("division by a series with no known nonzero coefficient (zero to order {0})")]
    ZeroDivision(i64),
    #[error("coefficient {k} outside the known window [{val}, {order})")]
    OutOfWindow { k: i64, val: i64, order: i64 },
    #[error("series carries no known coefficient")]
    EmptyWindow,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown series variable {0:?}")]
    UnknownVar(String),
    #[error("malformed series record: {0}")]
    Malformed(String),
}

type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    var: Var,
    val: i64,
    order: i64,
    coeffs: Vec<Rational>,
}

/// Common denominator and integer numerators of a coefficient slice.
fn integerize(v: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let mut den = BigInt::one();
    for r in v {
        if !r.denom().is_one() {
            den = den.lcm(r.denom());
        }
    }
    let nums = v
        .iter()
        .map(|r| {
            if r.denom() == &den {
                r.numer().clone()
            } else {
                r.numer() * (&den / r.denom())
            }
        })
        .collect();
    (den, nums)
}

/// First `len` coefficients of the product of two coefficient slices.
fn convolve(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() {
        return vec![Rational::zero(); len];
    }
    let (da, ia) = integerize(a);
    let (db, ib) = integerize(b);
    let den = da * db;
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let lo = i.saturating_sub(ib.len() - 1);
        let hi = i.min(ia.len() - 1);
        let mut s = BigInt::zero();
        for j in lo..=hi {
            if !ia[j].is_zero() && !ib[i - j].is_zero() {
                s += &ia[j] * &ib[i - j];
            }
        }
        out.push(Rational::new(s, den.clone()));
    }
    out
}

impl Series {
    /// Builds a series from the coefficients of exponents `val .. val + coeffs.len()`.
    pub fn laurent(var: Var, val: i64, coeffs: Vec<Rational>) -> Series {
        let order = val + coeffs.len() as i64;
        Series { var, val, order, coeffs }.normalized()
    }

    /// Power series with coefficients of `var^0 .. var^(len-1)`.
    pub fn from_coeffs(var: Var, coeffs: Vec<Rational>) -> Series {
        Series::laurent(var, 0, coeffs)
    }

    pub fn from_ints(var: Var, coeffs: &[i64]) -> Series {
        Series::from_coeffs(var, coeffs.iter().map(|&c| rational::int(c)).collect())
    }

    /// Exact polynomial `Σ c_k var^k` truncated to `order`.
    pub fn polynomial(var: Var, terms: &[(i64, Rational)], order: i64) -> Series {
        let val = terms.iter().map(|t| t.0).min().unwrap_or(order).min(order);
        let mut coeffs = vec![Rational::zero(); (order - val).max(0) as usize];
        for (k, c) in terms {
            if *k < order {
                coeffs[(k - val) as usize] += c;
            }
        }
        Series { var, val, order, coeffs }.normalized()
    }

    pub fn zero(var: Var, order: i64) -> Series {
        Series { var, val: order, order, coeffs: Vec::new() }
    }

    pub fn constant(var: Var, c: Rational, order: i64) -> Series {
        Series::polynomial(var, &[(0, c)], order)
    }

    pub fn one(var: Var, order: i64) -> Series {
        Series::constant(var, Rational::one(), order)
    }

    pub fn monomial(var: Var, k: i64, c: Rational, order: i64) -> Series {
        Series::polynomial(var, &[(k, c)], order)
    }

    /// The series `var` itself.
    pub fn identity(var: Var, order: i64) -> Series {
        Series::monomial(var, 1, Rational::one(), order)
    }

    fn normalized(mut self) -> Series {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.val += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.val = self.order;
            }
        }
        if self.val > self.order {
            self.val = self.order;
            self.coeffs.clear();
        }
        self
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Exponent of the leading nonzero coefficient (equals `order` for an empty window).
    pub fn valuation(&self) -> i64 {
        self.val
    }

    /// Truncation order: coefficients of exponents `< order` are known.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn relative_order(&self) -> i64 {
        self.order - self.val
    }

    /// Known coefficients starting at the valuation.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Result<Rational> {
        if k >= self.order {
            return Err(SeriesError::OutOfWindow { k, val: self.val, order: self.order });
        }
        if k < self.val {
            return Ok(Rational::zero());
        }
        Ok(self.coeffs[(k - self.val) as usize].clone())
    }

    /// Coefficients of exponents `from .. to`, all of which must be known.
    pub fn coeff_range(&self, from: i64, to: i64) -> Result<Vec<Rational>> {
        (from..to).map(|k| self.coeff(k)).collect()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    pub fn with_var(mut self, var: Var) -> Series {
        self.var = var;
        self
    }

    pub fn truncate(&self, order: i64) -> Series {
        if order >= self.order {
            return self.clone();
        }
        let keep = (order - self.val).max(0) as usize;
        Series {
            var: self.var,
            val: self.val.min(order),
            order,
            coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
        }
        .normalized()
    }

    fn check_var(&self, other: &Series) -> Result<()> {
        if self.var != other.var {
            return Err(SeriesError::VarMismatch(self.var, other.var));
        }
        Ok(())
    }

    fn combine(&self, other: &Series, sign: bool) -> Result<Series> {
        self.check_var(other)?;
        let order = self.order.min(other.order);
        let val = self.val.min(other.val).min(order);
        let len = (order - val) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e < order {
                coeffs[(e - val) as usize] += c;
            }
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let e = other.val + i as i64;
            if e < order {
                if sign {
                    coeffs[(e - val) as usize] += c;
                } else {
                    coeffs[(e - val) as usize] -= c;
                }
            }
        }
        Ok(Series { var: self.var, val, order, coeffs }.normalized())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.combine(other, true)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.combine(other, false)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        let val = self.val + other.val;
        let order = (self.order + other.val).min(other.order + self.val);
        let len = (order - val).max(0) as usize;
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Ok(Series { var: self.var, val, order, coeffs }.normalized())
    }

    pub fn checked_div(&self, other: &Series) -> Result<Series> {
        self.check_var(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// Multiplicative inverse by Newton iteration; keeps the relative order.
    pub fn inverse(&self) -> Result<Series> {
        if self.is_zero_window() {
            return Err(SeriesError::ZeroDivision(self.order));
        }
        let n = self.coeffs.len();
        let unit = Series { var: self.var, val: 0, order: n as i64, coeffs: self.coeffs.clone() };
        let mut inv = Series::constant(self.var, self.coeffs[0].recip(), 1);
        let two = Series::constant(self.var, rational::int(2), n as i64);
        let mut prec = 1usize;
        while prec < n {
            prec = (2 * prec).min(n);
            let ie = inv.extend_order(prec as i64);
            let e = two.truncate(prec as i64).checked_sub(&unit.truncate(prec as i64).checked_mul(&ie)?)?;
            inv = ie.checked_mul(&e)?.truncate(prec as i64);
        }
        Ok(inv.shift(-self.val))
    }

    /// Reinterprets the known coefficients with a larger order, treating the
    /// missing tail as zero. Only for internal Newton steps where the tail is
    /// corrected by the next iteration.
    fn extend_order(mut self, order: i64) -> Series {
        if order > self.order {
            let val = self.val.min(self.order);
            let mut coeffs = vec![Rational::zero(); (order - val) as usize];
            for (i, c) in self.coeffs.drain(..).enumerate() {
                coeffs[(self.val - val) as usize + i] = c;
            }
            self = Series { var: self.var, val, order, coeffs }.normalized();
        }
        self
    }

    /// Multiplies by `var^k` exactly.
    pub fn shift(&self, k: i64) -> Series {
        Series { var: self.var, val: self.val + k, order: self.order + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.var, self.order);
        }
        Series {
            var: self.var,
            val: self.val,
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_constant(&self, c: &Rational) -> Series {
        self.combine(&Series::constant(self.var, c.clone(), self.order), true)
            .expect("same variable")
    }

    pub fn pow(&self, n: i64) -> Result<Series> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        if n == 0 {
            return Ok(Series::one(self.var, self.relative_order()));
        }
        let mut result: Option<Series> = None;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.checked_mul(&base)?,
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result.expect("n > 0"))
    }

    /// Coefficientwise `d/dvar`.
    pub fn derive(&self) -> Result<Series> {
        if self.is_zero_window() && self.order <= 0 {
            return Err(SeriesError::EmptyWindow);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rational::int(self.val + i as i64))
            .collect();
        Ok(Series { var: self.var, val: self.val - 1, order: self.order - 1, coeffs }.normalized())
    }

    /// `var · d/dvar`.
    pub fn theta(&self) -> Result<Series> {
        if self.is_zero_window() && self.order <= 0 {
            return Err(SeriesError::EmptyWindow);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * rational::int(self.val + i as i64))
            .collect();
        Ok(Series { var: self.var, val: self.val, order: self.order, coeffs }.normalized())
    }

    /// Inverse of `theta` on series without constant term: `Σ c_k/k var^k`.
    pub fn theta_primitive(&self) -> Result<Series> {
        if self.val <= 0 && !self.coeff(0)?.is_zero() {
            return Err(SeriesError::Precondition("theta primitive of a nonzero constant".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.val + i as i64;
                if k == 0 {
                    Rational::zero()
                } else {
                    c / rational::int(k)
                }
            })
            .collect();
        Ok(Series { var: self.var, val: self.val, order: self.order, coeffs }.normalized())
    }

    /// `f(var^k)` for `k >= 1`.
    pub fn substitute_power(&self, k: i64) -> Series {
        assert!(k >= 1);
        let mut coeffs = vec![Rational::zero(); ((self.order - self.val) * k) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Series { var: self.var, val: self.val * k, order: self.order * k, coeffs }.normalized()
    }

    /// Inverse of [`Series::substitute_power`]: `f(var^k) -> f(var)`, after
    /// checking that only exponents divisible by `k` occur.
    pub fn deflate(&self, k: i64) -> Result<Series> {
        assert!(k >= 1);
        self.check_support(0, k)?;
        let val = self.val.div_euclid(k) + i64::from(self.val.rem_euclid(k) != 0);
        let order = self.order.div_euclid(k) + i64::from(self.order.rem_euclid(k) != 0);
        let coeffs = (val..order).map(|e| self.coeff(e * k)).collect::<Result<_>>()?;
        Ok(Series { var: self.var, val, order, coeffs }.normalized())
    }

    /// Checks that every nonzero coefficient has exponent `≡ residue (mod m)`.
    pub fn check_support(&self, residue: i64, m: i64) -> Result<()> {
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if !c.is_zero() && (e - residue).rem_euclid(m) != 0 {
                return Err(SeriesError::Precondition(format!(
                    "coefficient of {}^{} is nonzero outside the residue class {} mod {}",
                    self.var, e, residue, m
                )));
            }
        }
        Ok(())
    }

    /// Composition `f(g)`; the result is expanded in `g`'s variable.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        if g.val < 1 {
            return Err(SeriesError::Precondition(
                "inner series must have zero constant term".into(),
            ));
        }
        if self.val < 0 && g.is_zero_window() {
            return Err(SeriesError::Precondition(
                "Laurent composition needs an inner series with known leading term".into(),
            ));
        }
        let vg = g.val;
        let rg = g.relative_order();
        let mut target = self.order.saturating_mul(vg);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            if k != 0 && !c.is_zero() {
                target = target.min(k * vg + rg);
            }
        }
        let mut acc = Series::zero(g.var, target);
        if self.is_zero_window() {
            return Ok(acc);
        }
        let top = self.val + self.coeffs.len() as i64 - 1;
        // Positive powers by Horner, negative powers accumulated separately.
        if top >= 1 {
            let lo = 1;
            let mut h = Series::zero(g.var, target);
            for k in (lo..=top).rev() {
                h = h.add_constant(&self.coeff(k)?).checked_mul(g)?.truncate(target);
            }
            acc = acc.checked_add(&h)?;
        }
        if self.val <= 0 && top >= 0 {
            acc = acc.add_constant(&self.coeff(0)?);
        }
        if self.val < 0 {
            let ginv = g.inverse()?;
            let mut p = Series::one(g.var, target);
            for k in 1..=(-self.val) {
                p = p.checked_mul(&ginv)?;
                let c = self.coeff(-k)?;
                if !c.is_zero() {
                    acc = acc.checked_add(&p.scale(&c).truncate(target))?;
                }
            }
        }
        Ok(acc.truncate(target))
    }

    /// Compositional inverse of a series `c₁var + c₂var² + …` with `c₁ != 0`,
    /// by Lagrange inversion: `[x^n] g = (1/n)[z^(n-1)] (z/f)^n`.
    pub fn reverse(&self) -> Result<Series> {
        if self.val != 1 {
            return Err(SeriesError::Precondition(
                "reversion needs valuation exactly 1 with invertible linear coefficient".into(),
            ));
        }
        let h = self.shift(-1).inverse()?;
        let n_max = self.order - 1;
        let mut coeffs = vec![Rational::zero(); n_max as usize];
        let mut hp = Series::one(self.var, n_max);
        for n in 1..=n_max {
            hp = hp.checked_mul(&h)?.truncate(n_max);
            coeffs[(n - 1) as usize] = hp.coeff(n - 1)? / rational::int(n);
        }
        Ok(Series::laurent(self.var, 1, coeffs))
    }

    pub fn exp(&self) -> Result<Series> {
        if self.val < 1 && !self.is_zero_window() {
            return Err(SeriesError::Precondition("exp needs zero constant term".into()));
        }
        let n = self.order.max(0) as usize;
        let f: Vec<Rational> = (0..n as i64).map(|k| self.coeff(k)).collect::<Result<_>>()?;
        let mut e = vec![Rational::zero(); n];
        if n > 0 {
            e[0] = Rational::one();
        }
        for m in 1..n {
            let mut s = Rational::zero();
            for k in 1..=m {
                if !f[k].is_zero() {
                    s += &f[k] * &e[m - k] * rational::int(k as i64);
                }
            }
            e[m] = s / rational::int(m as i64);
        }
        Ok(Series::from_coeffs(self.var, e))
    }

    pub fn log(&self) -> Result<Series> {
        if self.val != 0 || !self.coeffs[0].is_one() {
            return Err(SeriesError::Precondition("log needs constant term 1".into()));
        }
        let n = self.order as usize;
        let f = &self.coeffs;
        let mut l = vec![Rational::zero(); n];
        for m in 1..n {
            let mut s = &f[m] * rational::int(m as i64);
            for k in 1..m {
                if !l[k].is_zero() && !f[m - k].is_zero() {
                    s -= &l[k] * &f[m - k] * rational::int(k as i64);
                }
            }
            l[m] = s / rational::int(m as i64);
        }
        Ok(Series::from_coeffs(self.var, l))
    }

    /// Exact equality on the common window of two series.
    pub fn agrees_with(&self, other: &Series) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_zero_window(),
            Err(_) => false,
        }
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            var: self.var.label().to_string(),
            valuation: self.val,
            order: self.order,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn from_record(r: &SeriesRecord) -> Result<Series> {
        let var: Var = r.var.parse()?;
        if r.order - r.valuation != r.coeffs.len() as i64 {
            return Err(SeriesError::Malformed(format!(
                "window [{}, {}) holds {} coefficients",
                r.valuation,
                r.order,
                r.coeffs.len()
            )));
        }
        if r.coeffs.first().is_some_and(|c| c.is_zero()) {
            return Err(SeriesError::Malformed("leading coefficient is zero".into()));
        }
        Ok(Series { var, val: r.valuation, order: r.order, coeffs: r.coeffs.clone() })
    }
}

/// Serialized form `{var, valuation, order, coeffs: ["p/q", …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub var: String,
    pub valuation: i64,
    pub order: i64,
    #[serde(with = "rational::serde_vec")]
    pub coeffs: Vec<Rational>,
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SeriesRecord::deserialize(d)?;
        Series::from_record(&r).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.val + i as i64;
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if e == 1 {
                        write!(f, "{}", self.var)?;
                    } else {
                        write!(f, "{}^{}", self.var, e)?;
                    }
                }
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({}^{})", self.var, self.order)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&Series> for &Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<Series> for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl std::ops::Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

impl std::ops::Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn y(c: &[i64], n: i64) -> Series {
        Series::from_ints(Var::Y, c).truncate(n)
    }

    #[test]
    fn difference_of_squares() {
        let a = Series::polynomial(Var::Y, &[(0, int(1)), (1, int(1))], 3);
        let b = Series::polynomial(Var::Y, &[(0, int(1)), (1, int(-1))], 3);
        assert_eq!(&a * &b, Series::from_ints(Var::Y, &[1, 0, -1]));
    }

    #[test]
    fn geometric_series() {
        let d = Series::polynomial(Var::Y, &[(0, int(1)), (1, int(27))], 3);
        assert_eq!(d.inverse().unwrap(), Series::from_ints(Var::Y, &[1, -27, 729]));
    }

    #[test]
    fn laurent_valuations_add() {
        let a = Series::monomial(Var::Y, -1, int(1), 5);
        let b = Series::monomial(Var::Y, 2, int(1), 8);
        let p = &a * &b;
        assert_eq!(p.valuation(), 1);
        assert_eq!(p.coeff(1).unwrap(), int(1));
        assert_eq!(p.order(), 7);
    }

    #[test]
    fn theta_of_reciprocal() {
        let d = Series::polynomial(Var::Y, &[(0, int(1)), (1, int(27))], 8);
        let lhs = d.inverse().unwrap().theta().unwrap();
        // −27y/(1+27y)² = Σ_{k≥1} (−1)^k k 27^k y^k
        let rhs: Vec<Rational> =
            (0..8).map(|k| int(if k % 2 == 0 { 1 } else { -1 } * k * 27i64.pow(k as u32))).collect();
        assert_eq!(lhs, Series::from_coeffs(Var::Y, rhs));
        assert_eq!(lhs.coeff(1).unwrap(), int(-27));
        assert_eq!(lhs.coeff(2).unwrap(), int(1458));
    }

    #[test]
    fn derive_and_theta_orders() {
        let f = y(&[5, 1, 2, 3], 4);
        let d = f.derive().unwrap();
        assert_eq!(d, y(&[1, 4, 9], 3));
        assert_eq!(f.theta().unwrap(), Series::from_ints(Var::Y, &[0, 1, 4, 9]));
        let m = Series::monomial(Var::Y, 5, int(1), 9);
        assert_eq!(m.theta().unwrap(), m.scale(&int(5)));
        assert!(Series::zero(Var::Y, 0).derive().is_err());
    }

    #[test]
    fn coeff_beyond_window_is_error() {
        let f = y(&[1, 2], 2);
        assert!(f.coeff(2).is_err());
        assert_eq!(f.coeff(-3).unwrap(), int(0));
    }

    #[test]
    fn var_mismatch() {
        let a = Series::one(Var::Y, 3);
        let b = Series::one(Var::S, 3);
        assert_eq!(a.checked_add(&b), Err(SeriesError::VarMismatch(Var::Y, Var::S)));
        assert!(Series::zero(Var::Y, 4).inverse().is_err());
    }

    #[test]
    fn reverse_examples() {
        let f = Series::from_ints(Var::Y, &[0, 1, 1, 0, 0, 0]);
        let g = f.reverse().unwrap();
        assert_eq!(g, Series::from_ints(Var::Y, &[0, 1, -1, 2, -5, 14]));
        assert!(f.compose(&g).unwrap().agrees_with(&Series::identity(Var::Y, 6)));
        let id = Series::identity(Var::Y, 7);
        assert_eq!(id.reverse().unwrap(), id);
    }

    #[test]
    fn exp_log() {
        let e = Series::identity(Var::Y, 6).exp().unwrap();
        for k in 0..6 {
            assert_eq!(e.coeff(k).unwrap(), Rational::from_integer(1.into()) / Rational::from_integer(rational::factorial(k as u64)));
        }
        let l = Series::from_ints(Var::Y, &[1, 1, 0, 0, 0, 0]).log().unwrap();
        for k in 1..6 {
            assert_eq!(l.coeff(k).unwrap(), q(if k % 2 == 1 { 1 } else { -1 }, k));
        }
        let f = Series::from_ints(Var::Y, &[0, 2, 0, 1, 0, 0, 0]);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }

    #[test]
    fn compose_laurent_inner() {
        // (1/s) ∘ (x + x²) = x⁻¹ − 1 + x − x² …
        let f = Series::monomial(Var::S, -1, int(1), 6);
        let g = Series::from_ints(Var::XCon, &[0, 1, 1, 0, 0, 0]);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.var(), Var::XCon);
        assert_eq!(h.valuation(), -1);
        assert_eq!(h.coeff_range(-1, 3).unwrap(), vec![int(1), int(-1), int(1), int(-1)]);
    }

    #[test]
    fn record_round_trip() {
        let f = Series::laurent(Var::S, -2, vec![q(1, 3), q(0, 1), q(-45, 8)]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"var":"s","valuation":-2,"order":1,"coeffs":["1/3","0","-45/8"]}"#);
        let back: Series = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn display() {
        let f = Series::from_ints(Var::Y, &[1, -27, 729]);
        assert_eq!(f.to_string(), "1 - 27*y + 729*y^2 + O(y^3)");
    }
}
