//! Exact polynomial and truncated power-series arithmetic, Fibonacci
//! polynomials, and the generating functions checked against enumeration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense integer polynomial in `z`; index is the exponent, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn monomial(deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg];
        v.push(BigInt::one());
        IntPoly(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.0.len().max(o.0.len());
        IntPoly::new(
            (0..n)
                .map(|i| {
                    self.0.get(i).cloned().unwrap_or_default()
                        + o.0.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Multiply by `z^m`.
    pub fn shift(&self, m: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::default();
        }
        let mut v = vec![BigInt::zero(); m];
        v.extend(self.0.iter().cloned());
        IntPoly(v)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * z + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_series(&self, order: usize) -> Series {
        Series::new(
            (0..=order)
                .map(|i| BigRational::from_integer(self.0.get(i).cloned().unwrap_or_default()))
                .collect(),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{a}z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{a}z^{i}")?,
            }
        }
        Ok(())
    }
}

/// `F_0 = 0`, `F_1 = 1`, `F_{k+2} = F_{k+1} - z F_k`.
pub fn fibonacci(k: usize) -> IntPoly {
    let mut a = IntPoly::default();
    let mut b = IntPoly::from_i64(&[1]);
    for _ in 0..k {
        let next = b.sub(&a.shift(1));
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Ring operations a series coefficient must support.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn halve(&self) -> Self;
    /// Multiplicative inverse, when it exists in the coefficient ring.
    fn inverse(&self) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn halve(&self) -> Self {
        self / BigInt::from(2)
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Sparse Laurent polynomial in two markers `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MarkerPoly(BTreeMap<(i32, i32), BigRational>);

impl MarkerPoly {
    pub fn constant(c: BigRational) -> Self {
        MarkerPoly::monomial(0, 0, c)
    }

    pub fn monomial(a: i32, b: i32, c: BigRational) -> Self {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(&c) {
            m.insert((a, b), c);
        }
        MarkerPoly(m)
    }

    pub fn x() -> Self {
        MarkerPoly::monomial(1, 0, One::one())
    }

    pub fn y() -> Self {
        MarkerPoly::monomial(0, 1, One::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &BigRational)> {
        self.0.iter()
    }

    pub fn coeff(&self, a: i32, b: i32) -> BigRational {
        self.0.get(&(a, b)).cloned().unwrap_or_else(Zero::zero)
    }

    /// Value with both markers set to one.
    pub fn at_one(&self) -> BigRational {
        self.0
            .values()
            .fold(Zero::zero(), |acc: BigRational, c| acc + c)
    }

    /// Applies `(a, b) -> f(a, b)` to every exponent vector.
    pub fn map_exponents(&self, f: impl Fn(i32, i32) -> (i32, i32)) -> Self {
        let mut out = MarkerPoly::default();
        for (&(a, b), c) in &self.0 {
            let (a2, b2) = f(a, b);
            out = Coefficient::add(&out, &MarkerPoly::monomial(a2, b2, c.clone()));
        }
        out
    }

    fn from_map(mut m: BTreeMap<(i32, i32), BigRational>) -> Self {
        m.retain(|_, c| !Zero::is_zero(c));
        MarkerPoly(m)
    }
}

impl Coefficient for MarkerPoly {
    fn zero() -> Self {
        MarkerPoly::default()
    }
    fn one() -> Self {
        MarkerPoly::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            *m.entry(*k).or_insert_with(Zero::zero) += c;
        }
        MarkerPoly::from_map(m)
    }
    fn sub(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            *m.entry(*k).or_insert_with(Zero::zero) -= c;
        }
        MarkerPoly::from_map(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<(i32, i32), BigRational> = BTreeMap::new();
        for ((a1, b1), c1) in &self.0 {
            for ((a2, b2), c2) in &o.0 {
                *m.entry((a1 + a2, b1 + b2)).or_insert_with(Zero::zero) += c1 * c2;
            }
        }
        MarkerPoly::from_map(m)
    }
    fn halve(&self) -> Self {
        MarkerPoly(
            self.0
                .iter()
                .map(|(k, c)| (*k, c / BigInt::from(2)))
                .collect(),
        )
    }
    /// Only monomials are units.
    fn inverse(&self) -> Option<Self> {
        if self.0.len() != 1 {
            return None;
        }
        let (&(a, b), c) = self.0.iter().next()?;
        Some(MarkerPoly::monomial(-a, -b, c.recip()))
    }
}

/// Power series in `z` truncated after `z^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries<C> {
    coeffs: Vec<C>,
}

pub type Series = TruncSeries<BigRational>;
pub type MarkedSeries = TruncSeries<MarkerPoly>;

impl<C: Coefficient> TruncSeries<C> {
    /// Series with coefficients `coeffs[0..]`; the order is `len - 1`.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series keeps at least its constant term"
        );
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries::new(vec![C::zero(); order + 1])
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        TruncSeries::constant(C::one(), order)
    }

    /// `c z^m`.
    pub fn monomial(c: C, m: usize, order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        if m <= order {
            s.coeffs[m] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries::new((0..=order).map(|i| self.coeff(i)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries::new((0..=n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries::new((0..=n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(TruncSeries::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiply by `z^m`, keeping the order.
    pub fn shift(&self, m: usize) -> Self {
        TruncSeries::new(
            (0..=self.order())
                .map(|i| {
                    if i < m {
                        C::zero()
                    } else {
                        self.coeffs[i - m].clone()
                    }
                })
                .collect(),
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(Error::DivisionByNonUnit)?;
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = C::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&out[m - i]));
                }
            }
            out.push(C::zero().sub(&acc.mul(&inv0)));
        }
        Ok(TruncSeries::new(out))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Square root with constant term one.
    pub fn sqrt(&self) -> Result<Self> {
        if self.coeffs[0] != C::one() {
            return Err(Error::SqrtOfNonUnit);
        }
        let n = self.order();
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(C::one());
        for m in 1..=n {
            let mut acc = self.coeffs[m].clone();
            for i in 1..m {
                acc = acc.sub(&out[i].mul(&out[m - i]));
            }
            out.push(acc.halve());
        }
        Ok(TruncSeries::new(out))
    }
}

impl Series {
    pub fn z(order: usize) -> Series {
        Series::monomial(One::one(), 1, order)
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Series {
        Series::new(
            (0..=order)
                .map(|i| BigRational::from_integer(coeffs.get(i).copied().unwrap_or(0).into()))
                .collect(),
        )
    }

    /// `self(inner(z))`; `inner` needs a zero constant term.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        if !Zero::is_zero(&inner.coeffs[0]) {
            return Err(Error::ComposeNonzeroConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut out = Series::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            out = out.mul(&inner).add(&Series::constant(c.clone(), n));
        }
        Ok(out)
    }

    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral(i))
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("degree,coefficient\n");
        for (i, c) in self.to_integers()?.iter().enumerate() {
            out.push_str(&format!("{i},{c}\n"));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out {
            order: usize,
            coeffs: Vec<String>,
        }
        let coeffs = self
            .to_integers()?
            .iter()
            .map(ToString::to_string)
            .collect();
        Ok(serde_json::to_string(&Out {
            order: self.order(),
            coeffs,
        })
        .expect("plain data"))
    }
}

impl MarkedSeries {
    pub fn lift(s: &Series) -> MarkedSeries {
        MarkedSeries::new(
            s.coeffs
                .iter()
                .map(|c| MarkerPoly::constant(c.clone()))
                .collect(),
        )
    }

    /// Erase the markers.
    pub fn at_one(&self) -> Series {
        Series::new(self.coeffs.iter().map(MarkerPoly::at_one).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Term {
            x: i32,
            y: i32,
            c: String,
        }
        #[derive(Serialize)]
        struct Degree {
            z_degree: usize,
            terms: Vec<Term>,
        }
        let mut rows = Vec::new();
        for (n, p) in self.coeffs.iter().enumerate() {
            let mut terms = Vec::new();
            for (&(x, y), c) in p.terms() {
                if !c.is_integer() {
                    return Err(Error::NonIntegral(n));
                }
                terms.push(Term {
                    x,
                    y,
                    c: c.to_integer().to_string(),
                });
            }
            rows.push(Degree { z_degree: n, terms });
        }
        Ok(serde_json::to_string(&rows).expect("plain data"))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::from("z_degree,x,y,coefficient\n");
        for (n, p) in self.coeffs.iter().enumerate() {
            for (&(x, y), c) in p.terms() {
                if !c.is_integer() {
                    return Err(Error::NonIntegral(n));
                }
                out.push_str(&format!("{n},{x},{y},{}\n", c.to_integer()));
            }
        }
        Ok(out)
    }
}

fn int(c: i64) -> BigRational {
    BigRational::from_integer(c.into())
}

fn fib_series(k: usize, order: usize) -> Series {
    fibonacci(k).to_series(order)
}

/// `(1 - sqrt(1 - 4z)) / 2`: Catalan numbers shifted by one.
fn catalan_t(order: usize) -> Series {
    let root = Series::from_i64(&[1, -4], order)
        .sqrt()
        .expect("unit constant");
    Series::one(order)
        .sub(&root)
        .scale(&BigRational::new(1.into(), 2.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GfName {
    Directed,
    Symmetric,
    TreesLe,
    TreesEq,
    Kpar,
    Kdir,
    DkMinus,
    FdFlat,
    Zconvex,
}

impl GfName {
    pub const ALL: [GfName; 9] = [
        GfName::Directed,
        GfName::Symmetric,
        GfName::TreesLe,
        GfName::TreesEq,
        GfName::Kpar,
        GfName::Kdir,
        GfName::DkMinus,
        GfName::FdFlat,
        GfName::Zconvex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GfName::Directed => "directed",
            GfName::Symmetric => "symmetric",
            GfName::TreesLe => "trees_le",
            GfName::TreesEq => "trees_eq",
            GfName::Kpar => "kpar",
            GfName::Kdir => "kdir",
            GfName::DkMinus => "dk_minus",
            GfName::FdFlat => "fd_flat",
            GfName::Zconvex => "zconvex",
        }
    }

    /// Smallest admissible `k`, or `None` when the series takes no `k`.
    pub fn min_k(self) -> Option<usize> {
        match self {
            GfName::Directed | GfName::Symmetric | GfName::Zconvex => None,
            GfName::Kdir => Some(0),
            _ => Some(1),
        }
    }
}

impl FromStr for GfName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GfName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

fn check_k(name: &str, min_k: Option<usize>, k: Option<usize>) -> Result<usize> {
    let bad = |reason: String| Error::BadK {
        name: name.to_string(),
        reason,
    };
    match (min_k, k) {
        (None, None) => Ok(0),
        (None, Some(_)) => Err(bad("takes no k".into())),
        (Some(_), None) => Err(bad("k is required".into())),
        (Some(lo), Some(k)) if k < lo => Err(bad(format!("k must be at least {lo}"))),
        (Some(_), Some(k)) => Ok(k),
    }
}

/// Expansion of a univariate generating function up to `z^order`.
pub fn gf_univariate(name: GfName, k: Option<usize>, order: usize) -> Result<Series> {
    let k = check_k(name.as_str(), name.min_k(), k)?;
    let n = order;
    let f = |i: usize| fib_series(i, n);
    let z2 = Series::monomial(int(1), 2, n);
    let s = match name {
        GfName::Directed => z2.div(&Series::from_i64(&[1, -4], n).sqrt()?)?,
        GfName::Symmetric => z2.div(&Series::from_i64(&[1, 0, -4], n).sqrt()?)?,
        GfName::TreesLe => f(k).shift(1).div(&f(k + 1))?,
        GfName::TreesEq => Series::monomial(int(1), k, n).div(&f(k).mul(&f(k + 1)))?,
        GfName::Kpar => {
            let a = f(k + 2).div(&f(k + 3))?;
            let b = a.sub(&f(k + 1).div(&f(k + 2))?);
            z2.mul(&a.mul(&a).sub(&b.mul(&b)))
        }
        GfName::Kdir if k == 0 => z2
            .mul(&Series::from_i64(&[1, 1], n))
            .div(&Series::from_i64(&[1, -1], n))?,
        GfName::Kdir => {
            let a = f(k + 2).div(&f(2 * k + 3))?;
            z2.mul(&a.mul(&a)).mul(&f(2 * k + 2))
        }
        GfName::DkMinus => z2.mul(&f(k + 1)).div(&f(k + 2).sub(&f(k).shift(1)))?,
        GfName::FdFlat => {
            let a = Series::monomial(int(1), k + 1, n).div(&f(2 * k + 3))?;
            z2.mul(&a.mul(&a))
                .mul(&f(k + 2))
                .div(&f(k + 3).sub(&f(k + 1).shift(1)))?
        }
        GfName::Zconvex => {
            let root = Series::from_i64(&[1, -4], n).sqrt()?;
            let d = Series::from_i64(&[1, -2], n)
                .sub(&root)
                .scale(&BigRational::new(1.into(), 2.into()));
            let q4 = Series::from_i64(&[1, -4], n);
            let q3 = Series::from_i64(&[1, -3], n);
            let q1 = Series::from_i64(&[1, -1], n);
            let one_m_2z = Series::from_i64(&[1, -2], n);
            let first = Series::monomial(int(2), 4, n)
                .mul(&one_m_2z.mul(&one_m_2z))
                .mul(&d)
                .div(&q4.mul(&q4).mul(&q3).mul(&q1))?;
            let second = z2
                .mul(&Series::from_i64(&[1, -6, 10, -2, -1], n))
                .div(&q4.mul(&q3).mul(&q1))?;
            first.add(&second)
        }
    };
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkedName {
    ToprowPd,
    ToprowD,
    WidthHeight,
    CornersOut,
    CornersIn,
    Site,
}

impl MarkedName {
    pub const ALL: [MarkedName; 6] = [
        MarkedName::ToprowPd,
        MarkedName::ToprowD,
        MarkedName::WidthHeight,
        MarkedName::CornersOut,
        MarkedName::CornersIn,
        MarkedName::Site,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MarkedName::ToprowPd => "toprow_pd",
            MarkedName::ToprowD => "toprow_d",
            MarkedName::WidthHeight => "width_height",
            MarkedName::CornersOut => "corners_out",
            MarkedName::CornersIn => "corners_in",
            MarkedName::Site => "site",
        }
    }
}

impl FromStr for MarkedName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MarkedName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Expansion of a marked generating function up to `z^order`.
///
/// Markers: `x`/`y` are the top-row/rightmost-column sizes for the two
/// `toprow` series and width/height for `width_height`; `x` counts corners
/// for the corner series; `y` is the site-perimeter for `site`.
pub fn gf_marked(name: MarkedName, order: usize) -> Result<MarkedSeries> {
    let n = order;
    let c = |v: i64| MarkedSeries::constant(MarkerPoly::constant(int(v)), n);
    let mono = |p: MarkerPoly, m: usize| MarkedSeries::monomial(p, m, n);
    let x = || MarkerPoly::x();
    let y = || MarkerPoly::y();
    let xy = || MarkerPoly::monomial(1, 1, int(1));
    let lift = MarkedSeries::lift;
    Ok(match name {
        MarkedName::ToprowPd => {
            let t2 = lift(&catalan_t(n)).scale(&MarkerPoly::constant(int(2)));
            let den = c(2).sub(&t2.scale(&x().add(&y())));
            mono(xy().mul(&MarkerPoly::constant(int(2))), 2).div(&den)?
        }
        MarkedName::ToprowD => {
            let t = lift(&catalan_t(n));
            let one_t = c(1).sub(&t);
            let num = one_t.mul(&one_t).scale(&xy());
            let den = c(1).sub(&t.scale(&x())).mul(&c(1).sub(&t.scale(&y())));
            let directed = lift(&gf_univariate(GfName::Directed, None, n)?);
            num.div(&den)?.mul(&directed)
        }
        MarkedName::WidthHeight => {
            let lin = c(1).sub(&mono(x().add(&y()), 1));
            let disc = lin
                .mul(&lin)
                .sub(&mono(MarkerPoly::monomial(1, 1, int(4)), 2));
            mono(xy(), 2).div(&disc.sqrt()?)?
        }
        MarkedName::CornersOut | MarkedName::CornersIn | MarkedName::Site => {
            let one_m_x = MarkerPoly::one().sub(&x());
            let a = c(1).add(&mono(one_m_x.clone(), 1));
            let disc = a.mul(&a).sub(&mono(MarkerPoly::constant(int(4)), 1));
            let tc = a
                .sub(&disc.sqrt()?)
                .scale(&MarkerPoly::constant(BigRational::new(1.into(), 2.into())));
            let den = c(1)
                .sub(&tc.scale(&MarkerPoly::constant(int(2))))
                .add(&tc.mul(&tc).scale(&one_m_x));
            let inside = mono(MarkerPoly::one(), 2).div(&den)?;
            match name {
                MarkedName::CornersOut => inside.scale(&MarkerPoly::monomial(4, 0, int(1))),
                MarkedName::CornersIn => inside,
                _ => site_substitute(&inside)?,
            }
        }
    })
}

/// `x -> y^{-1}`, `z -> y^2 z` on a series in `x` and `z`.
fn site_substitute(s: &MarkedSeries) -> Result<MarkedSeries> {
    let coeffs = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let q = p.map_exponents(|a, b| (0, b - a + 2 * n as i32));
            if q.terms().any(|(&(_, e), _)| e < 0) {
                Err(Error::NegativeExponentResidue(n))
            } else {
                Ok(q)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MarkedSeries::new(coeffs))
}

/// Number of convex polyominoes of semi-perimeter `sp`:
/// `f_0 = 1`, `f_1 = 2`, `f_{n+2} = (2n + 11) 4^n - 4 (2n + 1) C(2n, n)`.
pub fn closed_form_convex(sp: usize) -> BigInt {
    assert!(sp >= 2, "semi-perimeter is at least 2");
    match sp - 2 {
        0 => BigInt::one(),
        1 => BigInt::from(2),
        m => {
            let n = m - 2;
            let four_n = BigInt::from(4).pow(n as u32);
            BigInt::from(2 * n + 11) * four_n - BigInt::from(4 * (2 * n + 1)) * central_binomial(n)
        }
    }
}

pub fn central_binomial(n: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 1);
    }
    c
}

pub fn catalan(n: usize) -> BigInt {
    central_binomial(n) / BigInt::from(n + 1)
}

/// Counts of 1-convex polyominoes for semi-perimeters `2..=max_sp`.
pub fn lconvex_seq(max_sp: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::new();
    for n in 0..=max_sp.saturating_sub(2) {
        let next = match n {
            0 => BigInt::one(),
            1 => BigInt::from(2),
            2 => BigInt::from(7),
            _ => BigInt::from(4) * &out[n - 1] - BigInt::from(2) * &out[n - 2],
        };
        out.push(next);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
}

/// Fibonacci-polynomial and tree-series identities for `k <= k_max`, series
/// ones compared to `z^order`.
pub fn identities_check(k_max: usize, order: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let mut push = |name: String, pass: bool| out.push(IdentityCheck { name, pass });
    for k in 1..=k_max {
        let lhs = fibonacci(k)
            .mul(&fibonacci(k))
            .sub(&fibonacci(k + 1).mul(&fibonacci(k - 1)));
        push(
            format!("F_{k}^2 - F_{}F_{} = z^{}", k + 1, k - 1, k - 1),
            lhs == IntPoly::monomial(k - 1),
        );
    }
    for k in 1..=k_max {
        for m in 1..=k_max {
            let rhs = fibonacci(k)
                .mul(&fibonacci(m))
                .sub(&fibonacci(k - 1).mul(&fibonacci(m - 1)).shift(1));
            push(
                format!("F_{} = F_{k}F_{m} - zF_{}F_{}", k + m - 1, k - 1, m - 1),
                fibonacci(k + m - 1) == rhs,
            );
        }
    }
    let n = order;
    let root = Series::from_i64(&[1, -4], n + 1)
        .sqrt()
        .expect("unit constant");
    // C(z) = (1 - sqrt(1 - 4z)) / (2z), the Catalan series
    let cat = Series::new(
        (0..=n)
            .map(|i| -root.coeff(i + 1) / BigInt::from(2))
            .collect(),
    );
    let root = root.truncate(n);
    let zc2 = cat.mul(&cat).shift(1);
    let plus = Series::one(n).add(&root);
    let minus = Series::one(n).sub(&root);
    for k in 0..=k_max {
        let f = fib_series(k, n);
        let via_catalan = Series::one(n)
            .sub(&zc2.pow(k))
            .div(&cat.pow(k).mul(&root))
            .expect("unit constant");
        push(format!("F_{k} from the Catalan series"), via_catalan == f);
        // closed form of the first-order recurrence
        let two_k = BigRational::from_integer(BigInt::from(2).pow(k as u32));
        let closed = plus
            .pow(k)
            .sub(&minus.pow(k))
            .div(&root.scale(&two_k))
            .expect("unit constant");
        push(format!("F_{k} closed form"), closed == f);
    }
    for k in 1..=k_max {
        let pass = (|| -> Result<bool> {
            let le = gf_univariate(GfName::TreesLe, Some(k), n)?;
            let below = if k == 1 {
                Series::zero(n)
            } else {
                gf_univariate(GfName::TreesLe, Some(k - 1), n)?
            };
            Ok(le.sub(&below) == gf_univariate(GfName::TreesEq, Some(k), n)?)
        })()
        .unwrap_or(false);
        push(
            format!("T<={k} - T<={} = z^{k}/(F_{k}F_{})", k - 1, k + 1),
            pass,
        );
    }
    out
}

/// `4 cos^2(pi / (2k + 3))` and the smallest positive root of `F_{2k+3}`.
pub fn asymptotic_mu(k: usize) -> (f64, f64) {
    let mu = 4.0 * (PI / (2 * k + 3) as f64).cos().powi(2);
    let f = fibonacci(2 * k + 3);
    let step = 1e-4;
    let mut lo = 0.0;
    let mut flo = f.eval_f64(lo);
    let mut hi = step;
    while f.eval_f64(hi).signum() == flo.signum() {
        lo = hi;
        flo = f.eval_f64(lo);
        hi += step;
        assert!(hi < 2.0, "F_(2k+3) has a root below 1/2");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f.eval_f64(mid);
        if fm == 0.0 {
            return (mu, mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (mu, 0.5 * (lo + hi))
}

/// `d_n / (mu^n n)` for the directed k-convex counts at each `n` in `ns`.
pub fn empirical_ratios(k: usize, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    let order = ns.iter().copied().max().unwrap_or(0);
    let (mu, _) = asymptotic_mu(k);
    let s = gf_univariate(GfName::Kdir, Some(k), order)?.to_integers()?;
    Ok(ns
        .iter()
        .map(|&n| {
            (
                n,
                s[n].to_f64().unwrap_or(f64::NAN) / (mu.powi(n as i32) * n as f64),
            )
        })
        .collect())
}
