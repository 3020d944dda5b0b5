//! Exact polynomial, power series and matrix arithmetic over a generic scalar.
//!
//! Everything here is generic over [`Scalar`]; the crate root exposes the
//! integer and rational instantiations used by the rest of the library.

mod factor;
mod matrix;
mod roots;
mod toeplitz;

pub use factor::{factor_over_z, MAX_FACTOR_DEGREE};
pub use matrix::Matrix;
pub use roots::{classify_roots, RootClassification, RootVerdict};
pub use toeplitz::{toeplitz_matrix, toeplitz_tp_check, toeplitz_tp_check_window, Minor, TpReport, TpVerdict};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Num;

use crate::error::{Error, Result};

/// Exact ring element: machine integers, big integers, rationals.
pub trait Scalar: Num + Clone + fmt::Debug + Neg<Output = Self> {}

impl<T> Scalar for T where T: Num + Clone + fmt::Debug + Neg<Output = T> {}

/// Dense polynomial, constant term first, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![T::one()] }
    }

    /// `c·x^d`.
    pub fn monomial(c: T, d: usize) -> Self {
        let mut coeffs = vec![T::zero(); d];
        coeffs.push(c);
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn constant(&self) -> T {
        self.coeff(0)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut k = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in self.coeffs.iter().skip(1) {
            k = k + T::one();
            out.push(c.clone() * k.clone());
        }
        Polynomial::new(out)
    }

    /// `x^n · p(1/x)`, assuming `n ≥ deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        Polynomial::new((0..=n).map(|i| self.coeff(n - i)).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    /// Long division. Returns `None` when some quotient step is not exact in
    /// `T` (never happens over a field) or the divisor is zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.leading()?.clone();
        let dd = d.degree()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let q = top.clone() / dl.clone();
            if q.clone() * dl.clone() != top {
                return None;
            }
            let shift = rem.len() - 1 - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - q.clone() * c.clone();
            }
            quot[shift] = q;
            rem.pop();
        }
        Some((Polynomial::new(quot), Polynomial::new(rem)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        match self.div_rem(d)? {
            (q, r) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl<T: Scalar + FromStr> Polynomial<T> {
    /// Parses `"1,-3,1"` (constant term first).
    pub fn parse_csv(text: &str) -> Result<Self> {
        parse_csv(text).map(Polynomial::new)
    }
}

impl<T: Scalar + fmt::Display> Polynomial<T> {
    pub fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(",")
    }
}

/// Parses comma separated values, ignoring surrounding whitespace.
pub fn parse_csv<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse().map_err(|_| Error::InvalidInput(format!("`{s}` is not an integer")))
        })
        .collect()
}

impl<T: Scalar + PartialOrd + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < T::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{abs}x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{abs}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Power series known up to (excluding) `x^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Series { coeffs }
    }

    /// Zero padded (or truncated) to `order` coefficients.
    pub fn from_polynomial(p: &Polynomial<T>, order: usize) -> Self {
        Series { coeffs: (0..order).map(|i| p.coeff(i)).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series { coeffs: self.coeffs.iter().take(order).cloned().collect() }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.coeffs
    }
}

/// Product, truncated to the shorter of the two orders.
pub fn series_mul<T: Scalar>(a: &Series<T>, b: &Series<T>) -> Series<T> {
    let order = a.order().min(b.order());
    let coeffs = (0..order)
        .map(|n| (0..=n).fold(T::zero(), |acc, i| acc + a.coeffs[i].clone() * b.coeffs[n - i].clone()))
        .collect();
    Series { coeffs }
}

/// First `order` coefficients of `1/h`.
pub fn series_reciprocal<T: Scalar>(h: &Polynomial<T>, order: usize) -> Result<Series<T>> {
    if !h.constant().is_one() {
        return Err(Error::InvalidInput("reciprocal needs constant term 1".into()));
    }
    let mut c: Vec<T> = Vec::with_capacity(order);
    for i in 0..order {
        if i == 0 {
            c.push(T::one());
            continue;
        }
        let top = h.coeffs().len().min(i + 1);
        let v = (1..top).fold(T::zero(), |acc, j| acc - h.coeffs()[j].clone() * c[i - j].clone());
        c.push(v);
    }
    Ok(Series { coeffs: c })
}

/// First `order` coefficients of `g/h`.
pub fn series_ratio<T: Scalar>(g: &Polynomial<T>, h: &Polynomial<T>, order: usize) -> Result<Series<T>> {
    let r = series_reciprocal(h, order)?;
    Ok(series_mul(&Series::from_polynomial(g, order), &r))
}

/// Nonnegative, `a_i a_{i+2} ≤ a_{i+1}²` and no zero strictly between
/// nonzero terms.
pub fn is_log_concave<T: Num + Clone + PartialOrd>(a: &[T]) -> bool {
    if a.iter().any(|x| *x < T::zero()) {
        return false;
    }
    let nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
    if let (Some(&lo), Some(&hi)) = (nz.first(), nz.last()) {
        if hi - lo + 1 != nz.len() {
            return false;
        }
    }
    a.windows(3).all(|w| w[0].clone() * w[2].clone() <= w[1].clone() * w[1].clone())
}
