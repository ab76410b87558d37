//! Univariate and bivariate polynomials over a coefficient field.
//!
//! The field is a type parameter with two instantiations in practice:
//! exact [`GaussianRational`] coefficients for identity checks and
//! `Complex64` for quadrature. There is no runtime mixing; converting
//! between the two is an explicit `map`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{GaussianRational, Rational};

#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial parse error: {0}")]
    Parse(String),
}

/// Coefficient field for polynomial arithmetic.
///
/// Implemented by [`Rational`], [`GaussianRational`] (exact) and
/// `Complex64` (floating). `approx_one` is exact equality for the exact
/// fields and a 1e-12 ball for the floating one.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_integer(n: i64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    /// `None` when dividing by zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    fn approx_one(&self) -> bool {
        self.is_one()
    }
}

impl Scalar for Rational {
    fn from_integer(n: i64) -> Self {
        Rational::from_integer(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        Rational::from_bigint(n.clone())
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        Rational::checked_div(self, rhs).ok()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::one()
    }
}

impl Scalar for GaussianRational {
    fn from_integer(n: i64) -> Self {
        GaussianRational::from_integer(n)
    }

    fn from_bigint(n: &BigInt) -> Self {
        GaussianRational::from_rational(Rational::from_bigint(n.clone()))
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        GaussianRational::checked_div(self, rhs).ok()
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::one()
    }
}

impl Scalar for f64 {
    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn approx_one(&self) -> bool {
        (self - 1.0).abs() <= 1e-12
    }
}

impl Scalar for Complex64 {
    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_bigint(n: &BigInt) -> Self {
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn approx_one(&self) -> bool {
        (self - Complex64::new(1.0, 0.0)).norm() <= 1e-12
    }
}

/// Which variable of a bivariate polynomial an operation addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    Zeta1,
    Zeta2,
}

/// Dense univariate polynomial; `coeffs[k]` multiplies `z^k`, trailing
/// zeros trimmed so the representation is canonical.
#[derive(Clone, PartialEq)]
pub struct UnivariatePoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UnivariatePoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(degree: usize, c: F) -> Self {
        let mut coeffs = vec![F::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Horner evaluation; exact when the field is exact.
    pub fn evaluate(&self, z: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| F::from_integer(k as i64) * c.clone())
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UnivariatePoly<G> {
        UnivariatePoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Scalar> Add for &UnivariatePoly<F> {
    type Output = UnivariatePoly<F>;
    fn add(self, rhs: &UnivariatePoly<F>) -> UnivariatePoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        UnivariatePoly::new(coeffs)
    }
}

impl<F: Scalar> Sub for &UnivariatePoly<F> {
    type Output = UnivariatePoly<F>;
    fn sub(self, rhs: &UnivariatePoly<F>) -> UnivariatePoly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        UnivariatePoly::new(coeffs)
    }
}

impl<F: Scalar> Mul for &UnivariatePoly<F> {
    type Output = UnivariatePoly<F>;
    fn mul(self, rhs: &UnivariatePoly<F>) -> UnivariatePoly<F> {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut coeffs = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        UnivariatePoly::new(coeffs)
    }
}

impl<F: Scalar> Neg for &UnivariatePoly<F> {
    type Output = UnivariatePoly<F>;
    fn neg(self) -> UnivariatePoly<F> {
        UnivariatePoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Scalar> fmt::Debug for UnivariatePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnivariatePoly{:?}", self.coeffs)
    }
}

/// Sparse bivariate polynomial: exponent pair `(i, j)` of
/// `zeta1^i zeta2^j` maps to a nonzero coefficient.
#[derive(Clone, PartialEq)]
pub struct BivariatePoly<F> {
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Scalar> BivariatePoly<F> {
    pub fn zero() -> Self {
        BivariatePoly { terms: BTreeMap::new() }
    }

    pub fn monomial(i: u32, j: u32, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, F)>) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c * zeta1^i zeta2^j`, dropping the term if it cancels.
    pub fn add_term(&mut self, i: u32, j: u32, c: F) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(F::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &F)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree(&self, var: Variable) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Variable::Zeta1 => i,
                Variable::Zeta2 => j,
            })
            .max()
    }

    /// Exact formal partial derivative of the given order.
    pub fn partial_derivative(&self, var: Variable, order: u32) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            let e = match var {
                Variable::Zeta1 => i,
                Variable::Zeta2 => j,
            };
            if e < order {
                continue;
            }
            // falling factorial e (e-1) ... (e-order+1)
            let mut fall = BigInt::one();
            for k in 0..order {
                fall *= u64::from(e - k);
            }
            let coeff = c.clone() * F::from_bigint(&fall);
            match var {
                Variable::Zeta1 => out.add_term(i - order, j, coeff),
                Variable::Zeta2 => out.add_term(i, j - order, coeff),
            }
        }
        out
    }

    /// Restriction to the diagonal `zeta1 = zeta2 = z`.
    pub fn restrict_diagonal(&self) -> UnivariatePoly<F> {
        let deg = match self.total_degree() {
            Some(d) => d as usize,
            None => return UnivariatePoly::zero(),
        };
        let mut coeffs = vec![F::zero(); deg + 1];
        for (i, j, c) in self.terms() {
            let k = (i + j) as usize;
            coeffs[k] = coeffs[k].clone() + c.clone();
        }
        UnivariatePoly::new(coeffs)
    }

    pub fn evaluate(&self, z1: &F, z2: &F) -> F {
        // grouped Horner: sum_i zeta1^i * (sum_j c_ij zeta2^j)
        let mut by_i: BTreeMap<u32, Vec<(u32, &F)>> = BTreeMap::new();
        for (i, j, c) in self.terms() {
            by_i.entry(i).or_default().push((j, c));
        }
        let mut acc = F::zero();
        let mut last_i = None;
        for (&i, terms) in by_i.iter().rev() {
            if let Some(prev) = last_i {
                let gap: u32 = prev - i;
                for _ in 0..gap {
                    acc = acc * z1.clone();
                }
            }
            let mut inner = F::zero();
            let mut last_j = None;
            for &(j, c) in terms.iter().rev() {
                if let Some(prevj) = last_j {
                    let gap: u32 = prevj - j;
                    for _ in 0..gap {
                        inner = inner * z2.clone();
                    }
                }
                inner = inner + c.clone();
                last_j = Some(j);
            }
            if let Some(j0) = last_j {
                for _ in 0..j0 {
                    inner = inner * z2.clone();
                }
            }
            acc = acc + inner;
            last_i = Some(i);
        }
        if let Some(i0) = last_i {
            for _ in 0..i0 {
                acc = acc * z1.clone();
            }
        }
        acc
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero();
        for (i, j, c) in self.terms() {
            out.add_term(i, j, c.clone() * s.clone());
        }
        out
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> BivariatePoly<G> {
        let mut out = BivariatePoly::zero();
        for (i, j, c) in self.terms() {
            out.add_term(i, j, f(c));
        }
        out
    }
}

impl<F: Scalar> Add for &BivariatePoly<F> {
    type Output = BivariatePoly<F>;
    fn add(self, rhs: &BivariatePoly<F>) -> BivariatePoly<F> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<F: Scalar> Sub for &BivariatePoly<F> {
    type Output = BivariatePoly<F>;
    fn sub(self, rhs: &BivariatePoly<F>) -> BivariatePoly<F> {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<F: Scalar> Mul for &BivariatePoly<F> {
    type Output = BivariatePoly<F>;
    fn mul(self, rhs: &BivariatePoly<F>) -> BivariatePoly<F> {
        let mut out = BivariatePoly::zero();
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in rhs.terms() {
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Scalar> Neg for &BivariatePoly<F> {
    type Output = BivariatePoly<F>;
    fn neg(self) -> BivariatePoly<F> {
        self.map(|c| -c.clone())
    }
}

impl<F: Scalar> fmt::Debug for BivariatePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly[")?;
        for (n, (i, j, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*x^{i}y^{j}")?;
        }
        write!(f, "]")
    }
}

// JSON wire formats for the exact instantiations:
//   bivariate: {"terms":[{"i":..,"j":..,"re":"p/q","im":"p/q"}]}
//   univariate: {"coeffs":[{"re":"p/q","im":"p/q"}]}

#[derive(Serialize, Deserialize)]
struct BivariateTermDto {
    i: u32,
    j: u32,
    re: Rational,
    im: Rational,
}

#[derive(Serialize, Deserialize)]
struct BivariateDto {
    terms: Vec<BivariateTermDto>,
}

#[derive(Serialize, Deserialize)]
struct CoeffDto {
    re: Rational,
    im: Rational,
}

#[derive(Serialize, Deserialize)]
struct UnivariateDto {
    coeffs: Vec<CoeffDto>,
}

impl Serialize for BivariatePoly<GaussianRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = BivariateDto {
            terms: self
                .terms()
                .map(|(i, j, c)| BivariateTermDto {
                    i,
                    j,
                    re: c.re.clone(),
                    im: c.im.clone(),
                })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly<GaussianRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = BivariateDto::deserialize(d)?;
        Ok(BivariatePoly::from_terms(
            dto.terms
                .into_iter()
                .map(|t| (t.i, t.j, GaussianRational::new(t.re, t.im))),
        ))
    }
}

impl Serialize for UnivariatePoly<GaussianRational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let dto = UnivariateDto {
            coeffs: self
                .coeffs()
                .iter()
                .map(|c| CoeffDto { re: c.re.clone(), im: c.im.clone() })
                .collect(),
        };
        dto.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnivariatePoly<GaussianRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dto = UnivariateDto::deserialize(d)?;
        Ok(UnivariatePoly::new(
            dto.coeffs
                .into_iter()
                .map(|c| GaussianRational::new(c.re, c.im))
                .collect(),
        ))
    }
}

impl BivariatePoly<GaussianRational> {
    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        serde_json::from_str(s).map_err(|e| PolyError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("bivariate polynomial serializes")
    }

    pub fn to_complex(&self) -> BivariatePoly<Complex64> {
        self.map(GaussianRational::to_complex64)
    }
}

impl UnivariatePoly<GaussianRational> {
    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        serde_json::from_str(s).map_err(|e| PolyError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("univariate polynomial serializes")
    }
}
