//! The Moebius action, the weight-`lambda` representations, and
//! residuals for the covariance identities of the bracket family.
//!
//! Identities between rational functions are checked exactly over
//! Gaussian rationals (group covariance via truncated Taylor jets, the
//! infinitesimal identity via polynomial algebra); quadrature enters
//! only where an integral is intrinsic.

use num_complex::Complex64;

use crate::contour::{kernel_ah, kernel_al, transform_tl, ContourError, HSeries, QuadParams};
use crate::exact::GaussianRational;
use crate::poly::{BivariatePoly, Scalar, UnivariatePoly, Variable};
use crate::rc::{rc_apply, WeightPair};

#[derive(Debug, thiserror::Error)]
pub enum CovarianceError {
    #[error("matrix determinant is not 1")]
    NotUnimodular,
    #[error("Moebius pole: c z + d vanishes at the evaluation point")]
    Pole,
    #[error("transformed contour leaves the holomorphy domain (pole at distance {distance} of the contour center, radius {radius})")]
    ContourInvalid { distance: f64, radius: f64 },
    #[error(transparent)]
    Contour(#[from] ContourError),
}

/// An `SL(2)` element over the coefficient field; the determinant is
/// validated on construction (exactly for exact fields, to 1e-12 for
/// the floating field).
#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusElement<F> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub d: F,
}

impl<F: Scalar> MoebiusElement<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self, CovarianceError> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if !det.approx_one() {
            return Err(CovarianceError::NotUnimodular);
        }
        Ok(MoebiusElement { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: F::one(),
            b: F::zero(),
            c: F::zero(),
            d: F::one(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            a: self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            b: self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            c: self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            d: self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        }
    }

    /// `(a z + b) / (c z + d)`; a vanishing denominator is an error.
    pub fn apply(&self, z: &F) -> Result<F, CovarianceError> {
        let den = self.c.clone() * z.clone() + self.d.clone();
        let num = self.a.clone() * z.clone() + self.b.clone();
        num.checked_div(&den).ok_or(CovarianceError::Pole)
    }
}

/// A traceless 2x2 matrix `[[p, q], [r, -p]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieElement<F> {
    pub p: F,
    pub q: F,
    pub r: F,
}

impl<F: Scalar> LieElement<F> {
    pub fn new(p: F, q: F, r: F) -> Self {
        LieElement { p, q, r }
    }

    /// The standard basis `e = (0,1,0)`, `h = (1,0,0)`, `f = (0,0,1)`.
    pub fn basis() -> [Self; 3] {
        [
            LieElement::new(F::zero(), F::one(), F::zero()),
            LieElement::new(F::one(), F::zero(), F::zero()),
            LieElement::new(F::zero(), F::zero(), F::one()),
        ]
    }
}

fn powi<F: Scalar>(x: &F, exp: i64) -> Option<F> {
    let base = if exp < 0 {
        F::one().checked_div(x)?
    } else {
        x.clone()
    };
    let mut acc = F::one();
    for _ in 0..exp.unsigned_abs() {
        acc = acc * base.clone();
    }
    Some(acc)
}

/// Residual of the difference-quotient identity
/// `g.zeta - g.z = (zeta - z) / ((c zeta + d)(c z + d))`; exactly zero.
pub fn gz_identity_residual<F: Scalar>(
    g: &MoebiusElement<F>,
    zeta: &F,
    z: &F,
) -> Result<F, CovarianceError> {
    let lhs = g.apply(zeta)? - g.apply(z)?;
    let den = (g.c.clone() * zeta.clone() + g.d.clone())
        * (g.c.clone() * z.clone() + g.d.clone());
    let rhs = (zeta.clone() - z.clone())
        .checked_div(&den)
        .ok_or(CovarianceError::Pole)?;
    Ok(lhs - rhs)
}

/// The weight-`lambda` action as a lazy closure: applying the group
/// element `g` uses the matrix entries of `g^(-1)`, so composition is a
/// homomorphism.
pub fn pi_action<F: Scalar + 'static>(
    lambda: u32,
    g: &MoebiusElement<F>,
    f: impl Fn(&F) -> F + 'static,
) -> impl Fn(&F) -> Result<F, CovarianceError> {
    let ginv = g.inverse();
    move |z: &F| {
        let den = ginv.c.clone() * z.clone() + ginv.d.clone();
        let cocycle = powi(&den, -i64::from(lambda)).ok_or(CovarianceError::Pole)?;
        let w = (ginv.a.clone() * z.clone() + ginv.b.clone())
            .checked_div(&den)
            .ok_or(CovarianceError::Pole)?;
        Ok(cocycle * f(&w))
    }
}

/// The infinitesimal action `-lambda (p - r z) - (2 p z + q - r z^2) d/dz`
/// applied to a polynomial; polynomials map to polynomials.
pub fn d_pi<F: Scalar>(lambda: u32, zee: &LieElement<F>, p: &UnivariatePoly<F>) -> UnivariatePoly<F> {
    // -lambda (p - r z)
    let mult = UnivariatePoly::new(vec![
        -F::from_integer(i64::from(lambda)) * zee.p.clone(),
        F::from_integer(i64::from(lambda)) * zee.r.clone(),
    ]);
    // -(2 p z + q - r z^2)
    let drift = UnivariatePoly::new(vec![
        -zee.q.clone(),
        -(F::from_integer(2) * zee.p.clone()),
        zee.r.clone(),
    ]);
    &(&mult * p) + &(&drift * &p.derivative())
}

/// The same operator acting on one slot of a bivariate polynomial.
fn d_pi_bivariate<F: Scalar>(
    lambda: u32,
    zee: &LieElement<F>,
    f: &BivariatePoly<F>,
    var: Variable,
) -> BivariatePoly<F> {
    let (one_zero, zero_one) = match var {
        Variable::Zeta1 => ((1u32, 0u32), (0u32, 0u32)),
        Variable::Zeta2 => ((0, 1), (0, 0)),
    };
    let _ = zero_one;
    let zeta = BivariatePoly::monomial(one_zero.0, one_zero.1, F::one());
    let zeta_sq = &zeta * &zeta;

    // -lambda (p - r zeta)
    let mut mult = BivariatePoly::constant(-F::from_integer(i64::from(lambda)) * zee.p.clone());
    mult = &mult + &zeta.scale(&(F::from_integer(i64::from(lambda)) * zee.r.clone()));

    // -(2 p zeta + q - r zeta^2)
    let mut drift = BivariatePoly::constant(-zee.q.clone());
    drift = &drift - &zeta.scale(&(F::from_integer(2) * zee.p.clone()));
    drift = &drift + &zeta_sq.scale(&zee.r.clone());

    let df = f.partial_derivative(var, 1);
    &(&mult * f) + &(&drift * &df)
}

/// Residual of the infinitesimal covariance identity: the bracket
/// intertwines `d_pi` of the output weight with the sum of the slotwise
/// actions. Exactly the zero polynomial.
pub fn infinitesimal_covariance_residual<F: Scalar>(
    w: WeightPair,
    ell: u32,
    zee: &LieElement<F>,
    f: &BivariatePoly<F>,
) -> UnivariatePoly<F> {
    let out_weight = w.lambda1() + w.lambda2() + 2 * ell;
    let lhs = d_pi(out_weight, zee, &rc_apply(w, ell, f));
    let acted = &d_pi_bivariate(w.lambda1(), zee, f, Variable::Zeta1)
        + &d_pi_bivariate(w.lambda2(), zee, f, Variable::Zeta2);
    let rhs = rc_apply(w, ell, &acted);
    &lhs - &rhs
}

/// Exact truncated Taylor expansions in two increments about a base
/// point, supporting field operations; used to differentiate the acted
/// function without building symbolic rational functions.
#[derive(Clone, Debug)]
struct Jet2 {
    n1: usize,
    n2: usize,
    // (n1+1) x (n2+1) Taylor coefficients, row-major in the first increment
    coeffs: Vec<GaussianRational>,
}

impl Jet2 {
    fn zero(n1: usize, n2: usize) -> Self {
        Jet2 {
            n1,
            n2,
            coeffs: vec![GaussianRational::zero(); (n1 + 1) * (n2 + 1)],
        }
    }

    fn constant(n1: usize, n2: usize, c: GaussianRational) -> Self {
        let mut jet = Self::zero(n1, n2);
        jet.coeffs[0] = c;
        jet
    }

    /// The first or second coordinate function around `base`; at
    /// truncation order zero only the constant term survives.
    fn variable(n1: usize, n2: usize, base: &GaussianRational, var: Variable) -> Self {
        let mut jet = Self::constant(n1, n2, base.clone());
        match var {
            Variable::Zeta1 if n1 >= 1 => *jet.at_mut(1, 0) = GaussianRational::one(),
            Variable::Zeta2 if n2 >= 1 => *jet.at_mut(0, 1) = GaussianRational::one(),
            _ => {}
        }
        jet
    }

    fn at(&self, i: usize, j: usize) -> &GaussianRational {
        &self.coeffs[i * (self.n2 + 1) + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut GaussianRational {
        &mut self.coeffs[i * (self.n2 + 1) + j]
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = &*a + b;
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.n1, self.n2);
        for i1 in 0..=self.n1 {
            for j1 in 0..=self.n2 {
                let a = self.at(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..=(self.n1 - i1) {
                    for j2 in 0..=(self.n2 - j1) {
                        let prod = a * rhs.at(i2, j2);
                        let c = out.at_mut(i1 + i2, j1 + j2);
                        *c = &*c + &prod;
                    }
                }
            }
        }
        out
    }

    fn scale(&self, s: &GaussianRational) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = &*c * s;
        }
        out
    }

    /// Power-series reciprocal; requires a nonzero constant term.
    fn recip(&self) -> Result<Self, CovarianceError> {
        let lead = self.at(0, 0).clone();
        let lead_inv = lead.recip().map_err(|_| CovarianceError::Pole)?;
        let mut out = Self::zero(self.n1, self.n2);
        for i in 0..=self.n1 {
            for j in 0..=self.n2 {
                if i == 0 && j == 0 {
                    out.coeffs[0] = lead_inv.clone();
                    continue;
                }
                // sum over (p,q) <= (i,j) with (p,q) != (0,0)
                let mut acc = GaussianRational::zero();
                for p in 0..=i {
                    for q in 0..=j {
                        if p == 0 && q == 0 {
                            continue;
                        }
                        acc = &acc + &(self.at(p, q) * out.at(i - p, j - q));
                    }
                }
                *out.at_mut(i, j) = &(-&acc) * &lead_inv;
            }
        }
        Ok(out)
    }

    fn powi(&self, exp: i64) -> Result<Self, CovarianceError> {
        let base = if exp < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::constant(self.n1, self.n2, GaussianRational::one());
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Evaluates a bivariate polynomial on a pair of jets.
    fn eval_poly(f: &BivariatePoly<GaussianRational>, z1: &Jet2, z2: &Jet2) -> Self {
        let d1 = f.degree(Variable::Zeta1).unwrap_or(0) as usize;
        let d2 = f.degree(Variable::Zeta2).unwrap_or(0) as usize;
        let mut pow1 = Vec::with_capacity(d1 + 1);
        let mut pow2 = Vec::with_capacity(d2 + 1);
        pow1.push(Jet2::constant(z1.n1, z1.n2, GaussianRational::one()));
        pow2.push(Jet2::constant(z1.n1, z1.n2, GaussianRational::one()));
        for k in 1..=d1 {
            pow1.push(pow1[k - 1].mul(z1));
        }
        for k in 1..=d2 {
            pow2.push(pow2[k - 1].mul(z2));
        }
        let mut acc = Jet2::zero(z1.n1, z1.n2);
        for (i, j, c) in f.terms() {
            let term = pow1[i as usize].mul(&pow2[j as usize]).scale(c);
            acc = acc.add(&term);
        }
        acc
    }
}

/// Jets of the moved coordinates and inverse cocycle factors for one
/// `(g, z, order)` combination, shared across weight cells and inputs
/// when sweeping the group covariance identity.
pub struct PreparedGroupPoint {
    order: u32,
    pow1: Vec<Jet2>,
    pow2: Vec<Jet2>,
    den1_inv: Jet2,
    den2_inv: Jet2,
    cocycle_den: GaussianRational,
    moved_z: GaussianRational,
}

impl PreparedGroupPoint {
    pub fn new(
        g: &MoebiusElement<GaussianRational>,
        z: &GaussianRational,
        order: u32,
        max_degree: u32,
    ) -> Result<Self, CovarianceError> {
        let ginv = g.inverse();
        let cocycle_den = ginv.c.clone() * z.clone() + ginv.d.clone();
        if cocycle_den.is_zero() {
            return Err(CovarianceError::Pole);
        }
        let moved_z = (ginv.a.clone() * z.clone() + ginv.b.clone())
            .checked_div(&cocycle_den)
            .map_err(|_| CovarianceError::Pole)?;

        let n = order as usize;
        let jet1 = Jet2::variable(n, n, z, Variable::Zeta1);
        let jet2 = Jet2::variable(n, n, z, Variable::Zeta2);
        let den1 = jet1
            .scale(&ginv.c)
            .add(&Jet2::constant(n, n, ginv.d.clone()));
        let den2 = jet2
            .scale(&ginv.c)
            .add(&Jet2::constant(n, n, ginv.d.clone()));
        let num1 = jet1
            .scale(&ginv.a)
            .add(&Jet2::constant(n, n, ginv.b.clone()));
        let num2 = jet2
            .scale(&ginv.a)
            .add(&Jet2::constant(n, n, ginv.b.clone()));
        let den1_inv = den1.recip()?;
        let den2_inv = den2.recip()?;
        let moved1 = num1.mul(&den1_inv);
        let moved2 = num2.mul(&den2_inv);

        let mut pow1 = vec![Jet2::constant(n, n, GaussianRational::one())];
        let mut pow2 = vec![Jet2::constant(n, n, GaussianRational::one())];
        for k in 1..=max_degree as usize {
            pow1.push(pow1[k - 1].mul(&moved1));
            pow2.push(pow2[k - 1].mul(&moved2));
        }
        Ok(PreparedGroupPoint {
            order,
            pow1,
            pow2,
            den1_inv,
            den2_inv,
            cocycle_den,
            moved_z,
        })
    }

    /// Fixes the weight cell, caching the cocycle power jets.
    pub fn cell(&self, w: WeightPair, ell: u32) -> Result<PreparedGroupCell<'_>, CovarianceError> {
        assert_eq!(ell, self.order, "cell order must match the prepared jets");
        let den_pow = self
            .den1_inv
            .powi(i64::from(w.lambda1()))?
            .mul(&self.den2_inv.powi(i64::from(w.lambda2()))?);
        let out_weight = i64::from(w.lambda1() + w.lambda2() + 2 * ell);
        let lhs_cocycle =
            powi(&self.cocycle_den, -out_weight).ok_or(CovarianceError::Pole)?;
        Ok(PreparedGroupCell { point: self, w, ell, den_pow, lhs_cocycle })
    }
}

/// One weight cell of a prepared group-covariance point.
pub struct PreparedGroupCell<'a> {
    point: &'a PreparedGroupPoint,
    w: WeightPair,
    ell: u32,
    den_pow: Jet2,
    lhs_cocycle: GaussianRational,
}

impl PreparedGroupCell<'_> {
    /// Residual for the monomial input `zeta1^i zeta2^j`.
    pub fn monomial_residual(&self, i: u32, j: u32) -> GaussianRational {
        assert!(
            (i as usize) < self.point.pow1.len() && (j as usize) < self.point.pow2.len(),
            "monomial degree exceeds the prepared power table"
        );
        let f = BivariatePoly::monomial(i, j, GaussianRational::one());
        let lhs = self.lhs_cocycle.clone()
            * rc_apply(self.w, self.ell, &f).evaluate(&self.point.moved_z);

        let acted = self.point.pow1[i as usize]
            .mul(&self.point.pow2[j as usize])
            .mul(&self.den_pow);
        let coeffs = crate::rc::rc_coefficients(self.w, self.ell);
        let mut rhs = GaussianRational::zero();
        for k in 0..=self.ell {
            // d1^(l-k) d2^k recovered from Taylor coefficients
            let fact = crate::exact::factorial(self.ell - k) * crate::exact::factorial(k);
            let deriv = acted.at((self.ell - k) as usize, k as usize)
                * &GaussianRational::from_rational(crate::exact::Rational::from_bigint(fact));
            rhs = &rhs
                + &(&deriv
                    * &GaussianRational::from_rational(crate::exact::Rational::from_bigint(
                        coeffs.coeff(k as usize).clone(),
                    )));
        }
        lhs - rhs
    }

    /// Residual for a general polynomial input, by linearity.
    pub fn residual(&self, f: &BivariatePoly<GaussianRational>) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (i, j, c) in f.terms() {
            acc = &acc + &(c * &self.monomial_residual(i, j));
        }
        acc
    }
}

/// Residual of the group covariance identity at an exact point:
/// acting on the bracket output versus bracketing the slotwise-acted
/// input, both evaluated at `z`. Exactly zero away from the poles of `g`.
pub fn group_covariance_residual(
    w: WeightPair,
    ell: u32,
    g: &MoebiusElement<GaussianRational>,
    f: &BivariatePoly<GaussianRational>,
    z: &GaussianRational,
) -> Result<GaussianRational, CovarianceError> {
    let max_degree = f
        .degree(Variable::Zeta1)
        .unwrap_or(0)
        .max(f.degree(Variable::Zeta2).unwrap_or(0));
    let point = PreparedGroupPoint::new(g, z, ell, max_degree)?;
    Ok(point.cell(w, ell)?.residual(f))
}

/// Which reading of the kernel covariance cocycle to use on the second
/// outer factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentConvention {
    /// `(c zeta1 + d)^(lambda1-2) (c zeta2 + d)^(lambda2-2)`, the form
    /// that the difference-quotient bookkeeping yields.
    Corrected,
    /// `lambda1 - 2` on both factors.
    Printed,
}

/// Residual of the fixed-order kernel covariance:
/// `A^(l)(g.z1, g.z2; g.z) (c z1+d)^(l1-2) (c z2+d)^e - (c z+d)^(l1+l2+2l) A^(l)(z1, z2; z)`
/// with `e` chosen by the convention.
pub fn kernel_covariance_residual(
    w: WeightPair,
    ell: u32,
    g: &MoebiusElement<Complex64>,
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
    convention: ExponentConvention,
) -> Result<Complex64, CovarianceError> {
    let moved = |x: Complex64| -> Result<Complex64, CovarianceError> {
        let den = g.c * x + g.d;
        if den.norm() < 1e-14 * (1.0 + x.norm()) {
            return Err(CovarianceError::Pole);
        }
        Ok((g.a * x + g.b) / den)
    };
    let gz1 = moved(zeta1)?;
    let gz2 = moved(zeta2)?;
    let gz = moved(z)?;
    let j1 = g.c * zeta1 + g.d;
    let j2 = g.c * zeta2 + g.d;
    let jz = g.c * z + g.d;

    let e2 = match convention {
        ExponentConvention::Corrected => w.lambda2() as i32 - 2,
        ExponentConvention::Printed => w.lambda1() as i32 - 2,
    };
    let lhs = kernel_al(w, ell, gz1, gz2, gz)?
        * j1.powi(w.lambda1() as i32 - 2)
        * j2.powi(e2);
    let rhs = jz.powi((w.lambda1() + w.lambda2() + 2 * ell) as i32)
        * kernel_al(w, ell, zeta1, zeta2, z)?;
    Ok(lhs - rhs)
}

/// Residual of the transform covariance checked by independent
/// quadrature on both sides; bounded by quadrature tolerance when the
/// contours stay clear of the poles the group element introduces.
#[allow(clippy::too_many_arguments)]
pub fn prop_transform_residual(
    w: WeightPair,
    ell: u32,
    h: &MoebiusElement<Complex64>,
    f: &BivariatePoly<GaussianRational>,
    z: Complex64,
    radius: f64,
    params: &QuadParams,
) -> Result<Complex64, CovarianceError> {
    let hinv = h.inverse();
    let den_z = hinv.c * z + hinv.d;
    if den_z.norm() < 1e-12 * (1.0 + z.norm()) {
        return Err(CovarianceError::Pole);
    }
    let out_weight = (w.lambda1() + w.lambda2() + 2 * ell) as i32;
    let fpoly = f.to_complex();
    let fc = move |z1: Complex64, z2: Complex64| fpoly.evaluate(&z1, &z2);

    // left side: cocycle * (T f)(h^(-1) z)
    let z_moved = (hinv.a * z + hinv.b) / den_z;
    let lhs = den_z.powi(-out_weight)
        * transform_tl(w, ell, &fc, z_moved, radius, radius, params)?.value;

    // right side: T of the slotwise-acted integrand at z; the contours
    // must keep away from the pole of the acted function
    if hinv.c.norm() > 1e-14 {
        let pole = -hinv.d / hinv.c;
        let distance = (pole - z).norm();
        if distance <= 1.25 * radius {
            return Err(CovarianceError::ContourInvalid { distance, radius });
        }
    }
    let acted = move |z1: Complex64, z2: Complex64| {
        let d1 = hinv.c * z1 + hinv.d;
        let d2 = hinv.c * z2 + hinv.d;
        let m1 = (hinv.a * z1 + hinv.b) / d1;
        let m2 = (hinv.a * z2 + hinv.b) / d2;
        d1.powi(-(w.lambda1() as i32)) * d2.powi(-(w.lambda2() as i32)) * fc(m1, m2)
    };
    let rhs = transform_tl(w, ell, &acted, z, radius, radius, params)?.value;
    Ok(lhs - rhs)
}

/// Residual of the series-kernel covariance: the kernel at the moved
/// points and rescaled parameter `t/(c z+d)^2` against the
/// cocycle-scaled kernel at the original points.
#[allow(clippy::too_many_arguments)]
pub fn ah_covariance_residual(
    w: WeightPair,
    h: &HSeries,
    g: &MoebiusElement<Complex64>,
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
    t: Complex64,
) -> Result<Complex64, CovarianceError> {
    let moved = |x: Complex64| -> Result<Complex64, CovarianceError> {
        let den = g.c * x + g.d;
        if den.norm() < 1e-14 * (1.0 + x.norm()) {
            return Err(CovarianceError::Pole);
        }
        Ok((g.a * x + g.b) / den)
    };
    let gz1 = moved(zeta1)?;
    let gz2 = moved(zeta2)?;
    let gz = moved(z)?;
    let j1 = g.c * zeta1 + g.d;
    let j2 = g.c * zeta2 + g.d;
    let jz = g.c * z + g.d;

    let lhs = kernel_ah(w, h, gz1, gz2, gz, t / (jz * jz))?;
    let rhs = jz.powi((w.lambda1() + w.lambda2()) as i32)
        * j1.powi(2 - w.lambda1() as i32)
        * j2.powi(2 - w.lambda2() as i32)
        * kernel_ah(w, h, zeta1, zeta2, z, t)?;
    Ok(lhs - rhs)
}

/// `phi(z1, z2; z) = (z1 - z2) / ((z1 - z)(z2 - z))`, exact.
pub fn phi<F: Scalar>(zeta1: &F, zeta2: &F, z: &F) -> Result<F, CovarianceError> {
    let den = (zeta1.clone() - z.clone()) * (zeta2.clone() - z.clone());
    (zeta1.clone() - zeta2.clone())
        .checked_div(&den)
        .ok_or(CovarianceError::Pole)
}

/// Residual of the exact cocycle rule
/// `phi(g.z1, g.z2; g.z) = (c z + d)^2 phi(z1, z2; z)`.
pub fn phi_cocycle_residual<F: Scalar>(
    g: &MoebiusElement<F>,
    zeta1: &F,
    zeta2: &F,
    z: &F,
) -> Result<F, CovarianceError> {
    let gz1 = g.apply(zeta1)?;
    let gz2 = g.apply(zeta2)?;
    let gz = g.apply(z)?;
    let lhs = phi(&gz1, &gz2, &gz)?;
    let jz = g.c.clone() * z.clone() + g.d.clone();
    let rhs = jz.clone() * jz * phi(zeta1, zeta2, z)?;
    Ok(lhs - rhs)
}
