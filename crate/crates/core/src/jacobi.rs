//! Jacobi polynomials and their two-variable inflation.
//!
//! `P_l^(a,b)(x) = sum_j (a+j+1)_(l-j) (a+b+l+1)_j / (j! (l-j)!) ((x-1)/2)^j`
//! over exact rationals, the homogenization `y^l P_l(1 + 2x/y)`, the
//! induced coefficient vector matching the Rankin-Cohen bracket, the
//! classical second-order ODE residual, and the generating-function
//! closed form.

use crate::exact::{factorial, pochhammer, ExactError, Rational};
use crate::poly::{BivariatePoly, UnivariatePoly};
use crate::rc::WeightPair;

/// Degree and the two classical parameters. `alpha`, `beta` may be
/// arbitrary rationals; the bracket correspondence uses
/// `alpha = lambda1 - 1`, `beta = 1 - lambda1 - lambda2 - 2l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiParams {
    pub ell: u32,
    pub alpha: Rational,
    pub beta: Rational,
}

impl JacobiParams {
    pub fn new(ell: u32, alpha: Rational, beta: Rational) -> Self {
        JacobiParams { ell, alpha, beta }
    }

    /// Parameters induced by a weight pair and bracket order.
    pub fn for_bracket(w: WeightPair, ell: u32) -> Self {
        let alpha = Rational::from_integer(i64::from(w.lambda1()) - 1);
        let beta = Rational::from_integer(
            1 - i64::from(w.lambda1()) - i64::from(w.lambda2()) - 2 * i64::from(ell),
        );
        JacobiParams { ell, alpha, beta }
    }
}

/// `P_l^(a,b)` expanded in the monomial basis, exactly.
pub fn jacobi_polynomial(p: &JacobiParams) -> UnivariatePoly<Rational> {
    let one = Rational::one();
    let half = Rational::new(1, 2);
    // (x-1)/2 as a polynomial
    let shifted = UnivariatePoly::new(vec![-&half, half]);
    let mut acc = UnivariatePoly::zero();
    let mut power = UnivariatePoly::constant(one.clone());
    for j in 0..=p.ell {
        let a_shift = &p.alpha + &Rational::from_integer(i64::from(j) + 1);
        let ab_shift = &(&p.alpha + &p.beta) + &Rational::from_integer(i64::from(p.ell) + 1);
        let num = &pochhammer(&a_shift, p.ell - j) * &pochhammer(&ab_shift, j);
        let den = Rational::from_bigint(factorial(j) * factorial(p.ell - j));
        let coeff = num.checked_div(&den).expect("factorials nonzero");
        acc = &acc + &power.scale(&coeff);
        if j < p.ell {
            power = &power * &shifted;
        }
    }
    acc
}

/// The degree-`l` homogenization `y^l P_l^(a,b)(1 + 2x/y)`, expanded
/// symbolically: exponent pair `(i, j)` is the `x^i y^j` term.
pub fn inflate(p: &JacobiParams) -> BivariatePoly<Rational> {
    let poly = jacobi_polynomial(p);
    // substitute z = 1 + 2x/y and clear y^l:
    //   z^k -> y^(l-k) (y + 2x)^k
    let two = Rational::from_integer(2);
    let mut out = BivariatePoly::zero();
    for (k, c) in poly.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // (y + 2x)^k expanded by the binomial theorem
        for i in 0..=k {
            let b = Rational::from_bigint(crate::exact::binomial(k as u32, i as i64));
            let coeff = &(c * &b) * &two.pow(i as i64).expect("nonnegative power");
            out.add_term(i as u32, (p.ell as usize - i) as u32, coeff);
        }
    }
    out
}

/// Coefficient of `d1^(l-j) d2^j` in the inflated polynomial applied to
/// the partials, i.e. the `x^(l-j) y^j` coefficient of [`inflate`] at
/// the bracket parameters.
pub fn rc_via_jacobi(w: WeightPair, ell: u32) -> Vec<Rational> {
    let inflated = inflate(&JacobiParams::for_bracket(w, ell));
    (0..=ell)
        .map(|j| {
            inflated
                .terms()
                .find(|&(i, jj, _)| i == ell - j && jj == j)
                .map(|(_, _, c)| c.clone())
                .unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Residual of the classical second-order equation
/// `(1-x^2) P'' + (b - a - (a+b+2)x) P' + l(l+a+b+1) P`; the zero
/// polynomial exactly when `P` is the Jacobi polynomial.
pub fn jacobi_ode_residual(p: &JacobiParams) -> UnivariatePoly<Rational> {
    let poly = jacobi_polynomial(p);
    let d1 = poly.derivative();
    let d2 = d1.derivative();

    let one = Rational::one();
    // 1 - x^2
    let lead = UnivariatePoly::new(vec![one.clone(), Rational::zero(), -&one]);
    // (b - a) - (a + b + 2) x
    let drift = UnivariatePoly::new(vec![
        &p.beta - &p.alpha,
        -&(&(&p.alpha + &p.beta) + &Rational::from_integer(2)),
    ]);
    // l (l + a + b + 1)
    let ell_q = Rational::from_integer(i64::from(p.ell));
    let shift = &(&ell_q + &(&p.alpha + &p.beta)) + &one;
    let eigen = &ell_q * &shift;

    let term2 = &lead * &d2;
    let term1 = &drift * &d1;
    let term0 = poly.scale(&eigen);
    &(&term2 + &term1) + &term0
}

/// Partial sum and closed form of the generating function
/// `sum_l P_l^(a,b)(x) t^l = 2^(a+b) / (R (1-t+R)^a (1+t+R)^b)` with
/// `R = sqrt(1 - 2xt + t^2)`.
#[derive(Clone, Copy, Debug)]
pub struct GenfunCheck {
    pub partial_sum: f64,
    pub closed_form: f64,
}

pub fn jacobi_genfun_check(
    alpha: &Rational,
    beta: &Rational,
    x: f64,
    t: f64,
    cutoff: u32,
) -> Result<GenfunCheck, ExactError> {
    if !(t.abs() < 1.0) || !(x > -1.0 && x < 1.0) {
        return Err(ExactError::Domain(format!(
            "generating function requires |t| < 1 and x in (-1,1), got x={x}, t={t}"
        )));
    }
    let r2 = 1.0 - 2.0 * x * t + t * t;
    if r2 <= 0.0 {
        return Err(ExactError::Domain(format!("R^2 = {r2} <= 0")));
    }
    let r = r2.sqrt();

    let af = alpha.to_f64();
    let bf = beta.to_f64();
    let base1 = 1.0 - t + r;
    let base2 = 1.0 + t + r;
    let integral = |q: &Rational| q.denominator() == &num_bigint::BigInt::from(1);
    if base1 <= 0.0 && !integral(alpha) {
        return Err(ExactError::Domain(format!(
            "non-integer power of non-positive base {base1}"
        )));
    }
    if base2 <= 0.0 && !integral(beta) {
        return Err(ExactError::Domain(format!(
            "non-integer power of non-positive base {base2}"
        )));
    }
    let closed_form = 2f64.powf(af + bf) / (r * base1.powf(af) * base2.powf(bf));

    let mut partial_sum = 0.0;
    let mut tpow = 1.0;
    for ell in 0..=cutoff {
        let p = jacobi_polynomial(&JacobiParams::new(ell, alpha.clone(), beta.clone()));
        let value = p.map(Rational::to_f64).evaluate(&x);
        partial_sum += value * tpow;
        tpow *= t;
    }
    Ok(GenfunCheck { partial_sum, closed_form })
}
