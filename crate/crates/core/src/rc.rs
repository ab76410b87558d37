//! Rankin-Cohen bracket coefficients and their action on polynomials.
//!
//! The bracket of weight `(lambda1, lambda2)` and order `l` is
//! `Rest . sum_j (-1)^j C(lambda1+l-1, j) C(lambda2+l-1, l-j) d1^(l-j) d2^j`,
//! an integer-coefficient bidifferential operator followed by diagonal
//! restriction. Everything in this module is exact.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{factorial, binomial, Rational};
use crate::poly::{BivariatePoly, Scalar, UnivariatePoly, Variable};

/// A pair of weights, both at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightPair {
    lambda1: u32,
    lambda2: u32,
}

impl WeightPair {
    pub fn new(lambda1: u32, lambda2: u32) -> Result<Self, crate::Error> {
        if lambda1 == 0 || lambda2 == 0 {
            return Err(crate::Error::InvalidWeight);
        }
        Ok(WeightPair { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> u32 {
        self.lambda1
    }

    pub fn lambda2(&self) -> u32 {
        self.lambda2
    }

    pub fn swapped(&self) -> Self {
        WeightPair { lambda1: self.lambda2, lambda2: self.lambda1 }
    }
}

/// The exact integer coefficient vector of one bracket: entry `j`
/// multiplies `d1^(l-j) d2^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RCCoefficients {
    pub weights: WeightPair,
    pub ell: u32,
    coeffs: Vec<BigInt>,
}

impl RCCoefficients {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }
}

/// Coefficients `(-1)^j C(lambda1+l-1, j) C(lambda2+l-1, l-j)` for `j = 0..=l`.
pub fn rc_coefficients(w: WeightPair, ell: u32) -> RCCoefficients {
    let n1 = w.lambda1 + ell - 1;
    let n2 = w.lambda2 + ell - 1;
    let coeffs = (0..=ell)
        .map(|j| {
            let c = binomial(n1, i64::from(j)) * binomial(n2, i64::from(ell - j));
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    RCCoefficients { weights: w, ell, coeffs }
}

/// Applies the bracket to a bivariate polynomial, exactly:
/// `sum_j coeffs[j] * Rest(d1^(l-j) d2^j f)`.
pub fn rc_apply<F: Scalar>(w: WeightPair, ell: u32, f: &BivariatePoly<F>) -> UnivariatePoly<F> {
    let rc = rc_coefficients(w, ell);
    let mut acc = UnivariatePoly::zero();
    for j in 0..=ell {
        let c = rc.coeff(j as usize);
        if c.is_zero() {
            continue;
        }
        let d = f
            .partial_derivative(Variable::Zeta1, ell - j)
            .partial_derivative(Variable::Zeta2, j);
        let restricted = d.restrict_diagonal().scale(&F::from_bigint(c));
        acc = &acc + &restricted;
    }
    acc
}

/// The exact signed rational `kappa` with `T^(l) = kappa * RC^(l)`:
/// `(-1)^(lambda1+l-1) (lambda1+lambda2+l-2)! / ((lambda1+l-1)! (lambda2+l-1)!)`.
pub fn scaling_constant(w: WeightPair, ell: u32) -> Rational {
    let num = factorial(w.lambda1 + w.lambda2 + ell - 2);
    let den = factorial(w.lambda1 + ell - 1) * factorial(w.lambda2 + ell - 1);
    let r = Rational::from_big(num, den).expect("factorials are nonzero");
    if (w.lambda1 + ell - 1) % 2 == 0 {
        r
    } else {
        -r
    }
}

/// The unsigned part of [`scaling_constant`]; this is also the
/// normalizing sequence realized by the two-variable transform.
pub fn scaling_magnitude(w: WeightPair, ell: u32) -> Rational {
    scaling_constant(w, ell).abs()
}
