//! Normalization constants of the unitary generating operator: `c_l`,
//! `r_l`, `a_l = (c_l r_l)^(-1/2)`, the weight-(1,1) limit, large-order
//! asymptotics, and the radius-of-convergence estimator.
//!
//! Integer weights `>= 2` get exact `rational * pi^k` rows; everything
//! else goes through `log_gamma` in log space so order 2000 is routine.

use crate::exact::{factorial, log_gamma, PiPower, Rational};
use crate::rc::WeightPair;

#[derive(Debug, thiserror::Error)]
pub enum ConstantsError {
    #[error("weight out of domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// One exact row of the constants table with its floating shadow.
#[derive(Clone, Debug)]
pub struct ConstantsRow {
    pub ell: u32,
    pub c: Rational,
    pub r: PiPower,
    pub a_squared: PiPower,
    pub a_float: f64,
}

/// `c_l = (l1+l-1)! (l2+l-1)! / ((l1+l2+2l-1) (l1+l2+l-2)! l!)`, exact
/// for integer weights.
pub fn c_ell(w: WeightPair, ell: u32) -> Rational {
    let num = factorial(w.lambda1() + ell - 1) * factorial(w.lambda2() + ell - 1);
    let den = num_bigint::BigInt::from(w.lambda1() + w.lambda2() + 2 * ell - 1)
        * factorial(w.lambda1() + w.lambda2() + ell - 2)
        * factorial(ell);
    Rational::from_big(num, den).expect("denominator nonzero")
}

/// Floating path of [`c_ell`] for real weights `> 0`.
pub fn c_ell_f(lambda1: f64, lambda2: f64, ell: u32) -> Result<f64, ConstantsError> {
    let l = f64::from(ell);
    let ln = log_gamma(lambda1 + l)? + log_gamma(lambda2 + l)?
        - (lambda1 + lambda2 + 2.0 * l - 1.0).ln()
        - log_gamma(lambda1 + lambda2 + l - 1.0)?
        - log_gamma(l + 1.0)?;
    Ok(ln.exp())
}

/// `r_l = (l1+l2+2l-1)! / (2^(2l+2) pi (l1-2)! (l2-2)!)` as an exact
/// `rational * pi^(-1)` for integer weights `>= 2`; weights at 1 sit on
/// the pole of the reciprocal Gamma factors and are rejected.
pub fn r_ell(w: WeightPair, ell: u32) -> Result<PiPower, ConstantsError> {
    if w.lambda1() < 2 || w.lambda2() < 2 {
        return Err(ConstantsError::Domain(format!(
            "r_ell needs both weights >= 2 (pole at weight 1), got ({}, {})",
            w.lambda1(),
            w.lambda2()
        )));
    }
    let num = factorial(w.lambda1() + w.lambda2() + 2 * ell - 2);
    let den = num_bigint::BigInt::from(2u8).pow(2 * ell + 2)
        * factorial(w.lambda1() - 2)
        * factorial(w.lambda2() - 2);
    let coeff = Rational::from_big(num, den).expect("denominator nonzero");
    Ok(PiPower::new(coeff, -1))
}

fn ln_r_ell_f(lambda1: f64, lambda2: f64, ell: u32) -> Result<f64, ConstantsError> {
    if !(lambda1 > 1.0) || !(lambda2 > 1.0) {
        return Err(ConstantsError::Domain(format!(
            "r_ell float path needs weights > 1, got ({lambda1}, {lambda2})"
        )));
    }
    let l = f64::from(ell);
    Ok(log_gamma(lambda1 + lambda2 + 2.0 * l - 1.0)?
        - (2.0 * l + 2.0) * std::f64::consts::LN_2
        - std::f64::consts::PI.ln()
        - log_gamma(lambda1 - 1.0)?
        - log_gamma(lambda2 - 1.0)?)
}

/// Floating path of [`r_ell`] for real weights `> 1`.
pub fn r_ell_f(lambda1: f64, lambda2: f64, ell: u32) -> Result<f64, ConstantsError> {
    Ok(ln_r_ell_f(lambda1, lambda2, ell)?.exp())
}

/// Full constants row: `a^2 = 1/(c r)` exactly, with the float shadow
/// `a = (c r)^(-1/2)`.
pub fn a_ell(w: WeightPair, ell: u32) -> Result<ConstantsRow, ConstantsError> {
    let c = c_ell(w, ell);
    let r = r_ell(w, ell)?;
    let a_squared = PiPower::from_rational(c.clone()).mul(&r).recip()?;
    let a_float = a_squared.to_f64().sqrt();
    Ok(ConstantsRow { ell, c, r, a_squared, a_float })
}

fn ln_a_ell_f(lambda1: f64, lambda2: f64, ell: u32) -> Result<f64, ConstantsError> {
    let l = f64::from(ell);
    let ln_c = log_gamma(lambda1 + l)? + log_gamma(lambda2 + l)?
        - (lambda1 + lambda2 + 2.0 * l - 1.0).ln()
        - log_gamma(lambda1 + lambda2 + l - 1.0)?
        - log_gamma(l + 1.0)?;
    Ok(-0.5 * (ln_c + ln_r_ell_f(lambda1, lambda2, ell)?))
}

/// Floating path of the normalizing constant for real weights `> 1`.
pub fn a_ell_f(lambda1: f64, lambda2: f64, ell: u32) -> Result<f64, ConstantsError> {
    Ok(ln_a_ell_f(lambda1, lambda2, ell)?.exp())
}

/// The weight-(1,1) constant: exact
/// `a^2 = 2^(l+2) pi (2l+1) / (l! (2l-1)!!)` and its float square root.
pub fn a_ell_11(ell: u32) -> (PiPower, f64) {
    let num = num_bigint::BigInt::from(2u8).pow(ell + 2) * num_bigint::BigInt::from(2 * ell + 1);
    let den = factorial(ell)
        * crate::exact::double_factorial(2 * i64::from(ell) - 1).expect("argument >= -1");
    let coeff = Rational::from_big(num, den).expect("denominator nonzero");
    let a_squared = PiPower::new(coeff, 1);
    let a_float = a_squared.to_f64().sqrt();
    (a_squared, a_float)
}

/// Compares the rescaled constant near the weight-1 corner against the
/// closed form: `numeric = eps * a(1+eps, 1+eps)` along the diagonal
/// approach, `closed_form = a(1,1)`.
pub fn limit_check_11(ell: u32, epsilon: f64) -> Result<(f64, f64), ConstantsError> {
    if !(epsilon > 0.0) || epsilon > 1e-3 {
        return Err(ConstantsError::Domain(format!(
            "epsilon must lie in (0, 1e-3], got {epsilon}"
        )));
    }
    let numeric = epsilon * a_ell_f(1.0 + epsilon, 1.0 + epsilon, ell)?;
    let closed_form = a_ell_11(ell).1;
    Ok((numeric, closed_form))
}

fn ln_a(w: WeightPair, ell: u32) -> Result<f64, ConstantsError> {
    if w.lambda1() == 1 && w.lambda2() == 1 {
        let l = f64::from(ell);
        // ln (2l-1)!! = ln (2l)! - l ln 2 - ln l!
        let ln_dfact = log_gamma(2.0 * l + 1.0)? - l * std::f64::consts::LN_2
            - log_gamma(l + 1.0)?;
        let ln_a_sq = (l + 2.0) * std::f64::consts::LN_2 + std::f64::consts::PI.ln()
            + (2.0 * l + 1.0).ln()
            - log_gamma(l + 1.0)?
            - ln_dfact;
        Ok(0.5 * ln_a_sq)
    } else if w.lambda1() >= 2 && w.lambda2() >= 2 {
        ln_a_ell_f(f64::from(w.lambda1()), f64::from(w.lambda2()), ell)
    } else {
        Err(ConstantsError::Domain(format!(
            "asymptotics defined for weights >= 2 or (1,1), got ({}, {})",
            w.lambda1(),
            w.lambda2()
        )))
    }
}

/// `(a_l l!)^(1/l)` computed entirely in log space; tends to 1.
pub fn asymptotic_ratio(w: WeightPair, ell: u32) -> Result<f64, ConstantsError> {
    if ell == 0 {
        return Err(ConstantsError::Domain("ratio needs ell >= 1".into()));
    }
    let l = f64::from(ell);
    Ok(((ln_a(w, ell)? + log_gamma(l + 1.0)?) / l).exp())
}

/// Normalizing sequences whose generating series radius is of interest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ASequence {
    /// `a_l = 1`.
    Unit,
    /// `a_l = (l1+l2+l-2)! / ((l1+l-1)! (l2+l-1)!)`, the sequence the
    /// two-variable transform realizes.
    Transform,
    /// The unitary normalization of this module.
    Unitary,
}

/// `ln |a_l|` for the chosen sequence.
pub fn log_a_sequence(kind: ASequence, w: WeightPair, ell: u32) -> Result<f64, ConstantsError> {
    match kind {
        ASequence::Unit => Ok(0.0),
        ASequence::Transform => {
            let l = f64::from(ell);
            Ok(
                log_gamma(f64::from(w.lambda1() + w.lambda2()) + l - 1.0)?
                    - log_gamma(f64::from(w.lambda1()) + l)?
                    - log_gamma(f64::from(w.lambda2()) + l)?,
            )
        }
        ASequence::Unitary => ln_a(w, ell),
    }
}

/// Float values `a_0 .. a_lmax` of the chosen sequence; small orders
/// only, used to build truncated series coefficients.
pub fn a_sequence_values(
    kind: ASequence,
    w: WeightPair,
    lmax: u32,
) -> Result<Vec<f64>, ConstantsError> {
    (0..=lmax)
        .map(|l| match kind {
            ASequence::Unit => Ok(1.0),
            ASequence::Transform => Ok(crate::rc::scaling_magnitude(w, l).to_f64()),
            ASequence::Unitary => {
                if w.lambda1() == 1 && w.lambda2() == 1 {
                    Ok(a_ell_11(l).1)
                } else {
                    a_ell_f(f64::from(w.lambda1()), f64::from(w.lambda2()), l)
                }
            }
        })
        .collect()
}

/// Single-point estimate of `1/rho = limsup (|a_l| l!)^(1/l)` at `l = L`.
#[derive(Clone, Copy, Debug)]
pub struct RadiusEstimate {
    pub inv_rho: f64,
    /// Set when the estimate exceeds 30, flagging an effectively zero
    /// radius of convergence.
    pub radius_zero: bool,
}

pub fn radius_estimate(
    kind: ASequence,
    w: WeightPair,
    big_l: u32,
) -> Result<RadiusEstimate, ConstantsError> {
    if big_l < 50 {
        return Err(ConstantsError::Domain(format!(
            "radius estimate needs L >= 50, got {big_l}"
        )));
    }
    let l = f64::from(big_l);
    let inv_rho = ((log_a_sequence(kind, w, big_l)? + log_gamma(l + 1.0)?) / l).exp();
    Ok(RadiusEstimate { inv_rho, radius_zero: inv_rho > 30.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l1: u32, l2: u32) -> WeightPair {
        WeightPair::new(l1, l2).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn c_fixtures() {
        assert_eq!(c_ell(w(2, 2), 0), q(1, 6));
        for ell in 0..=10 {
            assert_eq!(c_ell(w(1, 1), ell), q(1, 2 * i64::from(ell) + 1));
        }
        assert_eq!(c_ell(w(3, 2), 1), q(1, 12));
    }

    #[test]
    fn r_fixtures() {
        let r = r_ell(w(2, 2), 0).unwrap();
        assert_eq!(r.coefficient(), &q(1, 2));
        assert_eq!(r.half_exponent(), -2);

        let r = r_ell(w(2, 2), 1).unwrap();
        assert_eq!(r.coefficient(), &q(3, 2));

        // weight 1 sits on the pole
        assert!(r_ell(w(1, 1), 0).is_err());
        assert!(r_ell(w(1, 3), 2).is_err());
    }

    #[test]
    fn a_fixtures() {
        // (2,2,0): c r = 1/(12 pi), a^2 = 12 pi
        let row = a_ell(w(2, 2), 0).unwrap();
        assert_eq!(row.a_squared.coefficient(), &q(12, 1));
        assert_eq!(row.a_squared.half_exponent(), 2);
        assert!((row.a_float - (12.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);

        // (2,2,1): a^2 = 5 pi
        let row = a_ell(w(2, 2), 1).unwrap();
        assert_eq!(row.a_squared.coefficient(), &q(5, 1));

        // (3,3,0): c = 1/30, r = 6/pi, a^2 = 5 pi
        let row = a_ell(w(3, 3), 0).unwrap();
        assert_eq!(row.c, q(1, 30));
        assert_eq!(row.r.coefficient(), &q(6, 1));
        assert_eq!(row.a_squared.coefficient(), &q(5, 1));
    }

    #[test]
    fn a_squared_times_c_r_is_one() {
        for l1 in 2..=5 {
            for l2 in 2..=5 {
                for ell in 0..=20 {
                    let row = a_ell(w(l1, l2), ell).unwrap();
                    let product = row
                        .a_squared
                        .mul(&PiPower::from_rational(row.c.clone()))
                        .mul(&row.r);
                    assert_eq!(
                        product,
                        PiPower::from_rational(Rational::one()),
                        "l1={l1} l2={l2} ell={ell}"
                    );
                    // float shadow agrees with the exact square
                    let rel = (row.a_float * row.a_float - row.a_squared.to_f64()).abs()
                        / row.a_squared.to_f64();
                    assert!(rel < 1e-12);
                }
            }
        }
    }

    #[test]
    fn weight_one_corner() {
        let (a2, a) = a_ell_11(0);
        assert_eq!(a2.coefficient(), &q(4, 1));
        assert_eq!(a2.half_exponent(), 2);
        assert!((a - 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);

        let (a2, _) = a_ell_11(1);
        assert_eq!(a2.coefficient(), &q(24, 1));

        let (a2, _) = a_ell_11(2);
        assert_eq!(a2.coefficient(), &q(40, 3));
    }

    #[test]
    fn diagonal_limit_matches_closed_form() {
        for ell in 0..=5 {
            let (numeric, closed) = limit_check_11(ell, 1e-5).unwrap();
            let rel = (numeric - closed).abs() / closed;
            assert!(rel <= 1e-3, "ell={ell}: {numeric} vs {closed}, rel={rel}");
        }
        assert!(limit_check_11(0, 0.1).is_err());
    }

    #[test]
    fn limit_error_scales_linearly() {
        let rel_err = |eps: f64| {
            let (numeric, closed) = limit_check_11(2, eps).unwrap();
            (numeric - closed).abs() / closed
        };
        let e1 = rel_err(1e-4);
        let e2 = rel_err(5e-5);
        let e3 = rel_err(2.5e-5);
        // halving epsilon roughly halves the error
        assert!(e2 / e1 > 0.3 && e2 / e1 < 0.7, "{e1} {e2}");
        assert!(e3 / e2 > 0.3 && e3 / e2 < 0.7, "{e2} {e3}");
    }

    #[test]
    fn ratio_tends_to_one() {
        for pair in [w(1, 1), w(2, 2), w(3, 4)] {
            let far = asymptotic_ratio(pair, 2000).unwrap();
            let near = asymptotic_ratio(pair, 200).unwrap();
            assert!((far - 1.0).abs() <= 0.02, "{pair:?}: {far}");
            assert!((far - 1.0).abs() < (near - 1.0).abs(), "{pair:?}: {near} -> {far}");
        }
    }

    #[test]
    fn radius_estimates() {
        // unit sequence: factorial growth, radius effectively zero
        let est = radius_estimate(ASequence::Unit, w(1, 1), 100).unwrap();
        assert!((est.inv_rho - 37.99).abs() < 0.05, "{}", est.inv_rho);
        assert!(est.radius_zero);

        // transform sequence at weight (1,1) is exactly 1/l!
        let est = radius_estimate(ASequence::Transform, w(1, 1), 500).unwrap();
        assert!((est.inv_rho - 1.0).abs() <= 0.05, "{}", est.inv_rho);
        assert!(!est.radius_zero);

        let est = radius_estimate(ASequence::Unitary, w(2, 2), 500).unwrap();
        assert!((est.inv_rho - 1.0).abs() <= 0.05, "{}", est.inv_rho);

        assert!(radius_estimate(ASequence::Unit, w(1, 1), 10).is_err());
    }

    #[test]
    fn sequence_values() {
        let vals = a_sequence_values(ASequence::Transform, w(1, 1), 4).unwrap();
        // 1/l! at weight (1,1)
        let expected = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (v, e) in vals.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
        let vals = a_sequence_values(ASequence::Unitary, w(2, 2), 2).unwrap();
        assert!((vals[0] - (12.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
    }
}
