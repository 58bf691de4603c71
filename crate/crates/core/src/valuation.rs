//! Evaluating divisorial valuations at infinity on polynomials.
//!
//! With psi = phi(x) + xi*x^r of formal polydromy order p, the valuation acts
//! by v(f) = -p * deg_x f(x, psi(x, xi)): substitute the series for y and take
//! the largest x-exponent whose coefficient is nonzero as a polynomial in xi.
//! The normalization v(x) = -p makes all values integers and the mutual-value
//! matrices match the intersection theory exactly.
//!
//! The generic curvette element Psi = prod_{j=1..p} (y - psi^(j)) multiplies
//! out all conjugates; it always has integral x-exponents, and rational
//! coefficients whenever psi does.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::cyclo::Rational;
use crate::dwps::{GenericParam, Semidegree};
use crate::error::{Error, Result};
use crate::laurent::LaurentBiPoly;

/// v(f) for a polynomial f in C[x, y] (no generic parameters, integer
/// exponents). Errors on f = 0, where the valuation is undefined.
pub fn evaluate(psi: &Semidegree, f: &LaurentBiPoly) -> Result<BigInt> {
    if !f.is_plane_polynomial() {
        return Err(Error::precondition(
            "evaluate expects a polynomial in x and y without generic parameters",
        ));
    }
    evaluate_extended(psi, f)
}

/// Like [`evaluate`] but f may carry generic parameters independent of
/// psi's own; the value is read off coefficient-wise in those parameters.
pub fn evaluate_extended(psi: &Semidegree, f: &LaurentBiPoly) -> Result<BigInt> {
    if f.is_zero() {
        return Err(Error::precondition("valuation of zero undefined"));
    }
    if f.params().contains(psi.param()) {
        return Err(Error::precondition(format!(
            "polynomial depends on the series parameter {}",
            psi.param()
        )));
    }
    let series = LaurentBiPoly::from_semidegree(psi);
    let substituted = f.subst_y(&series);
    let deg = substituted
        .deg_x()
        .expect("substitution of a generic series never vanishes");
    let p = BigInt::from(psi.polydromy());
    let value = -deg * Rational::from_integer(p);
    if !value.denom().is_one() {
        return Err(Error::inconsistency(format!(
            "valuation value {} is not an integer",
            value
        )));
    }
    Ok(value.numer().clone())
}

/// The generic curvette element Psi = prod_{j=1}^{p} (y - psi^(j)(x, xi)).
pub fn generic_curvette_element(psi: &Semidegree) -> Result<LaurentBiPoly> {
    let p = psi.polydromy();
    let y = LaurentBiPoly::var_y();
    let mut factors: Vec<LaurentBiPoly> = (1..=p)
        .map(|j| Ok(y.sub(&LaurentBiPoly::from_semidegree(&psi.conjugate(j)?))))
        .collect::<Result<_>>()?;
    // Balanced product: partial products over sub-orbits stay small and their
    // coefficients collapse early.
    while factors.len() > 1 {
        let mut next = Vec::with_capacity(factors.len().div_ceil(2));
        let mut iter = factors.into_iter();
        while let Some(a) = iter.next() {
            match iter.next() {
                Some(b) => next.push(a.mul(&b)),
                None => next.push(a),
            }
        }
        factors = next;
    }
    let product = factors.pop().unwrap_or_else(LaurentBiPoly::one);
    if !product.all_x_integral() {
        return Err(Error::inconsistency(
            "curvette element has fractional x-exponents".to_string(),
        ));
    }
    Ok(product)
}

/// Closed formula for alpha* from the formal Puiseux pairs:
/// alpha* = p * sum_i (P_i - P_{i+1}) * q_i / (p_1...p_i), where
/// P_i = p_i * ... * p_{l+1} and the final pair contributes with P_{l+2} = 0.
pub fn alpha_star(psi: &Semidegree) -> BigInt {
    let pairs = psi.formal_pairs();
    let l1 = pairs.len();
    let mut suffix = vec![BigInt::one(); l1 + 1];
    for i in (0..l1).rev() {
        suffix[i] = &suffix[i + 1] * BigInt::from(pairs[i].1);
    }
    let mut prefix = BigInt::one();
    let mut sum = Rational::zero();
    for (i, (q, p_i)) in pairs.iter().enumerate() {
        prefix *= BigInt::from(*p_i);
        let count = if i + 1 < l1 {
            &suffix[i] - &suffix[i + 1]
        } else {
            suffix[i].clone()
        };
        sum += Rational::new(count * q, prefix.clone());
    }
    let total = sum * Rational::from_integer(BigInt::from(psi.polydromy()));
    debug_assert!(total.denom().is_one(), "alpha* must be an integer");
    total.numer().clone()
}

/// alpha* recomputed independently as -v(Psi | xi = xi*) with a fresh
/// parameter; the closed formula and this expansion must agree.
pub fn alpha_star_expansion(psi: &Semidegree) -> Result<BigInt> {
    let fresh = GenericParam::new("__alpha_star_fresh");
    if psi.param() == &fresh {
        return Err(Error::precondition("parameter collision"));
    }
    let curvette = generic_curvette_element(psi)?.rename_param(psi.param(), &fresh);
    Ok(-evaluate_extended(psi, &curvette)?)
}

fn require_adapted(psi: &Semidegree) -> Result<()> {
    // v(x) = -p < 0 always holds; v(x) <= v(y) amounts to deg_x(psi) <= 1.
    if psi.deg() > Rational::one() {
        return Err(Error::precondition(
            "coordinates not adapted: require v(x) < 0 and v(x) <= v(y)",
        ));
    }
    Ok(())
}

/// Skewness alpha = alpha* / p^2; positive exactly when the valuation alone
/// determines a compactification of the plane.
pub fn skewness(psi: &Semidegree) -> Result<Rational> {
    require_adapted(psi)?;
    let p = BigInt::from(psi.polydromy());
    Ok(Rational::new(alpha_star(psi), &p * &p))
}

pub fn determines_compactification(psi: &Semidegree) -> Result<bool> {
    require_adapted(psi)?;
    Ok(alpha_star(psi).is_positive())
}

/// Two descriptors define the same valuation iff the generic exponents agree
/// and one fixed part is a conjugate of the other.
pub fn valuation_equals(a: &Semidegree, b: &Semidegree) -> bool {
    if a.r_tilde() != b.r_tilde() || a.polydromy() != b.polydromy() {
        return false;
    }
    (1..=a.polydromy()).any(|j| match a.conjugate(j) {
        Ok(conj) => conj.phi() == b.phi(),
        Err(_) => false,
    })
}
