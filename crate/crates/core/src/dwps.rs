//! Degree-wise Puiseux polynomials and generic degree-wise Puiseux series.
//!
//! A degree-wise Puiseux polynomial is a finite sum of terms c * x^(q/d) with
//! strictly decreasing rational exponents (a fractional power series "at
//! infinity"). A [`Semidegree`] is the pair (phi, r) with r strictly below
//! every exponent of phi, together with a named generic parameter xi; it
//! stands for the series psi = phi(x) + xi * x^r and encodes a divisorial
//! valuation at infinity via v(f) = -p * deg_x f(x, psi).
//!
//! Invariants:
//! - no zero coefficients are stored; exponents strictly decrease
//! - formal Puiseux pairs (q_i, p_i) are coprime with p_i >= 2 for i <= l,
//!   and the generic tail pair allows p_{l+1} = 1
//! - the formal polydromy order p is the lcm of all exponent denominators

use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{conductor_limit, CycloNum, Rational};
use crate::error::{Error, Result};

/// A named transcendental; distinct ids are algebraically independent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenericParam(pub String);

impl GenericParam {
    pub fn new(id: &str) -> Self {
        GenericParam(id.to_string())
    }
}

impl fmt::Display for GenericParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Finite degree-wise Puiseux polynomial: terms (exponent, coefficient),
/// exponents strictly decreasing, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DwpsPoly {
    terms: Vec<(Rational, CycloNum)>,
}

impl DwpsPoly {
    pub fn zero() -> Self {
        DwpsPoly { terms: vec![] }
    }

    /// Build from arbitrary (exponent, coefficient) pairs; merges equal
    /// exponents and drops zeros.
    pub fn new(mut terms: Vec<(Rational, CycloNum)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(Rational, CycloNum)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc = lc.add(&c),
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        DwpsPoly { terms: merged }
    }

    pub fn from_rational_terms(terms: &[(Rational, Rational)]) -> Self {
        Self::new(
            terms
                .iter()
                .map(|(e, c)| (e.clone(), CycloNum::from_rational(c.clone())))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[(Rational, CycloNum)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent, i.e. deg_x.
    pub fn deg(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Smallest exponent.
    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.last().map(|(e, _)| e)
    }

    pub fn coeff_at(&self, e: &Rational) -> CycloNum {
        self.terms
            .iter()
            .find(|(ex, _)| ex == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(CycloNum::zero)
    }

    pub fn sub(&self, other: &DwpsPoly) -> DwpsPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(e, c)| (e.clone(), c.neg())));
        DwpsPoly::new(terms)
    }

    pub fn scale(&self, f: &CycloNum) -> DwpsPoly {
        DwpsPoly::new(
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul(f)))
                .collect(),
        )
    }

    /// Puiseux pairs (q_i, p_i) of the characteristic (non-integral)
    /// exponents, scanned from the largest exponent down; the polydromy order
    /// is the product of the p_i.
    pub fn puiseux_pairs(&self) -> Result<Vec<(BigInt, u32)>> {
        let mut pairs = Vec::new();
        let mut d: u32 = 1;
        for (e, _) in &self.terms {
            let (q, p, nd) = split_pair(e, d)?;
            if p > 1 {
                pairs.push((q, p));
                d = nd;
            }
        }
        Ok(pairs)
    }

    /// Product of the p_i: smallest d with all exponents in (1/d) * Z.
    pub fn polydromy(&self) -> Result<u32> {
        let mut d: u32 = 1;
        for (e, _) in &self.terms {
            let (_, _, nd) = split_pair(e, d)?;
            d = nd;
        }
        Ok(d)
    }
}

/// Express exponent e relative to the running denominator d: returns
/// (q, p, new_d) with e = q / (d * p), gcd(q, p) = 1, new_d = d * p.
fn split_pair(e: &Rational, d: u32) -> Result<(BigInt, u32, u32)> {
    let den = e.denom().to_u32().ok_or_else(|| {
        Error::precondition(format!("exponent denominator too large in {}", e))
    })?;
    let g = gcd_u32(den, d);
    let p = den / g;
    let new_d = d.checked_mul(p).filter(|&nd| nd <= conductor_limit()).ok_or_else(|| {
        Error::precondition(format!(
            "polydromy order exceeds PUISEUX_MAX_CONDUCTOR while processing exponent {}",
            e
        ))
    })?;
    let q_rat = e * Rational::from_integer(BigInt::from(new_d));
    debug_assert!(q_rat.denom().is_one());
    Ok((q_rat.numer().clone(), p, new_d))
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Generic degree-wise Puiseux series psi = phi(x) + xi_scale * xi * x^r.
///
/// `xi_scale` is 1 except on conjugates, where it picks up a root of unity;
/// the valuation encoded by the series does not depend on it.
#[derive(Clone, Debug)]
pub struct Semidegree {
    phi: DwpsPoly,
    r_tilde: Rational,
    param: GenericParam,
    xi_scale: CycloNum,
    formal_pairs: Vec<(BigInt, u32)>,
    polydromy: u32,
}

impl Semidegree {
    /// Construct and validate: r must lie strictly below every exponent of phi.
    pub fn new(phi: DwpsPoly, r_tilde: Rational, param: &str) -> Result<Self> {
        if let Some(min) = phi.min_exponent() {
            if &r_tilde >= min {
                return Err(Error::precondition(format!(
                    "generic exponent {} must be strictly below every exponent of the fixed part (smallest is {})",
                    r_tilde, min
                )));
            }
        }
        let mut formal_pairs = phi.puiseux_pairs()?;
        let d = phi.polydromy()?;
        let (q, p_last, polydromy) = split_pair(&r_tilde, d)?;
        formal_pairs.push((q, p_last.max(1)));
        Ok(Semidegree {
            phi,
            r_tilde,
            param: GenericParam::new(param),
            xi_scale: CycloNum::one(),
            formal_pairs,
            polydromy,
        })
    }

    /// The series xi * x, encoding nu_0 = -deg.
    pub fn degree_valuation(param: &str) -> Self {
        Semidegree::new(DwpsPoly::zero(), Rational::one(), param).unwrap()
    }

    pub fn phi(&self) -> &DwpsPoly {
        &self.phi
    }

    pub fn r_tilde(&self) -> &Rational {
        &self.r_tilde
    }

    pub fn param(&self) -> &GenericParam {
        &self.param
    }

    pub fn xi_scale(&self) -> &CycloNum {
        &self.xi_scale
    }

    /// Formal Puiseux pairs (q_1, p_1), ..., (q_{l+1}, p_{l+1}); the last is
    /// the generic pair and may have p = 1.
    pub fn formal_pairs(&self) -> &[(BigInt, u32)] {
        &self.formal_pairs
    }

    /// Formal polydromy order p = p_1 * ... * p_{l+1}.
    pub fn polydromy(&self) -> u32 {
        self.polydromy
    }

    /// deg_x of the series: the leading exponent of phi, or r if phi = 0.
    pub fn deg(&self) -> Rational {
        self.phi.deg().cloned().unwrap_or_else(|| self.r_tilde.clone())
    }

    pub fn with_param(&self, param: &str) -> Self {
        let mut out = self.clone();
        out.param = GenericParam::new(param);
        out
    }

    /// Multiply all fixed coefficients by `factor` (the generic parameter
    /// absorbs its own rescaling).
    pub fn scaled(&self, factor: &CycloNum) -> Result<Self> {
        if factor.is_zero() {
            return Err(Error::precondition("cannot scale series by zero"));
        }
        let mut out = self.clone();
        out.phi = self.phi.scale(factor);
        Ok(out)
    }

    /// The j-th conjugate, 1 <= j <= p: the coefficient of x^(q/p) is
    /// multiplied by zeta_p^(j*q), including the generic term.
    pub fn conjugate(&self, j: u32) -> Result<Self> {
        let p = self.polydromy;
        let phi_terms = self
            .phi
            .terms
            .iter()
            .map(|(e, c)| {
                let n = exponent_times(e, p);
                let z = CycloNum::root_of_unity(p, (j as i64) * n)?;
                Ok((e.clone(), c.mul(&z)))
            })
            .collect::<Result<Vec<_>>>()?;
        let n_xi = exponent_times(&self.r_tilde, p);
        let z = CycloNum::root_of_unity(p, (j as i64) * n_xi)?;
        Ok(Semidegree {
            phi: DwpsPoly::new(phi_terms),
            r_tilde: self.r_tilde.clone(),
            param: self.param.clone(),
            xi_scale: self.xi_scale.mul(&z),
            formal_pairs: self.formal_pairs.clone(),
            polydromy: p,
        })
    }

    /// Structural equality of the underlying series (same fixed part, same
    /// generic exponent, same xi scale), over a common cyclotomic field.
    pub fn same_series(&self, other: &Self) -> bool {
        self.r_tilde == other.r_tilde
            && self.xi_scale == other.xi_scale
            && self.phi == other.phi
    }
}

/// e * p, which must be an integer for exponents of a series with polydromy p.
fn exponent_times(e: &Rational, p: u32) -> i64 {
    let v = e * Rational::from_integer(BigInt::from(p));
    debug_assert!(v.denom().is_one(), "exponent {} not in (1/{})Z", e, p);
    v.numer().to_i64().expect("exponent numerator out of range")
}

/// The largest exponent at which psi_a - conj_m(psi_b) has a nonzero
/// coefficient, viewed as a polynomial in the two independent parameters.
///
/// The xi terms never cancel against independent parameters, so the result is
/// finite and at least min(r_a, r_b).
pub fn contact_degree(a: &Semidegree, b: &Semidegree, m: u32) -> Result<Rational> {
    if a.param == b.param {
        return Err(Error::precondition(
            "contact degree undefined: dependent parameters",
        ));
    }
    let bc = b.conjugate(m)?;
    let mut exponents: Vec<Rational> = a
        .phi
        .terms()
        .iter()
        .chain(bc.phi.terms())
        .map(|(e, _)| e.clone())
        .collect();
    exponents.push(a.r_tilde.clone());
    exponents.push(bc.r_tilde.clone());
    exponents.sort();
    exponents.dedup();
    for e in exponents.into_iter().rev() {
        if e == a.r_tilde || e == bc.r_tilde {
            return Ok(e);
        }
        if a.phi.coeff_at(&e) != bc.phi.coeff_at(&e) {
            return Ok(e);
        }
    }
    unreachable!("generic terms always contribute an exponent")
}

impl fmt::Display for Semidegree {
    /// Canonical surface form, e.g. `x^(3/2) - 2*x^(1/3) + xi*x^(-5/6)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.phi.terms() {
            let r = c.as_rational();
            let (neg, mag) = match &r {
                Some(q) => (q.is_negative(), format!("{}", q.abs())),
                None => (false, format!("({})", c)),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, Some(&mag), e)?;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "xi")?;
        if !self.r_tilde.is_zero() {
            write!(f, "*")?;
            write_term(f, None, &self.r_tilde)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, mag: Option<&str>, e: &Rational) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "{}", mag.unwrap_or("1"));
    }
    if let Some(m) = mag {
        if m != "1" {
            write!(f, "{}*", m)?;
        }
    }
    write!(f, "x")?;
    if !e.is_one() {
        if e.denom().is_one() && !e.is_negative() {
            write!(f, "^{}", e)?;
        } else {
            write!(f, "^({})", e)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{lcm_u32, rat, rat_i};

    fn series(terms: &[(i64, i64, i64)], r: (i64, i64)) -> Semidegree {
        // terms: (num, den, coeff)
        let phi = DwpsPoly::from_rational_terms(
            &terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), rat_i(c)))
                .collect::<Vec<_>>(),
        );
        Semidegree::new(phi, rat(r.0, r.1), "xi").unwrap()
    }

    #[test]
    fn puiseux_pairs_integer_exponents() {
        let phi = DwpsPoly::from_rational_terms(&[(rat_i(3), rat_i(1)), (rat_i(1), rat_i(-2))]);
        assert!(phi.puiseux_pairs().unwrap().is_empty());
        assert_eq!(phi.polydromy().unwrap(), 1);
    }

    #[test]
    fn puiseux_pairs_two_characteristic_exponents() {
        let phi = DwpsPoly::from_rational_terms(&[(rat(3, 2), rat_i(1)), (rat(1, 3), rat_i(1))]);
        let pairs = phi.puiseux_pairs().unwrap();
        assert_eq!(pairs, vec![(BigInt::from(3), 2), (BigInt::from(2), 3)]);
        assert_eq!(phi.polydromy().unwrap(), 6);
    }

    #[test]
    fn puiseux_pairs_single_negative() {
        let phi = DwpsPoly::from_rational_terms(&[(rat(-5, 6), rat_i(1))]);
        assert_eq!(phi.puiseux_pairs().unwrap(), vec![(BigInt::from(-5), 6)]);
    }

    #[test]
    fn formal_pairs_examples() {
        let psi0 = Semidegree::degree_valuation("xi");
        assert_eq!(psi0.formal_pairs(), &[(BigInt::from(1), 1)]);
        assert_eq!(psi0.polydromy(), 1);

        let psi = series(&[(1, 1, 2)], (-3, 2));
        assert_eq!(psi.formal_pairs(), &[(BigInt::from(-3), 2)]);
        assert_eq!(psi.polydromy(), 2);

        let psi = series(&[(3, 2, 1)], (4, 3));
        assert_eq!(
            psi.formal_pairs(),
            &[(BigInt::from(3), 2), (BigInt::from(8), 3)]
        );
        assert_eq!(psi.polydromy(), 6);
    }

    #[test]
    fn generic_exponent_must_be_minimal() {
        let phi = DwpsPoly::from_rational_terms(&[(rat_i(1), rat_i(1))]);
        assert!(Semidegree::new(phi, rat_i(2), "xi").is_err());
    }

    #[test]
    fn conjugate_examples() {
        // p = 1: conjugation is trivial.
        let psi0 = Semidegree::degree_valuation("xi");
        assert!(psi0.conjugate(1).unwrap().same_series(&psi0));

        // psi = x^(1/2) + xi*x^(-1), j = 1: exponent 1/2 picks up zeta_2 = -1,
        // exponent -1 = -2/2 picks up zeta_2^(-2) = 1.
        let psi = series(&[(1, 2, 1)], (-1, 1));
        let c = psi.conjugate(1).unwrap();
        assert_eq!(c.phi().coeff_at(&rat(1, 2)), CycloNum::from_i64(-1));
        assert_eq!(c.xi_scale(), &CycloNum::one());

        // psi = 3x + xi*x^(-3/2), j = 1: integer exponent unchanged, xi flips.
        let psi = series(&[(1, 1, 3)], (-3, 2));
        let c = psi.conjugate(1).unwrap();
        assert_eq!(c.phi().coeff_at(&rat_i(1)), CycloNum::from_i64(3));
        assert_eq!(c.xi_scale(), &CycloNum::from_i64(-1));

        // conjugate(psi, p) = psi.
        let cp = psi.conjugate(2).unwrap();
        assert!(cp.same_series(&psi));
    }

    #[test]
    fn conjugation_is_a_group_action() {
        let psi = series(&[(3, 2, 1), (1, 3, -2)], (-5, 6));
        let p = psi.polydromy();
        for i in 1..=p {
            for j in 1..=p {
                let a = psi.conjugate(i).unwrap().conjugate(j).unwrap();
                let k = (i + j - 1) % p + 1;
                let b = psi.conjugate(k).unwrap();
                assert!(a.same_series(&b), "action failed at i={}, j={}", i, j);
            }
        }
    }

    #[test]
    fn contact_degree_examples() {
        let a = Semidegree::degree_valuation("xi");
        let b = series(&[(1, 1, 1)], (-3, 2)).with_param("xistar");
        assert_eq!(contact_degree(&a, &b, b.polydromy()).unwrap(), rat_i(1));

        // Same series, independent parameters: fixed parts cancel, the
        // parameters survive at -3/2 for both conjugates.
        let c = series(&[(1, 1, 1)], (-3, 2));
        assert_eq!(contact_degree(&c, &b, 2).unwrap(), rat(-3, 2));
        assert_eq!(contact_degree(&c, &b, 1).unwrap(), rat(-3, 2));
    }

    #[test]
    fn contact_degree_rejects_dependent_parameters() {
        let a = series(&[(1, 1, 1)], (-3, 2));
        let err = contact_degree(&a, &a, 1).unwrap_err();
        assert!(err.to_string().contains("dependent parameters"));
    }

    #[test]
    fn contact_degree_is_symmetric_via_matching_conjugates() {
        let a = series(&[(3, 2, 1)], (-1, 4)).with_param("xi");
        let b = series(&[(3, 2, 1), (1, 3, 1)], (-5, 6)).with_param("xistar");
        // The multiset of contact degrees weighted by the other polydromy
        // agrees in both orders (this is the symmetry of the matrix M).
        let lhs: Vec<Rational> = (1..=b.polydromy())
            .map(|m| contact_degree(&a, &b, m).unwrap() * rat_i(a.polydromy() as i64))
            .collect();
        let rhs: Vec<Rational> = (1..=a.polydromy())
            .map(|m| contact_degree(&b, &a, m).unwrap() * rat_i(b.polydromy() as i64))
            .collect();
        let sum = |v: &[Rational]| v.iter().fold(rat_i(0), |acc, x| acc + x);
        assert_eq!(sum(&lhs), sum(&rhs));
    }

    #[test]
    fn polydromy_is_lcm_of_denominators() {
        let psi = series(&[(3, 2, 1), (1, 3, -2)], (-5, 6));
        let mut l = 1u32;
        for (e, _) in psi.phi().terms() {
            l = lcm_u32(l, e.denom().to_u32().unwrap());
        }
        l = lcm_u32(l, psi.r_tilde().denom().to_u32().unwrap());
        assert_eq!(psi.polydromy(), l);
    }

    #[test]
    fn display_round_shape() {
        let psi = series(&[(3, 2, 1), (1, 3, -2)], (-5, 6));
        assert_eq!(psi.to_string(), "x^(3/2) - 2*x^(1/3) + xi*x^(-5/6)");
        assert_eq!(Semidegree::degree_valuation("xi").to_string(), "xi*x");
    }
}
