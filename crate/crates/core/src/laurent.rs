//! Laurent polynomials in x and y over cyclotomic numbers, with monomials in
//! named generic parameters.
//!
//! Terms are keyed by (x-exponent, y-exponent, xi-multidegree) where the
//! x-exponent is rational (denominator dividing some fixed d), the y-exponent
//! is a nonnegative integer, and the xi-multidegree records powers of the
//! named transcendentals. This one type carries polynomials f in C[x,y],
//! generic series psi as y-free elements, and curvette elements Psi.
//!
//! Invariants: finitely many terms, no zero coefficients stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{CycloNum, Rational};
use crate::dwps::{GenericParam, Semidegree};
use crate::error::{Error, Result};

/// Multidegree in the named generic parameters; zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct XiMultiDeg(BTreeMap<GenericParam, u32>);

impl XiMultiDeg {
    pub fn one() -> Self {
        XiMultiDeg(BTreeMap::new())
    }

    pub fn single(param: &GenericParam) -> Self {
        let mut m = BTreeMap::new();
        m.insert(param.clone(), 1);
        XiMultiDeg(m)
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (p, e) in &other.0 {
            *m.entry(p.clone()).or_insert(0) += e;
        }
        XiMultiDeg(m)
    }

    pub fn params(&self) -> impl Iterator<Item = &GenericParam> {
        self.0.keys()
    }

    pub fn degree_of(&self, param: &GenericParam) -> u32 {
        self.0.get(param).copied().unwrap_or(0)
    }
}

type Key = (Rational, u32, XiMultiDeg);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentBiPoly {
    terms: BTreeMap<Key, CycloNum>,
}

impl LaurentBiPoly {
    pub fn zero() -> Self {
        LaurentBiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycloNum::one())
    }

    pub fn constant(c: CycloNum) -> Self {
        let mut p = Self::zero();
        p.insert(Rational::zero(), 0, XiMultiDeg::one(), c);
        p
    }

    pub fn var_x() -> Self {
        Self::monomial(Rational::one(), 0, CycloNum::one())
    }

    pub fn var_y() -> Self {
        Self::monomial(Rational::zero(), 1, CycloNum::one())
    }

    pub fn monomial(x_exp: Rational, y_deg: u32, coeff: CycloNum) -> Self {
        let mut p = Self::zero();
        p.insert(x_exp, y_deg, XiMultiDeg::one(), coeff);
        p
    }

    pub fn param_monomial(x_exp: Rational, param: &GenericParam, coeff: CycloNum) -> Self {
        let mut p = Self::zero();
        p.insert(x_exp, 0, XiMultiDeg::single(param), coeff);
        p
    }

    /// The series phi(x) + xi_scale * xi * x^r as a y-free element.
    pub fn from_semidegree(psi: &Semidegree) -> Self {
        let mut p = Self::zero();
        for (e, c) in psi.phi().terms() {
            p.insert(e.clone(), 0, XiMultiDeg::one(), c.clone());
        }
        p.insert(
            psi.r_tilde().clone(),
            0,
            XiMultiDeg::single(psi.param()),
            psi.xi_scale().clone(),
        );
        p
    }

    fn insert(&mut self, x: Rational, y: u32, xi: XiMultiDeg, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let key = (x, y, xi);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &CycloNum)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((x, y, xi), c) in &other.terms {
            out.insert(x.clone(), *y, xi.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentBiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((x1, y1, xi1), c1) in &self.terms {
            for ((x2, y2, xi2), c2) in &other.terms {
                out.insert(x1 + x2, y1 + y2, xi1.mul(xi2), c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let mut out = Self::zero();
        for ((x, y, xi), c0) in &self.terms {
            out.insert(x.clone(), *y, xi.clone(), c0.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|(_, y, _)| *y).max().unwrap_or(0)
    }

    /// Largest x-exponent carrying a nonzero coefficient.
    pub fn deg_x(&self) -> Option<Rational> {
        self.terms.keys().map(|(x, _, _)| x.clone()).max()
    }

    pub fn params(&self) -> BTreeSet<GenericParam> {
        self.terms
            .keys()
            .flat_map(|(_, _, xi)| xi.params().cloned())
            .collect()
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|(_, _, xi)| !xi.is_constant())
    }

    /// True when this is an honest polynomial in C[x, y]: nonnegative integer
    /// x-exponents and no generic parameters.
    pub fn is_plane_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|(x, _, xi)| x.denom().is_one() && !x.is_negative() && xi.is_constant())
    }

    /// Substitute y := s (a y-free element); powers of s are built once.
    pub fn subst_y(&self, s: &Self) -> Self {
        assert_eq!(s.y_degree(), 0, "substituted series must be y-free");
        let max = self.y_degree() as usize;
        let mut powers: Vec<LaurentBiPoly> = Vec::with_capacity(max + 1);
        powers.push(Self::one());
        for _ in 0..max {
            powers.push(powers.last().unwrap().mul(s));
        }
        let mut out = Self::zero();
        for ((x, y, xi), c) in &self.terms {
            let base = Self::monomial(x.clone(), 0, c.clone());
            let mut t = base.mul(&powers[*y as usize]);
            if !xi.is_constant() {
                t = LaurentBiPoly {
                    terms: t
                        .terms
                        .into_iter()
                        .map(|((tx, ty, txi), tc)| ((tx, ty, txi.mul(xi)), tc))
                        .collect(),
                };
            }
            out = out.add(&t);
        }
        out
    }

    /// Substitute (x, y) := (px, py); requires a plane polynomial.
    pub fn subst_xy(&self, px: &Self, py: &Self) -> Self {
        assert!(self.is_plane_polynomial(), "substitution needs a polynomial");
        let max_x = self
            .terms
            .keys()
            .map(|(x, _, _)| x.to_integer().to_usize().unwrap())
            .max()
            .unwrap_or(0);
        let max_y = self.y_degree() as usize;
        let mut px_pows = vec![Self::one()];
        for _ in 0..max_x {
            px_pows.push(px_pows.last().unwrap().mul(px));
        }
        let mut py_pows = vec![Self::one()];
        for _ in 0..max_y {
            py_pows.push(py_pows.last().unwrap().mul(py));
        }
        let mut out = Self::zero();
        for ((x, y, _), c) in &self.terms {
            let i = x.to_integer().to_usize().unwrap();
            let t = px_pows[i].mul(&py_pows[*y as usize]).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// Total degree in (x, y) of a plane polynomial.
    pub fn total_degree(&self) -> Option<BigInt> {
        assert!(self.is_plane_polynomial());
        self.terms
            .keys()
            .map(|(x, y, _)| x.to_integer() + BigInt::from(*y))
            .max()
    }

    /// The top-degree homogeneous part of a plane polynomial.
    pub fn leading_form(&self) -> Self {
        let Some(d) = self.total_degree() else {
            return Self::zero();
        };
        LaurentBiPoly {
            terms: self
                .terms
                .iter()
                .filter(|((x, y, _), _)| x.to_integer() + BigInt::from(*y) == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative_x(&self) -> Self {
        assert!(self.is_plane_polynomial());
        let mut out = Self::zero();
        for ((x, y, xi), c) in &self.terms {
            if !x.is_zero() {
                out.insert(
                    x - Rational::one(),
                    *y,
                    xi.clone(),
                    c.scale(x),
                );
            }
        }
        out
    }

    pub fn derivative_y(&self) -> Self {
        assert!(self.is_plane_polynomial());
        let mut out = Self::zero();
        for ((x, y, xi), c) in &self.terms {
            if *y > 0 {
                out.insert(
                    x.clone(),
                    y - 1,
                    xi.clone(),
                    c.scale(&Rational::from_integer(BigInt::from(*y))),
                );
            }
        }
        out
    }

    /// Rename every occurrence of one generic parameter.
    pub fn rename_param(&self, from: &GenericParam, to: &GenericParam) -> Self {
        LaurentBiPoly {
            terms: self
                .terms
                .iter()
                .map(|((x, y, xi), c)| {
                    let mut m = xi.0.clone();
                    if let Some(e) = m.remove(from) {
                        *m.entry(to.clone()).or_insert(0) += e;
                    }
                    ((x.clone(), *y, XiMultiDeg(m)), c.clone())
                })
                .collect(),
        }
    }

    /// All coefficients as rationals, if none involves a root of unity.
    pub fn all_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    /// All x-exponents integral (denominator 1).
    pub fn all_x_integral(&self) -> bool {
        self.terms.keys().all(|(x, _, _)| x.denom().is_one())
    }
}

impl fmt::Display for LaurentBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Sort by total weight descending, then lexicographically.
        let mut keys: Vec<&Key> = self.terms.keys().collect();
        keys.sort_by(|a, b| (&b.0 + Rational::from_integer(BigInt::from(b.1)))
            .cmp(&(&a.0 + Rational::from_integer(BigInt::from(a.1))))
            .then(a.cmp(b)));
        let mut first = true;
        for key in keys {
            let c = &self.terms[key];
            let (x, y, xi) = key;
            let r = c.as_rational();
            let (neg, mag) = match &r {
                Some(q) => (q.is_negative(), q.abs().to_string()),
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
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" {
                factors.push(mag);
            }
            if !x.is_zero() {
                if x.is_one() {
                    factors.push("x".into());
                } else if x.denom().is_one() && !x.is_negative() {
                    factors.push(format!("x^{}", x));
                } else {
                    factors.push(format!("x^({})", x));
                }
            }
            if *y > 0 {
                factors.push(if *y == 1 { "y".into() } else { format!("y^{}", y) });
            }
            for p in xi.params() {
                let d = xi.degree_of(p);
                factors.push(if d == 1 { p.to_string() } else { format!("{}^{}", p, d) });
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Convenience: build a plane polynomial from integer-exponent terms
/// (x_exp, y_exp, coefficient).
pub fn plane_poly(terms: &[(i64, u32, Rational)]) -> Result<LaurentBiPoly> {
    let mut p = LaurentBiPoly::zero();
    for (x, y, c) in terms {
        if *x < 0 {
            return Err(Error::precondition("plane polynomial exponents must be nonnegative"));
        }
        p = p.add(&LaurentBiPoly::monomial(
            Rational::from_integer(BigInt::from(*x)),
            *y,
            CycloNum::from_rational(c.clone()),
        ));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, rat_i};
    use crate::dwps::DwpsPoly;

    #[test]
    fn subst_y_into_polynomial() {
        // f = y^2 - x^3 at y := x^(3/2) + xi*x^(-1) gives 2*xi*x^(1/2) + xi^2*x^(-2).
        let phi = DwpsPoly::from_rational_terms(&[(rat(3, 2), rat_i(1))]);
        let psi = Semidegree::new(phi, rat_i(-1), "xi").unwrap();
        let s = LaurentBiPoly::from_semidegree(&psi);
        let f = plane_poly(&[(0, 2, rat_i(1)), (3, 0, rat_i(-1))]).unwrap();
        let g = f.subst_y(&s);
        assert_eq!(g.deg_x(), Some(rat(1, 2)));
        assert_eq!(g.terms.len(), 2);
    }

    #[test]
    fn display_is_deterministic_and_readable() {
        let f = plane_poly(&[(0, 2, rat_i(1)), (1, 1, rat_i(-2)), (2, 0, rat_i(1))]).unwrap();
        assert_eq!(f.to_string(), "y^2 - 2*x*y + x^2");
    }

    #[test]
    fn leading_form_and_degree() {
        let f = plane_poly(&[(0, 3, rat_i(2)), (1, 0, rat_i(5)), (0, 0, rat_i(-1))]).unwrap();
        assert_eq!(f.total_degree(), Some(BigInt::from(3)));
        assert_eq!(f.leading_form().to_string(), "2*y^3");
    }
}
