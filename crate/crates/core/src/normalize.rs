//! Normal forms of generic series under plane automorphisms, and the
//! factorization of polynomial automorphisms into elementary ones.
//!
//! The normal form of psi is either `xi*x^r` with r <= 1, or a series whose
//! leading exponent w satisfies w < 1 and w is neither an integer nor of the
//! form 1/n. Normalization alternates two moves:
//!
//! - Triangular: absorb the polynomial head of the fixed part (the series
//!   loses those terms; the recorded automorphism shifts y accordingly);
//! - Swap: exchange x and y, realized on series by exact functional
//!   inversion of y = psi(x), truncated at the exponent where the generic
//!   parameter first perturbs the inverse.
//!
//! Every emitted word element carries a substitution on polynomials; the
//! transport contract `evaluate(after, g) = evaluate(before, word(g))` is the
//! correctness oracle for all of it.

use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::{CycloNum, Rational};
use crate::dwps::{DwpsPoly, Semidegree};
use crate::error::{Error, Result};
use crate::laurent::LaurentBiPoly;

/// An elementary automorphism of the plane.
///
/// Each variant doubles as a substitution on polynomials (`subst`) and as a
/// pair of component polynomials (`as_map`); the two views agree:
/// `subst(g) = g(as_map())`.
#[derive(Clone, Debug)]
pub enum ElementaryAuto {
    /// (x, y) -> (y, x).
    Swap,
    /// (x, y) -> (x, y + f(x)) for a nonzero polynomial f.
    Triangular(LaurentBiPoly),
    /// (x, y) -> (a x + b y + e, c x + d y + f), with invertible matrix.
    Linear {
        m: [[Rational; 2]; 2],
        t: [Rational; 2],
    },
}

impl ElementaryAuto {
    pub fn linear_matrix(m: [[Rational; 2]; 2]) -> Self {
        ElementaryAuto::Linear { m, t: [Rational::zero(), Rational::zero()] }
    }

    pub fn swap_matrix() -> Self {
        Self::linear_matrix([
            [Rational::zero(), Rational::one()],
            [Rational::one(), Rational::zero()],
        ])
    }

    /// Scale only y: (x, y) -> (x, d*y).
    fn y_scaling(d: Rational) -> Self {
        Self::linear_matrix([[Rational::one(), Rational::zero()], [Rational::zero(), d]])
    }

    /// Component polynomials of the map.
    pub fn as_map(&self) -> (LaurentBiPoly, LaurentBiPoly) {
        let x = LaurentBiPoly::var_x();
        let y = LaurentBiPoly::var_y();
        match self {
            ElementaryAuto::Swap => (y, x),
            ElementaryAuto::Triangular(f) => (x.clone(), y.add(f)),
            ElementaryAuto::Linear { m, t } => {
                let lin = |a: &Rational, b: &Rational, c: &Rational| {
                    x.scale(&CycloNum::from_rational(a.clone()))
                        .add(&y.scale(&CycloNum::from_rational(b.clone())))
                        .add(&LaurentBiPoly::constant(CycloNum::from_rational(c.clone())))
                };
                (lin(&m[0][0], &m[0][1], &t[0]), lin(&m[1][0], &m[1][1], &t[1]))
            }
        }
    }

    /// The substitution g -> g composed with this map.
    pub fn subst(&self, g: &LaurentBiPoly) -> LaurentBiPoly {
        let (p, q) = self.as_map();
        g.subst_xy(&p, &q)
    }

    /// Transform a generic series so that evaluation commutes with `subst`:
    /// evaluate(applied, g) = evaluate(psi, subst(g)).
    pub fn apply_to_series(&self, psi: &Semidegree) -> Result<Semidegree> {
        match self {
            ElementaryAuto::Swap => apply_swap(psi),
            ElementaryAuto::Triangular(f) => {
                // subst shifts y by +f, so the series gains +f.
                add_poly_to_series(psi, f)
            }
            ElementaryAuto::Linear { m, t } => {
                let diag = m[0][0].is_one()
                    && m[0][1].is_zero()
                    && m[1][0].is_zero()
                    && t[0].is_zero()
                    && t[1].is_zero()
                    && !m[1][1].is_zero();
                if !diag {
                    return Err(Error::precondition(
                        "only y-scalings act on series directly",
                    ));
                }
                psi.scaled(&CycloNum::from_rational(m[1][1].clone()))
            }
        }
    }
}

impl fmt::Display for ElementaryAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryAuto::Swap => write!(f, "Swap"),
            ElementaryAuto::Triangular(p) => write!(f, "Triangular({})", p),
            ElementaryAuto::Linear { m, t } => write!(
                f,
                "Linear[[{}, {}], [{}, {}]] + ({}, {})",
                m[0][0], m[0][1], m[1][0], m[1][1], t[0], t[1]
            ),
        }
    }
}

/// A word of elementary automorphisms, applied first element first.
#[derive(Clone, Debug, Default)]
pub struct AutoWord(pub Vec<ElementaryAuto>);

impl AutoWord {
    pub fn new() -> Self {
        AutoWord(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The substitution realizing transport across the whole word:
    /// evaluate(final, g) = evaluate(initial, transport(g)).
    pub fn transport(&self, g: &LaurentBiPoly) -> LaurentBiPoly {
        self.0.iter().rev().fold(g.clone(), |h, s| s.subst(&h))
    }

    /// Component polynomials of the composed map (first element applied first).
    pub fn compose(&self) -> (LaurentBiPoly, LaurentBiPoly) {
        let mut m = (LaurentBiPoly::var_x(), LaurentBiPoly::var_y());
        for s in &self.0 {
            let (p, q) = s.as_map();
            m = (p.subst_xy(&m.0, &m.1), q.subst_xy(&m.0, &m.1));
        }
        m
    }

    pub fn apply_to_series(&self, psi: &Semidegree) -> Result<Semidegree> {
        let mut s = psi.clone();
        for step in &self.0 {
            s = step.apply_to_series(&s)?;
        }
        Ok(s)
    }
}

impl fmt::Display for AutoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(identity)");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{}", s)?;
        }
        Ok(())
    }
}

/// True iff psi matches one of the two normal-form shapes exactly.
pub fn is_normal_form(psi: &Semidegree) -> bool {
    match psi.phi().deg() {
        None => psi.r_tilde() <= &Rational::one(),
        Some(w) => {
            w < &Rational::one()
                && !w.denom().is_one()
                && !(w.numer().is_one() && w.is_positive())
        }
    }
}

/// The series psi - f(x), i.e. the valuation after (x, y) -> (x, y - f(x)).
pub fn apply_triangular(psi: &Semidegree, f: &LaurentBiPoly) -> Result<Semidegree> {
    add_poly_to_series(psi, &f.neg())
}

fn add_poly_to_series(psi: &Semidegree, f: &LaurentBiPoly) -> Result<Semidegree> {
    if !f.is_plane_polynomial() || f.y_degree() > 0 {
        return Err(Error::precondition(
            "triangular shift must be a polynomial in x alone",
        ));
    }
    let shift = DwpsPoly::new(
        f.terms()
            .map(|((e, _, _), c)| (e.clone(), c.clone()))
            .collect(),
    );
    let phi = psi.phi().sub(&shift.scale(&CycloNum::from_i64(-1)));
    Semidegree::new(phi, psi.r_tilde().clone(), &psi.param().0)
}

/// Exact rational n-th root, if one exists.
fn rational_nth_root(r: &Rational, n: u32) -> Option<Rational> {
    if n == 1 {
        return Some(r.clone());
    }
    if r.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |v: &BigInt| -> Option<BigInt> {
        let (sign, mag) = if v.is_negative() {
            (-BigInt::one(), -v)
        } else {
            (BigInt::one(), v.clone())
        };
        let root = mag.nth_root(n);
        if num::pow::pow(root.clone(), n as usize) == mag {
            Some(sign * root)
        } else {
            None
        }
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

/// c^e for rational c and rational e, exact or None.
fn rational_pow(c: &Rational, e: &Rational) -> Option<Rational> {
    let den = e.denom().to_u32()?;
    let num = e.numer().to_i64()?;
    let base = rational_nth_root(c, den)?;
    let mag = num::pow::pow(base.clone(), num.unsigned_abs() as usize);
    if num < 0 {
        if mag.is_zero() {
            None
        } else {
            Some(mag.recip())
        }
    } else {
        Some(mag)
    }
}

fn cyclo_rational_pow(c: &CycloNum, e: &Rational) -> Result<CycloNum> {
    if e.denom().is_one() {
        let n = e.numer().to_i64().unwrap();
        let pos = c.pow(n.unsigned_abs());
        return if n < 0 { pos.inverse() } else { Ok(pos) };
    }
    let r = c.as_rational().ok_or_else(|| {
        Error::precondition("fractional power of a non-rational coefficient")
    })?;
    let v = rational_pow(&r, e).ok_or_else(|| {
        Error::precondition(format!(
            "leading coefficient {} has no exact rational {} power; rescale coordinates first",
            r, e
        ))
    })?;
    Ok(CycloNum::from_rational(v))
}

/// y-free series helpers for the swap inversion, all truncated below `cutoff`.
fn truncate_below(s: &LaurentBiPoly, cutoff: &Rational) -> LaurentBiPoly {
    let mut out = LaurentBiPoly::zero();
    for ((x, y, xi), c) in s.terms() {
        if x >= cutoff {
            out = out.add(&{
                let mut t = LaurentBiPoly::monomial(x.clone(), *y, c.clone());
                if !xi.is_constant() {
                    t = t.mul(&xi_monomial(xi));
                }
                t
            });
        }
    }
    out
}

fn xi_monomial(xi: &crate::laurent::XiMultiDeg) -> LaurentBiPoly {
    let mut t = LaurentBiPoly::one();
    for p in xi.params() {
        for _ in 0..xi.degree_of(p) {
            t = t.mul(&LaurentBiPoly::param_monomial(
                Rational::zero(),
                p,
                CycloNum::one(),
            ));
        }
    }
    t
}

/// Leading (largest-exponent) term of a y-free series; must be parameter-free.
fn series_leading(s: &LaurentBiPoly) -> Result<(Rational, CycloNum)> {
    let deg = s
        .deg_x()
        .ok_or_else(|| Error::precondition("empty series"))?;
    let mut coeff = CycloNum::zero();
    for ((x, _, xi), c) in s.terms() {
        if *x == deg {
            if !xi.is_constant() {
                return Err(Error::precondition(
                    "leading term of the series to invert carries a generic parameter",
                ));
            }
            coeff = coeff.add(c);
        }
    }
    Ok((deg, coeff))
}

/// s^e for a y-free series with parameter-free leading term, truncated below
/// `cutoff`. Expands c0^e * x^(g e) * (1 + w)^e with the binomial series.
fn series_frac_pow(s: &LaurentBiPoly, e: &Rational, cutoff: &Rational) -> Result<LaurentBiPoly> {
    let (g, c0) = series_leading(s)?;
    let lead_pow = cyclo_rational_pow(&c0, e)?;
    let ge = &g * e;
    // w = s / (c0 x^g) - 1 has strictly negative exponents.
    let w = s
        .mul(&LaurentBiPoly::monomial(-&g, 0, c0.inverse()?))
        .sub(&LaurentBiPoly::one());
    if w.is_zero() {
        return Ok(LaurentBiPoly::monomial(ge, 0, lead_pow));
    }
    let w_top = w.deg_x().unwrap();
    debug_assert!(w_top.is_negative());
    // Relative cutoff for (1 + w)^e: powers w^k only reach down from k * w_top.
    let rel_cut = cutoff - &ge;
    let mut acc = LaurentBiPoly::one();
    let mut w_pow = LaurentBiPoly::one();
    let mut binom = Rational::one();
    let mut k = Rational::zero();
    let mut depth = 0u32;
    loop {
        depth += 1;
        w_pow = truncate_below(&w_pow.mul(&w), &rel_cut);
        binom *= (e - &k) / (&k + Rational::one());
        k += Rational::one();
        if w_pow.is_zero() || binom.is_zero() {
            break;
        }
        acc = acc.add(&w_pow.scale(&CycloNum::from_rational(binom.clone())));
        if Rational::from_integer(BigInt::from(depth)) * w_top.clone() < rel_cut {
            break;
        }
        if depth > 10_000 {
            return Err(Error::inconsistency(
                "binomial expansion failed to terminate".to_string(),
            ));
        }
    }
    Ok(truncate_below(
        &acc.mul(&LaurentBiPoly::monomial(ge, 0, lead_pow)),
        cutoff,
    ))
}

/// The series of the valuation after (x, y) -> (y, x), computed by exact
/// functional inversion of y = psi(x), truncated at the exponent where the
/// transformed generic parameter enters.
pub fn apply_swap(psi: &Semidegree) -> Result<Semidegree> {
    let omega = psi.deg();
    if !omega.is_positive() {
        return Err(Error::precondition("swap would place center at [0:0:1]"));
    }
    let param = &psi.param().0;
    if psi.phi().is_zero() {
        // Pure monomial xi*x^r swaps structurally to xi*x^(1/r).
        return Semidegree::new(DwpsPoly::zero(), omega.recip(), param);
    }

    let inv_omega = omega.recip();
    let r = psi.r_tilde();
    // Exponent where xi first perturbs the inverse series.
    let cutoff = (Rational::one() + r - &omega) * &inv_omega;
    let series = LaurentBiPoly::from_semidegree(psi);
    let lead_coeff = series_leading(&series)?.1;
    // tail = psi - a1 x^omega, viewed in the original variable.
    let tail = series.sub(&LaurentBiPoly::monomial(omega.clone(), 0, lead_coeff.clone()));

    // Fixed point of X = ((y - tail(X)) / a1)^(1/omega); the working variable
    // slot holds y. Substituting a series for x means expanding each tail
    // term a_i * X^(e_i) with fractional powers.
    let y_over_a1 = LaurentBiPoly::monomial(Rational::one(), 0, lead_coeff.inverse()?);
    let mut x_cur = series_frac_pow(&y_over_a1, &inv_omega, &cutoff)?;
    for _ in 0..512 {
        let mut arg = y_over_a1.clone();
        for ((e, _, xi), c) in tail.terms() {
            let pow = series_frac_pow(&x_cur, e, &cutoff)?;
            let mut term = pow.scale(&c.mul(&lead_coeff.inverse()?));
            if !xi.is_constant() {
                term = term.mul(&xi_monomial(xi));
            }
            arg = arg.sub(&truncate_below(&term, &cutoff));
        }
        let next = series_frac_pow(&arg, &inv_omega, &cutoff)?;
        if next == x_cur {
            break;
        }
        x_cur = next;
    }

    // Split into the parameter-free part above the cutoff and the generic tail.
    let mut fixed: Vec<(Rational, CycloNum)> = Vec::new();
    for ((e, _, xi), c) in x_cur.terms() {
        if e > &cutoff {
            if !xi.is_constant() {
                return Err(Error::inconsistency(format!(
                    "generic parameter appeared above its entry exponent (at {})",
                    e
                )));
            }
            fixed.push((e.clone(), c.clone()));
        } else if e == &cutoff {
            if xi.is_constant() {
                // A parameter-free component at the entry exponent folds into
                // the fresh generic parameter (an affine shift of xi).
                continue;
            }
        }
    }
    Semidegree::new(DwpsPoly::new(fixed), cutoff, param)
}

/// Normalize a series by triangular absorptions and swaps, recording the
/// automorphism word. The word transports evaluation:
/// evaluate(normal, g) = evaluate(psi, word.transport(g)).
pub fn normalize_series(psi: &Semidegree) -> Result<(Semidegree, AutoWord)> {
    let mut s = psi.clone();
    let mut word = AutoWord::new();
    for _ in 0..256 {
        if is_normal_form(&s) {
            return Ok((s, word));
        }
        match s.phi().deg().cloned() {
            None => {
                // xi*x^r with r > 1: one structural swap finishes.
                word.0.push(ElementaryAuto::Swap);
                s = apply_swap(&s)?;
            }
            Some(w) => {
                if w.denom().is_one() && !w.is_negative() {
                    // Absorb every term with nonnegative integer exponent.
                    let head: Vec<(Rational, CycloNum)> = s
                        .phi()
                        .terms()
                        .iter()
                        .filter(|(e, _)| e.denom().is_one() && !e.is_negative())
                        .cloned()
                        .collect();
                    let mut f = LaurentBiPoly::zero();
                    for (e, c) in &head {
                        f = f.add(&LaurentBiPoly::monomial(e.clone(), 0, c.clone()));
                    }
                    let before_deg = s.deg();
                    word.0.push(ElementaryAuto::Triangular(f.neg()));
                    s = apply_triangular(&s, &f)?;
                    debug_assert!(s.deg() < before_deg, "triangular step must reduce deg");
                } else if w.denom().is_one() {
                    // Leading exponent a negative integer: no triangular move
                    // can touch it and a swap is not available. No normal form
                    // is reachable with these moves.
                    return Err(Error::precondition(
                        "no normal form reachable: leading exponent is a negative integer",
                    ));
                } else {
                    // Swap at a fractional leading exponent; rescale to a monic
                    // leading coefficient first so the inversion stays rational.
                    let lead = s.phi().coeff_at(&w);
                    if lead != CycloNum::one() {
                        let inv = lead.inverse()?.as_rational().ok_or_else(|| {
                            Error::precondition(
                                "cannot rescale a non-rational leading coefficient",
                            )
                        })?;
                        word.0.push(ElementaryAuto::y_scaling(inv.clone()));
                        s = s.scaled(&CycloNum::from_rational(inv))?;
                    }
                    let before_p = s.polydromy();
                    let one_over_n = w.numer().is_one() && w.is_positive();
                    word.0.push(ElementaryAuto::Swap);
                    s = apply_swap(&s)?;
                    if one_over_n {
                        debug_assert!(
                            s.polydromy() < before_p,
                            "1/n swap must divide the polydromy order"
                        );
                    }
                }
            }
        }
    }
    Err(Error::inconsistency(
        "normalization failed to terminate".to_string(),
    ))
}

/// Jung-style factorization of a polynomial automorphism (P, Q) into linear
/// and triangular factors whose composition reproduces (P, Q) exactly.
pub fn factor_automorphism(
    p_in: &LaurentBiPoly,
    q_in: &LaurentBiPoly,
) -> Result<AutoWord> {
    if !p_in.is_plane_polynomial() || !q_in.is_plane_polynomial() {
        return Err(Error::precondition("factorization expects plane polynomials"));
    }
    // Constant Jacobian check.
    let jac = p_in
        .derivative_x()
        .mul(&q_in.derivative_y())
        .sub(&p_in.derivative_y().mul(&q_in.derivative_x()));
    let jac_const = jac.total_degree() == Some(BigInt::zero());
    if jac.is_zero() || !jac_const {
        return Err(Error::precondition("not an automorphism"));
    }

    let mut p = p_in.clone();
    let mut q = q_in.clone();
    // Factors are discovered outermost-first.
    let mut outer: Vec<ElementaryAuto> = Vec::new();
    for _ in 0..512 {
        let dp = p.total_degree().unwrap_or_else(BigInt::zero);
        let dq = q.total_degree().unwrap_or_else(BigInt::zero);
        if dp <= BigInt::one() && dq <= BigInt::one() {
            let affine = affine_factor(&p, &q)?;
            // Skip a trailing identity factor.
            let is_identity = {
                let (ap, aq) = affine.as_map();
                ap == LaurentBiPoly::var_x() && aq == LaurentBiPoly::var_y()
            };
            if !is_identity || outer.is_empty() {
                outer.push(affine);
            }
            let word = AutoWord(outer.into_iter().rev().collect());
            let (cp, cq) = word.compose();
            if &cp != p_in || &cq != q_in {
                return Err(Error::inconsistency(
                    "automorphism word does not recompose to its input".to_string(),
                ));
            }
            return Ok(word);
        }
        if dp > dq {
            outer.push(ElementaryAuto::swap_matrix());
            std::mem::swap(&mut p, &mut q);
            continue;
        }
        // deg q >= deg p: the leading form of q must be proportional to a
        // power of the leading form of p.
        if dp.is_zero() || (&dq % &dp) != BigInt::zero() {
            return Err(Error::precondition(
                "not an automorphism (Jung reduction failed)",
            ));
        }
        let k = (&dq / &dp).to_u32().unwrap();
        let lf_p_k = p.leading_form().pow(k);
        let lf_q = q.leading_form();
        let Some(c) = proportionality(&lf_q, &lf_p_k) else {
            return Err(Error::precondition(
                "not an automorphism (Jung reduction failed)",
            ));
        };
        let c_rat = c.as_rational().expect("plane polynomials have rational coefficients");
        if k == 1 {
            // (u, v) -> (u, v + c u): a linear factor.
            outer.push(ElementaryAuto::linear_matrix([
                [Rational::one(), Rational::zero()],
                [c_rat, Rational::one()],
            ]));
        } else {
            outer.push(ElementaryAuto::Triangular(LaurentBiPoly::monomial(
                Rational::from_integer(BigInt::from(k)),
                0,
                c.clone(),
            )));
        }
        q = q.sub(&p.pow(k).scale(&c));
    }
    Err(Error::precondition(
        "not an automorphism (Jung reduction failed)",
    ))
}

/// If a = c * b for a scalar c, return c.
fn proportionality(a: &LaurentBiPoly, b: &LaurentBiPoly) -> Option<CycloNum> {
    let (_, _, c_b) = b.terms().next().map(|(k, c)| (k.0.clone(), k.1, c.clone()))?;
    let key = b.terms().next()?.0.clone();
    let c_a = a
        .terms()
        .find(|(k, _)| **k == key)
        .map(|(_, c)| c.clone())?;
    let ratio = c_a.div(&c_b).ok()?;
    if a == &b.scale(&ratio) {
        Some(ratio)
    } else {
        None
    }
}

fn affine_factor(p: &LaurentBiPoly, q: &LaurentBiPoly) -> Result<ElementaryAuto> {
    let coeff = |poly: &LaurentBiPoly, xe: i64, ye: u32| -> Rational {
        poly.terms()
            .find(|((x, y, xi), _)| {
                x == &Rational::from_integer(BigInt::from(xe)) && *y == ye && xi.is_constant()
            })
            .and_then(|(_, c)| c.as_rational())
            .unwrap_or_else(Rational::zero)
    };
    let m = [
        [coeff(p, 1, 0), coeff(p, 0, 1)],
        [coeff(q, 1, 0), coeff(q, 0, 1)],
    ];
    let t = [coeff(p, 0, 0), coeff(q, 0, 0)];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return Err(Error::precondition("not an automorphism"));
    }
    Ok(ElementaryAuto::Linear { m, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, rat_i};
    use crate::laurent::plane_poly;
    use crate::valuation::{evaluate, valuation_equals};

    fn series(terms: &[(i64, i64, i64)], r: (i64, i64)) -> Semidegree {
        let phi = DwpsPoly::from_rational_terms(
            &terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), rat_i(c)))
                .collect::<Vec<_>>(),
        );
        Semidegree::new(phi, rat(r.0, r.1), "xi").unwrap()
    }

    fn monomials_up_to(total: i64) -> Vec<LaurentBiPoly> {
        let mut out = Vec::new();
        for i in 0..=total {
            for j in 0..=(total - i) {
                if i + j > 0 {
                    out.push(plane_poly(&[(i, j as u32, rat_i(1))]).unwrap());
                }
            }
        }
        out
    }

    /// evaluate(after, g) == evaluate(before, transport(g)) on all monomials.
    fn assert_transport(before: &Semidegree, after: &Semidegree, word: &AutoWord, total: i64) {
        for g in monomials_up_to(total) {
            let lhs = evaluate(after, &g).unwrap();
            let rhs = evaluate(before, &word.transport(&g)).unwrap();
            assert_eq!(lhs, rhs, "transport failed on {}", g);
        }
    }

    #[test]
    fn normal_form_examples() {
        assert!(is_normal_form(&Semidegree::degree_valuation("xi")));
        assert!(is_normal_form(&series(&[(2, 3, 1)], (1, 2))));
        assert!(!is_normal_form(&series(&[(2, 1, 1)], (1, 2))));
        // 1/n leading exponents are excluded from the second shape.
        assert!(!is_normal_form(&series(&[(1, 2, 1)], (-1, 1))));
        // ... but are fine in the first.
        assert!(is_normal_form(&series(&[], (1, 4))));
    }

    #[test]
    fn triangular_absorption() {
        let psi = series(&[(2, 1, 1)], (1, 2));
        let f = plane_poly(&[(2, 0, rat_i(1))]).unwrap();
        let out = apply_triangular(&psi, &f).unwrap();
        assert!(out.phi().is_zero());
        assert_eq!(out.r_tilde(), &rat(1, 2));

        let psi = series(&[(3, 1, 1), (1, 1, 2)], (-1, 1));
        let f = plane_poly(&[(3, 0, rat_i(1)), (1, 0, rat_i(2))]).unwrap();
        let out = apply_triangular(&psi, &f).unwrap();
        assert!(out.phi().is_zero());
        assert_eq!(out.r_tilde(), &rat_i(-1));
    }

    #[test]
    fn triangular_insertion_with_transport() {
        // psi = x^(3/2) + xi*x^(1/3), f = x: subtraction inserts a term.
        let psi = series(&[(3, 2, 1)], (1, 3));
        let f = plane_poly(&[(1, 0, rat_i(1))]).unwrap();
        let out = apply_triangular(&psi, &f).unwrap();
        assert_eq!(out.phi().coeff_at(&rat_i(1)), CycloNum::from_i64(-1));
        let word = AutoWord(vec![ElementaryAuto::Triangular(f.neg())]);
        assert_transport(&psi, &out, &word, 4);
    }

    #[test]
    fn swap_of_degree_valuation_is_itself() {
        let psi0 = Semidegree::degree_valuation("xi");
        let out = apply_swap(&psi0).unwrap();
        assert!(valuation_equals(&psi0, &out));
    }

    #[test]
    fn swap_inverts_half_exponent_series() {
        // psi = x^(1/2) + xi*x^(-1) swaps to x^2 + xi'*x^(-1).
        let psi = series(&[(1, 2, 1)], (-1, 1));
        let out = apply_swap(&psi).unwrap();
        assert_eq!(out.deg(), rat_i(2));
        assert_eq!(out.r_tilde(), &rat_i(-1));
        let word = AutoWord(vec![ElementaryAuto::Swap]);
        assert_transport(&psi, &out, &word, 6);
    }

    #[test]
    fn swap_with_leading_coefficient() {
        // psi = 2*x^(1/3) + xi*x^(-2/3): inverse starts at (1/8) y^3.
        let psi = series(&[(1, 3, 2)], (-2, 3));
        let out = apply_swap(&psi).unwrap();
        assert_eq!(out.deg(), rat_i(3));
        assert_eq!(out.phi().coeff_at(&rat_i(3)), CycloNum::from_rational(rat(1, 8)));
        let word = AutoWord(vec![ElementaryAuto::Swap]);
        assert_transport(&psi, &out, &word, 6);
    }

    #[test]
    fn swap_errors_on_nonpositive_degree() {
        let psi = series(&[], (-1, 2));
        let err = apply_swap(&psi).unwrap_err();
        assert!(err.to_string().contains("[0:0:1]"));
    }

    #[test]
    fn normalize_identity_on_normal_forms() {
        let psi0 = Semidegree::degree_valuation("xi");
        let (out, word) = normalize_series(&psi0).unwrap();
        assert!(word.is_empty());
        assert!(out.same_series(&psi0));
    }

    #[test]
    fn normalize_single_absorption() {
        let psi = series(&[(2, 1, 1)], (1, 2));
        let (out, word) = normalize_series(&psi).unwrap();
        assert!(is_normal_form(&out));
        assert!(out.phi().is_zero());
        assert_eq!(out.r_tilde(), &rat(1, 2));
        assert_eq!(word.len(), 1);
        assert_transport(&psi, &out, &word, 6);
    }

    #[test]
    fn normalize_with_swap_chain() {
        // a*x^(1/2) + xi*x^r with r < 1/2 normalizes through a swap.
        let psi = series(&[(1, 2, 3)], (1, 4));
        let (out, word) = normalize_series(&psi).unwrap();
        assert!(is_normal_form(&out));
        assert_transport(&psi, &out, &word, 6);

        // Idempotence.
        let (again, word2) = normalize_series(&out).unwrap();
        assert!(word2.is_empty());
        assert!(again.same_series(&out));
    }

    #[test]
    fn normalize_reports_unreachable_forms() {
        let psi = series(&[(-1, 1, 1)], (-2, 1));
        let err = normalize_series(&psi).unwrap_err();
        assert!(err.to_string().contains("negative integer"));
    }

    #[test]
    fn factor_triangular_and_swap() {
        let x = LaurentBiPoly::var_x();
        let y = LaurentBiPoly::var_y();
        let f = plane_poly(&[(3, 0, rat_i(1))]).unwrap();

        let word = factor_automorphism(&x, &y.add(&f)).unwrap();
        assert_eq!(word.len(), 1);
        let (p, q) = word.compose();
        assert_eq!(p, x);
        assert_eq!(q, y.add(&f));

        let word = factor_automorphism(&y, &x).unwrap();
        let (p, q) = word.compose();
        assert_eq!(p, y);
        assert_eq!(q, x);
    }

    #[test]
    fn factor_composite_automorphism() {
        // (x + y^3, y + (x + y^3)^2) factors into triangulars and linears.
        let x = LaurentBiPoly::var_x();
        let y = LaurentBiPoly::var_y();
        let p = x.add(&y.pow(3));
        let q = y.add(&p.pow(2));
        let word = factor_automorphism(&p, &q).unwrap();
        let (cp, cq) = word.compose();
        assert_eq!(cp, p);
        assert_eq!(cq, q);
    }

    #[test]
    fn factor_rejects_non_automorphisms() {
        let x = LaurentBiPoly::var_x();
        let err = factor_automorphism(&x, &x).unwrap_err();
        assert!(err.to_string().contains("not an automorphism"));

        // Jacobian constant but reduction stalls: (x^2, y^3) is not one.
        let bad_p = x.pow(2);
        let bad_q = LaurentBiPoly::var_y().pow(3);
        assert!(factor_automorphism(&bad_p, &bad_q).is_err());
    }
}
