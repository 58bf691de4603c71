//! Dual graphs of resolutions of primitive compactifications, by two
//! independent routes:
//!
//! 1. the continued-fraction template: local Puiseux pairs -> Newton pairs ->
//!    minus continued fractions -> the standard weighted tree;
//! 2. a blow-up simulator that replays the actual sequence of point blow-ups
//!    on an exact parametrization of a generic curvette, tracking only the
//!    Newton-polygon data (exponents and charts), never numeric coefficients.
//!
//! Route agreement (weight-preserving graph isomorphism) is the correctness
//! contract for everything in this module.
//!
//! Local pairs (q_i, p_i) relate to the formal pairs by q_j = p_1...p_j - qt_j,
//! where the germ of a generic curvette at the center [0:1:0] reads
//! v = a_1 u^(q_1/p_1) + ... + xi u^(q_{l+1}/(p_1...p_{l+1})) + h.o.t.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclo::Rational;
use crate::dwps::Semidegree;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::normalize::is_normal_form;

/// Local Puiseux pairs of the curvette germ at infinity; the last pair is the
/// generic one and may have p = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPairs {
    pub pairs: Vec<(BigInt, u32)>,
}

impl LocalPairs {
    /// q_j = p_1...p_j - qt_j applied to all formal pairs including the tail.
    pub fn from_semidegree(psi: &Semidegree) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut prod = BigInt::one();
        for (qt, p) in psi.formal_pairs() {
            prod *= BigInt::from(*p);
            let q = &prod - qt;
            if !q.is_positive() {
                return Err(Error::precondition(
                    "invalid Puiseux pair sequence".to_string(),
                ));
            }
            pairs.push((q, *p));
        }
        // Characteristic exponents q_i/(p_1...p_i) must strictly increase.
        let mut denom = BigInt::one();
        let mut last = Rational::zero();
        for (q, p) in &pairs {
            denom *= BigInt::from(*p);
            let e = Rational::new(q.clone(), denom.clone());
            if e <= last {
                return Err(Error::precondition(
                    "invalid Puiseux pair sequence".to_string(),
                ));
            }
            last = e;
        }
        Ok(LocalPairs { pairs })
    }
}

/// Minus (Hirzebruch-Jung) continued fraction: a/b = c_0 - 1/(c_1 - 1/(...))
/// with c_0 >= 1 and c_i >= 2 for i >= 1.
pub fn minus_continued_fraction(a: &BigInt, b: &BigInt) -> Result<Vec<BigInt>> {
    if b.is_zero() {
        return Err(Error::precondition("continued fraction of a/0"));
    }
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::precondition(
            "minus continued fraction needs positive a and b",
        ));
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut out = Vec::new();
    loop {
        // ceil(a/b) and the defect c*b - a in [0, b).
        let c = (&a + &b - BigInt::one()) / &b;
        let rem = &c * &b - &a;
        out.push(c);
        if rem.is_zero() {
            return Ok(out);
        }
        a = std::mem::replace(&mut b, rem);
    }
}

/// Back-evaluation of a minus continued fraction, for tests.
pub fn evaluate_minus_cf(entries: &[BigInt]) -> Rational {
    let mut acc = Rational::zero();
    for c in entries.iter().rev() {
        let c = Rational::from_integer(c.clone());
        acc = if acc.is_zero() { c } else { c - acc.recip() };
    }
    acc
}

/// Newton pairs (p_i, q'_i) with q'_i = q_i - q_{i-1} p_i and q_0 = 0.
pub fn newton_pairs(pairs: &LocalPairs) -> Result<Vec<(u32, BigInt)>> {
    let mut out = Vec::new();
    let mut prev_q = BigInt::zero();
    for (q, p) in &pairs.pairs {
        let qp = q - &prev_q * BigInt::from(*p);
        if !qp.is_positive() {
            return Err(Error::precondition(
                "invalid Puiseux pair sequence".to_string(),
            ));
        }
        out.push((*p, qp));
        prev_q = q.clone();
    }
    Ok(out)
}

/// Template graph plus handles used by the minimal-resolution rewrite.
pub struct TemplateGraph {
    pub graph: WeightedGraph,
    pub e0: String,
    /// Ids of the first block's horizontal chain e_1..e_{t_1}, in order.
    pub first_chain: Vec<String>,
    /// First continued fraction p_1/q'_1.
    pub u1: Vec<BigInt>,
    /// Id of the final junction e*.
    pub e_star: String,
}

fn to_weight(v: &BigInt) -> i64 {
    v.to_i64().expect("graph weight out of range")
}

/// The standard weighted tree for the resolution of a germ with the given
/// local pairs, including the vertex e_0 for the line at infinity (weight
/// 1 - u_1^0) and the final (-1) junction e*.
fn curve_resolution_template(pairs: &LocalPairs) -> Result<TemplateGraph> {
    if pairs.pairs.is_empty() {
        return Err(Error::precondition("at least one Puiseux pair required"));
    }
    let newton = newton_pairs(pairs)?;
    let mut g = WeightedGraph::new();
    let mut counter = 0usize;
    let mut fresh = |g: &mut WeightedGraph, weight: i64| -> String {
        let id = format!("E{}", counter);
        counter += 1;
        g.add_vertex(&id, weight, true);
        id
    };

    let mut u1 = Vec::new();
    let mut first_chain = Vec::new();
    let mut prev: Option<String> = None;
    let mut e0 = String::new();
    let mut e_star = String::new();
    let m = newton.len();
    for (i, (p, qp)) in newton.iter().enumerate() {
        let u = minus_continued_fraction(&BigInt::from(*p), qp)?;
        let v = minus_continued_fraction(qp, &BigInt::from(*p))?;
        if i == 0 {
            u1 = u.clone();
            let id = fresh(&mut g, 1 - to_weight(&u[0]));
            e0 = id.clone();
            prev = Some(id);
        }
        // Horizontal chain -u_i^1 .. -u_i^{t_i}.
        for c in &u[1..] {
            let id = fresh(&mut g, -to_weight(c));
            if i == 0 {
                first_chain.push(id.clone());
            }
            g.add_edge(prev.as_ref().unwrap(), &id);
            prev = Some(id);
        }
        // Junction: -u_{i+1}^0 - 1 between blocks, -1 at the end (e*).
        let jw = if i + 1 < m {
            let next_u0 = minus_continued_fraction(&BigInt::from(newton[i + 1].0), &newton[i + 1].1)?;
            -to_weight(&next_u0[0]) - 1
        } else {
            -1
        };
        let junction = fresh(&mut g, jw);
        g.add_edge(prev.as_ref().unwrap(), &junction);
        // Vertical chain -v_i^{r_i} .. -v_i^1 hanging off the junction.
        let mut hang = junction.clone();
        for c in v[1..].iter().rev() {
            let id = fresh(&mut g, -to_weight(c));
            g.add_edge(&hang, &id);
            hang = id;
        }
        if i + 1 == m {
            e_star = junction.clone();
        }
        prev = Some(junction);
    }
    Ok(TemplateGraph { graph: g, e0, first_chain, u1, e_star })
}

/// Standalone template for a plain curve germ: e* is the only
/// non-exceptional vertex (it plays the curve's strict transform).
pub fn build_curve_resolution_graph(pairs: &LocalPairs) -> Result<WeightedGraph> {
    let mut t = curve_resolution_template(pairs)?;
    mark_nonexceptional(&mut t.graph, &t.e_star);
    t.graph.rename_vertex(&t.e_star, "e");
    Ok(t.graph)
}

fn mark_nonexceptional(g: &mut WeightedGraph, id: &str) {
    for v in &mut g.vertices {
        if v.id == id {
            v.exceptional = false;
        }
    }
}

fn check_dual_graph_input(psi: &Semidegree) -> Result<()> {
    if !is_normal_form(psi) {
        return Err(Error::precondition(
            "dual graphs require the series in normal form",
        ));
    }
    if psi.phi().is_zero() && psi.r_tilde() == &Rational::one() {
        return Err(Error::precondition("smooth: P^2, empty graph"));
    }
    let lead = psi.deg();
    if !lead.is_positive() || lead >= Rational::one() {
        return Err(Error::precondition(
            "dual graphs require leading exponent strictly between 0 and 1",
        ));
    }
    Ok(())
}

/// Augmented dual graph by the template route. The single non-exceptional
/// vertex (the strict transform of the curve at infinity) is e* itself when
/// p_{l+1} > 1; otherwise e* is reweighted to -2 and a chain of
/// (qt_l - qt_{l+1} - 1) vertices of weight -2 ends in the new vertex e.
pub fn build_augmented_graph(psi: &Semidegree) -> Result<WeightedGraph> {
    Ok(build_augmented_template(psi)?.0)
}

fn build_augmented_template(psi: &Semidegree) -> Result<(WeightedGraph, TemplateGraph)> {
    check_dual_graph_input(psi)?;
    let all = LocalPairs::from_semidegree(psi)?;
    let formal = psi.formal_pairs();
    let p_last = formal.last().unwrap().1;
    if p_last > 1 {
        let mut t = curve_resolution_template(&all)?;
        mark_nonexceptional(&mut t.graph, &t.e_star);
        t.graph.rename_vertex(&t.e_star, "e");
        t.e_star = "e".to_string();
        let g = t.graph.clone();
        Ok((g, t))
    } else {
        // Generic pair is integral: template over the genuine pairs, e*
        // reweighted to -2, then a -2 chain of length qt_l - qt_{l+1} - 1
        // ending in e of weight -1.
        let l = formal.len() - 1;
        debug_assert!(l >= 1, "p = 1 with no fixed pairs is excluded upstream");
        let head = LocalPairs { pairs: all.pairs[..l].to_vec() };
        let mut t = curve_resolution_template(&head)?;
        let g = &mut t.graph;
        g.bump_weight(&t.e_star, -1);
        let qt_l = &formal[l - 1].0;
        let qt_last = &formal[l].0;
        let chain_len = (qt_l - qt_last - BigInt::one())
            .to_usize()
            .ok_or_else(|| Error::precondition("chain length out of range"))?;
        let mut prev = t.e_star.clone();
        for i in 0..chain_len {
            let id = format!("T{}", i);
            g.add_vertex(&id, -2, true);
            g.add_edge(&prev, &id);
            prev = id;
        }
        g.add_vertex("e", -1, false);
        g.add_edge(&prev, "e");
        let out = g.clone();
        Ok((out, t))
    }
}

// ---------------------------------------------------------------------------
// Blow-up simulator.
//
// The germ is carried as an exact parametrization (u(tau), v(tau)) with
// coefficients that are Laurent polynomials in the generic parameter xi.
// Each blow-up divides one coordinate by the other and recenters; the
// first xi-dependent landing point is where the family separates.
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial in xi over Q.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct XiPoly(BTreeMap<i64, Rational>);

impl XiPoly {
    fn constant(r: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !r.is_zero() {
            m.insert(0, r);
        }
        XiPoly(m)
    }

    fn xi_times(r: Rational) -> Self {
        let mut m = BTreeMap::new();
        m.insert(1, r);
        XiPoly(m)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Depends on xi (has any nonzero non-constant part).
    fn xi_dependent(&self) -> bool {
        self.0.keys().any(|&k| k != 0)
    }

    fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, v) in &other.0 {
            let e = m.entry(*k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                m.remove(k);
            }
        }
        XiPoly(m)
    }

    fn neg(&self) -> Self {
        XiPoly(self.0.iter().map(|(k, v)| (*k, -v)).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in &self.0 {
            for (j, b) in &other.0 {
                let e = m.entry(i + j).or_insert_with(Rational::zero);
                *e += a * b;
            }
        }
        m.retain(|_, v| !v.is_zero());
        XiPoly(m)
    }

    /// Inverse of a xi-monomial c*xi^k.
    fn monomial_inverse(&self) -> Result<Self> {
        if self.0.len() != 1 {
            return Err(Error::inconsistency(
                "division by a non-monomial xi-coefficient in the simulator".to_string(),
            ));
        }
        let (k, c) = self.0.iter().next().unwrap();
        let mut m = BTreeMap::new();
        m.insert(-k, c.recip());
        Ok(XiPoly(m))
    }
}

/// Finite power series in tau with XiPoly coefficients, truncated to a
/// window of fixed depth above its order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Germ {
    terms: BTreeMap<i64, XiPoly>,
}

impl Germ {
    fn ord(&self) -> i64 {
        *self.terms.keys().next().expect("germ series is never empty")
    }

    fn leading(&self) -> &XiPoly {
        self.terms.values().next().unwrap()
    }

    fn coeff0(&self) -> XiPoly {
        self.terms.get(&0).cloned().unwrap_or_default()
    }

    fn truncate(mut self, window: i64) -> Self {
        let ord = self.ord();
        self.terms.retain(|k, _| *k <= ord + window);
        self
    }

    fn mul(&self, other: &Self, window: i64) -> Self {
        let mut terms: BTreeMap<i64, XiPoly> = BTreeMap::new();
        let cut = self.ord() + other.ord() + window;
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if i + j > cut {
                    continue;
                }
                let e = terms.entry(i + j).or_default();
                *e = e.add(&a.mul(b));
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Germ { terms }.truncate(window)
    }

    /// 1/self: the leading coefficient must be a xi-monomial.
    fn inverse(&self, window: i64) -> Result<Self> {
        let ord = self.ord();
        let lead_inv = self.leading().monomial_inverse()?;
        // self = lead*tau^ord * (1 + w); invert the unit as the geometric
        // series sum (-w)^j, which terminates within the window.
        let one = Germ {
            terms: BTreeMap::from([(0, XiPoly::constant(Rational::one()))]),
        };
        let mut w_terms: BTreeMap<i64, XiPoly> = BTreeMap::new();
        for (k, c) in self.terms.iter().skip(1) {
            if k - ord <= window {
                w_terms.insert(k - ord, c.mul(&lead_inv));
            }
        }
        let mut unit_inv = one.clone();
        if !w_terms.is_empty() {
            let minus_w = Germ { terms: w_terms }.negated();
            let mut pow = one;
            loop {
                pow = pow.mul(&minus_w, window);
                pow.terms.retain(|k, _| *k <= window);
                if pow.terms.is_empty() {
                    break;
                }
                unit_inv = unit_inv.plus(&pow);
            }
        }
        let out: BTreeMap<i64, XiPoly> = unit_inv
            .terms
            .into_iter()
            .map(|(k, c)| (k - ord, c.mul(&lead_inv)))
            .collect();
        Ok(Germ { terms: out }.truncate(window))
    }

    fn negated(&self) -> Self {
        Germ {
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(*k).or_default();
            *e = e.add(v);
        }
        terms.retain(|_, v| !v.is_zero());
        Germ { terms }
    }

    fn div(&self, other: &Self, window: i64) -> Result<Self> {
        Ok(self.mul(&other.inverse(window)?, window))
    }

    fn sub_constant(&self, c: &XiPoly) -> Self {
        let mut terms = self.terms.clone();
        let e = terms.entry(0).or_default();
        *e = e.add(&c.neg());
        terms.retain(|_, v| !v.is_zero());
        Germ { terms }
    }
}

/// Replay the blow-up sequence separating a generic curvette family, building
/// the augmented dual graph. Weights follow (C~, C~) = (C, C) - 1 at each
/// blow-up through a tracked center.
pub fn simulate_resolution(psi: &Semidegree) -> Result<WeightedGraph> {
    simulate_resolution_steps(psi, usize::MAX)
}

/// Like [`simulate_resolution`] but stopping after at most `max_steps`
/// blow-ups, returning the intermediate configuration (used to check the
/// intermediate figures of the Euclidean descent).
pub fn simulate_resolution_steps(psi: &Semidegree, max_steps: usize) -> Result<WeightedGraph> {
    check_dual_graph_input(psi)?;
    let p = psi.polydromy();
    // Parametrize at the center [0:1:0]: u = tau^p, v = sum of a_j
    // tau^(p(1-w_j)) + xi tau^(p(1-r)).
    let exp_of = |e: &Rational| -> i64 {
        let v = (Rational::one() - e) * Rational::from_integer(BigInt::from(p));
        debug_assert!(v.denom().is_one());
        v.numer().to_i64().expect("exponent out of range")
    };
    let mut v_terms: BTreeMap<i64, XiPoly> = BTreeMap::new();
    for (e, c) in psi.phi().terms() {
        let r = c.as_rational().ok_or_else(|| {
            Error::precondition("simulator needs rational coefficients")
        })?;
        v_terms.insert(exp_of(e), XiPoly::constant(r));
    }
    let xi_exp = exp_of(psi.r_tilde());
    v_terms.insert(xi_exp, XiPoly::xi_times(Rational::one()));
    let v0 = Germ { terms: v_terms };
    let window = xi_exp - v0.ord() + 2;
    let mut s = Germ {
        terms: BTreeMap::from([(p as i64, XiPoly::constant(Rational::one()))]),
    };
    let mut t = v0;

    let mut g = WeightedGraph::new();
    g.add_vertex("E0", 1, true);
    let mut s_axis: Option<String> = Some("E0".to_string());
    let mut t_axis: Option<String> = None;

    let mut steps = 0usize;
    for k in 1..200_000 {
        if steps >= max_steps {
            return Ok(g);
        }
        let id = format!("E{}", k);
        g.add_vertex(&id, -1, true);
        match (&s_axis, &t_axis) {
            (Some(a), Some(b)) => {
                g.bump_weight(a, -1);
                g.bump_weight(b, -1);
                g.remove_edge(a, b);
                g.add_edge(a, &id);
                g.add_edge(b, &id);
            }
            (Some(a), None) => {
                g.bump_weight(a, -1);
                g.add_edge(a, &id);
            }
            _ => unreachable!("center always lies on the previous divisor"),
        }
        steps += 1;

        let (a, b) = (s.ord(), t.ord());
        if b > a {
            // Chart (s, t/s): the new divisor is the s-axis; the old t-axis
            // keeps its role.
            t = t.div(&s, window)?;
            s_axis = Some(id);
        } else if a > b {
            // Chart (s/t, t): the new divisor is the t-axis.
            s = s.div(&t, window)?;
            t_axis = Some(id);
        } else {
            // Equal orders: the germ meets the new divisor away from both
            // axes, at the ratio's constant term.
            let ratio = t.div(&s, window)?;
            let c0 = ratio.coeff0();
            if c0.xi_dependent() {
                // Landing point varies with xi: the family is separated and
                // this divisor is the strict transform of the curve at
                // infinity.
                mark_nonexceptional(&mut g, &id);
                g.rename_vertex(&id, "e");
                return Ok(g);
            }
            t = ratio.sub_constant(&c0);
            s_axis = Some(id);
            t_axis = None;
        }
    }
    Err(Error::inconsistency(
        "blow-up simulation failed to terminate".to_string(),
    ))
}

/// Minimal resolution graph: exhaustive blow-down cascade on the exceptional
/// part of the augmented graph.
pub fn minimal_resolution_graph(psi: &Semidegree) -> Result<WeightedGraph> {
    Ok(build_augmented_graph(psi)?.blow_down_cascade())
}

/// The closed-form rewrite of the minimal graph, valid when the first
/// characteristic exponent qt_1/p_1 is not of the form 1/n: unchanged when
/// qt_1/p_1 > 1/2, otherwise left-truncated at e_{m_1} with its weight
/// bumped to -u_1^{m_1} + 1.
pub fn minimal_graph_via_rewrite(psi: &Semidegree) -> Result<WeightedGraph> {
    let (graph, t) = build_augmented_template(psi)?;
    let (qt1, p1) = {
        let f = &psi.formal_pairs()[0];
        (f.0.clone(), BigInt::from(f.1))
    };
    if qt1 == BigInt::one() || !qt1.is_positive() {
        return Err(Error::precondition(
            "rewrite requires qt_1/p_1 outside {1/n}",
        ));
    }
    let ratio = Rational::new(qt1.clone(), p1.clone());
    if ratio > Rational::new(BigInt::one(), BigInt::from(2)) {
        // u_1^0 > 2: nothing cascades.
        debug_assert!(t.u1[0] > BigInt::from(2));
        return Ok(graph);
    }
    // qt_1/p_1 < 1/2: with q_1 = p_1 - qt_1, p_1 = q_1 + r_1 and
    // q_1 = m_1 r_1 + r_2; delete e_0 and e_1..e_{m_1 - 1}, reweight e_{m_1}.
    let q1 = &p1 - &qt1;
    let r1 = &p1 - &q1;
    if (&q1 % &r1).is_zero() {
        // r_2 = 0 would force qt_1 = 1, already excluded.
        return Err(Error::inconsistency(
            "Euclid remainder vanished under the rewrite hypotheses".to_string(),
        ));
    }
    let m1 = (&q1 / &r1)
        .to_usize()
        .ok_or_else(|| Error::precondition("Euclid quotient out of range"))?;
    if t.first_chain.len() < m1 || t.u1.len() <= m1 {
        return Err(Error::inconsistency(
            "first chain shorter than the Euclid quotient".to_string(),
        ));
    }
    // u_1^j = 2 for j < m_1 and u_1^{m_1} >= 3, per the hypotheses.
    for (j, c) in t.u1.iter().enumerate().take(m1 + 1).skip(1) {
        let ok = if j < m1 { c == &BigInt::from(2) } else { c >= &BigInt::from(3) };
        if !ok {
            return Err(Error::inconsistency(format!(
                "continued fraction entry u_1^{} = {} breaks the rewrite hypotheses",
                j, c
            )));
        }
    }
    let mut out = graph;
    let drop: Vec<String> = std::iter::once(t.e0.clone())
        .chain(t.first_chain[..m1 - 1].iter().cloned())
        .collect();
    out.vertices.retain(|v| !drop.contains(&v.id));
    out.edges.retain(|(x, y)| !drop.contains(x) && !drop.contains(y));
    let target = &t.first_chain[m1 - 1];
    out.bump_weight(target, 1);
    Ok(out)
}

/// Number of singular points and the dual graphs of their resolutions:
/// connected components of the exceptional part of the minimal graph.
pub fn singularity_report(psi: &Semidegree) -> Result<(usize, Vec<WeightedGraph>)> {
    if psi.phi().is_zero() && psi.r_tilde() == &Rational::one() {
        // xi*x: the compactification is P^2 itself.
        return Ok((0, Vec::new()));
    }
    let minimal = minimal_resolution_graph(psi)?;
    let exceptional = minimal.induced(|v| v.exceptional);
    let comps = exceptional.components();
    let graphs = comps
        .iter()
        .map(|ids| exceptional.induced(|v| ids.contains(&v.id)))
        .collect();
    Ok((comps.len(), graphs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, rat_i};
    use crate::dwps::DwpsPoly;

    fn series(terms: &[(i64, i64, i64)], r: (i64, i64)) -> Semidegree {
        let phi = DwpsPoly::from_rational_terms(
            &terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), rat_i(c)))
                .collect::<Vec<_>>(),
        );
        Semidegree::new(phi, rat(r.0, r.1), "xi").unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn minus_cf_examples() {
        assert_eq!(
            minus_continued_fraction(&big(5), &big(2)).unwrap(),
            vec![big(3), big(2)]
        );
        assert_eq!(
            minus_continued_fraction(&big(5), &big(4)).unwrap(),
            vec![big(2), big(2), big(2), big(2)]
        );
        assert_eq!(
            minus_continued_fraction(&big(7), &big(5)).unwrap(),
            vec![big(2), big(2), big(3)]
        );
        // a/b <= 1 is allowed, with first entry 1.
        assert_eq!(
            minus_continued_fraction(&big(2), &big(3)).unwrap(),
            vec![big(1), big(3)]
        );
        assert!(minus_continued_fraction(&big(3), &big(0)).is_err());
    }

    #[test]
    fn minus_cf_round_trips() {
        for a in 2..=60i64 {
            for b in 1..a {
                let cf = minus_continued_fraction(&big(a), &big(b)).unwrap();
                assert!(cf[1..].iter().all(|c| c >= &big(2)));
                assert_eq!(evaluate_minus_cf(&cf), rat(a, b), "cf of {}/{}", a, b);
            }
        }
    }

    #[test]
    fn newton_pairs_examples() {
        let lp = LocalPairs { pairs: vec![(big(3), 2)] };
        assert_eq!(newton_pairs(&lp).unwrap(), vec![(2, big(3))]);

        let lp = LocalPairs { pairs: vec![(big(1), 2), (big(5), 3)] };
        assert_eq!(newton_pairs(&lp).unwrap(), vec![(2, big(1)), (3, big(2))]);

        let lp = LocalPairs { pairs: vec![(big(2), 3), (big(13), 2)] };
        assert_eq!(newton_pairs(&lp).unwrap(), vec![(3, big(2)), (2, big(9))]);

        // Non-increasing characteristic exponents are invalid.
        let lp = LocalPairs { pairs: vec![(big(2), 3), (big(3), 2)] };
        assert!(newton_pairs(&lp).is_err());
    }

    /// Expected chain for psi = xi*x^(1/n): -1, (n-2) x -2, -1 (= e), -n.
    fn one_over_n_chain(n: i64) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        g.add_vertex("a", -1, true);
        let mut prev = "a".to_string();
        for i in 0..(n - 2) {
            let id = format!("m{}", i);
            g.add_vertex(&id, -2, true);
            g.add_edge(&prev, &id);
            prev = id;
        }
        g.add_vertex("e", -1, false);
        g.add_edge(&prev, "e");
        g.add_vertex("last", -n, true);
        g.add_edge("e", "last");
        g
    }

    #[test]
    fn template_matches_figure_for_one_over_n() {
        for n in 2..=6 {
            let psi = series(&[], (1, n));
            let g = build_augmented_graph(&psi).unwrap();
            assert!(
                g.isomorphic(&one_over_n_chain(n)),
                "template mismatch at n = {}",
                n
            );
        }
    }

    #[test]
    fn simulator_matches_figure_for_one_over_n() {
        for n in 2..=6 {
            let psi = series(&[], (1, n));
            let g = simulate_resolution(&psi).unwrap();
            assert!(
                g.isomorphic(&one_over_n_chain(n)),
                "simulator mismatch at n = {}",
                n
            );
        }
    }

    #[test]
    fn curve_resolution_graph_single_pair() {
        // (q, p) = (n-1, n) reproduces the 1/n chain including e_0.
        let lp = LocalPairs { pairs: vec![(big(3), 4)] };
        let g = build_curve_resolution_graph(&lp).unwrap();
        assert!(g.isomorphic(&one_over_n_chain(4)));
    }

    #[test]
    fn simulator_reproduces_euclid_intermediate_figure() {
        // Germ exponent 5/7 (psi = xi*x^(2/7)): p1 = q1 + r1 with (7,5,2),
        // q1 = m1 r1 + r2 with m1 = 2, r2 = 1, r1 = m2 r2 with m2 = 2, r3 = 0.
        // After m1 + m2 + 1 = 5 blow-ups the configuration matches the
        // Euclidean-descent figure: E0(-1) - E2(-2) - E3(-3) - E5(-1) with
        // E5 also joined to E4(-2) - E1(-4).
        let psi = series(&[], (2, 7));
        let g = simulate_resolution_steps(&psi, 5).unwrap();
        let mut expected = WeightedGraph::new();
        expected.add_vertex("E0", -1, true);
        expected.add_vertex("E1", -4, true);
        expected.add_vertex("E2", -2, true);
        expected.add_vertex("E3", -3, true);
        expected.add_vertex("E4", -2, true);
        expected.add_vertex("E5", -1, true);
        expected.add_edge("E0", "E2");
        expected.add_edge("E2", "E3");
        expected.add_edge("E3", "E5");
        expected.add_edge("E5", "E4");
        expected.add_edge("E4", "E1");
        // The full resolution also ends here (the generic pair separates at
        // the fifth blow-up), so compare against the finished graph with the
        // final vertex flagged non-exceptional.
        let finished = simulate_resolution(&psi).unwrap();
        assert_eq!(g.vertices.len(), finished.vertices.len());
        let mut expected_final = expected.clone();
        for v in &mut expected_final.vertices {
            if v.id == "E5" {
                v.exceptional = false;
            }
        }
        assert!(finished.isomorphic(&expected_final));
    }

    #[test]
    fn routes_agree_on_mixed_cases() {
        for psi in [
            series(&[(2, 3, 1)], (1, 2)),   // p_{l+1} = 2
            series(&[(2, 3, 1)], (1, 3)),   // p_{l+1} = 1, zero-length chain
            series(&[(2, 3, 1)], (-1, 3)),  // p_{l+1} = 1, longer chain
            series(&[(2, 5, 1)], (3, 10)),  // two fixed-space blocks
            series(&[(3, 4, 1), (5, 8, 1)], (9, 16)),
        ] {
            let a = build_augmented_graph(&psi).unwrap();
            let b = simulate_resolution(&psi).unwrap();
            assert!(b.is_tree(), "simulator output must be a tree for {}", psi);
            assert!(a.isomorphic(&b), "route mismatch for {}", psi);
        }
    }

    #[test]
    fn augmented_graph_rejects_bad_inputs() {
        let smooth = Semidegree::degree_valuation("xi");
        let err = build_augmented_graph(&smooth).unwrap_err();
        assert!(err.to_string().contains("smooth"));

        let not_normal = series(&[(2, 1, 1)], (1, 2));
        assert!(build_augmented_graph(&not_normal).is_err());

        let negative = series(&[], (-1, 2));
        assert!(build_augmented_graph(&negative).is_err());
    }

    #[test]
    fn minimal_graph_for_one_over_n() {
        // The cascade eats the left chain and leaves e(0) - (-n).
        let psi = series(&[], (1, 4));
        let g = minimal_resolution_graph(&psi).unwrap();
        assert_eq!(g.vertices.len(), 2);
        let e = g.vertices.iter().find(|v| !v.exceptional).unwrap();
        let x = g.vertices.iter().find(|v| v.exceptional).unwrap();
        assert_eq!(e.weight, 0);
        assert_eq!(x.weight, -4);
    }

    #[test]
    fn minimal_graph_rewrite_cases() {
        // qt1/p1 = 2/3 > 1/2: minimal graph equals the augmented graph.
        let psi = series(&[(2, 3, 1)], (1, 2));
        let aug = build_augmented_graph(&psi).unwrap();
        let min = minimal_resolution_graph(&psi).unwrap();
        let rewrite = minimal_graph_via_rewrite(&psi).unwrap();
        assert!(min.isomorphic(&aug));
        assert!(rewrite.isomorphic(&aug));

        // qt1/p1 = 2/5 < 1/2: truncation or cascade, same answer.
        let psi = series(&[], (2, 5));
        let min = minimal_resolution_graph(&psi).unwrap();
        let rewrite = minimal_graph_via_rewrite(&psi).unwrap();
        assert!(min.isomorphic(&rewrite));

        // A deeper case with two pairs.
        let psi = series(&[(2, 5, 1)], (3, 10));
        let min = minimal_resolution_graph(&psi).unwrap();
        let rewrite = minimal_graph_via_rewrite(&psi).unwrap();
        assert!(min.isomorphic(&rewrite));
    }

    #[test]
    fn singularity_counts() {
        // p_{l+1} > 1 away from the 1/n family: two singular points.
        let (n, _) = singularity_report(&series(&[(2, 3, 1)], (1, 2))).unwrap();
        assert_eq!(n, 2);
        // p_{l+1} = 1: one singular point.
        let (n, _) = singularity_report(&series(&[(2, 3, 1)], (1, 3))).unwrap();
        assert_eq!(n, 1);
        // Smooth case.
        let (n, comps) = singularity_report(&Semidegree::degree_valuation("xi")).unwrap();
        assert_eq!(n, 0);
        assert!(comps.is_empty());
    }

    #[test]
    fn exceptional_part_is_negative_definite_when_compactification_exists() {
        for psi in [
            series(&[(2, 3, 1)], (1, 2)),
            series(&[], (2, 5)),
            series(&[(3, 4, 1), (5, 8, 1)], (9, 16)),
        ] {
            if !crate::valuation::determines_compactification(&psi).unwrap() {
                continue;
            }
            let g = build_augmented_graph(&psi).unwrap();
            let exc = g.induced(|v| v.exceptional);
            let order: Vec<String> = exc.vertices.iter().map(|v| v.id.clone()).collect();
            let form = exc.intersection_form(&order);
            assert!(form.is_negative_definite().unwrap(), "failed for {}", psi);
        }
    }

    #[test]
    fn at_most_one_minus_one_exceptional_vertex_in_augmented_graphs() {
        // The line-at-infinity vertex is the only candidate, and it sits at
        // -1 exactly when the first continued-fraction entry is 2.
        for (psi, expected) in [
            (series(&[], (1, 4)), 1),
            (series(&[(2, 3, 1)], (1, 2)), 0),
            (series(&[], (2, 5)), 1),
            (series(&[(2, 3, 1)], (-1, 3)), 0),
        ] {
            let g = build_augmented_graph(&psi).unwrap();
            let minus_ones: Vec<_> = g
                .vertices
                .iter()
                .filter(|v| v.exceptional && v.weight == -1)
                .collect();
            assert!(minus_ones.len() <= 1, "psi = {}", psi);
            assert_eq!(minus_ones.len(), expected, "psi = {}", psi);
        }
    }
}
