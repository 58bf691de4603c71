//! Seeded random families of series, polynomials, and automorphism words.
//!
//! The acceptance suite and the benchmarks sweep these corpora; everything is
//! generated from an explicit ChaCha seed so failures are reproducible.

use num::bigint::BigInt;
use num::traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::{rat, rat_i, CycloNum, Rational};
use crate::dwps::{DwpsPoly, Semidegree};
use crate::laurent::LaurentBiPoly;
use crate::normalize::ElementaryAuto;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn nonzero_coeff(rng: &mut impl Rng) -> Rational {
    let num = loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    let den = rng.gen_range(1i64..=3);
    rat(num, den)
}

/// A random series in adapted coordinates: deg <= 1, up to `max_pairs` formal
/// pairs, formal polydromy at most `max_polydromy`.
pub fn random_adapted_series(rng: &mut impl Rng, max_pairs: usize, max_polydromy: u32) -> Semidegree {
    'retry: loop {
        let l = rng.gen_range(0..max_pairs);
        // Denominators p_1..p_l >= 2 and the generic p_{l+1} >= 1.
        let mut ps: Vec<u32> = Vec::new();
        let mut product = 1u32;
        for _ in 0..l {
            let p = *[2u32, 2, 3, 3, 5].get(rng.gen_range(0..5)).unwrap();
            product *= p;
            ps.push(p);
        }
        let p_last = *[1u32, 1, 2, 3, 5].get(rng.gen_range(0..5)).unwrap();
        product *= p_last;
        ps.push(p_last);
        if product > max_polydromy {
            continue 'retry;
        }

        // Strictly decreasing characteristic exponents q_i / (p_1..p_i),
        // coprime numerators, all <= 1 so the coordinates stay adapted.
        let mut denom = 1i64;
        let mut terms: Vec<(Rational, Rational)> = Vec::new();
        let mut ceiling = Rational::one();
        for (i, p) in ps.iter().enumerate() {
            let last = i + 1 == ps.len();
            denom *= *p as i64;
            // Largest allowed numerator at this level, minus a random slack.
            let top = (&ceiling * rat_i(denom)).floor().to_integer();
            let top: i64 = num::traits::ToPrimitive::to_i64(&top).unwrap();
            let slack = rng.gen_range(1..=4);
            let mut q = top - slack;
            let _ = last;
            // Coprimality with p_i (and nonzero); p = 1 accepts anything.
            let mut guard = 0;
            while (*p > 1 && gcd(q, *p as i64) != 1) || q == 0 {
                q -= 1;
                guard += 1;
                if guard > 64 {
                    continue 'retry;
                }
            }
            let e = rat(q, denom);
            if e >= ceiling {
                continue 'retry;
            }
            if last {
                return build_series(rng, terms, e);
            }
            terms.push((e.clone(), nonzero_coeff(rng)));
            ceiling = e;
        }
    }
}

fn build_series(
    rng: &mut impl Rng,
    mut fixed: Vec<(Rational, Rational)>,
    r_tilde: Rational,
) -> Semidegree {
    // Occasionally insert a non-characteristic filler term between the top
    // characteristic exponent and 1 (integer exponents keep pairs intact).
    if rng.gen_bool(0.3) {
        let e = rat_i(1);
        if fixed.iter().all(|(exp, _)| *exp != e) && r_tilde < e {
            fixed.push((e, nonzero_coeff(rng)));
        }
    }
    let phi = DwpsPoly::from_rational_terms(&fixed);
    Semidegree::new(phi, r_tilde, "xi").expect("corpus series is well-formed")
}

/// A random series in normal form with leading exponent strictly inside
/// (0, 1): the input domain of the dual-graph constructions.
pub fn random_dualgraph_series(rng: &mut impl Rng, max_polydromy: u32) -> Semidegree {
    'retry: loop {
        let psi = random_adapted_series(rng, 3, max_polydromy);
        let lead = psi.deg();
        if !crate::normalize::is_normal_form(&psi) {
            continue 'retry;
        }
        if lead <= Rational::from_integer(BigInt::from(0)) || lead >= Rational::one() {
            continue 'retry;
        }
        return psi;
    }
}

/// A random series for the normalization suite: an adapted series with an
/// optional polynomial head so that triangular absorptions are exercised.
pub fn random_normalize_input(rng: &mut impl Rng) -> Semidegree {
    let base = random_adapted_series(rng, 2, 6);
    if rng.gen_bool(0.5) {
        let mut terms: Vec<(Rational, Rational)> = base
            .phi()
            .terms()
            .iter()
            .map(|(e, c)| (e.clone(), c.as_rational().unwrap()))
            .collect();
        for d in 1..=rng.gen_range(1..=2) {
            let e = rat_i(1 + d);
            if terms.iter().all(|(exp, _)| *exp != e) {
                terms.push((e, nonzero_coeff(rng)));
            }
        }
        let phi = DwpsPoly::from_rational_terms(&terms);
        Semidegree::new(phi, base.r_tilde().clone(), "xi").unwrap()
    } else {
        base
    }
}

/// Random nonzero polynomial of total degree <= max_deg.
pub fn random_poly(rng: &mut impl Rng, max_deg: i64) -> LaurentBiPoly {
    loop {
        let mut f = LaurentBiPoly::zero();
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(0..=max_deg);
            let j = rng.gen_range(0..=(max_deg - i)) as u32;
            f = f.add(&LaurentBiPoly::monomial(
                rat_i(i),
                j,
                CycloNum::from_rational(nonzero_coeff(rng)),
            ));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random univariate polynomial in x of degree 1..=max_deg (for triangular
/// factors).
fn random_x_poly(rng: &mut impl Rng, max_deg: i64) -> LaurentBiPoly {
    let deg = rng.gen_range(1..=max_deg);
    let mut f = LaurentBiPoly::monomial(
        rat_i(deg),
        0,
        CycloNum::from_rational(nonzero_coeff(rng)),
    );
    if rng.gen_bool(0.5) {
        f = f.add(&LaurentBiPoly::monomial(
            rat_i(rng.gen_range(0..deg)),
            0,
            CycloNum::from_rational(nonzero_coeff(rng)),
        ));
    }
    f
}

fn random_linear(rng: &mut impl Rng) -> ElementaryAuto {
    loop {
        let m = [
            [rat_i(rng.gen_range(-3i64..=3)), rat_i(rng.gen_range(-3i64..=3))],
            [rat_i(rng.gen_range(-3i64..=3)), rat_i(rng.gen_range(-3i64..=3))],
        ];
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det != rat_i(0) {
            let t = [rat_i(rng.gen_range(-2i64..=2)), rat_i(rng.gen_range(-2i64..=2))];
            return ElementaryAuto::Linear { m, t };
        }
    }
}

/// A random automorphism word of at most `max_len` elementary factors with
/// triangular degrees <= 4, together with its composed polynomial pair.
pub fn random_auto_word(rng: &mut impl Rng, max_len: usize) -> crate::normalize::AutoWord {
    let len = rng.gen_range(1..=max_len);
    let mut word = Vec::new();
    for _ in 0..len {
        if rng.gen_bool(0.5) {
            word.push(ElementaryAuto::Triangular(random_x_poly(rng, 4)));
        } else {
            word.push(random_linear(rng));
        }
    }
    crate::normalize::AutoWord(word)
}

/// The k-member family alpha_j x + xi x^(-q/p) with distinct rational alphas.
pub fn sharp_family(k: usize, p: u32, q: i64) -> Vec<Semidegree> {
    (0..k)
        .map(|j| {
            let phi = if j == 0 {
                DwpsPoly::zero()
            } else {
                DwpsPoly::from_rational_terms(&[(rat_i(1), rat_i(j as i64))])
            };
            Semidegree::new(phi, rat(-q, p as i64), "xi").unwrap()
        })
        .collect()
}
