//! Exact elements of cyclotomic fields Q(zeta_N).
//!
//! A [`CycloNum`] is a polynomial in zeta_N with rational coefficients,
//! reduced modulo the N-th cyclotomic polynomial Phi_N. Invariants:
//!
//! - the coefficient vector always has length phi(N) (Euler's totient)
//! - arithmetic is exact and equality is decidable
//! - an element whose non-constant coefficients are all zero is canonically
//!   demoted to conductor 1, so plain rationals compare equal across fields
//!
//! Mixed-conductor arithmetic lifts both operands into Q(zeta_lcm) first.
//! The conductor is capped (default 10080, override with the
//! `PUISEUX_MAX_CONDUCTOR` environment variable) to bound memory.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num::BigRational;

/// Shorthand for a small rational a/b.
pub fn rat(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Shorthand for an integer rational.
pub fn rat_i(a: i64) -> Rational {
    Rational::from_integer(BigInt::from(a))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn euler_phi(n: u32) -> u32 {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as u32
}

pub fn moebius(n: u32) -> i64 {
    let mut n = n;
    let mut factors = 0;
    let mut p = 2u32;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a / gcd_u32(a, b) * b
}

/// Maximum allowed cyclotomic conductor; reads `PUISEUX_MAX_CONDUCTOR` once.
pub fn conductor_limit() -> u32 {
    static LIMIT: OnceLock<u32> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("PUISEUX_MAX_CONDUCTOR")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(10080)
    })
}

fn check_conductor(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::precondition("cyclotomic conductor must be positive"));
    }
    if n > conductor_limit() {
        return Err(Error::precondition(format!(
            "cyclotomic conductor {} exceeds PUISEUX_MAX_CONDUCTOR = {}",
            n,
            conductor_limit()
        )));
    }
    Ok(())
}

/// Coefficients of Phi_N, little-endian, monic, degree phi(N). Cached.
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Phi_n = (t^n - 1) / prod_{d | n, d < n} Phi_d, computed by exact
    // integer polynomial division.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Exact division of integer polynomials (little-endian), panics on remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        quot[k] = c.clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// An exact element of Q(zeta_N), reduced mod Phi_N.
#[derive(Clone, Debug)]
pub struct CycloNum {
    conductor: u32,
    /// Length phi(conductor); coeffs[i] multiplies zeta_N^i.
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { conductor: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        CycloNum { conductor: 1, coeffs: vec![Rational::one()] }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycloNum { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(rat_i(n))
    }

    /// zeta_N^k, the k-th power of the primitive N-th root of unity.
    pub fn root_of_unity(n: u32, k: i64) -> Result<Self> {
        check_conductor(n)?;
        let k = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Ok(Self::reduce(n, poly))
    }

    /// Build from a raw polynomial in zeta_N (little-endian, any degree).
    fn reduce(conductor: u32, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let deg = phi.len() - 1;
        while poly.len() > deg && poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        // Polynomial remainder mod the monic Phi_N.
        while poly.len() > deg {
            let top = poly.pop().unwrap();
            if !top.is_zero() {
                let k = poly.len() - deg;
                for (i, c) in phi.iter().take(deg).enumerate() {
                    let sub = &top * Rational::from_integer(c.clone());
                    poly[k + i] -= sub;
                }
            }
        }
        poly.resize(deg, Rational::zero());
        let mut out = CycloNum { conductor, coeffs: poly };
        out.canonicalize();
        out
    }

    /// Demote to conductor 1 when all non-constant coefficients vanish.
    fn canonicalize(&mut self) {
        if self.conductor > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.conductor = 1;
            self.coeffs.truncate(1);
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1 || self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// View this element inside Q(zeta_to); `self.conductor` must divide `to`.
    pub fn embed(&self, to: u32) -> Result<Self> {
        check_conductor(to)?;
        if to % self.conductor != 0 {
            return Err(Error::precondition(format!(
                "incompatible cyclotomic conductors: {} does not divide {}",
                self.conductor, to
            )));
        }
        if to == self.conductor {
            return Ok(self.clone());
        }
        // zeta_from = zeta_to^(to/from): substitute t -> t^(to/from).
        let step = (to / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); self.coeffs.len() * step];
        poly.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(Self::reduce(to, poly))
    }

    /// Coefficient vector of this element viewed at conductor n, padded to
    /// full length phi(n) (embedding may demote rationals to conductor 1).
    fn coeffs_at(&self, n: u32) -> Result<Vec<Rational>> {
        let e = self.embed(n)?;
        let mut coeffs = e.coeffs;
        coeffs.resize(euler_phi(n) as usize, Rational::zero());
        Ok(coeffs)
    }

    /// Lift both operands to the lcm of their conductors.
    fn common(a: &Self, b: &Self) -> Result<(Vec<Rational>, Vec<Rational>, u32)> {
        let n = lcm_u32(a.conductor, b.conductor);
        Ok((a.coeffs_at(n)?, b.coeffs_at(n)?, n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, n) = Self::common(self, other).expect("conductor overflow in add");
        let coeffs = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let mut out = CycloNum { conductor: n, coeffs };
        out.canonicalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Rational factors avoid the convolution and reduction entirely.
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        let (a, b, n) = Self::common(self, other).expect("conductor overflow in mul");
        let mut poly = vec![Rational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Self::reduce(n, poly)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = CycloNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        };
        out.canonicalize();
        out
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[t]
    /// against Phi_N (which is coprime to any nonzero reduced element).
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::precondition("division by zero"));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(Rational::one() / r));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // Extended gcd of (self, Phi_N): find u with u*self = 1 mod Phi_N.
        let (g, u) = poly_ext_gcd(&self.coeffs, &phi);
        assert_eq!(g.len(), 1, "element not invertible mod Phi_N");
        let ginv = Rational::one() / g[0].clone();
        let u: Vec<Rational> = u.iter().map(|c| c * &ginv).collect();
        Ok(Self::reduce(self.conductor, u))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Extended gcd over Q[t]: returns (g, u) with u*a = g mod b and g the gcd.
fn poly_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut u0 = vec![Rational::one()];
    let mut u1 = vec![Rational::zero()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let u = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
    }
    (r0, u0)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let sub = &c * d;
                rem[k + i] -= sub;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    out.resize(out.len().max(b.len()), Rational::zero());
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        match Self::common(self, other) {
            Ok((a, b, _)) => a == b,
            Err(_) => false,
        }
    }
}

impl Eq for CycloNum {}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else if c.is_positive() {
                write!(f, " + ")?;
            } else {
                write!(f, " - ")?;
            }
            let a = if first || c.is_positive() { c.clone() } else { -c };
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    write!(f, "zeta{}", self.conductor)?;
                    if i > 1 {
                        write!(f, "^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The explicit embedding operation: same field element viewed in a larger field.
pub fn cyclo_embed(value: &CycloNum, from: u32, to: u32) -> Result<CycloNum> {
    if value.conductor() != from && from % value.conductor() != 0 {
        return Err(Error::precondition(format!(
            "value has conductor {}, not {}",
            value.conductor(),
            from
        )));
    }
    if to % from != 0 {
        return Err(Error::precondition(
            "incompatible cyclotomic conductors".to_string(),
        ));
    }
    value.embed(to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zeta(n: u32, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn root_of_unity_basics() {
        assert_eq!(zeta(1, 0), CycloNum::one());
        assert_eq!(zeta(2, 1), CycloNum::from_i64(-1));
        // zeta_4^2 = -1, checked via reduction mod Phi_4 = t^2 + 1.
        assert_eq!(zeta(4, 1).mul(&zeta(4, 1)), CycloNum::from_i64(-1));
    }

    #[test]
    fn embed_examples() {
        let half = CycloNum::from_rational(rat(1, 2));
        assert_eq!(cyclo_embed(&half, 1, 6).unwrap(), half);

        let m1 = cyclo_embed(&zeta(2, 1), 2, 4).unwrap();
        assert_eq!(m1, CycloNum::from_i64(-1));

        // zeta_3 in Q(zeta_6) is zeta_6^2 = zeta_6 - 1; its minimal polynomial
        // t^2 + t + 1 must vanish on the image.
        let z = cyclo_embed(&zeta(3, 1), 3, 6).unwrap();
        let check = z.mul(&z).add(&z).add(&CycloNum::one());
        assert!(check.is_zero());
        assert_eq!(z, zeta(6, 1).sub(&CycloNum::one()));
    }

    #[test]
    fn embed_rejects_non_divisible() {
        let err = cyclo_embed(&zeta(3, 1), 3, 4).unwrap_err();
        assert!(err.to_string().contains("incompatible cyclotomic conductors"));
    }

    #[test]
    fn product_of_all_roots_is_t_pow_n_minus_one() {
        // prod_{k=0}^{N-1} (T - zeta_N^k) = T^N - 1, checked coefficient-wise
        // by expanding over Q(zeta_N).
        for n in [1u32, 2, 3, 4, 6, 8, 12] {
            // Represent the product as a dense polynomial in T over CycloNum.
            let mut poly = vec![CycloNum::one()];
            for k in 0..n {
                let root = zeta(n, k as i64);
                let mut next = vec![CycloNum::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c);
                    next[i] = next[i].sub(&c.mul(&root));
                }
                poly = next;
            }
            assert_eq!(poly[0], CycloNum::from_i64(-1));
            assert_eq!(poly[n as usize], CycloNum::one());
            for c in &poly[1..n as usize] {
                assert!(c.is_zero(), "middle coefficient nonzero for N = {}", n);
            }
        }
    }

    #[test]
    fn galois_sum_is_moebius() {
        for n in 1..=30u32 {
            let mut sum = CycloNum::zero();
            for k in 1..=n {
                if gcd_u32(n, k) == 1 {
                    sum = sum.add(&zeta(n, k as i64));
                }
            }
            assert_eq!(
                sum,
                CycloNum::from_i64(moebius(n)),
                "Galois sum mismatch at N = {}",
                n
            );
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = zeta(12, 5).add(&CycloNum::from_rational(rat(3, 7)));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), CycloNum::one());
    }

    proptest! {
        #[test]
        fn field_axioms_hold(
            ai in -6i64..6, bi in -6i64..6, ci in -6i64..6,
            ka in 0i64..12, kb in 0i64..12, kc in 0i64..12,
        ) {
            let n = 12;
            let a = zeta(n, ka).scale(&rat_i(ai));
            let b = zeta(n, kb).scale(&rat_i(bi));
            let c = zeta(n, kc).scale(&rat_i(ci));
            // distributivity
            prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
            // associativity and commutativity of multiplication
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            // inverses
            if !a.is_zero() {
                prop_assert_eq!(a.mul(&a.inverse().unwrap()), CycloNum::one());
            }
        }
    }
}
