//! Exact rational and cyclotomic arithmetic.
//!
//! [`Rat`] is an arbitrary-precision rational. [`Zeta3`] is the quadratic
//! field Q(ζ3) in the basis {1, ζ3} with ζ3² = −1 − ζ3; it is the workhorse
//! for character values and monomial-matrix entries, since every root of
//! unity of order dividing 6 lives there (ζ6 = 1 + ζ3). [`Cyclotomic`] is the
//! general field Q(ζ_N) reduced modulo the N-th cyclotomic polynomial, so
//! equality is plain coefficient comparison.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms.
pub type Rat = BigRational;

/// The rational `n`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational `n/d`.
pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Errors from cyclotomic arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different cyclotomic fields (orders {0} and {1})")]
    OrderMismatch(u32, u32),
    #[error("cannot parse {0:?} as an element of Q(z3)")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Q(zeta_3)
// ---------------------------------------------------------------------------

/// An element `a + b·ζ3` of Q(ζ3), with ζ3 a primitive cube root of unity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Zeta3 {
    pub a: Rat,
    pub b: Rat,
}

impl Zeta3 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Zeta3 { a, b }
    }

    pub fn zero() -> Self {
        Zeta3 { a: Rat::zero(), b: Rat::zero() }
    }

    pub fn one() -> Self {
        Zeta3 { a: Rat::one(), b: Rat::zero() }
    }

    pub fn from_rat(r: Rat) -> Self {
        Zeta3 { a: r, b: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    /// ζ3^k for any integer k.
    pub fn zeta3_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Zeta3 { a: Rat::zero(), b: Rat::one() },
            _ => Zeta3 { a: -Rat::one(), b: -Rat::one() },
        }
    }

    /// ζ6^k = (−ζ3²)^k for any integer k. Covers every root of unity of
    /// order dividing 6: ζ6^k = (−1)^k ζ3^{2k}.
    pub fn zeta6_pow(k: i64) -> Self {
        let z = Self::zeta3_pow(2 * k.rem_euclid(6));
        if k.rem_euclid(2) == 1 {
            -z
        } else {
            z
        }
    }

    /// A root of unity ζ_m^k for m dividing 6.
    ///
    /// Panics if m does not divide 6; orders of elements of the builtin
    /// group all do.
    pub fn unit_root(m: u32, k: i64) -> Self {
        assert!(m >= 1 && 6 % m == 0, "order {m} does not divide 6");
        Self::zeta6_pow(k * (6 / m) as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational part, erroring out on a genuinely complex value.
    pub fn as_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    /// Complex conjugate: ζ3 ↦ ζ3² = −1 − ζ3.
    pub fn conj(&self) -> Self {
        Zeta3 { a: &self.a - &self.b, b: -self.b.clone() }
    }

    /// Field norm a² − ab + b² (product with the conjugate).
    pub fn norm(&self) -> Rat {
        &(&(&self.a * &self.a) - &(&self.a * &self.b)) + &(&self.b * &self.b)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conj();
        Ok(Zeta3 { a: &c.a / &n, b: &c.b / &n })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, NumError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Zeta3 { a: &self.a * r, b: &self.b * r }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &Zeta3 {
    type Output = Zeta3;
    fn add(self, rhs: &Zeta3) -> Zeta3 {
        Zeta3 { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &Zeta3 {
    type Output = Zeta3;
    fn sub(self, rhs: &Zeta3) -> Zeta3 {
        Zeta3 { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &Zeta3 {
    type Output = Zeta3;
    fn mul(self, rhs: &Zeta3) -> Zeta3 {
        // (a + b z)(c + d z) = ac + (ad + bc) z + bd z², z² = −1 − z.
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &(&self.a * &rhs.b) + &(&self.b * &rhs.a);
        Zeta3 { a: &ac - &bd, b: &ad_bc - &bd }
    }
}

impl Neg for Zeta3 {
    type Output = Zeta3;
    fn neg(self) -> Zeta3 {
        Zeta3 { a: -self.a, b: -self.b }
    }
}

impl Neg for &Zeta3 {
    type Output = Zeta3;
    fn neg(self) -> Zeta3 {
        Zeta3 { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl Add for Zeta3 {
    type Output = Zeta3;
    fn add(self, rhs: Zeta3) -> Zeta3 {
        &self + &rhs
    }
}

impl Sub for Zeta3 {
    type Output = Zeta3;
    fn sub(self, rhs: Zeta3) -> Zeta3 {
        &self - &rhs
    }
}

impl Mul for Zeta3 {
    type Output = Zeta3;
    fn mul(self, rhs: Zeta3) -> Zeta3 {
        &self * &rhs
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Zeta3 {
    /// Renders as `a + b*z3`, omitting zero parts and unit coefficients, so
    /// the output round-trips through [`Zeta3::from_str`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        if !self.a.is_zero() {
            out.push_str(&fmt_rat(&self.a));
        }
        if !self.b.is_zero() {
            let mag = self.b.abs();
            let sign = self.b.is_negative();
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&fmt_rat(&mag));
                out.push('*');
            }
            out.push_str("z3");
        }
        write!(f, "{out}")
    }
}

impl FromStr for Zeta3 {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, NumError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(NumError::Parse(s.to_string()));
        }
        // Split into signed terms.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !cur.is_empty() {
                let prev = cur.chars().last().unwrap();
                if prev != '/' && prev != '*' {
                    terms.push(std::mem::take(&mut cur));
                }
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut acc = Zeta3::zero();
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(rest) => (-1i64, rest.to_string()),
                None => (1, t.strip_prefix('+').unwrap_or(&t).to_string()),
            };
            let term = if let Some(coeff) = body.strip_suffix("*z3") {
                let r: Rat = coeff.parse().map_err(|_| NumError::Parse(s.to_string()))?;
                Zeta3 { a: Rat::zero(), b: r }
            } else if body == "z3" {
                Zeta3::zeta3_pow(1)
            } else {
                let r: Rat = body.parse().map_err(|_| NumError::Parse(s.to_string()))?;
                Zeta3::from_rat(r)
            };
            acc = &acc + &term.scale(&rat(sign));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// General cyclotomic fields
// ---------------------------------------------------------------------------

/// Polynomials over Q as coefficient vectors, lowest degree first.
type Poly = Vec<Rat>;

fn poly_trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    poly_trim(&mut out);
    out
}

/// Euclidean division, returning (quotient, remainder).
fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Poly, Poly) {
    assert!(!den.is_empty(), "polynomial division by zero");
    let mut rem: Poly = num.to_vec();
    poly_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = den.last().unwrap().clone();
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() > dd {
        let shift = rem.len() - 1 - dd;
        let factor = rem.last().unwrap() / &lead;
        quot[shift] = factor.clone();
        for (k, dk) in den.iter().enumerate() {
            rem[shift + k] = &rem[shift + k] - &(&factor * dk);
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// The N-th cyclotomic polynomial, computed by exact division of x^N − 1 by
/// the cyclotomic polynomials of the proper divisors. Cached per order.
fn cyclotomic_poly(n: u32) -> Poly {
    static CACHE: OnceLock<Mutex<HashMap<u32, Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![Rat::zero(); n as usize + 1];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    let mut den = vec![Rat::one()];
    for d in 1..n {
        if n.is_multiple_of(d) {
            den = poly_mul(&den, &cyclotomic_poly(d));
        }
    }
    let (quot, rem) = poly_divmod(&num, &den);
    debug_assert!(rem.is_empty(), "cyclotomic division must be exact");
    cache.lock().unwrap().insert(n, quot.clone());
    quot
}

/// An element of Q(ζ_N) in canonical form: a coefficient vector in the power
/// basis 1, ζ, ..., ζ^{φ(N)−1} after reduction modulo the N-th cyclotomic
/// polynomial. Equality of field elements is equality of vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rat>,
}

impl Cyclotomic {
    fn degree(order: u32) -> usize {
        cyclotomic_poly(order).len() - 1
    }

    fn reduce(order: u32, mut poly: Poly) -> Self {
        let phi = cyclotomic_poly(order);
        poly_trim(&mut poly);
        let (_, mut rem) = poly_divmod(&poly, &phi);
        rem.resize(Self::degree(order), Rat::zero());
        Cyclotomic { order, coeffs: rem }
    }

    pub fn zero(order: u32) -> Self {
        Cyclotomic { order, coeffs: vec![Rat::zero(); Self::degree(order)] }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rat(order, Rat::one())
    }

    pub fn from_rat(order: u32, r: Rat) -> Self {
        let mut c = Self::zero(order);
        if !c.coeffs.is_empty() {
            c.coeffs[0] = r;
        } else {
            // Order 1 with polynomial x − 1 still has degree 1.
            c.coeffs = vec![r];
        }
        c
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_orders(&self, rhs: &Self) -> Result<(), NumError> {
        if self.order != rhs.order {
            Err(NumError::OrderMismatch(self.order, rhs.order))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_orders(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_orders(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Ok(Cyclotomic { order: self.order, coeffs })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_orders(rhs)?;
        Ok(Self::reduce(self.order, poly_mul(&self.coeffs, &rhs.coeffs)))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the (irreducible) cyclotomic polynomial.
    pub fn inv(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let phi = cyclotomic_poly(self.order);
        let mut a: Poly = self.coeffs.clone();
        poly_trim(&mut a);
        // Extended Euclid: track s with s·a ≡ gcd (mod phi).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::new(), vec![Rat::one()]);
        while !r1.is_empty() {
            let (q, r2) = poly_divmod(&r0, &r1);
            let qs1 = poly_mul(&q, &s1);
            let mut s2 = s0.clone();
            s2.resize(s2.len().max(qs1.len()), Rat::zero());
            for (k, c) in qs1.iter().enumerate() {
                s2[k] = &s2[k] - c;
            }
            poly_trim(&mut s2);
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant gcd; divide through.
        debug_assert_eq!(r0.len(), 1, "cyclotomic polynomial must be coprime to nonzero elements");
        let g = r0[0].clone();
        let inv: Poly = s0.iter().map(|c| c / &g).collect();
        Ok(Self::reduce(self.order, inv))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, NumError> {
        self.check_orders(rhs)?;
        self.mul(&rhs.inv()?)
    }

    /// Complex conjugation, ζ^k ↦ ζ^{N−k}.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut poly = vec![Rat::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            let target = (n - k) % n;
            poly[target] = &poly[target] + c;
        }
        Self::reduce(self.order, poly)
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

/// Canonical representative of ζ_N^k.
pub fn root_of_unity(n: u32, k: i64) -> Cyclotomic {
    assert!(n >= 1, "root of unity needs a positive order");
    let e = k.rem_euclid(n as i64) as usize;
    let mut poly = vec![Rat::zero(); e + 1];
    poly[e] = Rat::one();
    Cyclotomic::reduce(n, poly)
}

/// Embeds an element of Q(ζ3) into the general representation.
pub fn zeta3_to_cyclotomic(z: &Zeta3) -> Cyclotomic {
    let mut c = Cyclotomic::zero(3);
    c.coeffs[0] = z.a.clone();
    c.coeffs[1] = z.b.clone();
    c
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match k {
                0 => fmt_rat(c),
                _ => {
                    let var = if k == 1 {
                        format!("z{}", self.order)
                    } else {
                        format!("z{}^{}", self.order, k)
                    };
                    if c.is_one() {
                        var
                    } else if (-c.clone()).is_one() {
                        format!("-{var}")
                    } else {
                        format!("{}*{}", fmt_rat(c), var)
                    }
                }
            };
            if parts.is_empty() {
                parts.push(body);
            } else if let Some(rest) = body.strip_prefix('-') {
                parts.push(format!("- {rest}"));
            } else {
                parts.push(format!("+ {body}"));
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta3_minimal_polynomial() {
        let z = Zeta3::zeta3_pow(1);
        let z2 = Zeta3::zeta3_pow(2);
        assert_eq!(&z + &z2, Zeta3::from_int(-1));
        assert_eq!(&z * &z2, Zeta3::one());
        assert_eq!(z.pow(3), Zeta3::one());
    }

    #[test]
    fn zeta3_inverse_and_division() {
        let x = Zeta3::new(rat(1), rat(-2));
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Zeta3::one());
        let one_minus = &Zeta3::one() - &Zeta3::zeta3_pow(1);
        assert_eq!(one_minus.div(&one_minus).unwrap(), Zeta3::one());
        assert_eq!(Zeta3::zero().inv(), Err(NumError::DivisionByZero));
    }

    #[test]
    fn zeta3_conjugation() {
        assert_eq!(Zeta3::zeta3_pow(1).conj(), Zeta3::zeta3_pow(2));
        assert_eq!(Zeta3::from_int(5).conj(), Zeta3::from_int(5));
        let x = Zeta3::new(rat(1), rat(2));
        // conj(1 + 2 ζ3) = 1 + 2 ζ3² = −1 − 2 ζ3.
        assert_eq!(x.conj(), Zeta3::new(rat(-1), rat(-2)));
        let n = &x * &x.conj();
        assert!(n.is_rational());
        assert_eq!(n.as_rat().unwrap(), x.norm());
    }

    #[test]
    fn zeta6_embedding() {
        let z6 = Zeta3::zeta6_pow(1);
        assert_eq!(z6.pow(6), Zeta3::one());
        assert_eq!(z6.pow(3), Zeta3::from_int(-1));
        assert_eq!(z6.pow(2), Zeta3::zeta3_pow(1));
        assert_eq!(Zeta3::unit_root(2, 1), Zeta3::from_int(-1));
        assert_eq!(Zeta3::unit_root(3, 4), Zeta3::zeta3_pow(1));
        assert_eq!(Zeta3::unit_root(1, 0), Zeta3::one());
    }

    #[test]
    fn zeta3_display_round_trip() {
        let samples = [
            Zeta3::zero(),
            Zeta3::one(),
            Zeta3::zeta3_pow(1),
            Zeta3::zeta3_pow(2),
            Zeta3::new(ratq(-1, 2), rat(3)),
            Zeta3::new(rat(0), ratq(-5, 7)),
            Zeta3::new(rat(4), rat(-1)),
        ];
        for z in samples {
            let text = z.to_string();
            let back: Zeta3 = text.parse().unwrap();
            assert_eq!(back, z, "round trip through {text:?}");
        }
    }

    #[test]
    fn cyclotomic_poly_small_orders() {
        let as_i64 = |p: &[Rat]| -> Vec<i64> {
            p.iter().map(|c| {
                assert!(c.denom().is_one());
                c.numer().try_into().unwrap()
            }).collect::<Vec<i64>>()
        };
        assert_eq!(as_i64(&cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(as_i64(&cyclotomic_poly(2)), vec![1, 1]);
        assert_eq!(as_i64(&cyclotomic_poly(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(&cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(&cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_matches_spec_examples() {
        // ζ3 + ζ3² = −1.
        let z = root_of_unity(3, 1);
        let z2 = root_of_unity(3, 2);
        assert_eq!(z.add(&z2).unwrap(), Cyclotomic::from_rat(3, rat(-1)));
        // ζ3 · ζ3² = 1.
        assert_eq!(z.mul(&z2).unwrap(), Cyclotomic::one(3));
        // Exponent reduction mod 3 and canonical form of ζ3².
        assert_eq!(root_of_unity(3, 4), z);
        assert_eq!(z2.coeffs(), &[rat(-1), rat(-1)]);
        assert_eq!(root_of_unity(3, 0), Cyclotomic::one(3));
    }

    #[test]
    fn cyclotomic_field_operations() {
        for order in [3u32, 5, 6, 12] {
            let x = root_of_unity(order, 1)
                .add(&Cyclotomic::from_rat(order, rat(2)))
                .unwrap();
            let inv = x.inv().unwrap();
            assert_eq!(x.mul(&inv).unwrap(), Cyclotomic::one(order));
            // conj is an involution and fixes the product with itself.
            assert_eq!(x.conj().conj(), x);
            let norm = x.mul(&x.conj()).unwrap();
            assert_eq!(norm.conj(), norm);
        }
        let a = root_of_unity(3, 1);
        let b = root_of_unity(6, 1);
        assert_eq!(a.add(&b), Err(NumError::OrderMismatch(3, 6)));
        assert!(Cyclotomic::zero(5).inv().is_err());
    }

    #[test]
    fn zeta3_agrees_with_general_representation() {
        let x = Zeta3::new(rat(2), rat(-3));
        let y = Zeta3::new(ratq(1, 2), rat(5));
        let cx = zeta3_to_cyclotomic(&x);
        let cy = zeta3_to_cyclotomic(&y);
        assert_eq!(zeta3_to_cyclotomic(&(&x * &y)), cx.mul(&cy).unwrap());
        assert_eq!(zeta3_to_cyclotomic(&(&x + &y)), cx.add(&cy).unwrap());
        assert_eq!(zeta3_to_cyclotomic(&x.conj()), cx.conj());
        assert_eq!(zeta3_to_cyclotomic(&x.inv().unwrap()), cx.inv().unwrap());
    }
}
