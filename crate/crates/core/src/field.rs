//! Arithmetic in small finite fields `F_q`, `q = p^m <= 2^16`.
//!
//! Elements are encoded as integers `0..q`. The base-`p` digits of an
//! encoding are the coefficients of a polynomial of degree `< m`, constant
//! term in the least significant digit, taken modulo a fixed monic
//! irreducible polynomial. `0` is the additive identity and `1` the
//! multiplicative identity for every `(p, m)`.
//!
//! [`FieldSpec`] is a cheap-to-clone handle. For `q <= 256` it carries full
//! `q x q` addition and multiplication tables; larger fields compute sums and
//! products on the fly. Hot loops work on raw [`Symbol`]s through the
//! `*_sym` methods, while [`FieldElement`] is the checked public carrier.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw encoding of a field element, always `< q` for its field.
pub type Symbol = u32;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// Identifies a concrete field representation: characteristic plus the
/// defining polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId {
    p: u32,
    poly_code: u64,
}

/// An element of a specific field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: Symbol,
    field: FieldId,
}

impl FieldElement {
    pub fn value(self) -> Symbol {
        self.value
    }

    pub fn field_id(self) -> FieldId {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic, `m + 1` coefficients, constant term first.
    poly: Vec<u32>,
    id: FieldId,
    add: Option<Vec<u16>>,
    mul: Option<Vec<u16>>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// Description of `F_q` together with its arithmetic.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("m", &self.inner.m)
            .field("poly", &self.inner.poly)
            .finish()
    }
}

/// Splits `q` into `(p, m)` with `q = p^m`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest == 1 {
        Some((u32::try_from(p).ok()?, m))
    } else {
        None
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Remainder of `num` modulo the monic polynomial `den`, coefficients
/// constant-first, in `F_p`.
fn poly_rem(p: u32, num: &[u32], den: &[u32]) -> Vec<u32> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    while r.len() > dd {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (j, &c) in den.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(p: u32, mut v: u64, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (v % u64::from(p)) as u32;
            v /= u64::from(p);
            d
        })
        .collect()
}

/// Whether `poly` (monic, constant-first) is irreducible over `F_p`, by trial
/// division against every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = poly.len().saturating_sub(1);
    if deg == 0 || poly[deg] != 1 {
        return false;
    }
    for dd in 1..=deg / 2 {
        let lower = u64::from(p).pow(dd as u32);
        for code in 0..lower {
            let mut div = digits(p, code, dd);
            div.push(1);
            if poly_rem(p, poly, &div).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `m` over `F_p` with the
/// smallest encoding `sum c_i p^i`; `x` when `m == 1`.
pub fn default_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let lower = u64::from(p).pow(m);
    (0..lower)
        .map(|code| {
            let mut poly = digits(p, code, m as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(p, poly))
        .expect("an irreducible polynomial exists for every degree")
}

impl FieldSpec {
    /// The field of order `q` with the default irreducible polynomial.
    pub fn new(q: u32) -> Result<Self> {
        let (p, m) = prime_power(u64::from(q))
            .filter(|_| q <= MAX_ORDER)
            .ok_or(Error::InvalidOrder(u64::from(q)))?;
        Self::with_poly(p, m, default_irreducible(p, m))
    }

    /// The field `F_p[x]/(poly)`. `poly` is monic of degree `m`, constant
    /// coefficient first.
    pub fn with_poly(p: u32, m: u32, poly: Vec<u32>) -> Result<Self> {
        let bad = || Error::BadPolynomial {
            p,
            m,
            poly: poly.clone(),
        };
        if !is_prime(p) || m == 0 {
            return Err(Error::InvalidOrder(u64::from(p).saturating_pow(m)));
        }
        let q = u64::from(p)
            .checked_pow(m)
            .filter(|&q| q <= u64::from(MAX_ORDER))
            .ok_or(Error::InvalidOrder(u64::from(p).saturating_pow(m)))? as u32;
        if poly.len() != m as usize + 1 || poly.iter().any(|&c| c >= p) {
            return Err(bad());
        }
        if m > 1 && !is_irreducible(p, &poly) {
            return Err(bad());
        }
        if m == 1 && poly[1] != 1 {
            return Err(bad());
        }
        let poly_code = poly
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * u64::from(p) + u64::from(c));
        let mut inner = Inner {
            p,
            m,
            q,
            poly,
            id: FieldId { p, poly_code },
            add: None,
            mul: None,
            neg: Vec::new(),
            inv: Vec::new(),
        };
        inner.neg = (0..q).map(|a| inner.slow_neg(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(inner.slow_add(a, b) as u16);
                    mul.push(inner.slow_mul(a, b) as u16);
                }
            }
            inner.add = Some(add);
            inner.mul = Some(mul);
        }
        inner.inv = inner.inverse_table();
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Defining polynomial, constant coefficient first.
    pub fn poly(&self) -> &[u32] {
        &self.inner.poly
    }

    pub fn id(&self) -> FieldId {
        self.inner.id
    }

    pub fn is_default_poly(&self) -> bool {
        self.inner.poly == default_irreducible(self.inner.p, self.inner.m)
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= u64::from(self.q()) {
            return Err(Error::NotAnElement { value, q: self.q() });
        }
        Ok(self.wrap(value as Symbol))
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// All `q` elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |v| self.wrap(v))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.field == self.inner.id
    }

    fn wrap(&self, value: Symbol) -> FieldElement {
        FieldElement {
            value,
            field: self.inner.id,
        }
    }

    fn own(&self, a: FieldElement) -> Result<Symbol> {
        if self.contains(a) {
            Ok(a.value)
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.add_sym(self.own(a)?, self.own(b)?)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.sub_sym(self.own(a)?, self.own(b)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.mul_sym(self.own(a)?, self.own(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.neg_sym(self.own(a)?)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let a = self.own(a)?;
        self.inv_sym(a)
            .map(|v| self.wrap(v))
            .ok_or(Error::ZeroInverse)
    }

    #[inline]
    pub fn add_sym(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.inner.add {
            Some(t) => Symbol::from(t[(a * self.inner.q + b) as usize]),
            None => self.inner.slow_add(a, b),
        }
    }

    #[inline]
    pub fn mul_sym(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.inner.mul {
            Some(t) => Symbol::from(t[(a * self.inner.q + b) as usize]),
            None => self.inner.slow_mul(a, b),
        }
    }

    #[inline]
    pub fn neg_sym(&self, a: Symbol) -> Symbol {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub_sym(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add_sym(a, self.neg_sym(b))
    }

    /// `None` for zero.
    #[inline]
    pub fn inv_sym(&self, a: Symbol) -> Option<Symbol> {
        (a != 0).then(|| self.inner.inv[a as usize])
    }

    /// `sum_j u_j v_j`.
    #[inline]
    pub fn dot(&self, u: &[Symbol], v: &[Symbol]) -> Symbol {
        u.iter()
            .zip(v)
            .fold(0, |acc, (&a, &b)| self.add_sym(acc, self.mul_sym(a, b)))
    }

    pub fn pow_sym(&self, a: Symbol, e: u64) -> Symbol {
        self.inner.slow_pow(a, e)
    }

    pub fn params(&self) -> FieldParams {
        FieldParams {
            p: self.p(),
            m: self.m(),
            poly: self.poly().to_vec(),
        }
    }
}

impl Inner {
    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return ((u64::from(a) * u64::from(b)) % u64::from(self.p)) as u32;
        }
        let m = self.m as usize;
        let da = digits(self.p, u64::from(a), m);
        let db = digits(self.p, u64::from(b), m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(self.p, &prod, &self.poly);
        r.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// Inverses from the powers of a primitive element: `(g^i)^-1 = g^(q-1-i)`.
    fn inverse_table(&self) -> Vec<u32> {
        let order = (self.q - 1) as usize;
        let mut powers = Vec::with_capacity(order);
        for g in 1..self.q {
            powers.clear();
            let mut x = 1;
            loop {
                powers.push(x);
                x = self.slow_mul(x, g);
                if x == 1 || powers.len() > order {
                    break;
                }
            }
            if powers.len() == order {
                break;
            }
        }
        debug_assert_eq!(powers.len(), order);
        let mut inv = vec![0; self.q as usize];
        for (i, &x) in powers.iter().enumerate() {
            inv[x as usize] = powers[(order - i) % order];
        }
        inv
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Serialized form of a field: `{p, m, poly}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub m: u32,
    pub poly: Vec<u32>,
}

impl TryFrom<FieldParams> for FieldSpec {
    type Error = Error;

    fn try_from(params: FieldParams) -> Result<Self> {
        FieldSpec::with_poly(params.p, params.m, params.poly)
    }
}

impl From<FieldSpec> for FieldParams {
    fn from(f: FieldSpec) -> Self {
        f.params()
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.params().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let params = FieldParams::deserialize(d)?;
        FieldSpec::try_from(params).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &FieldSpec, v: u64) -> FieldElement {
        f.element(v).unwrap()
    }

    #[test]
    fn small_sums() {
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(f2.add(el(&f2, 1), el(&f2, 1)).unwrap().value(), 0);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.add(el(&f3, 2), el(&f3, 2)).unwrap().value(), 1);
        let f4 = FieldSpec::new(4).unwrap();
        assert_eq!(f4.poly(), &[1, 1, 1]);
        assert_eq!(f4.add(el(&f4, 2), el(&f4, 3)).unwrap().value(), 1);
    }

    #[test]
    fn small_products() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.mul(el(&f3, 2), el(&f3, 2)).unwrap().value(), 1);
        let f4 = FieldSpec::new(4).unwrap();
        // x * x = x + 1
        assert_eq!(f4.mul(el(&f4, 2), el(&f4, 2)).unwrap().value(), 3);
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = FieldSpec::new(q).unwrap();
            for a in f.elements() {
                assert!(f.mul(f.zero(), a).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn inverses() {
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(f2.inv(el(&f2, 1)).unwrap().value(), 1);
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f3.inv(el(&f3, 2)).unwrap().value(), 2);
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(f5.inv(el(&f5, 3)).unwrap().value(), 2);
        assert_eq!(f5.inv(f5.zero()), Err(Error::ZeroInverse));
    }

    #[test]
    fn element_listing() {
        for q in [2u32, 3, 4] {
            let f = FieldSpec::new(q).unwrap();
            let vals: Vec<_> = f.elements().map(FieldElement::value).collect();
            assert_eq!(vals, (0..q).collect::<Vec<_>>());
        }
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f2 = FieldSpec::new(2).unwrap();
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(f2.add(f2.one(), f3.one()), Err(Error::FieldMismatch));
        assert_eq!(f3.mul(f2.one(), f3.one()), Err(Error::FieldMismatch));
        assert!(matches!(f3.element(3), Err(Error::NotAnElement { .. })));
    }

    #[test]
    fn order_validation() {
        for q in [0u32, 1, 6, 10, 12, 100] {
            assert!(
                matches!(FieldSpec::new(q), Err(Error::InvalidOrder(_))),
                "{q}"
            );
        }
        assert!(FieldSpec::new(MAX_ORDER).is_ok());
        assert!(FieldSpec::new(MAX_ORDER * 2).is_err());
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(default_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(default_irreducible(2, 8), vec![1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert!(!is_irreducible(2, &[1, 0, 1]));
        assert!(matches!(
            FieldSpec::with_poly(2, 2, vec![1, 0, 1]),
            Err(Error::BadPolynomial { .. })
        ));
    }

    #[test]
    fn untabled_field_agrees_with_definition() {
        // q = 343 and 1024 take the on-the-fly path.
        for q in [343u32, 1024] {
            let f = FieldSpec::new(q).unwrap();
            for a in (1..q).step_by(7) {
                let inv = f.inv_sym(a).unwrap();
                assert_eq!(f.mul_sym(a, inv), 1);
                assert_eq!(f.add_sym(a, f.neg_sym(a)), 0);
            }
        }
    }

    #[test]
    fn json_round_trip_of_params() {
        let f = FieldSpec::new(9).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":3,"m":2,"poly":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = serde_json::from_str::<FieldSpec>(r#"{"p":2,"m":2,"poly":[1,0,1]}"#);
        assert!(bad.is_err());
    }
}
