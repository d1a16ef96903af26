//! Arithmetic in GF(p^e).
//!
//! A [`Field`] is built from a [`FieldSpec`] (prime, extension degree and a
//! monic irreducible modulus) and owns the operation tables for small fields.
//! Elements are plain [`Elem`] handles; every operation goes through the
//! field that produced them.
//!
//! An element is the coefficient vector `(c0, c1, ..., c_{e-1})` of
//! `c0 + c1 t + ... + c_{e-1} t^{e-1}` where `t` is a root of the modulus.
//! The packed handle orders elements lexicographically on that vector with
//! `c0` most significant, so `Elem(0)` is zero and iteration over
//! `0..order` is the canonical enumeration order.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: usize = 1 << 16;

/// Fields up to this order get precomputed operation tables.
const TABLE_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("GF({p}^{e}) is out of range (need 1 <= e <= 8 and p^e <= 2^16)")]
    OutOfRange { p: u32, e: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element handle {value} is not in a field of order {order}")]
    ForeignElement { value: u32, order: usize },
    #[error("GF({0}) has no index-2 subfield")]
    NoQuadraticSubfield(usize),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("modulus {0:?} is not a monic irreducible polynomial of the stated degree")]
    BadModulus(Vec<u32>),
}

/// A field element handle. Meaningful only together with its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The description of GF(p^e): characteristic, degree and modulus.
///
/// `modulus` holds the coefficients of the monic modulus from the constant
/// term upwards, so it has `e + 1` entries and ends in `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The canonical spec for GF(p^e): the modulus is the smallest monic
    /// irreducible polynomial of degree `e`, comparing coefficient vectors
    /// from the top coefficient down (equivalently, as base-p integers).
    pub fn canonical(p: u32, e: u32) -> Result<Self, FieldError> {
        check_params(p, e)?;
        let modulus = smallest_irreducible(p, e);
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.e)
    }

    /// Little-endian digit string of the modulus, e.g. `"111"` for `t^2+t+1`.
    pub fn modulus_digits(&self) -> String {
        digits_to_string(self.p, &self.modulus)
    }
}

/// Alias used by callers that think of it as "make a field".
pub fn make_field(p: u32, e: u32) -> Result<Field, FieldError> {
    Field::new(FieldSpec::canonical(p, e)?)
}

fn check_params(p: u32, e: u32) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if e == 0 || e > 8 || (p as u64).pow(e) > MAX_ORDER as u64 {
        return Err(FieldError::OutOfRange { p, e });
    }
    Ok(())
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, k)` with `n = p^k`.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

// Dense polynomials over Z/p, constant term first, no trailing zeros.

fn zp_trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn zp_inv(a: u32, p: u32) -> u32 {
    // p is prime and small, Fermat is fine
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn zp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    zp_trim(out.into_iter().map(|c| c as u32).collect())
}

fn zp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    zp_trim(v)
}

/// Returns `(quotient, remainder)`.
fn zp_divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let b = zp_trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = zp_trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u32; r.len() - b.len() + 1];
    let lead_inv = zp_inv(*b.last().unwrap(), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let t = (c as u64 * bi as u64 % p as u64) as u32;
            r[i + shift] = (r[i + shift] + p - t) % p;
        }
        r = zp_trim(r);
    }
    (zp_trim(q), r)
}

fn poly_from_index(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push((n % p as u64) as u32);
        n /= p as u64;
    }
    v
}

/// Irreducible iff no monic factor of degree `1..=deg/2` divides it.
fn zp_is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for dg in 1..=deg / 2 {
        let count = (p as u64).pow(dg as u32);
        for low in 0..count {
            let mut g = poly_from_index(low, p, dg);
            g.push(1);
            if zp_divrem(f, &g, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for low in 0..count {
        let mut f = poly_from_index(low, p, e as usize);
        f.push(1);
        if zp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits_to_string(p: u32, digits: &[u32]) -> String {
    if p <= 10 {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

struct Tables {
    add: Vec<u16>,
    neg: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

struct Inner {
    spec: FieldSpec,
    order: usize,
    /// `place[i] = p^(e-1-i)`, the packing weight of coefficient `c_i`.
    place: Vec<u32>,
    tables: Option<Tables>,
}

/// GF(p^e) with its arithmetic. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}^{}; modulus {})",
            self.0.spec.p,
            self.0.spec.e,
            self.0.spec.modulus_digits()
        )
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

/// Binary operations accepted by [`Field::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Field {
    /// Builds a field from an explicit spec, validating the modulus.
    pub fn new(spec: FieldSpec) -> Result<Self, FieldError> {
        check_params(spec.p, spec.e)?;
        let m = &spec.modulus;
        if m.len() != spec.e as usize + 1
            || m.last() != Some(&1)
            || m.iter().any(|&c| c >= spec.p)
            || !zp_is_irreducible(m, spec.p)
        {
            return Err(FieldError::BadModulus(spec.modulus.clone()));
        }
        let order = spec.order();
        let e = spec.e as usize;
        let place = (0..e).map(|i| spec.p.pow((e - 1 - i) as u32)).collect();
        let mut inner = Inner {
            spec,
            order,
            place,
            tables: None,
        };
        if order <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.e
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    /// All elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.order).map(|i| Elem(i as u16))
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.0.order).map(|i| Elem(i as u16))
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.index() < self.0.order
    }

    /// Image of an integer under `Z -> Z/p -> GF(p^e)`.
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.0.spec.p as i64;
        let c0 = n.rem_euclid(p) as u32;
        Elem((c0 * self.0.place[0]) as u16)
    }

    /// Coefficients `(c0, ..., c_{e-1})` of an element.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let p = self.0.spec.p;
        let mut n = a.0 as u32;
        let mut v = vec![0u32; self.0.place.len()];
        for i in (0..v.len()).rev() {
            v[i] = n % p;
            n /= p;
        }
        v
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem, FieldError> {
        let p = self.0.spec.p;
        if digits.len() > self.0.place.len() || digits.iter().any(|&d| d >= p) {
            return Err(FieldError::Parse(format!("{digits:?}")));
        }
        let n: u32 = digits
            .iter()
            .zip(&self.0.place)
            .map(|(d, w)| d * w)
            .sum();
        Ok(Elem(n as u16))
    }

    /// Little-endian coefficient digit string (`"11"` is `1 + t`).
    pub fn format(&self, a: Elem) -> String {
        digits_to_string(self.0.spec.p, &self.digits(a))
    }

    /// Inverse of [`Field::format`]. Shorter strings are zero-padded on the
    /// right, so `"1"` is the unit in every field.
    pub fn parse(&self, s: &str) -> Result<Elem, FieldError> {
        let p = self.0.spec.p;
        let bad = || FieldError::Parse(s.to_string());
        let digits: Vec<u32> = if p <= 10 {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        } else {
            s.split('.')
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        };
        if digits.is_empty() {
            return Err(bad());
        }
        self.from_digits(&digits).map_err(|_| bad())
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.add[a.index() * self.0.order + b.index()]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.neg[a.index()]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.tables {
            Some(t) => Elem(t.mul[a.index() * self.0.order + b.index()]),
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        match &self.0.tables {
            Some(t) => Some(Elem(t.inv[a.index()])),
            None => Some(self.inv_slow(a)),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        let bi = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    /// Checked binary operation; rejects handles outside this field.
    pub fn arith(&self, a: Elem, b: Elem, op: Op) -> Result<Elem, FieldError> {
        for x in [a, b] {
            if !self.contains(x) {
                return Err(FieldError::ForeignElement {
                    value: x.0 as u32,
                    order: self.0.order,
                });
            }
        }
        Ok(match op {
            Op::Add => self.add(a, b),
            Op::Sub => self.sub(a, b),
            Op::Mul => self.mul(a, b),
            Op::Div => self.div(a, b)?,
        })
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut result = self.one();
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    /// `x^(p^k)`.
    pub fn frobenius_power(&self, x: Elem, k: u32) -> Elem {
        let e = self.0.spec.e;
        let mut y = x;
        // x^(p^e) = x, so only k mod e steps matter
        for _ in 0..(k % e) {
            y = self.pow(y, self.0.spec.p as u64);
        }
        y
    }

    /// `q` such that this field is GF(q^2), if the degree is even.
    pub fn subfield_order(&self) -> Option<u64> {
        let e = self.0.spec.e;
        e.is_multiple_of(2).then(|| (self.0.spec.p as u64).pow(e / 2))
    }

    /// Norm `x^(q+1)` and trace `x + x^q` down to the index-2 subfield.
    pub fn norm_trace(&self, x: Elem) -> Result<(Elem, Elem), FieldError> {
        let q = self
            .subfield_order()
            .ok_or(FieldError::NoQuadraticSubfield(self.0.order))?;
        let xq = self.pow(x, q);
        Ok((self.mul(xq, x), self.add(x, xq)))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let one = self.one();
        let mut x = a;
        let mut k = 1u64;
        while x != one {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// The first element (canonical order) generating the unit group.
    pub fn generator(&self) -> Elem {
        let target = self.0.order as u64 - 1;
        self.units()
            .find(|&a| self.multiplicative_order(a) == Some(target))
            .expect("the unit group of a finite field is cyclic")
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.spec.p;
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
        self.from_digits(&s).expect("digits stay in range")
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let p = self.0.spec.p;
        let s: Vec<u32> = self.digits(a).iter().map(|u| (p - u) % p).collect();
        self.from_digits(&s).expect("digits stay in range")
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.spec.p;
        let prod = zp_mul(&self.digits(a), &self.digits(b), p);
        let (_, r) = zp_divrem(&prod, &self.0.spec.modulus, p);
        self.from_digits(&r).expect("remainder has degree < e")
    }

    /// Extended Euclid in Z/p[t] against the modulus.
    fn inv_slow(&self, a: Elem) -> Elem {
        let p = self.0.spec.p;
        let mut r0 = self.0.spec.modulus.clone();
        let mut r1 = zp_trim(self.digits(a));
        let mut s0: Vec<u32> = Vec::new();
        let mut s1: Vec<u32> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = zp_divrem(&r0, &r1, p);
            let s2 = zp_sub(&s0, &zp_mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = zp_inv(r0[0], p);
        let inv: Vec<u32> = s0
            .iter()
            .map(|&x| (x as u64 * c as u64 % p as u64) as u32)
            .collect();
        let mut inv = inv;
        inv.resize(self.0.place.len(), 0);
        self.from_digits(&inv).expect("inverse has degree < e")
    }
}

fn build_tables(inner: &Inner) -> Tables {
    // a throwaway Field without tables drives the slow paths
    let bare = Field(Arc::new(Inner {
        spec: inner.spec.clone(),
        order: inner.order,
        place: inner.place.clone(),
        tables: None,
    }));
    let n = inner.order;
    let mut add = vec![0u16; n * n];
    let mut mul = vec![0u16; n * n];
    let mut neg = vec![0u16; n];
    let mut inv = vec![0u16; n];
    for a in 0..n {
        let ea = Elem(a as u16);
        neg[a] = bare.neg_slow(ea).0;
        if a > 0 {
            inv[a] = bare.inv_slow(ea).0;
        }
        for b in a..n {
            let eb = Elem(b as u16);
            let s = bare.add_slow(ea, eb).0;
            let m = bare.mul_slow(ea, eb).0;
            add[a * n + b] = s;
            add[b * n + a] = s;
            mul[a * n + b] = m;
            mul[b * n + a] = m;
        }
    }
    Tables { add, neg, mul, inv }
}
