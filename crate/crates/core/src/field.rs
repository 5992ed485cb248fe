//! Exact scalar fields: the rationals, prime fields and simple extensions
//! `k0[t]/(m(t))` of either.
//!
//! A [`Field`] is a cheap, clonable context. [`Scalar`] values carry their
//! coordinates only, so every arithmetic operation goes through the field
//! that produced them.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("minimal polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("minimal polynomial is reducible over the base field")]
    Reducible,
    #[error("extension of an extension is not supported; supply a single minimal polynomial over Q or GF(p)")]
    Tower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot decode scalar from {0}")]
    Decode(String),
    #[error("malformed field descriptor: {0}")]
    Descriptor(String),
}

/// Description of a field, as read from an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rationals,
    PrimeField { p: u64 },
    Extension {
        base: Box<FieldDescriptor>,
        /// Coefficients constant-first, leading 1 included.
        minpoly: Vec<BigRational>,
        symbol: String,
    },
}

impl FieldDescriptor {
    pub fn extension_of_q(minpoly: &[i64], symbol: &str) -> Self {
        FieldDescriptor::Extension {
            base: Box::new(FieldDescriptor::Rationals),
            minpoly: minpoly.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            symbol: symbol.to_string(),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, FieldError> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| FieldError::Descriptor("missing \"kind\"".into()))?;
        match kind {
            "Q" => Ok(FieldDescriptor::Rationals),
            "Fp" => {
                let p = v
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| FieldError::Descriptor("Fp needs integer \"p\"".into()))?;
                Ok(FieldDescriptor::PrimeField { p })
            }
            "ext" => {
                let base = match v.get("base") {
                    Some(b) => FieldDescriptor::from_json(b)?,
                    None => FieldDescriptor::Rationals,
                };
                let coeffs = v
                    .get("minpoly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| FieldError::Descriptor("ext needs \"minpoly\" array".into()))?;
                let minpoly = coeffs.iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                let symbol = v.get("symbol").and_then(Value::as_str).unwrap_or("t").to_string();
                Ok(FieldDescriptor::Extension { base: Box::new(base), minpoly, symbol })
            }
            other => Err(FieldError::Descriptor(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FieldDescriptor::Rationals => serde_json::json!({"kind": "Q"}),
            FieldDescriptor::PrimeField { p } => serde_json::json!({"kind": "Fp", "p": p}),
            FieldDescriptor::Extension { base, minpoly, symbol } => {
                let coeffs: Vec<Value> = minpoly
                    .iter()
                    .map(|c| match base.as_ref() {
                        FieldDescriptor::PrimeField { .. } => Value::from(c.to_integer().to_i64().unwrap_or(0)),
                        _ => Value::from(rational_string(c)),
                    })
                    .collect();
                let mut obj = serde_json::json!({"kind": "ext", "minpoly": coeffs, "symbol": symbol});
                if !matches!(base.as_ref(), FieldDescriptor::Rationals) {
                    obj["base"] = base.to_json();
                }
                obj
            }
        }
    }
}

fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts integers, `"a"`, and `"a/b"` strings.
pub fn parse_rational(v: &Value) -> Result<BigRational, FieldError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| FieldError::Decode(v.to_string())),
        Value::String(s) => parse_rational_str(s).ok_or_else(|| FieldError::Decode(v.to_string())),
        _ => Err(FieldError::Decode(v.to_string())),
    }
}

fn parse_rational_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// A field element. Coordinates are always reduced: rationals in lowest
/// terms, residues in `0..p`, extension vectors of length `deg(minpoly)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64),
    QExt(Vec<BigRational>),
    FpExt(Vec<u64>),
}

// --- base-field arithmetic shared by the extension code ----------------------

trait Base {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn is_zero(&self, a: &Self::E) -> bool;
}

struct QBase;

impl Base for QBase {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

struct FpBase(u64);

impl Base for FpBase {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.0 as u128 - *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(pow_mod(*a, self.0 - 2, self.0))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn trim<B: Base>(base: &B, mut p: Vec<B::E>) -> Vec<B::E> {
    while p.last().is_some_and(|c| base.is_zero(c)) {
        p.pop();
    }
    p
}

fn poly_mul<B: Base>(base: &B, a: &[B::E], b: &[B::E]) -> Vec<B::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if base.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = base.add(&out[i + j], &base.mul(x, y));
        }
    }
    trim(base, out)
}

fn poly_sub<B: Base>(base: &B, a: &[B::E], b: &[B::E]) -> Vec<B::E> {
    let n = a.len().max(b.len());
    let z = base.zero();
    let out = (0..n)
        .map(|i| base.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(base, out)
}

/// Division with remainder by a nonzero polynomial.
fn poly_divmod<B: Base>(base: &B, a: &[B::E], b: &[B::E]) -> (Vec<B::E>, Vec<B::E>) {
    let b = trim(base, b.to_vec());
    let lead_inv = base.inv(b.last().expect("nonzero divisor")).expect("nonzero leading coefficient");
    let mut r = trim(base, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![base.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = base.mul(r.last().unwrap(), &lead_inv);
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = base.sub(&r[shift + i], &base.mul(&c, bc));
        }
        q[shift] = c;
        r = trim(base, r);
    }
    (trim(base, q), r)
}

fn poly_rem<B: Base>(base: &B, a: &[B::E], m: &[B::E]) -> Vec<B::E> {
    poly_divmod(base, a, m).1
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
fn poly_inv_mod<B: Base>(base: &B, a: &[B::E], m: &[B::E]) -> Option<Vec<B::E>> {
    let (mut r0, mut r1) = (m.to_vec(), trim(base, a.to_vec()));
    let (mut s0, mut s1): (Vec<B::E>, Vec<B::E>) = (Vec::new(), vec![base.one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(base, &r0, &r1);
        let s2 = poly_sub(base, &s0, &poly_mul(base, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd; it must be a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let c = base.inv(&r0[0])?;
    Some(s0.iter().map(|s| base.mul(s, &c)).collect())
}

fn poly_gcd<B: Base>(base: &B, a: &[B::E], b: &[B::E]) -> Vec<B::E> {
    let (mut r0, mut r1) = (trim(base, a.to_vec()), trim(base, b.to_vec()));
    while !r1.is_empty() {
        let r = poly_rem(base, &r0, &r1);
        r0 = std::mem::replace(&mut r1, r);
    }
    r0
}

fn pad<B: Base>(base: &B, mut p: Vec<B::E>, len: usize) -> Vec<B::E> {
    p.resize(len, base.zero());
    p
}

// --- the field context -------------------------------------------------------

#[derive(Debug)]
enum Repr {
    Q,
    Fp(u64),
    QExt { minpoly: Vec<BigRational> },
    FpExt { p: u64, minpoly: Vec<u64> },
}

/// Runtime field context. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Field {
    desc: FieldDescriptor,
    repr: Arc<Repr>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for Field {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Self {
        Field::new(FieldDescriptor::Rationals).expect("Q is a field")
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Field::new(FieldDescriptor::PrimeField { p })
    }

    /// `Q[t]/(minpoly)` with integer coefficients, constant term first.
    pub fn q_extension(minpoly: &[i64], symbol: &str) -> Result<Self, FieldError> {
        Field::new(FieldDescriptor::extension_of_q(minpoly, symbol))
    }

    /// `Q(zeta_n)`, realized by the n-th cyclotomic polynomial.
    pub fn cyclotomic(n: u64) -> Self {
        let phi: Vec<i64> = cyclotomic_minpoly(n)
            .iter()
            .map(|c| c.to_i64().expect("small cyclotomic coefficient"))
            .collect();
        if phi.len() == 2 {
            return Field::rationals();
        }
        Field::q_extension(&phi, &format!("zeta{n}")).expect("cyclotomic polynomials are irreducible")
    }

    pub fn new(desc: FieldDescriptor) -> Result<Self, FieldError> {
        let repr = match &desc {
            FieldDescriptor::Rationals => Repr::Q,
            FieldDescriptor::PrimeField { p } => {
                if !is_prime(*p) {
                    return Err(FieldError::NotPrime(*p));
                }
                Repr::Fp(*p)
            }
            FieldDescriptor::Extension { base, minpoly, .. } => {
                if minpoly.len() < 2 || !minpoly.last().unwrap().is_one() {
                    return Err(FieldError::NotMonic);
                }
                match base.as_ref() {
                    FieldDescriptor::Rationals => {
                        if !q_irreducible(minpoly)? {
                            return Err(FieldError::Reducible);
                        }
                        Repr::QExt { minpoly: minpoly.clone() }
                    }
                    FieldDescriptor::PrimeField { p } => {
                        if !is_prime(*p) {
                            return Err(FieldError::NotPrime(*p));
                        }
                        let coeffs = minpoly
                            .iter()
                            .map(|c| {
                                if !c.is_integer() {
                                    return Err(FieldError::Descriptor("GF(p) minpoly needs integer coefficients".into()));
                                }
                                let r = c.numer().mod_floor(&BigInt::from(*p));
                                Ok(r.to_u64().unwrap())
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        if !fp_irreducible(*p, &coeffs) {
                            return Err(FieldError::Reducible);
                        }
                        Repr::FpExt { p: *p, minpoly: coeffs }
                    }
                    FieldDescriptor::Extension { .. } => return Err(FieldError::Tower),
                }
            }
        };
        Ok(Field { desc, repr: Arc::new(repr) })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    /// Characteristic of the field (0 for extensions of Q).
    pub fn characteristic(&self) -> u64 {
        match self.repr.as_ref() {
            Repr::Q | Repr::QExt { .. } => 0,
            Repr::Fp(p) | Repr::FpExt { p, .. } => *p,
        }
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        match self.repr.as_ref() {
            Repr::Q | Repr::Fp(_) => 1,
            Repr::QExt { minpoly } => minpoly.len() - 1,
            Repr::FpExt { minpoly, .. } => minpoly.len() - 1,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self.repr.as_ref() {
            Repr::Q => Scalar::Q(BigRational::zero()),
            Repr::Fp(_) => Scalar::Fp(0),
            Repr::QExt { minpoly } => Scalar::QExt(vec![BigRational::zero(); minpoly.len() - 1]),
            Repr::FpExt { minpoly, .. } => Scalar::FpExt(vec![0; minpoly.len() - 1]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_rational(&BigRational::from_integer(v.into()))
            .expect("integers embed in every field")
    }

    /// Image of a rational number; fails in characteristic p when the
    /// denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        let fp = |p: u64| -> Result<u64, FieldError> {
            let pb = BigInt::from(p);
            let n = q.numer().mod_floor(&pb).to_u64().unwrap();
            let d = q.denom().mod_floor(&pb).to_u64().unwrap();
            let dinv = FpBase(p).inv(&d).ok_or(FieldError::DivisionByZero)?;
            Ok(FpBase(p).mul(&n, &dinv))
        };
        Ok(match self.repr.as_ref() {
            Repr::Q => Scalar::Q(q.clone()),
            Repr::Fp(p) => Scalar::Fp(fp(*p)?),
            Repr::QExt { minpoly } => {
                let mut v = vec![BigRational::zero(); minpoly.len() - 1];
                v[0] = q.clone();
                Scalar::QExt(v)
            }
            Repr::FpExt { p, minpoly } => {
                let mut v = vec![0; minpoly.len() - 1];
                v[0] = fp(*p)?;
                Scalar::FpExt(v)
            }
        })
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// The designated root `t` of the minimal polynomial. For prime fields
    /// and Q this is just 0 (the root of `t`), and is rarely useful.
    pub fn generator(&self) -> Scalar {
        match self.repr.as_ref() {
            Repr::QExt { minpoly } if minpoly.len() > 2 => {
                let mut v = vec![BigRational::zero(); minpoly.len() - 1];
                v[1] = BigRational::one();
                Scalar::QExt(v)
            }
            Repr::QExt { minpoly } => Scalar::QExt(vec![-minpoly[0].clone()]),
            Repr::FpExt { p, minpoly } if minpoly.len() > 2 => {
                let mut v = vec![0; minpoly.len() - 1];
                v[1] = 1 % p;
                Scalar::FpExt(v)
            }
            Repr::FpExt { p, minpoly } => Scalar::FpExt(vec![FpBase(*p).sub(&0, &minpoly[0])]),
            _ => self.zero(),
        }
    }

    /// Build an extension element from its power-basis coordinates.
    pub fn from_coords(&self, coords: &[BigRational]) -> Result<Scalar, FieldError> {
        let mut acc = self.zero();
        let mut power = self.one();
        let t = self.generator();
        for c in coords {
            let term = self.mul(&self.from_rational(c)?, &power);
            acc = self.add(&acc, &term);
            power = self.mul(&power, &t);
        }
        Ok(acc)
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(v) => *v == 0,
            Scalar::QExt(v) => v.iter().all(Zero::is_zero),
            Scalar::FpExt(v) => v.iter().all(|c| *c == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(FpBase(self.p()).add(x, y)),
            (Scalar::QExt(x), Scalar::QExt(y)) => Scalar::QExt(x.iter().zip(y).map(|(a, b)| a + b).collect()),
            (Scalar::FpExt(x), Scalar::FpExt(y)) => {
                let base = FpBase(self.p());
                Scalar::FpExt(x.iter().zip(y).map(|(a, b)| base.add(a, b)).collect())
            }
            _ => panic!("mixed scalar kinds"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Q(x) => Scalar::Q(-x),
            Scalar::Fp(x) => Scalar::Fp(FpBase(self.p()).sub(&0, x)),
            Scalar::QExt(x) => Scalar::QExt(x.iter().map(|c| -c).collect()),
            Scalar::FpExt(x) => {
                let base = FpBase(self.p());
                Scalar::FpExt(x.iter().map(|c| base.sub(&0, c)).collect())
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b, self.repr.as_ref()) {
            (Scalar::Q(x), Scalar::Q(y), _) => Scalar::Q(x * y),
            (Scalar::Fp(x), Scalar::Fp(y), Repr::Fp(p)) => Scalar::Fp(FpBase(*p).mul(x, y)),
            (Scalar::QExt(x), Scalar::QExt(y), Repr::QExt { minpoly }) => {
                if x.iter().all(Zero::is_zero) || y.iter().all(Zero::is_zero) {
                    return self.zero();
                }
                let prod = poly_mul(&QBase, x, y);
                Scalar::QExt(pad(&QBase, poly_rem(&QBase, &prod, minpoly), minpoly.len() - 1))
            }
            (Scalar::FpExt(x), Scalar::FpExt(y), Repr::FpExt { p, minpoly }) => {
                let base = FpBase(*p);
                let prod = poly_mul(&base, x, y);
                Scalar::FpExt(pad(&base, poly_rem(&base, &prod, minpoly), minpoly.len() - 1))
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        match (a, self.repr.as_ref()) {
            (Scalar::Q(x), _) => Ok(Scalar::Q(x.recip())),
            (Scalar::Fp(x), Repr::Fp(p)) => Ok(Scalar::Fp(FpBase(*p).inv(x).unwrap())),
            (Scalar::QExt(x), Repr::QExt { minpoly }) => {
                let inv = poly_inv_mod(&QBase, x, minpoly).ok_or(FieldError::DivisionByZero)?;
                Ok(Scalar::QExt(pad(&QBase, inv, minpoly.len() - 1)))
            }
            (Scalar::FpExt(x), Repr::FpExt { p, minpoly }) => {
                let base = FpBase(*p);
                let inv = poly_inv_mod(&base, x, minpoly).ok_or(FieldError::DivisionByZero)?;
                Ok(Scalar::FpExt(pad(&base, inv, minpoly.len() - 1)))
            }
            _ => panic!("scalar does not belong to this field"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        result
    }

    /// Integer power that allows negative exponents for nonzero bases.
    pub fn powi(&self, a: &Scalar, e: i64) -> Result<Scalar, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Multiplicative order of a nonzero element, if at most `limit`.
    pub fn multiplicative_order(&self, a: &Scalar, limit: u64) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let one = self.one();
        let mut acc = a.clone();
        for k in 1..=limit {
            if acc == one {
                return Some(k);
            }
            acc = self.mul(&acc, a);
        }
        None
    }

    /// Evaluate a polynomial with rational coefficients (constant first).
    pub fn eval_rational_poly(&self, coeffs: &[BigRational], t: &Scalar) -> Result<Scalar, FieldError> {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, t), &self.from_rational(c)?);
        }
        Ok(acc)
    }

    fn p(&self) -> u64 {
        match self.repr.as_ref() {
            Repr::Fp(p) | Repr::FpExt { p, .. } => *p,
            _ => unreachable!("prime-field operation on a characteristic 0 field"),
        }
    }

    /// JSON encoding: `"a/b"` for Q, integers for GF(p), coordinate arrays for
    /// extensions.
    pub fn encode(&self, a: &Scalar) -> Value {
        match a {
            Scalar::Q(q) => Value::from(rational_string(q)),
            Scalar::Fp(v) => Value::from(*v),
            Scalar::QExt(v) => Value::Array(v.iter().map(|c| Value::from(rational_string(c))).collect()),
            Scalar::FpExt(v) => Value::Array(v.iter().map(|c| Value::from(*c)).collect()),
        }
    }

    /// Inverse of [`Field::encode`]. Base-field encodings are accepted for
    /// extension fields as well.
    pub fn decode(&self, v: &Value) -> Result<Scalar, FieldError> {
        match v {
            Value::Array(items) => {
                if self.degree() == 1 && !matches!(self.repr.as_ref(), Repr::QExt { .. } | Repr::FpExt { .. }) {
                    return Err(FieldError::Decode(v.to_string()));
                }
                if items.len() > self.degree() {
                    return Err(FieldError::Decode(v.to_string()));
                }
                let coords = items.iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                self.from_coords(&coords)
            }
            _ => self.from_rational(&parse_rational(v)?),
        }
    }

    /// Human-readable rendering, e.g. `1/2 - 3*i`.
    pub fn display(&self, a: &Scalar) -> String {
        let symbol = match &self.desc {
            FieldDescriptor::Extension { symbol, .. } => symbol.as_str(),
            _ => "",
        };
        match a {
            Scalar::Q(q) => rational_string(q),
            Scalar::Fp(v) => v.to_string(),
            Scalar::QExt(v) => render_poly(v.iter().map(|c| (c.is_zero(), c.is_negative(), rational_string(&c.abs()))), symbol),
            Scalar::FpExt(v) => render_poly(v.iter().map(|c| (*c == 0, false, c.to_string())), symbol),
        }
    }
}

fn render_poly(terms: impl Iterator<Item = (bool, bool, String)>, symbol: &str) -> String {
    let mut out = String::new();
    for (k, (zero, neg, mag)) in terms.enumerate() {
        if zero {
            continue;
        }
        let body = match k {
            0 => mag,
            1 if mag == "1" => symbol.to_string(),
            1 => format!("{mag}*{symbol}"),
            _ if mag == "1" => format!("{symbol}^{k}"),
            _ => format!("{mag}*{symbol}^{k}"),
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::PrimeField { p } => write!(f, "GF({p})"),
            FieldDescriptor::Extension { base, minpoly, symbol } => {
                let poly = render_poly(
                    minpoly.iter().map(|c| (c.is_zero(), c.is_negative(), rational_string(&c.abs()))),
                    "t",
                );
                write!(f, "{base}[{symbol}] with minpoly {poly}")
            }
        }
    }
}

/// The n-th cyclotomic polynomial, coefficients constant-first.
pub fn cyclotomic_minpoly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic index must be positive");
    // t^n - 1 divided by the product of Phi_d over proper divisors d of n
    let mut num: Vec<BigRational> = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d: Vec<BigRational> = cyclotomic_minpoly(d).into_iter().map(BigRational::from_integer).collect();
            let (q, r) = poly_divmod(&QBase, &num, &phi_d);
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    num.into_iter().map(|c| c.to_integer()).collect()
}

// --- irreducibility ----------------------------------------------------------

/// Rational-root and quadratic-factor test for degree <= 4; larger degrees
/// are trusted with a warning.
fn q_irreducible(minpoly: &[BigRational]) -> Result<bool, FieldError> {
    let deg = minpoly.len() - 1;
    if deg == 1 {
        return Ok(true);
    }
    if deg > 4 {
        log::warn!("irreducibility of a degree {deg} minimal polynomial over Q is not checked");
        return Ok(true);
    }
    // Scale roots by L so the polynomial becomes monic with integer coefficients.
    let l = minpoly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let g: Vec<BigInt> = (0..=deg)
        .map(|i| {
            let scale = num_traits::pow(l.clone(), deg - i);
            (&minpoly[i] * BigRational::from_integer(scale)).to_integer()
        })
        .collect();
    if g[0].is_zero() {
        return Ok(false);
    }
    let divisors = match small_divisors(&g[0]) {
        Some(d) => d,
        None => {
            log::warn!("constant term too large for the irreducibility check; trusting caller");
            return Ok(true);
        }
    };
    let eval = |x: &BigInt| g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for d in &divisors {
        for s in [d.clone(), -d.clone()] {
            if eval(&s).is_zero() {
                return Ok(false);
            }
        }
    }
    if deg == 4 {
        // (x^2 + a x + b)(x^2 + c x + e) with b e = g0
        for d in &divisors {
            for b in [d.clone(), -d.clone()] {
                let e = &g[0] / &b;
                let s = g[3].clone();
                let prod = &g[2] - &b - &e;
                let disc = &s * &s - BigInt::from(4) * &prod;
                if disc.is_negative() {
                    continue;
                }
                let root = disc.sqrt();
                if &root * &root != disc {
                    continue;
                }
                for sign in [1i32, -1] {
                    let num = &s + BigInt::from(sign) * &root;
                    if num.is_odd() {
                        continue;
                    }
                    let a = &num / 2;
                    let c = &s - &a;
                    if &a * &e + &b * &c == g[1] {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Rabin's test over GF(p) for degree <= 4; larger degrees are trusted.
fn fp_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    if deg > 4 {
        log::warn!("irreducibility of a degree {deg} minimal polynomial over GF({p}) is not checked");
        return true;
    }
    let base = FpBase(p);
    let f = f.to_vec();
    // x^(p^k) mod f by repeated p-th powering
    let powmod = |a: &[u64], e: u64| -> Vec<u64> {
        let mut result = vec![1];
        let mut b = a.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = poly_rem(&base, &poly_mul(&base, &result, &b), &f);
            }
            b = poly_rem(&base, &poly_mul(&base, &b, &b), &f);
            e >>= 1;
        }
        result
    };
    let x = vec![0, 1];
    let mut frob = vec![x.clone()];
    for k in 1..=deg {
        let next = powmod(&frob[k - 1], p);
        frob.push(next);
    }
    if poly_sub(&base, &frob[deg], &x) != Vec::<u64>::new() {
        return false;
    }
    for q in 2..=deg {
        if deg.is_multiple_of(q) && is_prime(q as u64) {
            let h = poly_sub(&base, &frob[deg / q], &x);
            if poly_gcd(&base, &f, &h).len() != 1 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_half_times_two() {
        let q = Field::rationals();
        let half = q.from_ratio(1, 2).unwrap();
        assert!(q.is_one(&q.mul(&half, &q.from_i64(2))));
    }

    #[test]
    fn gf7_products_and_inverse() {
        let f = Field::prime(7).unwrap();
        assert!(f.is_one(&f.mul(&f.from_i64(3), &f.from_i64(5))));
        assert_eq!(f.inv(&f.from_i64(3)).unwrap(), f.from_i64(5));
    }

    #[test]
    fn gaussian_rationals() {
        let f = Field::q_extension(&[1, 0, 1], "i").unwrap();
        let i = f.generator();
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
        // (1+i)^{-1} = (1-i)/2
        let one_plus_i = f.add(&f.one(), &i);
        let expected = f.div(&f.sub(&f.one(), &i), &f.from_i64(2)).unwrap();
        assert_eq!(f.inv(&one_plus_i).unwrap(), expected);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::prime(9).unwrap_err(), FieldError::NotPrime(9));
        let non_monic = FieldDescriptor::Extension {
            base: Box::new(FieldDescriptor::Rationals),
            minpoly: vec![BigRational::one(), BigRational::zero(), BigRational::from_integer(2.into())],
            symbol: "t".into(),
        };
        assert_eq!(Field::new(non_monic).unwrap_err(), FieldError::NotMonic);
        assert_eq!(Field::q_extension(&[-1, 0, 1], "t").unwrap_err(), FieldError::Reducible);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        assert_eq!(Field::q_extension(&[4, 0, 0, 0, 1], "t").unwrap_err(), FieldError::Reducible);
        assert!(Field::q_extension(&[-2, 0, 1], "s").is_ok());
        let tower = FieldDescriptor::Extension {
            base: Box::new(FieldDescriptor::extension_of_q(&[1, 0, 1], "i")),
            minpoly: vec![BigRational::one(), BigRational::zero(), BigRational::one()],
            symbol: "j".into(),
        };
        assert_eq!(Field::new(tower).unwrap_err(), FieldError::Tower);
    }

    #[test]
    fn zero_has_no_inverse() {
        for f in [Field::rationals(), Field::prime(5).unwrap(), Field::cyclotomic(3)] {
            assert_eq!(f.inv(&f.zero()).unwrap_err(), FieldError::DivisionByZero);
        }
    }

    #[test]
    fn gf_p_extensions() {
        // GF(9) = GF(3)[t]/(t^2+1)
        let desc = FieldDescriptor::Extension {
            base: Box::new(FieldDescriptor::PrimeField { p: 3 }),
            minpoly: [1, 0, 1].iter().map(|&c: &i64| BigRational::from_integer(c.into())).collect(),
            symbol: "t".into(),
        };
        let f = Field::new(desc).unwrap();
        let t = f.generator();
        assert_eq!(f.mul(&t, &t), f.from_i64(-1));
        assert_eq!(f.multiplicative_order(&f.add(&t, &f.one()), 100), Some(8));
        // t^2 + 1 splits over GF(5)
        let split = FieldDescriptor::Extension {
            base: Box::new(FieldDescriptor::PrimeField { p: 5 }),
            minpoly: [1, 0, 1].iter().map(|&c: &i64| BigRational::from_integer(c.into())).collect(),
            symbol: "t".into(),
        };
        assert_eq!(Field::new(split).unwrap_err(), FieldError::Reducible);
    }

    #[test]
    fn cyclotomic_small_cases() {
        let as_i64 = |n| cyclotomic_minpoly(n).iter().map(|c| c.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(3), vec![1, 1, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(8), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn cyclotomic_roots_are_primitive() {
        for n in [3u64, 4, 5, 8, 12] {
            let f = Field::cyclotomic(n);
            let z = f.generator();
            assert_eq!(f.multiplicative_order(&z, 100), Some(n), "n = {n}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = Field::cyclotomic(3);
        let a = f.from_coords(&[BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into())]).unwrap();
        let enc = f.encode(&a);
        assert_eq!(f.decode(&enc).unwrap(), a);
        let q = Field::rationals();
        assert_eq!(q.decode(&Value::from("-3/6")).unwrap(), q.from_ratio(-1, 2).unwrap());
        assert_eq!(q.decode(&Value::from(4)).unwrap(), q.from_i64(4));
        let desc = FieldDescriptor::from_json(&serde_json::json!({"kind":"ext","minpoly":[1,0,1],"symbol":"i"})).unwrap();
        assert_eq!(FieldDescriptor::from_json(&desc.to_json()).unwrap(), desc);
    }

    mod axioms {
        use super::*;
        use proptest::prelude::*;

        fn fields() -> Vec<Field> {
            vec![Field::rationals(), Field::prime(7).unwrap(), Field::cyclotomic(3), Field::q_extension(&[1, 0, 1], "i").unwrap()]
        }

        fn elem(f: &Field, c: &[i64]) -> Scalar {
            let t = f.generator();
            let mut out = f.zero();
            for (k, &v) in c.iter().enumerate() {
                out = f.add(&out, &f.mul(&f.from_i64(v), &f.pow(&t, k as u64)));
            }
            out
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn ring_laws(a in proptest::collection::vec(-5i64..6, 3), b in proptest::collection::vec(-5i64..6, 3), c in proptest::collection::vec(-5i64..6, 3)) {
                for f in fields() {
                    let (x, y, z) = (elem(&f, &a), elem(&f, &b), elem(&f, &c));
                    prop_assert_eq!(f.mul(&x, &f.add(&y, &z)), f.add(&f.mul(&x, &y), &f.mul(&x, &z)));
                    prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
                    prop_assert_eq!(f.mul(&x, &y), f.mul(&y, &x));
                    prop_assert!(f.is_zero(&f.add(&x, &f.neg(&x))));
                }
            }

            #[test]
            fn inverses_and_codec(a in proptest::collection::vec(-5i64..6, 3)) {
                for f in fields() {
                    let x = elem(&f, &a);
                    prop_assert_eq!(f.decode(&f.encode(&x)).unwrap(), x.clone());
                    if !f.is_zero(&x) {
                        prop_assert!(f.is_one(&f.mul(&x, &f.inv(&x).unwrap())));
                    } else {
                        prop_assert!(f.inv(&x).is_err());
                    }
                }
            }
        }
    }
}
