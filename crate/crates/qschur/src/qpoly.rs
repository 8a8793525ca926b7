//! Laurent polynomials in `v`, bivariate polynomials in `(v, v')`, and the
//! quantum integers, factorials and binomials built from them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::{self, MapAccess, SeqAccess, Visitor};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    Inexact,
}

/// Coefficient ring for [`Laurent`]. Any exact integer-like ring works; floats
/// are excluded because several constructions need exact division.
pub trait Coeff:
    Clone
    + fmt::Debug
    + Eq
    + std::hash::Hash
    + Zero
    + One
    + Integer
    + Signed
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + fmt::Debug
        + Eq
        + std::hash::Hash
        + Zero
        + One
        + Integer
        + Signed
        + for<'a> AddAssign<&'a T>
        + for<'a> SubAssign<&'a T>
{
}

/// A Laurent polynomial `sum c_e v^e`, stored densely from its lowest exponent.
///
/// Normal form: no leading or trailing zero coefficients; the zero polynomial
/// has an empty coefficient vector and `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Laurent<C> {
    low: i64,
    coeffs: Vec<C>,
}

/// Laurent polynomials with arbitrary-precision integer coefficients.
pub type Poly = Laurent<BigInt>;

impl<C: Coeff> Laurent<C> {
    pub fn zero() -> Self {
        Laurent { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::mono(0, C::one())
    }

    pub fn mono(e: i64, c: C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { low: e, coeffs: vec![c] }
    }

    /// `v^e`
    pub fn v(e: i64) -> Self {
        Self::mono(e, C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::mono(0, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let map: BTreeMap<i64, C> = terms.into_iter().fold(BTreeMap::new(), |mut m, (e, c)| {
            *m.entry(e).or_insert_with(C::zero) += &c;
            m
        });
        let (lo, hi) = match (map.keys().next(), map.keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Self::zero(),
        };
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Laurent { low: lo, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> C {
        let k = e - self.low;
        if k < 0 || k >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `Some((e, c))` when the polynomial is the single term `c v^e`.
    pub fn as_monomial(&self) -> Option<(i64, C)> {
        (self.coeffs.len() == 1).then(|| (self.low, self.coeffs[0].clone()))
    }

    /// Multiply by `v^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
        .normalized()
    }

    /// The ring involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => Laurent { low: -hi, coeffs: self.coeffs.iter().rev().cloned().collect() },
        }
    }

    /// Terms with exponent strictly below zero.
    pub fn negative_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / other`; errors if `other` does not divide `self`
    /// in `C[v, v^{-1}]`.
    pub fn div_exact(&self, other: &Self) -> Result<Self, QpolyError> {
        if other.is_zero() {
            return Err(QpolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut rem: Vec<C> = self.coeffs.clone();
        let den = &other.coeffs;
        let dl = den.len();
        let lead = den[dl - 1].clone();
        if rem.len() < dl {
            return Err(QpolyError::Inexact);
        }
        let qlen = rem.len() - dl + 1;
        let mut quot = vec![C::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (f, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(QpolyError::Inexact);
            }
            for (t, d) in den.iter().enumerate() {
                let x = f.clone() * d.clone();
                rem[k + t] -= &x;
            }
            quot[k] = f;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(QpolyError::Inexact);
        }
        Ok(Laurent { low: self.low - other.low, coeffs: quot }.normalized())
    }

    /// Evaluate at `v^2 = q`. Only defined when every exponent is even.
    pub fn eval_q(&self, q: &C) -> Option<Ratio<C>> {
        let mut acc = Ratio::from_integer(C::zero());
        for (e, c) in self.terms() {
            if e.rem_euclid(2) != 0 {
                return None;
            }
            let k = e / 2;
            let p = num_traits::pow(q.clone(), k.unsigned_abs() as usize);
            let term = if k >= 0 {
                Ratio::from_integer(c.clone() * p)
            } else {
                Ratio::new(c.clone(), p)
            };
            acc = acc + term;
        }
        Some(acc)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other.clone() } else { other.clone() };
        }
        let lo = self.low.min(other.low);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - lo) as usize + k];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Laurent { low: lo, coeffs }.normalized()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let x = a.clone() * b.clone();
                coeffs[i + j] += &x;
            }
        }
        Laurent { low: self.low + other.low, coeffs }.normalized()
    }
}

impl<C: Coeff> Default for Laurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Coeff> Add<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.add_impl(rhs, false)
    }
}

impl<C: Coeff> Add for Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: Laurent<C>) -> Laurent<C> {
        self.add_impl(&rhs, false)
    }
}

impl<'a, C: Coeff> Sub<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.add_impl(rhs, true)
    }
}

impl<C: Coeff> Sub for Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: Laurent<C>) -> Laurent<C> {
        self.add_impl(&rhs, true)
    }
}

impl<'a, C: Coeff> Mul<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &'a Laurent<C>) -> Laurent<C> {
        self.mul_impl(rhs)
    }
}

impl<C: Coeff> Mul for Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: Laurent<C>) -> Laurent<C> {
        self.mul_impl(&rhs)
    }
}

impl<C: Coeff> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(mut self) -> Laurent<C> {
        for c in self.coeffs.iter_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<C: Coeff> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        -self.clone()
    }
}

impl<C: Coeff> AddAssign<&Laurent<C>> for Laurent<C> {
    fn add_assign(&mut self, rhs: &Laurent<C>) {
        *self = self.add_impl(rhs, false);
    }
}

impl<C: Coeff> SubAssign<&Laurent<C>> for Laurent<C> {
    fn sub_assign(&mut self, rhs: &Laurent<C>) {
        *self = self.add_impl(rhs, true);
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{a}v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl<C: Coeff + fmt::Display> Serialize for Laurent<C> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.num_terms()))?;
        for (e, c) in self.terms() {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de, C: Coeff + FromStr> Deserialize<'de> for Laurent<C> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<C>(std::marker::PhantomData<C>);
        impl<'de, C: Coeff + FromStr> Visitor<'de> for V<C> {
            type Value = Laurent<C>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an object mapping exponent strings to coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut terms = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    let e: i64 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    let c: C = v.parse().map_err(|_| de::Error::custom(format!("bad coefficient {v:?}")))?;
                    terms.push((e, c));
                }
                Ok(Laurent::from_terms(terms))
            }
        }
        d.deserialize_map(V(std::marker::PhantomData))
    }
}

/// `[a] = (v^{2a} - 1)/(v^2 - 1)`.
pub fn qint(a: i64) -> Poly {
    if a >= 0 {
        Poly::from_terms((0..a).map(|k| (2 * k, BigInt::one())))
    } else {
        Poly::from_terms((1..=-a).map(|k| (-2 * k, -BigInt::one())))
    }
}

/// `v^{2e} - 1`
fn vpow_minus_one(e: i64) -> Poly {
    &Poly::v(2 * e) - &Poly::one()
}

thread_local! {
    static BINOM_CACHE: RefCell<HashMap<(i64, i64), Poly>> = RefCell::new(HashMap::new());
}

/// Quantum binomial `prod_{i=1}^{b} (v^{2(a-i+1)} - 1)/(v^{2i} - 1)`, for any
/// integer `a`. Computed as an exact quotient of the two products.
pub fn qbinom(a: i64, b: i64) -> Poly {
    if b < 0 {
        return Poly::zero();
    }
    if b == 0 {
        return Poly::one();
    }
    if let Some(p) = BINOM_CACHE.with(|c| c.borrow().get(&(a, b)).cloned()) {
        return p;
    }
    let mut num = Poly::one();
    let mut den = Poly::one();
    for i in 1..=b {
        num = &num * &vpow_minus_one(a - i + 1);
        den = &den * &vpow_minus_one(i);
    }
    let p = num
        .div_exact(&den)
        .unwrap_or_else(|e| panic!("quantum binomial ({a}, {b}) is not a Laurent polynomial: {e}"));
    BINOM_CACHE.with(|c| c.borrow_mut().insert((a, b), p.clone()));
    p
}

/// `[a]! = [1][2]...[a]`
pub fn qfact(a: i64) -> Poly {
    (1..=a).fold(Poly::one(), |acc, i| &acc * &qint(i))
}

pub fn bar_poly(p: &Poly) -> Poly {
    p.bar()
}

/// Exact value at `v^2 = q`.
pub fn eval_q(p: &Poly, q: u64) -> Ratio<BigInt> {
    p.eval_q(&BigInt::from(q)).expect("odd exponent cannot be evaluated at v^2 = q")
}

/// Substitution rule for the second variable of a [`BivarPoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VPrime {
    /// `v' -> v^{-k}`
    PowV(i64),
    /// `v' -> 1`
    One,
}

/// Polynomial in `v, v', v^{-1}, v'^{-1}` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mono(0, 0, BigInt::one())
    }

    /// `c v^ev v'^evp`
    pub fn mono(ev: i64, evp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((ev, evp), c);
        }
        BivarPoly { terms }
    }

    pub fn from_poly(p: &Poly) -> Self {
        BivarPoly { terms: p.terms().map(|(e, c)| ((e, 0), c.clone())).collect() }
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), BigInt)>>(it: I) -> Self {
        let mut out = BivarPoly::zero();
        for (k, c) in it {
            out.add_term(k, &c);
        }
        out
    }

    fn add_term(&mut self, k: (i64, i64), c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BivarPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BivarPoly::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                out.add_term((a + x, b + y), &(c * d));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        self.mul(&BivarPoly::from_poly(p))
    }

    pub fn specialize(&self, mode: VPrime) -> Poly {
        Poly::from_terms(self.terms.iter().map(|((ev, evp), c)| {
            let e = match mode {
                VPrime::PowV(k) => ev - k * evp,
                VPrime::One => *ev,
            };
            (e, c.clone())
        }))
    }
}

impl Serialize for BivarPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for ((ev, evp), c) in &self.terms {
            seq.serialize_element(&(ev, evp, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for BivarPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BivarPoly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an array of [e_v, e_v', coeff] triples")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<BivarPoly, A::Error> {
                let mut out = BivarPoly::zero();
                while let Some((ev, evp, c)) = seq.next_element::<(i64, i64, String)>()? {
                    let c: BigInt = c.parse().map_err(|_| de::Error::custom(format!("bad coefficient {c:?}")))?;
                    out.add_term((ev, evp), &c);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V)
    }
}
