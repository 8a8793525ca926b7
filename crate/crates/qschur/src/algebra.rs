//! Elements and products of the finite convolution algebras and of the
//! stabilized algebras.
//!
//! An [`Algebra`] is a product engine with memoized structure constants. Its
//! [`Level`] decides which tridiagonal formula is used; everything above the
//! tridiagonal products (general products, chains, bar, canonical bases) is
//! shared between the two levels.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeffs::{bracket_b, enumerate_st, h_st, h_st_via_d, n_st, xi_b, Range, StMode, StPair};
use crate::error::{Error, Result};
use crate::permat::{enumerate_xi, member, AlgebraType, IndexSet, PeriodicMatrix};
use crate::qpoly::{eval_q, Poly};

/// Finite linear combination of basis elements.
pub type Terms = BTreeMap<PeriodicMatrix, Poly>;

pub fn add_into(acc: &mut Terms, key: &PeriodicMatrix, c: &Poly) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(key.clone()).or_insert_with(Poly::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(key);
    }
}

pub fn add_scaled(acc: &mut Terms, x: &Terms, c: &Poly) {
    for (k, v) in x {
        add_into(acc, k, &(v * c));
    }
}

/// Applies `v -> v^{-1}` to every coefficient.
pub fn bar_coeffs(x: &Terms) -> Terms {
    x.iter().map(|(k, v)| (k.clone(), v.bar())).collect()
}

/// An element of `S^ty_{n,d}` (when `d` is set) or of the stabilized algebra
/// of type `ty` (when it is not), in the standard basis unless stated otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub ty: AlgebraType,
    pub n: i64,
    pub d: Option<i64>,
    pub terms: Terms,
}

pub type AlgebraElement = Element;
pub type StabElement = Element;

impl Element {
    pub fn zero(ty: AlgebraType, n: i64, d: Option<i64>) -> Self {
        Element { ty, n, d, terms: Terms::new() }
    }

    pub fn basis(ty: AlgebraType, d: Option<i64>, a: &PeriodicMatrix) -> Self {
        let mut terms = Terms::new();
        terms.insert(a.clone(), Poly::one());
        Element { ty, n: a.n(), d, terms }
    }

    pub fn with_terms(&self, terms: Terms) -> Self {
        Element { ty: self.ty, n: self.n, d: self.d, terms }
    }

    pub fn index_set(&self) -> IndexSet {
        match self.d {
            Some(d) => IndexSet::Xi(self.ty, d),
            None => IndexSet::XiTilde(self.ty),
        }
    }

    /// Checks that every key lies in the index set of the algebra.
    pub fn validate(&self) -> Result<()> {
        let set = self.index_set();
        for k in self.terms.keys() {
            if k.n() != self.n || !member(k, set) {
                return Err(Error::NotMember { matrix: k.clone(), set: set.to_string() });
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &PeriodicMatrix) -> Poly {
        self.terms.get(a).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.compatible(other)?;
        let mut t = self.terms.clone();
        add_scaled(&mut t, &other.terms, &Poly::one());
        Ok(self.with_terms(t))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.compatible(other)?;
        let mut t = self.terms.clone();
        add_scaled(&mut t, &other.terms, &-Poly::one());
        Ok(self.with_terms(t))
    }

    pub fn scale(&self, c: &Poly) -> Element {
        let mut t = Terms::new();
        add_scaled(&mut t, &self.terms, c);
        self.with_terms(t)
    }

    /// Applies `v -> v^{-1}` to the coefficients only.
    pub fn bar_coeffs(&self) -> Element {
        self.with_terms(bar_coeffs(&self.terms))
    }

    fn compatible(&self, other: &Element) -> Result<()> {
        if self.ty != other.ty || self.n != other.n || self.d != other.d {
            return Err(Error::Incompatible);
        }
        Ok(())
    }

    pub fn map_keys(&self, ty: AlgebraType, f: impl Fn(&PeriodicMatrix) -> PeriodicMatrix) -> Element {
        let mut t = Terms::new();
        for (k, v) in &self.terms {
            add_into(&mut t, &f(k), v);
        }
        Element { ty, n: self.n, d: self.d, terms: t }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    matrix: PeriodicMatrix,
    poly: Poly,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    #[serde(rename = "type")]
    ty: AlgebraType,
    n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
    terms: Vec<TermJson>,
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            ty: self.ty,
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(m, p)| TermJson { matrix: m.clone(), poly: p.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = ElementJson::deserialize(d)?;
        let mut terms = Terms::new();
        for t in e.terms {
            if t.matrix.n() != e.n {
                return Err(serde::de::Error::custom("matrix period differs from element period"));
            }
            add_into(&mut terms, &t.matrix, &t.poly);
        }
        Ok(Element { ty: e.ty, n: e.n, d: e.d, terms })
    }
}

/// Which tridiagonal product formula an [`Algebra`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// Products in the finite algebras `S^c_{n,d}` (which contain the typed ones).
    Finite,
    /// Products at `v' = 1` in the stabilized algebra whose p-shift pattern is
    /// that of the given type.
    Stable(AlgebraType),
}

/// A memo table safe to share between threads. Locks are never held across
/// recursive computation.
pub(crate) struct Cache<K, V> {
    map: Mutex<HashMap<K, V>>,
}

impl<K: Eq + Hash, V: Clone> Cache<K, V> {
    fn new() -> Self {
        Cache { map: Mutex::new(HashMap::new()) }
    }

    pub(crate) fn get(&self, k: &K) -> Option<V> {
        self.map.lock().unwrap().get(k).cloned()
    }

    pub(crate) fn insert(&self, k: K, v: V) {
        self.map.lock().unwrap().insert(k, v);
    }

    pub(crate) fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }
}

/// Product engine for one period `n` and one [`Level`].
pub struct Algebra {
    pub n: i64,
    pub level: Level,
    pub(crate) tri: Cache<(PeriodicMatrix, PeriodicMatrix), Arc<Terms>>,
    pub(crate) basis: Cache<(PeriodicMatrix, PeriodicMatrix), Arc<Terms>>,
    pub(crate) chains: Cache<PeriodicMatrix, Arc<(Vec<PeriodicMatrix>, Terms)>>,
    pub(crate) bars: Cache<PeriodicMatrix, Arc<Terms>>,
    pub(crate) canon: Cache<PeriodicMatrix, Arc<Terms>>,
}

impl Algebra {
    pub fn new(n: i64, level: Level) -> Self {
        assert!(n > 0 && n % 2 == 0, "period must be positive and even");
        Algebra {
            n,
            level,
            tri: Cache::new(),
            basis: Cache::new(),
            chains: Cache::new(),
            bars: Cache::new(),
            canon: Cache::new(),
        }
    }

    pub fn finite(n: i64) -> Self {
        Self::new(n, Level::Finite)
    }

    pub fn stable(n: i64, ty: AlgebraType) -> Self {
        Self::new(n, Level::Stable(ty))
    }

    pub fn cache_sizes(&self) -> [usize; 5] {
        [self.tri.len(), self.basis.len(), self.chains.len(), self.bars.len(), self.canon.len()]
    }

    /// `[B] * [A]` for tridiagonal `B`; zero unless `co(B) = ro(A)`.
    pub fn tri_mult(&self, b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<Arc<Terms>> {
        if b.co() != a.ro() {
            return Ok(Arc::new(Terms::new()));
        }
        let key = (b.clone(), a.clone());
        if let Some(v) = self.tri.get(&key) {
            return Ok(v);
        }
        let out = match self.level {
            Level::Finite => std_tri_terms(b, a)?,
            Level::Stable(ty) => crate::stab::stable_tri_terms(b, a, ty)?,
        };
        let out = Arc::new(out);
        self.tri.insert(key, out.clone());
        Ok(out)
    }

    /// `[B] * x` for tridiagonal `B`.
    pub fn lin_tri(&self, b: &PeriodicMatrix, x: &Terms) -> Result<Terms> {
        let mut out = Terms::new();
        let co = b.co();
        for (a, c) in x {
            if a.ro() != co {
                continue;
            }
            add_scaled(&mut out, &*self.tri_mult(b, a)?, c);
        }
        Ok(out)
    }

    /// `[X] * [A]` for arbitrary `X`, by rewriting `[X]` through its chain.
    pub fn mult_basis(&self, x: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<Arc<Terms>> {
        if x.co() != a.ro() {
            return Ok(Arc::new(Terms::new()));
        }
        if x.is_tridiagonal() {
            return self.tri_mult(x, a);
        }
        let key = (x.clone(), a.clone());
        if let Some(v) = self.basis.get(&key) {
            return Ok(v);
        }
        let ch = self.chain_expansion(x)?;
        let (mats, expansion) = (&ch.0, &ch.1);
        let mut z = Terms::new();
        z.insert(a.clone(), Poly::one());
        for b in &mats[1..] {
            z = self.lin_tri(b, &z)?;
        }
        for (c, coef) in expansion {
            if c == x {
                continue;
            }
            add_scaled(&mut z, &*self.mult_basis(c, a)?, &-coef);
        }
        let z = Arc::new(z);
        self.basis.insert(key, z.clone());
        Ok(z)
    }

    pub fn mult_terms(&self, x: &Terms, y: &Terms) -> Result<Terms> {
        let mut out = Terms::new();
        for (xk, xc) in x {
            for (yk, yc) in y {
                let p = self.mult_basis(xk, yk)?;
                add_scaled(&mut out, &p, &(xc * yc));
            }
        }
        Ok(out)
    }

    /// Bilinear product of two elements of the same algebra.
    pub fn mult(&self, x: &Element, y: &Element) -> Result<Element> {
        if x.ty != y.ty || x.n != y.n || x.d != y.d || x.n != self.n {
            return Err(Error::Incompatible);
        }
        Ok(x.with_terms(self.mult_terms(&x.terms, &y.terms)?))
    }
}

/// Checks the hypotheses of the tridiagonal formula in the finite algebra.
fn check_tri_args(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<i64> {
    if b.tri_alpha().is_none() {
        return Err(Error::NotTridiagonal(b.clone()));
    }
    if b.co() != a.ro() {
        return Err(Error::FiberMismatch { co: b.co(), ro: a.ro() });
    }
    let d = crate::permat::xi_size(a).ok_or_else(|| Error::NotMember { matrix: a.clone(), set: "Xi".into() })?;
    for m in [a, b] {
        if !member(m, IndexSet::Xi(ty, d)) {
            return Err(Error::NotMember { matrix: m.clone(), set: IndexSet::Xi(ty, d).to_string() });
        }
    }
    Ok(d)
}

/// Standard-basis product `[B] * [A]` for tridiagonal `B` in the finite algebra.
pub fn std_tri_terms(b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<Terms> {
    let alpha = b.tri_alpha().ok_or_else(|| Error::NotTridiagonal(b.clone()))?;
    let mut out = Terms::new();
    for StPair { s, t, target } in enumerate_st(a, &alpha, StMode::Finite) {
        let c = n_st(&s, &t, Range::Gamma);
        if c.is_zero() {
            continue;
        }
        let br = bracket_b(&target, &s);
        if br.is_zero() {
            continue;
        }
        let h = h_st(a, &alpha, &s, &t, &target)?;
        debug_assert_eq!(
            num_rational::Rational64::from_integer(h),
            h_st_via_d(a, b, &s, &target),
            "closed-form exponent disagrees with the d-difference"
        );
        add_into(&mut out, &target, &(&(&c * &br) * &Poly::v(h)));
    }
    Ok(out)
}

/// `e_B * e_A` for tridiagonal `B` in the finite algebra (e-basis coefficients).
pub fn e_tri_terms(b: &PeriodicMatrix, a: &PeriodicMatrix) -> Result<Terms> {
    let alpha = b.tri_alpha().ok_or_else(|| Error::NotTridiagonal(b.clone()))?;
    let mut out = Terms::new();
    for StPair { s, t, target } in enumerate_st(a, &alpha, StMode::Finite) {
        let c = n_st(&s, &t, Range::Gamma);
        if c.is_zero() {
            continue;
        }
        let br = bracket_b(&target, &s);
        if br.is_zero() {
            continue;
        }
        let x = crate::coeffs::to_int(xi_b(&target, &s) * 2, "2 xi^b")?;
        add_into(&mut out, &target, &(&(&c * &br) * &Poly::v(x)));
    }
    Ok(out)
}

/// `e_B * e_A` with the hypotheses of the formula checked.
pub fn mult_e_tridiag(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<Element> {
    let d = check_tri_args(b, a, ty)?;
    Ok(Element { ty, n: a.n(), d: Some(d), terms: e_tri_terms(b, a)? })
}

/// `[B] * [A]` with the hypotheses of the formula checked.
pub fn mult_std_tridiag(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<Element> {
    let d = check_tri_args(b, a, ty)?;
    Ok(Element { ty, n: a.n(), d: Some(d), terms: std_tri_terms(b, a)? })
}

/// The sum of all diagonal `[D]` of `Xi^ty_{n,d}`; for `ji` and `ij` these are
/// the idempotents cutting out the typed subalgebras.
pub fn idempotent(ty: AlgebraType, n: i64, d: i64) -> Element {
    let mut e = Element::zero(ty, n, Some(d));
    for a in enumerate_xi(n, d, 0, ty) {
        e.terms.insert(a, Poly::one());
    }
    e
}

/// `[A] -> [^tau A]`, exchanging the `ji` and `ij` families.
pub fn tau_alg(x: &Element) -> Element {
    x.map_keys(x.ty.tau(), |a| a.tau())
}

/// Outcome of [`coeff_sum_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CoeffSumReport {
    pub q: u64,
    /// Per target `A'`: the sum over `A` of the e-basis coefficient of `e_{A'}` in `e_B * e_A` at `v^2 = q`.
    pub sums: Vec<(PeriodicMatrix, String)>,
    pub ok: bool,
}

/// Point-count consistency of the e-basis structure constants of `e_B * -`:
/// summed over all `A`, the coefficient of `e_{A'}` counts the lattices in
/// relative position `B` to a fixed one, so it is a nonnegative integer that
/// does not depend on the target `A'`. Targets of band at most `w` are
/// checked, using all `A` of band at most `w + 1`.
pub fn coeff_sum_check(b: &PeriodicMatrix, d: i64, q: u64, w: i64) -> Result<CoeffSumReport> {
    let n = b.n();
    let mut sums: BTreeMap<PeriodicMatrix, Ratio<BigInt>> = BTreeMap::new();
    for a in enumerate_xi(n, d, w + 1, AlgebraType::C) {
        if a.ro() != b.co() {
            continue;
        }
        for (ap, c) in e_tri_terms(b, &a)? {
            *sums.entry(ap).or_insert_with(Ratio::zero) += eval_q(&c, q);
        }
    }
    sums.retain(|k, _| k.band() <= w);
    let first = sums.values().next().cloned();
    let ok = sums.values().all(|s| s.is_integer() && !s.is_negative() && Some(s) == first.as_ref());
    Ok(CoeffSumReport { q, sums: sums.into_iter().map(|(k, v)| (k, v.to_string())).collect(), ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permat::IndexVector;

    #[test]
    fn diagonal_left_factor_is_identity() {
        let a = PeriodicMatrix::from_entries(4, [(0, 0, 1), (2, 2, 1), (1, 2, 1), (-1, -2, 1), (1, 1, 1), (3, 3, 1)]);
        let d = PeriodicMatrix::diag(&a.ro());
        let p = mult_std_tridiag(&d, &a, AlgebraType::C).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.coeff(&a), Poly::one());
        let e = mult_e_tridiag(&d, &a, AlgebraType::C).unwrap();
        assert_eq!(e.coeff(&a), Poly::one());
    }

    #[test]
    fn fiber_mismatch_is_an_error() {
        let a = PeriodicMatrix::diag(&IndexVector::new(vec![1, 1, 1, 1]));
        let d = PeriodicMatrix::diag(&IndexVector::new(vec![3, 0, 1, 0]));
        assert!(matches!(mult_std_tridiag(&d, &a, AlgebraType::C), Err(Error::FiberMismatch { .. })));
    }

    #[test]
    fn element_json_round_trip() {
        let a = PeriodicMatrix::diag(&IndexVector::new(vec![1, 1, 1, 1]));
        let e = Element::basis(AlgebraType::C, Some(1), &a).scale(&Poly::from_terms([(-2, 1.into()), (0, 3.into())]));
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.starts_with("{\"type\":\"c\",\"n\":4,\"d\":1,\"terms\""));
        let back: Element = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn idempotent_squares_to_itself() {
        let alg = Algebra::finite(4);
        for ty in [AlgebraType::Ji, AlgebraType::Ij] {
            let j = idempotent(ty, 4, 2);
            assert_eq!(alg.mult(&j, &j).unwrap(), j);
        }
        assert_eq!(tau_alg(&idempotent(AlgebraType::Ji, 4, 2)), idempotent(AlgebraType::Ij, 4, 2));
    }
}
