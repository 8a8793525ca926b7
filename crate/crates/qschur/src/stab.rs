//! Stabilization: the bivariate coefficients `G(v, v')`, products in the
//! stabilized algebras at `v' = 1`, the truncation `Psi` and `tau`.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use crate::algebra::{add_into, std_tri_terms, Element, Terms};
use crate::coeffs::{d_a, enumerate_st, n_st, region_j_support, to_int, xi_b, Range, StMode, StPair};
use crate::error::{Error, Result};
use crate::permat::{member, AlgebraType, IndexSet, PeriodicMatrix};
use crate::qpoly::{qbinom, qint, BivarPoly, Poly, VPrime};

/// `num / prod_k (v^{2k} - 1)` with `k` running over `den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabCoeff {
    pub num: BivarPoly,
    pub den: Vec<i64>,
}

fn vpow_minus_one(k: i64) -> Poly {
    &Poly::v(2 * k) - &Poly::one()
}

fn den_poly(ks: &[i64]) -> Poly {
    ks.iter().fold(Poly::one(), |acc, &k| &acc * &vpow_minus_one(k))
}

impl StabCoeff {
    pub fn specialize(&self, mode: VPrime) -> Result<Poly> {
        Ok(self.num.specialize(mode).div_exact(&den_poly(&self.den))?)
    }
}

/// `sum_j num_j / den_j` specialized, over a common denominator.
pub fn specialize_sum(list: &[StabCoeff], mode: VPrime) -> Result<Poly> {
    let mut mult: BTreeMap<i64, usize> = BTreeMap::new();
    for c in list {
        let mut m: BTreeMap<i64, usize> = BTreeMap::new();
        for &k in &c.den {
            *m.entry(k).or_default() += 1;
        }
        for (k, v) in m {
            let e = mult.entry(k).or_default();
            *e = (*e).max(v);
        }
    }
    let common: Vec<i64> = mult.iter().flat_map(|(&k, &v)| std::iter::repeat_n(k, v)).collect();
    let mut num = Poly::zero();
    for c in list {
        let mut rest = mult.clone();
        for k in &c.den {
            *rest.get_mut(k).unwrap() -= 1;
        }
        let other: Vec<i64> = rest.iter().flat_map(|(&k, &v)| std::iter::repeat_n(k, v)).collect();
        num += &(&c.num.specialize(mode) * &den_poly(&other));
    }
    Ok(num.div_exact(&den_poly(&common))?)
}

/// `h` of the shifted tuple, from the `d`-difference at shift `p`.
fn h_at(b: &PeriodicMatrix, a: &PeriodicMatrix, s: &PeriodicMatrix, ap: &PeriodicMatrix, p: i64, ty: AlgebraType) -> Rational64 {
    let (bp, ap_, app) = (b.p_shift(p, ty), a.p_shift(p, ty), ap.p_shift(p, ty));
    d_a(&app) - d_a(&ap_) - d_a(&bp) + xi_b(&app, s) * 2
}

/// `G_{S,T}(v, v')`: specializing `v' -> v^{-p}` gives the coefficient
/// contributed by `(S, T)` to `[_pB] * [_pA]`.
pub fn g_bivariate(
    b: &PeriodicMatrix,
    a: &PeriodicMatrix,
    s: &PeriodicMatrix,
    t: &PeriodicMatrix,
    ap: &PeriodicMatrix,
    ty: AlgebraType,
) -> Result<StabCoeff> {
    let n = a.n();
    let r = a.r();
    let (h0, h2, h4) = (h_at(b, a, s, ap, 0, ty), h_at(b, a, s, ap, 2, ty), h_at(b, a, s, ap, 4, ty));
    if h4 - h2 != h2 - h0 {
        return Err(Error::integrity("exponent is not affine in the shift", (b, a, s, t)));
    }
    let gam = to_int((h2 - h0) / 2, "exponent slope")?;
    let h0 = to_int(h0, "exponent")?;
    let mut num = BivarPoly::mono(h0, -gam, 1.into());
    let c = n_st(s, t, Range::Gamma);
    if c.is_zero() {
        return Ok(StabCoeff { num: BivarPoly::zero(), den: vec![] });
    }
    num = num.mul_poly(&c);
    let mut den = Vec::new();
    let shifted_term = |ev: i64| BivarPoly::from_terms([((ev, -2), 1.into()), ((0, 0), (-1).into())]);
    for (i, j) in region_j_support(s) {
        let x = ap.get(i, j);
        let s1 = s.get(i, j);
        let s2 = s.get(-i, -j);
        if i == j && ty.shifted(n, i) {
            for (x, s) in [(x, s1), (x - s1, s2)] {
                for k in 1..=s {
                    num = num.mul(&shifted_term(2 * (x - k + 1)));
                    den.push(k);
                }
            }
        } else {
            num = num.mul_poly(&(&qbinom(x, s1) * &qbinom(x - s1, s2)));
        }
    }
    for i in [0, -r - 1] {
        let x = ap.get(i, i);
        for k in 0..s.get(i, i) {
            if ty.shifted(n, i) {
                num = num.mul(&shifted_term(2 * (x - 2 * k - 1)));
            } else {
                num = num.mul_poly(&(&qint(x - 2 * k - 1) * &vpow_minus_one(1)));
            }
            den.push(k + 1);
        }
    }
    Ok(StabCoeff { num, den })
}

/// All nonzero `G_{S,T}` grouped by target.
pub fn g_terms(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<BTreeMap<PeriodicMatrix, Vec<StabCoeff>>> {
    let alpha = b.tri_alpha().ok_or_else(|| Error::NotTridiagonal(b.clone()))?;
    let mut out: BTreeMap<PeriodicMatrix, Vec<StabCoeff>> = BTreeMap::new();
    if b.co() != a.ro() {
        return Ok(out);
    }
    for StPair { s, t, target } in enumerate_st(a, &alpha, StMode::Shifted(ty)) {
        let g = g_bivariate(b, a, &s, &t, &target, ty)?;
        if !g.num.is_zero() {
            out.entry(target).or_default().push(g);
        }
    }
    Ok(out)
}

/// `[B] * [A]` in the stabilized algebra with the shift pattern of `ty`.
pub fn stable_tri_terms(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<Terms> {
    let mut out = Terms::new();
    for (ap, list) in g_terms(b, a, ty)? {
        let c = specialize_sum(&list, VPrime::One)
            .map_err(|_| Error::integrity("structure constant at v' = 1 is not a Laurent polynomial", (b, a, &ap)))?;
        add_into(&mut out, &ap, &c);
    }
    Ok(out)
}

/// `[B] * [A]` in the stabilized algebra, with the hypotheses checked.
pub fn mult_kdot(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<Element> {
    if b.tri_alpha().is_none() {
        return Err(Error::NotTridiagonal(b.clone()));
    }
    if b.co() != a.ro() {
        return Err(Error::FiberMismatch { co: b.co(), ro: a.ro() });
    }
    for m in [a, b] {
        if !member(m, IndexSet::XiTilde(ty)) {
            return Err(Error::NotMember { matrix: m.clone(), set: IndexSet::XiTilde(ty).to_string() });
        }
    }
    Ok(Element { ty, n: a.n(), d: None, terms: stable_tri_terms(b, a, ty)? })
}

/// Outcome of [`stab_check`] for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct StabReport {
    pub b: PeriodicMatrix,
    pub a: PeriodicMatrix,
    pub p0: i64,
    pub checked: Vec<(i64, bool)>,
    pub ok: bool,
}

pub const P0_CAP: i64 = 16;

fn finite_member(m: &PeriodicMatrix) -> bool {
    m.min_entry() >= 0 && m.get(0, 0) % 2 != 0 && m.get(m.r() + 1, m.r() + 1) % 2 != 0
}

/// Compares the specialized bivariate coefficients with finite products of
/// the p-shifted matrices at `p0, p0 + 2, p0 + 4`, where `p0` is the least
/// even shift making `_pA`, `_pB` and every `_pA_{S,T}` nonnegative.
pub fn stab_check(b: &PeriodicMatrix, a: &PeriodicMatrix, ty: AlgebraType) -> Result<StabReport> {
    let terms = g_terms(b, a, ty)?;
    let mut p0 = None;
    let mut p = 0;
    while p <= P0_CAP {
        if finite_member(&a.p_shift(p, ty))
            && finite_member(&b.p_shift(p, ty))
            && terms.keys().all(|ap| finite_member(&ap.p_shift(p, ty)))
        {
            p0 = Some(p);
            break;
        }
        p += 2;
    }
    let p0 = p0.ok_or_else(|| Error::Resource(format!("no shift up to {P0_CAP} makes all matrices members")))?;
    let mut checked = Vec::new();
    for p in [p0, p0 + 2, p0 + 4] {
        let fin = std_tri_terms(&b.p_shift(p, ty), &a.p_shift(p, ty))?;
        let mut pred = Terms::new();
        for (ap, list) in &terms {
            add_into(&mut pred, &ap.p_shift(p, ty), &specialize_sum(list, VPrime::PowV(p))?);
        }
        checked.push((p, fin == pred));
    }
    let ok = checked.iter().all(|c| c.1);
    Ok(StabReport { b: b.clone(), a: a.clone(), p0, checked, ok })
}

/// `Psi`: keeps the terms indexed by `Xi^ty_{n,d}`.
pub fn psi(x: &Element, d: i64) -> Element {
    let set = IndexSet::Xi(x.ty, d);
    Element {
        ty: x.ty,
        n: x.n,
        d: Some(d),
        terms: x.terms.iter().filter(|(k, _)| member(k, set)).map(|(k, v)| (k.clone(), v.clone())).collect(),
    }
}

/// `[A] -> [^tau A]` from the `ji` to the `ij` stabilized algebra (and back).
pub fn tau_kdot(x: &Element) -> Result<Element> {
    if !matches!(x.ty, AlgebraType::Ji | AlgebraType::Ij) {
        return Err(Error::Incompatible);
    }
    Ok(x.map_keys(x.ty.tau(), |a| a.tau()))
}
