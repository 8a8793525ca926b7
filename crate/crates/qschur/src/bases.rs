//! Monomial chains, the bar involution and canonical bases. All of it runs on
//! top of an [`Algebra`], so the same code serves the finite and the
//! stabilized algebras.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use num_traits::{One, Zero};

use crate::algebra::{add_scaled, Algebra, Element, Level, Terms};
use crate::error::{Error, Result};
use crate::permat::{leq_corner, AlgebraType, IndexVector, PeriodicMatrix};
use crate::qpoly::Poly;

/// Factors `B(0), B(1), ..., B(m)` whose product `[B(m)] ... [B(0)]` is
/// `[A]` plus lower terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorChain {
    pub target: PeriodicMatrix,
    pub mats: Vec<PeriodicMatrix>,
}

/// The chain built from the band diagonals of `a`: `B(0)` is the diagonal
/// matrix of `co(A)`, and `B(i)` is tridiagonal with
/// `alpha_j = sum_{k = j+i-m}^{j} a_{k, j+i}`.
pub fn c_chain(a: &PeriodicMatrix) -> Vec<PeriodicMatrix> {
    let n = a.n();
    let m = a.band();
    let mut mats = vec![PeriodicMatrix::diag(&a.co())];
    let mut cur = a.co();
    for i in 1..=m {
        let al = IndexVector::new((0..n).map(|j| ((j + i - m)..=j).map(|k| a.get(k, j + i)).sum()).collect());
        let b = PeriodicMatrix::tri_from_co(&al, &cur);
        cur = b.ro();
        mats.push(b);
    }
    mats
}

/// `alpha_i alpha_{-i-1} = 0` for all `i`; such matrices are minimal in their fiber.
pub fn is_minimal_tri(b: &PeriodicMatrix) -> bool {
    match b.tri_alpha() {
        Some(al) => (0..b.n()).all(|i| al.at(i) == 0 || al.at(-i - 1) == 0),
        None => false,
    }
}

/// Splits a tridiagonal matrix into minimal tridiagonal factors, rightmost first.
pub fn tri_factors(b: &PeriodicMatrix) -> Result<Vec<PeriodicMatrix>> {
    let n = b.n();
    let al = b.tri_alpha().ok_or_else(|| Error::NotTridiagonal(b.clone()))?;
    let z = (0..n).find(|&i| al.at(i) == 0).ok_or_else(|| Error::BarNotComputable(b.clone()))?;
    let mut segs: Vec<Vec<i64>> = Vec::new();
    let mut cur: Vec<i64> = Vec::new();
    for k in 0..(n - 1) {
        let e = (z + 1 + k).rem_euclid(n);
        if al.at(e) == 0 {
            continue;
        }
        if cur.contains(&(-e - 1).rem_euclid(n)) {
            segs.push(std::mem::take(&mut cur));
        }
        cur.push(e);
    }
    if !cur.is_empty() {
        segs.push(cur);
    }
    let mut mats = Vec::new();
    let mut c = b.co();
    for sg in segs {
        let a = IndexVector::new((0..n).map(|i| if sg.contains(&i) { al.at(i) } else { 0 }).collect());
        let f = PeriodicMatrix::tri_from_co(&a, &c);
        c = f.ro();
        mats.push(f);
    }
    debug_assert_eq!(c, b.ro());
    Ok(mats)
}

fn unique_top(p: &Terms) -> Result<(PeriodicMatrix, Poly)> {
    let tops: Vec<&PeriodicMatrix> = p.keys().filter(|x| p.keys().all(|y| leq_corner(y, x))).collect();
    match tops.as_slice() {
        [t] => Ok(((*t).clone(), p[*t].clone())),
        _ => Err(Error::integrity("product has no unique maximal term", p.keys().collect::<Vec<_>>())),
    }
}

impl Algebra {
    fn diag_ok(&self, m: &PeriodicMatrix) -> bool {
        match self.level {
            Level::Finite => m.min_entry() >= 0,
            Level::Stable(ty) => m
                .entries()
                .iter()
                .all(|&(i, j, v)| v >= 0 || (i == j && ty.shifted(m.n(), i))),
        }
    }

    /// The c-chain of `x` and its expanded product, checked to be `[X] + lower`.
    pub fn chain_expansion(&self, x: &PeriodicMatrix) -> Result<Arc<(Vec<PeriodicMatrix>, Terms)>> {
        if let Some(v) = self.chains.get(x) {
            return Ok(v);
        }
        let mats = c_chain(x);
        if let Some(b) = mats.iter().find(|b| !self.diag_ok(b)) {
            return Err(Error::integrity("chain member leaves the index set", b));
        }
        let mut y = Terms::new();
        y.insert(mats[0].clone(), Poly::one());
        for b in &mats[1..] {
            y = self.lin_tri(b, &y)?;
        }
        if y.get(x) != Some(&Poly::one()) {
            return Err(Error::integrity("chain product does not have leading coefficient 1", x));
        }
        let (ro, co) = (x.ro(), x.co());
        if let Some(c) = y.keys().find(|c| *c != x && !(leq_corner(c, x) && c.ro() == ro && c.co() == co)) {
            return Err(Error::integrity("chain product has a term not below its target", (x, c)));
        }
        let v = Arc::new((mats, y));
        self.chains.insert(x.clone(), v.clone());
        Ok(v)
    }

    /// Chain for `a` whose members lie in the typed index set: the c-chain
    /// regrouped so that edges next to the special nodes move one step left.
    pub fn monomial_chain(&self, a: &PeriodicMatrix, ty: AlgebraType) -> Result<GeneratorChain> {
        let n = a.n();
        let mats = c_chain(a);
        if ty == AlgebraType::C {
            return Ok(GeneratorChain { target: a.clone(), mats });
        }
        let m = mats.len() - 1;
        let nodes = ty.nodes(n);
        let mut xs = vec![mats[0].clone()];
        let mut ys = vec![None];
        for (i, b) in mats.iter().enumerate().skip(1) {
            let i = i as i64;
            let al = b.tri_alpha().expect("chain members are tridiagonal");
            let mut near = BTreeSet::new();
            for &nu in &nodes {
                for e in (nu - i)..nu {
                    near.insert(e.rem_euclid(n));
                }
            }
            let ay = IndexVector::new((0..n).map(|k| if near.contains(&k) { al.at(k) } else { 0 }).collect());
            let ax = IndexVector::new((0..n).map(|k| if near.contains(&k) { 0 } else { al.at(k) }).collect());
            let xi = PeriodicMatrix::tri_from_ro(&ax, &b.ro());
            let yi = PeriodicMatrix::tri_from_co(&ay, &b.co());
            debug_assert_eq!(yi.ro(), xi.co());
            xs.push(xi);
            ys.push(Some(yi));
        }
        let mut out = Vec::new();
        for i in 0..m {
            let mut x = Terms::new();
            x.insert(xs[i].clone(), Poly::one());
            let p = self.lin_tri(ys[i + 1].as_ref().unwrap(), &x)?;
            let (top, c) = unique_top(&p)?;
            if !c.is_one() {
                return Err(Error::integrity("regrouped chain factor has leading coefficient other than 1", (&top, &c)));
            }
            out.push(top);
        }
        out.push(xs[m].clone());
        Ok(GeneratorChain { target: a.clone(), mats: out })
    }

    /// `[B(m)] ... [B(0)]`
    pub fn expand_chain(&self, chain: &GeneratorChain) -> Result<Terms> {
        let mut y = Terms::new();
        y.insert(chain.mats[0].clone(), Poly::one());
        for b in &chain.mats[1..] {
            let mut x = Terms::new();
            x.insert(b.clone(), Poly::one());
            y = self.mult_terms(&x, &y)?;
        }
        Ok(y)
    }

    /// `bar([A])` in the standard basis.
    pub fn bar_std(&self, a: &PeriodicMatrix) -> Result<Arc<Terms>> {
        if let Some(v) = self.bars.get(a) {
            return Ok(v);
        }
        let mut res = Terms::new();
        if is_minimal_tri(a) {
            res.insert(a.clone(), Poly::one());
        } else {
            let (p, bar_p) = if a.is_tridiagonal() {
                let facs = tri_factors(a)?;
                if let Some(f) = facs.iter().find(|f| !self.diag_ok(f)) {
                    return Err(Error::integrity("minimal factor leaves the index set", (a, f)));
                }
                let mut y = Terms::new();
                y.insert(facs[0].clone(), Poly::one());
                for f in &facs[1..] {
                    y = self.lin_tri(f, &y)?;
                }
                (y.clone(), y)
            } else {
                let ch = self.chain_expansion(a)?;
                let mut y = Terms::new();
                y.insert(ch.0[0].clone(), Poly::one());
                for b in &ch.0[1..] {
                    let bb = self.bar_std(b)?;
                    y = self.mult_terms(&bb, &y)?;
                }
                (ch.1.clone(), y)
            };
            let lc = p.get(a).and_then(|c| c.as_monomial()).ok_or_else(|| Error::integrity("leading coefficient is not a unit", a))?;
            let (e0, c0) = lc;
            if !c0.is_one() && !(-&c0).is_one() {
                return Err(Error::integrity("leading coefficient is not a unit", (a, &p[a])));
            }
            res = bar_p;
            for (c, coef) in &p {
                if c == a {
                    continue;
                }
                let bc = self.bar_std(c)?;
                add_scaled(&mut res, &bc, &-coef.bar());
            }
            let inv = Poly::mono(e0, c0);
            res = res.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        }
        if res.get(a) != Some(&Poly::one()) {
            return Err(Error::integrity("bar([A]) does not have leading coefficient 1", a));
        }
        if let Some(c) = res.keys().find(|c| *c != a && !leq_corner(c, a)) {
            return Err(Error::integrity("bar([A]) has a term not below A", (a, c)));
        }
        // bar(bar([A])) = [A]
        let mut twice = Terms::new();
        for (c, coef) in &res {
            let bc = if c == a { Arc::new(res.clone()) } else { self.bar_std(c)? };
            add_scaled(&mut twice, &bc, &coef.bar());
        }
        if twice.len() != 1 || twice.get(a) != Some(&Poly::one()) {
            return Err(Error::integrity("bar is not an involution", a));
        }
        let res = Arc::new(res);
        self.bars.insert(a.clone(), res.clone());
        Ok(res)
    }

    pub fn bar_terms(&self, x: &Terms) -> Result<Terms> {
        let mut out = Terms::new();
        for (a, c) in x {
            add_scaled(&mut out, &*self.bar_std(a)?, &c.bar());
        }
        Ok(out)
    }

    pub fn bar(&self, x: &Element) -> Result<Element> {
        Ok(x.with_terms(self.bar_terms(&x.terms)?))
    }

    /// `{A} = [A] + sum_{A' < A} pi_{A',A} [A']` with `pi in v^{-1} Z[v^{-1}]`.
    pub fn canonical_terms(&self, a: &PeriodicMatrix) -> Result<Arc<Terms>> {
        if let Some(v) = self.canon.get(a) {
            return Ok(v);
        }
        let mut sup = BTreeSet::new();
        sup.insert(a.clone());
        let mut stack = vec![a.clone()];
        while let Some(x) = stack.pop() {
            for c in self.bar_std(&x)?.keys() {
                if sup.insert(c.clone()) {
                    stack.push(c.clone());
                }
            }
        }
        let w = a.band();
        let mut order: Vec<(i64, PeriodicMatrix)> = sup.into_iter().map(|c| (-c.corner_total(w), c)).collect();
        order.sort();
        if order[0].1 != *a {
            return Err(Error::integrity("target is not the largest element of its bar support", a));
        }
        let mut pi = Terms::new();
        pi.insert(a.clone(), Poly::one());
        let mut bars: Vec<(PeriodicMatrix, Arc<Terms>)> = Vec::new();
        bars.push((a.clone(), self.bar_std(a)?));
        for (_, c) in order.iter().skip(1) {
            let mut x = Poly::zero();
            for (cp, bcp) in &bars {
                if let Some(r) = bcp.get(c) {
                    x += &(r * &pi[cp].bar());
                }
            }
            if !x.coeff(0).is_zero() || !(&x + &x.bar()).is_zero() {
                return Err(Error::integrity("canonical basis recursion has no solution", (a, c, &x)));
            }
            let p = x.negative_part();
            if !p.is_zero() {
                pi.insert(c.clone(), p);
                bars.push((c.clone(), self.bar_std(c)?));
            }
        }
        let pi = Arc::new(pi);
        self.canon.insert(a.clone(), pi.clone());
        Ok(pi)
    }

    /// Product of the canonical basis elements of the chain members.
    pub fn monomial_terms(&self, a: &PeriodicMatrix, ty: AlgebraType) -> Result<Terms> {
        let ch = self.monomial_chain(a, ty)?;
        let mut y = (*self.canonical_terms(&ch.mats[0])?).clone();
        for b in &ch.mats[1..] {
            let cb = self.canonical_terms(b)?;
            y = self.mult_terms(&cb, &y)?;
        }
        Ok(y)
    }

    pub fn canonical(&self, a: &PeriodicMatrix, ty: AlgebraType, d: Option<i64>) -> Result<Element> {
        let e = Element::basis(ty, d, a);
        Ok(e.with_terms((*self.canonical_terms(a)?).clone()))
    }

    pub fn monomial_basis_element(&self, a: &PeriodicMatrix, ty: AlgebraType, d: Option<i64>) -> Result<Element> {
        let e = Element::basis(ty, d, a);
        Ok(e.with_terms(self.monomial_terms(a, ty)?))
    }
}

/// Coefficients of `x - bar(x)`, for checking bar invariance.
pub fn bar_defect(alg: &Algebra, x: &Terms) -> Result<Terms> {
    let mut d = x.clone();
    add_scaled(&mut d, &alg.bar_terms(x)?, &-Poly::one());
    Ok(d)
}

/// `true` when every coefficient of `x` other than at `a` lies in `v^{-1} Z[v^{-1}]`
/// and the coefficient at `a` is one.
pub fn is_unitriangular(x: &Terms, a: &PeriodicMatrix) -> bool {
    x.get(a).is_some_and(|c| c.is_one())
        && x.iter().all(|(k, c)| k == a || (leq_corner(k, a) && c.max_exp().is_some_and(|e| e < 0)))
}
