//! Finite field oracle: exhaustive enumeration of subspaces and flags over
//! `F_q`, compared with the closed-form counts at `v^2 = q`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coeffs::{compositions, n_abc, qmultinomial, Range, Seq};
use crate::error::{Error, Result};
use crate::qpoly::{eval_q, qbinom, qfact, qint, Poly};

/// Hard cap on the number of subspaces or flags visited by one query.
pub const ENUM_CAP: u64 = 2_000_000;

/// `F_q^dim`, optionally with a nondegenerate alternating form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqSpace {
    q: u8,
    dim: usize,
    gram: Option<Vec<Vec<u8>>>,
    inv: Vec<u8>,
}

/// A subspace, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqSubspace {
    rows: Vec<Vec<u8>>,
}

/// `0 = W_0 <= W_1 <= ... <= W_m = V`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSpec {
    pub steps: Vec<FqSubspace>,
}

impl FqSubspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }
}

impl FlagSpec {
    pub fn m(&self) -> usize {
        self.steps.len() - 1
    }

    /// Successive codimensions.
    pub fn type_vector(&self) -> Vec<i64> {
        self.steps.windows(2).map(|w| (w[1].dim() - w[0].dim()) as i64).collect()
    }
}

fn is_prime(q: u8) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl FqSpace {
    pub fn new(q: u8, dim: usize) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Resource(format!("q = {q} is not a prime")));
        }
        if dim > 8 {
            return Err(Error::Resource(format!("ambient dimension {dim} exceeds 8")));
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            inv[a as usize] = (1..q).find(|b| (a as u16 * *b as u16) % q as u16 == 1).unwrap();
        }
        Ok(FqSpace { q, dim, gram: None, inv })
    }

    /// Gram matrix `[[0, J], [-J, 0]]` with `J` antidiagonal.
    pub fn symplectic(q: u8, dim: usize) -> Result<Self> {
        if !dim.is_multiple_of(2) {
            return Err(Error::Resource(format!("symplectic dimension {dim} is odd")));
        }
        let mut s = Self::new(q, dim)?;
        let h = dim / 2;
        let mut g = vec![vec![0u8; dim]; dim];
        for i in 0..h {
            g[i][dim - 1 - i] = 1;
            g[dim - 1 - i][i] = q - 1;
        }
        s.gram = Some(g);
        Ok(s)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> Option<&Vec<Vec<u8>>> {
        self.gram.as_ref()
    }

    fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.q as u16 - b as u16) % self.q as u16) as u8
    }

    fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.q as u16) as u8
    }

    fn rref(&self, mut rows: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
        let mut r = 0;
        for c in 0..self.dim {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, p);
            let inv = self.inv[rows[r][c] as usize];
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for k in 0..self.dim {
                        let y = self.mul(f, rows[r][k]);
                        rows[i][k] = self.sub(rows[i][k], y);
                    }
                }
            }
            r += 1;
        }
        rows.truncate(r);
        rows
    }

    pub fn span(&self, vecs: &[Vec<u8>]) -> FqSubspace {
        FqSubspace { rows: self.rref(vecs.to_vec()) }
    }

    pub fn zero(&self) -> FqSubspace {
        FqSubspace { rows: vec![] }
    }

    pub fn whole(&self) -> FqSubspace {
        self.coordinate(self.dim)
    }

    /// `span(e_1, ..., e_k)`
    pub fn coordinate(&self, k: usize) -> FqSubspace {
        FqSubspace {
            rows: (0..k)
                .map(|i| {
                    let mut v = vec![0u8; self.dim];
                    v[i] = 1;
                    v
                })
                .collect(),
        }
    }

    pub fn sum(&self, a: &FqSubspace, b: &FqSubspace) -> FqSubspace {
        FqSubspace { rows: self.rref([a.rows.clone(), b.rows.clone()].concat()) }
    }

    fn sum_dim(&self, a: &FqSubspace, b: &FqSubspace) -> usize {
        self.rref([a.rows.clone(), b.rows.clone()].concat()).len()
    }

    pub fn intersection_dim(&self, a: &FqSubspace, b: &FqSubspace) -> usize {
        a.dim() + b.dim() - self.sum_dim(a, b)
    }

    /// `b <= a`
    pub fn contains(&self, a: &FqSubspace, b: &FqSubspace) -> bool {
        self.sum_dim(a, b) == a.dim()
    }

    /// `{x : <u, x> = 0 for all u in a}` for the standard pairing.
    pub fn annihilator(&self, a: &FqSubspace) -> FqSubspace {
        let pivots: Vec<usize> = a.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        let mut out = Vec::new();
        for f in (0..self.dim).filter(|c| !pivots.contains(c)) {
            let mut x = vec![0u8; self.dim];
            x[f] = 1;
            for (row, &p) in a.rows.iter().zip(&pivots) {
                x[p] = self.sub(0, row[f]);
            }
            out.push(x);
        }
        FqSubspace { rows: self.rref(out) }
    }

    pub fn intersection(&self, a: &FqSubspace, b: &FqSubspace) -> FqSubspace {
        self.annihilator(&self.sum(&self.annihilator(a), &self.annihilator(b)))
    }

    fn form(&self, x: &[u8], y: &[u8]) -> u8 {
        let g = self.gram.as_ref().expect("no symplectic form");
        let mut acc = 0u8;
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                if g[i][j] != 0 && y[j] != 0 {
                    acc = self.add(acc, self.mul(x[i], self.mul(g[i][j], y[j])));
                }
            }
        }
        acc
    }

    /// Orthogonal complement for the symplectic form.
    pub fn perp(&self, a: &FqSubspace) -> FqSubspace {
        let g = self.gram.as_ref().expect("no symplectic form");
        let rows: Vec<Vec<u8>> = a
            .rows
            .iter()
            .map(|r| {
                (0..self.dim)
                    .map(|j| (0..self.dim).fold(0u8, |acc, i| self.add(acc, self.mul(r[i], g[i][j]))))
                    .collect()
            })
            .collect();
        self.annihilator(&FqSubspace { rows: self.rref(rows) })
    }

    pub fn is_isotropic(&self, a: &FqSubspace) -> bool {
        a.rows.iter().enumerate().all(|(i, x)| a.rows[i + 1..].iter().all(|y| self.form(x, y) == 0))
    }

    fn is_coisotropic(&self, a: &FqSubspace) -> bool {
        self.contains(a, &self.perp(a))
    }

    /// Vectors of `hi` completing a basis of `lo` to one of `hi`.
    fn complement(&self, lo: &FqSubspace, hi: &FqSubspace) -> Vec<Vec<u8>> {
        let mut cur = lo.clone();
        let mut out = Vec::new();
        for v in &hi.rows {
            let next = self.sum(&cur, &FqSubspace { rows: vec![v.clone()] });
            if next.dim() > cur.dim() {
                out.push(v.clone());
                cur = next;
            }
        }
        out
    }

    /// Calls `f` on every `U` with `lo <= U <= hi` and `dim U = dim lo + k`.
    pub fn for_each_between(
        &self,
        lo: &FqSubspace,
        hi: &FqSubspace,
        k: usize,
        f: &mut dyn FnMut(&FqSubspace) -> Result<()>,
    ) -> Result<()> {
        let comp = self.complement(lo, hi);
        let c = comp.len();
        if k > c {
            return Ok(());
        }
        let total = eval_q(&qbinom(c as i64, k as i64), self.q as u64);
        if total > Ratio::from_integer(BigInt::from(ENUM_CAP)) {
            return Err(Error::Resource(format!("{total} subspaces exceed the enumeration cap")));
        }
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| ((pivots[i] + 1)..c).filter(|l| !pivots.contains(l)).map(move |l| (i, l)))
                .collect();
            let mut vals = vec![0u8; free.len()];
            loop {
                let mut coef = vec![vec![0u8; c]; k];
                for i in 0..k {
                    coef[i][pivots[i]] = 1;
                }
                for (&(i, l), &x) in free.iter().zip(&vals) {
                    coef[i][l] = x;
                }
                let mut rows = lo.rows.clone();
                for row in &coef {
                    let mut v = vec![0u8; self.dim];
                    for (l, &x) in row.iter().enumerate() {
                        if x != 0 {
                            for (t, &y) in comp[l].iter().enumerate() {
                                v[t] = self.add(v[t], self.mul(x, y));
                            }
                        }
                    }
                    rows.push(v);
                }
                f(&FqSubspace { rows: self.rref(rows) })?;
                let mut pos = 0;
                while pos < vals.len() {
                    vals[pos] += 1;
                    if vals[pos] < self.q {
                        break;
                    }
                    vals[pos] = 0;
                    pos += 1;
                }
                if pos == vals.len() {
                    break;
                }
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                if pivots[i] < c - k + i {
                    pivots[i] += 1;
                    for t in i + 1..k {
                        pivots[t] = pivots[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Calls `f` on every `U` with `lo <= U <= hi`.
    pub fn for_each_between_all(
        &self,
        lo: &FqSubspace,
        hi: &FqSubspace,
        f: &mut dyn FnMut(&FqSubspace) -> Result<()>,
    ) -> Result<()> {
        for k in 0..=(hi.dim() - lo.dim()) {
            self.for_each_between(lo, hi, k, f)?;
        }
        Ok(())
    }

    /// Calls `f` on every flag `F_1 <= ... <= F_m = V` of type `t`.
    pub fn for_each_flag(&self, t: &[usize], f: &mut dyn FnMut(&[FqSubspace]) -> Result<()>) -> Result<()> {
        if t.iter().sum::<usize>() != self.dim {
            return Ok(());
        }
        let parts: Vec<i64> = t.iter().map(|&x| x as i64).collect();
        let total = eval_q(&qmultinomial(self.dim as i64, &parts), self.q as u64);
        if total > Ratio::from_integer(BigInt::from(ENUM_CAP)) {
            return Err(Error::Resource(format!("{total} flags exceed the enumeration cap")));
        }
        let whole = self.whole();
        fn rec(
            sp: &FqSpace,
            t: &[usize],
            whole: &FqSubspace,
            cur: &mut Vec<FqSubspace>,
            f: &mut dyn FnMut(&[FqSubspace]) -> Result<()>,
        ) -> Result<()> {
            if cur.len() == t.len() + 1 {
                return f(cur);
            }
            let last = cur.last().unwrap().clone();
            let k = t[cur.len() - 1];
            sp.for_each_between(&last, whole, k, &mut |u| {
                cur.push(u.clone());
                let res = rec(sp, t, whole, cur, f);
                cur.pop();
                res
            })
        }
        rec(self, t, &whole, &mut vec![self.zero()], f)
    }

    pub fn enum_subspaces(&self, k: usize) -> Result<Vec<FqSubspace>> {
        let mut out = Vec::new();
        self.for_each_between(&self.zero(), &self.whole(), k, &mut |u| {
            out.push(u.clone());
            Ok(())
        })?;
        Ok(out)
    }

    fn random_vector(&self, rng: &mut ChaCha8Rng) -> Vec<u8> {
        (0..self.dim).map(|_| rng.gen_range(0..self.q)).collect()
    }

    /// A uniformly random ordered basis of `V`.
    pub fn random_basis(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
        let mut basis: Vec<Vec<u8>> = Vec::new();
        while basis.len() < self.dim {
            let v = self.random_vector(rng);
            let mut next = basis.clone();
            next.push(v.clone());
            if self.rref(next).len() > basis.len() {
                basis.push(v);
            }
        }
        basis
    }

    /// Flag of the given type spanned by initial segments of a random basis.
    pub fn random_flag(&self, w: &[i64], rng: &mut ChaCha8Rng) -> FlagSpec {
        let basis = self.random_basis(rng);
        self.flag_from_basis(&basis, w)
    }

    fn flag_from_basis(&self, basis: &[Vec<u8>], w: &[i64]) -> FlagSpec {
        let mut steps = vec![self.zero()];
        let mut k = 0usize;
        for &x in w {
            k += x as usize;
            steps.push(self.span(&basis[..k]));
        }
        FlagSpec { steps }
    }

    /// Isotropic flag with `m = 2r + 1` steps: `W_i = span(e_1, ..., e_{k_i})`
    /// for `i <= r` and `W_{m-i} = W_i^perp`.
    pub fn isotropic_flag(&self, ks: &[usize]) -> FlagSpec {
        let r = ks.len();
        let mut steps = vec![self.zero()];
        steps.extend(ks.iter().map(|&k| self.coordinate(k)));
        for i in (0..r).rev() {
            steps.push(self.coordinate(self.dim - ks[i]));
        }
        steps.push(self.whole());
        FlagSpec { steps }
    }

    pub fn random_isotropic(&self, k: usize, rng: &mut ChaCha8Rng) -> FqSubspace {
        let mut cur = self.zero();
        while cur.dim() < k {
            let v = FqSubspace { rows: self.rref(vec![self.random_vector(rng)]) };
            if v.dim() == 1 && self.contains(&self.perp(&cur), &v) && !self.contains(&cur, &v) {
                cur = self.sum(&cur, &v);
            }
        }
        cur
    }

    fn random_subspace_of(&self, hi: &FqSubspace, k: usize, rng: &mut ChaCha8Rng) -> FqSubspace {
        let mut cur = self.zero();
        while cur.dim() < k {
            let mut v = vec![0u8; self.dim];
            for row in &hi.rows {
                let x = rng.gen_range(0..self.q);
                for (t, &y) in row.iter().enumerate() {
                    v[t] = self.add(v[t], self.mul(x, y));
                }
            }
            cur = self.sum(&cur, &FqSubspace { rows: vec![v] });
        }
        cur
    }

    /// `dim(U cap W_i) - dim(U cap W_{i-1})` for `i = 1..m`.
    pub fn steps(&self, u: &FqSubspace, flag: &[FqSubspace]) -> Vec<i64> {
        let d: Vec<i64> = flag.iter().map(|w| self.intersection_dim(u, w) as i64).collect();
        d.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

// ---------------------------------------------------------------------------
// closed forms

fn binom0(a: i64, b: i64) -> Poly {
    if a < 0 || b < 0 {
        Poly::zero()
    } else {
        qbinom(a, b)
    }
}

fn seq(x: &[i64]) -> Seq {
    x.iter().enumerate().filter(|e| *e.1 != 0).map(|(j, &v)| (j as i64 + 1, v)).collect()
}

/// `#Y_a(W) = q^{sum_{i>k} a_i (w_k - a_k)} prod [w_i, a_i]`
pub fn ya_closed(w: &[i64], a: &[i64]) -> Poly {
    let m = w.len();
    let mut e = 0;
    for i in 0..m {
        for k in 0..i {
            e += a[i] * (w[k] - a[k]);
        }
    }
    (0..m).fold(Poly::v(2 * e), |acc, i| &acc * &binom0(w[i], a[i]))
}

/// `#F^W_{t, sigma}`, with `sigma[i][j]` indexed by the steps of `W` and `F`.
pub fn ft_closed(w: &[i64], sigma: &[Vec<i64>]) -> Poly {
    let mut e = 0;
    for (i, row) in sigma.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            for (k, row2) in sigma.iter().enumerate().take(i) {
                for &y in &row2[j + 1..] {
                    e += x * y;
                }
                let _ = k;
            }
        }
    }
    let mut p = Poly::v(2 * e);
    for (i, row) in sigma.iter().enumerate() {
        let mut den = Poly::one();
        for &x in row {
            den = &den * &qfact(x);
        }
        p = &p * &qfact(w[i]).div_exact(&den).expect("multinomial");
    }
    p
}

/// `c[i][j]` for `i = 1, 2, 3` (stored at `0, 1, 2`) and `j = 1..m`.
pub type CMatrix = [Vec<i64>; 3];

/// `#Y_{s,t,t'}(V, V')`
pub fn nyst_closed(c: &CMatrix, s: &[i64], t: &[i64], tp: &[i64], range: Range) -> Poly {
    let m = s.len();
    let mut e = 0;
    for j in 0..m {
        for l in 0..j {
            e += (c[1][j] - c[0][j] - s[j]) * s[l] + tp[j] * (c[2][l] - c[1][l] - tp[l]);
        }
    }
    let mut p = &Poly::v(2 * e) * &n_abc(&seq(s), &seq(t), &seq(tp), range);
    for j in 0..m {
        p = &p * &(&binom0(c[2][j] - c[1][j], tp[j]) * &binom0(c[1][j] - c[0][j], s[j]));
    }
    p
}

/// `n(s, t, t')` on sequences indexed from 1.
pub fn n_seq(s: &[i64], t: &[i64], tp: &[i64], range: Range) -> Poly {
    n_abc(&seq(s), &seq(t), &seq(tp), range)
}

/// `prod_{0 <= i < u} [w - 2i] / [i + 1]`
fn middle(w: i64, u: i64) -> Poly {
    if u < 0 {
        return Poly::zero();
    }
    let num = (0..u).fold(Poly::one(), |acc, i| &acc * &qint(w - 2 * i));
    num.div_exact(&qfact(u)).expect("isotropic count")
}

/// `#Y_j(V, W; u)`, `j` counted from 1, `m = 2r + 1`.
pub fn yj_closed(w: &[i64], j: usize, u: i64) -> Poly {
    let r = (w.len() - 1) / 2;
    let below: i64 = w[..j - 1].iter().sum();
    let wj = w[j - 1];
    if j < r + 1 {
        &Poly::v(2 * u * below) * &binom0(wj, u)
    } else if j == r + 1 {
        &Poly::v(2 * u * below) * &middle(wj, u)
    } else {
        &Poly::v(2 * (u * below - u * (u - 1) / 2)) * &binom0(wj, u)
    }
}

/// `#Y^sp_a(W)`
pub fn yspa_closed(w: &[i64], a: &[i64]) -> Poly {
    let m = w.len();
    let r = (m - 1) / 2;
    let mut e = 0;
    for j in 0..m {
        for l in j + 1..m {
            e += (w[j] - a[j]) * a[l];
        }
    }
    // 1-based indices j > l with j + l > m + 1, here (j + 1) + (l + 1) > m + 1
    for j in 0..m {
        for l in 0..j {
            if j + l + 2 > m + 1 {
                e -= a[j] * a[m - 1 - l];
            }
        }
    }
    for &x in &a[r + 1..] {
        e -= x * (x - 1) / 2;
    }
    let mut p = Poly::v(2 * e);
    for j in 0..r {
        p = &p * &binom0(w[j], a[j]);
    }
    for j in r + 1..m {
        p = &p * &binom0(w[j] - a[m - 1 - j], a[j]);
    }
    &p * &middle(w[r], a[r])
}

/// `#Y^sp_{s,t,t'}(V, V')`
pub fn nysp_closed(c: &CMatrix, s: &[i64], t: &[i64], tp: &[i64]) -> Poly {
    let m = s.len();
    let r = (m - 1) / 2;
    let mut e = 0;
    for j in 0..m {
        for l in 0..j {
            e += (c[1][j] - c[0][j] - s[j]) * s[l];
        }
        for l in j + 1..m {
            e += (c[2][j] - c[1][j] - tp[j]) * tp[l];
        }
        for l in 0..j {
            if j + l + 2 > m + 1 {
                e -= tp[j] * tp[m - 1 - l];
            }
        }
    }
    for &x in &tp[r + 1..] {
        e -= x * (x - 1) / 2;
    }
    let mut p = &Poly::v(2 * e) * &n_seq(s, t, tp, Range::Gamma);
    for j in 0..m {
        p = &p * &binom0(c[1][j] - c[0][j], s[j]);
    }
    for j in 0..r {
        p = &p * &binom0(c[2][j] - c[1][j], tp[j]);
    }
    for j in r + 1..m {
        p = &p * &binom0(c[2][j] - c[1][j] - tp[m - 1 - j], tp[j]);
    }
    &p * &middle(c[2][r] - c[1][r], tp[r])
}

// ---------------------------------------------------------------------------
// Y_{s,t,t'} classification

/// The data `(V, V')` of a `Y_{s,t,t'}` instance.
pub struct YInstance {
    pub v: [FqSubspace; 3],
    pub vp: FlagSpec,
    a: Vec<FqSubspace>,
    b: Vec<FqSubspace>,
    pub c: CMatrix,
}

/// `(s, t, t')`
pub type Stt = (Vec<i64>, Vec<i64>, Vec<i64>);

impl YInstance {
    pub fn new(sp: &FqSpace, v: [FqSubspace; 3], vp: FlagSpec) -> Self {
        let a = vp.steps.iter().map(|x| sp.intersection(&v[1], x)).collect();
        let b = vp.steps.iter().map(|x| sp.sum(&v[1], &sp.intersection(&v[2], x))).collect();
        let c = [0, 1, 2].map(|i| sp.steps(&v[i], &vp.steps));
        YInstance { v, vp, a, b, c }
    }

    /// The unique `(s, t, t')` with `U` in `Y_{s,t,t'}`.
    pub fn classify(&self, sp: &FqSpace, u: &FqSubspace) -> Stt {
        let m = self.vp.m();
        let x = sp.steps(u, &self.a);
        let tp = sp.steps(u, &self.b);
        let y = sp.steps(u, &self.vp.steps);
        let s: Vec<i64> = (0..m).map(|j| self.c[1][j] - x[j]).collect();
        let t = (0..m).map(|j| y[j] - self.c[1][j] + s[j]).collect();
        (s, t, tp)
    }

    /// `(~V, ~V')` through annihilators in the dual space.
    pub fn dual(&self, sp: &FqSpace) -> YInstance {
        let v = [2, 1, 0].map(|i| sp.annihilator(&self.v[i]));
        let steps = self.vp.steps.iter().rev().map(|x| sp.annihilator(x)).collect();
        YInstance::new(sp, v, FlagSpec { steps })
    }

    /// `(~V, ~V')` through the symplectic form.
    pub fn perp_dual(&self, sp: &FqSpace) -> YInstance {
        let v = [2, 1, 0].map(|i| sp.perp(&self.v[i]));
        let steps = self.vp.steps.iter().rev().map(|x| sp.perp(x)).collect();
        YInstance::new(sp, v, FlagSpec { steps })
    }

    /// All `(s, t, t')` for which the closed form may be nonzero.
    pub fn box_keys(&self) -> Vec<Stt> {
        let m = self.vp.m();
        let s_caps: Vec<i64> = (0..m).map(|j| self.c[1][j] - self.c[0][j]).collect();
        let tp_caps: Vec<i64> = (0..m).map(|j| self.c[2][j] - self.c[1][j]).collect();
        let mut out = Vec::new();
        for s in boxes(&s_caps) {
            for tp in boxes(&tp_caps) {
                let tot: i64 = tp.iter().sum();
                for t in compositions(tot, &vec![tot; m]) {
                    out.push((s.clone(), t, tp.clone()));
                }
            }
        }
        out
    }

    fn describe(&self) -> String {
        let d = |x: &FqSubspace| x.dim();
        format!(
            "dims V = ({}, {}, {}), V' type {:?}, c1 = {:?}, c2 = {:?}, c3 = {:?}",
            d(&self.v[0]),
            d(&self.v[1]),
            d(&self.v[2]),
            self.vp.type_vector(),
            self.c[0],
            self.c[1],
            self.c[2]
        )
    }
}

fn boxes(caps: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=c.max(-1)).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn flat(x: &[i64]) -> Vec<i64> {
    x.iter().rev().copied().collect()
}

/// `(t'^flat, s'^flat, s^flat)` with `s' = s + t' - t`.
pub fn dual_key(k: &Stt) -> Stt {
    let (s, t, tp) = k;
    let sp: Vec<i64> = (0..s.len()).map(|j| s[j] + tp[j] - t[j]).collect();
    (flat(tp), flat(&sp), flat(s))
}

// ---------------------------------------------------------------------------
// suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    /// Subspace counts against Gaussian binomials.
    Sub,
    Ya,
    #[serde(rename = "FT")]
    Ft,
    Ystt,
    #[serde(rename = "YWT")]
    Ywt,
    Yj,
    Ysp,
    #[serde(rename = "dual")]
    Dual,
}

impl Suite {
    pub const ALL: [Suite; 8] = [Suite::Sub, Suite::Ya, Suite::Ft, Suite::Ystt, Suite::Ywt, Suite::Yj, Suite::Ysp, Suite::Dual];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sub => "Sub",
            Suite::Ya => "Ya",
            Suite::Ft => "FT",
            Suite::Ystt => "Ystt",
            Suite::Ywt => "YWT",
            Suite::Yj => "Yj",
            Suite::Ysp => "Ysp",
            Suite::Dual => "dual",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// One closed form compared with one enumerated count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCase {
    pub suite: Suite,
    pub q: u8,
    pub instance: String,
    pub params: String,
    pub enumerated: u64,
    pub closed_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_form: Option<String>,
    #[serde(skip)]
    pub key: Option<Stt>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub q: u8,
    pub max_dim: usize,
    pub checked: usize,
    pub mismatches: usize,
    pub cases: Vec<OracleCase>,
}

impl SuiteReport {
    /// Integrity error carrying the first mismatch, if any.
    pub fn verify(&self) -> Result<()> {
        match self.cases.iter().find(|c| !c.ok) {
            Some(c) => Err(Error::integrity(format!("{} count disagrees with its closed form", self.suite), c)),
            None => Ok(()),
        }
    }
}

fn value(p: &Poly, q: u8) -> Ratio<BigInt> {
    eval_q(p, q as u64)
}

fn render(x: &Ratio<BigInt>) -> String {
    x.to_string()
}

struct Collector {
    suite: Suite,
    q: u8,
    cases: Vec<OracleCase>,
}

impl Collector {
    fn push(&mut self, instance: &str, params: String, enumerated: u64, closed: &Poly) {
        let val = value(closed, self.q);
        self.cases.push(OracleCase {
            suite: self.suite,
            q: self.q,
            instance: instance.to_string(),
            params,
            enumerated,
            ok: val == Ratio::from_integer(BigInt::from(enumerated)),
            closed_form: render(&val),
            printed_form: None,
            key: None,
        });
    }
}

fn rng_for(suite: Suite, q: u8, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((suite as u64) << 32) ^ ((q as u64) << 40))
}

/// Compositions of `n` into `m` positive parts.
fn positive_compositions(n: i64, m: usize) -> Vec<Vec<i64>> {
    if m == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    compositions(n - m as i64, &vec![n; m]).into_iter().map(|c| c.into_iter().map(|x| x + 1).collect()).collect()
}

fn histogram<K: Ord + Clone>(
    sp: &FqSpace,
    lo: &FqSubspace,
    hi: &FqSubspace,
    mut key: impl FnMut(&FqSubspace) -> Option<K>,
) -> Result<BTreeMap<K, u64>> {
    let mut h = BTreeMap::new();
    sp.for_each_between_all(lo, hi, &mut |u| {
        if let Some(k) = key(u) {
            *h.entry(k).or_default() += 1;
        }
        Ok(())
    })?;
    Ok(h)
}

fn sub_suite(q: u8, max_dim: usize, col: &mut Collector) -> Result<()> {
    for n in 0..=max_dim {
        let sp = FqSpace::new(q, n)?;
        for k in 0..=n {
            let mut count = 0u64;
            let mut seen = BTreeSet::new();
            sp.for_each_between(&sp.zero(), &sp.whole(), k, &mut |u| {
                count += 1;
                if u.dim() == k {
                    seen.insert(u.clone());
                }
                Ok(())
            })?;
            let distinct = if seen.len() as u64 == count { count } else { u64::MAX };
            col.push(&format!("F_{q}^{n}"), format!("k = {k}"), distinct, &qbinom(n as i64, k as i64));
        }
    }
    Ok(())
}

fn ya_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    let mut rng = rng_for(Suite::Ya, q, seed);
    for n in 0..=max_dim {
        let sp = FqSpace::new(q, n)?;
        for m in 1..=3usize {
            for w in positive_compositions(n as i64, m) {
                let flag = sp.random_flag(&w, &mut rng);
                let h = histogram(&sp, &sp.zero(), &sp.whole(), |u| Some(sp.steps(u, &flag.steps)))?;
                let inst = format!("F_{q}^{n}, W of type {w:?}");
                for a in boxes(&w) {
                    let got = h.get(&a).copied().unwrap_or(0);
                    col.push(&inst, format!("a = {a:?}"), got, &ya_closed(&w, &a));
                }
            }
        }
    }
    Ok(())
}

/// Nonnegative integer matrices with the given row and column sums.
fn margin_matrices(rows: &[i64], cols: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    fn rec(i: usize, rows: &[i64], left: &mut Vec<i64>, cur: &mut Vec<Vec<i64>>, out: &mut Vec<Vec<Vec<i64>>>) {
        if i == rows.len() {
            if left.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        for row in compositions(rows[i], left) {
            for (l, x) in left.iter_mut().zip(&row) {
                *l -= x;
            }
            cur.push(row.clone());
            rec(i + 1, rows, left, cur, out);
            cur.pop();
            for (l, x) in left.iter_mut().zip(&row) {
                *l += x;
            }
        }
    }
    rec(0, rows, &mut cols.to_vec(), &mut vec![], &mut out);
    out
}

/// Flags per `FT` instance; larger flag varieties are skipped.
const FT_FLAG_BUDGET: u64 = 20_000;

fn ft_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    let mut rng = rng_for(Suite::Ft, q, seed);
    for n in 0..=max_dim {
        let sp = FqSpace::new(q, n)?;
        let ws: Vec<(Vec<i64>, FlagSpec)> = (1..=3usize)
            .flat_map(|m| positive_compositions(n as i64, m))
            .map(|w| {
                let f = sp.random_flag(&w, &mut rng);
                (w, f)
            })
            .collect();
        for m2 in 1..=3usize {
            for t in positive_compositions(n as i64, m2) {
                let size = value(&qmultinomial(n as i64, &t), q);
                if size > Ratio::from_integer(BigInt::from(FT_FLAG_BUDGET)) {
                    continue;
                }
                let tu: Vec<usize> = t.iter().map(|&x| x as usize).collect();
                let mut hs: Vec<BTreeMap<Vec<Vec<i64>>, u64>> = vec![BTreeMap::new(); ws.len()];
                sp.for_each_flag(&tu, &mut |fl| {
                    for (h, (_, wf)) in hs.iter_mut().zip(&ws) {
                        let d: Vec<Vec<i64>> = wf
                            .steps
                            .iter()
                            .map(|wi| fl.iter().map(|fj| sp.intersection_dim(wi, fj) as i64).collect())
                            .collect();
                        let sigma: Vec<Vec<i64>> = (1..d.len())
                            .map(|i| (1..fl.len()).map(|j| d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1]).collect())
                            .collect();
                        *h.entry(sigma).or_default() += 1;
                    }
                    Ok(())
                })?;
                for (h, (w, _)) in hs.iter().zip(&ws) {
                    let inst = format!("F_{q}^{n}, W of type {w:?}, F of type {t:?}");
                    for sigma in margin_matrices(w, &t) {
                        let got = h.get(&sigma).copied().unwrap_or(0);
                        col.push(&inst, format!("sigma = {sigma:?}"), got, &ft_closed(w, &sigma));
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_y_instance(sp: &FqSpace, rng: &mut ChaCha8Rng, zero_v1: bool) -> YInstance {
    let n = sp.dim();
    let mut d = [rng.gen_range(0..=n), rng.gen_range(0..=n), rng.gen_range(0..=n)];
    d.sort();
    if zero_v1 {
        d[0] = 0;
    }
    let basis = sp.random_basis(rng);
    let v = d.map(|k| sp.span(&basis[..k]));
    let m = rng.gen_range(1..=3usize);
    let mut cuts: Vec<i64> = (0..m - 1).map(|_| rng.gen_range(0..=n as i64)).collect();
    cuts.sort();
    cuts.insert(0, 0);
    cuts.push(n as i64);
    let w: Vec<i64> = cuts.windows(2).map(|x| x[1] - x[0]).collect();
    YInstance::new(sp, v, sp.random_flag(&w, rng))
}

fn y_instances(q: u8, max_dim: usize, suite: Suite, seed: u64) -> Result<Vec<(FqSpace, YInstance)>> {
    let mut rng = rng_for(suite, q, seed);
    let mut out = Vec::new();
    for n in 1..=max_dim {
        let sp = FqSpace::new(q, n)?;
        let count = match (q, n) {
            (_, 1..=3) => 10,
            (2, _) | (_, 4) => 8,
            _ => 4,
        };
        for i in 0..count {
            let inst = random_y_instance(&sp, &mut rng, suite == Suite::Ywt || i % 2 == 0);
            out.push((sp.clone(), inst));
        }
    }
    Ok(out)
}

fn key_str(k: &Stt) -> String {
    format!("s = {:?}, t = {:?}, t' = {:?}", k.0, k.1, k.2)
}

fn ystt_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    for (sp, inst) in y_instances(q, max_dim, Suite::Ystt, seed)? {
        let h = histogram(&sp, &inst.v[0], &inst.v[2], |u| Some(inst.classify(&sp, u)))?;
        let mut keys: BTreeSet<Stt> = inst.box_keys().into_iter().collect();
        keys.extend(h.keys().cloned());
        let name = format!("F_{q}^{}, {}", sp.dim(), inst.describe());
        for k in keys {
            let got = h.get(&k).copied().unwrap_or(0);
            let closed = if k.0.iter().chain(&k.1).chain(&k.2).any(|&x| x < 0) {
                Poly::zero()
            } else {
                nyst_closed(&inst.c, &k.0, &k.1, &k.2, Range::Gamma)
            };
            col.push(&name, key_str(&k), got, &closed);
        }
    }
    Ok(())
}

/// Fibers of `U -> (U cap V_2, (U + V_2)/V_2)` against `n(s, t, t')`.
fn ywt_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    for (sp, inst) in y_instances(q, max_dim, Suite::Ywt, seed)? {
        let mut fibers: HashMap<(Stt, FqSubspace, FqSubspace), u64> = HashMap::new();
        sp.for_each_between_all(&inst.v[0], &inst.v[2], &mut |u| {
            let k = inst.classify(&sp, u);
            let w = sp.intersection(u, &inst.v[1]);
            let t = sp.sum(u, &inst.v[1]);
            *fibers.entry((k, w, t)).or_default() += 1;
            Ok(())
        })?;
        let mut sizes: BTreeMap<Stt, BTreeSet<u64>> = BTreeMap::new();
        for ((k, _, _), c) in fibers {
            sizes.entry(k).or_default().insert(c);
        }
        let name = format!("F_{q}^{}, {}", sp.dim(), inst.describe());
        for (k, cs) in sizes {
            let gamma = n_seq(&k.0, &k.1, &k.2, Range::Gamma);
            let alpha = n_seq(&k.0, &k.1, &k.2, Range::Alpha);
            for c in cs {
                col.push(&name, key_str(&k), c, &gamma);
                let case = col.cases.last_mut().unwrap();
                case.printed_form = Some(render(&value(&alpha, q)));
                case.key = Some(k.clone());
            }
        }
    }
    Ok(())
}

fn symplectic_dims(max_dim: usize) -> impl Iterator<Item = usize> {
    (2..=max_dim.min(8)).step_by(2)
}

/// `k_1 <= ... <= k_r <= h` for `r <= 2`.
fn isotropic_types(h: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for a in 0..=h {
        out.push(vec![a]);
        for b in a..=h {
            out.push(vec![a, b]);
        }
    }
    out
}

fn yj_suite(q: u8, max_dim: usize, col: &mut Collector) -> Result<()> {
    for n in symplectic_dims(max_dim) {
        let sp = FqSpace::symplectic(q, n)?;
        for ks in isotropic_types(n / 2) {
            let flag = sp.isotropic_flag(&ks);
            let w = flag.type_vector();
            let m = flag.m();
            let mut h: BTreeMap<(usize, i64), u64> = BTreeMap::new();
            sp.for_each_between_all(&sp.zero(), &sp.whole(), &mut |u| {
                if sp.is_isotropic(u) {
                    for j in 1..=m {
                        if sp.contains(&flag.steps[j], u) && sp.intersection_dim(u, &flag.steps[j - 1]) == 0 {
                            *h.entry((j, u.dim() as i64)).or_default() += 1;
                        }
                    }
                }
                Ok(())
            })?;
            let inst = format!("F_{q}^{n} symplectic, isotropic W of type {w:?}");
            for j in 1..=m {
                for u in 0..=w[j - 1] {
                    let got = h.get(&(j, u)).copied().unwrap_or(0);
                    col.push(&inst, format!("j = {j}, u = {u}"), got, &yj_closed(&w, j, u));
                }
            }
        }
    }
    Ok(())
}

fn sp_instances(q: u8, max_dim: usize, seed: u64) -> Result<Vec<(FqSpace, YInstance)>> {
    let mut rng = rng_for(Suite::Ysp, q, seed);
    let mut out = Vec::new();
    for n in symplectic_dims(max_dim) {
        let sp = FqSpace::symplectic(q, n)?;
        let count = if n <= 4 { 10 } else { 5 };
        let types = isotropic_types(n / 2);
        for _ in 0..count {
            let ks = &types[rng.gen_range(0..types.len())];
            let vp = sp.isotropic_flag(ks);
            let d2 = rng.gen_range(0..=n / 2);
            let v2 = sp.random_isotropic(d2, &mut rng);
            let v1 = sp.random_subspace_of(&v2, rng.gen_range(0..=d2), &mut rng);
            let v3 = sp.perp(&v2);
            out.push((sp.clone(), YInstance::new(&sp, [v1, v2, v3], vp)));
        }
    }
    Ok(out)
}

fn ysp_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    for n in symplectic_dims(max_dim) {
        let sp = FqSpace::symplectic(q, n)?;
        for ks in isotropic_types(n / 2) {
            let flag = sp.isotropic_flag(&ks);
            let w = flag.type_vector();
            let h = histogram(&sp, &sp.zero(), &sp.whole(), |u| sp.is_isotropic(u).then(|| sp.steps(u, &flag.steps)))?;
            let inst = format!("F_{q}^{n} symplectic, isotropic W of type {w:?}");
            for a in boxes(&w) {
                let got = h.get(&a).copied().unwrap_or(0);
                col.push(&inst, format!("a = {a:?}"), got, &yspa_closed(&w, &a));
            }
        }
    }
    for (sp, inst) in sp_instances(q, max_dim, seed)? {
        let h = histogram(&sp, &inst.v[0], &inst.v[2], |u| sp.is_isotropic(u).then(|| inst.classify(&sp, u)))?;
        let mut keys: BTreeSet<Stt> = inst.box_keys().into_iter().collect();
        keys.extend(h.keys().cloned());
        let name = format!("F_{q}^{} symplectic, V_3 = V_2^perp, {}", sp.dim(), inst.describe());
        for k in keys {
            let got = h.get(&k).copied().unwrap_or(0);
            let closed = if k.0.iter().chain(&k.1).chain(&k.2).any(|&x| x < 0) {
                Poly::zero()
            } else {
                nysp_closed(&inst.c, &k.0, &k.1, &k.2)
            };
            col.push(&name, key_str(&k), got, &closed);
        }
    }
    Ok(())
}

/// Both sides of a duality bijection as one case: the closed form slot holds
/// the count on the dual side, so the verdict is equality of the two counts.
fn push_pair(col: &mut Collector, inst: &str, params: String, lhs: u64, rhs: u64) {
    col.push(inst, params, lhs, &Poly::constant(BigInt::from(rhs)));
}

fn dual_suite(q: u8, max_dim: usize, seed: u64, col: &mut Collector) -> Result<()> {
    for (sp, inst) in y_instances(q, max_dim, Suite::Dual, seed)? {
        let du = inst.dual(&sp);
        let mut pointwise = true;
        let h = histogram(&sp, &inst.v[0], &inst.v[2], |u| {
            let k = inst.classify(&sp, u);
            let f = sp.annihilator(u);
            if !(sp.contains(&f, &du.v[0]) && sp.contains(&du.v[2], &f) && du.classify(&sp, &f) == dual_key(&k)) {
                pointwise = false;
            }
            Some(k)
        })?;
        let hd = histogram(&sp, &du.v[0], &du.v[2], |u| Some(du.classify(&sp, u)))?;
        let name = format!("F_{q}^{}, {}", sp.dim(), inst.describe());
        let mut keys: BTreeSet<Stt> = h.keys().cloned().collect();
        keys.extend(hd.keys().map(dual_key));
        for k in keys {
            let lhs = h.get(&k).copied().unwrap_or(0);
            let rhs = hd.get(&dual_key(&k)).copied().unwrap_or(0);
            push_pair(col, &name, format!("{} (annihilator)", key_str(&k)), lhs, rhs);
            if lhs > 0 {
                let (a, b, c) = dual_key(&k);
                let ok = n_seq(&k.0, &k.1, &k.2, Range::Gamma) == n_seq(&a, &b, &c, Range::Gamma);
                push_pair(col, &name, format!("{} (n duality)", key_str(&k)), ok as u64, 1);
            }
        }
        push_pair(col, &name, "U -> U^flat lands in the dual set".into(), pointwise as u64, 1);
    }
    for (sp, inst) in sp_instances(q, max_dim, seed)? {
        let du = inst.perp_dual(&sp);
        let h = histogram(&sp, &inst.v[0], &inst.v[2], |u| sp.is_isotropic(u).then(|| inst.classify(&sp, u)))?;
        let hd = histogram(&sp, &du.v[0], &du.v[2], |u| sp.is_coisotropic(u).then(|| du.classify(&sp, u)))?;
        let name = format!("F_{q}^{} symplectic, {}", sp.dim(), inst.describe());
        let mut keys: BTreeSet<Stt> = h.keys().cloned().collect();
        keys.extend(hd.keys().map(dual_key));
        for k in keys {
            let lhs = h.get(&k).copied().unwrap_or(0);
            let rhs = hd.get(&dual_key(&k)).copied().unwrap_or(0);
            push_pair(col, &name, format!("{} (perp)", key_str(&k)), lhs, rhs);
        }
    }
    Ok(())
}

/// Runs one suite over `F_q^n`, `n <= max_dim`.
pub fn run_suite(suite: Suite, q: u8, max_dim: usize, seed: u64) -> Result<SuiteReport> {
    let mut col = Collector { suite, q, cases: Vec::new() };
    match suite {
        Suite::Sub => sub_suite(q, max_dim, &mut col)?,
        Suite::Ya => ya_suite(q, max_dim, seed, &mut col)?,
        Suite::Ft => ft_suite(q, max_dim, seed, &mut col)?,
        Suite::Ystt => ystt_suite(q, max_dim, seed, &mut col)?,
        Suite::Ywt => ywt_suite(q, max_dim, seed, &mut col)?,
        Suite::Yj => yj_suite(q, max_dim, &mut col)?,
        Suite::Ysp => ysp_suite(q, max_dim, seed, &mut col)?,
        Suite::Dual => dual_suite(q, max_dim, seed, &mut col)?,
    }
    let mismatches = col.cases.iter().filter(|c| !c.ok).count();
    Ok(SuiteReport { suite, q, max_dim, checked: col.cases.len(), mismatches, cases: col.cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_of_the_plane() {
        let sp = FqSpace::new(2, 2).unwrap();
        assert_eq!(sp.enum_subspaces(1).unwrap().len(), 3);
        assert_eq!(sp.enum_subspaces(0).unwrap(), vec![sp.zero()]);
    }

    #[test]
    fn ya_examples() {
        let sp = FqSpace::new(2, 2).unwrap();
        let flag = sp.flag_from_basis(&sp.whole().rows, &[1, 1]);
        let h = histogram(&sp, &sp.zero(), &sp.whole(), |u| Some(sp.steps(u, &flag.steps))).unwrap();
        assert_eq!(h[&vec![1, 0]], 1);
        assert_eq!(h[&vec![0, 1]], 2);
        assert_eq!(h[&vec![0, 0]], 1);
        assert_eq!(value(&ya_closed(&[1, 1], &[0, 1]), 2), Ratio::from_integer(2.into()));
    }

    #[test]
    fn isotropic_lines() {
        let sp = FqSpace::symplectic(2, 2).unwrap();
        let lines = sp.enum_subspaces(1).unwrap();
        assert_eq!(lines.iter().filter(|l| sp.is_isotropic(l)).count(), 3);
        assert_eq!(value(&yj_closed(&[2], 1, 1), 2), Ratio::from_integer(3.into()));
        assert!(!sp.is_isotropic(&sp.whole()));
    }

    #[test]
    fn perp_of_isotropic_flag() {
        let sp = FqSpace::symplectic(3, 6).unwrap();
        let f = sp.isotropic_flag(&[1, 3]);
        let m = f.m();
        for i in 0..=m {
            assert_eq!(sp.perp(&f.steps[i]), f.steps[m - i]);
        }
    }

    #[test]
    fn all_dims_one_instance() {
        let sp = FqSpace::new(2, 2).unwrap();
        let e = sp.whole().rows;
        let inst = YInstance::new(&sp, [sp.zero(), sp.span(&e[..1]), sp.whole()], FlagSpec { steps: vec![sp.zero(), sp.whole()] });
        let h = histogram(&sp, &inst.v[0], &inst.v[2], |u| Some(inst.classify(&sp, u))).unwrap();
        let k = (vec![1], vec![1], vec![1]);
        assert_eq!(h[&k], 2);
        assert_eq!(value(&nyst_closed(&inst.c, &k.0, &k.1, &k.2, Range::Gamma), 2), Ratio::from_integer(2.into()));
    }

    #[test]
    fn intersection_matches_dimension_count() {
        let sp = FqSpace::new(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = sp.random_subspace_of(&sp.whole(), 2, &mut rng);
            let b = sp.random_subspace_of(&sp.whole(), 3, &mut rng);
            assert_eq!(sp.intersection(&a, &b).dim(), sp.intersection_dim(&a, &b));
        }
    }
}
