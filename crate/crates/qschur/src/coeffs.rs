//! Structure constants of the tridiagonal multiplication formulas and the
//! enumeration of the `(S, T)` pairs they are summed over.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permat::{a_st, check_shift, to_cxi, AlgebraType, IndexVector, PeriodicMatrix};
use crate::qpoly::{qbinom, qfact, qint, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{what} is not an integer: {value}")]
    NonIntegral { what: &'static str, value: String },
    #[error("matrix is not tridiagonal")]
    NotTridiagonal,
}

/// A finitely supported sequence, column -> value.
pub type Seq = BTreeMap<i64, i64>;

/// Which upper bound to use for the inner product of `n(alpha, gamma, beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Range {
    /// `l < gamma_j - sigma_jj`
    Gamma,
    /// `l < alpha_j - sigma_jj`
    Alpha,
}

/// `alpha` bound for the diagonal special factors: `b` for matrices in `Xi`,
/// `c` for matrices in `^c Xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    B,
    C,
}

pub fn row_seq(m: &PeriodicMatrix, i: i64) -> Seq {
    m.row(i).collect()
}

/// All `x` with `0 <= x_k <= caps[k]` and `sum x = total`.
pub fn compositions(total: i64, caps: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut suffix = vec![0i64; caps.len() + 1];
    for k in (0..caps.len()).rev() {
        suffix[k] = suffix[k + 1] + caps[k];
    }
    let mut cur = Vec::with_capacity(caps.len());
    fn rec(k: usize, left: i64, caps: &[i64], suffix: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == caps.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let lo = (left - suffix[k + 1]).max(0);
        let hi = caps[k].min(left);
        for x in lo..=hi {
            cur.push(x);
            rec(k + 1, left - x, caps, suffix, cur, out);
            cur.pop();
        }
    }
    if total >= 0 && total <= suffix[0] {
        rec(0, total, caps, &suffix, &mut cur, &mut out);
    }
    out
}

pub fn qmultinomial(total: i64, parts: &[i64]) -> Poly {
    let mut left = total;
    let mut p = Poly::one();
    for &x in parts {
        p = &p * &qbinom(left, x);
        left -= x;
    }
    p
}

/// `n(alpha, gamma, beta)`: a sum over upper triangular `sigma` with row sums
/// `beta` and column sums `gamma`.
pub fn n_abc(alpha: &Seq, gamma: &Seq, beta: &Seq, range: Range) -> Poly {
    let rows: Vec<(i64, i64)> = beta.iter().filter(|e| *e.1 != 0).map(|(&k, &v)| (k, v)).collect();
    let cols: Vec<i64> = gamma.iter().filter(|e| *e.1 != 0).map(|(&k, _)| k).collect();
    if rows.iter().map(|e| e.1).sum::<i64>() != cols.iter().map(|c| gamma[c]).sum::<i64>() {
        return Poly::zero();
    }
    let a = |j: i64| alpha.get(&j).copied().unwrap_or(0);
    let mut total = Poly::zero();
    let mut cap: BTreeMap<i64, i64> = cols.iter().map(|&c| (c, gamma[&c])).collect();
    let mut sigma: Vec<(i64, i64, i64)> = Vec::new();

    let weight = |sigma: &[(i64, i64, i64)]| -> Poly {
        let mut e = 0i64;
        for &(i, j, x) in sigma {
            e += x * alpha.range(..j).map(|(_, v)| v).sum::<i64>();
            if i == j {
                e += x * a(i);
            }
        }
        for &(i, j, x) in sigma {
            for &(k, l, y) in sigma {
                if i > k && j < l {
                    e += x * y;
                }
            }
        }
        let mut w = Poly::v(2 * e);
        for &(k, b) in &rows {
            let parts: Vec<i64> = sigma.iter().filter(|s| s.0 == k).map(|s| s.2).collect();
            w = &w * &qmultinomial(b, &parts);
        }
        for &j in &cols {
            let sjj = sigma.iter().find(|s| s.0 == j && s.1 == j).map(|s| s.2).unwrap_or(0);
            let top = match range {
                Range::Gamma => gamma[&j] - sjj,
                Range::Alpha => a(j) - sjj,
            };
            for l in 0..top {
                w = &w * &(&Poly::v(2 * a(j)) - &Poly::v(2 * l));
            }
        }
        w
    };

    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        rows: &[(i64, i64)],
        cols: &[i64],
        cap: &mut BTreeMap<i64, i64>,
        sigma: &mut Vec<(i64, i64, i64)>,
        total: &mut Poly,
        weight: &dyn Fn(&[(i64, i64, i64)]) -> Poly,
    ) {
        if idx == rows.len() {
            if cap.values().all(|&c| c == 0) {
                *total += &weight(sigma);
            }
            return;
        }
        let (k, b) = rows[idx];
        let cl: Vec<i64> = cols.iter().copied().filter(|&l| l >= k).collect();
        let caps: Vec<i64> = cl.iter().map(|l| cap[l]).collect();
        for comp in compositions(b, &caps) {
            let mark = sigma.len();
            for (&l, &x) in cl.iter().zip(&comp) {
                *cap.get_mut(&l).unwrap() -= x;
                if x != 0 {
                    sigma.push((k, l, x));
                }
            }
            rec(idx + 1, rows, cols, cap, sigma, total, weight);
            sigma.truncate(mark);
            for (&l, &x) in cl.iter().zip(&comp) {
                *cap.get_mut(&l).unwrap() += x;
            }
        }
    }
    rec(0, &rows, &cols, &mut cap, &mut sigma, &mut total, &weight);
    total
}

/// `n(S, T) = prod_{0 <= i <= r} n(S_i, T_i, (S_{-i-1})^J)`
pub fn n_st(s: &PeriodicMatrix, t: &PeriodicMatrix, range: Range) -> Poly {
    let r = s.r();
    let mut p = Poly::one();
    for i in 0..=r {
        let a = row_seq(s, i);
        let g = row_seq(t, i);
        let b: Seq = s.row(-i - 1).map(|(j, v)| (-j, v)).collect();
        p = &p * &n_abc(&a, &g, &b, range);
        if p.is_zero() {
            break;
        }
    }
    p
}

/// Membership in `({-r-1} x (-r-1, oo)) u ([-r, -1] x Z) u ({0} x (-oo, 0))`.
pub fn in_region_j(i: i64, j: i64, r: i64) -> bool {
    if i == -r - 1 {
        j > -r - 1
    } else if (-r..=-1).contains(&i) {
        true
    } else if i == 0 {
        j < 0
    } else {
        false
    }
}

/// Positions of `J` at which the bracket has a nontrivial factor for `S`.
pub fn region_j_support(s: &PeriodicMatrix) -> Vec<(i64, i64)> {
    let r = s.r();
    let mut pos = std::collections::BTreeSet::new();
    for i in (-r - 1)..=0 {
        for (j, _) in s.row(i) {
            pos.insert((i, j));
        }
        for (j, _) in s.row(-i) {
            pos.insert((i, -j));
        }
    }
    pos.into_iter().filter(|&(i, j)| in_region_j(i, j, r)).collect()
}

fn bracket(ap: &PeriodicMatrix, s: &PeriodicMatrix, kind: Kind) -> Poly {
    let r = s.r();
    let mut res = Poly::one();
    for (i, j) in region_j_support(s) {
        let a = ap.get(i, j);
        let s1 = s.get(i, j);
        let s2 = s.get(-i, -j);
        res = &res * &(&qbinom(a, s1) * &qbinom(a - s1, s2));
        if res.is_zero() {
            return res;
        }
    }
    let off = match kind {
        Kind::B => 1,
        Kind::C => 0,
    };
    for i in [0, -r - 1] {
        let a = ap.get(i, i);
        let sii = s.get(i, i);
        let mut num = Poly::one();
        for k in 0..sii {
            num = &num * &qint(a - 2 * k - off);
        }
        let f = num
            .div_exact(&qfact(sii))
            .unwrap_or_else(|_| panic!("diagonal bracket factor at ({i},{i}) is not a Laurent polynomial"));
        res = &res * &f;
    }
    res
}

/// Bracket for matrices in `Xi` (diagonal factors `[a' - 2k - 1]/[k + 1]`).
pub fn bracket_b(ap: &PeriodicMatrix, s: &PeriodicMatrix) -> Poly {
    bracket(ap, s, Kind::B)
}

/// Bracket for matrices in `^c Xi` (diagonal factors `[a' - 2k]/[k + 1]`).
pub fn bracket_c(ap: &PeriodicMatrix, s: &PeriodicMatrix) -> Poly {
    bracket(ap, s, Kind::C)
}

fn xi(ap: &PeriodicMatrix, s: &PeriodicMatrix, kind: Kind) -> Rational64 {
    let r = s.r();
    let mut tot = 0i64;
    for i in (-r - 1)..=r {
        let srow = row_seq(s, i);
        let aprow = row_seq(ap, i);
        for (&l, &sl) in &srow {
            for (_, &v) in aprow.range(l + 1..) {
                tot += v * sl;
            }
            for (_, &v) in srow.range(l + 1..) {
                tot -= v * sl;
            }
        }
    }
    for i in -r..0 {
        for (l, sl) in s.row(i) {
            for (jm, v) in s.row(-i) {
                if -jm > l {
                    tot -= v * sl;
                }
            }
        }
    }
    for i in [-r - 1, 0] {
        for (l, sl) in s.row(i) {
            for (jm, v) in s.row(-i) {
                let j = -jm;
                if 2 * i - l > j && j > l {
                    tot -= v * sl;
                }
            }
        }
    }
    let sgn = match kind {
        Kind::B => 1,
        Kind::C => -1,
    };
    let mut half = 0i64;
    for i in [-r - 1, 0] {
        for (j, v) in s.row(i) {
            if j < i {
                half += v * (v + sgn);
            }
        }
    }
    Rational64::new(2 * tot - half, 2)
}

/// `xi^b` for `A in Xi`; depends on `A` only through `A' = A_{S,T}`.
pub fn xi_b(ap: &PeriodicMatrix, s: &PeriodicMatrix) -> Rational64 {
    xi(ap, s, Kind::B)
}

/// `xi^c` for `A in ^c Xi`; depends on `A` only through `A' = A_{S,T}`.
pub fn xi_c(ap: &PeriodicMatrix, s: &PeriodicMatrix) -> Rational64 {
    xi(ap, s, Kind::C)
}

/// `d^c_A`, a half-sum of products of entries plus two boundary corrections.
pub fn d_c(a: &PeriodicMatrix) -> Rational64 {
    let n = a.n();
    let r = a.r();
    let w = a.band();
    let mut tot = 0i64;
    for &(i, j, v) in a.entries() {
        for k in (j - w + 1)..=i {
            let s: i64 = a.row(k).filter(|&(l, _)| l > j).map(|(_, u)| u).sum();
            tot += v * s;
        }
    }
    for i in 0..=w {
        tot += a.row(i).filter(|&(j, _)| j < 0).map(|(_, u)| u).sum::<i64>();
    }
    for i in (r + 1)..=(r + 1 + w) {
        tot += a.row(i).filter(|&(j, _)| j < r + 1).map(|(_, u)| u).sum::<i64>();
    }
    let _ = n;
    Rational64::new(tot, 2)
}

/// `d_A = d^c_{A - E^{00} - E^{r+1,r+1}}` for `A in Xi`.
pub fn d_a(a: &PeriodicMatrix) -> Rational64 {
    d_c(&to_cxi(a))
}

pub fn to_int(x: Rational64, what: &'static str) -> Result<i64, CoeffError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(CoeffError::NonIntegral { what, value: x.to_string() })
    }
}

fn rel(x: &PeriodicMatrix, y: &PeriodicMatrix, greater: bool) -> i64 {
    let n = x.n();
    let mut tot = 0;
    for i in 1..=n {
        for (j, u) in x.row(i) {
            for (l, w) in y.row(i) {
                if (greater && j > l) || (!greater && j < l) {
                    tot += u * w;
                }
            }
        }
    }
    tot
}

/// `d_{A'} - d_A - d_B` in closed form, for `B` tridiagonal with profile `alpha`.
pub fn d_difference(a: &PeriodicMatrix, alpha: &IndexVector, s: &PeriodicMatrix, t: &PeriodicMatrix) -> Rational64 {
    let n = a.n();
    let r = a.r();
    let al = |i: i64| alpha.at(i);
    let mut whole = 0i64;
    let mut half = 0i64;
    for i in 1..=n {
        for (j, v) in a.row(i) {
            for (l, x) in s.row(i) {
                if j >= l {
                    whole -= v * x;
                }
            }
            for (l, x) in t.row(i) {
                if j < l {
                    whole -= v * x;
                }
            }
        }
        whole += al(i) * al(i - 1);
        half += -al(n - i) * al(i) + al(i) * al(n - 1 - i);
    }
    let sc = check_shift(s);
    let tc = check_shift(t);
    half += rel(s, s, true) + rel(t, t, true) - rel(s, t, true) - rel(s, t, false) - rel(s, &sc, true)
        + rel(s, &tc, true)
        + rel(t, &sc, true)
        - rel(t, &tc, true);
    half += s.row(0).filter(|&(j, _)| j <= 0).map(|e| e.1).sum::<i64>()
        + s.row(r + 1).filter(|&(j, _)| j <= r + 1).map(|e| e.1).sum::<i64>()
        + t.row(0).filter(|&(j, _)| j > 0).map(|e| e.1).sum::<i64>()
        + t.row(r + 1).filter(|&(j, _)| j > r + 1).map(|e| e.1).sum::<i64>();
    Rational64::from_integer(whole) + Rational64::new(half, 2)
}

/// `h_{S,T}` computed from `d_{A'} - d_A - d_B + 2 xi^b` with each `d` evaluated directly.
pub fn h_st_via_d(a: &PeriodicMatrix, b: &PeriodicMatrix, s: &PeriodicMatrix, ap: &PeriodicMatrix) -> Rational64 {
    d_a(ap) - d_a(a) - d_a(b) + xi_b(ap, s) * 2
}

/// The exponent `h_{S,T}` of the standard-basis formula.
pub fn h_st(
    a: &PeriodicMatrix,
    alpha: &IndexVector,
    s: &PeriodicMatrix,
    t: &PeriodicMatrix,
    ap: &PeriodicMatrix,
) -> Result<i64, CoeffError> {
    to_int(d_difference(a, alpha, s, t) + xi_b(ap, s) * 2, "h_{S,T}")
}

/// Uncorrected variants of `h_{S,T}` and the `d`-difference, kept to measure
/// how often they disagree with the direct computation.
pub mod printed {
    use super::*;

    fn common(a: &PeriodicMatrix, alpha: &IndexVector, s: &PeriodicMatrix, t: &PeriodicMatrix) -> (i64, i64) {
        let n = a.n();
        let al = |i: i64| alpha.at(i);
        let mut whole = 0;
        let mut half = 0;
        for i in 1..=n {
            for (j, v) in a.row(i) {
                for (l, x) in s.row(i) {
                    if j >= l {
                        whole -= v * x;
                    }
                }
                for (l, x) in t.row(i) {
                    if j < l {
                        whole -= v * x;
                    }
                }
            }
            whole += al(i) * al(i - 1);
            half += -al(n - i) * al(i) + al(i) * al(n - 1 - i);
        }
        (whole, half)
    }

    /// The displayed `d_{A'} - d_A - d_B` from the proof of the standard-basis formula.
    pub fn d_difference(a: &PeriodicMatrix, alpha: &IndexVector, s: &PeriodicMatrix, t: &PeriodicMatrix) -> Rational64 {
        let r = a.r();
        let (whole, mut half) = common(a, alpha, s, t);
        let srow = |i: i64, f: &dyn Fn(i64) -> bool| s.row(i).filter(|&(j, _)| f(j)).map(|e| e.1).sum::<i64>();
        let trow = |i: i64, f: &dyn Fn(i64) -> bool| t.row(i).filter(|&(j, _)| f(j)).map(|e| e.1).sum::<i64>();
        half += 3 * trow(0, &|j| j > 0) - srow(0, &|j| j <= 0) + trow(r + 1, &|j| j > r + 1)
            - 3 * srow(r + 1, &|j| j < r + 1);
        half += -t.get(r + 1, r + 1) - 2 * s.get(r + 1, r + 1) - 2 * alpha.at(0) - alpha.at(r + 1) + alpha.at(-r - 2);
        Rational64::from_integer(whole) + Rational64::new(half, 2)
    }

    /// The displayed closed form of `h_{S,T}`.
    pub fn h_st(a: &PeriodicMatrix, alpha: &IndexVector, s: &PeriodicMatrix, t: &PeriodicMatrix) -> Rational64 {
        let n = a.n();
        let r = a.r();
        let al = |i: i64| alpha.at(i);
        let mut whole = 0;
        let mut half = 0;
        for i in 1..=n {
            for (j, v) in a.row(i) {
                for (l, x) in s.row(i) {
                    if j > l {
                        whole += v * x;
                    }
                }
                for (l, x) in t.row(i) {
                    if j < l {
                        whole -= v * x;
                    }
                }
                whole -= v * s.get(i, j);
            }
            whole += al(i) * al(i - 1);
            half += -al(n - i) * al(i) + al(i) * al(n - 1 - i);
            for (l, x) in s.row(i) {
                for (j, y) in t.row(i) {
                    if j > l {
                        whole -= 2 * y * x;
                    }
                }
                for (j, y) in s.row(i - 1) {
                    if j > l {
                        whole -= 2 * y * x;
                    }
                }
                for (j, y) in t.row(i - 1) {
                    if j > l {
                        whole += 2 * y * x;
                    }
                }
            }
        }
        for i in -r..0 {
            for (jm, v) in s.row(-i) {
                for (l, x) in s.row(i) {
                    if -jm > l {
                        whole -= 2 * v * x;
                    }
                }
            }
        }
        for i in [-r - 1, 0] {
            for (jm, v) in s.row(-i) {
                let j = -jm;
                for (l, x) in s.row(i) {
                    if l < j && j < 2 * i - l {
                        whole -= 2 * v * x;
                    }
                }
            }
            for (j, x) in s.row(i) {
                if j < i {
                    whole -= x * (x - 1);
                }
            }
        }
        let srow = |i: i64, f: &dyn Fn(i64) -> bool| s.row(i).filter(|&(j, _)| f(j)).map(|e| e.1).sum::<i64>();
        let trow = |i: i64, f: &dyn Fn(i64) -> bool| t.row(i).filter(|&(j, _)| f(j)).map(|e| e.1).sum::<i64>();
        half += 3 * trow(0, &|j| j > 0) - 3 * srow(r + 1, &|j| j < r + 1) - srow(0, &|j| j < 0)
            + trow(r + 1, &|j| j > r + 1);
        half += -2 * alpha.at(0) - alpha.at(r + 1) + alpha.at(-r - 2)
            - 2 * s.get(r + 1, r + 1)
            - s.get(0, 0)
            - t.get(r + 1, r + 1);
        Rational64::from_integer(whole) + Rational64::new(half, 2)
    }
}

/// An admissible pair together with its target `A_{S,T}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StPair {
    pub s: PeriodicMatrix,
    pub t: PeriodicMatrix,
    pub target: PeriodicMatrix,
}

/// Which diagonal entries may go negative during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StMode {
    /// All entries of `A - T + Ť` and `A_{S,T}` are nonnegative.
    Finite,
    /// Diagonals that carry the p-shift of the given type are unbounded below.
    Shifted(AlgebraType),
}

impl StMode {
    fn free(self, n: i64, i: i64) -> bool {
        match self {
            StMode::Finite => false,
            StMode::Shifted(ty) => ty.shifted(n, i),
        }
    }
}

type RowChoice = (Seq, Seq, Seq, Seq);

/// All `(S, T)` with `ro(S) = alpha`, `ro(T) = alpha^#`, condition (star),
/// `A - T + Ť >= 0` and `A_{S,T} >= 0` (off the free diagonals).
pub fn enumerate_st(a: &PeriodicMatrix, alpha: &IndexVector, mode: StMode) -> Vec<StPair> {
    let n = a.n();
    let r = a.r();
    let trows = |row: i64, total: i64| -> Vec<Seq> {
        let mut cols: Vec<i64> = a.row(row).map(|e| e.0).collect();
        let free = mode.free(n, row);
        if free && !cols.contains(&row) {
            cols.push(row);
            cols.sort();
        }
        let caps: Vec<i64> = cols.iter().map(|&j| if j == row && free { total } else { a.get(row, j).max(0) }).collect();
        compositions(total, &caps)
            .into_iter()
            .map(|c| cols.iter().zip(c).filter(|e| e.1 != 0).map(|(&j, x)| (j, x)).collect())
            .collect()
    };
    let mut per_pair: Vec<Vec<RowChoice>> = Vec::new();
    for i in 0..=r {
        let p = -i - 1;
        let mut opts = Vec::new();
        for ti in trows(i, alpha.at(-i - 1)) {
            for tp in trows(p, alpha.at(i)) {
                let mut cols: Vec<i64> = ti.keys().copied().chain(tp.keys().map(|j| -j)).collect();
                cols.sort();
                cols.dedup();
                let cs: Vec<i64> = cols
                    .iter()
                    .map(|j| ti.get(j).copied().unwrap_or(0) + tp.get(&-j).copied().unwrap_or(0))
                    .collect();
                for comp in compositions(alpha.at(i), &cs) {
                    let si: Seq = cols.iter().zip(&comp).filter(|e| *e.1 != 0).map(|(&j, &x)| (j, x)).collect();
                    let sp: Seq = cols
                        .iter()
                        .zip(comp.iter().zip(&cs))
                        .filter(|(_, (x, c))| *c - *x != 0)
                        .map(|(&j, (x, c))| (-j, c - x))
                        .collect();
                    opts.push((ti.clone(), tp.clone(), si, sp));
                }
            }
        }
        if opts.is_empty() {
            return Vec::new();
        }
        per_pair.push(opts);
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; per_pair.len()];
    loop {
        let mut se = Vec::new();
        let mut te = Vec::new();
        for (i, &k) in idx.iter().enumerate() {
            let i = i as i64;
            let p = -i - 1;
            let (ti, tp, si, sp) = &per_pair[i as usize][k];
            te.extend(ti.iter().map(|(&j, &v)| (i, j, v)));
            te.extend(tp.iter().map(|(&j, &v)| (p, j, v)));
            se.extend(si.iter().map(|(&j, &v)| (i, j, v)));
            se.extend(sp.iter().map(|(&j, &v)| (p, j, v)));
        }
        let s = PeriodicMatrix::from_entries(n, se);
        let t = PeriodicMatrix::from_entries(n, te);
        let mid = a.sub(&t).add(&check_shift(&t));
        let ok = mid.entries().iter().all(|&(i, j, v)| v >= 0 || (i == j && mode.free(n, i)));
        if ok {
            let ap = a_st(a, &s, &t);
            if ap.entries().iter().all(|&(i, j, v)| v >= 0 || (i == j && mode.free(n, i))) {
                debug_assert!(ap.is_symmetric(), "A_(S,T) lost central symmetry");
                out.push(StPair { s, t, target: ap });
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_pair[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
