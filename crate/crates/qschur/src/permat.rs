//! n-periodic integer matrices indexed by `Z x Z`, the index sets they live in,
//! and the matrix-level operations used by the multiplication formulas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermatError {
    #[error("period must be a positive even integer, got {0}")]
    BadPeriod(i64),
    #[error("periods differ: {0} vs {1}")]
    PeriodMismatch(i64, i64),
    #[error("entry ({0}, {1}) listed twice")]
    DuplicateEntry(i64, i64),
    #[error("row/column vectors differ; the order only compares matrices in one fiber")]
    FiberMismatch,
    #[error("matrix is not a member of {0}")]
    NotMember(String),
}

/// Residues `i mod n` at which the delta row/column condition is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraType {
    C,
    Ji,
    Ij,
    Ii,
}

impl AlgebraType {
    pub const ALL: [AlgebraType; 4] = [AlgebraType::C, AlgebraType::Ji, AlgebraType::Ij, AlgebraType::Ii];

    /// Special nodes (residues) with delta rows and columns.
    pub fn nodes(self, n: i64) -> Vec<i64> {
        let r = n / 2 - 1;
        match self {
            AlgebraType::C => vec![],
            AlgebraType::Ji => vec![r + 1],
            AlgebraType::Ij => vec![0],
            AlgebraType::Ii => vec![0, r + 1],
        }
    }

    /// Whether the diagonal at residue `i` moves under the p-shift.
    pub fn shifted(self, n: i64, i: i64) -> bool {
        !self.nodes(n).contains(&i.rem_euclid(n))
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraType::C => "c",
            AlgebraType::Ji => "ji",
            AlgebraType::Ij => "ij",
            AlgebraType::Ii => "ii",
        }
    }

    /// The type obtained by conjugating with the half-period shift.
    pub fn tau(self) -> AlgebraType {
        match self {
            AlgebraType::Ji => AlgebraType::Ij,
            AlgebraType::Ij => AlgebraType::Ji,
            t => t,
        }
    }
}

impl std::str::FromStr for AlgebraType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "c" => Ok(AlgebraType::C),
            "ji" => Ok(AlgebraType::Ji),
            "ij" => Ok(AlgebraType::Ij),
            "ii" => Ok(AlgebraType::Ii),
            _ => Err(format!("unknown algebra type {s:?}")),
        }
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An n-periodic integer sequence. `values[k]` holds the entry at every index
/// congruent to `k` mod `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct IndexVector {
    values: Vec<i64>,
}

impl IndexVector {
    pub fn new(values: Vec<i64>) -> Self {
        IndexVector { values }
    }

    pub fn zeros(n: i64) -> Self {
        IndexVector { values: vec![0; n as usize] }
    }

    pub fn n(&self) -> i64 {
        self.values.len() as i64
    }

    pub fn at(&self, i: i64) -> i64 {
        self.values[i.rem_euclid(self.n()) as usize]
    }

    pub fn set(&mut self, i: i64, v: i64) {
        let n = self.n();
        self.values[i.rem_euclid(n) as usize] = v;
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `a^J_i = a_{-i}`
    pub fn flip_j(&self) -> Self {
        let n = self.n();
        IndexVector { values: (0..n).map(|i| self.at(-i)).collect() }
    }

    /// `a^#_i = a_{-i-1}`
    pub fn flip_sharp(&self) -> Self {
        let n = self.n();
        IndexVector { values: (0..n).map(|i| self.at(-i - 1)).collect() }
    }
}

/// An n-periodic matrix `a_{ij} = a_{i+n, j+n}` with finitely many nonzero
/// entries per period. Entries are stored for rows `1..=n`, sorted, nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicMatrix {
    n: i64,
    entries: Vec<(i64, i64, i64)>,
}

fn reduce(n: i64, i: i64, j: i64) -> (i64, i64) {
    let k = (i - 1).rem_euclid(n) + 1;
    (k, j + (k - i))
}

impl PeriodicMatrix {
    pub fn zero(n: i64) -> Self {
        assert!(n > 0 && n % 2 == 0, "period must be positive and even");
        PeriodicMatrix { n, entries: Vec::new() }
    }

    /// Builds a matrix from `(i, j, value)` triples; repeated positions add up.
    pub fn from_entries<I: IntoIterator<Item = (i64, i64, i64)>>(n: i64, it: I) -> Self {
        assert!(n > 0 && n % 2 == 0, "period must be positive and even");
        let mut m: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        for (i, j, v) in it {
            *m.entry(reduce(n, i, j)).or_insert(0) += v;
        }
        PeriodicMatrix { n, entries: m.into_iter().filter(|&(_, v)| v != 0).map(|((i, j), v)| (i, j, v)).collect() }
    }

    pub fn identity(n: i64) -> Self {
        Self::from_entries(n, (1..=n).map(|i| (i, i, 1)))
    }

    /// `E^{ij}`: one at every `(i + kn, j + kn)`.
    pub fn e(n: i64, i: i64, j: i64) -> Self {
        Self::from_entries(n, [(i, j, 1)])
    }

    /// `E^{ij}_theta = E^{ij} + E^{-i,-j}`
    pub fn e_theta(n: i64, i: i64, j: i64) -> Self {
        Self::from_entries(n, [(i, j, 1), (-i, -j, 1)])
    }

    pub fn diag(d: &IndexVector) -> Self {
        let n = d.n();
        Self::from_entries(n, (1..=n).map(|i| (i, i, d.at(i))))
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn r(&self) -> i64 {
        self.n / 2 - 1
    }

    /// Nonzero entries `(i, j, a_ij)` with `1 <= i <= n`, sorted.
    pub fn entries(&self) -> &[(i64, i64, i64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: i64, j: i64) -> i64 {
        let key = reduce(self.n, i, j);
        match self.entries.binary_search_by(|&(a, b, _)| (a, b).cmp(&key)) {
            Ok(k) => self.entries[k].2,
            Err(_) => 0,
        }
    }

    /// Nonzero entries `(j, a_ij)` of row `i` (any integer `i`), columns ascending.
    pub fn row(&self, i: i64) -> impl Iterator<Item = (i64, i64)> + '_ {
        let k = (i - 1).rem_euclid(self.n) + 1;
        let off = i - k;
        let lo = self.entries.partition_point(|e| e.0 < k);
        let hi = self.entries.partition_point(|e| e.0 <= k);
        self.entries[lo..hi].iter().map(move |&(_, j, v)| (j + off, v))
    }

    pub fn band(&self) -> i64 {
        self.entries.iter().map(|&(i, j, _)| (i - j).abs()).max().unwrap_or(0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|&(i, j, _)| i == j)
    }

    pub fn diagonal(&self) -> IndexVector {
        IndexVector::new((0..self.n).map(|i| self.get(i, i)).collect())
    }

    pub fn ro(&self) -> IndexVector {
        let mut out = IndexVector::zeros(self.n);
        for &(i, _, v) in &self.entries {
            out.set(i, out.at(i) + v);
        }
        out
    }

    pub fn co(&self) -> IndexVector {
        let mut out = IndexVector::zeros(self.n);
        for &(_, j, v) in &self.entries {
            out.set(j, out.at(j) + v);
        }
        out
    }

    /// `sum_{1 <= i <= n, j} a_ij`
    pub fn size(&self) -> i64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|&(i, j, v)| self.get(-i, -j) == v)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.n, other.n, "period mismatch");
        let mut m: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
        for &(i, j, v) in &self.entries {
            m.entry((i, j)).or_default().0 = v;
        }
        for &(i, j, v) in &other.entries {
            m.entry((i, j)).or_default().1 = v;
        }
        PeriodicMatrix {
            n: self.n,
            entries: m
                .into_iter()
                .map(|((i, j), (a, b))| (i, j, f(a, b)))
                .filter(|e| e.2 != 0)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_entries(self.n, self.entries.iter().map(|&(i, j, v)| (i, j, c * v)))
    }

    pub fn min_entry(&self) -> i64 {
        self.entries.iter().map(|e| e.2).min().unwrap_or(0).min(0)
    }

    pub fn offdiag_nonnegative(&self) -> bool {
        self.entries.iter().all(|&(i, j, v)| i == j || v >= 0)
    }

    /// `sum_{k <= i, l >= j} a_kl` (finite because of the band).
    pub fn corner_sum(&self, i: i64, j: i64) -> i64 {
        let w = self.band();
        let mut s = 0;
        for k in (j - w)..=i {
            s += self.row(k).filter(|&(l, _)| l >= j).map(|(_, v)| v).sum::<i64>();
        }
        s
    }

    /// Sum of all corner sums over one period; strictly monotone in the order.
    pub fn corner_total(&self, w: i64) -> i64 {
        let mut s = 0;
        for i in 1..=self.n {
            for j in (i + 1)..=(i + w) {
                s += self.corner_sum(i, j);
            }
        }
        s
    }

    /// `^tau a_ij = a_{i+r+1, j+r+1}`
    pub fn tau(&self) -> Self {
        let h = self.r() + 1;
        Self::from_entries(self.n, self.entries.iter().map(|&(i, j, v)| (i - h, j - h, v)))
    }

    /// `A + p I'`, where `I'` is the identity with the type's special nodes removed.
    pub fn p_shift(&self, p: i64, ty: AlgebraType) -> Self {
        let n = self.n;
        let shift = Self::from_entries(n, (1..=n).filter(|&i| ty.shifted(n, i)).map(|i| (i, i, p)));
        self.add(&shift)
    }

    /// `alpha` when `B - sum_i alpha_i E_theta^{i,i+1}` is diagonal.
    pub fn tri_alpha(&self) -> Option<IndexVector> {
        let n = self.n;
        let al = IndexVector::new((0..n).map(|i| self.get(i, i + 1)).collect());
        for &(i, j, v) in &self.entries {
            if j == i || j == i + 1 {
                continue;
            }
            if j == i - 1 && v == al.at(-i) {
                continue;
            }
            return None;
        }
        if (0..n).any(|i| self.get(i + 1, i) != al.at(-i - 1)) {
            return None;
        }
        Some(al)
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.tri_alpha().is_some()
    }

    pub fn tri(diag: &IndexVector, alpha: &IndexVector) -> Self {
        let n = diag.n();
        let mut e: Vec<(i64, i64, i64)> = (1..=n).map(|i| (i, i, diag.at(i))).collect();
        for i in 0..n {
            let a = alpha.at(i);
            e.push((i, i + 1, a));
            e.push((-i, -i - 1, a));
        }
        Self::from_entries(n, e)
    }

    /// Tridiagonal matrix with profile `alpha` and column vector `co`.
    pub fn tri_from_co(alpha: &IndexVector, co: &IndexVector) -> Self {
        let d = IndexVector::new((0..co.n()).map(|i| co.at(i) - alpha.at(i - 1) - alpha.at(-i - 1)).collect());
        Self::tri(&d, alpha)
    }

    /// Tridiagonal matrix with profile `alpha` and row vector `ro`.
    pub fn tri_from_ro(alpha: &IndexVector, ro: &IndexVector) -> Self {
        let d = IndexVector::new((0..ro.n()).map(|i| ro.at(i) - alpha.at(i) - alpha.at(-i)).collect());
        Self::tri(&d, alpha)
    }
}

impl fmt::Debug for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}", self.n)?;
        for &(i, j, v) in &self.entries {
            write!(f, " {i},{j}:{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: i64,
    entries: Vec<(i64, i64, i64)>,
}

impl Serialize for PeriodicMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson { n: self.n, entries: self.entries.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodicMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        PeriodicMatrix::try_from_json(m.n, &m.entries).map_err(serde::de::Error::custom)
    }
}

impl PeriodicMatrix {
    fn try_from_json(n: i64, entries: &[(i64, i64, i64)]) -> Result<Self, PermatError> {
        if n <= 0 || n % 2 != 0 {
            return Err(PermatError::BadPeriod(n));
        }
        let mut seen = BTreeSet::new();
        for &(i, j, _) in entries {
            if !seen.insert(reduce(n, i, j)) {
                return Err(PermatError::DuplicateEntry(i, j));
            }
        }
        Ok(Self::from_entries(n, entries.iter().copied()))
    }
}

/// `S -> Š` with `š_ij = s_{i-1,j}`.
pub fn check_shift(s: &PeriodicMatrix) -> PeriodicMatrix {
    PeriodicMatrix::from_entries(s.n, s.entries.iter().map(|&(i, j, v)| (i + 1, j, v)))
}

/// Inverse of [`check_shift`].
pub fn check_shift_inv(s: &PeriodicMatrix) -> PeriodicMatrix {
    PeriodicMatrix::from_entries(s.n, s.entries.iter().map(|&(i, j, v)| (i - 1, j, v)))
}

/// `A_{S,T} = A + S - T - (Š - Ť)`
pub fn a_st(a: &PeriodicMatrix, s: &PeriodicMatrix, t: &PeriodicMatrix) -> PeriodicMatrix {
    let out = a.add(s).sub(t).sub(&check_shift(s)).add(&check_shift(t));
    debug_assert!(!cond_star(s, t) || out == a_st_symmetric(a, s, t));
    out
}

/// `a'_ij = a_ij + (s_ij + s_{-i,-j}) - (t_ij + t_{-i,-j})`, valid under the star condition.
pub fn a_st_symmetric(a: &PeriodicMatrix, s: &PeriodicMatrix, t: &PeriodicMatrix) -> PeriodicMatrix {
    let n = a.n;
    let mirror = |m: &PeriodicMatrix, sign: i64| -> Vec<(i64, i64, i64)> {
        m.entries.iter().flat_map(|&(i, j, v)| [(i, j, sign * v), (-i, -j, sign * v)]).collect()
    };
    PeriodicMatrix::from_entries(
        n,
        a.entries.iter().copied().chain(mirror(s, 1)).chain(mirror(t, -1)),
    )
}

/// `s_ij + s_{-i-1,-j} = t_ij + t_{-i-1,-j}` for all `i, j`.
pub fn cond_star(s: &PeriodicMatrix, t: &PeriodicMatrix) -> bool {
    let mut pos = BTreeSet::new();
    for m in [s, t] {
        for &(i, j, _) in &m.entries {
            pos.insert(reduce(m.n, i, j));
            pos.insert(reduce(m.n, -i - 1, -j));
        }
    }
    pos.into_iter()
        .all(|(i, j)| s.get(i, j) + s.get(-i - 1, -j) == t.get(i, j) + t.get(-i - 1, -j))
}

/// Corner-sum comparison `A <= B` without the fiber check.
pub fn leq_corner(a: &PeriodicMatrix, b: &PeriodicMatrix) -> bool {
    let w = a.band().max(b.band());
    for i in 1..=a.n {
        for j in (i + 1)..=(i + w) {
            if a.corner_sum(i, j) > b.corner_sum(i, j) {
                return false;
            }
        }
    }
    true
}

/// The partial order on one ro/co fiber.
pub fn leq_alg(a: &PeriodicMatrix, b: &PeriodicMatrix) -> Result<bool, PermatError> {
    if a.n != b.n {
        return Err(PermatError::PeriodMismatch(a.n, b.n));
    }
    if a.ro() != b.ro() || a.co() != b.co() {
        return Err(PermatError::FiberMismatch);
    }
    Ok(leq_corner(a, b))
}

/// The index sets of the finite and the stabilized algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    /// `Theta_{n,d}`
    Theta(i64),
    /// `^c Xi_{n,d}`
    XiC(i64),
    /// `Xi_{n,d}` and its typed subsets
    Xi(AlgebraType, i64),
    /// `Theta~_n`
    ThetaTilde,
    /// `Xi~_n` and its typed subsets
    XiTilde(AlgebraType),
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Theta(d) => write!(f, "Theta(d={d})"),
            IndexSet::XiC(d) => write!(f, "cXi(d={d})"),
            IndexSet::Xi(t, d) => write!(f, "Xi^{t}(d={d})"),
            IndexSet::ThetaTilde => write!(f, "Theta~"),
            IndexSet::XiTilde(t) => write!(f, "Xi~^{t}"),
        }
    }
}

fn delta_nodes_ok(a: &PeriodicMatrix, ty: AlgebraType) -> bool {
    let n = a.n;
    ty.nodes(n).into_iter().all(|nu| {
        a.get(nu, nu) == 1
            && a.entries.iter().all(|&(i, j, _)| i == j || (i.rem_euclid(n) != nu && j.rem_euclid(n) != nu))
    })
}

fn special_parity(a: &PeriodicMatrix, odd: bool) -> bool {
    let r = a.r();
    let want = if odd { 1 } else { 0 };
    a.get(0, 0).rem_euclid(2) == want && a.get(r + 1, r + 1).rem_euclid(2) == want
}

/// `A - E^{00} - E^{r+1,r+1}`
pub fn to_cxi(a: &PeriodicMatrix) -> PeriodicMatrix {
    let n = a.n;
    let r = a.r();
    a.sub(&PeriodicMatrix::from_entries(n, [(0, 0, 1), (r + 1, r + 1, 1)]))
}

/// `A + E^{00} + E^{r+1,r+1}`
pub fn from_cxi(a: &PeriodicMatrix) -> PeriodicMatrix {
    let n = a.n;
    let r = a.r();
    a.add(&PeriodicMatrix::from_entries(n, [(0, 0, 1), (r + 1, r + 1, 1)]))
}

pub fn member(a: &PeriodicMatrix, set: IndexSet) -> bool {
    match set {
        IndexSet::Theta(d) => a.min_entry() >= 0 && a.size() == d,
        IndexSet::XiC(d) => {
            a.min_entry() >= 0 && a.size() == 2 * d && a.is_symmetric() && special_parity(a, false)
        }
        IndexSet::Xi(ty, d) => {
            if matches!(ty, AlgebraType::Ji | AlgebraType::Ij | AlgebraType::Ii) && a.n < 4 {
                return false;
            }
            member(&to_cxi(a), IndexSet::XiC(d)) && delta_nodes_ok(a, ty)
        }
        IndexSet::ThetaTilde => a.offdiag_nonnegative(),
        IndexSet::XiTilde(ty) => {
            if matches!(ty, AlgebraType::Ji | AlgebraType::Ij | AlgebraType::Ii) && a.n < 4 {
                return false;
            }
            a.offdiag_nonnegative() && a.is_symmetric() && special_parity(a, true) && delta_nodes_ok(a, ty)
        }
    }
}

/// `d` with `A in Xi_{n,d}` read off the size, when the size has the right parity.
pub fn xi_size(a: &PeriodicMatrix) -> Option<i64> {
    let s = a.size() - 2;
    (s >= 0 && s % 2 == 0).then_some(s / 2)
}

/// Representatives of the mirror orbits `{(i,j), (-i,-j)}` of positions with
/// `|i - j| <= w`, rows `1..=n`.
fn orbit_reps(n: i64, w: i64, offdiag_only: bool) -> Vec<(i64, i64, bool)> {
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for i in 1..=n {
        for j in (i - w)..=(i + w) {
            if offdiag_only && i == j {
                continue;
            }
            let k = reduce(n, i, j);
            let m = reduce(n, -i, -j);
            if seen.contains(&k) || seen.contains(&m) {
                continue;
            }
            seen.insert(k);
            seen.insert(m);
            reps.push((k.0, k.1, k == m));
        }
    }
    reps
}

fn sym_matrix(n: i64, vals: &[(i64, i64, i64)]) -> PeriodicMatrix {
    let mut e = Vec::new();
    for &(i, j, v) in vals {
        if v == 0 {
            continue;
        }
        e.push((i, j, v));
        if reduce(n, -i, -j) != reduce(n, i, j) {
            e.push((-i, -j, v));
        }
    }
    PeriodicMatrix::from_entries(n, e)
}

/// All members of `Xi^ty_{n,d}` with band at most `w`, sorted.
pub fn enumerate_xi(n: i64, d: i64, w: i64, ty: AlgebraType) -> Vec<PeriodicMatrix> {
    let reps = orbit_reps(n, w, false);
    let mut out = Vec::new();
    let mut vals: Vec<(i64, i64, i64)> = reps.iter().map(|&(i, j, _)| (i, j, 0)).collect();
    fn rec(
        n: i64,
        d: i64,
        ty: AlgebraType,
        reps: &[(i64, i64, bool)],
        idx: usize,
        left: i64,
        vals: &mut Vec<(i64, i64, i64)>,
        out: &mut Vec<PeriodicMatrix>,
    ) {
        if idx == reps.len() {
            if left == 0 {
                let a = sym_matrix(n, vals);
                if member(&a, IndexSet::Xi(ty, d)) {
                    out.push(a);
                }
            }
            return;
        }
        let wt = if reps[idx].2 { 1 } else { 2 };
        for v in 0..=(left / wt) {
            vals[idx].2 = v;
            rec(n, d, ty, reps, idx + 1, left - v * wt, vals, out);
        }
        vals[idx].2 = 0;
    }
    rec(n, d, ty, &reps, 0, 2 * d + 2, &mut vals, &mut out);
    out.sort();
    out
}

/// Symmetric matrices in the ro/co fiber of `a` with off-diagonal entries
/// bounded by the corner sums of `a`, filtered by `keep`.
fn fiber_below(a: &PeriodicMatrix, finite: bool, keep: impl Fn(&PeriodicMatrix) -> bool) -> Vec<PeriodicMatrix> {
    let n = a.n;
    let w = a.band();
    let ro = a.ro();
    let co = a.co();
    let reps = orbit_reps(n, w, true);
    let bounds: Vec<i64> = reps
        .iter()
        .map(|&(i, j, _)| if i < j { a.corner_sum(i, j) } else { a.corner_sum(-i, -j) })
        .collect();
    let mut out = Vec::new();
    let mut vals: Vec<(i64, i64, i64)> = reps.iter().map(|&(i, j, _)| (i, j, 0)).collect();
    let mut rowsum = vec![0i64; n as usize];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        n: i64,
        finite: bool,
        ro: &IndexVector,
        co: &IndexVector,
        bounds: &[i64],
        idx: usize,
        vals: &mut Vec<(i64, i64, i64)>,
        rowsum: &mut Vec<i64>,
        out: &mut Vec<PeriodicMatrix>,
        keep: &dyn Fn(&PeriodicMatrix) -> bool,
    ) {
        if idx == vals.len() {
            let off = sym_matrix(n, vals);
            let diag: Vec<(i64, i64, i64)> = (1..=n).map(|i| (i, i, ro.at(i) - rowsum[(i % n) as usize])).collect();
            let m = off.add(&PeriodicMatrix::from_entries(n, diag));
            if &m.co() == co && keep(&m) {
                out.push(m);
            }
            return;
        }
        let (i, j, _) = vals[idx];
        let (mi, _) = reduce(n, -i, -j);
        for v in 0..=bounds[idx] {
            rowsum[(i % n) as usize] += v;
            rowsum[(mi % n) as usize] += v;
            let ok = !finite
                || (rowsum[(i % n) as usize] <= ro.at(i) && rowsum[(mi % n) as usize] <= ro.at(mi));
            if ok {
                vals[idx].2 = v;
                rec(n, finite, ro, co, bounds, idx + 1, vals, rowsum, out, keep);
            }
            rowsum[(i % n) as usize] -= v;
            rowsum[(mi % n) as usize] -= v;
            if !ok {
                break;
            }
        }
        vals[idx].2 = 0;
    }
    rec(n, finite, &ro, &co, &bounds, 0, &mut vals, &mut rowsum, &mut out, &keep);
    out.sort();
    out
}

/// Members of `set` strictly below `a` in the same ro/co fiber.
pub fn lower_set(a: &PeriodicMatrix, set: IndexSet) -> Vec<PeriodicMatrix> {
    let finite = matches!(set, IndexSet::Theta(_) | IndexSet::XiC(_) | IndexSet::Xi(..));
    fiber_below(a, finite, |m| m != a && member(m, set) && leq_corner(m, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ro_co_examples() {
        let d = PeriodicMatrix::diag(&IndexVector::new(vec![3, 1, 2, 1]));
        assert_eq!(d.ro(), d.diagonal());
        assert_eq!(d.co(), d.diagonal());
        let e = PeriodicMatrix::e_theta(4, 0, 1);
        assert_eq!(e.ro().at(0), 2);
        assert_eq!(e.co().at(1), 1);
        assert_eq!(e.co().at(-1), 1);
        assert!(PeriodicMatrix::zero(4).ro().is_zero());
    }

    #[test]
    fn member_examples() {
        let n = 4;
        let a = PeriodicMatrix::diag(&IndexVector::new(vec![1, 1, 1, 1]));
        assert!(member(&a, IndexSet::Xi(AlgebraType::C, 1)));
        let b = a.add(&PeriodicMatrix::e(n, 1, 2));
        assert!(!member(&b, IndexSet::Xi(AlgebraType::C, 2)));
        let c = a.add(&PeriodicMatrix::e_theta(n, 2, 3));
        assert!(member(&c, IndexSet::Xi(AlgebraType::C, 2)));
        assert!(!member(&c, IndexSet::Xi(AlgebraType::Ji, 2)));
    }

    #[test]
    fn check_shift_examples() {
        let s = PeriodicMatrix::e(4, 0, 1);
        assert_eq!(check_shift(&s), PeriodicMatrix::e(4, 1, 1));
        assert_eq!(check_shift_inv(&check_shift(&s)), s);
        assert!(check_shift(&PeriodicMatrix::zero(4)).is_zero());
    }

    #[test]
    fn a_st_examples() {
        let a = PeriodicMatrix::diag(&IndexVector::new(vec![1, 2, 3, 2]));
        let z = PeriodicMatrix::zero(4);
        assert_eq!(a_st(&a, &z, &z), a);
        let s = PeriodicMatrix::e(4, 0, 2);
        let want = a.add(&PeriodicMatrix::e(4, 0, 2)).sub(&PeriodicMatrix::e(4, 1, 2));
        assert_eq!(a_st(&a, &s, &z), want);
    }

    #[test]
    fn star_examples() {
        let z = PeriodicMatrix::zero(4);
        assert!(cond_star(&z, &z));
        let s = PeriodicMatrix::e(4, 0, 2);
        assert!(!cond_star(&s, &z));
        assert!(cond_star(&s, &s));
    }

    #[test]
    fn flips() {
        let z = IndexVector::zeros(4);
        assert_eq!(z.flip_j(), z);
        let e1 = IndexVector::new(vec![0, 1, 0, 0]);
        assert_eq!(e1.flip_j().at(-1), 1);
        let e0 = IndexVector::new(vec![1, 0, 0, 0]);
        assert_eq!(e0.flip_sharp().at(-1), 1);
        assert_eq!(e1.flip_j().flip_j(), e1);
        assert_eq!(e1.flip_sharp().flip_sharp(), e1);
    }

    #[test]
    fn p_shift_examples() {
        let z = PeriodicMatrix::zero(4);
        assert_eq!(z.p_shift(2, AlgebraType::C), PeriodicMatrix::identity(4).scale(2));
        let ii = z.p_shift(2, AlgebraType::Ii);
        assert_eq!(ii.get(0, 0), 0);
        assert_eq!(ii.get(2, 2), 0);
        assert_eq!(ii.get(1, 1), 2);
        let a = PeriodicMatrix::e_theta(4, 1, 2);
        assert_eq!(a.p_shift(0, AlgebraType::Ji), a);
    }

    #[test]
    fn tau_involution_and_types() {
        for a in enumerate_xi(4, 2, 2, AlgebraType::Ji) {
            assert_eq!(a.tau().tau(), a);
            assert!(member(&a.tau(), IndexSet::Xi(AlgebraType::Ij, 2)));
        }
    }

    #[test]
    fn diagonal_is_below_everything_in_its_fiber() {
        for a in enumerate_xi(4, 2, 2, AlgebraType::C) {
            let d = PeriodicMatrix::diag(&a.ro());
            if a.co() == a.ro() {
                assert!(leq_alg(&d, &a).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert!(enumerate_xi(4, 0, 2, AlgebraType::C).len() == 1);
        let all = enumerate_xi(4, 2, 2, AlgebraType::C);
        assert!(all.iter().all(|a| a.is_symmetric() && a.band() <= 2));
    }
}
