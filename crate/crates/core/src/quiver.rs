//! Equioriented type-A quivers `0 → 1 → … → l` over a prime field:
//! multisegments, rank tables, the closure order, and Monte-Carlo sampling of
//! the locus `S` of representations with the block shape forced by a
//! `k`-decomposition of the dimension vector.
//!
//! Vertex `i` of a dimension vector carrying a `k`-decomposition splits as
//! `V_i = k_{i−1} ⊕ k_i` (with `k_{−1} = k_l = 0`) and the maps on `S` are
//!
//! ```text
//! A_i = ( −B_{i−1}   I  )
//!       (   C_i     B_i )
//! ```
//!
//! with free blocks `B_i ∈ M_{k_{i+1} × k_i}` and `C_i ∈ M_{k_{i+1} × k_{i−1}}`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::Poset;

pub const DEFAULT_PRIME: u64 = 101;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("invalid segment [{0}, {1}]")]
    BadSegment(i64, i64),
    #[error("dimension vectors differ: {0:?} vs {1:?}")]
    DimensionMismatch(Vec<usize>, Vec<usize>),
    #[error("dimension vector {0:?} has no k-decomposition")]
    NoKDecomposition(Vec<usize>),
    #[error("inconsistent rank table: multiplicity of [{a}, {b}] is {value}")]
    NegativeMultiplicity { a: usize, b: usize, value: i64 },
    #[error("map {index} has shape {got:?}, expected {expected:?}")]
    Shape { index: usize, got: (usize, usize), expected: (usize, usize) },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("trials must be positive")]
    NoTrials,
    #[error("{0} representations exceed the enumeration limit")]
    TooLarge(String),
}

/// Dense matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        FpMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, p: u64, rng: &mut R) -> Self {
        FpMatrix { rows, cols, p, data: (0..rows * cols).map(|_| rng.gen_range(0..p)).collect() }
    }

    /// A random matrix of rank at most `rank`, as a product of random factors.
    pub fn random_of_rank<R: Rng>(rows: usize, cols: usize, rank: usize, p: u64, rng: &mut R) -> Self {
        Self::random(rows, rank, p, rng).mul(&Self::random(rank, cols, p, rng))
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.data[r * self.cols + c] = x % self.p;
    }

    /// Copies `block` with its top-left corner at `(r0, c0)`, scaled by `sign`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &FpMatrix, negate: bool) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                let x = block.get(r, c);
                self.set(r0 + r, c0 + c, if negate { (self.p - x) % self.p } else { x });
            }
        }
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            for k in 0..cols {
                m.swap(pivot * cols + k, rank * cols + k);
            }
            let inv = pow_mod(m[rank * cols + c], p - 2, p);
            for r in rank + 1..rows {
                let f = m[r * cols + c] * inv % p;
                if f == 0 {
                    continue;
                }
                for k in c..cols {
                    m[r * cols + k] = (m[r * cols + k] + (p - f) * m[rank * cols + k]) % p;
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// A multiset of integer segments `[a, b] = {a, a+1, …, b}`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(i64, i64)>", into = "Vec<(i64, i64)>")]
pub struct Multisegment(Vec<(i64, i64)>);

impl TryFrom<Vec<(i64, i64)>> for Multisegment {
    type Error = QuiverError;
    fn try_from(v: Vec<(i64, i64)>) -> Result<Self, QuiverError> {
        Multisegment::new(v)
    }
}

impl From<Multisegment> for Vec<(i64, i64)> {
    fn from(m: Multisegment) -> Self {
        m.0
    }
}

impl Multisegment {
    pub fn new(mut segments: Vec<(i64, i64)>) -> Result<Self, QuiverError> {
        if let Some(&(a, b)) = segments.iter().find(|(a, b)| a > b) {
            return Err(QuiverError::BadSegment(a, b));
        }
        segments.sort_unstable();
        Ok(Multisegment(segments))
    }

    /// `count` copies of `[a, b]`.
    pub fn repeated(a: i64, b: i64, count: usize) -> Self {
        Multisegment(vec![(a, b); count])
    }

    pub fn segments(&self) -> &[(i64, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest point covered, if any.
    pub fn start(&self) -> Option<i64> {
        self.0.iter().map(|s| s.0).min()
    }

    /// Shifted so that the smallest point is `0`.
    pub fn normalized(&self) -> Self {
        let s = self.start().unwrap_or(0);
        Multisegment(self.0.iter().map(|&(a, b)| (a - s, b - s)).collect())
    }

    /// Multiplicity of each point from the smallest to the largest one.
    pub fn dims(&self) -> DimVector {
        let points: Vec<i64> = self.0.iter().flat_map(|&(a, b)| a..=b).collect();
        dims_from_exponents(&points)
    }

    /// Rank table computed combinatorially: `r(a, b)` counts the segments
    /// containing both `a` and `b + 1` (positions relative to the start).
    pub fn rank_table(&self) -> RankTable {
        let dims = self.dims();
        let s = self.start().unwrap_or(0);
        let l = dims.m.len();
        let mut r = BTreeMap::new();
        for a in 0..l {
            for b in a..l.saturating_sub(1) {
                let count =
                    self.0.iter().filter(|&&(c, d)| c - s <= a as i64 && d - s > b as i64).count();
                r.insert((a, b), count);
            }
        }
        RankTable { dims, r }
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{a},{b}]")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector {
    pub m: Vec<usize>,
}

impl DimVector {
    /// Leading and trailing zeros are dropped.
    pub fn new(m: Vec<usize>) -> Self {
        let first = m.iter().position(|&x| x > 0);
        match first {
            None => DimVector { m: Vec::new() },
            Some(f) => {
                let last = m.iter().rposition(|&x| x > 0).unwrap();
                DimVector { m: m[f..=last].to_vec() }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn total(&self) -> usize {
        self.m.iter().sum()
    }
}

pub fn even_condition(ms: &Multisegment) -> bool {
    ms.0.iter().all(|&(a, b)| (b - a + 1) % 2 == 0)
}

/// Multiplicity of each exponent between the smallest and largest one.
pub fn dims_from_exponents(exponents: &[i64]) -> DimVector {
    let (Some(&lo), Some(&hi)) = (exponents.iter().min(), exponents.iter().max()) else {
        return DimVector::default();
    };
    let mut m = vec![0; (hi - lo + 1) as usize];
    for &e in exponents {
        m[(e - lo) as usize] += 1;
    }
    DimVector { m }
}

/// The forced solution of `m_0 = k_0`, `m_i = k_i + k_{i−1}`, `m_l = k_{l−1}`.
pub fn k_decomposition(dims: &DimVector) -> Option<Vec<usize>> {
    let m = &dims.m;
    if m.is_empty() {
        return Some(Vec::new());
    }
    let l = m.len() - 1;
    let mut k = Vec::with_capacity(l);
    let mut prev = 0usize;
    for &mi in &m[..l] {
        let ki = mi.checked_sub(prev)?;
        k.push(ki);
        prev = ki;
    }
    (m[l] == prev).then_some(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverRep {
    pub dims: DimVector,
    pub p: u64,
    /// `maps[i]: V_i → V_{i+1}`, of shape `m_{i+1} × m_i`.
    pub maps: Vec<FpMatrix>,
}

impl QuiverRep {
    pub fn new(dims: DimVector, p: u64, maps: Vec<FpMatrix>) -> Result<Self, QuiverError> {
        let l = dims.m.len().saturating_sub(1);
        if maps.len() != l {
            return Err(QuiverError::Shape { index: maps.len(), got: (0, 0), expected: (0, 0) });
        }
        for (i, a) in maps.iter().enumerate() {
            let expected = (dims.m[i + 1], dims.m[i]);
            if (a.rows, a.cols) != expected {
                return Err(QuiverError::Shape { index: i, got: (a.rows, a.cols), expected });
            }
        }
        Ok(QuiverRep { dims, p, maps })
    }

    /// Direct sum of the indecomposables `[a, b]`: identity chains on one
    /// basis vector per segment.
    pub fn from_multisegment(ms: &Multisegment, p: u64) -> Self {
        let ms = ms.normalized();
        let dims = ms.dims();
        let l = dims.m.len().saturating_sub(1);
        // basis index of each segment at each vertex
        let mut next = vec![0usize; dims.m.len()];
        let mut slots: Vec<Vec<usize>> = Vec::new();
        for &(a, b) in &ms.0 {
            let mut v = Vec::new();
            for i in a..=b {
                v.push(next[i as usize]);
                next[i as usize] += 1;
            }
            slots.push(v);
        }
        let mut maps: Vec<FpMatrix> = (0..l).map(|i| FpMatrix::zeros(dims.m[i + 1], dims.m[i], p)).collect();
        for (&(a, b), v) in ms.0.iter().zip(&slots) {
            for i in a..b {
                let k = (i - a) as usize;
                maps[i as usize].set(v[k + 1], v[k], 1);
            }
        }
        QuiverRep { dims, p, maps }
    }

    /// `g · (A_i) = (g_{i+1} A_i g_i⁻¹)`, given `g_i` and their inverses.
    pub fn transform(&self, g: &[FpMatrix], g_inv: &[FpMatrix]) -> Self {
        let maps = self.maps.iter().enumerate().map(|(i, a)| g[i + 1].mul(a).mul(&g_inv[i])).collect();
        QuiverRep { dims: self.dims.clone(), p: self.p, maps }
    }
}

/// `r(a, b) = rank(A_b ∘ ⋯ ∘ A_a)` for `0 ≤ a ≤ b ≤ l − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankTable {
    pub dims: DimVector,
    pub r: BTreeMap<(usize, usize), usize>,
}

impl RankTable {
    /// Extended by `r(a, a−1) = m_a` and zero outside the quiver.
    pub fn get(&self, a: i64, b: i64) -> usize {
        let l = self.dims.m.len() as i64;
        if a < 0 || a >= l || b >= l - 1 {
            return if b == a - 1 && a >= 0 && a < l { self.dims.m[a as usize] } else { 0 };
        }
        if b == a - 1 {
            return self.dims.m[a as usize];
        }
        self.r.get(&(a as usize, b as usize)).copied().unwrap_or(0)
    }

    /// Entrywise comparison; both tables must have the same dimension vector.
    pub fn leq(&self, other: &RankTable) -> Result<bool, QuiverError> {
        if self.dims != other.dims {
            return Err(QuiverError::DimensionMismatch(self.dims.m.clone(), other.dims.m.clone()));
        }
        Ok(self.r.iter().all(|(k, v)| *v <= other.r[k]))
    }
}

pub fn rank_table(rep: &QuiverRep) -> RankTable {
    let l = rep.maps.len();
    let mut r = BTreeMap::new();
    for a in 0..l {
        let mut acc = rep.maps[a].clone();
        r.insert((a, a), acc.rank());
        for b in a + 1..l {
            acc = rep.maps[b].mul(&acc);
            r.insert((a, b), acc.rank());
        }
    }
    RankTable { dims: rep.dims.clone(), r }
}

/// Inverts [`Multisegment::rank_table`] by inclusion–exclusion:
/// `#[a, b] = r(a, b−1) − r(a−1, b−1) − r(a, b) + r(a−1, b)`.
/// Segments are positioned from `0`.
pub fn table_to_multisegment(t: &RankTable) -> Result<Multisegment, QuiverError> {
    let l = t.dims.m.len();
    let mut segs = Vec::new();
    for a in 0..l {
        for b in a..l {
            let (ai, bi) = (a as i64, b as i64);
            let c = t.get(ai, bi - 1) as i64 - t.get(ai - 1, bi - 1) as i64 - t.get(ai, bi) as i64
                + t.get(ai - 1, bi) as i64;
            if c < 0 {
                return Err(QuiverError::NegativeMultiplicity { a, b, value: c });
            }
            segs.extend(std::iter::repeat_n((ai, bi), c as usize));
        }
    }
    Multisegment::new(segs)
}

/// `a ≤ b`: the orbit of `a` lies in the closure of the orbit of `b`.
pub fn closure_leq(a: &Multisegment, b: &Multisegment) -> Result<bool, QuiverError> {
    a.normalized().rank_table().leq(&b.normalized().rank_table())
}

/// All multisegments with the given dimension vector, positioned from `0`.
pub fn multisegments_with_dims(dims: &DimVector) -> Vec<Multisegment> {
    fn go(rest: &mut Vec<usize>, from: (usize, usize), cur: &mut Vec<(i64, i64)>, out: &mut Vec<Multisegment>) {
        let Some(a) = rest.iter().position(|&x| x > 0) else {
            out.push(Multisegment(cur.clone()));
            return;
        };
        // segments are produced in nondecreasing order, all starting at the
        // first vertex with remaining dimension
        for b in a..rest.len() {
            if rest[b] == 0 {
                break;
            }
            if (a, b) < from {
                continue;
            }
            for x in &mut rest[a..=b] {
                *x -= 1;
            }
            cur.push((a as i64, b as i64));
            go(rest, (a, b), cur, out);
            cur.pop();
            for x in &mut rest[a..=b] {
                *x += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut dims.m.clone(), (0, 0), &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Every free block uniform over `F_p`.
    Uniform,
    /// Every free block uniform among products `U V` through a rank drawn
    /// uniformly from `0..=min(rows, cols)`; reaches the small strata.
    #[default]
    RankStratified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    pub mode: SamplingMode,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { trials: 500, prime: DEFAULT_PRIME, seed: 0, mode: SamplingMode::default() }
    }
}

impl SamplingConfig {
    fn check(&self) -> Result<(), QuiverError> {
        if !is_prime(self.prime) {
            return Err(QuiverError::NotPrime(self.prime));
        }
        if self.trials == 0 {
            return Err(QuiverError::NoTrials);
        }
        Ok(())
    }
}

/// Generator for one trial; independent of the order in which trials run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn free_block<R: Rng>(rows: usize, cols: usize, p: u64, mode: SamplingMode, rng: &mut R) -> FpMatrix {
    match mode {
        SamplingMode::Uniform => FpMatrix::random(rows, cols, p, rng),
        SamplingMode::RankStratified => {
            let rank = rng.gen_range(0..=rows.min(cols));
            FpMatrix::random_of_rank(rows, cols, rank, p, rng)
        }
    }
}

/// Number of free entries of `S`.
pub fn s_dimension(k: &[usize]) -> usize {
    let l = k.len();
    let kk = |i: i64| if i < 0 || i >= l as i64 { 0 } else { k[i as usize] };
    let b: usize = (0..l as i64).map(|i| kk(i + 1) * kk(i)).sum();
    let c: usize = (0..l as i64).map(|i| kk(i + 1) * kk(i - 1)).sum();
    b + c
}

/// One point of `S`.
pub fn sample_s<R: Rng>(dims: &DimVector, p: u64, mode: SamplingMode, rng: &mut R) -> Result<QuiverRep, QuiverError> {
    let k = k_decomposition(dims).ok_or_else(|| QuiverError::NoKDecomposition(dims.m.clone()))?;
    let l = k.len();
    let kk = |i: i64| if i < 0 || i >= l as i64 { 0 } else { k[i as usize] };
    let b: Vec<FpMatrix> = (0..l as i64).map(|i| free_block(kk(i + 1), kk(i), p, mode, rng)).collect();
    let mut maps = Vec::with_capacity(l);
    for i in 0..l as i64 {
        let (k_prev, k_i, k_next) = (kk(i - 1), kk(i), kk(i + 1));
        let mut a = FpMatrix::zeros(k_i + k_next, k_prev + k_i, p);
        if i > 0 {
            a.put_block(0, 0, &b[(i - 1) as usize], true);
        }
        a.put_block(0, k_prev, &FpMatrix::identity(k_i, p), false);
        let c = free_block(k_next, k_prev, p, mode, rng);
        a.put_block(k_i, 0, &c, false);
        a.put_block(k_i, k_prev, &b[i as usize], false);
        maps.push(a);
    }
    QuiverRep::new(dims.clone(), p, maps)
}

/// Orbits met by `trials` seeded samples of `S`, positioned from `0`.
pub fn orbits_meeting_s(dims: &DimVector, config: &SamplingConfig) -> Result<BTreeSet<Multisegment>, QuiverError> {
    config.check()?;
    k_decomposition(dims).ok_or_else(|| QuiverError::NoKDecomposition(dims.m.clone()))?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let rep = sample_s(dims, config.prime, config.mode, &mut rng)?;
            table_to_multisegment(&rank_table(&rep))
        })
        .collect()
}

/// Closure order on a set of multisegments of one dimension vector.
pub fn closure_poset(elements: &[Multisegment]) -> Result<Poset, QuiverError> {
    let tables: Vec<RankTable> = elements.iter().map(|m| m.normalized().rank_table()).collect();
    let n = elements.len();
    let mut lt = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            lt[i][j] = i != j && tables[i].leq(&tables[j])?;
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]) {
                covers.push([i, j]);
            }
        }
    }
    Ok(Poset::new(elements.iter().map(|m| m.to_string()).collect(), covers))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    No,
    YesSpherical,
    /// Dims `(m, m, m, m)` and the orbit `{[0,3]×m}`.
    #[serde(rename = "yes_section9")]
    YesSquareChain,
    CandidateUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinctionReport {
    pub multisegment: Multisegment,
    pub dims: DimVector,
    pub k: Option<Vec<usize>>,
    pub even: bool,
    pub verdict: Verdict,
    pub reason: String,
    pub config: SamplingConfig,
    /// Sampled orbits meeting `S`, empty when a necessary condition fails.
    pub eps_s: Vec<Multisegment>,
    pub eps_s_poset: Option<Poset>,
}

/// `(m, m, m, m)` with `k = (m, 0, m)`: every orbit meeting `S` is fixed by
/// the rank of the middle map, and only `{[0,3]×m}` is distinguished.
pub fn is_square_chain_shape(dims: &DimVector) -> bool {
    dims.m.len() == 4 && dims.m.iter().all(|&x| x == dims.m[0]) && dims.m[0] > 0
}

pub fn distinction_verdict(ms: &Multisegment, config: &SamplingConfig) -> Result<DistinctionReport, QuiverError> {
    config.check()?;
    let norm = ms.normalized();
    let dims = norm.dims();
    let k = k_decomposition(&dims);
    let even = even_condition(&norm);
    let mut report = DistinctionReport {
        multisegment: ms.clone(),
        dims: dims.clone(),
        k: k.clone(),
        even,
        verdict: Verdict::No,
        reason: String::new(),
        config: *config,
        eps_s: Vec::new(),
        eps_s_poset: None,
    };
    if k.is_none() {
        report.reason = "central character has no k-decomposition".into();
        return Ok(report);
    }
    if !even {
        report.reason = "a segment has odd length".into();
        return Ok(report);
    }
    let eps: Vec<Multisegment> = orbits_meeting_s(&dims, config)?.into_iter().collect();
    let maximal = eps.contains(&norm)
        && eps.iter().all(|e| *e == norm || !closure_leq(&norm, e).unwrap_or(false));
    report.eps_s_poset = Some(closure_poset(&eps)?);
    report.eps_s = eps;
    let m = dims.m.first().copied().unwrap_or(0);
    if is_square_chain_shape(&dims) && norm == Multisegment::repeated(0, 3, m) {
        report.verdict = Verdict::YesSquareChain;
        report.reason = format!("dims ({m},{m},{m},{m}) with k = ({m},0,{m}) and the full-rank orbit");
    } else if maximal {
        report.verdict = Verdict::YesSpherical;
        report.reason = "maximal among the sampled orbits meeting S".into();
    } else {
        report.verdict = Verdict::CandidateUnknown;
        report.reason = "satisfies the necessary conditions only".into();
    }
    Ok(report)
}

/// Largest number of representations [`orbit_census`] will enumerate.
pub const MAX_CENSUS: u64 = 1 << 20;

/// Outcome of classifying every representation of a dimension vector over a
/// small field by explicit orbit enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub dims: DimVector,
    pub p: u64,
    pub representations: u64,
    pub orbits: usize,
    /// Representations reached from no direct sum of segments.
    pub unreached: u64,
    /// `(orbit label, rank-table decomposition)` disagreements.
    pub mismatches: Vec<(Multisegment, Multisegment)>,
}

impl CensusReport {
    pub fn holds(&self) -> bool {
        self.unreached == 0 && self.mismatches.is_empty()
    }
}

/// Generators of `GL_d(F_p)`: transvections `I + E_{ab}` and the scaling of
/// the first coordinate by a primitive root, each with its inverse.
fn gl_generators(d: usize, p: u64) -> Vec<(FpMatrix, FpMatrix)> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if a != b {
                let mut g = FpMatrix::identity(d, p);
                g.set(a, b, 1);
                let mut h = FpMatrix::identity(d, p);
                h.set(a, b, p - 1);
                out.push((g, h));
            }
        }
    }
    if d > 0 && p > 2 {
        let root = (2..p).find(|&r| (1..p - 1).all(|e| pow_mod(r, e, p) != 1)).unwrap();
        let mut g = FpMatrix::identity(d, p);
        g.set(0, 0, root);
        let mut h = FpMatrix::identity(d, p);
        h.set(0, 0, pow_mod(root, p - 2, p));
        out.push((g, h));
    }
    out
}

/// Walks the orbit of every direct sum of segments with dimension vector
/// `dims` under `∏ GL(V_i)` and checks that the orbits cover all
/// representations and that [`table_to_multisegment`] returns the label of
/// the orbit on each of them.
pub fn orbit_census(dims: &DimVector, p: u64) -> Result<CensusReport, QuiverError> {
    if !is_prime(p) {
        return Err(QuiverError::NotPrime(p));
    }
    let m = &dims.m;
    let entries: u32 = m.windows(2).map(|w| (w[0] * w[1]) as u32).sum();
    let total = p.checked_pow(entries).filter(|&t| t <= MAX_CENSUS);
    let Some(total) = total else {
        return Err(QuiverError::TooLarge(format!("{p}^{entries}")));
    };
    let gens: Vec<Vec<(FpMatrix, FpMatrix)>> = m.iter().map(|&d| gl_generators(d, p)).collect();
    let key = |r: &QuiverRep| r.maps.iter().flat_map(|a| a.data.iter().map(|&x| x as u8)).collect::<Vec<u8>>();
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut report = CensusReport {
        dims: dims.clone(),
        p,
        representations: total,
        orbits: 0,
        unreached: 0,
        mismatches: Vec::new(),
    };
    let labels = multisegments_with_dims(dims);
    for (label, ms) in labels.iter().enumerate() {
        let start = QuiverRep::from_multisegment(ms, p);
        if let Some(&other) = seen.get(&key(&start)) {
            // two direct sums in one orbit
            report.mismatches.push((ms.clone(), labels[other].clone()));
            continue;
        }
        seen.insert(key(&start), label);
        report.orbits += 1;
        let mut stack = vec![start];
        while let Some(rep) = stack.pop() {
            let got = table_to_multisegment(&rank_table(&rep))?;
            if got != *ms {
                report.mismatches.push((ms.clone(), got));
            }
            for (v, gv) in gens.iter().enumerate() {
                for (g, g_inv) in gv {
                    let mut maps = rep.maps.clone();
                    if v > 0 {
                        maps[v - 1] = g.mul(&maps[v - 1]);
                    }
                    if v < maps.len() {
                        maps[v] = maps[v].mul(g_inv);
                    }
                    let next = QuiverRep { dims: rep.dims.clone(), p, maps };
                    if let Entry::Vacant(slot) = seen.entry(key(&next)) {
                        slot.insert(label);
                        stack.push(next);
                    }
                }
            }
        }
    }
    report.unreached = total - seen.len() as u64;
    Ok(report)
}

/// A random point of the orbit of the direct sum of the segments of `ms`.
pub fn generic_representation<R: Rng>(ms: &Multisegment, p: u64, rng: &mut R) -> QuiverRep {
    let rep = QuiverRep::from_multisegment(ms, p);
    let mut g = Vec::new();
    let mut g_inv = Vec::new();
    for &d in &rep.dims.m {
        let (a, b) = random_invertible(d, p, rng);
        g.push(a);
        g_inv.push(b);
    }
    rep.transform(&g, &g_inv)
}

/// A random invertible matrix and its inverse, as a product of random
/// transvections and scalings.
fn random_invertible<R: Rng>(d: usize, p: u64, rng: &mut R) -> (FpMatrix, FpMatrix) {
    let mut g = FpMatrix::identity(d, p);
    let mut h = FpMatrix::identity(d, p);
    if d == 0 {
        return (g, h);
    }
    for _ in 0..4 * d * d {
        let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
        let mut e = FpMatrix::identity(d, p);
        let mut e_inv = FpMatrix::identity(d, p);
        if a == b {
            let c = rng.gen_range(1..p);
            e.set(a, a, c);
            e_inv.set(a, a, pow_mod(c, p - 2, p));
        } else {
            let c = rng.gen_range(0..p);
            e.set(a, b, c);
            e_inv.set(a, b, (p - c) % p);
        }
        g = e.mul(&g);
        h = h.mul(&e_inv);
    }
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[(i64, i64)]) -> Multisegment {
        Multisegment::new(v.to_vec()).unwrap()
    }

    fn dv(v: &[usize]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn even_examples() {
        assert!(even_condition(&ms(&[(0, 3)])));
        assert!(!even_condition(&ms(&[(0, 0)])));
        assert!(even_condition(&ms(&[(0, 1), (2, 3), (0, 3)])));
    }

    #[test]
    fn dims_examples() {
        assert_eq!(dims_from_exponents(&[0, 1]).m, vec![1, 1]);
        assert_eq!(dims_from_exponents(&[0, 0, 1, 1, 2, 2, 3, 3]).m, vec![2, 2, 2, 2]);
        assert_eq!(dims_from_exponents(&[0, 2]).m, vec![1, 0, 1]);
        assert_eq!(dv(&[0, 1, 0]).m, vec![1]);
    }

    #[test]
    fn k_examples() {
        for m in 1..4 {
            assert_eq!(k_decomposition(&dv(&[m, m, m, m])), Some(vec![m, 0, m]));
        }
        assert_eq!(k_decomposition(&DimVector { m: vec![1, 0] }), None);
        assert_eq!(k_decomposition(&dv(&[1, 1])), Some(vec![1]));
        assert_eq!(k_decomposition(&dv(&[])), Some(vec![]));
        assert_eq!(k_decomposition(&dv(&[2])), None);
        assert_eq!(k_decomposition(&dv(&[1, 1, 0, 1, 1])), Some(vec![1, 0, 0, 1]));
    }

    #[test]
    fn rank_examples() {
        let p = 101;
        let zero = QuiverRep::new(dv(&[1, 1]), p, vec![FpMatrix::zeros(1, 1, p)]).unwrap();
        assert_eq!(rank_table(&zero).r[&(0, 0)], 0);
        assert_eq!(table_to_multisegment(&rank_table(&zero)).unwrap(), ms(&[(0, 0), (1, 1)]));
        let one = QuiverRep::new(dv(&[1, 1]), p, vec![FpMatrix::identity(1, p)]).unwrap();
        assert_eq!(rank_table(&one).r[&(0, 0)], 1);
        let chain = QuiverRep::new(dv(&[1, 1, 1]), p, vec![FpMatrix::identity(1, p); 2]).unwrap();
        assert_eq!(table_to_multisegment(&rank_table(&chain)).unwrap(), ms(&[(0, 2)]));
    }

    #[test]
    fn square_chain_rank_tables() {
        let p = 101;
        let m = 3;
        for r in 0..=m {
            let mut rng = trial_rng(7, r as u64);
            let a1 = FpMatrix::random_of_rank(m, m, r, p, &mut rng);
            assert_eq!(a1.rank(), r);
            let rep =
                QuiverRep::new(dv(&[m, m, m, m]), p, vec![FpMatrix::identity(m, p), a1, FpMatrix::identity(m, p)])
                    .unwrap();
            let t = rank_table(&rep);
            assert_eq!((t.r[&(0, 0)], t.r[&(2, 2)]), (m, m));
            assert_eq!((t.r[&(0, 1)], t.r[&(1, 2)], t.r[&(0, 2)]), (r, r, r));
            let mut expected = vec![(0, 3); r];
            expected.extend(vec![(0, 1); m - r]);
            expected.extend(vec![(2, 3); m - r]);
            assert_eq!(table_to_multisegment(&t).unwrap(), ms(&expected));
        }
    }

    #[test]
    fn closure_examples() {
        let a = ms(&[(0, 1), (2, 3)]);
        let b = ms(&[(0, 3)]);
        assert!(closure_leq(&a, &a).unwrap());
        assert!(closure_leq(&a, &b).unwrap());
        assert!(!closure_leq(&b, &a).unwrap());
        assert!(closure_leq(&a, &ms(&[(0, 1)])).is_err());
    }

    #[test]
    fn multisegment_enumeration() {
        assert_eq!(multisegments_with_dims(&dv(&[1, 1])).len(), 2);
        assert_eq!(multisegments_with_dims(&dv(&[1, 1, 1])).len(), 4);
        // rank r of the middle block, 0..=m
        assert_eq!(multisegments_with_dims(&dv(&[2, 2])).len(), 3);
        for m in multisegments_with_dims(&dv(&[2, 1, 2])) {
            assert_eq!(m.dims(), dv(&[2, 1, 2]));
        }
    }

    #[test]
    fn sample_shapes() {
        let mut rng = trial_rng(1, 0);
        let rep = sample_s(&dv(&[1, 1]), 101, SamplingMode::Uniform, &mut rng).unwrap();
        assert_eq!(rep.maps, vec![FpMatrix::identity(1, 101)]);
        let rep = sample_s(&dv(&[2, 2, 2, 2]), 101, SamplingMode::Uniform, &mut rng).unwrap();
        assert_eq!(rep.maps[0], FpMatrix::identity(2, 101));
        assert_eq!(rep.maps[2], FpMatrix::identity(2, 101));
        assert_eq!(s_dimension(&[2, 0, 2]), 4);
        let again = |s| sample_s(&dv(&[2, 3, 3, 2]), 101, SamplingMode::Uniform, &mut trial_rng(s, 4)).unwrap();
        assert_eq!(again(9), again(9));
        assert!(sample_s(&dv(&[1, 2]), 101, SamplingMode::Uniform, &mut rng).is_err());
    }

    #[test]
    fn square_chain_sampling() {
        let config = SamplingConfig { trials: 200, ..Default::default() };
        let eps = orbits_meeting_s(&dv(&[1, 1, 1, 1]), &config).unwrap();
        assert_eq!(eps, BTreeSet::from([ms(&[(0, 3)]), ms(&[(0, 1), (2, 3)])]));
        let eps = orbits_meeting_s(&dv(&[1, 1]), &config).unwrap();
        assert_eq!(eps, BTreeSet::from([ms(&[(0, 1)])]));
    }

    #[test]
    fn verdicts() {
        let config = SamplingConfig { trials: 200, ..Default::default() };
        assert_eq!(distinction_verdict(&ms(&[(0, 0), (1, 1)]), &config).unwrap().verdict, Verdict::No);
        assert_eq!(distinction_verdict(&ms(&[(0, 3), (0, 3)]), &config).unwrap().verdict, Verdict::YesSquareChain);
        let r = distinction_verdict(&ms(&[(0, 1), (2, 3)]), &config).unwrap();
        assert_eq!(r.verdict, Verdict::CandidateUnknown);
        assert_eq!(r.eps_s.len(), 2);
        assert_eq!(distinction_verdict(&ms(&[(0, 1)]), &config).unwrap().verdict, Verdict::YesSpherical);
        assert_eq!(distinction_verdict(&ms(&[]), &config).unwrap().verdict, Verdict::YesSpherical);
    }

    #[test]
    fn census_small() {
        for d in [vec![1, 1], vec![2, 1], vec![1, 2, 1], vec![2, 2]] {
            let r = orbit_census(&dv(&d), 3).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        assert_eq!(orbit_census(&dv(&[2, 2]), 3).unwrap().orbits, 3);
    }

    #[test]
    fn generic_round_trip() {
        let mut rng = trial_rng(3, 0);
        for m in multisegments_with_dims(&dv(&[2, 1, 2])) {
            let rep = generic_representation(&m, 101, &mut rng);
            assert_eq!(table_to_multisegment(&rank_table(&rep)).unwrap(), m);
        }
    }

    #[test]
    fn json() {
        let m = ms(&[(2, 3), (0, 1)]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[0,1],[2,3]]");
        assert_eq!(serde_json::from_str::<Multisegment>("[[0,1],[2,3]]").unwrap(), m);
        assert!(serde_json::from_str::<Multisegment>("[[3,1]]").is_err());
    }
}
