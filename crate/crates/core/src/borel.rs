//! Borel orbits on the space of invertible antisymmetric `2n × 2n` matrices
//! and relevant orbits on the dual side.
//!
//! Both are indexed by partitions of `{1, …, 2n}` into pairs. On the `X` side a
//! partition is the support pattern of a monomial antisymmetric matrix; on the
//! dual side it is `{{σ(i), σ(i+n)}}` for a coset `σ·α(S_n)` of
//! `S_2n / α(S_n)` with `α(τ)(x) = τ(x)` for `x ≤ n` and `τ(x−n)+n` otherwise.
//!
//! Finite permutations are 1-based windows `[σ(1), …, σ(m)]`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::Poset;

/// Largest `n` for which posets are built.
pub const MAX_POSET_N: usize = 5;
/// Largest `n` for the exhaustive checks (`verify_reversal`, `stabilizer_check`).
pub const MAX_CHECK_N: usize = 4;
const MAX_NORMAL_FORM_N: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BorelError {
    #[error("not a permutation of 1..={size}: {window:?}")]
    InvalidPermutation { window: Vec<usize>, size: usize },
    #[error("invalid pair partition: {0}")]
    InvalidPartition(String),
    #[error("coset of {0:?} is not relevant")]
    NotRelevant(Vec<usize>),
    #[error("n = {n} exceeds the size guard {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("n must be positive")]
    ZeroRank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    X,
    #[serde(alias = "dual")]
    DualRelevant,
}

/// Number of inversions of a 1-based permutation window.
pub fn perm_length(perm: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}

/// `(a ∘ b)(i) = a(b(i))`.
pub fn perm_compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x - 1]).collect()
}

pub fn perm_inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x - 1] = i + 1;
    }
    inv
}

pub fn simple_transposition(size: usize, i: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=size).collect();
    p.swap(i - 1, i);
    p
}

pub fn check_permutation(window: &[usize]) -> Result<(), BorelError> {
    let size = window.len();
    let mut seen = vec![false; size];
    for &x in window {
        if x == 0 || x > size || seen[x - 1] {
            return Err(BorelError::InvalidPermutation { window: window.to_vec(), size });
        }
        seen[x - 1] = true;
    }
    Ok(())
}

/// All permutations of `1..=size` in lexicographic order.
pub fn all_permutations(size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=size).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..size).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..size).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Word `s_{w[0]} s_{w[1]} …` in `S_size` as a permutation window.
pub fn perm_from_word(size: usize, word: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=size).collect();
    for &i in word {
        p.swap(i - 1, i);
    }
    p
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr")]
pub struct PairPartition {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
struct PartitionRepr {
    n: usize,
    pairs: Vec<[usize; 2]>,
}

impl TryFrom<PartitionRepr> for PairPartition {
    type Error = BorelError;
    fn try_from(r: PartitionRepr) -> Result<Self, BorelError> {
        let p = PairPartition::new(r.pairs)?;
        if p.n != r.n {
            return Err(BorelError::InvalidPartition(format!("expected {} pairs, got {}", r.n, p.n)));
        }
        Ok(p)
    }
}

impl PairPartition {
    pub fn new(pairs: Vec<[usize; 2]>) -> Result<Self, BorelError> {
        let n = pairs.len();
        if n == 0 {
            return Err(BorelError::ZeroRank);
        }
        let mut seen = vec![false; 2 * n];
        for &[a, b] in &pairs {
            for x in [a, b] {
                if x == 0 || x > 2 * n || seen[x - 1] {
                    return Err(BorelError::InvalidPartition(format!("{pairs:?}")));
                }
                seen[x - 1] = true;
            }
        }
        Ok(Self::normalized(n, pairs))
    }

    fn normalized(n: usize, pairs: Vec<[usize; 2]>) -> Self {
        let mut pairs: Vec<[usize; 2]> = pairs.into_iter().map(|[a, b]| [a.min(b), a.max(b)]).collect();
        pairs.sort_unstable();
        PairPartition { n, pairs }
    }

    /// `{1,2}, {3,4}, …, {2n−1,2n}`: the open orbit.
    pub fn u_max(n: usize) -> Self {
        PairPartition { n, pairs: (0..n).map(|i| [2 * i + 1, 2 * i + 2]).collect() }
    }

    pub fn from_involution(z: &[usize]) -> Result<Self, BorelError> {
        check_permutation(z)?;
        if z.len() % 2 == 1 {
            return Err(BorelError::InvalidPartition(format!("odd size {}", z.len())));
        }
        let mut pairs = Vec::new();
        for (i, &x) in z.iter().enumerate() {
            if x == i + 1 || z[x - 1] != i + 1 {
                return Err(BorelError::InvalidPartition(format!("{z:?} is not fixed-point-free involution")));
            }
            if i + 1 < x {
                pairs.push([i + 1, x]);
            }
        }
        Self::new(pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    pub fn involution(&self) -> Vec<usize> {
        let mut z = vec![0; 2 * self.n];
        for &[a, b] in &self.pairs {
            z[a - 1] = b;
            z[b - 1] = a;
        }
        z
    }

    pub fn partner(&self, x: usize) -> usize {
        self.pairs.iter().find_map(|&[a, b]| if a == x { Some(b) } else if b == x { Some(a) } else { None }).unwrap()
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, [a, b]) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        write!(f, "}}")
    }
}

/// A relevant coset `σ·α(S_n)`, stored through its normal-form representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CosetRepr")]
pub struct RelevantCoset {
    n: usize,
    rep: Vec<usize>,
}

#[derive(Deserialize)]
struct CosetRepr {
    rep: Vec<usize>,
}

impl TryFrom<CosetRepr> for RelevantCoset {
    type Error = BorelError;
    fn try_from(r: CosetRepr) -> Result<Self, BorelError> {
        RelevantCoset::from_permutation(&r.rep)
    }
}

impl RelevantCoset {
    /// The coset of an arbitrary `σ ∈ S_2n`; fails unless it is relevant.
    pub fn from_permutation(sigma: &[usize]) -> Result<Self, BorelError> {
        check_permutation(sigma)?;
        if sigma.is_empty() || sigma.len() % 2 == 1 {
            return Err(BorelError::InvalidPermutation { window: sigma.to_vec(), size: sigma.len() });
        }
        if !is_relevant(sigma) {
            return Err(BorelError::NotRelevant(sigma.to_vec()));
        }
        let n = sigma.len() / 2;
        let rep = coset_normal_form(sigma)?;
        Ok(RelevantCoset { n, rep })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rep(&self) -> &[usize] {
        &self.rep
    }

    /// Coxeter length of the normal form, the minimum over the coset.
    pub fn dual_rank(&self) -> usize {
        perm_length(&self.rep)
    }

    pub fn pairs(&self) -> PairPartition {
        let n = self.n;
        PairPartition::normalized(n, (0..n).map(|i| [self.rep[i], self.rep[i + n]]).collect())
    }
}

impl fmt::Display for RelevantCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.rep {
            write!(f, "{x}")?;
            if self.n > 4 {
                write!(f, " ")?;
            }
        }
        Ok(())
    }
}

pub fn is_relevant(sigma: &[usize]) -> bool {
    let n = sigma.len() / 2;
    (0..n).all(|i| sigma[i] > sigma[i + n])
}

/// Minimal-length representative of `σ·α(S_n)`, lexicographically smallest
/// among ties.
///
/// Reordering the columns `(σ(i), σ(i+n))` leaves the inversions between the
/// two halves unchanged, so only the inversions inside each half depend on the
/// order. That is a linear-ordering problem, solved by dynamic programming
/// over subsets.
pub fn coset_normal_form(sigma: &[usize]) -> Result<Vec<usize>, BorelError> {
    let n = sigma.len() / 2;
    if n > MAX_NORMAL_FORM_N {
        return Err(BorelError::SizeGuard { n, max: MAX_NORMAL_FORM_N });
    }
    let cols: Vec<(usize, usize)> = (0..n).map(|i| (sigma[i], sigma[i + n])).collect();
    // cost[k][l]: inversions created by putting column k before column l.
    let cost = |k: usize, l: usize| -> u32 {
        u32::from(cols[k].0 > cols[l].0) + u32::from(cols[k].1 > cols[l].1)
    };
    let full = (1usize << n) - 1;
    // best[S] = minimal cost of ordering the columns in S.
    let mut best = vec![0u32; 1 << n];
    for set in 1..=full {
        let mut m = u32::MAX;
        for k in 0..n {
            if set & (1 << k) != 0 {
                let rest = set & !(1 << k);
                let c: u32 = (0..n).filter(|&l| rest & (1 << l) != 0).map(|l| cost(k, l)).sum();
                m = m.min(c + best[rest]);
            }
        }
        best[set] = m;
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let mut candidates: Vec<usize> = (0..n).filter(|&k| set & (1 << k) != 0).collect();
        candidates.sort_by_key(|&k| cols[k].0);
        let k = candidates
            .into_iter()
            .find(|&k| {
                let rest = set & !(1 << k);
                let c: u32 = (0..n).filter(|&l| rest & (1 << l) != 0).map(|l| cost(k, l)).sum();
                c + best[rest] == best[set]
            })
            .unwrap();
        order.push(k);
        set &= !(1 << k);
    }
    let mut rep = vec![0; 2 * n];
    for (i, &k) in order.iter().enumerate() {
        rep[i] = cols[k].0;
        rep[i + n] = cols[k].1;
    }
    Ok(rep)
}

/// All pair partitions of `[2n]`, in lexicographic order of their sorted pairs.
pub fn enumerate_matchings(n: usize) -> Vec<PairPartition> {
    fn go(free: &mut Vec<usize>, cur: &mut Vec<[usize; 2]>, out: &mut Vec<PairPartition>, n: usize) {
        if free.is_empty() {
            out.push(PairPartition { n, pairs: cur.clone() });
            return;
        }
        let a = free.remove(0);
        for idx in 0..free.len() {
            let b = free.remove(idx);
            cur.push([a, b]);
            go(free, cur, out, n);
            cur.pop();
            free.insert(idx, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(&mut (1..=2 * n).collect(), &mut Vec::new(), &mut out, n);
    out
}

/// Relevant cosets, found by running over all cosets of `S_2n / α(S_n)`
/// (pair partitions with an orientation of each pair) and keeping the relevant
/// ones. Sorted by representative.
pub fn enumerate_relevant(n: usize) -> Vec<RelevantCoset> {
    let mut out = BTreeSet::new();
    for m in enumerate_matchings(n) {
        for mask in 0..(1usize << n) {
            let mut sigma = vec![0; 2 * n];
            for (i, &[a, b]) in m.pairs.iter().enumerate() {
                let (x, y) = if mask & (1 << i) != 0 { (a, b) } else { (b, a) };
                sigma[i] = x;
                sigma[i + n] = y;
            }
            if is_relevant(&sigma) {
                out.insert(RelevantCoset { n, rep: coset_normal_form(&sigma).unwrap() });
            }
        }
    }
    out.into_iter().collect()
}

/// Relabel every element of every pair by `w`.
pub fn w_act(w: &[usize], m: &PairPartition) -> Result<PairPartition, BorelError> {
    check_permutation(w)?;
    if w.len() != 2 * m.n {
        return Err(BorelError::InvalidPermutation { window: w.to_vec(), size: 2 * m.n });
    }
    Ok(PairPartition::normalized(m.n, m.pairs.iter().map(|&[a, b]| [w[a - 1], w[b - 1]]).collect()))
}

/// The relevant coset whose pairs are `m`: each pair is written larger
/// element first.
pub fn phi_x(m: &PairPartition) -> RelevantCoset {
    let n = m.n;
    let mut sigma = vec![0; 2 * n];
    for (i, &[a, b]) in m.pairs.iter().enumerate() {
        sigma[i] = b;
        sigma[i + n] = a;
    }
    RelevantCoset { n, rep: coset_normal_form(&sigma).unwrap() }
}

/// `s_i * c`: the product `s_i σ` when it is relevant, `c` otherwise.
pub fn star_act(i: usize, c: &RelevantCoset) -> Result<RelevantCoset, BorelError> {
    let size = 2 * c.n;
    if i == 0 || i >= size {
        return Err(BorelError::InvalidPermutation { window: vec![i], size });
    }
    let moved = perm_compose(&simple_transposition(size, i), &c.rep);
    if is_relevant(&moved) {
        Ok(RelevantCoset { n: c.n, rep: coset_normal_form(&moved)? })
    } else {
        Ok(c.clone())
    }
}

/// Star action of the word `s_{w[0]} ⋯ s_{w[k−1]}`, rightmost letter first.
pub fn star_act_word(word: &[usize], c: &RelevantCoset) -> Result<RelevantCoset, BorelError> {
    word.iter().rev().try_fold(c.clone(), |acc, &i| star_act(i, &acc))
}

pub fn rank_x(m: &PairPartition) -> usize {
    let n = m.n;
    (n * (2 * n - 1) - perm_length(&m.involution())) / 2
}

pub fn weak_order(n: usize, side: Side) -> Result<Poset, BorelError> {
    if n == 0 {
        return Err(BorelError::ZeroRank);
    }
    if n > MAX_POSET_N {
        return Err(BorelError::SizeGuard { n, max: MAX_POSET_N });
    }
    let size = 2 * n;
    match side {
        Side::X => {
            let elems = enumerate_matchings(n);
            let index: std::collections::HashMap<_, _> = elems.iter().cloned().zip(0..).collect();
            let covers: Vec<[usize; 2]> = elems
                .par_iter()
                .enumerate()
                .flat_map_iter(|(k, m)| {
                    let r = rank_x(m);
                    let index = &index;
                    (1..size).filter_map(move |i| {
                        let up = w_act(&simple_transposition(size, i), m).unwrap();
                        (rank_x(&up) == r + 1).then(|| [k, index[&up]])
                    })
                })
                .collect();
            Ok(Poset::new(elems.iter().map(|m| m.to_string()).collect(), covers))
        }
        Side::DualRelevant => {
            let elems = enumerate_relevant(n);
            let index: std::collections::HashMap<_, _> = elems.iter().cloned().zip(0..).collect();
            let covers: Vec<[usize; 2]> = elems
                .par_iter()
                .enumerate()
                .flat_map_iter(|(k, c)| {
                    let r = c.dual_rank();
                    let index = &index;
                    (1..size).filter_map(move |i| {
                        let up = star_act(i, c).unwrap();
                        (up.dual_rank() == r + 1).then(|| [k, index[&up]])
                    })
                })
                .collect();
            Ok(Poset::new(elems.iter().map(|c| format!("{} {}", c, c.pairs())).collect(), covers))
        }
    }
}

/// Outcome of the structural comparison of the two weak orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReversalReport {
    pub n: usize,
    pub elements: usize,
    pub x_graded: bool,
    pub dual_graded: bool,
    pub x_extremes_unique: bool,
    pub dual_extremes_unique: bool,
    /// Every non-trivial simple move changes the grading by exactly one.
    pub x_moves_unit: bool,
    pub dual_moves_unit: bool,
    pub covers_reversed: bool,
    pub rank_antitone: bool,
}

impl ReversalReport {
    pub fn holds(&self) -> bool {
        self.x_graded
            && self.dual_graded
            && self.x_extremes_unique
            && self.dual_extremes_unique
            && self.x_moves_unit
            && self.dual_moves_unit
            && self.covers_reversed
            && self.rank_antitone
    }
}

pub fn reversal_report(n: usize) -> Result<ReversalReport, BorelError> {
    let xs = enumerate_matchings(n);
    let xp = weak_order(n, Side::X)?;
    let dp = weak_order(n, Side::DualRelevant)?;
    let duals = enumerate_relevant(n);
    let dual_index: std::collections::HashMap<_, _> = duals.iter().cloned().zip(0..).collect();
    let x_rank: Vec<usize> = xs.iter().map(rank_x).collect();
    let d_rank: Vec<usize> = duals.iter().map(|c| c.dual_rank()).collect();
    let image: Vec<usize> = xs.iter().map(|m| dual_index[&phi_x(m)]).collect();

    let size = 2 * n;
    let x_moves_unit = xs.iter().all(|m| {
        (1..size).all(|i| {
            let up = w_act(&simple_transposition(size, i), m).unwrap();
            up == *m || rank_x(&up).abs_diff(rank_x(m)) == 1
        })
    });
    let dual_moves_unit = duals.iter().all(|c| {
        (1..size).all(|i| {
            let up = star_act(i, c).unwrap();
            up == *c || up.dual_rank().abs_diff(c.dual_rank()) == 1
        })
    });

    let mapped: HashSet<[usize; 2]> = xp.covers.iter().map(|&[a, b]| [image[b], image[a]]).collect();
    let dual_covers: HashSet<[usize; 2]> = dp.covers.iter().copied().collect();
    let covers_reversed = mapped == dual_covers;

    let total = x_rank.iter().zip(&image).map(|(r, &k)| r + d_rank[k]).collect::<BTreeSet<_>>();
    let rank_antitone = total.len() == 1;

    Ok(ReversalReport {
        n,
        elements: xs.len(),
        x_graded: xp.is_graded_by(&x_rank),
        dual_graded: dp.is_graded_by(&d_rank),
        x_extremes_unique: xp.minimal_elements().len() == 1 && xp.maximal_elements().len() == 1,
        dual_extremes_unique: dp.minimal_elements().len() == 1 && dp.maximal_elements().len() == 1,
        x_moves_unit,
        dual_moves_unit,
        covers_reversed,
        rank_antitone,
    })
}

/// `Φ_X` is an anti-isomorphism of the two graded weak orders.
pub fn verify_reversal(n: usize) -> Result<bool, BorelError> {
    if n > MAX_CHECK_N {
        return Err(BorelError::SizeGuard { n, max: MAX_CHECK_N });
    }
    Ok(reversal_report(n)?.holds())
}

/// `s_{2i−1}` for `1 ≤ i ≤ n` and `s_{2i} s_{2i−1} s_{2i+1} s_{2i}` for `1 ≤ i < n`.
pub fn stabilizer_generators(n: usize) -> Vec<Vec<usize>> {
    let size = 2 * n;
    let mut gens: Vec<Vec<usize>> = (1..=n).map(|i| simple_transposition(size, 2 * i - 1)).collect();
    gens.extend((1..n).map(|i| perm_from_word(size, &[2 * i, 2 * i - 1, 2 * i + 1, 2 * i])));
    gens
}

/// Closure of a set of generators under composition.
pub fn generated_group(size: usize, gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (1..=size).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = perm_compose(s, &g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub n: usize,
    pub generated_order: usize,
    pub stabilizer_order: usize,
    pub equal: bool,
}

pub fn stabilizer_report(n: usize) -> Result<StabilizerReport, BorelError> {
    if n == 0 {
        return Err(BorelError::ZeroRank);
    }
    if n > MAX_CHECK_N {
        return Err(BorelError::SizeGuard { n, max: MAX_CHECK_N });
    }
    let size = 2 * n;
    let generated = generated_group(size, &stabilizer_generators(n));
    let u = PairPartition::u_max(n);
    let stab: HashSet<Vec<usize>> =
        all_permutations(size).into_iter().filter(|w| w_act(w, &u).unwrap() == u).collect();
    Ok(StabilizerReport {
        n,
        generated_order: generated.len(),
        stabilizer_order: stab.len(),
        equal: generated == stab,
    })
}

pub fn stabilizer_check(n: usize) -> Result<bool, BorelError> {
    Ok(stabilizer_report(n)?.equal)
}
