//! The extended affine Weyl group of `GL_N` as `N`-periodic bijections of ℤ.
//!
//! An element `f` is stored through its window `[f(1), …, f(N)]`; the rest of
//! the bijection is recovered from `f(i + N) = f(i) + N`. Generators:
//!
//! * `s_i` for `1 ≤ i < N` swaps window positions `i` and `i + 1`;
//! * `s_0` is the affine reflection `1 ↦ 0`, `N ↦ N + 1`;
//! * `ω` is the length-zero rotation `i ↦ i + 1`, with `ω s_i ω⁻¹ = s_{i+1 mod N}`.
//!
//! The coweight `λ` corresponds to the translation `t_λ(i) = i + N·λ_i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid window {window:?}: {reason}")]
    InvalidWindow { window: Vec<i64>, reason: &'static str },
    #[error("generator s_{index} does not exist in rank {rank}")]
    BadGenerator { index: usize, rank: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct AffinePermutation {
    window: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    #[serde(rename = "N")]
    n: usize,
    window: Vec<i64>,
}

impl TryFrom<PermRepr> for AffinePermutation {
    type Error = AffineError;
    fn try_from(r: PermRepr) -> Result<Self, AffineError> {
        if r.window.len() != r.n {
            return Err(AffineError::RankMismatch { left: r.n, right: r.window.len() });
        }
        AffinePermutation::new(r.window)
    }
}

impl From<AffinePermutation> for PermRepr {
    fn from(p: AffinePermutation) -> Self {
        PermRepr { n: p.rank(), window: p.window }
    }
}

/// A factorization `s_{gens[0]} ∘ … ∘ s_{gens[k-1]} ∘ ω^rotation` with
/// `k` equal to the length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub gens: Vec<usize>,
    pub rotation: i64,
}

impl AffinePermutation {
    pub fn new(window: Vec<i64>) -> Result<Self, AffineError> {
        let n = window.len();
        if n == 0 {
            return Err(AffineError::InvalidWindow { window, reason: "empty window" });
        }
        let mut seen = vec![false; n];
        for &v in &window {
            let r = v.rem_euclid(n as i64) as usize;
            if seen[r] {
                return Err(AffineError::InvalidWindow { window, reason: "residues are not distinct" });
            }
            seen[r] = true;
        }
        Ok(AffinePermutation { window })
    }

    pub fn identity(n: usize) -> Self {
        AffinePermutation { window: (1..=n as i64).collect() }
    }

    /// The simple reflection `s_i`, `0 ≤ i < N`. Needs `N ≥ 2`.
    pub fn simple(n: usize, i: usize) -> Result<Self, AffineError> {
        if n < 2 || i >= n {
            return Err(AffineError::BadGenerator { index: i, rank: n });
        }
        Ok(Self::identity(n).mul_simple_right(i))
    }

    pub fn rotation(n: usize) -> Self {
        Self::rotation_pow(n, 1)
    }

    /// `ω^k`.
    pub fn rotation_pow(n: usize, k: i64) -> Self {
        AffinePermutation { window: (1..=n as i64).map(|i| i + k).collect() }
    }

    pub fn translation(lambda: &Coweight) -> Self {
        let n = lambda.rank() as i64;
        AffinePermutation {
            window: lambda.entries().iter().enumerate().map(|(i, &l)| i as i64 + 1 + n * l).collect(),
        }
    }

    /// Embeds a finite permutation given in 1-based one-line notation.
    pub fn from_finite(perm: &[usize]) -> Result<Self, AffineError> {
        Self::new(perm.iter().map(|&v| v as i64).collect())
    }

    pub fn from_word(n: usize, gens: &[usize], rotation: i64) -> Result<Self, AffineError> {
        let mut x = Self::identity(n);
        for &g in gens {
            if n < 2 || g >= n {
                return Err(AffineError::BadGenerator { index: g, rank: n });
            }
            x = x.mul_simple_right(g);
        }
        Ok(x.compose_unchecked(&Self::rotation_pow(n, rotation)))
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// `f(i)` for any integer `i`.
    pub fn apply(&self, i: i64) -> i64 {
        let n = self.rank() as i64;
        let r = (i - 1).rem_euclid(n);
        self.window[r as usize] + (i - 1 - r)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self, AffineError> {
        self.check_rank(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        AffinePermutation { window: other.window.iter().map(|&j| self.apply(j)).collect() }
    }

    pub fn check_rank(&self, other: &Self) -> Result<(), AffineError> {
        if self.rank() != other.rank() {
            return Err(AffineError::RankMismatch { left: self.rank(), right: other.rank() });
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank() as i64;
        let mut window = vec![0; self.rank()];
        for (i, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(n);
            window[r as usize] = i as i64 + 1 - (v - 1 - r);
        }
        AffinePermutation { window }
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i as i64 + 1)
    }

    /// Number of pairs `1 ≤ i ≤ N`, `i < j ∈ ℤ` with `f(i) > f(j)`.
    pub fn length(&self) -> usize {
        let n = self.rank() as i64;
        let mut total = 0i64;
        for i in 0..self.window.len() {
            for j in i + 1..self.window.len() {
                total += (self.window[j] - self.window[i]).div_euclid(n).abs();
            }
        }
        total as usize
    }

    /// The `k` with `self = (length-positive part) ∘ ω^k`.
    pub fn rotation_exponent(&self) -> i64 {
        let n = self.rank() as i64;
        let excess: i64 = self.window.iter().sum::<i64>() - n * (n + 1) / 2;
        excess / n
    }

    /// `self ∘ s_i`: swaps window positions (position `0` is `f(N) − N`).
    pub fn mul_simple_right(&self, i: usize) -> Self {
        let n = self.rank();
        let mut window = self.window.clone();
        if i == 0 {
            let first = window[0];
            window[0] = window[n - 1] - n as i64;
            window[n - 1] = first + n as i64;
        } else {
            window.swap(i - 1, i);
        }
        AffinePermutation { window }
    }

    /// `s_i ∘ self`: relabels the values in residue classes `i` and `i + 1`.
    pub fn mul_simple_left(&self, i: usize) -> Self {
        Self::simple(self.rank(), i).expect("generator index within rank").compose_unchecked(self)
    }

    /// `ℓ(self ∘ s_i) < ℓ(self)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let n = self.rank();
        if i == 0 {
            self.window[n - 1] - n as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    /// `ℓ(s_i ∘ self) < ℓ(self)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    /// Peels left descents: `self = s_{g_1} ∘ … ∘ s_{g_k} ∘ ω^r` with `k = ℓ(self)`.
    pub fn reduced_word(&self) -> ReducedWord {
        let n = self.rank();
        let mut y = self.inverse();
        let mut gens = Vec::with_capacity(self.length());
        if n >= 2 {
            'outer: loop {
                for i in 0..n {
                    if y.has_right_descent(i) {
                        y = y.mul_simple_right(i);
                        gens.push(i);
                        continue 'outer;
                    }
                }
                break;
            }
        }
        // y is now ω^{-r}
        ReducedWord { gens, rotation: -y.rotation_exponent() }
    }

    /// One-line notation (1-based) of the finite permutation `i ↦ f(i) mod N`.
    pub fn finite_part(&self) -> Vec<usize> {
        let n = self.rank() as i64;
        self.window.iter().map(|&v| ((v - 1).rem_euclid(n) + 1) as usize).collect()
    }

    /// The decomposition `self = w ∘ t_μ` with `w` finite.
    pub fn finite_translation_split(&self) -> (Vec<usize>, Coweight) {
        let n = self.rank() as i64;
        let w = self.finite_part();
        let mu = self.window.iter().zip(&w).map(|(&v, &r)| (v - r as i64) / n).collect();
        (w, Coweight::new(mu))
    }

    /// Sign of the finite part; trivial on translations.
    pub fn sign_f(&self) -> i32 {
        permutation_sign(&self.finite_part())
    }
}

/// Sign of a permutation in 1-based one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j] - 1;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.window.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// A cocharacter `diag(t^λ_1, …, t^λ_N)` of the diagonal torus.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coweight(Vec<i64>);

impl Coweight {
    pub fn new(entries: Vec<i64>) -> Self {
        Coweight(entries)
    }

    pub fn zero(n: usize) -> Self {
        Coweight(vec![0; n])
    }

    /// `e_i − e_{i+1}` (1-based `i`), the simple coroot.
    pub fn simple_coroot(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        v[i] = -1;
        Coweight(v)
    }

    /// `e_i` (1-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        Coweight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `Σ_{i<j} |λ_i − λ_j|`, the length of `t_λ`.
    pub fn translation_length(&self) -> usize {
        let mut total = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                total += (self.0[i] - self.0[j]).unsigned_abs() as usize;
            }
        }
        total
    }

    /// `⟨α_i, λ⟩ = λ_i − λ_{i+1}` for 1-based `i`.
    pub fn simple_pairing(&self, i: usize) -> i64 {
        self.0[i - 1] - self.0[i]
    }

    /// Action of the finite reflection `s_i` (1-based): swaps entries `i, i+1`.
    pub fn reflect(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Coweight(v)
    }

    /// Canonical split `λ = λ⁺ − λ⁻` into dominant parts: `λ⁻` is the
    /// entrywise-minimal dominant coweight with last entry 0 making `λ + λ⁻`
    /// dominant.
    pub fn dominant_split(&self) -> (Coweight, Coweight) {
        let n = self.0.len();
        let mut minus = vec![0i64; n];
        for i in (0..n.saturating_sub(1)).rev() {
            minus[i] = minus[i + 1] + (self.0[i + 1] - self.0[i]).max(0);
        }
        let plus = self.0.iter().zip(&minus).map(|(a, b)| a + b).collect();
        (Coweight(plus), Coweight(minus))
    }

    pub fn add(&self, other: &Self) -> Self {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Coweight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Coweight(self.0.iter().map(|a| k * a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, VecDeque};

    fn s(n: usize, i: usize) -> AffinePermutation {
        AffinePermutation::simple(n, i).unwrap()
    }

    fn cw(v: &[i64]) -> Coweight {
        Coweight::new(v.to_vec())
    }

    /// Counts inversions directly from the definition, scanning far enough
    /// to the right that no further inversions are possible.
    fn brute_length(x: &AffinePermutation) -> usize {
        let n = x.rank() as i64;
        let spread = x.window().iter().map(|v| v.abs()).max().unwrap() + n;
        let mut count = 0;
        for i in 1..=n {
            for j in i + 1..=i + 2 * spread + 2 * n {
                if x.apply(i) > x.apply(j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Breadth-first distances from the identity over `s_0, …, s_{N-1}`,
    /// modulo rotations (which have length zero).
    fn bfs_lengths(n: usize, depth: usize) -> HashMap<AffinePermutation, usize> {
        let mut dist = HashMap::new();
        let id = AffinePermutation::identity(n);
        dist.insert(id.clone(), 0);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if d == depth {
                continue;
            }
            for i in 0..n {
                let y = x.mul_simple_right(i);
                if !dist.contains_key(&y) {
                    dist.insert(y.clone(), d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    #[test]
    fn involutions_and_braids() {
        let n = 4;
        let id = AffinePermutation::identity(n);
        for i in 0..n {
            assert_eq!(s(n, i).compose(&s(n, i)).unwrap(), id);
        }
        let lhs = s(n, 1).compose(&s(n, 2)).unwrap().compose(&s(n, 1)).unwrap();
        let rhs = s(n, 2).compose(&s(n, 1)).unwrap().compose(&s(n, 2)).unwrap();
        assert_eq!(lhs, rhs);
        let w = AffinePermutation::rotation(n);
        assert_eq!(w.compose(&w.inverse()).unwrap(), id);
    }

    #[test]
    fn rotation_conjugates_generators() {
        let n = 4;
        let w = AffinePermutation::rotation(n);
        for i in 0..n {
            let conj = w.compose(&s(n, i)).unwrap().compose(&w.inverse()).unwrap();
            assert_eq!(conj, s(n, (i + 1) % n));
        }
    }

    #[test]
    fn rank_mismatch() {
        let err = AffinePermutation::identity(3).compose(&AffinePermutation::identity(4));
        assert_eq!(err, Err(AffineError::RankMismatch { left: 3, right: 4 }));
        assert!(AffinePermutation::new(vec![1, 5, 3, 4]).is_err());
        assert!(AffinePermutation::simple(4, 4).is_err());
    }

    #[test]
    fn translation_lengths() {
        assert_eq!(AffinePermutation::identity(4).length(), 0);
        let t = AffinePermutation::translation(&cw(&[2, 0, 0, 0]));
        assert_eq!(t.length(), 6);
        assert_eq!(brute_length(&t), 6);
        assert_eq!(cw(&[2, 0, 0, 0]).translation_length(), 6);
        let t = AffinePermutation::translation(&cw(&[1, 1, 0, 0]));
        assert_eq!(t.length(), 4);
        assert_eq!(brute_length(&t), 4);
        // same values through the Cayley graph
        let dist = bfs_lengths(4, 6);
        let strip = |x: &AffinePermutation| {
            let r = x.rotation_exponent();
            x.compose(&AffinePermutation::rotation_pow(4, -r)).unwrap()
        };
        assert_eq!(dist[&strip(&AffinePermutation::translation(&cw(&[2, 0, 0, 0])))], 6);
        assert_eq!(dist[&strip(&AffinePermutation::translation(&cw(&[1, 1, 0, 0])))], 4);
    }

    #[test]
    fn length_matches_cayley_distance() {
        let dist = bfs_lengths(4, 6);
        assert_eq!(dist.len(), 195);
        for (x, d) in &dist {
            assert_eq!(x.length(), *d, "{x}");
            assert_eq!(brute_length(x), *d, "{x}");
        }
    }

    #[test]
    fn reduced_word_examples() {
        let id = AffinePermutation::identity(4);
        assert_eq!(id.reduced_word(), ReducedWord { gens: vec![], rotation: 0 });
        assert_eq!(s(4, 2).reduced_word(), ReducedWord { gens: vec![2], rotation: 0 });
        let t = AffinePermutation::translation(&cw(&[1, 0, 0, 0]));
        let w = t.reduced_word();
        assert_eq!(w.gens.len(), 3);
        assert_eq!(w.rotation, 1);
        assert_eq!(AffinePermutation::from_word(4, &w.gens, w.rotation).unwrap(), t);
    }

    #[test]
    fn dominant_split_examples() {
        let (p, m) = cw(&[0, 0, 0, 0]).dominant_split();
        assert_eq!((p, m), (cw(&[0, 0, 0, 0]), cw(&[0, 0, 0, 0])));
        let (p, m) = cw(&[1, -1, 0, 0]).dominant_split();
        assert_eq!((p.clone(), m.clone()), (cw(&[2, 0, 0, 0]), cw(&[1, 1, 0, 0])));
        let lam = cw(&[-1, 0, 0, 0]);
        let (p, m) = lam.dominant_split();
        assert!(p.is_dominant() && m.is_dominant());
        assert_eq!(p.sub(&m), lam);
    }

    #[test]
    fn finite_translation_split_recomposes() {
        let x = AffinePermutation::new(vec![7, -2, 4, 1]).unwrap();
        let (w, mu) = x.finite_translation_split();
        let back = AffinePermutation::from_finite(&w)
            .unwrap()
            .compose(&AffinePermutation::translation(&mu))
            .unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn signs() {
        assert_eq!(AffinePermutation::identity(4).sign_f(), 1);
        assert_eq!(s(4, 1).sign_f(), -1);
        assert_eq!(s(4, 0).sign_f(), -1);
        assert_eq!(AffinePermutation::translation(&cw(&[3, -1, 0, 2])).sign_f(), 1);
    }

    #[test]
    fn json_shape() {
        let x = s(4, 0);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"N":4,"window":[0,2,3,5]}"#);
        assert_eq!(serde_json::from_str::<AffinePermutation>(&s).unwrap(), x);
        assert!(serde_json::from_str::<AffinePermutation>(r#"{"N":3,"window":[1,2,3,4]}"#).is_err());
        assert!(serde_json::from_str::<AffinePermutation>(r#"{"N":2,"window":[1,3]}"#).is_err());
    }
}
