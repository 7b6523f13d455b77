//! Iwahori orbits on invertible antisymmetric `2n × 2n` matrices over a
//! local field, and the module they span over the affine Hecke algebra.
//!
//! Every orbit contains a monomial antisymmetric matrix whose entries above
//! the diagonal are powers of the uniformizer `u`. Such a matrix is a
//! [`DecoratedMatching`]: a pair partition of `[2n]` plus the valuation `a` of
//! the entry in position `(i, j)`. The extended affine Weyl group acts by
//! `w × x = w x wᵗ`: a column `i` of `w` carrying `u^{d_i}` in row `σ(i)` moves
//! the pair `(i, j, a)` to `(σ(i), σ(j), a + d_i + d_j)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{AffineError, AffinePermutation, Coweight};
use crate::borel::{enumerate_matchings, PairPartition};
use crate::hecke::{accumulate, im_involution, sgn_f, theta, HeckeElement, HeckeError};
use crate::scalar::{LaurentScalar, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("invalid decorated matching: {0}")]
    InvalidMatching(String),
    #[error("rank mismatch: acting with rank {acting} on n = {n}")]
    RankMismatch { acting: usize, n: usize },
    #[error("no stabilization within N ≤ {bound}: {history:?}")]
    NoStabilization { bound: usize, history: Vec<Case> },
    #[error("{0}")]
    BadDirection(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatchingRepr")]
pub struct DecoratedMatching {
    n: usize,
    pairs: Vec<(usize, usize, i64)>,
}

#[derive(Deserialize)]
struct MatchingRepr {
    n: usize,
    pairs: Vec<(usize, usize, i64)>,
}

impl TryFrom<MatchingRepr> for DecoratedMatching {
    type Error = ModuleError;
    fn try_from(r: MatchingRepr) -> Result<Self, ModuleError> {
        let x = DecoratedMatching::new(r.pairs)?;
        if x.n != r.n {
            return Err(ModuleError::InvalidMatching(format!("expected {} pairs, got {}", r.n, x.n)));
        }
        Ok(x)
    }
}

impl DecoratedMatching {
    pub fn new(pairs: Vec<(usize, usize, i64)>) -> Result<Self, ModuleError> {
        PairPartition::new(pairs.iter().map(|&(i, j, _)| [i, j]).collect())
            .map_err(|e| ModuleError::InvalidMatching(e.to_string()))?;
        Ok(Self::normalized(pairs.len(), pairs))
    }

    fn normalized(n: usize, pairs: Vec<(usize, usize, i64)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().map(|(i, j, a)| (i.min(j), i.max(j), a)).collect();
        pairs.sort_unstable();
        DecoratedMatching { n, pairs }
    }

    /// All valuations zero.
    pub fn from_partition(m: &PairPartition) -> Self {
        Self::normalized(m.n(), m.pairs().iter().map(|&[i, j]| (i, j, 0)).collect())
    }

    /// `{(2i−1, 2i, 0)}`.
    pub fn u_max(n: usize) -> Self {
        Self::from_partition(&PairPartition::u_max(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize, i64)] {
        &self.pairs
    }

    pub fn partition(&self) -> PairPartition {
        PairPartition::new(self.pairs.iter().map(|&(i, j, _)| [i, j]).collect()).unwrap()
    }

    /// `max a − min a` over the pairs.
    pub fn spread(&self) -> i64 {
        let vals = self.pairs.iter().map(|p| p.2);
        vals.clone().max().unwrap() - vals.min().unwrap()
    }

    /// All valuations negated. Intertwines the action of `w` with that of
    /// `w` with its translation part negated.
    pub fn valuation_flip(&self) -> Self {
        Self::normalized(self.n, self.pairs.iter().map(|&(i, j, a)| (i, j, -a)).collect())
    }

    /// The matrix as an affine permutation of rank `2n`: `i ↦ j + 2n·a` for
    /// each pair, in both directions.
    pub fn as_affine(&self) -> AffinePermutation {
        let big_n = 2 * self.n as i64;
        let mut window = vec![0i64; 2 * self.n];
        for &(i, j, a) in &self.pairs {
            window[i - 1] = j as i64 + big_n * a;
            window[j - 1] = i as i64 + big_n * a;
        }
        AffinePermutation::new(window).expect("pairs cover the window")
    }

    /// `ℓ(w₀) − ℓ(x ∘ w₀)`, `w₀` the longest finite element.
    ///
    /// On matchings with all valuations zero this is the inversion count of
    /// the involution. The moves `x ↦ s x sᵗ` become `x w₀ ↦ s (x w₀) s'`,
    /// with `s'` the image of `s` under the diagram automorphism fixing `s_0`,
    /// so comparisons of this quantity are compatible with every generator
    /// including `s_0`. The plain inversion count of `x` is not.
    pub fn orbit_length(&self) -> i64 {
        let n2 = 2 * self.n;
        let w0 = AffinePermutation::from_finite(&(1..=n2).rev().collect::<Vec<_>>()).unwrap();
        (n2 * (n2 - 1) / 2) as i64 - self.as_affine().compose(&w0).unwrap().length() as i64
    }
}

impl fmt::Display for DecoratedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, j, a)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j},{a})")?;
        }
        write!(f, "}}")
    }
}

/// `w × x = w x wᵗ`.
pub fn waff_conjugate(w: &AffinePermutation, x: &DecoratedMatching) -> Result<DecoratedMatching, ModuleError> {
    let n2 = 2 * x.n;
    if w.rank() != n2 {
        return Err(ModuleError::RankMismatch { acting: w.rank(), n: x.n });
    }
    Ok(conjugate_unchecked(w, x))
}

fn conjugate_unchecked(w: &AffinePermutation, x: &DecoratedMatching) -> DecoratedMatching {
    let n2 = 2 * x.n as i64;
    let col = |i: usize| -> (usize, i64) {
        let f = w.apply(i as i64);
        let row = (f - 1).rem_euclid(n2) + 1;
        (row as usize, (f - row) / n2)
    };
    let pairs = x
        .pairs
        .iter()
        .map(|&(i, j, a)| {
            let (ri, di) = col(i);
            let (rj, dj) = col(j);
            (ri, rj, a + di + dj)
        })
        .collect();
    DecoratedMatching::normalized(x.n, pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Fixed,
    Down,
    Up,
}

/// Three-case rule for the generator `s_i`, `0 ≤ i < 2n`.
pub fn case_classify(i: usize, x: &DecoratedMatching) -> Result<Case, ModuleError> {
    let s = AffinePermutation::simple(2 * x.n, i)?;
    let y = conjugate_unchecked(&s, x);
    Ok(if y == *x {
        Case::Fixed
    } else if y.orbit_length() < x.orbit_length() {
        Case::Down
    } else {
        Case::Up
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleElement {
    n: usize,
    terms: BTreeMap<DecoratedMatching, LaurentScalar>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    pairs: Vec<(usize, usize, i64)>,
    coeff: LaurentScalar,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for ModuleElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRepr {
            n: self.n,
            terms: self.terms.iter().map(|(x, c)| TermRepr { pairs: x.pairs.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ElementRepr::deserialize(d)?;
        let mut terms = Vec::new();
        for t in r.terms {
            let x = DecoratedMatching::new(t.pairs).map_err(serde::de::Error::custom)?;
            if x.n != r.n {
                return Err(serde::de::Error::custom("term has the wrong n"));
            }
            terms.push((x, t.coeff));
        }
        Ok(ModuleElement::from_terms(r.n, terms))
    }
}

impl ModuleElement {
    pub fn zero(n: usize) -> Self {
        ModuleElement { n, terms: BTreeMap::new() }
    }

    pub fn basis(x: DecoratedMatching) -> Self {
        let n = x.n;
        ModuleElement { n, terms: BTreeMap::from([(x, LaurentScalar::one())]) }
    }

    /// Terms must all have the given `n`; repeated keys are summed.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (DecoratedMatching, LaurentScalar)>) -> Self {
        let mut map = BTreeMap::new();
        for (x, c) in terms {
            assert_eq!(x.n, n, "term of the wrong size");
            accumulate(&mut map, &x, &c);
        }
        ModuleElement { n, terms: map }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedMatching, LaurentScalar> {
        &self.terms
    }

    pub fn coeff(&self, x: &DecoratedMatching) -> LaurentScalar {
        self.terms.get(x).cloned().unwrap_or_else(LaurentScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (x, c) in &other.terms {
            accumulate(&mut terms, x, c);
        }
        ModuleElement { n: self.n, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ModuleElement { n: self.n, terms: self.terms.iter().map(|(x, d)| (x.clone(), d * c)).collect() }
    }

    /// `Some(c)` when `self = c · other`.
    pub fn ratio(&self, other: &Self) -> Option<LaurentScalar> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (x, d) = other.terms.iter().next()?;
        let c = self.terms.get(x)?.exact_div(d).ok()?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Specialization at `v = 1`.
    pub fn at_one(&self) -> BTreeMap<DecoratedMatching, BigInt> {
        self.terms
            .iter()
            .map(|(x, c)| (x.clone(), c.at_one()))
            .filter(|(_, c)| *c != BigInt::from(0))
            .collect()
    }

    fn check(&self, rank: usize) -> Result<(), ModuleError> {
        if rank != 2 * self.n {
            return Err(ModuleError::RankMismatch { acting: rank, n: self.n });
        }
        Ok(())
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (x, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*1_{x}")?;
        }
        Ok(())
    }
}

/// `f_max`, the characteristic function of the open orbit.
pub fn f_max(n: usize) -> ModuleElement {
    ModuleElement::basis(DecoratedMatching::u_max(n))
}

/// Action of `T_{s_i}`:
/// `q·1_x` if `s` fixes `x`, `(q−1)·1_x + q·1_{sx}` if `sx` is shorter,
/// `1_{sx}` otherwise.
pub fn act_ts(i: usize, e: &ModuleElement) -> Result<ModuleElement, ModuleError> {
    let s = AffinePermutation::simple(2 * e.n, i)?;
    let q = LaurentScalar::q();
    let q_minus_one = &q - &LaurentScalar::one();
    let mut out = BTreeMap::new();
    for (x, c) in &e.terms {
        let y = conjugate_unchecked(&s, x);
        if y == *x {
            accumulate(&mut out, x, &(c * &q));
        } else if y.orbit_length() < x.orbit_length() {
            accumulate(&mut out, x, &(c * &q_minus_one));
            accumulate(&mut out, &y, &(c * &q));
        } else {
            accumulate(&mut out, &y, c);
        }
    }
    Ok(ModuleElement { n: e.n, terms: out })
}

/// `T_{ω^k}` permutes the basis by conjugation.
pub fn act_rotation(k: i64, e: &ModuleElement) -> ModuleElement {
    let w = AffinePermutation::rotation_pow(2 * e.n, k);
    let terms = e.terms.iter().map(|(x, c)| (conjugate_unchecked(&w, x), c.clone())).collect();
    ModuleElement { n: e.n, terms }
}

/// `T_w` through a reduced word `w = s_{g_1} ⋯ s_{g_k} ω^r`.
pub fn act_basis(w: &AffinePermutation, e: &ModuleElement) -> Result<ModuleElement, ModuleError> {
    e.check(w.rank())?;
    let word = w.reduced_word();
    let mut acc = act_rotation(word.rotation, e);
    for &g in word.gens.iter().rev() {
        acc = act_ts(g, &acc)?;
    }
    Ok(acc)
}

pub fn act_hecke(h: &HeckeElement, e: &ModuleElement) -> Result<ModuleElement, ModuleError> {
    e.check(h.rank())?;
    let mut out = ModuleElement::zero(e.n);
    for (w, c) in h.terms() {
        out = out.add(&act_basis(w, e)?.scale(c));
    }
    Ok(out)
}

pub fn act_theta(lambda: &Coweight, e: &ModuleElement) -> Result<ModuleElement, ModuleError> {
    e.check(lambda.rank())?;
    act_hecke(&theta(lambda), e)
}

/// `(a_1, −a_1, …, a_n, −a_n)`.
pub fn l_max_coweight(a: &[i64]) -> Coweight {
    Coweight::new(a.iter().flat_map(|&x| [x, -x]).collect())
}

pub fn is_in_l_max(lambda: &Coweight) -> bool {
    let e = lambda.entries();
    e.len().is_multiple_of(2) && e.chunks(2).all(|c| c[0] == -c[1])
}

/// `q^{(ℓ(λ⁻) − ℓ(λ⁺))/2}` for the canonical split, as a power of `v`.
pub fn theta_eigenvalue_predicted(lambda: &Coweight) -> LaurentScalar {
    let (plus, minus) = lambda.dominant_split();
    LaurentScalar::v_pow(minus.translation_length() as i64 - plus.translation_length() as i64)
}

/// All decorated matchings with every valuation in `[−bound, bound]`.
pub fn basis_window(n: usize, bound: i64) -> Vec<DecoratedMatching> {
    let mut out = Vec::new();
    for m in enumerate_matchings(n) {
        let mut vals = vec![-bound; n];
        loop {
            let pairs = m.pairs().iter().zip(&vals).map(|(&[i, j], &a)| (i, j, a)).collect();
            out.push(DecoratedMatching { n, pairs });
            let Some(k) = vals.iter().position(|&a| a < bound) else {
                break;
            };
            vals[k] += 1;
            vals[..k].iter_mut().for_each(|a| *a = -bound);
        }
    }
    out
}

/// Failures of the defining relations of the affine Hecke algebra in the
/// module, evaluated on single basis vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub n: usize,
    pub bound: i64,
    pub basis_elements: usize,
    pub relations_checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn act_word(word: &[usize], e: &ModuleElement) -> Result<ModuleElement, ModuleError> {
    word.iter().rev().try_fold(e.clone(), |acc, &i| act_ts(i, &acc))
}

/// Quadratic relations, braid relations among `s_0, …, s_{2n−1}` (cyclic
/// Dynkin diagram) and `T_ω T_{s_i} T_ω⁻¹ = T_{s_{i+1}}`.
pub fn module_relations(n: usize, bound: i64) -> Result<RelationReport, ModuleError> {
    let n2 = 2 * n;
    let basis = basis_window(n, bound);
    let q = LaurentScalar::q();
    let q_minus_one = &q - &LaurentScalar::one();
    let per_element: Vec<Result<(usize, Vec<String>), ModuleError>> = basis
        .par_iter()
        .map(|x| {
            let e = ModuleElement::basis(x.clone());
            let mut checked = 0;
            let mut failures = Vec::new();
            for i in 0..n2 {
                let t = act_ts(i, &e)?;
                let lhs = act_ts(i, &t)?;
                let rhs = t.scale(&q_minus_one).add(&e.scale(&q));
                checked += 1;
                if lhs != rhs {
                    failures.push(format!("quadratic s_{i} on {x}"));
                }
                let j = (i + 1) % n2;
                checked += 1;
                if act_rotation(1, &act_ts(i, &act_rotation(-1, &e))?) != act_ts(j, &e)? {
                    failures.push(format!("rotation s_{i} on {x}"));
                }
                if n2 > 2 {
                    checked += 1;
                    if act_word(&[i, j, i], &e)? != act_word(&[j, i, j], &e)? {
                        failures.push(format!("braid s_{i} s_{j} on {x}"));
                    }
                }
                for k in i + 2..n2 {
                    if (k + 1) % n2 == i {
                        continue;
                    }
                    checked += 1;
                    if act_word(&[i, k], &e)? != act_word(&[k, i], &e)? {
                        failures.push(format!("commutation s_{i} s_{k} on {x}"));
                    }
                }
            }
            Ok((checked, failures))
        })
        .collect();
    let mut report = RelationReport { n, bound, basis_elements: basis.len(), ..Default::default() };
    for r in per_element {
        let (checked, failures) = r?;
        report.relations_checked += checked;
        report.failures.extend(failures);
    }
    Ok(report)
}

/// Every basis vector in the window is obtained from `f_max` by generator
/// actions, subtraction of vectors already obtained, and division by unit
/// monomials. Returns the unreached elements.
pub fn cyclicity_gaps(n: usize, bound: i64) -> Result<Vec<DecoratedMatching>, ModuleError> {
    let mut reached: BTreeSet<DecoratedMatching> = BTreeSet::from([DecoratedMatching::u_max(n)]);
    let mut frontier: Vec<DecoratedMatching> = reached.iter().cloned().collect();
    let inside = |x: &DecoratedMatching| x.pairs.iter().all(|p| p.2.abs() <= bound + 1);
    while let Some(x) = frontier.pop() {
        let e = ModuleElement::basis(x.clone());
        let mut images = vec![act_rotation(1, &e), act_rotation(-1, &e)];
        for i in 0..2 * n {
            images.push(act_ts(i, &e)?);
        }
        for img in images {
            let rest: Vec<_> = img.terms.iter().filter(|(y, _)| !reached.contains(*y)).collect();
            if let [(y, c)] = rest.as_slice() {
                if c.as_unit().is_some() && inside(y) {
                    reached.insert((*y).clone());
                    frontier.push((*y).clone());
                }
            }
        }
    }
    Ok(basis_window(n, bound).into_iter().filter(|x| !reached.contains(x)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorCase {
    pub family: u8,
    pub element: String,
    pub passed: bool,
    /// The image of `f_max`; empty when it vanishes.
    pub residual: String,
    /// For the θ family: the scalar by which `θ_λ` acts on `f_max`, if any.
    pub observed_eigenvalue: Option<String>,
    pub predicted_eigenvalue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilatorReport {
    pub n: usize,
    pub cases: Vec<AnnihilatorCase>,
}

impl AnnihilatorReport {
    pub fn holds(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn family_holds(&self, family: u8) -> bool {
        self.cases.iter().filter(|c| c.family == family).all(|c| c.passed)
    }
}

/// The coweights `a·(e_{2i−1} − e_{2i})`, `1 ≤ |a| ≤ max_a`.
pub fn l_max_test_set(n: usize, max_a: i64) -> Vec<Coweight> {
    let mut out = Vec::new();
    for i in 0..n {
        for a in (-max_a..=max_a).filter(|&a| a != 0) {
            let mut v = vec![0; n];
            v[i] = a;
            out.push(l_max_coweight(&v));
        }
    }
    out
}

/// The three generator families of the annihilator of `f_max`:
/// `T_{s_{2i−1}} − q`, `T_{s_{2i−1}} T_{s_{2i}} − T_{s_{2i+1}} T_{s_{2i}}` and
/// `θ_λ − q^{(ℓ(λ⁻) − ℓ(λ⁺))/2}` for `λ` in the test set of `L_max`.
pub fn annihilator_suite(n: usize) -> Result<AnnihilatorReport, ModuleError> {
    if n == 0 || n > MAX_ANNIHILATOR_N {
        return Err(ModuleError::BadDirection(format!("annihilator suite needs 1 ≤ n ≤ {MAX_ANNIHILATOR_N}")));
    }
    let n2 = 2 * n;
    let f = f_max(n);
    let mut cases = Vec::new();
    let mut push = |family: u8, element: String, r: ModuleElement, observed, predicted| {
        cases.push(AnnihilatorCase {
            family,
            element,
            passed: r.is_zero(),
            residual: if r.is_zero() { String::new() } else { r.to_string() },
            observed_eigenvalue: observed,
            predicted_eigenvalue: predicted,
        });
    };
    for i in 1..=n {
        let s = 2 * i - 1;
        let g = HeckeElement::generator(n2, s)?.sub(&HeckeElement::scalar(n2, LaurentScalar::q()))?;
        push(1, format!("T_s{s} - q"), act_hecke(&g, &f)?, None, None);
    }
    for i in 1..n {
        let (a, b, c) = (2 * i - 1, 2 * i, 2 * i + 1);
        let left = HeckeElement::generator(n2, a)?.mul(&HeckeElement::generator(n2, b)?)?;
        let right = HeckeElement::generator(n2, c)?.mul(&HeckeElement::generator(n2, b)?)?;
        push(2, format!("T_s{a} T_s{b} - T_s{c} T_s{b}"), act_hecke(&left.sub(&right)?, &f)?, None, None);
    }
    for lambda in l_max_test_set(n, 2) {
        let image = act_theta(&lambda, &f)?;
        let predicted = theta_eigenvalue_predicted(&lambda);
        let observed = image.ratio(&f).map(|c| c.to_string());
        let r = image.sub(&f.scale(&predicted));
        push(3, format!("theta_{lambda} - ({predicted})"), r, observed, Some(predicted.to_string()));
    }
    Ok(AnnihilatorReport { n, cases })
}

/// Largest `n` accepted by [`annihilator_suite`].
pub const MAX_ANNIHILATOR_N: usize = 3;
/// Largest `n` and valuation bound accepted by the window sweeps.
pub const MAX_WINDOW_N: usize = 3;
pub const MAX_WINDOW_BOUND: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Q1Report {
    pub n: usize,
    pub bound: i64,
    pub cases: usize,
    /// `T_w` at `v = 1` against `1_x ↦ 1_{w × x}`.
    pub permutation_failures: Vec<String>,
    /// `IM(T_w)` at `v = 1` against `1_x ↦ sgn_f(w) 1_{w × x}`, read through
    /// the relabeling `x ↦ x̄` of the orbits.
    pub sign_twisted_failures: Vec<String>,
}

impl Q1Report {
    pub fn holds(&self) -> bool {
        self.permutation_failures.is_empty() && self.sign_twisted_failures.is_empty()
    }
}

/// Compares the specialization `v = 1` of the action of every generator
/// `s_0, …, s_{2n−1}, ω` with the permutation action, plain and twisted by
/// `sgn_f` through the Iwahori–Matsumoto involution.
///
/// At `v = 1` the involution sends `w t_λ` to `sgn(w) w t_{−λ}`. Negating the
/// translation part of the acting element is the same as conjugating the
/// action by `x ↦ x̄`, so the twisted module is compared with the
/// `sgn_f`-twisted permutation module through that relabeling.
pub fn q1_report(n: usize, bound: i64) -> Result<Q1Report, ModuleError> {
    if n == 0 || n > MAX_WINDOW_N || !(0..=MAX_WINDOW_BOUND).contains(&bound) {
        return Err(ModuleError::BadDirection(format!(
            "q = 1 comparison needs 1 ≤ n ≤ {MAX_WINDOW_N} and 0 ≤ B ≤ {MAX_WINDOW_BOUND}"
        )));
    }
    let n2 = 2 * n;
    let mut gens: Vec<AffinePermutation> = (0..n2).map(|i| AffinePermutation::simple(n2, i).unwrap()).collect();
    gens.push(AffinePermutation::rotation(n2));
    let im = |w: AffinePermutation| im_involution(&HeckeElement::basis(w));
    let im_omega = im(AffinePermutation::rotation(n2))?;
    let im_omega_inv = im(AffinePermutation::rotation_pow(n2, -1))?;
    // IM(T_{s_0}) is applied as IM(T_ω) IM(T_{s_{2n−1}}) IM(T_ω⁻¹), which is
    // much shorter than its expansion in the T basis.
    let mut twisted: Vec<Vec<HeckeElement>> = Vec::new();
    for w in &gens {
        if *w == gens[0] && n2 > 2 {
            twisted.push(vec![im_omega.clone(), im(AffinePermutation::simple(n2, n2 - 1)?)?, im_omega_inv.clone()]);
        } else {
            twisted.push(vec![im(w.clone())?]);
        }
    }
    let basis = basis_window(n, bound);
    type Failures = (Vec<String>, Vec<String>);
    let results: Vec<Result<Failures, ModuleError>> = basis
        .par_iter()
        .map(|x| {
            let e = ModuleElement::basis(x.clone());
            let mut plain = Vec::new();
            let mut signed = Vec::new();
            for (w, im) in gens.iter().zip(&twisted) {
                let y = conjugate_unchecked(w, x);
                let got = act_basis(w, &e)?.at_one();
                if got != BTreeMap::from([(y, BigInt::from(1))]) {
                    plain.push(format!("{w} on {x}"));
                }
                let mut acc = e.clone();
                for h in im.iter().rev() {
                    acc = act_hecke(h, &acc)?;
                }
                let got = acc.at_one();
                let y_bar = conjugate_unchecked(w, &x.valuation_flip()).valuation_flip();
                if got != BTreeMap::from([(y_bar, BigInt::from(sgn_f(w)))]) {
                    signed.push(format!("IM {w} on {x}"));
                }
            }
            Ok((plain, signed))
        })
        .collect();
    let mut report = Q1Report {
        n,
        bound,
        cases: basis.len() * gens.len(),
        permutation_failures: Vec::new(),
        sign_twisted_failures: Vec::new(),
    };
    for r in results {
        let (p, s) = r?;
        report.permutation_failures.extend(p);
        report.sign_twisted_failures.extend(s);
    }
    Ok(report)
}

pub fn q1_compare(n: usize, bound: i64) -> Result<bool, ModuleError> {
    Ok(q1_report(n, bound)?.holds())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsymptoticCase {
    pub case: Case,
    /// First `N` from which the classification of `t_λ^N × x` is constant.
    pub stable_from: usize,
    pub history: Vec<Case>,
}

/// The eventual value of `case_classify(s, t_λ^N × x)` as `N` grows, for a
/// strictly dominant `λ`. Stabilization must happen by
/// `N = 2·spread(x) + 2n`; the classification is followed for `2n + 2` more
/// steps to confirm it.
pub fn asymptotic_case(i: usize, x: &DecoratedMatching, lambda: &Coweight) -> Result<AsymptoticCase, ModuleError> {
    let n2 = 2 * x.n;
    if lambda.rank() != n2 {
        return Err(ModuleError::RankMismatch { acting: lambda.rank(), n: x.n });
    }
    if !lambda.entries().windows(2).all(|w| w[0] > w[1]) {
        return Err(ModuleError::BadDirection(format!("{lambda} is not strictly dominant")));
    }
    let bound = 2 * x.spread() as usize + n2;
    let horizon = bound + n2 + 2;
    let t = AffinePermutation::translation(lambda);
    let mut y = x.clone();
    let mut history = Vec::with_capacity(horizon + 1);
    for _ in 0..=horizon {
        history.push(case_classify(i, &y)?);
        y = conjugate_unchecked(&t, &y);
    }
    let last = history[horizon];
    let stable_from = (0..=horizon).rev().take_while(|&k| history[k] == last).last().unwrap();
    if stable_from > bound {
        return Err(ModuleError::NoStabilization { bound, history });
    }
    Ok(AsymptoticCase { case: last, stable_from, history })
}
