//! Named verification suites with uniform reports, shared by the command
//! line and the integration tests.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::affine::{AffinePermutation, Coweight};
use crate::borel::{
    self, enumerate_matchings, enumerate_relevant, phi_x, star_act, w_act, BorelError, PairPartition,
};
use crate::hecke::{self, HeckeElement, HeckeError};
use crate::iwahori::{self, ModuleError};
use crate::quiver::{self, DimVector, Multisegment, QuiverError, SamplingConfig, Verdict};
use crate::scalar::LaurentScalar;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("{suite} accepts {range}, got {got}")]
    Guard { suite: Suite, range: String, got: String },
    #[error(transparent)]
    Borel(#[from] BorelError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Counts,
    Reversal,
    ModuleAxioms,
    Bernstein,
    Annihilator,
    Q1,
    Stabilizer,
    QuiverExample,
    QuiverRoundtrip,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Counts,
        Suite::Reversal,
        Suite::ModuleAxioms,
        Suite::Bernstein,
        Suite::Annihilator,
        Suite::Q1,
        Suite::Stabilizer,
        Suite::QuiverExample,
        Suite::QuiverRoundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Reversal => "reversal",
            Suite::ModuleAxioms => "module-axioms",
            Suite::Bernstein => "bernstein",
            Suite::Annihilator => "annihilator",
            Suite::Q1 => "q1",
            Suite::Stabilizer => "stabilizer",
            Suite::QuiverExample => "quiver-example",
            Suite::QuiverRoundtrip => "quiver-roundtrip",
        }
    }

    /// The statement the suite checks.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::Counts => {
                "Borel orbits on GL_2n/Sp_2n and relevant cosets both number (2n-1)!!; phi_x is a bijection intertwining relabeling with the star action"
            }
            Suite::Reversal => "phi_x reverses the weak orders: graded, unique extremes, covers reversed",
            Suite::ModuleAxioms => {
                "the three-case action on decorated matchings satisfies the quadratic and braid relations and is generated by f_max"
            }
            Suite::Bernstein => {
                "T-basis arithmetic satisfies the Hecke relations, theta is a commutative family independent of the split, and the Bernstein relation holds"
            }
            Suite::Annihilator => "T_s - q, T_s T_s' - T_s'' T_s' and theta_lambda - q^((l- - l+)/2) annihilate f_max",
            Suite::Q1 => "at v = 1 the module is the permutation module w x w^t, and its IM twist the sgn_f-twisted one",
            Suite::Stabilizer => "the listed generators generate the stabilizer of U_max in S_2n",
            Suite::QuiverExample => {
                "for dims (m,m,m,m) with k = (m,0,m) the locus S meets exactly m+1 orbits, a chain topped by [0,3]xm, the only one distinguished"
            }
            Suite::QuiverRoundtrip => {
                "rank tables classify representations of equioriented A_3 with dims <= (n,n,n), and inclusion-exclusion recovers the multisegment"
            }
        }
    }

    /// Accepted values of `n`.
    pub fn n_range(self) -> (usize, usize) {
        match self {
            Suite::Counts => (1, borel::MAX_POSET_N),
            Suite::Reversal | Suite::Stabilizer => (1, borel::MAX_CHECK_N),
            Suite::ModuleAxioms | Suite::Q1 => (1, iwahori::MAX_WINDOW_N),
            Suite::Annihilator => (1, iwahori::MAX_ANNIHILATOR_N),
            Suite::Bernstein => (1, 3),
            Suite::QuiverExample => (1, 3),
            Suite::QuiverRoundtrip => (1, 2),
        }
    }

    pub fn uses_bound(self) -> bool {
        matches!(self, Suite::ModuleAxioms | Suite::Q1)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;
    fn from_str(s: &str) -> Result<Self, SuiteError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    fn new(input: impl fmt::Display, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        Failure { input: input.to_string(), expected: expected.to_string(), got: got.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub statement: &'static str,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Suite-specific facts: counts, trial numbers, orders.
    pub details: serde_json::Value,
    /// Not serialized, so the JSON is reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub n: usize,
    /// Valuation window for the module sweeps; defaults to 2.
    pub bound: Option<i64>,
    pub seed: u64,
    pub prime: u64,
    pub trials: usize,
}

impl SuiteParams {
    pub fn new(n: usize) -> Self {
        SuiteParams { n, bound: None, seed: 0, prime: quiver::DEFAULT_PRIME, trials: 500 }
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<VerificationReport, SuiteError> {
    let (lo, hi) = suite.n_range();
    if !(lo..=hi).contains(&params.n) {
        return Err(SuiteError::Guard { suite, range: format!("{lo} <= n <= {hi}"), got: params.n.to_string() });
    }
    let bound = if suite.uses_bound() {
        let b = params.bound.unwrap_or(2);
        if !(0..=iwahori::MAX_WINDOW_BOUND).contains(&b) {
            return Err(SuiteError::Guard {
                suite,
                range: format!("0 <= B <= {}", iwahori::MAX_WINDOW_BOUND),
                got: b.to_string(),
            });
        }
        Some(b)
    } else {
        None
    };
    let start = Instant::now();
    let n = params.n;
    let (cases, failures, details) = match suite {
        Suite::Counts => counts(n)?,
        Suite::Reversal => reversal(n)?,
        Suite::ModuleAxioms => module_axioms(n, bound.unwrap())?,
        Suite::Bernstein => bernstein(n, params.seed)?,
        Suite::Annihilator => annihilator(n)?,
        Suite::Q1 => q1(n, bound.unwrap())?,
        Suite::Stabilizer => stabilizer(n)?,
        Suite::QuiverExample => quiver_example(n, params)?,
        Suite::QuiverRoundtrip => quiver_roundtrip(n, params)?,
    };
    Ok(VerificationReport {
        suite,
        statement: suite.statement(),
        n,
        bound,
        seed: params.seed,
        cases,
        failures,
        details,
        wall_time: start.elapsed(),
    })
}

type Outcome = (usize, Vec<Failure>, serde_json::Value);

pub fn double_factorial_odd(n: usize) -> usize {
    (1..=n).map(|k| 2 * k - 1).product()
}

fn counts(n: usize) -> Result<Outcome, SuiteError> {
    let expected = double_factorial_odd(n);
    let matchings = enumerate_matchings(n);
    let relevant = enumerate_relevant(n);
    let mut failures = Vec::new();
    if matchings.len() != expected {
        failures.push(Failure::new("enumerate_matchings", expected, matchings.len()));
    }
    if relevant.len() != expected {
        failures.push(Failure::new("enumerate_relevant", expected, relevant.len()));
    }
    let mut cases = 2;
    if n <= borel::MAX_CHECK_N {
        let (c, f) = equivariance(n, &matchings, &relevant)?;
        cases += c;
        failures.extend(f);
    }
    let details = serde_json::json!({
        "expected": expected,
        "matchings": matchings.len(),
        "relevant": relevant.len(),
        "equivariance_checked": n <= borel::MAX_CHECK_N,
    });
    Ok((cases, failures, details))
}

/// `phi_x` is a bijection and `phi_x(s_i · x) = s_i * phi_x(x)` for every
/// matching and simple reflection.
pub fn equivariance(
    n: usize,
    matchings: &[PairPartition],
    relevant: &[borel::RelevantCoset],
) -> Result<(usize, Vec<Failure>), SuiteError> {
    let mut failures = Vec::new();
    let mut images: Vec<_> = matchings.iter().map(phi_x).collect();
    images.sort();
    let distinct = images.windows(2).all(|w| w[0] != w[1]);
    if !distinct || images.as_slice() != relevant {
        failures.push(Failure::new("phi_x", "bijection onto the relevant cosets", "not a bijection"));
    }
    let size = 2 * n;
    let per: Vec<Result<Vec<Failure>, BorelError>> = matchings
        .par_iter()
        .map(|m| {
            let mut out = Vec::new();
            for i in 1..size {
                let lhs = phi_x(&w_act(&borel::simple_transposition(size, i), m)?);
                let rhs = star_act(i, &phi_x(m))?;
                if lhs != rhs {
                    out.push(Failure::new(format!("s_{i} on {m}"), &rhs, &lhs));
                }
            }
            Ok(out)
        })
        .collect();
    for r in per {
        failures.extend(r?);
    }
    Ok((1 + matchings.len() * (size - 1), failures))
}

fn reversal(n: usize) -> Result<Outcome, SuiteError> {
    let r = borel::reversal_report(n)?;
    let checks = [
        ("X side graded by rank_x", r.x_graded),
        ("dual side graded by length", r.dual_graded),
        ("X side has a unique minimum and maximum", r.x_extremes_unique),
        ("dual side has a unique minimum and maximum", r.dual_extremes_unique),
        ("X side covers change rank by one", r.x_moves_unit),
        ("dual side covers change rank by one", r.dual_moves_unit),
        ("phi_x maps covers to reversed covers", r.covers_reversed),
        ("rank_x + dual rank is constant", r.rank_antitone),
    ];
    let failures =
        checks.iter().filter(|c| !c.1).map(|c| Failure::new(c.0, true, false)).collect();
    Ok((checks.len(), failures, serde_json::to_value(&r).unwrap()))
}

fn module_axioms(n: usize, bound: i64) -> Result<Outcome, SuiteError> {
    let r = iwahori::module_relations(n, bound)?;
    let mut failures: Vec<Failure> = r.failures.iter().map(|f| Failure::new(f, "relation holds", "violated")).collect();
    let gaps = iwahori::cyclicity_gaps(n, bound)?;
    for g in &gaps {
        failures.push(Failure::new(g, "reached from f_max", "unreached"));
    }
    let details = serde_json::json!({
        "basis_elements": r.basis_elements,
        "relations_checked": r.relations_checked,
        "cyclicity_gaps": gaps.len(),
    });
    Ok((r.relations_checked + r.basis_elements, failures, details))
}

fn random_coweight<R: Rng>(rank: usize, max: i64, rng: &mut R) -> Coweight {
    Coweight::new((0..rank).map(|_| rng.gen_range(-max..=max)).collect())
}

/// All affine permutations of rank `n2` reachable by words of length at most
/// `len` in the simple reflections and `ω^{±1}`.
fn short_elements(n2: usize, len: usize) -> Vec<AffinePermutation> {
    let mut all = std::collections::BTreeSet::from([AffinePermutation::identity(n2)]);
    let mut layer = vec![AffinePermutation::identity(n2)];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            let mut nb: Vec<AffinePermutation> = (0..n2).map(|i| w.mul_simple_right(i)).collect();
            nb.push(w.compose(&AffinePermutation::rotation(n2)).unwrap());
            for x in nb {
                if all.insert(x.clone()) {
                    next.push(x);
                }
            }
        }
        layer = next;
    }
    all.into_iter().collect()
}

/// Largest rank for the randomized `θ` checks; beyond it products of `θ`s
/// with `|λ|∞ ≤ 2` take minutes each.
pub const MAX_RANDOM_THETA_RANK: usize = 4;

fn bernstein(n: usize, seed: u64) -> Result<Outcome, SuiteError> {
    let n2 = 2 * n;
    let mut rng = quiver::trial_rng(seed, 0);
    let q = LaurentScalar::q();
    let q1 = &q - &LaurentScalar::one();
    let mut cases = 0;
    let mut failures = Vec::new();

    // relations of the T basis, multiplied on the right of short elements
    let elements = short_elements(n2, 3);
    let results: Vec<Result<(usize, Vec<Failure>), HeckeError>> = elements
        .par_iter()
        .map(|w| {
            let h = HeckeElement::basis(w.clone());
            let mut c = 0;
            let mut f = Vec::new();
            for i in 0..n2 {
                let t = h.right_mul_generator(i);
                c += 1;
                if t.right_mul_generator(i) != t.scale(&q1).add(&h.scale(&q))? {
                    f.push(Failure::new(format!("T_{w} T_s{i}^2"), "(q-1) T_s + q", "differs"));
                }
                if n2 > 2 {
                    let j = (i + 1) % n2;
                    c += 1;
                    let a = h.right_mul_generator(i).right_mul_generator(j).right_mul_generator(i);
                    let b = h.right_mul_generator(j).right_mul_generator(i).right_mul_generator(j);
                    if a != b {
                        f.push(Failure::new(format!("T_{w} braid s{i} s{j}"), "equal", "differs"));
                    }
                }
                for k in i + 2..n2 {
                    if (k + 1) % n2 == i {
                        continue;
                    }
                    c += 1;
                    if h.right_mul_generator(i).right_mul_generator(k) != h.right_mul_generator(k).right_mul_generator(i) {
                        f.push(Failure::new(format!("T_{w} s{i} s{k}"), "commute", "differ"));
                    }
                }
                c += 1;
                let conj = h.right_mul_rotation(1).right_mul_generator(i).right_mul_rotation(-1);
                if conj != h.right_mul_generator((i + 1) % n2) {
                    f.push(Failure::new(format!("T_{w} T_w T_s{i} T_w^-1"), format!("T_s{}", (i + 1) % n2), "differs"));
                }
            }
            Ok((c, f))
        })
        .collect();
    for r in results {
        let (c, f) = r?;
        cases += c;
        failures.extend(f);
    }

    // theta: commutativity, additivity, independence of the split
    let random_checks = n2 <= MAX_RANDOM_THETA_RANK;
    let (n_pairs, n_splits, n_random) = if random_checks { (200, 100, 20) } else { (0, 0, 0) };
    let pairs: Vec<(Coweight, Coweight)> =
        (0..n_pairs).map(|_| (random_coweight(n2, 2, &mut rng), random_coweight(n2, 2, &mut rng))).collect();
    let splits: Vec<(Coweight, Coweight)> = (0..n_splits)
        .map(|_| {
            let lambda = random_coweight(n2, 2, &mut rng);
            let mut mu: Vec<i64> = (0..n2).map(|_| rng.gen_range(-2..=2)).collect();
            mu.sort_unstable_by(|a, b| b.cmp(a));
            (lambda, Coweight::new(mu))
        })
        .collect();
    let theta_results: Vec<Result<Option<Failure>, HeckeError>> = pairs
        .par_iter()
        .map(|(l, m)| {
            let lm = hecke::theta(l).right_mul_theta(m)?;
            let ml = hecke::theta(m).right_mul_theta(l)?;
            let sum = hecke::theta(&l.add(m));
            Ok((lm != sum || ml != sum).then(|| Failure::new(format!("theta {l} {m}"), "theta_{l+m}", "differs")))
        })
        .chain(splits.par_iter().map(|(lambda, mu)| {
            // λ = (λ⁺ + μ) − (λ⁻ + μ) for dominant μ
            let (plus, minus) = lambda.dominant_split();
            let other = hecke::theta_from_split(&plus.add(mu), &minus.add(mu))?;
            Ok((other != hecke::theta(lambda)).then(|| Failure::new(format!("split of {lambda}"), "same theta", "differs")))
        }))
        .collect();
    for r in theta_results {
        cases += 1;
        failures.extend(r?);
    }

    // Bernstein relation
    let mut lambdas = Vec::new();
    for i in 1..=n2 {
        lambdas.push(Coweight::unit(n2, i));
        lambdas.push(Coweight::unit(n2, i).neg());
        for j in 1..=n2 {
            if i != j {
                lambdas.push(Coweight::unit(n2, i).sub(&Coweight::unit(n2, j)));
            }
        }
    }
    lambdas.extend((0..n_random).map(|_| random_coweight(n2, 2, &mut rng)));
    let tasks: Vec<(usize, Coweight)> =
        (1..n2).flat_map(|s| lambdas.iter().map(move |l| (s, l.clone()))).collect();
    let bern: Vec<Result<Option<Failure>, HeckeError>> = tasks
        .par_iter()
        .map(|(s, l)| {
            let ok = hecke::bernstein_check(*s, l)? && hecke::bernstein_sum_check(*s, l)?.unwrap_or(true);
            Ok((!ok).then(|| Failure::new(format!("s{s}, lambda = {l}"), "relation holds", "violated")))
        })
        .collect();
    for r in bern {
        cases += 1;
        failures.extend(r?);
    }
    let details = serde_json::json!({
        "rank": n2,
        "elements": elements.len(),
        "theta_pairs": pairs.len(),
        "splits": splits.len(),
        "bernstein_pairs": tasks.len(),
        "random_lambdas": n_random,
    });
    Ok((cases, failures, details))
}

fn annihilator(n: usize) -> Result<Outcome, SuiteError> {
    let r = iwahori::annihilator_suite(n)?;
    let failures = r
        .cases
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            let got = match &c.observed_eigenvalue {
                Some(ev) => format!("acts by {ev}"),
                None => c.residual.clone(),
            };
            Failure::new(&c.element, "annihilates f_max", got)
        })
        .collect();
    let families: Vec<_> = (1..=3u8)
        .map(|f| {
            serde_json::json!({
                "family": f,
                "cases": r.cases.iter().filter(|c| c.family == f).count(),
                "passed": r.family_holds(f),
            })
        })
        .collect();
    Ok((r.cases.len(), failures, serde_json::json!({ "families": families })))
}

fn q1(n: usize, bound: i64) -> Result<Outcome, SuiteError> {
    let r = iwahori::q1_report(n, bound)?;
    let mut failures: Vec<Failure> =
        r.permutation_failures.iter().map(|f| Failure::new(f, "w x w^t", "differs")).collect();
    failures.extend(r.sign_twisted_failures.iter().map(|f| Failure::new(f, "sgn_f(w) w x w^t", "differs")));
    Ok((2 * r.cases, failures, serde_json::json!({ "generators_times_basis": r.cases })))
}

fn stabilizer(n: usize) -> Result<Outcome, SuiteError> {
    let r = borel::stabilizer_report(n)?;
    let failures = if r.equal {
        Vec::new()
    } else {
        vec![Failure::new("generated subgroup", r.stabilizer_order, r.generated_order)]
    };
    Ok((1, failures, serde_json::to_value(&r).unwrap()))
}

/// Predicted orbits meeting `S` for dims `(m, m, m, m)`: `r` copies of
/// `[0,3]` and `m − r` of each of `[0,1]`, `[2,3]`.
pub fn square_chain_orbits(m: usize) -> Vec<Multisegment> {
    (0..=m)
        .map(|r| {
            let mut v = vec![(0, 3); r];
            v.extend(vec![(0, 1); m - r]);
            v.extend(vec![(2, 3); m - r]);
            Multisegment::new(v).unwrap()
        })
        .collect()
}

fn quiver_example(m: usize, params: &SuiteParams) -> Result<Outcome, SuiteError> {
    let config = SamplingConfig { trials: params.trials, prime: params.prime, seed: params.seed, ..Default::default() };
    let dims = DimVector::new(vec![m; 4]);
    let mut failures = Vec::new();
    let k = quiver::k_decomposition(&dims);
    if k != Some(vec![m, 0, m]) {
        failures.push(Failure::new("k_decomposition", format!("{:?}", [m, 0, m]), format!("{k:?}")));
    }
    let eps: Vec<Multisegment> = quiver::orbits_meeting_s(&dims, &config)?.into_iter().collect();
    let mut predicted = square_chain_orbits(m);
    predicted.sort();
    let show = |v: &[Multisegment]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    if eps != predicted {
        failures.push(Failure::new("eps_S", show(&predicted), show(&eps)));
    }
    for a in &eps {
        if !quiver::even_condition(a) {
            failures.push(Failure::new(a, "even segments", "odd segment"));
        }
        for b in &eps {
            if !(quiver::closure_leq(a, b)? || quiver::closure_leq(b, a)?) {
                failures.push(Failure::new(format!("{a} vs {b}"), "comparable", "incomparable"));
            }
        }
    }
    let top = Multisegment::repeated(0, 3, m);
    let all = quiver::multisegments_with_dims(&dims);
    let verdicts: Vec<Result<(Multisegment, Verdict), QuiverError>> =
        all.par_iter().map(|x| Ok((x.clone(), quiver::distinction_verdict(x, &config)?.verdict))).collect();
    let mut chosen = Vec::new();
    for r in verdicts {
        let (x, v) = r?;
        if (v == Verdict::YesSquareChain) != (x == top) {
            failures.push(Failure::new(&x, if x == top { "yes_section9" } else { "not yes_section9" }, format!("{v:?}")));
        }
        if v == Verdict::YesSquareChain {
            chosen.push(x.to_string());
        }
    }
    let details = serde_json::json!({
        "dims": dims,
        "trials": config.trials,
        "prime": config.prime,
        "s_dimension": quiver::s_dimension(&[m, 0, m]),
        "eps_s": eps,
        "multisegments_judged": all.len(),
        "yes_section9": chosen,
    });
    Ok((2 + eps.len() * eps.len() + all.len(), failures, details))
}

/// Dimension vectors on at most three vertices with entries at most `max`.
pub fn small_dims(max: usize) -> Vec<DimVector> {
    let mut out = std::collections::BTreeSet::new();
    for a in 0..=max {
        for b in 0..=max {
            for c in 0..=max {
                let d = DimVector::new(vec![a, b, c]);
                if !d.is_empty() {
                    out.insert(d);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Census field for the exhaustive part of the round trip.
pub const CENSUS_PRIME: u64 = 3;

fn quiver_roundtrip(max: usize, params: &SuiteParams) -> Result<Outcome, SuiteError> {
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut census = Vec::new();
    for dims in small_dims(max) {
        let r = quiver::orbit_census(&dims, CENSUS_PRIME)?;
        cases += r.representations as usize;
        if r.unreached > 0 {
            failures.push(Failure::new(format!("{:?} over F_{}", dims.m, r.p), "every representation reached", r.unreached));
        }
        for (want, got) in &r.mismatches {
            failures.push(Failure::new(format!("{:?} over F_{}", dims.m, r.p), want, got));
        }
        census.push(serde_json::json!({ "dims": dims, "representations": r.representations, "orbits": r.orbits }));
        for (t, ms) in quiver::multisegments_with_dims(&dims).iter().enumerate() {
            let mut rng = quiver::trial_rng(params.seed, t as u64);
            let rep = quiver::generic_representation(ms, params.prime, &mut rng);
            let got = quiver::table_to_multisegment(&quiver::rank_table(&rep))?;
            cases += 1;
            if got != *ms {
                failures.push(Failure::new(format!("{ms} over F_{}", params.prime), ms, got));
            }
        }
    }
    let details = serde_json::json!({ "census_prime": CENSUS_PRIME, "prime": params.prime, "census": census });
    Ok((cases, failures, details))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), s.name());
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn guards() {
        assert!(matches!(run_suite(Suite::Counts, &SuiteParams::new(6)), Err(SuiteError::Guard { .. })));
        let p = SuiteParams { bound: Some(4), ..SuiteParams::new(2) };
        assert!(matches!(run_suite(Suite::Q1, &p), Err(SuiteError::Guard { .. })));
    }

    #[test]
    fn counts_small() {
        let r = run_suite(Suite::Counts, &SuiteParams::new(3)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.details["expected"], 15);
    }
}
