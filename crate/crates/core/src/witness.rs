//! Constructive witness sequences: the index subsequences ξₙ, the monotone
//! multipliers Bₙ, and the Kummer parameters pₙ, together with exact
//! verification of their defining inequalities at a finite horizon.

use crate::engine::ParamSequence;
use crate::error::{SeriesError, WitnessError};
use crate::precision::PrecisionConfig;
use crate::scalar::{Scalar, Value};
use crate::series::{sample_indices, SeriesHandle, Status, TailCertainty, TailProvider};

/// Default materialization horizon for witness sequences, independent of the
/// analysis window: verification is the expensive exact-arithmetic path.
pub const DEFAULT_WITNESS_HORIZON: u64 = 4096;

/// Upper bound on index scans while searching for ξₙ.
pub const XI_SEARCH_HORIZON: u64 = 1_000_000;

/// Which construction produced a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessProvenance {
    Lemma1,
    Lemma2Case1,
    Lemma2Case2,
    Sufficiency1,
}

/// Limiting behaviour the Bₙ sequence is constructed to exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BTarget {
    /// Nondecreasing and unbounded along ξₖ (Lemma 1 side).
    DivergesToInfinity,
    /// Nonincreasing after its first positive entry (Lemma 2 side).
    TendsToZero,
    /// Bounded below by 1 (sufficiency-(1) extraction).
    BoundedBelowByOne,
}

/// A strictly increasing list of indices ξ₁ < ξ₂ < …
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSubsequence {
    xi: Vec<u64>,
    provenance: WitnessProvenance,
}

impl IndexSubsequence {
    pub fn new(xi: Vec<u64>, provenance: WitnessProvenance) -> Self {
        assert!(xi.windows(2).all(|w| w[0] < w[1]), "xi must strictly increase");
        assert!(xi.first().is_none_or(|&x| x >= 1));
        if provenance == WitnessProvenance::Lemma2Case2 {
            assert_eq!(xi.first(), Some(&1), "Lemma 2 Case 2 requires xi_1 = 1");
        }
        IndexSubsequence { xi, provenance }
    }

    pub fn xi(&self) -> &[u64] {
        &self.xi
    }

    pub fn provenance(&self) -> WitnessProvenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

/// The multiplier sequence Bₙ on an index range `[first, last]`, run-length
/// encoded: each run `(start, value)` holds until the next run's start. The
/// encoding keeps multi-million-term Lemma 2 blocks representable.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessB<S: Scalar> {
    runs: Vec<(u64, S)>,
    first: u64,
    last: u64,
    target: BTarget,
    provenance: WitnessProvenance,
}

impl<S: Scalar> WitnessB<S> {
    fn from_runs(
        runs: Vec<(u64, S)>,
        first: u64,
        last: u64,
        target: BTarget,
        provenance: WitnessProvenance,
    ) -> Self {
        assert!(!runs.is_empty() && first <= last);
        assert_eq!(runs[0].0, first);
        assert!(runs.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(runs.last().unwrap().0 <= last);
        WitnessB {
            runs,
            first,
            last,
            target,
            provenance,
        }
    }

    pub fn first_index(&self) -> u64 {
        self.first
    }

    pub fn horizon(&self) -> u64 {
        self.last
    }

    pub fn target(&self) -> BTarget {
        self.target
    }

    pub fn provenance(&self) -> WitnessProvenance {
        self.provenance
    }

    pub fn runs(&self) -> &[(u64, S)] {
        &self.runs
    }

    /// Bₙ for `n` in `[first, last]`.
    pub fn value(&self, n: u64) -> &S {
        assert!(n >= self.first && n <= self.last, "index outside witness range");
        let i = self.runs.partition_point(|(s, _)| *s <= n);
        &self.runs[i - 1].1
    }

    /// Materialize the first `k` values starting at `first`.
    pub fn values_upto(&self, k: u64) -> Vec<S> {
        let hi = self.last.min(self.first.saturating_add(k.saturating_sub(1)));
        (self.first..=hi).map(|n| self.value(n).clone()).collect()
    }

    /// Indices in `[first, min(last, hi)]` with Bₙ > 0.
    pub fn support_upto(&self, hi: u64) -> Vec<u64> {
        let hi = hi.min(self.last);
        let mut out = Vec::new();
        for (i, (start, v)) in self.runs.iter().enumerate() {
            if !v.is_positive() {
                continue;
            }
            let end = self
                .runs
                .get(i + 1)
                .map(|(s, _)| s - 1)
                .unwrap_or(self.last)
                .min(hi);
            if *start > hi {
                break;
            }
            out.extend(*start..=end);
        }
        out
    }
}

/// The Kummer parameter sequence pₙ on the listed support indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessP<S: Scalar> {
    /// Original series indices the values refer to (dense `1..=M` for the
    /// necessity-(1) construction, the B-support for necessity (2)).
    pub support: Vec<u64>,
    pub values: Vec<S>,
    /// Certified Kummer margin c (necessity 1) or none (necessity 2).
    pub margin: Option<S>,
}

/// Outcome of re-checking a witness against its defining inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    /// Name of the inequality that was checked.
    pub inequality: String,
    /// Number of indices checked.
    pub checked: u64,
    /// Indices (or block numbers) where the inequality failed.
    pub failures: Vec<u64>,
    /// Slack of the tightest check; negative slack means a failure.
    pub worst_margin: Value,
    /// Index attaining the worst margin.
    pub worst_index: u64,
}

/// Which witness bundle to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Lemma1,
    Lemma2,
    Necessity1,
    Necessity2,
    Sufficiency1,
}

/// Sequences handed to [`verify_witness`]; unused slots stay `None`.
#[derive(Debug, Clone)]
pub struct WitnessBundle<S: Scalar> {
    pub xi: Option<IndexSubsequence>,
    pub b: Option<WitnessB<S>>,
    pub p: Option<WitnessP<S>>,
    pub c: Option<S>,
}

impl<S: Scalar> WitnessBundle<S> {
    pub fn empty() -> Self {
        WitnessBundle {
            xi: None,
            b: None,
            p: None,
            c: None,
        }
    }
}

fn known(a_status: Option<crate::series::KnownStatus>, want: Status) -> bool {
    matches!(a_status, Some(ks) if ks.status == want)
}

fn certified(c: TailCertainty) -> bool {
    matches!(c, TailCertainty::Exact | TailCertainty::IntegralBound)
}

/// Evaluate a term without touching the memo cache (witness block scans visit
/// millions of indices; memoizing them would exhaust memory).
fn term_direct<S: Scalar>(a: &SeriesHandle<S>, n: u64) -> Result<S, WitnessError> {
    let v: S = a
        .expr()
        .evaluate(n, a.config())
        .map_err(|e| WitnessError::Series(SeriesError::Eval(e)))?;
    if !v.is_positive() {
        return Err(WitnessError::Series(SeriesError::NonPositiveTerm { n }));
    }
    Ok(v)
}

/// Low-precision term value for the scan phase of block searches. A direct
/// f64 walk of the expression tree covers the common case; anything that
/// leaves f64 range (or hits a domain edge) falls back to the full
/// high-precision evaluator so error reporting stays consistent.
fn term_f64<S: Scalar>(
    a: &SeriesHandle<S>,
    n: u64,
    scan_cfg: &PrecisionConfig,
) -> Result<f64, WitnessError> {
    if let Some(v) = eval_f64(a.expr().root(), n) {
        if v.is_finite() && v > 0.0 {
            return Ok(v);
        }
    }
    let v: crate::scalar::Fp = a
        .expr()
        .evaluate(n, scan_cfg)
        .map_err(|e| WitnessError::Series(SeriesError::Eval(e)))?;
    Ok(v.to_f64_lossy())
}

/// Best-effort f64 evaluation of an expression tree at index `n`.
/// Returns `None` on any domain edge (division by zero, non-integer or
/// oversized factorial argument) or non-finite intermediate.
fn eval_f64(node: &crate::expr::Node, n: u64) -> Option<f64> {
    use crate::expr::ExprKind::*;
    let v = match &node.kind {
        Const(c) => Scalar::to_f64_lossy(c),
        Var => n as f64,
        Neg(a) => -eval_f64(a, n)?,
        Add(a, b) => eval_f64(a, n)? + eval_f64(b, n)?,
        Sub(a, b) => eval_f64(a, n)? - eval_f64(b, n)?,
        Mul(a, b) => eval_f64(a, n)? * eval_f64(b, n)?,
        Div(a, b) => {
            let d = eval_f64(b, n)?;
            if d == 0.0 {
                return None;
            }
            eval_f64(a, n)? / d
        }
        Pow(a, b) => eval_f64(a, n)?.powf(eval_f64(b, n)?),
        Ln(a) => eval_f64(a, n)?.ln(),
        Exp(a) => eval_f64(a, n)?.exp(),
        Sqrt(a) => eval_f64(a, n)?.sqrt(),
        Factorial(a) => {
            let x = eval_f64(a, n)?;
            if x < 0.0 || x > 170.0 || x.fract() != 0.0 {
                return None;
            }
            let mut acc = 1.0f64;
            let mut k = 2.0f64;
            while k <= x {
                acc *= k;
                k += 1.0;
            }
            acc
        }
    };
    v.is_finite().then_some(v)
}

/// A known-divergent series has no tail to certify; an unknown status fails
/// the convergence precondition outright.
fn check_convergent_side<S: Scalar>(a: &SeriesHandle<S>) -> Result<(), WitnessError> {
    if known(a.known_status(), Status::Divergent) {
        return Err(WitnessError::TailNotCertified);
    }
    if !known(a.known_status(), Status::Convergent) {
        return Err(WitnessError::NotConvergent);
    }
    Ok(())
}

fn require_start_one<S: Scalar>(a: &SeriesHandle<S>) -> Result<(), WitnessError> {
    if a.start() != 1 {
        return Err(WitnessError::Series(SeriesError::StartIndexUnsupported {
            start: a.start(),
        }));
    }
    Ok(())
}

/// Build the Lemma 1 index subsequence for a convergent series: the minimal
/// strictly increasing ξ₁ < … < ξ_count with certified tail(ξₙ) < aₙ².
/// Minimality is with respect to the certified upper bound, not the true tail.
pub fn build_xi_convergent<S: Scalar>(
    a: &SeriesHandle<S>,
    count: usize,
) -> Result<IndexSubsequence, WitnessError> {
    require_start_one(a)?;
    check_convergent_side(a)?;
    let mut xi = Vec::with_capacity(count);
    extend_xi_convergent(a, &mut xi, |xi| xi.len() >= count)?;
    Ok(IndexSubsequence::new(xi, WitnessProvenance::Lemma1))
}

/// Like [`build_xi_convergent`], but generates entries until one exceeds the
/// horizon `m`, so the subsequence covers every block containing an index ≤ m.
pub fn build_xi_covering<S: Scalar>(
    a: &SeriesHandle<S>,
    m: u64,
) -> Result<IndexSubsequence, WitnessError> {
    require_start_one(a)?;
    check_convergent_side(a)?;
    let mut xi = Vec::new();
    extend_xi_convergent(a, &mut xi, |xi| xi.last().is_some_and(|&x| x > m))?;
    Ok(IndexSubsequence::new(xi, WitnessProvenance::Lemma1))
}

fn extend_xi_convergent<S: Scalar>(
    a: &SeriesHandle<S>,
    xi: &mut Vec<u64>,
    done: impl Fn(&Vec<u64>) -> bool,
) -> Result<(), WitnessError> {
    let mut cand = 1u64;
    while !done(xi) {
        let n = xi.len() as u64 + 1;
        let an = a.term(n)?;
        let target = an.mul(&an);
        loop {
            if cand > XI_SEARCH_HORIZON {
                return Err(WitnessError::SearchExhausted);
            }
            let tb = a.tail_bound(cand).map_err(|e| match e {
                SeriesError::TailNotApplicable => WitnessError::TailNotCertified,
                other => WitnessError::Series(other),
            })?;
            if !certified(tb.certified) {
                return Err(WitnessError::TailNotCertified);
            }
            if tb.upper < target {
                xi.push(cand);
                cand += 1;
                break;
            }
            cand += 1;
        }
    }
    Ok(())
}

/// Build the Lemma 1 multiplier sequence on `[1, m]`: Bₙ = 0 on the prefix
/// `[1, ξ₁)` and, on each block `[ξₖ, ξₖ₊₁)`, the running supremum of 1/aⱼ for
/// j ≤ k (the literal per-block 1/aₖ assignment with `strict = true`).
pub fn build_b_convergent<S: Scalar>(
    a: &SeriesHandle<S>,
    xi: &IndexSubsequence,
    m: u64,
    strict: bool,
) -> Result<WitnessB<S>, WitnessError> {
    assert!(m >= 1);
    if xi.xi().last().is_none_or(|&x| x <= m) {
        return Err(WitnessError::InsufficientXi);
    }
    let cfg = a.config();
    let unit = S::one(cfg);
    let mut runs: Vec<(u64, S)> = Vec::new();
    let first_xi = xi.xi()[0];
    if first_xi > 1 {
        runs.push((1, S::zero(cfg)));
    }
    let mut sup: Option<S> = None;
    for (k0, &x) in xi.xi().iter().enumerate() {
        if x > m {
            break;
        }
        let inv = unit.div(&a.term(k0 as u64 + 1)?).map_err(|_| {
            WitnessError::Series(SeriesError::NonPositiveTerm { n: k0 as u64 + 1 })
        })?;
        let v = if strict {
            inv
        } else {
            match &sup {
                Some(s) if *s >= inv => s.clone(),
                _ => {
                    sup = Some(inv.clone());
                    inv
                }
            }
        };
        push_run(&mut runs, x, v);
    }
    Ok(WitnessB::from_runs(
        runs,
        1,
        m,
        BTarget::DivergesToInfinity,
        WitnessProvenance::Lemma1,
    ))
}

fn push_run<S: Scalar>(runs: &mut Vec<(u64, S)>, start: u64, v: S) {
    if runs.last().is_some_and(|(_, prev)| *prev == v) {
        return;
    }
    runs.push((start, v));
}

/// Build the Lemma 2 witness for a divergent series on `[start, m]`.
///
/// Case selection samples aₙ at 64 geometrically spaced indices: if every
/// sample stays above ε₀ = a_start/2 the terms are treated as bounded away
/// from zero (Case 1, ξₖ enumerates qualifying indices, Bₙ = 1/k at ξₖ and 0
/// elsewhere). Otherwise Case 2 partitions indices into blocks whose term
/// sums exceed the block number, with Bₙ = 1/k on block k. A Case 1 attempt
/// that finds too few qualifying indices falls back to Case 2.
pub fn build_b_divergent<S: Scalar>(
    a: &SeriesHandle<S>,
    m: u64,
) -> Result<(IndexSubsequence, WitnessB<S>), WitnessError> {
    if !known(a.known_status(), Status::Divergent) {
        return Err(WitnessError::NotDivergent);
    }
    let start = a.start();
    assert!(m > start);
    let cfg = a.config();
    let two = S::from_u64(2, cfg);
    let eps0 = a.term(start)?.div(&two).expect("2 != 0");
    let mut case1 = true;
    for i in sample_indices(start, m, 64) {
        if a.term(i)? < eps0 {
            case1 = false;
            break;
        }
    }
    const CASE1_MIN_SUPPORT: usize = 8;
    if case1 {
        if let Some(found) = build_case1(a, m, &eps0, CASE1_MIN_SUPPORT)? {
            return Ok(found);
        }
    }
    build_case2(a, m)
}

fn build_case1<S: Scalar>(
    a: &SeriesHandle<S>,
    m: u64,
    eps0: &S,
    min_support: usize,
) -> Result<Option<(IndexSubsequence, WitnessB<S>)>, WitnessError> {
    let cfg = a.config();
    let unit = S::one(cfg);
    let zero = S::zero(cfg);
    let start = a.start();
    let mut xi = Vec::new();
    let mut runs: Vec<(u64, S)> = Vec::new();
    if start > 1 {
        runs.push((1, zero.clone()));
    }
    for n in start..=m {
        if a.term(n)? >= *eps0 {
            xi.push(n);
            let k = S::from_u64(xi.len() as u64, cfg);
            push_run(&mut runs, n, unit.div(&k).expect("k >= 1"));
        } else {
            push_run(&mut runs, n, zero.clone());
        }
    }
    if xi.len() < min_support {
        return Ok(None);
    }
    if runs.is_empty() || runs[0].0 > 1 {
        runs.insert(0, (1, zero));
    }
    let b = WitnessB::from_runs(runs, 1, m, BTarget::TendsToZero, WitnessProvenance::Lemma2Case1);
    Ok(Some((
        IndexSubsequence::new(xi, WitnessProvenance::Lemma2Case1),
        b,
    )))
}

fn build_case2<S: Scalar>(
    a: &SeriesHandle<S>,
    m: u64,
) -> Result<(IndexSubsequence, WitnessB<S>), WitnessError> {
    require_start_one(a)?;
    let cfg = a.config();
    let unit = S::one(cfg);
    let mut xi = vec![1u64];
    let mut runs: Vec<(u64, S)> = vec![(1, unit.clone())];
    let mut block = 1u64;
    let mut lo = 1u64;
    loop {
        match find_block_end(a, lo, block, m)? {
            Some(next) => {
                xi.push(next);
                block += 1;
                if next > m {
                    break;
                }
                let k = S::from_u64(block, cfg);
                push_run(&mut runs, next, unit.div(&k).expect("k >= 1"));
                lo = next;
            }
            None => {
                if block == 1 {
                    return Err(WitnessError::BlockSearchExhausted { block: 1 });
                }
                break;
            }
        }
    }
    let b = WitnessB::from_runs(runs, 1, m, BTarget::TendsToZero, WitnessProvenance::Lemma2Case2);
    Ok((
        IndexSubsequence::new(xi, WitnessProvenance::Lemma2Case2),
        b,
    ))
}

/// Minimal `m` with Σ_{j=lo}^{m−1} aⱼ > k, scanning term indices up to `hi`
/// (so the result is at most hi + 1), or `None` when the sum through `hi`
/// never exceeds k.
///
/// A compensated f64 scan locates the crossing region first; the scan's
/// absolute error is far below the 10⁻⁶·(k+1) guard band for horizons this
/// crate accepts, so exact arithmetic only has to sum one prefix
/// (divide-and-conquer) and then step across the handful of guarded indices.
fn find_block_end<S: Scalar>(
    a: &SeriesHandle<S>,
    lo: u64,
    k: u64,
    hi: u64,
) -> Result<Option<u64>, WitnessError> {
    let guard = 1e-6 * (k as f64 + 1.0);
    let threshold = k as f64 - guard;
    let scan_cfg = PrecisionConfig::new(PrecisionConfig::MIN_MANTISSA_BITS);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    let mut bracket = None;
    let mut j = lo;
    while j <= hi {
        let y = term_f64(a, j, &scan_cfg)? - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        if acc > threshold {
            bracket = Some(j);
            break;
        }
        j += 1;
    }
    let Some(bracket) = bracket else {
        return Ok(None);
    };
    let cfg = a.config();
    let mut sum = if bracket > lo {
        S::sum_range(cfg, lo, bracket - 1, &mut |n| term_direct(a, n))?
    } else {
        S::zero(cfg)
    };
    let kval = S::from_u64(k, cfg);
    let mut j = bracket;
    while j <= hi {
        sum = sum.add_unreduced(&term_direct(a, j)?);
        if sum > kval {
            return Ok(Some(j + 1));
        }
        j += 1;
    }
    Ok(None)
}

/// Σ_{n=1}^{m} aₙBₙ, exploiting the run-length encoding: one range sum per
/// run, scaled by the run's value.
pub fn weighted_partial_sum<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &WitnessB<S>,
    m: u64,
) -> Result<S, WitnessError> {
    assert!(m <= b.horizon());
    let cfg = a.config();
    let mut total = S::zero(cfg);
    for (i, (start, v)) in b.runs().iter().enumerate() {
        if *start > m {
            break;
        }
        if !v.is_positive() {
            continue;
        }
        let end = b
            .runs()
            .get(i + 1)
            .map(|(s, _)| s - 1)
            .unwrap_or(b.horizon())
            .min(m);
        let s = S::sum_range(cfg, *start, end, &mut |n| term_direct(a, n))?;
        total = total.add(&v.mul(&s));
    }
    Ok(total)
}

/// The weighted total S = Σ_{n=1}^{∞} aₙBₙ used as p₁a₁ in the necessity-(1)
/// construction.
///
/// When the series has an exact tail formula and the materialized blocks have
/// exactly geometric weighted block sums, the closed form w₁/(1−q) is exact.
/// Otherwise S is over-estimated by truncation plus B_m · certified tail — an
/// over-estimate keeps every pₙ positive, which is all the recursion needs.
fn weighted_total<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &WitnessB<S>,
    m: u64,
) -> Result<S, WitnessError> {
    if let Some(s) = weighted_total_geometric(a, b)? {
        return Ok(s);
    }
    let tb = a.tail_bound(m).map_err(|e| match e {
        SeriesError::TailNotApplicable => WitnessError::TotalNotAvailable,
        other => WitnessError::Series(other),
    })?;
    if !certified(tb.certified) {
        return Err(WitnessError::TotalNotAvailable);
    }
    let trunc = weighted_partial_sum(a, b, m)?;
    Ok(trunc.add(&b.value(m).mul(&tb.upper)))
}

/// Closed form for the geometric family: with exact tails T(·), block k of
/// the Lemma 1 witness contributes wₖ = vₖ·(T(ξₖ−1) − T(ξₖ₊₁−1)); when the
/// wₖ form an exact geometric progression with ratio q < 1 on every
/// materialized block, Σ wₖ = w₁/(1−q).
fn weighted_total_geometric<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &WitnessB<S>,
) -> Result<Option<S>, WitnessError> {
    let exact_tail = matches!(
        a.tail_provider(),
        Some(TailProvider::Geometric { .. }) | Some(TailProvider::ExactFormula(_))
    );
    if !exact_tail {
        return Ok(None);
    }
    let positive: Vec<(u64, S)> = b
        .runs()
        .iter()
        .filter(|(_, v)| v.is_positive())
        .cloned()
        .collect();
    // Block ends come from the next run start; the last materialized block
    // has no certain end, so at least three positive runs are needed to see
    // two complete weighted block sums.
    if positive.len() < 3 {
        return Ok(None);
    }
    let tail_at = |x: u64| -> Result<S, WitnessError> {
        let tb = a.tail_bound(x)?;
        if tb.certified != TailCertainty::Exact {
            return Err(WitnessError::TotalNotAvailable);
        }
        Ok(tb.upper)
    };
    let mut w = Vec::new();
    for pair in positive.windows(2) {
        let (start, ref v) = pair[0];
        let (next, _) = pair[1];
        let block_sum = tail_at(start - 1)?.sub(&tail_at(next - 1)?);
        w.push(v.mul(&block_sum));
    }
    let q = match w[1].div(&w[0]) {
        Ok(q) => q,
        Err(_) => return Ok(None),
    };
    if !q.is_positive() || q >= S::one(a.config()) {
        return Ok(None);
    }
    for pair in w.windows(2) {
        if pair[1] != pair[0].mul(&q) {
            return Ok(None);
        }
    }
    let denom = S::one(a.config()).sub(&q);
    Ok(Some(w[0].div(&denom).expect("q < 1")))
}

/// Necessity (1): from a convergent series and its Lemma 1 multipliers,
/// produce pₙ with p₁ = S/a₁ and pₙ₊₁ = (pₙaₙ − aₙ₊₁Bₙ₊₁)/aₙ₊₁, together
/// with the certified Kummer margin c = min Bₙ over the suffix where Bₙ ≥ 1.
pub fn build_p_from_b_convergent<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &WitnessB<S>,
    m: u64,
) -> Result<WitnessP<S>, WitnessError> {
    require_start_one(a)?;
    if !known(a.known_status(), Status::Convergent) {
        return Err(WitnessError::NotConvergent);
    }
    assert!(m >= 1 && m <= b.horizon() && b.first_index() == 1);
    let s_total = weighted_total(a, b, b.horizon())?;
    let a1 = a.term(1)?;
    let p1 = s_total.div(&a1).expect("positive term");
    if !p1.is_positive() {
        return Err(WitnessError::NonPositiveP { n: 1 });
    }
    let mut values = vec![p1];
    for n in 1..m {
        let an = a.term(n)?;
        let an1 = a.term(n + 1)?;
        let bn1 = b.value(n + 1);
        let pn = values.last().unwrap();
        let pn1 = pn
            .mul(&an)
            .sub(&an1.mul(bn1))
            .div(&an1)
            .expect("positive term");
        if !pn1.is_positive() {
            return Err(WitnessError::NonPositiveP { n: n + 1 });
        }
        values.push(pn1);
    }
    let margin = certified_margin(b, m, a.config());
    Ok(WitnessP {
        support: (1..=m).collect(),
        values,
        margin,
    })
}

/// min Bₙ over [n₊, m] where n₊ is the first index with Bₙ ≥ 1.
fn certified_margin<S: Scalar>(b: &WitnessB<S>, m: u64, cfg: &PrecisionConfig) -> Option<S> {
    let unit = S::one(cfg);
    let mut min: Option<S> = None;
    let mut seen = false;
    for (start, v) in b.runs() {
        if *start > m {
            break;
        }
        if !seen && *v < unit {
            continue;
        }
        seen = true;
        match &min {
            Some(cur) if *cur <= *v => {}
            _ => min = Some(v.clone()),
        }
    }
    min
}

/// Necessity (2): pₙ = 1/(aₙBₙ) on the support of a divergent-side witness.
/// With `reindex` set, indices where Bₙ = 0 (Case 1 gaps) are dropped from
/// the support entirely; otherwise a zero entry is an error.
pub fn build_p_divergent<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &WitnessB<S>,
    m: u64,
    reindex: bool,
) -> Result<WitnessP<S>, WitnessError> {
    assert!(m >= 1 && m <= b.horizon());
    let cfg = a.config();
    let unit = S::one(cfg);
    let support = if reindex {
        b.support_upto(m)
    } else {
        let all: Vec<u64> = (b.first_index()..=m).collect();
        if let Some(&n) = all.iter().find(|&&n| !b.value(n).is_positive()) {
            return Err(WitnessError::ZeroB { n });
        }
        all
    };
    let mut values = Vec::with_capacity(support.len());
    for &n in &support {
        let an = a.term(n)?;
        let pn = unit.div(&an.mul(b.value(n))).expect("positive support");
        values.push(pn);
    }
    // The reindexed p_k a_{n_k} = 1/B_{n_k} is nondecreasing because B is
    // nonincreasing on its support; verify_witness re-checks this exactly.
    Ok(WitnessP {
        support,
        values,
        margin: None,
    })
}

/// Source of the parameter sequence for [`build_b_from_p`].
pub enum PSource<'a, S: Scalar> {
    Param(&'a ParamSequence),
    Witness(&'a WitnessP<S>),
}

/// Sufficiency (1): extract Bₙ₊₁ = (pₙaₙ − pₙ₊₁aₙ₊₁)/(c·aₙ₊₁) for
/// `from ≤ n < m` and check the proof's "Bₙ ≥ 1 for all n". The margin is
/// only required from `from` on; pass 1 to demand it everywhere, or the
/// suffix where a necessity-(1) witness certifies its margin.
pub fn build_b_from_p<S: Scalar>(
    a: &SeriesHandle<S>,
    p: PSource<'_, S>,
    c: &S,
    from: u64,
    m: u64,
) -> Result<WitnessB<S>, WitnessError> {
    require_start_one(a)?;
    assert!(from >= 1 && m >= from + 1);
    assert!(c.is_positive(), "margin c must be positive");
    let cfg = a.config();
    let pval = |n: u64| -> Result<S, WitnessError> {
        match &p {
            PSource::Param(seq) => Ok(seq.eval(n, cfg)?),
            PSource::Witness(w) => {
                let i = n.checked_sub(w.support.first().copied().unwrap_or(1));
                match i.and_then(|i| {
                    (w.support.get(i as usize) == Some(&n)).then(|| w.values[i as usize].clone())
                }) {
                    Some(v) => Ok(v),
                    None => Err(WitnessError::InsufficientXi),
                }
            }
        }
    };
    let unit = S::one(cfg);
    let mut runs: Vec<(u64, S)> = Vec::new();
    let mut pn = pval(from)?;
    let mut an = a.term(from)?;
    for n in from..m {
        let pn1 = pval(n + 1)?;
        let an1 = a.term(n + 1)?;
        let bn1 = pn
            .mul(&an)
            .sub(&pn1.mul(&an1))
            .div(&c.mul(&an1))
            .expect("positive term");
        if bn1 < unit {
            return Err(WitnessError::MarginViolated { n });
        }
        push_run(&mut runs, n + 1, bn1);
        pn = pn1;
        an = an1;
    }
    Ok(WitnessB::from_runs(
        runs,
        from + 1,
        m,
        BTarget::BoundedBelowByOne,
        WitnessProvenance::Sufficiency1,
    ))
}

/// Re-check a witness bundle's defining inequalities index-by-index in exact
/// arithmetic (rational mode). Failures are report content, not errors;
/// errors arise only from missing bundle parts or term evaluation.
pub fn verify_witness<S: Scalar>(
    kind: WitnessKind,
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
    m: u64,
) -> Result<WitnessReport, WitnessError> {
    match kind {
        WitnessKind::Lemma1 => verify_lemma1(a, seq),
        WitnessKind::Lemma2 => verify_lemma2(a, seq),
        WitnessKind::Necessity1 => verify_necessity1(a, seq, m),
        WitnessKind::Necessity2 => verify_necessity2(a, seq),
        WitnessKind::Sufficiency1 => verify_sufficiency1(a, seq, m),
    }
}

struct SlackTracker<S: Scalar> {
    checked: u64,
    failures: Vec<u64>,
    worst: Option<(u64, S)>,
}

impl<S: Scalar> SlackTracker<S> {
    fn new() -> Self {
        SlackTracker {
            checked: 0,
            failures: Vec::new(),
            worst: None,
        }
    }

    /// Record a strict check: zero slack is a failure.
    fn record(&mut self, index: u64, slack: S) {
        self.checked += 1;
        if !slack.is_positive() {
            self.failures.push(index);
        }
        match &self.worst {
            Some((_, w)) if w.cmp_values(&slack) != std::cmp::Ordering::Greater => {}
            _ => self.worst = Some((index, slack)),
        }
    }

    fn into_report(self, inequality: &str, cfg: &PrecisionConfig) -> WitnessReport {
        let (worst_index, worst) = self
            .worst
            .unwrap_or((0, S::zero(cfg)));
        WitnessReport {
            inequality: inequality.to_string(),
            checked: self.checked,
            failures: self.failures,
            worst_margin: worst.compress().to_value(),
            worst_index,
        }
    }
}

/// Tail inequality tail(ξₙ) < aₙ² with the certified tail upper bound
/// substituted for the true tail; the slack is relative: 1 − tail(ξₙ)/aₙ².
fn verify_lemma1<S: Scalar>(
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
) -> Result<WitnessReport, WitnessError> {
    let xi = seq.xi.as_ref().ok_or(WitnessError::InsufficientXi)?;
    let cfg = a.config();
    let unit = S::one(cfg);
    let mut tracker = SlackTracker::new();
    for (i, &x) in xi.xi().iter().enumerate() {
        let n = i as u64 + 1;
        let an = a.term(n)?;
        let tb = a.tail_bound(x).map_err(|e| match e {
            SeriesError::TailNotApplicable => WitnessError::TailNotCertified,
            other => WitnessError::Series(other),
        })?;
        if !certified(tb.certified) {
            return Err(WitnessError::TailNotCertified);
        }
        let ratio = tb.upper.div(&an.mul(&an)).expect("positive term");
        tracker.record(n, unit.sub(&ratio));
    }
    Ok(tracker.into_report("tail(xi_n) < a_n^2", cfg))
}

/// Block inequality: every completed block sum exceeds its block number
/// exactly.
fn verify_lemma2<S: Scalar>(
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
) -> Result<WitnessReport, WitnessError> {
    let xi = seq.xi.as_ref().ok_or(WitnessError::InsufficientXi)?;
    if xi.len() < 2 {
        return Err(WitnessError::InsufficientXi);
    }
    let cfg = a.config();
    let mut tracker = SlackTracker::new();
    for (k0, pair) in xi.xi().windows(2).enumerate() {
        let k = k0 as u64 + 1;
        let sum = S::sum_range(cfg, pair[0], pair[1] - 1, &mut |n| term_direct(a, n))?;
        tracker.record(k, sum.sub_unreduced(&S::from_u64(k, cfg)).compress());
    }
    Ok(tracker.into_report("block_sum_k > k", cfg))
}

/// Necessity (1): the telescoping identity pₙaₙ − pₙ₊₁aₙ₊₁ = aₙ₊₁Bₙ₊₁ holds
/// exactly and every pₙ is positive; the slack records the Kummer statistic
/// (pₙaₙ − pₙ₊₁aₙ₊₁)/aₙ₊₁ − c over the certified suffix when a margin is
/// attached, and the statistic itself elsewhere.
fn verify_necessity1<S: Scalar>(
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
    m: u64,
) -> Result<WitnessReport, WitnessError> {
    let b = seq.b.as_ref().ok_or(WitnessError::InsufficientXi)?;
    let p = seq.p.as_ref().ok_or(WitnessError::InsufficientXi)?;
    let cfg = a.config();
    let hi = (m.min(b.horizon()) as usize).min(p.values.len()) as u64;
    let tol = cfg.comparison_tolerance();
    let mut tracker = SlackTracker::new();
    let mut in_suffix = false;
    let unit = S::one(cfg);
    for n in 1..hi {
        let an = a.term(n)?;
        let an1 = a.term(n + 1)?;
        let pn = &p.values[(n - 1) as usize];
        let pn1 = &p.values[n as usize];
        let lhs = pn.mul(&an).sub(&pn1.mul(&an1));
        let rhs = an1.mul(b.value(n + 1));
        let identity_ok = lhs.cmp_tol(&rhs, tol) == std::cmp::Ordering::Equal && pn.is_positive();
        let kappa = lhs.div(&an1).expect("positive term");
        if !in_suffix && b.value(n + 1) >= &unit {
            in_suffix = true;
        }
        let slack = match (&p.margin, in_suffix) {
            (Some(c), true) => kappa.sub(c),
            _ => kappa,
        };
        tracker.checked += 1;
        if !identity_ok {
            tracker.failures.push(n);
        }
        match &tracker.worst {
            Some((_, w)) if *w <= slack => {}
            _ => tracker.worst = Some((n, slack)),
        }
    }
    Ok(tracker.into_report("p_n a_n - p_{n+1} a_{n+1} = a_{n+1} B_{n+1}", cfg))
}

/// Necessity (2): pₙaₙ − pₙ₊₁aₙ₊₁ ≤ 0 on the (support-reindexed) sequence;
/// the slack is pₙ₊₁aₙ₊₁ − pₙaₙ, and ties (zero slack) pass.
fn verify_necessity2<S: Scalar>(
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
) -> Result<WitnessReport, WitnessError> {
    let p = seq.p.as_ref().ok_or(WitnessError::InsufficientXi)?;
    let cfg = a.config();
    let mut tracker = SlackTracker::new();
    for i in 0..p.support.len().saturating_sub(1) {
        let n = p.support[i];
        let n1 = p.support[i + 1];
        let lhs = p.values[i].mul(&a.term(n)?);
        let rhs = p.values[i + 1].mul(&a.term(n1)?);
        let slack = rhs.sub(&lhs);
        tracker.checked += 1;
        if slack.is_negative() {
            tracker.failures.push(n);
        }
        match &tracker.worst {
            Some((_, w)) if *w <= slack => {}
            _ => tracker.worst = Some((n, slack)),
        }
    }
    Ok(tracker.into_report("p_n a_n - p_{n+1} a_{n+1} <= 0", cfg))
}

/// Sufficiency (1): Bₙ ≥ 1 for every computed index.
fn verify_sufficiency1<S: Scalar>(
    a: &SeriesHandle<S>,
    seq: &WitnessBundle<S>,
    m: u64,
) -> Result<WitnessReport, WitnessError> {
    let b = seq.b.as_ref().ok_or(WitnessError::InsufficientXi)?;
    let cfg = a.config();
    let unit = S::one(cfg);
    let mut tracker = SlackTracker::new();
    let hi = m.min(b.horizon());
    for n in b.first_index()..=hi {
        let slack = b.value(n).sub(&unit);
        tracker.checked += 1;
        if slack.is_negative() {
            tracker.failures.push(n);
        }
        match &tracker.worst {
            Some((_, w)) if *w <= slack => {}
            _ => tracker.worst = Some((n, slack)),
        }
    }
    Ok(tracker.into_report("B_n >= 1", cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::find_entry;
    use crate::error::WitnessError;
    use num_rational::BigRational;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn entry(name: &str) -> SeriesHandle<BigRational> {
        find_entry(name).unwrap().series(cfg())
    }

    #[test]
    fn xi_geometric_half_matches_tail_algebra() {
        // 2^(-xi) < 2^(-2n) forces xi = 2n + 1.
        let a = entry("geometric:1/2");
        let xi = build_xi_convergent(&a, 3).unwrap();
        assert_eq!(xi.xi(), &[3, 5, 7]);
        let xi32 = build_xi_convergent(&a, 32).unwrap();
        let expect: Vec<u64> = (1..=32).map(|n| 2 * n + 1).collect();
        assert_eq!(xi32.xi(), expect.as_slice());
    }

    #[test]
    fn xi_geometric_quarter_matches_tail_algebra() {
        // tail = (1/3)4^(-m) < 4^(-2n) forces xi = 2n.
        let a = entry("geometric:1/4");
        let xi = build_xi_convergent(&a, 3).unwrap();
        assert_eq!(xi.xi(), &[2, 4, 6]);
    }

    #[test]
    fn xi_harmonic_tail_not_certified() {
        let a = entry("harmonic");
        assert!(matches!(
            build_xi_convergent(&a, 2),
            Err(WitnessError::TailNotCertified)
        ));
    }

    #[test]
    fn b_convergent_geometric_values_and_weighted_sum() {
        let a = entry("geometric:1/2");
        let xi = build_xi_covering(&a, 8).unwrap();
        let b = build_b_convergent(&a, &xi, 8, false).unwrap();
        let got = b.values_upto(8);
        let expect: Vec<BigRational> = [0, 0, 2, 2, 4, 4, 8, 8]
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        assert_eq!(got, expect);
        // 2(1/8+1/16) + 4(1/32+1/64) + 8(1/128+1/256) = 21/32
        assert_eq!(weighted_partial_sum(&a, &b, 8).unwrap(), rat(21, 32));
        // strict mode coincides for monotone terms
        let strict = build_b_convergent(&a, &xi, 8, true).unwrap();
        assert_eq!(strict.values_upto(8), expect);
    }

    #[test]
    fn b_convergent_requires_covering_xi() {
        let a = entry("geometric:1/2");
        let xi = IndexSubsequence::new(vec![3, 5], WitnessProvenance::Lemma1);
        assert!(matches!(
            build_b_convergent(&a, &xi, 8, false),
            Err(WitnessError::InsufficientXi)
        ));
    }

    #[test]
    fn b_divergent_harmonic_case2_blocks() {
        let a = entry("harmonic");
        let (xi, b) = build_b_divergent(&a, 500).unwrap();
        assert_eq!(xi.provenance(), WitnessProvenance::Lemma2Case2);
        assert_eq!(xi.xi(), &[1, 3, 20, 393]);
        assert_eq!(b.target(), BTarget::TendsToZero);
        assert_eq!(*b.value(1), rat(1, 1));
        assert_eq!(*b.value(2), rat(1, 1));
        assert_eq!(*b.value(3), rat(1, 2));
        assert_eq!(*b.value(19), rat(1, 2));
        assert_eq!(*b.value(20), rat(1, 3));
        assert_eq!(*b.value(392), rat(1, 3));
        assert_eq!(*b.value(393), rat(1, 4));
        assert_eq!(*b.value(500), rat(1, 4));
        let report = verify_witness(WitnessKind::Lemma2, &a, &bundle_xi(xi), 500).unwrap();
        assert_eq!(report.checked, 3);
        assert!(report.failures.is_empty());
    }

    fn bundle_xi(xi: IndexSubsequence) -> WitnessBundle<BigRational> {
        WitnessBundle {
            xi: Some(xi),
            b: None,
            p: None,
            c: None,
        }
    }

    #[test]
    fn b_divergent_ones_case1() {
        let a = entry("ones");
        let (xi, b) = build_b_divergent(&a, 50).unwrap();
        assert_eq!(xi.provenance(), WitnessProvenance::Lemma2Case1);
        let expect: Vec<u64> = (1..=50).collect();
        assert_eq!(xi.xi(), expect.as_slice());
        for n in 1..=50u64 {
            assert_eq!(*b.value(n), rat(1, n as i64));
        }
    }

    #[test]
    fn b_divergent_refuses_convergent_series() {
        let a = entry("geometric:1/2");
        assert!(matches!(
            build_b_divergent(&a, 100),
            Err(WitnessError::NotDivergent)
        ));
    }

    #[test]
    fn p_from_b_geometric_closed_form() {
        let a = entry("geometric:1/2");
        let xi = build_xi_covering(&a, 64).unwrap();
        let b = build_b_convergent(&a, &xi, 64, false).unwrap();
        let p = build_p_from_b_convergent(&a, &b, 64).unwrap();
        // S = 3/4 exactly, p1 = S / a1 = 3/2, p2 = (p1 a1 - a2 B2)/a2 = 3.
        assert_eq!(p.values[0], rat(3, 2));
        assert_eq!(p.values[1], rat(3, 1));
        assert_eq!(p.margin, Some(rat(2, 1)));
        assert!(p.values.iter().all(|v| v.is_positive()));
        // p_n a_n is nonincreasing (strictly where B_{n+1} > 0).
        for n in 1..64u64 {
            let lhs = p.values[(n - 1) as usize].clone() * a.term(n).unwrap();
            let rhs = p.values[n as usize].clone() * a.term(n + 1).unwrap();
            assert!(lhs >= rhs);
        }
        let bundle = WitnessBundle {
            xi: None,
            b: Some(b),
            p: Some(p),
            c: None,
        };
        let report = verify_witness(WitnessKind::Necessity1, &a, &bundle, 64).unwrap();
        assert!(report.failures.is_empty());
        assert_eq!(report.checked, 63);
        // Worst slack is the certified-margin slack B_{n+1} - 2 = 0.
        assert_eq!(report.worst_margin.render(), "0");
    }

    #[test]
    fn p_divergent_harmonic_block_algebra() {
        let a = entry("harmonic");
        let (_, b) = build_b_divergent(&a, 500).unwrap();
        let p = build_p_divergent(&a, &b, 500, true).unwrap();
        assert_eq!(p.support.len(), 500);
        // On block k, p_n = n * k.
        assert_eq!(p.values[0], rat(1, 1));
        assert_eq!(p.values[1], rat(2, 1));
        assert_eq!(p.values[2], rat(6, 1));
        assert_eq!(p.values[19], rat(60, 1));
        let bundle = WitnessBundle {
            xi: None,
            b: Some(b),
            p: Some(p),
            c: None,
        };
        let report = verify_witness(WitnessKind::Necessity2, &a, &bundle, 500).unwrap();
        assert!(report.failures.is_empty());
        assert_eq!(report.checked, 499);
    }

    #[test]
    fn p_divergent_ones_is_linear() {
        let a = entry("ones");
        let (_, b) = build_b_divergent(&a, 50).unwrap();
        let p = build_p_divergent(&a, &b, 50, true).unwrap();
        for n in 1..=50u64 {
            assert_eq!(p.values[(n - 1) as usize], rat(n as i64, 1));
        }
    }

    #[test]
    fn b_from_p_geometric_unit_and_half_margin() {
        let a = entry("geometric:1/2");
        let one = rat(1, 1);
        let b = build_b_from_p(&a, PSource::Param(&ParamSequence::Ones), &one, 1, 32).unwrap();
        for n in 2..=32u64 {
            assert_eq!(*b.value(n), rat(1, 1));
        }
        let half = rat(1, 2);
        let b2 = build_b_from_p(&a, PSource::Param(&ParamSequence::Ones), &half, 1, 32).unwrap();
        for n in 2..=32u64 {
            assert_eq!(*b2.value(n), rat(2, 1));
        }
    }

    #[test]
    fn b_from_p_harmonic_margin_violated() {
        let a = entry("harmonic");
        let one = rat(1, 1);
        assert!(matches!(
            build_b_from_p(&a, PSource::Param(&ParamSequence::Linear), &one, 1, 32),
            Err(WitnessError::MarginViolated { n: 1 })
        ));
    }

    #[test]
    fn roundtrip_necessity1_through_b_from_p() {
        let a = entry("geometric:1/2");
        let xi = build_xi_covering(&a, 64).unwrap();
        let b = build_b_convergent(&a, &xi, 64, false).unwrap();
        let p = build_p_from_b_convergent(&a, &b, 64).unwrap();
        let c = p.margin.clone().unwrap();
        // The margin is certified from n+ = 3 on, i.e. kappa_n >= c for n >= 2.
        let back = build_b_from_p(&a, PSource::Witness(&p), &c, 2, 64).unwrap();
        for n in 3..=64u64 {
            // Recovered B' = B / c wherever the original B >= c.
            assert_eq!(back.value(n).clone() * c.clone(), b.value(n).clone());
            assert!(*back.value(n) >= rat(1, 1));
        }
        // Identity p_n a_n - p_{n+1} a_{n+1} = a_{n+1} B_{n+1} at every n.
        for n in 1..64u64 {
            let an = a.term(n).unwrap();
            let an1 = a.term(n + 1).unwrap();
            let lhs = p.values[(n - 1) as usize].clone() * an
                - p.values[n as usize].clone() * an1.clone();
            assert_eq!(lhs, an1 * b.value(n + 1).clone());
        }
    }

    #[test]
    fn verify_lemma1_worst_margin_at_first_index() {
        let a = entry("geometric:1/2");
        let xi = build_xi_convergent(&a, 32).unwrap();
        let report = verify_witness(WitnessKind::Lemma1, &a, &bundle_xi(xi), 64).unwrap();
        assert_eq!(report.checked, 32);
        assert!(report.failures.is_empty());
        // tail(2n+1)/a_n^2 = 1/2 at every n; first index attains the tie.
        assert_eq!(report.worst_index, 1);
        assert_eq!(report.worst_margin.render(), "1/2");
    }

    #[test]
    fn verify_lemma1_detects_corrupted_xi() {
        let a = entry("geometric:1/2");
        // xi_2 decreased by one: tail(4) = 2^-4 is not < a_2^2 = 2^-4.
        let xi = IndexSubsequence::new(vec![3, 4, 7], WitnessProvenance::Lemma1);
        let report = verify_witness(WitnessKind::Lemma1, &a, &bundle_xi(xi), 64).unwrap();
        assert_eq!(report.failures, vec![2]);
        assert_eq!(report.worst_index, 2);
    }

    #[test]
    fn verify_lemma2_detects_corrupted_xi() {
        let a = entry("harmonic");
        let xi = IndexSubsequence::new(vec![1, 3, 19], WitnessProvenance::Lemma2Case2);
        // Block 2 = [3, 18]: H_18 - H_2 = 1.9951... <= 2 fails.
        let report = verify_witness(WitnessKind::Lemma2, &a, &bundle_xi(xi), 500).unwrap();
        assert_eq!(report.failures, vec![2]);
    }

    #[test]
    fn sufficiency_report_checks_unit_lower_bound() {
        let a = entry("geometric:1/2");
        let one = rat(1, 1);
        let b = build_b_from_p(&a, PSource::Param(&ParamSequence::Ones), &one, 1, 32).unwrap();
        let bundle = WitnessBundle {
            xi: None,
            b: Some(b),
            p: None,
            c: Some(one),
        };
        let report = verify_witness(WitnessKind::Sufficiency1, &a, &bundle, 32).unwrap();
        assert_eq!(report.checked, 31);
        assert!(report.failures.is_empty());
        assert_eq!(report.worst_margin.render(), "0");
    }

    #[test]
    fn constructions_are_deterministic() {
        let a = entry("harmonic");
        let (xi1, b1) = build_b_divergent(&a, 500).unwrap();
        let (xi2, b2) = build_b_divergent(&a, 500).unwrap();
        assert_eq!(xi1, xi2);
        assert_eq!(b1, b2);
    }
}

#[cfg(test)]
mod slow_tests {
    use super::*;
    use crate::catalog::find_entry;
    use num_rational::BigRational;

    #[test]
    #[ignore = "minutes of exact arithmetic; exercised by the acceptance suite"]
    fn b_divergent_harmonic_five_complete_blocks() {
        let a: SeriesHandle<BigRational> = find_entry("harmonic")
            .unwrap()
            .series(PrecisionConfig::default());
        let (xi, b) = build_b_divergent(&a, 3_300_000).unwrap();
        assert!(xi.len() >= 6, "got {:?}", &xi.xi()[..xi.len().min(6)]);
        assert_eq!(&xi.xi()[..5], &[1, 3, 20, 393, 21431]);
        let bundle = WitnessBundle {
            xi: Some(xi),
            b: Some(b),
            p: None,
            c: None,
        };
        let report = verify_witness(WitnessKind::Lemma2, &a, &bundle, 3_300_000).unwrap();
        assert!(report.checked >= 5);
        assert!(report.failures.is_empty());
    }
}
