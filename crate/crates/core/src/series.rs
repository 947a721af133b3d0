//! Positive series: term access with positivity enforcement, partial sums,
//! Cauchy windows, and tail bounds at three certainty grades.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::SeriesError;
use crate::expr::{Rationality, TermExpr};
use crate::precision::PrecisionConfig;
use crate::scalar::{NumError, Scalar};

/// Convergence status attached to a series from outside the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Convergent,
    Divergent,
}

/// Where a known status came from. Only catalog provenance supports
/// `Proved` verdicts downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Catalog,
    Asserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownStatus {
    pub status: Status,
    pub provenance: Provenance,
}

/// Closed-form or bounding information about tails, attached by the catalog.
#[derive(Clone, Copy)]
pub enum TailProvider {
    /// aₙ = c·rⁿ for some constant: Σ_{n>k} aₙ = a_{k+1}/(1−r).
    Geometric { ratio: fn() -> BigRational },
    /// Exact tail as a function of k (e.g. telescoping series).
    ExactFormula(fn(u64) -> BigRational),
    /// aₙ = n^(−p), p > 1: integral-test bracket
    /// [(k+1)^(1−p)/(p−1), k^(1−p)/(p−1)].
    IntegralPSeries { p: u64 },
    /// aₙ = 1/(n·lnᵠn), q > 1: bracket [ln(k+1)^(1−q)/(q−1), ln(k)^(1−q)/(q−1)].
    IntegralLog { q: u64 },
}

impl std::fmt::Debug for TailProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TailProvider::Geometric { .. } => f.write_str("Geometric"),
            TailProvider::ExactFormula(_) => f.write_str("ExactFormula"),
            TailProvider::IntegralPSeries { p } => write!(f, "IntegralPSeries(p={p})"),
            TailProvider::IntegralLog { q } => write!(f, "IntegralLog(q={q})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailCertainty {
    Exact,
    IntegralBound,
    /// Heuristic only; never treated as certified.
    TruncationEstimate,
}

/// Bracket on the tail Σ_{n>k} aₙ.
#[derive(Debug, Clone)]
pub struct TailBound<S> {
    pub start_after: u64,
    pub lower: S,
    pub upper: S,
    pub certified: TailCertainty,
}

/// A positive series Σ aₙ with memoized term evaluation.
///
/// Supports concurrent readers; the memo cache is append-only and concurrent
/// evaluation of the same index yields identical values.
pub struct SeriesHandle<S: Scalar> {
    expr: TermExpr,
    rationality: Rationality,
    start: u64,
    cfg: PrecisionConfig,
    memo_horizon: u64,
    memo: Mutex<HashMap<u64, S>>,
    positivity_checked_up_to: AtomicU64,
    tail_provider: Option<TailProvider>,
    known_status: Option<KnownStatus>,
}

pub const DEFAULT_MEMO_HORIZON: u64 = 1_000_000;

impl<S: Scalar> SeriesHandle<S> {
    pub fn new(expr: TermExpr, cfg: PrecisionConfig) -> Self {
        let rationality = expr.classify();
        SeriesHandle {
            expr,
            rationality,
            start: 1,
            cfg,
            memo_horizon: DEFAULT_MEMO_HORIZON,
            memo: Mutex::new(HashMap::new()),
            positivity_checked_up_to: AtomicU64::new(0),
            tail_provider: None,
            known_status: None,
        }
    }

    pub fn parse(source: &str, cfg: PrecisionConfig) -> Result<Self, crate::error::ParseError> {
        Ok(Self::new(TermExpr::parse(source)?, cfg))
    }

    pub fn with_start(mut self, start: u64) -> Self {
        assert!(start >= 1);
        self.start = start;
        self
    }

    pub fn with_tail_provider(mut self, provider: TailProvider) -> Self {
        self.tail_provider = Some(provider);
        self
    }

    pub fn with_known_status(mut self, status: KnownStatus) -> Self {
        self.known_status = Some(status);
        self
    }

    pub fn with_memo_horizon(mut self, horizon: u64) -> Self {
        self.memo_horizon = horizon;
        self
    }

    pub fn expr(&self) -> &TermExpr {
        &self.expr
    }

    pub fn rationality(&self) -> Rationality {
        self.rationality
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    pub fn known_status(&self) -> Option<KnownStatus> {
        self.known_status
    }

    pub fn tail_provider(&self) -> Option<&TailProvider> {
        self.tail_provider.as_ref()
    }

    pub fn positivity_checked_up_to(&self) -> u64 {
        self.positivity_checked_up_to.load(AtomicOrdering::Relaxed)
    }

    /// Evaluate aₙ, asserting positivity. Memoized up to the horizon.
    pub fn term(&self, n: u64) -> Result<S, SeriesError> {
        assert!(n >= self.start, "index below series start");
        if n <= self.memo_horizon {
            if let Some(v) = self.memo.lock().unwrap().get(&n) {
                return Ok(v.clone());
            }
        }
        let v: S = self.expr.evaluate(n, &self.cfg)?;
        if !v.is_positive() {
            return Err(SeriesError::NonPositiveTerm { n });
        }
        self.positivity_checked_up_to
            .fetch_max(n, AtomicOrdering::Relaxed);
        if n <= self.memo_horizon {
            self.memo.lock().unwrap().entry(n).or_insert_with(|| v.clone());
        }
        Ok(v)
    }

    /// Σ_{n=start}^{m} aₙ.
    pub fn partial_sum(&self, m: u64) -> Result<S, SeriesError> {
        assert!(m >= self.start);
        S::sum_range(&self.cfg, self.start, m, &mut |n| self.term(n))
    }

    /// Cauchy window aₙ + … + aₙ₊ₚ.
    pub fn cauchy_window(&self, n: u64, p: u64) -> Result<S, SeriesError> {
        assert!(n >= self.start);
        S::sum_range(&self.cfg, n, n + p, &mut |i| self.term(i))
    }

    /// Bracket the tail Σ_{n>k} aₙ.
    pub fn tail_bound(&self, k: u64) -> Result<TailBound<S>, SeriesError> {
        assert!(k >= 1);
        if matches!(
            self.known_status,
            Some(KnownStatus {
                status: Status::Divergent,
                ..
            })
        ) {
            return Err(SeriesError::TailNotApplicable);
        }
        match self.tail_provider {
            Some(TailProvider::Geometric { ratio }) => {
                let r = ratio();
                let unit = BigRational::from_integer(BigInt::one());
                assert!(Signed::is_positive(&r) && r < unit);
                let factor = S::from_ratio(&(&unit / (unit.clone() - r)), &self.cfg);
                let k1 = k.max(self.start.saturating_sub(1));
                let tail = self.term(k1 + 1)?.mul(&factor);
                Ok(TailBound {
                    start_after: k,
                    lower: tail.clone(),
                    upper: tail,
                    certified: TailCertainty::Exact,
                })
            }
            Some(TailProvider::ExactFormula(tail)) => {
                let t = S::from_ratio(&tail(k), &self.cfg);
                Ok(TailBound {
                    start_after: k,
                    lower: t.clone(),
                    upper: t,
                    certified: TailCertainty::Exact,
                })
            }
            Some(TailProvider::IntegralPSeries { p }) => {
                assert!(p >= 2);
                if !self.monotone_nonincreasing_from(k)? {
                    return self.truncation_estimate(k);
                }
                // ∫_x^∞ t^(−p) dt = x^(1−p)/(p−1)
                let e = BigInt::from(p - 1);
                let inv = |x: u64| -> Result<S, SeriesError> {
                    let xp = S::from_u64(x, &self.cfg)
                        .pow_bigint(&e)
                        .map_err(|err| lift_num(err, x))?;
                    let denom = xp.mul(&S::from_u64(p - 1, &self.cfg));
                    S::one(&self.cfg)
                        .div(&denom)
                        .map_err(|err| lift_num(err, x))
                };
                Ok(TailBound {
                    start_after: k,
                    lower: inv(k + 1)?,
                    upper: inv(k)?,
                    certified: TailCertainty::IntegralBound,
                })
            }
            Some(TailProvider::IntegralLog { q }) => {
                assert!(q >= 2);
                let k = k.max(2);
                if !self.monotone_nonincreasing_from(k)? {
                    return self.truncation_estimate(k);
                }
                // ∫_x^∞ dt/(t lnᵠt) = ln(x)^(1−q)/(q−1)
                let e = BigInt::from(q - 1);
                let inv = |x: u64| -> Result<S, SeriesError> {
                    let l = S::from_u64(x, &self.cfg)
                        .ln()
                        .map_err(|err| lift_num(err, x))?;
                    let lp = l.pow_bigint(&e).map_err(|err| lift_num(err, x))?;
                    let denom = lp.mul(&S::from_u64(q - 1, &self.cfg));
                    S::one(&self.cfg)
                        .div(&denom)
                        .map_err(|err| lift_num(err, x))
                };
                Ok(TailBound {
                    start_after: k,
                    lower: inv(k + 1)?,
                    upper: inv(k)?,
                    certified: TailCertainty::IntegralBound,
                })
            }
            None => self.truncation_estimate(k),
        }
    }

    /// Sampled check that aₙ is nonincreasing on [k, 10k + 10³]: 64
    /// geometrically spaced indices.
    fn monotone_nonincreasing_from(&self, k: u64) -> Result<bool, SeriesError> {
        let k = k.max(self.start);
        let hi = 10 * k + 1000;
        for i in sample_indices(k, hi, 64) {
            let a = self.term(i)?;
            let b = self.term(i + 1)?;
            if b > a {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Heuristic tail estimate: truncated sum plus a geometric-domination
    /// remainder from observed term ratios. Never certified.
    fn truncation_estimate(&self, k: u64) -> Result<TailBound<S>, SeriesError> {
        let k = k.max(self.start.saturating_sub(1));
        let h = k + 4096;
        let sum = S::sum_range(&self.cfg, k + 1, h, &mut |n| self.term(n))?;
        // Largest recent ratio a_{n+1}/a_n near the truncation point.
        let mut rho: Option<S> = None;
        for n in (h - 8)..h {
            let r = self
                .term(n + 1)?
                .div(&self.term(n)?)
                .map_err(|err| lift_num(err, n))?;
            rho = Some(match rho {
                Some(prev) if prev >= r => prev,
                _ => r,
            });
        }
        let rho = rho.expect("nonempty ratio window");
        let one = S::one(&self.cfg);
        let remainder = if rho < one {
            let gap = one.sub(&rho);
            self.term(h)?
                .mul(&rho)
                .div(&gap)
                .map_err(|err| lift_num(err, h))?
        } else {
            // No domination observable; the estimate degenerates to the sum.
            S::zero(&self.cfg)
        };
        Ok(TailBound {
            start_after: k,
            lower: sum.clone(),
            upper: sum.add(&remainder),
            certified: TailCertainty::TruncationEstimate,
        })
    }
}

fn lift_num(err: NumError, n: u64) -> SeriesError {
    let e = match err {
        NumError::DivisionByZero => crate::error::EvalError::DivisionByZero { n },
        NumError::Overflow => crate::error::EvalError::Overflow { n },
        NumError::Domain(reason) => crate::error::EvalError::Domain { n, reason },
        NumError::ExactUnsupported(what) => crate::error::EvalError::ExactUnsupported(what),
    };
    SeriesError::Eval(e)
}

/// `count` deterministic, geometrically spaced, strictly increasing indices
/// covering [lo, hi].
pub fn sample_indices(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 1 && hi >= lo && count >= 1);
    if count == 1 || hi == lo {
        return vec![lo];
    }
    let mut out = Vec::with_capacity(count);
    let llo = (lo as f64).ln();
    let lhi = (hi as f64).ln();
    for i in 0..count {
        let t = i as f64 / (count - 1) as f64;
        let x = (llo + t * (lhi - llo)).exp().round() as u64;
        let x = x.clamp(lo, hi);
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;


    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn exact(src: &str) -> SeriesHandle<BigRational> {
        SeriesHandle::parse(src, cfg()).unwrap()
    }

    #[test]
    fn partial_sums() {
        assert_eq!(exact("1/2^n").partial_sum(10).unwrap(), rat(1023, 1024));
        assert_eq!(exact("1/n").partial_sum(4).unwrap(), rat(25, 12));
        assert_eq!(exact("1/n^2").partial_sum(1).unwrap(), rat(1, 1));
    }

    #[test]
    fn cauchy_windows() {
        assert_eq!(exact("1/2^n").cauchy_window(3, 2).unwrap(), rat(7, 32));
        assert_eq!(exact("1/n").cauchy_window(2, 1).unwrap(), rat(5, 6));
        let s = exact("1/n^2");
        assert_eq!(s.cauchy_window(5, 0).unwrap(), s.term(5).unwrap());
    }

    #[test]
    fn window_is_difference_of_partial_sums() {
        let s = exact("n/(n^2+1)");
        for (n, p) in [(2u64, 3u64), (5, 0), (3, 7)] {
            let lhs = s.cauchy_window(n, p).unwrap();
            let rhs = s.partial_sum(n + p).unwrap() - s.partial_sum(n - 1).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(
            s.partial_sum(11).unwrap() - s.partial_sum(10).unwrap(),
            s.term(11).unwrap()
        );
    }

    #[test]
    fn positivity_is_enforced() {
        let s = exact("n-3");
        assert_eq!(s.term(4).unwrap(), rat(1, 1));
        assert_eq!(s.term(3).unwrap_err(), SeriesError::NonPositiveTerm { n: 3 });
        assert_eq!(
            s.partial_sum(5).unwrap_err(),
            SeriesError::NonPositiveTerm { n: 1 }
        );
    }

    #[test]
    fn geometric_tail_is_exact() {
        let s = exact("1/2^n").with_tail_provider(TailProvider::Geometric {
            ratio: || rat(1, 2),
        });
        let t = s.tail_bound(4).unwrap();
        assert_eq!(t.certified, TailCertainty::Exact);
        assert_eq!(t.lower, rat(1, 16));
        assert_eq!(t.upper, rat(1, 16));
    }

    #[test]
    fn integral_bound_brackets_p2_tail() {
        let s = exact("1/n^2").with_tail_provider(TailProvider::IntegralPSeries { p: 2 });
        let t = s.tail_bound(10).unwrap();
        assert_eq!(t.certified, TailCertainty::IntegralBound);
        assert_eq!(t.lower, rat(1, 11));
        assert_eq!(t.upper, rat(1, 10));
        // Brute-force oracle: Σ_{n=11}^{10^6} 1/n² must lie inside (floats).
        let f: SeriesHandle<Fp> = SeriesHandle::parse("1/n^2", cfg())
            .unwrap()
            .with_memo_horizon(0);
        let truncated = f.cauchy_window(11, 1_000_000).unwrap();
        let lo = Fp::from_ratio(&rat(1, 11), &cfg());
        let hi = Fp::from_ratio(&rat(1, 10), &cfg());
        assert!(lo < truncated && truncated < hi);
        assert!((truncated.to_f64_lossy() - 0.0952).abs() < 1e-3);
    }

    #[test]
    fn divergent_tail_not_applicable() {
        let s = exact("1/n").with_known_status(KnownStatus {
            status: Status::Divergent,
            provenance: Provenance::Catalog,
        });
        assert_eq!(s.tail_bound(5).unwrap_err(), SeriesError::TailNotApplicable);
    }

    #[test]
    fn truncation_estimate_is_uncertified_and_reasonable() {
        let s = exact("1/2^n");
        let t = s.tail_bound(4).unwrap();
        assert_eq!(t.certified, TailCertainty::TruncationEstimate);
        assert!(t.lower <= t.upper);
        // True tail is 1/16; the truncated lower bound is just below it.
        assert!(t.lower < rat(1, 16) && rat(1, 17) < t.lower);
        assert!(t.upper >= rat(1, 16));
    }

    #[test]
    fn exact_tail_plus_partial_sum_is_total() {
        let s = exact("1/2^n").with_tail_provider(TailProvider::Geometric {
            ratio: || rat(1, 2),
        });
        for k in [1u64, 3, 9] {
            let total = s.partial_sum(k).unwrap() + s.tail_bound(k).unwrap().upper;
            assert_eq!(total, rat(1, 1));
        }
    }

    #[test]
    fn sample_indices_are_sorted_unique_and_cover() {
        let v = sample_indices(32, 4096, 16);
        assert_eq!(*v.first().unwrap(), 32);
        assert_eq!(*v.last().unwrap(), 4096);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_indices(7, 7, 5), vec![7]);
    }
}
