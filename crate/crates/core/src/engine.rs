//! Convergence tests: basic comparison tests, the Kummer decision procedure,
//! and its special cases (ratio, Raabe, Bertrand, Gauss).

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::catalog;
use crate::error::SeriesError;
use crate::expr::TermExpr;
use crate::precision::PrecisionConfig;
use crate::scalar::{Scalar, Value};
use crate::series::{sample_indices, KnownStatus, Provenance, SeriesHandle, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n0: u64,
    pub n1: u64,
}

impl Window {
    pub fn new(n0: u64, n1: u64) -> Self {
        assert!(n0 >= 1, "window start must be >= 1");
        assert!(n1 >= n0 + 16, "window must span at least 16 indices");
        Window { n0, n1 }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { n0: 32, n1: 4096 }
    }
}

/// Borderline band half-width δ = 1/100.
pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(100))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    /// Exact arithmetic plus a structural justification.
    Proved,
    /// Window-based numerical evidence.
    Indicated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub test: String,
    pub window: Window,
    pub samples: Vec<(u64, Value)>,
    pub margin: Option<Value>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certainty: Certainty,
    pub evidence: Evidence,
}

/// The parameter series pₙ of Kummer's test.
#[derive(Debug, Clone)]
pub enum ParamSequence {
    Ones,
    Linear,
    NLogN,
    Expr(TermExpr),
}

impl ParamSequence {
    pub fn label(&self) -> String {
        match self {
            ParamSequence::Ones => "1".to_string(),
            ParamSequence::Linear => "n".to_string(),
            ParamSequence::NLogN => "n*ln(n)".to_string(),
            ParamSequence::Expr(e) => e.to_string(),
        }
    }

    pub fn eval<S: Scalar>(&self, n: u64, cfg: &PrecisionConfig) -> Result<S, SeriesError> {
        let v = match self {
            ParamSequence::Ones => S::one(cfg),
            ParamSequence::Linear => S::from_u64(n, cfg),
            ParamSequence::NLogN => {
                let x = S::from_u64(n, cfg);
                let l = x.ln().map_err(|e| lift(e, n))?;
                x.mul(&l)
            }
            ParamSequence::Expr(e) => e.evaluate(n, cfg)?,
        };
        if !v.is_positive() {
            return Err(SeriesError::NonPositiveParam { n });
        }
        Ok(v)
    }

    /// Expression for 1/pₙ (used for catalog lookup of Σ1/pₙ divergence).
    pub fn reciprocal_expr(&self) -> TermExpr {
        match self {
            ParamSequence::Ones => TermExpr::parse("1").unwrap(),
            ParamSequence::Linear => TermExpr::parse("1/n").unwrap(),
            ParamSequence::NLogN => TermExpr::parse("1/(n*ln(n))").unwrap(),
            ParamSequence::Expr(e) => e.reciprocal(),
        }
    }
}

fn lift(err: crate::scalar::NumError, n: u64) -> SeriesError {
    use crate::error::EvalError;
    use crate::scalar::NumError;
    SeriesError::Eval(match err {
        NumError::DivisionByZero => EvalError::DivisionByZero { n },
        NumError::Overflow => EvalError::Overflow { n },
        NumError::Domain(reason) => EvalError::Domain { n, reason },
        NumError::ExactUnsupported(what) => EvalError::ExactUnsupported(what),
    })
}

/// κₙ = pₙ·(aₙ/aₙ₊₁) − pₙ₊₁.
pub fn kummer_statistic<S: Scalar>(
    a: &SeriesHandle<S>,
    p: &ParamSequence,
    n: u64,
) -> Result<S, SeriesError> {
    let cfg = a.config();
    let an = a.term(n)?;
    let an1 = a.term(n + 1)?;
    let pn: S = p.eval(n, cfg)?;
    let pn1: S = p.eval(n + 1, cfg)?;
    let ratio = an.div_unreduced(&an1).map_err(|e| lift(e, n))?;
    Ok(pn.mul_unreduced(&ratio).sub_unreduced(&pn1))
}

/// Raabe statistic Rₙ = n·(aₙ/aₙ₊₁ − 1).
pub fn raabe_statistic<S: Scalar>(a: &SeriesHandle<S>, n: u64) -> Result<S, SeriesError> {
    let cfg = a.config();
    let an = a.term(n)?;
    let an1 = a.term(n + 1)?;
    let ratio = an.div_unreduced(&an1).map_err(|e| lift(e, n))?;
    Ok(S::from_u64(n, cfg).mul_unreduced(&ratio.sub_unreduced(&S::one(cfg))))
}

/// Bertrand statistic Lₙ = ln n · (Rₙ − 1).
pub fn bertrand_statistic<S: Scalar>(a: &SeriesHandle<S>, n: u64) -> Result<S, SeriesError> {
    assert!(n >= 2);
    let cfg = a.config();
    let r = raabe_statistic(a, n)?;
    let l = S::from_u64(n, cfg).ln().map_err(|e| lift(e, n))?;
    Ok(l.mul(&r.sub(&S::one(cfg))))
}

/// Full scan of a statistic over an index range, with shape summary.
struct Scan<S> {
    values: Vec<(u64, S)>,
    constant: bool,
    nondecreasing: bool,
    nonincreasing: bool,
}

impl<S: Scalar> Scan<S> {
    fn collect(
        lo: u64,
        hi: u64,
        mut f: impl FnMut(u64) -> Result<S, SeriesError>,
    ) -> Result<Self, SeriesError> {
        assert!(hi >= lo);
        let mut values = Vec::with_capacity((hi - lo + 1) as usize);
        for n in lo..=hi {
            values.push((n, f(n)?));
        }
        let mut constant = true;
        let mut nondecreasing = true;
        let mut nonincreasing = true;
        for w in values.windows(2) {
            match w[0].1.cmp_values(&w[1].1) {
                std::cmp::Ordering::Less => {
                    constant = false;
                    nonincreasing = false;
                }
                std::cmp::Ordering::Greater => {
                    constant = false;
                    nondecreasing = false;
                }
                std::cmp::Ordering::Equal => {}
            }
        }
        Ok(Scan {
            values,
            constant,
            nondecreasing,
            nonincreasing,
        })
    }

    fn min(&self) -> &S {
        self.values
            .iter()
            .map(|(_, v)| v)
            .min_by(|a, b| a.cmp_values(b))
            .unwrap()
    }

    fn max(&self) -> &S {
        self.values
            .iter()
            .map(|(_, v)| v)
            .max_by(|a, b| a.cmp_values(b))
            .unwrap()
    }

    fn first(&self) -> &S {
        &self.values.first().unwrap().1
    }

    fn last(&self) -> &S {
        &self.values.last().unwrap().1
    }

    /// Up to 16 geometrically spaced samples for the evidence record.
    fn evidence_samples(&self) -> Vec<(u64, Value)> {
        let lo = self.values.first().unwrap().0;
        let hi = self.values.last().unwrap().0;
        sample_indices(lo, hi, 16)
            .into_iter()
            .map(|n| {
                let v = &self.values[(n - lo) as usize].1;
                (n, v.compress().to_value())
            })
            .collect()
    }
}

fn ge_ratio<S: Scalar>(x: &S, r: &BigRational, cfg: &PrecisionConfig) -> bool {
    let t = S::from_ratio(r, cfg);
    x.cmp_tol(&t, cfg.comparison_tolerance()) != std::cmp::Ordering::Less
}

fn le_ratio<S: Scalar>(x: &S, r: &BigRational, cfg: &PrecisionConfig) -> bool {
    let t = S::from_ratio(r, cfg);
    x.cmp_tol(&t, cfg.comparison_tolerance()) != std::cmp::Ordering::Greater
}

fn one_plus_delta() -> BigRational {
    BigRational::from_integer(1.into()) + default_delta()
}

fn one_minus_delta() -> BigRational {
    BigRational::from_integer(1.into()) - default_delta()
}

/// Three-point limit probe at m, 2m, 4m with 4m = the window end. The drift
/// is "resolved" when successive differences shrink by at least 2/5, i.e.
/// 5·|s₃−s₂| ≤ 3·|s₂−s₁|; then s₃ stands in for the limit.
struct LimitProbe<S> {
    samples: [(u64, S); 3],
    resolved: bool,
    /// s₁ < s₂ < s₃ with the last gap at least 1.5× the previous sample:
    /// evidence of unbounded growth rather than a finite limit.
    growing_unbounded: bool,
}

fn limit_probe<S: Scalar>(
    n1: u64,
    cfg: &PrecisionConfig,
    mut f: impl FnMut(u64) -> Result<S, SeriesError>,
) -> Result<LimitProbe<S>, SeriesError> {
    let m = (n1 / 4).max(2);
    let (i1, i2, i3) = (m, 2 * m, 4 * m);
    let s1 = f(i1)?;
    let s2 = f(i2)?;
    let s3 = f(i3)?;
    let d21 = s2.sub(&s1).abs();
    let d32 = s3.sub(&s2).abs();
    use std::cmp::Ordering;
    let resolved = d32.mul(&S::from_u64(5, cfg)).cmp_values(&d21.mul(&S::from_u64(3, cfg)))
        != Ordering::Greater;
    let growing_unbounded = s1.cmp_values(&s2) == Ordering::Less
        && s2.cmp_values(&s3) == Ordering::Less
        && s3.cmp_values(&s2.mul(&S::from_ratio(&BigRational::new(3.into(), 2.into()), cfg)))
            != Ordering::Less;
    Ok(LimitProbe {
        samples: [(i1, s1), (i2, s2), (i3, s3)],
        resolved,
        growing_unbounded,
    })
}

fn probe_samples<S: Scalar>(p: &LimitProbe<S>) -> Vec<(u64, Value)> {
    p.samples
        .iter()
        .map(|(n, v)| (*n, v.compress().to_value()))
        .collect()
}

/// How Σ1/pₙ was certified divergent for Kummer part (2).
enum RecipDivergence {
    Catalog(&'static str),
    Asserted,
    Threshold,
    Unknown,
}

fn reciprocal_divergence<S: Scalar>(
    p: &ParamSequence,
    caller: Option<KnownStatus>,
    cfg: &PrecisionConfig,
) -> RecipDivergence {
    if let Some(ks) = caller {
        if ks.status == Status::Divergent {
            return match ks.provenance {
                Provenance::Catalog => RecipDivergence::Catalog("caller-selected"),
                Provenance::Asserted => RecipDivergence::Asserted,
            };
        }
        return RecipDivergence::Unknown;
    }
    let recip = p.reciprocal_expr();
    if let Some(entry) = catalog::find_by_expr(&recip) {
        if entry.status == Status::Divergent {
            return RecipDivergence::Catalog(entry.name);
        }
        return RecipDivergence::Unknown;
    }
    // Last resort: partial sums of 1/pₙ crossing 10³ (Indicated only).
    let threshold = S::from_u64(1000, cfg);
    let mut acc = S::zero(cfg);
    for n in 1..=100_000u64 {
        let pn: Result<S, _> = p.eval(n, cfg);
        let Ok(pn) = pn else { return RecipDivergence::Unknown };
        let Ok(inv) = S::one(cfg).div(&pn) else {
            return RecipDivergence::Unknown;
        };
        acc = acc.add(&inv);
        if acc > threshold {
            return RecipDivergence::Threshold;
        }
    }
    RecipDivergence::Unknown
}

fn verdict(
    test: String,
    window: Window,
    samples: Vec<(u64, Value)>,
    margin: Option<Value>,
    notes: Vec<String>,
    outcome: Outcome,
    certainty: Certainty,
) -> Verdict {
    Verdict {
        outcome,
        certainty,
        evidence: Evidence {
            test,
            window,
            samples,
            margin,
            notes,
        },
    }
}

/// Kummer's test over a window.
///
/// Part (1): κₙ ≥ c > 0 across the window indicates convergence; exact
/// constant/nondecreasing structure upgrades to Proved. A decaying positive
/// margin is flagged; with pₙ = 1 the scaled statistic n·κₙ (Raabe's form) is
/// probed before conceding, which is what keeps the harmonic series out of
/// the Converges bucket.
///
/// Part (2): κₙ ≤ 0 across the window plus divergence of Σ1/pₙ indicates
/// divergence; exact structure plus catalog provenance upgrades to Proved.
pub fn kummer_test<S: Scalar>(
    a: &SeriesHandle<S>,
    p: &ParamSequence,
    window: Window,
    reciprocal_p_status: Option<KnownStatus>,
) -> Result<Verdict, SeriesError> {
    let cfg = a.config().clone();
    let test = format!("kummer[p={}]", p.label());
    let lo = window.n0.max(a.start());
    let scan = Scan::collect(lo, window.n1, |n| kummer_statistic(a, p, n))?;
    let zero = S::zero(&cfg);
    let min = scan.min().clone();
    let max = scan.max().clone();
    let mut notes = Vec::new();

    if min > zero {
        // Part (1).
        if S::EXACT && (scan.constant || scan.nondecreasing) {
            notes.push(if scan.constant {
                "statistic exactly constant on the window".to_string()
            } else {
                "statistic exactly monotone nondecreasing on the window".to_string()
            });
            return Ok(verdict(
                test,
                window,
                scan.evidence_samples(),
                Some(min.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Proved,
            ));
        }
        let eight_last = scan.last().mul(&S::from_u64(8, &cfg));
        let vanishing = scan.first().cmp_values(&eight_last) != std::cmp::Ordering::Less;
        if !vanishing {
            return Ok(verdict(
                test,
                window,
                scan.evidence_samples(),
                Some(min.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Indicated,
            ));
        }
        notes.push("margin-vanishing: statistic decays across the window".to_string());
        if matches!(p, ParamSequence::Ones) {
            // Escalate to the scaled statistic n·κₙ (= Raabe's Rₙ here).
            let probe = limit_probe(window.n1, &cfg, |n| {
                Ok(S::from_u64(n, &cfg).mul(&kummer_statistic(a, p, n)?))
            })?;
            notes.push("scaled statistic n*kappa used for limit probe".to_string());
            let mut samples = scan.evidence_samples();
            samples.extend(probe_samples(&probe));
            if probe.resolved && ge_ratio(&probe.samples[2].1, &one_plus_delta(), &cfg) {
                return Ok(verdict(
                    test,
                    window,
                    samples,
                    Some(min.compress().to_value()),
                    notes,
                    Outcome::Converges,
                    Certainty::Indicated,
                ));
            }
            notes.push(if probe.resolved {
                "scaled statistic limit not above 1 + delta".to_string()
            } else {
                "drift unresolved across limit probe".to_string()
            });
            return Ok(verdict(
                test,
                window,
                samples,
                None,
                notes,
                Outcome::Inconclusive,
                Certainty::Indicated,
            ));
        }
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            Some(min.compress().to_value()),
            notes,
            Outcome::Converges,
            Certainty::Indicated,
        ));
    }

    if le_ratio(&max, &BigRational::from_integer(0.into()), &cfg) {
        // Part (2): κₙ ≤ 0 throughout; need Σ1/pₙ divergent.
        let recip = reciprocal_divergence::<S>(p, reciprocal_p_status, &cfg);
        let (known, provenance_note, catalog_backed) = match recip {
            RecipDivergence::Catalog(name) => (
                true,
                format!("sum of 1/p_n divergent: catalog match '{name}'"),
                true,
            ),
            RecipDivergence::Asserted => (
                true,
                "sum of 1/p_n divergent: caller assertion".to_string(),
                false,
            ),
            RecipDivergence::Threshold => (
                true,
                "sum of 1/p_n crossed 1000 (indicated divergence)".to_string(),
                false,
            ),
            RecipDivergence::Unknown => (
                false,
                "divergence of sum of 1/p_n not established".to_string(),
                false,
            ),
        };
        notes.push(provenance_note);
        if known {
            let structural = scan.constant || scan.nonincreasing || scan.nondecreasing;
            let certainty = if S::EXACT && structural && catalog_backed {
                Certainty::Proved
            } else {
                Certainty::Indicated
            };
            if certainty == Certainty::Proved {
                notes.push("statistic exactly nonpositive with monotone structure".to_string());
            }
            return Ok(verdict(
                test,
                window,
                scan.evidence_samples(),
                None,
                notes,
                Outcome::Diverges,
                certainty,
            ));
        }
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            None,
            notes,
            Outcome::Inconclusive,
            Certainty::Indicated,
        ));
    }

    notes.push("statistic changes sign on the window".to_string());
    Ok(verdict(
        test,
        window,
        scan.evidence_samples(),
        None,
        notes,
        Outcome::Inconclusive,
        Certainty::Indicated,
    ))
}

/// Ratio test = Kummer's test with pₙ = 1.
pub fn ratio_test<S: Scalar>(a: &SeriesHandle<S>, window: Window) -> Result<Verdict, SeriesError> {
    kummer_test(a, &ParamSequence::Ones, window, None)
}

/// Raabe's test: Rₙ = n(aₙ/aₙ₊₁ − 1); eventually ≥ 1+δ converges,
/// eventually ≤ 1 diverges (Σ1/n divergence built in).
pub fn raabe_test<S: Scalar>(a: &SeriesHandle<S>, window: Window) -> Result<Verdict, SeriesError> {
    let cfg = a.config().clone();
    let test = "raabe".to_string();
    let lo = window.n0.max(a.start());
    let scan = Scan::collect(lo, window.n1, |n| raabe_statistic(a, n))?;
    let one = BigRational::from_integer(1.into());
    let mut notes = Vec::new();

    if S::EXACT && scan.constant {
        let v = scan.first();
        if ge_ratio(v, &one_plus_delta(), &cfg) {
            notes.push("statistic exactly constant above 1 + delta".to_string());
            return Ok(verdict(
                test,
                window,
                scan.evidence_samples(),
                Some(v.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Proved,
            ));
        }
        if le_ratio(v, &one, &cfg) {
            notes.push("statistic exactly constant at or below 1".to_string());
            notes.push("sum of 1/p_n divergent: catalog match 'harmonic'".to_string());
            return Ok(verdict(
                test,
                window,
                scan.evidence_samples(),
                Some(v.compress().to_value()),
                notes,
                Outcome::Diverges,
                Certainty::Proved,
            ));
        }
        notes.push("statistic constant inside the borderline band".to_string());
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            None,
            notes,
            Outcome::Inconclusive,
            Certainty::Indicated,
        ));
    }
    if S::EXACT && scan.nondecreasing && ge_ratio(scan.min(), &one_plus_delta(), &cfg) {
        notes.push("statistic exactly nondecreasing, min above 1 + delta".to_string());
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            Some(scan.min().compress().to_value()),
            notes,
            Outcome::Converges,
            Certainty::Proved,
        ));
    }
    if S::EXACT && scan.nonincreasing && le_ratio(scan.max(), &one, &cfg) {
        notes.push("statistic exactly nonincreasing, max at or below 1".to_string());
        notes.push("sum of 1/p_n divergent: catalog match 'harmonic'".to_string());
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            Some(scan.max().compress().to_value()),
            notes,
            Outcome::Diverges,
            Certainty::Proved,
        ));
    }

    let probe = limit_probe(window.n1, &cfg, |n| raabe_statistic(a, n.max(lo)))?;
    let mut samples = scan.evidence_samples();
    samples.extend(probe_samples(&probe));
    if probe.resolved {
        let est = &probe.samples[2].1;
        if ge_ratio(est, &one_plus_delta(), &cfg) {
            notes.push("limit probe resolved above 1 + delta".to_string());
            return Ok(verdict(
                test,
                window,
                samples,
                Some(est.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Indicated,
            ));
        }
        if le_ratio(est, &one_minus_delta(), &cfg) {
            notes.push("limit probe resolved below 1 - delta".to_string());
            return Ok(verdict(
                test,
                window,
                samples,
                Some(est.compress().to_value()),
                notes,
                Outcome::Diverges,
                Certainty::Indicated,
            ));
        }
        notes.push("limit probe inside the borderline band".to_string());
    } else if probe.growing_unbounded {
        notes.push("statistic grows without bound across the probe".to_string());
        return Ok(verdict(
            test,
            window,
            samples,
            Some(probe.samples[2].1.compress().to_value()),
            notes,
            Outcome::Converges,
            Certainty::Indicated,
        ));
    } else {
        notes.push("drift unresolved across limit probe".to_string());
    }
    Ok(verdict(
        test,
        window,
        samples,
        None,
        notes,
        Outcome::Inconclusive,
        Certainty::Indicated,
    ))
}

/// Bertrand's test: Lₙ = ln n · (Rₙ − 1) with pₙ = n ln n, decided on the
/// tail half of the window. Floating mode only (the statistic needs ln).
pub fn bertrand_test<S: Scalar>(
    a: &SeriesHandle<S>,
    window: Window,
) -> Result<Verdict, SeriesError> {
    let cfg = a.config().clone();
    let test = "bertrand".to_string();
    let lo = window.n0.max(a.start()).max(2);
    let tail_lo = (window.n1 / 2).max(lo);
    let scan = Scan::collect(tail_lo, window.n1, |n| bertrand_statistic(a, n))?;
    let mut notes = vec![format!("decided on tail window [{tail_lo}, {}]", window.n1)];
    if ge_ratio(scan.min(), &one_plus_delta(), &cfg) {
        notes.push("statistic at least 1 + delta on the tail window".to_string());
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            Some(scan.min().compress().to_value()),
            notes,
            Outcome::Converges,
            Certainty::Indicated,
        ));
    }
    if le_ratio(scan.max(), &one_plus_delta(), &cfg) {
        notes.push("statistic at most 1 + delta on the tail window (borderline band treated as divergence side)".to_string());
        return Ok(verdict(
            test,
            window,
            scan.evidence_samples(),
            Some(scan.max().compress().to_value()),
            notes,
            Outcome::Diverges,
            Certainty::Indicated,
        ));
    }
    notes.push("statistic straddles 1 + delta on the tail window".to_string());
    Ok(verdict(
        test,
        window,
        scan.evidence_samples(),
        None,
        notes,
        Outcome::Inconclusive,
        Certainty::Indicated,
    ))
}

/// Gauss's test: probe h = lim n(aₙ/aₙ₊₁ − 1) at m, 2m, 4m. Exactly equal
/// samples give h exactly (Proved); growth across the probe indicates an
/// unbounded h (convergence); otherwise the resolved estimate is compared
/// against the 1 ± δ bands.
pub fn gauss_test<S: Scalar>(a: &SeriesHandle<S>, window: Window) -> Result<Verdict, SeriesError> {
    let cfg = a.config().clone();
    let test = "gauss".to_string();
    let lo = window.n0.max(a.start());
    let probe = limit_probe(window.n1, &cfg, |n| raabe_statistic(a, n.max(lo)))?;
    let samples = probe_samples(&probe);
    let mut notes = Vec::new();
    let one = BigRational::from_integer(1.into());

    let [s1, s2, s3] = &probe.samples;
    if S::EXACT
        && s1.1.cmp_values(&s2.1) == std::cmp::Ordering::Equal
        && s2.1.cmp_values(&s3.1) == std::cmp::Ordering::Equal
    {
        let h = &s3.1;
        notes.push("ratio statistic exactly constant: h computed exactly".to_string());
        if ge_ratio(h, &one, &cfg) && !le_ratio(h, &one, &cfg) {
            return Ok(verdict(
                test,
                window,
                samples,
                Some(h.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Proved,
            ));
        }
        notes.push("h <= 1: divergence per Gauss".to_string());
        return Ok(verdict(
            test,
            window,
            samples,
            Some(h.compress().to_value()),
            notes,
            Outcome::Diverges,
            Certainty::Proved,
        ));
    }
    if probe.growing_unbounded {
        notes.push("statistic grows without bound across the probe".to_string());
        return Ok(verdict(
            test,
            window,
            samples,
            Some(s3.1.compress().to_value()),
            notes,
            Outcome::Converges,
            Certainty::Indicated,
        ));
    }
    if probe.resolved {
        let est = &s3.1;
        if ge_ratio(est, &one_plus_delta(), &cfg) {
            notes.push("limit probe resolved above 1 + delta".to_string());
            return Ok(verdict(
                test,
                window,
                samples,
                Some(est.compress().to_value()),
                notes,
                Outcome::Converges,
                Certainty::Indicated,
            ));
        }
        if le_ratio(est, &one_minus_delta(), &cfg) {
            notes.push("limit probe resolved below 1 - delta".to_string());
            return Ok(verdict(
                test,
                window,
                samples,
                Some(est.compress().to_value()),
                notes,
                Outcome::Diverges,
                Certainty::Indicated,
            ));
        }
        notes.push("limit probe inside the borderline band".to_string());
    } else {
        notes.push("drift unresolved across limit probe".to_string());
    }
    Ok(verdict(
        test,
        window,
        samples,
        None,
        notes,
        Outcome::Inconclusive,
        Certainty::Indicated,
    ))
}

/// Shared engine for the two basic comparison tests.
fn compare_with(
    test: String,
    horizon: u64,
    b_status: KnownStatus,
    subject_le_reference: &mut dyn FnMut(u64) -> Result<bool, SeriesError>,
    lo: u64,
    exact: bool,
    samples: Vec<(u64, Value)>,
) -> Verdict {
    // Direction per the known status of the reference series b:
    //   b convergent: need aₙ ≤ bₙ eventually  ⇒ a converges
    //   b divergent:  need aₙ ≥ bₙ eventually  ⇒ a diverges
    let want_le = b_status.status == Status::Convergent;
    let mut violations: Vec<u64> = Vec::new();
    let mut err: Option<SeriesError> = None;
    for n in lo..=horizon {
        match subject_le_reference(n) {
            Ok(le) => {
                let ok = if want_le { le } else { !le };
                if !ok {
                    violations.push(n);
                }
            }
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    let window = Window {
        n0: lo,
        n1: horizon,
    };
    let mut notes = Vec::new();
    if let Some(e) = err {
        notes.push(format!("evaluation aborted: {e}"));
        return verdict(
            test,
            window,
            samples,
            None,
            notes,
            Outcome::Inconclusive,
            Certainty::Indicated,
        );
    }
    let outcome_if_ok = if want_le {
        Outcome::Converges
    } else {
        Outcome::Diverges
    };
    if violations.is_empty() {
        let certainty = if exact && b_status.provenance == Provenance::Catalog {
            Certainty::Proved
        } else {
            Certainty::Indicated
        };
        notes.push("inequality holds at every checked index".to_string());
        return verdict(test, window, samples, None, notes, outcome_if_ok, certainty);
    }
    let last_violation = *violations.last().unwrap();
    if last_violation <= horizon / 2 {
        notes.push(format!(
            "finite exception prefix: last violation at n = {last_violation}"
        ));
        return verdict(
            test,
            window,
            samples,
            None,
            notes,
            outcome_if_ok,
            Certainty::Indicated,
        );
    }
    notes.push(format!(
        "{} violations, persisting past the half-horizon (last at n = {last_violation})",
        violations.len()
    ));
    verdict(
        test,
        window,
        samples,
        None,
        notes,
        Outcome::Inconclusive,
        Certainty::Indicated,
    )
}

/// Basic comparison test 1: termwise aₙ vs bₙ.
pub fn compare_terms<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &SeriesHandle<S>,
    b_status: KnownStatus,
    horizon: u64,
) -> Result<Verdict, SeriesError> {
    let lo = a.start().max(b.start());
    assert!(horizon > lo);
    let mut samples = Vec::new();
    for n in sample_indices(lo, horizon, 8) {
        samples.push((n, a.term(n)?.compress().to_value()));
    }
    Ok(compare_with(
        "compare-terms".to_string(),
        horizon,
        b_status,
        &mut |n| Ok(a.term(n)? <= b.term(n)?),
        lo,
        S::EXACT,
        samples,
    ))
}

/// Basic comparison test 2: ratio aₙ₊₁/aₙ vs bₙ₊₁/bₙ.
pub fn compare_ratios<S: Scalar>(
    a: &SeriesHandle<S>,
    b: &SeriesHandle<S>,
    b_status: KnownStatus,
    horizon: u64,
) -> Result<Verdict, SeriesError> {
    let lo = a.start().max(b.start());
    assert!(horizon > lo);
    let mut samples = Vec::new();
    for n in sample_indices(lo, horizon, 8) {
        samples.push((n, a.term(n)?.compress().to_value()));
    }
    Ok(compare_with(
        "compare-ratios".to_string(),
        horizon,
        b_status,
        &mut |n| {
            let ra = a.term(n + 1)?.div(&a.term(n)?).map_err(|e| lift(e, n))?;
            let rb = b.term(n + 1)?.div(&b.term(n)?).map_err(|e| lift(e, n))?;
            Ok(ra <= rb)
        },
        lo,
        S::EXACT,
        samples,
    ))
}
