//! Ground-truth registry of classic positive series. Statuses are standard
//! results, never inferred by this crate's own tests.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::SeriesError;
use crate::expr::TermExpr;
use crate::precision::PrecisionConfig;
use crate::scalar::Scalar;
use crate::series::{KnownStatus, Provenance, SeriesHandle, Status, TailProvider};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub status: Status,
    pub start: u64,
    /// Exact total Σ aₙ when a rational closed form exists.
    pub closed_form_sum: Option<BigRational>,
    pub tail: Option<TailProvider>,
    /// Standard justification for the status.
    pub provenance_note: &'static str,
}

impl CatalogEntry {
    pub fn parsed(&self) -> TermExpr {
        TermExpr::parse(self.source).expect("catalog sources parse")
    }

    pub fn known_status(&self) -> KnownStatus {
        KnownStatus {
            status: self.status,
            provenance: Provenance::Catalog,
        }
    }

    /// Build a series handle carrying this entry's start index, status, and
    /// tail provider.
    pub fn series<S: Scalar>(&self, cfg: PrecisionConfig) -> SeriesHandle<S> {
        let mut s = SeriesHandle::new(self.parsed(), cfg)
            .with_start(self.start)
            .with_known_status(self.known_status());
        if let Some(tail) = self.tail {
            s = s.with_tail_provider(tail);
        }
        s
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn catalog_entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(build_entries)
}

pub fn find_entry(name: &str) -> Option<&'static CatalogEntry> {
    catalog_entries().iter().find(|e| e.name == name)
}

/// Structural lookup: does this expression match a catalog entry exactly?
pub fn find_by_expr(expr: &TermExpr) -> Option<&'static CatalogEntry> {
    catalog_entries().iter().find(|e| e.parsed() == *expr)
}

fn build_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "geometric:1/2",
            source: "1/2^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(int(1)),
            tail: Some(TailProvider::Geometric { ratio: || rat(1, 2) }),
            provenance_note: "geometric series, ratio 1/2 < 1",
        },
        CatalogEntry {
            name: "geometric:1/3",
            source: "1/3^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(rat(1, 2)),
            tail: Some(TailProvider::Geometric { ratio: || rat(1, 3) }),
            provenance_note: "geometric series, ratio 1/3 < 1",
        },
        CatalogEntry {
            name: "geometric:1/4",
            source: "1/4^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(rat(1, 3)),
            tail: Some(TailProvider::Geometric { ratio: || rat(1, 4) }),
            provenance_note: "geometric series, ratio 1/4 < 1",
        },
        CatalogEntry {
            name: "geometric:9/10",
            source: "0.9^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(int(9)),
            tail: Some(TailProvider::Geometric { ratio: || rat(9, 10) }),
            provenance_note: "geometric series, ratio 9/10 < 1",
        },
        CatalogEntry {
            name: "p:1/2",
            source: "1/sqrt(n)",
            status: Status::Divergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "p-series with p = 1/2 <= 1 diverges",
        },
        CatalogEntry {
            name: "harmonic",
            source: "1/n",
            status: Status::Divergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "harmonic series diverges",
        },
        CatalogEntry {
            name: "p:3/2",
            source: "1/sqrt(n^3)",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "p-series with p = 3/2 > 1 converges",
        },
        CatalogEntry {
            name: "p:2",
            source: "1/n^2",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: Some(TailProvider::IntegralPSeries { p: 2 }),
            provenance_note: "p-series with p = 2 > 1 converges",
        },
        CatalogEntry {
            name: "p:3",
            source: "1/n^3",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: Some(TailProvider::IntegralPSeries { p: 3 }),
            provenance_note: "p-series with p = 3 > 1 converges",
        },
        CatalogEntry {
            name: "p:4",
            source: "1/n^4",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: Some(TailProvider::IntegralPSeries { p: 4 }),
            provenance_note: "p-series with p = 4 > 1 converges",
        },
        CatalogEntry {
            name: "log:1",
            source: "1/(n*ln(n))",
            status: Status::Divergent,
            start: 2,
            closed_form_sum: None,
            tail: None,
            provenance_note: "integral test: ∫ dx/(x ln x) diverges",
        },
        CatalogEntry {
            name: "log:2",
            source: "1/(n*ln(n)^2)",
            status: Status::Convergent,
            start: 2,
            closed_form_sum: None,
            tail: Some(TailProvider::IntegralLog { q: 2 }),
            provenance_note: "integral test: ∫ dx/(x ln² x) converges",
        },
        CatalogEntry {
            name: "inv-factorial",
            source: "1/n!",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "ratio test: a_{n+1}/a_n = 1/(n+1) → 0",
        },
        CatalogEntry {
            name: "stirling",
            source: "n!/n^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "ratio test: a_{n+1}/a_n → 1/e < 1",
        },
        CatalogEntry {
            name: "telescoping",
            source: "1/(n*(n+1))",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(int(1)),
            tail: Some(TailProvider::ExactFormula(|k| {
                BigRational::new(BigInt::from(1), BigInt::from(k + 1))
            })),
            provenance_note: "telescoping: Σ = 1, tail after k is 1/(k+1)",
        },
        CatalogEntry {
            name: "n-over-2^n",
            source: "n/2^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(int(2)),
            tail: Some(TailProvider::ExactFormula(|k| {
                BigRational::new(BigInt::from(k + 2), BigInt::from(1) << k)
            })),
            provenance_note: "Σ n xⁿ = x/(1−x)² at x = 1/2; tail (k+2)/2^k",
        },
        CatalogEntry {
            name: "n^2-over-2^n",
            source: "n^2/2^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: Some(int(6)),
            tail: Some(TailProvider::ExactFormula(|k| {
                BigRational::new(BigInt::from(k * k + 4 * k + 6), BigInt::from(1) << k)
            })),
            provenance_note: "Σ n² xⁿ = x(1+x)/(1−x)³ at x = 1/2; tail (k²+4k+6)/2^k",
        },
        CatalogEntry {
            name: "euler-over-2^n",
            source: "(1+1/n)^n/2^n",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "(1+1/n)ⁿ < e, dominated by e·(1/2)ⁿ",
        },
        CatalogEntry {
            name: "ones",
            source: "1",
            status: Status::Divergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "terms do not tend to zero",
        },
        CatalogEntry {
            name: "inv-n^2-plus-1",
            source: "1/(n^2+1)",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "comparison with Σ 1/n²",
        },
        CatalogEntry {
            name: "inv-sqrt-n^3-plus-n",
            source: "1/sqrt(n^3+n)",
            status: Status::Convergent,
            start: 1,
            closed_form_sum: None,
            tail: None,
            provenance_note: "comparison with Σ n^(−3/2)",
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendFlag {
    /// Checkpoint deltas fell below 2⁻⁴⁰ of the running sum.
    Plateauing,
    /// Deltas shrinking but not yet negligible.
    Slow,
    Growing,
}

/// Partial sums at checkpoints with first differences. Cross-check only;
/// never a verdict source.
#[derive(Debug, Clone)]
pub struct TrendReport<S> {
    pub checkpoints: Vec<u64>,
    pub sums: Vec<S>,
    pub deltas: Vec<S>,
    pub flag: TrendFlag,
}

pub fn oracle_partial_trend<S: Scalar>(
    a: &SeriesHandle<S>,
    checkpoints: &[u64],
) -> Result<TrendReport<S>, SeriesError> {
    assert!(checkpoints.windows(2).all(|w| w[0] < w[1]));
    assert!(!checkpoints.is_empty());
    let mut sums = Vec::with_capacity(checkpoints.len());
    for &m in checkpoints {
        sums.push(a.partial_sum(m)?);
    }
    let mut deltas = Vec::with_capacity(checkpoints.len().saturating_sub(1));
    for w in sums.windows(2) {
        deltas.push(w[1].sub(&w[0]));
    }
    let cfg = a.config();
    let threshold = rat(1, 1) / BigRational::from_integer(BigInt::from(1) << 40);
    let last_sum = sums.last().unwrap();
    let flag = match deltas.last() {
        None => TrendFlag::Growing,
        Some(last_delta) => {
            let rel = last_delta.div(last_sum).map_err(|_| {
                SeriesError::Eval(crate::error::EvalError::DivisionByZero { n: 0 })
            })?;
            let tiny = S::from_ratio(&threshold, cfg);
            if rel < tiny {
                TrendFlag::Plateauing
            } else if rel < S::from_ratio(&rat(1, 4), cfg) {
                TrendFlag::Slow
            } else {
                TrendFlag::Growing
            }
        }
    };
    Ok(TrendReport {
        checkpoints: checkpoints.to_vec(),
        sums,
        deltas,
        flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn at_least_twenty_entries_all_parse_and_are_positive() {
        let entries = catalog_entries();
        assert!(entries.len() >= 20);
        for e in entries {
            let s: SeriesHandle<Fp> = e.series(cfg());
            for n in crate::series::sample_indices(e.start, 10_000, 48) {
                s.term(n).unwrap_or_else(|err| {
                    panic!("{} not positive at n = {n}: {err}", e.name)
                });
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let entries = catalog_entries();
        for (i, e) in entries.iter().enumerate() {
            assert!(entries[i + 1..].iter().all(|o| o.name != e.name));
        }
    }

    #[test]
    fn sum_and_tail_are_consistent() {
        for e in catalog_entries() {
            let Some(sum) = &e.closed_form_sum else { continue };
            let Some(_) = &e.tail else { continue };
            let s: SeriesHandle<BigRational> = e.series(cfg());
            for k in [1u64, 5, 50] {
                let total = s.partial_sum(k).unwrap() + s.tail_bound(k).unwrap().upper;
                assert_eq!(&total, sum, "entry {} at k = {k}", e.name);
            }
        }
    }

    #[test]
    fn lookup_by_name_and_by_expr() {
        assert!(find_entry("harmonic").is_some());
        assert!(find_entry("no-such-series").is_none());
        let expr = TermExpr::parse("1 / n").unwrap();
        assert_eq!(find_by_expr(&expr).unwrap().name, "harmonic");
        let expr = TermExpr::parse("2/n").unwrap();
        assert!(find_by_expr(&expr).is_none());
    }

    #[test]
    fn oracle_trend_examples() {
        let geo: SeriesHandle<BigRational> = find_entry("geometric:1/2").unwrap().series(cfg());
        let t = oracle_partial_trend(&geo, &[10, 100, 1000]).unwrap();
        assert_eq!(t.flag, TrendFlag::Plateauing);
        assert_eq!(t.sums[0], rat(1023, 1024));

        let harm: SeriesHandle<Fp> = find_entry("harmonic").unwrap().series(cfg());
        let t = oracle_partial_trend(&harm, &[10, 100, 1000]).unwrap();
        assert_eq!(t.flag, TrendFlag::Growing);
        let approx: Vec<f64> = t.sums.iter().map(|s| s.to_f64_lossy()).collect();
        assert!((approx[0] - 2.929).abs() < 1e-3);
        assert!((approx[1] - 5.187).abs() < 1e-3);
        assert!((approx[2] - 7.485).abs() < 1e-3);

        let log2: SeriesHandle<Fp> = find_entry("log:2").unwrap().series(cfg());
        let t = oracle_partial_trend(&log2, &[100, 10_000]).unwrap();
        assert_eq!(t.flag, TrendFlag::Slow);
    }
}
