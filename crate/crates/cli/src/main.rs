//! Command-line front end: parse a series definition, run convergence tests,
//! build and verify witness sequences, and emit text, JSON, or CSV reports.
//!
//! Exit codes: 0 for a conclusive analysis (or a witness whose checks all
//! pass), 2 when every requested test is inconclusive (or a witness check
//! fails), 1 on any error.

mod report;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use convergence::witness::{self, PSource, WitnessBundle, WitnessKind};
use convergence::{
    bertrand_test, catalog_entries, compare_terms, find_by_expr, find_entry, gauss_test,
    raabe_test, ratio_test, CatalogEntry, Exact, Float, KnownStatus, Outcome, ParamSequence,
    PrecisionConfig, Provenance, Rationality, Scalar, SeriesError, SeriesHandle, Status,
    TermExpr, Verdict, Window,
};

use report::{Format, ReportDocument, WitnessOut};

#[derive(Parser)]
#[command(name = "convergence", version, about = "Convergence analysis for positive series")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run convergence tests against a term formula.
    Analyze(AnalyzeArgs),
    /// Build and verify witness sequences for a term formula.
    Witness(WitnessArgs),
    /// Inspect the built-in series catalog.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Term formula a_n, e.g. "1/2^n".
    #[arg(long)]
    term: String,
    /// First index of the series.
    #[arg(long, default_value_t = 1)]
    start: u64,
    /// Comma-separated test list: ratio, raabe, bertrand, gauss, kummer, compare.
    #[arg(long, default_value = "ratio,raabe,bertrand,gauss")]
    tests: String,
    /// Parameter sequence p_n for the kummer test ("1", "n", "n*ln(n)", or a formula).
    #[arg(long)]
    kummer_p: Option<String>,
    /// Divergence source for sum 1/p_n: a catalog name or "assert-divergent".
    #[arg(long)]
    recip_p: Option<String>,
    /// Comparison series b_n for the compare test.
    #[arg(long)]
    compare_with: Option<String>,
    /// Status of the comparison series when it is not in the catalog:
    /// "convergent" or "divergent" (asserted).
    #[arg(long)]
    compare_status: Option<String>,
    /// Analysis window as N0:N1.
    #[arg(long, default_value = "32:4096")]
    window: String,
    /// Mantissa bits for floating evaluation.
    #[arg(long, default_value_t = 256)]
    precision: usize,
    /// Horizon for the comparison tests.
    #[arg(long, default_value_t = 4096)]
    horizon: u64,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct WitnessArgs {
    /// Term formula a_n.
    #[arg(long)]
    term: String,
    #[arg(long, default_value_t = 1)]
    start: u64,
    /// Witness construction: lemma1, lemma2, necessity1, necessity2, sufficiency1.
    #[arg(long)]
    mode: String,
    /// Catalog entry supplying status and tail bound (e.g. geometric:1/2).
    #[arg(long)]
    catalog: Option<String>,
    /// Assert divergence when the series is not in the catalog (lemma2/necessity2).
    #[arg(long, default_value_t = false)]
    assert_divergent: bool,
    /// Materialization horizon M.
    #[arg(long, default_value_t = witness::DEFAULT_WITNESS_HORIZON)]
    horizon: u64,
    /// Number of sequence entries to print.
    #[arg(long, default_value_t = 32)]
    count: u64,
    /// Use the literal per-block B_n = 1/a_k assignment instead of the
    /// monotone running supremum.
    #[arg(long, default_value_t = false)]
    strict_lemma1: bool,
    /// Parameter sequence p_n for sufficiency1.
    #[arg(long)]
    kummer_p: Option<String>,
    /// Kummer margin c for sufficiency1, e.g. "1" or "1/2".
    #[arg(long)]
    margin: Option<String>,
    #[arg(long, default_value_t = 256)]
    precision: usize,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List every catalog entry.
    List {
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Run the full test battery on every entry and compare against ground truth.
    Run {
        #[arg(long, default_value = "32:4096")]
        window: String,
        #[arg(long, default_value_t = 256)]
        precision: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Witness(args) => cmd_witness(args),
        Cmd::Catalog { sub } => match sub {
            CatalogCmd::List { format } => cmd_catalog_list(format),
            CatalogCmd::Run {
                window,
                precision,
                format,
            } => cmd_catalog_run(&window, precision, format),
        },
    };
    std::process::exit(code);
}

/// Print an error document in the requested format and return exit code 1.
fn fail(request: serde_json::Value, format: Format, message: String) -> i32 {
    let mut doc = ReportDocument::new(request);
    doc.errors.push(message);
    print!("{}", doc.render(format));
    1
}

fn parse_window(spec: &str) -> Result<Window, String> {
    let (n0, n1) = spec
        .split_once(':')
        .ok_or_else(|| format!("window must be N0:N1, got '{spec}'"))?;
    let n0: u64 = n0.trim().parse().map_err(|_| format!("bad window start '{n0}'"))?;
    let n1: u64 = n1.trim().parse().map_err(|_| format!("bad window end '{n1}'"))?;
    if n0 < 1 || n1 < n0 + 16 {
        return Err(format!("window {n0}:{n1} must satisfy n0 >= 1 and n1 >= n0 + 16"));
    }
    Ok(Window::new(n0, n1))
}

fn parse_param(src: &str) -> Result<ParamSequence, String> {
    Ok(match src.trim() {
        "1" => ParamSequence::Ones,
        "n" => ParamSequence::Linear,
        "n*ln(n)" => ParamSequence::NLogN,
        other => ParamSequence::Expr(
            TermExpr::parse(other).map_err(|e| format!("invalid --kummer-p: {e}"))?,
        ),
    })
}

fn parse_rational(src: &str, cfg: &PrecisionConfig) -> Result<BigRational, String> {
    let expr = TermExpr::parse(src).map_err(|e| format!("invalid rational '{src}': {e}"))?;
    expr.evaluate::<Exact>(1, cfg)
        .map_err(|e| format!("invalid rational '{src}': {e}"))
}

/// Build the series handle, attaching catalog status and tail data when the
/// expression (or an explicit `--catalog` name) matches an entry.
fn build_series<S: Scalar>(
    term: &str,
    start: u64,
    catalog_name: Option<&str>,
    precision: usize,
) -> Result<SeriesHandle<S>, String> {
    let expr = TermExpr::parse(term).map_err(|e| format!("invalid --term: {e}"))?;
    let cfg = PrecisionConfig::new(precision);
    if let Some(name) = catalog_name {
        let entry = find_entry(name)
            .ok_or_else(|| format!("unknown catalog entry '{name}' (see `catalog list`)"))?;
        if entry.parsed() != expr {
            return Err(format!(
                "--catalog {name} defines '{}', which differs from --term '{expr}'",
                entry.parsed()
            ));
        }
        return Ok(entry.series(cfg));
    }
    if let Some(entry) = find_by_expr(&expr) {
        if entry.start == start {
            return Ok(entry.series(cfg));
        }
    }
    Ok(SeriesHandle::new(expr, cfg).with_start(start))
}

fn analyze_request_json(args: &AnalyzeArgs) -> serde_json::Value {
    json!({
        "command": "analyze",
        "term": args.term,
        "start": args.start,
        "tests": args.tests,
        "kummer_p": args.kummer_p,
        "recip_p": args.recip_p,
        "compare_with": args.compare_with,
        "compare_status": args.compare_status,
        "window": args.window,
        "precision": args.precision,
        "horizon": args.horizon,
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> i32 {
    let request = analyze_request_json(&args);
    match run_analyze(&args) {
        Ok(results) => {
            let conclusive = results.iter().any(|v| v.outcome != Outcome::Inconclusive);
            let mut doc = ReportDocument::new(request);
            doc.results = results;
            print!("{}", doc.render(args.format));
            if conclusive {
                0
            } else {
                2
            }
        }
        Err(message) => fail(request, args.format, message),
    }
}

fn run_analyze(args: &AnalyzeArgs) -> Result<Vec<Verdict>, String> {
    let expr = TermExpr::parse(&args.term).map_err(|e| format!("invalid --term: {e}"))?;
    // Exact-rational terms get proof-grade rational arithmetic; anything
    // with ln/exp/sqrt runs on high-precision floats.
    let mut rationality = expr.classify();
    if let Some(b_src) = args.compare_with.as_deref() {
        let b_expr =
            TermExpr::parse(b_src).map_err(|e| format!("invalid --compare-with: {e}"))?;
        if b_expr.classify() == Rationality::Transcendental {
            rationality = Rationality::Transcendental;
        }
    }
    match rationality {
        Rationality::ExactRational => run_tests::<Exact>(args),
        Rationality::Transcendental => run_tests::<Float>(args),
    }
}

fn run_tests<S: Scalar>(args: &AnalyzeArgs) -> Result<Vec<Verdict>, String> {
    let a: SeriesHandle<S> = build_series(&args.term, args.start, None, args.precision)?;
    let window = parse_window(&args.window)?;
    let mut results = Vec::new();
    for test in args.tests.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let verdict = match test {
            "ratio" => ratio_test(&a, window),
            "raabe" => raabe_test(&a, window),
            // The Bertrand statistic contains ln n, so it always evaluates
            // in floating mode.
            "bertrand" => {
                let af: SeriesHandle<Float> =
                    build_series(&args.term, args.start, None, args.precision)?;
                bertrand_test(&af, window)
            }
            "gauss" => gauss_test(&a, window),
            "kummer" => {
                let p_src = args
                    .kummer_p
                    .as_deref()
                    .ok_or("the kummer test requires --kummer-p")?;
                let p = parse_param(p_src)?;
                let recip = resolve_recip(args.recip_p.as_deref(), &p)?;
                convergence::kummer_test(&a, &p, window, recip)
            }
            "compare" => {
                let b_src = args
                    .compare_with
                    .as_deref()
                    .ok_or("the compare test requires --compare-with")?;
                let (b, status) =
                    comparison_series(b_src, args.compare_status.as_deref(), args.precision)?;
                compare_terms(&a, &b, status, args.horizon)
            }
            other => return Err(format!("unknown test '{other}'")),
        };
        results.push(verdict.map_err(|e| format!("{test}: {e}"))?);
    }
    if results.is_empty() {
        return Err("no tests selected".to_string());
    }
    Ok(results)
}

fn resolve_recip(
    recip: Option<&str>,
    p: &ParamSequence,
) -> Result<Option<KnownStatus>, String> {
    let Some(recip) = recip else { return Ok(None) };
    if recip == "assert-divergent" {
        return Ok(Some(KnownStatus {
            status: Status::Divergent,
            provenance: Provenance::Asserted,
        }));
    }
    let entry = find_entry(recip)
        .ok_or_else(|| format!("unknown catalog entry '{recip}' for --recip-p"))?;
    if entry.parsed() != p.reciprocal_expr() {
        return Err(format!(
            "--recip-p {recip} defines '{}', which is not 1/p_n for p_n = {}",
            entry.parsed(),
            p.label()
        ));
    }
    Ok(Some(entry.known_status()))
}

fn comparison_series<S: Scalar>(
    b_src: &str,
    status: Option<&str>,
    precision: usize,
) -> Result<(SeriesHandle<S>, KnownStatus), String> {
    let b: SeriesHandle<S> = build_series(b_src, 1, None, precision)?;
    if let Some(ks) = b.known_status() {
        return Ok((b, ks));
    }
    let status = match status {
        Some("convergent") => Status::Convergent,
        Some("divergent") => Status::Divergent,
        Some(other) => return Err(format!("bad --compare-status '{other}'")),
        None => {
            return Err(
                "comparison series is not in the catalog; pass --compare-status".to_string(),
            )
        }
    };
    Ok((
        b,
        KnownStatus {
            status,
            provenance: Provenance::Asserted,
        },
    ))
}

fn witness_request_json(args: &WitnessArgs) -> serde_json::Value {
    json!({
        "command": "witness",
        "term": args.term,
        "start": args.start,
        "mode": args.mode,
        "catalog": args.catalog,
        "assert_divergent": args.assert_divergent,
        "horizon": args.horizon,
        "count": args.count,
        "strict_lemma1": args.strict_lemma1,
        "kummer_p": args.kummer_p,
        "margin": args.margin,
        "precision": args.precision,
    })
}

fn cmd_witness(args: WitnessArgs) -> i32 {
    let request = witness_request_json(&args);
    match run_witness(&args) {
        Ok(out) => {
            let ok = out.report.failures.is_empty();
            let mut doc = ReportDocument::new(request);
            doc.witnesses.push(out);
            print!("{}", doc.render(args.format));
            if ok {
                0
            } else {
                2
            }
        }
        Err(message) => fail(request, args.format, message),
    }
}

fn run_witness(args: &WitnessArgs) -> Result<WitnessOut, String> {
    let mut a: SeriesHandle<Exact> =
        build_series(&args.term, args.start, args.catalog.as_deref(), args.precision)?;
    if args.assert_divergent && a.known_status().is_none() {
        a = a.with_known_status(KnownStatus {
            status: Status::Divergent,
            provenance: Provenance::Asserted,
        });
    }
    let m = args.horizon;
    let count = args.count;
    let render = |v: &Exact| convergence::Scalar::to_value(v).render();
    match args.mode.as_str() {
        "lemma1" => {
            let xi = witness::build_xi_covering(&a, m).map_err(hint)?;
            let b = witness::build_b_convergent(&a, &xi, m, args.strict_lemma1).map_err(hint)?;
            let bundle = WitnessBundle {
                xi: Some(xi.clone()),
                b: Some(b.clone()),
                p: None,
                c: None,
            };
            let report = witness::verify_witness(WitnessKind::Lemma1, &a, &bundle, m).map_err(hint)?;
            Ok(WitnessOut {
                mode: "lemma1".into(),
                xi: xi.xi().iter().copied().take(count as usize).collect(),
                b: b.values_upto(count).iter().map(&render).collect(),
                p: vec![],
                report,
            })
        }
        "lemma2" => {
            let (xi, b) = witness::build_b_divergent(&a, m).map_err(hint)?;
            let bundle = WitnessBundle {
                xi: Some(xi.clone()),
                b: Some(b.clone()),
                p: None,
                c: None,
            };
            let report = witness::verify_witness(WitnessKind::Lemma2, &a, &bundle, m).map_err(hint)?;
            Ok(WitnessOut {
                mode: "lemma2".into(),
                xi: xi.xi().iter().copied().take(count as usize).collect(),
                b: b.values_upto(count).iter().map(&render).collect(),
                p: vec![],
                report,
            })
        }
        "necessity1" => {
            let xi = witness::build_xi_covering(&a, m).map_err(hint)?;
            let b = witness::build_b_convergent(&a, &xi, m, args.strict_lemma1).map_err(hint)?;
            let p = witness::build_p_from_b_convergent(&a, &b, m).map_err(hint)?;
            let bundle = WitnessBundle {
                xi: Some(xi.clone()),
                b: Some(b.clone()),
                p: Some(p.clone()),
                c: p.margin.clone(),
            };
            let report =
                witness::verify_witness(WitnessKind::Necessity1, &a, &bundle, m).map_err(hint)?;
            Ok(WitnessOut {
                mode: "necessity1".into(),
                xi: xi.xi().iter().copied().take(count as usize).collect(),
                b: b.values_upto(count).iter().map(&render).collect(),
                p: p.values.iter().take(count as usize).map(&render).collect(),
                report,
            })
        }
        "necessity2" => {
            let (xi, b) = witness::build_b_divergent(&a, m).map_err(hint)?;
            let p = witness::build_p_divergent(&a, &b, m, true).map_err(hint)?;
            let bundle = WitnessBundle {
                xi: Some(xi.clone()),
                b: Some(b.clone()),
                p: Some(p.clone()),
                c: None,
            };
            let report =
                witness::verify_witness(WitnessKind::Necessity2, &a, &bundle, m).map_err(hint)?;
            Ok(WitnessOut {
                mode: "necessity2".into(),
                xi: xi.xi().iter().copied().take(count as usize).collect(),
                b: b.values_upto(count).iter().map(&render).collect(),
                p: p.values.iter().take(count as usize).map(&render).collect(),
                report,
            })
        }
        "sufficiency1" => {
            let p_src = args
                .kummer_p
                .as_deref()
                .ok_or("sufficiency1 requires --kummer-p")?;
            let p = parse_param(p_src)?;
            let c_src = args.margin.as_deref().ok_or("sufficiency1 requires --margin")?;
            let c = parse_rational(c_src, a.config())?;
            let b = witness::build_b_from_p(&a, PSource::Param(&p), &c, 1, m).map_err(hint)?;
            let bundle = WitnessBundle {
                xi: None,
                b: Some(b.clone()),
                p: None,
                c: Some(c),
            };
            let report =
                witness::verify_witness(WitnessKind::Sufficiency1, &a, &bundle, m).map_err(hint)?;
            Ok(WitnessOut {
                mode: "sufficiency1".into(),
                xi: vec![],
                b: b.values_upto(count).iter().map(&render).collect(),
                p: vec![],
                report,
            })
        }
        other => Err(format!(
            "unknown mode '{other}' (expected lemma1|lemma2|necessity1|necessity2|sufficiency1)"
        )),
    }
}

fn hint(e: convergence::WitnessError) -> String {
    use convergence::WitnessError as W;
    match &e {
        W::TailNotCertified => format!(
            "{e}; attach a catalog tail via --catalog <name> (see `catalog list`)"
        ),
        W::NotDivergent => format!("{e}; pass --assert-divergent or --catalog <name>"),
        W::NotConvergent => format!("{e}; pass --catalog <name> for a convergent entry"),
        _ => e.to_string(),
    }
}

fn cmd_catalog_list(format: Format) -> i32 {
    let request = json!({"command": "catalog list"});
    match format {
        Format::Json => {
            let entries: Vec<serde_json::Value> = catalog_entries()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "term": e.source,
                        "start": e.start,
                        "status": match e.status {
                            Status::Convergent => "convergent",
                            Status::Divergent => "divergent",
                        },
                    })
                })
                .collect();
            let doc = json!({
                "schema_version": report::SCHEMA_VERSION,
                "request": request,
                "results": entries,
                "witnesses": [],
                "errors": [],
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        _ => {
            for e in catalog_entries() {
                println!(
                    "{:24} {:28} start {:>2}  {}",
                    e.name,
                    e.source,
                    e.start,
                    match e.status {
                        Status::Convergent => "convergent",
                        Status::Divergent => "divergent",
                    }
                );
            }
        }
    }
    0
}

/// One battery pass over a catalog entry. Bertrand always runs on the
/// floating handle since its statistic contains ln n.
fn entry_battery<S: Scalar>(
    entry: &CatalogEntry,
    cfg: &PrecisionConfig,
    window: Window,
) -> [(&'static str, Result<Verdict, SeriesError>); 4] {
    let a: SeriesHandle<S> = entry.series(cfg.clone());
    let af: SeriesHandle<Float> = entry.series(cfg.clone());
    [
        ("ratio", ratio_test(&a, window)),
        ("raabe", raabe_test(&a, window)),
        ("bertrand", bertrand_test(&af, window)),
        ("gauss", gauss_test(&a, window)),
    ]
}

fn cmd_catalog_run(window: &str, precision: usize, format: Format) -> i32 {
    let request = json!({
        "command": "catalog run",
        "window": window,
        "precision": precision,
    });
    let window = match parse_window(window) {
        Ok(w) => w,
        Err(e) => return fail(request, format, e),
    };
    let cfg = PrecisionConfig::new(precision);
    let mut doc = ReportDocument::new(request);
    let mut contradictions = 0usize;
    let mut undecided_entries = 0usize;
    for entry in catalog_entries() {
        let truth = entry.status;
        let battery = match entry.parsed().classify() {
            Rationality::ExactRational => entry_battery::<Exact>(entry, &cfg, window),
            Rationality::Transcendental => entry_battery::<Float>(entry, &cfg, window),
        };
        let mut decided = false;
        for (name, result) in battery {
            match result {
                Ok(mut v) => {
                    v.evidence.test = format!("{}.{}", entry.name, v.evidence.test);
                    let agrees = match v.outcome {
                        Outcome::Converges => truth == Status::Convergent,
                        Outcome::Diverges => truth == Status::Divergent,
                        Outcome::Inconclusive => true,
                    };
                    if v.outcome != Outcome::Inconclusive {
                        decided = true;
                        if !agrees {
                            contradictions += 1;
                            v.evidence
                                .notes
                                .push("CONTRADICTS catalog ground truth".to_string());
                        }
                    }
                    doc.results.push(v);
                }
                Err(e) => doc.errors.push(format!("{}.{name}: {e}", entry.name)),
            }
        }
        if !decided {
            undecided_entries += 1;
        }
    }
    print!("{}", doc.render(format));
    if format == Format::Text {
        println!(
            "summary: {} entries, {} contradiction(s), {} undecided entr{}",
            catalog_entries().len(),
            contradictions,
            undecided_entries,
            if undecided_entries == 1 { "y" } else { "ies" }
        );
    }
    if !doc.errors.is_empty() {
        1
    } else if contradictions == 0 {
        0
    } else {
        2
    }
}
