use fraclim::fracderiv::{caputo, riemann_liouville};
use fraclim::leibniz::{integer_leibniz_report, leibniz_defect, symmetrized_report};
use fraclim::lfd::{lfd_estimate, verify_case, TheoremRow};
use fraclim::{
    Classification, DerivKind, FracOrder, FuncExpr, LeibnizReport, Method, QuadratureConfig,
    Sample, ScanConfig,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Entry;
use crate::failure::{Context, Failure, EXIT_VERIFICATION};

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn parse_function(field: &str, text: &str) -> Result<FuncExpr, Failure> {
    text.parse().map_err(|e| Failure::parse(field, e))
}

pub fn parse_order(field: &str, alpha: f64) -> Result<FracOrder, Failure> {
    FracOrder::new(alpha).field(field)
}

pub fn quadrature(nodes: usize) -> Result<QuadratureConfig, Failure> {
    QuadratureConfig::with_nodes(nodes).field("--nodes")
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub x: f64,
    pub value: f64,
    pub method: Method,
    pub est_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub function: String,
    pub alpha: f64,
    pub a: f64,
    pub kind: DerivKind,
    pub nodes: usize,
    pub results: Vec<EvalRow>,
}

pub struct EvalSpec<'a> {
    pub function: &'a FuncExpr,
    pub alpha: FracOrder,
    pub a: f64,
    pub points: &'a [f64],
    pub kind: DerivKind,
    pub quad: QuadratureConfig,
}

pub fn cmd_eval(spec: &EvalSpec<'_>, format: Format) -> Result<String, Failure> {
    let results = spec
        .points
        .par_iter()
        .map(|&x| {
            let r = match spec.kind {
                DerivKind::Caputo => caputo(spec.function, spec.alpha, spec.a, x, &spec.quad),
                DerivKind::RiemannLiouville => {
                    riemann_liouville(spec.function, spec.alpha, spec.a, x, &spec.quad)
                }
            }
            .field(&format!("--x {x}"))?;
            Ok(EvalRow {
                x,
                value: r.value,
                method: r.method,
                est_error: r.est_error,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let report = EvalReport {
        function: spec.function.to_string(),
        alpha: spec.alpha.alpha(),
        a: spec.a,
        kind: spec.kind,
        nodes: spec.quad.nodes(),
        results,
    };
    Ok(match format {
        Format::Csv => csv(
            &["x", "value", "method", "est_error"],
            report.results.iter().map(|r| {
                vec![
                    num(r.x),
                    num(r.value),
                    format!("{:?}", r.method),
                    opt(r.est_error),
                ]
            }),
        ),
        _ => json(&report),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub function: String,
    pub alpha: f64,
    pub a: f64,
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
    pub nodes: usize,
    pub samples: Vec<Sample>,
    pub fitted_exponent: Option<f64>,
    pub fitted_prefactor: Option<f64>,
    pub classification: Classification,
    pub theory_exponent: f64,
    pub theory_prefactor: Option<f64>,
}

pub fn cmd_lfd_scan(
    f: &FuncExpr,
    alpha: FracOrder,
    a: f64,
    cfg: &ScanConfig,
    tol: f64,
    loglog: bool,
    format: Format,
) -> Result<String, Failure> {
    let r = lfd_estimate(f, alpha, a, cfg, tol).field("lfd-scan")?;
    let report = ScanReport {
        function: f.to_string(),
        alpha: alpha.alpha(),
        a,
        h0: cfg.h0,
        ratio: cfg.ratio,
        count: cfg.count,
        nodes: cfg.quad.nodes(),
        samples: r.samples,
        fitted_exponent: r.fitted_exponent,
        fitted_prefactor: r.fitted_prefactor,
        classification: r.classification,
        theory_exponent: r.theory_exponent,
        theory_prefactor: r.theory_prefactor,
    };
    Ok(match format {
        Format::Csv => {
            let mut header = vec!["x", "value", "est_error", "usable"];
            if loglog {
                header.extend(["log_offset", "log_abs_value"]);
            }
            csv(
                &header,
                report.samples.iter().map(|s| {
                    let mut row = vec![
                        num(s.x),
                        num(s.value),
                        num(s.est_error),
                        s.usable.to_string(),
                    ];
                    if loglog {
                        row.push(num((s.x - a).ln()));
                        row.push(num(s.value.abs().ln()));
                    }
                    row
                }),
            )
        }
        _ => json(&report),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Unviolated,
    Integer,
    Series(Option<u32>),
}

#[derive(Debug, Clone, Serialize)]
pub struct LeibnizOutput {
    pub f: String,
    pub g: String,
    pub a: f64,
    #[serde(flatten)]
    pub report: LeibnizReport,
}

pub struct LeibnizSpec<'a> {
    pub f: &'a FuncExpr,
    pub g: &'a FuncExpr,
    pub alpha: FracOrder,
    pub a: f64,
    pub points: &'a [f64],
    pub rule: Rule,
    pub operator: DerivKind,
    pub quad: QuadratureConfig,
}

pub fn cmd_leibniz(spec: &LeibnizSpec<'_>, format: Format) -> Result<String, Failure> {
    let report = match spec.rule {
        Rule::Unviolated => leibniz_defect(
            spec.f,
            spec.g,
            spec.alpha,
            spec.a,
            spec.points,
            &spec.quad,
            spec.operator,
        ),
        Rule::Integer => {
            if !spec.alpha.is_integer() {
                return Err(Failure::domain(
                    "--alpha",
                    "the integer rule needs an integer order",
                ));
            }
            integer_leibniz_report(
                spec.f,
                spec.g,
                spec.alpha.n(),
                spec.a,
                spec.points,
                &spec.quad,
            )
        }
        Rule::Series(k) => symmetrized_report(
            spec.f,
            spec.g,
            spec.alpha,
            spec.a,
            spec.points,
            k,
            &spec.quad,
        ),
    }
    .field("leibniz")?;
    let out = LeibnizOutput {
        f: spec.f.to_string(),
        g: spec.g.to_string(),
        a: spec.a,
        report,
    };
    Ok(match format {
        Format::Csv => csv(
            &["x", "value", "defect"],
            out.report
                .points
                .iter()
                .zip(&out.report.values)
                .zip(&out.report.defect)
                .map(|((x, v), d)| vec![num(*x), num(*v), num(*d)]),
        ),
        _ => json(&out),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
    pub passed: usize,
    pub failed: usize,
}

pub fn cmd_verify_theorem(
    corpus: &[Entry],
    alphas: &[FracOrder],
    cfg: &ScanConfig,
    tol: f64,
    format: Format,
) -> Result<(String, Option<Failure>), Failure> {
    let cases: Vec<(&Entry, FracOrder)> = corpus
        .iter()
        .flat_map(|e| alphas.iter().map(move |&al| (e, al)))
        .collect();
    let rows = cases
        .par_iter()
        .map(|(e, al)| {
            verify_case(&e.function, *al, e.a, cfg, tol)
                .field(&format!("corpus line {} at alpha {al}", e.line))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let failed: Vec<&TheoremRow> = rows.iter().filter(|r| !r.pass).collect();
    let failure = (!failed.is_empty()).then(|| Failure {
        code: EXIT_VERIFICATION,
        message: failed
            .iter()
            .map(|r| {
                format!(
                    "FAIL {} @ {} alpha={}: {}",
                    r.function, r.a, r.alpha, r.classification
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    });
    let failed = failed.len();
    let report = TheoremReport {
        passed: rows.len() - failed,
        failed,
        rows,
    };
    let text = match format {
        Format::Json => json(&report),
        Format::Csv => csv(
            &[
                "function",
                "a",
                "alpha",
                "classification",
                "limit",
                "fitted_exponent",
                "theory_exponent",
                "expected",
                "pass",
            ],
            report.rows.iter().map(|r| {
                let kind = match r.classification {
                    Classification::Zero => "Zero",
                    Classification::Finite { .. } => "Finite",
                    Classification::Divergent => "Divergent",
                };
                vec![
                    r.function.clone(),
                    num(r.a),
                    num(r.alpha),
                    kind.to_owned(),
                    opt(r.classification.limit()),
                    opt(r.fitted_exponent),
                    num(r.theory_exponent),
                    num(r.expected),
                    r.pass.to_string(),
                ]
            }),
        ),
        Format::Table => table(&report),
    };
    Ok((text, failure))
}

fn table(report: &TheoremReport) -> String {
    let width = report
        .rows
        .iter()
        .map(|r| r.function.len())
        .max()
        .unwrap_or(0)
        .max(8);
    let mut s = format!(
        "{:<width$}  {:>8}  {:>6}  {:<24}  {:>10}  {:>10}  result\n",
        "function", "a", "alpha", "classification", "fitted", "theory"
    );
    for r in &report.rows {
        let fitted = r
            .fitted_exponent
            .map_or_else(|| "-".to_owned(), |v| format!("{v:.4}"));
        s += &format!(
            "{:<width$}  {:>8}  {:>6}  {:<24}  {:>10}  {:>10.4}  {}\n",
            r.function,
            r.a,
            r.alpha,
            short(&r.classification),
            fitted,
            r.theory_exponent,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    s += &format!("{} passed, {} failed\n", report.passed, report.failed);
    s
}

fn short(c: &Classification) -> String {
    match c {
        Classification::Finite { limit } => {
            let v = format!("{limit:.6}");
            let v = v.trim_end_matches('0').trim_end_matches('.');
            format!("Finite({v})")
        }
        other => other.to_string(),
    }
}
