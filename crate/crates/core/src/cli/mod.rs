//! Command-line front end: run named checks on a catalog entry or a
//! description file and report verdicts as JSON or text.

pub mod describe;
pub mod expr;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, Built, Description, Expectation};
use crate::error::{Error, Result};
use crate::foliation::gauduchon_residual;
use crate::generalized::{integrability_residual_direct, EigenframeL};
use crate::samples::{Residual, SampleSet, DEFAULT_SEED};

pub const SCHEMA_VERSION: u32 = 1;

/// Every check identifier, in report order.
pub const CHECK_IDS: &[&str] = &[
    "axioms",
    "commuting",
    "commuting_integrability",
    "direct",
    "eigen",
    "foliation",
    "gauduchon",
    "gk",
    "orientation",
    "remark1",
    "thm23",
    "twist",
    "type",
];

/// Pass below `accept`, fail above `reject`, inconclusive in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub accept: f64,
    pub reject: f64,
}

pub fn default_tolerance(check: &str) -> Tolerance {
    let accept = match check {
        "axioms" | "eigen" | "gk" => 1e-9,
        "remark1" | "foliation" => 1e-8,
        "orientation" => 0.5,
        _ => 1e-7,
    };
    Tolerance {
        accept,
        reject: if check == "orientation" { 0.5 } else { 1e-3 },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug, Clone)]
#[command(
    name = "gcverify",
    version,
    about = "Verify generalized complex and bihermitian structures on the 4-torus"
)]
pub struct Cli {
    /// Catalog entry, optionally with parameters: `linear_foliation_t4(1,2,1,3)`.
    #[arg(long, conflicts_with = "input", required_unless_present_any = ["input", "list"])]
    pub catalog: Option<String>,
    /// Structure description file (TOML).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated check identifiers; defaults to every applicable check.
    #[arg(long, value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Acceptance threshold override, `name=value`; repeatable.
    #[arg(long = "tol")]
    pub tol: Vec<String>,
    /// Seed for the random sample points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the selected structure in the description format and exit.
    #[arg(long)]
    pub export: bool,
    /// List catalog entries and check identifiers.
    #[arg(long)]
    pub list: bool,
}

#[derive(Clone, Debug)]
pub enum Source {
    Catalog(String),
    File(PathBuf),
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Source,
    /// Explicitly requested checks; empty means every applicable one.
    pub checks: Vec<String>,
    pub tolerances: BTreeMap<String, Tolerance>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let source = match (&cli.catalog, &cli.input) {
            (Some(c), None) => Source::Catalog(c.clone()),
            (None, Some(p)) => Source::File(p.clone()),
            _ => {
                return Err(Error::Config(
                    "exactly one of --catalog or --input is required".into(),
                ))
            }
        };
        let mut checks: Vec<String> = cli
            .checks
            .iter()
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        for c in &checks {
            if !CHECK_IDS.contains(&c.as_str()) {
                return Err(Error::UnknownCheck(c.clone()));
            }
        }
        checks.sort();
        checks.dedup();
        let mut tolerances: BTreeMap<String, Tolerance> = CHECK_IDS
            .iter()
            .map(|c| (c.to_string(), default_tolerance(c)))
            .collect();
        for t in &cli.tol {
            let (name, value) = t.split_once('=').ok_or_else(|| {
                Error::Config(format!("tolerance `{t}` is not of the form name=value"))
            })?;
            let name = name.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("tolerance `{t}` has a non-numeric value")))?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("tolerance `{t}` must be positive")));
            }
            let entry = tolerances
                .get_mut(name)
                .ok_or_else(|| Error::UnknownCheck(name.to_string()))?;
            entry.accept = value;
            entry.reject = entry.reject.max(value);
        }
        Ok(RunConfig {
            source,
            checks,
            tolerances,
            seed: cli.seed,
            format: cli.format,
            out: cli.out.clone(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Verdict,
    /// Headline residual compared against the tolerance.
    pub value: Option<f64>,
    pub residuals: BTreeMap<String, f64>,
    pub worst_point: Option<Vec<f64>>,
    pub detail: Option<String>,
    pub tolerance: Tolerance,
}

impl CheckRecord {
    fn new(name: &str, tolerance: Tolerance) -> Self {
        CheckRecord {
            name: name.to_string(),
            verdict: Verdict::NotApplicable,
            value: None,
            residuals: BTreeMap::new(),
            worst_point: None,
            detail: None,
            tolerance,
        }
    }

    fn judge(&mut self, headline: &Residual) {
        let v = headline.value;
        self.value = Some(v);
        self.worst_point = headline.worst_point.clone();
        self.verdict = if v < self.tolerance.accept {
            Verdict::Pass
        } else if v > self.tolerance.reject {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        };
    }

    fn part(&mut self, name: &str, r: &Residual) {
        self.residuals.insert(name.to_string(), r.value);
    }
}

/// Runs one check on built data.
pub fn run_check(name: &str, built: &Built, tolerance: Tolerance) -> Result<CheckRecord> {
    if !CHECK_IDS.contains(&name) {
        return Err(Error::UnknownCheck(name.to_string()));
    }
    let mut rec = CheckRecord::new(name, tolerance);
    let data = &built.data;
    let samples = data.samples();
    let h = &built.h;
    // Mathematical preconditions that do not hold make a check not applicable;
    // other errors are failures.
    let outcome: Result<()> = (|| {
        match name {
            "axioms" => {
                let j = data.structure();
                let sq = j.square_residual(samples);
                let pr = j.pairing_residual(samples);
                rec.part("square", &sq);
                rec.part("pairing", &pr);
                rec.judge(&sq.max(pr));
            }
            "type" => {
                let types = data.structure().types(samples)?;
                let first = types[0];
                if types.iter().all(|&t| t == first) {
                    rec.verdict = Verdict::Pass;
                    rec.residuals.insert("type".into(), first as f64);
                    rec.detail = Some(format!("type {first} at all {} samples", types.len()));
                } else {
                    let mut seen: Vec<usize> = types.clone();
                    seen.sort();
                    seen.dedup();
                    rec.verdict = Verdict::Fail;
                    rec.detail = Some(format!("type varies over samples: {seen:?}"));
                }
            }
            "eigen" => {
                let e = data.eigen_residual();
                let one_one = data.one_one_residual();
                rec.part("eigenframes", &e);
                rec.part("one_one", &one_one);
                let mut total = e.max(one_one);
                if let Ok(l) = EigenframeL::from_bihermitian(data) {
                    let j = data.structure();
                    let le = l.eigen_residual(&j, samples);
                    let iso = l.isotropy_residual(samples);
                    rec.part("l_eigen", &le);
                    rec.part("l_isotropy", &iso);
                    total = total.max(le).max(iso);
                }
                rec.judge(&total);
            }
            "thm23" => {
                let r = data.residual_thm23(h)?;
                rec.part("plus", &r.plus);
                rec.part("minus", &r.minus);
                rec.judge(&r.max());
            }
            "direct" => {
                let l = EigenframeL::from_bihermitian(data)?;
                rec.judge(&integrability_residual_direct(&l, h, samples)?);
            }
            "remark1" => rec.judge(&data.remark1_check()),
            "commuting" => rec.judge(&data.lemma25_check()?),
            "commuting_integrability" => {
                let r = data.residual_cor26(h)?;
                rec.part("sum_plus", &r.sum_plus);
                rec.part("sum_minus", &r.sum_minus);
                rec.part("restriction", &r.restriction);
                rec.part("involutivity", &r.involutivity);
                rec.judge(&r.total());
            }
            "gk" => {
                let r = data.gk_check(h)?;
                rec.part("involutive_plus", &r.involutive_plus);
                rec.part("involutive_minus", &r.involutive_minus);
                rec.part("dc", &r.dc);
                rec.part("integrability_j1", &r.integrability_j1);
                rec.part("integrability_j2", &r.integrability_j2);
                rec.part("j2_square", &r.j2_square);
                rec.judge(&r.max());
            }
            "orientation" => {
                let r = data.lemma31_check()?;
                rec.residuals
                    .insert("commutator".into(), r.commutator.value);
                rec.detail = Some(format!(
                    "orientations ({:+}, {:+}), type one: {}",
                    r.orientation_plus, r.orientation_minus, r.type_one
                ));
                let v = if r.consistent { 0.0 } else { 1.0 };
                rec.judge(&Residual {
                    value: v,
                    worst_point: None,
                });
            }
            "gauduchon" => rec.judge(&gauduchon_residual(
                data.omega_plus(),
                data.j_plus(),
                samples,
            )),
            "foliation" => {
                let fol = built.foliation.as_ref().ok_or_else(|| Error::Hypothesis {
                    what: "structure comes from foliation data".into(),
                    residual: f64::NAN,
                })?;
                let inv = fol.involutivity_residual();
                let tr = fol.transverse_residual();
                rec.part("involutivity", &inv);
                rec.part("transverse", &tr);
                rec.judge(&inv.max(tr));
            }
            "twist" => {
                let twist = built.twist.as_ref().ok_or_else(|| Error::Hypothesis {
                    what: "twist built from foliation data".into(),
                    residual: f64::NAN,
                })?;
                rec.part("gauduchon", &twist.gauduchon);
                rec.part("dh", &twist.dh);
                rec.part("restriction", &twist.restriction);
                rec.part("delbar_agreement", &twist.delbar_agreement);
                rec.part("delbar_210", &twist.delbar_210);
                let end_to_end = data.residual_thm23(h)?.max();
                rec.part("integrability", &end_to_end);
                rec.judge(&twist.max().max(end_to_end));
            }
            _ => unreachable!("identifier checked above"),
        }
        Ok(())
    })();
    match outcome {
        Ok(()) => {}
        Err(Error::Hypothesis { what, residual }) => {
            rec.verdict = Verdict::NotApplicable;
            rec.detail = Some(if residual.is_nan() {
                format!("requires: {what}")
            } else {
                format!("requires: {what} (residual {residual:.3e})")
            });
        }
        Err(Error::Ambiguous(msg)) => {
            rec.verdict = Verdict::Inconclusive;
            rec.detail = Some(msg);
        }
        Err(e @ (Error::Unsupported(_) | Error::Degenerate(_) | Error::Validation { .. })) => {
            rec.verdict = Verdict::Fail;
            rec.detail = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(rec)
}

#[derive(Clone, Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: String,
    pub seed: u64,
    pub sample_points: usize,
    pub conventions: BTreeMap<&'static str, &'static str>,
    pub tolerances: BTreeMap<String, Tolerance>,
}

pub fn conventions() -> BTreeMap<&'static str, &'static str> {
    [
        ("fundamental_form", "ω(X, Y) = g(jX, Y)"),
        ("omega_inverse", "ω⁻¹ = −j g⁻¹, so ω⁻¹∘ω = 1 on vectors"),
        (
            "generalized_structure",
            "J = e^b [[½(j₊+j₋), −½(ω₊⁻¹−ω₋⁻¹)], [½(ω₊−ω₋), −½(j₊*+j₋*)]] e^−b",
        ),
        (
            "rotation",
            "+π/2 takes the first g-orthonormalised frame vector to the second",
        ),
        ("pairing", "⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))"),
        (
            "courant_bracket",
            "[X+ξ, Y+η]_H = [X,Y] + L_X η − i_Y dξ + i_Y i_X H",
        ),
        (
            "form_evaluation",
            "dθ_{i₁}∧…∧dθ_{i_k}(V₁,…,V_k) = det(V_b^{i_a})",
        ),
        (
            "type",
            "n/2 − rank(tangent projection of J on T*)/2, rank relative 1e-8",
        ),
        (
            "samples",
            "3⁴ grid on [0, 2π)⁴ plus 20 seeded uniform points",
        ),
    ]
    .into_iter()
    .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub not_applicable: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub checks_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub header: Header,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    /// Catalog expectations, when running a catalog entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<BTreeMap<String, Expectation>>,
    pub timing: Timing,
}

#[derive(Serialize)]
struct Body<'a> {
    schema_version: u32,
    header: &'a Header,
    checks: &'a [CheckRecord],
    summary: &'a Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected: &'a Option<BTreeMap<String, Expectation>>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    /// Everything except wall time; identical for identical inputs and seed.
    pub fn body_json(&self) -> String {
        let body = Body {
            schema_version: self.schema_version,
            header: &self.header,
            checks: &self.checks,
            summary: &self.summary,
            expected: &self.expected,
        };
        serde_json::to_string_pretty(&body).expect("report serialises")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let h = &self.header;
        let _ = writeln!(s, "{} {}  input: {}", h.tool, h.version, h.input);
        let _ = writeln!(s, "seed {}  samples {}", h.seed, h.sample_points);
        for (k, v) in &h.conventions {
            let _ = writeln!(s, "  {k}: {v}");
        }
        let _ = writeln!(s);
        for c in &self.checks {
            let value = match c.value {
                Some(v) => format!("{v:>10.3e}  (accept < {:.0e})", c.tolerance.accept),
                None => format!("{:>10}", "-"),
            };
            let _ = writeln!(s, "{:<24} {:<14} {value}", c.name, c.verdict.as_str());
            for (k, v) in &c.residuals {
                let _ = writeln!(s, "    {k:<18} {v:.3e}");
            }
            if let Some(d) = &c.detail {
                let _ = writeln!(s, "    {d}");
            }
            if let Some(p) = &c.worst_point {
                if c.verdict != Verdict::Pass {
                    let p: Vec<String> = p.iter().map(|x| format!("{x:.4}")).collect();
                    let _ = writeln!(s, "    worst at ({})", p.join(", "));
                }
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "\n{} passed, {} failed, {} inconclusive, {} not applicable; exit {}",
            m.passed, m.failed, m.inconclusive, m.not_applicable, m.exit_code
        );
        let _ = writeln!(s, "wall time {:.1} ms", self.timing.total_ms);
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

/// A loaded description with its report label and any catalog expectations.
pub struct Loaded {
    pub label: String,
    pub description: Description,
    pub expected: Option<BTreeMap<String, Expectation>>,
}

/// Loads the configured structure description.
pub fn load(source: &Source) -> Result<Loaded> {
    match source {
        Source::Catalog(name) => {
            let e = catalog::entry(name)?;
            let expected = e
                .expected
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect();
            Ok(Loaded {
                label: format!("catalog:{}", e.name),
                description: e.description,
                expected: Some(expected),
            })
        }
        Source::File(path) => {
            let text = std::fs::read_to_string(path)?;
            let (name, desc) = describe::parse_structure(&text)?;
            let label = name.unwrap_or_else(|| path.display().to_string());
            Ok(Loaded {
                label: format!("file:{label}"),
                description: desc,
                expected: None,
            })
        }
    }
}

/// Builds the structure and runs the configured checks.
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let Loaded {
        label: input,
        description: desc,
        expected,
    } = load(&config.source)?;
    let samples = SampleSet::standard(4, config.seed);
    let header = Header {
        tool: "gcverify",
        version: env!("CARGO_PKG_VERSION"),
        input,
        seed: config.seed,
        sample_points: samples.len(),
        conventions: conventions(),
        tolerances: config.tolerances.clone(),
    };
    let mut checks = Vec::new();
    let mut checks_ms = BTreeMap::new();
    let mut exit_code = 0;
    match desc.build(&samples) {
        Ok(built) => {
            let explicit = !config.checks.is_empty();
            let names: Vec<&str> = if explicit {
                config.checks.iter().map(String::as_str).collect()
            } else {
                CHECK_IDS.to_vec()
            };
            for name in names {
                let t0 = Instant::now();
                let rec = run_check(name, &built, config.tolerances[name])?;
                checks_ms.insert(name.to_string(), t0.elapsed().as_secs_f64() * 1e3);
                if rec.verdict == Verdict::NotApplicable && !explicit {
                    continue;
                }
                if rec.verdict != Verdict::Pass {
                    exit_code = 1;
                }
                checks.push(rec);
            }
        }
        Err(
            e @ (Error::Validation { .. }
            | Error::Degenerate(_)
            | Error::Unsupported(_)
            | Error::Hypothesis { .. }),
        ) => {
            // input rejected by construction-time validation
            let mut rec = CheckRecord::new(
                "construction",
                Tolerance {
                    accept: 0.0,
                    reject: 0.0,
                },
            );
            rec.verdict = Verdict::Fail;
            if let Error::Validation {
                residual, point, ..
            } = &e
            {
                rec.value = Some(*residual);
                rec.worst_point = Some(point.clone());
            }
            rec.detail = Some(e.to_string());
            checks.push(rec);
            exit_code = 1;
        }
        Err(e) => return Err(e),
    }
    let count = |v: Verdict| checks.iter().filter(|c| c.verdict == v).count();
    let summary = Summary {
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        inconclusive: count(Verdict::Inconclusive),
        not_applicable: count(Verdict::NotApplicable),
        exit_code,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        header,
        checks,
        summary,
        expected,
        timing: Timing {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
            checks_ms,
        },
    })
}

/// Full command-line behaviour; returns the process exit status.
pub fn main_with(cli: Cli) -> i32 {
    if cli.list {
        println!("catalog entries:");
        for n in catalog::names() {
            println!("  {n}");
        }
        println!("checks: {}", CHECK_IDS.join(", "));
        return 0;
    }
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if cli.export {
        return match load(&config.source).and_then(|loaded| {
            let label = &loaded.label;
            let name = label.split_once(':').map_or(label.as_str(), |(_, n)| n);
            describe::to_toml(name, &loaded.description)
        }) {
            Ok(text) => emit(&text, config.out.as_ref()).map_or(2, |_| 0),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        };
    }
    match run(&config) {
        Ok(report) => match emit(&report.render(config.format), config.out.as_ref()) {
            Ok(()) => report.exit_code(),
            Err(_) => 2,
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::result::Result<(), ()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| eprintln!("error: cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            let newline = if text.ends_with('\n') { "" } else { "\n" };
            // a closed pipe downstream is not an error worth reporting
            match write!(stdout, "{text}{newline}").and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write report: {e}");
                    Err(())
                }
                _ => Ok(()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("gcverify").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::from_cli(&cli(&[
            "--catalog",
            "flat_complex_t4",
            "--checks",
            "type,thm23"
        ]))
        .is_ok());
        assert!(matches!(
            RunConfig::from_cli(&cli(&[
                "--catalog",
                "flat_complex_t4",
                "--checks",
                "type,bogus"
            ])),
            Err(Error::UnknownCheck(_))
        ));
        assert!(RunConfig::from_cli(&cli(&["--catalog", "x", "--tol", "thm23=-1"])).is_err());
        assert!(RunConfig::from_cli(&cli(&["--catalog", "x", "--tol", "thm23"])).is_err());
        let c = RunConfig::from_cli(&cli(&["--catalog", "x", "--tol", "thm23=1e-5"])).unwrap();
        assert_eq!(c.tolerances["thm23"].accept, 1e-5);
        assert!(Cli::try_parse_from(["gcverify", "--catalog", "a", "--input", "b"]).is_err());
    }

    #[test]
    fn linear_foliation_run_passes() {
        let c = RunConfig::from_cli(&cli(&[
            "--catalog",
            "linear_foliation_t4",
            "--checks",
            "type,thm23,direct",
        ]))
        .unwrap();
        let r = run(&c).unwrap();
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.checks.len(), 3);
        assert_eq!(r.checks[2].residuals["type"], 1.0);
    }

    #[test]
    fn not_applicable_counts_only_when_requested() {
        let c = RunConfig::from_cli(&cli(&["--catalog", "flat_kahler_gk_t4"])).unwrap();
        let r = run(&c).unwrap();
        assert!(r.checks.iter().all(|c| c.verdict != Verdict::NotApplicable));
        let c = RunConfig::from_cli(&cli(&[
            "--catalog",
            "flat_kahler_gk_t4",
            "--checks",
            "commuting",
        ]))
        .unwrap();
        let r = run(&c).unwrap();
        assert_eq!(r.checks[0].verdict, Verdict::NotApplicable);
        assert_eq!(r.exit_code(), 1);
    }
}
