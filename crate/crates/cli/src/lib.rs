//! Benchmark runner for the legquad integrators: Lyness-Kaganove families,
//! the 25-function battery, the divergence sweep and the error-ratio probe,
//! reported as CSV or markdown tables.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use legquad::batch::map_indexed;
use legquad::testlib::{battery, divergence_draw, lk_draw, waldvogel_family_draw, LkFamily};
use legquad::{
    divergence_ratio_probe, int_naive, int_refined, int_simpson_baseline, EngineConfig, Integrand, NaiveConfig,
    QuadResult, RefinedConfig, SimpsonConfig, Status,
};

/// Evaluation budget of the divergence sweep.
pub const DIVERGENCE_BUDGET: usize = 10_000;
/// Evaluation cap of the Simpson baseline when no budget is given.
pub const SIMPSON_DEFAULT_BUDGET: usize = 100_000;
/// Family label of the `⌊e^x⌋` staircase rows in `lk` mode.
pub const WALDVOGEL_LABEL: &str = "waldvogel";

pub const CSV_HEADER: [&str; 9] = [
    "mode",
    "family",
    "algorithm",
    "tolerance",
    "correct",
    "incorrect",
    "warned",
    "mean_neval",
    "seed",
];
pub const PROBE_HEADER: [&str; 4] = ["mode", "alpha", "eps_ratio", "q_ratio"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Lk,
    Battery,
    Divergence,
    Probe,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lk => "lk",
            Mode::Battery => "battery",
            Mode::Divergence => "divergence",
            Mode::Probe => "probe",
        }
    }

    pub fn default_tolerances(self) -> Vec<f64> {
        match self {
            Mode::Lk | Mode::Battery => vec![1e-3, 1e-6],
            Mode::Divergence | Mode::Probe => vec![1e-3],
        }
    }
}

impl FromStr for Mode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lk" => Mode::Lk,
            "battery" => Mode::Battery,
            "divergence" => Mode::Divergence,
            "probe" => Mode::Probe,
            _ => bail!("unknown mode {s:?}"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Naive,
    Refined,
    Simpson,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::Refined, Algorithm::Simpson];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Refined => "refined",
            Algorithm::Simpson => "simpson",
        }
    }

    /// Parses `all` or a comma-separated list of algorithm names.
    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            match part {
                "all" => out.extend(Algorithm::ALL),
                "naive" => out.push(Algorithm::Naive),
                "refined" => out.push(Algorithm::Refined),
                "simpson" => out.push(Algorithm::Simpson),
                _ => bail!("unknown algorithm {part:?}"),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "csv" => Format::Csv,
            "md" | "markdown" => Format::Markdown,
            _ => bail!("unknown format {s:?}"),
        })
    }
}

/// Parses a comma-separated list of tolerances.
pub fn parse_tolerances(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad tolerance {t:?}")))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub mode: Mode,
    pub algorithms: Vec<Algorithm>,
    /// Relative tolerances.
    pub tolerances: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub format: Format,
    /// Evaluation budget per integration.
    pub budget: Option<usize>,
}

impl RunSpec {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            algorithms: Algorithm::ALL.to_vec(),
            tolerances: mode.default_tolerances(),
            realizations: 100,
            seed: 0,
            format: Format::Csv,
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            bail!("realizations must be at least 1");
        }
        if self.algorithms.is_empty() {
            bail!("no algorithms selected");
        }
        if self.tolerances.is_empty() {
            bail!("no tolerances given");
        }
        if let Some(t) = self.tolerances.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            bail!("tolerance {t} outside (0, 1)");
        }
        if self.budget == Some(0) {
            bail!("budget must be positive");
        }
        Ok(())
    }
}

/// Aggregated result of one table cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub mode: String,
    pub family: String,
    pub algorithm: String,
    pub tolerance: f64,
    pub correct: usize,
    pub incorrect: usize,
    /// Runs whose final error estimate exceeded the tolerance.
    pub warned_err: usize,
    /// Runs flagged as divergent.
    pub warned_div: usize,
    pub mean_neval: f64,
    pub seed: u64,
}

impl Row {
    pub fn fields(&self) -> [String; 9] {
        [
            self.mode.clone(),
            self.family.clone(),
            self.algorithm.clone(),
            format!("{:e}", self.tolerance),
            self.correct.to_string(),
            self.incorrect.to_string(),
            format!("{}/{}", self.warned_err, self.warned_div),
            format!("{:.2}", self.mean_neval),
            self.seed.to_string(),
        ]
    }

    pub fn from_fields(rec: &[&str]) -> Result<Row> {
        if rec.len() != CSV_HEADER.len() {
            bail!("expected {} fields, got {}", CSV_HEADER.len(), rec.len());
        }
        let (err, div) = rec[6].split_once('/').context("warned must be err/div")?;
        Ok(Row {
            mode: rec[0].to_string(),
            family: rec[1].to_string(),
            algorithm: rec[2].to_string(),
            tolerance: rec[3].parse()?,
            correct: rec[4].parse()?,
            incorrect: rec[5].parse()?,
            warned_err: err.parse()?,
            warned_div: div.parse()?,
            mean_neval: rec[7].parse()?,
            seed: rec[8].parse()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeRow {
    pub alpha: f64,
    pub eps_ratio: f64,
    pub q_ratio: f64,
}

impl ProbeRow {
    pub fn fields(&self) -> [String; 4] {
        [
            Mode::Probe.as_str().to_string(),
            format!("{:.1}", self.alpha),
            format!("{:.6}", self.eps_ratio),
            format!("{:.6}", self.q_ratio),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Table(Vec<Row>),
    Probe(Vec<ProbeRow>),
}

impl Report {
    pub fn header(&self) -> &'static [&'static str] {
        match self {
            Report::Table(_) => &CSV_HEADER,
            Report::Probe(_) => &PROBE_HEADER,
        }
    }

    pub fn records(&self) -> Vec<Vec<String>> {
        match self {
            Report::Table(rows) => rows.iter().map(|r| r.fields().to_vec()).collect(),
            Report::Probe(rows) => rows.iter().map(|r| r.fields().to_vec()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Report::Table(rows) => rows.is_empty(),
            Report::Probe(rows) => rows.is_empty(),
        }
    }
}

/// Outcome of one integration, before aggregation.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    correct: bool,
    status: Status,
    neval: usize,
}

fn integrate<F: Integrand + ?Sized>(
    alg: Algorithm,
    f: &F,
    (a, b): (f64, f64),
    tau: f64,
    budget: Option<usize>,
) -> Result<QuadResult> {
    let engine = EngineConfig {
        max_neval: budget,
        ..EngineConfig::default()
    };
    let r = match alg {
        Algorithm::Naive => int_naive(
            f,
            a,
            b,
            tau,
            &NaiveConfig {
                engine,
                ..NaiveConfig::default()
            },
        ),
        Algorithm::Refined => int_refined(
            f,
            a,
            b,
            tau,
            &RefinedConfig {
                engine,
                ..RefinedConfig::default()
            },
        ),
        Algorithm::Simpson => int_simpson_baseline(
            f,
            a,
            b,
            tau,
            &SimpsonConfig {
                max_neval: budget.unwrap_or(SIMPSON_DEFAULT_BUDGET).max(5),
                ..SimpsonConfig::default()
            },
        ),
    };
    Ok(r?)
}

/// Absolute tolerance for a relative request; zero references fall back to
/// the request itself.
pub fn absolute_tolerance(tau_rel: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        tau_rel
    } else {
        tau_rel * exact.abs()
    }
}

fn outcome(r: &QuadResult, exact: Option<f64>, tau_abs: f64) -> Outcome {
    Outcome {
        correct: exact.is_some_and(|e| r.q.is_finite() && (r.q - e).abs() <= tau_abs),
        status: r.status,
        neval: r.neval,
    }
}

fn aggregate(spec: &RunSpec, family: String, alg: Algorithm, tolerance: f64, outcomes: &[Outcome]) -> Row {
    let correct = outcomes.iter().filter(|o| o.correct).count();
    let total_neval: usize = outcomes.iter().map(|o| o.neval).sum();
    Row {
        mode: spec.mode.as_str().to_string(),
        family,
        algorithm: alg.as_str().to_string(),
        tolerance,
        correct,
        incorrect: outcomes.len() - correct,
        warned_err: outcomes.iter().filter(|o| o.status == Status::ToleranceNotMet).count(),
        warned_div: outcomes.iter().filter(|o| o.status == Status::Divergent).count(),
        mean_neval: total_neval as f64 / outcomes.len() as f64,
        seed: spec.seed,
    }
}

/// Lyness-Kaganove families (16)-(21) followed by the `⌊e^x⌋` staircase
/// family, each over `spec.realizations` seeded draws.
pub fn run_lk(spec: &RunSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &tol in &spec.tolerances {
        for fam in LkFamily::ALL {
            for &alg in &spec.algorithms {
                let outcomes = map_indexed(spec.realizations, |i| {
                    let p = lk_draw(fam, spec.seed, i as u64);
                    let exact = p.exact();
                    let tau = absolute_tolerance(tol, exact);
                    integrate(alg, &p, p.domain(), tau, spec.budget).map(|r| outcome(&r, Some(exact), tau))
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
                rows.push(aggregate(spec, fam.label(), alg, tol, &outcomes));
            }
        }
        for &alg in &spec.algorithms {
            let outcomes = map_indexed(spec.realizations, |i| {
                let p = waldvogel_family_draw(spec.seed, i as u64);
                let exact = p.exact();
                let tau = absolute_tolerance(tol, exact);
                integrate(alg, &p, p.domain(), tau, spec.budget).map(|r| outcome(&r, Some(exact), tau))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            rows.push(aggregate(spec, WALDVOGEL_LABEL.to_string(), alg, tol, &outcomes));
        }
    }
    Ok(rows)
}

/// One row per battery function, algorithm and tolerance; `correct` is 1 for
/// a successful run and `mean_neval` is that run's evaluation count.
pub fn run_battery(spec: &RunSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let functions = battery();
    let mut rows = Vec::new();
    for &tol in &spec.tolerances {
        for bf in &functions {
            let outcomes = map_indexed(spec.algorithms.len(), |k| {
                let tau = absolute_tolerance(tol, bf.reference);
                integrate(spec.algorithms[k], bf, (bf.a, bf.b), tau, spec.budget)
                    .map(|r| outcome(&r, Some(bf.reference), tau))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            for (&alg, o) in spec.algorithms.iter().zip(&outcomes) {
                rows.push(aggregate(spec, bf.label(), alg, tol, std::slice::from_ref(o)));
            }
        }
    }
    Ok(rows)
}

/// Exponents of the divergence sweep, -0.1 down to -2.0.
pub fn divergence_alphas() -> Vec<f64> {
    (1..=20).map(|k| -f64::from(k) / 10.0).collect()
}

/// `∫_0^1 |x - λ|^α dx` for each exponent of the sweep. Convergent cases use
/// the relative tolerance; divergent ones (`α ≤ -1`) use it as an absolute
/// tolerance. The evaluation budget defaults to [`DIVERGENCE_BUDGET`].
pub fn run_divergence(spec: &RunSpec) -> Result<Vec<Row>> {
    run_divergence_at(spec, &divergence_alphas())
}

pub fn run_divergence_at(spec: &RunSpec, alphas: &[f64]) -> Result<Vec<Row>> {
    spec.validate()?;
    let budget = Some(spec.budget.unwrap_or(DIVERGENCE_BUDGET));
    let mut rows = Vec::new();
    for &tol in &spec.tolerances {
        for &alpha in alphas {
            for &alg in &spec.algorithms {
                let outcomes = map_indexed(spec.realizations, |i| {
                    let p = divergence_draw(alpha, spec.seed, i as u64);
                    let exact = p.exact();
                    let tau = exact.map_or(tol, |e| absolute_tolerance(tol, e));
                    integrate(alg, &p, (0.0, 1.0), tau, budget).map(|r| outcome(&r, exact, tau))
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
                rows.push(aggregate(spec, format!("alpha={alpha:.1}"), alg, tol, &outcomes));
            }
        }
    }
    Ok(rows)
}

/// Error-estimate and integral ratios of `∫ x^α` over `[0, 1/2]` and `[0, 1]`
/// for the sweep's exponents.
pub fn run_probe() -> Vec<ProbeRow> {
    divergence_alphas()
        .into_iter()
        .map(|alpha| {
            let r = divergence_ratio_probe(alpha, 1.0);
            ProbeRow {
                alpha,
                eps_ratio: r.eps_ratio,
                q_ratio: r.q_ratio,
            }
        })
        .collect()
}

pub fn run(spec: &RunSpec) -> Result<Report> {
    Ok(match spec.mode {
        Mode::Lk => Report::Table(run_lk(spec)?),
        Mode::Battery => Report::Table(run_battery(spec)?),
        Mode::Divergence => Report::Table(run_divergence(spec)?),
        Mode::Probe => Report::Probe(run_probe()),
    })
}

pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    if report.is_empty() {
        bail!("no rows to report");
    }
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(report.header())?;
            for rec in report.records() {
                w.write_record(&rec)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?)
        }
        Format::Markdown => Ok(markdown(report.header(), &report.records())),
    }
}

fn markdown(header: &[&str], records: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for rec in records {
        for (w, cell) in widths.iter_mut().zip(rec) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let body: Vec<String> = cells.zip(&widths).map(|(c, w)| format!(" {c:<w$} ")).collect();
        format!("|{}|\n", body.join("|"))
    };
    let mut out = line(&mut header.iter().copied());
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(w + 2)).collect();
    out.push_str(&format!("|{}|\n", rule.join("|")));
    for rec in records {
        out.push_str(&line(&mut rec.iter().map(String::as_str)));
    }
    out
}

/// Parses CSV produced by [`emit_report`] for table modes.
pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        bail!("unexpected header {header:?}");
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Row::from_fields(&rec.iter().collect::<Vec<_>>())
        })
        .collect()
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
