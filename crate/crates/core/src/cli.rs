//! Command-line front end. `run` parses arguments, dispatches, writes the
//! output and returns the process exit status:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every check passed |
//! | 1 | a verification check failed |
//! | 2 | usage, config or input error |
//! | 3 | numerical or precision error |

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;
use serde_json::Value;

use crate::builtin;
use crate::error::{Error, Result};
use crate::families::{
    quasihomogeneous_generators, verify_hesse, verify_jseries, verify_kummer, verify_p123_veronese, verify_quasihomogeneous, verify_sklyanin,
};
use crate::json::{complex, value, Real};
use crate::lattice::{basis_classes, invariant_basis, parse_rational, validate, MorphismClass, TorusSpec};
use crate::report::{Check, Report};
use crate::ring::{find_relations, mirror_compose, standard_generators, FukayaRing, Generator};
use crate::theta::SeriesParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "torus-mirror", version, about = "Homogeneous coordinate rings of mirror tori from Fukaya-category data")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Spec file.
    #[arg(long, global = true, conflicts_with = "builtin")]
    spec: Option<PathBuf>,
    /// Built-in spec: hesse, sklyanin, quasihomogeneous, kummer-degenerate, kummer-generic.
    #[arg(long, global = true)]
    builtin: Option<String>,
    /// Absolute truncation tolerance of each theta series.
    #[arg(long, global = true, default_value_t = 1e-14)]
    tol: f64,
    /// Relative singular value threshold for relation discovery.
    #[arg(long, global = true, default_value_t = 1e-8)]
    svd_tol: f64,
    #[arg(long, global = true, default_value_t = 64)]
    max_radius: u32,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate the spec.
    Check,
    /// List the basis of Hom(L_0, L_k).
    Basis {
        #[arg(long)]
        k: u32,
        /// Orbit sums under the involution instead of classes.
        #[arg(long)]
        invariant: bool,
    },
    /// Product of two basis classes, e.g. `--left 1/3@1 --right 0@1`.
    Product {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        /// Also fit the mirror theta product and report the discrepancy.
        #[arg(long)]
        mirror: bool,
    },
    /// Relations among generators in one degree.
    Relations {
        #[arg(long)]
        degree: u32,
        /// Ordered words instead of commutative monomials.
        #[arg(long)]
        noncommutative: bool,
        #[arg(long, value_enum, default_value_t = GeneratorChoice::Auto)]
        generators: GeneratorChoice,
    },
    /// Run a family verification suite.
    Verify {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Shift of the sklyanin family.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        tau2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        tau3: Option<String>,
        /// Terms of the j-expansion run by `--family all`.
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// q-expansion of j through the sextic pipeline.
    Jseries {
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GeneratorChoice {
    /// Weighted X, Y, Z for the one-dimensional N = 1 ring, degree one otherwise.
    Auto,
    Standard,
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Hesse,
    Sklyanin,
    Quasihomogeneous,
    Veronese,
    Kummer,
    All,
}

enum Output {
    Reports(Vec<Report>),
    Table { json: Value, csv: Vec<Vec<String>>, ok: bool },
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("torus-mirror: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    let params = SeriesParams::new(g.tol, g.max_radius)?;
    if !(g.svd_tol > 0.0 && g.svd_tol < 1.0) {
        return Err(Error::Input(format!("--svd-tol must lie in (0, 1), got {}", g.svd_tol)));
    }
    if g.jobs == 0 {
        return Err(Error::Input("--jobs must be at least 1".into()));
    }
    let output = match &cli.command {
        Command::Check => check(&load_spec(g)?, &params, g.svd_tol),
        Command::Basis { k, invariant } => basis(&load_spec(g)?, *k, *invariant)?,
        Command::Product { left, right, mirror } => product(&load_spec(g)?, params, left, right, *mirror)?,
        Command::Relations { degree, noncommutative, generators } => {
            relations(load_spec(g)?, params, g, *degree, !noncommutative, *generators)?
        }
        Command::Verify { family, tau, b, tau2, tau3, terms } => {
            let jobs = verify_jobs(*family, tau.as_deref(), *b, tau2.as_deref(), tau3.as_deref(), *terms)?;
            Output::Reports(run_jobs(jobs, &params, g.svd_tol, g.jobs)?)
        }
        Command::Jseries { terms } => Output::Reports(vec![verify_jseries(*terms, &params)?]),
    };
    emit(&output, g)
}

fn load_spec(g: &Global) -> Result<TorusSpec> {
    match (&g.spec, &g.builtin) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {}: {e}", path.display())))?;
            text.parse()
        }
        (None, Some(name)) => builtin::builtin(name),
        (None, None) => Err(Error::Input("this command needs --spec FILE or --builtin NAME".into())),
    }
}

fn check(spec: &TorusSpec, params: &SeriesParams, svd_tol: f64) -> Output {
    let report = validate(spec);
    let mut out = Report::new("check", params, svd_tol).for_spec(spec);
    out.input("spec", spec.to_config_string());
    out.observe("exact", report.exact);
    for c in &report.conditions {
        out.push(Check {
            id: c.id.to_string(),
            lhs: value(&c.detail),
            rhs: value(if c.advisory { "advisory" } else { "required" }),
            residual: Real(if c.passed { 0.0 } else { 1.0 }),
            tolerance: Real(0.0),
            pass: c.passed || c.advisory,
        });
    }
    Output::Reports(vec![out])
}

fn class_label(c: &MorphismClass) -> String {
    c.coords().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

fn basis(spec: &TorusSpec, k: u32, invariant: bool) -> Result<Output> {
    #[derive(Serialize)]
    struct Row {
        index: usize,
        class: String,
        members: Vec<String>,
    }
    let rows: Vec<Row> = if invariant {
        if !spec.involution() {
            return Err(Error::Input("--invariant needs a spec with the involution on".into()));
        }
        invariant_basis(spec, k)?
            .iter()
            .enumerate()
            .map(|(index, o)| Row { index, class: class_label(&o.representative), members: o.members.iter().map(class_label).collect() })
            .collect()
    } else {
        basis_classes(spec, k)?
            .iter()
            .enumerate()
            .map(|(index, c)| Row { index, class: class_label(c), members: vec![class_label(c)] })
            .collect()
    };
    let csv = std::iter::once(vec!["index".to_string(), "class".into(), "members".into()])
        .chain(rows.iter().map(|r| vec![r.index.to_string(), r.class.clone(), r.members.join(" ")]))
        .collect();
    let json = serde_json::json!({
        "spec_hash": spec.fingerprint(),
        "level": k,
        "invariant": invariant,
        "dimension": rows.len(),
        "rows": value(&rows),
    });
    Ok(Output::Table { json, csv, ok: true })
}

/// `a/b,c@k`, optionally bracketed: `[1/2,0]@1`.
fn parse_class(spec: &TorusSpec, text: &str) -> Result<MorphismClass> {
    let bad = || Error::Input(format!("class '{text}' is not of the form c1,...,cn@k"));
    let (coords, level) = text.trim().rsplit_once('@').ok_or_else(bad)?;
    let level: u32 = level.trim().parse().map_err(|_| bad())?;
    let coords = coords.trim().trim_start_matches('[').trim_end_matches(']');
    let coords = coords
        .split(',')
        .map(|t| {
            let r = parse_rational(t)?;
            let num = i64::try_from(r.numer()).map_err(|_| bad())?;
            let den = i64::try_from(r.denom()).map_err(|_| bad())?;
            Ok(Rational64::new(num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    MorphismClass::new(spec, level, coords)
}

fn product(spec: &TorusSpec, params: SeriesParams, left: &str, right: &str, mirror: bool) -> Result<Output> {
    let a = parse_class(spec, left)?;
    let c = parse_class(spec, right)?;
    let ring = FukayaRing::new(spec.clone(), params)?;
    let x = ring.compose(&ring.class_element(&a)?, &ring.class_element(&c)?)?;
    let x = ring.to_classes(&x)?;
    let classes = ring.classes(x.level())?;
    #[derive(Serialize)]
    struct Term {
        class: String,
        coefficient: [Real; 2],
    }
    let terms: Vec<Term> = x
        .coeffs()
        .iter()
        .zip(&classes)
        .filter(|(z, _)| z.norm() > 0.0)
        .map(|(z, cl)| Term { class: class_label(cl), coefficient: complex(*z) })
        .collect();
    let mut json = serde_json::json!({
        "spec_hash": spec.fingerprint(),
        "left": a.to_string(),
        "right": c.to_string(),
        "level": x.level(),
        "terms": value(&terms),
    });
    let mut csv: Vec<Vec<String>> = vec![vec!["class".into(), "re".into(), "im".into()]];
    csv.extend(terms.iter().map(|t| vec![t.class.clone(), format!("{:.16e}", t.coefficient[0].0), format!("{:.16e}", t.coefficient[1].0)]));
    if mirror {
        let m = mirror_compose(&ring, &a, &c)?;
        let diff = ring.to_classes(&m.element)?.sub(&x)?.max_abs();
        json["mirror"] = serde_json::json!({ "fit_residual": value(Real(m.residual)), "max_difference": value(Real(diff)) });
    }
    Ok(Output::Table { json, csv, ok: true })
}

fn relations(spec: TorusSpec, params: SeriesParams, g: &Global, degree: u32, commutative: bool, choice: GeneratorChoice) -> Result<Output> {
    let weighted_default = spec.dim() == 1 && spec.monodromy()[(0, 0)] == 1 && !spec.involution();
    let ring = FukayaRing::new(spec, params)?.with_jobs(g.jobs);
    let generators: Vec<Generator> = match choice {
        GeneratorChoice::Weighted => quasihomogeneous_generators(&ring)?,
        GeneratorChoice::Auto if weighted_default => quasihomogeneous_generators(&ring)?,
        _ => standard_generators(&ring)?,
    };
    let set = find_relations(&ring, degree, &generators, commutative, g.svd_tol)?;
    let mut json = set.to_json();
    json["spec_hash"] = Value::String(ring.spec().fingerprint());
    let mut buf = Vec::new();
    set.write_csv(&mut buf)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(buf.as_slice());
    let csv = reader.records().filter_map(|r| r.ok()).map(|r| r.iter().map(str::to_string).collect()).collect();
    Ok(Output::Table { json, csv, ok: true })
}

/// `a+bi`, `bi`, `a`, `i`, `-i`, with optional spaces.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Input(format!("'{text}' is not a complex number of the form a+bi"));
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(num(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => num(t)?,
    };
    let re = if re.is_empty() { 0.0 } else { num(re)? };
    let z = Complex64::new(re, im);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

#[derive(Clone, Debug)]
enum Job {
    Hesse(Complex64),
    Sklyanin(Complex64, f64),
    Quasihomogeneous(Complex64),
    Veronese(Complex64),
    Kummer(&'static str, [Complex64; 3]),
    Jseries(usize),
}

impl Job {
    fn name(&self) -> &str {
        match self {
            Job::Hesse(_) => "hesse",
            Job::Sklyanin(..) => "sklyanin",
            Job::Quasihomogeneous(_) => "quasihomogeneous",
            Job::Veronese(_) => "veronese",
            Job::Kummer(name, _) => name,
            Job::Jseries(_) => "jseries",
        }
    }

    fn run(&self, params: &SeriesParams, svd_tol: f64) -> Result<Report> {
        let mut report = match self {
            Job::Hesse(t) => verify_hesse(*t, svd_tol, params)?,
            Job::Sklyanin(t, b) => verify_sklyanin(*t, *b, svd_tol, params)?,
            Job::Quasihomogeneous(t) => verify_quasihomogeneous(*t, svd_tol, params)?,
            Job::Veronese(t) => verify_p123_veronese(*t, params)?,
            Job::Kummer(_, [t1, t2, t3]) => verify_kummer(*t1, *t2, *t3, svd_tol, params)?,
            Job::Jseries(n) => verify_jseries(*n, params)?,
        };
        report.name = self.name().to_string();
        Ok(report)
    }
}

fn verify_jobs(family: Family, tau: Option<&str>, b: Option<f64>, tau2: Option<&str>, tau3: Option<&str>, terms: usize) -> Result<Vec<Job>> {
    let i = Complex64::new(0.0, 1.0);
    let tau = tau.map(parse_complex).transpose()?;
    let tau2 = tau2.map(parse_complex).transpose()?;
    let tau3 = tau3.map(parse_complex).transpose()?;
    let t = tau.unwrap_or(i);
    let kummer_generic = [t, tau2.unwrap_or(Complex64::new(0.0, 1.3)), tau3.unwrap_or(Complex64::new(0.0, 0.1))];
    Ok(match family {
        Family::Hesse => vec![Job::Hesse(t)],
        Family::Sklyanin => vec![Job::Sklyanin(t, b.unwrap_or(0.3))],
        Family::Quasihomogeneous => vec![Job::Quasihomogeneous(t)],
        Family::Veronese => vec![Job::Veronese(t)],
        Family::Kummer => vec![Job::Kummer("kummer", kummer_generic)],
        Family::All => vec![
            Job::Hesse(t),
            Job::Sklyanin(t, b.unwrap_or(0.3)),
            Job::Quasihomogeneous(t),
            Job::Veronese(t),
            Job::Kummer("kummer-degenerate", [t, t, Complex64::new(0.0, 0.0)]),
            Job::Kummer("kummer-generic", kummer_generic),
            Job::Jseries(terms),
        ],
    })
}

/// Runs the jobs on up to `workers` threads; reports come back sorted by name.
fn run_jobs(jobs: Vec<Job>, params: &SeriesParams, svd_tol: f64, workers: usize) -> Result<Vec<Report>> {
    let workers = workers.min(jobs.len()).max(1);
    let mut results: Vec<(String, Result<Report>)> = if workers == 1 {
        jobs.iter().map(|j| (j.name().to_string(), j.run(params, svd_tol))).collect()
    } else {
        let chunks: Vec<Vec<Job>> = (0..workers).map(|w| jobs.iter().skip(w).step_by(workers).cloned().collect()).collect();
        thread::scope(|s| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| s.spawn(move || chunk.iter().map(|j| (j.name().to_string(), j.run(params, svd_tol))).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("verification thread panicked")).collect()
        })
    };
    results.sort_by(|a, b| a.0.cmp(&b.0));
    results.into_iter().map(|(_, r)| r).collect()
}

fn emit(output: &Output, g: &Global) -> Result<i32> {
    let (bytes, ok) = match output {
        Output::Reports(reports) => {
            let ok = reports.iter().all(Report::passed);
            for r in reports {
                for f in r.failures() {
                    eprintln!("FAIL {}/{}: residual {:e} > {:e}", r.name, f.id, f.residual.0, f.tolerance.0);
                }
            }
            let bytes = match g.format {
                Format::Json => {
                    let mut s = if reports.len() == 1 {
                        reports[0].to_json_string()
                    } else {
                        serde_json::to_string_pretty(reports).expect("reports serialize")
                    };
                    s.push('\n');
                    s.into_bytes()
                }
                Format::Csv => {
                    let mut buf = Vec::new();
                    Report::write_csv(reports, &mut buf)?;
                    buf
                }
            };
            (bytes, ok)
        }
        Output::Table { json, csv, ok } => {
            let bytes = match g.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(json).expect("json serializes");
                    s.push('\n');
                    s.into_bytes()
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in csv {
                        w.write_record(row).map_err(|e| Error::Input(format!("writing CSV: {e}")))?;
                    }
                    w.into_inner().map_err(|e| Error::Input(format!("writing CSV: {e}")))?
                }
            };
            (bytes, *ok)
        }
    };
    match &g.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| Error::Input(format!("writing {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes).map_err(|e| Error::Input(format!("writing output: {e}")))?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}
