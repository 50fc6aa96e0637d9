//! `descent`: command-line front end for the descent spectral sequence toolkit.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails or the
//! hypothesis is not certified, 2 on an input error, 3 when the model's
//! truncation is too small for the requested window.

mod input;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use descent_core::bar::bar_vanishing_check;
use descent_core::complexes::{ss_pages, TrustedWindow};
use descent_core::cosimplicial::dold_kan_roundtrip;
use descent_core::descent::{abutment_check, kunneth_dim_check, uct_verify, vanishing_report, Coefficients, DescentOptions};
use descent_core::linalg::{CoefficientRing, FgAbelianGroup};
use descent_core::sset::{builtin, builtin_names, cohomology_with_coeffs, cohomology_with_ring, sset_to_value};
use descent_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "descent", version, about = "Descent spectral sequences of finite simplicial sets, computed exactly")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct BundleArgs {
    /// Fiber of a trivial bundle: a builtin name or a simplicial-set JSON file.
    #[arg(long)]
    fiber: Option<String>,
    /// Base of a trivial bundle (default: point).
    #[arg(long, requires = "fiber")]
    base: Option<String>,
    /// Bundle or simplicial map JSON file.
    #[arg(long, conflicts_with_all = ["fiber", "base"])]
    bundle: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology of a simplicial set.
    Cohomology {
        /// Builtin name or simplicial-set JSON file.
        #[arg(long)]
        space: String,
        /// Z, Q, F<p>, Z/<m> or a sum such as Z^2+Z/2.
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// E1, E2 and normalization tables with the vanishing verdicts below q < pk.
    Descent {
        #[command(flatten)]
        input: BundleArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        qmax: usize,
        #[arg(long, default_value = "Z")]
        coeff: String,
        /// Also run the page engine and compare with the cohomology of the base (field coefficients).
        #[arg(long)]
        abutment: bool,
        /// Treat an uncertified hypothesis as an error.
        #[arg(long)]
        require_certification: bool,
    },
    /// Vanishing of the normalized bar-type cosimplicial module of a graded algebra.
    Bar {
        /// ground, dual-numbers-deg1, dual-numbers-deg2, or a graded-algebra JSON file.
        #[arg(long)]
        algebra: String,
        /// Ground field for the builtin algebras.
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        mmax: usize,
    },
    /// Universal coefficient bookkeeping for both index conventions.
    Uct {
        #[arg(long)]
        space: String,
        /// A finitely generated abelian group such as Z/2 or Z^2+Z/2.
        #[arg(long)]
        coeff: String,
    },
    /// dim H^m(S^(n+1); K) against the composition count of H^*(S; K).
    Kunneth {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        mmax: usize,
        /// Graded-algebra JSON for H^*(S; K), compared through its bar construction.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Spectral sequence pages of a double complex, or of the nerve of a bundle.
    SsPages {
        /// Double-complex JSON file.
        #[arg(long, conflicts_with_all = ["fiber", "base", "bundle"])]
        complex: Option<String>,
        #[command(flatten)]
        input: BundleArgs,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        #[arg(long, default_value_t = 2)]
        qmax: usize,
        /// Last page computed for a double complex (default: columns + 1).
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// N(Gamma(C)) against C for a cochain complex given as JSON.
    DkRoundtrip {
        #[arg(long)]
        complex: String,
    },
    /// Builtin corpus: list the names, or print one entry as JSON.
    Corpus {
        name: Option<String>,
    },
}

/// What a subcommand produced: the JSON body, its table rendering, and
/// the diagnostic when a check failed.
struct Outcome {
    json: Value,
    table: String,
    failure: Option<String>,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, table: String, failure: Option<String>) -> Self {
        Self { json: serde_json::to_value(report).expect("reports serialize"), table, failure }
    }
}

fn ring(s: &str) -> Result<CoefficientRing, Error> {
    CoefficientRing::parse(s)
}

fn field(s: &str) -> Result<CoefficientRing, Error> {
    let f = ring(s)?;
    if f.is_field() {
        Ok(f)
    } else {
        Err(Error::FieldRequired)
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::Cohomology { space, coeff } => {
            let s = input::space(&space)?;
            let c = Coefficients::parse(&coeff)?;
            let groups = match &c {
                Coefficients::Ring(r) => cohomology_with_ring(&s, *r)?,
                Coefficients::Group(g) => cohomology_with_coeffs(&s, g)?,
            };
            let table = render::cohomology(&space, &c.label(), &groups);
            let body = json!({ "space": space, "coefficients": c.label(), "complete": s.is_complete(), "groups": groups });
            Ok(Outcome::new(&body, table, None))
        }
        Command::Descent { input, k, pmax, qmax, coeff, abutment, require_certification } => {
            let bundle = input::bundle(input.bundle.as_deref(), input.fiber.as_deref(), input.base.as_deref())?;
            let coeffs = Coefficients::parse(&coeff)?;
            let mut opts = DescentOptions::new(k, pmax, qmax);
            opts.abutment = abutment;
            opts.require_certification = require_certification;
            let r = vanishing_report(&bundle, &coeffs, &opts)?;
            let failure = if r.passed() {
                None
            } else if !r.certification.certified {
                Some(format!("hypothesis not certified: {}", r.certification.reason.clone().unwrap_or_default()))
            } else if let Some((p, q)) = r.failing_cells().first() {
                Some(format!("vanishing fails at (p, q) = ({p}, {q})"))
            } else if let Some(i) = r.inconsistencies.first() {
                Some(format!("inconsistent tables: {i}"))
            } else {
                Some("abutment comparison failed".into())
            };
            Ok(Outcome::new(&r, r.to_table(), failure))
        }
        Command::Bar { algebra, field: f, k, nmax, mmax } => {
            let r = input::algebra(&algebra, field(&f)?)?;
            let report = bar_vanishing_check(&r, k, nmax, mmax)?;
            let failure = if let Some((n, m)) = report.failures.first() {
                Some(format!("N^{n} C^(*{m}) is nonzero below the line m < kn"))
            } else if report.kernel_dims != report.formula_dims {
                Some(format!("dim N^n = {:?} but the formula gives {:?}", report.kernel_dims, report.formula_dims))
            } else {
                None
            };
            Ok(Outcome::new(&report, render::bar(&report, failure.is_none()), failure))
        }
        Command::Uct { space, coeff } => {
            let s = input::space(&space)?;
            let a = FgAbelianGroup::parse(&coeff)?;
            let r = uct_verify(&s, &a)?;
            let failure = r
                .degrees
                .iter()
                .find(|d| !d.upper_balances)
                .map(|d| format!("the sequence with Tor(H^(i+1)) does not balance at i = {}", d.i));
            Ok(Outcome::new(&r, render::uct(&space, &r), failure))
        }
        Command::Kunneth { space, field: f, nmax, mmax, algebra } => {
            let s = input::space(&space)?;
            let f = field(&f)?;
            let alg = algebra.map(|a| input::algebra(&a, f)).transpose()?;
            let r = kunneth_dim_check(&s, f, nmax, mmax, alg.as_ref())?;
            let failure = r.cells.iter().find(|c| !c.agrees).map(|c| format!("dimensions disagree at (n, m) = ({}, {})", c.n, c.m));
            Ok(Outcome::new(&r, render::kunneth(&space, &r), failure))
        }
        Command::SsPages { complex, input, field: f, pmax, qmax, rmax } => match complex {
            Some(path) => {
                let dc = input::double_complex(&path)?;
                let pages = ss_pages(&dc, rmax.unwrap_or(dc.p_max() + 2), TrustedWindow::exact())?;
                Ok(Outcome::new(&pages, render::pages(&pages), None))
            }
            None => {
                let bundle = input::bundle(input.bundle.as_deref(), input.fiber.as_deref(), input.base.as_deref())?;
                let truncation = qmax + 1;
                let nerve = bundle.nerve(pmax, truncation)?;
                let a = abutment_check(&nerve, field(&f)?, pmax.min(truncation))?;
                let failure = (!a.passed()).then(|| {
                    format!("E_inf totals {:?} differ from H^*(base) {:?} or E2 disagrees", a.e_infinity_totals, a.base_cohomology)
                });
                Ok(Outcome::new(&a, render::abutment(&a), failure))
            }
        },
        Command::DkRoundtrip { complex } => {
            let c = input::complex(&complex)?;
            let r = dold_kan_roundtrip(&c)?;
            let failure = r.degrees.iter().find(|d| !d.passed()).map(|d| format!("round trip fails in degree {}", d.n));
            let failure = failure.or_else(|| (!r.cosimplicial_identities).then(|| "Gamma(C) violates a cosimplicial identity".into()));
            Ok(Outcome::new(&r, render::dold_kan(&r), failure))
        }
        Command::Corpus { name } => match name {
            None => {
                let body = json!({ "simplicial_sets": builtin_names(), "algebras": input::ALGEBRA_NAMES });
                let table = format!(
                    "simplicial sets: {}\nalgebras: {}\n",
                    builtin_names().join(", "),
                    input::ALGEBRA_NAMES.join(", ")
                );
                Ok(Outcome::new(&body, table, None))
            }
            Some(n) => {
                let value = sset_to_value(&builtin(&n)?);
                let table = serde_json::to_string_pretty(&value).expect("json") + "\n";
                Ok(Outcome { json: value, table, failure: None })
            }
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TruncationExceeded { .. } => 3,
        Error::HypothesisViolated(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_corpus = matches!(cli.command, Command::Corpus { .. });
    match run(cli.command) {
        Ok(out) => {
            let text = match cli.format {
                Format::Table => out.table.clone(),
                Format::Json if is_corpus => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Json => {
                    let body = json!({ "passed": out.failure.is_none(), "diagnostic": out.failure, "report": out.json });
                    format!("{}\n", serde_json::to_string_pretty(&body).expect("json"))
                }
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush());
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
