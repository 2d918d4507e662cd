//! The `gentorsion` command line.
//!
//! Exit codes: 0 success or verified, 1 not found, 2 usage or parse error,
//! 3 inconclusive, 4 refuted.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::alexander::{
    alexander_polynomial, orderability_from, positive_real_roots, AlexanderError,
    LaurentPolynomial, OrderabilityReport, Verdict,
};
use crate::presentations::{catalog, torus_group, Presentation, CATALOG_NAMES};
use crate::torsion::{
    builtin_certificates, candidate_bases, search, verify_with, SearchBounds, SearchOutcome,
    TorsionCertificate, VerifyError,
};
use crate::word_problem::{Budget, CompletionLimits, TriState, WordOracle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_REFUTED: i32 = 4;

/// Environment variable naming the fixture directory.
pub const FIXTURES_ENV: &str = "GENTORSION_FIXTURES";

#[derive(Parser, Debug)]
#[command(
    name = "gentorsion",
    version,
    about = "Generalized torsion certificates for knot groups"
)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized search order.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for search.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Rule cap for Knuth-Bendix completion.
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    max_rules: u64,
    /// Relator insertions tried by the fallback triviality search.
    #[arg(long, global = true, default_value_t = 6)]
    insertion_depth: usize,
    /// Words expanded by the fallback triviality search.
    #[arg(long, global = true, default_value_t = 2000)]
    insertion_nodes: usize,
    /// Largest symmetric group tried for nontriviality witnesses.
    #[arg(long, global = true, default_value_t = 7, value_parser = clap::value_parser!(u64).range(2..=9))]
    quotient_degree: u64,
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
struct Source {
    /// Catalog entry (klein, 3_1, 4_1, 5_1, 5_2).
    #[arg(long)]
    catalog: Option<String>,
    /// File holding a presentation such as `<a,b | bbAAbbaBBBa>`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Inline presentation.
    #[arg(long)]
    presentation: Option<String>,
    /// Torus group `<x,y | x^p = y^q>` given as `p,q`.
    #[arg(long, value_name = "P,Q")]
    torus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show a catalog presentation, or list the catalog.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Decide whether a word is trivial.
    Wp {
        #[command(flatten)]
        source: Source,
        word: String,
    },
    /// Verify a certificate file (or a built-in name from the fixture directory).
    Verify { certificate: String },
    /// Search for a certificate.
    Search {
        #[command(flatten)]
        source: Source,
        /// Base element.
        #[arg(long, conflicts_with = "auto")]
        base: Option<String>,
        /// Try every candidate commutator base.
        #[arg(long)]
        auto: bool,
        #[arg(long, default_value_t = 4)]
        max_conj: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_closure: usize,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        /// Also write the certificate here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Alexander polynomial, real roots and bi-orderability criteria.
    Alex {
        #[command(flatten)]
        source: Source,
        /// Use this polynomial instead of computing one.
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        fibred: Option<bool>,
        /// Treat the presentation as a special one-relator presentation.
        #[arg(long)]
        one_relator: bool,
    },
    /// Built-in certificate fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand, Debug)]
enum FixturesAction {
    /// Write every built-in certificate as JSON.
    Export {
        /// Target directory; defaults to $GENTORSION_FIXTURES or ./fixtures.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// List built-in certificate names.
    List,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Fixture directory: `$GENTORSION_FIXTURES`, else `./fixtures`.
pub fn fixtures_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures"))
}

pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run<I: IntoIterator<Item = OsString>>(
    args: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (result, stdout_buf, stderr_buf) = pool.install(|| {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let r = dispatch(&cli, &mut o, &mut e);
        (r, o, e)
    });
    let _ = out.write_all(&stdout_buf);
    let _ = err.write_all(&stderr_buf);
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    Budget {
        completion: CompletionLimits {
            max_rules: cli.budget.max_rules as usize,
            ..CompletionLimits::default()
        },
        insertion_depth: cli.budget.insertion_depth,
        insertion_nodes: cli.budget.insertion_nodes,
        quotient_degree: cli.budget.quotient_degree as usize,
        seed: cli.seed,
    }
}

fn load_presentation(src: &Source) -> Result<Presentation, Failure> {
    match (&src.catalog, &src.file, &src.presentation, &src.torus) {
        (Some(name), None, None, None) => catalog(name).map_err(|e| Failure::usage(e.to_string())),
        (None, Some(path), None, None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            Presentation::parse(text.trim()).map_err(|e| Failure::usage(e.to_string()))
        }
        (None, None, Some(text), None) => {
            Presentation::parse(text).map_err(|e| Failure::usage(e.to_string()))
        }
        (None, None, None, Some(pq)) => {
            let parts: Vec<&str> = pq.split(',').map(str::trim).collect();
            let parsed: Option<Vec<i64>> = parts.iter().map(|p| p.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[p, q]) => torus_group(p, q).map_err(|e| Failure::usage(e.to_string())),
                _ => Err(Failure::usage(format!("--torus expects P,Q, got {pq:?}"))),
            }
        }
        _ => Err(Failure::usage(
            "give exactly one of --catalog, --file, --presentation, --torus",
        )),
    }
}

fn has_source(src: &Source) -> bool {
    src.catalog.is_some() || src.file.is_some() || src.presentation.is_some() || src.torus.is_some()
}

fn emit(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    writeln!(out, "{text}").map_err(io_failure)
}

fn io_failure(e: io::Error) -> Failure {
    Failure::usage(format!("write failed: {e}"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::Catalog { name, list } => cmd_catalog(cli, name.as_deref(), *list, out),
        Command::Wp { source, word } => cmd_wp(cli, source, word, out),
        Command::Verify { certificate } => cmd_verify(cli, certificate, out),
        Command::Search {
            source,
            base,
            auto,
            max_conj,
            max_closure,
            max_depth,
            output,
        } => {
            let bounds = SearchBounds {
                max_conj_len: *max_conj,
                max_closure: *max_closure,
                max_depth: *max_depth,
            };
            cmd_search(
                cli,
                source,
                base.as_deref(),
                *auto,
                bounds,
                output.as_deref(),
                out,
                err,
            )
        }
        Command::Alex {
            source,
            poly,
            fibred,
            one_relator,
        } => cmd_alex(cli, source, poly.as_deref(), *fibred, *one_relator, out),
        Command::Fixtures { action } => cmd_fixtures(cli, action, out),
    }
}

fn cmd_catalog(cli: &Cli, name: Option<&str>, list: bool, out: &mut dyn Write) -> Outcome {
    match (name, list) {
        (None, true) => {
            let entries: Vec<Presentation> = CATALOG_NAMES
                .iter()
                .map(|n| catalog(n).expect("listed"))
                .collect();
            if cli.json {
                let v: Vec<_> = entries.iter().map(|p| p.to_json()).collect();
                emit(
                    out,
                    &json!({ "entries": v, "torus_family": "--torus P,Q gives <x,y | x^P = y^Q>" }),
                )?;
            } else {
                for p in &entries {
                    writeln!(out, "{:<6} {}", p.name(), p.render()).map_err(io_failure)?;
                }
                writeln!(out, "torus groups: --torus P,Q gives <x,y | x^P = y^Q>")
                    .map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        (Some(n), false) => {
            let p = catalog(n).map_err(|e| Failure::usage(e.to_string()))?;
            if cli.json {
                emit(out, &serde_json::to_value(p.to_json()).expect("serializes"))?;
            } else {
                writeln!(out, "{}: {}", p.name(), p.render()).map_err(io_failure)?;
                let meta = &p.meta;
                if let Some(f) = meta.fibred {
                    writeln!(out, "  fibred: {f}").map_err(io_failure)?;
                }
                if let Some(m) = &meta.meridian {
                    writeln!(out, "  meridian: {}", p.render_word(m)).map_err(io_failure)?;
                }
                if meta.special_one_relator {
                    writeln!(out, "  special one-relator presentation").map_err(io_failure)?;
                }
                let ab = p.abelianization();
                if let Some(w) = &ab.weights {
                    writeln!(out, "  abelianization weights: {w:?}").map_err(io_failure)?;
                }
            }
            Ok(EXIT_OK)
        }
        _ => Err(Failure::usage("give a catalog name or --list")),
    }
}

fn cmd_wp(cli: &Cli, source: &Source, word: &str, out: &mut dyn Write) -> Outcome {
    let p = load_presentation(source)?;
    let w = p
        .parse_word(word)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let oracle = WordOracle::new(&p, budget(cli));
    let verdict = oracle.is_trivial(&w);
    if cli.json {
        emit(
            out,
            &json!({
                "presentation": p.render(),
                "word": p.render_word(&w),
                "result": verdict,
            }),
        )?;
    } else {
        let detail = match &verdict {
            TriState::Trivial(proof) => {
                serde_json::to_value(proof).expect("serializes")["method"].to_string()
            }
            TriState::NonTrivial(wit) => {
                serde_json::to_value(wit).expect("serializes")["method"].to_string()
            }
            TriState::Unknown { .. } => "budget exhausted".into(),
        };
        writeln!(out, "{} ({})", verdict.label(), detail.trim_matches('"')).map_err(io_failure)?;
    }
    Ok(match verdict {
        TriState::Unknown { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    })
}

fn read_certificate(spec: &str) -> Result<TorsionCertificate, Failure> {
    let direct = Path::new(spec);
    let path = if direct.exists() {
        direct.to_path_buf()
    } else {
        let candidate = fixtures_dir().join(format!("{spec}.json"));
        if candidate.exists() {
            candidate
        } else {
            return Err(Failure::usage(format!("no certificate file {spec:?}")));
        }
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    TorsionCertificate::from_json_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_verify(cli: &Cli, spec: &str, out: &mut dyn Write) -> Outcome {
    let cert = read_certificate(spec)?;
    let oracle = WordOracle::new(&cert.presentation, budget(cli));
    let render = |w| cert.presentation.render_word(w);
    let result = verify_with(&cert, &oracle);
    let (status, code, detail) = match &result {
        Ok(_) => ("verified", EXIT_OK, String::new()),
        Err(VerifyError::Inconclusive { reason }) => {
            ("inconclusive", EXIT_INCONCLUSIVE, reason.clone())
        }
        Err(VerifyError::Refuted { reason }) => ("refuted", EXIT_REFUTED, reason.clone()),
        Err(VerifyError::Malformed(e)) => return Err(Failure::usage(e.to_string())),
    };
    let flat = cert.flatten().unwrap_or_default();
    let k = flat.len();
    if cli.json {
        let conjugators: Vec<String> = flat.iter().map(render).collect();
        let mut v = json!({
            "status": status,
            "presentation": cert.presentation.render(),
            "base": render(&cert.base),
            "k": k,
            "conjugators": conjugators,
        });
        if let Ok(w) = &result {
            v["transcript"] = serde_json::to_value(&w.transcript).expect("serializes");
            v["base_witness"] = serde_json::to_value(&w.base_witness).expect("serializes");
            v["final_proof"] = serde_json::to_value(&w.final_proof).expect("serializes");
        } else {
            v["reason"] = json!(detail);
        }
        emit(out, &v)?;
    } else if result.is_ok() {
        writeln!(out, "verified: base {}, k = {k}", render(&cert.base)).map_err(io_failure)?;
    } else {
        writeln!(out, "{status}: {detail}").map_err(io_failure)?;
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    cli: &Cli,
    source: &Source,
    base: Option<&str>,
    auto: bool,
    bounds: SearchBounds,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let p = load_presentation(source)?;
    let oracle = WordOracle::new(&p, budget(cli));
    let bases = match (base, auto) {
        (Some(b), false) => vec![p.parse_word(b).map_err(|e| Failure::usage(e.to_string()))?],
        (None, true) => candidate_bases(&p, &oracle),
        _ => return Err(Failure::usage("give --base WORD or --auto")),
    };
    let mut reports = Vec::new();
    for b in &bases {
        let outcome = match search(&p, b, bounds, &oracle) {
            Ok(o) => o,
            Err(e) if auto => {
                writeln!(err, "skipping base {}: {e}", p.render_word(b)).map_err(io_failure)?;
                continue;
            }
            Err(e) => {
                let code = if e.to_string().starts_with("inconclusive") {
                    EXIT_INCONCLUSIVE
                } else {
                    EXIT_USAGE
                };
                return Err(Failure {
                    code,
                    message: e.to_string(),
                });
            }
        };
        match outcome {
            SearchOutcome::Found { certificate, stats } => {
                let text = certificate.to_json_string();
                writeln!(out, "{text}").map_err(io_failure)?;
                if let Some(path) = output {
                    std::fs::write(path, format!("{text}\n"))
                        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                }
                if !cli.json {
                    let k = certificate.flatten().map(|f| f.len()).unwrap_or(0);
                    writeln!(
                        err,
                        "found: base {}, k = {k}, {} closure elements",
                        p.render_word(b),
                        stats.elements
                    )
                    .map_err(io_failure)?;
                }
                return Ok(EXIT_OK);
            }
            SearchOutcome::NotFound(nf) => reports.push(json!({
                "base": p.render_word(b),
                "bounds": nf.bounds,
                "stats": nf.stats,
                "closure_exhausted": nf.closure_exhausted,
            })),
        }
    }
    emit(
        out,
        &json!({
            "status": "not_found",
            "presentation": p.render(),
            "bounds": bounds,
            "searched": reports,
            "note": "bounded search only; this is not a proof that no generalized torsion exists",
        }),
    )?;
    Ok(EXIT_NOT_FOUND)
}

fn cmd_alex(
    cli: &Cli,
    source: &Source,
    poly: Option<&str>,
    fibred: Option<bool>,
    one_relator: bool,
    out: &mut dyn Write,
) -> Outcome {
    let parsed = poly
        .map(|s| {
            s.parse::<LaurentPolynomial>()
                .map_err(|e| Failure::usage(e.to_string()))
        })
        .transpose()?;
    let (name, poly, fibred, special) = if has_source(source) {
        let p = load_presentation(source)?;
        let poly = match parsed {
            Some(f) => f,
            None => alexander_polynomial(&p).map_err(|e| Failure::usage(e.to_string()))?,
        };
        let special = p.meta.special_one_relator || one_relator;
        (
            p.name().to_string(),
            poly,
            fibred.or(p.meta.fibred),
            special,
        )
    } else {
        let Some(f) = parsed else {
            return Err(Failure::usage("give a presentation or --poly"));
        };
        ("polynomial".to_string(), f, fibred, one_relator)
    };
    let (report, code) = match orderability_from(&name, &poly, fibred, special) {
        Ok(r) => (r, EXIT_OK),
        Err(AlexanderError::MissingFibredness(_)) => {
            // Still report the roots; the verdict needs fibredness.
            let normal = poly.normalized();
            let roots = positive_real_roots(&normal).map_err(|e| Failure::usage(e.to_string()))?;
            let report = OrderabilityReport {
                name,
                verdict: Verdict::Inconclusive,
                criterion: "fibredness unknown; pass --fibred true or --fibred false".into(),
                polynomial: normal.to_string(),
                coefficients: normal.coefficients_json(),
                fibred: None,
                special_one_relator: special,
                roots,
            };
            (report, EXIT_INCONCLUSIVE)
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    if cli.json {
        emit(out, &serde_json::to_value(&report).expect("serializes"))?;
    } else {
        let r = &report.roots;
        writeln!(out, "Alexander polynomial: {}", report.polynomial).map_err(io_failure)?;
        writeln!(
            out,
            "real roots: {} ({} positive), degree {}",
            r.real, r.positive, r.degree
        )
        .map_err(io_failure)?;
        for i in &r.intervals {
            if i.exact {
                writeln!(out, "  root {}", i.lo).map_err(io_failure)?;
            } else {
                writeln!(out, "  root in [{}, {}]", i.lo, i.hi).map_err(io_failure)?;
            }
        }
        let verdict = serde_json::to_value(report.verdict).expect("serializes");
        writeln!(out, "verdict: {}", verdict.as_str().unwrap_or_default()).map_err(io_failure)?;
        writeln!(out, "criterion: {}", report.criterion).map_err(io_failure)?;
    }
    Ok(code)
}

fn cmd_fixtures(cli: &Cli, action: &FixturesAction, out: &mut dyn Write) -> Outcome {
    match action {
        FixturesAction::List => {
            for (name, _) in builtin_certificates() {
                writeln!(out, "{name}").map_err(io_failure)?;
            }
        }
        FixturesAction::Export { dir } => {
            let dir = dir.clone().unwrap_or_else(fixtures_dir);
            std::fs::create_dir_all(&dir)
                .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
            let mut written = Vec::new();
            for (name, cert) in builtin_certificates() {
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, format!("{}\n", cert.to_json_string()))
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                written.push(path.display().to_string());
            }
            if cli.json {
                emit(out, &json!({ "written": written }))?;
            } else {
                for w in written {
                    writeln!(out, "wrote {w}").map_err(io_failure)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}
