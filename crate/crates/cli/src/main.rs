use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hermitian_codes::classify::classify;
use hermitian_codes::code::{reduce_by_tangents, SearchOptions, SUBSET_LIMIT};
use hermitian_codes::curve::HermitianCurve;
use hermitian_codes::verify::{self, Mode, Status, Theorem, TheoremCase, VerificationReport, Verifier, VerifyOptions};
use hermitian_codes::wire::{self, CodeFile, CodeReport, ComponentJson, WitnessJson, SCHEMA};

#[derive(Parser)]
#[command(name = "hermitian-codes", version, about = "Hermitian curve codes from plane schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized phase.
    #[arg(long, default_value_t = 1, global = true)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    /// Record wall-clock seconds in verification reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Structured,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Structured => Mode::Structured,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rational points of the curve in canonical order.
    Points {
        #[arg(long)]
        q: u32,
    },
    /// Tangent line and contact order at every rational point.
    Tangents {
        #[arg(long)]
        q: u32,
    },
    /// h0, h1 and rank of I_Z(d) for a scheme file.
    H1 {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Regime and witness curve for h1(I_Z(d)) > 0.
    Classify {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Length, dimension and generator matrix of a code file.
    Code {
        #[arg(long)]
        code: PathBuf,
    },
    /// Dual minimum distance and its minimum-weight supports.
    Dualdist {
        #[arg(long)]
        code: PathBuf,
        /// Largest weight searched.
        #[arg(long)]
        w_max: usize,
        /// Random subsets per weight in structured mode.
        #[arg(long, default_value_t = 100_000)]
        random_subsets: usize,
        #[arg(long, default_value_t = SUBSET_LIMIT as u64)]
        subset_limit: u64,
    },
    /// Reduction by tangent lines and its strong-isometry certificate.
    Isometry {
        #[arg(long)]
        code: PathBuf,
    },
    /// Check one theorem case, or the whole box with --all.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated multiplicities.
        #[arg(long, value_delimiter = ',')]
        mults: Vec<usize>,
        /// Comma-separated canonical point indices (default configuration
        /// when omitted).
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Every case of a theorem's hypothesis box.
    Sweep {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        knobs: Knobs,
    },
}

#[derive(Args)]
struct Knobs {
    #[arg(long, default_value_t = 100_000)]
    config_cap: usize,
    #[arg(long, default_value_t = 1_000_000)]
    random_subsets: usize,
    #[arg(long, default_value_t = 1000)]
    oracle_samples: usize,
}

impl Knobs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            random_subsets: self.random_subsets,
            oracle_samples: self.oracle_samples,
            config_cap: self.config_cap,
            ..VerifyOptions::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .expect("thread pool set once");
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // bad input of any kind, like clap's own usage errors
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed {}", path.display()))
}

fn curve(q: u32) -> Result<HermitianCurve> {
    Ok(HermitianCurve::new(q)?)
}

fn theorem(key: &str) -> Result<Theorem> {
    Ok(key.parse::<Theorem>()?)
}

struct Out {
    json: Value,
    csv: String,
    pretty: String,
}

fn emit(g: &Global, out: Out) -> Result<()> {
    let text = match g.format {
        Format::Json => {
            let mut v = out.json;
            if let Value::Object(m) = &mut v {
                m.insert("schema".into(), json!(SCHEMA));
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Csv => out.csv,
        Format::Pretty => out.pretty,
    };
    match &g.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Points { q } => {
            let x = curve(*q)?;
            let f = x.field();
            let rows: Vec<Triple> = x.rational_points().iter().map(|p| wire::point_to_json(f, p)).collect();
            let csv = std::iter::once("index,x,y,z".to_string())
                .chain(rows.iter().enumerate().map(|(i, r)| format!("{i},{}", r.join(","))))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            let pretty = x
                .rational_points()
                .iter()
                .enumerate()
                .map(|(i, p)| format!("{i:>5}  {}\n", p.display(f)))
                .collect();
            emit(g, Out { json: json!({ "q": q, "count": rows.len(), "points": rows }), csv, pretty })?;
        }
        Command::Tangents { q } => {
            let x = curve(*q)?;
            let f = x.field();
            let mut rows = Vec::new();
            for (i, p) in x.rational_points().iter().enumerate() {
                let line = x.tangent_line(p)?;
                let contact = x.contact_order(&line, p)?;
                rows.push((i, wire::point_to_json(f, p), wire::line_to_json(f, line.form()), contact));
            }
            let csv = std::iter::once("index,x,y,z,a,b,c,contact".to_string())
                .chain(rows.iter().map(|(i, p, l, c)| format!("{i},{},{},{c}", p.join(","), l.join(","))))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            let pretty = rows
                .iter()
                .map(|(i, p, l, c)| format!("{i:>5}  ({})  tangent [{}]  contact {c}\n", p.join(":"), l.join(", ")))
                .collect();
            let json_rows: Vec<Value> = rows
                .iter()
                .map(|(i, p, l, c)| json!({ "index": i, "point": p, "tangent": l, "contact": c }))
                .collect();
            emit(g, Out { json: json!({ "q": q, "tangents": json_rows }), csv, pretty })?;
        }
        Command::H1 { q, d, scheme } => {
            let x = curve(*q)?;
            let f = x.field();
            let comps: Vec<ComponentJson> = read_json(scheme)?;
            let z = wire::scheme_from_json(f, &comps, Some(&x))?;
            let c = z.cohomology(f, *d);
            emit(
                g,
                Out {
                    json: json!({ "degree": z.degree(), "d": d, "h0": c.h0, "h1": c.h1, "rank": c.rank }),
                    csv: format!("degree,d,h0,h1,rank\n{},{d},{},{},{}\n", z.degree(), c.h0, c.h1, c.rank),
                    pretty: format!("deg Z = {}, d = {d}: h0 = {}, h1 = {}, rank = {}\n", z.degree(), c.h0, c.h1, c.rank),
                },
            )?;
        }
        Command::Classify { q, d, scheme } => {
            let x = curve(*q)?;
            let f = x.field();
            let comps: Vec<ComponentJson> = read_json(scheme)?;
            let z = wire::scheme_from_json(f, &comps, Some(&x))?;
            eprintln!("seed: {}", g.seed);
            let c = classify(f, &z, *d, g.seed)?;
            let witness = c.witness.as_ref().map(|w| WitnessJson::new(f, w, c.regime));
            let kind = witness.as_ref().map(|w| format!("{:?}", w.kind)).unwrap_or_default();
            let coverage = format!("{:?}", c.coverage).to_lowercase();
            emit(
                g,
                Out {
                    json: json!({
                        "regime": c.regime,
                        "h1_positive": c.h1_positive,
                        "oracle_h1": c.oracle_h1,
                        "coverage": coverage,
                        "witness": witness,
                        "seed": g.seed,
                    }),
                    csv: format!(
                        "regime,h1_positive,oracle_h1,witness\n{:?},{},{},{kind}\n",
                        c.regime, c.h1_positive, c.oracle_h1
                    ),
                    pretty: format!(
                        "regime {:?}: h1 > 0 is {} (oracle h1 = {}){}\n",
                        c.regime,
                        c.h1_positive,
                        c.oracle_h1,
                        witness
                            .map(|w| format!(", witness {:?} meeting Z in degree {}", w.kind, w.intersection_degree))
                            .unwrap_or_default()
                    ),
                },
            )?;
        }
        Command::Code { code } => {
            let file: CodeFile = read_json(code)?;
            let c = file.build()?;
            let f = c.field();
            let rows: Vec<Vec<String>> = (0..c.k())
                .map(|r| c.generator().row(r).iter().map(|&x| f.format(x)).collect())
                .collect();
            emit(
                g,
                Out {
                    json: json!({
                        "n": c.n(),
                        "k": c.k(),
                        "h1_e": c.h1_e(),
                        "columns": c.point_indices(),
                        "generator": rows,
                    }),
                    csv: c.generator().to_csv(f),
                    pretty: format!("n = {}, k = {}, h1(E) = {}\n", c.n(), c.k(), c.h1_e()),
                },
            )?;
        }
        Command::Dualdist {
            code,
            w_max,
            random_subsets,
            subset_limit,
        } => {
            let file: CodeFile = read_json(code)?;
            let c = file.build()?;
            let mut opts = if file.structured_mode {
                eprintln!("seed: {}", g.seed);
                SearchOptions::structured(*w_max, *random_subsets, g.seed)
            } else {
                SearchOptions::exhaustive(*w_max)
            };
            opts.seed = g.seed;
            opts.subset_limit = *subset_limit as u128;
            let dd = c.dual_min_distance(&opts)?;
            let report = CodeReport::new(&c, &dd);
            let csv = std::iter::once("support".to_string())
                .chain(
                    report
                        .supports
                        .iter()
                        .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(";")),
                )
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            let pretty = format!(
                "n = {}, k = {}, dual distance {} ({:?}), {} supports, {} words\n",
                report.n,
                report.k,
                report.dual_distance.map_or("> w_max".into(), |w| w.to_string()),
                report.guarantee,
                report.supports.len(),
                report.word_count
            );
            emit(g, Out { json: serde_json::to_value(&report)?, csv, pretty })?;
        }
        Command::Isometry { code } => {
            let file: CodeFile = read_json(code)?;
            let x = curve(file.q)?;
            let mut assign = file.assignments(&x)?;
            assign.sort_by_key(|&(p, a)| (a, p));
            let b = file.evaluation_points(&x)?;
            let red = reduce_by_tangents(&x, file.d, &assign, &b)?;
            let f = x.field();
            let kept: Vec<Value> = red
                .kept
                .iter()
                .map(|(p, a)| json!([wire::point_to_json(f, p), a]))
                .collect();
            let lambda: Vec<String> = red.lambda.iter().map(|&v| f.format(v)).collect();
            emit(
                g,
                Out {
                    json: json!({
                        "r": red.r,
                        "d_prime": red.d_prime,
                        "kept": kept,
                        "lambda": lambda,
                        "k": red.original.k(),
                        "k_reduced": red.reduced.k(),
                        "certificate": red.certificate,
                    }),
                    csv: format!(
                        "r,d_prime,k,k_reduced,certificate\n{},{},{},{},{}\n",
                        red.r,
                        red.d_prime,
                        red.original.k(),
                        red.reduced.k(),
                        red.certificate
                    ),
                    pretty: format!(
                        "r = {}, d' = {}, k = {} and {}, strongly isometric: {}\n",
                        red.r,
                        red.d_prime,
                        red.original.k(),
                        red.reduced.k(),
                        red.certificate
                    ),
                },
            )?;
            return Ok(red.certificate);
        }
        Command::Verify {
            theorem: key,
            q,
            d,
            mults,
            points,
            all,
            mode,
            knobs,
        } => {
            let th = theorem(key)?;
            let mode = mode.map(Mode::from).unwrap_or(default_mode(*q));
            eprintln!("seed: {}", g.seed);
            let v = Verifier::new(*q, knobs.options())?;
            let reports = if *all {
                v.sweep(th, mode, g.seed)?
            } else {
                let Some(d) = d else {
                    bail!("--d is required without --all");
                };
                if mults.is_empty() {
                    bail!("--mults is required without --all");
                }
                let mut case = v.default_case(th, *d, mults.clone(), mode, g.seed);
                if !points.is_empty() {
                    case.points = points.clone();
                }
                if th == Theorem::Residual {
                    case.subset = v.random_subset(&case, g.seed);
                }
                if th == Theorem::DoubleFull {
                    vec![v.verify_remark_m2(*d, mults[2], g.seed)?]
                } else {
                    vec![v.verify(&case)?]
                }
            };
            return report_out(g, reports);
        }
        Command::Sweep {
            theorem: key,
            q,
            mode,
            knobs,
        } => {
            let th = theorem(key)?;
            let mode = mode.map(Mode::from).unwrap_or(default_mode(*q));
            eprintln!("seed: {}", g.seed);
            let reports = verify::sweep(*q, th, mode, g.seed, knobs.options())?;
            return report_out(g, reports);
        }
    }
    Ok(true)
}

type Triple = wire::Triple;

fn default_mode(q: u32) -> Mode {
    if q >= 7 {
        Mode::Structured
    } else {
        Mode::Exhaustive
    }
}

fn report_out(g: &Global, mut reports: Vec<VerificationReport>) -> Result<bool> {
    if !g.timing {
        for r in &mut reports {
            r.seconds = 0.0;
        }
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (pass, fail, skip) = (count(Status::Pass), count(Status::Fail), count(Status::Skip));
    let text = match g.format {
        Format::Json => reports.iter().map(|r| r.to_json_line() + "\n").collect(),
        Format::Csv => verify::reports_csv(&reports),
        Format::Pretty => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&pretty_report(r));
            }
            s.push_str(&format!("{} cases: {pass} PASS, {fail} FAIL, {skip} SKIP\n", reports.len()));
            s
        }
    };
    match &g.output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if g.format != Format::Pretty {
        eprintln!("{} cases: {pass} PASS, {fail} FAIL, {skip} SKIP", reports.len());
    }
    Ok(fail == 0)
}

fn pretty_report(r: &VerificationReport) -> String {
    let c: &TheoremCase = &r.case;
    let mut s = format!("{} {}", r.status, c.key());
    if let Some(why) = &r.skip_reason {
        s.push_str(&format!("  (violates {why})"));
    }
    let pair = |e: Option<usize>, o: Option<usize>| match (e, o) {
        (Some(e), Some(o)) => format!("{o}/{e}"),
        (None, Some(o)) => o.to_string(),
        _ => "-".into(),
    };
    if r.status != Status::Skip {
        s.push_str(&format!(
            "  n {}  k {}  d {}",
            pair(r.n_expected, r.n_observed),
            pair(r.k_expected, r.k_observed),
            pair(r.distance_expected, r.distance_observed)
        ));
        if let (Some(e), Some(o)) = (r.census_expected, r.census_observed) {
            s.push_str(&format!("  supports {o}/{e}"));
        }
        if r.configurations > 1 {
            s.push_str(&format!("  over {} configurations", r.configurations));
        }
    }
    s.push('\n');
    for f in &r.failures {
        s.push_str(&format!("    ! {f}\n"));
    }
    s
}
