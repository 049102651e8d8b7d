//! `dlconn`: command-line front end for the twisted Weyl group tools and
//! the flag-variety verifier. Output is newline-delimited JSON by default.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use dlconn_core::counting::{component_count, count_n};
use dlconn_core::coxeter::{GeneratorSet, WeylElement, DEFAULT_GROUP_BOUND};
use dlconn_core::flag::{GroupRealization, RealizationKind, DEFAULT_FLAG_BOUND};
use dlconn_core::report::{Verdict, VerificationReport};
use dlconn_core::twist::TwistedDatum;
use dlconn_core::verify::{
    check_closure_rational_counts, check_component_fibers_escalating, check_descent_chain, check_lemma_cell_emptiness,
    check_oracle_consistency, check_rational_count, check_theorem_connectivity, check_x1_closure, DEFAULT_LEVEL_CAP,
};

const MAX_FLAGS_ENV: &str = "DLCONN_MAX_FLAGS";

#[derive(Parser)]
#[command(name = "dlconn", version, about = "Connectedness of Deligne-Lusztig varieties: combinatorics and brute-force checks")]
struct Cli {
    #[command(flatten)]
    output: OutputOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Newline-delimited JSON output (the default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Tab-separated output.
    #[arg(long, global = true)]
    tsv: bool,
    /// Treat inconclusive checks as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Report runtime_ms as 0, for byte-identical output.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Maximum number of flags one enumeration may visit.
    #[arg(long, global = true)]
    bound: Option<u64>,
}

#[derive(Args)]
struct DatumOpts {
    /// Group label ("A3", "D4", "G2") or a Coxeter matrix as JSON.
    #[arg(long)]
    group: String,
    /// "1", a permutation like "0>2,2>0", or "2A3", "2D4", "3D4".
    #[arg(long, default_value = "1")]
    twist: String,
}

#[derive(Subcommand)]
enum Command {
    /// Connectedness criterion for a generator set, or irreducibility of an element.
    Criterion {
        #[command(flatten)]
        datum: DatumOpts,
        /// Generator set, e.g. "0,2".
        #[arg(long, conflicts_with = "w")]
        set: Option<String>,
        /// Element as a dot-separated word, e.g. "0.1".
        #[arg(long)]
        w: Option<String>,
    },
    /// N-polynomials and component counts.
    Count {
        #[command(flatten)]
        datum: DatumOpts,
        /// sigma-stable generator set J for N(W_J).
        #[arg(long)]
        set: Option<String>,
        /// Element whose component count is wanted.
        #[arg(long)]
        w: Option<String>,
        /// Evaluate at this q.
        #[arg(long)]
        q: Option<u64>,
    },
    /// Coxeter structure of the fixed group.
    Steinberg {
        #[command(flatten)]
        datum: DatumOpts,
    },
    /// Run oracle checks on a realization such as "GL3@q=2" or "U4@q=2".
    Verify {
        #[arg(long)]
        realization: String,
        /// Checks to run; repeat or separate by commas.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        check: Vec<Check>,
        /// Generator set for `theorem` and `descent` (default: all of S).
        #[arg(long)]
        set: Option<String>,
        /// Element for `fibers` and `closure` (default: each generator).
        #[arg(long)]
        w: Option<String>,
        /// Generator for `lemma` and `x1` (default: each generator).
        #[arg(long)]
        s: Option<usize>,
        /// Extension degree (default 2 for split, 1 for unitary).
        #[arg(long)]
        m: Option<u32>,
        /// Largest extension degree tried by `fibers`.
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        level_cap: u32,
    },
    /// The full suite.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Theorem,
    Lemma,
    Fibers,
    Closure,
    X1,
    Oracle,
    Descent,
    Rational,
}

type CliResult<T> = Result<T, String>;

struct Sink {
    tsv: bool,
    no_timing: bool,
    header_done: bool,
    failed: usize,
    inconclusive: usize,
}

impl Sink {
    fn report(&mut self, mut report: VerificationReport) {
        if self.no_timing {
            report.runtime_ms = 0;
        }
        match report.verdict {
            Verdict::Fail => self.failed += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Pass => {}
        }
        if self.tsv {
            if !self.header_done {
                println!("{}", VerificationReport::tsv_header());
                self.header_done = true;
            }
            println!("{}", report.to_tsv_line());
        } else {
            println!("{}", report.to_json_line());
        }
    }

    fn value(&mut self, value: Map<String, Value>) {
        if self.tsv {
            let keys: Vec<&str> = value.keys().map(String::as_str).collect();
            println!("{}", keys.join("\t"));
            let cells: Vec<String> = value
                .values()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            println!("{}", cells.join("\t"));
        } else {
            println!("{}", Value::Object(value));
        }
    }
}

fn datum(opts: &DatumOpts) -> CliResult<TwistedDatum> {
    TwistedDatum::parse(&opts.group, &opts.twist).map_err(|e| e.to_string())
}

fn parse_set(t: &TwistedDatum, text: &str) -> CliResult<GeneratorSet> {
    let set = GeneratorSet::parse(text).map_err(|e| e.to_string())?;
    set.check_rank(t.rank()).map_err(|e| e.to_string())?;
    Ok(set)
}

fn parse_element(t: &TwistedDatum, text: &str) -> CliResult<WeylElement> {
    t.group().parse_element(text).map_err(|e| e.to_string())
}

fn flag_bound(opts: &OutputOpts) -> CliResult<u64> {
    if let Some(b) = opts.bound {
        return Ok(b);
    }
    match std::env::var(MAX_FLAGS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{MAX_FLAGS_ENV} must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_FLAG_BOUND),
    }
}

fn realization(spec: &str, bound: u64) -> CliResult<GroupRealization> {
    Ok(GroupRealization::parse(spec, &[1]).map_err(|e| e.to_string())?.with_flag_bound(bound))
}

fn criterion(sink: &mut Sink, t: &TwistedDatum, set: Option<&str>, w: Option<&str>) -> CliResult<()> {
    let mut out = Map::new();
    out.insert("group".into(), json!(t.group().datum().to_string()));
    out.insert("twist".into(), json!(t.sigma().perm()));
    let set = match (set, w) {
        (_, Some(w)) => {
            let w = parse_element(t, w)?;
            out.insert("w".into(), json!(w.to_word_string()));
            out.insert("support".into(), json!(w.support()));
            out.insert("irreducible".into(), json!(t.is_irreducible(&w)));
            w.support()
        }
        (Some(s), None) => parse_set(t, s)?,
        (None, None) => return Err("criterion needs --set or --w".into()),
    };
    out.insert("set".into(), json!(set));
    out.insert("closure".into(), json!(t.sigma_closure(set)));
    out.insert("connected".into(), json!(t.is_connected_union(set)));
    sink.value(out);
    Ok(())
}

fn count(sink: &mut Sink, t: &TwistedDatum, set: Option<&str>, w: Option<&str>, q: Option<u64>) -> CliResult<()> {
    let err = |e: dlconn_core::counting::CountError| e.to_string();
    let at = |p: &dlconn_core::counting::IntPolynomial| q.map(|q| json!(p.evaluate(q).to_string().parse::<Value>().unwrap()));
    let mut out = Map::new();
    out.insert("group".into(), json!(t.group().datum().to_string()));
    out.insert("twist".into(), json!(t.sigma().perm()));
    let whole = count_n(t, t.all_generators()).map_err(err)?;
    out.insert("n_w".into(), json!(whole));
    if let Some(q) = q {
        out.insert("q".into(), json!(q));
        out.insert("n_w_value".into(), at(&whole).unwrap());
    }
    if let Some(set) = set {
        let j = parse_set(t, set)?;
        let n_j = count_n(t, j).map_err(err)?;
        out.insert("set".into(), json!(j));
        out.insert("n_j".into(), json!(n_j));
        if let Some(v) = at(&n_j) {
            out.insert("n_j_value".into(), v);
        }
    }
    if let Some(w) = w {
        let w = parse_element(t, w)?;
        let closure = t.stable_support(&w);
        let c = component_count(t, &w).map_err(err)?;
        out.insert("w".into(), json!(w.to_word_string()));
        out.insert("closure".into(), json!(closure));
        out.insert("n_ww".into(), json!(count_n(t, closure).map_err(err)?));
        out.insert("component_count_polynomial".into(), json!(c));
        if let Some(v) = at(&c) {
            out.insert("component_count".into(), v);
        }
    }
    sink.value(out);
    Ok(())
}

struct VerifyArgs<'a> {
    realization: &'a str,
    checks: &'a [Check],
    set: Option<&'a str>,
    w: Option<&'a str>,
    s: Option<usize>,
    m: Option<u32>,
    level_cap: u32,
}

fn verify(sink: &mut Sink, args: VerifyArgs<'_>, bound: u64) -> CliResult<()> {
    let r = realization(args.realization, bound)?;
    let t = r.twisted().clone();
    let err = |e: dlconn_core::verify::VerifyError| e.to_string();
    let m = args.m.unwrap_or(match r.kind() {
        RealizationKind::Split => 2,
        RealizationKind::Unitary => 1,
    });
    let set = match args.set {
        Some(s) => parse_set(&t, s)?,
        None => t.all_generators(),
    };
    let gens: Vec<usize> = match args.s {
        Some(s) if s < t.rank() => vec![s],
        Some(s) => return Err(format!("generator {s} out of range for {}", r.label())),
        None => (0..t.rank()).collect(),
    };
    let elements: Vec<WeylElement> = match args.w {
        Some(w) => vec![parse_element(&t, w)?],
        None => gens.iter().map(|&s| t.group().generator(s)).collect(),
    };
    for check in args.checks {
        match check {
            Check::Theorem => sink.report(check_theorem_connectivity(&r, set).map_err(err)?),
            Check::Lemma => {
                for &s in &gens {
                    sink.report(check_lemma_cell_emptiness(&r, s, m).map_err(err)?);
                }
            }
            Check::Fibers => {
                for w in &elements {
                    sink.report(check_component_fibers_escalating(&r, w, m, args.level_cap).map_err(err)?);
                }
            }
            Check::Closure => {
                for w in &elements {
                    sink.report(check_closure_rational_counts(&r, w).map_err(err)?);
                }
            }
            Check::X1 => {
                for &s in &gens {
                    sink.report(check_x1_closure(&r, s).map_err(err)?);
                }
            }
            Check::Oracle => sink.report(check_oracle_consistency(&r, m).map_err(err)?),
            Check::Descent => sink.report(check_descent_chain(&t, set, DEFAULT_GROUP_BOUND).map_err(err)?),
            Check::Rational => sink.report(check_rational_count(&r).map_err(err)?),
        }
    }
    Ok(())
}

const SUITE_DATA: [(&str, &str); 13] = [
    ("A1", "1"),
    ("A2", "1"),
    ("A3", "1"),
    ("A4", "1"),
    ("B2", "1"),
    ("B3", "1"),
    ("D4", "1"),
    ("G2", "1"),
    ("A2", "2A2"),
    ("A3", "2A3"),
    ("A4", "2A4"),
    ("D4", "2D4"),
    ("D4", "3D4"),
];

const SUITE_REALIZATIONS: [&str; 5] = ["GL2@q=2", "GL3@q=2", "GL4@q=2", "U3@q=2", "U4@q=2"];

fn all(sink: &mut Sink, bound: u64) -> CliResult<()> {
    for (g, tw) in SUITE_DATA {
        let t = TwistedDatum::parse(g, tw).map_err(|e| e.to_string())?;
        sink.report(t.verify_steinberg(DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?);
        for i in GeneratorSet::all_subsets(t.rank()).filter(|&i| t.is_connected_union(i)) {
            sink.report(check_descent_chain(&t, i, DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?);
        }
    }
    for spec in SUITE_REALIZATIONS {
        let r = realization(spec, bound)?;
        let rank = r.twisted().rank();
        let mut checks = vec![Check::Rational, Check::X1, Check::Closure];
        if r.n() <= 3 || r.kind() == RealizationKind::Unitary {
            checks.extend([Check::Lemma, Check::Fibers]);
        }
        verify(
            sink,
            VerifyArgs {
                realization: spec,
                checks: &checks,
                set: None,
                w: None,
                s: None,
                m: None,
                level_cap: DEFAULT_LEVEL_CAP,
            },
            bound,
        )?;
        for i in GeneratorSet::all_subsets(rank).filter(|i| !i.is_empty()) {
            sink.report(check_theorem_connectivity(&r, i).map_err(|e| e.to_string())?);
        }
    }
    for (spec, m) in [("GL2@q=2", 2), ("GL3@q=2", 2), ("U3@q=2", 1)] {
        let r = realization(spec, bound)?;
        sink.report(check_oracle_consistency(&r, m).map_err(|e| e.to_string())?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink =
        Sink { tsv: cli.output.tsv, no_timing: cli.output.no_timing, header_done: false, failed: 0, inconclusive: 0 };
    let result = flag_bound(&cli.output).and_then(|bound| match &cli.command {
        Command::Criterion { datum: d, set, w } => criterion(&mut sink, &datum(d)?, set.as_deref(), w.as_deref()),
        Command::Count { datum: d, set, w, q } => count(&mut sink, &datum(d)?, set.as_deref(), w.as_deref(), *q),
        Command::Steinberg { datum: d } => {
            let report = datum(d)?.verify_steinberg(DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?;
            sink.report(report);
            Ok(())
        }
        Command::Verify { realization, check, set, w, s, m, level_cap } => verify(
            &mut sink,
            VerifyArgs {
                realization,
                checks: check,
                set: set.as_deref(),
                w: w.as_deref(),
                s: *s,
                m: *m,
                level_cap: *level_cap,
            },
            bound,
        ),
        Command::All => all(&mut sink, bound),
    });
    if let Err(e) = result {
        eprintln!("dlconn: error: {e}");
        return ExitCode::from(2);
    }
    let failing = sink.failed + if cli.output.strict { sink.inconclusive } else { 0 };
    if failing > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
