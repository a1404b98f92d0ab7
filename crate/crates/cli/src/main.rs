use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use destab::complexes::{build_c_complex, build_d_complex, Cell};
use destab::module::RealizedModule;
use destab::oracle::cache::{OracleCache, Query, CACHE_ENV};
use destab::oracle::{derived_destab_oracle, derived_loops_oracle};
use destab::presentation::{parse_presentation, realize};
use destab::report::{crosscheck, Report, Table};
use destab::singer::dickson;
use destab::steenrod::parse_element;
use destab::library;
use destab::unstable::destabilize;

const DEFAULT_HI: i32 = 16;

#[derive(Parser)]
#[command(name = "destab", version, about = "Derived destabilization and loop functors over the mod 2 Steenrod algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Degree window; the upper end bounds every computed degree.
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i32>>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Exit with status 2 when a reported cell lies beyond its validity bound.
    #[arg(long, global = true)]
    strict: bool,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for cached oracle tables.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible normal form of a Steenrod algebra element, e.g. "Sq2 Sq2".
    Adem { expr: String },
    /// Realize a module in the window and print its action.
    Realize { input: String },
    /// Destabilization DM.
    Destab { input: String },
    /// Homology of the Singer complex for D_s M.
    Dcomplex {
        input: String,
        #[arg(long, default_value_t = 2)]
        smax: usize,
    },
    /// Homology of the truncated Singer complex for Ω^t_s N.
    Lcomplex {
        input: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Resolution oracle for D_s M, or for Ω^t_s N when --t is given.
    Oracle {
        input: String,
        #[arg(long, default_value_t = 2)]
        smax: usize,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Singer complexes against the oracle; with --t also loops for t' ≤ t.
    Crosscheck {
        input: String,
        #[arg(long, default_value_t = 2)]
        smax: usize,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Dickson invariants of rank S.
    Dickson { s: usize },
}

enum Outcome {
    Ok,
    Shortfall,
    Mismatch,
}

struct Window {
    lo: Option<i32>,
    hi: i32,
}

fn window(cli: &Cli) -> Result<Window> {
    match cli.window.as_deref() {
        None => Ok(Window { lo: None, hi: DEFAULT_HI }),
        Some(&[lo, hi]) => {
            if lo > hi {
                bail!("window [{lo}, {hi}] is empty");
            }
            Ok(Window { lo: Some(lo), hi })
        }
        Some(_) => bail!("--window takes two integers"),
    }
}

/// A `.mod` file or a built-in such as `@SigmaF -1`.
fn load(input: &str, w: &Window) -> Result<RealizedModule> {
    let m = if input.starts_with('@') {
        library::builtin(input, w.hi)?
    } else {
        let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        let p = parse_presentation(&text).with_context(|| format!("in {input}"))?;
        let lo = w.lo.or(p.min_degree()).unwrap_or(0);
        let mut m = realize(&p, lo, w.hi)?;
        if p.unstable {
            m.declare_unstable(true);
        }
        m
    };
    if let Some(lo) = w.lo {
        if lo > m.lo() && m.degrees().any(|d| d < lo && m.dim(d) > 0) {
            bail!("window starts at {lo} but {} is nonzero below it", m.name());
        }
    }
    Ok(m)
}

fn cache(cli: &Cli) -> Option<OracleCache> {
    cli.cache.clone().map(OracleCache::new)
}

fn run(cli: &Cli) -> Result<(Report, Outcome)> {
    let w = window(cli)?;
    let mut outcome = Outcome::Ok;
    let report = match &cli.command {
        Command::Adem { expr } => {
            let e = parse_element(expr, 1, 1)?;
            let mut r = Report::new("adem").param("expr", expr);
            r.lines.push(e.to_string());
            r
        }
        Command::Realize { input } => {
            let m = load(input, &w)?;
            m.check_adem()?;
            let mut r = Report::new("realize").param("input", input).param("window", [m.lo(), m.hi()]).with_module(&m);
            r.lines.extend(m.describe().lines().skip(1).map(String::from));
            r
        }
        Command::Destab { input } => {
            let m = load(input, &w)?;
            let (d, _) = destabilize(&m);
            let v = m.valid_hi();
            let cells = d.degrees().map(|n| Cell { s: 0, degree: n, dim: d.dim(n), valid: m.bounded() || n <= v }).collect();
            let mut r = Report::new("destab").param("input", input).param("window", [m.lo(), w.hi]).with_module(&m);
            r.tables.push(Table::new(format!("D({})", m.name()), "D", cells));
            r
        }
        Command::Dcomplex { input, smax } => {
            let m = load(input, &w)?;
            let d = build_d_complex(&m, *smax, w.hi)?;
            let mut r = Report::new("dcomplex").param("input", input).param("window", [m.lo(), w.hi]).param("smax", smax).with_module(&m);
            r.tables.push(Table::of_complex(&d.complex, *smax, format!("H_s({}) = D_s({})", d.complex.name(), m.name())));
            r
        }
        Command::Lcomplex { input, t } => {
            let m = load(input, &w)?;
            let c = build_c_complex(&m, *t, w.hi)?;
            let mut r = Report::new("lcomplex").param("input", input).param("window", [m.lo(), w.hi]).param("t", t).with_module(&m);
            r.tables.push(Table::of_complex(&c.complex, *t, format!("H_s({}) = Ω^{t}_s({})", c.complex.name(), m.name())));
            r
        }
        Command::Oracle { input, smax, t } => {
            let m = load(input, &w)?;
            let cache = cache(cli);
            let (functor, tt) = t.map_or(("destab", 0), |t| ("loops", t));
            let q = Query { functor, fingerprint: m.fingerprint(), t: tt, s_max: *smax, hi: w.hi };
            let compute = || match t {
                Some(t) => derived_loops_oracle(&m, *t, *smax, w.hi),
                None => derived_destab_oracle(&m, *smax, w.hi),
            };
            let (o, hit) = match &cache {
                Some(c) => c.get_or_compute(&q, compute)?,
                None => (compute()?, false),
            };
            let title = match t {
                Some(t) => format!("Ω^{t}_s({}) by resolution", m.name()),
                None => format!("D_s({}) by resolution", m.name()),
            };
            let mut r = Report::new("oracle")
                .param("input", input)
                .param("window", [m.lo(), w.hi])
                .param("smax", smax)
                .param("t", t)
                .param("cache_hit", hit)
                .with_module(&m);
            for (s, g) in o.generators.iter().enumerate() {
                r.lines.push(format!("P{s} generators in degrees {g:?}"));
            }
            r.tables.push(Table::new(title, if t.is_some() { "Ω" } else { "D" }, o.cells()));
            r
        }
        Command::Crosscheck { input, smax, t } => {
            let m = load(input, &w)?;
            let cache = cache(cli);
            let (checks, secs) = crosscheck(&m, *smax, *t, w.hi, cache.as_ref())?;
            let mut r = Report::new("crosscheck")
                .param("input", input)
                .param("window", [m.lo(), w.hi])
                .param("smax", smax)
                .param("t", t)
                .param("seconds", (secs * 1000.0).round() / 1000.0)
                .with_module(&m);
            if t.is_some() && !m.is_unstable() {
                r.lines.push(format!("{} is not unstable; loops skipped", m.name()));
            }
            r.checks = checks;
            if !r.passed() {
                outcome = Outcome::Mismatch;
            }
            r
        }
        Command::Dickson { s } => {
            if *s == 0 {
                bail!("Dickson invariants need rank at least 1");
            }
            let mut r = Report::new("dickson").param("s", s).param("window", [0, w.hi]);
            for (i, g) in dickson::dickson_generators(*s).iter().enumerate() {
                r.lines.push(format!("ω{s},{i} (degree {}) = {g}", dickson::generator_degree(*s, i)));
            }
            let cells = (0..=w.hi.max(0)).map(|n| Cell { s: *s, degree: n, dim: dickson::dim(*s, n as i64), valid: true }).collect();
            r.tables.push(Table::new(format!("Poincaré series of D({s})"), "D", cells));
            r
        }
    };
    if matches!(outcome, Outcome::Ok) && cli.strict && report.shortfall() {
        outcome = Outcome::Shortfall;
    }
    Ok((report, outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(&cli) {
        Ok((report, outcome)) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            // a closed pipe is not an error of the computation
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            match outcome {
                Outcome::Ok => ExitCode::SUCCESS,
                Outcome::Shortfall => {
                    eprintln!("error: some cells lie beyond the validity bound");
                    ExitCode::from(2)
                }
                Outcome::Mismatch => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
