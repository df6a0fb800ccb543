use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toeplitz_core::autgroup::{decompose, sigma, sigma_inverse};
use toeplitz_core::blockmap::{compose, minimize, Rule};
use toeplitz_core::complexity::{exponent_fit, profile, recurrence_check, theoretical_exponent};
use toeplitz_core::endo_search::{classify, enumerate};
use toeplitz_core::factor::phase;
use toeplitz_core::lifting_group::{
    add, format_rational, from_rational, member, parse_rational, residue, to_rational,
};
use toeplitz_core::substrate::{
    essential_periods, generate, language, parse_word, point_window, skeleton_period, skeleton_xw,
    ParamsConfig, PartialWindow,
};
use toeplitz_core::verify::{criteria, run_one};
use toeplitz_core::{CoeffVector, Error, Integer, ToeplitzShift};

#[derive(Parser)]
#[command(
    name = "toeplitz",
    version,
    about = "Toeplitz subshifts and their endomorphisms"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Word w over 0, 1 and _ (hole).
    #[arg(long, global = true)]
    w: Option<String>,
    #[arg(long, global = true)]
    p: Option<usize>,
    #[arg(long, global = true)]
    q: Option<usize>,
    #[arg(long = "p-prime", global = true)]
    p_prime: Option<usize>,
    /// JSON file with {"p","p_prime","q","w"}; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Cells of x^j(w), or of x(w) without --depth.
    Gen {
        #[arg(long)]
        depth: Option<u32>,
        /// Inclusive range a:b.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
    },
    /// Sk(p^level, x(w)) on a range, or one period of Sk(k, x(w)).
    Skeleton {
        #[arg(long, conflicts_with = "period")]
        level: Option<u32>,
        #[arg(long, allow_hyphen_values = true, requires = "level")]
        range: Option<String>,
        #[arg(long)]
        period: Option<usize>,
    },
    /// Essential periods up to a bound.
    Periods {
        #[arg(long, default_value_t = 130)]
        max: usize,
    },
    /// Factors of a given length.
    Language {
        #[arg(long)]
        length: usize,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Phase of a window modulo p^level.
    Phase {
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Rule of sigma_j.
    Sigma {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        inverse: bool,
    },
    /// Rule of f o g, minimized.
    Compose {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// The rational an endomorphism corresponds to.
    Decompose {
        #[arg(long)]
        rule: PathBuf,
    },
    /// Arithmetic in the lifting group.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Factor complexity n(k).
    Complexity {
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 100)]
        to: usize,
        /// Also write the profile as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// All endomorphisms of a radius, checked to a depth. With --out, one
    /// rule file per survivor is written into that directory.
    Search {
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 40)]
        depth: usize,
    },
    /// Run acceptance criteria.
    Verify {
        /// "all" or comma-separated criterion numbers.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum GroupOp {
    /// Balanced normal form.
    Nf { x: String },
    /// Residue modulo a power of p.
    Residue {
        x: String,
        #[arg(long = "mod")]
        modulus: String,
    },
    /// Sum of two members.
    Add { a: String, b: String },
    /// Value of a coefficient vector such as [-2,1].
    Value { coeffs: String },
}

/// Errors are split by exit status: bad input exits 2, everything else 1.
enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::AssumptionViolated(_) | Error::NotMember(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn config(global: &Global) -> std::result::Result<ParamsConfig, Failure> {
    let mut cfg = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => ParamsConfig::default(),
    };
    if let Some(w) = &global.w {
        cfg.w = w.clone();
    }
    if let Some(p) = global.p {
        cfg.p = p;
    }
    if let Some(q) = global.q {
        cfg.q = q;
    }
    if let Some(pp) = global.p_prime {
        cfg.p_prime = pp;
    }
    Ok(cfg)
}

fn parse_range(text: &str) -> std::result::Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("bad range {text:?}; expected a:b"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn read_rule(shift: &ToeplitzShift, path: &Path) -> std::result::Result<Rule, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Rule::from_json(shift, &text)?)
}

fn parse_q(text: &str) -> std::result::Result<toeplitz_core::Rational, Failure> {
    Ok(parse_rational::<Integer>(text)?)
}

struct Output {
    format: Format,
    target: Option<PathBuf>,
}

impl Output {
    fn emit(&self, body: &str) -> Outcome {
        let mut body = body.to_string();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &self.target {
            Some(path) => fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn window(&self, y: &PartialWindow) -> Outcome {
        match self.format {
            Format::Json => self.emit(&y.to_json()),
            _ => self.emit(&y.cells_string()),
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let params = config(&cli.global)?.validate()?;
    let shift = ToeplitzShift::new(params.clone());
    let out = Output {
        format: cli.global.format,
        target: cli.global.out.clone(),
    };
    let json = out.format == Format::Json;
    match cli.command {
        Command::Gen { depth, range } => {
            let (a, b) = parse_range(&range)?;
            let y = match depth {
                Some(j) => generate(&params, j, a, b)?,
                None => point_window(&params, a, b)?,
            };
            out.window(&y)
        }
        Command::Skeleton {
            level,
            range,
            period,
        } => match (level, range, period) {
            (Some(level), Some(range), None) => {
                let (a, b) = parse_range(&range)?;
                out.window(&skeleton_xw(&params, level, a, b)?)
            }
            (None, None, Some(k)) => {
                let cells = skeleton_period(&params, k)?;
                out.window(&PartialWindow::from_word(0, &cells)?)
            }
            _ => Err(Failure::Usage(
                "give --level with --range, or --period".into(),
            )),
        },
        Command::Periods { max } => {
            let periods = essential_periods(&params, max)?;
            if json {
                out.emit(&serde_json::to_string(&periods).expect("json"))
            } else {
                let text: Vec<String> = periods.iter().map(usize::to_string).collect();
                out.emit(&text.join(" "))
            }
        }
        Command::Language { length, count } => {
            let lang = language(&params, length)?;
            match (count, json) {
                (true, true) => {
                    out.emit(&format!("{{\"length\":{length},\"count\":{}}}", lang.len()))
                }
                (true, false) => out.emit(&lang.len().to_string()),
                (false, true) => {
                    out.emit(&serde_json::to_string(&lang.to_strings()).expect("json"))
                }
                (false, false) => out.emit(&lang.to_strings().join("\n")),
            }
        }
        Command::Phase {
            window,
            offset,
            level,
        } => {
            let y = PartialWindow::from_word(offset, &parse_word(&window)?)?;
            let c = phase(&shift, &y, level)?;
            out.emit(&if json { c.to_json() } else { c.to_string() })
        }
        Command::Sigma { j, inverse } => {
            let rule = if inverse {
                sigma_inverse(&shift, j)?
            } else {
                sigma(&shift, j)?
            };
            out.emit(&rule.to_json())
        }
        Command::Compose { f, g } => {
            let (f, g) = (read_rule(&shift, &f)?, read_rule(&shift, &g)?);
            out.emit(&minimize(&shift, &compose(&shift, &f, &g)?)?.to_json())
        }
        Command::Decompose { rule } => {
            let d = decompose(&shift, &read_rule(&shift, &rule)?)?;
            if json {
                out.emit(&d.to_json())
            } else {
                out.emit(&format!("{} {}", format_rational(&d.value), d.coeffs))
            }
        }
        Command::Group { op } => group(&params, op, &out),
        Command::Complexity { from, to, csv } => {
            if from == 0 || from > to {
                return Err(Failure::Usage("need 1 <= from <= to".into()));
            }
            let prof = profile(&params, to)?;
            let shown = prof.range(from, to);
            if let Some(path) = csv {
                fs::write(path, shown.to_csv())?;
            }
            if out.format == Format::Csv {
                return out.emit(&shown.to_csv());
            }
            let rec = recurrence_check(&prof)?;
            let fit = exponent_fit::<f64>(&prof, from, to);
            let ceiling: f64 = theoretical_exponent(&params);
            let fit_text = fit.map_or("n/a".to_string(), |f| format!("{f:.4}"));
            if json {
                let body = serde_json::json!({
                    "entries": shown.entries,
                    "recurrence_holds": rec.passed(),
                    "fitted_exponent": fit,
                    "theoretical_exponent": ceiling,
                });
                out.emit(&body.to_string())
            } else {
                let mut text: Vec<String> = shown
                    .entries
                    .iter()
                    .map(|(k, n)| format!("{k} {n}"))
                    .collect();
                text.push(format!(
                    "recurrence {}; fitted exponent {fit_text}; ceiling {ceiling:.4}",
                    if rec.passed() { "holds" } else { "fails" }
                ));
                out.emit(&text.join("\n"))
            }
        }
        Command::Search { radius, depth } => {
            let rules = enumerate(&shift, radius, depth)?;
            let c = classify(&shift, &rules, radius)?;
            let out = Output {
                format: out.format,
                target: None,
            };
            if let Some(dir) = &cli.global.out {
                fs::create_dir_all(dir)?;
                for (i, (rule, _)) in c.entries.iter().enumerate() {
                    fs::write(dir.join(format!("rule_{i:03}.json")), rule.to_json() + "\n")?;
                }
            }
            if json {
                let values: Vec<String> =
                    c.entries.iter().map(|(_, v)| format_rational(v)).collect();
                out.emit(
                    &serde_json::json!({"radius": radius, "depth": depth, "values": values})
                        .to_string(),
                )
            } else {
                let text: Vec<String> = c
                    .entries
                    .iter()
                    .enumerate()
                    .map(|(i, (_, v))| format!("{i} {}", format_rational(v)))
                    .collect();
                out.emit(&text.join("\n"))
            }
        }
        Command::Verify { suite } => {
            let ids: Vec<u32> = if suite == "all" {
                criteria().iter().map(|c| c.0).collect()
            } else {
                suite
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Failure::Usage(format!("bad suite {suite:?}")))
                    })
                    .collect::<std::result::Result<_, _>>()?
            };
            let mut lines = Vec::new();
            let mut failed = false;
            for id in ids {
                let r = run_one(&shift, id)
                    .ok_or_else(|| Failure::Usage(format!("no criterion {id}")))?;
                failed |= !r.passed;
                lines.push(r.to_string());
            }
            out.emit(&lines.join("\n"))?;
            if failed {
                Err(Failure::Verification)
            } else {
                Ok(())
            }
        }
    }
}

fn group(params: &toeplitz_core::substrate::Params, op: GroupOp, out: &Output) -> Outcome {
    match op {
        GroupOp::Nf { x } => {
            let x = parse_q(&x)?;
            let c = from_rational(params, &x)?;
            if out.format == Format::Json {
                out.emit(&serde_json::to_string(&c).expect("json"))
            } else {
                out.emit(&c.to_string())
            }
        }
        GroupOp::Residue { x, modulus } => {
            let x = parse_q(&x)?;
            let m: Integer = modulus
                .parse()
                .map_err(|_| Failure::Usage(format!("bad modulus {modulus:?}")))?;
            if m <= Integer::from(0) {
                return Err(Failure::Usage("modulus must be positive".into()));
            }
            if !member(params, &x) {
                return Err(Error::NotMember(x.to_string()).into());
            }
            out.emit(&residue(&x, &m).to_string())
        }
        GroupOp::Add { a, b } => {
            let (a, b) = (parse_q(&a)?, parse_q(&b)?);
            out.emit(&format_rational(&add(&a, &b)))
        }
        GroupOp::Value { coeffs } => {
            let c: CoeffVector = serde_json::from_str(&coeffs)
                .map_err(|e| Failure::Usage(format!("bad vector: {e}")))?;
            out.emit(&format_rational(&to_rational::<Integer>(params, &c)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
