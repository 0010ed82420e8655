use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hypersing::local::DEFAULT_BUDGET;
use hypersing::{
    apex_space, branch_count, builtin_corpus, coarse_type, detect_weights, format_corpus,
    germ_milnor_sequence, hessian_corank_at_origin, hessian_vanishes, infer_nvars, milnor_number,
    milnor_orlik, move_to_origin, parse_corpus, parse_poly, planecurve, polar_degree,
    polar_degree_elimination, tangent_cone_lines, tjurina_number, verify_all, Dimension, Error,
    Hypersurface, LocalGerm, ProjectivePoint, Settings, Status, VarStyle,
};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "hypersing",
    version,
    about = "Invariants of hypersurface singularities"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomised step
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Cap on reduction steps per standard basis computation
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Random slices tried per sectional Milnor number
    #[arg(long, global = true, default_value_t = 5)]
    trials: usize,
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Number of variables (inferred from the expression by default)
    #[arg(long, global = true)]
    nvars: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Milnor and Tjurina numbers of a germ, or of a hypersurface at a point
    Mu {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Sectional Milnor numbers μ^(0), …, μ^(n)
    Sectional {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Polar degree from the complete list of singular points
    Polar {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long, num_args = 0.., value_delimiter = ';')]
        points: Vec<String>,
    },
    /// Cone test: the space of apexes
    Cone {
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Branches and tangent lines of a plane curve germ
    Branches {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Coarse singularity type
    Classify {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        point: Option<String>,
    },
    /// Check the corpus
    Verify {
        #[arg(long)]
        record: Option<String>,
        /// Corpus file to use instead of the builtin one
        #[arg(long)]
        corpus: Option<String>,
        #[arg(long, default_value_t = 4)]
        parallelism: usize,
    },
    /// Randomised test for an identically vanishing Hessian determinant
    Hessian {
        #[arg(allow_hyphen_values = true)]
        input: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Write the builtin corpus in its text format
    ExportCorpus {
        #[arg(long)]
        out: Option<String>,
    },
}

/// Outcome of one command before rendering.
struct Outcome {
    input: Value,
    invariants: Map<String, Value>,
    checks: Vec<(String, bool, String)>,
    budget_exceeded: bool,
}

impl Outcome {
    fn new(input: Value) -> Self {
        Outcome {
            input,
            invariants: Map::new(),
            checks: Vec::new(),
            budget_exceeded: false,
        }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.invariants.insert(key.to_string(), value.into());
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.checks.push((name.to_string(), ok, detail.into()));
    }
}

enum Failure {
    Usage(String),
    Budget(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::ClassificationMismatch(_) | Error::NegativePolarDegree(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let settings = Settings {
        seed: cli.global.seed,
        trials: cli.global.trials,
        budget: cli.global.budget,
        ..Settings::default()
    };
    let start = Instant::now();
    let result = run(&cli.command, &cli.global, &settings);
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(outcome) => {
            render(&outcome, &cli.global, settings.seed, seconds);
            if outcome.budget_exceeded {
                ExitCode::from(3)
            } else if outcome.checks.iter().all(|c| c.1) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (2, m),
                Failure::Check(m) => (1, m),
                Failure::Budget(m) => (3, m),
            };
            if cli.global.json {
                println!(
                    "{}",
                    json!({"error": msg, "exit_code": code, "seed": settings.seed})
                );
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}

fn render(o: &Outcome, g: &Global, seed: u64, seconds: f64) {
    if g.json {
        let checks: Vec<Value> = o
            .checks
            .iter()
            .map(|(n, ok, d)| json!({"name": n, "pass": ok, "detail": d}))
            .collect();
        let out = json!({
            "input": o.input,
            "invariants": o.invariants,
            "checks": checks,
            "timings": {"seconds": seconds},
            "seed": seed,
        });
        println!("{out}");
        return;
    }
    for (k, v) in &o.invariants {
        match v {
            Value::String(s) => println!("{k}: {s}"),
            other => println!("{k}: {other}"),
        }
    }
    for (name, ok, detail) in &o.checks {
        let mark = if *ok { "ok  " } else { "FAIL" };
        if detail.is_empty() {
            println!("{mark} {name}");
        } else {
            println!("{mark} {name}: {detail}");
        }
    }
}

/// An argument naming an existing file is replaced by the file's contents.
fn read_input(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?;
        let joined: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Ok(joined.join(" "))
    } else {
        Ok(arg.to_string())
    }
}

fn polynomial(arg: &str, g: &Global) -> Result<(String, hypersing::Polynomial), Failure> {
    let text = read_input(arg)?;
    let nvars = match g.nvars {
        Some(n) => n,
        None => infer_nvars(&text)?,
    };
    let p = parse_poly(&text, nvars)?;
    Ok((text, p))
}

fn point(s: &str) -> Result<ProjectivePoint, Failure> {
    Ok(s.parse::<ProjectivePoint>()?)
}

/// The germ at the origin, or of the hypersurface at `point` when given.
fn germ_of(arg: &str, at: Option<&str>, g: &Global) -> Result<(Value, LocalGerm), Failure> {
    let (text, p) = polynomial(arg, g)?;
    match at {
        Some(s) => {
            let x = point(s)?;
            let hs = Hypersurface::new(p)?;
            let germ = move_to_origin(&hs, &x)?;
            Ok((json!({"polynomial": text, "point": x.to_string()}), germ))
        }
        None => Ok((json!({"polynomial": text}), LocalGerm::new(p)?)),
    }
}

fn budget_aware<T>(o: &mut Outcome, r: hypersing::Result<T>) -> Result<Option<T>, Failure> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { limit }) => {
            o.budget_exceeded = true;
            o.set("budget_exceeded", limit);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn dim_value(d: Dimension) -> Value {
    match d {
        Dimension::Finite(n) => json!(n),
        Dimension::Infinite => json!("inf"),
    }
}

fn run(cmd: &Command, g: &Global, s: &Settings) -> CmdResult {
    match cmd {
        Command::Mu { input, point } => {
            let (inp, germ) = germ_of(input, point.as_deref(), g)?;
            let mut o = Outcome::new(inp);
            o.set("germ", germ.poly().to_string_with(VarStyle::Affine));
            o.set("multiplicity", germ.order());
            let Some(mu) = budget_aware(&mut o, milnor_number(&germ, &mut s.new_budget()))? else {
                return Ok(o);
            };
            o.set("mu", dim_value(mu));
            if let Some(tau) = budget_aware(&mut o, tjurina_number(&germ, &mut s.new_budget()))? {
                o.set("tau", dim_value(tau));
                o.check("tau <= mu", tau <= mu, format!("{tau} <= {mu}"));
            }
            if let (Some(w), Dimension::Finite(m)) = (detect_weights(&germ), mu) {
                let mo = milnor_orlik(&w);
                o.set("weights", w.to_string());
                o.set("milnor_orlik", mo.to_string());
                o.check(
                    "milnor-orlik",
                    mo.is_integer() && mo.to_integer() == m.into(),
                    format!("{mo} vs {m}"),
                );
            }
            Ok(o)
        }
        Command::Sectional { input, point } => {
            let (inp, germ) = germ_of(input, point.as_deref(), g)?;
            let mut o = Outcome::new(inp);
            let Some(seq) = budget_aware(&mut o, germ_milnor_sequence(&germ, s))? else {
                return Ok(o);
            };
            let m = germ.order().unwrap_or(0);
            o.set("mu_sequence", seq.clone());
            o.set("multiplicity", m);
            o.check(
                "log-convex",
                hypersing::projective::is_log_convex(&seq),
                format!("{seq:?}"),
            );
            if seq.len() > 1 && m >= 1 {
                o.check("mu(1) = m - 1", seq[1] + 1 == u64::from(m), "");
            }
            Ok(o)
        }
        Command::Polar { input, points } => {
            let (text, p) = polynomial(input, g)?;
            let hs = Hypersurface::new(p)?;
            let pts: Vec<ProjectivePoint> =
                points.iter().map(|q| point(q)).collect::<Result<_, _>>()?;
            let mut o = Outcome::new(json!({
                "polynomial": text,
                "points": pts.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }));
            let Some(mus) = budget_aware(
                &mut o,
                hypersing::projective::milnor_numbers_at(&hs, &pts, s),
            )?
            else {
                return Ok(o);
            };
            o.set("milnor_numbers", mus.clone());
            let deg = polar_degree(&hs, &pts, s)?;
            o.set("polar_degree", deg);
            if hs.dim() == 2 {
                let count = planecurve::singular_point_count(&hs, s)?;
                o.set("singular_points_found", count);
                o.check(
                    "point list complete",
                    count == pts.len(),
                    format!("{count} found"),
                );
                let elim = polar_degree_elimination(&hs, &pts, s)?;
                o.set("polar_degree_elimination", elim);
                o.check(
                    "elimination agrees",
                    elim == deg,
                    format!("{elim} vs {deg}"),
                );
            }
            Ok(o)
        }
        Command::Cone { input } => {
            let (text, p) = polynomial(input, g)?;
            let hs = Hypersurface::new(p)?;
            let apex = apex_space(&hs);
            let mut o = Outcome::new(json!({"polynomial": text}));
            o.set("is_cone", apex.is_cone());
            o.set("apex_dimension", apex.dimension());
            let pts: Vec<String> = apex.points().iter().map(ToString::to_string).collect();
            o.set("apex_basis", pts);
            Ok(o)
        }
        Command::Branches { input, point } => {
            let (inp, germ) = germ_of(input, point.as_deref(), g)?;
            let mut o = Outcome::new(inp);
            let t = tangent_cone_lines(&germ)?;
            let Some(r) = budget_aware(&mut o, branch_count(&germ, s))? else {
                return Ok(o);
            };
            o.set("multiplicity", t.m);
            o.set("tangent_lines", t.t);
            o.set("branches", r.r);
            o.check("r >= t", r.r >= t.t as u64, "");
            if let Some(Dimension::Finite(mu)) =
                budget_aware(&mut o, milnor_number(&germ, &mut s.new_budget()))?
            {
                o.set("mu", mu);
                o.check("mu + r - 1 even", (mu + r.r - 1) % 2 == 0, "");
            }
            Ok(o)
        }
        Command::Classify { input, point } => {
            let (inp, germ) = germ_of(input, point.as_deref(), g)?;
            let mut o = Outcome::new(inp);
            let Some(seq) = budget_aware(&mut o, germ_milnor_sequence(&germ, s))? else {
                return Ok(o);
            };
            let ct = coarse_type(&germ, &seq)?;
            o.set("label", ct.label.to_string());
            o.set("mu", ct.mu);
            o.set("sectional_mu", ct.sectional_mu);
            o.set("mu_sequence", seq);
            if germ.order().is_some_and(|m| m >= 2) {
                o.set("corank", hessian_corank_at_origin(&germ)?);
            }
            Ok(o)
        }
        Command::Hessian { input, samples } => {
            let (text, p) = polynomial(input, g)?;
            let hs = Hypersurface::new(p)?;
            let v = hessian_vanishes(&hs, s.seed, *samples);
            let mut o = Outcome::new(json!({"polynomial": text}));
            o.set("vanishes", v.vanishes);
            o.set("certain", v.certain);
            o.set("samples", v.samples);
            o.set("determinant_degree", v.determinant_degree);
            o.set("error_bound", v.error_bound);
            Ok(o)
        }
        Command::Verify {
            record,
            corpus,
            parallelism,
        } => {
            let mut records = match corpus {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
                    parse_corpus(&text)?
                }
                None => builtin_corpus(),
            };
            if let Some(name) = record {
                records.retain(|r| &r.name == name);
                if records.is_empty() {
                    return Err(Failure::Usage(format!("no record named `{name}`")));
                }
            }
            let report = verify_all(&records, s, *parallelism);
            let mut o = Outcome::new(json!({
                "corpus": corpus.clone().unwrap_or_else(|| "builtin".into()),
                "record": record,
            }));
            o.budget_exceeded = report.budget_exceeded();
            o.set("records", report.records.len());
            if g.json {
                o.set(
                    "reports",
                    serde_json::to_value(&report.records).unwrap_or(Value::Null),
                );
            }
            for r in &report.records {
                let failures: Vec<String> = r
                    .failures()
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .collect();
                let detail = if failures.is_empty() {
                    format!("{:.2}s", r.seconds)
                } else {
                    failures.join("; ")
                };
                o.check(&r.name, r.status != Status::Fail, detail);
            }
            Ok(o)
        }
        Command::ExportCorpus { out } => {
            let text = format_corpus(&builtin_corpus());
            let mut o = Outcome::new(json!({"out": out}));
            match out {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
                    o.set("records", builtin_corpus().len());
                    o.set("written", path.clone());
                }
                None if g.json => o.set("corpus", text),
                None => print!("{text}"),
            }
            Ok(o)
        }
    }
}
