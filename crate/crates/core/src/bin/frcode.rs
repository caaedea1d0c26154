//! `frcode` command-line interface.
//!
//! Exit codes: 0 success, 1 validation failure under `--strict`,
//! 2 parse or usage error, 3 enumeration cap exceeded,
//! 4 infeasible or unrepairable result requested as a scalar.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use frcode::report::{self, AnalysisReport, Options};
use frcode::{
    corpus_code, generate, parse_frc, write_frc, Error, FrCode, GenSpec, Mode, NodeId,
    RepairOutcome, DEFAULT_SUBSET_CAP,
};

#[derive(Parser)]
#[command(name = "frcode", version)]
#[command(about = "Reconstruction, repair and rate analysis of fractional repetition codes")]
struct Cli {
    /// Print the machine-readable JSON report
    #[arg(long, global = true)]
    json: bool,

    /// Maximum number of subsets one exhaustive enumeration level may visit
    #[arg(long, global = true, value_name = "SUBSETS", default_value_t = DEFAULT_SUBSET_CAP)]
    cap: u64,

    /// Treat validation violations as fatal
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Greedy,
    Exact,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Greedy => Mode::Greedy,
            ModeArg::Exact => Mode::Exact,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validation and derived parameters
    Analyze { file: PathBuf },
    /// Reconstruction degrees k* and k_FR
    Reconstruct {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Print the greedy runs step by step
        #[arg(long)]
        trace: bool,
    },
    /// Repair degrees
    Repair {
        file: PathBuf,
        /// Only this node (1-based)
        #[arg(long, value_name = "I")]
        node: Option<usize>,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
    },
    /// Rate R(k) or the full rate profile
    #[command(group(ArgGroup::new("what").required(true).args(["k", "profile"])))]
    Rate {
        file: PathBuf,
        #[arg(short = 'k', value_name = "K")]
        k: Option<usize>,
        #[arg(long)]
        profile: bool,
    },
    /// Incidence matrix as 0/1 rows
    Matrix { file: PathBuf },
    /// Generate a seeded ρ-regular code in FRC1 format
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: usize,
        #[arg(long)]
        rho: usize,
        /// All nodes of equal size (requires n | rho*theta)
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a built-in code: table1, table2, table3, m11x8
    Corpus { name: String },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Limit { .. } => 3,
            Error::Infeasible { .. }
            | Error::Degenerate { .. }
            | Error::Unrepairable { .. }
            | Error::Exhausted { .. } => 4,
            Error::Range { .. }
            | Error::Structure(_)
            | Error::Parameter(_)
            | Error::Parse { .. }
            | Error::Semantic { .. } => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn load(path: &Path, strict: bool) -> Result<FrCode, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    let code = parse_frc(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    let validation = frcode::validate(&code);
    if !validation.ok {
        let lines: Vec<String> = validation
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect();
        if strict {
            return Err(Failure {
                code: 1,
                message: format!("validation failed:\n  {}", lines.join("\n  ")),
            });
        }
        for line in lines {
            eprintln!("warning: {line}");
        }
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut opts = Options {
        cap: cli.cap,
        seed: None,
    };
    let mut status = 0;
    let (report, text) = match cli.command {
        Command::Analyze { file } => {
            let code = load(&file, cli.strict)?;
            let r = report::analyze(&code, &opts);
            let t = render_analyze(&r);
            (r, t)
        }
        Command::Reconstruct { file, mode, trace } => {
            let code = load(&file, cli.strict)?;
            let r = report::reconstruct(&code, mode.into(), &opts)?;
            let t = render_degrees(&r, trace);
            (r, t)
        }
        Command::Repair { file, node, mode } => {
            let code = load(&file, cli.strict)?;
            let r = report::repair(&code, node.map(NodeId::new), mode.into(), &opts)?;
            if node.is_some() {
                let unrepairable = r.repair.as_ref().is_some_and(|rep| {
                    rep.per_node.iter().any(|n| {
                        [&n.greedy, &n.exact]
                            .into_iter()
                            .flatten()
                            .any(|o| matches!(o, RepairOutcome::Unrepairable(_)))
                    })
                });
                if unrepairable {
                    status = 4;
                }
            }
            let t = render_repair(&r);
            (r, t)
        }
        Command::Rate { file, k, profile } => {
            let code = load(&file, cli.strict)?;
            match (k, profile) {
                (Some(k), false) => {
                    let r = report::rate(&code, k, &opts)?;
                    let t = format!("{}\n", r.rate.expect("rate set").value);
                    (r, t)
                }
                (None, true) => {
                    let r = report::rate_profile(&code, &opts)?;
                    let t = r
                        .rate_profile
                        .as_ref()
                        .expect("profile set")
                        .iter()
                        .enumerate()
                        .map(|(i, v)| format!("R({}) = {v}\n", i + 1))
                        .collect();
                    (r, t)
                }
                _ => unreachable!("clap enforces exactly one of -k and --profile"),
            }
        }
        Command::Matrix { file } => {
            let code = load(&file, cli.strict)?;
            let r = report::matrix(&code, &opts);
            let t = r
                .matrix
                .as_ref()
                .expect("matrix set")
                .iter()
                .map(|row| {
                    let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                    cells.join(" ") + "\n"
                })
                .collect();
            (r, t)
        }
        Command::Generate {
            n,
            theta,
            rho,
            strong,
            seed,
        } => {
            let spec = if strong {
                GenSpec::strong(n, theta, rho, seed)
            } else {
                GenSpec::random(n, theta, rho, seed)
            };
            let code = generate(&spec)?;
            opts.seed = Some(seed);
            (report::emitted("generate", &code, &opts), write_frc(&code))
        }
        Command::Corpus { name } => {
            let code = corpus_code(&name)?;
            (report::emitted("corpus", &code, &opts), write_frc(&code))
        }
    };

    if cli.json {
        print!("{}", report.to_json());
    } else {
        print!("{text}");
    }
    if status == 4 {
        eprintln!("requested node is unrepairable");
    }
    Ok(status)
}

fn render_analyze(r: &AnalysisReport) -> String {
    let p = &r.params;
    let v = &r.validation;
    let mut out = format!(
        "n = {}, theta = {}, rho = {}\nalpha = {}\nalpha_i = {:?}\ndelta_i = {:?}\ndelta = {} ({})\n",
        p.n,
        p.theta,
        p.rho,
        p.alpha,
        p.alpha_i,
        p.delta_i,
        p.delta,
        if p.strong { "strong" } else { "weak" }
    );
    out += &format!(
        "eq1 residual n*alpha - rho*theta - delta = {}\n",
        v.eq1_residual
    );
    out += &format!("replication = {:?}\n", v.per_packet_replication);
    if v.ok {
        out += "validation: ok\n";
    } else {
        out += "validation: failed\n";
        for violation in &v.violations {
            out += &format!("  {violation}\n");
        }
    }
    out
}

fn render_degrees(r: &AnalysisReport, trace: bool) -> String {
    let d = r.degrees.as_ref().expect("degrees set");
    let mut out = format!("required packets = {}\n", d.required);
    if let Some(v) = d.k_star_greedy {
        out += &format!("k* (greedy upper bound) = {v}\n");
    }
    if let Some(v) = d.k_star_exact {
        out += &format!("k* (exact) = {v}\n");
    }
    if let Some(v) = d.k_fr_greedy {
        match v.value() {
            Some(v) => out += &format!("k_FR (greedy) = {v}\n"),
            None => out += "k_FR (greedy) = no valid run\n",
        }
    }
    if let Some(v) = d.k_fr_exact {
        out += &format!("k_FR (exact) = {v}\n");
    }
    if trace {
        for (label, traces) in [("k*", &d.k_star_traces), ("k_FR", &d.k_fr_traces)] {
            for t in traces.iter() {
                out += &format!(
                    "{label} run seed U_{} pool {} {:?}\n",
                    t.seed, t.pool, t.outcome
                );
                for s in &t.steps {
                    let covered: Vec<String> = s.covered.iter().map(|p| p.to_string()).collect();
                    out += &format!(
                        "  {}: U_{} -> P = {{{}}}\n",
                        s.counter,
                        s.node,
                        covered.join(",")
                    );
                }
            }
        }
    }
    out
}

fn outcome_text(o: &RepairOutcome) -> String {
    match o {
        RepairOutcome::Degree(d) => d.to_string(),
        RepairOutcome::Unrepairable(p) => {
            let p: Vec<String> = p.iter().map(|p| p.to_string()).collect();
            format!("unrepairable (packets {} stored nowhere else)", p.join(","))
        }
    }
}

fn render_repair(r: &AnalysisReport) -> String {
    let rep = r.repair.as_ref().expect("repair set");
    let mut out = String::new();
    for n in &rep.per_node {
        let mut parts = vec![format!("alpha_i = {}", n.alpha_i)];
        if let Some(g) = &n.greedy {
            parts.push(format!("greedy d = {}", outcome_text(g)));
        }
        if let Some(e) = &n.exact {
            parts.push(format!("exact d = {}", outcome_text(e)));
        }
        out += &format!("node {}: {}\n", n.node, parts.join(", "));
        for g in &n.groups {
            let p: Vec<String> = g.packets.iter().map(|p| p.to_string()).collect();
            out += &format!("  helper {} supplies {{{}}}\n", g.helper, p.join(","));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
