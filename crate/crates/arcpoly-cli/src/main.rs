//! Command-line front-end: coefficient tables, evaluation, zeros, quadrature
//! rules, Verblunsky sweeps, verification suites and plot emission.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage/config error,
//! 3 numeric failure.

mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use arcpoly::measure::Measure;
use arcpoly::opuc;
use arcpoly::quadrature::QuadratureRule;
use arcpoly::recurrence::RecurrenceTable;
use arcpoly::verify;
use arcpoly::zeros::find_zeros;

const MAX_TABLE_DEPTH: usize = 40;

#[derive(Parser)]
#[command(
    name = "arcpoly",
    about = "Orthogonal functions with a sqrt(1-x^2) component: tables, zeros, quadrature and unit-circle data",
    version
)]
struct Cli {
    /// Measure config: inline JSON or a path to a JSON file
    #[arg(long, global = true)]
    measure: Option<String>,
    /// JSON file with default settings; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized verification draws (hex, e.g. 0x5EED)
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Tolerance override for verification suites
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recurrence coefficient table beta, alpha, rho up to order n
    Coeffs {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Evaluate family members at given points
    Eval {
        /// Orders, comma separated
        #[arg(long)]
        m: String,
        /// Points in [-1,1], comma separated
        #[arg(long)]
        x: String,
    },
    /// Zeros of the order-m family member
    Zeros {
        #[arg(long)]
        m: usize,
    },
    /// Quadrature rule at the zeros of the order-m member
    Quad {
        #[arg(long)]
        m: usize,
    },
    /// Verblunsky coefficients of the jump-t probability measures
    Verblunsky {
        #[arg(long)]
        n: Option<usize>,
        /// Jump parameters in [0,1), comma separated
        #[arg(long, default_value = "0")]
        t: String,
    },
    /// Run a verification suite (orthogonality, quadrature, chain, opuc, bridge, zeros, all)
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// SVG plot of family members over [-1,1]
    Plot {
        /// Orders, comma separated
        #[arg(long)]
        orders: String,
        #[arg(long, default_value_t = 800)]
        samples: usize,
        /// Mark the zeros on each curve
        #[arg(long)]
        markers: bool,
    },
}

enum CliError {
    Usage(String),
    Numeric(String),
    VerificationFailed,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::VerificationFailed => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn numeric(err: impl std::fmt::Display) -> CliError {
    CliError::Numeric(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Numeric(m) => eprintln!("numeric failure: {m}"),
                CliError::VerificationFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.code())
        }
    }
}

/// Defaults from the optional config file; explicit flags win.
struct Resolved {
    measure: Measure,
    format: Format,
    out: Option<PathBuf>,
    seed: u64,
    tol: Option<f64>,
    n: Option<usize>,
}

fn resolve(cli: &Cli) -> Result<Resolved, CliError> {
    let file_cfg: serde_json::Value = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("bad config JSON: {e}")))?
        }
        None => serde_json::Value::Null,
    };

    let measure_text = match (&cli.measure, file_cfg.get("measure")) {
        (Some(m), _) => m.clone(),
        (None, Some(v)) => v.to_string(),
        (None, None) => r#"{"kind":"builtin","name":"one_minus_x"}"#.to_string(),
    };
    // inline JSON or a file path
    let trimmed = measure_text.trim();
    let measure_json = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        std::fs::read_to_string(trimmed)
            .map_err(|e| usage(format!("cannot read measure file {trimmed}: {e}")))?
    };
    let measure = Measure::from_json(&measure_json).map_err(|e| usage(e.to_string()))?;

    let format = cli
        .format
        .unwrap_or(match file_cfg.get("format").and_then(|v| v.as_str()) {
            Some("json") => Format::Json,
            Some("svg") => Format::Svg,
            _ => Format::Csv,
        });
    let seed_text = cli.seed.clone().or_else(|| {
        file_cfg
            .get("seed")
            .and_then(|v| v.as_str().map(String::from))
    });
    let seed = match seed_text {
        Some(s) => {
            let s = s.trim().trim_start_matches("0x").trim_start_matches("0X");
            u64::from_str_radix(s, 16).map_err(|_| usage(format!("bad hex seed `{s}`")))?
        }
        None => verify::DEFAULT_SEED,
    };
    let tol = cli
        .tol
        .or_else(|| file_cfg.get("tol").and_then(|v| v.as_f64()));
    let n = file_cfg
        .get("n")
        .and_then(|v| v.as_u64())
        .map(|v| v as usize);
    Ok(Resolved {
        measure,
        format,
        out: cli.out.clone(),
        seed,
        tol,
        n,
    })
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn depth_arg(n: Option<usize>, cfg: &Resolved, default: usize) -> Result<usize, CliError> {
    let n = n.or(cfg.n).unwrap_or(default);
    if n == 0 || n > MAX_TABLE_DEPTH {
        return Err(usage(format!(
            "table depth must be in 1..={MAX_TABLE_DEPTH}, got {n}"
        )));
    }
    Ok(n)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("bad {what} `{s}`")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli)?;
    match &cli.cmd {
        Cmd::Coeffs { n } => {
            let n = depth_arg(*n, &cfg, 6)?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let content = match cfg.format {
                Format::Json => {
                    let mut v = table.to_json();
                    v["measure"] = cfg.measure.config_json();
                    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
                }
                _ => table.to_csv(),
            };
            emit(&cfg.out, &content)
        }
        Cmd::Eval { m, x } => {
            let orders: Vec<usize> = parse_list(m, "order")?;
            let points: Vec<f64> = parse_list(x, "point")?;
            let top = *orders
                .iter()
                .max()
                .ok_or_else(|| usage("no orders given"))?;
            let n = depth_arg(Some(top.max(1)), &cfg, 6)?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let mut rows = Vec::new();
            for &m in &orders {
                for &x in &points {
                    let v = table.w(m).eval(x).map_err(numeric)?;
                    rows.push((m, x, v));
                }
            }
            let content = match cfg.format {
                Format::Json => {
                    let items: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|&(m, x, v)| serde_json::json!({"m": m, "x": x, "value": v}))
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&items).unwrap())
                }
                _ => {
                    let mut s = String::from("m,x,value\n");
                    for (m, x, v) in rows {
                        s.push_str(&format!("{m},{x:.14e},{v:.14e}\n"));
                    }
                    s
                }
            };
            emit(&cfg.out, &content)
        }
        Cmd::Zeros { m } => {
            let n = depth_arg(Some(*m), &cfg, 6)?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let zeros = find_zeros(table.w(*m)).map_err(numeric)?;
            let content = match cfg.format {
                Format::Json => {
                    format!("{}\n", serde_json::to_string_pretty(&zeros).unwrap())
                }
                _ => zeros.to_csv(),
            };
            emit(&cfg.out, &content)
        }
        Cmd::Quad { m } => {
            let n = depth_arg(Some(*m), &cfg, 6)?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let rule = QuadratureRule::build(&table, &cfg.measure, *m).map_err(numeric)?;
            let content = match cfg.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "m": rule.order(),
                        "x": rule.nodes().x,
                        "lambda": rule.lambda(),
                        "lambda_hat": rule.lambda_hat(),
                        "lambda_tilde": rule.lambda_tilde(),
                    });
                    format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
                }
                _ => rule.to_csv(),
            };
            emit(&cfg.out, &content)
        }
        Cmd::Verblunsky { n, t } => {
            let n = depth_arg(*n, &cfg, 8)?;
            let jumps: Vec<f64> = parse_list(t, "jump parameter")?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let chain = opuc::chain_for_measure(&table, &cfg.measure).map_err(numeric)?;
            let beta: Vec<f64> = (1..=n).map(|m| table.beta(m)).collect();
            let mut objects = Vec::new();
            for &t in &jumps {
                let seq = opuc::verblunsky(&chain, &beta, t).map_err(numeric)?;
                objects.push(seq.to_json());
            }
            let value = if objects.len() == 1 {
                objects.pop().unwrap()
            } else {
                serde_json::Value::Array(objects)
            };
            emit(
                &cfg.out,
                &format!("{}\n", serde_json::to_string_pretty(&value).unwrap()),
            )
        }
        Cmd::Verify { suite, n } => {
            let n = depth_arg(*n, &cfg, 12)?;
            let reports = run_suites(suite, &cfg, n)?;
            let mut text = String::new();
            for r in &reports {
                text.push_str(&r.render_text());
            }
            let all_pass = reports.iter().all(|r| r.passed());
            text.push_str(&format!(
                "overall: {}\n",
                if all_pass { "PASS" } else { "FAIL" }
            ));
            match cfg.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "reports": reports,
                        "pass": all_pass,
                    });
                    emit(
                        &cfg.out,
                        &format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
                    )?;
                }
                _ => emit(&cfg.out, &text)?,
            }
            if cfg.out.is_some() {
                // keep the human-readable run log visible
                print!("{text}");
            }
            if all_pass {
                Ok(())
            } else {
                Err(CliError::VerificationFailed)
            }
        }
        Cmd::Plot {
            orders,
            samples,
            markers,
        } => {
            let orders: Vec<usize> = parse_list(orders, "order")?;
            let top = (*orders
                .iter()
                .max()
                .ok_or_else(|| usage("no orders given"))?)
            .max(1);
            let n = depth_arg(Some(top), &cfg, 6)?;
            let table = RecurrenceTable::generate(&cfg.measure, n).map_err(numeric)?;
            let mut curves = Vec::new();
            for &m in &orders {
                let mut points = Vec::with_capacity(*samples);
                for i in 0..*samples {
                    let x = -1.0 + 2.0 * i as f64 / (*samples as f64 - 1.0);
                    let x = x.clamp(-1.0, 1.0);
                    points.push((x, table.w(m).eval(x).map_err(numeric)?));
                }
                let zero_marks = if *markers && m >= 1 {
                    find_zeros(table.w(m)).map_err(numeric)?.x
                } else {
                    Vec::new()
                };
                curves.push(svg::Curve {
                    label: format!("order {m}"),
                    points,
                    markers: zero_marks,
                });
            }
            emit(&cfg.out, &svg::render(&curves))
        }
    }
}

fn run_suites(suite: &str, cfg: &Resolved, n: usize) -> Result<Vec<verify::SuiteReport>, CliError> {
    let psi = &cfg.measure;
    let one = |r: Result<verify::SuiteReport, Box<dyn std::error::Error>>| r.map_err(numeric);
    let mut reports = Vec::new();
    let names: Vec<&str> = if suite == "all" {
        vec![
            "orthogonality",
            "quadrature",
            "chain",
            "opuc",
            "bridge",
            "zeros",
        ]
    } else {
        vec![suite]
    };
    for name in names {
        match name {
            "orthogonality" => reports.push(one(verify::orthogonality_suite(
                psi,
                n,
                cfg.tol.unwrap_or(1e-8),
            ))?),
            "quadrature" => reports.push(one(verify::quadrature_suite(
                psi,
                cfg.seed,
                cfg.tol.unwrap_or(1e-9),
            ))?),
            "chain" => reports.push(one(verify::chain_suite(psi, n, cfg.tol.unwrap_or(1e-10)))?),
            "opuc" => reports.push(one(verify::opuc_suite(psi, n.min(8), cfg.seed))?),
            "bridge" => reports.push(one(verify::bridge_suite(
                cfg.seed,
                cfg.tol.unwrap_or(1e-12),
            ))?),
            "zeros" => reports.push(one(verify::zeros_suite(psi, n))?),
            other => return Err(usage(format!("unknown suite `{other}`"))),
        }
    }
    Ok(reports)
}
