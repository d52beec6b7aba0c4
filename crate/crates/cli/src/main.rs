use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser};
use serde_json::json;

use oqdm_core::golden::{example, examples, GoldenReport};
use oqdm_core::pipeline::{self, Input};
use oqdm_core::report::{build_document, renderer, SectionId};
use oqdm_core::Error;

/// Orbifold quantum cohomology of weighted projective spaces and their Fano hypersurfaces.
#[derive(Parser, Debug)]
#[command(name = "oqdm", version)]
struct Cli {
    /// Weights w0,w1,... (comma separated).
    #[arg(long, value_delimiter = ',', required_unless_present_any = ["reproduce_paper", "only"])]
    weights: Vec<u64>,

    /// Degree of a hypersurface in P(weights); omit for P(weights) itself.
    #[arg(long)]
    degree: Option<u64>,

    #[arg(long, default_value = "json", value_parser = ["json", "markdown", "latex"])]
    format: String,

    /// Comma-separated subset of data,matrix,table,classical,grading,pairing,gauge.
    #[arg(long, value_delimiter = ',')]
    sections: Vec<String>,

    /// Check the worked examples against fresh runs.
    #[arg(long, conflicts_with_all = ["weights", "degree"])]
    reproduce_paper: bool,

    /// Run a single worked example: p123, p113, x3-cp4 or x3-p1112.
    #[arg(long, conflicts_with_all = ["weights", "degree"])]
    only: Option<String>,

    /// Write the document here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Pipeline(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidInput(_) | Error::Parse(_) => Failure::Input(e.to_string()),
            _ => Failure::Pipeline(e.to_string()),
        }
    }
}

fn render_golden(reports: &[GoldenReport], format: &str) -> String {
    match format {
        "json" => {
            let v = json!({
                "examples": reports.iter().map(|r| json!({
                    "id": r.id,
                    "title": r.title,
                    "pass": r.pass(),
                    "checks": r.checks.iter().map(|c| json!({
                        "name": c.name,
                        "pass": c.pass,
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        "latex" => {
            let mut s = String::from("\\begin{tabular}{lll}\n");
            for r in reports {
                for c in &r.checks {
                    let _ = writeln!(
                        s,
                        "{} & {} & {} \\\\",
                        r.id,
                        c.name.replace('_', "\\_"),
                        if c.pass { "PASS" } else { "FAIL" }
                    );
                }
            }
            s.push_str("\\end{tabular}\n");
            s
        }
        _ => {
            let mut s = String::new();
            for r in reports {
                let _ = writeln!(s, "{} {} ({})", if r.pass() { "PASS" } else { "FAIL" }, r.id, r.title);
                for c in r.checks.iter().filter(|c| !c.pass) {
                    let _ = writeln!(s, "  - {}: {}", c.name, c.detail);
                }
            }
            s
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if cli.reproduce_paper || cli.only.is_some() {
        let chosen = match &cli.only {
            Some(id) => vec![example(id)?],
            None => examples().to_vec(),
        };
        let reports: Vec<GoldenReport> = chosen.iter().map(|e| e.reproduce()).collect();
        emit(&render_golden(&reports, &cli.format), &cli.out)?;
        return Ok(reports.iter().all(GoldenReport::pass));
    }
    let sections = if cli.sections.is_empty() {
        SectionId::ALL.to_vec()
    } else {
        cli.sections
            .iter()
            .map(|s| SectionId::parse(s.trim()))
            .collect::<Result<_, _>>()?
    };
    let input = Input {
        weights: cli.weights.clone(),
        degree: cli.degree,
        hbar_cap: None,
    };
    let p = pipeline::select(&input)?;
    p.validate(&input)?;
    let output = p.run(&input)?;
    let doc = build_document(&output, &sections);
    emit(&renderer(&cli.format)?.render(&doc), &cli.out)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Pipeline(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
