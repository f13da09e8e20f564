use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zpg::census::{census, EnumerationOptions, DEFAULT_BUDGET};
use zpg::classify::{check_prime, Descriptor};
use zpg::verify::verify;
use zpg::zeta::zeta_table;
use zpg::{Error, Result};

#[derive(Parser)]
#[command(name = "zpg", version, about = "Rank-one modules over the p-adic group ring of a cyclic group of order p")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for the census.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Cap on candidate partial bases visited by the census.
    #[arg(long, global = true, env = "ZPG_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the quotient described by a descriptor file.
    Classify { file: PathBuf },
    /// Enumerate and classify all submodules of index p^n.
    Census {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: u32,
    },
    /// Tabulate the submodule counts against their rational generating functions.
    Zeta {
        #[arg(short)]
        p: u64,
        #[arg(short = 'N')]
        order: usize,
        /// Use the free-count numerator (1 - p) u^2 instead of (p - 1) u^2.
        #[arg(long)]
        as_printed: bool,
    },
    /// Run the self-test suite for all modules of order up to p^depth.
    Verify {
        #[arg(short)]
        p: u64,
        #[arg(long)]
        depth: u32,
    },
}

/// Text for stdout and stderr, and whether a property failed.
struct Output {
    stdout: String,
    stderr: String,
    failed: bool,
}

fn unsupported(format: Format, cmd: &str) -> Error {
    let name = format.to_possible_value().expect("no skipped variants").get_name().to_string();
    Error::InvalidArgument(format!("{cmd} does not support --format {name}"))
}

fn run(cli: &Cli) -> Result<Output> {
    let opts = EnumerationOptions {
        budget: cli.budget,
        jobs: cli.jobs,
    };
    let mut out = Output {
        stdout: String::new(),
        stderr: String::new(),
        failed: false,
    };
    match &cli.command {
        Command::Classify { file } => {
            let format = cli.format.unwrap_or(Format::Json);
            if format != Format::Json {
                return Err(unsupported(format, "classify"));
            }
            let text = std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let descriptor: Descriptor = text.parse()?;
            out.stdout = format!("{}\n", descriptor.classify()?.to_json());
        }
        Command::Census { p, n } => {
            check_prime(*p)?;
            let report = census(*p, *n, &opts)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    out.stdout = String::from_utf8(buf).expect("CSV is ASCII");
                }
                Format::Json => {
                    let v = json!({
                        "p": report.p,
                        "n": report.n,
                        "total": report.total,
                        "ct": report.free_count,
                        "rows": report.rows,
                    });
                    out.stdout = format!("{v}\n");
                }
                f => return Err(unsupported(f, "census")),
            }
            out.stderr = format!("{}\n", report.summary());
        }
        Command::Zeta { p, order, as_printed } => {
            check_prime(*p)?;
            let rows = zeta_table(*p, *order, *as_printed)?;
            match cli.format.unwrap_or(Format::Tsv) {
                Format::Tsv => {
                    out.stdout.push_str("n\tb_n\tc_n\trational_b_n\trational_c_n\tflag_b\tflag_c\n");
                    for r in &rows {
                        out.stdout.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                            r.n, r.b, r.c, r.rational_b, r.rational_c, r.flag_b, r.flag_c
                        ));
                    }
                }
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "n": r.n,
                                "b_n": r.b.to_string(),
                                "c_n": r.c.to_string(),
                                "rational_b_n": r.rational_b.to_string(),
                                "rational_c_n": r.rational_c.to_string(),
                                "flag_b": r.flag_b,
                                "flag_c": r.flag_c,
                            })
                        })
                        .collect();
                    out.stdout = format!("{}\n", serde_json::Value::Array(v));
                }
                f => return Err(unsupported(f, "zeta")),
            }
            if *as_printed && rows.iter().any(|r| r.flag_c == "sign") {
                out.stderr = "free-count numerator (1 - p) u^2 gives the negated count for n >= 2\n".into();
            }
            out.failed = rows.iter().any(|r| r.is_mismatch());
        }
        Command::Verify { p, depth } => {
            check_prime(*p)?;
            let results = verify(*p, *depth, &opts)?;
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                out.stdout.push_str(&format!("{status}\t{}\t{}", r.name, r.checked));
                if let Some(w) = &r.witness {
                    out.stdout.push_str(&format!("\t{w}"));
                }
                out.stdout.push('\n');
            }
            out.failed = results.iter().any(|r| !r.passed());
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("zpg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
