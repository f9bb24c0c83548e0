use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use whitney_dq::config::{ConfigOverrides, Format, RunConfig};
use whitney_dq::verify::{homology_run, run_suite, star_run};
use whitney_dq::Error;

#[derive(Parser)]
#[command(name = "whitney-dq", version, about = "Exact Fedosov star products on truncated Whitney algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print c_0..c_K of f ⋆ g.
    Star {
        f: String,
        g: String,
        /// Also print the product in the Whitney quotient of --subset.
        #[arg(long)]
        quotient: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers, Poisson homology and the duality table of --subset.
    Homology {
        /// Also compute Hochschild dimensions up to this degree.
        #[arg(long)]
        hochschild: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    jet_order: Option<u32>,
    #[arg(long)]
    fedosov_order: Option<u32>,
    #[arg(long)]
    hbar_order: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    hbar_min: Option<i32>,
    /// Built-in name or JSON file.
    #[arg(long)]
    subset: Option<String>,
    /// Built-in name or JSON file.
    #[arg(long)]
    connection: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// json or text.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    config: Option<String>,
}

impl Common {
    fn resolve(&self, command: &str) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(p) => Some(ConfigOverrides::from_json(
                &std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {}", p, e)))?,
            )?),
            None => None,
        };
        let flags = ConfigOverrides {
            dim: self.dim,
            jet_order: self.jet_order,
            fedosov_order: self.fedosov_order,
            hbar_order: self.hbar_order,
            hbar_min: self.hbar_min,
            connection: self.connection.clone(),
            subset: self.subset.clone(),
            seed: self.seed,
            trials: self.trials,
            format: self.format.as_deref().map(str::parse::<Format>).transpose()?,
        };
        RunConfig::resolve(command, file.as_ref(), &flags)
    }
}

fn emit(out: &Option<String>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

/// `Ok(true)` when the report passed.
fn run(cli: Cli) -> Result<(bool, String, Option<String>), Error> {
    match cli.command {
        Command::Star { f, g, quotient, common } => {
            let c = common.resolve("star")?;
            let r = star_run(&c, &f, &g, quotient)?;
            let text = match c.format {
                Format::Json => json(&r),
                Format::Text => {
                    let mut s = format!("{}\n", r.product);
                    for (k, ck) in r.coefficients.iter().enumerate() {
                        s += &format!("c_{} = {}\n", k, ck);
                    }
                    if let Some(q) = &r.quotient {
                        s += &format!("quotient: {}\n", q);
                    }
                    s
                }
            };
            Ok((true, text, common.out))
        }
        Command::Verify { suite, common } => {
            let c = common.resolve("verify")?;
            let r = run_suite(&c, &suite)?;
            let text = match c.format {
                Format::Json => r.to_json() + "\n",
                Format::Text => r.to_text(),
            };
            Ok((r.passed, text, common.out))
        }
        Command::Homology { hochschild, common } => {
            let c = common.resolve("homology")?;
            let r = homology_run(&c, hochschild)?;
            let text = match c.format {
                Format::Json => json(&r),
                Format::Text => r.to_text(),
            };
            Ok((r.duality_holds, text, common.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((passed, text, out)) => {
            if let Err(e) = emit(&out, &text) {
                eprintln!("error: {}", e);
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
