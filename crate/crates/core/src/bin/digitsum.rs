use clap::{Parser, Subcommand, ValueEnum};
use digitsum::altsum;
use digitsum::digitseq::{delta_digit_sum, digit_sum, thue_morse_sign, Base};
use digitsum::harness::{self, emit_report, Format, GridSpec, RunReport};
use digitsum::lambert;
use digitsum::report::{format_real, ParamValue, Tolerance};
use digitsum::{Error, PrecisionContext, Result};
use num_traits::ToPrimitive;
use std::io::{self, Write};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "digitsum", version, about = "Digit-sum identities: evaluation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Table of s_b(n), v_2(n), s_2(n+1) - s_2(n) and the Thue-Morse sign, as CSV.
    Seq {
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 32)]
        count: u64,
    },
    /// Evaluate one identity at one parameter point and print its report as JSON.
    Eval {
        id: String,
        /// Parameter assignment `name=value`; unset parameters take the first default value.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run an identity's grid, or every default grid with `--suite all`.
    Verify {
        #[arg(long)]
        suite: String,
        /// Flat JSON object mapping parameter names to value lists.
        #[arg(long)]
        grid: Option<std::path::PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
    },
    /// Weight table of prod_{i<N} (1 + x^{2^i})^{N-i}.
    Weights {
        #[arg(long = "N")]
        n: u32,
        /// Divide by the total 2^{N(N+1)/2}.
        #[arg(long)]
        normalized: bool,
    },
    /// Standardized cumulants of Z_N: closed form next to the exact-law value.
    Cumulants {
        #[arg(long = "N")]
        n: u32,
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 6, 8])]
        orders: Vec<u32>,
    },
    /// Generating function sum s_b(n) z^n, infinite or truncated below b^p.
    Gf {
        #[arg(long)]
        base: u32,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        z: f64,
    },
}

fn parse_assignment(s: &str) -> Result<(String, ParamValue)> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::Schema {
        id: String::new(),
        detail: format!("expected name=value, got {s}"),
    })?;
    let value = if let Ok(i) = v.parse::<i64>() {
        ParamValue::Int(i)
    } else if let Ok(x) = v.parse::<f64>() {
        ParamValue::Real(x)
    } else {
        ParamValue::Text(v.to_string())
    };
    Ok((k.to_string(), value))
}

fn override_tol(id: &str, tol: Option<f64>) -> Result<Option<Tolerance>> {
    let base = harness::lookup(id)?.tolerance;
    Ok(tol.map(|rel| Tolerance { rel, ..base }))
}

fn run(command: Command, out: &mut impl Write) -> Result<bool> {
    let ctx = PrecisionContext::default();
    match command {
        Command::Seq { base, start, count } => {
            let b = Base::new(base)?;
            writeln!(out, "n,digit_sum,nu2,delta_s2,thue_morse")?;
            for n in start..start.saturating_add(count) {
                let nu = if n == 0 { String::new() } else { n.trailing_zeros().to_string() };
                writeln!(
                    out,
                    "{n},{},{nu},{},{}",
                    digit_sum(n, b),
                    delta_digit_sum(n, Base::BINARY),
                    thue_morse_sign(n)
                )?;
            }
            Ok(true)
        }
        Command::Eval { id, params, tol } => {
            let mut grid = GridSpec::new(&id);
            for a in &params {
                let (k, v) = parse_assignment(a)?;
                grid = grid.with_param(&k, vec![v]);
            }
            let entry = harness::lookup(&id)?;
            for (name, _) in entry.schema {
                if !grid.params.iter().any(|(k, _)| k == name) {
                    let default = entry.default_grid();
                    let first = default.params.iter().find(|(k, _)| k == name).map(|(_, v)| v[0].clone());
                    grid = grid.with_param(name, first.into_iter().collect());
                }
            }
            grid.tolerance = override_tol(&id, tol)?;
            let run = harness::run_suite(&grid, &ctx)?;
            match run.reports.as_slice() {
                [one] => writeln!(out, "{}", harness::report_json(one))?,
                many => {
                    let rows: Vec<String> = many.iter().map(harness::report_json).collect();
                    writeln!(out, "[{}]", rows.join(",\n"))?
                }
            }
            Ok(run.all_passed())
        }
        Command::Verify { suite, grid, tol, format } => {
            let grids = if suite == "all" {
                if grid.is_some() {
                    return Err(Error::Schema {
                        id: suite,
                        detail: "a grid file applies to a single identity".into(),
                    });
                }
                let mut grids = harness::default_suite();
                for g in &mut grids {
                    g.tolerance = override_tol(&g.identity_id, tol)?;
                }
                grids
            } else {
                let mut g = match grid {
                    Some(path) => GridSpec::from_json(&suite, &std::fs::read_to_string(path)?)?,
                    None => harness::lookup(&suite)?.default_grid(),
                };
                g.tolerance = override_tol(&suite, tol)?;
                vec![g]
            };
            let run: RunReport = harness::run_grids(&grids, &ctx)?;
            let format = match format {
                OutFormat::Json => Format::Json,
                OutFormat::Csv => Format::Csv,
            };
            emit_report(&run, format, out)?;
            eprintln!(
                "{} reports, {} passed, {} failed, worst rel err {}, {:.2?}",
                run.summary.total,
                run.summary.passed,
                run.summary.failed,
                format_real(run.worst_rel_err),
                run.wall_time
            );
            Ok(run.all_passed())
        }
        Command::Weights { n, normalized } => {
            let table = altsum::alpha_weights(n)?;
            if normalized {
                for (k, p) in table.probabilities().iter().enumerate() {
                    writeln!(out, "{k}\t{p}")?;
                }
            } else {
                for k in 0..table.len() {
                    writeln!(out, "{k}\t{}", table.get(k))?;
                }
            }
            Ok(true)
        }
        Command::Cumulants { n, orders } => {
            let pmf = altsum::zn_pmf(n)?;
            writeln!(out, "order\tclosed\tlaw\tclosed_f64\tequal")?;
            let mut all = true;
            for order in orders {
                let closed = altsum::standardized_cumulant_exact(n, order)?;
                let law = pmf.standardized_cumulant(order)?;
                let equal = closed == law;
                all &= equal;
                let approx = closed.to_f64().map(format_real).unwrap_or_default();
                writeln!(out, "{order}\t{closed}\t{law}\t{approx}\t{equal}")?;
            }
            Ok(all)
        }
        Command::Gf { base, p, z } => {
            match p {
                Some(p) => writeln!(out, "{}", format_real(lambert::lambert_gf_finite(base, p, z, &ctx)?))?,
                None => {
                    let v = lambert::lambert_gf(base, z, &ctx)?;
                    writeln!(
                        out,
                        "{}\tterms={}\ttail_bound={}",
                        format_real(v.value),
                        v.truncation.terms,
                        format_real(v.truncation.tail_bound)
                    )?
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
