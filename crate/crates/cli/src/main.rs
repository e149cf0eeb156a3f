mod args;
mod commands;
mod input;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::Cli;
use commands::Output;
use partfn_core::error::Error;

/// Usage errors exit with 2, capacity errors with 3, and a failed
/// theorem-backed check with 1.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => 3,
        Error::InvalidInput(_) | Error::Parse(_) | Error::KindMismatch(..) => 2,
        _ => 1,
    }
}

/// Replaces every exact-number string with a float.
fn floatify(v: &mut Value) {
    match v {
        Value::String(s) => {
            let looks_rational = !s.is_empty()
                && s.trim_start_matches('-').chars().all(|c| c.is_ascii_digit() || c == '/')
                && s.chars().any(|c| c.is_ascii_digit());
            if looks_rational {
                if let Ok(r) = partfn_core::exact::parse_rat(s) {
                    *v = serde_json::json!(partfn_core::exact::to_f64(&r));
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(floatify),
        Value::Object(o) => o.values_mut().for_each(floatify),
        _ => {}
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_code(&e));
        }
    };
    let text = match outcome.output {
        Output::Text(t) => t,
        Output::Json(mut v) => {
            if cli.float {
                floatify(&mut v);
            }
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code as u8)
}
