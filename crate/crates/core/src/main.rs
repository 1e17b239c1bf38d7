//! Command-line front end: evolution runs, verification suites, and
//! direct evaluation of the R maps, the gamma map, and the limits.

use clap::{Args, Parser, Subcommand, ValueEnum};
use crystal_automata::basic_array::Kind;
use crystal_automata::crystal::{CarrierSpec, ElementA, ElementD};
use crystal_automata::dynamics::{evolve_factorized, evolve_r, expand_p, AutomatonState};
use crystal_automata::error::Error;
use crystal_automata::limits::limit_profile;
use crystal_automata::rmap_a::apply_r_a_with_pvalues;
use crystal_automata::rmap_d::apply_r_d_with_profile;
use crystal_automata::statefile::{parse_state, StateJson};
use crystal_automata::verify::{run_suite, Bounds, SUITES};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "crystal-automata", version, about = "Combinatorial R maps and the box-ball automaton")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    A,
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    R,
    Factorized,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write output to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a state file for a number of time steps.
    Evolve {
        /// State file path, or `-` for stdin.
        state: String,
        /// Expected kind; checked against the state file.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Expected rank; checked against the state file.
        #[arg(long)]
        n: Option<usize>,
        /// Expected capacities (comma separated); checked against the state file.
        #[arg(long)]
        capacities: Option<String>,
        /// Number of time steps.
        #[arg(long, default_value_t = 1)]
        steps: u32,
        /// Carrier: `vacuum` or finite coordinates `x_1,..,x_n` /
        /// `x_1,..,x_n|xbar_1,..,xbar_n`; `x_n` is saturated automatically.
        #[arg(long, default_value = "vacuum")]
        carrier: String,
        /// Which evolution to run; `both` also prints a diff section.
        #[arg(long, value_enum, default_value = "r")]
        mode: ModeArg,
        /// Recorded in JSON output for reproducibility.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name.
        suite: String,
        /// Size limits as `key=value,key=value`.
        #[arg(long, default_value = "")]
        bounds: String,
        /// PRNG seed for the sampled carriers.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply the combinatorial R to a single pair.
    RApply {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// `x_1,..,x_n` (A) or `x_1,..,x_n|xbar_1,..,xbar_n` (D).
        x: String,
        y: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the five-integer gamma map.
    Gamma {
        a: i64,
        b: i64,
        c: i64,
        d: i64,
        e: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the large-carrier limit profile for a type-D pair.
    Limits {
        /// Finite carrier coordinates `x_1,..,x_n|xbar_1,..,xbar_n`
        /// (`x_n` is ignored, `xbar_n` must be 0).
        x: String,
        y: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_coords(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::ParseError { line: 0, message: format!("bad coordinate {t:?}") })
        })
        .collect()
}

fn parse_element_a(s: &str) -> Result<ElementA, Error> {
    ElementA::new(parse_coords(s)?)
}

fn parse_element_d(s: &str) -> Result<ElementD, Error> {
    let (up, low) = s.split_once('|').ok_or_else(|| Error::ParseError {
        line: 0,
        message: "type-D coordinates need `upper|lower`".into(),
    })?;
    ElementD::new(parse_coords(up)?, parse_coords(low)?)
}

fn emit(output: &OutputArgs, text: String) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::ConfigError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_state_line(state: &AutomatonState) -> String {
    let arr = expand_p(state);
    let n = arr.n;
    let cell = |c: &crystal_automata::basic_array::Letter| -> String {
        if c.barred && c.index == n {
            "B".to_string()
        } else {
            c.to_string()
        }
    };
    if arr.blocks.iter().all(|&b| b == 1) {
        arr.cells.iter().map(cell).collect::<Vec<_>>().join(" ")
    } else {
        let mut parts = Vec::new();
        let mut start = 0;
        for &len in &arr.blocks {
            parts.push(arr.cells[start..start + len].iter().map(cell).collect::<Vec<_>>().join(" "));
            start += len;
        }
        parts.join(" | ")
    }
}

fn carrier_for(state: &AutomatonState, carrier: &str) -> Result<CarrierSpec, Error> {
    let n = state.rank();
    let margin = state.total_capacity();
    if carrier == "vacuum" {
        return CarrierSpec::vacuum(state.kind() == Kind::D, n, margin);
    }
    match state.kind() {
        Kind::A => {
            let mut coords = parse_coords(carrier)?;
            if coords.len() != n {
                return Err(Error::ConfigError(format!("carrier needs {n} coordinates")));
            }
            coords[n - 1] = 0;
            CarrierSpec::saturated_a(&coords, margin)
        }
        Kind::D => {
            let e = parse_element_d(carrier)?;
            if e.rank() != n {
                return Err(Error::ConfigError(format!("carrier needs {n} coordinates per side")));
            }
            CarrierSpec::saturated_d(e.upper(), e.lower(), margin)
        }
    }
}

#[derive(Serialize)]
struct EvolveJson {
    kind: String,
    n: usize,
    steps: u32,
    mode: String,
    seed: u64,
    timeline: Vec<StateJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factorized_timeline: Option<Vec<StateJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff_steps: Option<Vec<u32>>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    state_path: &str,
    kind: Option<KindArg>,
    n: Option<usize>,
    capacities: Option<String>,
    steps: u32,
    carrier: &str,
    mode: ModeArg,
    seed: u64,
    output: &OutputArgs,
) -> Result<bool, Error> {
    let text = if state_path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::ConfigError(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(state_path)
            .map_err(|e| Error::ConfigError(format!("cannot read {state_path}: {e}")))?
    };
    let state = parse_state(&text)?;
    if let Some(k) = kind {
        let want = if k == KindArg::A { Kind::A } else { Kind::D };
        if state.kind() != want {
            return Err(Error::ConfigError("state kind does not match --kind".into()));
        }
    }
    if let Some(n) = n {
        if state.rank() != n {
            return Err(Error::ConfigError("state rank does not match --n".into()));
        }
    }
    if let Some(caps) = capacities {
        if parse_coords(&caps)? != state.capacities() {
            return Err(Error::ConfigError("state capacities do not match --capacities".into()));
        }
    }
    let spec = carrier_for(&state, carrier)?;

    let run = |factorized: bool| -> Result<Vec<AutomatonState>, Error> {
        let mut timeline = vec![state.clone()];
        let mut current = state.clone();
        for _ in 0..steps {
            current = if factorized {
                evolve_factorized(&current, &spec)?
            } else {
                evolve_r(&current, &spec)?.0
            };
            timeline.push(current.clone());
        }
        Ok(timeline)
    };

    let (timeline, other) = match mode {
        ModeArg::R => (run(false)?, None),
        ModeArg::Factorized => (run(true)?, None),
        ModeArg::Both => (run(false)?, Some(run(true)?)),
    };
    let diff: Option<Vec<u32>> = other.as_ref().map(|o| {
        timeline
            .iter()
            .zip(o)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i as u32)
            .collect()
    });
    let clean = diff.as_ref().map(|d| d.is_empty()).unwrap_or(true);

    match output.format {
        FormatArg::Text => {
            let mut out = String::new();
            for s in &timeline {
                out.push_str(&render_state_line(s));
                out.push('\n');
            }
            if let Some(d) = &diff {
                out.push_str("diff:");
                if d.is_empty() {
                    out.push_str(" none\n");
                } else {
                    for step in d {
                        out.push_str(&format!(" t={step}"));
                    }
                    out.push('\n');
                }
            }
            emit(output, out)?;
        }
        FormatArg::Json => {
            let j = EvolveJson {
                kind: if state.kind() == Kind::A { "A".into() } else { "D".into() },
                n: state.rank(),
                steps,
                mode: match mode {
                    ModeArg::R => "r".into(),
                    ModeArg::Factorized => "factorized".into(),
                    ModeArg::Both => "both".into(),
                },
                seed,
                timeline: timeline.iter().map(StateJson::from_state).collect(),
                factorized_timeline: other
                    .as_ref()
                    .map(|o| o.iter().map(StateJson::from_state).collect()),
                diff_steps: diff,
            };
            emit(output, serde_json::to_string_pretty(&j).map_err(json_err)? + "\n")?;
        }
    }
    Ok(clean)
}

fn json_err(e: serde_json::Error) -> Error {
    Error::ConfigError(format!("json: {e}"))
}

fn cmd_verify(suite: &str, bounds: &str, seed: u64, output: &OutputArgs) -> Result<bool, Error> {
    let bounds = Bounds::parse(bounds)?;
    let report = run_suite(suite, &bounds, seed)?;
    match output.format {
        FormatArg::Text => {
            let mut out = format!(
                "suite={} cases={} failures={} millis={} seed={}\n",
                report.suite,
                report.cases,
                report.failures.len(),
                report.millis,
                report.seed
            );
            for f in &report.failures {
                out.push_str(&format!("FAIL {} :: {}\n", f.input, f.detail));
            }
            emit(output, out)?;
        }
        FormatArg::Json => {
            emit(output, serde_json::to_string_pretty(&report).map_err(json_err)? + "\n")?;
        }
    }
    Ok(report.passed())
}

fn cmd_r_apply(kind: KindArg, x: &str, y: &str, output: &OutputArgs) -> Result<(), Error> {
    match kind {
        KindArg::A => {
            let x = parse_element_a(x)?;
            let y = parse_element_a(y)?;
            let (xp, yp, p) = apply_r_a_with_pvalues(&x, &y)?;
            match output.format {
                FormatArg::Text => emit(
                    output,
                    format!("x' = {:?}\ny' = {:?}\nP = {:?}\n", xp.coords(), yp.coords(), p),
                )?,
                FormatArg::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        x_out: &'a [i64],
                        y_out: &'a [i64],
                        p: &'a [i64],
                    }
                    emit(
                        output,
                        serde_json::to_string_pretty(&Out {
                            x_out: xp.coords(),
                            y_out: yp.coords(),
                            p: &p,
                        })
                        .map_err(json_err)?
                            + "\n",
                    )?;
                }
            }
        }
        KindArg::D => {
            let x = parse_element_d(x)?;
            let y = parse_element_d(y)?;
            let reduces = x.is_barred_zero() && y.is_barred_zero();
            let (xp, yp, profile) = apply_r_d_with_profile(&x, &y)?;
            match output.format {
                FormatArg::Text => {
                    let mut out = String::new();
                    if reduces {
                        out.push_str("note: barred coordinates vanish; map reduces to type A\n");
                    }
                    out.push_str(&format!("x' = {:?}|{:?}\n", xp.upper(), xp.lower()));
                    out.push_str(&format!("y' = {:?}|{:?}\n", yp.upper(), yp.lower()));
                    out.push_str(&format!("V = {:?}\n", profile.v));
                    out.push_str(&format!("V* = {:?}\n", profile.vstar));
                    out.push_str(&format!(
                        "V_0^sigma1 = {}, V_n^sigman = {}\n",
                        profile.v0_sigma1, profile.vn_sigman
                    ));
                    out.push_str(&format!("W = {:?}\n", &profile.w[1..]));
                    emit(output, out)?;
                }
                FormatArg::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        x_out_upper: &'a [i64],
                        x_out_lower: &'a [i64],
                        y_out_upper: &'a [i64],
                        y_out_lower: &'a [i64],
                        v: &'a [i64],
                        v_star: &'a [i64],
                        v0_sigma1: i64,
                        vn_sigman: i64,
                        w: &'a [i64],
                        reduces_to_type_a: bool,
                    }
                    emit(
                        output,
                        serde_json::to_string_pretty(&Out {
                            x_out_upper: xp.upper(),
                            x_out_lower: xp.lower(),
                            y_out_upper: yp.upper(),
                            y_out_lower: yp.lower(),
                            v: &profile.v,
                            v_star: &profile.vstar,
                            v0_sigma1: profile.v0_sigma1,
                            vn_sigman: profile.vn_sigman,
                            w: &profile.w[1..],
                            reduces_to_type_a: reduces,
                        })
                        .map_err(json_err)?
                            + "\n",
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_gamma(a: i64, b: i64, c: i64, d: i64, e: i64, output: &OutputArgs) -> Result<(), Error> {
    let (f, g, h, i, j) = crystal_automata::gamma::gamma(a, b, c, d, e)?;
    match output.format {
        FormatArg::Text => emit(output, format!("({f}, {g}, {h}, {i}, {j})\n")),
        FormatArg::Json => {
            #[derive(Serialize)]
            struct Out {
                f: i64,
                g: i64,
                h: i64,
                i: i64,
                j: i64,
            }
            emit(
                output,
                serde_json::to_string_pretty(&Out { f, g, h, i, j }).map_err(json_err)? + "\n",
            )
        }
    }
}

fn cmd_limits(x: &str, y: &str, output: &OutputArgs) -> Result<(), Error> {
    let x = parse_element_d(x)?;
    let y = parse_element_d(y)?;
    let p = limit_profile(&x, &y)?;
    match output.format {
        FormatArg::Text => emit(
            output,
            format!(
                "v = {:?}\nv* = {:?}\nv_0^sigma1 = {}\nv_n^sigman = {}\nw = {:?}\n",
                p.v, p.vstar, p.v0_sigma1, p.vn_sigman, p.w
            ),
        ),
        FormatArg::Json => emit(
            output,
            serde_json::to_string_pretty(&serde_json::json!({
                "v": p.v,
                "v_star": p.vstar,
                "v0_sigma1": p.v0_sigma1,
                "vn_sigman": p.vn_sigman,
                "w": p.w,
            }))
            .map_err(json_err)?
                + "\n",
        ),
    }
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::ParseError { .. } | Error::ConfigError(_) | Error::UnknownSuite(_) => {
            ExitCode::from(2)
        }
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool, Error> = match cli.command {
        Command::Evolve {
            state,
            kind,
            n,
            capacities,
            steps,
            carrier,
            mode,
            seed,
            output,
        } => cmd_evolve(&state, kind, n, capacities, steps, &carrier, mode, seed, &output),
        Command::Verify { suite, bounds, seed, output } => {
            cmd_verify(&suite, &bounds, seed, &output)
        }
        Command::RApply { kind, x, y, output } => cmd_r_apply(kind, &x, &y, &output).map(|_| true),
        Command::Gamma { a, b, c, d, e, output } => {
            cmd_gamma(a, b, c, d, e, &output).map(|_| true)
        }
        Command::Limits { x, y, output } => cmd_limits(&x, &y, &output).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::UnknownSuite(_) = e {
                eprintln!("known suites: {}", SUITES.join(", "));
            }
            exit_code_for(&e)
        }
    }
}
