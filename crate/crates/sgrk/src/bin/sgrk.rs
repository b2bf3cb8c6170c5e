//! Command-line front end. Exit codes: 0 realizable / success,
//! 1 unrealizable (or simulation/co-simulation violation), 2 error.

use std::collections::HashMap;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sgrk::adapters;
use sgrk::bench;
use sgrk::error::Error;
use sgrk::grk;
use sgrk::oracle::{Compiled, ExplicitGame, DEFAULT_BUDGET};
use sgrk::spec::{parse_spec_text, GameSpec};

#[derive(Parser)]
#[command(name = "sgrk", about = "Separated GR(k) realizability and synthesis", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct CommonFlags {
    /// Print a machine-readable report on stdout.
    #[arg(long)]
    json: bool,
    /// Enable dynamic variable reordering in the kernel.
    #[arg(long)]
    reorder: bool,
    /// Seed for randomized subcommands (default: $SGRK_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide realizability of a spec (`-` reads stdin).
    Check {
        spec: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Synthesize a controller and export it as stratjson.
    Synth {
        spec: String,
        /// Output path for the strategy (or dump prefix with --dump-dd).
        #[arg(short, long)]
        out: String,
        /// Dump decision diagrams as DOT instead of enumerating rows.
        #[arg(long)]
        dump_dd: bool,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Replay an exported strategy against an environment.
    Simulate {
        spec: String,
        /// stratjson file produced by `synth`.
        #[arg(long)]
        strat: String,
        /// Environment: random | adversarial | script.
        #[arg(long, default_value = "random")]
        env: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Input script (one input bitstring per line) for --env script.
        #[arg(long)]
        script: Option<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Explicit brute-force verdict, or the random cross-check suite.
    Oracle {
        /// Spec to solve explicitly; omit to run the random suite.
        spec: Option<String>,
        /// Number of random instances for the suite.
        #[arg(long, default_value_t = 50)]
        count: u64,
        /// Threads for the random suite.
        #[arg(long, default_value_t = 1)]
        jobs: u64,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Generate a benchmark family instance.
    Bench {
        /// multimode | cleaning | railways.
        family: String,
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        m: u32,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Export the strict-semantics LTL formula for a spec.
    #[command(name = "export-ltl")]
    ExportLtl {
        spec: String,
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Assemble Adapter = Adaptee⁻¹ ∘ Controller ∘ Target.
    Adapter {
        #[arg(long)]
        target: String,
        #[arg(long)]
        adaptee: String,
        /// Separated GR(k) spec over the projected systems.
        #[arg(long)]
        grk: String,
        #[arg(short, long)]
        out: String,
    },
}

#[derive(Serialize)]
struct RunReport {
    schema: &'static str,
    command: String,
    spec: String,
    realizable: Option<bool>,
    n: u128,
    phi: usize,
    ops_used: u64,
    iterations: u64,
    wall_ms: f64,
    seed: u64,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn seed_of(flags: &CommonFlags) -> u64 {
    flags.seed.unwrap_or_else(|| {
        std::env::var("SGRK_SEED").ok().and_then(|v| v.parse().ok()).unwrap_or(0)
    })
}

fn reject_reorder(flags: &CommonFlags) -> Result<(), Error> {
    if flags.reorder {
        return Err(Error::Invalid(
            "dynamic variable reordering is not supported by this kernel".into(),
        ));
    }
    Ok(())
}

fn read_spec(path: &str) -> Result<GameSpec, Error> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    parse_spec_text(&text)
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Check { spec, flags } => cmd_check(&spec, &flags),
        Cmd::Synth { spec, out, dump_dd, flags } => cmd_synth(&spec, &out, dump_dd, &flags),
        Cmd::Simulate { spec, strat, env, steps, script, flags } => {
            cmd_simulate(&spec, &strat, &env, steps, script.as_deref(), &flags)
        }
        Cmd::Oracle { spec, count, jobs, flags } => {
            cmd_oracle(spec.as_deref(), count, jobs, &flags)
        }
        Cmd::Bench { family, n, m, out } => cmd_bench(&family, n, m, out.as_deref()),
        Cmd::ExportLtl { spec, out } => cmd_export_ltl(&spec, out.as_deref()),
        Cmd::Adapter { target, adaptee, grk, out } => {
            cmd_adapter(&target, &adaptee, &grk, &out)
        }
    }
}

fn report(
    flags: &CommonFlags,
    command: &str,
    spec_path: &str,
    spec: &GameSpec,
    sol: Option<&grk::Solution>,
    started: Instant,
) -> Result<(), Error> {
    let rep = RunReport {
        schema: "sgrk-report-1",
        command: command.to_string(),
        spec: spec_path.to_string(),
        realizable: sol.map(|s| s.realizable),
        n: spec.state_space_size(),
        phi: spec.phi_size(),
        ops_used: sol.map(|s| s.ops_used).unwrap_or(0),
        iterations: sol.map(|s| s.weak_buchi.iterations).unwrap_or(0),
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
        seed: seed_of(flags),
    };
    if flags.json {
        println!("{}", serde_json::to_string(&rep)?);
    } else {
        let verdict = match rep.realizable {
            Some(true) => "realizable",
            Some(false) => "unrealizable",
            None => "-",
        };
        println!(
            "{}: {} (N={}, |phi|={}, ops={}, iterations={}, {:.1} ms)",
            rep.spec, verdict, rep.n, rep.phi, rep.ops_used, rep.iterations, rep.wall_ms
        );
    }
    Ok(())
}

fn cmd_check(spec_path: &str, flags: &CommonFlags) -> Result<u8, Error> {
    reject_reorder(flags)?;
    let started = Instant::now();
    let spec = read_spec(spec_path)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    report(flags, "check", spec_path, &spec, Some(&sol), started)?;
    Ok(if sol.realizable { 0 } else { 1 })
}

fn cmd_synth(spec_path: &str, out: &str, dump_dd: bool, flags: &CommonFlags) -> Result<u8, Error> {
    reject_reorder(flags)?;
    let started = Instant::now();
    let spec = read_spec(spec_path)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    if !sol.realizable {
        let k = &game.kernel;
        let losing = k.sat_count(k.not(sol.win)?, &game.state_vars())?;
        eprintln!("unrealizable; environment wins from {losing} states");
        report(flags, "synth", spec_path, &spec, Some(&sol), started)?;
        return Ok(1);
    }
    if dump_dd {
        let k = &game.kernel;
        let ctrl = sol.controller.as_ref().unwrap();
        std::fs::write(format!("{out}.win.dot"), k.to_dot(sol.win, "win")?)?;
        std::fs::write(format!("{out}.fb.dot"), k.to_dot(ctrl.fb, "fb")?)?;
        std::fs::write(format!("{out}.acc.dot"), k.to_dot(ctrl.acc, "acc")?)?;
        if !flags.json {
            println!("wrote {out}.win.dot, {out}.fb.dot, {out}.acc.dot");
        }
    } else {
        let ctrl = sol.controller.as_ref().unwrap();
        let strat = grk::export_strategy(ctrl)?;
        std::fs::write(out, strat.to_json()?)?;
        if !flags.json {
            println!("wrote {} rows to {out}", strat.rows.len());
        }
    }
    report(flags, "synth", spec_path, &spec, Some(&sol), started)?;
    Ok(0)
}

fn bits_string(bits: u32, n: usize) -> String {
    (0..n).map(|j| if (bits >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

fn cmd_simulate(
    spec_path: &str,
    strat_path: &str,
    env: &str,
    steps: usize,
    script: Option<&str>,
    flags: &CommonFlags,
) -> Result<u8, Error> {
    reject_reorder(flags)?;
    let spec = read_spec(spec_path)?;
    let ni = spec.inputs.len();
    let no = spec.outputs.len();
    let strat = grk::StratFile::from_json(&std::fs::read_to_string(strat_path)?)?;
    if strat.header.inputs != spec.inputs || strat.header.outputs != spec.outputs {
        return Err(Error::Invalid("strategy variables do not match the spec".into()));
    }
    let table = strat.table()?;

    let mut index = HashMap::new();
    for (j, v) in spec.inputs.iter().chain(spec.outputs.iter()).enumerate() {
        index.insert(v.clone(), j);
    }
    let rho_i = Compiled::new(&spec.trans_env, &index)?;
    let rho_o = Compiled::new(&spec.trans_sys, &index)?;
    let th_i = Compiled::new(&spec.init_env, &index)?;
    let th_o = Compiled::new(&spec.init_sys, &index)?;
    let gars: Vec<Compiled> = spec
        .conjuncts
        .iter()
        .flat_map(|c| c.guarantees.iter())
        .map(|g| Compiled::new(g, &index))
        .collect::<Result<_, _>>()?;

    if ni + no >= 30 {
        return Err(Error::Invalid("simulate supports up to 29 variables".into()));
    }
    let init_i = (0..1u32 << ni)
        .find(|&i| th_i.eval(i, 0))
        .ok_or_else(|| Error::UnsatInitial("INIT_ENV unsatisfiable".into()))?;
    let init_o = (0..1u32 << no)
        .find(|&o| th_o.eval(init_i | (o << ni), 0))
        .ok_or_else(|| Error::UnsatInitial("INIT_SYS unsatisfiable".into()))?;
    let mut s = init_i | (init_o << ni);
    let mut mem = 0usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(flags));
    let scripted: Vec<u32> = match script {
        Some(path) => std::fs::read_to_string(path)?
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| parse_bits(l.trim()))
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    if env == "script" && scripted.is_empty() {
        return Err(Error::Invalid("--env script needs --script with inputs".into()));
    }

    println!("start state {}", bits_string(s, ni + no));
    for t in 0..steps {
        let legal: Vec<u32> = (0..1u32 << ni).filter(|&ip| rho_i.eval(s, ip)).collect();
        if legal.is_empty() {
            println!("step {t}: environment deadlocked");
            break;
        }
        let ip = match env {
            "script" => {
                if t >= scripted.len() {
                    break;
                }
                let ip = scripted[t];
                if !legal.contains(&ip) {
                    println!(
                        "step {t}: scripted input {} is illegal at {}",
                        bits_string(ip, ni),
                        bits_string(s, ni + no)
                    );
                    return Ok(1);
                }
                ip
            }
            "random" => legal[rng.gen_range(0..legal.len())],
            "adversarial" => {
                // prefer inputs whose tabulated reply scores fewest guarantees
                let score = |ip: u32| -> usize {
                    match table.get(&(mem, s, ip)) {
                        Some(&(op, _)) => {
                            let t2 = ip | (op << ni);
                            gars.iter().filter(|g| g.eval(t2, 0)).count()
                        }
                        None => usize::MAX,
                    }
                };
                let best = legal.iter().map(|&ip| score(ip)).min().unwrap();
                let tied: Vec<u32> =
                    legal.iter().copied().filter(|&ip| score(ip) == best).collect();
                tied[rng.gen_range(0..tied.len())]
            }
            other => {
                return Err(Error::Invalid(format!(
                    "unknown environment `{other}` (random|adversarial|script)"
                )))
            }
        };
        let (op, mem2) = match table.get(&(mem, s, ip)) {
            Some(&row) => row,
            None => {
                println!(
                    "step {t}: controller undefined at {} / input {}",
                    bits_string(s, ni + no),
                    bits_string(ip, ni)
                );
                return Ok(1);
            }
        };
        let s2 = ip | (op << ni);
        if !rho_o.eval(s, s2) {
            println!(
                "step {t}: strategy output {} violates TRANS_SYS at {}",
                bits_string(op, no),
                bits_string(s, ni + no)
            );
            return Ok(1);
        }
        println!(
            "step {t}: in={} out={} mem={mem2}",
            bits_string(ip, ni),
            bits_string(op, no)
        );
        s = s2;
        mem = mem2;
    }
    println!("ok: no violation");
    Ok(0)
}

fn parse_bits(s: &str) -> Result<u32, Error> {
    let mut out = 0u32;
    for (j, c) in s.chars().enumerate() {
        match c {
            '1' => out |= 1 << j,
            '0' => {}
            _ => return Err(Error::Invalid(format!("bad bitstring `{s}`"))),
        }
    }
    Ok(out)
}

fn cmd_oracle(
    spec_path: Option<&str>,
    count: u64,
    jobs: u64,
    flags: &CommonFlags,
) -> Result<u8, Error> {
    reject_reorder(flags)?;
    if let Some(path) = spec_path {
        let spec = read_spec(path)?;
        let g = ExplicitGame::from_spec(&spec, DEFAULT_BUDGET)?;
        let acc = g.grk_acc_per_scc();
        let win = g.solve_backward(&acc);
        let w = win.iter().filter(|&&b| b).count();
        let realizable = g.realizable(&win);
        if flags.json {
            println!(
                "{}",
                serde_json::json!({
                    "schema": "sgrk-report-1",
                    "command": "oracle",
                    "spec": path,
                    "realizable": realizable,
                    "win_states": w,
                    "n": g.n_states,
                    "seed": seed_of(flags),
                })
            );
        } else {
            println!(
                "{path}: {} |W|={w} of {}",
                if realizable { "realizable" } else { "unrealizable" },
                g.n_states
            );
        }
        return Ok(if realizable { 0 } else { 1 });
    }

    // random cross-check suite: symbolic vs explicit winning sets
    let base = seed_of(flags);
    let jobs = jobs.clamp(1, 16);
    let handles: Vec<std::thread::JoinHandle<Result<u64, String>>> = (0..jobs)
        .map(|j| {
            std::thread::spawn(move || {
                let mut done: u64 = 0;
                let mut k = j;
                while k < count {
                    let seed = base.wrapping_add(k);
                    if let Err(e) = cross_check(seed) {
                        return Err(format!("seed {seed}: {e}"));
                    }
                    done += 1;
                    k += jobs;
                }
                Ok(done)
            })
        })
        .collect();
    let mut total: u64 = 0;
    for h in handles {
        let done = h
            .join()
            .map_err(|_| Error::Invalid("suite worker panicked".into()))?
            .map_err(Error::Invalid)?;
        total += done;
    }
    println!("ok: {total} random instances agree (seed base {base})");
    Ok(0)
}

fn cross_check(seed: u64) -> Result<(), Error> {
    let spec = bench::gen_random_separated(seed, &bench::RandomParams::default());
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    let g = ExplicitGame::from_spec(&spec, DEFAULT_BUDGET)?;
    let acc = g.grk_acc_per_scc();
    let win = g.solve_backward(&acc);
    for s in 0..g.n_states as u32 {
        if game.eval_state(sol.win, s)? != win[s as usize] {
            return Err(Error::Invalid(format!(
                "winning sets disagree at state {}",
                g.show_state(s)
            )));
        }
    }
    if sol.realizable != g.realizable(&win) {
        return Err(Error::Invalid("realizability verdicts disagree".into()));
    }
    Ok(())
}

fn cmd_bench(family: &str, n: usize, m: u32, out: Option<&str>) -> Result<u8, Error> {
    let spec = match family {
        "multimode" => bench::gen_multimode(n)?,
        "cleaning" => bench::gen_cleaning(n)?,
        "railways" => bench::gen_railways(n, m)?,
        other => {
            return Err(Error::Invalid(format!(
                "unknown family `{other}` (multimode|cleaning|railways)"
            )))
        }
    };
    emit(out, &spec.print())
}

fn cmd_export_ltl(spec_path: &str, out: Option<&str>) -> Result<u8, Error> {
    let spec = read_spec(spec_path)?;
    spec.compile(true)?; // validate before exporting
    let mut text = bench::export_ltl(&spec);
    text.push('\n');
    emit(out, &text)
}

fn emit(out: Option<&str>, text: &str) -> Result<u8, Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_adapter(target: &str, adaptee: &str, grk_path: &str, out: &str) -> Result<u8, Error> {
    let target = adapters::parse_tx(&std::fs::read_to_string(target)?)?;
    let adaptee = adapters::parse_tx(&std::fs::read_to_string(adaptee)?)?;
    let spec = read_spec(grk_path)?;
    let game = spec.compile(true)?;
    let sol = grk::solve(&game)?;
    if !sol.realizable {
        eprintln!("unrealizable: no adapter exists");
        return Ok(1);
    }
    let adapter = adapters::assemble_adapter(&target, &adaptee, sol.controller.as_ref().unwrap())?;
    std::fs::write(out, adapters::print_tx(&adapter))?;
    println!("wrote adapter with {} states to {out}", adapter.states.len());
    Ok(0)
}
