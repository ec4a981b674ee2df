use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use seqmbqc::cv::{gaussian_graph_state, nullifier_variances, verify_eq2, verify_eq4_identity};
use seqmbqc::graph::{leaf_pairs, Weight, WeightedGraph};
use seqmbqc::par::Exec;
use seqmbqc::protocol::{
    bus_sigma, enumerate_branches, run_wire, wire_oracle, EntangleMode, TwoMemoryEngine, WireOutcomes,
};
use seqmbqc::qudit::{gates, QuditState};
use seqmbqc::report::Report;
use seqmbqc::suites::{run_suite, Summary, Suite, SuiteOptions, DEFAULT_ZETAS, IDENTITY_TOL, STATE_TOL};

const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "seqmbqc", version, about = "Verification suites and protocol demos for sequential MBQC")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one JSON report per case.
    Verify {
        /// swap, eq1, eq2, eq3, eq4, qudit, protocol, fig4 or cv-squeeze
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Qudit dimension; repeat for several.
        #[arg(long = "d")]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        zeta: Vec<f64>,
        /// Run cases one at a time.
        #[arg(long)]
        serial: bool,
        /// Add wall_time_ms to every report.
        #[arg(long)]
        timing: bool,
    },
    /// Drive the single-memory wire over an angle schedule.
    Wire {
        /// 0, 1, +, -, +i or -i
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        input: String,
        /// Comma-separated radians or a JSON array.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        angles: String,
        #[arg(long, value_enum, default_value_t = Branches::All)]
        branches: Branches,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Entangle two memories directly or through a bus register.
    Block2d {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Branches::All)]
        branches: Branches,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use a seeded random two-memory input instead of |++⟩.
        #[arg(long)]
        random_input: bool,
    },
    /// Nullifier variances of a finitely squeezed CV graph state.
    Cv {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        zeta: Vec<f64>,
    },
    /// Local complementation of a graph file.
    Lc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        /// Integer or `p/q`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        delta: String,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Branches {
    All,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Direct,
    Bus,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Vec<Report>, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { suite, max_n, random, seed, dims, zeta, serial, timing } => {
            let opts = SuiteOptions {
                max_n,
                random,
                seed,
                dims,
                zetas: if zeta.is_empty() { DEFAULT_ZETAS.to_vec() } else { zeta },
                exec: if serial { Exec::Serial } else { Exec::Parallel },
                timing,
            };
            Ok(run_suite(suite, &opts))
        }
        Command::Wire { input, angles, branches, seed } => cmd_wire(&input, &angles, branches, seed),
        Command::Block2d { mode, branches, seed, random_input } => cmd_block2d(mode, branches, seed, random_input),
        Command::Cv { graph, zeta } => cmd_cv(&graph, &zeta),
        Command::Lc { graph, vertex, delta, out } => return cmd_lc(&graph, vertex, &delta, out),
    };
    match result {
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
        Ok(reports) => {
            for r in &reports {
                println!("{}", r.to_json_line());
            }
            let s = Summary::of(&reports);
            eprintln!("{} passed, {} failed, {} errors", s.pass, s.fail, s.error);
            if s.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn parse_input(spec: &str) -> Result<QuditState, UsageError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re, im| Complex64::new(re, im);
    let amps = match spec {
        "0" => vec![c(1.0, 0.0), c(0.0, 0.0)],
        "1" => vec![c(0.0, 0.0), c(1.0, 0.0)],
        "+" => vec![c(h, 0.0), c(h, 0.0)],
        "-" => vec![c(h, 0.0), c(-h, 0.0)],
        "+i" => vec![c(h, 0.0), c(0.0, h)],
        "-i" => vec![c(h, 0.0), c(0.0, -h)],
        other => return Err(UsageError(format!("unknown input state `{other}`, expected 0, 1, +, -, +i or -i"))),
    };
    Ok(QuditState::from_amplitudes(1, 2, amps)?)
}

fn parse_angles(text: &str) -> Result<Vec<f64>, UsageError> {
    let text = text.trim();
    let angles: Vec<f64> = if text.starts_with('[') {
        serde_json::from_str(text)?
    } else if text.is_empty() {
        Vec::new()
    } else {
        text.split(',').map(|a| a.trim().parse::<f64>()).collect::<Result<_, _>>()?
    };
    if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
        return Err(UsageError(format!("angle {bad} is not finite")));
    }
    Ok(angles)
}

fn amplitudes_json(s: &QuditState) -> Value {
    json!(s.amplitudes().iter().map(|a| [a.re, a.im]).collect::<Vec<_>>())
}

fn cmd_wire(input: &str, angles: &str, branches: Branches, seed: u64) -> CmdResult {
    let psi = parse_input(input)?;
    let thetas = parse_angles(angles)?;
    if thetas.len() > 20 {
        return Err(UsageError("at most 20 angles".into()));
    }
    let want = wire_oracle(&psi, &thetas)?;
    let runs: Vec<(Vec<u8>, QuditState, Value)> = match branches {
        Branches::All => enumerate_branches(&psi, &thetas, Exec::Parallel)?
            .into_iter()
            .map(|b| (b.outcomes, b.logical, json!(b.trace)))
            .collect(),
        Branches::Sample => {
            let (logical, trace) = run_wire(&psi, &thetas, &WireOutcomes::Sample { seed })?;
            vec![(trace.outcomes(), logical, json!(trace))]
        }
    };
    let mut reports: Vec<Report> = runs
        .iter()
        .map(|(outs, logical, trace)| {
            Report::new(
                "wire.branch",
                logical.phase_residual(&want),
                STATE_TOL,
                json!({"outcomes": outs, "logical": amplitudes_json(logical), "trace": trace}),
            )
        })
        .collect();
    let spread = runs.iter().map(|(_, l, _)| l.phase_residual(&runs[0].1)).fold(0.0, f64::max);
    reports.push(Report::new(
        "wire.determinism",
        spread,
        STATE_TOL,
        json!({"input": input, "angles": thetas, "branches": runs.len(), "oracle": amplitudes_json(&want)}),
    ));
    Ok(reports)
}

fn cmd_block2d(mode: Mode, branches: Branches, seed: u64, random_input: bool) -> CmdResult {
    use rand::SeedableRng;
    let psi = if random_input {
        QuditState::random(2, 2, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))?
    } else {
        QuditState::plus_state(2, 2)?
    };
    // CZ by hand: flip the sign of |11⟩.
    let mut cz_amps = psi.amplitudes().to_vec();
    cz_amps[3] = -cz_amps[3];
    let cz_psi = QuditState::from_amplitudes(2, 2, cz_amps)?;

    match mode {
        Mode::Direct => {
            let mut e = TwoMemoryEngine::new(psi, seed)?;
            e.entangle(EntangleMode::Direct, None)?;
            Ok(vec![Report::new(
                "block2d.direct",
                e.stored_state().phase_residual(&cz_psi),
                IDENTITY_TOL,
                json!({"state": amplitudes_json(e.stored_state())}),
            )])
        }
        Mode::Bus => {
            let forced: Vec<Option<u8>> = match branches {
                Branches::All => vec![Some(0), Some(1)],
                Branches::Sample => vec![None],
            };
            let mut reports = Vec::new();
            for f in forced {
                let mut e = TwoMemoryEngine::new(psi.clone(), seed)?;
                let rec = e.entangle(EntangleMode::Bus, f)?;
                let s = rec.outcome.expect("bus records an outcome");
                let sp = gates::phase_s_pow(bus_sigma(s));
                let want = cz_psi.apply_matrix(0, &sp)?.apply_matrix(1, &sp)?;
                let raw = e.stored_state().phase_residual(&want);
                let corrected = e.corrected_state()?.phase_residual(&cz_psi);
                reports.push(Report::new(
                    "block2d.bus",
                    raw.max(corrected),
                    STATE_TOL,
                    json!({
                        "outcome": s,
                        "prob": rec.prob,
                        "sigma": rec.sigma,
                        "residual_vs_s_cz": raw,
                        "residual_vs_direct": corrected,
                        "peak_live_registers": e.peak_live_registers(),
                    }),
                ));
            }
            let worst = reports.iter().filter_map(|r| r.max_residual).fold(0.0, f64::max);
            reports.push(Report::new("block2d.equivalence", worst, STATE_TOL, json!({"branches": reports.len()})));
            Ok(reports)
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<WeightedGraph, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Ok(WeightedGraph::from_json(&text)?)
}

fn cmd_cv(path: &PathBuf, zetas: &[f64]) -> CmdResult {
    let g = read_graph(path)?;
    if g.modulus().is_some() {
        return Err(UsageError("cv needs a real-weighted graph (modulus null)".into()));
    }
    let zetas = if zetas.is_empty() { DEFAULT_ZETAS.to_vec() } else { zetas.to_vec() };
    if let Some(z) = zetas.iter().find(|z| !(**z >= 0.0 && z.is_finite())) {
        return Err(UsageError(format!("squeezing {z} must be finite and non-negative")));
    }
    let mut reports = Vec::new();
    for &z in &zetas {
        let vars = nullifier_variances(&gaussian_graph_state(&g, z)?, &g)?;
        let want = (-2.0 * z).exp() / 2.0;
        let dev = vars.iter().map(|v| (v - want).abs()).fold(0.0, f64::max);
        reports.push(Report::new("cv.variance", dev, STATE_TOL, json!({"zeta": z, "expected": want, "variances": vars})));
    }
    if g.is_unweighted() {
        for (m, r) in leaf_pairs(&g) {
            let res = verify_eq2(&g, m, r).map(|rep| rep.max_residual());
            reports.push(Report::from_result("cv.eq2", res, STATE_TOL, json!({"m": m, "r": r})));
        }
    }
    let eq4 = verify_eq4_identity();
    reports.push(Report::new("cv.eq4", eq4.max_residual(), IDENTITY_TOL, json!(eq4)));
    Ok(reports)
}

fn parse_weight(text: &str) -> Result<Weight, UsageError> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>()?, q.trim().parse::<i64>()?),
        None => (text.parse::<i64>()?, 1),
    };
    if den == 0 {
        return Err(UsageError("zero denominator".into()));
    }
    Ok(Weight::new(num, den))
}

fn cmd_lc(path: &PathBuf, vertex: usize, delta: &str, out: Option<PathBuf>) -> ExitCode {
    let run = || -> Result<(), UsageError> {
        let g = read_graph(path)?;
        let h = g.local_complement(vertex, parse_weight(delta)?)?;
        let text = h.to_json();
        match out {
            Some(p) => fs::write(&p, text + "\n").map_err(|e| UsageError(format!("{}: {e}", p.display()))),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
