//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 protocol abort, 3 consistency
//! scan failure. JSON goes to stdout with a top-level `"schema": 1`; diagnostics
//! go to stderr.

use crate::adversary::{
    dishonest_bob_in_run, dishonest_participant_attack, eve_intercept_resend,
    intercept_resend_campaign, tp_campaign, tp_classical_attack, AttackKind, AttackOutcome,
    TpAttack,
};
use crate::analysis::{
    correctness_scan, leak_monte_carlo, render_table1, Resource, ScanRow, Table1Row,
};
use crate::bits;
use crate::error::ProtocolError;
use crate::protocol::{
    self, ComparisonReport, Direction, ProtocolConfig, RunOptions, Transcript, Verdict,
};
use crate::qsim::fidelity;
use crate::rng::{stream, Stream};
use crate::states::make_w1;
use crate::states::stabilizer::{search, GateSet, Reachability};
use crate::states::{w1_circuit, StepRecord};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ABORT: i32 = 2;
pub const EXIT_SCAN: i32 = 3;

const FIDELITY_TOLERANCE: f64 = 1e-12;
const STABILIZER_DEPTH: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "qpce",
    version,
    about = "W-state quantum private comparison simulator"
)]
pub struct Cli {
    /// Master seed. Falls back to QPCE_SEED, then 0.
    #[arg(long, global = true, env = "QPCE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Aw,
    Lwj11,
    Lwg12,
}

impl From<VariantArg> for protocol::Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Aw => Self::Aw,
            VariantArg::Lwj11 => Self::Lwj11,
            VariantArg::Lwg12 => Self::Lwg12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    /// iσy (flips both Z and X values)
    Isy,
    /// σx (Z flip only)
    Sx,
}

impl From<EncodingArg> for protocol::Encoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Isy => Self::ISigmaY,
            EncodingArg::Sx => Self::SigmaX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResourceArg {
    W1,
    #[value(name = "w1p")]
    W1Prime,
    Symw,
    Epr,
}

impl From<ResourceArg> for Resource {
    fn from(r: ResourceArg) -> Self {
        match r {
            ResourceArg::W1 => Self::W1,
            ResourceArg::W1Prime => Self::W1Prime,
            ResourceArg::Symw => Self::SymmetricW,
            ResourceArg::Epr => Self::Epr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum AttackArg {
    InterceptResend,
    TpClassical,
    DishonestParticipant,
}

impl From<AttackArg> for AttackKind {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::InterceptResend => Self::InterceptResend,
            AttackArg::TpClassical => Self::TpClassical,
            AttackArg::DishonestParticipant => Self::DishonestParticipant,
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct ProtocolArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Aw)]
    pub variant: VariantArg,
    /// Secret length N in bits, 1 to 64.
    #[arg(long, default_value_t = 8)]
    pub bits: usize,
    /// Mix-up length L.
    #[arg(long, default_value_t = 8)]
    pub mix: usize,
    /// Decoy photons per direction.
    #[arg(long, default_value_t = 8)]
    pub decoys: usize,
    /// Encoding operator for secret bit 1.
    #[arg(long, value_enum, default_value_t = EncodingArg::Isy)]
    pub encoding: EncodingArg,
    /// Abort when a direction's decoy error rate exceeds this.
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
}

impl ProtocolArgs {
    fn config(&self, seed: u64) -> Result<ProtocolConfig, ProtocolError> {
        if !(1..=64).contains(&self.bits) {
            return Err(ProtocolError::Config(format!(
                "--bits must be in [1, 64], got {}",
                self.bits
            )));
        }
        let cfg = ProtocolConfig {
            variant: self.variant.into(),
            bits: self.bits,
            mix: self.mix,
            decoys: self.decoys,
            encoding: self.encoding.into(),
            error_threshold: self.threshold,
            seed,
            allow_empty_mix: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one comparison.
    Run {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Alice's secret X in hex.
        #[arg(long)]
        x: String,
        /// Bob's secret Y in hex.
        #[arg(long)]
        y: String,
        /// Attack to stage during the run.
        #[arg(long, value_enum)]
        adversary: Option<AttackArg>,
        /// Include the full transcript.
        #[arg(long)]
        transcript: bool,
    },
    /// Enumerate the per-bit outcome table exactly.
    Table1 {
        /// Encoding operator (default isy).
        #[arg(long, value_enum, default_value_t = EncodingArg::Isy)]
        encoding: EncodingArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Aw)]
        variant: VariantArg,
    },
    /// Travel-particle leak: optimal bound and Monte Carlo estimate.
    Analyze {
        #[arg(long, value_enum, default_value_t = ResourceArg::W1)]
        resource: ResourceArg,
        #[arg(long, value_enum, default_value_t = EncodingArg::Isy)]
        encoding: EncodingArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Attack campaign over many seeded runs.
    Attack {
        #[arg(long, value_enum)]
        kind: AttackArg,
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Resource for the dishonest-participant attack.
        #[arg(long, value_enum, default_value_t = ResourceArg::W1)]
        resource: ResourceArg,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Verify the |W_1⟩ preparation circuit.
    Circuit {
        /// List the logical steps.
        #[arg(long)]
        show_steps: bool,
        /// Search Clifford-only circuits for |W_1⟩.
        #[arg(long)]
        stabilizer_check: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn config_error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_CONFIG,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    seed: u64,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(command: &str, seed: u64, body: T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        command,
        seed,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report types serialize");
    s.push('\n');
    s
}

pub fn parse_hex(s: &str, bits: usize) -> Result<u64, ProtocolError> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    let v = u64::from_str_radix(digits, 16)
        .map_err(|e| ProtocolError::Config(format!("bad hex {s:?}: {e}")))?;
    if bits < 64 && v >> bits != 0 {
        return Err(ProtocolError::Config(format!(
            "{s} does not fit in {bits} bits"
        )));
    }
    Ok(v)
}

/// Parses `args` (program name first) and executes.
pub fn execute<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliOutput {
                    code: if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_CONFIG
                    } else {
                        EXIT_OK
                    },
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: EXIT_CONFIG,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    dispatch(&cli)
}

fn dispatch(cli: &Cli) -> CliOutput {
    match &cli.command {
        Command::Run {
            protocol,
            x,
            y,
            adversary,
            transcript,
        } => cmd_run(cli, protocol, x, y, *adversary, *transcript),
        Command::Table1 { encoding, variant } => cmd_table1(cli, *variant, *encoding),
        Command::Analyze {
            resource,
            encoding,
            trials,
        } => cmd_analyze(cli, *resource, *encoding, *trials),
        Command::Attack {
            kind,
            protocol,
            resource,
            trials,
        } => cmd_attack(cli, *kind, protocol, *resource, *trials),
        Command::Circuit {
            show_steps,
            stabilizer_check,
        } => cmd_circuit(cli, *show_steps, *stabilizer_check),
    }
}

#[derive(Serialize)]
struct RunBody<'a> {
    report: &'a ComparisonReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    attack: Option<RunAttack>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript: Option<&'a Transcript>,
}

#[derive(Serialize)]
struct RunAttack {
    #[serde(flatten)]
    outcome: AttackOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    tp: Option<TpAttack>,
}

fn cmd_run(
    cli: &Cli,
    args: &ProtocolArgs,
    x: &str,
    y: &str,
    adversary: Option<AttackArg>,
    with_transcript: bool,
) -> CliOutput {
    let cfg = match args.config(cli.seed) {
        Ok(c) => c,
        Err(e) => return CliOutput::config_error(e),
    };
    let (xv, yv) = match (parse_hex(x, cfg.bits), parse_hex(y, cfg.bits)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CliOutput::config_error(e),
    };
    let xb = bits::to_bits_le(xv, cfg.bits);
    let yb = bits::to_bits_le(yv, cfg.bits);
    let mut options = RunOptions::default();
    if adversary == Some(AttackArg::InterceptResend) {
        options.channel = Some(Box::new(eve_intercept_resend(
            &[Direction::AliceToBob, Direction::BobToAlice],
            stream(cfg.seed, Stream::Eve),
        )));
    }
    let run = match protocol::run_protocol(&cfg, &xb, &yb, options) {
        Ok(r) => r,
        Err(ProtocolError::Config(m)) => return CliOutput::config_error(m),
        Err(e) => {
            return CliOutput {
                code: EXIT_ABORT,
                stdout: String::new(),
                stderr: format!("error: run failed: {e}\n"),
            }
        }
    };
    let attack = match adversary {
        None => None,
        Some(AttackArg::InterceptResend) => {
            let r = &run.report.error_rates;
            let checked = r.alice_to_bob.decoys + r.bob_to_alice.decoys;
            let errors = r.alice_to_bob.errors + r.bob_to_alice.errors;
            Some(RunAttack {
                outcome: AttackOutcome {
                    kind: AttackKind::InterceptResend,
                    detected: run.report.verdict == Verdict::AbortedEavesdrop,
                    per_decoy_error_rate: if checked == 0 {
                        0.0
                    } else {
                        errors as f64 / checked as f64
                    },
                    recovered_r: None,
                    guess_success_rate: 0.0,
                    trials: 1,
                },
                tp: None,
            })
        }
        Some(AttackArg::TpClassical) => match &run.tp_view {
            Some(view) => match tp_classical_attack(&run.transcript, view) {
                Ok(tp) => Some(RunAttack {
                    outcome: AttackOutcome {
                        kind: AttackKind::TpClassical,
                        detected: false,
                        per_decoy_error_rate: 0.0,
                        recovered_r: tp.recovered_r,
                        guess_success_rate: f64::from(u8::from(
                            tp.guess_equal == (run.report.r == Some(0)),
                        )),
                        trials: 1,
                    },
                    tp: Some(tp),
                }),
                Err(e) => return CliOutput::config_error(e),
            },
            None => None,
        },
        Some(AttackArg::DishonestParticipant) => match dishonest_bob_in_run(&run.report) {
            Ok(outcome) => Some(RunAttack { outcome, tp: None }),
            Err(e) => return CliOutput::config_error(e),
        },
    };
    let code = if run.report.verdict == Verdict::AbortedEavesdrop {
        EXIT_ABORT
    } else {
        EXIT_OK
    };
    let stdout = match cli.format {
        Format::Json => emit(
            "run",
            cli.seed,
            RunBody {
                report: &run.report,
                attack,
                transcript: with_transcript.then_some(&run.transcript),
            },
        ),
        Format::Text => {
            let r = &run.report;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "variant   {}  encoding {}  N={} L={} decoys={}",
                r.variant, r.encoding, r.bits, r.mix, r.decoys
            );
            let _ = writeln!(s, "verdict   {:?}", r.verdict);
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            let _ = writeln!(s, "R         {}", opt(r.r));
            let _ = writeln!(s, "R'        {}", opt(r.r_prime));
            let _ = writeln!(
                s,
                "decoys    A->B {}/{} wrong, B->A {}/{} wrong",
                r.error_rates.alice_to_bob.errors,
                r.error_rates.alice_to_bob.decoys,
                r.error_rates.bob_to_alice.errors,
                r.error_rates.bob_to_alice.decoys
            );
            if let Some(a) = &attack {
                let _ = writeln!(
                    s,
                    "attack    {:?}: detected={} recovered_R={} guess_rate={:.4}",
                    a.outcome.kind,
                    a.outcome.detected,
                    opt(a.outcome.recovered_r),
                    a.outcome.guess_success_rate
                );
            }
            for n in &r.notes {
                let _ = writeln!(s, "note      {n}");
            }
            s
        }
    };
    CliOutput {
        code,
        stdout,
        stderr: String::new(),
    }
}

#[derive(Serialize)]
struct Table1Body<'a> {
    variant: protocol::Variant,
    encoding: protocol::Encoding,
    consistent: bool,
    rows: &'a [Table1Row],
    /// Reachable branches with C_i ≠ x_i ⊕ y_i, with the initial kinds that produce them.
    mismatches: Vec<&'a ScanRow>,
}

fn cmd_table1(cli: &Cli, variant: VariantArg, encoding: EncodingArg) -> CliOutput {
    let scan = match correctness_scan(variant.into(), encoding.into()) {
        Ok(s) => s,
        Err(e) => {
            return CliOutput {
                code: EXIT_SCAN,
                stdout: String::new(),
                stderr: format!("error: scan failed: {e}\n"),
            }
        }
    };
    let rows = scan.table1();
    let consistent = scan.all_consistent();
    let code = if consistent { EXIT_OK } else { EXIT_SCAN };
    let stdout = match cli.format {
        Format::Json => emit(
            "table1",
            cli.seed,
            Table1Body {
                variant: scan.variant,
                encoding: scan.encoding,
                consistent,
                rows: &rows,
                mismatches: scan.mismatches(),
            },
        ),
        Format::Text => {
            let mut s = render_table1(&rows);
            let mism = scan.mismatches();
            if !mism.is_empty() {
                let _ = writeln!(
                    s,
                    "\n{} reachable branches with C_i != x_i XOR y_i:",
                    mism.len()
                );
                for r in mism {
                    let _ = writeln!(
                        s,
                        "  x={} y={} kinds=({}, {}) M^A1=|{}> M^B2=|{}> M^B1=|{}> M^A2=|{}> C_i={} p={:.4}",
                        r.x, r.y, r.kind_a, r.kind_b, r.m_a1, r.m_b2, r.m_b1, r.m_a2, r.c_i, r.probability
                    );
                }
            }
            s
        }
    };
    CliOutput {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn cmd_analyze(cli: &Cli, resource: ResourceArg, encoding: EncodingArg, trials: u64) -> CliOutput {
    let mut rng = stream(cli.seed, Stream::Trials);
    let report = match leak_monte_carlo(resource.into(), encoding.into(), trials, &mut rng) {
        Ok(r) => r,
        Err(e) => return CliOutput::config_error(e),
    };
    let stdout = match cli.format {
        Format::Json => emit("analyze", cli.seed, &report),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "resource  {:?}  encoding {}",
                report.resource, report.encoding
            );
            let _ = writeln!(s, "bound     {:.6}", report.bound);
            let _ = writeln!(
                s,
                "empirical {:.6}  ({} of {} trials, sigma {:.6})",
                report.empirical, report.successes, report.trials, report.sigma
            );
            for (name, rho) in [("rho0", &report.rho0), ("rho1", &report.rho1)] {
                let _ = writeln!(s, "{name}");
                for row in rho.to_rows() {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|[re, im]| format!("{re:+.6}{im:+.6}i"))
                        .collect();
                    let _ = writeln!(s, "  {}", cells.join("  "));
                }
            }
            s
        }
    };
    CliOutput {
        code: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

fn cmd_attack(
    cli: &Cli,
    kind: AttackArg,
    args: &ProtocolArgs,
    resource: ResourceArg,
    trials: u64,
) -> CliOutput {
    if trials == 0 {
        return CliOutput::config_error("--trials must be at least 1");
    }
    let cfg = match args.config(cli.seed) {
        Ok(c) => c,
        Err(e) => return CliOutput::config_error(e),
    };
    let fail = |e: &dyn std::fmt::Display| CliOutput {
        code: EXIT_ABORT,
        stdout: String::new(),
        stderr: format!("error: attack failed: {e}\n"),
    };
    let (json, text) = match kind {
        AttackArg::InterceptResend => match intercept_resend_campaign(&cfg, trials) {
            Ok(c) => {
                let text = format!(
                    "intercept-resend over {} runs, {} decoys per direction\n  aborts A->B {:.4}  B->A {:.4}  expected {:.4} (sigma {:.4})\n  per-decoy error rate {:.4} (expected 0.25, sigma {:.4})\n",
                    c.runs,
                    c.decoys,
                    c.abort_rate(Direction::AliceToBob),
                    c.abort_rate(Direction::BobToAlice),
                    c.expected_abort_per_direction,
                    c.abort_sigma,
                    c.per_decoy_error_rate,
                    c.error_rate_sigma
                );
                (
                    emit(
                        "attack",
                        cli.seed,
                        AttackBody {
                            outcome: c.outcome(),
                            details: &c,
                        },
                    ),
                    text,
                )
            }
            Err(e) => return fail(&e),
        },
        AttackArg::TpClassical => match tp_campaign(&cfg, trials) {
            Ok(c) => {
                let text = format!(
                    "TP classical attack on {} over {} runs\n  R recovered exactly in {} runs\n  equality guess {:.4} over {} runs (sigma {:.4}), random-bit control {:.4}\n  R' = 0 in {} runs ({} of them equal)\n",
                    c.variant,
                    c.runs,
                    c.recovered_correct,
                    c.guess_success_rate,
                    c.guesses,
                    c.guess_sigma,
                    c.control_success_rate,
                    c.r_prime_zero_runs,
                    c.r_prime_zero_equal
                );
                (
                    emit(
                        "attack",
                        cli.seed,
                        AttackBody {
                            outcome: c.outcome(),
                            details: &c,
                        },
                    ),
                    text,
                )
            }
            Err(e) => return fail(&e),
        },
        AttackArg::DishonestParticipant => {
            let mut rng = stream(cli.seed, Stream::Trials);
            match dishonest_participant_attack(resource.into(), cfg.encoding, trials, &mut rng) {
                Ok(d) => {
                    let text = format!(
                        "dishonest participant on {:?} with {}\n  guess rate {:.4} over {} trials, optimum {:.4} (sigma {:.4})\n",
                        d.resource, d.encoding, d.outcome.guess_success_rate, d.outcome.trials, d.helstrom_bound, d.sigma
                    );
                    (emit("attack", cli.seed, &d), text)
                }
                Err(e) => return fail(&e),
            }
        }
    };
    CliOutput {
        code: EXIT_OK,
        stdout: if cli.format == Format::Json {
            json
        } else {
            text
        },
        stderr: String::new(),
    }
}

#[derive(Serialize)]
struct AttackBody<'a, T: Serialize> {
    outcome: AttackOutcome,
    details: &'a T,
}

#[derive(Serialize)]
struct CircuitBody {
    num_qubits: usize,
    logical_steps: usize,
    elementary_gates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<Vec<StepRecord>>,
    fidelity: f64,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    stabilizer: Option<Vec<Reachability>>,
}

fn cmd_circuit(cli: &Cli, show_steps: bool, stabilizer_check: bool) -> CliOutput {
    let circuit = w1_circuit();
    let target = make_w1();
    let fid = match circuit.replay().and_then(|s| fidelity(&s, &target)) {
        Ok(f) => f,
        Err(e) => return CliOutput::config_error(e),
    };
    let verified = fid >= 1.0 - FIDELITY_TOLERANCE;
    let stabilizer = stabilizer_check.then(|| {
        [GateSet::NotCnotHadamard, GateSet::FullClifford]
            .into_iter()
            .map(|set| search(set, 3, STABILIZER_DEPTH, &target))
            .collect::<Vec<_>>()
    });
    let body = CircuitBody {
        num_qubits: circuit.num_qubits,
        logical_steps: circuit.steps.len(),
        elementary_gates: circuit.elementary_gates().len(),
        steps: show_steps.then(|| circuit.records()),
        fidelity: fid,
        verified,
        stabilizer,
    };
    let stdout = match cli.format {
        Format::Json => emit("circuit", cli.seed, &body),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "|W_1> circuit: {} logical steps, {} elementary gates",
                body.logical_steps, body.elementary_gates
            );
            if let Some(steps) = &body.steps {
                for (i, st) in steps.iter().enumerate() {
                    let ctl = match (st.control, st.control_value) {
                        (Some(c), Some(0)) => format!(" anti-controlled by q{c}"),
                        (Some(c), _) => format!(" controlled by q{c}"),
                        _ => String::new(),
                    };
                    let _ = writeln!(s, "  {}. {:?} on q{}{ctl}", i + 1, st.gate, st.target);
                }
            }
            let _ = writeln!(
                s,
                "fidelity {:.15}  {}",
                body.fidelity,
                if verified { "ok" } else { "FAILED" }
            );
            if let Some(reach) = &body.stabilizer {
                for r in reach {
                    let _ = writeln!(
                        s,
                        "{:?}: {} states (closed: {}), |W_1> reachable: {}, best fidelity {:.4}",
                        r.gate_set,
                        r.states_found,
                        r.closed,
                        r.target_reachable,
                        r.best_target_fidelity
                    );
                }
            }
            s
        }
    };
    CliOutput {
        code: if verified { EXIT_OK } else { EXIT_SCAN },
        stdout,
        stderr: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliOutput {
        execute(std::iter::once("qpce").chain(args.iter().copied()))
    }

    #[test]
    fn hex_parsing() {
        assert_eq!(parse_hex("A", 4).unwrap(), 10);
        assert_eq!(parse_hex("0x1f", 5).unwrap(), 31);
        assert!(parse_hex("1f", 4).is_err());
        assert!(parse_hex("zz", 8).is_err());
        assert_eq!(parse_hex("ffffffffffffffff", 64).unwrap(), u64::MAX);
    }

    #[test]
    fn run_equal_and_unequal() {
        let o = run(&["run", "--x", "A", "--y", "A", "--bits", "4"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["report"]["verdict"], "equal");
        assert_eq!(v["report"]["R"], 0);
        let o = run(&["run", "--x", "A", "--y", "8", "--bits", "4"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["report"]["R"], 1);
        assert_eq!(v["report"]["verdict"], "not_equal");
    }

    #[test]
    fn config_errors_exit_one() {
        assert_eq!(
            run(&["run", "--x", "1F", "--y", "0", "--bits", "4"]).code,
            1
        );
        assert_eq!(
            run(&["run", "--x", "1", "--y", "0", "--bits", "65"]).code,
            1
        );
        assert_eq!(run(&["run", "--x", "1", "--y", "0", "--bits", "0"]).code, 1);
        assert_eq!(run(&["run", "--x", "1", "--y", "0", "--bogus"]).code, 1);
        assert_eq!(run(&["table1", "--encoding", "zz"]).code, 1);
    }

    #[test]
    fn help_mentions_default_encoding() {
        let o = run(&["table1", "--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("default: isy"));
    }

    #[test]
    fn lwj11_tp_attack_recovers_r() {
        let o = run(&[
            "run",
            "--variant",
            "lwj11",
            "--x",
            "3C",
            "--y",
            "35",
            "--adversary",
            "tp_classical",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["attack"]["recovered_R"], v["report"]["R"]);
        assert_eq!(v["report"]["R"], 2);
    }

    #[test]
    fn eve_run_aborts() {
        let o = run(&[
            "run",
            "--x",
            "3",
            "--y",
            "3",
            "--decoys",
            "40",
            "--adversary",
            "intercept_resend",
        ]);
        assert_eq!(o.code, 2);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["report"]["verdict"], "aborted_eavesdrop");
        assert_eq!(v["attack"]["detected"], true);
    }

    #[test]
    fn table1_exit_codes() {
        assert_eq!(run(&["table1"]).code, 0);
        assert_eq!(run(&["table1", "--encoding", "sx"]).code, 3);
        let t = run(&["--format", "text", "table1", "--encoding", "sx"]);
        assert!(t.stdout.contains("C_i != x_i XOR y_i"));
    }

    #[test]
    fn analyze_and_circuit() {
        let o = run(&["analyze", "--resource", "symw", "--trials", "1000"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert!((v["bound"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(run(&["analyze", "--trials", "0"]).code, 1);
        let c = run(&["circuit", "--show-steps"]);
        assert_eq!(c.code, 0);
        let v: serde_json::Value = serde_json::from_str(&c.stdout).unwrap();
        assert_eq!(v["steps"].as_array().unwrap().len(), 4);
        assert_eq!(v["verified"], true);
    }
}
