//! Attack scenarios: an intercept-resend eavesdropper on the quantum channel, a
//! curious TP working from the classical transcript, and a dishonest participant
//! measuring the other party's travel particles.

use crate::analysis::{encoded_reduced_states, encoded_state, leak_bound, ml_guess, Resource};
use crate::bits::{self, Bits};
use crate::crypto::{decode_positions, MessageLabel};
use crate::error::{ProtocolError, QsimError};
use crate::protocol::{
    run_protocol, unmerge, ComparisonReport, Direction, Encoding, ParticleRef, ProtocolConfig,
    QuantumChannel, QuantumLab, RunOptions, Session, TpView, Transcript, Variant,
};
use crate::rng::{stream, trial_seed, SimRng, Stream};
use crate::states::{make_decoy, Basis, DecoyKind, InitialKind};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    InterceptResend,
    TpClassical,
    DishonestParticipant,
}

impl AttackKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "intercept_resend" => Some(Self::InterceptResend),
            "tp_classical" => Some(Self::TpClassical),
            "dishonest_participant" => Some(Self::DishonestParticipant),
            _ => None,
        }
    }
}

/// Common summary of an attack. Fields that do not apply to a kind stay at their
/// neutral value (`false`, `0.0`, `None`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackOutcome {
    pub kind: AttackKind,
    pub detected: bool,
    pub per_decoy_error_rate: f64,
    #[serde(rename = "recovered_R")]
    pub recovered_r: Option<usize>,
    pub guess_success_rate: f64,
    pub trials: u64,
}

/// Measures every particle passing in the chosen directions in a uniformly random
/// basis and lets the collapsed particle continue.
pub struct InterceptResend {
    rng: SimRng,
    directions: Vec<Direction>,
    pub intercepted: usize,
}

impl QuantumChannel for InterceptResend {
    fn transit(
        &mut self,
        lab: &mut QuantumLab,
        direction: Direction,
        particles: &[ParticleRef],
    ) -> Result<(), QsimError> {
        if !self.directions.contains(&direction) {
            return Ok(());
        }
        for &p in particles {
            let basis = if self.rng.gen() { Basis::X } else { Basis::Z };
            lab.measure_in_basis(p, basis, &mut self.rng)?;
            self.intercepted += 1;
        }
        Ok(())
    }
}

pub fn eve_intercept_resend(directions: &[Direction], rng: SimRng) -> InterceptResend {
    InterceptResend {
        rng,
        directions: directions.to_vec(),
        intercepted: 0,
    }
}

/// Chance that intercept-resend on `decoys` decoys trips a zero-threshold check.
pub fn detection_probability(decoys: u32) -> f64 {
    1.0 - 0.75f64.powi(decoys as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionEstimate {
    pub decoys: u32,
    pub trials: u64,
    pub closed_form: f64,
    pub empirical: f64,
    pub sigma: f64,
}

/// Decoy-only Monte Carlo of [`detection_probability`].
pub fn detection_monte_carlo<R: Rng + ?Sized>(
    decoys: u32,
    trials: u64,
    rng: &mut R,
) -> Result<DetectionEstimate, QsimError> {
    let mut detected = 0u64;
    for _ in 0..trials {
        let mut hit = false;
        for _ in 0..decoys {
            let kind = *DecoyKind::ALL.choose(rng).expect("nonempty");
            let mut lab = QuantumLab::new();
            let p = ParticleRef {
                register: lab.add(make_decoy(kind)),
                qubit: 0,
            };
            let eve_basis = if rng.gen() { Basis::X } else { Basis::Z };
            lab.measure_in_basis(p, eve_basis, rng)?;
            hit |= lab.measure_in_basis(p, kind.basis(), rng)? != kind.value();
        }
        detected += u64::from(hit);
    }
    let closed_form = detection_probability(decoys);
    Ok(DetectionEstimate {
        decoys,
        trials,
        closed_form,
        empirical: detected as f64 / trials.max(1) as f64,
        sigma: (closed_form * (1.0 - closed_form) / trials.max(1) as f64).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterceptCampaign {
    pub runs: u64,
    pub decoys: usize,
    pub aborts_alice_to_bob: u64,
    pub aborts_bob_to_alice: u64,
    pub aborts_any: u64,
    pub decoys_checked: u64,
    pub decoy_errors: u64,
    /// Closed-form abort probability for one direction.
    pub expected_abort_per_direction: f64,
    pub abort_sigma: f64,
    pub per_decoy_error_rate: f64,
    pub error_rate_sigma: f64,
}

impl InterceptCampaign {
    pub fn abort_rate(&self, direction: Direction) -> f64 {
        let n = match direction {
            Direction::AliceToBob => self.aborts_alice_to_bob,
            Direction::BobToAlice => self.aborts_bob_to_alice,
        };
        n as f64 / self.runs as f64
    }

    pub fn outcome(&self) -> AttackOutcome {
        AttackOutcome {
            kind: AttackKind::InterceptResend,
            detected: self.aborts_any > 0,
            per_decoy_error_rate: self.per_decoy_error_rate,
            recovered_r: None,
            guess_success_rate: 0.0,
            trials: self.runs,
        }
    }
}

fn random_secret<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Bits {
    (0..n).map(|_| rng.gen()).collect()
}

/// Runs the quantum phase `runs` times with Eve on both channels and tallies the
/// decoy checks. `base.seed` is the master seed; each run gets a derived seed.
pub fn intercept_resend_campaign(
    base: &ProtocolConfig,
    runs: u64,
) -> Result<InterceptCampaign, ProtocolError> {
    let mut trials = stream(base.seed, Stream::Trials);
    let mut c = InterceptCampaign {
        runs,
        decoys: base.decoys,
        aborts_alice_to_bob: 0,
        aborts_bob_to_alice: 0,
        aborts_any: 0,
        decoys_checked: 0,
        decoy_errors: 0,
        expected_abort_per_direction: 0.0,
        abort_sigma: 0.0,
        per_decoy_error_rate: 0.0,
        error_rate_sigma: 0.0,
    };
    for t in 0..runs {
        let mut cfg = base.clone();
        cfg.seed = trial_seed(base.seed, t);
        let x = random_secret(cfg.bits, &mut trials);
        let y = random_secret(cfg.bits, &mut trials);
        let eve = eve_intercept_resend(
            &[Direction::AliceToBob, Direction::BobToAlice],
            stream(cfg.seed, Stream::Eve),
        );
        let opts = RunOptions {
            channel: Some(Box::new(eve)),
            ..RunOptions::default()
        };
        let mut session = Session::new(&cfg, &x, &y, opts)?;
        let rates = session.quantum_phase()?;
        c.aborts_alice_to_bob += u64::from(rates.alice_to_bob.aborted);
        c.aborts_bob_to_alice += u64::from(rates.bob_to_alice.aborted);
        c.aborts_any += u64::from(rates.alice_to_bob.aborted || rates.bob_to_alice.aborted);
        for check in [rates.alice_to_bob, rates.bob_to_alice] {
            c.decoys_checked += check.decoys as u64;
            c.decoy_errors += check.errors as u64;
        }
    }
    let p = if base.error_threshold == 0.0 {
        detection_probability(base.decoys as u32)
    } else {
        f64::NAN
    };
    c.expected_abort_per_direction = p;
    c.abort_sigma = (p * (1.0 - p) / runs.max(1) as f64).sqrt();
    c.per_decoy_error_rate = c.decoy_errors as f64 / c.decoys_checked.max(1) as f64;
    c.error_rate_sigma = (0.25 * 0.75 / c.decoys_checked.max(1) as f64).sqrt();
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpAttack {
    /// R′ minus the distance between the intercepted C′ payloads. Negative when the
    /// payloads were ciphertext that happened to differ more than R′.
    pub method1_value: i64,
    /// R recovered by stripping S_q from the merged sequences, when S_q was readable.
    pub method2_value: Option<usize>,
    /// Set only when every mix-up message travelled in the clear and both methods agree.
    #[serde(rename = "recovered_R")]
    pub recovered_r: Option<usize>,
    pub methods_agree: Option<bool>,
    pub r_prime: usize,
    /// TP's guess that X = Y, from method (1).
    pub guess_equal: bool,
    /// R′ = 0 forces R = 0 regardless of the encryption.
    pub r_prime_zero: bool,
}

fn payload(transcript: &Transcript, label: MessageLabel) -> Result<(Bits, bool), ProtocolError> {
    transcript
        .first_labeled(label)
        .map(|m| (m.payload.clone(), m.encrypted))
        .ok_or_else(|| ProtocolError::Integrity(format!("transcript has no {label} message")))
}

/// TP's two ways of getting R from what it sees: R′ − Hamming(C′_A, C′_B), and
/// un-merging its own decrypted sequences with S_q.
pub fn tp_classical_attack(
    transcript: &Transcript,
    view: &TpView,
) -> Result<TpAttack, ProtocolError> {
    let (mix_a, enc_a) = payload(transcript, MessageLabel::MixA)?;
    let (mix_b, enc_b) = payload(transcript, MessageLabel::MixB)?;
    let (s_q, enc_s) = payload(transcript, MessageLabel::InsertPositions)?;
    let method1_value = view.r_prime as i64 - bits::hamming(&mix_a, &mix_b) as i64;

    let domain = view.merged_a.len();
    let method2_value = decode_positions(&s_q, domain).ok().and_then(|pos| {
        let (ca, _) = unmerge(&view.merged_a, &pos).ok()?;
        let (cb, _) = unmerge(&view.merged_b, &pos).ok()?;
        Some(bits::hamming(&ca, &cb))
    });

    let plaintext = !(enc_a || enc_b || enc_s);
    let methods_agree = method2_value.map(|m2| m2 as i64 == method1_value);
    let recovered_r = match (plaintext, methods_agree) {
        (true, Some(true)) => method2_value,
        _ => None,
    };
    Ok(TpAttack {
        method1_value,
        method2_value,
        recovered_r,
        methods_agree,
        r_prime: view.r_prime,
        guess_equal: method1_value == 0,
        r_prime_zero: view.r_prime == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpCampaign {
    pub variant: Variant,
    pub runs: u64,
    /// Runs where the attack reported an R.
    pub recovered: u64,
    /// Runs where that R equalled the honest result.
    pub recovered_correct: u64,
    pub methods_disagree: u64,
    /// Runs excluded from the guess statistics because R′ = 0.
    pub r_prime_zero_runs: u64,
    /// Of those, how many had X = Y.
    pub r_prime_zero_equal: u64,
    pub guesses: u64,
    pub correct_guesses: u64,
    pub guess_success_rate: f64,
    pub guess_sigma: f64,
    /// Same guess rule with the intercepted C′ payloads replaced by fresh random bits.
    pub control_success_rate: f64,
}

impl TpCampaign {
    pub fn outcome(&self) -> AttackOutcome {
        AttackOutcome {
            kind: AttackKind::TpClassical,
            detected: false,
            per_decoy_error_rate: 0.0,
            recovered_r: None,
            guess_success_rate: self.guess_success_rate,
            trials: self.runs,
        }
    }
}

/// Honest runs with a 50% prior on X = Y; TP attacks each transcript.
pub fn tp_campaign(base: &ProtocolConfig, runs: u64) -> Result<TpCampaign, ProtocolError> {
    let mut rng = stream(base.seed, Stream::Trials);
    let mut c = TpCampaign {
        variant: base.variant,
        runs,
        recovered: 0,
        recovered_correct: 0,
        methods_disagree: 0,
        r_prime_zero_runs: 0,
        r_prime_zero_equal: 0,
        guesses: 0,
        correct_guesses: 0,
        guess_success_rate: 0.0,
        guess_sigma: 0.0,
        control_success_rate: 0.0,
    };
    let mut control_correct = 0u64;
    for t in 0..runs {
        let mut cfg = base.clone();
        cfg.seed = trial_seed(base.seed, t);
        let x = random_secret(cfg.bits, &mut rng);
        let equal = rng.gen::<bool>();
        let y = if equal {
            x.clone()
        } else {
            loop {
                let y = random_secret(cfg.bits, &mut rng);
                if y != x {
                    break y;
                }
            }
        };
        let run = run_protocol(&cfg, &x, &y, RunOptions::default())?;
        let view = run
            .tp_view
            .as_ref()
            .ok_or_else(|| ProtocolError::Integrity("honest run aborted".into()))?;
        let attack = tp_classical_attack(&run.transcript, view)?;
        let honest_r = run.report.r.expect("completed run has R");
        if let Some(r) = attack.recovered_r {
            c.recovered += 1;
            c.recovered_correct += u64::from(r == honest_r);
        }
        if attack.methods_agree == Some(false) {
            c.methods_disagree += 1;
        }
        if attack.r_prime_zero {
            c.r_prime_zero_runs += 1;
            c.r_prime_zero_equal += u64::from(equal);
            continue;
        }
        c.guesses += 1;
        c.correct_guesses += u64::from(attack.guess_equal == equal);
        let noise_a = random_secret(cfg.mix, &mut rng);
        let noise_b = random_secret(cfg.mix, &mut rng);
        let control_guess = view.r_prime == bits::hamming(&noise_a, &noise_b);
        control_correct += u64::from(control_guess == equal);
    }
    let g = c.guesses.max(1) as f64;
    c.guess_success_rate = c.correct_guesses as f64 / g;
    c.guess_sigma = (0.25 / g).sqrt();
    c.control_success_rate = control_correct as f64 / g;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DishonestOutcome {
    pub resource: Resource,
    pub encoding: Encoding,
    pub helstrom_bound: f64,
    pub sigma: f64,
    #[serde(flatten)]
    pub outcome: AttackOutcome,
}

/// Bob Z-measures each intercepted travel particle and takes the maximum-likelihood
/// bit under the known encoding.
pub fn dishonest_participant_attack<R: Rng + ?Sized>(
    resource: Resource,
    encoding: Encoding,
    trials: u64,
    rng: &mut R,
) -> Result<DishonestOutcome, QsimError> {
    if trials == 0 {
        return Err(QsimError::InvalidParams("trials must be at least 1".into()));
    }
    let (rho0, rho1) = encoded_reduced_states(resource, encoding)?;
    let states = [
        encoded_state(resource, encoding, false)?,
        encoded_state(resource, encoding, true)?,
    ];
    let travel = resource.travel_qubit();
    let mut wins = 0u64;
    for _ in 0..trials {
        let bit: bool = rng.gen();
        let mut lab = QuantumLab::new();
        let register = lab.add(states[usize::from(bit)].clone());
        let outcome = lab.measure_z(register, &[travel], rng)?[0];
        wins += u64::from(ml_guess(&rho0, &rho1, outcome) == bit);
    }
    let bound = leak_bound(resource, encoding)?;
    Ok(DishonestOutcome {
        resource,
        encoding,
        helstrom_bound: bound,
        sigma: (bound * (1.0 - bound) / trials as f64).sqrt(),
        outcome: AttackOutcome {
            kind: AttackKind::DishonestParticipant,
            detected: false,
            per_decoy_error_rate: 0.0,
            recovered_r: None,
            guess_success_rate: wins as f64 / trials as f64,
            trials,
        },
    })
}

fn resource_of(kind: InitialKind) -> Resource {
    match kind {
        // After alignment both asymmetric kinds look like |W_1⟩ to the receiver.
        InitialKind::W1 | InitialKind::W1Prime => Resource::W1,
        InitialKind::Phi1 | InitialKind::Phi2 => Resource::SymmetricW,
        InitialKind::Epr => Resource::Epr,
    }
}

/// Bob's guesses of Alice's bits from his own Z outcomes on her travel particles in
/// a finished run. Returns the fraction guessed correctly.
pub fn dishonest_bob_in_run(report: &ComparisonReport) -> Result<AttackOutcome, QsimError> {
    let mut wins = 0u64;
    for b in &report.per_bit {
        let (rho0, rho1) = encoded_reduced_states(resource_of(b.kind_a), report.encoding)?;
        wins += u64::from(ml_guess(&rho0, &rho1, b.c_a2) == (b.x == 1));
    }
    let n = report.per_bit.len() as u64;
    Ok(AttackOutcome {
        kind: AttackKind::DishonestParticipant,
        detected: false,
        per_decoy_error_rate: 0.0,
        recovered_r: None,
        guess_success_rate: if n == 0 { 0.0 } else { wins as f64 / n as f64 },
        trials: n,
    })
}
