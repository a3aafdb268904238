//! Alice, Bob and TP executing the six protocol steps, for the asymmetric-W
//! protocol and the two earlier symmetric-W / EPR designs.
//!
//! Step 2 runs the decoy check in both directions before any initial state is
//! announced, because the receiver cannot aim the Hadamard correction until it
//! knows which particles are decoys.

pub mod config;
pub mod lab;
pub mod party;
pub mod report;
pub mod transcript;

pub use config::{Encoding, ProtocolConfig, Variant};
pub use lab::{Direction, IdealChannel, ParticleRef, QuantumChannel, QuantumLab};
pub use party::PartyState;
pub use report::{BitRecord, ComparisonReport, DecoyCheck, ErrorRates, Verdict};
pub use transcript::{Event, EventKind, QuantumRecord, Transcript};

use crate::bits::{self, Bits};
use crate::crypto::{
    decode_positions, encode_positions, encoded_positions_len, otp_decrypt, otp_encrypt,
    plaintext_message, qkd_establish, ClassicalMessage, MessageLabel, PartyId, SharedKey,
};
use crate::error::ProtocolError;
use crate::rng::{stream, SimRng, Stream};
use crate::states::InitialKind;
use rand::seq::index;
use rand::Rng;

/// Width of the R′ broadcast.
pub const R_PRIME_BITS: usize = 32;

/// Optional hooks into a run. The default is an ideal channel with randomly
/// chosen initial states.
#[derive(Default)]
pub struct RunOptions {
    pub channel: Option<Box<dyn QuantumChannel>>,
    pub alice_kinds: Option<Vec<InitialKind>>,
    pub bob_kinds: Option<Vec<InitialKind>>,
}

/// What TP holds after Step 5: the merged sequences it decrypted and R′.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpView {
    pub merged_a: Bits,
    pub merged_b: Bits,
    pub r_prime: usize,
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub report: ComparisonReport,
    pub transcript: Transcript,
    /// Absent when the run aborted before Step 4.
    pub tp_view: Option<TpView>,
}

/// Inserts `mix[j]` at `positions[j]` and fills the remaining slots with `c` in order.
pub fn merge(c: &[bool], mix: &[bool], positions: &[usize]) -> Result<Bits, ProtocolError> {
    if mix.len() != positions.len() {
        return Err(ProtocolError::Integrity(format!(
            "{} mix bits for {} positions",
            mix.len(),
            positions.len()
        )));
    }
    let total = c.len() + mix.len();
    if positions.windows(2).any(|w| w[0] >= w[1]) || positions.last().is_some_and(|&p| p >= total) {
        return Err(ProtocolError::Integrity(
            "insertion positions invalid".into(),
        ));
    }
    let mut out = Vec::with_capacity(total);
    let (mut ci, mut mi) = (0, 0);
    for pos in 0..total {
        if mi < positions.len() && positions[mi] == pos {
            out.push(mix[mi]);
            mi += 1;
        } else {
            out.push(c[ci]);
            ci += 1;
        }
    }
    Ok(out)
}

/// Inverse of [`merge`]: returns `(c, mix)`.
pub fn unmerge(merged: &[bool], positions: &[usize]) -> Result<(Bits, Bits), ProtocolError> {
    if positions.windows(2).any(|w| w[0] >= w[1])
        || positions.last().is_some_and(|&p| p >= merged.len())
    {
        return Err(ProtocolError::Integrity(
            "insertion positions invalid".into(),
        ));
    }
    let mut c = Vec::with_capacity(merged.len() - positions.len());
    let mut mix = Vec::with_capacity(positions.len());
    let mut next = positions.iter().peekable();
    for (i, &b) in merged.iter().enumerate() {
        if next.peek() == Some(&&i) {
            mix.push(b);
            next.next();
        } else {
            c.push(b);
        }
    }
    Ok((c, mix))
}

/// Step 5: TP's sum over the merged sequences.
pub fn step5_tp(merged_a: &[bool], merged_b: &[bool]) -> Result<usize, ProtocolError> {
    if merged_a.len() != merged_b.len() {
        return Err(ProtocolError::Integrity(format!(
            "merged sequences differ in length ({} vs {})",
            merged_a.len(),
            merged_b.len()
        )));
    }
    Ok(bits::hamming(merged_a, merged_b))
}

/// Step 6: strip the mix-up contribution from R′.
pub fn step6_result(
    r_prime: usize,
    mix_a: &[bool],
    mix_b: &[bool],
) -> Result<(usize, Verdict), ProtocolError> {
    if mix_a.len() != mix_b.len() {
        return Err(ProtocolError::Integrity(
            "mix sequences differ in length".into(),
        ));
    }
    let r = r_prime
        .checked_sub(bits::hamming(mix_a, mix_b))
        .ok_or_else(|| {
            ProtocolError::Integrity(format!("R′ = {r_prime} is below the mix-up distance"))
        })?;
    let verdict = if r == 0 {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok((r, verdict))
}

struct Keys {
    ab: Option<SharedKey>,
    at: SharedKey,
    bt: SharedKey,
}

/// One protocol run, driven phase by phase. [`run_protocol`] is the usual entry
/// point; the phases are public so campaigns can stop after the quantum exchange.
pub struct Session {
    config: ProtocolConfig,
    alice: PartyState,
    bob: PartyState,
    lab: QuantumLab,
    transcript: Transcript,
    keys: Keys,
    rng_alice: SimRng,
    rng_bob: SimRng,
    channel: Box<dyn QuantumChannel>,
    forced_a: Option<Vec<InitialKind>>,
    forced_b: Option<Vec<InitialKind>>,
    error_rates: Option<ErrorRates>,
}

impl Session {
    pub fn new(
        config: &ProtocolConfig,
        x: &[bool],
        y: &[bool],
        options: RunOptions,
    ) -> Result<Self, ProtocolError> {
        config.validate()?;
        let n = config.bits;
        if x.len() != n || y.len() != n {
            return Err(ProtocolError::Config(format!(
                "secrets must have {n} bits (got {} and {})",
                x.len(),
                y.len()
            )));
        }
        let seed = config.seed;
        let mut transcript = Transcript::new();
        let mut key_rng = stream(seed, Stream::KeyOracle);
        let ab = if config.variant.plaintext_mix() {
            None
        } else {
            let len = 2 * config.mix + encoded_positions_len(config.mix, n + config.mix);
            let k = qkd_establish(PartyId::Alice, PartyId::Bob, len, &mut key_rng)?;
            transcript.event(
                None,
                EventKind::KeyEstablished,
                format!("{} ({len} bits)", k.name()),
            );
            Some(k)
        };
        let at = qkd_establish(PartyId::Alice, PartyId::Tp, n + config.mix, &mut key_rng)?;
        let bt = qkd_establish(PartyId::Bob, PartyId::Tp, n + config.mix, &mut key_rng)?;
        for k in [&at, &bt] {
            transcript.event(
                None,
                EventKind::KeyEstablished,
                format!("{} ({} bits)", k.name(), k.len()),
            );
        }
        Ok(Self {
            config: config.clone(),
            alice: PartyState::new(PartyId::Alice, x.to_vec()),
            bob: PartyState::new(PartyId::Bob, y.to_vec()),
            lab: QuantumLab::new(),
            transcript,
            keys: Keys { ab, at, bt },
            rng_alice: stream(seed, Stream::Alice),
            rng_bob: stream(seed, Stream::Bob),
            channel: options.channel.unwrap_or_else(|| Box::new(IdealChannel)),
            forced_a: options.alice_kinds,
            forced_b: options.bob_kinds,
            error_rates: None,
        })
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// Steps 1–3 up to and including both decoy checks. Returns the per-direction
    /// check results; if either aborted, nothing past the check has happened.
    pub fn quantum_phase(&mut self) -> Result<ErrorRates, ProtocolError> {
        if let Some(rates) = self.error_rates {
            return Ok(rates);
        }
        let cfg = self.config.clone();
        let out_a = party::step1_prepare(
            &mut self.alice,
            &cfg,
            &mut self.lab,
            &mut self.rng_alice,
            self.forced_a.as_deref(),
        )?;
        let out_b = party::step1_prepare(
            &mut self.bob,
            &cfg,
            &mut self.lab,
            &mut self.rng_bob,
            self.forced_b.as_deref(),
        )?;

        self.transcript
            .transmit(PartyId::Alice, PartyId::Bob, out_a.len());
        self.channel
            .transit(&mut self.lab, Direction::AliceToBob, &out_a)?;
        self.transcript
            .transmit(PartyId::Bob, PartyId::Alice, out_b.len());
        self.channel
            .transit(&mut self.lab, Direction::BobToAlice, &out_b)?;

        let reveal_a = self.alice.decoy_reveal()?;
        let reveal_b = self.bob.decoy_reveal()?;
        let check_ab = self.decoy_check(PartyId::Alice, &out_a, &reveal_a)?;
        let check_ba = self.decoy_check(PartyId::Bob, &out_b, &reveal_b)?;
        let rates = ErrorRates {
            alice_to_bob: check_ab,
            bob_to_alice: check_ba,
        };
        self.error_rates = Some(rates);
        if check_ab.aborted || check_ba.aborted {
            for (party, c) in [(PartyId::Alice, check_ab), (PartyId::Bob, check_ba)] {
                if c.aborted {
                    self.transcript.event(
                        Some(party),
                        EventKind::Abort,
                        format!(
                            "decoy error rate {} exceeds threshold {}",
                            c.error_rate, cfg.error_threshold
                        ),
                    );
                }
            }
            return Ok(rates);
        }

        let ann_a = self.alice.announcement();
        self.transcript.send(plaintext_message(
            PartyId::Alice,
            PartyId::Bob,
            MessageLabel::InitialStates,
            ann_a.clone(),
        ));
        let ann_b = self.bob.announcement();
        self.transcript.send(plaintext_message(
            PartyId::Bob,
            PartyId::Alice,
            MessageLabel::InitialStates,
            ann_b.clone(),
        ));
        party::step2_align(&mut self.bob, &out_a, &reveal_a, &ann_a, &mut self.lab)?;
        party::step2_align(&mut self.alice, &out_b, &reveal_b, &ann_b, &mut self.lab)?;

        party::step3_compute(&mut self.alice, &mut self.lab, &mut self.rng_alice)?;
        party::step3_compute(&mut self.bob, &mut self.lab, &mut self.rng_bob)?;
        Ok(rates)
    }

    /// Sender reveals decoys, receiver measures and publishes outcomes, sender
    /// computes the error rate.
    fn decoy_check(
        &mut self,
        sender: PartyId,
        outbound: &[ParticleRef],
        reveal: &[bool],
    ) -> Result<DecoyCheck, ProtocolError> {
        let (receiver, rng) = match sender {
            PartyId::Alice => (PartyId::Bob, &mut self.rng_bob),
            _ => (PartyId::Alice, &mut self.rng_alice),
        };
        self.transcript.send(plaintext_message(
            sender,
            receiver,
            MessageLabel::DecoyPositions,
            reveal.to_vec(),
        ));
        let outcomes = party::step2_measure_decoys(outbound, reveal, &mut self.lab, rng)?;
        self.transcript.send(plaintext_message(
            receiver,
            sender,
            MessageLabel::DecoyOutcomes,
            outcomes.clone(),
        ));
        let owner = if sender == PartyId::Alice {
            &self.alice
        } else {
            &self.bob
        };
        let check = owner.check_decoy_outcomes(&outcomes, self.config.error_threshold)?;
        self.transcript.event(
            Some(sender),
            EventKind::DecoyCheck,
            format!("{} of {} decoys wrong", check.errors, check.decoys),
        );
        Ok(check)
    }

    fn send_maybe_encrypted(
        &mut self,
        sender: PartyId,
        receiver: PartyId,
        label: MessageLabel,
        payload: &[bool],
    ) -> Result<Bits, ProtocolError> {
        let msg = match self.keys.ab.as_mut() {
            Some(key) => otp_encrypt(key, sender, receiver, label, payload)?,
            None => plaintext_message(sender, receiver, label, payload.to_vec()),
        };
        let msg = self.transcript.send(msg);
        self.receive(&msg)
    }

    fn receive(&self, msg: &ClassicalMessage) -> Result<Bits, ProtocolError> {
        if !msg.encrypted {
            return Ok(msg.payload.clone());
        }
        let key =
            match (msg.sender, msg.receiver) {
                (PartyId::Tp, _) | (_, PartyId::Tp) => {
                    if msg.sender == PartyId::Alice || msg.receiver == PartyId::Alice {
                        &self.keys.at
                    } else {
                        &self.keys.bt
                    }
                }
                _ => self.keys.ab.as_ref().ok_or_else(|| {
                    ProtocolError::Integrity("no key for encrypted message".into())
                })?,
            };
        Ok(otp_decrypt(key, msg)?)
    }

    /// Steps 4–6, or the abort report if the quantum phase aborted.
    pub fn finish(mut self) -> Result<ProtocolRun, ProtocolError> {
        let rates = self.quantum_phase()?;
        if rates.alice_to_bob.aborted || rates.bob_to_alice.aborted {
            let report = self.report(Verdict::AbortedEavesdrop, None, None, rates);
            return Ok(ProtocolRun {
                report,
                transcript: self.transcript,
                tp_view: None,
            });
        }

        let cfg = self.config.clone();
        let (n, l) = (cfg.bits, cfg.mix);

        // Step 4
        let mix_a: Bits = (0..l).map(|_| self.rng_alice.gen()).collect();
        let mix_b: Bits = (0..l).map(|_| self.rng_bob.gen()).collect();
        let mix_a_at_bob =
            self.send_maybe_encrypted(PartyId::Alice, PartyId::Bob, MessageLabel::MixA, &mix_a)?;
        let mix_b_at_alice =
            self.send_maybe_encrypted(PartyId::Bob, PartyId::Alice, MessageLabel::MixB, &mix_b)?;
        let mut s_q = index::sample(&mut self.rng_alice, n + l, l).into_vec();
        s_q.sort_unstable();
        let s_q_wire = encode_positions(&s_q, n + l)?;
        let s_q_at_bob = decode_positions(
            &self.send_maybe_encrypted(
                PartyId::Alice,
                PartyId::Bob,
                MessageLabel::InsertPositions,
                &s_q_wire,
            )?,
            n + l,
        )?;
        self.alice.c_mix = mix_a.clone();
        self.bob.c_mix = mix_b.clone();
        self.alice.c_merged = merge(&self.alice.c, &mix_a, &s_q)?;
        self.bob.c_merged = merge(&self.bob.c, &mix_b, &s_q_at_bob)?;

        let msg_a = otp_encrypt(
            &mut self.keys.at,
            PartyId::Alice,
            PartyId::Tp,
            MessageLabel::MergedA,
            &self.alice.c_merged,
        )?;
        let msg_a = self.transcript.send(msg_a);
        let msg_b = otp_encrypt(
            &mut self.keys.bt,
            PartyId::Bob,
            PartyId::Tp,
            MessageLabel::MergedB,
            &self.bob.c_merged,
        )?;
        let msg_b = self.transcript.send(msg_b);

        // Step 5
        let merged_a = self.receive(&msg_a)?;
        let merged_b = self.receive(&msg_b)?;
        let r_prime = step5_tp(&merged_a, &merged_b)?;
        let wire = bits::to_bits_be(r_prime as u64, R_PRIME_BITS);
        let mut heard = Vec::new();
        for to in [PartyId::Alice, PartyId::Bob] {
            let m = self.transcript.send(plaintext_message(
                PartyId::Tp,
                to,
                MessageLabel::RPrime,
                wire.clone(),
            ));
            heard.push(bits::from_bits_be(&m.payload) as usize);
        }

        // Step 6
        let (r_alice, verdict) = step6_result(heard[0], &mix_a, &mix_b_at_alice)?;
        let (r_bob, _) = step6_result(heard[1], &mix_a_at_bob, &mix_b)?;
        if r_alice != r_bob {
            return Err(ProtocolError::Integrity(format!(
                "Alice found R = {r_alice}, Bob found R = {r_bob}"
            )));
        }
        self.transcript
            .event(None, EventKind::Verdict, format!("R = {r_alice}"));
        let report = self.report(verdict, Some(r_alice), Some(r_prime), rates);
        Ok(ProtocolRun {
            report,
            transcript: self.transcript,
            tp_view: Some(TpView {
                merged_a,
                merged_b,
                r_prime,
            }),
        })
    }

    fn report(
        &self,
        verdict: Verdict,
        r: Option<usize>,
        r_prime: Option<usize>,
        rates: ErrorRates,
    ) -> ComparisonReport {
        let cfg = &self.config;
        let (a, b) = (&self.alice, &self.bob);
        let per_bit = (0..a.c.len())
            .map(|i| {
                let u = |x: bool| u8::from(x);
                BitRecord {
                    index: i,
                    x: u(a.secret[i]),
                    y: u(b.secret[i]),
                    kind_a: a.prepared[i].kind,
                    kind_b: b.prepared[i].kind,
                    m_a1: a.m_retained[i].clone(),
                    m_b2: a.m_received[i].clone(),
                    m_b1: b.m_retained[i].clone(),
                    m_a2: b.m_received[i].clone(),
                    c_a1: u(a.c_retained[i]),
                    c_b2: u(a.c_received[i]),
                    c_b1: u(b.c_retained[i]),
                    c_a2: u(b.c_received[i]),
                    c_a: u(a.c[i]),
                    c_b: u(b.c[i]),
                    c_i: u(a.c[i] ^ b.c[i]),
                }
            })
            .collect();
        let mut notes = Vec::new();
        if cfg.variant == Variant::Lwj11 {
            notes.push(
                "eavesdrop checking uses decoy photons in place of the original W-state check"
                    .to_string(),
            );
        }
        if cfg.encoding == Encoding::SigmaX && cfg.variant != Variant::Lwg12 {
            notes.push("sigma_x encoding leaves the |+>/|-> branch unchanged; indices prepared as W1' or phi2 with bit 1 can give wrong C_i".to_string());
        }
        if r_prime == Some(0) {
            notes.push("R' = 0 tells TP the secrets are equal".to_string());
        }
        ComparisonReport {
            variant: cfg.variant,
            encoding: cfg.encoding,
            bits: cfg.bits,
            mix: cfg.mix,
            decoys: cfg.decoys,
            seed: cfg.seed,
            verdict,
            r,
            r_prime,
            per_bit,
            error_rates: rates,
            notes,
        }
    }
}

/// Runs Steps 1–6 end to end.
pub fn run_protocol(
    config: &ProtocolConfig,
    x: &[bool],
    y: &[bool],
    options: RunOptions,
) -> Result<ProtocolRun, ProtocolError> {
    let mut session = Session::new(config, x, y, options)?;
    session.quantum_phase()?;
    session.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{hamming, to_bits_le};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn cfg(variant: Variant, bits: usize, seed: u64) -> ProtocolConfig {
        ProtocolConfig {
            variant,
            bits,
            seed,
            ..ProtocolConfig::default()
        }
    }

    fn run(config: &ProtocolConfig, x: u64, y: u64) -> ProtocolRun {
        let n = config.bits;
        run_protocol(
            config,
            &to_bits_le(x, n),
            &to_bits_le(y, n),
            RunOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn equal_secrets_give_equal() {
        let r = run(&cfg(Variant::Aw, 4, 3), 0xA, 0xA);
        assert_eq!(r.report.verdict, Verdict::Equal);
        assert_eq!(r.report.r, Some(0));
    }

    #[test]
    fn one_bit_difference() {
        let r = run(&cfg(Variant::Aw, 4, 3), 0b1010, 0b1000);
        assert_eq!(r.report.verdict, Verdict::NotEqual);
        assert_eq!(r.report.r, Some(1));
    }

    #[test]
    fn all_variants_correct_with_isy() {
        for variant in [Variant::Aw, Variant::Lwj11, Variant::Lwg12] {
            for seed in 0..20 {
                let c = cfg(variant, 8, seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (x, y) = (rng.gen::<u8>() as u64, rng.gen::<u8>() as u64);
                let r = run(&c, x, y);
                assert_eq!(
                    r.report.r,
                    Some((x ^ y).count_ones() as usize),
                    "{variant} seed {seed}"
                );
                let rp = r.report.r_prime.unwrap();
                assert!(r.report.r.unwrap() <= rp);
            }
        }
    }

    #[test]
    fn anticorrelation_per_state() {
        let c = cfg(Variant::Aw, 16, 11);
        let r = run(&c, 0x1234, 0xBEEF);
        for b in &r.report.per_bit {
            // Alice's state: her pair bit vs the third particle Bob measured.
            assert_eq!(b.c_a1 ^ b.c_a2, 1 - b.x);
            assert_eq!(b.c_b1 ^ b.c_b2, 1 - b.y);
            assert_eq!(b.c_i, b.x ^ b.y);
        }
    }

    #[test]
    fn empty_mix_means_r_prime_is_r() {
        let mut c = cfg(Variant::Aw, 6, 2);
        c.mix = 0;
        c.allow_empty_mix = true;
        let r = run(&c, 0b101100, 0b000111);
        assert_eq!(r.report.r, Some(4));
        assert_eq!(r.report.r_prime, Some(4));
        let tp = r.tp_view.unwrap();
        assert_eq!(tp.merged_a.len(), 6);
    }

    #[test]
    fn transcript_audit() {
        let common: BTreeSet<MessageLabel> = [
            MessageLabel::InitialStates,
            MessageLabel::DecoyPositions,
            MessageLabel::DecoyOutcomes,
            MessageLabel::RPrime,
        ]
        .into();
        let aw = run(&cfg(Variant::Aw, 8, 1), 3, 5);
        assert_eq!(aw.transcript.plaintext_labels(), common);
        for label in [
            MessageLabel::MixA,
            MessageLabel::MixB,
            MessageLabel::InsertPositions,
        ] {
            assert!(aw.transcript.messages_labeled(label).all(|m| m.encrypted));
            assert_eq!(aw.transcript.messages_labeled(label).count(), 1);
        }
        for variant in [Variant::Lwj11, Variant::Lwg12] {
            let t = run(&cfg(variant, 8, 1), 3, 5).transcript;
            let mut expected = common.clone();
            expected.extend([
                MessageLabel::MixA,
                MessageLabel::MixB,
                MessageLabel::InsertPositions,
            ]);
            assert_eq!(t.plaintext_labels(), expected);
            assert_eq!(
                t.encrypted_labels(),
                [MessageLabel::MergedA, MessageLabel::MergedB].into()
            );
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let c = cfg(Variant::Aw, 12, 99);
        let a = run(&c, 0xABC, 0x123);
        let b = run(&c, 0xABC, 0x123);
        assert_eq!(
            serde_json::to_string(&a.report).unwrap(),
            serde_json::to_string(&b.report).unwrap()
        );
        assert_eq!(
            serde_json::to_string(&a.transcript).unwrap(),
            serde_json::to_string(&b.transcript).unwrap()
        );
    }

    #[test]
    fn forced_kinds_worked_example() {
        let c = cfg(Variant::Aw, 1, 4);
        let opts = RunOptions {
            alice_kinds: Some(vec![InitialKind::W1]),
            bob_kinds: Some(vec![InitialKind::W1Prime]),
            ..RunOptions::default()
        };
        let r = run_protocol(&c, &[false], &[false], opts).unwrap();
        let b = &r.report.per_bit[0];
        assert_eq!(b.c_a, b.c_b);
        assert_eq!(b.c_i, 0);
    }

    #[test]
    fn sigma_x_fails_on_w1_prime_with_bit_one() {
        let mut c = cfg(Variant::Aw, 1, 0);
        c.encoding = Encoding::SigmaX;
        let opts = || RunOptions {
            alice_kinds: Some(vec![InitialKind::W1Prime]),
            bob_kinds: Some(vec![InitialKind::W1]),
            ..RunOptions::default()
        };
        for seed in 0..10 {
            c.seed = seed;
            let r = run_protocol(&c, &[true], &[false], opts()).unwrap();
            assert_eq!(
                r.report.per_bit[0].c_i, 0,
                "flip lost on the X-basis branch"
            );
            assert!(r.report.notes.iter().any(|n| n.contains("sigma_x")));
        }
    }

    #[test]
    fn secrets_must_match_length() {
        let c = cfg(Variant::Aw, 4, 0);
        assert!(matches!(
            run_protocol(&c, &[true; 3], &[true; 4], RunOptions::default()),
            Err(ProtocolError::Config(_))
        ));
    }

    #[test]
    fn step5_and_step6_examples() {
        let v = |s: &str| s.chars().map(|c| c == '1').collect::<Bits>();
        assert_eq!(step5_tp(&v("1010"), &v("1010")).unwrap(), 0);
        assert_eq!(step5_tp(&v("1010"), &v("1001")).unwrap(), 2);
        assert!(step5_tp(&v("1"), &v("10")).is_err());
        assert_eq!(
            step6_result(3, &v("111"), &v("000")).unwrap(),
            (0, Verdict::Equal)
        );
        assert!(matches!(
            step6_result(1, &v("11"), &v("00")),
            Err(ProtocolError::Integrity(_))
        ));
    }

    proptest! {
        #[test]
        fn merge_unmerge_round_trip(c in proptest::collection::vec(any::<bool>(), 0..20),
                                    mix in proptest::collection::vec(any::<bool>(), 0..20),
                                    seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pos = index::sample(&mut rng, c.len() + mix.len(), mix.len()).into_vec();
            pos.sort_unstable();
            let merged = merge(&c, &mix, &pos).unwrap();
            prop_assert_eq!(merged.len(), c.len() + mix.len());
            let (c2, mix2) = unmerge(&merged, &pos).unwrap();
            prop_assert_eq!(c2, c);
            prop_assert_eq!(mix2, mix);
        }

        #[test]
        fn r_prime_decomposes(a in proptest::collection::vec(any::<bool>(), 1..12),
                              seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b: Bits = a.iter().map(|_| rng.gen()).collect();
            let l = rng.gen_range(0..10);
            let ma: Bits = (0..l).map(|_| rng.gen()).collect();
            let mb: Bits = (0..l).map(|_| rng.gen()).collect();
            let mut pos = index::sample(&mut rng, a.len() + l, l).into_vec();
            pos.sort_unstable();
            let rp = step5_tp(&merge(&a, &ma, &pos).unwrap(), &merge(&b, &mb, &pos).unwrap()).unwrap();
            prop_assert_eq!(rp, hamming(&a, &b) + hamming(&ma, &mb));
        }
    }
}
