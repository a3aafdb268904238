//! Participant-side quantum steps: preparation, decoy checking, alignment and
//! the Z-basis measurements that yield the comparison bits.

use super::config::ProtocolConfig;
use super::lab::{ParticleRef, QuantumLab};
use super::report::DecoyCheck;
use crate::bits::Bits;
use crate::crypto::{decode_positions, encode_positions, encoded_positions_len, PartyId};
use crate::error::ProtocolError;
use crate::qsim::Gate;
use crate::states::{make_decoy, Basis, DecoyKind, InitialKind};
use rand::seq::{index, SliceRandom};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreparedState {
    pub kind: InitialKind,
    pub register: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecoyEntry {
    /// Index in the outbound sequence.
    pub position: usize,
    pub kind: DecoyKind,
}

/// Where the decoys went and what they were. Positions are increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecoyBook {
    pub sequence_len: usize,
    pub entries: Vec<DecoyEntry>,
}

impl DecoyBook {
    pub fn positions(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.position).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PartyState {
    pub id: PartyId,
    pub secret: Bits,
    pub prepared: Vec<PreparedState>,
    pub decoy_book: DecoyBook,
    /// The other party's travel particles after decoy removal and alignment.
    pub received: Vec<ParticleRef>,
    /// Measured kets of the retained particles, per index.
    pub m_retained: Vec<String>,
    /// Measured kets of the received particles, per index.
    pub m_received: Vec<String>,
    pub c_retained: Bits,
    pub c_received: Bits,
    pub c: Bits,
    pub c_mix: Bits,
    pub c_merged: Bits,
}

impl PartyState {
    pub fn new(id: PartyId, secret: Bits) -> Self {
        Self {
            id,
            secret,
            prepared: Vec::new(),
            decoy_book: DecoyBook::default(),
            received: Vec::new(),
            m_retained: Vec::new(),
            m_received: Vec::new(),
            c_retained: Vec::new(),
            c_received: Vec::new(),
            c: Vec::new(),
            c_mix: Vec::new(),
            c_merged: Vec::new(),
        }
    }

    /// Public decoy reveal: encoded positions followed by one basis bit per decoy
    /// (0 = Z, 1 = X).
    pub fn decoy_reveal(&self) -> Result<Bits, ProtocolError> {
        let mut out = encode_positions(&self.decoy_book.positions(), self.decoy_book.sequence_len)?;
        out.extend(
            self.decoy_book
                .entries
                .iter()
                .map(|e| e.kind.basis() == Basis::X),
        );
        Ok(out)
    }

    /// Compares the receiver's published decoy outcomes with what was sent.
    pub fn check_decoy_outcomes(
        &self,
        outcomes: &[bool],
        threshold: f64,
    ) -> Result<DecoyCheck, ProtocolError> {
        let entries = &self.decoy_book.entries;
        if outcomes.len() != entries.len() {
            return Err(ProtocolError::Integrity(format!(
                "{} decoy outcomes for {} decoys",
                outcomes.len(),
                entries.len()
            )));
        }
        let errors = entries
            .iter()
            .zip(outcomes)
            .filter(|(e, &o)| (e.kind.value() == 1) != o)
            .count();
        let error_rate = if entries.is_empty() {
            0.0
        } else {
            errors as f64 / entries.len() as f64
        };
        Ok(DecoyCheck {
            decoys: entries.len(),
            errors,
            error_rate,
            aborted: error_rate > threshold,
        })
    }

    /// Announcement bits: 1 where the receiver must apply H.
    pub fn announcement(&self) -> Bits {
        self.prepared
            .iter()
            .map(|p| p.kind.announcement_bit())
            .collect()
    }
}

/// Step 1: prepare N entangled states, encode the secret on each travel particle,
/// and interleave decoys. Returns the outbound particle sequence.
pub fn step1_prepare<R: Rng + ?Sized>(
    party: &mut PartyState,
    config: &ProtocolConfig,
    lab: &mut QuantumLab,
    rng: &mut R,
    forced_kinds: Option<&[InitialKind]>,
) -> Result<Vec<ParticleRef>, ProtocolError> {
    let n = config.bits;
    if party.secret.len() != n {
        return Err(ProtocolError::Config(format!(
            "{} secret has {} bits, expected {n}",
            party.id,
            party.secret.len()
        )));
    }
    let allowed = config.variant.kinds();
    let kinds: Vec<InitialKind> = match forced_kinds {
        Some(k) => {
            if k.len() != n || k.iter().any(|kind| !allowed.contains(kind)) {
                return Err(ProtocolError::Config(format!(
                    "forced kinds must be {n} entries from {allowed:?}"
                )));
            }
            k.to_vec()
        }
        None => (0..n)
            .map(|_| *allowed.choose(rng).expect("nonempty"))
            .collect(),
    };

    let gate = config.encoding.gate();
    let mut travel = Vec::with_capacity(n);
    party.prepared.clear();
    for (kind, &bit) in kinds.into_iter().zip(&party.secret) {
        let register = lab.add(kind.prepare());
        let particle = ParticleRef {
            register,
            qubit: kind.travel_qubit(),
        };
        if bit {
            lab.apply(particle, &gate)?;
        }
        party.prepared.push(PreparedState { kind, register });
        travel.push(particle);
    }

    let d = config.decoys;
    let total = n + d;
    let mut positions = index::sample(rng, total, d).into_vec();
    positions.sort_unstable();
    let entries: Vec<DecoyEntry> = positions
        .iter()
        .map(|&position| DecoyEntry {
            position,
            kind: *DecoyKind::ALL.choose(rng).expect("nonempty"),
        })
        .collect();

    let mut outbound = Vec::with_capacity(total);
    let mut travel_iter = travel.into_iter();
    let mut decoy_iter = entries.iter().peekable();
    for pos in 0..total {
        match decoy_iter.peek() {
            Some(e) if e.position == pos => {
                let register = lab.add(make_decoy(e.kind));
                outbound.push(ParticleRef { register, qubit: 0 });
                decoy_iter.next();
            }
            _ => outbound.push(travel_iter.next().expect("N travel particles")),
        }
    }
    party.decoy_book = DecoyBook {
        sequence_len: total,
        entries,
    };
    Ok(outbound)
}

fn parse_reveal(
    reveal: &[bool],
    sequence_len: usize,
) -> Result<(Vec<usize>, Vec<Basis>), ProtocolError> {
    // The reveal is the position list followed by one basis bit per position; the
    // count field tells us where the list ends.
    if reveal.len() < 16 {
        return Err(ProtocolError::Integrity("decoy reveal too short".into()));
    }
    let count = crate::bits::from_bits_be(&reveal[..16]) as usize;
    let split = encoded_positions_len(count, sequence_len);
    if reveal.len() != split + count {
        return Err(ProtocolError::Integrity(
            "decoy reveal has wrong length".into(),
        ));
    }
    let positions = decode_positions(&reveal[..split], sequence_len)?;
    let bases = reveal[split..]
        .iter()
        .map(|&x| if x { Basis::X } else { Basis::Z })
        .collect();
    Ok((positions, bases))
}

/// Step 2, receiver side of the check: measure each revealed decoy in its basis.
/// Returns the outcome bits to publish.
pub fn step2_measure_decoys<R: Rng + ?Sized>(
    inbound: &[ParticleRef],
    reveal: &[bool],
    lab: &mut QuantumLab,
    rng: &mut R,
) -> Result<Bits, ProtocolError> {
    let (positions, bases) = parse_reveal(reveal, inbound.len())?;
    positions
        .iter()
        .zip(bases)
        .map(|(&p, basis)| Ok(lab.measure_in_basis(inbound[p], basis, rng)? == 1))
        .collect()
}

/// Step 2, after both checks pass: drop the decoys and apply H to every particle
/// whose announced initial state calls for it.
pub fn step2_align(
    receiver: &mut PartyState,
    inbound: &[ParticleRef],
    reveal: &[bool],
    announcement: &[bool],
    lab: &mut QuantumLab,
) -> Result<(), ProtocolError> {
    let (positions, _) = parse_reveal(reveal, inbound.len())?;
    let kept: Vec<ParticleRef> = inbound
        .iter()
        .enumerate()
        .filter(|(i, _)| positions.binary_search(i).is_err())
        .map(|(_, p)| *p)
        .collect();
    if kept.len() != announcement.len() {
        return Err(ProtocolError::Integrity(format!(
            "{} particles remain but {} initial states were announced",
            kept.len(),
            announcement.len()
        )));
    }
    let h = Gate::h();
    for (particle, &needs_h) in kept.iter().zip(announcement) {
        if needs_h {
            lab.apply(*particle, &h)?;
        }
    }
    receiver.received = kept;
    Ok(())
}

fn ket(outcomes: &[u8]) -> String {
    outcomes
        .iter()
        .map(|b| if *b == 1 { '1' } else { '0' })
        .collect()
}

/// Bit carried by the retained particles: 0 for |00⟩ (or |0⟩), 1 for |01⟩/|10⟩ (or |1⟩).
pub fn retained_bit(outcomes: &[u8]) -> Result<bool, ProtocolError> {
    match outcomes {
        [b] => Ok(*b == 1),
        [0, 0] => Ok(false),
        [0, 1] | [1, 0] => Ok(true),
        other => Err(ProtocolError::Integrity(format!(
            "retained particles measured |{}⟩, which no honest run produces",
            ket(other)
        ))),
    }
}

/// Step 3: Z-measure the retained particles and the received travel particles and
/// form C_i = (retained bit) ⊕ (received bit).
pub fn step3_compute<R: Rng + ?Sized>(
    party: &mut PartyState,
    lab: &mut QuantumLab,
    rng: &mut R,
) -> Result<Bits, ProtocolError> {
    if party.received.len() != party.prepared.len() {
        return Err(ProtocolError::Integrity(format!(
            "{} holds {} received particles for {} states",
            party.id,
            party.received.len(),
            party.prepared.len()
        )));
    }
    party.m_retained.clear();
    party.m_received.clear();
    party.c_retained.clear();
    party.c_received.clear();
    for (own, theirs) in party.prepared.iter().zip(&party.received) {
        let retained = lab.measure_z(own.register, own.kind.retained_qubits(), rng)?;
        let received = lab.measure_z(theirs.register, &[theirs.qubit], rng)?;
        party.c_retained.push(retained_bit(&retained)?);
        party.c_received.push(received[0] == 1);
        party.m_retained.push(ket(&retained));
        party.m_received.push(ket(&received));
    }
    party.c = crate::bits::xor(&party.c_retained, &party.c_received);
    Ok(party.c.clone())
}
