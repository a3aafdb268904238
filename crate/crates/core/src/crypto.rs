//! Key oracle, one-time pad and classical message framing.
//!
//! Key distribution is modeled as a trusted oracle: both endpoints receive the same
//! uniformly random bits and nothing about them enters any transcript. Each key is a
//! single object per pair whose cursor only moves forward, so no key bit is ever used
//! twice regardless of which endpoint encrypts.

use crate::bits::{self, Bits};
use crate::error::CryptoError;
use rand::Rng;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde::Deserialize;
use std::fmt;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, Deserialize,
)]
pub enum PartyId {
    Alice,
    Bob,
    #[serde(rename = "TP")]
    Tp,
}

impl PartyId {
    fn letter(self) -> char {
        match self {
            PartyId::Alice => 'A',
            PartyId::Bob => 'B',
            PartyId::Tp => 'T',
        }
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartyId::Alice => "Alice",
            PartyId::Bob => "Bob",
            PartyId::Tp => "TP",
        })
    }
}

/// Semantic tag of a classical message.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, Deserialize,
)]
pub enum MessageLabel {
    #[serde(rename = "initial-state announcement")]
    InitialStates,
    #[serde(rename = "decoy positions")]
    DecoyPositions,
    #[serde(rename = "decoy outcomes")]
    DecoyOutcomes,
    #[serde(rename = "C'_A")]
    MixA,
    #[serde(rename = "C'_B")]
    MixB,
    #[serde(rename = "S_q")]
    InsertPositions,
    #[serde(rename = "C''_A")]
    MergedA,
    #[serde(rename = "C''_B")]
    MergedB,
    #[serde(rename = "R'")]
    RPrime,
}

impl MessageLabel {
    /// Labels that belong to the public decoy check (positions, bases and outcomes).
    pub fn is_decoy_reveal(self) -> bool {
        matches!(
            self,
            MessageLabel::DecoyPositions | MessageLabel::DecoyOutcomes
        )
    }
}

impl fmt::Display for MessageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedKey {
    pub pair: (PartyId, PartyId),
    bits: Bits,
    cursor: usize,
}

impl SharedKey {
    /// Conventional name such as `K_AB`.
    pub fn name(&self) -> String {
        format!("K_{}{}", self.pair.0.letter(), self.pair.1.letter())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.cursor
    }

    /// Read-only view of the key material (both endpoints hold these bits).
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    fn connects(&self, a: PartyId, b: PartyId) -> bool {
        (self.pair.0, self.pair.1) == (a, b) || (self.pair.0, self.pair.1) == (b, a)
    }

    fn consume(&mut self, len: usize) -> Result<(usize, &[bool]), CryptoError> {
        let offset = self.cursor;
        if len > self.remaining() {
            return Err(CryptoError::KeyExhausted {
                pair: self.name(),
                needed: len,
                offset,
                available: self.bits.len(),
            });
        }
        self.cursor += len;
        Ok((offset, &self.bits[offset..offset + len]))
    }
}

/// Trusted key oracle: `length` uniformly random bits shared by `a` and `b`.
pub fn qkd_establish<R: Rng + ?Sized>(
    a: PartyId,
    b: PartyId,
    length: usize,
    rng: &mut R,
) -> Result<SharedKey, CryptoError> {
    if length == 0 {
        return Err(CryptoError::EmptyKey);
    }
    Ok(SharedKey {
        pair: (a, b),
        bits: (0..length).map(|_| rng.gen::<bool>()).collect(),
        cursor: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalMessage {
    /// Position in the transcript; assigned on append.
    pub seq: usize,
    pub sender: PartyId,
    pub receiver: PartyId,
    pub label: MessageLabel,
    pub encrypted: bool,
    /// Bits as they appear on the wire (ciphertext when `encrypted`).
    pub payload: Bits,
    /// Offset of the key segment used, for encrypted messages.
    pub key_offset: Option<usize>,
}

impl Serialize for ClassicalMessage {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ClassicalMessage", 8)?;
        st.serialize_field("seq", &self.seq)?;
        st.serialize_field("sender", &self.sender)?;
        st.serialize_field("receiver", &self.receiver)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("encrypted", &self.encrypted)?;
        st.serialize_field("payload_hex", &bits::to_hex(&self.payload))?;
        st.serialize_field("payload_len", &self.payload.len())?;
        st.serialize_field("key_offset", &self.key_offset)?;
        st.end()
    }
}

pub fn plaintext_message(
    sender: PartyId,
    receiver: PartyId,
    label: MessageLabel,
    payload: Bits,
) -> ClassicalMessage {
    ClassicalMessage {
        seq: 0,
        sender,
        receiver,
        label,
        encrypted: false,
        payload,
        key_offset: None,
    }
}

/// XORs `payload` with the next unused key bits.
pub fn otp_encrypt(
    key: &mut SharedKey,
    sender: PartyId,
    receiver: PartyId,
    label: MessageLabel,
    payload: &[bool],
) -> Result<ClassicalMessage, CryptoError> {
    if !key.connects(sender, receiver) {
        return Err(CryptoError::WrongKey(key.name()));
    }
    let (offset, pad) = key.consume(payload.len())?;
    Ok(ClassicalMessage {
        seq: 0,
        sender,
        receiver,
        label,
        encrypted: true,
        payload: bits::xor(payload, pad),
        key_offset: Some(offset),
    })
}

/// Recovers the plaintext of `message` using the key region it names.
pub fn otp_decrypt(key: &SharedKey, message: &ClassicalMessage) -> Result<Bits, CryptoError> {
    let offset = match (message.encrypted, message.key_offset) {
        (true, Some(o)) if key.connects(message.sender, message.receiver) => o,
        _ => return Err(CryptoError::WrongKey(key.name())),
    };
    let end = offset + message.payload.len();
    if end > key.cursor {
        return Err(CryptoError::UnconsumedRegion { offset, end });
    }
    Ok(bits::xor(&message.payload, &key.bits[offset..end]))
}

fn position_width(domain_size: usize) -> usize {
    if domain_size <= 1 {
        0
    } else {
        (usize::BITS - (domain_size - 1).leading_zeros()) as usize
    }
}

/// Wire format for an insertion-position list: 16-bit big-endian count, then each
/// position as a big-endian field of `ceil(log2(domain_size))` bits.
pub fn encode_positions(positions: &[usize], domain_size: usize) -> Result<Bits, CryptoError> {
    if positions.len() > u16::MAX as usize {
        return Err(CryptoError::TooManyPositions(positions.len()));
    }
    for (i, &p) in positions.iter().enumerate() {
        if p >= domain_size {
            return Err(CryptoError::PositionOutOfRange {
                position: p,
                domain: domain_size,
            });
        }
        if i > 0 && positions[i - 1] >= p {
            return Err(CryptoError::NotIncreasing);
        }
    }
    let width = position_width(domain_size);
    let mut out = bits::to_bits_be(positions.len() as u64, 16);
    for &p in positions {
        out.extend(bits::to_bits_be(p as u64, width));
    }
    Ok(out)
}

pub fn decode_positions(encoded: &[bool], domain_size: usize) -> Result<Vec<usize>, CryptoError> {
    if encoded.len() < 16 {
        return Err(CryptoError::MalformedPositions(
            "shorter than the count field".into(),
        ));
    }
    let count = bits::from_bits_be(&encoded[..16]) as usize;
    let width = position_width(domain_size);
    if encoded.len() != 16 + count * width {
        return Err(CryptoError::MalformedPositions(format!(
            "expected {} bits for {count} positions, got {}",
            16 + count * width,
            encoded.len()
        )));
    }
    let positions: Vec<usize> = (0..count)
        .map(|i| bits::from_bits_be(&encoded[16 + i * width..16 + (i + 1) * width]) as usize)
        .collect();
    // Reuse the encoder's checks.
    encode_positions(&positions, domain_size)?;
    Ok(positions)
}

/// Length in bits of an encoded position list.
pub fn encoded_positions_len(count: usize, domain_size: usize) -> usize {
    16 + count * position_width(domain_size)
}
