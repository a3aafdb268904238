use crate::crypto::{ClassicalMessage, MessageLabel, PartyId};
use serde::Serialize;
use std::collections::BTreeSet;

/// A batch of particles sent over a quantum channel. Which of them are decoys is
/// not part of the public record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumRecord {
    pub seq: usize,
    pub sender: PartyId,
    pub receiver: PartyId,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    KeyEstablished,
    DecoyCheck,
    Abort,
    Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub seq: usize,
    pub party: Option<PartyId>,
    pub kind: EventKind,
    pub detail: String,
}

/// Append-only log of everything an outside observer of the channels can see.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Transcript {
    pub classical: Vec<ClassicalMessage>,
    pub quantum: Vec<QuantumRecord>,
    pub events: Vec<Event>,
    #[serde(skip)]
    next_seq: usize,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    fn seq(&mut self) -> usize {
        let s = self.next_seq;
        self.next_seq += 1;
        s
    }

    /// Appends `message` and returns a copy carrying its sequence number.
    pub fn send(&mut self, mut message: ClassicalMessage) -> ClassicalMessage {
        message.seq = self.seq();
        self.classical.push(message.clone());
        message
    }

    pub fn transmit(&mut self, sender: PartyId, receiver: PartyId, count: usize) {
        let seq = self.seq();
        self.quantum.push(QuantumRecord {
            seq,
            sender,
            receiver,
            count,
        });
    }

    pub fn event(&mut self, party: Option<PartyId>, kind: EventKind, detail: impl Into<String>) {
        let seq = self.seq();
        self.events.push(Event {
            seq,
            party,
            kind,
            detail: detail.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.next_seq
    }

    pub fn is_empty(&self) -> bool {
        self.next_seq == 0
    }

    pub fn messages_labeled(&self, label: MessageLabel) -> impl Iterator<Item = &ClassicalMessage> {
        self.classical.iter().filter(move |m| m.label == label)
    }

    pub fn first_labeled(&self, label: MessageLabel) -> Option<&ClassicalMessage> {
        self.messages_labeled(label).next()
    }

    pub fn plaintext_labels(&self) -> BTreeSet<MessageLabel> {
        self.classical
            .iter()
            .filter(|m| !m.encrypted)
            .map(|m| m.label)
            .collect()
    }

    pub fn encrypted_labels(&self) -> BTreeSet<MessageLabel> {
        self.classical
            .iter()
            .filter(|m| m.encrypted)
            .map(|m| m.label)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crypto::plaintext_message;

    #[test]
    fn sequence_numbers_span_all_entry_kinds() {
        let mut t = Transcript::new();
        t.event(None, EventKind::KeyEstablished, "K_AT");
        t.transmit(PartyId::Alice, PartyId::Bob, 3);
        let m = t.send(plaintext_message(
            PartyId::Tp,
            PartyId::Alice,
            MessageLabel::RPrime,
            vec![true],
        ));
        assert_eq!(m.seq, 2);
        assert_eq!(t.quantum[0].seq, 1);
        assert_eq!(t.len(), 3);
        assert_eq!(
            t.plaintext_labels().into_iter().collect::<Vec<_>>(),
            vec![MessageLabel::RPrime]
        );
    }
}
