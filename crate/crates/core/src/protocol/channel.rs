//! In-process channel model: reliable ordered duplex delivery, with an
//! optional deterministic fault injector for robustness tests.
//!
//! Every transmitted frame goes through the wire codec, so the transcript
//! is exactly the byte stream an eavesdropper would capture.

use super::wire::{decode_message, encode_message, Message};
use crate::error::Result;

/// What happens to one transmitted frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultAction {
    Deliver,
    Drop,
    Duplicate,
    /// Deliver with the byte at the given offset (mod frame length) flipped.
    CorruptByte(usize),
}

/// Deterministic fault plan keyed by the global frame sequence number.
pub type FaultPlan = Box<dyn FnMut(u64) -> FaultAction>;

pub struct Channel {
    transcript: Vec<Message>,
    faults: Option<FaultPlan>,
    seq: u64,
    commit_payload_len: usize,
}

impl Channel {
    pub fn reliable(commit_payload_len: usize) -> Self {
        Channel {
            transcript: Vec::new(),
            faults: None,
            seq: 0,
            commit_payload_len,
        }
    }

    pub fn with_faults(commit_payload_len: usize, plan: FaultPlan) -> Self {
        Channel {
            transcript: Vec::new(),
            faults: Some(plan),
            seq: 0,
            commit_payload_len,
        }
    }

    /// Transmit one message; returns the frames that actually arrive, each
    /// decoded from its wire bytes. A decode error after corruption
    /// surfaces as `Err`, which the session treats as a malformed message.
    pub fn transmit(&mut self, m: &Message) -> Result<Vec<Message>> {
        let action = match self.faults.as_mut() {
            Some(plan) => plan(self.seq),
            None => FaultAction::Deliver,
        };
        self.seq += 1;
        let bytes = encode_message(m);
        let mut delivered = Vec::new();
        match action {
            FaultAction::Deliver => {
                self.transcript.push(m.clone());
                delivered.push(decode_message(&bytes, self.commit_payload_len)?);
            }
            FaultAction::Drop => {
                self.transcript.push(m.clone());
            }
            FaultAction::Duplicate => {
                self.transcript.push(m.clone());
                self.transcript.push(m.clone());
                delivered.push(decode_message(&bytes, self.commit_payload_len)?);
                delivered.push(decode_message(&bytes, self.commit_payload_len)?);
            }
            FaultAction::CorruptByte(offset) => {
                self.transcript.push(m.clone());
                let mut corrupted = bytes.clone();
                let at = offset % corrupted.len();
                corrupted[at] ^= 0x01;
                delivered.push(decode_message(&corrupted, self.commit_payload_len)?);
            }
        }
        Ok(delivered)
    }

    pub fn transcript(&self) -> &[Message] {
        &self.transcript
    }

    pub fn into_transcript(self) -> Vec<Message> {
        self.transcript
    }

    /// The transcript as raw wire bytes, frame after frame.
    pub fn transcript_bytes(&self) -> Vec<u8> {
        self.transcript
            .iter()
            .flat_map(|m| encode_message(m))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::wire::MessageKind;
    use super::*;

    fn msg(attempt_id: u32) -> Message {
        Message {
            kind: MessageKind::Ack,
            session_id: 1,
            attempt_id,
            payload: vec![],
        }
    }

    #[test]
    fn reliable_channel_delivers_everything_in_order() {
        let mut ch = Channel::reliable(32);
        for i in 0..5 {
            let got = ch.transmit(&msg(i)).unwrap();
            assert_eq!(got.len(), 1);
            assert_eq!(got[0].attempt_id, i);
        }
        assert_eq!(ch.transcript().len(), 5);
    }

    #[test]
    fn drop_and_duplicate_follow_the_plan() {
        let plan: FaultPlan = Box::new(|seq| match seq {
            1 => FaultAction::Drop,
            3 => FaultAction::Duplicate,
            _ => FaultAction::Deliver,
        });
        let mut ch = Channel::with_faults(32, plan);
        assert_eq!(ch.transmit(&msg(0)).unwrap().len(), 1);
        assert_eq!(ch.transmit(&msg(1)).unwrap().len(), 0);
        assert_eq!(ch.transmit(&msg(2)).unwrap().len(), 1);
        assert_eq!(ch.transmit(&msg(3)).unwrap().len(), 2);
        // Dropped frame still shows on the air; duplicate shows twice.
        assert_eq!(ch.transcript().len(), 5);
    }

    #[test]
    fn corruption_surfaces_as_decode_error() {
        let plan: FaultPlan = Box::new(|_| FaultAction::CorruptByte(0));
        let mut ch = Channel::with_faults(32, plan);
        assert!(ch.transmit(&msg(0)).is_err());
    }
}
