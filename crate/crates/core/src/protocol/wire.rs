//! Wire framing for protocol messages.
//!
//! Frame layout, all integers little-endian:
//! magic 0xB2, version 0x01, kind u8, session_id u64, attempt_id u32,
//! payload_len u16, payload bytes.

use crate::error::{Error, Result};

pub const MAGIC: u8 = 0xB2;
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 1 + 1 + 1 + 8 + 4 + 2;
/// CONFIRM payload: 4-byte masked index plus 32-byte tag.
pub const CONFIRM_PAYLOAD_LEN: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum MessageKind {
    Commit = 1,
    Confirm = 2,
    Ack = 3,
    Fail = 4,
}

impl MessageKind {
    fn from_u8(v: u8) -> Option<Self> {
        match v {
            1 => Some(MessageKind::Commit),
            2 => Some(MessageKind::Confirm),
            3 => Some(MessageKind::Ack),
            4 => Some(MessageKind::Fail),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    pub session_id: u64,
    pub attempt_id: u32,
    pub payload: Vec<u8>,
}

pub fn encode_message(m: &Message) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + m.payload.len());
    out.push(MAGIC);
    out.push(VERSION);
    out.push(m.kind as u8);
    out.extend_from_slice(&m.session_id.to_le_bytes());
    out.extend_from_slice(&m.attempt_id.to_le_bytes());
    out.extend_from_slice(&(m.payload.len() as u16).to_le_bytes());
    out.extend_from_slice(&m.payload);
    out
}

/// Decode one frame. `commit_payload_len` is the session's expected COMMIT
/// payload size, ceil(N/8) bytes.
pub fn decode_message(buf: &[u8], commit_payload_len: usize) -> Result<Message> {
    if buf.len() < HEADER_LEN {
        return Err(Error::MessageDecode(format!(
            "frame of {} bytes is shorter than the {}-byte header",
            buf.len(),
            HEADER_LEN
        )));
    }
    if buf[0] != MAGIC {
        return Err(Error::MessageDecode(format!("bad magic {:#04x}", buf[0])));
    }
    if buf[1] != VERSION {
        return Err(Error::MessageDecode(format!("unsupported version {}", buf[1])));
    }
    let kind = MessageKind::from_u8(buf[2])
        .ok_or_else(|| Error::MessageDecode(format!("unknown message kind {}", buf[2])))?;
    let session_id = u64::from_le_bytes(buf[3..11].try_into().unwrap());
    let attempt_id = u32::from_le_bytes(buf[11..15].try_into().unwrap());
    let payload_len = u16::from_le_bytes(buf[15..17].try_into().unwrap()) as usize;
    if buf.len() != HEADER_LEN + payload_len {
        return Err(Error::MessageDecode(format!(
            "frame length {} does not match declared payload of {} bytes",
            buf.len(),
            payload_len
        )));
    }
    let payload = buf[HEADER_LEN..].to_vec();
    let expected = match kind {
        MessageKind::Commit => Some(commit_payload_len),
        MessageKind::Confirm => Some(CONFIRM_PAYLOAD_LEN),
        MessageKind::Ack | MessageKind::Fail => Some(0),
    };
    if let Some(expected) = expected {
        if payload.len() != expected {
            return Err(Error::MessageDecode(format!(
                "{:?} payload must be {} bytes, got {}",
                kind,
                expected,
                payload.len()
            )));
        }
    }
    Ok(Message {
        kind,
        session_id,
        attempt_id,
        payload,
    })
}
