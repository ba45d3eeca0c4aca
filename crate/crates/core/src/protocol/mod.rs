//! The two-party pairing exchange.
//!
//! The initiator (DevA) walks its change points; for each one it selects
//! key material, commits to a fresh random codeword, and sends the public
//! block. The responder (DevB) tries its own change point and the
//! configured neighboring alternatives, recovers the initiator's key
//! material through the error-correcting commitment, and answers with a
//! keyed confirmation token carrying its masked change-point index. The
//! initiator checks the token and the synchronization offset, then
//! acknowledges. Attempts continue until a key is agreed, the attempt
//! budget is spent, or the change points run out.
//!
//! Sessions are deterministic lock-step state machines: same signals,
//! seeds, and configs produce byte-identical transcripts.

mod channel;
mod wire;

pub use channel::{Channel, FaultAction, FaultPlan};
pub use wire::{decode_message, encode_message, Message, MessageKind, CONFIRM_PAYLOAD_LEN};

use crate::bits::BitString;
use crate::ecc::{commit, finalize_key, make_code, recover, BchCode, Commitment, FinalKey, KeyLen};
use crate::error::{Error, Result};
use crate::quantizer::{
    fit_lloyd_max, quantize_encode, select_key_bits, Coding, DensityInput, SegmentPolicy,
};
use crate::signal::Signal;
use crate::sync::{candidate_anchors, detect_change_points, find_cycles, within_sync_offset, SyncConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Initiator,
    Responder,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SessionConfig {
    pub key_len: KeyLen,
    /// BCH codeword and message lengths (N, K).
    pub bch: (usize, usize),
    pub bits_per_sample: u32,
    pub coding: Coding,
    pub sync_cfg: SyncConfig,
    pub seg_policy: SegmentPolicy,
    pub timeout_attempts: usize,
    pub role: Role,
    pub session_id: u64,
    /// Seeds the initiator's per-attempt random codewords.
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            key_len: KeyLen::L256,
            bch: (255, 115),
            bits_per_sample: 2,
            coding: Coding::Gray,
            sync_cfg: SyncConfig::default(),
            seg_policy: SegmentPolicy::default(),
            timeout_attempts: 20,
            role: Role::Initiator,
            session_id: 0,
            seed: 0,
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        self.sync_cfg.validate()?;
        self.seg_policy.validate()?;
        if self.bits_per_sample == 0 || self.bits_per_sample > 16 {
            return Err(Error::parameter("bits_per_sample must be in 1..=16"));
        }
        if self.timeout_attempts == 0 {
            return Err(Error::parameter("timeout_attempts must be >= 1"));
        }
        Ok(())
    }

    pub fn commit_payload_len(&self) -> usize {
        (self.bch.0 + 7) / 8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairingStatus {
    Success,
    Timeout,
    Aborted,
}

#[derive(Debug, Clone)]
pub struct PairingOutcome {
    pub status: PairingStatus,
    pub key: Option<FinalKey>,
    pub attempts_used: usize,
    pub agreed_cp_time_ms: Option<f64>,
}

impl PairingOutcome {
    fn timeout(attempts_used: usize) -> Self {
        PairingOutcome {
            status: PairingStatus::Timeout,
            key: None,
            attempts_used,
            agreed_cp_time_ms: None,
        }
    }

    fn aborted(attempts_used: usize) -> Self {
        PairingOutcome {
            status: PairingStatus::Aborted,
            key: None,
            attempts_used,
            agreed_cp_time_ms: None,
        }
    }
}

// ---------------------------------------------------------------------------
// Confirmation token
// ---------------------------------------------------------------------------

const MASK_DOMAIN: u8 = 0x49;
const TAG_DOMAIN: u8 = 0x43;

fn index_mask(key: &FinalKey, attempt_id: u32) -> [u8; 4] {
    let mut hasher = Sha256::new();
    hasher.update(key.key_bytes());
    hasher.update([MASK_DOMAIN]);
    hasher.update(attempt_id.to_le_bytes());
    let digest = hasher.finalize();
    [digest[0], digest[1], digest[2], digest[3]]
}

fn confirm_tag(key: &FinalKey, attempt_id: u32, cp_index: u32) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(key.key_bytes());
    hasher.update([TAG_DOMAIN]);
    hasher.update(attempt_id.to_le_bytes());
    hasher.update(cp_index.to_le_bytes());
    hasher.finalize().into()
}

/// Build the CONFIRM payload: the responder's change-point index masked
/// under the derived key, followed by a keyed confirmation tag over it.
pub fn make_confirm(key: &FinalKey, cp_index_b: u32, attempt_id: u32) -> Vec<u8> {
    let mask = index_mask(key, attempt_id);
    let index_bytes = cp_index_b.to_le_bytes();
    let mut payload = Vec::with_capacity(CONFIRM_PAYLOAD_LEN);
    for i in 0..4 {
        payload.push(index_bytes[i] ^ mask[i]);
    }
    payload.extend_from_slice(&confirm_tag(key, attempt_id, cp_index_b));
    payload
}

/// Result of checking a CONFIRM payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyOutcome {
    Accept { cp_index_b: u32 },
    RejectBadTag,
    RejectOutOfSync,
}

/// Verify a CONFIRM payload against the local key: unmask the index,
/// recompute the tag, then check the peer's change point lies within the
/// synchronization offset of our own.
pub fn verify_confirm(
    key: &FinalKey,
    payload: &[u8],
    attempt_id: u32,
    own_cp_time_ms: f64,
    responder_cp_time_ms: impl Fn(u32) -> Option<f64>,
    sync_offset_ms: f64,
) -> Result<VerifyOutcome> {
    if payload.len() != CONFIRM_PAYLOAD_LEN {
        return Err(Error::MessageDecode(format!(
            "confirm payload must be {} bytes, got {}",
            CONFIRM_PAYLOAD_LEN,
            payload.len()
        )));
    }
    let mask = index_mask(key, attempt_id);
    let mut index_bytes = [0u8; 4];
    for i in 0..4 {
        index_bytes[i] = payload[i] ^ mask[i];
    }
    let cp_index_b = u32::from_le_bytes(index_bytes);
    let expected = confirm_tag(key, attempt_id, cp_index_b);
    if expected[..] != payload[4..] {
        return Ok(VerifyOutcome::RejectBadTag);
    }
    match responder_cp_time_ms(cp_index_b) {
        Some(t_b) if within_sync_offset(own_cp_time_ms, t_b, sync_offset_ms) => {
            Ok(VerifyOutcome::Accept { cp_index_b })
        }
        _ => Ok(VerifyOutcome::RejectOutOfSync),
    }
}

// ---------------------------------------------------------------------------
// Device state
// ---------------------------------------------------------------------------

/// A change point with its precomputed key material.
struct UsableCp {
    time_ms: f64,
    material: BitString,
}

/// Everything one device derives from its signal before the exchange.
pub struct DeviceState {
    code: BchCode,
    usable: Vec<UsableCp>,
}

impl DeviceState {
    /// Derive cycles, change points, the quantizer, and per-change-point
    /// key material from a preprocessed signal.
    pub fn prepare(signal: &Signal, cfg: &SessionConfig) -> Result<Self> {
        cfg.validate()?;
        let code = make_code(cfg.bch.0, cfg.bch.1)?;
        let cycles = find_cycles(signal);
        let mut usable = Vec::new();
        if !cycles.is_empty() {
            let cps = detect_change_points(signal, &cycles, &cfg.sync_cfg)?;
            if !cps.is_empty() {
                let quantizer = fit_lloyd_max(
                    DensityInput::Samples(&signal.samples),
                    cfg.bits_per_sample,
                    cfg.coding,
                )?;
                let bits = quantize_encode(signal, &quantizer)?;
                for cp in &cps {
                    match select_key_bits(
                        &bits,
                        cp.idx,
                        code.n(),
                        cfg.bits_per_sample as u8,
                        &cfg.seg_policy,
                    ) {
                        Ok(material) => usable.push(UsableCp {
                            time_ms: signal.time_ms(cp.idx),
                            material,
                        }),
                        Err(Error::WindowUnderflow(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(DeviceState { code, usable })
    }

    /// Number of change points with enough surrounding bits to pair on.
    pub fn usable_cps(&self) -> usize {
        self.usable.len()
    }

    pub fn cp_time_ms(&self, ordinal: usize) -> Option<f64> {
        self.usable.get(ordinal).map(|u| u.time_ms)
    }
}

// ---------------------------------------------------------------------------
// Session driver
// ---------------------------------------------------------------------------

/// Result of one commit/confirm/ack round.
#[derive(Debug, Clone)]
pub enum AttemptOutcome {
    /// The initiator verified the confirmation; `responder_acked` is false
    /// when the final ACK was lost, leaving only the initiator with a key.
    Success { responder_acked: bool },
    /// The responder could not recover on any candidate anchor.
    NoRecovery,
    /// The confirmation tag did not verify: recovered key material differed.
    BadTag,
    /// Tag verified but the peer's change point was out of sync range.
    OutOfSync,
    /// No usable reply arrived (message loss).
    NoReply,
    /// A malformed frame ended the session.
    Malformed,
}

/// Per-attempt record kept by the evaluation harness.
#[derive(Debug, Clone)]
pub struct AttemptRecord {
    pub attempt_id: u32,
    pub outcome: AttemptOutcome,
    /// Initiator's change-point time for this attempt.
    pub cp_time_a_ms: f64,
    /// Best bit agreement between the initiator's key material and any of
    /// the responder's candidate anchors, in percent.
    pub best_bar_pct: f64,
    pub key: Option<FinalKey>,
}

/// A prepared two-device session that can be run once (first key wins) or
/// continuously over every change point.
pub struct SessionDriver {
    dev_a: DeviceState,
    dev_b: DeviceState,
    cfg_a: SessionConfig,
    cfg_b: SessionConfig,
}

impl SessionDriver {
    pub fn new(
        sig_a: &Signal,
        sig_b: &Signal,
        cfg_a: SessionConfig,
        cfg_b: SessionConfig,
    ) -> Result<Self> {
        cfg_a.validate()?;
        cfg_b.validate()?;
        if cfg_a.role != Role::Initiator || cfg_b.role != Role::Responder {
            return Err(Error::parameter(
                "session needs one initiator (A) and one responder (B)",
            ));
        }
        if cfg_a.bch != cfg_b.bch
            || cfg_a.key_len != cfg_b.key_len
            || cfg_a.seg_policy != cfg_b.seg_policy
            || cfg_a.bits_per_sample != cfg_b.bits_per_sample
            || cfg_a.coding != cfg_b.coding
            || cfg_a.session_id != cfg_b.session_id
        {
            return Err(Error::parameter(
                "devices disagree on code, key length, segments, or quantization",
            ));
        }
        let dev_a = DeviceState::prepare(sig_a, &cfg_a)?;
        let dev_b = DeviceState::prepare(sig_b, &cfg_b)?;
        Ok(SessionDriver {
            dev_a,
            dev_b,
            cfg_a,
            cfg_b,
        })
    }

    /// One pairing run: attempts until the first Success, the attempt
    /// budget, or change-point exhaustion.
    pub fn run(&self, channel: &mut Channel) -> (PairingOutcome, PairingOutcome) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg_a.seed);
        let mut attempts_used = 0usize;
        let mut cursor = 0usize;
        while attempts_used < self.cfg_a.timeout_attempts && cursor < self.dev_a.usable.len() {
            let attempt_id = (attempts_used + 1) as u32;
            let record = self.attempt(attempt_id, cursor, cursor, &mut rng, channel);
            attempts_used += 1;
            match record.outcome {
                AttemptOutcome::Success { responder_acked } => {
                    let key = record.key.clone();
                    let outcome_a = PairingOutcome {
                        status: PairingStatus::Success,
                        key: key.clone(),
                        attempts_used,
                        agreed_cp_time_ms: Some(record.cp_time_a_ms),
                    };
                    // Without the ACK the responder never learns the
                    // attempt went through; it runs out its own clock.
                    let outcome_b = if responder_acked {
                        PairingOutcome {
                            status: PairingStatus::Success,
                            key,
                            attempts_used,
                            agreed_cp_time_ms: Some(record.cp_time_a_ms),
                        }
                    } else {
                        PairingOutcome::timeout(attempts_used)
                    };
                    return (outcome_a, outcome_b);
                }
                AttemptOutcome::Malformed => {
                    return (
                        PairingOutcome::aborted(attempts_used),
                        PairingOutcome::aborted(attempts_used),
                    );
                }
                _ => cursor += 1,
            }
        }
        (
            PairingOutcome::timeout(attempts_used),
            PairingOutcome::timeout(attempts_used),
        )
    }

    /// Run over every initiator change point without stopping at the first
    /// key; the harness uses this for rate and error statistics.
    pub fn run_all(&self, channel: &mut Channel) -> Vec<AttemptRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg_a.seed);
        let mut records = Vec::new();
        for cursor in 0..self.dev_a.usable.len() {
            let attempt_id = (records.len() + 1) as u32;
            let record = self.attempt(attempt_id, cursor, cursor, &mut rng, channel);
            let malformed = matches!(record.outcome, AttemptOutcome::Malformed);
            records.push(record);
            if malformed {
                break;
            }
        }
        records
    }

    pub fn initiator_usable_cps(&self) -> usize {
        self.dev_a.usable.len()
    }

    pub fn responder_usable_cps(&self) -> usize {
        self.dev_b.usable.len()
    }

    fn attempt(
        &self,
        attempt_id: u32,
        cursor_a: usize,
        cursor_b: usize,
        rng: &mut ChaCha8Rng,
        channel: &mut Channel,
    ) -> AttemptRecord {
        let a_cp = &self.dev_a.usable[cursor_a];
        let n = self.cfg_a.bch.0;

        // Candidate anchors the responder will try, and the best agreement
        // any of them could reach (harness metric only).
        let candidates = if self.dev_b.usable.is_empty() || cursor_b >= self.dev_b.usable.len() {
            Vec::new()
        } else {
            candidate_anchors(
                self.dev_b.usable.len(),
                cursor_b,
                self.cfg_b.sync_cfg.n_offset,
            )
            .expect("cursor checked in range")
        };
        let best_bar_pct = candidates
            .iter()
            .map(|&j| {
                let distance = a_cp
                    .material
                    .hamming(&self.dev_b.usable[j].material)
                    .expect("equal lengths");
                100.0 * (1.0 - distance as f64 / n as f64)
            })
            .fold(0.0f64, f64::max);
        let record = |outcome: AttemptOutcome, key: Option<FinalKey>| AttemptRecord {
            attempt_id,
            outcome,
            cp_time_a_ms: a_cp.time_ms,
            best_bar_pct,
            key,
        };

        // DevA commits.
        let (mut commitment, _r) = commit(&self.dev_a.code, &a_cp.material, rng)
            .expect("key material length matches the code");
        commitment.attempt_id = attempt_id;
        let commit_msg = Message {
            kind: MessageKind::Commit,
            session_id: self.cfg_a.session_id,
            attempt_id,
            payload: commitment.block.pack_msb_first(),
        };
        let delivered = match channel.transmit(&commit_msg) {
            Ok(d) => d,
            Err(_) => return record(AttemptOutcome::Malformed, None),
        };

        // DevB answers the first copy of the commit it sees.
        let mut reply: Option<Message> = None;
        let mut pending_b: Option<FinalKey> = None;
        for frame in delivered {
            if frame.kind != MessageKind::Commit || frame.attempt_id != attempt_id {
                continue;
            }
            if reply.is_some() {
                break; // duplicate: the first response stands
            }
            let block = BitString::from_packed(&frame.payload, n).expect("length checked on wire");
            let received = Commitment {
                block,
                n,
                k: self.cfg_b.bch.1,
                attempt_id,
            };
            let mut confirmed = None;
            for &j in &candidates {
                let recovered = recover(&self.dev_b.code, &received, &self.dev_b.usable[j].material)
                    .expect("lengths checked");
                if let Some((q_a_prime, _r_prime)) = recovered {
                    let key_b = finalize_key(&q_a_prime, self.cfg_b.key_len);
                    confirmed = Some((key_b, j as u32));
                    break;
                }
            }
            reply = Some(match confirmed {
                Some((key_b, j)) => {
                    let payload = make_confirm(&key_b, j, attempt_id);
                    pending_b = Some(key_b);
                    Message {
                        kind: MessageKind::Confirm,
                        session_id: self.cfg_b.session_id,
                        attempt_id,
                        payload,
                    }
                }
                None => Message {
                    kind: MessageKind::Fail,
                    session_id: self.cfg_b.session_id,
                    attempt_id,
                    payload: vec![],
                },
            });
        }

        let reply = match reply {
            Some(r) => r,
            None => return record(AttemptOutcome::NoReply, None),
        };
        let delivered = match channel.transmit(&reply) {
            Ok(d) => d,
            Err(_) => return record(AttemptOutcome::Malformed, None),
        };

        // DevA handles the first matching reply.
        let reply = delivered
            .into_iter()
            .find(|m| m.attempt_id == attempt_id);
        let reply = match reply {
            Some(r) => r,
            None => return record(AttemptOutcome::NoReply, None),
        };
        match reply.kind {
            MessageKind::Fail => record(AttemptOutcome::NoRecovery, None),
            MessageKind::Confirm => {
                let key_a = finalize_key(&a_cp.material, self.cfg_a.key_len);
                let verdict = verify_confirm(
                    &key_a,
                    &reply.payload,
                    attempt_id,
                    a_cp.time_ms,
                    |j| self.dev_b.cp_time_ms(j as usize),
                    self.cfg_a.sync_cfg.sync_offset_ms,
                );
                match verdict {
                    Ok(VerifyOutcome::Accept { .. }) => {
                        let ack = Message {
                            kind: MessageKind::Ack,
                            session_id: self.cfg_a.session_id,
                            attempt_id,
                            payload: vec![],
                        };
                        match channel.transmit(&ack) {
                            Ok(frames) => {
                                let responder_acked = frames
                                    .iter()
                                    .any(|m| m.kind == MessageKind::Ack && m.attempt_id == attempt_id);
                                if responder_acked {
                                    debug_assert_eq!(
                                        pending_b.as_ref().map(|k| k.key_bits.clone()),
                                        Some(key_a.key_bits.clone()),
                                        "verified tag implies equal keys"
                                    );
                                }
                                record(AttemptOutcome::Success { responder_acked }, Some(key_a))
                            }
                            Err(_) => record(AttemptOutcome::Malformed, None),
                        }
                    }
                    Ok(VerifyOutcome::RejectBadTag) => {
                        let fail = Message {
                            kind: MessageKind::Fail,
                            session_id: self.cfg_a.session_id,
                            attempt_id,
                            payload: vec![],
                        };
                        if channel.transmit(&fail).is_err() {
                            return record(AttemptOutcome::Malformed, None);
                        }
                        record(AttemptOutcome::BadTag, None)
                    }
                    Ok(VerifyOutcome::RejectOutOfSync) => {
                        let fail = Message {
                            kind: MessageKind::Fail,
                            session_id: self.cfg_a.session_id,
                            attempt_id,
                            payload: vec![],
                        };
                        if channel.transmit(&fail).is_err() {
                            return record(AttemptOutcome::Malformed, None);
                        }
                        record(AttemptOutcome::OutOfSync, None)
                    }
                    Err(_) => record(AttemptOutcome::Malformed, None),
                }
            }
            _ => record(AttemptOutcome::Malformed, None),
        }
    }
}

/// Run one pairing session over preprocessed signals and return both
/// outcomes plus the message transcript.
pub fn run_session(
    sig_a: &Signal,
    sig_b: &Signal,
    cfg_a: SessionConfig,
    cfg_b: SessionConfig,
    mut channel: Channel,
) -> Result<(PairingOutcome, PairingOutcome, Vec<Message>)> {
    let driver = SessionDriver::new(sig_a, sig_b, cfg_a, cfg_b)?;
    let (outcome_a, outcome_b) = driver.run(&mut channel);
    Ok((outcome_a, outcome_b, channel.into_transcript()))
}
