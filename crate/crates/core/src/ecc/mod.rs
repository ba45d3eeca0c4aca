//! Binary BCH codec and the XOR commitment built on it.
//!
//! The codec is a primitive binary BCH code over GF(2^m): the generator is
//! the product of minimal polynomials of consecutive powers of alpha
//! starting at alpha^1, extended with small auxiliary cosets when the
//! requested parity budget N-K falls between two narrow-sense steps. The
//! designed correction capability `t` is counted from the longest run of
//! consecutive roots (Bose bound), so it is a guarantee, never an estimate.
//!
//! The commitment hides a random codeword under XOR with the local key
//! material; the peer recovers it as long as the two bit strings disagree
//! in at most `t` positions. Key finalization appends an even-parity bit
//! and hashes with SHA2-256.

mod gf;

pub use gf::Gf2m;

use crate::bits::BitString;
use crate::error::{Error, Result};
use sha2::{Digest, Sha256};

/// Target length of a finalized key in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KeyLen {
    #[serde(rename = "128")]
    L128,
    #[serde(rename = "256")]
    L256,
}

impl KeyLen {
    pub fn bits(self) -> usize {
        match self {
            KeyLen::L128 => 128,
            KeyLen::L256 => 256,
        }
    }
}

/// A binary BCH code with fixed (N, K) and designed correction capability t.
#[derive(Debug, Clone)]
pub struct BchCode {
    gf: Gf2m,
    n: usize,
    k: usize,
    t: usize,
    /// Generator polynomial, ascending GF(2) coefficients, degree n - k.
    generator: Vec<u8>,
}

/// Public block of one commitment: `B = encode(R) XOR Q_A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment {
    pub block: BitString,
    pub n: usize,
    pub k: usize,
    pub attempt_id: u32,
}

/// Finalized key material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalKey {
    /// SHA2-256 digest truncated to the configured length.
    pub key_bits: BitString,
    /// The hashed input: key material plus its even-parity bit.
    pub pre_hash: BitString,
}

impl FinalKey {
    pub fn key_bytes(&self) -> Vec<u8> {
        self.key_bits.pack_msb_first()
    }
}

/// Construct the code for a valid (N, K) pair. See [`BchCode::new`].
pub fn make_code(n: usize, k: usize) -> Result<BchCode> {
    BchCode::new(n, k)
}

struct Construction {
    /// Minimum representative of every included cyclotomic coset.
    coset_reps: Vec<usize>,
    t: usize,
}

impl BchCode {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let m = match n {
            7 => 3,
            15 => 4,
            31 => 5,
            63 => 6,
            127 => 7,
            255 => 8,
            _ => {
                return Err(Error::parameter(format!(
                    "codeword length {} is not 2^m - 1 for a supported m",
                    n
                )))
            }
        };
        let gf = Gf2m::new(m)?;
        if k == 0 || k >= n {
            return Err(Error::parameter(format!(
                "message length {} outside (0, {})",
                k, n
            )));
        }
        let target_deg = n - k;
        let plan = Self::plan_cosets(&gf, target_deg).ok_or_else(|| {
            let nearest = Self::nearest_valid_k(&gf, n, k);
            Error::parameter(format!(
                "({}, {}) is not a constructible BCH pair; nearest valid K: {}",
                n, k, nearest
            ))
        })?;

        let mut generator: Vec<u8> = vec![1];
        for &rep in &plan.coset_reps {
            generator = poly_mul_gf2(&generator, &gf.minimal_poly(rep));
        }
        debug_assert_eq!(generator.len() - 1, target_deg);
        debug_assert!(target_deg <= m as usize * plan.t);
        debug_assert!(plan.t < 1 << (m - 1));

        Ok(BchCode {
            gf,
            n,
            k,
            t: plan.t,
            generator,
        })
    }

    /// Choose cyclotomic cosets whose minimal-polynomial degrees sum to
    /// exactly `target_deg`: consecutive roots from alpha^1 first, then the
    /// remaining gap is filled from unused cosets, largest degree first.
    fn plan_cosets(gf: &Gf2m, target_deg: usize) -> Option<Construction> {
        let mut included = std::collections::BTreeSet::new();
        let mut is_root = vec![false; gf.n];
        let mut degree = 0usize;
        let mut r = 1usize;
        while r < gf.n {
            let coset = gf.cyclotomic_coset(r);
            if !included.contains(&coset[0]) {
                if degree + coset.len() > target_deg {
                    break;
                }
                degree += coset.len();
                for &e in &coset {
                    is_root[e] = true;
                }
                included.insert(coset[0]);
            }
            r += 1;
        }

        if degree < target_deg {
            let mut gap = target_deg - degree;
            // Every coset not yet included, largest first, representative
            // ascending as the tie-break; coset {0} contributes (x + 1).
            let mut candidates: Vec<Vec<usize>> = (0..gf.n)
                .map(|e| gf.cyclotomic_coset(e))
                .filter(|c| !included.contains(&c[0]))
                .collect();
            candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
            candidates.dedup_by(|a, b| a[0] == b[0]);
            for coset in candidates {
                if coset.len() <= gap {
                    gap -= coset.len();
                    for &e in &coset {
                        is_root[e] = true;
                    }
                    included.insert(coset[0]);
                    if gap == 0 {
                        break;
                    }
                }
            }
            if gap != 0 {
                return None;
            }
        }

        // Bose bound: a run of L consecutive roots gives distance >= L + 1.
        let start = if is_root[0] { 0 } else { 1 };
        let mut last = start;
        while last + 1 < gf.n && is_root[last + 1] {
            last += 1;
        }
        if !is_root[start] {
            return None;
        }
        let t = (last - start + 1) / 2;
        if t == 0 {
            return None;
        }
        Some(Construction {
            coset_reps: included.into_iter().collect(),
            t,
        })
    }

    fn nearest_valid_k(gf: &Gf2m, n: usize, k: usize) -> usize {
        for delta in 1..n {
            for cand in [k.checked_sub(delta), Some(k + delta)].into_iter().flatten() {
                if cand > 0 && cand < n && Self::plan_cosets(gf, n - cand).is_some() {
                    return cand;
                }
            }
        }
        0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Designed error-correction capability.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Generator polynomial coefficients, ascending degree.
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }

    /// Systematic encoding: the K message bits (MSB-first, highest codeword
    /// degrees) followed by N-K parity bits.
    pub fn encode(&self, message: &BitString) -> Result<BitString> {
        if message.len() != self.k {
            return Err(Error::parameter(format!(
                "message length {} != K = {}",
                message.len(),
                self.k
            )));
        }
        let parity_len = self.n - self.k;
        // LFSR long division: after k feedback steps `rem` holds
        // x^(n-k) * m(x) mod g(x). Bit i carries degree n-1-i.
        let mut rem = vec![0u8; parity_len];
        for i in 0..self.k {
            let feedback = message.bit(i) ^ rem[parity_len - 1];
            for d in (1..parity_len).rev() {
                rem[d] = rem[d - 1] ^ (feedback & self.generator[d]);
            }
            rem[0] = feedback & self.generator[0];
        }
        let mut codeword = BitString::zeros(self.n);
        for i in 0..self.k {
            codeword.set(i, message.bit(i));
        }
        for j in 0..parity_len {
            codeword.set(self.k + j, rem[parity_len - 1 - j]);
        }
        Ok(codeword)
    }

    /// Decode a received word, correcting up to `t` bit errors.
    ///
    /// Returns `None` when decoding fails; more than `t` errors may also
    /// silently miscorrect to a different message, which callers guard
    /// against with their own confirmation step.
    pub fn decode(&self, received: &BitString) -> Result<Option<BitString>> {
        if received.len() != self.n {
            return Err(Error::parameter(format!(
                "received length {} != N = {}",
                received.len(),
                self.n
            )));
        }
        let two_t = 2 * self.t;
        let syndromes = self.syndromes(received, two_t);
        if syndromes.iter().all(|&s| s == 0) {
            return Ok(Some(received.slice(0..self.k)));
        }

        let lambda = self.berlekamp_massey(&syndromes);
        let errors = lambda.len() - 1;
        if errors == 0 || errors > self.t {
            return Ok(None);
        }

        let positions = self.chien_search(&lambda);
        if positions.len() != errors {
            return Ok(None);
        }

        let mut corrected = received.clone();
        for &degree in &positions {
            corrected.flip(self.n - 1 - degree);
        }
        // A word at distance <= t decodes consistently; anything else that
        // reaches this point is rejected unless it landed on a codeword.
        if self.syndromes(&corrected, two_t).iter().any(|&s| s != 0) {
            return Ok(None);
        }
        Ok(Some(corrected.slice(0..self.k)))
    }

    /// S_j = r(alpha^j) for j = 1..=count; bit i carries degree n-1-i.
    fn syndromes(&self, word: &BitString, count: usize) -> Vec<u16> {
        let mut out = vec![0u16; count];
        for i in 0..self.n {
            if word.bit(i) == 1 {
                let degree = self.n - 1 - i;
                for (j, s) in out.iter_mut().enumerate() {
                    *s ^= self.gf.alpha_pow((j + 1) * degree);
                }
            }
        }
        out
    }

    /// Error-locator polynomial from the syndromes (ascending coefficients,
    /// lambda[0] = 1).
    fn berlekamp_massey(&self, syndromes: &[u16]) -> Vec<u16> {
        let mut lambda: Vec<u16> = vec![1];
        let mut prev: Vec<u16> = vec![1];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut prev_disc: u16 = 1;

        for n in 0..syndromes.len() {
            let mut disc = syndromes[n];
            for i in 1..=l.min(lambda.len() - 1) {
                if lambda[i] != 0 && n >= i {
                    disc ^= self.gf.mul(lambda[i], syndromes[n - i]);
                }
            }
            if disc == 0 {
                shift += 1;
                continue;
            }
            let scale = self.gf.div(disc, prev_disc);
            let mut candidate = lambda.clone();
            if candidate.len() < prev.len() + shift {
                candidate.resize(prev.len() + shift, 0);
            }
            for (i, &c) in prev.iter().enumerate() {
                candidate[i + shift] ^= self.gf.mul(scale, c);
            }
            if 2 * l <= n {
                prev = lambda;
                prev_disc = disc;
                l = n + 1 - l;
                shift = 1;
            } else {
                shift += 1;
            }
            lambda = candidate;
        }
        // Trim trailing zeros so len-1 is the true degree.
        while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
            lambda.pop();
        }
        lambda
    }

    /// Degrees p where lambda(alpha^-p) = 0, i.e. error locations.
    fn chien_search(&self, lambda: &[u16]) -> Vec<usize> {
        let mut positions = Vec::new();
        for p in 0..self.n {
            let mut acc = 0u16;
            for (i, &c) in lambda.iter().enumerate() {
                if c != 0 {
                    let e = (self.gf.log_of(c) + i * (self.gf.n - p)) % self.gf.n;
                    acc ^= self.gf.alpha_pow(e);
                }
            }
            if acc == 0 {
                positions.push(p);
            }
        }
        positions
    }
}

/// Commit to the local key material: draw a random message R, encode it,
/// and publish `B = encode(R) XOR q_a`.
pub fn commit(
    code: &BchCode,
    q_a: &BitString,
    rng: &mut impl rand::RngCore,
) -> Result<(Commitment, BitString)> {
    if q_a.len() != code.n() {
        return Err(Error::parameter(format!(
            "commitment input length {} != N = {}",
            q_a.len(),
            code.n()
        )));
    }
    let r = BitString::random(code.k(), rng);
    let block = code.encode(&r)?.xor(q_a)?;
    Ok((
        Commitment {
            block,
            n: code.n(),
            k: code.k(),
            attempt_id: 0,
        },
        r,
    ))
}

/// Peer side of the commitment: recover the committer's key material from
/// the public block and the local (noisy) key material. Succeeds exactly
/// when the two inputs mismatch in at most `t` bits; `None` on failure.
pub fn recover(
    code: &BchCode,
    commitment: &Commitment,
    q_b: &BitString,
) -> Result<Option<(BitString, BitString)>> {
    if commitment.block.len() != code.n() {
        return Err(Error::parameter(format!(
            "commitment block length {} != N = {}",
            commitment.block.len(),
            code.n()
        )));
    }
    if q_b.len() != code.n() {
        return Err(Error::parameter(format!(
            "recover input length {} != N = {}",
            q_b.len(),
            code.n()
        )));
    }
    let candidate = commitment.block.xor(q_b)?;
    let r_prime = match code.decode(&candidate)? {
        Some(r) => r,
        None => return Ok(None),
    };
    let q_a_prime = commitment.block.xor(&code.encode(&r_prime)?)?;
    Ok(Some((q_a_prime, r_prime)))
}

/// Append the even-parity bit and hash with SHA2-256, truncating the digest
/// to `out_len`.
pub fn finalize_key(q_a: &BitString, out_len: KeyLen) -> FinalKey {
    let parity = (q_a.weight() % 2) as u8;
    let mut pre_hash = q_a.clone();
    pre_hash.provenance = None;
    pre_hash.push(parity);
    let digest = Sha256::digest(pre_hash.pack_msb_first());
    let key_bits = BitString::from_packed(&digest, out_len.bits()).expect("digest holds 256 bits");
    FinalKey { key_bits, pre_hash }
}

/// Product of two GF(2) polynomials in ascending-coefficient form.
fn poly_mul_gf2(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 1 {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] ^= bj;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
