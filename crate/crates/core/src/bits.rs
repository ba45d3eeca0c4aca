//! Bit strings with MSB-first byte packing.
//!
//! Quantizer output, codewords, commitments, and keys are all sequences of
//! bits whose length is rarely a multiple of eight. `BitString` keeps one
//! byte per bit internally and packs MSB-first only at the byte boundaries
//! that matter: the wire, hashing, and file output.

use crate::error::{Error, Result};

/// Where a bit string came from, when it was cut out of a quantized signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Change point (sample index) the selection window was centered on.
    pub cp_sample_idx: usize,
    /// 1-based segment indices that were concatenated.
    pub segments: Vec<usize>,
}

/// An ordered sequence of bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<u8>,
    pub provenance: Option<Provenance>,
}

impl BitString {
    /// Build from a slice of 0/1 values.
    pub fn from_bits(bits: &[u8]) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitString {
            bits: bits.to_vec(),
            provenance: None,
        }
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            bits: vec![0; len],
            provenance: None,
        }
    }

    /// Unpack `len` bits from MSB-first packed bytes.
    pub fn from_packed(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() * 8 < len {
            return Err(Error::parameter(format!(
                "{} bytes cannot hold {} bits",
                bytes.len(),
                len
            )));
        }
        let bits = (0..len)
            .map(|i| (bytes[i / 8] >> (7 - (i % 8))) & 1)
            .collect();
        Ok(BitString {
            bits,
            provenance: None,
        })
    }

    /// Draw `len` uniform bits from the given RNG.
    pub fn random(len: usize, rng: &mut impl rand::RngCore) -> Self {
        let mut bytes = vec![0u8; (len + 7) / 8];
        rng.fill_bytes(&mut bytes);
        Self::from_packed(&bytes, len).expect("buffer sized for len")
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: u8) {
        debug_assert!(v <= 1);
        self.bits[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn push(&mut self, v: u8) {
        debug_assert!(v <= 1);
        self.bits.push(v);
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Bitwise XOR; lengths must match.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::parameter(format!(
                "xor length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(BitString {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
            provenance: None,
        })
    }

    /// Hamming distance; lengths must match.
    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::parameter(format!(
                "hamming length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> BitString {
        BitString {
            bits: self.bits[range].to_vec(),
            provenance: None,
        }
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitString {
            bits,
            provenance: None,
        }
    }

    /// Pack MSB-first into bytes; the final byte is zero-padded on the right.
    pub fn pack_msb_first(&self) -> Vec<u8> {
        let mut out = vec![0u8; (self.bits.len() + 7) / 8];
        for (i, &b) in self.bits.iter().enumerate() {
            out[i / 8] |= b << (7 - (i % 8));
        }
        out
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_round_trip() {
        let bits = BitString::from_bits(&[1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1]);
        let packed = bits.pack_msb_first();
        assert_eq!(packed, vec![0b1011_0010, 0b1110_0000]);
        let back = BitString::from_packed(&packed, 11).unwrap();
        assert_eq!(back, bits);
    }

    #[test]
    fn xor_is_self_inverse() {
        let mut rng = rand::rngs::mock::StepRng::new(0x1234_5678, 0x9e37_79b9);
        let a = BitString::random(100, &mut rng);
        let b = BitString::random(100, &mut rng);
        let c = a.xor(&b).unwrap();
        assert_eq!(c.xor(&b).unwrap(), a);
    }

    #[test]
    fn hamming_counts_flips() {
        let a = BitString::from_bits(&[0, 0, 0, 0]);
        let mut b = a.clone();
        b.flip(1);
        b.flip(3);
        assert_eq!(a.hamming(&b).unwrap(), 2);
        assert!(a.hamming(&BitString::zeros(5)).is_err());
    }
}
