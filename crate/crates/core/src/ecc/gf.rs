//! GF(2^m) arithmetic via log/antilog tables.
//!
//! Field elements are `u16` in their polynomial-basis representation. The
//! primitive polynomials are fixed per `m` so codeword bytes are stable
//! across builds and implementations.

use crate::error::{Error, Result};

/// Primitive polynomial (including the x^m term) for each supported field.
fn primitive_poly(m: u32) -> Option<u32> {
    match m {
        3 => Some(0b1011),          // x^3 + x + 1
        4 => Some(0b1_0011),        // x^4 + x + 1
        5 => Some(0b10_0101),       // x^5 + x^2 + 1
        6 => Some(0b100_0011),      // x^6 + x + 1
        7 => Some(0b1000_1001),     // x^7 + x^3 + 1
        8 => Some(0b1_0001_1101),   // x^8 + x^4 + x^3 + x^2 + 1
        _ => None,
    }
}

/// A binary extension field GF(2^m), 3 <= m <= 8.
#[derive(Debug, Clone)]
pub struct Gf2m {
    pub m: u32,
    /// Multiplicative group order, 2^m - 1.
    pub n: usize,
    exp: Vec<u16>,
    log: Vec<u16>,
}

impl Gf2m {
    pub fn new(m: u32) -> Result<Self> {
        let poly = primitive_poly(m)
            .ok_or_else(|| Error::parameter(format!("unsupported field order m={}", m)))?;
        let n = (1usize << m) - 1;
        let mut exp = vec![0u16; 2 * n];
        let mut log = vec![0u16; n + 1];
        let mut x: u32 = 1;
        for i in 0..n {
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        // Duplicate the table so mul can skip the modular reduction.
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Ok(Gf2m { m, n, exp, log })
    }

    /// alpha^e for any non-negative exponent.
    pub fn alpha_pow(&self, e: usize) -> u16 {
        self.exp[e % self.n]
    }

    /// Discrete log of a non-zero element.
    pub fn log_of(&self, a: u16) -> usize {
        debug_assert!(a != 0, "log of zero");
        self.log[a as usize] as usize
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0, "inverse of zero");
        self.exp[self.n - self.log[a as usize] as usize]
    }

    pub fn div(&self, a: u16, b: u16) -> u16 {
        if a == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.n - self.log[b as usize] as usize]
    }

    /// The cyclotomic coset of `e` modulo 2^m - 1, sorted ascending.
    pub fn cyclotomic_coset(&self, e: usize) -> Vec<usize> {
        let mut coset = vec![e % self.n];
        let mut x = (2 * e) % self.n;
        while x != e % self.n {
            coset.push(x);
            x = (2 * x) % self.n;
        }
        coset.sort_unstable();
        coset
    }

    /// Minimal polynomial of alpha^e over GF(2), as ascending GF(2)
    /// coefficients (index = degree).
    pub fn minimal_poly(&self, e: usize) -> Vec<u8> {
        // Product of (x - alpha^j) over the coset, computed in GF(2^m);
        // the result must collapse to GF(2) coefficients.
        let coset = self.cyclotomic_coset(e);
        let mut poly: Vec<u16> = vec![1];
        for &j in &coset {
            let root = self.alpha_pow(j);
            let mut next = vec![0u16; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.iter()
            .map(|&c| {
                debug_assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
                c as u8
            })
            .collect()
    }
}
