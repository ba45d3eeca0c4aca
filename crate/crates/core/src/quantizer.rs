//! Quantization of the preprocessed signal into key material.
//!
//! Three concerns live here: choosing the number of bits per sample that
//! maximizes the expected agreed key bits between two noisy views of the
//! same signal, fitting a Lloyd-Max quantizer to the signal distribution,
//! and cutting the encoded bit stream into the sparse segment window
//! around a change point.

use crate::bits::{BitString, Provenance};
use crate::error::{Error, Result};
use crate::signal::Signal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coding {
    Gray,
    Binary,
}

/// A fitted scalar quantizer.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    /// Decision boundaries a_1..a_{M-1}, strictly ascending.
    pub boundaries: Vec<f64>,
    /// Reconstruction levels L_0..L_{M-1}, strictly ascending.
    pub levels: Vec<f64>,
    pub bits_per_sample: u8,
    pub coding: Coding,
}

impl QuantizerSpec {
    pub fn validate(&self) -> Result<()> {
        let m = 1usize << self.bits_per_sample;
        if self.bits_per_sample == 0 {
            return Err(Error::parameter("bits_per_sample must be >= 1"));
        }
        if self.levels.len() != m || self.boundaries.len() != m - 1 {
            return Err(Error::parameter(format!(
                "expected {} levels and {} boundaries, got {} and {}",
                m,
                m - 1,
                self.levels.len(),
                self.boundaries.len()
            )));
        }
        let ascending = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
        if !ascending(&self.boundaries) || !ascending(&self.levels) {
            return Err(Error::parameter("boundaries and levels must be ascending"));
        }
        for i in 0..m {
            let lo = if i == 0 { f64::NEG_INFINITY } else { self.boundaries[i - 1] };
            let hi = if i == m - 1 { f64::INFINITY } else { self.boundaries[i] };
            if !(lo <= self.levels[i] && self.levels[i] <= hi) {
                return Err(Error::parameter(format!(
                    "level {} = {} outside its interval",
                    i, self.levels[i]
                )));
            }
        }
        Ok(())
    }

    /// Interval index of a sample; a boundary value belongs to the upper
    /// interval, out-of-range samples clamp to the edge intervals.
    pub fn interval_of(&self, x: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= x)
    }
}

/// Sparse segment selection around a change point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentPolicy {
    pub n_seg: usize,
    /// 1-based segment indices, strictly ascending.
    pub selected: Vec<usize>,
}

impl Default for SegmentPolicy {
    fn default() -> Self {
        SegmentPolicy {
            n_seg: 10,
            selected: vec![2, 5, 6, 7, 10],
        }
    }
}

impl SegmentPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.n_seg == 0 || self.selected.is_empty() {
            return Err(Error::parameter("segment policy must select at least one segment"));
        }
        if !self.selected.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::parameter("selected segments must be strictly ascending"));
        }
        if self.selected[0] < 1 || *self.selected.last().unwrap() > self.n_seg {
            return Err(Error::parameter(format!(
                "selected segments must lie in 1..={}",
                self.n_seg
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Optimal bits per sample
// ---------------------------------------------------------------------------

/// Probability that two samples land in the same quantization interval,
/// for a uniform signal on [-d/2, d/2] cut into q = 2^b equal intervals of
/// width w, when the second sample is offset by a Gaussian(mu, sigma)
/// difference.
///
/// Conditioned on the difference delta, a uniform sample stays in its
/// interval with probability (w - |delta|)+ / w, so only
/// E[min(|delta|, w)] needs quadrature.
pub fn interval_agreement_probability(mu: f64, sigma: f64, d: f64, b: u32) -> f64 {
    let q = (1u64 << b) as f64;
    let width = d / q;
    let expected_min = if sigma == 0.0 {
        mu.abs().min(width)
    } else {
        let lo = mu - 12.0 * sigma;
        let hi = mu + 12.0 * sigma;
        let integrand = |delta: f64| {
            let z = (delta - mu) / sigma;
            let phi = (-0.5 * z * z).exp() / (sigma * (std::f64::consts::TAU).sqrt());
            delta.abs().min(width) * phi
        };
        simpson_with_splits(integrand, lo, hi, &[-width, 0.0, width])
    };
    (width - expected_min).max(0.0) / width
}

/// Simpson quadrature split at the integrand's kink locations.
fn simpson_with_splits(f: impl Fn(f64) -> f64, lo: f64, hi: f64, kinks: &[f64]) -> f64 {
    let mut points: Vec<f64> = vec![lo, hi];
    points.extend(kinks.iter().copied().filter(|&k| lo < k && k < hi));
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let n = 2000usize;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        total += acc * h / 3.0;
    }
    total
}

/// Choose the bits per sample that maximize the expected value of agreeing
/// on a whole K-bit key: b * P_agree(b)^(K/b). Ties break to the smaller b.
pub fn solve_optimal_bits(mu: f64, sigma: f64, d: f64, key_len: usize, b_max: u32) -> Result<u32> {
    if !mu.is_finite() || !sigma.is_finite() || !d.is_finite() {
        return Err(Error::parameter("non-finite solver input"));
    }
    if sigma < 0.0 || d <= 0.0 || key_len == 0 {
        return Err(Error::parameter(
            "solver needs sigma >= 0, d > 0, key_len >= 1",
        ));
    }
    if !(1..=16).contains(&b_max) {
        return Err(Error::parameter("b_max must be in 1..=16"));
    }
    let mut best = (1u32, f64::NEG_INFINITY);
    for b in 1..=b_max {
        let p = interval_agreement_probability(mu, sigma, d, b);
        // Compare in the log domain; the objective underflows fast.
        let log_j = (b as f64).ln() + (key_len as f64 / b as f64) * p.ln();
        if log_j > best.1 {
            best = (b, log_j);
        }
    }
    Ok(best.0)
}

// ---------------------------------------------------------------------------
// Lloyd-Max
// ---------------------------------------------------------------------------

/// Density the quantizer is fit to.
pub enum DensityInput<'a> {
    /// Empirical samples; a 256-bin histogram over their range stands in
    /// for the pdf.
    Samples(&'a [f64]),
    /// Analytic pdf on a bounded support (need not be normalized).
    Pdf {
        f: &'a dyn Fn(f64) -> f64,
        lo: f64,
        hi: f64,
    },
}

/// Piecewise-constant density: the common representation both input kinds
/// are reduced to. Closed-form mass/moment integrals keep the fixed point
/// exact in float arithmetic.
struct BinnedDensity {
    edges: Vec<f64>,
    heights: Vec<f64>,
}

impl BinnedDensity {
    fn from_samples(samples: &[f64]) -> Result<Self> {
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(Error::DegenerateInput("samples span no range".into()));
        }
        let bins = 256usize;
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0f64; bins];
        for &x in samples {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            counts[i] += 1.0;
        }
        let norm = samples.len() as f64 * width;
        Ok(BinnedDensity {
            edges: (0..=bins).map(|i| lo + i as f64 * width).collect(),
            heights: counts.into_iter().map(|c| c / norm).collect(),
        })
    }

    fn from_pdf(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::parameter("pdf support must be a proper interval"));
        }
        let bins = 4096usize;
        let width = (hi - lo) / bins as f64;
        let heights = (0..bins)
            .map(|i| {
                let a = lo + i as f64 * width;
                // Simpson over the bin keeps the piecewise-constant
                // surrogate close to the true density.
                (f(a) + 4.0 * f(a + width / 2.0) + f(a + width)) / 6.0
            })
            .collect();
        Ok(BinnedDensity {
            edges: (0..=bins).map(|i| lo + i as f64 * width).collect(),
            heights,
        })
    }

    fn support(&self) -> (f64, f64) {
        (self.edges[0], *self.edges.last().unwrap())
    }

    /// (mass, first moment, second moment about `center`) over [a, b].
    fn integrals(&self, a: f64, b: f64, center: f64) -> (f64, f64, f64) {
        let (mut mass, mut moment, mut mse) = (0.0, 0.0, 0.0);
        for i in 0..self.heights.len() {
            let lo = self.edges[i].max(a);
            let hi = self.edges[i + 1].min(b);
            if hi <= lo {
                continue;
            }
            let h = self.heights[i];
            let w = hi - lo;
            mass += h * w;
            moment += h * (hi * hi - lo * lo) / 2.0;
            // Integral of (x - c)^2 over [lo, hi] times h.
            let u1 = lo - center;
            let u2 = hi - center;
            mse += h * (u2 * u2 * u2 - u1 * u1 * u1) / 3.0;
        }
        (mass, moment, mse)
    }
}

/// Lloyd-Max fit: alternate boundaries at level midpoints and levels at
/// interval centroids until the levels move less than 1e-9 (or 500
/// iterations). Also returns the quantization MSE after each iteration.
pub fn fit_lloyd_max_traced(
    input: DensityInput<'_>,
    b: u32,
    coding: Coding,
) -> Result<(QuantizerSpec, Vec<f64>)> {
    if b == 0 || b > 16 {
        return Err(Error::parameter("bits per sample must be in 1..=16"));
    }
    let m = 1usize << b;
    let density = match input {
        DensityInput::Samples(samples) => {
            let distinct = {
                let mut v = samples.to_vec();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v.dedup();
                v.len()
            };
            if distinct < m {
                return Err(Error::DegenerateInput(format!(
                    "need at least {} distinct sample values, got {}",
                    m, distinct
                )));
            }
            BinnedDensity::from_samples(samples)?
        }
        DensityInput::Pdf { f, lo, hi } => BinnedDensity::from_pdf(f, lo, hi)?,
    };

    let (lo, hi) = density.support();
    let mut levels: Vec<f64> = (0..m)
        .map(|i| lo + (i as f64 + 0.5) * (hi - lo) / m as f64)
        .collect();
    let mut boundaries = vec![0.0f64; m - 1];
    let mut mse_trace = Vec::new();

    for _ in 0..500 {
        for i in 0..m - 1 {
            boundaries[i] = 0.5 * (levels[i] + levels[i + 1]);
        }
        let mut max_move = 0.0f64;
        let mut mse = 0.0f64;
        for i in 0..m {
            let a = if i == 0 { lo } else { boundaries[i - 1] };
            let b_edge = if i == m - 1 { hi } else { boundaries[i] };
            let (mass, moment, _) = density.integrals(a, b_edge, 0.0);
            let new_level = if mass > 0.0 { moment / mass } else { levels[i] };
            max_move = max_move.max((new_level - levels[i]).abs());
            levels[i] = new_level;
            let (_, _, err) = density.integrals(a, b_edge, levels[i]);
            mse += err;
        }
        mse_trace.push(mse);
        if max_move < 1e-9 {
            break;
        }
    }

    let spec = QuantizerSpec {
        boundaries,
        levels,
        bits_per_sample: b as u8,
        coding,
    };
    spec.validate()?;
    Ok((spec, mse_trace))
}

pub fn fit_lloyd_max(input: DensityInput<'_>, b: u32, coding: Coding) -> Result<QuantizerSpec> {
    fit_lloyd_max_traced(input, b, coding).map(|(spec, _)| spec)
}

/// Quantization MSE of a spec against a density (test and diagnostics aid).
pub fn quantizer_mse(spec: &QuantizerSpec, samples: &[f64]) -> f64 {
    let total: f64 = samples
        .iter()
        .map(|&x| {
            let level = spec.levels[spec.interval_of(x)];
            (x - level) * (x - level)
        })
        .sum();
    total / samples.len() as f64
}

// ---------------------------------------------------------------------------
// Encoding and selection
// ---------------------------------------------------------------------------

/// Map each sample to its interval index and emit the b-bit code, MSB
/// first. Gray coding XORs the index with its own right shift.
pub fn quantize_encode(s: &Signal, spec: &QuantizerSpec) -> Result<BitString> {
    spec.validate()?;
    if s.is_empty() {
        return Err(Error::DegenerateInput("empty signal".into()));
    }
    let b = spec.bits_per_sample as usize;
    let mut out = BitString::zeros(0);
    for &x in &s.samples {
        let index = spec.interval_of(x);
        let code = match spec.coding {
            Coding::Gray => index ^ (index >> 1),
            Coding::Binary => index,
        };
        for bit in (0..b).rev() {
            out.push(((code >> bit) & 1) as u8);
        }
    }
    Ok(out)
}

/// Cut the N-bit key material out of the quantized stream: a window of
/// W = N * n_seg / |selected| bits centered on the change point's bit
/// position is split into n_seg equal segments, and the selected segments
/// are concatenated.
pub fn select_key_bits(
    bits: &BitString,
    cp_sample_idx: usize,
    n_bits: usize,
    bits_per_sample: u8,
    policy: &SegmentPolicy,
) -> Result<BitString> {
    policy.validate()?;
    if n_bits == 0 {
        return Err(Error::parameter("key material length must be positive"));
    }
    let n_sel = policy.selected.len();
    if (n_bits * policy.n_seg) % n_sel != 0 || (n_bits % n_sel) != 0 {
        return Err(Error::parameter(format!(
            "{} selected segments cannot evenly produce {} bits from {} segments",
            n_sel, n_bits, policy.n_seg
        )));
    }
    let window = n_bits * policy.n_seg / n_sel;
    let seg_len = window / policy.n_seg;
    let center = cp_sample_idx * bits_per_sample as usize;
    let half = window / 2;
    if center < half || center + (window - half) > bits.len() {
        return Err(Error::WindowUnderflow(format!(
            "window of {} bits around bit {} exceeds stream of {} bits",
            window,
            center,
            bits.len()
        )));
    }
    let start = center - half;
    let mut out = BitString::zeros(0);
    for &seg in &policy.selected {
        let seg_start = start + (seg - 1) * seg_len;
        out = out.concat(&bits.slice(seg_start..seg_start + seg_len));
    }
    debug_assert_eq!(out.len(), n_bits);
    out.provenance = Some(Provenance {
        cp_sample_idx,
        segments: policy.selected.clone(),
    });
    Ok(out)
}
