//! Preprocessing that removes sensing-mechanism differences: rate
//! alignment, amplitude normalization, respiration-band filtering, and
//! Savitzky-Golay smoothing.
//!
//! Filtering is zero-phase (forward-backward IIR) so feature indices are
//! not skewed by group delay between the two devices. The band-pass filter
//! is a 4th-order Butterworth realized by transforming a 2nd-order low-pass
//! prototype; the low-pass variant is a plain 4th-order Butterworth.

use crate::error::{Error, Result};
use crate::signal::Signal;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DownsampleMethod {
    Skip,
    Average,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKind {
    LowPass,
    BandPass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub target_rate_hz: f64,
    pub downsample_method: DownsampleMethod,
    pub filter: FilterKind,
    pub band_lo_hz: f64,
    pub band_hi_hz: f64,
    pub sg_window: usize,
    pub sg_order: usize,
    pub sg_enabled: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            target_rate_hz: 64.0,
            downsample_method: DownsampleMethod::Skip,
            filter: FilterKind::BandPass,
            band_lo_hz: 0.1,
            band_hi_hz: 0.5,
            sg_window: 21,
            sg_order: 3,
            sg_enabled: true,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_rate_hz > 0.0) {
            return Err(Error::parameter("target_rate_hz must be positive"));
        }
        if !(0.0 < self.band_lo_hz && self.band_lo_hz < self.band_hi_hz) {
            return Err(Error::parameter(format!(
                "band edges must satisfy 0 < lo < hi, got ({}, {})",
                self.band_lo_hz, self.band_hi_hz
            )));
        }
        if self.sg_order >= self.sg_window || self.sg_window % 2 == 0 {
            return Err(Error::parameter(format!(
                "Savitzky-Golay window must be odd and larger than the order, got window {} order {}",
                self.sg_window, self.sg_order
            )));
        }
        Ok(())
    }
}

/// Reduce the sample rate. `skip` keeps the input sample closest to each
/// output instant; `average` averages the input samples nearest to each
/// output instant (ties resolve toward the earlier output).
pub fn downsample(s: &Signal, target_rate_hz: f64, method: DownsampleMethod) -> Result<Signal> {
    if s.is_empty() {
        return Err(Error::DegenerateInput("empty signal".into()));
    }
    if !(target_rate_hz > 0.0) {
        return Err(Error::parameter("target rate must be positive"));
    }
    if target_rate_hz > s.rate_hz {
        return Err(Error::parameter(format!(
            "cannot upsample: target {} Hz > source {} Hz",
            target_rate_hz, s.rate_hz
        )));
    }
    let ratio_in = s.rate_hz / target_rate_hz;
    let n = s.len();
    let mut out_len = 0usize;
    while ((out_len as f64) * ratio_in).round() < n as f64 {
        out_len += 1;
    }

    let samples = match method {
        DownsampleMethod::Skip => (0..out_len)
            .map(|k| s.samples[((k as f64) * ratio_in).round() as usize])
            .collect(),
        DownsampleMethod::Average => {
            let ratio_out = target_rate_hz / s.rate_hz;
            let mut sums = vec![0.0f64; out_len];
            let mut counts = vec![0usize; out_len];
            for (j, &x) in s.samples.iter().enumerate() {
                // Nearest output index; exact halves round down.
                let k = ((j as f64) * ratio_out - 0.5).ceil().max(0.0) as usize;
                let k = k.min(out_len - 1);
                sums[k] += x;
                counts[k] += 1;
            }
            sums.iter()
                .zip(&counts)
                .map(|(&sum, &c)| if c > 0 { sum / c as f64 } else { 0.0 })
                .collect()
        }
    };
    Signal::new(samples, target_rate_hz, s.origin)
}

/// Affine map of the samples onto [-1, 1] with both endpoints attained.
pub fn normalize(s: &Signal) -> Result<Signal> {
    if s.is_empty() {
        return Err(Error::DegenerateInput("empty signal".into()));
    }
    let min = s.samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = s.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::DegenerateInput(format!(
            "constant signal (all samples = {})",
            min
        )));
    }
    let scale = 2.0 / (max - min);
    let samples = s.samples.iter().map(|&x| (x - min) * scale - 1.0).collect();
    Signal::new(samples, s.rate_hz, s.origin)
}

/// Zero-phase respiration-band filtering per the config.
pub fn filter_respiration(s: &Signal, cfg: &PreprocessConfig) -> Result<Signal> {
    cfg.validate()?;
    if s.is_empty() {
        return Err(Error::DegenerateInput("empty signal".into()));
    }
    let nyquist = s.rate_hz / 2.0;
    if cfg.band_hi_hz >= nyquist {
        return Err(Error::parameter(format!(
            "cutoff {} Hz is at or above the Nyquist frequency {} Hz",
            cfg.band_hi_hz, nyquist
        )));
    }
    let (b, a) = match cfg.filter {
        FilterKind::LowPass => butterworth_lowpass(4, cfg.band_hi_hz, s.rate_hz),
        FilterKind::BandPass => butterworth_bandpass(2, cfg.band_lo_hz, cfg.band_hi_hz, s.rate_hz),
    };
    let samples = filtfilt(&b, &a, &s.samples)?;
    Signal::new(samples, s.rate_hz, s.origin)
}

/// Savitzky-Golay smoothing: local least-squares polynomial fit of the
/// given order over an odd window. Exact on polynomials of degree <= order,
/// including at the edges, where the outputs come from polynomial fits over
/// the first and last full windows.
pub fn smooth_sg(s: &Signal, window: usize, order: usize) -> Result<Signal> {
    if s.is_empty() {
        return Err(Error::DegenerateInput("empty signal".into()));
    }
    if window < 3 || window % 2 == 0 {
        return Err(Error::parameter(format!(
            "window must be odd and >= 3, got {}",
            window
        )));
    }
    if order >= window {
        return Err(Error::parameter(format!(
            "order {} must be smaller than window {}",
            order, window
        )));
    }
    if window > s.len() {
        return Err(Error::parameter(format!(
            "window {} exceeds signal length {}",
            window,
            s.len()
        )));
    }

    let h = window / 2;
    let n = s.len();
    let center_weights = sg_weights(window, order, 0.0);
    let mut out = vec![0.0f64; n];
    for i in h..n - h {
        let mut acc = 0.0;
        for (j, &w) in center_weights.iter().enumerate() {
            acc += w * s.samples[i - h + j];
        }
        out[i] = acc;
    }
    // Edge outputs evaluate the fit over the first/last window at the
    // off-center positions.
    for i in 0..h {
        let weights = sg_weights(window, order, i as f64 - h as f64);
        out[i] = weights
            .iter()
            .enumerate()
            .map(|(j, &w)| w * s.samples[j])
            .sum();
        let weights = sg_weights(window, order, (h - i) as f64);
        out[n - 1 - i] = weights
            .iter()
            .enumerate()
            .map(|(j, &w)| w * s.samples[n - window + j])
            .sum();
    }
    Signal::new(out, s.rate_hz, s.origin)
}

/// Full pipeline: downsample, filter, optional smoothing, normalization.
pub fn preprocess(s: &Signal, cfg: &PreprocessConfig) -> Result<Signal> {
    cfg.validate()?;
    let s = downsample(s, cfg.target_rate_hz, cfg.downsample_method)?;
    let s = filter_respiration(&s, cfg)?;
    let s = if cfg.sg_enabled {
        smooth_sg(&s, cfg.sg_window, cfg.sg_order)?
    } else {
        s
    };
    normalize(&s)
}

/// Least-squares polynomial weights for one Savitzky-Golay output at
/// `eval_at` (in samples relative to the window center).
fn sg_weights(window: usize, order: usize, eval_at: f64) -> Vec<f64> {
    let h = (window / 2) as f64;
    let m = order + 1;
    // Normal equations G theta = V^T x with V[i][j] = pos_i^j.
    let mut gram = vec![vec![0.0f64; m]; m];
    for i in 0..window {
        let pos = i as f64 - h;
        let mut powers = vec![1.0f64; 2 * m - 1];
        for p in 1..2 * m - 1 {
            powers[p] = powers[p - 1] * pos;
        }
        for r in 0..m {
            for c in 0..m {
                gram[r][c] += powers[r + c];
            }
        }
    }
    let inv = invert_matrix(&gram);
    // weight_i = sum_j eval_at^j * [G^-1 V^T]_{j,i}
    let mut eval_powers = vec![1.0f64; m];
    for p in 1..m {
        eval_powers[p] = eval_powers[p - 1] * eval_at;
    }
    (0..window)
        .map(|i| {
            let pos = i as f64 - h;
            let mut pos_powers = vec![1.0f64; m];
            for p in 1..m {
                pos_powers[p] = pos_powers[p - 1] * pos;
            }
            let mut w = 0.0;
            for j in 0..m {
                for l in 0..m {
                    w += eval_powers[j] * inv[j][l] * pos_powers[l];
                }
            }
            w
        })
        .collect()
}

/// Gauss-Jordan inverse for the small symmetric systems used here.
fn invert_matrix(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| aug[i][col].abs().partial_cmp(&aug[j][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let factor = aug[row][col];
                if factor != 0.0 {
                    for c in 0..2 * n {
                        aug[row][c] -= factor * aug[col][c];
                    }
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

// ---------------------------------------------------------------------------
// Butterworth design (bilinear transform) and zero-phase application
// ---------------------------------------------------------------------------

/// Analog Butterworth prototype poles for unit cutoff, left half-plane.
fn prototype_poles(order: usize) -> Vec<Complex64> {
    (0..order)
        .map(|k| {
            let theta = std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * order as f64);
            Complex64::new(-theta.sin(), theta.cos())
        })
        .collect()
}

/// Pre-warped analog frequency for the bilinear transform (fs folded in).
fn warp(f_hz: f64, fs: f64) -> f64 {
    2.0 * fs * (std::f64::consts::PI * f_hz / fs).tan()
}

fn bilinear(z: Complex64, fs: f64) -> Complex64 {
    let two_fs = Complex64::new(2.0 * fs, 0.0);
    (two_fs + z) / (two_fs - z)
}

/// Expand a set of roots into real polynomial coefficients, highest power
/// of z^-1 last: prod (1 - r_i z^-1).
fn poly_from_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs.iter().map(|c| c.re).collect()
}

/// Digital transfer function gain at frequency `f_hz`.
fn gain_at(b: &[f64], a: &[f64], f_hz: f64, fs: f64) -> f64 {
    let w = std::f64::consts::TAU * f_hz / fs;
    let z_inv = Complex64::new(0.0, -w).exp();
    let eval = |c: &[f64]| {
        c.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &v| acc * z_inv + v)
    };
    (eval(b) / eval(a)).norm()
}

/// 4th-order digital Butterworth low-pass (b, a).
fn butterworth_lowpass(order: usize, cutoff_hz: f64, fs: f64) -> (Vec<f64>, Vec<f64>) {
    let wc = warp(cutoff_hz, fs);
    let analog_poles: Vec<Complex64> = prototype_poles(order).iter().map(|p| p * wc).collect();
    let digital_poles: Vec<Complex64> = analog_poles.iter().map(|&p| bilinear(p, fs)).collect();
    // All analog zeros at infinity map to z = -1.
    let digital_zeros = vec![Complex64::new(-1.0, 0.0); order];
    let mut b = poly_from_roots(&digital_zeros);
    let a = poly_from_roots(&digital_poles);
    let g = gain_at(&b, &a, 0.0, fs);
    for v in b.iter_mut() {
        *v /= g;
    }
    (b, a)
}

/// Digital Butterworth band-pass of order 2*prototype_order (b, a), unit
/// gain at the geometric band center.
fn butterworth_bandpass(
    prototype_order: usize,
    lo_hz: f64,
    hi_hz: f64,
    fs: f64,
) -> (Vec<f64>, Vec<f64>) {
    let w1 = warp(lo_hz, fs);
    let w2 = warp(hi_hz, fs);
    let bw = w2 - w1;
    let w0sq = w1 * w2;
    let mut analog_poles = Vec::with_capacity(2 * prototype_order);
    for p in prototype_poles(prototype_order) {
        let half = p * (bw / 2.0);
        let root = (half * half - w0sq).sqrt();
        analog_poles.push(half + root);
        analog_poles.push(half - root);
    }
    let digital_poles: Vec<Complex64> = analog_poles.iter().map(|&p| bilinear(p, fs)).collect();
    // N analog zeros at the origin -> z = +1; N at infinity -> z = -1.
    let mut digital_zeros = vec![Complex64::new(1.0, 0.0); prototype_order];
    digital_zeros.extend(vec![Complex64::new(-1.0, 0.0); prototype_order]);
    let mut b = poly_from_roots(&digital_zeros);
    let a = poly_from_roots(&digital_poles);
    let center = (lo_hz * hi_hz).sqrt();
    let g = gain_at(&b, &a, center, fs);
    for v in b.iter_mut() {
        *v /= g;
    }
    (b, a)
}

/// Direct-form II transposed filtering with initial state `zi`.
fn lfilter(b: &[f64], a: &[f64], x: &[f64], zi: &[f64]) -> Vec<f64> {
    let order = a.len() - 1;
    let mut state = zi.to_vec();
    debug_assert_eq!(state.len(), order);
    let mut y = Vec::with_capacity(x.len());
    for &xi in x {
        let yi = b[0] * xi + state[0];
        for s in 0..order {
            let next = if s + 1 < order { state[s + 1] } else { 0.0 };
            state[s] = next + b[s + 1] * xi - a[s + 1] * yi;
        }
        y.push(yi);
    }
    y
}

/// Steady-state step-response initial conditions (unit input), so filter
/// transients decay from the signal's own level instead of from zero.
fn lfilter_zi(b: &[f64], a: &[f64]) -> Vec<f64> {
    let order = a.len() - 1;
    // Solve (I - A) zi = B for the DF2T state-space companion form.
    let mut m = vec![vec![0.0f64; order]; order];
    let mut rhs = vec![0.0f64; order];
    for i in 0..order {
        for j in 0..order {
            let a_ij = if j == 0 {
                -a[i + 1]
            } else if j == i + 1 {
                1.0
            } else {
                0.0
            };
            m[i][j] = if i == j { 1.0 - a_ij } else { -a_ij };
        }
        rhs[i] = b[i + 1] - b[0] * a[i + 1];
    }
    let inv = invert_matrix(&m);
    (0..order)
        .map(|i| (0..order).map(|j| inv[i][j] * rhs[j]).sum())
        .collect()
}

/// Forward-backward (zero-phase) filtering with odd-mirror edge padding.
fn filtfilt(b: &[f64], a: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let order = a.len() - 1;
    let pad = (3 * (order + 1)).max(12).min(x.len().saturating_sub(1));
    if x.len() <= order {
        return Err(Error::DegenerateInput(format!(
            "signal of {} samples is too short to filter",
            x.len()
        )));
    }
    let n = x.len();
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        ext.push(2.0 * x[0] - x[i]);
    }
    ext.extend_from_slice(x);
    for i in 1..=pad {
        ext.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }

    let zi = lfilter_zi(b, a);
    let scale = |v: f64| -> Vec<f64> { zi.iter().map(|&z| z * v).collect() };

    let forward = lfilter(b, a, &ext, &scale(ext[0]));
    let mut rev: Vec<f64> = forward.into_iter().rev().collect();
    let backward = lfilter(b, a, &rev, &scale(rev[0]));
    rev = backward.into_iter().rev().collect();
    Ok(rev[pad..pad + n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::SignalOrigin;

    fn signal(samples: Vec<f64>, rate: f64) -> Signal {
        Signal::new(samples, rate, SignalOrigin::File).unwrap()
    }

    fn tone(freq: f64, rate: f64, seconds: f64) -> Signal {
        let n = (rate * seconds) as usize;
        signal(
            (0..n)
                .map(|k| (std::f64::consts::TAU * freq * k as f64 / rate).sin())
                .collect(),
            rate,
        )
    }

    /// DFT amplitude at one frequency, the oracle for filter gains.
    fn dft_amplitude(samples: &[f64], rate: f64, freq: f64) -> f64 {
        let n = samples.len() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &x) in samples.iter().enumerate() {
            let ang = -std::f64::consts::TAU * freq * k as f64 / rate;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re * re + im * im).sqrt() * 2.0 / n
    }

    #[test]
    fn skip_downsample_halves() {
        let s = signal(vec![1.0, 3.0, 5.0, 7.0], 128.0);
        let out = downsample(&s, 64.0, DownsampleMethod::Skip).unwrap();
        assert_eq!(out.samples, vec![1.0, 5.0]);
        assert_eq!(out.rate_hz, 64.0);
    }

    #[test]
    fn average_downsample_halves() {
        let s = signal(vec![1.0, 3.0, 5.0, 7.0], 128.0);
        let out = downsample(&s, 64.0, DownsampleMethod::Average).unwrap();
        assert_eq!(out.samples, vec![2.0, 6.0]);
    }

    #[test]
    fn skip_downsample_follows_index_formula() {
        // Oracle: output k picks input round(k * 100 / 64).
        let n = 100usize;
        let s = signal((0..n).map(|i| i as f64).collect(), 100.0);
        let out = downsample(&s, 64.0, DownsampleMethod::Skip).unwrap();
        for (k, &v) in out.samples.iter().enumerate() {
            let expected = (k as f64 * 100.0 / 64.0).round();
            assert_eq!(v, expected, "output index {}", k);
        }
        assert_eq!(out.samples[0], 0.0);
        assert_eq!(out.samples[1], 2.0);
        assert_eq!(out.samples[2], 3.0);
        assert_eq!(out.samples[3], 5.0);
        // Duration preserved within one output sample period.
        assert!((out.duration_s() - s.duration_s()).abs() <= 1.0 / 64.0);
    }

    #[test]
    fn upsampling_is_rejected() {
        let s = signal(vec![0.0; 8], 64.0);
        assert!(downsample(&s, 128.0, DownsampleMethod::Skip).is_err());
    }

    #[test]
    fn normalize_maps_to_unit_range() {
        let s = signal(vec![2.0, 4.0, 6.0], 10.0);
        let out = normalize(&s).unwrap();
        assert_eq!(out.samples, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn normalize_is_idempotent() {
        let s = signal(vec![-1.0, 0.25, 1.0, -0.5], 10.0);
        let once = normalize(&s).unwrap();
        assert_eq!(once.samples, s.samples);
        let twice = normalize(&once).unwrap();
        assert_eq!(twice.samples, once.samples);
    }

    #[test]
    fn normalize_rejects_constant_signal() {
        let s = signal(vec![5.0, 5.0], 10.0);
        assert!(matches!(normalize(&s), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn bandpass_keeps_in_band_tone() {
        let cfg = PreprocessConfig::default();
        let s = tone(0.3, 64.0, 60.0);
        let out = filter_respiration(&s, &cfg).unwrap();
        assert_eq!(out.len(), s.len());
        let ratio = dft_amplitude(&out.samples, 64.0, 0.3) / dft_amplitude(&s.samples, 64.0, 0.3);
        assert!(ratio >= 0.9, "in-band gain {}", ratio);
    }

    #[test]
    fn bandpass_rejects_out_of_band_tones() {
        let cfg = PreprocessConfig::default();
        for freq in [0.05, 1.0] {
            let s = tone(freq, 64.0, 120.0);
            let out = filter_respiration(&s, &cfg).unwrap();
            let ratio =
                dft_amplitude(&out.samples, 64.0, freq) / dft_amplitude(&s.samples, 64.0, freq);
            assert!(ratio <= 0.1, "{} Hz gain {}", freq, ratio);
        }
    }

    #[test]
    fn bandpass_removes_dc() {
        let cfg = PreprocessConfig::default();
        let offset = 3.0;
        let s = signal(vec![offset; 64 * 30], 64.0);
        let out = filter_respiration(&s, &cfg).unwrap();
        let mean = out.samples.iter().sum::<f64>() / out.len() as f64;
        assert!(mean.abs() < 1e-6 * offset, "residual mean {}", mean);
    }

    #[test]
    fn lowpass_keeps_slow_and_rejects_fast() {
        let cfg = PreprocessConfig {
            filter: FilterKind::LowPass,
            ..Default::default()
        };
        let slow = tone(0.2, 64.0, 60.0);
        let out = filter_respiration(&slow, &cfg).unwrap();
        let ratio =
            dft_amplitude(&out.samples, 64.0, 0.2) / dft_amplitude(&slow.samples, 64.0, 0.2);
        assert!(ratio >= 0.9, "slow gain {}", ratio);

        let fast = tone(5.0, 64.0, 60.0);
        let out = filter_respiration(&fast, &cfg).unwrap();
        let ratio =
            dft_amplitude(&out.samples, 64.0, 5.0) / dft_amplitude(&fast.samples, 64.0, 5.0);
        assert!(ratio <= 0.01, "fast gain {}", ratio);
    }

    #[test]
    fn cutoff_at_nyquist_is_rejected() {
        let cfg = PreprocessConfig {
            band_hi_hz: 32.0,
            ..Default::default()
        };
        let s = tone(0.3, 64.0, 10.0);
        assert!(filter_respiration(&s, &cfg).is_err());
    }

    #[test]
    fn filtering_is_zero_phase() {
        // Cross-correlation of a band-limited tone with its filtered
        // version peaks at lag zero.
        let cfg = PreprocessConfig::default();
        let s = tone(0.25, 64.0, 60.0);
        let out = filter_respiration(&s, &cfg).unwrap();
        let max_lag = 64i64;
        let mut best = (0i64, f64::NEG_INFINITY);
        for lag in -max_lag..=max_lag {
            let mut acc = 0.0;
            for i in 0..s.len() {
                let j = i as i64 + lag;
                if j >= 0 && (j as usize) < out.len() {
                    acc += s.samples[i] * out.samples[j as usize];
                }
            }
            if acc > best.1 {
                best = (lag, acc);
            }
        }
        assert_eq!(best.0, 0, "correlation peak at lag {}", best.0);
    }

    #[test]
    fn filtering_and_smoothing_are_linear() {
        let cfg = PreprocessConfig::default();
        let x = tone(0.2, 64.0, 30.0);
        let y = tone(0.4, 64.0, 30.0);
        let (ca, cb) = (1.7, -0.6);
        let combined = signal(
            x.samples
                .iter()
                .zip(&y.samples)
                .map(|(&xv, &yv)| ca * xv + cb * yv)
                .collect(),
            64.0,
        );

        let ops: Vec<Box<dyn Fn(&Signal) -> Result<Signal>>> = vec![
            Box::new(|s| filter_respiration(s, &cfg)),
            Box::new(|s| smooth_sg(s, 21, 3)),
        ];
        for op in ops {
            let fx = op(&x).unwrap();
            let fy = op(&y).unwrap();
            let fc = op(&combined).unwrap();
            let scale = fc
                .samples
                .iter()
                .map(|v| v.abs())
                .fold(f64::NEG_INFINITY, f64::max);
            for i in 0..fc.len() {
                let expected = ca * fx.samples[i] + cb * fy.samples[i];
                assert!(
                    (fc.samples[i] - expected).abs() <= 1e-9 * scale.max(1.0),
                    "sample {}: {} vs {}",
                    i,
                    fc.samples[i],
                    expected
                );
            }
        }
    }

    #[test]
    fn savitzky_golay_reproduces_polynomials() {
        let n = 200;
        let s = signal(
            (0..n)
                .map(|i| {
                    let t = i as f64 * 0.05;
                    2.0 - 0.3 * t + 0.01 * t * t
                })
                .collect(),
            20.0,
        );
        let out = smooth_sg(&s, 21, 3).unwrap();
        for i in 0..n {
            assert!(
                (out.samples[i] - s.samples[i]).abs() < 1e-9,
                "sample {}: {} vs {}",
                i,
                out.samples[i],
                s.samples[i]
            );
        }
    }

    #[test]
    fn savitzky_golay_reduces_noise_variance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let samples: Vec<f64> = (0..4096)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        let var = |xs: &[f64]| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64
        };
        let s = signal(samples, 64.0);
        let out = smooth_sg(&s, 21, 3).unwrap();
        assert!(
            var(&out.samples) < var(&s.samples),
            "{} !< {}",
            var(&out.samples),
            var(&s.samples)
        );
    }

    #[test]
    fn savitzky_golay_rejects_bad_windows() {
        let s = tone(0.3, 64.0, 10.0);
        assert!(smooth_sg(&s, 1, 0).is_err());
        assert!(smooth_sg(&s, 20, 3).is_err());
        assert!(smooth_sg(&s, 21, 21).is_err());
        let short = signal(vec![0.0; 10], 64.0);
        assert!(smooth_sg(&short, 21, 3).is_err());
    }

    #[test]
    fn preprocess_outputs_unit_range() {
        let p = crate::signal::SubjectParams {
            seed: 42,
            ..Default::default()
        };
        let (rip, accel) = crate::signal::generate_subject(&p).unwrap();
        let cfg = PreprocessConfig::default();
        let a = preprocess(&rip, &cfg).unwrap();
        let b = preprocess(&accel, &cfg).unwrap();
        for s in [&a, &b] {
            let min = s.samples.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = s.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((-1.0 - min).abs() < 1e-12 && (1.0 - max).abs() < 1e-12);
        }
        assert_eq!(a.rate_hz, 64.0);
        assert_eq!(b.rate_hz, 64.0);
        assert!((a.len() as i64 - b.len() as i64).abs() <= 1);
    }
}
