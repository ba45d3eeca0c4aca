//! Respiration signal sources: a synthetic two-sensor subject model, trace
//! file ingestion, and the remote-observation model used for attack runs.
//!
//! One latent breathing process drives both device views. The latent
//! waveform is a fundamental at the (slowly drifting) breathing rate plus a
//! 20% second harmonic, with the bottom tenth of each cycle flattened to
//! imitate the short diaphragm stop at end-exhalation. The chest-band view
//! samples the latent process directly; the accelerometer view adds a
//! per-sample Gaussian inter-sensor difference and low-frequency motion
//! disturbance.

use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Which pipeline stage or sensor a signal came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalOrigin {
    RipLike,
    AccelLike,
    RemoteObserved,
    File,
}

/// A uniformly sampled real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub rate_hz: f64,
    pub origin: SignalOrigin,
}

impl Signal {
    pub fn new(samples: Vec<f64>, rate_hz: f64, origin: SignalOrigin) -> Result<Self> {
        if !(rate_hz > 0.0) || !rate_hz.is_finite() {
            return Err(Error::parameter(format!(
                "sample rate must be positive, got {}",
                rate_hz
            )));
        }
        Ok(Signal {
            samples,
            rate_hz,
            origin,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.rate_hz
    }

    /// Time of sample `idx` in milliseconds.
    pub fn time_ms(&self, idx: usize) -> f64 {
        idx as f64 / self.rate_hz * 1000.0
    }
}

/// Parameters of one synthetic subject.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SubjectParams {
    /// Base breathing rate; physiological range is 6 to 30.
    pub breaths_per_min: f64,
    pub duration_s: f64,
    /// Std of the per-cycle breathing rate, in breaths per minute.
    pub rate_variability: f64,
    /// Std of the per-cycle amplitude around 1.
    pub amplitude_variability: f64,
    /// Mean of the Gaussian inter-sensor difference.
    pub diff_mu: f64,
    /// Std of the Gaussian inter-sensor difference.
    pub diff_sigma: f64,
    /// RMS of the accelerometer motion disturbance.
    pub motion_noise_level: f64,
    pub rip_rate_hz: f64,
    pub accel_rate_hz: f64,
    pub seed: u64,
}

impl Default for SubjectParams {
    fn default() -> Self {
        SubjectParams {
            breaths_per_min: 15.0,
            duration_s: 60.0,
            rate_variability: 1.0,
            amplitude_variability: 0.1,
            diff_mu: 0.0,
            diff_sigma: 0.05,
            motion_noise_level: 0.05,
            rip_rate_hz: 128.0,
            accel_rate_hz: 100.0,
            seed: 0,
        }
    }
}

impl SubjectParams {
    pub fn validate(&self) -> Result<()> {
        if !(6.0..=30.0).contains(&self.breaths_per_min) {
            return Err(Error::parameter(format!(
                "breaths_per_min {} outside [6, 30]",
                self.breaths_per_min
            )));
        }
        if !(self.duration_s > 0.0) {
            return Err(Error::parameter("duration_s must be positive"));
        }
        if self.rate_variability < 0.0
            || self.amplitude_variability < 0.0
            || self.diff_sigma < 0.0
            || self.motion_noise_level < 0.0
        {
            return Err(Error::parameter("variability and noise levels must be >= 0"));
        }
        if !(self.rip_rate_hz > 0.0) || !(self.accel_rate_hz > 0.0) {
            return Err(Error::parameter("sample rates must be positive"));
        }
        Ok(())
    }
}

/// The remote observer's capture model (video-analysis analog).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ObserverParams {
    /// Frames per second the observer actually processes.
    pub effective_rate_hz: f64,
    /// Std of additive observation noise, in victim amplitude units.
    pub extra_noise_sigma: f64,
    /// Processing delay of the extraction pipeline.
    pub latency_ms: f64,
    pub seed: u64,
}

impl Default for ObserverParams {
    fn default() -> Self {
        ObserverParams {
            effective_rate_hz: 9.0,
            extra_noise_sigma: 2.5,
            latency_ms: 150.0,
            seed: 0,
        }
    }
}

impl ObserverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.effective_rate_hz > 0.0) {
            return Err(Error::parameter("effective_rate_hz must be positive"));
        }
        if self.extra_noise_sigma < 0.0 || self.latency_ms < 0.0 {
            return Err(Error::parameter("noise and latency must be >= 0"));
        }
        Ok(())
    }
}

/// All three views of one generated subject.
#[derive(Debug, Clone)]
pub struct SubjectSignals {
    pub rip_like: Signal,
    pub accel_like: Signal,
    /// The latent breathing process at the chest-band rate: what an external
    /// observer could in principle see.
    pub latent: Signal,
}

/// One breathing cycle of the latent process.
struct LatentCycle {
    start_s: f64,
    duration_s: f64,
    amplitude: f64,
}

/// Waveform over one cycle as a function of local phase in [0, 1). The
/// second harmonic's phase is a per-subject trait, so different subjects
/// breathe with visibly different cycle shapes.
fn cycle_waveform(phase: f64, harmonic_phase: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    (two_pi * phase).sin() + 0.2 * (2.0 * two_pi * phase + harmonic_phase).sin()
}

/// Floor below which the waveform is clamped flat (bottom 10% of the swing).
fn waveform_floor(harmonic_phase: f64) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..4096 {
        let v = cycle_waveform(i as f64 / 4096.0, harmonic_phase);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    lo + 0.1 * (hi - lo)
}

/// RMS of the subject-specific in-band texture relative to the unit cycle
/// amplitude. Breathing is not a clean periodic waveform; this irregular
/// component is what actually distinguishes subjects whose rates and cycle
/// shapes happen to coincide.
const TEXTURE_RMS: f64 = 0.4;
/// Number of random in-band tones composing the texture.
const TEXTURE_TONES: usize = 12;
/// Texture band. Kept in the lower respiration band: slow enough not to
/// disturb the local-variance profile change points are scored on, while
/// still shifting the values the quantizer sees.
const TEXTURE_BAND_HZ: (f64, f64) = (0.10, 0.25);

struct LatentProcess {
    cycles: Vec<LatentCycle>,
    floor: f64,
    harmonic_phase: f64,
    /// (frequency Hz, amplitude, phase) of the texture tones.
    texture: Vec<(f64, f64, f64)>,
}

impl LatentProcess {
    fn generate(p: &SubjectParams, rng: &mut ChaCha8Rng) -> Self {
        let harmonic_phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut texture: Vec<(f64, f64, f64)> = (0..TEXTURE_TONES)
            .map(|_| {
                (
                    rng.gen_range(TEXTURE_BAND_HZ.0..TEXTURE_BAND_HZ.1),
                    rng.gen_range(0.5..1.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let power: f64 = texture.iter().map(|(_, a, _)| a * a / 2.0).sum();
        let scale = TEXTURE_RMS / power.sqrt();
        for tone in texture.iter_mut() {
            tone.1 *= scale;
        }

        let base = p.breaths_per_min;
        let mut cycles = Vec::new();
        let mut t = 0.0;
        let mut rate = base;
        while t < p.duration_s + 2.0 {
            let z: f64 = rng.sample(StandardNormal);
            let amp_z: f64 = rng.sample(StandardNormal);
            let duration = 60.0 / rate;
            let amplitude = (1.0 + p.amplitude_variability * amp_z).max(0.2);
            cycles.push(LatentCycle {
                start_s: t,
                duration_s: duration,
                amplitude,
            });
            t += duration;
            // AR(1) drift of the instantaneous rate, clamped to the
            // physiological range.
            rate = (base + 0.7 * (rate - base) + p.rate_variability * (1.0 - 0.49f64).sqrt() * z)
                .clamp(6.0, 30.0);
        }
        LatentProcess {
            cycles,
            floor: waveform_floor(harmonic_phase),
            harmonic_phase,
            texture,
        }
    }

    fn value_at(&self, t: f64) -> f64 {
        let idx = match self
            .cycles
            .binary_search_by(|c| c.start_s.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let c = &self.cycles[idx];
        let phase = ((t - c.start_s) / c.duration_s).clamp(0.0, 1.0);
        let carrier = c.amplitude * cycle_waveform(phase, self.harmonic_phase).max(self.floor);
        let texture: f64 = self
            .texture
            .iter()
            .map(|&(f, a, psi)| a * (std::f64::consts::TAU * f * t + psi).sin())
            .sum();
        carrier + texture
    }

    fn sample(&self, rate_hz: f64, duration_s: f64) -> Vec<f64> {
        let n = (duration_s * rate_hz).round() as usize;
        (0..n).map(|k| self.value_at(k as f64 / rate_hz)).collect()
    }
}

/// Generate the two legitimate device views of one subject.
pub fn generate_subject(p: &SubjectParams) -> Result<(Signal, Signal)> {
    let full = generate_subject_full(p)?;
    Ok((full.rip_like, full.accel_like))
}

/// Generate both device views plus the latent process itself.
pub fn generate_subject_full(p: &SubjectParams) -> Result<SubjectSignals> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let latent = LatentProcess::generate(p, &mut rng);

    let rip_samples = latent.sample(p.rip_rate_hz, p.duration_s);
    let latent_signal = Signal::new(rip_samples.clone(), p.rip_rate_hz, SignalOrigin::RipLike)?;
    let rip_like = Signal::new(rip_samples, p.rip_rate_hz, SignalOrigin::RipLike)?;

    let mut accel_samples = latent.sample(p.accel_rate_hz, p.duration_s);
    for s in accel_samples.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *s += p.diff_mu + p.diff_sigma * z;
    }
    if p.motion_noise_level > 0.0 {
        add_motion_disturbance(&mut accel_samples, p.accel_rate_hz, p.motion_noise_level, &mut rng);
    }
    let accel_like = Signal::new(accel_samples, p.accel_rate_hz, SignalOrigin::AccelLike)?;

    Ok(SubjectSignals {
        rip_like,
        accel_like,
        latent: latent_signal,
    })
}

/// Low-frequency drift (one-pole low-pass below 0.1 Hz) plus a smaller
/// broadband term, scaled so the drift RMS equals `level`.
fn add_motion_disturbance(samples: &mut [f64], rate_hz: f64, level: f64, rng: &mut ChaCha8Rng) {
    let a = (-std::f64::consts::TAU * 0.02 / rate_hz).exp();
    // Stationary gain of the one-pole filter on unit white noise.
    let gain = ((1.0 - a) / (1.0 + a)).sqrt();
    let mut state = 0.0;
    for s in samples.iter_mut() {
        let w: f64 = rng.sample(StandardNormal);
        state = a * state + (1.0 - a) * w;
        let broadband: f64 = rng.sample(StandardNormal);
        *s += level * (state / gain + 0.25 * broadband);
    }
}

/// Model of the adversary's remote view: skip-resampled to the observer's
/// effective rate, delayed by the processing latency, with additive noise.
pub fn observe_remote(victim: &Signal, o: &ObserverParams) -> Result<Signal> {
    o.validate()?;
    if victim.is_empty() {
        return Err(Error::DegenerateInput("empty victim signal".into()));
    }
    if o.effective_rate_hz > victim.rate_hz {
        return Err(Error::parameter(format!(
            "observer rate {} exceeds victim rate {}",
            o.effective_rate_hz, victim.rate_hz
        )));
    }
    let delay_s = o.latency_ms / 1000.0;
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let t = k as f64 / o.effective_rate_hz;
        let src = ((t - delay_s) * victim.rate_hz).round();
        let src_idx = if src < 0.0 { 0 } else { src as usize };
        if (t * victim.rate_hz).round() as usize >= victim.len() {
            break;
        }
        out.push(victim.samples[src_idx.min(victim.len() - 1)]);
        k += 1;
    }
    if o.extra_noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        for s in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *s += o.extra_noise_sigma * z;
        }
    }
    Signal::new(out, o.effective_rate_hz, SignalOrigin::RemoteObserved)
}

/// Read a trace file: `rate_hz=<real>`, a `value` header, one sample per
/// line.
pub fn load_trace(path: &std::path::Path) -> Result<Signal> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader.lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::format(1, "missing rate header"))??;
    let rate_hz = header
        .strip_prefix("rate_hz=")
        .ok_or_else(|| Error::format(1, format!("expected `rate_hz=<real>`, got `{}`", header)))?
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::format(1, format!("bad rate: {}", e)))?;
    if !(rate_hz > 0.0) || !rate_hz.is_finite() {
        return Err(Error::format(1, format!("rate must be positive, got {}", rate_hz)));
    }

    let column = lines
        .next()
        .ok_or_else(|| Error::format(2, "missing `value` header"))??;
    if column.trim() != "value" {
        return Err(Error::format(
            2,
            format!("expected column header `value`, got `{}`", column),
        ));
    }

    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 3;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v = line
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::format(row, format!("not a number: `{}`", line.trim())))?;
        if !v.is_finite() {
            return Err(Error::format(row, format!("non-finite value `{}`", line.trim())));
        }
        samples.push(v);
    }
    if samples.is_empty() {
        return Err(Error::format(3, "trace has no data rows"));
    }
    Signal::new(samples, rate_hz, SignalOrigin::File)
}

/// Write a signal in the trace file format read by [`load_trace`].
pub fn write_trace(signal: &Signal, path: &std::path::Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "rate_hz={}\nvalue\n", signal.rate_hz)?;
    for s in &signal.samples {
        writeln!(out, "{}", s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive DFT magnitude at one frequency; deliberately independent of any
    /// production filtering code.
    fn dft_magnitude(samples: &[f64], rate_hz: f64, freq_hz: f64) -> f64 {
        let n = samples.len() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &x) in samples.iter().enumerate() {
            let angle = -std::f64::consts::TAU * freq_hz * k as f64 / rate_hz;
            re += x * angle.cos();
            im += x * angle.sin();
        }
        (re * re + im * im).sqrt() * 2.0 / n
    }

    #[test]
    fn generation_is_deterministic() {
        let p = SubjectParams {
            seed: 7,
            ..Default::default()
        };
        let (rip1, accel1) = generate_subject(&p).unwrap();
        let (rip2, accel2) = generate_subject(&p).unwrap();
        assert_eq!(rip1, rip2);
        assert_eq!(accel1, accel2);

        let other = generate_subject(&SubjectParams {
            seed: 8,
            ..Default::default()
        })
        .unwrap();
        assert_ne!(rip1.samples, other.0.samples);
    }

    #[test]
    fn dominant_frequency_tracks_breathing_rate() {
        let p = SubjectParams {
            breaths_per_min: 15.0,
            duration_s: 60.0,
            rate_variability: 0.5,
            seed: 21,
            ..Default::default()
        };
        let (rip, _) = generate_subject(&p).unwrap();
        // Scan the plausible band for the spectral peak.
        let mut best = (0.0, 0.0);
        let mut f = 0.05;
        while f <= 1.5 {
            let mag = dft_magnitude(&rip.samples, rip.rate_hz, f);
            if mag > best.1 {
                best = (f, mag);
            }
            f += 0.005;
        }
        assert!(
            (best.0 - 0.25).abs() <= 0.05,
            "dominant peak at {} Hz",
            best.0
        );
    }

    #[test]
    fn inter_sensor_difference_std_matches_diff_sigma() {
        // Same rate on both devices so samples align exactly.
        let p = SubjectParams {
            diff_sigma: 0.05,
            motion_noise_level: 0.0,
            rip_rate_hz: 64.0,
            accel_rate_hz: 64.0,
            duration_s: 180.0,
            seed: 3,
            ..Default::default()
        };
        let (rip, accel) = generate_subject(&p).unwrap();
        let n = rip.len().min(accel.len());
        let diffs: Vec<f64> = (0..n).map(|i| accel.samples[i] - rip.samples[i]).collect();
        let mean = diffs.iter().sum::<f64>() / n as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        let std = var.sqrt();
        assert!(
            (std - 0.05).abs() <= 0.2 * 0.05,
            "difference std {} not within 20% of 0.05",
            std
        );
    }

    #[test]
    fn difference_passes_normality_sanity_check() {
        let p = SubjectParams {
            diff_sigma: 0.05,
            motion_noise_level: 0.0,
            rip_rate_hz: 64.0,
            accel_rate_hz: 64.0,
            duration_s: 200.0,
            seed: 4,
            ..Default::default()
        };
        let (rip, accel) = generate_subject(&p).unwrap();
        let n = rip.len().min(accel.len());
        assert!(n >= 10_000);
        let diffs: Vec<f64> = (0..n).map(|i| accel.samples[i] - rip.samples[i]).collect();
        let mean = diffs.iter().sum::<f64>() / n as f64;
        let m2 = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
        let m3 = diffs.iter().map(|d| (d - mean).powi(3)).sum::<f64>() / n as f64;
        let m4 = diffs.iter().map(|d| (d - mean).powi(4)).sum::<f64>() / n as f64;
        let skew = m3 / m2.powf(1.5);
        let excess_kurtosis = m4 / (m2 * m2) - 3.0;
        assert!(skew.abs() < 0.5, "skew {}", skew);
        assert!(excess_kurtosis.abs() < 0.5, "excess kurtosis {}", excess_kurtosis);
    }

    #[test]
    fn views_share_the_latent_process_when_noise_free() {
        let p = SubjectParams {
            diff_sigma: 0.0,
            motion_noise_level: 0.0,
            amplitude_variability: 0.0,
            seed: 5,
            ..Default::default()
        };
        let full = generate_subject_full(&p).unwrap();
        // Compare at 4 Hz where both 128 and 100 resample exactly in time
        // up to half a source sample period.
        let pick = |s: &Signal| -> Vec<f64> {
            (0..)
                .map(|k| (k as f64 * s.rate_hz / 4.0).round() as usize)
                .take_while(|&i| i < s.len())
                .map(|i| s.samples[i])
                .collect()
        };
        let a = pick(&full.rip_like);
        let b = pick(&full.accel_like);
        let n = a.len().min(b.len());
        for i in 0..n {
            assert!(
                (a[i] - b[i]).abs() < 0.05,
                "sample {}: {} vs {}",
                i,
                a[i],
                b[i]
            );
        }
    }

    #[test]
    fn observe_remote_identity_case() {
        let p = SubjectParams {
            seed: 6,
            ..Default::default()
        };
        let (rip, _) = generate_subject(&p).unwrap();
        let o = ObserverParams {
            effective_rate_hz: rip.rate_hz,
            extra_noise_sigma: 0.0,
            latency_ms: 0.0,
            seed: 0,
        };
        let seen = observe_remote(&rip, &o).unwrap();
        assert_eq!(seen.samples, rip.samples);
        assert_eq!(seen.origin, SignalOrigin::RemoteObserved);
    }

    #[test]
    fn observe_remote_resamples_to_effective_rate() {
        let victim = Signal::new(vec![0.0; 640], 64.0, SignalOrigin::RipLike).unwrap();
        let o = ObserverParams {
            effective_rate_hz: 9.0,
            extra_noise_sigma: 0.0,
            latency_ms: 0.0,
            seed: 0,
        };
        let seen = observe_remote(&victim, &o).unwrap();
        let expected = 640 * 9 / 64;
        assert!(
            (seen.len() as i64 - expected as i64).abs() <= 1,
            "got {} samples, expected about {}",
            seen.len(),
            expected
        );
        assert_eq!(seen.rate_hz, 9.0);
    }

    #[test]
    fn observe_remote_is_deterministic() {
        let (rip, _) = generate_subject(&SubjectParams::default()).unwrap();
        let o = ObserverParams::default();
        assert_eq!(
            observe_remote(&rip, &o).unwrap(),
            observe_remote(&rip, &o).unwrap()
        );
    }

    #[test]
    fn trace_round_trip() {
        let dir = std::env::temp_dir().join("b2p_trace_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("round_trip.csv");
        let signal = Signal::new(vec![1.0, -0.5, 0.25], 64.0, SignalOrigin::File).unwrap();
        write_trace(&signal, &path).unwrap();
        let back = load_trace(&path).unwrap();
        assert_eq!(back.samples, signal.samples);
        assert_eq!(back.rate_hz, 64.0);
    }

    #[test]
    fn trace_of_640_rows_at_64_hz() {
        let dir = std::env::temp_dir().join("b2p_trace_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("n640.csv");
        let mut content = String::from("rate_hz=64\nvalue\n");
        for i in 0..640 {
            content.push_str(&format!("{}\n", i as f64 * 0.01));
        }
        std::fs::write(&path, content).unwrap();
        let signal = load_trace(&path).unwrap();
        assert_eq!(signal.len(), 640);
        assert_eq!(signal.rate_hz, 64.0);
    }

    #[test]
    fn trace_errors_name_the_row() {
        let dir = std::env::temp_dir().join("b2p_trace_test");
        std::fs::create_dir_all(&dir).unwrap();

        let empty = dir.join("empty_data.csv");
        std::fs::write(&empty, "rate_hz=64\nvalue\n").unwrap();
        assert!(matches!(
            load_trace(&empty),
            Err(Error::Format { row: 3, .. })
        ));

        let bad_row = dir.join("bad_row.csv");
        std::fs::write(&bad_row, "rate_hz=64\nvalue\n1.0\nabc\n").unwrap();
        match load_trace(&bad_row) {
            Err(Error::Format { row, msg }) => {
                assert_eq!(row, 4);
                assert!(msg.contains("abc"));
            }
            other => panic!("expected format error, got {:?}", other),
        }

        let bad_rate = dir.join("bad_rate.csv");
        std::fs::write(&bad_rate, "rate_hz=-2\nvalue\n1.0\n").unwrap();
        assert!(matches!(
            load_trace(&bad_rate),
            Err(Error::Format { row: 1, .. })
        ));
    }

    #[test]
    fn invalid_subject_params_are_rejected() {
        let p = SubjectParams {
            breaths_per_min: 40.0,
            ..Default::default()
        };
        assert!(generate_subject(&p).is_err());
        let p = SubjectParams {
            diff_sigma: -0.1,
            ..Default::default()
        };
        assert!(generate_subject(&p).is_err());
    }
}
