//! Respiration cycles and change points: the synchronization anchors the
//! pairing attempts hang off.
//!
//! A cycle is delimited by alternating signal peaks and valleys; within
//! each peak-valley span the change point is the split where a windowed
//! statistic (mean, std, or RMS) differs most between the left and right
//! half-windows.

use crate::error::{Error, Result};
use crate::signal::Signal;
use serde::{Deserialize, Serialize};

/// One adjacent peak/valley pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cycle {
    pub peak_idx: usize,
    pub valley_idx: usize,
}

impl Cycle {
    /// Sample span of this cycle, start inclusive, end exclusive.
    pub fn span(&self) -> (usize, usize) {
        let lo = self.peak_idx.min(self.valley_idx);
        let hi = self.peak_idx.max(self.valley_idx);
        (lo, hi + 1)
    }
}

/// Statistic whose abrupt change marks a change point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CpdStat {
    Mean,
    Std,
    Rms,
}

/// A detected change point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangePoint {
    pub idx: usize,
    /// |stat(right window) - stat(left window)| at the split.
    pub score: f64,
    /// Ordinal of the cycle the point lies in.
    pub cycle: usize,
    pub stat: CpdStat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SyncConfig {
    pub stat: CpdStat,
    /// Minimum statistic change, in units of the normalized signal.
    pub threshold: f64,
    /// Change points kept per peak-valley span.
    pub n_cp_per_cycle: usize,
    /// Neighboring change points tried as alternatives to the selected one.
    pub n_offset: usize,
    /// Accepted lag between the two devices' change points.
    pub sync_offset_ms: f64,
}

impl Default for SyncConfig {
    fn default() -> Self {
        SyncConfig {
            stat: CpdStat::Std,
            threshold: 0.05,
            n_cp_per_cycle: 1,
            n_offset: 2,
            sync_offset_ms: 250.0,
        }
    }
}

impl SyncConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold < 0.0 {
            return Err(Error::parameter("threshold must be >= 0"));
        }
        if self.n_cp_per_cycle < 1 {
            return Err(Error::parameter("n_cp_per_cycle must be >= 1"));
        }
        if self.sync_offset_ms < 0.0 {
            return Err(Error::parameter("sync_offset_ms must be >= 0"));
        }
        Ok(())
    }
}

/// Minimum prominence for an extremum, in normalized units.
const MIN_PROMINENCE: f64 = 0.2;
/// Minimum spacing between same-type extrema: one period at the fastest
/// physiological breathing rate (30 per minute).
const MIN_SPACING_S: f64 = 2.0;
/// Statistic window on each side of a candidate split.
const CPD_WINDOW_S: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExtremumKind {
    Peak,
    Valley,
}

/// Find respiration cycles from alternating peaks and valleys. Expects a
/// preprocessed (normalized, filtered) signal; returns an empty list when
/// no full cycle is present.
pub fn find_cycles(s: &Signal) -> Vec<Cycle> {
    let min_spacing = (MIN_SPACING_S * s.rate_hz).round() as usize;
    let mut extrema = Vec::new();
    for (idx, prominence) in local_extrema(&s.samples, ExtremumKind::Peak, min_spacing) {
        extrema.push((idx, ExtremumKind::Peak, prominence));
    }
    for (idx, prominence) in local_extrema(&s.samples, ExtremumKind::Valley, min_spacing) {
        extrema.push((idx, ExtremumKind::Valley, prominence));
    }
    extrema.sort_by_key(|&(idx, _, _)| idx);

    // Enforce strict alternation: among same-type runs keep the most
    // prominent, earliest on ties.
    let mut alternating: Vec<(usize, ExtremumKind)> = Vec::new();
    let mut best_in_run: Option<(usize, ExtremumKind, f64)> = None;
    for &(idx, kind, prom) in &extrema {
        match best_in_run {
            Some((_, run_kind, run_prom)) if run_kind == kind => {
                if prom > run_prom {
                    best_in_run = Some((idx, kind, prom));
                }
            }
            Some((run_idx, run_kind, _)) => {
                alternating.push((run_idx, run_kind));
                best_in_run = Some((idx, kind, prom));
            }
            None => best_in_run = Some((idx, kind, prom)),
        }
    }
    if let Some((idx, kind, _)) = best_in_run {
        alternating.push((idx, kind));
    }

    alternating
        .windows(2)
        .map(|pair| {
            let (a_idx, a_kind) = pair[0];
            let (b_idx, _) = pair[1];
            match a_kind {
                ExtremumKind::Peak => Cycle {
                    peak_idx: a_idx,
                    valley_idx: b_idx,
                },
                ExtremumKind::Valley => Cycle {
                    peak_idx: b_idx,
                    valley_idx: a_idx,
                },
            }
        })
        .collect()
}

/// Strict local extrema with classic prominence, thinned to the minimum
/// spacing by keeping the more prominent point.
fn local_extrema(
    samples: &[f64],
    kind: ExtremumKind,
    min_spacing: usize,
) -> Vec<(usize, f64)> {
    let sign = match kind {
        ExtremumKind::Peak => 1.0,
        ExtremumKind::Valley => -1.0,
    };
    let x: Vec<f64> = samples.iter().map(|&v| v * sign).collect();
    let n = x.len();
    let mut candidates = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i] > x[i - 1] && x[i] >= x[i + 1] {
            // Plateau handling: advance to the end of the flat top.
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < n && x[j + 1] < x[i] {
                let idx = (i + j) / 2;
                let prom = prominence(&x, idx);
                if prom >= MIN_PROMINENCE {
                    candidates.push((idx, prom));
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    // Min-distance thinning, highest prominence first, earlier on ties.
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[b]
            .1
            .partial_cmp(&candidates[a].1)
            .unwrap()
            .then(candidates[a].0.cmp(&candidates[b].0))
    });
    let mut keep = vec![true; candidates.len()];
    for &i in &order {
        if !keep[i] {
            continue;
        }
        for (j, &(idx, _)) in candidates.iter().enumerate() {
            if j != i
                && keep[j]
                && idx.abs_diff(candidates[i].0) < min_spacing
                && (candidates[j].1 < candidates[i].1
                    || (candidates[j].1 == candidates[i].1 && idx > candidates[i].0))
            {
                keep[j] = false;
            }
        }
    }
    let mut out: Vec<(usize, f64)> = candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect();
    out.sort_by_key(|&(idx, _)| idx);
    out
}

/// Topographic prominence of the local maximum at `idx` in `x`.
fn prominence(x: &[f64], idx: usize) -> f64 {
    let v = x[idx];
    let mut left_min = v;
    for i in (0..idx).rev() {
        if x[i] > v {
            break;
        }
        left_min = left_min.min(x[i]);
    }
    let mut right_min = v;
    for &xi in &x[idx + 1..] {
        if xi > v {
            break;
        }
        right_min = right_min.min(xi);
    }
    v - left_min.max(right_min)
}

fn window_stat(window: &[f64], stat: CpdStat) -> f64 {
    let n = window.len() as f64;
    match stat {
        CpdStat::Mean => window.iter().sum::<f64>() / n,
        CpdStat::Std => {
            let mean = window.iter().sum::<f64>() / n;
            (window.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
        }
        CpdStat::Rms => (window.iter().map(|x| x * x).sum::<f64>() / n).sqrt(),
    }
}

/// Detect change points inside each peak-to-valley span: at every
/// candidate split the score is |stat(right w samples) - stat(left w
/// samples)|; the `n_cp_per_cycle` best splits with score >= threshold
/// survive, returned sorted by index. Ascending (valley-to-peak) spans are
/// skipped: the exhalation pause straddles the valley, and scoring both
/// sides of it would yield mirror-image anchor pairs that devices cannot
/// tell apart. Spans too short for the two windows contribute nothing.
pub fn detect_change_points(s: &Signal, cycles: &[Cycle], cfg: &SyncConfig) -> Result<Vec<ChangePoint>> {
    cfg.validate()?;
    if cycles.is_empty() {
        return Err(Error::parameter("cycle list is empty"));
    }
    let w = (CPD_WINDOW_S * s.rate_hz).round().max(2.0) as usize;
    let mut out = Vec::new();
    for (cycle_ord, cycle) in cycles.iter().enumerate() {
        if cycle.valley_idx < cycle.peak_idx {
            continue;
        }
        let (lo, hi) = cycle.span();
        let hi = hi.min(s.len());
        if hi - lo < 2 * w {
            continue;
        }
        let mut scored: Vec<(usize, f64)> = (lo + w..=hi - w)
            .map(|split| {
                let left = window_stat(&s.samples[split - w..split], cfg.stat);
                let right = window_stat(&s.samples[split..split + w], cfg.stat);
                (split, (right - left).abs())
            })
            .collect();
        // Highest score first; equal scores resolve to the smaller index.
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let mut picked: Vec<ChangePoint> = scored
            .into_iter()
            .take(cfg.n_cp_per_cycle)
            .filter(|&(_, score)| score >= cfg.threshold)
            .map(|(idx, score)| ChangePoint {
                idx,
                score,
                cycle: cycle_ord,
                stat: cfg.stat,
            })
            .collect();
        picked.sort_by_key(|cp| cp.idx);
        out.extend(picked);
    }
    Ok(out)
}

/// Indices of the change points to try as alternatives to `i`, nearest
/// first, earlier first on distance ties.
pub fn candidate_anchors(cps_len: usize, i: usize, n_offset: usize) -> Result<Vec<usize>> {
    if i >= cps_len {
        return Err(Error::parameter(format!(
            "anchor index {} out of range 0..{}",
            i, cps_len
        )));
    }
    let lo = i.saturating_sub(n_offset);
    let hi = (i + n_offset).min(cps_len - 1);
    let mut out: Vec<usize> = (lo..=hi).collect();
    out.sort_by_key(|&j| (j.abs_diff(i), j));
    Ok(out)
}

/// Whether two change-point times fall within the accepted lag.
pub fn within_sync_offset(t_a_ms: f64, t_b_ms: f64, sync_offset_ms: f64) -> bool {
    (t_a_ms - t_b_ms).abs() <= sync_offset_ms
}
