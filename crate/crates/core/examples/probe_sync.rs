use b2p_core::dsp::{preprocess, PreprocessConfig};
use b2p_core::signal::{generate_subject, SubjectParams};
use b2p_core::sync::{detect_change_points, find_cycles, within_sync_offset, SyncConfig};

fn main() {
    for motion in [0.1, 0.05, 0.03] {
        let mut agreements = 0usize;
        let mut total = 0usize;
        let mut deltas: Vec<f64> = Vec::new();
        for seed in 0..20 {
            let p = SubjectParams { seed, motion_noise_level: motion, ..Default::default() };
            let (rip, accel) = generate_subject(&p).unwrap();
            let cfg = PreprocessConfig::default();
            let pre_a = preprocess(&rip, &cfg).unwrap();
            let pre_b = preprocess(&accel, &cfg).unwrap();
            let sync = SyncConfig::default();
            let cps_a = detect_change_points(&pre_a, &find_cycles(&pre_a), &sync).unwrap();
            let cps_b = detect_change_points(&pre_b, &find_cycles(&pre_b), &sync).unwrap();
            for cp in &cps_a {
                let t_a = pre_a.time_ms(cp.idx);
                total += 1;
                let best = cps_b.iter().map(|o| (t_a - pre_b.time_ms(o.idx)).abs()).fold(f64::INFINITY, f64::min);
                deltas.push(best);
                if cps_b.iter().any(|o| within_sync_offset(t_a, pre_b.time_ms(o.idx), sync.sync_offset_ms)) {
                    agreements += 1;
                }
            }
        }
        deltas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pct = |q: f64| deltas[(q * (deltas.len()-1) as f64) as usize];
        println!("motion={:.2}: agree {}/{} = {:.1}%  delta p50={:.0}ms p80={:.0}ms p90={:.0}ms p95={:.0}ms",
            motion, agreements, total, 100.0*agreements as f64/total as f64, pct(0.5), pct(0.8), pct(0.9), pct(0.95));
    }
}
