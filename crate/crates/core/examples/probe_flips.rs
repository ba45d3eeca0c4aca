use b2p_core::dsp::{preprocess, PreprocessConfig};
use b2p_core::signal::{generate_subject, SubjectParams};
use b2p_core::sync::{detect_change_points, find_cycles, SyncConfig};

fn main() {
    let mut deltas = Vec::new();
    for seed in 500..540u64 {
        let p = SubjectParams { seed, ..Default::default() };
        let (rip, accel) = generate_subject(&p).unwrap();
        let cfg = PreprocessConfig::default();
        let pre_a = preprocess(&rip, &cfg).unwrap();
        let pre_b = preprocess(&accel, &cfg).unwrap();
        let sync = SyncConfig::default();
        let cyc_a = find_cycles(&pre_a);
        let cyc_b = find_cycles(&pre_b);
        let cps_a = detect_change_points(&pre_a, &cyc_a, &sync).unwrap();
        let cps_b = detect_change_points(&pre_b, &cyc_b, &sync).unwrap();
        if seed < 503 {
            println!("seed {}: A {} cycles {} cps, B {} cycles {} cps", seed, cyc_a.len(), cps_a.len(), cyc_b.len(), cps_b.len());
        }
        // Pair CPs by ordinal, report time deltas.
        let n = cps_a.len().min(cps_b.len());
        for i in 0..n {
            let d = (pre_a.time_ms(cps_a[i].idx) - pre_b.time_ms(cps_b[i].idx)).abs();
            deltas.push(d);
            if d > 250.0 && deltas.len() < 500 {
                // Look at this flip in detail: cycle ordinals and scores.
                let ca = &cps_a[i]; let cb = &cps_b[i];
                if seed < 510 {
                    println!("  seed {} ord {}: A idx {} t={:.0}ms cyc{} score {:.3} | B idx {} t={:.0}ms cyc{} score {:.3}",
                        seed, i, ca.idx, pre_a.time_ms(ca.idx), ca.cycle, ca.score, cb.idx, pre_b.time_ms(cb.idx), cb.cycle, cb.score);
                }
            }
        }
    }
    deltas.sort_by(|a,b| a.partial_cmp(b).unwrap());
    let n = deltas.len();
    println!("{} ordinal-paired CPs: p50={:.0} p90={:.0} p95={:.0} p99={:.0} max={:.0} (ms), >250ms: {}",
        n, deltas[n/2], deltas[n*9/10], deltas[n*95/100], deltas[n*99/100], deltas[n-1],
        deltas.iter().filter(|&&d| d > 250.0).count());
}
