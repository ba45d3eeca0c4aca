use b2p_core::dsp::{preprocess, PreprocessConfig};
use b2p_core::protocol::{AttemptOutcome, Channel, Role, SessionConfig, SessionDriver};
use b2p_core::signal::{generate_subject, SubjectParams};

fn run_pair(pa: &SubjectParams, pb: Option<&SubjectParams>, session_seed: u64) -> Vec<(AttemptOutcome, f64)> {
    let (rip_a, accel_a) = generate_subject(pa).unwrap();
    let (rip, accel) = match pb {
        None => (rip_a, accel_a),
        Some(pb) => {
            let (_, accel_b) = generate_subject(pb).unwrap();
            (rip_a, accel_b)
        }
    };
    let cfg = PreprocessConfig::default();
    let pre_a = preprocess(&rip, &cfg).unwrap();
    let pre_b = preprocess(&accel, &cfg).unwrap();
    let cfg_a = SessionConfig { role: Role::Initiator, seed: session_seed, session_id: 42, ..Default::default() };
    let cfg_b = SessionConfig { role: Role::Responder, session_id: 42, ..Default::default() };
    let driver = SessionDriver::new(&pre_a, &pre_b, cfg_a.clone(), cfg_b).unwrap();
    let mut ch = Channel::reliable(cfg_a.commit_payload_len());
    driver.run_all(&mut ch).into_iter().map(|r| (r.outcome, r.best_bar_pct)).collect()
}

fn main() {
    // Same-subject failure breakdown.
    let mut tally = std::collections::BTreeMap::new();
    let mut total = 0;
    for trial in 0..20u64 {
        let p = SubjectParams { seed: 500 + trial, ..Default::default() };
        for (outcome, _) in run_pair(&p, None, 7 + trial) {
            total += 1;
            *tally.entry(format!("{:?}", outcome).split(' ').next().unwrap().trim_end_matches('{').to_string()).or_insert(0usize) += 1;
        }
    }
    println!("legit breakdown over {} attempts: {:?}", total, tally);

    // Cross-subject with population-sampled rates (harness model).
    let mut fp = 0; let mut n = 0; let mut worst: f64 = 0.0;
    for trial in 0..40u64 {
        use rand::{Rng, SeedableRng};
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(900 + trial);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(7900 + trial);
        let pa = SubjectParams { seed: 200 + trial, breaths_per_min: r1.gen_range(10.0..22.0), ..Default::default() };
        let pb = SubjectParams { seed: 300 + trial, breaths_per_min: r2.gen_range(10.0..22.0), ..Default::default() };
        for (outcome, bar) in run_pair(&pa, Some(&pb), 3 + trial) {
            n += 1;
            worst = worst.max(bar);
            if matches!(outcome, AttemptOutcome::Success{..}) { fp += 1; }
        }
    }
    println!("cross sampled-rates: {} fp / {} attempts, worst BAR {:.1}%", fp, n, worst);

    // Cross-subject at identical base rates (hardest case).
    let mut fp = 0; let mut n = 0; let mut worst: f64 = 0.0;
    for trial in 0..40u64 {
        let pa = SubjectParams { seed: 200 + trial, ..Default::default() };
        let pb = SubjectParams { seed: 300 + trial, ..Default::default() };
        for (outcome, bar) in run_pair(&pa, Some(&pb), 3 + trial) {
            n += 1;
            worst = worst.max(bar);
            if matches!(outcome, AttemptOutcome::Success{..}) { fp += 1; }
        }
    }
    println!("cross equal-rates: {} fp / {} attempts, worst BAR {:.1}%", fp, n, worst);
}
