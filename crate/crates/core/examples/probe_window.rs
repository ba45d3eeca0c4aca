use b2p_core::dsp::{preprocess, PreprocessConfig};
use b2p_core::quantizer::{fit_lloyd_max, quantize_encode, select_key_bits, Coding, DensityInput, SegmentPolicy};
use b2p_core::signal::{generate_subject, SubjectParams};
use b2p_core::sync::{detect_change_points, find_cycles, SyncConfig};

fn material(seed: u64, accel: bool) -> Vec<(usize, b2p_core::BitString, f64)> {
    let p = SubjectParams { seed, ..Default::default() };
    let (rip, acc) = generate_subject(&p).unwrap();
    let s = if accel { acc } else { rip };
    let pre = preprocess(&s, &PreprocessConfig::default()).unwrap();
    let cycles = find_cycles(&pre);
    let cps = detect_change_points(&pre, &cycles, &SyncConfig::default()).unwrap();
    let spec = fit_lloyd_max(DensityInput::Samples(&pre.samples), 2, Coding::Gray).unwrap();
    println!("seed {} boundaries {:?}", seed, spec.boundaries.iter().map(|b| (b*100.0).round()/100.0).collect::<Vec<_>>());
    let bits = quantize_encode(&pre, &spec).unwrap();
    cps.iter().filter_map(|cp| {
        select_key_bits(&bits, cp.idx, 255, 2, &SegmentPolicy::default()).ok()
            .map(|m| (cp.idx, m, pre.time_ms(cp.idx)))
    }).collect()
}

fn main() {
    let ma = material(200 + 2, false);
    let mb = material(300 + 2, true);
    let mut worst = (0.0f64, 0usize, 0usize);
    for (i, (_, qa, _)) in ma.iter().enumerate() {
        for (j, (_, qb, _)) in mb.iter().enumerate() {
            let bar = 100.0 * (1.0 - qa.hamming(qb).unwrap() as f64 / 255.0);
            if bar > worst.0 { worst = (bar, i, j); }
        }
    }
    println!("max cross BAR {:.1}% at A[{}] B[{}]", worst.0, worst.1, worst.2);
    let qa = &ma[worst.1].1;
    let qb = &mb[worst.2].1;
    println!("A: {}", qa);
    println!("B: {}", qb);
    let ones_a = qa.weight();
    println!("A weight {}/255, B weight {}/255", ones_a, qb.weight());
}
