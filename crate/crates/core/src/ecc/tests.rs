use super::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn poly_divides_x_n_plus_1(generator: &[u8], n: usize) -> bool {
    // Long division of x^n + 1 by g over GF(2); remainder must be zero.
    let mut dividend = vec![0u8; n + 1];
    dividend[0] = 1;
    dividend[n] = 1;
    let deg_g = generator.len() - 1;
    for d in (deg_g..=n).rev() {
        if dividend[d] == 1 {
            for (i, &gc) in generator.iter().enumerate() {
                dividend[d - deg_g + i] ^= gc;
            }
        }
    }
    dividend.iter().all(|&c| c == 0)
}

#[test]
fn designed_t_for_standard_pairs() {
    for (n, k, t) in [
        (15, 5, 3),
        (15, 7, 2),
        (15, 11, 1),
        (31, 16, 3),
        (63, 45, 3),
        (127, 64, 10),
        (255, 115, 21),
        (255, 131, 18),
        (255, 123, 19),
    ] {
        let code = make_code(n, k).unwrap();
        assert_eq!(code.t(), t, "({}, {})", n, k);
        assert_eq!(code.generator().len() - 1, n - k);
    }
}

#[test]
fn pair_255_128_supports_sixteen_errors() {
    // 255 - 128 = 127 parity bits sit between the narrow-sense steps at
    // K = 131 and K = 123; the auxiliary-coset fill still has to deliver a
    // capability covering the sixteen errors the parity budget promises.
    let code = make_code(255, 128).unwrap();
    assert!(code.t() >= 16, "t = {}", code.t());
    assert_eq!(code.t(), 18);
}

#[test]
fn generator_divides_x_n_plus_1() {
    for (n, k) in [(15, 5), (15, 7), (127, 64), (255, 115), (255, 128)] {
        let code = make_code(n, k).unwrap();
        assert!(poly_divides_x_n_plus_1(code.generator(), n), "({}, {})", n, k);
    }
}

#[test]
fn invalid_pair_reports_nearest_valid_k() {
    let err = make_code(255, 250).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("247"), "message was: {}", msg);

    let err = make_code(127, 66).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("64"), "message was: {}", msg);

    assert!(make_code(16, 5).is_err());
    assert!(make_code(255, 0).is_err());
    assert!(make_code(255, 255).is_err());
}

#[test]
fn zero_message_encodes_to_zero() {
    let code = make_code(15, 5).unwrap();
    let cw = code.encode(&BitString::zeros(5)).unwrap();
    assert_eq!(cw, BitString::zeros(15));
}

#[test]
fn encoder_is_linear() {
    let code = make_code(127, 64).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let m1 = BitString::random(64, &mut rng);
        let m2 = BitString::random(64, &mut rng);
        let lhs = code
            .encode(&m1)
            .unwrap()
            .xor(&code.encode(&m2).unwrap())
            .unwrap();
        let rhs = code.encode(&m1.xor(&m2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn every_15_5_codeword_has_weight_zero_or_at_least_seven() {
    let code = make_code(15, 5).unwrap();
    for m in 0u32..32 {
        let bits: Vec<u8> = (0..5).map(|i| ((m >> (4 - i)) & 1) as u8).collect();
        let cw = code.encode(&BitString::from_bits(&bits)).unwrap();
        let w = cw.weight();
        assert!(w == 0 || w >= 7, "message {:#07b} gave weight {}", m, w);
    }
}

/// All error patterns of the given weight over `n` positions.
fn error_patterns(n: usize, weight: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..weight).collect();
    if weight == 0 {
        return vec![vec![]];
    }
    loop {
        out.push(idx.clone());
        // Next combination in lexicographic order.
        let mut i = weight;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - weight {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..weight {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[test]
fn corrects_every_pattern_up_to_t_for_15_5() {
    let code = make_code(15, 5).unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    let message = BitString::random(5, &mut rng);
    let codeword = code.encode(&message).unwrap();
    for w in 0..=code.t() {
        for pattern in error_patterns(15, w) {
            let mut received = codeword.clone();
            for &p in &pattern {
                received.flip(p);
            }
            let decoded = code.decode(&received).unwrap();
            assert_eq!(decoded.as_ref(), Some(&message), "pattern {:?}", pattern);
        }
    }
}

#[test]
fn four_flips_never_decode_back_for_15_5() {
    // Weight t+1 must not be silently absorbed as if within capability.
    let code = make_code(15, 5).unwrap();
    let message = BitString::from_bits(&[1, 0, 1, 1, 0]);
    let codeword = code.encode(&message).unwrap();
    for pattern in error_patterns(15, 4) {
        let mut received = codeword.clone();
        for &p in &pattern {
            received.flip(p);
        }
        match code.decode(&received).unwrap() {
            None => {}
            Some(m) => assert_ne!(m, message, "pattern {:?} silently corrected", pattern),
        }
    }
}

#[test]
fn randomized_round_trip_at_t_for_large_codes() {
    let mut rng = StdRng::seed_from_u64(77);
    for (n, k) in [(127, 64), (255, 115), (255, 128)] {
        let code = make_code(n, k).unwrap();
        for _ in 0..200 {
            let message = BitString::random(k, &mut rng);
            let codeword = code.encode(&message).unwrap();
            let mut received = codeword.clone();
            for p in rand::seq::index::sample(&mut rng, n, code.t()) {
                received.flip(p);
            }
            assert_eq!(code.decode(&received).unwrap(), Some(message.clone()));
        }
    }
}

#[test]
fn commit_of_own_codeword_is_zero_block() {
    let code = make_code(15, 5).unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    let r = BitString::random(5, &mut rng);
    let q_a = code.encode(&r).unwrap();
    // Force the same R by replaying the RNG state.
    let mut rng2 = StdRng::seed_from_u64(5);
    let (commitment, r_out) = commit(&code, &q_a, &mut rng2).unwrap();
    assert_eq!(r_out, r);
    assert_eq!(commitment.block, BitString::zeros(15));
}

#[test]
fn recover_with_identical_input_returns_exact_values() {
    let code = make_code(255, 115).unwrap();
    let mut rng = StdRng::seed_from_u64(6);
    let q_a = BitString::random(255, &mut rng);
    let (commitment, r) = commit(&code, &q_a, &mut rng).unwrap();
    let (q_a_prime, r_prime) = recover(&code, &commitment, &q_a).unwrap().unwrap();
    assert_eq!(q_a_prime, q_a);
    assert_eq!(r_prime, r);
}

#[test]
fn recover_succeeds_iff_mismatch_within_t() {
    let code = make_code(127, 64).unwrap();
    let t = code.t();
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let q_a = BitString::random(127, &mut rng);
        let (commitment, _) = commit(&code, &q_a, &mut rng).unwrap();

        let mut q_b = q_a.clone();
        let flips = rng.gen_range(0..=t);
        for p in rand::seq::index::sample(&mut rng, 127, flips) {
            q_b.flip(p);
        }
        let (q_a_prime, _) = recover(&code, &commitment, &q_b).unwrap().unwrap();
        assert_eq!(q_a_prime, q_a);

        let mut q_far = q_a.clone();
        for p in rand::seq::index::sample(&mut rng, 127, t + 5) {
            q_far.flip(p);
        }
        match recover(&code, &commitment, &q_far).unwrap() {
            None => {}
            Some((q, _)) => assert_ne!(q, q_a),
        }
    }
}

#[test]
fn commitment_is_binding_to_the_true_r() {
    // B XOR encode(R) returns Q_A only for the committed R.
    let code = make_code(15, 5).unwrap();
    let mut rng = StdRng::seed_from_u64(8);
    let q_a = BitString::random(15, &mut rng);
    let (commitment, r) = commit(&code, &q_a, &mut rng).unwrap();
    for m in 0u32..32 {
        let bits: Vec<u8> = (0..5).map(|i| ((m >> (4 - i)) & 1) as u8).collect();
        let candidate = BitString::from_bits(&bits);
        let unmasked = commitment
            .block
            .xor(&code.encode(&candidate).unwrap())
            .unwrap();
        assert_eq!(unmasked == q_a, candidate == r);
    }
}

#[test]
fn finalize_key_parity_and_lengths() {
    let mut rng = StdRng::seed_from_u64(9);
    let q_a = BitString::random(255, &mut rng);
    let key = finalize_key(&q_a, KeyLen::L256);
    assert_eq!(key.pre_hash.len(), 256);
    assert_eq!(key.key_bits.len(), 256);
    assert_eq!(key.pre_hash.weight() % 2, 0, "even parity");
    assert_eq!(
        key.pre_hash.bit(255),
        (q_a.weight() % 2) as u8,
        "parity bit set for odd weight"
    );

    let short = finalize_key(&q_a, KeyLen::L128);
    assert_eq!(short.key_bits.len(), 128);
    assert_eq!(short.key_bits, key.key_bits.slice(0..128));

    assert_eq!(finalize_key(&q_a, KeyLen::L256), key, "deterministic");
}

#[test]
fn finalize_key_avalanche() {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..100 {
        let q_a = BitString::random(255, &mut rng);
        let base = finalize_key(&q_a, KeyLen::L256);
        let mut flipped = q_a.clone();
        flipped.flip(rng.gen_range(0..255));
        let other = finalize_key(&flipped, KeyLen::L256);
        let dist = base.key_bits.hamming(&other.key_bits).unwrap();
        assert!(dist >= 90, "avalanche distance only {}", dist);
    }
}
