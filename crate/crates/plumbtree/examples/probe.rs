use plumbtree::gen::{generate, GenMode, GenParams};
use plumbtree::moves::replay;
use plumbtree::reduce::{classify, reduce, DefinitenessClass, ReduceError, ReduceOptions};
use std::time::Instant;

fn main() {
    let start = Instant::now();
    let mut stats = (0usize, 0usize, 0usize, 0usize); // accepted, fallback, exhausted, rejected
    let mut worst = std::time::Duration::ZERO;
    let mut worst_seed = 0u64;
    for seed in 0..300u64 {
        let params = GenParams {
            vertices: 4 + (seed as usize % 7),   // up to 10-vertex seeds
            weight_low: -5,
            weight_high: 5,
            expansions: 4 + (seed as usize % 7), // 4..=10 expansions, harder than spec
            seed: seed.wrapping_mul(0xdeadbeef).wrapping_add(1),
            mode: GenMode::NdSeedPlusExpansions,
        };
        let t = generate(&params).unwrap();
        match classify(&t) {
            DefinitenessClass::NegativeDefinite | DefinitenessClass::WeaklyNegativeDefinite => {}
            _ => { stats.3 += 1; continue; }
        }
        stats.0 += 1;
        let one = Instant::now();
        match reduce(&t, ReduceOptions::default()) {
            Ok(r) => {
                assert_eq!(replay(&t, &r.log).unwrap(), r.output);
                assert_eq!(classify(&r.output), DefinitenessClass::NegativeDefinite);
                if r.used_fallback { stats.1 += 1; }
            }
            Err(ReduceError::FallbackExhausted(_)) => { stats.2 += 1; }
            Err(e) => panic!("unexpected: {e} at seed {seed}"),
        }
        let el = one.elapsed();
        if el > worst { worst = el; worst_seed = seed; }
    }
    println!(
        "accepted {} | fallback {} | exhausted {} | rejected {} | total {:?} | worst {:?} (seed {})",
        stats.0, stats.1, stats.2, stats.3, start.elapsed(), worst, worst_seed
    );
}
