//! Counter-based randomness.
//!
//! Every random quantity in the crate is a pure function of a small tuple of
//! integers: a user-facing seed plus logical coordinates such as the step
//! index and the particle index. There is no mutable generator state, so
//! parallel and serial execution orders draw identical numbers, and any
//! single draw can be reproduced in isolation. The hash behind it is the
//! SplitMix64 finalizer, which passes through a full 64-bit avalanche per
//! word.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use core::f64::consts::TAU;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const COMBINE_IV: u64 = 0x243f_6a88_85a3_08d3;
const LANE_A: u64 = 0xd1b5_4a32_d192_ed03;
const LANE_B: u64 = 0x8cb9_2ba7_2f3d_8dd7;

/// 2^-53, the spacing used to map 53 high bits onto the unit interval.
const UNIT: f64 = 1.0 / 9_007_199_254_740_992.0;

/// SplitMix64 finalizer: a bijective avalanche on 64 bits.
#[inline]
pub fn mix(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a word sequence into one 64-bit value. Order-sensitive, and every
/// input bit avalanches through at least one `mix`.
pub fn combine(words: &[u64]) -> u64 {
    let mut h = COMBINE_IV;
    for &w in words {
        h = mix(h ^ w).wrapping_add(GOLDEN_GAMMA);
    }
    mix(h)
}

/// Uniform draw on `[0, 1)` keyed by `words`.
pub fn uniform(words: &[u64]) -> f64 {
    (combine(words) >> 11) as f64 * UNIT
}

/// Standard normal draw keyed by `words`, via Box–Muller on two lanes
/// derived from the same counter.
pub fn normal(words: &[u64]) -> f64 {
    let h = combine(words);
    let a = mix(h ^ LANE_A);
    let b = mix(h ^ LANE_B);
    // (0, 1] so the logarithm stays finite.
    let u1 = ((a >> 11) + 1) as f64 * UNIT;
    let u2 = (b >> 11) as f64 * UNIT;
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}
