//! Splittable random streams.
//!
//! Each consumer derives its own ChaCha stream from a master seed plus a
//! list of integer tags (experiment id, epsilon index, replicate index,
//! purpose). Streams depend only on their tags, never on scheduling, so
//! Monte Carlo output is identical for any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A ChaCha stream determined by `(master, tags)`.
pub fn substream(master: u64, tags: &[u64]) -> ChaCha12Rng {
    let mut state = master ^ 0xa076_1d64_78bd_642f;
    // Fold the tag list into the splitmix state, length-prefixed so that
    // distinct tag lists never collide by concatenation.
    let _ = splitmix64(&mut state);
    state ^= tags.len() as u64;
    let mut key = [0u8; 32];
    let mut acc = splitmix64(&mut state);
    for &t in tags {
        state ^= t.wrapping_mul(0xff51_afd7_ed55_8ccd);
        acc ^= splitmix64(&mut state);
    }
    for chunk in key.chunks_mut(8) {
        acc = splitmix64(&mut state) ^ acc.rotate_left(17);
        chunk.copy_from_slice(&acc.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}
