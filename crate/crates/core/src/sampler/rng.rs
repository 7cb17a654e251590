//! Counter-based substreams: every `(seed, index)` owns an independent
//! ChaCha8 stream, so sample `i` can be regenerated without replaying `0..i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
