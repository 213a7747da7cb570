use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide random stream type.
pub type StreamRng = ChaCha8Rng;

/// Independent stream `stream` of the root `seed`.
///
/// Streams of the same seed never overlap, so per-trial generators built
/// from `(seed, trial)` give results that do not depend on scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
