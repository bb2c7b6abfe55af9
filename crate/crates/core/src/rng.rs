//! Counter-based random streams.
//!
//! Every sampled trial draws from its own ChaCha8 stream keyed by
//! `(seed, stream)`. The stream id packs a channel tag and a trial index, so
//! the numbers a trial sees never depend on which worker ran it or in what
//! order trials were scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// Bits reserved for the trial index inside a stream id.
pub const TRIAL_BITS: u32 = 48;

pub fn stream_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream id for trial `trial` on channel `channel` (e.g. one channel per test).
pub fn stream_id(channel: u16, trial: u64) -> u64 {
    debug_assert!(trial < (1u64 << TRIAL_BITS));
    (u64::from(channel) << TRIAL_BITS) | trial
}

pub fn trial_rng(seed: u64, channel: u16, trial: u64) -> TrialRng {
    stream_rng(seed, stream_id(channel, trial))
}
