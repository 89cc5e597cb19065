//! Seed splitting.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by the
//! full tuple `(root seed, purpose, a, b)`. Distinct tuples give distinct
//! 256-bit keys, so streams never overlap and a draw for one slot never
//! depends on how many other slots were drawn before it.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub(crate) type StreamRng = ChaCha12Rng;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Purpose {
    Projection = 1,
    Phase = 2,
    Subset = 3,
    SelectionRows = 4,
    SelectionInit = 5,
    SelectionShuffle = 6,
    Shuffle = 7,
    Init = 8,
    Synth = 9,
    Split = 10,
    Probe = 11,
}

pub(crate) fn stream(root: u64, purpose: Purpose, a: u64, b: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&root.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    key[16..24].copy_from_slice(&a.to_le_bytes());
    key[24..].copy_from_slice(&b.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}
