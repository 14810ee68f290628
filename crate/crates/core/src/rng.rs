//! Counter-based random substreams.
//!
//! Every random decision is keyed by `(seed, domain, index)` and, for
//! shots, an additional stream number. Results therefore do not depend on
//! the order or the thread in which plan entries are processed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for; part of the key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Draw = 1,
    Shot = 2,
}

fn key(seed: u64, domain: u64, purpose: Purpose, index: u64) -> [u8; 32] {
    let mut k = [0u8; 32];
    k[0..8].copy_from_slice(&seed.to_le_bytes());
    k[8..16].copy_from_slice(&domain.to_le_bytes());
    k[16..24].copy_from_slice(&index.to_le_bytes());
    k[24] = purpose as u8;
    k[25..32].copy_from_slice(b"gatefid");
    k
}

/// Substream `(seed, domain, l)` used to draw plan entry `l`.
pub fn draw_stream(seed: u64, domain: u64, l: u64) -> ChaCha8Rng {
    ChaCha8Rng::from_seed(key(seed, domain, Purpose::Draw, l))
}

/// Substream `(seed, domain, l, j)` used for shot `j` of plan entry `l`.
pub fn shot_stream(seed: u64, domain: u64, l: u64, j: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key(seed, domain, Purpose::Shot, l));
    rng.set_stream(j);
    rng
}
