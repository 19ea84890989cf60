//! Fixtures shared by the criterion benches.

use netph_core::Network;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn random_network(n: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Network::random(&mut rng, n, 0.0, 1.0)
}
