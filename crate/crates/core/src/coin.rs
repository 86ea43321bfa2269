//! Randomness for the randomized matchers and input constructions.
//!
//! Each consumer draws through this small trait, one call per decision point
//! in arrival order, so a fixed seed replays a run bit-for-bit and tests can
//! inject scripted outcomes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub trait Coin {
    /// Fair coin.
    fn flip(&mut self) -> bool;
    /// True with probability exactly 1/3.
    fn one_in_three(&mut self) -> bool;
}

/// Seeded ChaCha-backed coin used in real runs.
pub struct SeededCoin {
    rng: ChaCha8Rng,
}

impl SeededCoin {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        SeededCoin {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Coin for SeededCoin {
    fn flip(&mut self) -> bool {
        self.rng.gen::<bool>()
    }

    fn one_in_three(&mut self) -> bool {
        self.rng.gen_range(0u32..3) == 0
    }
}

/// Scripted coin for tests; panics if the script runs out.
pub struct ScriptedCoin {
    outcomes: std::collections::VecDeque<bool>,
}

impl ScriptedCoin {
    pub fn new(outcomes: impl IntoIterator<Item = bool>) -> Self {
        ScriptedCoin {
            outcomes: outcomes.into_iter().collect(),
        }
    }
}

impl Coin for ScriptedCoin {
    fn flip(&mut self) -> bool {
        self.outcomes.pop_front().expect("scripted coin exhausted")
    }

    fn one_in_three(&mut self) -> bool {
        self.outcomes.pop_front().expect("scripted coin exhausted")
    }
}
