//! Counter-based random numbers.
//!
//! Every draw is a pure function of a key and a counter, so streams can be
//! split per particle (or per array index) and replayed in any order. The
//! mixing function is the SplitMix64 finalizer applied to a key/counter
//! combination.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a sequence of words into a single stream key.
pub fn stream_key(words: &[u64]) -> u64 {
    words.iter().fold(0x6a09_e667_f3bc_c909, |acc, &w| {
        mix64(acc ^ mix64(w.wrapping_add(GOLDEN)))
    })
}

/// Stateless draw: the `counter`-th 64-bit value of stream `key`.
#[inline]
pub fn draw(key: u64, counter: u64) -> u64 {
    mix64(key ^ mix64(counter.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

/// Maps a 64-bit word to `[0, bound)` by widening multiply.
#[inline]
pub fn bounded(word: u64, bound: u64) -> u64 {
    ((word as u128 * bound as u128) >> 64) as u64
}

/// Maps a 64-bit word to a double in `[0, 1)` using its top 53 bits.
#[inline]
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A cursor over one counter-based stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(key: u64, counter: u64) -> Self {
        Self { key, counter }
    }

    pub fn from_words(words: &[u64]) -> Self {
        Self::new(stream_key(words), 0)
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = draw(self.key, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform on `(0, 1]`, safe to take the logarithm of.
    #[inline]
    pub fn next_open_f64(&mut self) -> f64 {
        1.0 - self.next_f64()
    }

    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        bounded(self.next_u64(), bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_from_counter() {
        let mut a = CounterRng::new(42, 0);
        let first: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let mut b = CounterRng::new(42, 5);
        assert_eq!(b.next_u64(), first[5]);
    }

    #[test]
    fn unit_interval_bounds() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
        assert_eq!(bounded(u64::MAX, 10), 9);
        assert_eq!(bounded(0, 10), 0);
    }

    #[test]
    fn mean_is_one_half() {
        let mut rng = CounterRng::from_words(&[7, 1]);
        let n = 200_000;
        let mean = (0..n).map(|_| rng.next_f64()).sum::<f64>() / n as f64;
        // sigma of the mean is sqrt(1/12 / n) ~ 6.5e-4
        assert!((mean - 0.5).abs() < 4.0 * 6.5e-4, "{mean}");
    }

    #[test]
    fn distinct_keys_diverge() {
        assert_ne!(stream_key(&[1, 2]), stream_key(&[2, 1]));
        assert_ne!(draw(1, 0), draw(2, 0));
    }
}
