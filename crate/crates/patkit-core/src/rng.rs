//! Counter-based deterministic random values.
//!
//! Every random quantity in the crate is a pure function of `(seed, stream, counter)`,
//! so runs reproduce bit-for-bit regardless of evaluation order or worker count.

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    seed: u64,
    stream: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        CounterRng { seed, stream, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = splitmix64(self.seed ^ splitmix64(self.stream.wrapping_add(self.counter.wrapping_mul(0xd1342543de82ef95))));
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[0, n)` via 128-bit multiply (deterministic, bias below 2^-64).
    pub fn next_below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform choice of +1 or -1.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
