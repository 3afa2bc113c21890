//! Seeded generators for property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formal_group::FormalGroupLaw;
use crate::gseries::GSeries;
use crate::scalar::{qr, Q};
use crate::series::LaurentSeries;

pub const DEFAULT_SEED: u64 = 20240611;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// `n/d` with `|n| <= 3`, `1 <= d <= 3`.
    pub fn small_q(&mut self) -> Q {
        qr(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=3))
    }

    /// `x + c_2 x^2 + ... + O(x^order)`.
    pub fn gseries(&mut self, order: i64) -> GSeries {
        let mut coeffs = vec![(1, qr(1, 1))];
        for k in 2..order {
            coeffs.push((k, self.small_q()));
        }
        GSeries::new(LaurentSeries::new(order, coeffs)).expect("leading coefficient is one")
    }

    /// `F_f` for a random logarithm `f`.
    pub fn group(&mut self, order: i64) -> Result<FormalGroupLaw> {
        let f = self.gseries(order);
        FormalGroupLaw::from_log(&f, order)
    }

    /// Exact Laurent polynomial with one to three terms in `[lo, hi]`.
    pub fn laurent(&mut self, lo: i64, hi: i64) -> LaurentSeries {
        let n = self.rng.gen_range(1..=3);
        let terms: Vec<(i64, Q)> = (0..n).map(|_| (self.rng.gen_range(lo..=hi), self.small_q())).collect();
        LaurentSeries::exact(terms)
    }

    /// Truncated Laurent series with low exponent in `[lo, 0]`.
    pub fn truncated(&mut self, lo: i64, order: i64) -> LaurentSeries {
        let low = self.rng.gen_range(lo..=0);
        LaurentSeries::new(order, (low..order).map(|e| (e, self.small_q())).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a: Vec<_> = (0..5).map(|_| Gen::new(7).gseries(6)).collect();
        let b: Vec<_> = (0..5).map(|_| Gen::new(7).gseries(6)).collect();
        assert_eq!(a, b);
        let mut g = Gen::new(7);
        assert_ne!(g.gseries(6), g.gseries(6));
    }
}
